//! hankelscope: moments, Hankel eigenvalues, decay scans, and
//! geometry/spectrum cross-checks for complete Reinhardt domains in C².
//!
//! Exit codes: 0 success, 1 usage/hypothesis/i-o errors, 2 when `check`
//! finds a geometry/spectrum disagreement.

use hankelscope_core::{
    decay_scan, hankel_eigenvalue, jsonio, probe::DecayReport, theorem_check, Error, GammaReport,
    MomentTable, MultiIndex, PolySymbol, ProbeParams, ScanThresholds, ShadowDomain, Verdict,
};
use serde::Serialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

const USAGE: &str = "\
usage: hankelscope <subcommand> <domain.json> [options]

subcommands:
  geometry  completeness/convexity checks and boundary disk detection
  moment    one log-moment            (requires --beta j,k)
  eig       one operator eigenvalue   (requires --alpha j,k --n n1,n2)
  probe     shell-sup series of one monomial symbol (requires --alpha)
  scan      decay scan of a polynomial symbol       (requires --symbol)
  check     geometry vs spectrum cross-check        (requires --symbol)
  report    geometry plus scan plus cross-check     (--symbol optional)

options:
  --symbol PATH       symbol spec file {\"terms\":[{\"j\":..,\"k\":..,\"re\":..,\"im\":..}]}
  --beta j,k          moment index
  --alpha j,k         symbol exponent pair
  --n n1,n2           basis index
  --nmin N --nmax N   shell range (defaults 20, 200)
  --tau-decay X --decay-ratio X --tau-floor X --var-tol X
                      classifier thresholds (normalized at nmin)
  --flat-eps X --len-eps X
                      boundary-flat detection tolerances
  --format json|csv   output format (csv: probe and scan only)
  --out PATH          write the report to PATH instead of stdout
  --cache-dir PATH    moment cache directory
                      (default: $HANKELSCOPE_CACHE, else a user data dir)

exit codes: 0 ok; 1 usage, parse, i/o, or hypothesis error; 2 check disagreement
";

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Subcommand {
    Geometry,
    Moment,
    Eig,
    Probe,
    Scan,
    Check,
    Report,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum OutputFormat {
    Json,
    Csv,
}

/// Parsed invocation.
struct CommandRequest {
    subcommand: Subcommand,
    domain_path: PathBuf,
    symbol_path: Option<PathBuf>,
    beta: Option<MultiIndex>,
    alpha: Option<MultiIndex>,
    n: Option<MultiIndex>,
    n_min: u32,
    n_max: u32,
    thresholds: ScanThresholds,
    flat_eps: Option<f64>,
    len_eps: Option<f64>,
    format: OutputFormat,
    out: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run(&args));
}

fn run(args: &[String]) -> i32 {
    if args.is_empty() || matches!(args[0].as_str(), "-h" | "--help" | "help") {
        print!("{USAGE}");
        return if args.is_empty() { 1 } else { 0 };
    }
    match parse_request(args) {
        Ok(request) => run_command(&request),
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!("run `hankelscope --help` for usage");
            1
        }
    }
}

fn parse_request(args: &[String]) -> Result<CommandRequest, String> {
    let subcommand = match args[0].as_str() {
        "geometry" => Subcommand::Geometry,
        "moment" => Subcommand::Moment,
        "eig" => Subcommand::Eig,
        "probe" => Subcommand::Probe,
        "scan" => Subcommand::Scan,
        "check" => Subcommand::Check,
        "report" => Subcommand::Report,
        other => return Err(format!("unknown subcommand {other:?}")),
    };

    let mut request = CommandRequest {
        subcommand,
        domain_path: PathBuf::new(),
        symbol_path: None,
        beta: None,
        alpha: None,
        n: None,
        n_min: 20,
        n_max: 200,
        thresholds: ScanThresholds::default(),
        flat_eps: None,
        len_eps: None,
        format: OutputFormat::Json,
        out: None,
        cache_dir: None,
    };

    let mut positional: Vec<&str> = Vec::new();
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        if let Some(flag) = arg.strip_prefix("--") {
            let (name, inline) = match flag.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (flag, None),
            };
            let mut value = || -> Result<String, String> {
                inline
                    .clone()
                    .or_else(|| it.next().cloned())
                    .ok_or_else(|| format!("flag --{name} expects a value"))
            };
            match name {
                "symbol" => request.symbol_path = Some(PathBuf::from(value()?)),
                "beta" => request.beta = Some(parse_pair(&value()?, "beta")?),
                "alpha" => request.alpha = Some(parse_pair(&value()?, "alpha")?),
                "n" => request.n = Some(parse_pair(&value()?, "n")?),
                "nmin" => request.n_min = parse_u32(&value()?, "nmin")?,
                "nmax" => request.n_max = parse_u32(&value()?, "nmax")?,
                "tau-decay" => request.thresholds.tau_decay = parse_pos(&value()?, "tau-decay")?,
                "decay-ratio" => {
                    request.thresholds.decay_ratio = parse_pos(&value()?, "decay-ratio")?
                }
                "tau-floor" => request.thresholds.tau_floor = parse_pos(&value()?, "tau-floor")?,
                "var-tol" => request.thresholds.var_tol = parse_pos(&value()?, "var-tol")?,
                "flat-eps" => request.flat_eps = Some(parse_pos(&value()?, "flat-eps")?),
                "len-eps" => request.len_eps = Some(parse_pos(&value()?, "len-eps")?),
                "out" => request.out = Some(PathBuf::from(value()?)),
                "cache-dir" => request.cache_dir = Some(PathBuf::from(value()?)),
                "format" => {
                    request.format = match value()?.as_str() {
                        "json" => OutputFormat::Json,
                        "csv" => OutputFormat::Csv,
                        other => return Err(format!("unknown format {other:?} (json or csv)")),
                    }
                }
                other => return Err(format!("unknown flag --{other}")),
            }
        } else {
            positional.push(arg);
        }
    }

    match positional.as_slice() {
        [domain] => request.domain_path = PathBuf::from(domain),
        [] => return Err("missing domain spec path".into()),
        more => return Err(format!("unexpected extra arguments: {more:?}")),
    }

    // per-subcommand required options
    match subcommand {
        Subcommand::Moment if request.beta.is_none() => Err("moment requires --beta j,k".into()),
        Subcommand::Eig if request.alpha.is_none() || request.n.is_none() => {
            Err("eig requires --alpha j,k and --n n1,n2".into())
        }
        Subcommand::Probe if request.alpha.is_none() => Err("probe requires --alpha j,k".into()),
        Subcommand::Scan | Subcommand::Check if request.symbol_path.is_none() => {
            Err(format!("{} requires --symbol PATH", args[0]))
        }
        _ if request.n_min >= request.n_max => Err(format!(
            "need nmin < nmax, got {} and {}",
            request.n_min, request.n_max
        )),
        _ if request.format == OutputFormat::Csv
            && !matches!(subcommand, Subcommand::Probe | Subcommand::Scan) =>
        {
            Err("csv output is only available for probe and scan".into())
        }
        _ => Ok(request),
    }
}

fn parse_pair(text: &str, name: &str) -> Result<MultiIndex, String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("--{name} expects two comma-separated integers"))?;
    let a = a
        .trim()
        .parse::<u32>()
        .map_err(|_| format!("--{name}: bad integer {a:?}"))?;
    let b = b
        .trim()
        .parse::<u32>()
        .map_err(|_| format!("--{name}: bad integer {b:?}"))?;
    Ok(MultiIndex::new(a, b))
}

fn parse_u32(text: &str, name: &str) -> Result<u32, String> {
    text.trim()
        .parse::<u32>()
        .map_err(|_| format!("--{name}: bad integer {text:?}"))
}

fn parse_pos(text: &str, name: &str) -> Result<f64, String> {
    let v = text
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("--{name}: bad number {text:?}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("--{name} must be positive and finite"))
    }
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

fn run_command(request: &CommandRequest) -> i32 {
    match execute(request) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn execute(request: &CommandRequest) -> Result<i32, Error> {
    let domain_text = std::fs::read_to_string(&request.domain_path)?;
    let domain = jsonio::parse_domain_spec(&domain_text)?;

    let symbol = match &request.symbol_path {
        Some(path) => Some(PolySymbol::from_spec_str(&std::fs::read_to_string(path)?)),
        None => None,
    }
    .transpose()?;

    match request.subcommand {
        Subcommand::Geometry => {
            let output = geometry_output(&domain, request)?;
            emit(request, &jsonio::to_json_string(&output)?)?;
            Ok(0)
        }
        Subcommand::Moment => {
            let table = open_table(&domain, request);
            let beta = request.beta.expect("validated");
            let log_moment = table.log_moment(beta)?;
            table.flush()?;
            let output = MomentOutput {
                domain_hash: domain.cache_key(),
                beta: [beta.a1, beta.a2],
                log_moment,
                moment: log_moment.exp(),
            };
            emit(request, &jsonio::to_json_string(&output)?)?;
            Ok(0)
        }
        Subcommand::Eig => {
            let table = open_table(&domain, request);
            let alpha = request.alpha.expect("validated");
            let n = request.n.expect("validated");
            let eigenvalue = hankel_eigenvalue(&table, alpha, n)?;
            table.flush()?;
            let output = EigOutput {
                domain_hash: domain.cache_key(),
                alpha: [alpha.a1, alpha.a2],
                n: [n.a1, n.a2],
                eigenvalue,
            };
            emit(request, &jsonio::to_json_string(&output)?)?;
            Ok(0)
        }
        Subcommand::Probe => {
            let table = open_table(&domain, request);
            let alpha = request.alpha.expect("validated");
            warn_if_heavy(1, request);
            let monomial = PolySymbol::monomial(alpha, num_complex_one());
            let scan = decay_scan(
                &table,
                &monomial,
                request.n_min,
                request.n_max,
                request.thresholds,
            )?;
            table.flush()?;
            let series = &scan.terms[0];
            match request.format {
                OutputFormat::Json => {
                    let output = ProbeOutput {
                        domain_hash: domain.cache_key(),
                        alpha: [alpha.a1, alpha.a2],
                        n_min: request.n_min,
                        n_max: request.n_max,
                        shell_sup: series.shell_sup.clone(),
                        verdict: series.verdict,
                    };
                    emit(request, &jsonio::to_json_string(&output)?)?;
                }
                OutputFormat::Csv => emit(request, &scan_csv(&scan))?,
            }
            Ok(0)
        }
        Subcommand::Scan => {
            let symbol = symbol.expect("validated");
            let table = open_table(&domain, request);
            warn_if_heavy(symbol.num_terms(), request);
            let scan = decay_scan(
                &table,
                &symbol,
                request.n_min,
                request.n_max,
                request.thresholds,
            )?;
            table.flush()?;
            match request.format {
                OutputFormat::Json => {
                    let output = ScanOutput {
                        domain_hash: domain.cache_key(),
                        domain: echo(&jsonio::domain_spec_string(&domain)),
                        symbol: echo(&symbol.to_spec_string()),
                        scan,
                    };
                    emit(request, &jsonio::to_json_string(&output)?)?;
                }
                OutputFormat::Csv => emit(request, &scan_csv(&scan))?,
            }
            Ok(0)
        }
        Subcommand::Check => {
            let symbol = symbol.expect("validated");
            let table = open_table(&domain, request);
            warn_if_heavy(symbol.num_terms(), request);
            let consistency = theorem_check(&table, &symbol, &probe_params(request))?;
            table.flush()?;
            let agreement = consistency.agreement;
            let output = CheckOutput {
                domain_hash: domain.cache_key(),
                domain: echo(&jsonio::domain_spec_string(&domain)),
                symbol: echo(&symbol.to_spec_string()),
                consistency,
            };
            emit(request, &jsonio::to_json_string(&output)?)?;
            Ok(if agreement { 0 } else { 2 })
        }
        Subcommand::Report => {
            let geometry = geometry_output(&domain, request)?;
            let (scan, consistency, consistency_note) = match &symbol {
                None => (None, None, Some("no symbol given".to_string())),
                Some(symbol) => {
                    let table = open_table(&domain, request);
                    warn_if_heavy(symbol.num_terms(), request);
                    let scan = decay_scan(
                        &table,
                        symbol,
                        request.n_min,
                        request.n_max,
                        request.thresholds,
                    )?;
                    let (consistency, note) =
                        match theorem_check(&table, symbol, &probe_params(request)) {
                            Ok(c) => (Some(c), None),
                            Err(Error::HypothesisViolation(msg)) => (None, Some(msg)),
                            Err(other) => return Err(other),
                        };
                    table.flush()?;
                    (Some(scan), consistency, note)
                }
            };
            let output = ReportOutput {
                geometry,
                symbol: symbol.as_ref().map(|s| echo(&s.to_spec_string())),
                scan,
                consistency,
                consistency_note,
            };
            emit(request, &jsonio::to_json_string(&output)?)?;
            Ok(0)
        }
    }
}

fn num_complex_one() -> hankelscope_core::num_complex::Complex64 {
    hankelscope_core::num_complex::Complex64::new(1.0, 0.0)
}

fn probe_params(request: &CommandRequest) -> ProbeParams {
    ProbeParams {
        n_min: request.n_min,
        n_max: request.n_max,
        thresholds: request.thresholds,
        flat_eps: request.flat_eps,
        len_eps: request.len_eps,
    }
}

fn warn_if_heavy(num_terms: usize, request: &CommandRequest) {
    let bound = DecayReport::evaluation_bound(num_terms.max(1), request.n_min, request.n_max);
    if bound > 10_000_000 {
        eprintln!(
            "warning: scan will perform up to {bound} eigenvalue evaluations; \
             consider a smaller --nmax"
        );
    }
}

// ---------------------------------------------------------------------------
// outputs
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GeometryOutput {
    domain: Value,
    domain_hash: String,
    r1_max: f64,
    r2_max: f64,
    complete: bool,
    convex: bool,
    gamma: Option<GammaReport>,
}

#[derive(Serialize)]
struct MomentOutput {
    domain_hash: String,
    beta: [u32; 2],
    log_moment: f64,
    moment: f64,
}

#[derive(Serialize)]
struct EigOutput {
    domain_hash: String,
    alpha: [u32; 2],
    n: [u32; 2],
    eigenvalue: f64,
}

#[derive(Serialize)]
struct ProbeOutput {
    domain_hash: String,
    alpha: [u32; 2],
    n_min: u32,
    n_max: u32,
    shell_sup: Vec<f64>,
    verdict: Verdict,
}

#[derive(Serialize)]
struct ScanOutput {
    domain_hash: String,
    domain: Value,
    symbol: Value,
    scan: DecayReport,
}

#[derive(Serialize)]
struct CheckOutput {
    domain_hash: String,
    domain: Value,
    symbol: Value,
    consistency: hankelscope_core::ConsistencyReport,
}

#[derive(Serialize)]
struct ReportOutput {
    geometry: GeometryOutput,
    symbol: Option<Value>,
    scan: Option<DecayReport>,
    consistency: Option<hankelscope_core::ConsistencyReport>,
    consistency_note: Option<String>,
}

fn geometry_output(
    domain: &ShadowDomain,
    request: &CommandRequest,
) -> Result<GeometryOutput, Error> {
    let complete = domain.check_complete();
    let gamma = if complete {
        Some(match (request.flat_eps, request.len_eps) {
            (None, None) => domain.detect_gamma_default()?,
            (f, l) => domain.detect_gamma(
                f.unwrap_or(hankelscope_core::domain::DEFAULT_FLAT_EPS_SCALE * domain.r2_max()),
                l.unwrap_or(hankelscope_core::domain::DEFAULT_LEN_EPS_SCALE * domain.r1_max()),
            )?,
        })
    } else {
        None
    };
    Ok(GeometryOutput {
        domain: echo(&jsonio::domain_spec_string(domain)),
        domain_hash: domain.cache_key(),
        r1_max: domain.r1_max(),
        r2_max: domain.r2_max(),
        complete,
        convex: domain.check_convex(),
        gamma,
    })
}

/// Re-parse a canonical spec string so it nests as a JSON object
/// (keys serialize alphabetically, which keeps the output stable).
fn echo(spec: &str) -> Value {
    serde_json::from_str(spec).expect("canonical spec strings are valid JSON")
}

fn scan_csv(report: &DecayReport) -> String {
    let mut out = String::from("N,term_j,term_k,shell_sup\n");
    for (i, n) in (report.n_min..=report.n_max).enumerate() {
        for term in &report.terms {
            out.push_str(&format!(
                "{n},{},{},{}\n",
                term.j, term.k, term.shell_sup[i]
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// cache and output plumbing
// ---------------------------------------------------------------------------

fn resolve_cache_dir(request: &CommandRequest) -> Option<PathBuf> {
    if let Some(dir) = &request.cache_dir {
        return Some(dir.clone());
    }
    if let Ok(dir) = std::env::var("HANKELSCOPE_CACHE") {
        if !dir.is_empty() {
            return Some(PathBuf::from(dir));
        }
    }
    let base = std::env::var_os("XDG_DATA_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".local/share")))?;
    Some(base.join("hankelscope"))
}

/// Attach the moment cache when possible; fall back to in-memory on any
/// cache problem so computations still run.
fn open_table(domain: &ShadowDomain, request: &CommandRequest) -> MomentTable {
    if let Some(dir) = resolve_cache_dir(request) {
        let attach = || -> Result<MomentTable, Error> {
            std::fs::create_dir_all(&dir)?;
            let path = dir.join(format!("{}.moments", domain.cache_key()));
            MomentTable::with_cache_file(domain.clone(), &path)
        };
        match attach() {
            Ok(table) => return table,
            Err(err) => eprintln!("warning: moment cache disabled: {err}"),
        }
    }
    MomentTable::new(domain.clone())
}

fn emit(request: &CommandRequest, body: &str) -> Result<(), Error> {
    let mut text = body.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &request.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(args: &[&str]) -> Result<CommandRequest, String> {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        parse_request(&owned)
    }

    #[test]
    fn parses_flags_and_positional() {
        let r = request(&[
            "scan",
            "d.json",
            "--symbol",
            "f.json",
            "--nmin",
            "30",
            "--nmax=90",
            "--tau-decay",
            "0.2",
            "--format",
            "csv",
        ])
        .unwrap();
        assert_eq!(r.subcommand, Subcommand::Scan);
        assert_eq!(r.domain_path, PathBuf::from("d.json"));
        assert_eq!(r.n_min, 30);
        assert_eq!(r.n_max, 90);
        assert_eq!(r.thresholds.tau_decay, 0.2);
        assert_eq!(r.format, OutputFormat::Csv);
    }

    #[test]
    fn missing_required_options_are_errors() {
        assert!(request(&["moment", "d.json"]).is_err());
        assert!(request(&["eig", "d.json", "--alpha", "1,0"]).is_err());
        assert!(request(&["scan", "d.json"]).is_err());
        assert!(request(&["probe", "d.json"]).is_err());
        assert!(
            request(&["scan", "d.json", "--symbol", "f.json", "--nmin", "50", "--nmax", "40"])
                .is_err()
        );
        assert!(request(&["geometry"]).is_err());
        assert!(request(&["geometry", "d.json", "--format", "csv"]).is_err());
        assert!(request(&["frobnicate", "d.json"]).is_err());
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("3,7", "beta").unwrap(), MultiIndex::new(3, 7));
        assert_eq!(
            parse_pair(" 1 , 0 ", "beta").unwrap(),
            MultiIndex::new(1, 0)
        );
        assert!(parse_pair("3", "beta").is_err());
        assert!(parse_pair("-1,0", "beta").is_err());
    }
}
