//! Monomial moments M(β) = ||z^β||²_{L²(Ω)} in log space.
//!
//! Writing each coordinate in polar form reduces the 4D volume integral over a
//! complete Reinhardt domain to its shadow:
//!
//!   M(β) = 4π² ∫ x^(2β₁+1) τ(x)^(2β₂+2) / (2β₂+2) dx   over x in [0, R1_max],
//!
//! where τ is the |z₂|-extent profile. The 4π² factor comes from the two polar
//! angle integrals; no further normalization of the Lebesgue measure is
//! applied. Presets use exact closed forms, polygon profiles use per-segment
//! Gauss–Legendre of exactly matched degree (the integrand is a polynomial on
//! each linear segment). Everything is computed and stored as natural logs:
//! M(β) itself underflows around |β| ~ 150 on contracted domains, while the
//! operator formulas only ever need log differences.

use crate::domain::{ShadowDomain, ShadowKind};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::numeric::{log_sum_exp, KahanSum};
use crate::quad;
use num_complex::Complex64;
use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::{Mutex, RwLock};

const CACHE_VERSION: u32 = 1;

/// ln(4π²)
fn ln_four_pi_sq() -> f64 {
    (4.0f64).ln() + 2.0 * std::f64::consts::PI.ln()
}

/// ln(π²)
fn ln_pi_sq() -> f64 {
    2.0 * std::f64::consts::PI.ln()
}

/// Exact log-moment for the preset kinds.
///
/// Bidisk(r, s):  M = π² r^(2β₁+2) s^(2β₂+2) / ((β₁+1)(β₂+1))
/// Ball(R):       M = π² R^(2|β|+4) β₁! β₂! / (β₁+β₂+2)!
/// Egg(p, q):     M = (4π²/(pq)) Γ(a) Γ(b) / Γ(a+b+1),
///                a = (2β₁+2)/p, b = (2β₂+2)/q.
///
/// The factorial ratio for the ball is accumulated as a compensated sum of
/// single-factor logs so that nearby moments share no large cancelling
/// intermediates; the eigenvalue formulas difference these values at the
/// 1e-9 relative level and need them accurate to ~1 ulp of their own size.
pub fn closed_form_log_moment(domain: &ShadowDomain, beta: MultiIndex) -> Result<f64> {
    let b1 = f64::from(beta.a1);
    let b2 = f64::from(beta.a2);
    match domain.kind() {
        ShadowKind::Bidisk { r, s } => Ok(ln_pi_sq()
            + (2.0 * b1 + 2.0) * r.ln()
            + (2.0 * b2 + 2.0) * s.ln()
            - (b1 + 1.0).ln()
            - (b2 + 1.0).ln()),
        ShadowKind::Ball { radius } => {
            // β₁! β₂! / (|β|+2)! = [ Π_{j=1..m} j/(M+j) ] / ((|β|+1)(|β|+2))
            // with m = min(β), M = max(β).
            let (small, large) = if beta.a1 <= beta.a2 {
                (beta.a1, beta.a2)
            } else {
                (beta.a2, beta.a1)
            };
            let mut acc = KahanSum::new();
            for j in 1..=small {
                acc.add((f64::from(j) / (f64::from(large) + f64::from(j))).ln());
            }
            let total = f64::from(beta.order());
            acc.add(-(total + 1.0).ln());
            acc.add(-(total + 2.0).ln());
            acc.add((2.0 * total + 4.0) * radius.ln());
            Ok(ln_pi_sq() + acc.value())
        }
        ShadowKind::Egg { p, q } => {
            let a = (2.0 * b1 + 2.0) / p;
            let b = (2.0 * b2 + 2.0) / q;
            Ok(ln_four_pi_sq() - p.ln() - q.ln()
                + crate::numeric::ln_gamma(a)
                + crate::numeric::ln_gamma(b)
                - crate::numeric::ln_gamma(a + b + 1.0))
        }
        ShadowKind::Polygon { .. } => Err(Error::Unsupported(
            "no closed-form moment for polygon profiles".into(),
        )),
    }
}

/// Per-segment node count that integrates x^(2β₁+1) τ(x)^(2β₂+2) exactly on a
/// linear segment (degree 2|β|+3), with two nodes of slack.
fn nodes_for(beta: MultiIndex) -> usize {
    (beta.order() as usize) + 4
}

/// Log-moment of a polygon profile via piecewise Gauss–Legendre, assembled in
/// log space: each node contributes ln(w) + (2β₁+1) ln x + (2β₂+2) ln τ(x),
/// and the terms are combined with log-sum-exp so deep-degree moments never
/// underflow.
fn polygon_log_moment(
    domain: &ShadowDomain,
    beta: MultiIndex,
    stats: &Mutex<QuadratureStats>,
) -> Result<f64> {
    let ShadowKind::Polygon { vertices } = domain.kind() else {
        return Err(Error::Unsupported(
            "quadrature path requires a polygon profile".into(),
        ));
    };
    let b1 = f64::from(beta.a1);
    let b2 = f64::from(beta.a2);
    let n = nodes_for(beta);
    let rule = quad::rule(n);
    let mut terms: Vec<f64> = Vec::new();
    let mut segments = 0usize;
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.x == a.x {
            continue; // vertical edge carries no dx-measure
        }
        if a.y == 0.0 && b.y == 0.0 {
            continue; // zero-height sliver
        }
        segments += 1;
        let mid = 0.5 * (a.x + b.x);
        let half = 0.5 * (b.x - a.x);
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let x = mid + half * t;
            let frac = (x - a.x) / (b.x - a.x);
            let tau = a.y + frac * (b.y - a.y);
            if tau <= 0.0 || x <= 0.0 {
                continue;
            }
            terms.push((wt * half).ln() + (2.0 * b1 + 1.0) * x.ln() + (2.0 * b2 + 2.0) * tau.ln());
        }
    }
    let log_integral = log_sum_exp(&terms);
    if !log_integral.is_finite() {
        return Err(Error::InvalidSpec(
            "polygon profile encloses no area".into(),
        ));
    }
    {
        let mut st = stats.lock().expect("stats lock poisoned");
        st.quadrature_moments += 1;
        st.max_nodes = st.max_nodes.max(n);
        st.segments = st.segments.max(segments);
        // the rule is degree-exact, so summation roundoff is the whole error
        st.roundoff_bound = st.roundoff_bound.max(terms.len() as f64 * f64::EPSILON);
    }
    Ok(ln_four_pi_sq() - (2.0 * b2 + 2.0).ln() + log_integral)
}

/// Counters describing how the table was filled.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct QuadratureStats {
    pub closed_form_moments: u64,
    pub quadrature_moments: u64,
    pub max_nodes: usize,
    pub segments: usize,
    /// Conservative relative roundoff bound over all quadrature evaluations.
    pub roundoff_bound: f64,
}

/// Memoized log-moments of one domain, optionally persisted to an appendable
/// text cache. Reads are concurrent, inserts serialize on the write lock, and
/// file appends go through a single buffered writer.
pub struct MomentTable {
    domain: ShadowDomain,
    complete: bool,
    entries: RwLock<HashMap<MultiIndex, f64>>,
    stats: Mutex<QuadratureStats>,
    sink: Option<Mutex<BufWriter<File>>>,
}

impl MomentTable {
    pub fn new(domain: ShadowDomain) -> Self {
        let complete = domain.check_complete();
        MomentTable {
            domain,
            complete,
            entries: RwLock::new(HashMap::new()),
            stats: Mutex::new(QuadratureStats::default()),
            sink: None,
        }
    }

    /// Open (or create) the cache file for this domain, load any existing
    /// records, and append every newly computed moment to it.
    pub fn with_cache_file(domain: ShadowDomain, path: &Path) -> Result<Self> {
        let mut table = MomentTable::new(domain);
        let key = table.domain.cache_key();
        let expected_header = format!("# domain {key} version {CACHE_VERSION}");
        let existed = path.exists();
        if existed {
            let reader = BufReader::new(File::open(path)?);
            let mut lines = reader.lines();
            let header = lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::CacheFormat("empty cache file".into()))?;
            if header.trim() != expected_header {
                return Err(Error::CacheFormat(format!(
                    "header {:?} does not match domain (expected {:?})",
                    header.trim(),
                    expected_header
                )));
            }
            let mut map = table.entries.write().expect("moment table lock poisoned");
            for (lineno, line) in lines.enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let mut parse = || -> Option<(MultiIndex, f64)> {
                    let b1: u32 = parts.next()?.parse().ok()?;
                    let b2: u32 = parts.next()?.parse().ok()?;
                    let v: f64 = parts.next()?.parse().ok()?;
                    v.is_finite().then_some((MultiIndex::new(b1, b2), v))
                };
                let (idx, v) = parse().ok_or_else(|| {
                    Error::CacheFormat(format!("bad record on line {}", lineno + 2))
                })?;
                map.insert(idx, v);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut writer = BufWriter::new(file);
        if !existed {
            writeln!(writer, "{expected_header}")?;
        }
        table.sink = Some(Mutex::new(writer));
        Ok(table)
    }

    pub fn domain(&self) -> &ShadowDomain {
        &self.domain
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteDomain)
        }
    }

    pub fn len(&self) -> usize {
        self.entries
            .read()
            .expect("moment table lock poisoned")
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stats(&self) -> QuadratureStats {
        *self.stats.lock().expect("stats lock poisoned")
    }

    /// log M(β), memoized. Presets evaluate their closed form; polygon
    /// profiles run the exact piecewise quadrature.
    pub fn log_moment(&self, beta: MultiIndex) -> Result<f64> {
        self.require_complete()?;
        if let Some(&v) = self
            .entries
            .read()
            .expect("moment table lock poisoned")
            .get(&beta)
        {
            return Ok(v);
        }
        let value = if self.domain.is_preset() {
            let v = closed_form_log_moment(&self.domain, beta)?;
            self.stats
                .lock()
                .expect("stats lock poisoned")
                .closed_form_moments += 1;
            v
        } else {
            polygon_log_moment(&self.domain, beta, &self.stats)?
        };
        let mut map = self.entries.write().expect("moment table lock poisoned");
        if map.insert(beta, value).is_none() {
            if let Some(sink) = &self.sink {
                let mut w = sink.lock().expect("cache writer lock poisoned");
                writeln!(w, "{} {} {:.16e}", beta.a1, beta.a2, value)?;
            }
        }
        Ok(value)
    }

    /// M(β) on the linear scale; underflows to 0 for very deep indices.
    pub fn moment(&self, beta: MultiIndex) -> Result<f64> {
        Ok(self.log_moment(beta)?.exp())
    }

    /// Ensure every β with |β| <= degree_bound is present; returns how many
    /// entries that is. Idempotent: a second call recomputes nothing and
    /// reports the same count.
    pub fn warm_cache(&self, degree_bound: u32) -> Result<usize> {
        for total in 0..=degree_bound {
            for a1 in 0..=total {
                self.log_moment(MultiIndex::new(a1, total - a1))?;
            }
        }
        self.flush()?;
        let n = degree_bound as usize + 1;
        Ok(n * (n + 1) / 2)
    }

    /// Flush pending cache-file appends.
    pub fn flush(&self) -> Result<()> {
        if let Some(sink) = &self.sink {
            sink.lock().expect("cache writer lock poisoned").flush()?;
        }
        Ok(())
    }

    /// ⟨z^a conj(z)^b, z^c conj(z)^d⟩ over the domain. The integrand has
    /// rotation grade (a-b) - (c-d); distinct grades integrate to exactly
    /// zero, and matching grades reduce to the moment M(a+d).
    pub fn monomial_inner(
        &self,
        a: MultiIndex,
        b: MultiIndex,
        c: MultiIndex,
        d: MultiIndex,
    ) -> Result<Complex64> {
        self.require_complete()?;
        if a.grade_sub(&b) != c.grade_sub(&d) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(Complex64::new(self.moment(a + d)?, 0.0))
    }
}
