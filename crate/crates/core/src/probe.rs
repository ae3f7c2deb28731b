//! Shell-sup eigenvalue scans and the geometry/spectrum cross-check.
//!
//! Since the basis vectors e_m tend weakly to zero, ||H e_m|| -> 0 as
//! |m| -> infinity is necessary for compactness. We scan the sup of the
//! eigenvalues over the shells |m| = N and classify each series as clearly
//! plateaued (NonCompact), clearly decaying (CompactConsistent), or neither
//! (Inconclusive). Decay over finitely many shells can never *prove*
//! compactness, so the positive verdict is deliberately named
//! CompactConsistent; only NonCompact is conclusive.

use crate::domain::GammaReport;
use crate::error::{Error, Result};
use crate::hankel::{hankel_eigenvalue, PolySymbol};
use crate::index::MultiIndex;
use crate::moments::MomentTable;
use serde::Serialize;

/// Classifier thresholds, applied to each series after normalizing it by its
/// value at N_min (that normalization makes verdicts scale invariant).
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct ScanThresholds {
    /// Normalized level the final shell must fall below to count as decayed.
    pub tau_decay: f64,
    /// The final shell must also be below this fraction of the mid shell.
    pub decay_ratio: f64,
    /// Plateau floor: the last half of the series must stay above this.
    pub tau_floor: f64,
    /// Plateau flatness: relative variation allowed over the last half.
    pub var_tol: f64,
}

impl Default for ScanThresholds {
    fn default() -> Self {
        ScanThresholds {
            tau_decay: 0.15,
            decay_ratio: 0.75,
            tau_floor: 1e-4,
            var_tol: 0.05,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CompactConsistent,
    NonCompact,
    Inconclusive,
}

/// max over the shell m1 + m2 = N of the eigenvalue for conj(z)^alpha.
pub fn shell_sup(table: &MomentTable, alpha: MultiIndex, n: u32) -> Result<f64> {
    table.require_complete()?;
    let mut sup = 0.0f64;
    for m1 in 0..=n {
        let m = MultiIndex::new(m1, n - m1);
        sup = sup.max(hankel_eigenvalue(table, alpha, m)?);
    }
    Ok(sup)
}

/// One term's shell-sup series with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct TermSeries {
    pub j: u32,
    pub k: u32,
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub shell_sup: Vec<f64>,
    pub verdict: Verdict,
}

/// Decay scan of a full polynomial symbol over shells N_min..=N_max.
#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub n_min: u32,
    pub n_max: u32,
    pub thresholds: ScanThresholds,
    pub terms: Vec<TermSeries>,
    /// max over each shell of ||H_conj(f) e_m||² (coefficient-weighted).
    pub aggregate: Vec<f64>,
    pub aggregate_verdict: Verdict,
}

impl DecayReport {
    /// Number of eigenvalue evaluations an equivalent scan performs; callers
    /// may want to warn before launching very deep scans.
    pub fn evaluation_bound(num_terms: usize, n_min: u32, n_max: u32) -> u64 {
        let shells = u64::from(n_max - n_min + 1);
        (u64::from(n_max) + 1) * num_terms as u64 * shells
    }
}

fn classify(series: &[f64], th: &ScanThresholds) -> Verdict {
    if series.iter().all(|&s| s == 0.0) {
        // the zero operator: nothing to decay
        return Verdict::CompactConsistent;
    }
    let s0 = series[0];
    if !s0.is_finite() || s0 <= 0.0 {
        return Verdict::Inconclusive;
    }
    let normalized: Vec<f64> = series.iter().map(|&s| s / s0).collect();
    let len = normalized.len();

    let last_half = &normalized[len / 2..];
    let lo = last_half.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = last_half.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo >= th.tau_floor && (hi - lo) <= th.var_tol * hi {
        return Verdict::NonCompact;
    }

    let end = normalized[len - 1];
    let mid = normalized[(len - 1).div_ceil(2)];
    if end <= th.tau_decay && end <= th.decay_ratio * mid {
        return Verdict::CompactConsistent;
    }

    Verdict::Inconclusive
}

/// Scan every term of `symbol` over the shells [n_min, n_max], classify each
/// series and the aggregate.
pub fn decay_scan(
    table: &MomentTable,
    symbol: &PolySymbol,
    n_min: u32,
    n_max: u32,
    thresholds: ScanThresholds,
) -> Result<DecayReport> {
    table.require_complete()?;
    if n_min >= n_max {
        return Err(Error::ScanBounds(format!(
            "need n_min < n_max, got [{n_min}, {n_max}]"
        )));
    }
    let indices: Vec<(MultiIndex, f64)> = symbol
        .terms()
        .map(|(idx, c)| (*idx, c.norm_sqr()))
        .collect();
    let shells = (n_max - n_min + 1) as usize;
    let mut per_term: Vec<Vec<f64>> = vec![Vec::with_capacity(shells); indices.len()];
    let mut aggregate: Vec<f64> = Vec::with_capacity(shells);

    for n in n_min..=n_max {
        let mut term_sup = vec![0.0f64; indices.len()];
        let mut agg_sup = 0.0f64;
        for m1 in 0..=n {
            let m = MultiIndex::new(m1, n - m1);
            let mut total = 0.0;
            for (t, (idx, weight)) in indices.iter().enumerate() {
                let lambda = if *idx == MultiIndex::ZERO {
                    0.0
                } else {
                    hankel_eigenvalue(table, *idx, m)?
                };
                term_sup[t] = term_sup[t].max(lambda);
                total += weight * lambda;
            }
            agg_sup = agg_sup.max(total);
        }
        for (t, sup) in term_sup.into_iter().enumerate() {
            per_term[t].push(sup);
        }
        aggregate.push(agg_sup);
    }

    let terms: Vec<TermSeries> = indices
        .iter()
        .zip(per_term)
        .map(|((idx, _), series)| {
            let verdict = classify(&series, &thresholds);
            let coeff = symbol
                .terms()
                .find(|(i, _)| **i == *idx)
                .map(|(_, c)| *c)
                .expect("index taken from the symbol");
            TermSeries {
                j: idx.a1,
                k: idx.a2,
                coeff_re: coeff.re,
                coeff_im: coeff.im,
                shell_sup: series,
                verdict,
            }
        })
        .collect();

    let nonconstant = |t: &&TermSeries| !(t.j == 0 && t.k == 0);
    let aggregate_verdict = if terms
        .iter()
        .filter(nonconstant)
        .any(|t| t.verdict == Verdict::NonCompact)
    {
        Verdict::NonCompact
    } else if terms
        .iter()
        .all(|t| t.verdict == Verdict::CompactConsistent)
    {
        Verdict::CompactConsistent
    } else {
        Verdict::Inconclusive
    };

    Ok(DecayReport {
        n_min,
        n_max,
        thresholds,
        terms,
        aggregate,
        aggregate_verdict,
    })
}

/// What the boundary geometry forces for one symbol term, in contrapositive
/// form: a boundary disk set in the z1 slot rules out compactness for any
/// term with j > 0, and symmetrically in the z2 slot for k > 0.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Prediction {
    MustBeNonCompact,
    NoPrediction,
}

pub fn predict_term(gamma: &GammaReport, index: MultiIndex) -> Prediction {
    if (gamma.gamma1.is_some() && index.a1 > 0) || (gamma.gamma2.is_some() && index.a2 > 0) {
        Prediction::MustBeNonCompact
    } else {
        Prediction::NoPrediction
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermConsistency {
    pub j: u32,
    pub k: u32,
    pub prediction: Prediction,
    pub verdict: Verdict,
}

/// Geometry prediction vs spectral verdict for every term of a symbol.
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub gamma: GammaReport,
    pub terms: Vec<TermConsistency>,
    pub aggregate_verdict: Verdict,
    /// False only if some term is predicted MustBeNonCompact while its scan
    /// says CompactConsistent.
    pub agreement: bool,
    pub scan: DecayReport,
}

/// Parameters for `theorem_check`.
#[derive(Copy, Clone, Debug)]
pub struct ProbeParams {
    pub n_min: u32,
    pub n_max: u32,
    pub thresholds: ScanThresholds,
    /// Flat-detection tolerances; None picks the domain-scaled defaults.
    pub flat_eps: Option<f64>,
    pub len_eps: Option<f64>,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            n_min: 20,
            n_max: 200,
            thresholds: ScanThresholds::default(),
            flat_eps: None,
            len_eps: None,
        }
    }
}

/// Cross-check the geometric compactness restrictions against the spectral
/// scan. Refuses domains outside the convex hypothesis rather than
/// extrapolating.
pub fn theorem_check(
    table: &MomentTable,
    symbol: &PolySymbol,
    params: &ProbeParams,
) -> Result<ConsistencyReport> {
    table.require_complete()?;
    let domain = table.domain();
    if !domain.check_convex() {
        return Err(Error::HypothesisViolation(
            "the geometry/spectrum cross-check requires a convex domain".into(),
        ));
    }
    let gamma = match (params.flat_eps, params.len_eps) {
        (Some(f), Some(l)) => domain.detect_gamma(f, l)?,
        (Some(f), None) => {
            domain.detect_gamma(f, crate::domain::DEFAULT_LEN_EPS_SCALE * domain.r1_max())?
        }
        (None, Some(l)) => {
            domain.detect_gamma(crate::domain::DEFAULT_FLAT_EPS_SCALE * domain.r2_max(), l)?
        }
        (None, None) => domain.detect_gamma_default()?,
    };
    let scan = decay_scan(table, symbol, params.n_min, params.n_max, params.thresholds)?;
    let terms: Vec<TermConsistency> = scan
        .terms
        .iter()
        .map(|t| TermConsistency {
            j: t.j,
            k: t.k,
            prediction: predict_term(&gamma, MultiIndex::new(t.j, t.k)),
            verdict: t.verdict,
        })
        .collect();
    let agreement = !terms.iter().any(|t| {
        t.prediction == Prediction::MustBeNonCompact && t.verdict == Verdict::CompactConsistent
    });
    Ok(ConsistencyReport {
        gamma,
        terms,
        aggregate_verdict: scan.aggregate_verdict,
        agreement,
        scan,
    })
}
