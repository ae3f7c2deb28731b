//! Hankel operators with conjugate-monomial symbols on the monomial basis.
//!
//! With e_n = z^n / ||z^n||, the operator H with symbol conj(z)^j acts as
//!
//!   H e_n = conj(z)^j z^n / ||z^n||                              if n ≱ j,
//!   H e_n = conj(z)^j z^n / ||z^n|| - z^(n-j) ||z^n|| / ||z^(n-j)||²   if n ≥ j,
//!
//! because the Bergman projection of conj(z)^j e_n is the single surviving
//! basis term of grade n - j. Consequently H*H is diagonal on the basis and
//! its eigenvalues are pure moment ratios, which we evaluate from log-moment
//! differences. For a polynomial symbol f = Σ c_jk z₁^j z₂^k, mutual
//! orthogonality of the grading subspaces splits ||H_conj(f) e_m||² into a
//! termwise sum Σ |c_jk|² λ_(j,k)(m).

use crate::error::{Error, Result};
use crate::index::{GradeIndex, MultiIndex};
use crate::moments::MomentTable;
use num_complex::Complex64;
use serde::Deserialize;
use std::collections::BTreeMap;

/// Coefficients below this modulus are treated as absent.
pub const COEFF_FLOOR: f64 = 1e-300;

/// Finite coefficient map (j,k) -> c_jk of a polynomial symbol
/// f = Σ c_jk z₁^j z₂^k; the operator under study is H with symbol conj(f).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolySymbol {
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl PolySymbol {
    pub fn zero() -> Self {
        PolySymbol::default()
    }

    /// Collect terms, summing duplicates and dropping negligible coefficients.
    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, Complex64)>>(terms: I) -> Self {
        let mut map: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (idx, c) in terms {
            *map.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| c.norm() >= COEFF_FLOOR);
        PolySymbol { terms: map }
    }

    /// Single monomial c z₁^j z₂^k.
    pub fn monomial(index: MultiIndex, coeff: Complex64) -> Self {
        PolySymbol::from_terms([(index, coeff)])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when f is constant (including the zero symbol).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|idx| *idx == MultiIndex::ZERO)
    }

    /// Max |index| over the stored terms; 0 for the zero symbol.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// Parse the symbol spec wire format:
    /// `{"terms":[{"j":1,"k":0,"re":2.0,"im":0.0}, ...]}`.
    pub fn from_spec_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Spec {
            terms: Vec<TermSpec>,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct TermSpec {
            j: i64,
            k: i64,
            re: f64,
            #[serde(default)]
            im: f64,
        }
        let spec: Spec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidSpec(format!("symbol spec: {e}")))?;
        let mut terms = Vec::with_capacity(spec.terms.len());
        for (i, t) in spec.terms.iter().enumerate() {
            if t.j < 0 || t.k < 0 {
                return Err(Error::InvalidSpec(format!(
                    "term {i}: exponents must be nonnegative (got j={}, k={})",
                    t.j, t.k
                )));
            }
            if t.j > 100_000 || t.k > 100_000 {
                return Err(Error::InvalidSpec(format!(
                    "term {i}: exponent out of range"
                )));
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "term {i}: coefficient must be finite"
                )));
            }
            terms.push((
                MultiIndex::new(t.j as u32, t.k as u32),
                Complex64::new(t.re, t.im),
            ));
        }
        Ok(PolySymbol::from_terms(terms))
    }

    /// Serialize back to the symbol spec wire format (17-significant-digit
    /// coefficients, term order fixed by the index ordering).
    pub fn to_spec_string(&self) -> String {
        let mut out = String::from("{\"terms\":[");
        for (i, (idx, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"j\":{},\"k\":{},\"re\":{:.16e},\"im\":{:.16e}}}",
                idx.a1, idx.a2, c.re, c.im
            ));
        }
        out.push_str("]}");
        out
    }
}

/// ⟨P(conj(z)^j e_n), e_(n-j)⟩: the single Bergman-projection coefficient.
/// Zero when n ≱ j (the projection vanishes), otherwise
/// ||z^n|| / ||z^(n-j)|| = exp((log M(n) - log M(n-j)) / 2).
pub fn projection_coeff(table: &MomentTable, j: MultiIndex, n: MultiIndex) -> Result<f64> {
    table.require_complete()?;
    match n.checked_sub(&j) {
        None => Ok(0.0),
        Some(nj) => {
            let u = table.log_moment(n)? - table.log_moment(nj)?;
            Ok((0.5 * u).exp())
        }
    }
}

/// The symbolic two-term form of H_(conj z^j) e_n.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelAction {
    /// j, the conjugated exponent of the symbol.
    pub conjugate_index: MultiIndex,
    /// n, the basis index acted on.
    pub basis_index: MultiIndex,
    /// Coefficient 1/||z^n|| of the antiholomorphic part conj(z)^j z^n.
    pub antiholomorphic_coeff: f64,
    /// Projection correction, present iff n ≥ j componentwise.
    pub correction: Option<HolomorphicCorrection>,
}

/// The projected part: the represented term is -coeff · z^index.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicCorrection {
    /// n - j.
    pub index: MultiIndex,
    /// ||z^n|| / ||z^(n-j)||², entering the action with a minus sign.
    pub coeff: f64,
}

impl HankelAction {
    /// Rotation grade n - j shared by both terms.
    pub fn grade(&self) -> GradeIndex {
        self.basis_index.grade_sub(&self.conjugate_index)
    }

    /// H of a constant symbol annihilates everything: the correction cancels
    /// the antiholomorphic part exactly when j = 0.
    pub fn is_null(&self) -> bool {
        self.conjugate_index == MultiIndex::ZERO
    }
}

pub fn hankel_action(table: &MomentTable, j: MultiIndex, n: MultiIndex) -> Result<HankelAction> {
    table.require_complete()?;
    let log_mn = table.log_moment(n)?;
    let correction = match n.checked_sub(&j) {
        None => None,
        Some(nj) => {
            let coeff = (0.5 * log_mn - table.log_moment(nj)?).exp();
            Some(HolomorphicCorrection { index: nj, coeff })
        }
    };
    Ok(HankelAction {
        conjugate_index: j,
        basis_index: n,
        antiholomorphic_coeff: (-0.5 * log_mn).exp(),
        correction,
    })
}

/// Eigenvalue of H*H with symbol conj(z)^α at basis index n:
///
///   λ = M(n+α)/M(n) - M(n)/M(n-α)   if n ≥ α,
///   λ = M(n+α)/M(n)                 otherwise.
///
/// Evaluated as e^v · expm1(u - v) with u = log M(n+α) - log M(n) and
/// v = log M(n) - log M(n-α): log-convexity of the moments gives u ≥ v, so
/// the expm1 argument is nonnegative and the subtraction survives the deep
/// shells where λ ~ |n|⁻² even though the two ratios agree to many digits.
pub fn hankel_eigenvalue(table: &MomentTable, alpha: MultiIndex, n: MultiIndex) -> Result<f64> {
    table.require_complete()?;
    let log_mn = table.log_moment(n)?;
    let u = table.log_moment(n + alpha)? - log_mn;
    match n.checked_sub(&alpha) {
        None => Ok(u.exp()),
        Some(na) => {
            let v = log_mn - table.log_moment(na)?;
            // clamp pure-roundoff negatives; λ = ||H e_n||² is nonnegative
            Ok((v.exp() * (u - v).exp_m1()).max(0.0))
        }
    }
}

/// Gram entry ⟨H_(conj z^α) e_j, H_(conj z^α) e_l⟩, computed as
/// ⟨conj(z)^α e_j, conj(z)^α e_l⟩ minus the product of the two projection
/// coefficients. Both pieces carry the grade selection rule, so off-diagonal
/// entries are exactly zero; the diagonal reproduces `hankel_eigenvalue`
/// through an independent arithmetic route (a direct ratio difference with
/// no expm1).
pub fn hankel_gram(
    table: &MomentTable,
    alpha: MultiIndex,
    j: MultiIndex,
    l: MultiIndex,
) -> Result<f64> {
    table.require_complete()?;
    // both terms live in the grades j - α and l - α and vanish unless they
    // coincide, i.e. unless j = l
    if j.grade_sub(&alpha) != l.grade_sub(&alpha) {
        return Ok(0.0);
    }
    // M(j+α) / (||z^j|| ||z^l||), assembled from logs so deep indices on
    // contracted domains cannot underflow the numerator
    let first = (table.log_moment(j + alpha)?
        - 0.5 * (table.log_moment(j)? + table.log_moment(l)?))
    .exp();
    let second = projection_coeff(table, alpha, j)? * projection_coeff(table, alpha, l)?;
    Ok(first - second)
}

/// ||H_conj(f) e_m||² = Σ |c_jk|² λ_(j,k)(m) for a polynomial symbol f.
/// The constant term contributes nothing.
pub fn symbol_norm_sq(table: &MomentTable, symbol: &PolySymbol, m: MultiIndex) -> Result<f64> {
    table.require_complete()?;
    let mut acc = 0.0;
    for (&idx, c) in symbol.terms() {
        if idx == MultiIndex::ZERO {
            continue;
        }
        acc += c.norm_sqr() * hankel_eigenvalue(table, idx, m)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ShadowDomain;

    fn bidisk() -> MomentTable {
        MomentTable::new(ShadowDomain::bidisk(1.0, 1.0).unwrap())
    }

    fn ball() -> MomentTable {
        MomentTable::new(ShadowDomain::ball(1.0).unwrap())
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn projection_coeff_cases() {
        let t = bidisk();
        // sqrt(M(1,0)/M(0,0)) = sqrt(1/2)
        let got = projection_coeff(&t, MultiIndex::new(1, 0), MultiIndex::new(1, 0)).unwrap();
        assert!(rel_close(got, 0.5f64.sqrt(), 1e-14));
        // projection vanishes when any exponent would go negative
        assert_eq!(
            projection_coeff(&t, MultiIndex::new(2, 0), MultiIndex::new(1, 5)).unwrap(),
            0.0
        );
        // j = 0 projects e_n onto itself
        assert_eq!(
            projection_coeff(&t, MultiIndex::ZERO, MultiIndex::new(9, 4)).unwrap(),
            1.0
        );
    }

    #[test]
    fn action_of_constant_symbol_is_null() {
        let t = bidisk();
        let act = hankel_action(&t, MultiIndex::ZERO, MultiIndex::new(2, 3)).unwrap();
        let corr = act.correction.as_ref().expect("n >= 0 always");
        assert_eq!(corr.index, MultiIndex::new(2, 3));
        assert!(rel_close(corr.coeff, act.antiholomorphic_coeff, 1e-15));
        assert!(act.is_null());
    }

    #[test]
    fn action_without_correction() {
        let t = bidisk();
        let act = hankel_action(&t, MultiIndex::new(1, 0), MultiIndex::new(0, 4)).unwrap();
        assert!(act.correction.is_none());
        let m04 = t.moment(MultiIndex::new(0, 4)).unwrap();
        assert!(rel_close(
            act.antiholomorphic_coeff,
            1.0 / m04.sqrt(),
            1e-14
        ));
        assert_eq!(act.grade(), GradeIndex::new(-1, 4));
    }

    #[test]
    fn action_correction_coefficient_matches_moments() {
        let t = bidisk();
        // coeff = ||z^n|| / ||z^(n-j)||^2 straight from the closed-form moments
        for n in [MultiIndex::new(3, 0), MultiIndex::new(3, 1)] {
            let j = MultiIndex::new(1, 0);
            let act = hankel_action(&t, j, n).unwrap();
            let corr = act.correction.expect("n >= j");
            let expect =
                t.moment(n).unwrap().sqrt() / t.moment(n.checked_sub(&j).unwrap()).unwrap();
            assert!(rel_close(corr.coeff, expect, 1e-13), "n={n}");
        }
        // the (3,1) instance in closed form: sqrt(pi^2/8) / (pi^2/6)
        let pi_sq = std::f64::consts::PI.powi(2);
        let act = hankel_action(&t, MultiIndex::new(1, 0), MultiIndex::new(3, 1)).unwrap();
        assert!(rel_close(
            act.correction.unwrap().coeff,
            (pi_sq / 8.0).sqrt() / (pi_sq / 6.0),
            1e-13
        ));
    }

    #[test]
    fn eigenvalue_examples() {
        let bd = bidisk();
        assert_eq!(
            hankel_eigenvalue(&bd, MultiIndex::ZERO, MultiIndex::new(5, 2)).unwrap(),
            0.0
        );
        let got = hankel_eigenvalue(&bd, MultiIndex::new(1, 0), MultiIndex::new(3, 7)).unwrap();
        assert!(rel_close(got, 0.05, 1e-12));
        let got = hankel_eigenvalue(&bd, MultiIndex::new(1, 0), MultiIndex::new(0, 5)).unwrap();
        assert!(rel_close(got, 0.5, 1e-12));
        let bl = ball();
        let got = hankel_eigenvalue(&bl, MultiIndex::new(1, 0), MultiIndex::new(2, 3)).unwrap();
        assert!(rel_close(got, 5.0 / 56.0, 1e-12));
    }

    #[test]
    fn eigenvalue_closed_forms_deep_shells() {
        let bd = bidisk();
        let e1 = MultiIndex::new(1, 0);
        for n1 in [1u32, 2, 17, 60, 140, 199] {
            let n = MultiIndex::new(n1, 200 - n1);
            let got = hankel_eigenvalue(&bd, e1, n).unwrap();
            let expect = 1.0 / (f64::from(n1 + 1) * f64::from(n1 + 2));
            assert!(
                rel_close(got, expect, 1e-9),
                "bidisk n={n}: {got} vs {expect}"
            );
        }
        let bl = ball();
        for n1 in [1u32, 2, 17, 60, 140, 199, 200] {
            for n2 in [0u32, 1, 50, 200 - n1.min(200)] {
                let n = MultiIndex::new(n1, n2);
                let s = f64::from(n.order());
                let got = hankel_eigenvalue(&bl, e1, n).unwrap();
                let expect = (f64::from(n2) + 2.0) / ((s + 2.0) * (s + 3.0));
                assert!(
                    rel_close(got, expect, 1e-9),
                    "ball n={n}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn gram_diagonality_and_consistency() {
        let t = bidisk();
        let a = MultiIndex::new(1, 0);
        assert_eq!(
            hankel_gram(&t, a, MultiIndex::new(2, 0), MultiIndex::new(3, 1)).unwrap(),
            0.0
        );
        let n = MultiIndex::new(3, 7);
        let diag = hankel_gram(&t, a, n, n).unwrap();
        assert!(rel_close(diag, 0.05, 1e-12));
        let eig = hankel_eigenvalue(&t, a, n).unwrap();
        assert!(rel_close(diag, eig, 1e-12));
        // zero operator
        assert_eq!(
            hankel_gram(
                &t,
                MultiIndex::ZERO,
                MultiIndex::new(4, 4),
                MultiIndex::new(1, 2)
            )
            .unwrap(),
            0.0
        );
        assert_eq!(
            hankel_gram(
                &t,
                MultiIndex::ZERO,
                MultiIndex::new(4, 4),
                MultiIndex::new(4, 4)
            )
            .unwrap(),
            0.0
        );
    }

    #[test]
    fn symbol_norm_examples() {
        let t = bidisk();
        let constant = PolySymbol::monomial(MultiIndex::ZERO, Complex64::new(5.0, 0.0));
        for m in [
            MultiIndex::ZERO,
            MultiIndex::new(3, 7),
            MultiIndex::new(40, 11),
        ] {
            assert_eq!(symbol_norm_sq(&t, &constant, m).unwrap(), 0.0);
        }
        let z1 = PolySymbol::monomial(MultiIndex::new(1, 0), Complex64::new(1.0, 0.0));
        let got = symbol_norm_sq(&t, &z1, MultiIndex::new(3, 7)).unwrap();
        assert!(rel_close(got, 0.05, 1e-12));
        // f = 2 z1 + z2^3 at m = (3,7): 4·(1/20) + 9/(8·11)
        let f = PolySymbol::from_terms([
            (MultiIndex::new(1, 0), Complex64::new(2.0, 0.0)),
            (MultiIndex::new(0, 3), Complex64::new(1.0, 0.0)),
        ]);
        let got = symbol_norm_sq(&t, &f, MultiIndex::new(3, 7)).unwrap();
        assert!(rel_close(got, 0.2 + 9.0 / 88.0, 1e-12));
    }

    #[test]
    fn symbol_spec_parsing() {
        let f = PolySymbol::from_spec_str(r#"{"terms":[{"j":1,"k":0,"re":1,"im":0}]}"#).unwrap();
        assert_eq!(f.num_terms(), 1);
        assert_eq!(f.degree(), 1);
        assert!(!f.is_constant());

        let zero = PolySymbol::from_spec_str(r#"{"terms":[]}"#).unwrap();
        assert!(zero.is_zero() && zero.is_constant());

        assert!(PolySymbol::from_spec_str(r#"{"terms":[{"j":-1,"k":0,"re":1,"im":0}]}"#).is_err());
        assert!(PolySymbol::from_spec_str(r#"{"terms":[{"j":1,"k":0,"re":"x","im":0}]}"#).is_err());
        assert!(
            PolySymbol::from_spec_str(r#"{"terms":[{"j":1,"k":0,"re":1,"extra":2}]}"#).is_err()
        );

        // duplicates sum; negligible coefficients vanish
        let f = PolySymbol::from_spec_str(
            r#"{"terms":[{"j":2,"k":0,"re":1.5},{"j":2,"k":0,"re":0.5},{"j":0,"k":1,"re":1e-305}]}"#,
        )
        .unwrap();
        assert_eq!(f.num_terms(), 1);
        let (idx, c) = f.terms().next().unwrap();
        assert_eq!(*idx, MultiIndex::new(2, 0));
        assert_eq!(c.re, 2.0);

        // round trip
        let g = PolySymbol::from_spec_str(&f.to_spec_string()).unwrap();
        assert_eq!(f, g);
    }
}
