//! Numerical laboratory for Hankel operators with conjugate-holomorphic
//! polynomial symbols on Bergman spaces of bounded complete Reinhardt domains
//! in C².
//!
//! The pieces:
//!
//! - [`domain`]: shadow-profile domains (bidisk, ball, egg, polygon profiles),
//!   completeness/convexity checks, and detection of the boundary
//!   disk-times-circle sets.
//! - [`moments`]: log-space monomial moments by closed form or exact
//!   piecewise Gauss–Legendre quadrature, memoized and optionally persisted.
//! - [`hankel`]: the explicit projection/action/eigenvalue formulas of the
//!   diagonal operators H*H and symbol-level norms.
//! - [`probe`]: shell-sup decay scans, plateau/decay classification, and the
//!   geometry-vs-spectrum cross-check.
//! - [`jsonio`]: spec wire formats and the deterministic report serializer.
//!
//! All operations are pure functions of immutable domain values; the moment
//! table supports concurrent reads with serialized inserts.

pub use num_complex;

pub mod domain;
pub mod error;
pub mod hankel;
pub mod index;
pub mod jsonio;
pub mod moments;
pub mod numeric;
pub mod probe;
pub mod quad;

pub use domain::{GammaCircleDisk, GammaDiskCircle, GammaReport, ShadowDomain, ShadowKind};
pub use error::{Error, Result};
pub use hankel::{
    hankel_action, hankel_eigenvalue, hankel_gram, projection_coeff, symbol_norm_sq, HankelAction,
    PolySymbol,
};
pub use index::{GradeIndex, MultiIndex};
pub use moments::{closed_form_log_moment, MomentTable};
pub use probe::{
    decay_scan, shell_sup, theorem_check, ConsistencyReport, DecayReport, Prediction, ProbeParams,
    ScanThresholds, Verdict,
};
