//! Complete Reinhardt domains in C^2 represented by their absolute shadow.
//!
//! A complete Reinhardt domain is determined by the region its points cover
//! under (z1, z2) -> (|z1|, |z2|) in the closed first quadrant. We carry that
//! region as the profile `tau` (the |z2|-extent over each |z1| slice) together
//! with its inverse profile `sigma`. Every integral over the domain reduces to
//! a 1D integral against `tau`, and the boundary disk sets are exactly the
//! horizontal flat of `tau` at the top slice and the vertical flat at the
//! right edge.

use crate::error::{Error, Result};
use serde::Serialize;

/// One shadow-profile vertex: x is the |z1| extent, y the |z2| extent.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShadowKind {
    /// |z1| < r, |z2| < s.
    Bidisk { r: f64, s: f64 },
    /// |z1|^2 + |z2|^2 < R^2.
    Ball { radius: f64 },
    /// |z1|^p + |z2|^q < 1 with p, q >= 1.
    Egg { p: f64, q: f64 },
    /// Piecewise-linear upper shadow boundary from (0, s_max) to (R_max, 0).
    Polygon { vertices: Vec<Vertex> },
}

/// A bounded complete Reinhardt domain given by its shadow profile.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowDomain {
    kind: ShadowKind,
    r1_max: f64,
    r2_max: f64,
}

fn require_positive(value: f64, name: &str) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "{name} must be a positive finite number"
        )));
    }
    Ok(())
}

impl ShadowDomain {
    pub fn bidisk(r: f64, s: f64) -> Result<Self> {
        require_positive(r, "r")?;
        require_positive(s, "s")?;
        Ok(ShadowDomain {
            kind: ShadowKind::Bidisk { r, s },
            r1_max: r,
            r2_max: s,
        })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        require_positive(radius, "radius")?;
        Ok(ShadowDomain {
            kind: ShadowKind::Ball { radius },
            r1_max: radius,
            r2_max: radius,
        })
    }

    pub fn egg(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidSpec("p must be >= 1 for convexity".into()));
        }
        if !(q.is_finite() && q >= 1.0) {
            return Err(Error::InvalidSpec("q must be >= 1 for convexity".into()));
        }
        Ok(ShadowDomain {
            kind: ShadowKind::Egg { p, q },
            r1_max: 1.0,
            r2_max: 1.0,
        })
    }

    /// Build a polygon-profile domain. The vertex list must run from the
    /// |z2|-axis to the |z1|-axis: first x = 0, last y = 0, x strictly
    /// increasing except that a single final vertical drop to the axis is
    /// allowed (that drop is how a rectangle, and hence a Gamma_2 face, is
    /// written). Profile monotonicity is NOT enforced here; `check_complete`
    /// reports on it.
    pub fn polygon(vertices: Vec<(f64, f64)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidSpec(
                "polygon needs at least 2 vertices".into(),
            ));
        }
        let verts: Vec<Vertex> = vertices.iter().map(|&(x, y)| Vertex { x, y }).collect();
        for (i, v) in verts.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.x >= 0.0 && v.y >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "vertex {i} must have finite nonnegative coordinates"
                )));
            }
        }
        if verts[0].x != 0.0 {
            return Err(Error::InvalidSpec(
                "first vertex must lie on the |z2|-axis (x = 0)".into(),
            ));
        }
        if verts[0].y <= 0.0 {
            return Err(Error::InvalidSpec("first vertex must have y > 0".into()));
        }
        let last = verts.len() - 1;
        if verts[last].y != 0.0 {
            return Err(Error::InvalidSpec(
                "last vertex must lie on the |z1|-axis (y = 0)".into(),
            ));
        }
        for i in 0..last {
            let (a, b) = (verts[i], verts[i + 1]);
            if a.x == b.x && a.y == b.y {
                return Err(Error::InvalidSpec(format!(
                    "degenerate zero-length edge at vertex {i}"
                )));
            }
            if b.x < a.x {
                return Err(Error::InvalidSpec(format!(
                    "bad polygon ordering: x must not decrease (vertex {})",
                    i + 1
                )));
            }
            // Equal x is only legal as the final vertical drop to the axis.
            if b.x == a.x && i + 1 != last {
                return Err(Error::InvalidSpec(format!(
                    "bad polygon ordering: interior vertical edge at vertex {i}"
                )));
            }
        }
        let r1_max = verts[last].x;
        if r1_max <= 0.0 {
            return Err(Error::InvalidSpec(
                "polygon must have positive |z1| extent".into(),
            ));
        }
        let r2_max = verts.iter().map(|v| v.y).fold(0.0, f64::max);
        Ok(ShadowDomain {
            kind: ShadowKind::Polygon { vertices: verts },
            r1_max,
            r2_max,
        })
    }

    pub fn kind(&self) -> &ShadowKind {
        &self.kind
    }

    /// sup of |z1| over the domain.
    pub fn r1_max(&self) -> f64 {
        self.r1_max
    }

    /// sup of |z2| over the domain.
    pub fn r2_max(&self) -> f64 {
        self.r2_max
    }

    pub fn is_preset(&self) -> bool {
        !matches!(self.kind, ShadowKind::Polygon { .. })
    }

    /// sup{|z2| : (z1, z2) in the closed domain, |z1| = x}.
    pub fn profile_tau(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && (0.0..=self.r1_max).contains(&x)) {
            return Err(Error::DomainArgument(format!(
                "x = {x} outside [0, {}]",
                self.r1_max
            )));
        }
        Ok(match &self.kind {
            ShadowKind::Bidisk { s, .. } => *s,
            ShadowKind::Ball { radius } => ((radius - x) * (radius + x)).max(0.0).sqrt(),
            ShadowKind::Egg { p, q } => (1.0 - x.powf(*p)).max(0.0).powf(1.0 / q),
            ShadowKind::Polygon { vertices } => polygon_tau(vertices, x),
        })
    }

    /// sup{|z1| : (z1, z2) in the closed domain, |z2| = y}. Mirror of `profile_tau`.
    pub fn profile_sigma(&self, y: f64) -> Result<f64> {
        if !(y.is_finite() && (0.0..=self.r2_max).contains(&y)) {
            return Err(Error::DomainArgument(format!(
                "y = {y} outside [0, {}]",
                self.r2_max
            )));
        }
        Ok(match &self.kind {
            ShadowKind::Bidisk { r, .. } => *r,
            ShadowKind::Ball { radius } => ((radius - y) * (radius + y)).max(0.0).sqrt(),
            ShadowKind::Egg { p, q } => (1.0 - y.powf(*q)).max(0.0).powf(1.0 / p),
            ShadowKind::Polygon { vertices } => polygon_sigma(vertices, y),
        })
    }

    /// True iff the profile is nonincreasing, i.e. the domain is complete.
    /// Sampled on a 1024-interval grid plus all polygon vertices, with a
    /// 1e-12 monotonicity tolerance.
    pub fn check_complete(&self) -> bool {
        let mut xs: Vec<f64> = (0..=GRID_STEPS)
            .map(|i| self.r1_max * i as f64 / GRID_STEPS as f64)
            .collect();
        if let ShadowKind::Polygon { vertices } = &self.kind {
            // vertex y-monotonicity is the exact statement for a polyline
            if vertices.windows(2).any(|w| w[1].y > w[0].y) {
                return false;
            }
            xs.extend(vertices.iter().map(|v| v.x));
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        let mut prev = f64::INFINITY;
        for &x in &xs {
            let t = self
                .profile_tau(x)
                .expect("grid point inside profile range");
            if t > prev + MONOTONE_TOL {
                return false;
            }
            prev = prev.min(t);
        }
        true
    }

    /// True iff the profile is concave, so the domain is convex. Polygons get
    /// the exact vertex turn test; other kinds a midpoint test over grid pairs.
    pub fn check_convex(&self) -> bool {
        if let ShadowKind::Polygon { vertices } = &self.kind {
            return polygon_concave(vertices);
        }
        let n = 256usize;
        let tau: Vec<f64> = (0..=n)
            .map(|i| {
                self.profile_tau(self.r1_max * i as f64 / n as f64)
                    .expect("grid point inside profile range")
            })
            .collect();
        for i in 0..=n {
            for j in (i + 2..=n).step_by(2) {
                let mid = (i + j) / 2;
                if tau[mid] < 0.5 * (tau[i] + tau[j]) - MONOTONE_TOL {
                    return false;
                }
            }
        }
        true
    }

    /// Detect the boundary analytic-disk sets with explicit tolerances.
    /// Presets answer from exact structure; polygons walk their segments,
    /// reporting the maximal flats adjacent to the coordinate axes.
    pub fn detect_gamma(&self, flat_eps: f64, len_eps: f64) -> Result<GammaReport> {
        if !(flat_eps > 0.0 && len_eps > 0.0) {
            return Err(Error::DomainArgument(
                "flat_eps and len_eps must be positive".into(),
            ));
        }
        if !self.check_complete() {
            return Err(Error::IncompleteDomain);
        }
        let (gamma1, gamma2) = match &self.kind {
            ShadowKind::Bidisk { r, s } => (
                Some(GammaDiskCircle { r1: *r, s1: *s }),
                Some(GammaCircleDisk { s2: *r, r2: *s }),
            ),
            // strictly decreasing profiles carry no boundary disks
            ShadowKind::Ball { .. } | ShadowKind::Egg { .. } => (None, None),
            ShadowKind::Polygon { vertices } => {
                let g1 = {
                    let knots: Vec<(f64, f64)> = vertices.iter().map(|v| (v.x, v.y)).collect();
                    let s1 = knots[0].1;
                    let r1 = flat_prefix(&knots, flat_eps);
                    (r1 >= len_eps).then_some(GammaDiskCircle { r1, s1 })
                };
                let g2 = {
                    // inverse profile: walk the vertices from the |z1|-axis up
                    let knots: Vec<(f64, f64)> =
                        vertices.iter().rev().map(|v| (v.y, v.x)).collect();
                    let s2 = knots[0].1;
                    let r2 = flat_prefix(&knots, flat_eps);
                    (r2 >= len_eps).then_some(GammaCircleDisk { s2, r2 })
                };
                (g1, g2)
            }
        };
        Ok(GammaReport {
            gamma1,
            gamma2,
            flat_eps,
            len_eps,
        })
    }

    /// `detect_gamma` with the default tolerances scaled to the domain size.
    pub fn detect_gamma_default(&self) -> Result<GammaReport> {
        self.detect_gamma(
            DEFAULT_FLAT_EPS_SCALE * self.r2_max,
            DEFAULT_LEN_EPS_SCALE * self.r1_max,
        )
    }

    /// The same domain with every shadow coordinate multiplied by `c`.
    /// The egg preset has no size parameter, so it cannot be scaled exactly.
    pub fn scaled(&self, c: f64) -> Result<ShadowDomain> {
        require_positive(c, "scale factor")?;
        match &self.kind {
            ShadowKind::Bidisk { r, s } => ShadowDomain::bidisk(c * r, c * s),
            ShadowKind::Ball { radius } => ShadowDomain::ball(c * radius),
            ShadowKind::Egg { .. } => Err(Error::Unsupported(
                "the egg preset has no scale parameter".into(),
            )),
            ShadowKind::Polygon { vertices } => {
                ShadowDomain::polygon(vertices.iter().map(|v| (c * v.x, c * v.y)).collect())
            }
        }
    }

    /// Stable identity for cache files: FNV-1a over the exact parameter bits.
    pub fn cache_key(&self) -> String {
        let canon = match &self.kind {
            ShadowKind::Bidisk { r, s } => {
                format!("bidisk:{:016x}:{:016x}", r.to_bits(), s.to_bits())
            }
            ShadowKind::Ball { radius } => format!("ball:{:016x}", radius.to_bits()),
            ShadowKind::Egg { p, q } => format!("egg:{:016x}:{:016x}", p.to_bits(), q.to_bits()),
            ShadowKind::Polygon { vertices } => {
                let mut s = String::from("polygon");
                for v in vertices {
                    s.push_str(&format!(":{:016x},{:016x}", v.x.to_bits(), v.y.to_bits()));
                }
                s
            }
        };
        format!("{:016x}", fnv1a64(canon.as_bytes()))
    }
}

const GRID_STEPS: usize = 1024;
const MONOTONE_TOL: f64 = 1e-12;
pub const DEFAULT_FLAT_EPS_SCALE: f64 = 1e-9;
pub const DEFAULT_LEN_EPS_SCALE: f64 = 1e-6;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn polygon_tau(vertices: &[Vertex], x: f64) -> f64 {
    // sup convention at a terminal vertical edge: take the upper endpoint
    let last = vertices.len() - 1;
    if vertices[last - 1].x == vertices[last].x && x >= vertices[last].x {
        return vertices[last - 1].y;
    }
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        if x <= b.x {
            if a.x == b.x {
                return a.y.max(b.y);
            }
            let t = (x - a.x) / (b.x - a.x);
            return a.y + t * (b.y - a.y);
        }
    }
    vertices[last].y
}

fn polygon_sigma(vertices: &[Vertex], y: f64) -> f64 {
    // rightmost x with tau(x) >= y; requires a nonincreasing profile to be
    // the true slice extent, but is well defined for any vertex list
    for w in vertices.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        if b.y >= y {
            return b.x;
        }
        if a.y >= y {
            if a.y == b.y {
                return b.x;
            }
            let t = (a.y - y) / (a.y - b.y);
            return a.x + t * (b.x - a.x);
        }
    }
    vertices[0].x
}

/// True iff the polyline turns right (or runs straight) at every interior
/// vertex, i.e. the profile is concave.
fn polygon_concave(vertices: &[Vertex]) -> bool {
    for w in vertices.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if cross > 0.0 {
            return false;
        }
    }
    true
}

/// Largest argument for which the knot polyline stays within `eps` of its
/// starting value. Knots are (arg ascending, value nonincreasing).
fn flat_prefix(knots: &[(f64, f64)], eps: f64) -> f64 {
    let threshold = knots[0].1 - eps;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.1 >= threshold {
            continue;
        }
        if b.0 == a.0 || a.1 == b.1 {
            return a.0;
        }
        let t = (a.1 - threshold) / (a.1 - b.1);
        return a.0 + t * (b.0 - a.0);
    }
    knots[knots.len() - 1].0
}

/// Gamma_1 parameters: closed disk of radius `r1` in z1 times the circle
/// |z2| = s1.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct GammaDiskCircle {
    pub r1: f64,
    pub s1: f64,
}

/// Gamma_2 parameters: circle |z1| = s2 times the closed disk of radius `r2`
/// in z2.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct GammaCircleDisk {
    pub s2: f64,
    pub r2: f64,
}

/// Detected boundary analytic-disk sets together with the tolerances used.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct GammaReport {
    pub gamma1: Option<GammaDiskCircle>,
    pub gamma2: Option<GammaCircleDisk>,
    pub flat_eps: f64,
    pub len_eps: f64,
}

impl GammaReport {
    pub fn any_disk(&self) -> bool {
        self.gamma1.is_some() || self.gamma2.is_some()
    }
}
