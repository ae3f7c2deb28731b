//! Closed forms checked against an independent brute-force 2D quadrature, plus
//! grid invariants of the moment table and eigenvalues.
//!
//! The brute-force oracle below deliberately shares nothing with the library:
//! it builds its own Gauss–Legendre nodes, finds profile heights by bisecting
//! the defining inequality, and integrates the 4D volume integrand over the
//! shadow as an iterated 2D quadrature.

use hankelscope_core::{
    closed_form_log_moment, hankel_eigenvalue, MomentTable, MultiIndex, ShadowDomain,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

mod bruteforce {
    /// Legendre nodes/weights on [-1, 1], independent implementation.
    pub fn legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n {
            let mut x =
                (std::f64::consts::PI * (n as f64 - 0.25 - i as f64) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..200 {
                let mut p_prev = 1.0;
                let mut p = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
                    p_prev = p;
                    p = p_next;
                }
                dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
                let step = p / dp;
                x -= step;
                if step.abs() < 5e-16 {
                    break;
                }
            }
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    }

    /// Height of the shadow at |z1| = x, found by bisecting `inside`.
    pub fn profile_by_bisection(inside: &dyn Fn(f64, f64) -> bool, x: f64, y_hi: f64) -> f64 {
        if !inside(x, 0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, y_hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inside(x, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// M(beta) = 4 pi^2 * iint_shadow x^(2b1+1) y^(2b2+1) dy dx by tensor
    /// Gauss-Legendre over panels geometrically refined toward x = x_max,
    /// where the profile may lose smoothness.
    pub fn moment(
        inside: &dyn Fn(f64, f64) -> bool,
        x_max: f64,
        y_max: f64,
        b1: u32,
        b2: u32,
    ) -> f64 {
        let (outer_x, outer_w) = legendre(64);
        let (inner_x, inner_w) = legendre(32);
        let mut panels: Vec<(f64, f64)> = (0..8)
            .map(|i| {
                (
                    x_max * 0.5 * i as f64 / 8.0,
                    x_max * 0.5 * (i + 1) as f64 / 8.0,
                )
            })
            .collect();
        let mut left = 0.5 * x_max;
        for k in 1..=45 {
            let right = x_max * (1.0 - 0.5f64.powi(k + 1));
            panels.push((left, right));
            left = right;
        }
        panels.push((left, x_max));

        let p1 = 2.0 * f64::from(b1) + 1.0;
        let p2 = 2.0 * f64::from(b2) + 1.0;
        let mut total = 0.0;
        for &(a, b) in &panels {
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            if half <= 0.0 {
                continue;
            }
            for (&t, &w) in outer_x.iter().zip(&outer_w) {
                let x = mid + half * t;
                let tau = profile_by_bisection(inside, x, y_max);
                if tau <= 0.0 {
                    continue;
                }
                // inner integral of y^(2b2+1) over [0, tau]
                let (imid, ihalf) = (0.5 * tau, 0.5 * tau);
                let mut inner = 0.0;
                for (&s, &v) in inner_x.iter().zip(&inner_w) {
                    let y = imid + ihalf * s;
                    inner += v * y.powf(p2);
                }
                inner *= ihalf;
                total += w * half * x.powf(p1) * inner;
            }
        }
        4.0 * std::f64::consts::PI.powi(2) * total
    }
}

fn all_betas(max_order: u32) -> Vec<MultiIndex> {
    (0..=max_order)
        .flat_map(|s| (0..=s).map(move |a| MultiIndex::new(a, s - a)))
        .collect()
}

#[test]
fn closed_forms_match_bruteforce_quadrature() {
    struct Case {
        domain: ShadowDomain,
        inside: Box<dyn Fn(f64, f64) -> bool>,
        extent: (f64, f64),
    }
    let cases = [
        Case {
            domain: ShadowDomain::bidisk(1.0, 1.0).unwrap(),
            inside: Box::new(|x: f64, y: f64| x < 1.0 && y < 1.0),
            extent: (1.0, 1.0),
        },
        Case {
            domain: ShadowDomain::ball(1.0).unwrap(),
            inside: Box::new(|x: f64, y: f64| x * x + y * y < 1.0),
            extent: (1.0, 1.0),
        },
        Case {
            domain: ShadowDomain::egg(2.0, 4.0).unwrap(),
            inside: Box::new(|x: f64, y: f64| x.powi(2) + y.powi(4) < 1.0),
            extent: (1.0, 1.0),
        },
        Case {
            domain: ShadowDomain::egg(3.0, 1.5).unwrap(),
            inside: Box::new(|x: f64, y: f64| x.powf(3.0) + y.powf(1.5) < 1.0),
            extent: (1.0, 1.0),
        },
    ];
    for case in &cases {
        for beta in all_betas(20) {
            let oracle =
                bruteforce::moment(&case.inside, case.extent.0, case.extent.1, beta.a1, beta.a2);
            let closed = closed_form_log_moment(&case.domain, beta).unwrap().exp();
            let rel = (closed - oracle).abs() / oracle;
            assert!(
                rel <= 1e-9,
                "{:?} beta={beta}: closed {closed} vs brute force {oracle} (rel {rel:.3e})",
                case.domain.kind()
            );
        }
    }
}

#[test]
fn polygon_quadrature_tracks_presets_through_256gon() {
    // inscribed 256-vertex profiles of the bidisk and ball shadows
    let mut rect: Vec<(f64, f64)> = (0..255).map(|i| (i as f64 / 255.0, 1.0)).collect();
    rect.push((1.0, 1.0));
    rect.push((1.0, 0.0));
    let rect_poly = MomentTable::new(ShadowDomain::polygon(rect).unwrap());
    let bidisk = MomentTable::new(ShadowDomain::bidisk(1.0, 1.0).unwrap());

    // equal-angle vertices keep the chord sagitta uniform along the arc
    let mut arc: Vec<(f64, f64)> = (0..255)
        .map(|i| {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / 255.0;
            (theta.sin(), theta.cos())
        })
        .collect();
    arc.push((1.0, 0.0));
    let arc_poly = MomentTable::new(ShadowDomain::polygon(arc).unwrap());
    let ball = MomentTable::new(ShadowDomain::ball(1.0).unwrap());

    for beta in all_betas(50) {
        let q = rect_poly.log_moment(beta).unwrap();
        let c = bidisk.log_moment(beta).unwrap();
        // the rectangle is represented exactly, so only roundoff remains
        assert!(
            (q - c).abs() <= 1e-12 * c.abs().max(1.0),
            "rect {beta}: {q} vs {c}"
        );

        let q = arc_poly.log_moment(beta).unwrap();
        let c = ball.log_moment(beta).unwrap();
        assert!((q - c).abs() <= 5e-4, "ball 256-gon {beta}: {q} vs {c}");
    }
}

#[test]
fn moments_dominated_by_bounding_bidisk() {
    let domains = [
        ShadowDomain::ball(1.0).unwrap(),
        ShadowDomain::egg(2.0, 4.0).unwrap(),
        ShadowDomain::polygon(vec![(0.0, 1.0), (0.5, 1.0), (1.0, 0.0)]).unwrap(),
    ];
    for d in domains {
        let bounding = MomentTable::new(ShadowDomain::bidisk(d.r1_max(), d.r2_max()).unwrap());
        let t = MomentTable::new(d);
        for beta in all_betas(40) {
            let inner = t.log_moment(beta).unwrap();
            let outer = bounding.log_moment(beta).unwrap();
            assert!(inner <= outer + 1e-9, "{beta}: {inner} > {outer}");
        }
    }
}

#[test]
fn log_convexity_on_grid() {
    let domains = [
        ShadowDomain::bidisk(1.0, 1.0).unwrap(),
        ShadowDomain::ball(1.0).unwrap(),
        ShadowDomain::egg(2.0, 4.0).unwrap(),
        ShadowDomain::polygon(vec![(0.0, 1.0), (0.5, 1.0), (1.0, 0.0)]).unwrap(),
    ];
    let alphas = all_betas(6);
    for d in domains {
        let t = MomentTable::new(d);
        for beta in all_betas(60) {
            for alpha in &alphas {
                let Some(minus) = beta.checked_sub(alpha) else {
                    continue;
                };
                let plus = beta + *alpha;
                let lhs = t.log_moment(plus).unwrap() + t.log_moment(minus).unwrap();
                let rhs = 2.0 * t.log_moment(beta).unwrap();
                assert!(
                    lhs >= rhs - 1e-9,
                    "{:?} beta={beta} alpha={alpha}: deficit {}",
                    t.domain().kind(),
                    rhs - lhs
                );
            }
        }
    }
}

#[test]
fn moment_scaling_law() {
    let base = MomentTable::new(ShadowDomain::bidisk(1.0, 1.0).unwrap());
    let doubled = MomentTable::new(ShadowDomain::bidisk(1.0, 1.0).unwrap().scaled(2.0).unwrap());
    for beta in all_betas(60) {
        let shift = doubled.log_moment(beta).unwrap() - base.log_moment(beta).unwrap();
        let expect = (2.0 * f64::from(beta.order()) + 4.0) * 2.0f64.ln();
        assert!(
            (shift - expect).abs() <= 1e-9,
            "{beta}: {shift} vs {expect}"
        );
    }
    let poly = ShadowDomain::polygon(vec![(0.0, 1.0), (0.5, 1.0), (1.0, 0.0)]).unwrap();
    let base = MomentTable::new(poly.clone());
    let halved = MomentTable::new(poly.scaled(0.5).unwrap());
    for beta in all_betas(40) {
        let shift = halved.log_moment(beta).unwrap() - base.log_moment(beta).unwrap();
        let expect = (2.0 * f64::from(beta.order()) + 4.0) * 0.5f64.ln();
        assert!(
            (shift - expect).abs() <= 1e-9,
            "{beta}: {shift} vs {expect}"
        );
    }
}

#[test]
fn eigenvalues_nonnegative_on_deep_grid() {
    let domains = [
        ShadowDomain::bidisk(1.0, 1.0).unwrap(),
        ShadowDomain::ball(1.0).unwrap(),
        ShadowDomain::egg(2.0, 4.0).unwrap(),
    ];
    let alphas = all_betas(6);
    for d in domains {
        let t = MomentTable::new(d);
        for total in 0..=200u32 {
            for m1 in 0..=total {
                let m = MultiIndex::new(m1, total - m1);
                for alpha in &alphas {
                    let v = hankel_eigenvalue(&t, *alpha, m).unwrap();
                    assert!(
                        v >= 0.0 && v.is_finite(),
                        "{:?} α={alpha} m={m}: {v}",
                        t.domain().kind()
                    );
                }
            }
        }
    }
}

#[test]
fn monomial_inner_cross_checked_by_monte_carlo() {
    // 4D Monte Carlo over the bidisk via its bounding box; fixed seed keeps
    // the test deterministic.
    let t = MomentTable::new(ShadowDomain::bidisk(1.0, 1.0).unwrap());
    let mut rng = StdRng::seed_from_u64(0x5eed_cafe);
    let n_samples = 1_500_000usize;

    let z = MultiIndex::ZERO;
    let cases = [
        (MultiIndex::new(1, 0), z, MultiIndex::new(1, 0), z),
        (
            MultiIndex::new(2, 1),
            MultiIndex::new(1, 1),
            MultiIndex::new(1, 0),
            z,
        ),
        (MultiIndex::new(1, 1), z, MultiIndex::new(1, 1), z),
        (MultiIndex::new(1, 0), z, MultiIndex::new(0, 1), z),
        (
            MultiIndex::new(2, 0),
            MultiIndex::new(0, 1),
            z,
            MultiIndex::new(1, 0),
        ),
    ];

    // integrate f * indicator over the bounding box of volume 16
    let box_volume = 16.0;
    let mut draws: Vec<(Complex64, Complex64, bool)> = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let z1 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let z2 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let inside = z1.norm_sqr() < 1.0 && z2.norm_sqr() < 1.0;
        draws.push((z1, z2, inside));
    }

    for (a, b, c, d) in cases {
        let expect = t.monomial_inner(a, b, c, d).unwrap();
        let f = |z1: Complex64, z2: Complex64| -> Complex64 {
            let zp = z1.powu(a.a1) * z2.powu(a.a2) * z1.conj().powu(b.a1) * z2.conj().powu(b.a2);
            let wq = z1.powu(c.a1) * z2.powu(c.a2) * z1.conj().powu(d.a1) * z2.conj().powu(d.a2);
            zp * wq.conj()
        };
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_sq = Complex64::new(0.0, 0.0);
        for &(z1, z2, inside) in &draws {
            let v = if inside {
                f(z1, z2)
            } else {
                Complex64::new(0.0, 0.0)
            };
            sum += v;
            sum_sq += Complex64::new(v.re * v.re, v.im * v.im);
        }
        let n = n_samples as f64;
        let mean = sum / n;
        let var_re = (sum_sq.re / n - mean.re * mean.re).max(0.0);
        let var_im = (sum_sq.im / n - mean.im * mean.im).max(0.0);
        let estimate = mean * box_volume;
        let se_re = box_volume * (var_re / n).sqrt();
        let se_im = box_volume * (var_im / n).sqrt();
        assert!(
            (estimate.re - expect.re).abs() <= 3.0 * se_re + 1e-12,
            "case {a}{b}{c}{d}: re {} vs {} (se {se_re:.2e})",
            estimate.re,
            expect.re
        );
        assert!(
            (estimate.im - expect.im).abs() <= 3.0 * se_im + 1e-12,
            "case {a}{b}{c}{d}: im {} vs {} (se {se_im:.2e})",
            estimate.im,
            expect.im
        );
    }
}
