//! Built-in coordinate charts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chart::{ChartMetric, Domain};
use super::linalg::{identity4, matmul, transpose, zero4, Mat4, Point};
use crate::scalar::Scalar;
use crate::singgroup::GroupAction;

/// Standard complex structure `(x1, y1, x2, y2) ↦ (−y1, x1, −y2, x2)`.
pub fn complex_structure<T: Scalar>() -> Mat4<T> {
    let mut j = zero4::<T>();
    j[0][1] = -T::one();
    j[1][0] = T::one();
    j[2][3] = -T::one();
    j[3][2] = T::one();
    j
}

/// Kähler form `ω(X, Y) = g(JX, Y)` of a metric Hermitian for the standard `J`.
pub fn kahler_form<T: Scalar>(g: &Mat4<T>) -> Mat4<T> {
    matmul(&transpose(&complex_structure::<T>()), g)
}

/// `(A, A', B, B')` as functions of `u = |x|²`.
pub type RadialProfile<T> = Arc<dyn Fn(T) -> [T; 4] + Send + Sync>;

/// U(2)-invariant metric `A(u) δ + B(u)(x xᵀ + Jx (Jx)ᵀ)`; for a Kähler
/// potential `f(u)` one has `A = f'`, `B = f''`.
pub fn kahler_radial<T: Scalar>(name: &str, domain: Domain<T>, profile: RadialProfile<T>) -> ChartMetric<T> {
    let j = complex_structure::<T>();
    let prof = profile.clone();
    let components = Arc::new(move |p: &Point<T>| {
        let u = p.iter().map(|&x| x * x).sum::<T>();
        let [a, _, b, _] = prof(u);
        let jp = super::linalg::matvec(&j, p);
        let mut g = identity4::<T>();
        for r in 0..4 {
            for c in 0..4 {
                g[r][c] = g[r][c] * a + b * (p[r] * p[c] + jp[r] * jp[c]);
            }
        }
        g
    });
    let derivative = Arc::new(move |p: &Point<T>| {
        let u = p.iter().map(|&x| x * x).sum::<T>();
        let [a1, da, b, db] = profile(u);
        let _ = a1;
        let jp = super::linalg::matvec(&j, p);
        let two = T::lit(2.0);
        std::array::from_fn(|k| {
            let mut d = zero4::<T>();
            for r in 0..4 {
                for c in 0..4 {
                    let delta = if r == c { T::one() } else { T::zero() };
                    let dk = |i: usize| if i == k { T::one() } else { T::zero() };
                    let quad = p[r] * p[c] + jp[r] * jp[c];
                    let dquad = dk(r) * p[c] + p[r] * dk(c) + j[r][k] * jp[c] + jp[r] * j[c][k];
                    d[r][c] = two * p[k] * (da * delta + db * quad) + b * dquad;
                }
            }
            d
        })
    });
    ChartMetric::new(name, domain, components).with_derivative(derivative)
}

pub fn euclidean<T: Scalar>() -> ChartMetric<T> {
    ChartMetric::new("euclidean", Domain::All, Arc::new(|_| identity4::<T>()))
        .with_derivative(Arc::new(|_| [zero4::<T>(); 4]))
}

/// Flat ℝ⁴/Γ.
pub fn flat_quotient<T: Scalar>(group: GroupAction) -> ChartMetric<T> {
    euclidean::<T>().named(format!("flat/{}", group.label())).with_quotient(group)
}

/// Unit round S⁴ in the stereographic chart `g = δ / (1 + |x|²/4)²`.
pub fn round_s4<T: Scalar>() -> ChartMetric<T> {
    let quarter = T::lit(0.25);
    kahler_radial(
        "round-s4",
        Domain::All,
        Arc::new(move |u: T| {
            let w = T::one() + quarter * u;
            [T::one() / (w * w), -T::lit(0.5) / (w * w * w), T::zero(), T::zero()]
        }),
    )
}

/// Round S⁴/ℤ₂ near a fixed point of `x ↦ −x`.
pub fn round_s4_mod_z2<T: Scalar>() -> ChartMetric<T> {
    round_s4::<T>()
        .named("round-s4/Z2")
        .with_quotient(GroupAction::cyclic(2, 1, 1).expect("free action"))
}

/// Fubini-Study metric on the affine chart ℂ² ⊂ ℂP², potential `log(1 + |z|²)`.
/// Holomorphic sectional curvature 4, Ricci `6g`.
pub fn fubini_study<T: Scalar>() -> ChartMetric<T> {
    kahler_radial(
        "fubini-study",
        Domain::All,
        Arc::new(|u: T| {
            let w = T::one() + u;
            [T::one() / w, -T::one() / (w * w), -T::one() / (w * w), T::lit(2.0) / (w * w * w)]
        }),
    )
}

/// Eguchi-Hanson metric on ℂ²∖{0} with parameter `a`, potential
/// `√(u² + a⁴) + a² log(u / (√(u² + a⁴) + a²))`; descends to ℂ²/ℤ₂ minus the
/// exceptional curve. Ricci-flat, and `W⁺ = 0` for the complex orientation.
pub fn eguchi_hanson<T: Scalar>(a: T) -> ChartMetric<T> {
    let a4 = a * a * a * a;
    let inner = a * T::lit(1e-2);
    kahler_radial(
        "eguchi-hanson",
        Domain::Annulus { inner, outer: T::infinity() },
        Arc::new(move |u: T| {
            let s = (u * u + a4).sqrt();
            let aa = s / u;
            let b = -a4 / (u * u * s);
            let db = a4 * (T::lit(2.0) / (u * u * u * s) + T::one() / (u * s * s * s));
            [aa, b, b, db]
        }),
    )
    .with_quotient(GroupAction::cyclic(2, 1, 1).expect("free action"))
}

/// Product of two unit 2-spheres, each in its stereographic chart.
pub fn s2xs2<T: Scalar>() -> ChartMetric<T> {
    let factor = |x: T, y: T| {
        let w = T::one() + x * x + y * y;
        (T::lit(4.0) / (w * w), -T::lit(16.0) / (w * w * w))
    };
    let components = Arc::new(move |p: &Point<T>| {
        let (f1, _) = factor(p[0], p[1]);
        let (f2, _) = factor(p[2], p[3]);
        let mut g = zero4::<T>();
        g[0][0] = f1;
        g[1][1] = f1;
        g[2][2] = f2;
        g[3][3] = f2;
        g
    });
    let derivative = Arc::new(move |p: &Point<T>| {
        let (_, d1) = factor(p[0], p[1]);
        let (_, d2) = factor(p[2], p[3]);
        std::array::from_fn(|k| {
            let mut d = zero4::<T>();
            if k < 2 {
                d[0][0] = d1 * p[k];
                d[1][1] = d1 * p[k];
            } else {
                d[2][2] = d2 * p[k];
                d[3][3] = d2 * p[k];
            }
            d
        })
    });
    ChartMetric::new("s2xs2", Domain::All, components).with_derivative(derivative)
}

/// `δ + Σ_m c_m x^m` with symmetric matrix coefficients.
#[derive(Clone, Debug)]
pub struct PolynomialPerturbation<T> {
    pub terms: Vec<([u8; 4], Mat4<T>)>,
    /// Half-width of the coordinate box the chart lives on.
    pub half_width: T,
}

fn monomial<T: Scalar>(e: &[u8; 4], p: &Point<T>) -> T {
    (0..4).map(|i| p[i].powi(e[i] as i32)).fold(T::one(), |a, b| a * b)
}

fn monomial_partial<T: Scalar>(e: &[u8; 4], p: &Point<T>, k: usize) -> T {
    if e[k] == 0 {
        return T::zero();
    }
    let mut e2 = *e;
    e2[k] -= 1;
    T::lit(e[k] as f64) * monomial(&e2, p)
}

impl<T: Scalar> PolynomialPerturbation<T> {
    /// Random coefficients in `[−amplitude, amplitude]` on all monomials of
    /// degree 2 and 3. On the box of half-width `0.4` with amplitude `≤ 0.05`
    /// the perturbation stays below `0.6` in operator norm, so the metric is positive definite.
    pub fn random(seed: u64, amplitude: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for e0 in 0..=3u8 {
            for e1 in 0..=3 - e0 {
                for e2 in 0..=3 - e0 - e1 {
                    for e3 in 0..=3 - e0 - e1 - e2 {
                        let deg = e0 + e1 + e2 + e3;
                        if deg < 2 {
                            continue;
                        }
                        let mut c = zero4::<T>();
                        for i in 0..4 {
                            for j in i..4 {
                                let v = T::lit(rng.random_range(-amplitude..=amplitude));
                                c[i][j] = v;
                                c[j][i] = v;
                            }
                        }
                        terms.push(([e0, e1, e2, e3], c));
                    }
                }
            }
        }
        PolynomialPerturbation { terms, half_width: T::lit(0.4) }
    }

    pub fn chart(&self, name: impl Into<String>) -> ChartMetric<T> {
        let terms = Arc::new(self.terms.clone());
        let t2 = terms.clone();
        let w = self.half_width;
        let components = Arc::new(move |p: &Point<T>| {
            let mut g = identity4::<T>();
            for (e, c) in terms.iter() {
                let m = monomial(e, p);
                for i in 0..4 {
                    for j in 0..4 {
                        g[i][j] = g[i][j] + c[i][j] * m;
                    }
                }
            }
            g
        });
        let derivative = Arc::new(move |p: &Point<T>| {
            std::array::from_fn(|k| {
                let mut d = zero4::<T>();
                for (e, c) in t2.iter() {
                    let m = monomial_partial(e, p, k);
                    for i in 0..4 {
                        for j in 0..4 {
                            d[i][j] = d[i][j] + c[i][j] * m;
                        }
                    }
                }
                d
            })
        });
        ChartMetric::new(name, Domain::Box { lo: [-w; 4], hi: [w; 4] }, components).with_derivative(derivative)
    }
}

/// `δ + ε ψ(x) S` with `ψ = exp(−1/(1 − |x|²))` on the unit ball and zero outside.
pub fn bump_perturbation<T: Scalar>(eps: T, s: Mat4<T>) -> ChartMetric<T> {
    let components = Arc::new(move |p: &Point<T>| {
        let r2 = p.iter().map(|&x| x * x).sum::<T>();
        let psi = if r2 < T::one() { (-T::one() / (T::one() - r2)).exp() } else { T::zero() };
        let mut g = identity4::<T>();
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = g[i][j] + eps * psi * T::lit(0.5) * (s[i][j] + s[j][i]);
            }
        }
        g
    });
    ChartMetric::new("bump", Domain::All, components)
}

/// Sample points with `lo ≤ |x| ≤ hi` from a seeded generator.
pub fn sample_points<T: Scalar>(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<Point<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 && n <= 1.0 {
                let r = lo + (hi - lo) * rng.random::<f64>();
                break v.map(|x| T::lit(x / n * r));
            }
        })
        .collect()
}

/// Names accepted by [`by_name`].
pub const BUILTIN: [&str; 8] =
    ["euclidean", "flat-z2", "round-s4", "round-s4-z2", "fubini-study", "s2xs2", "eguchi-hanson", "polynomial"];

/// Built-in chart by name, with default parameters.
pub fn by_name<T: Scalar>(name: &str) -> Option<ChartMetric<T>> {
    let z2 = || GroupAction::cyclic(2, 1, 1).expect("free action");
    Some(match name {
        "euclidean" => euclidean(),
        "flat-z2" => flat_quotient(z2()),
        "round-s4" => round_s4(),
        "round-s4-z2" => round_s4_mod_z2(),
        "fubini-study" => fubini_study(),
        "s2xs2" => s2xs2(),
        "eguchi-hanson" => eguchi_hanson(T::one()),
        "polynomial" => PolynomialPerturbation::random(0, 0.05).chart("polynomial"),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomkit::fd::{gradient, FdScheme};

    fn close(a: &Mat4<f64>, b: &Mat4<f64>, tol: f64) -> bool {
        let size = a.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
        (0..4).all(|i| (0..4).all(|j| (a[i][j] - b[i][j]).abs() <= tol * size))
    }

    #[test]
    fn closed_form_derivatives_match_differences() {
        let charts: Vec<ChartMetric<f64>> = vec![
            round_s4(),
            fubini_study(),
            eguchi_hanson(1.0),
            s2xs2(),
            PolynomialPerturbation::random(3, 0.05).chart("p"),
        ];
        let pts = sample_points::<f64>(11, 6, 0.2, 0.35);
        for m in &charts {
            for p in &pts {
                let closed = m.dmetric(p).unwrap();
                let fd = gradient(&|q: &Point<f64>| m.metric(q), p, &FdScheme::default()).unwrap();
                for k in 0..4 {
                    assert!(close(&closed[k], &fd[k], 1e-9), "{} at {p:?} direction {k}", m.name);
                }
            }
        }
    }

    #[test]
    fn quotient_invariance() {
        let pts = sample_points::<f64>(5, 8, 0.3, 1.5);
        for m in [round_s4_mod_z2::<f64>(), eguchi_hanson(1.0), flat_quotient(GroupAction::BinaryDihedral { k: 5 })] {
            assert!(m.quotient_invariance_defect(&pts).unwrap() < 1e-12, "{}", m.name);
        }
        let fs = fubini_study::<f64>().with_quotient(GroupAction::cyclic(5, 1, 2).unwrap());
        assert!(fs.quotient_invariance_defect(&pts).unwrap() < 1e-12);
        let skew = PolynomialPerturbation::random(1, 0.05).chart("p").with_quotient(GroupAction::cyclic(3, 1, 1).unwrap());
        let small = sample_points::<f64>(5, 8, 0.1, 0.3);
        assert!(skew.quotient_invariance_defect(&small).unwrap() > 1e-6);
    }

    #[test]
    fn polynomial_charts_positive_definite_on_box() {
        for seed in 0..10 {
            let m = PolynomialPerturbation::<f64>::random(seed, 0.05).chart("p");
            for s in [-1.0, 1.0] {
                assert!(m.metric(&[0.4 * s, 0.4, -0.4 * s, 0.4]).is_ok());
            }
            assert!(m.metric(&[0.5, 0.0, 0.0, 0.0]).is_err());
        }
    }

    #[test]
    fn eguchi_hanson_is_asymptotically_flat() {
        let m = eguchi_hanson(1.0f64);
        let g = m.metric(&[100.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(&g, &identity4(), 1e-7));
        assert!(m.metric(&[0.0; 4]).is_err());
    }
}
