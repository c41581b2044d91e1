use serde::Serialize;

use super::chart::ChartMetric;
use super::fd::gradient;
use super::linalg::{det3, orthonormal_frame, sym3_eigen, Mat3, Mat4, Point};
use super::GeomError;
use crate::scalar::Scalar;

/// `Rm[a][b][c][d] = g(R(∂_a, ∂_b)∂_d, ∂_c)`, so that `Rm_abab` is sectional curvature.
pub type Riemann<T> = [[[[T; 4]; 4]; 4]; 4];

/// Index pairs `a < b` spanning Λ², in order 01, 02, 03, 12, 13, 23.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Self-dual forms `e01+e23`, `e02−e13`, `e03+e12` (unnormalized) for the
/// coordinate orientation, in the pair basis.
const SELF_DUAL: [[f64; 6]; 3] =
    [[1.0, 0.0, 0.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 1.0, 1.0, 0.0, 0.0]];
const ANTI_SELF_DUAL: [[f64; 6]; 3] =
    [[1.0, 0.0, 0.0, 0.0, 0.0, -1.0], [0.0, 1.0, 0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0, -1.0, 0.0, 0.0]];

/// Orthonormal bases of Λ⁺ and Λ⁻ in the pair basis for the given orientation.
pub fn lambda_bases(orientation: i8) -> ([[f64; 6]; 3], [[f64; 6]; 3]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let norm = |b: [[f64; 6]; 3]| b.map(|v| v.map(|x| x * s));
    if orientation >= 0 {
        (norm(SELF_DUAL), norm(ANTI_SELF_DUAL))
    } else {
        (norm(ANTI_SELF_DUAL), norm(SELF_DUAL))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureDecomposition<T> {
    pub metric: Mat4<T>,
    /// Columns are a `g`-orthonormal frame.
    pub frame: Mat4<T>,
    pub riemann: Riemann<T>,
    pub ricci: Mat4<T>,
    pub scalar: T,
    pub traceless_ricci: Mat4<T>,
    pub einstein_tensor: Mat4<T>,
    /// Weyl tensor in the orthonormal frame.
    pub weyl_frame: Riemann<T>,
    pub weyl_plus: Mat3<T>,
    pub weyl_minus: Mat3<T>,
    /// Curvature operator restricted to Λ⁺, equal to `s/12 + W⁺`.
    pub curvature_plus: Mat3<T>,
}

impl<T: Scalar> CurvatureDecomposition<T> {
    pub fn weyl_plus_eigen(&self) -> ([T; 3], Mat3<T>) {
        sym3_eigen(&self.weyl_plus)
    }

    pub fn weyl_plus_det(&self) -> T {
        det3(&self.weyl_plus)
    }

    /// Ricci tensor in the orthonormal frame.
    pub fn ricci_frame(&self) -> Mat4<T> {
        super::linalg::in_frame(&self.ricci, &self.frame)
    }

    /// Norm of the full curvature tensor, `(Σ R_abcd²)^{1/2}` in the frame.
    pub fn riemann_norm(&self) -> T {
        let f = to_frame(&self.riemann, &self.frame);
        sum_sq(&f).sqrt()
    }
}

fn sum_sq<T: Scalar>(r: &Riemann<T>) -> T {
    r.iter().flatten().flatten().flatten().map(|&x| x * x).sum()
}

/// Riemann tensor from Christoffel symbols and their finite-difference derivatives.
pub fn riemann<T: Scalar>(m: &ChartMetric<T>, p: &Point<T>) -> Result<(Mat4<T>, Mat4<T>, Riemann<T>), GeomError> {
    let (g, ginv) = m.metric_and_inverse(p)?;
    let gamma = m.christoffel(p)?;
    let dgamma = gradient(&|q: &Point<T>| m.christoffel(q), p, &m.fd)?;
    // R^l_{ijk}
    let mut up = [[[[T::zero(); 4]; 4]; 4]; 4];
    for l in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let mut v = dgamma[i][l][j][k] - dgamma[j][l][i][k];
                    for s in 0..4 {
                        v = v + gamma[l][i][s] * gamma[s][j][k] - gamma[l][j][s] * gamma[s][i][k];
                    }
                    up[l][i][j][k] = v;
                }
            }
        }
    }
    let mut rm = [[[[T::zero(); 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    rm[a][b][c][d] = (0..4).map(|l| g[c][l] * up[l][a][b][d]).sum();
                }
            }
        }
    }
    Ok((g, ginv, rm))
}

/// Components `R(e_a, e_b, e_c, e_d)` in the frame whose columns are `e`.
pub fn to_frame<T: Scalar>(r: &Riemann<T>, e: &Mat4<T>) -> Riemann<T> {
    let mut cur = *r;
    for slot in 0..4 {
        let mut next = [[[[T::zero(); 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        next[a][b][c][d] = (0..4)
                            .map(|i| {
                                let mut j = idx;
                                j[slot] = i;
                                e[i][idx[slot]] * cur[j[0]][j[1]][j[2]][j[3]]
                            })
                            .sum();
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Matrix of a curvature-type tensor, given in an orthonormal frame, on an
/// orthonormal triple of 2-forms.
pub fn lambda_block<T: Scalar>(r: &Riemann<T>, basis: &[[f64; 6]; 3]) -> Mat3<T> {
    let mut op = [[T::zero(); 6]; 6];
    for (i, &(a, b)) in PAIRS.iter().enumerate() {
        for (j, &(c, d)) in PAIRS.iter().enumerate() {
            op[i][j] = r[a][b][c][d];
        }
    }
    let mut out = [[T::zero(); 3]; 3];
    for x in 0..3 {
        for y in 0..3 {
            let mut v = T::zero();
            for i in 0..6 {
                for j in 0..6 {
                    v = v + T::lit(basis[x][i] * basis[y][j]) * op[i][j];
                }
            }
            out[x][y] = v;
        }
    }
    out
}

pub fn curvature_at<T: Scalar>(m: &ChartMetric<T>, p: &Point<T>) -> Result<CurvatureDecomposition<T>, GeomError> {
    let (g, ginv, rm) = riemann(m, p)?;
    let mut ricci = [[T::zero(); 4]; 4];
    for b in 0..4 {
        for d in 0..4 {
            let mut v = T::zero();
            for a in 0..4 {
                for c in 0..4 {
                    v = v + ginv[a][c] * rm[a][b][c][d];
                }
            }
            ricci[b][d] = v;
        }
    }
    let ricci = super::linalg::symmetrize(&ricci);
    let scalar: T = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| ginv[i][j] * ricci[i][j]).sum();
    let quarter = scalar / T::lit(4.0);
    let half = scalar / T::lit(2.0);
    let mut traceless = ricci;
    let mut einstein = ricci;
    for i in 0..4 {
        for j in 0..4 {
            traceless[i][j] = ricci[i][j] - quarter * g[i][j];
            einstein[i][j] = ricci[i][j] - half * g[i][j];
        }
    }

    let frame = orthonormal_frame(&g);
    let rf = to_frame(&rm, &frame);
    let ric_f = super::linalg::in_frame(&ricci, &frame);
    let delta = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    let mut weyl = rf;
    let sixth = scalar / T::lit(6.0);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let kn = ric_f[a][c] * delta(b, d) - ric_f[a][d] * delta(b, c) + ric_f[b][d] * delta(a, c)
                        - ric_f[b][c] * delta(a, d);
                    let gg = delta(a, c) * delta(b, d) - delta(a, d) * delta(b, c);
                    weyl[a][b][c][d] = rf[a][b][c][d] - T::lit(0.5) * kn + sixth * gg;
                }
            }
        }
    }
    let (plus, minus) = lambda_bases(m.orientation);
    Ok(CurvatureDecomposition {
        metric: g,
        frame,
        riemann: rm,
        ricci,
        scalar,
        traceless_ricci: traceless,
        einstein_tensor: einstein,
        weyl_frame: weyl,
        weyl_plus: lambda_block(&weyl, &plus),
        weyl_minus: lambda_block(&weyl, &minus),
        curvature_plus: lambda_block(&rf, &plus),
    })
}

/// Sorted eigenvalues of W⁺.
pub fn weyl_plus_spectrum<T: Scalar>(m: &ChartMetric<T>, p: &Point<T>) -> Result<[T; 3], GeomError> {
    Ok(curvature_at(m, p)?.weyl_plus_eigen().0)
}
