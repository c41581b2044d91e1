//! Small fixed-size linear algebra on `[[T; 4]; 4]` arrays.

use nalgebra::{Matrix3, Matrix4, SymmetricEigen};

use crate::scalar::Scalar;

pub type Point<T> = [T; 4];
pub type Mat4<T> = [[T; 4]; 4];
pub type Mat3<T> = [[T; 3]; 3];

pub fn zero4<T: Scalar>() -> Mat4<T> {
    [[T::zero(); 4]; 4]
}

pub fn identity4<T: Scalar>() -> Mat4<T> {
    let mut m = zero4();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn transpose<T: Scalar>(m: &Mat4<T>) -> Mat4<T> {
    let mut t = zero4();
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn matmul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut c = zero4();
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn matvec<T: Scalar>(a: &Mat4<T>, v: &Point<T>) -> Point<T> {
    let mut out = [T::zero(); 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn add<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut c = *a;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = c[i][j] + b[i][j];
        }
    }
    c
}

pub fn scale<T: Scalar>(a: &Mat4<T>, s: T) -> Mat4<T> {
    a.map(|row| row.map(|x| x * s))
}

pub fn sub<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    add(a, &scale(b, -T::one()))
}

pub fn trace<T: Scalar>(a: &Mat4<T>) -> T {
    (0..4).map(|i| a[i][i]).sum()
}

pub fn symmetrize<T: Scalar>(a: &Mat4<T>) -> Mat4<T> {
    let half = T::lit(0.5);
    let mut s = zero4();
    for i in 0..4 {
        for j in 0..4 {
            s[i][j] = half * (a[i][j] + a[j][i]);
        }
    }
    s
}

/// `Σ_ij a_ij b_ij`
pub fn frobenius_dot<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> T {
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| a[i][j] * b[i][j]).sum()
}

pub fn dot<T: Scalar>(a: &Point<T>, b: &Point<T>) -> T {
    (0..4).map(|i| a[i] * b[i]).sum()
}

pub fn norm<T: Scalar>(a: &Point<T>) -> T {
    dot(a, a).sqrt()
}

/// Lower Cholesky factor, or `None` if `a` is not positive definite.
pub fn cholesky<T: Scalar>(a: &Mat4<T>) -> Option<Mat4<T>> {
    let mut l = zero4::<T>();
    for j in 0..4 {
        let d = a[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<T>();
        if !(d > T::zero()) || !d.is_finite() {
            return None;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..4 {
            l[i][j] = (a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<T>()) / l[j][j];
        }
    }
    Some(l)
}

/// Inverse of a symmetric positive definite matrix from its Cholesky factor.
pub fn spd_inverse<T: Scalar>(l: &Mat4<T>) -> Mat4<T> {
    // invert the triangular factor, then form L⁻ᵀ L⁻¹
    let mut li = zero4::<T>();
    for j in 0..4 {
        li[j][j] = T::one() / l[j][j];
        for i in j + 1..4 {
            let s: T = (j..i).map(|k| l[i][k] * li[k][j]).sum();
            li[i][j] = -s / l[i][i];
        }
    }
    matmul(&transpose(&li), &li)
}

/// Columns form a `g`-orthonormal frame, obtained by Gram-Schmidt on the
/// coordinate basis in order; the frame is upper triangular with positive diagonal.
pub fn orthonormal_frame<T: Scalar>(g: &Mat4<T>) -> Mat4<T> {
    let ip = |u: &Point<T>, v: &Point<T>| dot(u, &matvec(g, v));
    let mut cols: Vec<Point<T>> = Vec::with_capacity(4);
    for k in 0..4 {
        let mut v = [T::zero(); 4];
        v[k] = T::one();
        for c in &cols {
            let proj = ip(&v, c);
            for i in 0..4 {
                v[i] = v[i] - proj * c[i];
            }
        }
        let n = ip(&v, &v).sqrt();
        cols.push(v.map(|x| x / n));
    }
    let mut e = zero4();
    for (j, c) in cols.iter().enumerate() {
        for i in 0..4 {
            e[i][j] = c[i];
        }
    }
    e
}

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a symmetric 3×3 matrix.
pub fn sym3_eigen<T: Scalar>(a: &Mat3<T>) -> ([T; 3], Mat3<T>) {
    let m = Matrix3::from_fn(|i, j| 0.5 * (a[i][j].to_f64_lossy() + a[j][i].to_f64_lossy()));
    let eig = SymmetricEigen::new(m);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.map(|k| T::lit(eig.eigenvalues[k]));
    let mut vecs = [[T::zero(); 3]; 3];
    for (c, &k) in order.iter().enumerate() {
        for r in 0..3 {
            vecs[r][c] = T::lit(eig.eigenvectors[(r, k)]);
        }
    }
    (values, vecs)
}

pub fn det3<T: Scalar>(a: &Mat3<T>) -> T {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Largest absolute eigenvalue of a symmetric 4×4 matrix.
pub fn sym4_operator_norm<T: Scalar>(a: &Mat4<T>) -> T {
    let m = Matrix4::from_fn(|i, j| 0.5 * (a[i][j].to_f64_lossy() + a[j][i].to_f64_lossy()));
    let eig = SymmetricEigen::new(m);
    T::lit(eig.eigenvalues.iter().fold(0.0f64, |acc, &x| acc.max(x.abs())))
}

/// Components of a (0,2)-tensor in the frame `e`: `eᵀ h e`.
pub fn in_frame<T: Scalar>(h: &Mat4<T>, e: &Mat4<T>) -> Mat4<T> {
    matmul(&transpose(e), &matmul(h, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mat4<f64> {
        [[4.0, 1.0, 0.5, 0.0], [1.0, 3.0, 0.2, 0.1], [0.5, 0.2, 2.0, 0.3], [0.0, 0.1, 0.3, 1.5]]
    }

    #[test]
    fn inverse_from_cholesky() {
        let g = sample();
        let inv = spd_inverse(&cholesky(&g).unwrap());
        let id = matmul(&g, &inv);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[i][j] - want).abs() < 1e-13);
            }
        }
        let mut bad = sample();
        bad[3][3] = -1.0;
        assert!(cholesky(&bad).is_none());
    }

    #[test]
    fn frame_is_orthonormal() {
        let g = sample();
        let e = orthonormal_frame(&g);
        let gf = in_frame(&g, &e);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gf[i][j] - want).abs() < 1e-13);
            }
            for j in i + 1..4 {
                assert_eq!(e[j][i], 0.0);
            }
        }
    }

    #[test]
    fn eigen_sorted() {
        let a: Mat3<f64> = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, -1.0]];
        let (v, _) = sym3_eigen(&a);
        assert!((v[0] + 1.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12 && (v[2] - 3.0).abs() < 1e-12);
        assert!((det3(&a) + 3.0).abs() < 1e-12);
        let f: [f32; 3] = sym3_eigen(&[[1.0f32, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]).0;
        assert_eq!(f, [1.0, 2.0, 3.0]);
    }
}
