use crate::singgroup::Ade;

/// Square integer matrix stored row-major as nested vectors.
pub type IntMatrix = Vec<Vec<i64>>;

/// Edges of the simply-laced Dynkin diagram, vertices numbered from 0.
pub fn dynkin_edges(label: Ade) -> Vec<(usize, usize)> {
    let n = label.rank();
    match label {
        Ade::A(_) => (1..n).map(|i| (i - 1, i)).collect(),
        Ade::D(_) => {
            // chain 0..n-2, both leaves n-2 and n-1 hang off vertex n-3
            let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            e.push((n - 3, n - 1));
            e
        }
        Ade::E6 | Ade::E7 | Ade::E8 => {
            // chain of n-1 vertices, last vertex attached to the third one
            let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
            e.push((2, n - 1));
            e
        }
    }
}

/// Intersection form of the plumbing: negative of the Cartan matrix.
pub fn dynkin_intersection_matrix(label: Ade) -> IntMatrix {
    let n = label.rank();
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (i, j) in dynkin_edges(label) {
        m[i][j] = 1;
        m[j][i] = 1;
    }
    m
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Negative definiteness via Sylvester: the `k`-th leading minor has sign `(-1)^k`.
pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    (1..=m.len()).all(|k| {
        let minor: IntMatrix = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = determinant(&minor);
        if k % 2 == 0 { d > 0 } else { d < 0 }
    })
}
