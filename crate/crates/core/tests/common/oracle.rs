//! Independent numerical oracles for the PCA tests.
//!
//! Plain `Vec<Vec<f64>>` and a classical (largest-pivot) two-sided Jacobi
//! eigenvalue method, so nothing here shares code with the one-sided SVD.

#![allow(clippy::needless_range_loop)]

pub type Dense = Vec<Vec<f64>>;

pub fn transpose(a: &Dense) -> Dense {
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (m, k, n) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..m)
        .map(|i| {
            (0..n)
                .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn center(a: &Dense) -> Dense {
    let m = a.len() as f64;
    let t = transpose(a);
    let means: Vec<f64> = t.iter().map(|col| col.iter().sum::<f64>() / m).collect();
    a.iter()
        .map(|row| row.iter().zip(&means).map(|(v, mu)| v - mu).collect())
        .collect()
}

/// Eigenvalues (descending) and matching unit eigenvectors (as columns of the
/// returned matrix) of a symmetric matrix.
pub fn symmetric_eigen(a: &Dense) -> (Vec<f64>, Dense) {
    let n = a.len();
    let mut s = a.clone();
    let mut v: Dense = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let scale: f64 = s
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for _ in 0..(100 * n * n).max(1) {
        let (mut p, mut q, mut big) = (0, 0, 0.0);
        for i in 0..n {
            for j in i + 1..n {
                if s[i][j].abs() > big {
                    big = s[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if big <= 1e-17 * scale {
            break;
        }
        let theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let t = if theta == 0.0 { 1.0 } else { t };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let sn = t * c;
        for k in 0..n {
            let (skp, skq) = (s[k][p], s[k][q]);
            s[k][p] = c * skp - sn * skq;
            s[k][q] = sn * skp + c * skq;
        }
        for k in 0..n {
            let (spk, sqk) = (s[p][k], s[q][k]);
            s[p][k] = c * spk - sn * sqk;
            s[q][k] = sn * spk + c * sqk;
        }
        for k in 0..n {
            let (vkp, vkq) = (v[k][p], v[k][q]);
            v[k][p] = c * vkp - sn * vkq;
            v[k][q] = sn * vkp + c * vkq;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[j][j].partial_cmp(&s[i][i]).unwrap());
    let values = order.iter().map(|&i| s[i][i]).collect();
    let vectors = (0..n)
        .map(|r| order.iter().map(|&i| v[r][i]).collect())
        .collect();
    (values, vectors)
}

/// Singular values (descending, `min(m, n)` of them) from the eigenvalues of
/// the symmetric embedding `[[0, A], [Aᵀ, 0]]`, whose spectrum is `±σ`.
pub fn singular_values(a: &Dense) -> Vec<f64> {
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let size = m + n;
    let mut h = vec![vec![0.0; size]; size];
    for i in 0..m {
        for j in 0..n {
            h[i][m + j] = a[i][j];
            h[m + j][i] = a[i][j];
        }
    }
    let (values, _) = symmetric_eigen(&h);
    values
        .into_iter()
        .take(m.min(n))
        .map(|v| v.max(0.0))
        .collect()
}
