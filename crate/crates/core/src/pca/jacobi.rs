//! One-sided (Hestenes) Jacobi singular value decomposition.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

use super::PcaError;

pub const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U diag(σ) Vᵀ` with `r = min(m, n)` components, σ descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
    pub sweeps: usize,
}

impl<T: Scalar> Svd<T> {
    /// `U diag(σ) Vᵀ` using the first `k` components.
    pub fn reconstruct(&self, k: usize) -> Matrix<T> {
        let k = k.min(self.singular_values.len());
        Matrix::from_fn(self.u.nrows(), self.v.nrows(), |i, j| {
            (0..k).fold(T::zero(), |acc, c| {
                acc + self.u[(i, c)] * self.singular_values[c] * self.v[(j, c)]
            })
        })
    }
}

pub fn jacobi_svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>, PcaError> {
    if !a.is_finite() {
        return Err(PcaError::NonFinite);
    }
    if a.nrows() >= a.ncols() {
        tall_svd(a)
    } else {
        // Aᵀ = U' Σ V'ᵀ  ⇒  A = V' Σ U'ᵀ
        let t = tall_svd(&a.transpose())?;
        Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
            sweeps: t.sweeps,
        })
    }
}

/// Rotates columns of a working copy of `a` (m ≥ n) until pairwise orthogonal.
fn tall_svd<T: Scalar>(a: &Matrix<T>) -> Result<Svd<T>, PcaError> {
    let (m, n) = (a.nrows(), a.ncols());
    let mut w = a.clone();
    let mut v = Matrix::<T>::identity(n);
    let tol = T::jacobi_tolerance();
    let two = T::from_count(2);
    // Columns shorter than this are rounding residue; rotating them against
    // anything only chases noise, so they count as already orthogonal.
    let negligible = a.sum_of_squares().sqrt() * T::epsilon() * T::from_count(m.max(n) as u64);
    let floor = negligible * negligible;

    let mut sweeps = 0;
    loop {
        if sweeps == MAX_SWEEPS {
            return Err(PcaError::NoConvergence { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == T::zero()
                    || alpha <= floor
                    || beta <= floor
                    || gamma.abs() <= tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<T> = (0..n)
        .map(|j| {
            (0..m)
                .fold(T::zero(), |acc, i| acc + w[(i, j)] * w[(i, j)])
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));

    let singular_values: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let mut u = Matrix::zeros(m, n);
    let mut missing = Vec::new();
    for (c, &j) in order.iter().enumerate() {
        if norms[j] <= negligible || norms[j] == T::zero() {
            missing.push(c);
            continue;
        }
        for i in 0..m {
            u[(i, c)] = w[(i, j)] / norms[j];
        }
    }
    complete_orthonormal(&mut u, &missing);
    let v = Matrix::from_fn(n, n, |i, c| v[(i, order[c])]);
    Ok(Svd {
        u,
        singular_values,
        v,
        sweeps,
    })
}

fn rotate<T: Scalar>(x: &mut Matrix<T>, p: usize, q: usize, c: T, s: T) {
    for i in 0..x.nrows() {
        let (xp, xq) = (x[(i, p)], x[(i, q)]);
        x[(i, p)] = c * xp - s * xq;
        x[(i, q)] = s * xp + c * xq;
    }
}

/// Fills the `missing` columns of `q` so that all columns are orthonormal.
///
/// Candidates are the standard basis vectors; the one with the largest
/// residual after two Gram-Schmidt passes wins, so the result is deterministic.
fn complete_orthonormal<T: Scalar>(q: &mut Matrix<T>, missing: &[usize]) {
    let (d, r) = (q.nrows(), q.ncols());
    let mut filled: Vec<usize> = (0..r).filter(|c| !missing.contains(c)).collect();
    for &target in missing {
        let mut best: Option<(T, Vec<T>)> = None;
        for e in 0..d {
            let mut cand: Vec<T> = (0..d)
                .map(|i| if i == e { T::one() } else { T::zero() })
                .collect();
            for _ in 0..2 {
                for &c in &filled {
                    let dot = (0..d).fold(T::zero(), |acc, i| acc + cand[i] * q[(i, c)]);
                    for (i, x) in cand.iter_mut().enumerate() {
                        *x -= dot * q[(i, c)];
                    }
                }
            }
            let norm = cand.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("dimension is at least one");
        for (i, x) in cand.into_iter().enumerate() {
            q[(i, target)] = x / norm;
        }
        filled.push(target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_error(q: &Matrix<f64>) -> f64 {
        let qtq = q.transpose().matmul(q);
        qtq.max_abs_diff(&Matrix::identity(q.ncols()))
    }

    #[test]
    fn diagonal_matrix() {
        let a = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -5.0]]).unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert_eq!(svd.singular_values, vec![5.0, 3.0]);
        assert!(svd.reconstruct(2).max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn wide_matrix_goes_through_transpose() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0, 4.0], vec![2.0, 0.0, -1.0, 1.0]]).unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert_eq!(svd.u.nrows(), 2);
        assert_eq!(svd.v.nrows(), 4);
        assert!(svd.reconstruct(2).max_abs_diff(&a) < 1e-12);
        assert!(orthonormality_error(&svd.v) < 1e-12);
    }

    #[test]
    fn rank_deficient_left_vectors_completed() {
        let a = Matrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 0.0, 0.0],
            vec![-1.0, -2.0, -3.0],
        ])
        .unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert!(svd.singular_values[1] < 1e-12);
        assert!(orthonormality_error(&svd.u) < 1e-12);
        assert!(orthonormality_error(&svd.v) < 1e-12);
    }

    #[test]
    fn parallel_columns_converge() {
        let a = Matrix::from_rows(&[vec![1.0, -2.5], vec![-1.0, 2.5]]).unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert!((svd.singular_values[0] - 14.5f64.sqrt()).abs() < 1e-12);
        assert!(svd.singular_values[1] < 1e-12);
        assert!(orthonormality_error(&svd.u) < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let svd = jacobi_svd(&Matrix::<f64>::zeros(3, 2)).unwrap();
        assert_eq!(svd.singular_values, vec![0.0, 0.0]);
        assert!(orthonormality_error(&svd.u) < 1e-15);
    }

    #[test]
    fn single_precision() {
        let a = Matrix::from_rows(&[vec![2.0f32, 1.0], vec![1.0, 2.0]]).unwrap();
        let svd = jacobi_svd(&a).unwrap();
        assert!((svd.singular_values[0] - 3.0).abs() < 1e-5);
        assert!((svd.singular_values[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn non_finite_rejected() {
        let a = Matrix::from_rows(&[vec![f64::NAN]]).unwrap();
        assert!(matches!(jacobi_svd(&a), Err(PcaError::NonFinite)));
    }
}
