//! Principal component analysis of motif matrices.
//!
//! Columns are centered once, internally, and optionally divided by their
//! sample standard deviation. The decomposition is a one-sided Jacobi SVD of
//! the centered matrix; no covariance matrix is ever formed.

pub(crate) mod biplot;
mod jacobi;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::motif_stats::{column_means, MotifMatrix};
use crate::scalar::Scalar;

pub use biplot::{
    biplot_coordinates, biplot_from_parts, default_loading_scale, render_biplot_svg, Biplot,
};
pub use jacobi::{jacobi_svd, Svd, MAX_SWEEPS};

pub const DEFAULT_COMPONENTS: usize = 2;

#[derive(Debug, Error)]
pub enum PcaError {
    #[error("need at least 2 rows, got {rows}")]
    TooFewRows { rows: usize },
    #[error("k = {k} is outside 1..={max} for a {rows}x{cols} matrix")]
    ComponentsOutOfRange {
        k: usize,
        max: usize,
        rows: usize,
        cols: usize,
    },
    #[error("all rows are identical; explained variance is undefined")]
    ZeroVariance,
    #[error("matrix contains non-finite values")]
    NonFinite,
    #[error("Jacobi SVD did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("biplot needs at least 2 components, result has {k}")]
    TooFewComponents { k: usize },
    #[error("loading scale must be finite and non-negative, got {0}")]
    BadLoadingScale(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PcaError {
    /// Domain errors are caller mistakes; the rest are numerical or I/O.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Self::TooFewRows { .. }
                | Self::ComponentsOutOfRange { .. }
                | Self::ZeroVariance
                | Self::NonFinite
                | Self::TooFewComponents { .. }
                | Self::BadLoadingScale(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PcaOptions {
    pub components: usize,
    pub standardize: bool,
}

impl Default for PcaOptions {
    fn default() -> Self {
        Self {
            components: DEFAULT_COMPONENTS,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PcaResult<T> {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// rows × k
    pub scores: Matrix<T>,
    /// cols × k, orthonormal columns
    pub loadings: Matrix<T>,
    pub singular_values: Vec<T>,
    pub explained_ratio: Vec<T>,
    pub cumulative_ratio: Vec<T>,
    pub k: usize,
    /// Explained ratios of all `min(rows − 1, cols)` components.
    pub all_explained_ratio: Vec<T>,
    pub total_variance: T,
    pub column_means: Vec<T>,
    /// Divisors applied after centering, present when standardized.
    pub column_scales: Option<Vec<T>>,
}

pub fn max_components(rows: usize, cols: usize) -> usize {
    rows.saturating_sub(1).min(cols)
}

/// PCA of a motif matrix with `k` components, centering only.
pub fn pca<T: Scalar>(matrix: &MotifMatrix<T>, k: usize) -> Result<PcaResult<T>, PcaError> {
    pca_with(
        matrix,
        &PcaOptions {
            components: k,
            ..PcaOptions::default()
        },
    )
}

pub fn pca_with<T: Scalar>(
    matrix: &MotifMatrix<T>,
    options: &PcaOptions,
) -> Result<PcaResult<T>, PcaError> {
    let cols = MotifMatrix::<T>::col_labels()
        .iter()
        .map(|c| c.to_string())
        .collect();
    pca_labeled(&matrix.values, matrix.row_labels.clone(), cols, options)
}

/// PCA of an arbitrary matrix. Labels may be empty, in which case indices are used.
pub fn pca_labeled<T: Scalar>(
    values: &Matrix<T>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    options: &PcaOptions,
) -> Result<PcaResult<T>, PcaError> {
    let (rows, cols) = (values.nrows(), values.ncols());
    if rows < 2 {
        return Err(PcaError::TooFewRows { rows });
    }
    let max = max_components(rows, cols);
    let k = options.components;
    if k == 0 || k > max {
        return Err(PcaError::ComponentsOutOfRange { k, max, rows, cols });
    }
    if !values.is_finite() {
        return Err(PcaError::NonFinite);
    }

    let means = column_means(values);
    let mut centered = Matrix::from_fn(rows, cols, |r, c| values[(r, c)] - means[c]);
    let column_scales = options.standardize.then(|| {
        let scales = sample_std(&centered);
        for r in 0..rows {
            for c in 0..cols {
                if scales[c] > T::zero() {
                    centered[(r, c)] /= scales[c];
                }
            }
        }
        scales
    });

    let svd = jacobi_svd(&centered)?;
    let total_variance = svd
        .singular_values
        .iter()
        .fold(T::zero(), |a, &s| a + s * s);
    if total_variance == T::zero() {
        return Err(PcaError::ZeroVariance);
    }

    let mut scores = Matrix::from_fn(rows, k, |r, c| svd.u[(r, c)] * svd.singular_values[c]);
    let mut loadings = svd.v.truncate_cols(k);
    for c in 0..k {
        if dominant_entry(&loadings.column(c)) < T::zero() {
            for r in 0..cols {
                loadings[(r, c)] = -loadings[(r, c)];
            }
            for r in 0..rows {
                scores[(r, c)] = -scores[(r, c)];
            }
        }
    }

    let all_explained_ratio: Vec<T> = svd.singular_values[..max]
        .iter()
        .map(|&s| s * s / total_variance)
        .collect();
    let explained_ratio = all_explained_ratio[..k].to_vec();
    let cumulative_ratio = explained_ratio
        .iter()
        .scan(T::zero(), |acc, &r| {
            *acc += r;
            Some(*acc)
        })
        .collect();

    Ok(PcaResult {
        row_labels: labels_or_indices(row_labels, rows),
        col_labels: labels_or_indices(col_labels, cols),
        scores,
        loadings,
        singular_values: svd.singular_values[..k].to_vec(),
        explained_ratio,
        cumulative_ratio,
        k,
        all_explained_ratio,
        total_variance,
        column_means: means,
        column_scales,
    })
}

/// The first entry whose magnitude is the column maximum, up to a relative 1e-9
/// so that near-ties resolve by position rather than by rounding noise.
fn dominant_entry<T: Scalar>(col: &[T]) -> T {
    let max = col.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let slack = max * T::from_f64_lossy(1e-9);
    col.iter()
        .copied()
        .find(|v| v.abs() >= max - slack)
        .unwrap_or_else(T::zero)
}

fn sample_std<T: Scalar>(centered: &Matrix<T>) -> Vec<T> {
    let denom = T::from_count(centered.nrows() as u64 - 1);
    (0..centered.ncols())
        .map(|c| {
            let ss = centered
                .column(c)
                .into_iter()
                .fold(T::zero(), |a, v| a + v * v);
            (ss / denom).sqrt()
        })
        .collect()
}

fn labels_or_indices(labels: Vec<String>, n: usize) -> Vec<String> {
    if labels.len() == n {
        labels
    } else {
        (1..=n).map(|i| i.to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(rows: &[Vec<f64>], k: usize) -> PcaResult<f64> {
        let m = Matrix::from_rows(rows).unwrap();
        pca_labeled(
            &m,
            vec![],
            vec![],
            &PcaOptions {
                components: k,
                standardize: false,
            },
        )
        .unwrap()
    }

    #[test]
    fn rank_one_explains_everything() {
        let base = [1.0, -2.0, 0.5, 3.0];
        let rows: Vec<Vec<f64>> = [1.0, 2.0, -1.0, 4.0]
            .iter()
            .map(|m| base.iter().map(|b| b * m).collect())
            .collect();
        let r = plain(&rows, 2);
        assert!((r.explained_ratio[0] - 1.0).abs() < 1e-9);
        assert!(r.explained_ratio[1].abs() < 1e-9);
    }

    #[test]
    fn duplicate_rows_share_scores() {
        let r = plain(
            &[
                vec![1.0, 2.0, 0.0],
                vec![3.0, -1.0, 2.0],
                vec![1.0, 2.0, 0.0],
                vec![0.0, 0.0, 5.0],
            ],
            2,
        );
        for c in 0..2 {
            assert!((r.scores[(0, c)] - r.scores[(2, c)]).abs() < 1e-12);
        }
    }

    #[test]
    fn component_bounds() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 5.0], vec![0.0, 1.0]]).unwrap();
        let opts = |k| PcaOptions {
            components: k,
            standardize: false,
        };
        assert!(pca_labeled(&m, vec![], vec![], &opts(2)).is_ok());
        let err = pca_labeled(&m, vec![], vec![], &opts(3)).unwrap_err();
        assert!(matches!(err, PcaError::ComponentsOutOfRange { max: 2, .. }));
        assert!(err.is_domain());
        assert!(pca_labeled(&m, vec![], vec![], &opts(0)).is_err());
        let one = Matrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            pca_labeled(&one, vec![], vec![], &opts(1)),
            Err(PcaError::TooFewRows { rows: 1 })
        ));
    }

    #[test]
    fn identical_rows_have_no_variance() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            pca_labeled(
                &m,
                vec![],
                vec![],
                &PcaOptions {
                    components: 1,
                    standardize: false
                }
            ),
            Err(PcaError::ZeroVariance)
        ));
    }

    #[test]
    fn sign_convention_applied() {
        let r = plain(&[vec![0.0, 0.0], vec![-1.0, -3.0], vec![1.0, 3.0]], 1);
        assert!(r.loadings[(1, 0)] > 0.0);
        assert!(r.scores[(2, 0)] > 0.0);
    }

    #[test]
    fn ratios_sum_to_one_and_accumulate() {
        let r = plain(
            &[
                vec![2.0, 0.0, 1.0],
                vec![0.0, 1.0, 3.0],
                vec![1.0, 1.0, 1.0],
                vec![4.0, 2.0, 0.0],
            ],
            3,
        );
        let sum: f64 = r.all_explained_ratio.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!((r.cumulative_ratio[2] - sum).abs() < 1e-12);
        assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn standardize_equalizes_scales() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 100.0], vec![2.0, 300.0], vec![3.0, 200.0]];
        let m = Matrix::from_rows(&rows).unwrap();
        let opts = PcaOptions {
            components: 2,
            standardize: true,
        };
        let r = pca_labeled(&m, vec![], vec![], &opts).unwrap();
        // Standardized columns each carry (n − 1) units of variance.
        assert!((r.total_variance - 4.0).abs() < 1e-12);
        let scales = r.column_scales.unwrap();
        assert!((scales[0] - 1.0).abs() < 1e-12 && (scales[1] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn standardize_leaves_constant_column() {
        let m = Matrix::from_rows(&[vec![1.0, 7.0], vec![2.0, 7.0], vec![4.0, 7.0]]).unwrap();
        let opts = PcaOptions {
            components: 1,
            standardize: true,
        };
        let r = pca_labeled(&m, vec![], vec![], &opts).unwrap();
        assert_eq!(r.loadings[(1, 0)], 0.0);
    }

    #[test]
    fn f32_pipeline() {
        let m = Matrix::from_rows(&[vec![1.0f32, 2.0], vec![2.0, 4.5], vec![3.0, 5.5]]).unwrap();
        let r = pca_labeled(&m, vec![], vec![], &PcaOptions::default()).unwrap();
        let sum: f32 = r.all_explained_ratio.iter().sum();
        assert!((sum - 1.0).abs() < 1e-5);
    }
}
