//! Motif-letter tables: corpus frequencies, category × letter and animal × letter matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Category, Corpus, MotifLetter, TaleType, MOTIF_LETTERS};
use crate::extraction::MentionTable;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum MotifError {
    #[error("expected a {expected} matrix, got {actual}")]
    WrongKind {
        expected: &'static str,
        actual: MatrixKind,
    },
    #[error("matrix has {rows} labels for {values} rows")]
    Shape { rows: usize, values: usize },
}

/// What a tale contributes per motif letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MotifUnit {
    /// Every tagged motif counts.
    #[default]
    Occurrences,
    /// A letter counts at most once per tale.
    PerTale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    RawCounts,
    Relative,
    Centered,
}

impl std::fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::RawCounts => "raw-counts",
            Self::Relative => "relative",
            Self::Centered => "centered",
        })
    }
}

/// Rows are categories or animals; columns are the 23 motif letters in index order.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifMatrix<T> {
    pub row_labels: Vec<String>,
    pub values: Matrix<T>,
    pub kind: MatrixKind,
}

impl<T: Scalar> MotifMatrix<T> {
    pub fn new(
        row_labels: Vec<String>,
        values: Matrix<T>,
        kind: MatrixKind,
    ) -> Result<Self, MotifError> {
        if row_labels.len() != values.nrows() {
            return Err(MotifError::Shape {
                rows: row_labels.len(),
                values: values.nrows(),
            });
        }
        Ok(Self {
            row_labels,
            values,
            kind,
        })
    }

    pub fn col_labels() -> &'static [char; 23] {
        &MOTIF_LETTERS
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn row_sums(&self) -> Vec<T> {
        self.values
            .rows_iter()
            .map(|r| r.iter().fold(T::zero(), |a, &v| a + v))
            .collect()
    }

    pub fn column_sums(&self) -> Vec<T> {
        (0..self.values.ncols())
            .map(|c| {
                self.values
                    .column(c)
                    .into_iter()
                    .fold(T::zero(), |a, v| a + v)
            })
            .collect()
    }

    pub fn get(&self, row: &str, letter: MotifLetter) -> Option<T> {
        let r = self.row_labels.iter().position(|l| l == row)?;
        Some(self.values[(r, letter.index())])
    }

    /// Elementwise sum of two raw-count matrices with identical row labels.
    pub fn add(&self, other: &Self) -> Option<Self> {
        if self.row_labels != other.row_labels || self.kind != other.kind {
            return None;
        }
        let values = Matrix::from_fn(self.values.nrows(), self.values.ncols(), |r, c| {
            self.values[(r, c)] + other.values[(r, c)]
        });
        Some(Self {
            row_labels: self.row_labels.clone(),
            values,
            kind: self.kind,
        })
    }
}

/// Per-letter counts of one tale's motifs.
fn tale_letter_counts(tale: &TaleType, unit: MotifUnit) -> [u64; 23] {
    let mut counts = [0u64; 23];
    for code in &tale.motifs {
        counts[code.letter.index()] += 1;
    }
    if unit == MotifUnit::PerTale {
        for c in &mut counts {
            *c = (*c).min(1);
        }
    }
    counts
}

/// Corpus-wide motif counts keyed by letter; every letter present, zeros included.
pub fn motif_letter_counts(corpus: &Corpus, unit: MotifUnit) -> BTreeMap<MotifLetter, u64> {
    let mut totals = [0u64; 23];
    for tale in corpus.analyzable() {
        for (t, c) in totals.iter_mut().zip(tale_letter_counts(tale, unit)) {
            *t += c;
        }
    }
    MotifLetter::all().zip(totals).collect()
}

/// Most frequent letter; ties go to the earlier letter. `None` when all counts are zero.
pub fn argmax_letter(counts: &BTreeMap<MotifLetter, u64>) -> Option<MotifLetter> {
    counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .fold(
            None,
            |best: Option<(MotifLetter, u64)>, (&l, &n)| match best {
                Some((_, bn)) if bn >= n => best,
                _ => Some((l, n)),
            },
        )
        .map(|(l, _)| l)
}

/// Raw counts with one row per category, in index order.
pub fn category_motif_matrix<T: Scalar>(corpus: &Corpus, unit: MotifUnit) -> MotifMatrix<T> {
    let mut values = Matrix::zeros(Category::ALL.len(), MOTIF_LETTERS.len());
    for tale in corpus.analyzable() {
        let row = Category::ALL
            .iter()
            .position(|&c| c == tale.category)
            .expect("every category is listed");
        for (c, n) in tale_letter_counts(tale, unit).into_iter().enumerate() {
            values[(row, c)] += T::from_count(n);
        }
    }
    MotifMatrix {
        row_labels: Category::ALL.iter().map(|c| c.key().to_string()).collect(),
        values,
        kind: MatrixKind::RawCounts,
    }
}

/// Divides every row by its sum; all-zero rows stay zero.
pub fn to_relative<T: Scalar>(m: &MotifMatrix<T>) -> Result<MotifMatrix<T>, MotifError> {
    if m.kind != MatrixKind::RawCounts {
        return Err(MotifError::WrongKind {
            expected: "raw-counts",
            actual: m.kind,
        });
    }
    let sums = m.row_sums();
    let values = Matrix::from_fn(m.values.nrows(), m.values.ncols(), |r, c| {
        if sums[r] == T::zero() {
            T::zero()
        } else {
            m.values[(r, c)] / sums[r]
        }
    });
    Ok(MotifMatrix {
        row_labels: m.row_labels.clone(),
        values,
        kind: MatrixKind::Relative,
    })
}

/// Column means over rows.
pub fn column_means<T: Scalar>(values: &Matrix<T>) -> Vec<T> {
    let n = T::from_count(values.nrows() as u64);
    (0..values.ncols())
        .map(|c| values.column(c).into_iter().fold(T::zero(), |a, v| a + v) / n)
        .collect()
}

/// Subtracts each column's mean. Accepts relative or already-centered input.
pub fn center_columns<T: Scalar>(m: &MotifMatrix<T>) -> Result<MotifMatrix<T>, MotifError> {
    if m.kind == MatrixKind::RawCounts {
        return Err(MotifError::WrongKind {
            expected: "relative",
            actual: m.kind,
        });
    }
    if m.values.nrows() == 0 {
        return Ok(MotifMatrix {
            kind: MatrixKind::Centered,
            ..m.clone()
        });
    }
    let means = column_means(&m.values);
    let values = Matrix::from_fn(m.values.nrows(), m.values.ncols(), |r, c| {
        m.values[(r, c)] - means[c]
    });
    Ok(MotifMatrix {
        row_labels: m.row_labels.clone(),
        values,
        kind: MatrixKind::Centered,
    })
}

/// Raw counts per animal: each tale's motifs are attributed to every animal in it.
///
/// Only animals whose corpus-wide frequency in `frequencies` is strictly above
/// `min_freq` get a row; rows are sorted by name.
pub fn animal_motif_matrix<T: Scalar>(
    corpus: &Corpus,
    table: &MentionTable,
    frequencies: &BTreeMap<String, u64>,
    min_freq: u64,
    unit: MotifUnit,
) -> MotifMatrix<T> {
    let animals: Vec<&String> = frequencies
        .iter()
        .filter(|(_, &n)| n > min_freq)
        .map(|(name, _)| name)
        .collect();
    let mut values = Matrix::zeros(animals.len(), MOTIF_LETTERS.len());
    for tale in corpus.analyzable() {
        let Some(set) = table.per_tale_sets.get(&tale.id) else {
            continue;
        };
        let letters = tale_letter_counts(tale, unit);
        for (row, animal) in animals.iter().enumerate() {
            if set.contains(*animal) {
                for (c, n) in letters.iter().enumerate() {
                    values[(row, c)] += T::from_count(*n);
                }
            }
        }
    }
    MotifMatrix {
        row_labels: animals.into_iter().cloned().collect(),
        values,
        kind: MatrixKind::RawCounts,
    }
}
