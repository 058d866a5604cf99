//! CSV emitters and readers for motif matrices and PCA tables.
//!
//! Every table has a header row and a label in the first column. Numbers are
//! rounded to 12 significant digits and then printed in their shortest form,
//! so `0.1 + 0.2` is written as `0.3` and negative zero as `0`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use thiserror::Error;

use crate::corpus::{MotifLetter, MOTIF_LETTERS};
use crate::matrix::Matrix;
use crate::motif_stats::{MatrixKind, MotifMatrix};
use crate::pca::PcaResult;
use crate::scalar::Scalar;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("unexpected header {found:?}, expected {expected:?}")]
    Header {
        found: Vec<String>,
        expected: Vec<String>,
    },
    #[error("line {line}: {message}")]
    Value { line: u64, message: String },
}

pub fn format_number<T: Scalar>(v: T) -> String {
    let v = v.to_f64_lossy();
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("scientific notation parses");
    if rounded == 0.0 {
        "0".to_owned()
    } else {
        rounded.to_string()
    }
}

pub fn letter_header(first: &str) -> Vec<String> {
    std::iter::once(first.to_owned())
        .chain(MOTIF_LETTERS.iter().map(char::to_string))
        .collect()
}

/// Writes `label,<cols...>` then one row per label.
pub fn write_labeled<T: Scalar>(
    out: impl Write,
    header: &[String],
    row_labels: &[String],
    values: &Matrix<T>,
) -> Result<(), CsvError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for (label, row) in row_labels.iter().zip(values.rows_iter()) {
        let mut record = vec![label.clone()];
        record.extend(row.iter().map(|&v| format_number(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Header, row labels and values of a labelled table.
pub type LabeledTable<T> = (Vec<String>, Vec<String>, Matrix<T>);

/// Reads a table written by [`write_labeled`]; the header must equal `expected`
/// when given.
pub fn read_labeled<T: Scalar>(
    input: impl Read,
    expected: Option<&[String]>,
) -> Result<LabeledTable<T>, CsvError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if let Some(expected) = expected {
        if header != expected {
            return Err(CsvError::Header {
                found: header,
                expected: expected.to_vec(),
            });
        }
    }
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let mut fields = record.iter();
        labels.push(fields.next().unwrap_or_default().to_owned());
        let row = fields
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map(T::from_f64_lossy)
                    .map_err(|e| CsvError::Value {
                        line,
                        message: format!("{f:?}: {e}"),
                    })
            })
            .collect::<Result<Vec<T>, _>>()?;
        rows.push(row);
    }
    let values = if rows.is_empty() {
        Matrix::zeros(0, header.len().saturating_sub(1))
    } else {
        Matrix::from_rows(&rows).ok_or_else(|| CsvError::Value {
            line: 0,
            message: "rows have different lengths".to_owned(),
        })?
    };
    Ok((header, labels, values))
}

pub fn write_motif_matrix<T: Scalar>(m: &MotifMatrix<T>, out: impl Write) -> Result<(), CsvError> {
    write_labeled(out, &letter_header("label"), &m.row_labels, &m.values)
}

/// The file does not record its kind, so the caller states it.
pub fn read_motif_matrix<T: Scalar>(
    input: impl Read,
    kind: MatrixKind,
) -> Result<MotifMatrix<T>, CsvError> {
    let (_, labels, values) = read_labeled(input, Some(&letter_header("label")))?;
    Ok(MotifMatrix {
        row_labels: labels,
        values,
        kind,
    })
}

/// Corpus-wide letter counts as a one-row motif table labelled `corpus`.
pub fn write_letter_counts(
    counts: &BTreeMap<MotifLetter, u64>,
    out: impl Write,
) -> Result<(), CsvError> {
    let row: Vec<f64> = MotifLetter::all()
        .map(|l| counts.get(&l).copied().unwrap_or(0) as f64)
        .collect();
    let values = Matrix::from_rows(&[row]).expect("single row");
    write_labeled(
        out,
        &letter_header("label"),
        &["corpus".to_owned()],
        &values,
    )
}

pub fn read_letter_counts(input: impl Read) -> Result<BTreeMap<MotifLetter, u64>, CsvError> {
    let (_, labels, values) = read_labeled::<f64>(input, Some(&letter_header("label")))?;
    if labels.len() != 1 {
        return Err(CsvError::Value {
            line: 2,
            message: format!("expected one row of counts, found {}", labels.len()),
        });
    }
    Ok(MotifLetter::all()
        .map(|l| (l, values[(0, l.index())] as u64))
        .collect())
}

fn component_header(first: &str, k: usize) -> Vec<String> {
    std::iter::once(first.to_owned())
        .chain((1..=k).map(|i| format!("PC{i}")))
        .collect()
}

pub fn write_scores<T: Scalar>(r: &PcaResult<T>, out: impl Write) -> Result<(), CsvError> {
    write_labeled(
        out,
        &component_header("label", r.k),
        &r.row_labels,
        &r.scores,
    )
}

pub fn write_loadings<T: Scalar>(r: &PcaResult<T>, out: impl Write) -> Result<(), CsvError> {
    write_labeled(
        out,
        &component_header("variable", r.k),
        &r.col_labels,
        &r.loadings,
    )
}

/// One row per retained component: singular value, explained and cumulative ratio.
pub fn write_ratios<T: Scalar>(r: &PcaResult<T>, out: impl Write) -> Result<(), CsvError> {
    let header: Vec<String> = [
        "component",
        "singular_value",
        "explained_ratio",
        "cumulative_ratio",
    ]
    .map(str::to_owned)
    .to_vec();
    let labels: Vec<String> = (1..=r.k).map(|i| format!("PC{i}")).collect();
    let values = Matrix::from_fn(r.k, 3, |i, c| match c {
        0 => r.singular_values[i],
        1 => r.explained_ratio[i],
        _ => r.cumulative_ratio[i],
    });
    write_labeled(out, &header, &labels, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(0.1f64 + 0.2), "0.3");
        assert_eq!(format_number(-0.0f64), "0");
        assert_eq!(format_number(1.0f64 / 3.0), "0.333333333333");
        assert_eq!(format_number(123_456_789.123_456_78_f64), "123456789.123");
        assert_eq!(format_number(2.5e-15f64), "0.0000000000000025");
        assert_eq!(format_number(7.0f64), "7");
    }

    #[test]
    fn motif_matrix_round_trip() {
        let values = Matrix::from_fn(2, 23, |r, c| (r * 23 + c) as f64 / 7.0);
        let m = MotifMatrix::new(
            vec!["wild".into(), "x,y".into()],
            values,
            MatrixKind::Relative,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_motif_matrix(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("label,A,B,C,D,E,F,G,H,J,K,L,M,N,P,Q,R,S,T,U,V,W,X,Z\n"));
        assert!(text.contains("\"x,y\""));
        let back: MotifMatrix<f64> = read_motif_matrix(&buf[..], MatrixKind::Relative).unwrap();
        assert_eq!(back.row_labels, m.row_labels);
        assert!(back.values.max_abs_diff(&m.values) < 1e-11);
    }

    #[test]
    fn wrong_header_rejected() {
        let err = read_motif_matrix::<f64>("label,A,B\nx,1,2\n".as_bytes(), MatrixKind::RawCounts)
            .unwrap_err();
        assert!(matches!(err, CsvError::Header { .. }));
    }

    #[test]
    fn bad_number_reports_line() {
        let mut text = letter_header("label").join(",");
        text.push_str("\nx");
        text.push_str(&",1".repeat(22));
        text.push_str(",oops\n");
        let err = read_motif_matrix::<f64>(text.as_bytes(), MatrixKind::RawCounts).unwrap_err();
        assert!(matches!(err, CsvError::Value { line: 2, .. }), "{err}");
    }

    #[test]
    fn letter_counts_round_trip() {
        let counts: BTreeMap<MotifLetter, u64> = MotifLetter::all()
            .map(|l| (l, l.index() as u64 * 3))
            .collect();
        let mut buf = Vec::new();
        write_letter_counts(&counts, &mut buf).unwrap();
        assert_eq!(read_letter_counts(&buf[..]).unwrap(), counts);
    }
}
