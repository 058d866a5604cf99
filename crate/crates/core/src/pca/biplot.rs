use std::io::Write;

use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::svg::{escape, num, Frame};

use super::{PcaError, PcaResult};

/// Fraction of the score-cloud radius reached by the longest default arrow.
const ARROW_REACH: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct Biplot<T> {
    pub row_labels: Vec<String>,
    pub points: Vec<[T; 2]>,
    pub var_labels: Vec<String>,
    pub arrows: Vec<[T; 2]>,
    pub loading_scale: T,
}

pub(crate) type Xy = (f64, f64);

impl<T: Scalar> Biplot<T> {
    pub fn point(&self, label: &str) -> Option<[T; 2]> {
        let i = self.row_labels.iter().position(|l| l == label)?;
        Some(self.points[i])
    }
}

/// Scale that makes the longest loading arrow 80% of the farthest row point's
/// distance from the origin; 1 when either is zero.
pub fn default_loading_scale<T: Scalar>(r: &PcaResult<T>) -> T {
    scale_for(&r.scores, &r.loadings)
}

fn scale_for<T: Scalar>(scores: &Matrix<T>, loadings: &Matrix<T>) -> T {
    let norm = |m: &Matrix<T>, i: usize| (m[(i, 0)] * m[(i, 0)] + m[(i, 1)] * m[(i, 1)]).sqrt();
    let radius = (0..scores.nrows()).fold(T::zero(), |acc, i| acc.max(norm(scores, i)));
    let longest = (0..loadings.nrows()).fold(T::zero(), |acc, i| acc.max(norm(loadings, i)));
    if radius == T::zero() || longest == T::zero() {
        T::one()
    } else {
        T::from_f64_lossy(ARROW_REACH) * radius / longest
    }
}

pub fn biplot_coordinates<T: Scalar>(
    r: &PcaResult<T>,
    loading_scale: Option<T>,
) -> Result<Biplot<T>, PcaError> {
    if r.k < 2 {
        return Err(PcaError::TooFewComponents { k: r.k });
    }
    biplot_from_parts(
        &r.row_labels,
        &r.scores,
        &r.col_labels,
        &r.loadings,
        loading_scale,
    )
}

/// Biplot from score and loading tables, e.g. ones read back from CSV.
pub fn biplot_from_parts<T: Scalar>(
    row_labels: &[String],
    scores: &Matrix<T>,
    var_labels: &[String],
    loadings: &Matrix<T>,
    loading_scale: Option<T>,
) -> Result<Biplot<T>, PcaError> {
    let k = scores.ncols().min(loadings.ncols());
    if k < 2 {
        return Err(PcaError::TooFewComponents { k });
    }
    let scale = match loading_scale {
        Some(s) if !s.is_finite() || s < T::zero() => {
            return Err(PcaError::BadLoadingScale(s.to_f64_lossy()))
        }
        Some(s) => s,
        None => scale_for(scores, loadings),
    };
    Ok(Biplot {
        row_labels: row_labels.to_vec(),
        points: (0..scores.nrows())
            .map(|i| [scores[(i, 0)], scores[(i, 1)]])
            .collect(),
        var_labels: var_labels.to_vec(),
        arrows: (0..loadings.nrows())
            .map(|i| [loadings[(i, 0)] * scale, loadings[(i, 1)] * scale])
            .collect(),
        loading_scale: scale,
    })
}

/// Writes the biplot as SVG. Output depends only on the coordinates and labels.
pub fn render_biplot_svg<T: Scalar>(
    b: &Biplot<T>,
    title: &str,
    out: &mut dyn Write,
) -> Result<(), PcaError> {
    let (pts, arrows) = b.to_f64()?;
    let frame = Frame::around(pts.iter().chain(&arrows).copied());
    frame.open(out, title)?;
    frame.axes(out)?;
    write_arrows(out, &frame, &b.var_labels, &arrows, ARROW_COLOR)?;
    write_points(out, &frame, &b.row_labels, &pts, POINT_COLOR)?;
    frame.close(out)?;
    Ok(())
}

pub(crate) const ARROW_COLOR: &str = "#b03a2e";
pub(crate) const POINT_COLOR: &str = "#1f4e79";

impl<T: Scalar> Biplot<T> {
    /// Points and arrows as `f64` pairs; errors on any non-finite coordinate.
    pub(crate) fn to_f64(&self) -> Result<(Vec<Xy>, Vec<Xy>), PcaError> {
        let conv = |v: &[[T; 2]]| -> Vec<(f64, f64)> {
            v.iter()
                .map(|p| (p[0].to_f64_lossy(), p[1].to_f64_lossy()))
                .collect()
        };
        let (pts, arrows) = (conv(&self.points), conv(&self.arrows));
        if pts
            .iter()
            .chain(&arrows)
            .any(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(PcaError::NonFinite);
        }
        Ok((pts, arrows))
    }
}

pub(crate) fn write_arrows(
    out: &mut dyn Write,
    frame: &Frame,
    labels: &[String],
    arrows: &[(f64, f64)],
    color: &str,
) -> std::io::Result<()> {
    let u = frame.unit();
    writeln!(
        out,
        r#"<g class="arrows" stroke="{color}" fill="{color}" stroke-width="{}">"#,
        num(1.5 * frame.px())
    )?;
    // Zero-length arrows (letters absent from the data) would only stack labels on the origin.
    for (label, &(x, y)) in labels
        .iter()
        .zip(arrows)
        .filter(|(_, (x, y))| x.hypot(*y) > 0.0)
    {
        writeln!(
            out,
            r#"<line x1="0" y1="0" x2="{}" y2="{}"/>"#,
            num(x),
            num(-y)
        )?;
        let len = x.hypot(y);
        let head = (0.02 * u).min(0.5 * len);
        let (dx, dy) = (x / len, y / len);
        let (bx, by) = (x - head * dx, y - head * dy);
        let (px, py) = (-dy * head * 0.4, dx * head * 0.4);
        writeln!(
            out,
            r#"<polygon points="{},{} {},{} {},{}" stroke="none"/>"#,
            num(x),
            num(-y),
            num(bx + px),
            num(-(by + py)),
            num(bx - px),
            num(-(by - py))
        )?;
        let (lx, ly) = (x + 0.03 * u * x / len, y + 0.03 * u * y / len);
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle" stroke="none">{}</text>"#,
            num(lx),
            num(-ly),
            escape(label)
        )?;
    }
    writeln!(out, "</g>")
}

pub(crate) fn write_points(
    out: &mut dyn Write,
    frame: &Frame,
    labels: &[String],
    pts: &[(f64, f64)],
    color: &str,
) -> std::io::Result<()> {
    let u = frame.unit();
    writeln!(out, r#"<g class="points" fill="{color}">"#)?;
    for (label, &(x, y)) in labels.iter().zip(pts) {
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            num(x),
            num(-y),
            num(0.008 * u)
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="{}">{}</text>"#,
            num(x),
            num(-y - 0.02 * u),
            frame.anchor_for(x),
            escape(label)
        )?;
    }
    writeln!(out, "</g>")
}
