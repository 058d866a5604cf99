//! Minimal deterministic SVG writing shared by the biplot and overlay renderers.
//!
//! Drawings live in data coordinates: the viewBox is the data extent (origin
//! included) plus a 10% margin, and y is negated so that up is positive.

use std::io::{self, Write};

pub(crate) const CANVAS_PX: u32 = 800;
const MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Frame {
    x0: f64,
    y0: f64,
    width: f64,
    height: f64,
}

impl Frame {
    /// Bounding box of `points` and the origin, padded by 10% per side.
    /// A degenerate extent becomes a unit span centred on the data.
    pub(crate) fn around(points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (x, y) in points {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        let span = |lo: f64, hi: f64| {
            if hi - lo > 0.0 {
                (lo, hi - lo)
            } else {
                (lo - 0.5, 1.0)
            }
        };
        let (xlo, w) = span(xmin, xmax);
        let (ylo, h) = span(ymin, ymax);
        Self {
            x0: xlo - MARGIN * w,
            y0: -(ylo + h) - MARGIN * h,
            width: w * (1.0 + 2.0 * MARGIN),
            height: h * (1.0 + 2.0 * MARGIN),
        }
    }

    /// Length used to size text, markers and offsets.
    pub(crate) fn unit(&self) -> f64 {
        self.width.max(self.height)
    }

    /// Length of one output pixel in data units; the viewBox scales uniformly
    /// by its larger side.
    pub(crate) fn px(&self) -> f64 {
        self.unit() / f64::from(CANVAS_PX)
    }

    /// Text anchor keeping a label at `x` inside the frame: labels in the
    /// outer thirds grow towards the centre.
    pub(crate) fn anchor_for(&self, x: f64) -> &'static str {
        let third = self.width / 3.0;
        if x < self.x0 + third {
            "start"
        } else if x > self.x0 + 2.0 * third {
            "end"
        } else {
            "middle"
        }
    }

    pub(crate) fn left(&self) -> f64 {
        self.x0
    }

    pub(crate) fn right(&self) -> f64 {
        self.x0 + self.width
    }

    /// Data-space bottom and top.
    pub(crate) fn bottom(&self) -> f64 {
        -(self.y0 + self.height)
    }

    pub(crate) fn top(&self) -> f64 {
        -self.y0
    }

    pub(crate) fn open(&self, out: &mut dyn Write, title: &str) -> io::Result<()> {
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_PX}" height="{CANVAS_PX}" viewBox="{} {} {} {}" font-family="sans-serif" font-size="{}">"#,
            num(self.x0),
            num(self.y0),
            num(self.width),
            num(self.height),
            num(0.025 * self.unit())
        )?;
        writeln!(out, "<title>{}</title>", escape(title))?;
        writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
            num(self.x0),
            num(self.y0),
            num(self.width),
            num(self.height)
        )
    }

    pub(crate) fn close(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "</svg>")
    }

    /// Dashed axes through the origin labelled PC1 and PC2.
    pub(crate) fn axes(&self, out: &mut dyn Write) -> io::Result<()> {
        let u = self.unit();
        let px = self.px();
        writeln!(
            out,
            r##"<g class="axes" stroke="#999999" stroke-width="{}" stroke-dasharray="{} {}">"##,
            num(px),
            num(4.0 * px),
            num(4.0 * px)
        )?;
        writeln!(
            out,
            r#"<line x1="{}" y1="0" x2="{}" y2="0"/>"#,
            num(self.left()),
            num(self.right())
        )?;
        writeln!(
            out,
            r#"<line x1="0" y1="{}" x2="0" y2="{}"/>"#,
            num(-self.bottom()),
            num(-self.top())
        )?;
        writeln!(out, "</g>")?;
        writeln!(
            out,
            r##"<text x="{}" y="{}" text-anchor="end" fill="#666666">PC1</text>"##,
            num(self.right() - 0.01 * u),
            num(-0.015 * u)
        )?;
        writeln!(
            out,
            r##"<text x="{}" y="{}" fill="#666666">PC2</text>"##,
            num(0.01 * u),
            num(-self.top() + 0.03 * u)
        )
    }
}

/// Fixed six-decimal rendering with negative zero folded to zero.
pub(crate) fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0.000000".to_owned()
    } else {
        s
    }
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
