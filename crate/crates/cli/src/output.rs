//! JSON and SVG emitters. Rationals are written as lowest-terms strings.

use std::fmt::Write as _;

use num::ToPrimitive;
use ppersist::linalg::{format_rational, sqrt_decimal, FieldSpec, Matrix, Rational};
use ppersist::persistence::{Barcode, Death};
use serde::Serialize;

const SQRT_DIGITS: usize = 6;

/// How bar endpoints relate to the plotted axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    /// Endpoints are squared distances; plots and approximations use roots.
    Squared,
    Plain,
}

#[derive(Serialize)]
pub struct BarJson {
    pub birth: String,
    pub death: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub birth_sqrt_approx: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub death_sqrt_approx: Option<String>,
}

#[derive(Serialize)]
pub struct BarcodeJson {
    pub degree: usize,
    pub field: String,
    pub scale: &'static str,
    pub bars: Vec<BarJson>,
}

pub fn barcode_json(barcode: &Barcode, field: FieldSpec, scale: Scale) -> BarcodeJson {
    let root = |q: &Rational| (scale == Scale::Squared).then(|| sqrt_decimal(q, SQRT_DIGITS));
    let bars = barcode
        .bars()
        .iter()
        .map(|b| BarJson {
            birth: format_rational(&b.birth),
            death: b.death.to_string(),
            birth_sqrt_approx: root(&b.birth),
            death_sqrt_approx: match &b.death {
                Death::Finite(d) => root(d),
                Death::Infinite => (scale == Scale::Squared).then(|| "inf".to_string()),
            },
        })
        .collect();
    BarcodeJson {
        degree: barcode.degree,
        field: field.to_string(),
        scale: match scale {
            Scale::Squared => "t2",
            Scale::Plain => "value",
        },
        bars,
    }
}

pub fn matrix_json(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect()
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn axis_value(q: &Rational, scale: Scale) -> f64 {
    match scale {
        Scale::Squared => sqrt_decimal(q, SQRT_DIGITS).parse().expect("decimal text"),
        Scale::Plain => q.to_f64().unwrap_or(0.0),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One horizontal bar per interval. Exact endpoints go in `data-` attributes
/// and tooltips; positions use the (root of the) endpoint as a decimal.
pub fn barcode_svg(barcode: &Barcode, field: FieldSpec, scale: Scale) -> String {
    let (width, left, right, top, row) = (640.0, 40.0, 20.0, 30.0, 14.0);
    let bars = barcode.bars();
    let values: Vec<f64> = barcode.endpoints().iter().map(|q| axis_value(q, scale)).collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
    let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(lo + 1.0);
    // room for infinite bars past the last endpoint
    hi += (hi - lo) * 0.1;
    let span = width - left - right;
    let x = |v: f64| left + (v - lo) / (hi - lo) * span;
    let height = top + row * bars.len() as f64 + 30.0;
    let axis_label = match scale {
        Scale::Squared => "t",
        Scale::Plain => "value",
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{left:.0}" y="18" font-family="monospace" font-size="12">H{} over {field}, bars: {}</text>"#,
        barcode.degree,
        bars.len()
    );
    for (i, b) in bars.iter().enumerate() {
        let y = top + row * i as f64;
        let x0 = x(axis_value(&b.birth, scale));
        let x1 = match &b.death {
            Death::Finite(d) => x(axis_value(d, scale)),
            Death::Infinite => x(hi),
        };
        let (birth, death) = (format_rational(&b.birth), b.death.to_string());
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="steelblue" data-birth="{}" data-death="{}"><title>[{}, {})</title></rect>"#,
            (x1 - x0).max(1.0),
            row * 0.7,
            escape(&birth),
            escape(&death),
            escape(&birth),
            escape(&death)
        );
    }
    let axis_y = top + row * bars.len() as f64 + 6.0;
    let _ = writeln!(
        out,
        r#"<line x1="{left:.3}" y1="{axis_y:.3}" x2="{:.3}" y2="{axis_y:.3}" stroke="black"/>"#,
        width - right
    );
    let _ = writeln!(
        out,
        r#"<text x="{left:.3}" y="{:.3}" font-family="monospace" font-size="10">{lo:.3}</text>"#,
        axis_y + 14.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-family="monospace" font-size="10" text-anchor="end">{hi:.3} ({axis_label})</text>"#,
        width - right,
        axis_y + 14.0
    );
    out.push_str("</svg>\n");
    out
}
