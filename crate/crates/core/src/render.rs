//! Deterministic SVG and CSV emission for plot scenes.
//!
//! Coordinates flow from exact rationals straight to fixed 15-significant-
//! digit decimal strings; no floating point touches the pipeline, so
//! identical scenes produce byte-identical output.

use std::fmt::Write as _;

use crate::decimal::Decimal;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scenes::PlotScene;

const WIDTH: i64 = 800;
const HEIGHT: i64 = 600;
const MARGIN: i64 = 60;
const SIG_DIGITS: u32 = 15;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
];

/// Output format of a rendered scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Csv,
}

pub fn render(scene: &PlotScene, format: RenderFormat) -> Result<Vec<u8>> {
    match format {
        RenderFormat::Svg => render_svg(scene).map(String::into_bytes),
        RenderFormat::Csv => render_csv(scene).map(String::into_bytes),
    }
}

fn fmt_sig(r: &Rational) -> String {
    Decimal::from_rational(r, SIG_DIGITS).to_string_sig(SIG_DIGITS)
}

struct Mapper {
    xmin: Rational,
    ymin: Rational,
    xspan: Rational,
    yspan: Rational,
}

impl Mapper {
    fn new(scene: &PlotScene) -> Result<Mapper> {
        let (xmin, xmax, ymin, ymax) = scene.viewport.clone();
        let xspan = &xmax - &xmin;
        let yspan = &ymax - &ymin;
        if !xspan.is_positive() || !yspan.is_positive() {
            return Err(Error::Config("degenerate viewport".into()));
        }
        Ok(Mapper {
            xmin,
            ymin,
            xspan,
            yspan,
        })
    }

    /// Scene coordinates to pixel coordinates, exactly in rationals.
    fn map(&self, x: &Rational, y: &Rational) -> (String, String) {
        let inner_w = Rational::from_int(WIDTH - 2 * MARGIN);
        let inner_h = Rational::from_int(HEIGHT - 2 * MARGIN);
        let margin = Rational::from_int(MARGIN);
        let x_frac = (&(x - &self.xmin) / &self.xspan).expect("positive span");
        let px = &margin + &(&x_frac * &inner_w);
        let y_frac = (&(y - &self.ymin) / &self.yspan).expect("positive span");
        let py = &margin + &(&(&Rational::one() - &y_frac) * &inner_h);
        (fmt_sig(&px), fmt_sig(&py))
    }
}

/// SVG 1.1 document: axes, one path per polyline, labeled markers, legend.
pub fn render_svg(scene: &PlotScene) -> Result<String> {
    if scene.is_empty() {
        return Err(Error::EmptyScene);
    }
    let m = Mapper::new(scene)?;
    let mut out = String::new();
    out.push_str(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n",
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n");

    // Axis lines through the origin when it is visible, else the frame edge.
    let (xmin, xmax, ymin, ymax) = scene.viewport.clone();
    let zero = Rational::zero();
    let x_axis_y = if ymin <= zero && zero <= ymax {
        zero.clone()
    } else {
        ymin.clone()
    };
    let y_axis_x = if xmin <= zero && zero <= xmax {
        zero.clone()
    } else {
        xmin.clone()
    };
    {
        let (x1, y1) = m.map(&xmin, &x_axis_y);
        let (x2, y2) = m.map(&xmax, &x_axis_y);
        let _ = writeln!(
            out,
            "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#999999\" stroke-width=\"1\"/>"
        );
        let (x3, y3) = m.map(&y_axis_x, &ymin);
        let (x4, y4) = m.map(&y_axis_x, &ymax);
        let _ = writeln!(
            out,
            "<line x1=\"{x3}\" y1=\"{y3}\" x2=\"{x4}\" y2=\"{y4}\" stroke=\"#999999\" stroke-width=\"1\"/>"
        );
        // Corner labels for the viewport range.
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#555555\">{} .. {}</text>",
            MARGIN,
            HEIGHT - MARGIN / 3,
            fmt_sig(&xmin),
            fmt_sig(&xmax)
        );
    }

    for (i, (label, pts)) in scene.polylines.iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (j, (x, y)) in pts.iter().enumerate() {
            let (px, py) = m.map(x, y);
            let _ = write!(d, "{}{} {}", if j == 0 { "M" } else { " L" }, px, py);
        }
        let _ = writeln!(
            out,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"><title>{}</title></path>",
            xml_escape(label)
        );
    }

    for (i, (label, (x, y))) in scene.points.iter().enumerate() {
        let color = PALETTE[(scene.polylines.len() + i) % PALETTE.len()];
        let (px, py) = m.map(x, y);
        let _ = writeln!(
            out,
            "<circle cx=\"{px}\" cy=\"{py}\" r=\"3\" fill=\"{color}\"><title>{}</title></circle>",
            xml_escape(label)
        );
    }

    // Legend, top-left, in element order.
    let labels = scene
        .polylines
        .iter()
        .map(|(l, _)| l)
        .chain(scene.points.iter().map(|(l, _)| l));
    let mut ly = MARGIN / 2;
    for (i, label) in labels.enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{ly}\" font-size=\"12\" fill=\"{color}\">{}</text>",
            MARGIN,
            xml_escape(label)
        );
        ly += 14;
    }

    out.push_str("</svg>\n");
    Ok(out)
}

/// CSV with header `label,x,y`: polylines in order, then points.
pub fn render_csv(scene: &PlotScene) -> Result<String> {
    if scene.is_empty() {
        return Err(Error::EmptyScene);
    }
    let mut out = String::from("label,x,y\n");
    for (label, pts) in &scene.polylines {
        for (x, y) in pts {
            let _ = writeln!(out, "{},{},{}", csv_field(label), fmt_sig(x), fmt_sig(y));
        }
    }
    for (label, (x, y)) in &scene.points {
        let _ = writeln!(out, "{},{},{}", csv_field(label), fmt_sig(x), fmt_sig(y));
    }
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
