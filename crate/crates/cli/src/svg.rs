//! A minimal SVG scatter-plot emitter: circles grouped per colour class, with
//! optional axes and a legend.

use std::fmt::Write;

/// One colour class of points.
#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct Style {
    pub width: u32,
    pub height: u32,
    pub point_size: f64,
    pub axes: bool,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

const MARGIN: f64 = 56.0;
const TICKS: usize = 5;

/// The first line after the XML prolog; the only line that may differ between
/// builds for identical input.
pub fn version_comment() -> String {
    format!("<!-- rauzy {} -->", env!("CARGO_PKG_VERSION"))
}

fn extent(series: &[Series], pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
    let (lo, hi) = series
        .iter()
        .flat_map(|s| s.points.iter().map(&pick))
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.02 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn scatter(series: &[Series], style: &Style) -> String {
    let (w, h) = (style.width as f64, style.height as f64);
    let (x0, x1) = extent(series, |p| p.0);
    let (y0, y1) = extent(series, |p| p.1);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (w - 2.0 * MARGIN);
    let py = |y: f64| h - MARGIN - (y - y0) / (y1 - y0) * (h - 2.0 * MARGIN);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&version_comment());
    out.push('\n');
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        style.width, style.height, style.width, style.height
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if !style.title.is_empty() {
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>",
            w / 2.0,
            escape(&style.title)
        );
    }
    if style.axes {
        write_axes(&mut out, style, (x0, x1), (y0, y1), &px, &py);
    }
    for s in series {
        let _ = writeln!(
            out,
            "<g class=\"series\" data-label=\"{}\" fill=\"{}\">",
            escape(&s.label),
            escape(&s.color)
        );
        for &(x, y) in &s.points {
            if x.is_finite() && y.is_finite() {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{}\"/>",
                    px(x),
                    py(y),
                    style.point_size
                );
            }
        }
        out.push_str("</g>\n");
    }
    // legend, top right
    for (k, s) in series.iter().enumerate() {
        let y = MARGIN + 4.0 + 18.0 * k as f64;
        let x = w - MARGIN - 110.0;
        let _ = writeln!(
            out,
            "<rect x=\"{x:.1}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{}\"/><text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            y - 9.0,
            escape(&s.color),
            x + 16.0,
            y,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn write_axes(
    out: &mut String,
    style: &Style,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    px: &dyn Fn(f64) -> f64,
    py: &dyn Fn(f64) -> f64,
) {
    let (w, h) = (style.width as f64, style.height as f64);
    let _ = writeln!(
        out,
        "<g stroke=\"#444\" stroke-width=\"1\"><line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\"/><line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\"/></g>",
        m = MARGIN,
        b = h - MARGIN,
        r = w - MARGIN
    );
    out.push_str("<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n");
    for k in 0..TICKS {
        let t = k as f64 / (TICKS - 1) as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            px(xv),
            h - MARGIN + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            MARGIN - 6.0,
            py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
        w / 2.0,
        h - 14.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">{}</text>",
        h / 2.0,
        h / 2.0,
        escape(&style.y_label)
    );
    out.push_str("</g>\n");
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}
