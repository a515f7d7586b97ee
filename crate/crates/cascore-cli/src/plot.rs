//! Minimal standalone SVG charts: a line chart for ROC-style curves and a
//! bar chart for threshold tables. No external plotting stack.

use std::fmt::Write;

const W: f64 = 480.0;
const H: f64 = 360.0;
const ML: f64 = 56.0; // left margin, room for y labels
const MR: f64 = 16.0;
const MT: f64 = 16.0;
const MB: f64 = 44.0;

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        "<line x1=\"{ML}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>",
        y0 = H - MB,
        x1 = W - MR
    );
    let _ = writeln!(
        out,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{y0}\" stroke=\"black\"/>",
        y0 = H - MB
    );
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\">{x_label}</text>",
        x = (ML + W - MR) / 2.0,
        y = H - 8.0
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{y}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {y})\">{y_label}</text>",
        y = (MT + H - MB) / 2.0
    );
}

fn fmt_tick(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 && v.abs() >= 1.0 {
        format!("{}", v.round() as i64)
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Line chart of (x, y) points in the given data ranges.
pub fn line_chart(
    points: &[(f64, f64)],
    x_range: (f64, f64),
    y_range: (f64, f64),
    x_label: &str,
    y_label: &str,
) -> String {
    let mut out = String::new();
    header(&mut out);
    axes(&mut out, x_label, y_label);
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    let sx = |x: f64| ML + (x - x0) / (x1 - x0).max(1e-300) * (W - ML - MR);
    let sy = |y: f64| (H - MB) - (y - y0) / (y1 - y0).max(1e-300) * (H - MB - MT);
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let xv = x0 + frac * (x1 - x0);
        let yv = y0 + frac * (y1 - y0);
        let _ = writeln!(
            &mut out,
            "<text x=\"{x:.1}\" y=\"{y}\" text-anchor=\"middle\">{t}</text>",
            x = sx(xv),
            y = H - MB + 16.0,
            t = fmt_tick(xv)
        );
        let _ = writeln!(
            &mut out,
            "<text x=\"{x}\" y=\"{y:.1}\" text-anchor=\"end\">{t}</text>",
            x = ML - 6.0,
            y = sy(yv) + 4.0,
            t = fmt_tick(yv)
        );
    }
    let path: Vec<String> = points
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        &mut out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>",
        path.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

/// Bar chart with one labelled bar per (label, value) pair.
pub fn bar_chart(bars: &[(String, f64)], x_label: &str, y_label: &str) -> String {
    let mut out = String::new();
    header(&mut out);
    axes(&mut out, x_label, y_label);
    let y_max = bars.iter().map(|&(_, v)| v).fold(0.0f64, f64::max).max(1.0);
    let span = W - ML - MR;
    let slot = span / bars.len().max(1) as f64;
    let bw = slot * 0.7;
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let yv = frac * y_max;
        let y = (H - MB) - frac * (H - MB - MT);
        let _ = writeln!(
            &mut out,
            "<text x=\"{x}\" y=\"{y:.1}\" text-anchor=\"end\">{t}</text>",
            x = ML - 6.0,
            y = y + 4.0,
            t = fmt_tick(yv)
        );
    }
    for (i, (label, v)) in bars.iter().enumerate() {
        let x = ML + i as f64 * slot + (slot - bw) / 2.0;
        let h = v / y_max * (H - MB - MT);
        let _ = writeln!(
            &mut out,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{bw:.2}\" height=\"{h:.2}\" fill=\"#1f77b4\"/>",
            y = (H - MB) - h
        );
        let _ = writeln!(
            &mut out,
            "<text x=\"{cx:.1}\" y=\"{ty}\" text-anchor=\"middle\">{label}</text>",
            cx = x + bw / 2.0,
            ty = H - MB + 16.0
        );
    }
    out.push_str("</svg>\n");
    out
}
