//! Minimal self-contained SVG emitter: a density-normalized histogram of
//! rescaled eigenvalues on [−1, 1] with the arcsine density overlaid.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const ML: f64 = 50.0; // left margin
const MR: f64 = 20.0;
const MT: f64 = 30.0;
const MB: f64 = 40.0;

fn x_px(x: f64) -> f64 {
    ML + (x + 1.0) / 2.0 * (W - ML - MR)
}

fn y_px(y: f64, ymax: f64) -> f64 {
    H - MB - y / ymax * (H - MT - MB)
}

/// Histogram of `values` (expected in [−1, 1]) against the arcsine density
/// `1/(π√(1−x²))`.
pub fn arcsine_histogram(title: &str, values: &[f64], bins: usize) -> String {
    let n = values.len().max(1);
    let width = 2.0 / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = (((v + 1.0) / width) as isize).clamp(0, bins as isize - 1) as usize;
        counts[b] += 1;
    }
    // density scale: the tallest of bars and overlay sets the y-axis
    let density: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (n as f64 * width))
        .collect();
    let overlay_cap = 1.0 / (std::f64::consts::PI * (1.0f64 - 0.98 * 0.98).sqrt());
    let ymax = density
        .iter()
        .fold(overlay_cap, |a, &b| a.max(b))
        * 1.05;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        title
    );
    // bars
    for (i, &d) in density.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        let x0 = x_px(-1.0 + i as f64 * width);
        let x1 = x_px(-1.0 + (i + 1) as f64 * width);
        let y = y_px(d, ymax);
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#7aa6c2\" stroke=\"#3d6d91\" stroke-width=\"0.5\"/>",
            x0,
            y,
            x1 - x0,
            H - MB - y
        );
    }
    // arcsine density polyline, clipped away from the endpoint singularities
    let mut pts = String::new();
    let m = 200;
    for j in 0..=m {
        let x = -0.98 + 1.96 * j as f64 / m as f64;
        let d = 1.0 / (std::f64::consts::PI * (1.0 - x * x).sqrt());
        let _ = write!(pts, "{:.2},{:.2} ", x_px(x), y_px(d.min(ymax), ymax));
    }
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"1.5\"/>",
        pts.trim_end()
    );
    // axes
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.1}\" stroke=\"black\"/>",
        H - MB
    );
    for &t in &[-1.0f64, -0.5, 0.0, 0.5, 1.0] {
        let x = x_px(t);
        let _ = writeln!(
            s,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            H - MB,
            H - MB + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{t}</text>",
            H - MB + 18.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">λ / 2√q</text>",
        (ML + W - MR) / 2.0,
        H - 8.0
    );
    s.push_str("</svg>\n");
    s
}
