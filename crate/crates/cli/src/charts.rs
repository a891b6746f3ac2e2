//! Minimal static SVG charts. No interactivity, no external assets, and
//! deterministic bytes: every float is formatted with fixed precision and
//! every input is iterated in sorted order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dappnet_core::resilience::{RemovalStrategy, RemovalTrace};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 52.0;

const PURPLE: &str = "#7b2d8b";
const ORANGE: &str = "#e88924";
const BLUE: &str = "#33658a";
const GRAY: &str = "#5b6065";

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    body: String,
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Frame {
        let pad = |lo: f64, hi: f64| if (hi - lo).abs() < 1e-12 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
        let (x_min, x_max) = pad(x_min, x_max);
        let (y_min, y_max) = pad(y_min, y_max);
        Frame { x_min, x_max, y_min, y_max, body: String::new() }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_L + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_L - MARGIN_R)
    }

    fn sy(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_B - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_T - MARGIN_B)
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\" stroke-width=\"{width:.1}\"/>"
        );
    }

    fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, content: &str) {
        let escaped = content
            .replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;");
        let _ = writeln!(
            self.body,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{size:.0}\" font-family=\"sans-serif\" text-anchor=\"{anchor}\" fill=\"#222\">{escaped}</text>"
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\"/>"
        );
    }

    /// Axes, ticks, and labels.
    fn frame(&mut self, title: &str, x_label: &str, y_label: &str) {
        let x0 = MARGIN_L;
        let x1 = WIDTH - MARGIN_R;
        let y0 = HEIGHT - MARGIN_B;
        let y1 = MARGIN_T;
        self.line(x0, y0, x1, y0, GRAY, 1.0);
        self.line(x0, y0, x0, y1, GRAY, 1.0);
        for i in 0..=4 {
            let fx = self.x_min + (self.x_max - self.x_min) * i as f64 / 4.0;
            let px = self.sx(fx);
            self.line(px, y0, px, y0 + 4.0, GRAY, 1.0);
            self.text(px, y0 + 18.0, 11.0, "middle", &fmt_tick(fx));
            let fy = self.y_min + (self.y_max - self.y_min) * i as f64 / 4.0;
            let py = self.sy(fy);
            self.line(x0 - 4.0, py, x0, py, GRAY, 1.0);
            self.text(x0 - 8.0, py + 4.0, 11.0, "end", &fmt_tick(fy));
        }
        self.text(WIDTH / 2.0, HEIGHT - 14.0, 12.0, "middle", x_label);
        let _ = writeln!(
            self.body,
            "<text x=\"16\" y=\"{:.2}\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" fill=\"#222\" transform=\"rotate(-90 16 {:.2})\">{}</text>",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            y_label
        );
        self.text(WIDTH / 2.0, 20.0, 14.0, "middle", title);
    }

    fn polyline(&mut self, points: &[(f64, f64)], stroke: &str) {
        let mut path = String::new();
        for &(x, y) in points {
            let _ = write!(path, "{:.2},{:.2} ", self.sx(x), self.sy(y));
        }
        let _ = writeln!(
            self.body,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.8\"/>",
            path.trim_end()
        );
    }

    fn cross(&mut self, x: f64, y: f64, color: &str) {
        let (px, py) = (self.sx(x), self.sy(y));
        let d = 6.0;
        self.line(px - d, py - d, px + d, py + d, color, 2.2);
        self.line(px - d, py + d, px + d, py - d, color, 2.2);
    }

    fn square(&mut self, x: f64, y: f64, color: &str) {
        let (px, py) = (self.sx(x), self.sy(y));
        self.rect(px - 4.0, py - 4.0, 8.0, 8.0, color);
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">\n<rect width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Bars over integer x values, heights normalized to a probability mass
/// function when `normalize` is set.
fn int_histogram_chart(
    hist: &BTreeMap<usize, usize>,
    title: &str,
    x_label: &str,
    normalize: bool,
) -> String {
    let total: usize = hist.values().sum();
    let x_lo = *hist.keys().next().unwrap() as f64;
    let x_hi = *hist.keys().next_back().unwrap() as f64;
    let values: BTreeMap<usize, f64> = hist
        .iter()
        .map(|(&k, &v)| {
            let y = if normalize { v as f64 / total as f64 } else { v as f64 };
            (k, y)
        })
        .collect();
    let y_hi = values.values().cloned().fold(0.0f64, f64::max);
    let mut f = Frame::new(x_lo - 0.5, x_hi + 0.5, 0.0, y_hi);
    f.frame(title, x_label, if normalize { "probability" } else { "count" });
    let slot = (WIDTH - MARGIN_L - MARGIN_R) / ((x_hi - x_lo + 1.0).max(1.0));
    let bar_w = (slot * 0.8).min(48.0);
    for (&k, &y) in &values {
        let cx = f.sx(k as f64);
        let top = f.sy(y);
        let base = f.sy(0.0);
        f.rect(cx - bar_w / 2.0, top, bar_w, base - top, BLUE);
    }
    f.finish()
}

/// PDF of a node-degree histogram.
pub fn render_degree_pdf(hist: &BTreeMap<usize, usize>, title: &str) -> String {
    int_histogram_chart(hist, title, "degree", true)
}

/// Maximal clique sizes, raw counts.
pub fn render_clique_bars(hist: &BTreeMap<usize, usize>, title: &str) -> String {
    int_histogram_chart(hist, title, "clique size", false)
}

/// PDF of per-network scalar values (e.g. densities), binned.
pub fn render_scalar_pdf(values: &[f64], title: &str, x_label: &str) -> String {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bins = 10usize;
    let width = ((hi - lo) / bins as f64).max(1e-9);
    let mut counts = vec![0usize; bins];
    for &v in values {
        let mut b = ((v - lo) / width) as usize;
        if b >= bins {
            b = bins - 1;
        }
        counts[b] += 1;
    }
    let y_hi = counts.iter().map(|&c| c as f64 / values.len() as f64).fold(0.0, f64::max);
    let mut f = Frame::new(lo, hi.max(lo + 1e-9), 0.0, y_hi);
    f.frame(title, x_label, "probability");
    for (b, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x_left = lo + b as f64 * width;
        let px = f.sx(x_left);
        let pw = f.sx(x_left + width) - px;
        let top = f.sy(c as f64 / values.len() as f64);
        let base = f.sy(0.0);
        f.rect(px, top, (pw - 1.0).max(1.0), base - top, BLUE);
    }
    f.finish()
}

/// One bar per network: the share of nodes connected only through
/// self-loops.
pub fn render_ratio_bars(items: &[(String, f64)], title: &str, y_label: &str) -> String {
    let n = items.len();
    let mut f = Frame::new(-0.5, n as f64 - 0.5, 0.0, 1.0);
    f.frame(title, "", y_label);
    let slot = (WIDTH - MARGIN_L - MARGIN_R) / n.max(1) as f64;
    let bar_w = (slot * 0.7).min(60.0);
    for (i, (name, v)) in items.iter().enumerate() {
        let cx = f.sx(i as f64);
        let top = f.sy(*v);
        let base = f.sy(0.0);
        f.rect(cx - bar_w / 2.0, top, bar_w, base - top, BLUE);
        let label: String = name.chars().take(12).collect();
        f.text(cx, HEIGHT - MARGIN_B + 32.0, 10.0, "middle", &label);
    }
    f.finish()
}

/// Average path length of the real largest component (filled square) versus
/// the random-reference mean (cross), one column per network.
pub fn render_smallworld_scatter(items: &[(String, f64, f64)], title: &str) -> String {
    let y_hi = items
        .iter()
        .flat_map(|(_, a, b)| [*a, *b])
        .fold(0.0f64, f64::max);
    let n = items.len();
    let mut f = Frame::new(-0.5, n as f64 - 0.5, 0.0, y_hi * 1.1 + 1e-9);
    f.frame(title, "", "average path length");
    for (i, (name, real, random)) in items.iter().enumerate() {
        let x = i as f64;
        f.square(x, *real, PURPLE);
        f.cross(x, *random, ORANGE);
        let label: String = name.chars().take(12).collect();
        f.text(f.sx(x), HEIGHT - MARGIN_B + 32.0, 10.0, "middle", &label);
    }
    // legend
    f.square(f.x_min + (f.x_max - f.x_min) * 0.02, y_hi * 1.05, PURPLE);
    f.text(MARGIN_L + 24.0, f.sy(y_hi * 1.05) + 4.0, 11.0, "start", "real");
    f.cross(f.x_min + (f.x_max - f.x_min) * 0.14, y_hi * 1.05, ORANGE);
    f.text(MARGIN_L + 96.0, f.sy(y_hi * 1.05) + 4.0, 11.0, "start", "random");
    f.finish()
}

/// Removal traces: random in orange, targeted in purple shades, a cross at
/// each trace's disconnection fraction.
pub fn render_resilience(traces: &[RemovalTrace], title: &str) -> String {
    let x_hi = traces
        .iter()
        .flat_map(|t| t.fractions.iter().copied())
        .fold(0.0f64, f64::max);
    let y_hi = traces
        .iter()
        .flat_map(|t| t.avg_path_lengths.iter().copied())
        .fold(0.0f64, f64::max);
    let mut f = Frame::new(0.0, x_hi, 0.0, y_hi * 1.08 + 1e-9);
    f.frame(title, "fraction of nodes removed", "average path length");
    let color_of = |s: RemovalStrategy| match s {
        RemovalStrategy::Random => ORANGE,
        RemovalStrategy::BetweennessStatic => PURPLE,
        RemovalStrategy::DegreeStatic => "#b06ac0",
    };
    for trace in traces {
        let color = color_of(trace.strategy);
        let points: Vec<(f64, f64)> = trace
            .fractions
            .iter()
            .zip(&trace.avg_path_lengths)
            .map(|(&x, &y)| (x, y))
            .collect();
        f.polyline(&points, color);
        if let Some(at) = trace.disconnected_at {
            let idx = trace.fractions.iter().position(|&x| x == at).unwrap_or(0);
            f.cross(at, trace.avg_path_lengths[idx], color);
        }
    }
    // legend lines
    let mut ly = y_hi * 1.04;
    for trace in traces {
        let color = color_of(trace.strategy);
        let x0 = f.x_min + (f.x_max - f.x_min) * 0.02;
        let x1 = f.x_min + (f.x_max - f.x_min) * 0.08;
        let py = f.sy(ly);
        let (px0, px1) = (f.sx(x0), f.sx(x1));
        f.line(px0, py, px1, py, color, 2.0);
        f.text(px1 + 6.0, py + 4.0, 11.0, "start", &trace.strategy.to_string());
        ly -= y_hi * 0.06;
    }
    f.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_pdf_is_deterministic() {
        let hist = BTreeMap::from([(2usize, 5usize), (3, 2), (7, 1)]);
        let a = render_degree_pdf(&hist, "t");
        let b = render_degree_pdf(&hist, "t");
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("degree"));
    }

    #[test]
    fn resilience_chart_marks_disconnection_cross() {
        let trace = RemovalTrace {
            strategy: RemovalStrategy::BetweennessStatic,
            n: 10,
            fractions: vec![0.0, 0.1, 0.2],
            avg_path_lengths: vec![2.0, 2.5, 1.2],
            stderr: vec![0.0; 3],
            giant_share: vec![1.0, 0.8, 0.5],
            disconnect_prob: vec![0.0, 1.0, 1.0],
            keep_prob: vec![1.0, 0.0, 0.0],
            disconnected_at: Some(0.1),
            removal_order: vec![],
            trials: 1,
            seed: 0,
        };
        let svg = render_resilience(std::slice::from_ref(&trace), "removal");
        // two stroke-width 2.2 lines = the cross glyph
        assert_eq!(svg.matches("stroke-width=\"2.2\"").count(), 2);
        let no_cross = RemovalTrace { disconnected_at: None, ..trace };
        let svg2 = render_resilience(&[no_cross], "removal");
        assert_eq!(svg2.matches("stroke-width=\"2.2\"").count(), 0);
    }

    #[test]
    fn scatter_contains_squares_and_crosses() {
        let items = vec![
            ("a".to_string(), 3.0, 2.5),
            ("b".to_string(), 2.0, 2.2),
        ];
        let svg = render_smallworld_scatter(&items, "small world");
        assert!(svg.contains("rect"));
        assert!(svg.matches("stroke-width=\"2.2\"").count() >= 4);
    }
}
