//! Bare-bones static SVG renderings. They show the data, nothing more.

use weldq_core::rework::ControlChartSeries;
use weldq_core::stats::FiveNumber;
use weldq_core::ClusterTree64;

use crate::report::f6;

const W: f64 = 640.0;
const H: f64 = 400.0;
const M: f64 = 48.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Canvas {
    x: (f64, f64),
    y: (f64, f64),
    body: String,
}

impl Canvas {
    fn new(title: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let mut c = Self { x: pad(x), y: pad(y), body: String::new() };
        c.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
            f6(W / 2.0),
            f6(M / 2.0),
            esc(title)
        ));
        c.line_px(M, H - M, W - M, H - M, "black");
        c.line_px(M, M, M, H - M, "black");
        for (v, label) in [(c.y.0, c.y.0), (c.y.1, c.y.1)] {
            let py = c.sy(v);
            c.text_px(M - 4.0, py, &f6(label), "end");
        }
        c
    }

    fn sx(&self, v: f64) -> f64 {
        M + (v - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * M)
    }

    fn sy(&self, v: f64) -> f64 {
        H - M - (v - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * M)
    }

    fn line_px(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, stroke: &str) {
        self.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\"/>\n",
            f6(x0),
            f6(y0),
            f6(x1),
            f6(y1)
        ));
    }

    fn line(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, stroke: &str) {
        self.line_px(self.sx(x0), self.sy(y0), self.sx(x1), self.sy(y1), stroke);
    }

    fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, fill: &str) {
        let (px0, px1) = (self.sx(x0.min(x1)), self.sx(x0.max(x1)));
        let (py0, py1) = (self.sy(y0.max(y1)), self.sy(y0.min(y1)));
        self.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"black\"/>\n",
            f6(px0),
            f6(py0),
            f6(px1 - px0),
            f6(py1 - py0)
        ));
    }

    fn dot(&mut self, x: f64, y: f64, fill: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"2.500000\" fill=\"{fill}\"/>\n",
            f6(self.sx(x)),
            f6(self.sy(y))
        ));
    }

    fn text_px(&mut self, x: f64, y: f64, s: &str, anchor: &str) {
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"{anchor}\">{}</text>\n",
            f6(x),
            f6(y),
            esc(s)
        ));
    }

    fn x_label(&mut self, x: f64, s: &str) {
        let px = self.sx(x);
        self.text_px(px, H - M + 14.0, s, "middle");
    }

    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", f6(self.sx(x)), f6(self.sy(y)))).collect();
        self.body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\"/>\n",
            coords.join(" ")
        ));
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n{}</svg>\n",
            W, H, W, H, self.body
        )
    }
}

fn range(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Side-by-side boxplots, one per label.
pub fn boxplot(title: &str, labels: &[String], boxes: &[FiveNumber<f64>]) -> String {
    let y = range(boxes.iter().flat_map(|b| {
        [b.whisker_low, b.whisker_high].into_iter().chain(b.outliers.iter().copied())
    }));
    let mut c = Canvas::new(title, (0.0, boxes.len() as f64), y);
    for (i, (label, b)) in labels.iter().zip(boxes).enumerate() {
        let x = i as f64 + 0.5;
        c.line(x, b.whisker_low, x, b.q1, "black");
        c.line(x, b.q3, x, b.whisker_high, "black");
        c.rect(x - 0.3, b.q1, x + 0.3, b.q3, "#dddddd");
        c.line(x - 0.3, b.median, x + 0.3, b.median, "black");
        for &o in &b.outliers {
            c.dot(x, o, "black");
        }
        c.x_label(x, label);
    }
    c.finish()
}

/// Histogram with `bins` equal-width bins.
pub fn histogram(title: &str, samples: &[f64], bins: usize) -> String {
    let (lo, hi) = range(samples.iter().copied());
    let bins = bins.max(1);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &s in samples {
        let k = (((s - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(1) as f64;
    let mut c = Canvas::new(title, (lo, lo + width * bins as f64), (0.0, top));
    for (k, &n) in counts.iter().enumerate() {
        let x0 = lo + width * k as f64;
        c.rect(x0, 0.0, x0 + width, n as f64, "#bbccdd");
    }
    c.x_label(lo, &f6(lo));
    c.x_label(lo + width * bins as f64, &f6(hi));
    c.finish()
}

/// States on x, hours on y: forecast bands, medians, accrued actuals and the
/// three limit lines.
pub fn control_chart(series: &ControlChartSeries<f64>) -> String {
    let l = &series.limits;
    let y = range(
        series
            .points
            .iter()
            .flat_map(|p| [p.band_low, p.band_high, p.accrued_actual])
            .chain([l.lcl, l.ucl]),
    );
    let last = series.points.last().map_or(1, |p| p.state) as f64;
    let mut c = Canvas::new("Rework hours by state", (0.5, last + 0.5), (y.0.min(0.0), y.1));
    for (v, colour) in [(l.lcl, "blue"), (l.cl, "gray"), (l.ucl, "red")] {
        c.line(0.5, v, last + 0.5, v, colour);
    }
    for p in &series.points {
        let x = p.state as f64;
        c.rect(x - 0.25, p.band_low, x + 0.25, p.band_high, "#eeeeee");
        c.line(x - 0.25, p.median, x + 0.25, p.median, "black");
        c.dot(x, p.median, if p.flag == weldq_core::ControlFlag::InControl { "black" } else { "red" });
        c.x_label(x, &p.state.to_string());
    }
    let actual: Vec<(f64, f64)> = series.points.iter().map(|p| (p.state as f64, p.accrued_actual)).collect();
    c.polyline(&actual, "green");
    c.finish()
}

/// Dendrogram with leaves along x and merge heights on y.
pub fn dendrogram(tree: &ClusterTree64) -> String {
    let n = tree.leaf_count();
    let top = tree.merges.last().map_or(1.0, |m| m.height);
    let mut c = Canvas::new("Complete-linkage dendrogram", (-0.5, n as f64 - 0.5), (0.0, top));
    for s in tree.segments() {
        c.line(s.x0, s.y0, s.x1, s.y1, "black");
    }
    for (slot, leaf) in tree.leaf_order().into_iter().enumerate() {
        c.x_label(slot as f64, &tree.labels[leaf]);
    }
    c.finish()
}

/// Trace plot of a chain.
pub fn trace(draws: &[f64]) -> String {
    let mut c = Canvas::new("MCMC trace", (1.0, draws.len() as f64), range(draws.iter().copied()));
    let pts: Vec<(f64, f64)> = draws.iter().enumerate().map(|(i, &p)| ((i + 1) as f64, p)).collect();
    c.polyline(&pts, "black");
    c.finish()
}
