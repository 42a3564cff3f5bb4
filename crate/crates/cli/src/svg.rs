//! Minimal SVG plotting: enough for log-log scaling fits, component counts
//! and profile snapshots, with no plotting dependency.

use std::fmt::Write;

pub struct Plot {
    width: f64,
    height: f64,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
    x_label: String,
    y_label: String,
    title: String,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            width: 640.0,
            height: 440.0,
            margin: 56.0,
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            body: String::new(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            title: title.into(),
        }
    }

    pub fn set_ranges(&mut self, xs: &[f64], ys: &[f64]) {
        let pad = |lo: f64, hi: f64| {
            let d = (hi - lo).max(1e-12);
            (lo - 0.05 * d, hi + 0.05 * d)
        };
        let (xlo, xhi) = xs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let (ylo, yhi) = ys
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        self.x_range = pad(xlo, xhi);
        self.y_range = pad(ylo, yhi);
    }

    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        self.margin + (x - lo) / (hi - lo) * (self.width - 2.0 * self.margin)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        self.height - self.margin - (y - lo) / (hi - lo) * (self.height - 2.0 * self.margin)
    }

    pub fn polyline(&mut self, xs: &[f64], ys: &[f64], series: usize) {
        let mut pts = String::new();
        for (x, y) in xs.iter().zip(ys) {
            let _ = write!(pts, "{:.2},{:.2} ", self.sx(*x), self.sy(*y));
        }
        let color = COLORS[series % COLORS.len()];
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>"#
        );
    }

    pub fn scatter(&mut self, xs: &[f64], ys: &[f64], series: usize) {
        let color = COLORS[series % COLORS.len()];
        for (x, y) in xs.iter().zip(ys) {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                self.sx(*x),
                self.sy(*y)
            );
        }
    }

    pub fn steps(&mut self, xs: &[f64], ys: &[f64], series: usize) {
        let mut px = Vec::new();
        let mut py = Vec::new();
        for i in 0..xs.len() {
            if i > 0 {
                px.push(xs[i]);
                py.push(ys[i - 1]);
            }
            px.push(xs[i]);
            py.push(ys[i]);
        }
        self.polyline(&px, &py, series);
    }

    pub fn annotate(&mut self, x: f64, y: f64, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" font-family="monospace">{}</text>"#,
            self.sx(x),
            self.sy(y),
            text
        );
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(
            out,
            r#"<rect width="100%" height="100%" fill="white"/>"#
        );
        // axes
        let (x0, x1) = (self.margin, self.width - self.margin);
        let (y0, y1) = (self.height - self.margin, self.margin);
        let _ = writeln!(
            out,
            r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
        );
        // ticks
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let xv = self.x_range.0 + t * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + t * (self.y_range.1 - self.y_range.0);
            let xs = self.margin + t * (self.width - 2.0 * self.margin);
            let ys = self.height - self.margin - t * (self.height - 2.0 * self.margin);
            let _ = writeln!(
                out,
                r#"<line x1="{xs:.1}" y1="{y0}" x2="{xs:.1}" y2="{:.1}" stroke="black"/><text x="{xs:.1}" y="{:.1}" font-size="11" text-anchor="middle">{xv:.3}</text>"#,
                y0 + 4.0,
                y0 + 18.0
            );
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{ys:.1}" x2="{x0}" y2="{ys:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{yv:.3}</text>"#,
                x0 - 4.0,
                x0 - 8.0,
                ys + 4.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#,
            self.width / 2.0,
            self.height - 12.0,
            self.x_label
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.1}" font-size="13" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
            self.height / 2.0,
            self.height / 2.0,
            self.y_label
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="22" font-size="14" text-anchor="middle" font-weight="bold">{}</text>"#,
            self.width / 2.0,
            self.title
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}
