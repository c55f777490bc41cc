//! Minimal deterministic SVG plots: a fixed 900×360 canvas, a light grid,
//! one polyline per curve and one rect per histogram bar.

use std::fmt::Write;

use crate::equidist::Histogram;

pub const WIDTH: f64 = 900.0;
pub const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 40.0;
const GRID_LINES: usize = 10;

const PALETTE: [&str; 4] = ["#1f4e9c", "#c0392b", "#27864a", "#7d3c98"];

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub curves: Vec<Curve>,
    /// Histogram drawn as a density (count / (total · width)).
    pub bars: Option<Histogram>,
}

impl Plot {
    fn sx(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        MARGIN_LEFT + (x - lo) / (hi - lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        let y = y.clamp(lo, hi);
        HEIGHT - MARGIN_BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(s, r##"<g stroke="#e3e3e3" stroke-width="1">"##);
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        for i in 0..=GRID_LINES {
            let f = i as f64 / GRID_LINES as f64;
            let x = self.sx(x0 + f * (x1 - x0));
            let y = self.sy(y0 + f * (y1 - y0));
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
                MARGIN_TOP,
                HEIGHT - MARGIN_BOTTOM
            );
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
                MARGIN_LEFT,
                WIDTH - MARGIN_RIGHT
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r##"<g font-family="sans-serif" font-size="11" fill="#333">"##);
        for i in 0..=GRID_LINES {
            let f = i as f64 / GRID_LINES as f64;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                self.sx(xv),
                HEIGHT - MARGIN_BOTTOM + 15.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 6.0,
                self.sy(yv) + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 6.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(s, "</g>");

        if let Some(h) = &self.bars {
            let _ = writeln!(s, r##"<g fill="#9ab8e0" stroke="#5a7fb0" stroke-width="0.5">"##);
            let total = h.total.max(1) as f64;
            for (i, &c) in h.counts.iter().enumerate() {
                let (lo, hi) = (h.bin_edges[i], h.bin_edges[i + 1]);
                let density = c as f64 / (total * (hi - lo));
                let (xa, xb) = (self.sx(lo), self.sx(hi));
                let (ya, yb) = (self.sy(density), self.sy(y0));
                let _ = writeln!(
                    s,
                    r#"<rect x="{xa:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}"/>"#,
                    xb - xa,
                    yb - ya
                );
            }
            let _ = writeln!(s, "</g>");
        }

        for (i, c) in self.curves.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = c
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", self.sx(x), self.sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="2" points="{}"><title>{}</title></polyline>"#,
                pts.join(" "),
                escape(&c.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
