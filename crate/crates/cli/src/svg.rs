//! Self-contained SVG line and scatter plots.

use std::fmt::Write as _;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 210.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 64.0;

const PALETTE: [&str; 8] = [
    "#1f4e9c", "#6fa8dc", "#c2185b", "#e53935", "#2e7d32", "#8e24aa", "#ef6c00", "#000000",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Dotted,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    pub color: usize,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, style: Style, color: usize) -> Self {
        Self {
            label: label.into(),
            points,
            style,
            color,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let m = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        let s = format!("{v:.2e}");
        let (m, e) = s.split_once('e').unwrap();
        format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.'))
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn from_values(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo <= 1e-12 * (1.0 + lo.abs()) {
            let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
            lo -= pad;
            hi += pad;
        }
        if log {
            Self {
                lo: lo.floor(),
                hi: hi.ceil(),
                log,
            }
        } else {
            let pad = 0.05 * (hi - lo);
            Self {
                lo: lo - pad,
                hi: hi + pad,
                log,
            }
        }
    }

    fn fraction(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v <= 0.0 {
                return None;
            }
            v.log10()
        } else {
            v
        };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (self.lo as i32, self.hi as i32);
            let stride = ((b - a) / 8 + 1).max(1);
            (a..=b)
                .filter(|k| (k - a) % stride == 0)
                .map(|k| ((k as f64 - self.lo) / (self.hi - self.lo), format!("1e{k}")))
                .collect()
        } else {
            let step = nice_step(self.hi - self.lo);
            let mut v = (self.lo / step).ceil() * step;
            let mut out = Vec::new();
            while v <= self.hi + 1e-9 * step {
                let clean = if v.abs() < 1e-9 * step { 0.0 } else { v };
                out.push(((clean - self.lo) / (self.hi - self.lo), tick_label(clean)));
                v += step;
            }
            out
        }
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Default::default()
        }
    }

    pub fn log_log(mut self) -> Self {
        self.log_x = true;
        self.log_y = true;
        self
    }

    pub fn add(&mut self, s: Series) -> &mut Self {
        self.series.push(s);
        self
    }

    pub fn render(&self) -> String {
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let xa = Axis::from_values(
            self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)),
            self.log_x,
        );
        let ya = Axis::from_values(
            self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)),
            self.log_y,
        );
        let sx = |f: f64| LEFT + f * pw;
        let sy = |f: f64| TOP + (1.0 - f) * ph;

        let mut o = String::new();
        let _ = writeln!(
            o,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(o, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        for (f, label) in xa.ticks() {
            let x = sx(f);
            let _ = writeln!(
                o,
                r##"<line x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
                TOP + ph
            );
            let _ = writeln!(
                o,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                TOP + ph + 18.0,
                escape(&label)
            );
        }
        for (f, label) in ya.ticks() {
            let y = sy(f);
            let _ = writeln!(
                o,
                r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/>"##,
                LEFT + pw
            );
            let _ = writeln!(
                o,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                y + 4.0,
                escape(&label)
            );
        }
        let _ = writeln!(
            o,
            r##"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#333"/>"##
        );
        let _ = writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 18.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            o,
            r#"<text transform="translate(22 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[s.color % PALETTE.len()];
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter_map(|&(x, y)| Some((sx(xa.fraction(x)?), sy(ya.fraction(y)?))))
                .collect();
            match s.style {
                Style::Markers => {
                    for (x, y) in &pts {
                        let _ = writeln!(
                            o,
                            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="{color}" stroke-width="1.5"/>"#
                        );
                    }
                }
                style => {
                    let dash = match style {
                        Style::Dashed => r#" stroke-dasharray="7 4""#,
                        Style::Dotted => r#" stroke-dasharray="2 3""#,
                        _ => "",
                    };
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        o,
                        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
                        path.join(" ")
                    );
                }
            }
            let ly = TOP + 10.0 + 20.0 * k as f64;
            let lx = LEFT + pw + 14.0;
            match s.style {
                Style::Markers => {
                    let _ = writeln!(
                        o,
                        r#"<circle cx="{:.2}" cy="{ly:.2}" r="3.5" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                        lx + 12.0
                    );
                }
                style => {
                    let dash = match style {
                        Style::Dashed => r#" stroke-dasharray="7 4""#,
                        Style::Dotted => r#" stroke-dasharray="2 3""#,
                        _ => "",
                    };
                    let _ = writeln!(
                        o,
                        r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.8"{dash}/>"#,
                        lx + 24.0
                    );
                }
            }
            let _ = writeln!(
                o,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 30.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        o.push_str("</svg>\n");
        o
    }

    pub fn save(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.render())
    }
}
