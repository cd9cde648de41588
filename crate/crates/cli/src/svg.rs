//! Minimal SVG line plots: a linear panel and a log10 panel side by side.

use std::fmt::Write;

pub const PANEL_W: f64 = 800.0;
pub const PANEL_H: f64 = 500.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;
const LOG_FLOOR: f64 = 1e-16;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct Series<'a> {
    pub label: String,
    pub t: &'a [f64],
    pub y: &'a [f64],
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64) -> Self {
        if hi > lo {
            Self { lo, hi }
        } else {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            Self { lo: lo - pad, hi: hi + pad }
        }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..=4).map(|k| self.lo + (self.hi - self.lo) * k as f64 / 4.0).collect()
    }
}

fn label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if (1e-2..1e4).contains(&v.abs()) {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn panel(out: &mut String, x0: f64, title: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>)]) {
    let pts = series.iter().flat_map(|s| s.1.iter());
    let (tmin, tmax, ymin, ymax) = pts.fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(t, y)| (a.min(t), b.max(t), c.min(y), d.max(y)),
    );
    let (tx, ty) = if tmin.is_finite() { (Axis::new(tmin, tmax), Axis::new(ymin, ymax)) } else { (Axis::new(0.0, 1.0), Axis::new(0.0, 1.0)) };
    let w = PANEL_W - MARGIN_L - MARGIN_R;
    let h = PANEL_H - MARGIN_T - MARGIN_B;
    let px = |t: f64| x0 + MARGIN_L + w * tx.frac(t);
    let py = |y: f64| MARGIN_T + h * (1.0 - ty.frac(y));

    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{MARGIN_T}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
        x0 + MARGIN_L
    );
    let _ = writeln!(out, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, x0 + MARGIN_L + w / 2.0);
    for v in tx.ticks() {
        let x = px(v);
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, MARGIN_T + h, MARGIN_T + h + 5.0);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, MARGIN_T + h + 18.0, label(v));
    }
    for v in ty.ticks() {
        let y = py(v);
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#, x0 + MARGIN_L - 5.0, x0 + MARGIN_L);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, x0 + MARGIN_L - 8.0, y + 4.0, label(v));
    }
    let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#, x0 + MARGIN_L + w / 2.0, PANEL_H - 10.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{y_label}</text>"#,
        x0 + 18.0,
        MARGIN_T + h / 2.0,
        x0 + 18.0,
        MARGIN_T + h / 2.0
    );
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(t, y)| format!("{:.2},{:.2}", px(t), py(y))).collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        if series.len() > 1 {
            let ly = MARGIN_T + 18.0 + 16.0 * k as f64;
            let lx = x0 + PANEL_W - MARGIN_R - 150.0;
            let _ = writeln!(out, r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{name}</text>"#, lx + 26.0, ly + 4.0);
        }
    }
    let _ = writeln!(out, "</g>");
}

/// Thin a long trace to at most `max` points, always keeping the last one.
fn thin(t: &[f64], y: &[f64], max: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let stride = t.len().div_ceil(max).max(1);
    let mut pts: Vec<(f64, f64)> = t.iter().zip(y).step_by(stride).map(|(&t, &y)| (t, f(y))).collect();
    if let (Some(&lt), Some(&ly)) = (t.last(), y.last()) {
        if (t.len() - 1) % stride != 0 {
            pts.push((lt, f(ly)));
        }
    }
    pts
}

/// Two panels of `l2` against `t`: linear and log10 scale.
pub fn decay_plot(series: &[Series]) -> String {
    let lin: Vec<_> = series.iter().map(|s| (s.label.clone(), thin(s.t, s.y, 2000, |y| y))).collect();
    let log: Vec<_> = series
        .iter()
        .map(|s| (s.label.clone(), thin(s.t, s.y, 2000, |y| y.max(LOG_FLOOR).log10())))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{PANEL_H}" viewBox="0 0 {} {PANEL_H}">"#,
        2.0 * PANEL_W,
        2.0 * PANEL_W
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    panel(&mut out, 0.0, "L2 norm", "l2", &lin);
    panel(&mut out, PANEL_W, "L2 norm (log scale)", "log10 l2", &log);
    out.push_str("</svg>\n");
    out
}
