//! Deterministic SVG output of traced configurations.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bde::Window;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Foliation1,
    Foliation2,
    /// Dash-dot.
    Parabolic,
    /// Dashed.
    Discriminant,
    /// Bold.
    Separatrix,
}

impl Style {
    fn class(self) -> &'static str {
        match self {
            Style::Foliation1 => "foliation1",
            Style::Foliation2 => "foliation2",
            Style::Parabolic => "parabolic",
            Style::Discriminant => "discriminant",
            Style::Separatrix => "separatrix",
        }
    }

    fn color(self) -> &'static str {
        match self {
            Style::Foliation1 => "#1f4e9c",
            Style::Foliation2 => "#c0392b",
            Style::Parabolic => "#000000",
            Style::Discriminant => "#4d4d4d",
            Style::Separatrix => "#000000",
        }
    }

    fn width(self) -> f64 {
        match self {
            Style::Separatrix => 2.5,
            Style::Parabolic | Style::Discriminant => 1.4,
            _ => 1.0,
        }
    }

    /// Dash pattern in stroke-width units.
    fn dashes(self) -> Option<&'static [f64]> {
        match self {
            Style::Parabolic => Some(&[8.0, 3.0, 1.5, 3.0]),
            Style::Discriminant => Some(&[6.0, 4.0]),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub points: Vec<[f64; 2]>,
    pub style: Style,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub at: [f64; 2],
    pub label: String,
}

/// Curves and labelled points in surface coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub window: Window,
    pub layers: Vec<Layer>,
    pub markers: Vec<Marker>,
}

impl Scene {
    pub fn new(window: Window) -> Self {
        Self { window, layers: Vec::new(), markers: Vec::new() }
    }

    pub fn add(&mut self, points: Vec<[f64; 2]>, style: Style) {
        self.layers.push(Layer { points, style });
    }

    pub fn mark(&mut self, at: [f64; 2], label: impl Into<String>) {
        self.markers.push(Marker { at, label: label.into() });
    }
}

/// Formats `x` with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0.00000".to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&e) {
        return format!("{x:.5e}");
    }
    let mut dec = (5 - e).max(0) as usize;
    let mut s = format!("{x:.dec$}");
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    let significant = digits.trim_start_matches('0').len();
    if significant > 6 && dec > 0 {
        dec -= 1;
        s = format!("{x:.dec$}");
    }
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s.remove(0);
    }
    s
}

/// Liang–Barsky clip of segment `a → b` to the window.
fn clip_segment(w: &Window, a: [f64; 2], b: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-d[0], a[0] - w.umin), (d[0], w.umax - a[0]), (-d[1], a[1] - w.vmin), (d[1], w.vmax - a[1])] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then(|| ([a[0] + t0 * d[0], a[1] + t0 * d[1]], [a[0] + t1 * d[0], a[1] + t1 * d[1]]))
}

/// Splits a polyline into the runs that lie inside the window.
fn clip_polyline(w: &Window, pts: &[[f64; 2]]) -> Vec<Vec<[f64; 2]>> {
    let mut runs: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    if pts.len() == 1 && w.contains(pts[0]) {
        return vec![pts.to_vec()];
    }
    for seg in pts.windows(2) {
        match clip_segment(w, seg[0], seg[1]) {
            Some((a, b)) => {
                if cur.last() != Some(&a) {
                    if cur.len() > 1 {
                        runs.push(std::mem::take(&mut cur));
                    }
                    cur.clear();
                    cur.push(a);
                }
                cur.push(b);
                if b != seg[1] {
                    runs.push(std::mem::take(&mut cur));
                }
            }
            None => {
                if cur.len() > 1 {
                    runs.push(std::mem::take(&mut cur));
                }
                cur.clear();
            }
        }
    }
    if cur.len() > 1 {
        runs.push(cur);
    }
    runs
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the scene as an SVG 1.1 document; the viewBox is the window with
/// the `v` axis pointing up.
pub fn render_svg(scene: &Scene) -> Result<String> {
    let w = scene.window;
    if !w.is_valid() {
        return Err(Error::InvalidScene(format!("empty window [{}, {}] x [{}, {}]", w.umin, w.umax, w.vmin, w.vmax)));
    }
    let (width, height) = (w.umax - w.umin, w.vmax - w.vmin);
    let unit = 0.002 * width.max(height);
    let px_w = 600.0;
    let px_h = (600.0 * height / width).round().max(1.0);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        px_w,
        px_h,
        sig6(w.umin),
        sig6(-w.vmax),
        sig6(width),
        sig6(height)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"{}\"/>",
        sig6(w.umin),
        sig6(-w.vmax),
        sig6(width),
        sig6(height),
        sig6(unit)
    );
    out.push_str("<g id=\"axes\" stroke=\"#b3b3b3\" fill=\"none\">\n");
    if w.umin < 0.0 && w.umax > 0.0 {
        let _ = writeln!(
            out,
            "<line x1=\"0.00000\" y1=\"{}\" x2=\"0.00000\" y2=\"{}\" stroke-width=\"{}\"/>",
            sig6(-w.vmax),
            sig6(-w.vmin),
            sig6(0.5 * unit)
        );
    }
    if w.vmin < 0.0 && w.vmax > 0.0 {
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"0.00000\" x2=\"{}\" y2=\"0.00000\" stroke-width=\"{}\"/>",
            sig6(w.umin),
            sig6(w.umax),
            sig6(0.5 * unit)
        );
    }
    out.push_str("</g>\n");
    for layer in &scene.layers {
        let runs = clip_polyline(&w, &layer.points);
        if runs.is_empty() {
            continue;
        }
        let style = layer.style;
        let mut d = String::new();
        for run in runs {
            for (i, p) in run.iter().enumerate() {
                let _ = write!(d, "{}{} {}", if i == 0 { if d.is_empty() { "M" } else { " M" } } else { " L" }, sig6(p[0]), sig6(-p[1]));
            }
        }
        let sw = style.width() * unit;
        let mut attrs = format!(
            "class=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\" stroke-linecap=\"round\"",
            style.class(),
            style.color(),
            sig6(sw)
        );
        if let Some(pat) = style.dashes() {
            let s: Vec<String> = pat.iter().map(|x| sig6(x * unit)).collect();
            let _ = write!(attrs, " stroke-dasharray=\"{}\"", s.join(" "));
        }
        let _ = writeln!(out, "<path {attrs} d=\"{d}\"/>");
    }
    if !scene.markers.is_empty() {
        out.push_str("<g id=\"markers\">\n");
        for m in &scene.markers {
            if !w.contains(m.at) {
                continue;
            }
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#000000\"/>",
                sig6(m.at[0]),
                sig6(-m.at[1]),
                sig6(3.0 * unit)
            );
            let tx = (m.at[0] + 5.0 * unit).min(w.umax);
            let ty = (-m.at[1] - 5.0 * unit).max(-w.vmax);
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\">{}</text>",
                sig6(tx),
                sig6(ty),
                sig6(18.0 * unit),
                escape(&m.label)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(1.23456789), "1.23457");
        assert_eq!(sig6(-0.5), "-0.500000");
        assert_eq!(sig6(0.0), "0.00000");
        assert_eq!(sig6(123.0), "123.000");
        assert_eq!(sig6(9.9999996), "10.0000");
        assert_eq!(sig6(-1e-9), "-1.00000e-9");
        assert_eq!(sig6(-0.0000001), "-1.00000e-7");
    }

    #[test]
    fn one_path_per_polyline() {
        let mut s = Scene::new(Window::square(2.0));
        s.add(vec![[0.0, 0.0], [1.0, 1.0]], Style::Foliation1);
        let svg = render_svg(&s).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("M0.00000 0.00000 L1.00000 -1.00000"));
        assert_eq!(svg, render_svg(&s).unwrap());
    }

    #[test]
    fn empty_scene_and_window() {
        let s = Scene::new(Window::square(1.0));
        let svg = render_svg(&s).unwrap();
        assert!(svg.contains("<svg") && svg.contains("</svg>") && !svg.contains("<path"));
        assert!(matches!(render_svg(&Scene::new(Window::new(1.0, 1.0, 0.0, 1.0))), Err(Error::InvalidScene(_))));
    }

    #[test]
    fn clipping() {
        let mut s = Scene::new(Window::square(1.0));
        s.add(vec![[-3.0, 0.0], [3.0, 0.0]], Style::Separatrix);
        let svg = render_svg(&s).unwrap();
        assert!(svg.contains("M-1.00000 0.00000 L1.00000 0.00000"), "{svg}");
    }
}
