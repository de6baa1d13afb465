//! Leaf seeding and figure assembly.

use affina_core::bde::{foliation_vectors, zero_set, ContourConfig};
use affina_core::render::Style;
use affina_core::{
    classify_surface, curvature_bde, discriminant, integrate_foliation, CurvatureBde, Error as CoreError, Polyline,
    Scene, SurfaceJet, Tag, TraceConfig, Window,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Which foliations to trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Foliations {
    One,
    Two,
    Both,
}

impl Foliations {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" => Some(Foliations::One),
            "2" => Some(Foliations::Two),
            "both" => Some(Foliations::Both),
            _ => None,
        }
    }

    fn labels(self) -> &'static [u8] {
        match self {
            Foliations::One => &[1],
            Foliations::Two => &[2],
            Foliations::Both => &[1, 2],
        }
    }
}

/// Optional figure layers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Show {
    pub parabolic: bool,
    pub discriminant: bool,
    pub separatrices: bool,
}

impl Show {
    pub fn all() -> Self {
        Self { parabolic: true, discriminant: true, separatrices: true }
    }

    /// Comma-separated list of `parabolic`, `discriminant`, `separatrices`.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut s = Show::default();
        for item in list.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "parabolic" => s.parabolic = true,
                "discriminant" => s.discriminant = true,
                "separatrices" => s.separatrices = true,
                other => return Err(format!("unknown layer {other:?}; expected parabolic, discriminant or separatrices")),
            }
        }
        Ok(s)
    }
}

/// Output of the `trace` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOutput {
    pub window: Window,
    pub polylines: Vec<Polyline>,
}

/// `n` seeds on a near-square grid of cell centres, row by row from the
/// bottom; a short last row is spread across the full width.
pub fn seed_grid(w: &Window, n: usize) -> Vec<[f64; 2]> {
    if n == 0 {
        return Vec::new();
    }
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let mut out = Vec::with_capacity(n);
    for r in 0..rows {
        let count = cols.min(n - r * cols);
        let v = w.vmin + (w.vmax - w.vmin) * (r as f64 + 0.5) / rows as f64;
        for c in 0..count {
            out.push([w.umin + (w.umax - w.umin) * (c as f64 + 0.5) / count as f64, v]);
        }
    }
    out
}

/// Traces leaves through the seed grid, skipping seeds without real
/// directions.
pub fn trace_leaves(bde: &CurvatureBde, cfg: &TraceConfig, seeds: usize, foliations: Foliations) -> CliResult<Vec<Polyline>> {
    check_window(&cfg.window)?;
    let mut out = Vec::new();
    for &fol in foliations.labels() {
        for seed in seed_grid(&cfg.window, seeds) {
            match integrate_foliation(bde, seed, fol, cfg) {
                Ok(pl) => out.push(pl),
                Err(CoreError::NoRealDirection { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(out)
}

/// Leaves through the radial solution directions on a small circle about the
/// base point.
pub fn separatrix_leaves(bde: &CurvatureBde, cfg: &TraceConfig) -> CliResult<Vec<Polyline>> {
    let window = cfg.window;
    let rho = 0.02 * window.diameter();
    let inner = Window::new(window.umin + rho, window.umax - rho, window.vmin + rho, window.vmax - rho);
    if !inner.is_valid() || !inner.contains([0.0, 0.0]) {
        return Ok(Vec::new());
    }
    let radial = |t: f64| {
        let (s, c) = t.sin_cos();
        let k = bde.coeffs(rho * c, rho * s);
        k[0] * c * c + k[1] * c * s + k[2] * s * s
    };
    const SAMPLES: usize = 720;
    let step = std::f64::consts::TAU / SAMPLES as f64;
    let mut angles = Vec::new();
    for i in 0..SAMPLES {
        let (a, b) = (i as f64 * step, (i + 1) as f64 * step);
        let (fa, fb) = (radial(a), radial(b));
        if fa == 0.0 {
            angles.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = radial(mid);
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            angles.push(0.5 * (lo + hi));
        }
    }
    let mut out = Vec::new();
    for t in angles {
        let (s, c) = t.sin_cos();
        let seed = [rho * c, rho * s];
        let coeffs = bde.coeffs(seed[0], seed[1]);
        if discriminant(bde, seed[0], seed[1]) <= 0.0 {
            continue;
        }
        let Some(vs) = foliation_vectors(coeffs) else { continue };
        let align = |x: [f64; 2]| (x[0] * c + x[1] * s).abs() / x[0].hypot(x[1]);
        let fol = if align(vs[0]) >= align(vs[1]) { 1 } else { 2 };
        match integrate_foliation(bde, seed, fol, cfg) {
            Ok(pl) => out.push(pl),
            Err(CoreError::NoRealDirection { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn check_window(w: &Window) -> CliResult<()> {
    if w.is_valid() && [w.umin, w.umax, w.vmin, w.vmax].iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Input(format!("empty window [{}, {}] x [{}, {}]", w.umin, w.umax, w.vmin, w.vmax)))
    }
}

/// Largest figure step relative to the window diameter.
const FIGURE_STEP: f64 = 4e-3;
/// Drawing tolerance relative to the window diameter.
const FIGURE_TOL: f64 = 2e-4;

/// Douglas–Peucker simplification: keeps the endpoints and every point
/// needed to stay within `tol` of the input.
pub fn simplify(points: &[[f64; 2]], tol: f64) -> Vec<[f64; 2]> {
    if points.len() < 3 {
        return points.to_vec();
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    let mut stack = vec![(0, points.len() - 1)];
    while let Some((a, b)) = stack.pop() {
        let (p, q) = (points[a], points[b]);
        let d = [q[0] - p[0], q[1] - p[1]];
        let len = d[0].hypot(d[1]);
        let mut worst = (0.0, a);
        for (i, x) in points.iter().enumerate().take(b).skip(a + 1) {
            let e = if len > 0.0 {
                ((x[0] - p[0]) * d[1] - (x[1] - p[1]) * d[0]).abs() / len
            } else {
                (x[0] - p[0]).hypot(x[1] - p[1])
            };
            if e > worst.0 {
                worst = (e, i);
            }
        }
        if worst.0 > tol {
            keep[worst.1] = true;
            stack.push((a, worst.1));
            stack.push((worst.1, b));
        }
    }
    points.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| *p).collect()
}

/// Assembles leaves of both foliations, the requested extra layers and a
/// label at the base point.
pub fn build_scene(s: &SurfaceJet, window: Window, seeds: usize, show: Show) -> CliResult<Scene> {
    check_window(&window)?;
    let bde = curvature_bde(s);
    let mut cfg = TraceConfig::new(window);
    cfg.initial_step = FIGURE_STEP * window.diameter();
    let tol = FIGURE_TOL * window.diameter();
    let mut scene = Scene::new(window);
    let mut add = |points: &[[f64; 2]], style| scene.add(simplify(points, tol), style);
    for pl in trace_leaves(&bde, &cfg, seeds, Foliations::Both)? {
        add(&pl.points, if pl.foliation == 1 { Style::Foliation1 } else { Style::Foliation2 });
    }
    let contour = ContourConfig::new(window);
    if show.parabolic {
        let k = |u: f64, v: f64| s.hessian_det(u, v);
        for c in zero_set(&k, 48, &contour) {
            add(&c.points, Style::Parabolic);
        }
    }
    if show.discriminant {
        let d = |u: f64, v: f64| discriminant(&bde, u, v);
        for c in zero_set(&d, 48, &contour) {
            add(&c.points, Style::Discriminant);
        }
    }
    if show.separatrices {
        for pl in separatrix_leaves(&bde, &cfg)? {
            add(&pl.points, Style::Separatrix);
        }
    }
    let tag = classify_surface(s).tag;
    if !matches!(tag, Tag::Regular | Tag::Degenerate) && window.contains([0.0, 0.0]) {
        scene.mark([0.0, 0.0], tag.name());
    }
    Ok(scene)
}
