use serde::{Deserialize, Serialize};

use super::trace::{Polyline, Termination};
use super::Window;
use crate::error::{Error, Result};

/// Zero-set continuation settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    pub window: Window,
    /// Largest step along the curve.
    pub step: f64,
    pub min_step: f64,
    pub max_steps: usize,
    /// Accepted points satisfy `|f| <= tol · diam · |∇f|`.
    pub tol: f64,
    /// Gradient norm, relative to the seed gradient, treated as vanishing.
    pub singular_rel: f64,
}

impl ContourConfig {
    pub fn new(window: Window) -> Self {
        Self { window, step: 1e-3 * window.diameter(), min_step: 1e-10, max_steps: 50_000, tol: 1e-9, singular_rel: 1e-6 }
    }
}

type Scalar<'a> = &'a dyn Fn(f64, f64) -> f64;

struct Contour<'a> {
    f: Scalar<'a>,
    cfg: &'a ContourConfig,
    eps: f64,
}

impl<'a> Contour<'a> {
    fn grad(&self, x: [f64; 2]) -> [f64; 2] {
        let e = self.eps;
        [
            ((self.f)(x[0] + e, x[1]) - (self.f)(x[0] - e, x[1])) / (2.0 * e),
            ((self.f)(x[0], x[1] + e) - (self.f)(x[0], x[1] - e)) / (2.0 * e),
        ]
    }

    fn accept_tol(&self, g: [f64; 2]) -> f64 {
        self.cfg.tol * self.cfg.window.diameter() * g[0].hypot(g[1])
    }

    /// Newton projection along the gradient.
    fn project(&self, mut x: [f64; 2]) -> Option<[f64; 2]> {
        for _ in 0..30 {
            let v = (self.f)(x[0], x[1]);
            let g = self.grad(x);
            let g2 = g[0] * g[0] + g[1] * g[1];
            if !(g2 > 0.0) || !g2.is_finite() {
                return None;
            }
            if v.abs() <= self.accept_tol(g) {
                return Some(x);
            }
            x = [x[0] - v * g[0] / g2, x[1] - v * g[1] / g2];
        }
        let g = self.grad(x);
        ((self.f)(x[0], x[1]).abs() <= self.accept_tol(g)).then_some(x)
    }

    fn tangent(&self, x: [f64; 2], prev: [f64; 2]) -> ([f64; 2], f64) {
        let g = self.grad(x);
        let n = g[0].hypot(g[1]);
        let mut t = [-g[1] / n, g[0] / n];
        if t[0] * prev[0] + t[1] * prev[1] < 0.0 {
            t = [-t[0], -t[1]];
        }
        (t, n)
    }

    /// Point of the curve on the window boundary between `x` and the projection of `x + h t`.
    fn exit_point(&self, x: [f64; 2], t: [f64; 2], h: f64) -> Option<[f64; 2]> {
        let (mut lo, mut hi) = (0.0, h);
        let mut best = None;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let y = self.project([x[0] + mid * t[0], x[1] + mid * t[1]])?;
            if self.cfg.window.contains(y) {
                lo = mid;
                best = Some(y);
            } else {
                hi = mid;
            }
        }
        best
    }

    fn run(&self, start: [f64; 2], t0: [f64; 2], g_seed: f64, closable: bool) -> (Vec<[f64; 2]>, Termination) {
        let cfg = self.cfg;
        let mut pts = vec![start];
        let mut x = start;
        let mut t = t0;
        let mut h = cfg.step;
        let mut travelled = 0.0;
        for _ in 0..cfg.max_steps {
            let (tx, gn) = self.tangent(x, t);
            if gn < cfg.singular_rel * g_seed {
                return (pts, Termination::Singularity);
            }
            t = tx;
            let mut next = None;
            while h >= cfg.min_step {
                let pred = [x[0] + h * t[0], x[1] + h * t[1]];
                if let Some(y) = self.project(pred) {
                    let (ty, _) = self.tangent(y, t);
                    let moved = (y[0] - pred[0]).hypot(y[1] - pred[1]);
                    let turn = (t[0] * ty[1] - t[1] * ty[0]).abs();
                    let fwd = (y[0] - x[0]) * t[0] + (y[1] - x[1]) * t[1];
                    if moved <= 0.1 * h && turn <= 0.2 && fwd > 0.0 && ty[0] * t[0] + ty[1] * t[1] > 0.0 {
                        next = Some((y, ty, turn));
                        break;
                    }
                }
                h *= 0.5;
            }
            let Some((y, ty, turn)) = next else { return (pts, Termination::Singularity) };
            if !cfg.window.contains(y) {
                pts.push(self.exit_point(x, t, h).unwrap_or_else(|| cfg.window.clip_exit(x, y)));
                return (pts, Termination::WindowExit);
            }
            travelled += (y[0] - x[0]).hypot(y[1] - x[1]);
            if closable && travelled > 4.0 * cfg.step {
                let d = (y[0] - start[0]).hypot(y[1] - start[1]);
                let heading = (start[0] - x[0]) * t[0] + (start[1] - x[1]) * t[1];
                if d <= 1.5 * h.max(cfg.step) && heading > 0.0 && travelled > 2.0 * d {
                    pts.push(start);
                    return (pts, Termination::Closed);
                }
            }
            pts.push(y);
            x = y;
            t = ty;
            if turn < 0.05 {
                h = (1.5 * h).min(cfg.step);
            }
        }
        (pts, Termination::StepLimit)
    }
}

/// Traces the connected piece of `{f = 0}` through (the projection of) `seed`.
pub fn trace_zero_curve(f: &dyn Fn(f64, f64) -> f64, seed: [f64; 2], cfg: &ContourConfig) -> Result<Polyline> {
    if !cfg.window.is_valid() {
        return Err(Error::InvalidForm("empty contour window".into()));
    }
    let c = Contour { f, cfg, eps: 1e-7 * cfg.window.diameter().max(1e-3) };
    let g0 = c.grad(seed);
    let rho = 1e-2 * cfg.window.diameter();
    let fscale = [[rho, 0.0], [-rho, 0.0], [0.0, rho], [0.0, -rho]]
        .iter()
        .map(|o| f(seed[0] + o[0], seed[1] + o[1]).abs())
        .fold(f(seed[0], seed[1]).abs(), f64::max);
    let singular = |g: [f64; 2]| g[0].hypot(g[1]) * rho <= 1e-6 * fscale || g[0].hypot(g[1]) == 0.0;
    if singular(g0) {
        return Err(Error::SingularZeroSet { u: seed[0], v: seed[1], grad: g0[0].hypot(g0[1]) });
    }
    let start = c.project(seed).ok_or(Error::SingularZeroSet { u: seed[0], v: seed[1], grad: g0[0].hypot(g0[1]) })?;
    let g = c.grad(start);
    if singular(g) {
        return Err(Error::SingularZeroSet { u: start[0], v: start[1], grad: g[0].hypot(g[1]) });
    }
    let gn = g[0].hypot(g[1]);
    let t0 = [-g[1] / gn, g[0] / gn];
    let (fwd, t_fwd) = c.run(start, t0, gn, true);
    if t_fwd == Termination::Closed {
        let n = fwd.len();
        return Ok(Polyline { points: fwd, lifted: vec![false; n], foliation: 0, termination: t_fwd, termination_start: None });
    }
    let (mut back, t_back) = c.run(start, [-t0[0], -t0[1]], gn, false);
    back.reverse();
    back.pop();
    back.extend(fwd);
    let n = back.len();
    Ok(Polyline { points: back, lifted: vec![false; n], foliation: 0, termination: t_fwd, termination_start: Some(t_back) })
}

/// All components of `{f = 0}` crossing the edges of a `grid × grid` lattice.
///
/// Components are returned in seed order (row-major scan).
pub fn zero_set(f: &dyn Fn(f64, f64) -> f64, grid: usize, cfg: &ContourConfig) -> Vec<Polyline> {
    let w = cfg.window;
    let n = grid.max(2);
    let at = |i: usize, j: usize| {
        [w.umin + (w.umax - w.umin) * i as f64 / n as f64, w.vmin + (w.vmax - w.vmin) * j as f64 / n as f64]
    };
    let mut seeds = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let p = at(i, j);
            let fp = f(p[0], p[1]);
            for q in [(i < n).then(|| at(i + 1, j)), (j < n).then(|| at(i, j + 1))].into_iter().flatten() {
                let fq = f(q[0], q[1]);
                if fp == 0.0 || fp.signum() != fq.signum() {
                    seeds.push(bisect(f, p, q, fp));
                }
            }
        }
    }
    let cell = w.diameter() / n as f64;
    let mut out: Vec<Polyline> = Vec::new();
    for s in seeds {
        let covered = out.iter().any(|pl| {
            pl.points.windows(2).any(|seg| dist_to_segment(s, seg[0], seg[1]) < 0.25 * cell)
        });
        if covered {
            continue;
        }
        if let Ok(pl) = trace_zero_curve(f, s, cfg) {
            if pl.len() > 1 {
                out.push(pl);
            }
        }
    }
    out
}

fn bisect(f: &dyn Fn(f64, f64) -> f64, mut a: [f64; 2], mut b: [f64; 2], mut fa: f64) -> [f64; 2] {
    for _ in 0..60 {
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let fm = f(m[0], m[1]);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

fn dist_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = if l2 > 0.0 { (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0) } else { 0.0 };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}
