use serde::{Deserialize, Serialize};

use super::lie_cartan::{LieCartanChart, LieCartanField};
use super::{discriminant_of, foliation_vectors, CurvatureBde, Window};
use crate::error::{Error, Result};

/// Why a traced curve stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    WindowExit,
    DiscriminantHit,
    Singularity,
    StepLimit,
    /// Closed curve returned to its seed.
    Closed,
}

/// Sampled solution curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// Per point: sampled while integrating on the Lie–Cartan lift.
    pub lifted: Vec<bool>,
    /// Seed foliation (1 or 2); 0 for zero-set curves.
    pub foliation: u8,
    /// Reason the forward end stopped.
    pub termination: Termination,
    /// Reason the backward end stopped, when traced in both directions.
    pub termination_start: Option<Termination>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).sum()
    }

    /// Largest distance between consecutive points.
    pub fn max_segment(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1])).fold(0.0, f64::max)
    }
}

/// Foliation integrator settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub window: Window,
    /// Steps per direction.
    pub max_steps: usize,
    /// Starting and largest step.
    pub initial_step: f64,
    pub min_step: f64,
    /// Chord residual bound relative to the coefficient scale.
    pub residual_tol: f64,
    /// Largest projective distance between successive directions.
    pub branch_threshold: f64,
    /// `δ / scale²` below which the lift takes over.
    pub fold_tol: f64,
    /// Continue across folds on the Lie–Cartan lift.
    pub lift: bool,
    pub both_directions: bool,
}

impl TraceConfig {
    pub fn new(window: Window) -> Self {
        Self {
            window,
            max_steps: 20_000,
            initial_step: 1e-3 * window.diameter(),
            min_step: 1e-9,
            residual_tol: 1e-6,
            branch_threshold: 0.5,
            fold_tol: 1e-3,
            lift: true,
            both_directions: true,
        }
    }
}

/// Coefficient scale below which the equation counts as vanishing,
/// relative to the seed scale.
const SINGULAR_REL: f64 = 1e-8;
const MAX_TURN: f64 = 0.2;
const LIFT_CHART_SWITCH: f64 = 2.0;

/// Integrates one foliation of the equation through `seed`.
///
/// `foliation` selects the seed direction (see
/// [`foliation_vectors`](super::foliation_vectors)); afterwards the branch is
/// followed by continuity.
pub fn integrate_foliation(bde: &CurvatureBde, seed: [f64; 2], foliation: u8, cfg: &TraceConfig) -> Result<Polyline> {
    if !(foliation == 1 || foliation == 2) {
        return Err(Error::InvalidForm(format!("foliation must be 1 or 2, got {foliation}")));
    }
    if !cfg.window.is_valid() || !cfg.window.contains(seed) {
        return Err(Error::InvalidForm(format!("seed ({}, {}) outside the trace window", seed[0], seed[1])));
    }
    let c = bde.coeffs(seed[0], seed[1]);
    let delta = discriminant_of(c);
    let scale = max_abs(c);
    if !(delta > 0.0) || scale == 0.0 {
        return Err(Error::NoRealDirection { u: seed[0], v: seed[1], delta });
    }
    let d0 = foliation_vectors(c).expect("positive discriminant")[(foliation - 1) as usize];
    let tracer = Tracer { bde, cfg, seed_scale: scale };
    let (fwd, fwd_lift, t_fwd) = tracer.run(seed, d0);
    if !cfg.both_directions {
        return Ok(Polyline { points: fwd, lifted: fwd_lift, foliation, termination: t_fwd, termination_start: None });
    }
    let (mut back, mut back_lift, t_back) = tracer.run(seed, [-d0[0], -d0[1]]);
    back.reverse();
    back_lift.reverse();
    back.pop();
    back_lift.pop();
    back.extend(fwd);
    back_lift.extend(fwd_lift);
    Ok(Polyline { points: back, lifted: back_lift, foliation, termination: t_fwd, termination_start: Some(t_back) })
}

fn max_abs(c: [f64; 3]) -> f64 {
    c[0].abs().max(c[1].abs()).max(c[2].abs())
}

fn norm2(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

fn norm3(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

enum Eval {
    Dir([f64; 2]),
    Fold,
    Vanishing,
    Branch,
}

struct Tracer<'a> {
    bde: &'a CurvatureBde,
    cfg: &'a TraceConfig,
    seed_scale: f64,
}

/// State on the lift: `(u, v, p)` in a chart with an orientation.
#[derive(Clone, Copy)]
struct LiftState {
    x: [f64; 3],
    chart: LieCartanChart,
    /// Unit velocity of the last step in chart coordinates.
    vel: [f64; 3],
}

impl<'a> Tracer<'a> {
    fn field(&self, x: [f64; 2], prev: [f64; 2]) -> Eval {
        let c = self.bde.coeffs(x[0], x[1]);
        let scale = max_abs(c);
        if scale < SINGULAR_REL * self.seed_scale {
            return Eval::Vanishing;
        }
        let delta = discriminant_of(c);
        if self.cfg.lift && delta < self.cfg.fold_tol * scale * scale {
            return Eval::Fold;
        }
        let Some(roots) = foliation_vectors(c) else { return Eval::Fold };
        let dots = roots.map(|r| r[0] * prev[0] + r[1] * prev[1]);
        let k = if dots[0].abs() >= dots[1].abs() { 0 } else { 1 };
        let s = if dots[k] >= 0.0 { 1.0 } else { -1.0 };
        let d = [s * roots[k][0], s * roots[k][1]];
        let sin = (d[0] * prev[1] - d[1] * prev[0]).abs();
        if sin > self.cfg.branch_threshold {
            return Eval::Branch;
        }
        Eval::Dir(d)
    }

    fn rk4(&self, x: [f64; 2], d: [f64; 2], h: f64) -> Option<([f64; 2], [f64; 2])> {
        let dir = |p: [f64; 2], prev: [f64; 2]| match self.field(p, prev) {
            Eval::Dir(d) => Some(d),
            _ => None,
        };
        let k1 = dir(x, d)?;
        let k2 = dir([x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]], k1)?;
        let k3 = dir([x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]], k2)?;
        let k4 = dir([x[0] + h * k3[0], x[1] + h * k3[1]], k3)?;
        let y = [
            x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        let d_end = dir(y, k4)?;
        Some((y, d_end))
    }

    fn residual_ok(&self, a: [f64; 2], b: [f64; 2]) -> bool {
        let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let c = self.bde.coeffs(m[0], m[1]);
        let (du, dv) = (b[0] - a[0], b[1] - a[1]);
        let r = c[0] * du * du + c[1] * du * dv + c[2] * dv * dv;
        r.abs() <= self.cfg.residual_tol * max_abs(c) * (du * du + dv * dv)
    }

    /// Traces from `start` along `d0`; returns points, lift flags and the stop reason.
    fn run(&self, start: [f64; 2], d0: [f64; 2]) -> (Vec<[f64; 2]>, Vec<bool>, Termination) {
        let cfg = self.cfg;
        let hmax = cfg.initial_step;
        let mut pts = vec![start];
        let mut lifted = vec![false];
        let mut x = start;
        let mut d = d0;
        let mut h = hmax;
        let mut steps = 0;
        while steps < cfg.max_steps {
            match self.field(x, d) {
                Eval::Vanishing => return (pts, lifted, Termination::Singularity),
                Eval::Fold => {
                    if !cfg.lift {
                        return (pts, lifted, Termination::DiscriminantHit);
                    }
                    match self.run_lift(x, d, &mut pts, &mut lifted, &mut steps) {
                        Ok((nx, nd)) => {
                            x = nx;
                            d = nd;
                            h = hmax;
                            continue;
                        }
                        Err(t) => return (pts, lifted, t),
                    }
                }
                Eval::Branch => return (pts, lifted, Termination::DiscriminantHit),
                Eval::Dir(_) => {}
            }
            let mut accepted = None;
            while h >= cfg.min_step {
                if let Some((y, dn)) = self.rk4(x, d, h) {
                    let turn = (d[0] * dn[1] - d[1] * dn[0]).abs();
                    if turn <= MAX_TURN && self.residual_ok(x, y) {
                        accepted = Some((y, dn, turn));
                        break;
                    }
                } else if self.near_fold(x, h) {
                    // Let the fold branch take over at the current point.
                    accepted = None;
                    break;
                }
                h *= 0.5;
            }
            let Some((y, dn, turn)) = accepted else {
                if h >= cfg.min_step && cfg.lift {
                    match self.run_lift(x, d, &mut pts, &mut lifted, &mut steps) {
                        Ok((nx, nd)) => {
                            x = nx;
                            d = nd;
                            h = hmax;
                            continue;
                        }
                        Err(t) => return (pts, lifted, t),
                    }
                }
                let c = self.bde.coeffs(x[0], x[1]);
                let t = if max_abs(c) < 1e-4 * self.seed_scale { Termination::Singularity } else { Termination::DiscriminantHit };
                return (pts, lifted, t);
            };
            steps += 1;
            if !cfg.window.contains(y) {
                pts.push(self.exit_point(x, d, h).unwrap_or_else(|| cfg.window.clip_exit(x, y)));
                lifted.push(false);
                return (pts, lifted, Termination::WindowExit);
            }
            pts.push(y);
            lifted.push(false);
            x = y;
            d = dn;
            if turn < 0.05 {
                h = (h * 1.5).min(hmax);
            }
        }
        (pts, lifted, Termination::StepLimit)
    }

    /// Last integrated point inside the window along a step of length at most `h`.
    fn exit_point(&self, x: [f64; 2], d: [f64; 2], h: f64) -> Option<[f64; 2]> {
        let (mut lo, mut hi) = (0.0, h);
        let mut best = None;
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            match self.rk4(x, d, mid) {
                Some((y, _)) if self.cfg.window.contains(y) => {
                    lo = mid;
                    best = Some(y);
                }
                Some(_) => hi = mid,
                None => return best,
            }
        }
        best
    }

    /// Whether a point within `h` ahead sits in the fold band.
    fn near_fold(&self, x: [f64; 2], h: f64) -> bool {
        let c = self.bde.coeffs(x[0], x[1]);
        let s = max_abs(c);
        let delta = discriminant_of(c);
        let g = self.bde.coeffs_with_gradient(x[0], x[1]);
        let grad = [0usize, 1, 2].map(|k| 2.0 * g[1][0] * g[1][k] - 4.0 * (g[0][0] * g[2][k] + g[0][k] * g[2][0]));
        let slope = grad[1].hypot(grad[2]);
        delta <= 4.0 * (self.cfg.fold_tol * s * s + slope * h)
    }

    /// Follows the lift from the planar point `x` with heading `d` until the
    /// curve leaves the fold band; returns the planar re-entry state.
    fn run_lift(
        &self,
        x: [f64; 2],
        d: [f64; 2],
        pts: &mut Vec<[f64; 2]>,
        lifted: &mut Vec<bool>,
        steps: &mut usize,
    ) -> std::result::Result<([f64; 2], [f64; 2]), Termination> {
        let cfg = self.cfg;
        let (chart, p) = if d[0].abs() >= d[1].abs() {
            (LieCartanChart::Slope, d[1] / d[0])
        } else {
            (LieCartanChart::InverseSlope, d[0] / d[1])
        };
        let mut st = LiftState { x: [x[0], x[1], p], chart, vel: [0.0; 3] };
        st.x = self.project(st).ok_or(Termination::Singularity)?;
        let x0 = self.lift_field(st.x, chart).ok_or(Termination::Singularity)?;
        // Orient so the planar part agrees with the incoming heading.
        let along = x0[0] * d[0] + x0[1] * d[1];
        let sg = if along >= 0.0 { 1.0 } else { -1.0 };
        st.vel = x0.map(|c| sg * c);
        if let Some(l) = lifted.last_mut() {
            *l = true;
        }
        let hmax = cfg.initial_step;
        let mut h = hmax;
        let mut inside = 0usize;
        while *steps < cfg.max_steps {
            let plane = [st.x[0], st.x[1]];
            let c = self.bde.coeffs(plane[0], plane[1]);
            let s = max_abs(c);
            if s < SINGULAR_REL * self.seed_scale {
                return Err(Termination::Singularity);
            }
            if inside > 0 && discriminant_of(c) > 10.0 * cfg.fold_tol * s * s {
                let pv = self.planar_velocity(st);
                let n = norm2(pv);
                if n > 0.0 {
                    return Ok((plane, [pv[0] / n, pv[1] / n]));
                }
            }
            if st.chart_needs_switch() {
                st = self.switch_chart(st);
            }
            let mut next = None;
            while h >= cfg.min_step {
                if let Some(n) = self.lift_rk4(st, h) {
                    let turn = 1.0 - (n.vel[0] * st.vel[0] + n.vel[1] * st.vel[1] + n.vel[2] * st.vel[2]);
                    if turn <= 0.5 * MAX_TURN * MAX_TURN {
                        next = Some((n, turn));
                        break;
                    }
                }
                h *= 0.5;
            }
            let Some((n, turn)) = next else { return Err(Termination::Singularity) };
            *steps += 1;
            inside += 1;
            let y = [n.x[0], n.x[1]];
            if !cfg.window.contains(y) {
                pts.push(cfg.window.clip_exit(plane, y));
                lifted.push(true);
                return Err(Termination::WindowExit);
            }
            pts.push(y);
            lifted.push(true);
            st = n;
            if turn < 1e-3 {
                h = (h * 1.5).min(hmax);
            }
        }
        Err(Termination::StepLimit)
    }

    fn lift_field(&self, x: [f64; 3], chart: LieCartanChart) -> Option<[f64; 3]> {
        let f = LieCartanField::in_chart(self.bde, chart).x(x[0], x[1], x[2]);
        let n = norm3(f);
        (n > 1e-300 && n.is_finite()).then(|| f.map(|c| c / n))
    }

    fn oriented(&self, x: [f64; 3], chart: LieCartanChart, prev: [f64; 3]) -> Option<[f64; 3]> {
        let f = self.lift_field(x, chart)?;
        let s = if f[0] * prev[0] + f[1] * prev[1] + f[2] * prev[2] >= 0.0 { 1.0 } else { -1.0 };
        Some(f.map(|c| s * c))
    }

    fn lift_rk4(&self, st: LiftState, h: f64) -> Option<LiftState> {
        let x = st.x;
        let ch = st.chart;
        let add = |a: [f64; 3], k: [f64; 3], t: f64| [a[0] + t * k[0], a[1] + t * k[1], a[2] + t * k[2]];
        let k1 = self.oriented(x, ch, st.vel)?;
        let k2 = self.oriented(add(x, k1, 0.5 * h), ch, k1)?;
        let k3 = self.oriented(add(x, k2, 0.5 * h), ch, k2)?;
        let k4 = self.oriented(add(x, k3, h), ch, k3)?;
        let y = [0, 1, 2].map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        let mut n = LiftState { x: y, chart: ch, vel: k4 };
        n.x = self.project(n)?;
        n.vel = self.oriented(n.x, ch, k4)?;
        Some(n)
    }

    /// Newton projection onto `F = 0` along `∇F`.
    fn project(&self, st: LiftState) -> Option<[f64; 3]> {
        let lc = LieCartanField::in_chart(self.bde, st.chart);
        let mut x = st.x;
        for _ in 0..8 {
            let [f, fu, fv, fp] = lc.f_with_gradient(x[0], x[1], x[2]);
            let g2 = fu * fu + fv * fv + fp * fp;
            if g2 == 0.0 || !g2.is_finite() {
                return None;
            }
            let t = f / g2;
            x = [x[0] - t * fu, x[1] - t * fv, x[2] - t * fp];
            if f.abs() <= 1e-14 * g2.sqrt() {
                break;
            }
        }
        Some(x)
    }

    fn planar_velocity(&self, st: LiftState) -> [f64; 2] {
        [st.vel[0], st.vel[1]]
    }

    fn switch_chart(&self, st: LiftState) -> LiftState {
        let p = st.x[2];
        let chart = match st.chart {
            LieCartanChart::Slope => LieCartanChart::InverseSlope,
            LieCartanChart::InverseSlope => LieCartanChart::Slope,
        };
        // d(1/p) = -dp/p²
        let vel = [st.vel[0], st.vel[1], -st.vel[2] / (p * p)];
        let mut n = LiftState { x: [st.x[0], st.x[1], 1.0 / p], chart, vel };
        if let Some(v) = self.oriented(n.x, chart, vel) {
            n.vel = v;
        }
        n
    }
}

impl LiftState {
    fn chart_needs_switch(&self) -> bool {
        self.x[2].abs() > LIFT_CHART_SWITCH
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Jet2;

    fn explicit(a: Jet2, b: Jet2, c: Jet2) -> CurvatureBde {
        CurvatureBde::explicit(a, b, c)
    }

    #[test]
    fn dudv_horizontal_leaf() {
        let bde = explicit(Jet2::zero(2), Jet2::constant(2, 1.0), Jet2::zero(2));
        let cfg = TraceConfig::new(Window::square(2.0));
        let pl = integrate_foliation(&bde, [1.0, 1.0], 2, &cfg).unwrap();
        assert!(pl.points.iter().all(|p| (p[1] - 1.0).abs() < 1e-12));
        assert_eq!(pl.termination, Termination::WindowExit);
        assert!((pl.points.first().unwrap()[0] + 2.0).abs() < 1e-12);
        assert!((pl.points.last().unwrap()[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn d1_axis_is_leaf() {
        // v dv² + 2u du dv − v du² = 0
        let bde = explicit(
            Jet2::from_terms(2, &[(0, 1, -1.0)]),
            Jet2::from_terms(2, &[(1, 0, 2.0)]),
            Jet2::from_terms(2, &[(0, 1, 1.0)]),
        );
        let cfg = TraceConfig::new(Window::square(1.0));
        let c = bde.coeffs(0.5, 0.0);
        let f = foliation_vectors(c).unwrap();
        let fol = if f[0][1].abs() < 1e-12 { 1 } else { 2 };
        let pl = integrate_foliation(&bde, [0.5, 0.0], fol, &cfg).unwrap();
        assert!(pl.points.iter().all(|p| p[1].abs() < 1e-12));
    }

    #[test]
    fn cusp_model_matches_closed_form() {
        // dv² + u du² = 0: v = c ∓ (2/3)(−u)^{3/2}
        let bde = explicit(Jet2::from_terms(2, &[(1, 0, 1.0)]), Jet2::zero(2), Jet2::constant(2, 1.0));
        let mut cfg = TraceConfig::new(Window::new(-1.0, 0.5, -1.0, 1.0));
        cfg.both_directions = true;
        let seed = [-0.5, 0.1];
        for fol in [1, 2] {
            let pl = integrate_foliation(&bde, seed, fol, &cfg).unwrap();
            let c = bde.coeffs(seed[0], seed[1]);
            let dir = foliation_vectors(c).unwrap()[(fol - 1) as usize];
            let sgn = (dir[1] / dir[0]).signum();
            // dv/du = sgn √(−u) ⇒ v = v0 − sgn (2/3)((−u)^{3/2} − (−u0)^{3/2})
            for (p, l) in pl.points.iter().zip(&pl.lifted) {
                if *l || p[0] > -1e-3 {
                    continue;
                }
                let exact = seed[1] - sgn * (2.0 / 3.0) * ((-p[0]).powf(1.5) - (-seed[0]).powf(1.5));
                if (p[1] - exact).abs() >= 1e-5 {
                    // after the cusp the curve continues on the mirrored branch
                    let after = seed[1] - sgn * (2.0 / 3.0) * (0.0 - (-seed[0]).powf(1.5)) + sgn * (2.0 / 3.0) * (-p[0]).powf(1.5);
                    assert!((p[1] - after).abs() < 1e-5, "{p:?} {exact} {after}");
                }
            }
        }
    }

    #[test]
    fn negative_discriminant_seed() {
        let bde = explicit(Jet2::constant(2, 1.0), Jet2::zero(2), Jet2::constant(2, 1.0));
        let cfg = TraceConfig::new(Window::square(1.0));
        assert!(matches!(integrate_foliation(&bde, [0.0, 0.0], 1, &cfg), Err(Error::NoRealDirection { .. })));
    }
}
