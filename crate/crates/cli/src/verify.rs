//! Randomized cross-checks of the library against closed forms and against
//! its own independent routes.

use std::f64::consts::PI;

use affina_core::bde::{
    a3minus_eigen_products, a3minus_labelled_parabolas, b20_a3minus, b20bar_a3plus, blowup_portrait, directions_of,
    foliation_vectors, invariant_parabolas, pipeline_coeffs, trace_zero_curve, zero_set, AngleKind, BlowupPortrait,
    BlowupSign, ContourConfig, LieCartanField,
};
use affina_core::classify::{
    classify_elliptic_umbilic, classify_hyperbolic_umbilic, gauss_cusp_invariants, numeric_principal_part,
    umbilic_invariants_from_bde, umbilic_linear_coeffs, FoldedInvariants, UmbilicCase,
};
use affina_core::geometry::{
    affine_normal_jet, pick_shape_linear, pick_xi_linear, principal_data, shape_operator_jet, PrincipalData,
};
use affina_core::{
    classify_surface, curvature_bde, discriminant, integrate_foliation, normal_form_surface, point_frame,
    solve_directions, CurvatureBde, Directions, Jet2, Params, PointFrame, SingularityReport, SurfaceJet, SurfaceKind,
    Tag, TraceConfig, Var, Window,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::figures::FIGURES;
use crate::scene::{trace_leaves, Foliations, TraceOutput};

pub const DEFAULT_SEED: u64 = 42;

/// Outcome of one check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} {:<34} {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Largest observed error per metric against its tolerance.
struct Metrics {
    name: &'static str,
    cases: usize,
    entries: Vec<(&'static str, f64, f64)>,
    failures: Vec<String>,
}

impl Metrics {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, entries: Vec::new(), failures: Vec::new() }
    }

    fn see(&mut self, label: &'static str, err: f64, tol: f64) {
        let err = if err.is_nan() { f64::INFINITY } else { err };
        match self.entries.iter_mut().find(|e| e.0 == label) {
            Some(e) => e.1 = e.1.max(err),
            None => self.entries.push((label, err, tol)),
        }
    }

    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 3 {
            self.failures.push(what());
        }
        if !ok && self.failures.len() == 3 {
            self.failures.push("...".into());
        }
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn finish(self) -> Check {
        let within = self.entries.iter().all(|e| e.1 <= e.2);
        let mut detail = format!("{} cases", self.cases);
        for (label, err, tol) in &self.entries {
            detail.push_str(&format!("; {label} {err:.2e} (tol {tol:.0e})"));
        }
        for f in &self.failures {
            detail.push_str(&format!("; {f}"));
        }
        Check { name: self.name, passed: within && self.failures.is_empty() && self.cases > 0, detail }
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn max_abs(c: &[f64]) -> f64 {
    c.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn random_jet(rng: &mut ChaCha8Rng, order: usize) -> Jet2 {
    let mut j = Jet2::zero(order);
    for d in 0..=order {
        for k in 0..=d {
            j.set_coeff(d - k, k, rng.gen_range(-2.0..2.0));
        }
    }
    j
}

fn jet_distance(a: &Jet2, b: &Jet2) -> f64 {
    a.terms().zip(b.terms()).map(|((_, _, x), (_, _, y))| (x - y).abs() / (1.0 + x.abs().max(y.abs()))).fold(0.0, f64::max)
}

/// Quartic Monge surface with uniform coefficients in `[-1, 1]`.
fn random_quartic(rng: &mut ChaCha8Rng, order: usize) -> SurfaceJet {
    let mut coeffs = Vec::new();
    for d in 2..=4 {
        for j in 0..=d {
            coeffs.push((d - j, j, rng.gen_range(-1.0..1.0)));
        }
    }
    SurfaceJet::monge_from_coefficients(order, &coeffs)
}

/// Point of the window `|u|, |v| < r` with `|LN - M²| > 0.05`.
fn nonparabolic_point(rng: &mut ChaCha8Rng, s: &SurfaceJet, r: f64) -> Option<[f64; 2]> {
    (0..200).map(|_| [rng.gen_range(-r..r), rng.gen_range(-r..r)]).find(|p| s.hessian_det(p[0], p[1]).abs() > 0.05)
}

fn random_pick(rng: &mut ChaCha8Rng, kind: SurfaceKind) -> (SurfaceJet, Params) {
    let mut p = Params::new().with_sigma(rng.gen_range(-2.0..2.0));
    for d in 4..=6 {
        for j in 0..=d {
            p.set_q(d - j, j, rng.gen_range(-2.0..2.0));
        }
    }
    (normal_form_surface(kind, &p, 6).expect("pick parameters are admissible"), p)
}

/// Pick normal form with an umbilic at the origin.
fn random_umbilic(rng: &mut ChaCha8Rng, case: UmbilicCase) -> SurfaceJet {
    let kind = match case {
        UmbilicCase::Elliptic => SurfaceKind::PickElliptic,
        UmbilicCase::Hyperbolic => SurfaceKind::PickHyperbolic,
    };
    let mut p = Params::new().with_sigma(rng.gen_range(-2.0..2.0));
    for d in 4..=5 {
        for j in 0..=d {
            p.set_q(d - j, j, rng.gen_range(-2.0..2.0));
        }
    }
    let q31 = p.q(3, 1);
    p.set_q(1, 3, if case == UmbilicCase::Elliptic { -q31 } else { q31 });
    p.set_q(0, 4, p.q(4, 0));
    normal_form_surface(kind, &p, 6).expect("pick parameters are admissible")
}

fn residual_scale(c: [f64; 3]) -> f64 {
    max_abs(&c)
}

// ---------------------------------------------------------------------------
// Jets

pub fn jet_ring_axioms(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("jets.ring_axioms");
    for _ in 0..n {
        let order = rng.gen_range(0..7);
        let (a, b, c) = (random_jet(rng, order), random_jet(rng, order), random_jet(rng, order));
        m.see("commutativity", jet_distance(&(&a * &b), &(&b * &a)).max(jet_distance(&(&a + &b), &(&b + &a))), 1e-12);
        m.see("associativity", jet_distance(&(&(&a * &b) * &c), &(&a * &(&b * &c))), 1e-12);
        m.see("distributivity", jet_distance(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))), 1e-12);
        m.see("unit", jet_distance(&(&a * &Jet2::constant(order, 1.0)), &a), 0.0);
        m.case();
    }
    m.finish()
}

pub fn jet_calculus(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("jets.calculus");
    for _ in 0..n {
        let mut a = random_jet(rng, 5);
        let uv = a.partial(Var::U).partial(Var::V);
        let vu = a.partial(Var::V).partial(Var::U);
        m.see("mixed partials", jet_distance(&uv, &vu), 0.0);
        let (du, dv, x, y) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let want = a.eval(du + x, dv + y);
        m.see("shift vs eval", (a.shift(du, dv).eval(x, y) - want).abs() / (1.0 + want.abs()), 1e-10);
        a.set_coeff(0, 0, rng.gen_range(0.5..3.0));
        match a.pow(2.0).and_then(|sq| sq.pow(0.5)) {
            Ok(back) => m.see("square then root", jet_distance(&back, &a), 1e-10),
            Err(e) => m.require(false, || format!("power failed: {e}")),
        }
        m.case();
    }
    m.finish()
}

// ---------------------------------------------------------------------------
// Geometry

/// Frame at `(u, v)` with fourth-order central differences of `ν` and `ξ`
/// along `u` and `v`: `[nu_u, nu_v, xi_u, xi_v]`.
fn frame_with_differences(s: &SurfaceJet, u: f64, v: f64) -> affina_core::Result<(PointFrame, [[f64; 3]; 4])> {
    let h = 1e-4;
    let f = point_frame(s, u, v)?;
    let mut d = [[0.0; 3]; 4];
    for (axis, e) in [[1.0, 0.0], [0.0, 1.0]].iter().enumerate() {
        let at = |k: f64| point_frame(s, u + k * h * e[0], v + k * h * e[1]);
        let (p2, p1, m1, m2) = (at(2.0)?, at(1.0)?, at(-1.0)?, at(-2.0)?);
        for i in 0..3 {
            d[axis][i] = (-p2.nu[i] + 8.0 * p1.nu[i] - 8.0 * m1.nu[i] + m2.nu[i]) / (12.0 * h);
            d[2 + axis][i] = (-p2.xi[i] + 8.0 * p1.xi[i] - 8.0 * m1.xi[i] + m2.xi[i]) / (12.0 * h);
        }
    }
    Ok((f, d))
}

/// `⟨ν,ξ⟩ = 1` and `⟨ν, ∂ξ⟩ = 0` with finite-difference derivatives.
pub fn conormal(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("geometry.conormal");
    while m.cases < n {
        let s = random_quartic(rng, 6);
        let Some([u, v]) = nonparabolic_point(rng, &s, 0.3) else { continue };
        match frame_with_differences(&s, u, v) {
            Ok((f, d)) => {
                m.see("|<nu,xi> - 1|", (dot(f.nu, f.xi) - 1.0).abs(), 1e-9);
                m.see("|<nu,xi_u>|,|<nu,xi_v>|", dot(f.nu, d[2]).abs().max(dot(f.nu, d[3]).abs()), 1e-6);
            }
            Err(e) => m.require(false, || format!("frame failed near ({u}, {v}): {e}")),
        }
        m.case();
    }
    m.finish()
}

/// Analytic derivatives of `ν`, `ξ` against finite differences; shape
/// operator self-adjoint and reproducing `ξ_u`, `ξ_v`.
pub fn frame_derivatives(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("geometry.frame_derivatives");
    while m.cases < n {
        let s = random_quartic(rng, 6);
        let Some([u, v]) = nonparabolic_point(rng, &s, 0.3) else { continue };
        let (f, d) = match frame_with_differences(&s, u, v) {
            Ok(x) => x,
            Err(e) => {
                m.require(false, || format!("frame failed near ({u}, {v}): {e}"));
                m.case();
                continue;
            }
        };
        for (approx, exact) in d.iter().zip([f.nu_u, f.nu_v, f.xi_u, f.xi_v]) {
            m.see("fd vs analytic", norm([0, 1, 2].map(|i| approx[i] - exact[i])) / norm(exact).max(1.0), 1e-6);
        }
        m.see("self-adjointness", self_adjoint_defect(&f, rng), 1e-9);
        let (xu, xv) = (f.x_u(&s), f.x_v(&s));
        for (d, bu, bv) in [(f.xi_u, f.b11, f.b21), (f.xi_v, f.b12, f.b22)] {
            let res = [0, 1, 2].map(|i| f.sign * d[i] - (bu * xu[i] + bv * xv[i]));
            m.see("xi derivative residual", norm(res) / norm(d).max(1e-12), 1e-8);
        }
        m.case();
    }
    m.finish()
}

fn self_adjoint_defect(f: &PointFrame, rng: &mut ChaCha8Rng) -> f64 {
    let b = f.shape_operator();
    let g = [[f.g11, f.g12], [f.g12, f.g22]];
    let apply = |m: [[f64; 2]; 2], x: [f64; 2]| [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]];
    let gf = |x: [f64; 2], y: [f64; 2]| {
        let gy = apply(g, y);
        x[0] * gy[0] + x[1] * gy[1]
    };
    let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let y = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let (l, r) = (gf(apply(b, x), y), gf(x, apply(b, y)));
    (l - r).abs() / l.abs().max(r.abs()).max(1.0)
}

/// Linear part of the affine normal of both Pick normal forms.
pub fn pick_xi_jet(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("geometry.pick_xi_jet");
    for kind in [SurfaceKind::PickElliptic, SurfaceKind::PickHyperbolic] {
        for _ in 0..n {
            let (s, p) = random_pick(rng, kind);
            match (affine_normal_jet(&s), pick_xi_linear(kind, &p)) {
                (Ok(xi), Ok(want)) => {
                    for r in 0..2 {
                        m.see("coefficient error", (xi[r].coeff(1, 0) - want[r][0]).abs(), 1e-9);
                        m.see("coefficient error", (xi[r].coeff(0, 1) - want[r][1]).abs(), 1e-9);
                    }
                    m.see("xi3 - 1", (xi[2].constant_term() - 1.0).abs(), 1e-9);
                    m.see("xi3 linear", xi[2].coeff(1, 0).abs().max(xi[2].coeff(0, 1).abs()), 1e-9);
                }
                (a, b) => m.require(false, || format!("{kind}: {:?} / {:?}", a.err(), b.err())),
            }
            m.case();
        }
    }
    m.finish()
}

/// Constant and linear terms of the shape operator of both Pick forms.
pub fn pick_shape(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("geometry.pick_shape_operator");
    for kind in [SurfaceKind::PickElliptic, SurfaceKind::PickHyperbolic] {
        for _ in 0..n {
            let (s, p) = random_pick(rng, kind);
            match (shape_operator_jet(&s, 0.0, 0.0), pick_shape_linear(kind, &p)) {
                (Ok(b), Ok(want)) => {
                    for k in 0..4 {
                        let got = [b[k].coeff(0, 0), b[k].coeff(1, 0), b[k].coeff(0, 1)];
                        for t in 0..3 {
                            m.see("coefficient error", (got[t] - want[k][t]).abs(), 1e-9);
                        }
                    }
                }
                (a, b) => m.require(false, || format!("{kind}: {:?} / {:?}", a.err(), b.err())),
            }
            m.case();
        }
    }
    m.finish()
}

// ---------------------------------------------------------------------------
// Curvature-line equation

/// Closed-form coefficients against the frame pipeline, which differ by `K²`.
pub fn dual_source(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.dual_source");
    while m.cases < n {
        let s = random_quartic(rng, 8);
        let Some([u, v]) = nonparabolic_point(rng, &s, 0.4) else { continue };
        let a = curvature_bde(&s).coeffs(u, v);
        match pipeline_coeffs(&s, u, v) {
            Ok(b) => {
                let k2 = s.hessian_det(u, v).powi(2);
                let err = (0..3).map(|i| (a[i] - k2 * b[i]).abs()).fold(0.0, f64::max);
                m.see("relative mismatch", err / max_abs(&a).max(1e-12), 1e-7);
            }
            Err(e) => m.require(false, || format!("pipeline failed at ({u}, {v}): {e}")),
        }
        m.case();
    }
    m.finish()
}

/// Principal directions solve the equation.
pub fn eigen_directions(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.eigen_directions");
    let mut attempts = 0;
    while m.cases < n && attempts < 50 * n {
        attempts += 1;
        let s = random_quartic(rng, 8);
        let Some([u, v]) = nonparabolic_point(rng, &s, 0.4) else { continue };
        let Ok(f) = point_frame(&s, u, v) else { continue };
        let PrincipalData::TwoReal { curvatures, directions } = principal_data(&f) else { continue };
        if (curvatures[1] - curvatures[0]).abs() < 1e-3 * (1.0 + curvatures[0].abs()) {
            continue;
        }
        match solve_directions(&curvature_bde(&s), u, v) {
            Directions::Two(sol) => {
                for d in directions {
                    let best = sol.iter().map(|x| x.distance(&d)).fold(f64::INFINITY, f64::min);
                    m.see("direction distance", best, 1e-7);
                }
            }
            other => m.require(false, || format!("({u}, {v}): {other:?}")),
        }
        m.case();
    }
    m.finish()
}

/// Eigenvalues of the lifted field at folded points against their closed form.
pub fn lie_cartan(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.lie_cartan");
    while m.cases < n {
        let mut p = Params::new().with_q(1, 3, signed(rng, 0.2, 2.0));
        for (i, j) in [(3, 0), (0, 3), (4, 0), (2, 2), (0, 4), (5, 0), (3, 2), (2, 3), (1, 4), (0, 5)] {
            p.set_q(i, j, rng.gen_range(-2.0..2.0));
        }
        for j in 0..=6 {
            p.set_q(6 - j, j, rng.gen_range(-2.0..2.0));
        }
        let (q03, q22, q30) = (p.q(0, 3), p.q(2, 2), p.q(3, 0));
        p.set_q(4, 1, 0.5 * (7.0 * q22 * q30 - 2.0 * q03 * q30 * q30));
        let inv = FoldedInvariants::from_params(&p);
        if inv.delta_lambda.abs() < 1e-3 * inv.delta_lambda_scale {
            continue;
        }
        let s = normal_form_surface(SurfaceKind::Buchin, &p, 6).expect("buchin parameters are admissible");
        let closed = inv.eigenvalues();
        let numeric = LieCartanField::new(&curvature_bde(&s)).linearization_eigenvalues([0.0, 0.0, 0.0]);
        let mag = closed.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max);
        for (c, x) in closed.iter().zip(&numeric) {
            m.see("relative eigenvalue error", (c.0 - x.0).hypot(c.1 - x.1) / mag, 1e-5);
        }
        m.case();
    }
    m.finish()
}

/// Traced leaves of random surfaces satisfy the equation segment by segment.
pub fn leaf_residual(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.leaf_residual");
    let w = Window::square(0.3);
    let cfg = TraceConfig::new(w);
    let mut attempts = 0;
    while m.cases < n && attempts < 20 * n {
        attempts += 1;
        let mut coeffs = vec![(2, 0, 1.0), (0, 2, rng.gen_range(0.3..2.0))];
        for d in 3..=4 {
            for j in 0..=d {
                coeffs.push((d - j, j, rng.gen_range(-1.0..1.0)));
            }
        }
        let s = SurfaceJet::monge_from_coefficients(8, &coeffs);
        let bde = curvature_bde(&s);
        let seed = [rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)];
        if discriminant(&bde, seed[0], seed[1]) <= 0.0 {
            continue;
        }
        let fol = rng.gen_range(1..=2);
        match integrate_foliation(&bde, seed, fol, &cfg) {
            Ok(pl) => {
                m.see("chord residual", polyline_residual(&bde, &pl), 1e-6);
                m.require(pl.points.iter().all(|p| w.contains(*p)), || "point outside the window".into());
            }
            Err(e) => m.require(false, || format!("trace failed: {e}")),
        }
        m.case();
    }
    m.finish()
}

/// Largest `|A du² + B du dv + C dv²| / (scale · |d|²)` over unlifted segments.
fn polyline_residual(bde: &CurvatureBde, pl: &affina_core::Polyline) -> f64 {
    let mut worst = 0.0f64;
    for (i, w) in pl.points.windows(2).enumerate() {
        if pl.lifted[i] || pl.lifted[i + 1] {
            continue;
        }
        let (a, b) = (w[0], w[1]);
        let (du, dv) = (b[0] - a[0], b[1] - a[1]);
        let len2 = du * du + dv * dv;
        if len2 == 0.0 {
            continue;
        }
        let c = bde.coeffs(0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]));
        let r = c[0] * du * du + c[1] * du * dv + c[2] * dv * dv;
        worst = worst.max(r.abs() / (residual_scale(c) * len2).max(1e-300));
    }
    worst
}

/// The parabolic curve of `k = 1, q30 = 1` surfaces is a solution curve.
pub fn parabolic_curve(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.parabolic_curve");
    let w = Window::square(0.2);
    for _ in 0..n {
        let mut p = Params::new().with_k(1.0).with_q(3, 0, 1.0);
        for (i, j) in [(2, 1), (1, 2), (0, 3), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)] {
            p.set_q(i, j, rng.gen_range(-1.0..1.0));
        }
        let s = normal_form_surface(SurfaceKind::Parabolic, &p, 6).expect("parabolic parameters are admissible");
        let bde = curvature_bde(&s);
        let k = |u: f64, v: f64| s.hessian_det(u, v);
        match trace_zero_curve(&k, [0.0, 0.0], &ContourConfig::new(w)) {
            Ok(curve) => {
                m.require(curve.len() > 10, || format!("curve has {} points", curve.len()));
                let e = 1e-6;
                for q in &curve.points {
                    let (u, v) = (q[0], q[1]);
                    let g = [(k(u + e, v) - k(u - e, v)) / (2.0 * e), (k(u, v + e) - k(u, v - e)) / (2.0 * e)];
                    let gn = g[0].hypot(g[1]);
                    let (du, dv) = (-g[1] / gn, g[0] / gn);
                    let c = bde.coeffs(u, v);
                    let r = c[0] * du * du + c[1] * du * dv + c[2] * dv * dv;
                    m.see("residual / scale", r.abs() / residual_scale(c), 1e-7);
                }
            }
            Err(e) => m.require(false, || format!("contour failed: {e}")),
        }
        m.case();
    }
    m.finish()
}

/// Blown-up separatrix angles map to parabolas solving the planar equation.
pub fn blow_down(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.blow_down");
    while m.cases < n {
        let b01: f64 = rng.gen_range(-4.0..1.0);
        let b20 = rng.gen_range(-2.0..2.0);
        let sign = if rng.gen_bool(0.5) { BlowupSign::A3Plus } else { BlowupSign::A3Minus };
        if (b01 + 1.0).abs() < 1e-3 {
            continue;
        }
        let Ok(portrait) = blowup_portrait(b01, b20, sign) else { continue };
        let e = sign.cubic_sign();
        for angle in &portrait.singular_angles {
            let c = angle.t.cos();
            if c.abs() < 1e-9 {
                continue;
            }
            let slope = angle.t.sin() / (c * c);
            let scale = 1.0 + 4.0 * (b01.abs() + 1.0) * slope * slope + 4.0 * b20.abs() * slope.abs();
            for u in [0.1f64, -0.05, 0.01] {
                let (v, dv) = (slope * u * u, 2.0 * slope * u);
                let r = e * u.powi(3) + 2.0 * (b01 * v + b20 * u * u) * dv + u * dv * dv;
                m.see("planar residual / |u|³", r.abs() / (scale * u.abs().powi(3)), 1e-8);
            }
        }
        let want = 2 + 2 * invariant_parabolas(b01, b20, sign).len();
        m.require(portrait.singular_angles.len() == want, || {
            format!("b01={b01} b20={b20}: {} angles, expected {want}", portrait.singular_angles.len())
        });
        m.case();
    }
    m.finish()
}

/// Foliation vectors are roots of the quadratic form.
pub fn quadratic_roots(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("bde.quadratic_roots");
    for _ in 0..n {
        let c = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        if let Some(vs) = foliation_vectors(c) {
            for x in vs {
                let r = c[0] * x[0] * x[0] + c[1] * x[0] * x[1] + c[2] * x[1] * x[1];
                m.see("root residual", r.abs() / (c[0].abs() + c[1].abs() + c[2].abs()), 1e-12);
            }
        }
        match directions_of(c) {
            Directions::Two(d) => m.require(d[0].distance(&d[1]) > 0.0, || format!("{c:?}: coincident directions")),
            Directions::None => m.require(c[1] * c[1] - 4.0 * c[0] * c[2] < 0.0, || format!("{c:?}: spurious None")),
            _ => {}
        }
        m.case();
    }
    m.finish()
}

// ---------------------------------------------------------------------------
// Classification

/// Numeric 1-jet of the equation at umbilics against the closed form, up to
/// a positive factor, and the Hessian identity of the linear discriminant.
pub fn umbilic_coefficients(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("classify.umbilic_coefficients");
    for draw in 0..n {
        let case = if draw % 2 == 0 { UmbilicCase::Elliptic } else { UmbilicCase::Hyperbolic };
        let s = random_umbilic(rng, case);
        let closed = match umbilic_linear_coeffs(&s, case) {
            Ok(c) => c,
            Err(e) => {
                m.require(false, || format!("closed form failed: {e}"));
                m.case();
                continue;
            }
        };
        let numeric = umbilic_invariants_from_bde(&curvature_bde(&s), case);
        let c = [closed.a1, closed.b1, closed.a2, closed.b2];
        let x = [numeric.a1, numeric.b1, numeric.a2, numeric.b2];
        let cc: f64 = c.iter().map(|t| t * t).sum();
        let factor = c.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / cc;
        m.require(factor > 0.0, || format!("non-positive factor {factor}"));
        let off = c.iter().zip(&x).map(|(a, b)| (b - factor * a).abs()).fold(0.0, f64::max);
        m.see("1-jet mismatch", off / max_abs(&x).max(1e-300), 1e-8);
        for inv in [&numeric, &closed] {
            let (h, want) = (inv.hess_delta_lin(), inv.expected_hess());
            m.see("det Hess vs ±64J²", (h - want).abs() / want.abs().max(1e-300), 1e-8);
        }
        m.case();
    }
    m.finish()
}

/// Tags from the numeric and closed-form routes and from the dispatcher agree.
pub fn umbilic_routes(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("classify.umbilic_routes");
    for draw in 0..n {
        let case = if draw % 2 == 0 { UmbilicCase::Elliptic } else { UmbilicCase::Hyperbolic };
        let s = random_umbilic(rng, case);
        let tag = |inv| match case {
            UmbilicCase::Elliptic => classify_elliptic_umbilic(inv).ok(),
            UmbilicCase::Hyperbolic => classify_hyperbolic_umbilic(inv).ok(),
        };
        let Ok(closed) = umbilic_linear_coeffs(&s, case) else {
            m.require(false, || "closed form failed".into());
            m.case();
            continue;
        };
        let numeric = umbilic_invariants_from_bde(&curvature_bde(&s), case);
        let (a, b) = (tag(&closed), tag(&numeric));
        m.require(a == b, || format!("closed {a:?} vs numeric {b:?}"));
        let d = classify_surface(&s).tag;
        let want = a.unwrap_or(Tag::Degenerate);
        m.require(d == want, || format!("dispatcher {d:?} vs {want:?}"));
        m.case();
    }
    m.finish()
}

fn pick(kind: SurfaceKind, sigma: f64, q50: f64) -> SurfaceJet {
    normal_form_surface(kind, &Params::new().with_sigma(sigma).with_q(5, 0, q50), 6).expect("admissible")
}

fn folded(q03: f64, q51: f64) -> SurfaceJet {
    let p = Params::new().with_q(1, 3, 1.0).with_q(3, 0, 1.0).with_q(0, 3, q03).with_q(5, 1, q51);
    normal_form_surface(SurfaceKind::Buchin, &p, 6).expect("admissible")
}

fn parabolic(q30: f64, q21: f64, q40: f64) -> SurfaceJet {
    let p = Params::new().with_k(1.0).with_q(3, 0, q30).with_q(2, 1, q21).with_q(4, 0, q40);
    normal_form_surface(SurfaceKind::Parabolic, &p, 6).expect("admissible")
}

/// Reference surfaces with known tags.
pub fn battery_cases() -> Vec<(&'static str, SurfaceJet, Tag)> {
    use SurfaceKind::{PickElliptic as E, PickHyperbolic as H};
    vec![
        ("elliptic sigma=1 q50=-16", pick(E, 1.0, -16.0), Tag::D1),
        ("elliptic sigma=1 q50=-10", pick(E, 1.0, -10.0), Tag::D2),
        ("elliptic sigma=1", pick(E, 1.0, 0.0), Tag::D3),
        ("hyperbolic sigma=1 q50=-10", pick(H, 1.0, -10.0), Tag::A1),
        ("hyperbolic sigma=1", pick(H, 1.0, 0.0), Tag::A2),
        ("hyperbolic sigma=1 q50=-14", pick(H, 1.0, -14.0), Tag::A5),
        ("buchin q13=q30=q03=1", folded(1.0, 0.0), Tag::FoldedCusp),
        ("buchin q13=q30=1", folded(0.0, 0.0), Tag::FoldedSaddle),
        ("buchin q13=q30=1 q51=-10", folded(0.0, -10.0), Tag::FoldedFocus),
        ("buchin q13=q30=1 q51=-4.6", folded(0.0, -4.6), Tag::FoldedNode),
        ("parabolic k=1 q30=1", parabolic(1.0, 0.0, 0.0), Tag::OrdinaryParabolic),
        ("parabolic k=1 q21=1", parabolic(0.0, 1.0, 0.0), Tag::GaussCuspR3),
        ("parabolic k=1 q21=1 q40=5", parabolic(0.0, 1.0, 5.0), Tag::GaussCuspA3Plus),
        ("parabolic k=1 q21=1 q40=3", parabolic(0.0, 1.0, 3.0), Tag::Degenerate),
    ]
}

/// Elliptic model equations `v dv² + 2 a2 u du dv - v du²`.
pub fn elliptic_models() -> Vec<(f64, Tag)> {
    vec![(1.0, Tag::D1), (0.25, Tag::D2), (-1.0, Tag::D3)]
}

pub fn battery(_n: usize, _rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("classify.battery");
    for (label, s, want) in battery_cases() {
        let got = classify_surface(&s).tag;
        m.require(got == want, || format!("{label}: {got:?}, expected {want:?}"));
        m.case();
    }
    for (a2, want) in elliptic_models() {
        let bde = CurvatureBde::explicit(
            Jet2::from_terms(1, &[(0, 1, -1.0)]),
            Jet2::from_terms(1, &[(1, 0, 2.0 * a2)]),
            Jet2::from_terms(1, &[(0, 1, 1.0)]),
        );
        let got = classify_elliptic_umbilic(&umbilic_invariants_from_bde(&bde, UmbilicCase::Elliptic));
        m.require(got.as_ref().ok() == Some(&want), || format!("model a2={a2}: {got:?}, expected {want:?}"));
        m.case();
    }
    let r3 = classify_surface(&parabolic(0.0, 1.0, 0.0));
    let b01 = r3.invariants.get("b01").copied().unwrap_or(f64::NAN);
    m.see("R3 b01 + 3/14", (b01 + 3.0 / 14.0).abs(), 1e-12);
    m.finish()
}

/// Principal part of the discriminant at Gauss cusps, its Hessian, and the
/// `b01` range of A3⁺ cusps.
pub fn gauss_cusp(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("classify.gauss_cusp");
    for _ in 0..n {
        let k = signed(rng, 0.3, 2.0);
        let q21 = signed(rng, 0.2, 2.0);
        let q40 = rng.gen_range(-3.0..3.0);
        let p = Params::new().with_k(k).with_q(2, 1, q21).with_q(4, 0, q40);
        let s = normal_form_surface(SurfaceKind::Parabolic, &p, 6).expect("admissible");
        let inv = gauss_cusp_invariants(k, q21, q40);
        let x = numeric_principal_part(&s);
        for (c, y) in [inv.p11, inv.p12, inv.p22].iter().zip(x) {
            m.see("P11/P12/P22 relative", (c - y).abs() / c.abs().max(1e-300), 1e-6);
        }
        let want = 2f64.powi(14)
            * 343.0
            * k.powi(6)
            * q21.powi(4)
            * (k * q40 - 4.0 * q21 * q21)
            * (k * q40 - 3.0 * q21 * q21).powi(4);
        // 256 (4 P11 P22 - P12²) cancels near the walls; measure against its terms
        let terms = 256.0 * (4.0 * (inv.p11 * inv.p22).abs() + inv.p12 * inv.p12);
        m.see("hessP relative", (inv.hess_p - want).abs() / terms.max(want.abs()).max(1e-300), 1e-6);
        m.case();
    }
    for _ in 0..n {
        let k = signed(rng, 0.1, 3.0);
        let q21 = signed(rng, 0.05, 3.0);
        let q40 = (4.0 * q21 * q21 + rng.gen_range(1e-3..10.0)) / k;
        let inv = gauss_cusp_invariants(k, q21, q40);
        m.require(inv.b01 > -0.5 && inv.b01 < -2.0 / 7.0, || format!("A3+ draw k={k} q21={q21} q40={q40}: b01 = {}", inv.b01));
        let s = normal_form_surface(SurfaceKind::Parabolic, &Params::new().with_k(k).with_q(2, 1, q21).with_q(4, 0, q40), 6)
            .expect("admissible");
        let tag = classify_surface(&s).tag;
        m.require(tag == Tag::GaussCuspA3Plus, || format!("A3+ draw tagged {tag:?}"));
        m.case();
    }
    m.finish()
}

/// Least-squares intercept of `v/u² = α + c1 u + c2 u² + c3 u³`.
fn quadratic_intercept(points: &[[f64; 2]]) -> f64 {
    let mut a = [[0.0; 5]; 4];
    for p in points {
        let row = [1.0, p[0], p[0] * p[0], p[0].powi(3)];
        let y = p[1] / (p[0] * p[0]);
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] += row[i] * row[j];
            }
            a[i][4] += row[i] * y;
        }
    }
    for c in 0..4 {
        let piv = (c..4).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap_or(c);
        a.swap(c, piv);
        for r in 0..4 {
            if r != c && a[c][c] != 0.0 {
                let f = a[r][c] / a[c][c];
                for k in c..5 {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    a[0][4] / a[0][0]
}

/// Discriminant branches `v ≈ α u²` at A3⁻ cusps.
pub fn gauss_branches(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("classify.gauss_branches");
    while m.cases < n {
        let k = signed(rng, 0.5, 2.0);
        let q21 = signed(rng, 0.3, 1.5);
        let r: f64 = rng.gen_range(-2.0..3.9);
        if (r - 2.25).abs() < 0.2 || (r - 3.0).abs() < 0.2 {
            continue;
        }
        let q40 = r * q21 * q21 / k;
        let inv = gauss_cusp_invariants(k, q21, q40);
        let Some(alpha) = inv.alpha else { continue };
        if (alpha[1] - alpha[0]).abs() < 0.05 * alpha[0].abs().max(alpha[1].abs()) {
            continue;
        }
        let p = Params::new().with_k(k).with_q(2, 1, q21).with_q(4, 0, q40);
        let s = normal_form_surface(SurfaceKind::Parabolic, &p, 6).expect("admissible");
        let bde = curvature_bde(&s);
        let delta = |u: f64, v: f64| discriminant(&bde, u, v);
        let umax = 0.02;
        let vmax = 1.5 * alpha[0].abs().max(alpha[1].abs()) * umax * umax;
        let mut cfg = ContourConfig::new(Window::new(0.002, umax, -vmax, vmax));
        cfg.step = 1e-3 * umax;
        cfg.tol = 1e-13;
        let mut got: Vec<f64> = zero_set(&delta, 64, &cfg).iter().map(|c| quadratic_intercept(&c.points)).collect();
        got.sort_by(f64::total_cmp);
        m.require(got.len() == 2, || format!("k={k} q21={q21} q40={q40}: {} branches", got.len()));
        if got.len() == 2 {
            for (g, a) in got.iter().zip(alpha) {
                m.see("alpha relative", (g - a).abs() / a.abs().max(1.0), 1e-5);
            }
        }
        m.case();
    }
    m.finish()
}

// ---------------------------------------------------------------------------
// Blow-up portraits

/// `b01` representatives of the A3⁻ intervals.
pub const A3MINUS_REPRESENTATIVES: [f64; 6] = [-3.0, -1.5, -0.75, -0.2143, -0.05, 0.5];
/// `b01` of the A3⁺ cusp `k = 1, q21 = 1, q40 = 5`.
pub const A3PLUS_REPRESENTATIVE: f64 = -11.0 / 28.0;

fn angle_near(t: f64, target: f64) -> bool {
    let d = (t - target).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d) < 1e-6
}

/// Checks one portrait; returns failure descriptions.
pub fn portrait_defects(p: &BlowupPortrait) -> Vec<String> {
    let mut out = Vec::new();
    let b01 = p.b01;
    if p.singular_angles.len() != 6 {
        out.push(format!("b01={b01}: {} singular angles", p.singular_angles.len()));
    }
    for a in &p.singular_angles {
        if a.a_t.abs() <= 1e-8 || a.minus_2b.abs() <= 1e-8 {
            out.push(format!("b01={b01}: t={:.6} not hyperbolic", a.t));
        }
        let want = if a.a_t * a.minus_2b < 0.0 { AngleKind::Saddle } else { AngleKind::Node };
        if a.kind != want {
            out.push(format!("b01={b01}: t={:.6} typed {:?}", a.t, a.kind));
        }
    }
    match p.sign {
        BlowupSign::A3Plus => {
            let nodes: Vec<f64> = p.singular_angles.iter().filter(|a| a.kind == AngleKind::Node).map(|a| a.t).collect();
            let at_vertical = nodes.len() == 2
                && nodes.iter().any(|&t| angle_near(t, PI / 2.0))
                && nodes.iter().any(|&t| angle_near(t, 3.0 * PI / 2.0));
            if !at_vertical || p.saddles() != 4 {
                out.push(format!("b01={b01}: nodes at {nodes:?}, {} saddles", p.saddles()));
            }
        }
        BlowupSign::A3Minus => {
            let Some(labelled) = a3minus_labelled_parabolas(b01, p.b20) else {
                out.push(format!("b01={b01}: no real invariant parabolas"));
                return out;
            };
            for a in &p.singular_angles {
                let c2 = a.t.cos().powi(2);
                if c2 < 1e-12 {
                    continue;
                }
                let slope = a.t.sin() / c2;
                let which = if (slope - labelled[0]).abs() <= (slope - labelled[1]).abs() { 0 } else { 1 };
                let (p1, p2) = a3minus_eigen_products(b01, a.t);
                let prod = if which == 0 { p1 } else { p2 };
                let want = if prod < 0.0 { AngleKind::Saddle } else { AngleKind::Node };
                if a.kind != want {
                    out.push(format!("b01={b01}: t={:.6} on parabola {} typed {:?}, product {prod:e}", a.t, which + 1, a.kind));
                }
            }
        }
    }
    out
}

pub fn blowup_portraits(_n: usize, _rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("blowup.portraits");
    let cases = A3MINUS_REPRESENTATIVES
        .iter()
        .map(|&b| (b, BlowupSign::A3Minus, b20_a3minus(b)))
        .chain([(A3PLUS_REPRESENTATIVE, BlowupSign::A3Plus, b20bar_a3plus(A3PLUS_REPRESENTATIVE))]);
    for (b01, sign, b20) in cases {
        match b20.and_then(|b20| blowup_portrait(b01, b20, sign)) {
            Ok(p) => {
                for d in portrait_defects(&p) {
                    m.require(false, || d);
                }
            }
            Err(e) => m.require(false, || format!("b01={b01}: {e}")),
        }
        m.case();
    }
    m.finish()
}

// ---------------------------------------------------------------------------
// Output

fn round_trips<T: Serialize + DeserializeOwned + PartialEq>(x: &T) -> bool {
    serde_json::to_string(x).ok().and_then(|s| serde_json::from_str::<T>(&s).ok()).is_some_and(|y| &y == x)
}

/// JSON emitted by the commands parses back to the same value.
pub fn json_round_trip(n: usize, rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("output.json_round_trip");
    while m.cases < n {
        let s = random_quartic(rng, 6);
        let Some([u, v]) = nonparabolic_point(rng, &s, 0.3) else { continue };
        if let Ok(f) = point_frame(&s, u, v) {
            m.require(round_trips(&f), || format!("frame at ({u}, {v})"));
        }
        let b01 = rng.gen_range(-4.0..1.0);
        if let Ok(p) = b20_a3minus(b01).and_then(|b20| blowup_portrait(b01, b20, BlowupSign::A3Minus)) {
            m.require(round_trips(&p), || format!("portrait b01={b01}"));
        }
        m.case();
    }
    for (label, s, _) in battery_cases() {
        let r: SingularityReport = classify_surface(&s);
        m.require(round_trips(&r), || format!("report {label}"));
    }
    let s = folded(1.0, 0.0);
    match trace_leaves(&curvature_bde(&s), &TraceConfig::new(Window::square(0.3)), 4, Foliations::Both) {
        Ok(polylines) => {
            let out = TraceOutput { window: Window::square(0.3), polylines };
            m.require(round_trips(&out), || "trace output".into());
        }
        Err(e) => m.require(false, || format!("trace failed: {e}")),
    }
    m.finish()
}

/// Each reference figure renders to the same bytes twice.
pub fn render_determinism(_n: usize, _rng: &mut ChaCha8Rng) -> Check {
    let mut m = Metrics::new("output.render_determinism");
    for fig in FIGURES {
        match (fig.render(), fig.render()) {
            (Ok(a), Ok(b)) => m.require(a == b, || format!("{} differs between runs", fig.name)),
            (a, b) => m.require(false, || format!("{}: {:?} / {:?}", fig.name, a.err(), b.err())),
        }
        m.case();
    }
    m.finish()
}

type CheckFn = fn(usize, &mut ChaCha8Rng) -> Check;

/// Every check with its case count for `trials`.
fn suite(trials: usize) -> Vec<(CheckFn, usize)> {
    let t = trials.max(1);
    vec![
        (jet_ring_axioms as CheckFn, t),
        (jet_calculus, t),
        (conormal, 2 * t),
        (frame_derivatives, t),
        (pick_xi_jet, t),
        (pick_shape, t),
        (dual_source, 2 * t),
        (eigen_directions, t),
        (lie_cartan, t),
        (leaf_residual, (t / 5).max(2)),
        (parabolic_curve, (t / 5).max(2)),
        (blow_down, t),
        (quadratic_roots, t),
        (umbilic_coefficients, t),
        (umbilic_routes, t),
        (battery, 1),
        (gauss_cusp, t),
        (gauss_branches, (t / 10).max(2)),
        (blowup_portraits, 1),
        (json_round_trip, (t / 10).max(2)),
        (render_determinism, 1),
    ]
}

/// Runs the whole suite; results depend only on `trials` and `seed`.
pub fn run_suite(trials: usize, seed: u64) -> Vec<Check> {
    suite(trials)
        .into_iter()
        .enumerate()
        .map(|(i, (f, n))| f(n, &mut rng_for(seed, i as u64)))
        .collect()
}
