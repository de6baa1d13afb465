//! Binary differential equations `A du² + B du dv + C dv² = 0` of affine
//! curvature lines, their discriminant, Lie–Cartan lift, curve tracing and
//! weighted blow-up portraits.

mod blowup;
mod contour;
mod lie_cartan;
mod numerators;
mod trace;

pub use blowup::{
    a3minus_eigen_products, a3minus_labelled_parabolas, b20_a3minus, b20bar_a3plus, blowup_portrait, invariant_parabolas, AngleKind,
    BlowupPortrait, BlowupSign, SingularAngle,
};
pub use contour::{trace_zero_curve, zero_set, ContourConfig};
pub use lie_cartan::{LieCartanChart, LieCartanField, LINEARIZATION_STEP};
pub use trace::{integrate_foliation, Polyline, Termination, TraceConfig};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{point_frame, SurfaceJet};
use crate::jets::{Jet2, Var};

/// Threshold for the identically-zero test on origin jets.
pub const ZERO_BDE_TOL: f64 = 1e-12;

/// Projective direction `[du : dv]`, normalized so that the larger
/// component has absolute value 1 and is positive (`du` wins ties).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub du: f64,
    pub dv: f64,
}

impl Direction {
    /// Panics on the zero vector.
    pub fn new(du: f64, dv: f64) -> Self {
        let m = du.abs().max(dv.abs());
        assert!(m > 0.0 && m.is_finite(), "direction must be a finite nonzero vector");
        let snap = |x: f64| {
            if x.abs() < 1e-14 {
                0.0
            } else if (x.abs() - 1.0).abs() < 1e-14 {
                x.signum()
            } else {
                x
            }
        };
        let (mut a, mut b) = (snap(du / m), snap(dv / m));
        let lead = if a.abs() >= b.abs() { a } else { b };
        if lead < 0.0 {
            a = -a;
            b = -b;
        }
        Self { du: a + 0.0, dv: b + 0.0 }
    }

    /// `dv/du`, if `du != 0`.
    pub fn slope(&self) -> Option<f64> {
        (self.du != 0.0).then(|| self.dv / self.du)
    }

    pub fn unit(&self) -> [f64; 2] {
        let n = self.du.hypot(self.dv);
        [self.du / n, self.dv / n]
    }

    /// `|sin|` of the angle between the two lines.
    pub fn distance(&self, other: &Direction) -> f64 {
        let a = self.unit();
        let b = other.unit();
        (a[0] * b[1] - a[1] * b[0]).abs()
    }
}

/// Solution set of the quadratic at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "directions", rename_all = "snake_case")]
pub enum Directions {
    None,
    One(Direction),
    /// Directions of foliation 1 and foliation 2.
    Two([Direction; 2]),
    /// Every direction solves the equation.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BdeSource {
    JetPipeline,
    MongeClosedForm,
    ExplicitNormalForm,
    Asymptotic,
}

#[derive(Clone, Debug)]
enum Repr {
    Monge(SurfaceJet),
    Polynomial([Jet2; 3]),
    Asymptotic(SurfaceJet),
}

/// Coefficients `(A, B, C)` of a binary differential equation together with
/// their jets at the base point.
#[derive(Clone, Debug)]
pub struct CurvatureBde {
    source: BdeSource,
    repr: Repr,
    origin_jet: [Jet2; 3],
}

impl CurvatureBde {
    /// Equation with explicit polynomial coefficients expanded at the origin.
    pub fn explicit(a: Jet2, b: Jet2, c: Jet2) -> Self {
        let order = a.order().max(b.order()).max(c.order());
        let jets = [a.with_order(order), b.with_order(order), c.with_order(order)];
        Self { source: BdeSource::ExplicitNormalForm, origin_jet: jets.clone(), repr: Repr::Polynomial(jets) }
    }

    pub fn source(&self) -> BdeSource {
        self.source
    }

    pub fn origin_jet(&self) -> &[Jet2; 3] {
        &self.origin_jet
    }

    /// `(A, B, C)` at `(u, v)`.
    pub fn coeffs(&self, u: f64, v: f64) -> [f64; 3] {
        match &self.repr {
            Repr::Monge(s) => monge_coeffs(&s.partials(u, v).upper()),
            Repr::Polynomial(j) => [j[0].eval(u, v), j[1].eval(u, v), j[2].eval(u, v)],
            Repr::Asymptotic(s) => {
                let p = s.partials(u, v);
                [p.uu, 2.0 * p.uv, p.vv]
            }
        }
    }

    /// Jets of `(A, B, C)` expanded at `(u, v)` to the given order.
    pub fn jet_at(&self, u: f64, v: f64, order: usize) -> [Jet2; 3] {
        match &self.repr {
            Repr::Monge(s) => monge_jets(s, u, v, order),
            Repr::Polynomial(j) => j.clone().map(|c| c.shift(u, v).with_order(order)),
            Repr::Asymptotic(s) => {
                let h = s.hjet.with_order(s.order().max(order + 2)).shift(u, v);
                let hu = h.partial(Var::U);
                let hv = h.partial(Var::V);
                [
                    hu.partial(Var::U).with_order(order),
                    hu.partial(Var::V).scale(2.0).with_order(order),
                    hv.partial(Var::V).with_order(order),
                ]
            }
        }
    }

    /// Values and first partials: `(value, ∂u, ∂v)` for each coefficient.
    pub fn coeffs_with_gradient(&self, u: f64, v: f64) -> [[f64; 3]; 3] {
        let j = self.jet_at(u, v, 1);
        [0, 1, 2].map(|i| [j[i].coeff(0, 0), j[i].coeff(1, 0), j[i].coeff(0, 1)])
    }

    /// Largest coefficient magnitude at a point.
    pub fn scale_at(&self, u: f64, v: f64) -> f64 {
        let c = self.coeffs(u, v);
        c[0].abs().max(c[1].abs()).max(c[2].abs())
    }

    /// All origin-jet coefficients through order 2 below [`ZERO_BDE_TOL`].
    pub fn is_identically_zero(&self) -> bool {
        self.origin_jet.iter().all(|j| j.terms().filter(|t| t.0 + t.1 <= 2).all(|t| t.2.abs() < ZERO_BDE_TOL))
    }
}

fn eval_table(table: &[(f64, [u8; 12])], x: &[f64; 12]) -> f64 {
    table
        .iter()
        .map(|(c, e)| e.iter().zip(x).fold(*c, |acc, (&k, &xi)| if k == 0 { acc } else { acc * xi.powi(k as i32) }))
        .sum()
}

fn eval_table_jet(table: &[(f64, [u8; 12])], x: &[Jet2; 12]) -> Jet2 {
    let order = x[0].order();
    let max_pow = table.iter().flat_map(|(_, e)| e.iter().copied()).max().unwrap_or(0) as usize;
    let powers: Vec<Vec<Jet2>> = x
        .iter()
        .map(|xi| {
            let mut p = vec![Jet2::constant(order, 1.0)];
            for k in 1..=max_pow {
                p.push(&p[k - 1] * xi);
            }
            p
        })
        .collect();
    let mut acc = Jet2::zero(order);
    for (c, e) in table {
        let mut term = Jet2::constant(order, *c);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                term = &term * &powers[i][k as usize];
            }
        }
        acc = &acc + &term;
    }
    acc
}

const REG_SCALE: f64 = -1.0 / 16.0;

fn monge_coeffs(x: &[f64; 12]) -> [f64; 3] {
    [
        REG_SCALE * eval_table(numerators::NUM_A, x),
        REG_SCALE * eval_table(numerators::NUM_B, x),
        REG_SCALE * eval_table(numerators::NUM_C, x),
    ]
}

fn monge_jets(s: &SurfaceJet, u: f64, v: f64, order: usize) -> [Jet2; 3] {
    let h = s.hjet.with_order(s.order().max(order + 4)).shift(u, v);
    let d = |a: usize, b: usize| {
        let mut j = h.clone();
        for _ in 0..a {
            j = j.partial(Var::U);
        }
        for _ in 0..b {
            j = j.partial(Var::V);
        }
        j.with_order(order)
    };
    let x = [d(2, 0), d(1, 1), d(0, 2), d(3, 0), d(2, 1), d(1, 2), d(0, 3), d(4, 0), d(3, 1), d(2, 2), d(1, 3), d(0, 4)];
    [
        eval_table_jet(numerators::NUM_A, &x).scale(REG_SCALE),
        eval_table_jet(numerators::NUM_B, &x).scale(REG_SCALE),
        eval_table_jet(numerators::NUM_C, &x).scale(REG_SCALE),
    ]
}

/// Regularized curvature-line equation of a Monge-chart surface.
///
/// The coefficients are polynomial in the partials of `h` up to order four
/// and stay defined across the parabolic set. Where `LN - M² != 0` they equal
/// `(LN - M²)² (lM - mL, lN - nL, mN - nM)`.
pub fn curvature_bde(s: &SurfaceJet) -> CurvatureBde {
    let order = s.order().saturating_sub(4);
    CurvatureBde { source: BdeSource::MongeClosedForm, origin_jet: monge_jets(s, 0.0, 0.0, order), repr: Repr::Monge(s.clone()) }
}

/// Jets of the regularized coefficients at the origin to an arbitrary order
/// (the height jet is treated as an exact polynomial).
pub fn curvature_bde_jet(s: &SurfaceJet, order: usize) -> [Jet2; 3] {
    monge_jets(s, 0.0, 0.0, order)
}

/// `(lM - mL, lN - nL, mN - nM)` from the third fundamental form at a
/// non-parabolic point.
pub fn pipeline_coeffs(s: &SurfaceJet, u: f64, v: f64) -> Result<[f64; 3]> {
    let f = point_frame(s, u, v)?;
    Ok([
        f.l * f.big_m - f.m * f.big_l,
        f.l * f.big_n - f.n * f.big_l,
        f.m * f.big_n - f.n * f.big_m,
    ])
}

/// Asymptotic-line equation `L du² + 2M du dv + N dv² = 0`.
pub fn asymptotic_bde(s: &SurfaceJet) -> CurvatureBde {
    let mut bde = CurvatureBde { source: BdeSource::Asymptotic, repr: Repr::Asymptotic(s.clone()), origin_jet: Default::default() };
    bde.origin_jet = bde.jet_at(0.0, 0.0, s.order().saturating_sub(2));
    bde
}

/// `B² - 4AC` at a point.
pub fn discriminant(bde: &CurvatureBde, u: f64, v: f64) -> f64 {
    discriminant_of(bde.coeffs(u, v))
}

pub fn discriminant_of(c: [f64; 3]) -> f64 {
    c[1] * c[1] - 4.0 * c[0] * c[2]
}

/// Unit vectors of the two foliations where the discriminant is positive.
///
/// With `S = [[A, B/2], [B/2, C]] = λ₁ e₁e₁ᵀ + λ₂ e₂e₂ᵀ`, `λ₁ > 0 > λ₂`,
/// `e₂ = J e₁`, the null lines are `√(-λ₂) e₁ ± √λ₁ e₂`; the `+` line is
/// foliation 1. The labelling does not depend on the sign of `e₁`.
pub fn foliation_vectors(c: [f64; 3]) -> Option<[[f64; 2]; 2]> {
    let delta = discriminant_of(c);
    if !(delta > 0.0) {
        return None;
    }
    let (a, b, cc) = (c[0], 0.5 * c[1], c[2]);
    let m = 0.5 * (a + cc);
    let d = 0.5 * (a - cc);
    let r = d.hypot(b);
    let th = 0.5 * b.atan2(d);
    let (s, co) = th.sin_cos();
    let e1 = [co, s];
    let e2 = [-s, co];
    let q4 = 0.25 * delta;
    let (p, q) = if m >= 0.0 {
        let p = m + r;
        (p, q4 / p)
    } else {
        let q = r - m;
        (q4 / q, q)
    };
    let (sp, sq) = (p.sqrt(), q.sqrt());
    let mk = |sg: f64| {
        let x = sq * e1[0] + sg * sp * e2[0];
        let y = sq * e1[1] + sg * sp * e2[1];
        let n = x.hypot(y);
        [x / n, y / n]
    };
    Some([mk(1.0), mk(-1.0)])
}

/// Real solution directions at a point.
pub fn solve_directions(bde: &CurvatureBde, u: f64, v: f64) -> Directions {
    if bde.is_identically_zero() {
        return Directions::All;
    }
    directions_of(bde.coeffs(u, v))
}

/// Real solution directions of `A du² + B du dv + C dv² = 0`.
pub fn directions_of(c: [f64; 3]) -> Directions {
    let scale = c[0].abs().max(c[1].abs()).max(c[2].abs());
    if scale == 0.0 {
        return Directions::All;
    }
    let delta = discriminant_of(c);
    let dscale = c[1] * c[1] + 4.0 * (c[0] * c[2]).abs();
    if delta.abs() <= 1e-12 * dscale {
        // Semidefinite form: the null line is the eigenvector of the eigenvalue closest to zero.
        let (a, b, cc) = (c[0], 0.5 * c[1], c[2]);
        let th = 0.5 * b.atan2(0.5 * (a - cc));
        let (s, co) = th.sin_cos();
        let m = 0.5 * (a + cc);
        let d = if m >= 0.0 { (-s, co) } else { (co, s) };
        return Directions::One(Direction::new(d.0, d.1));
    }
    match foliation_vectors(c) {
        Some([d1, d2]) => Directions::Two([Direction::new(d1[0], d1[1]), Direction::new(d2[0], d2[1])]),
        None => Directions::None,
    }
}

/// Rectangular window `[umin, umax] × [vmin, vmax]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub umin: f64,
    pub umax: f64,
    pub vmin: f64,
    pub vmax: f64,
}

impl Window {
    pub fn new(umin: f64, umax: f64, vmin: f64, vmax: f64) -> Self {
        Self { umin, umax, vmin, vmax }
    }

    pub fn square(r: f64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn is_valid(&self) -> bool {
        self.umax > self.umin && self.vmax > self.vmin && [self.umin, self.umax, self.vmin, self.vmax].iter().all(|x| x.is_finite())
    }

    pub fn diameter(&self) -> f64 {
        (self.umax - self.umin).hypot(self.vmax - self.vmin)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.umin && p[0] <= self.umax && p[1] >= self.vmin && p[1] <= self.vmax
    }

    /// Point where the segment `a → b` (with `a` inside) leaves the window.
    pub fn clip_exit(&self, a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
        let mut t: f64 = 1.0;
        let d = [b[0] - a[0], b[1] - a[1]];
        for (k, lo, hi) in [(0, self.umin, self.umax), (1, self.vmin, self.vmax)] {
            if d[k] > 0.0 && b[k] > hi {
                t = t.min((hi - a[k]) / d[k]);
            } else if d[k] < 0.0 && b[k] < lo {
                t = t.min((lo - a[k]) / d[k]);
            }
        }
        let t = t.clamp(0.0, 1.0);
        [a[0] + t * d[0], a[1] + t * d[1]]
    }
}
