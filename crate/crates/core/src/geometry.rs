//! Surface germs in Monge charts and their pointwise affine invariants.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bde::Direction;
use crate::error::{Error, Result};
use crate::jets::{factorial, Jet2, Var};

/// Default truncation order of surface jets.
pub const DEFAULT_ORDER: usize = 6;

/// Relative tolerance of the parabolic test `|LN-M^2| < tol (1+|L|+|N|)^2`.
pub const PARABOLIC_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Monge,
    PickElliptic,
    PickHyperbolic,
    Buchin,
    Parabolic,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Monge => "monge",
            SurfaceKind::PickElliptic => "pick_elliptic",
            SurfaceKind::PickHyperbolic => "pick_hyperbolic",
            SurfaceKind::Buchin => "buchin",
            SurfaceKind::Parabolic => "parabolic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "monge" => SurfaceKind::Monge,
            "pick_elliptic" => SurfaceKind::PickElliptic,
            "pick_hyperbolic" => SurfaceKind::PickHyperbolic,
            "buchin" => SurfaceKind::Buchin,
            "parabolic" => SurfaceKind::Parabolic,
            _ => return None,
        })
    }

    /// Whether the normal form admits the Taylor coefficient `q_ij` as a free parameter.
    fn admits(self, i: usize, j: usize) -> bool {
        let d = i + j;
        match self {
            SurfaceKind::Monge => true,
            SurfaceKind::PickElliptic | SurfaceKind::PickHyperbolic => d >= 4,
            SurfaceKind::Buchin => d >= 4 || (i, j) == (3, 0) || (i, j) == (0, 3),
            SurfaceKind::Parabolic => d >= 3,
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named normal-form coefficients: `σ`, `k` and `q_ij` in the factorial
/// convention `h = Σ q_ij u^i v^j / (i! j!)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub sigma: f64,
    pub k: f64,
    q: BTreeMap<(usize, usize), f64>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_q(mut self, i: usize, j: usize, value: f64) -> Self {
        self.set_q(i, j, value);
        self
    }

    pub fn set_q(&mut self, i: usize, j: usize, value: f64) {
        if value == 0.0 {
            self.q.remove(&(i, j));
        } else {
            self.q.insert((i, j), value);
        }
    }

    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.q.get(&(i, j)).copied().unwrap_or(0.0)
    }

    /// Nonzero `q_ij` entries.
    pub fn q_entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.q.iter().map(|(&k, &v)| (k, v))
    }
}

/// Surface germ `X(u,v) = (u, v, h(u,v))` at the base point `(0,0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceJet {
    pub kind: SurfaceKind,
    pub params: Params,
    pub hjet: Jet2,
}

impl SurfaceJet {
    /// General Monge chart from a height jet.
    pub fn monge(hjet: Jet2) -> Self {
        Self { kind: SurfaceKind::Monge, params: Params::default(), hjet }
    }

    /// General Monge chart from factorial-convention coefficients `(i, j, c)`: `h = Σ c u^i v^j/(i! j!)`.
    pub fn monge_from_coefficients(order: usize, coeffs: &[(usize, usize, f64)]) -> Self {
        let terms: Vec<_> = coeffs.iter().map(|&(i, j, c)| (i, j, c / (factorial(i) * factorial(j)))).collect();
        Self::monge(Jet2::from_terms(order, &terms))
    }

    pub fn order(&self) -> usize {
        self.hjet.order()
    }

    /// All partial derivatives of `h` up to order four at `(u,v)`.
    pub fn partials(&self, u: f64, v: f64) -> HeightPartials {
        let d = |a, b| self.hjet.derivative_at(a, b, u, v);
        HeightPartials {
            u: d(1, 0),
            v: d(0, 1),
            uu: d(2, 0),
            uv: d(1, 1),
            vv: d(0, 2),
            uuu: d(3, 0),
            uuv: d(2, 1),
            uvv: d(1, 2),
            vvv: d(0, 3),
            uuuu: d(4, 0),
            uuuv: d(3, 1),
            uuvv: d(2, 2),
            uvvv: d(1, 3),
            vvvv: d(0, 4),
        }
    }

    /// `LN - M^2 = h_uu h_vv - h_uv^2` at `(u,v)`.
    pub fn hessian_det(&self, u: f64, v: f64) -> f64 {
        let p = self.partials(u, v);
        p.uu * p.vv - p.uv * p.uv
    }

    /// Checks that the low-order jet has the shape of `kind` to within `tol`
    /// and extracts the normal-form parameters.
    ///
    /// On failure the error names the offending coefficients.
    pub fn as_normal_form(&self, kind: SurfaceKind, tol: f64) -> Result<Params> {
        let c = |i, j| self.hjet.derivative(i, j);
        let mut bad = Vec::new();
        let expect = |i: usize, j: usize, want: f64, bad: &mut Vec<String>| {
            let got = c(i, j);
            if (got - want).abs() > tol {
                bad.push(format!("h[{i},{j}] = {got} (expected {want})"));
            }
        };
        let mut params = Params::new();
        for (i, j) in [(0, 0), (1, 0), (0, 1)] {
            expect(i, j, 0.0, &mut bad);
        }
        match kind {
            SurfaceKind::Monge => {}
            SurfaceKind::PickElliptic | SurfaceKind::PickHyperbolic => {
                let e = if kind == SurfaceKind::PickElliptic { 1.0 } else { -1.0 };
                expect(2, 0, 1.0, &mut bad);
                expect(1, 1, 0.0, &mut bad);
                expect(0, 2, e, &mut bad);
                let sigma = c(3, 0);
                params.sigma = sigma;
                expect(2, 1, 0.0, &mut bad);
                expect(1, 2, -e * sigma, &mut bad);
                expect(0, 3, 0.0, &mut bad);
            }
            SurfaceKind::Buchin => {
                expect(2, 0, 0.0, &mut bad);
                expect(1, 1, 1.0, &mut bad);
                expect(0, 2, 0.0, &mut bad);
                expect(2, 1, 0.0, &mut bad);
                expect(1, 2, 0.0, &mut bad);
            }
            SurfaceKind::Parabolic => {
                expect(2, 0, 0.0, &mut bad);
                expect(1, 1, 0.0, &mut bad);
                params.k = c(0, 2);
                if params.k.abs() <= tol {
                    bad.push("h[0,2] = 0 (k must be nonzero)".into());
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::WrongChart(format!("{} form violated: {}", kind, bad.join(", "))));
        }
        for (i, j, _) in self.hjet.terms() {
            if i + j >= 3 && kind.admits(i, j) {
                params.set_q(i, j, c(i, j));
            }
        }
        Ok(params)
    }
}

/// Height-function partial derivatives at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HeightPartials {
    pub u: f64,
    pub v: f64,
    pub uu: f64,
    pub uv: f64,
    pub vv: f64,
    pub uuu: f64,
    pub uuv: f64,
    pub uvv: f64,
    pub vvv: f64,
    pub uuuu: f64,
    pub uuuv: f64,
    pub uuvv: f64,
    pub uvvv: f64,
    pub vvvv: f64,
}

impl HeightPartials {
    /// Second- through fourth-order partials in the order used by the BDE numerators.
    pub fn upper(&self) -> [f64; 12] {
        [
            self.uu, self.uv, self.vv, self.uuu, self.uuv, self.uvv, self.vvv, self.uuuu, self.uuuv, self.uuvv,
            self.uvvv, self.vvvv,
        ]
    }
}

/// Builds the normal-form surface of `kind` with the given parameters.
///
/// Coefficients the form does not admit must be zero; the degree-two and
/// (for Pick forms) degree-three parts are fixed by the form.
pub fn normal_form_surface(kind: SurfaceKind, params: &Params, order: usize) -> Result<SurfaceJet> {
    for ((i, j), val) in params.q_entries() {
        if i + j < 2 {
            return Err(Error::InvalidForm(format!("q{i}{j} is not a height-jet coefficient")));
        }
        if !kind.admits(i, j) {
            return Err(Error::InvalidForm(format!("{kind} form does not admit q{i}{j} = {val}")));
        }
    }
    if kind == SurfaceKind::Parabolic && params.k == 0.0 {
        return Err(Error::InvalidForm("parabolic form requires k != 0".into()));
    }
    if params.sigma != 0.0 && !matches!(kind, SurfaceKind::PickElliptic | SurfaceKind::PickHyperbolic) {
        return Err(Error::InvalidForm(format!("{kind} form does not admit sigma")));
    }
    if params.k != 0.0 && kind != SurfaceKind::Parabolic {
        return Err(Error::InvalidForm(format!("{kind} form does not admit k")));
    }

    let s = params.sigma;
    let mut coeffs: Vec<(usize, usize, f64)> = match kind {
        SurfaceKind::Monge => vec![],
        SurfaceKind::PickElliptic => vec![(2, 0, 1.0), (0, 2, 1.0), (3, 0, s), (1, 2, -s)],
        SurfaceKind::PickHyperbolic => vec![(2, 0, 1.0), (0, 2, -1.0), (3, 0, s), (1, 2, s)],
        SurfaceKind::Buchin => vec![(1, 1, 1.0)],
        SurfaceKind::Parabolic => vec![(0, 2, params.k)],
    };
    coeffs.extend(params.q_entries().map(|((i, j), c)| (i, j, c)));
    let mut surf = SurfaceJet::monge_from_coefficients(order, &coeffs);
    surf.kind = kind;
    surf.params = params.clone();
    Ok(surf)
}

type V3 = [f64; 3];
type J3 = [Jet2; 3];

pub(crate) fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn jdot(a: &J3, b: &J3) -> Jet2 {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

fn jcross(a: &J3, b: &J3) -> J3 {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn jscale(a: &J3, s: &Jet2) -> J3 {
    [&a[0] * s, &a[1] * s, &a[2] * s]
}

fn jpartial(a: &J3, var: Var) -> J3 {
    [a[0].partial(var), a[1].partial(var), a[2].partial(var)]
}

fn jtrunc(a: &J3, order: usize) -> J3 {
    [a[0].with_order(order), a[1].with_order(order), a[2].with_order(order)]
}

fn jval(a: &J3) -> V3 {
    [a[0].constant_term(), a[1].constant_term(), a[2].constant_term()]
}

fn jcoef(a: &J3, i: usize, j: usize) -> V3 {
    [a[0].coeff(i, j), a[1].coeff(i, j), a[2].coeff(i, j)]
}

/// Jets of the affine frame at a point, expanded in local offsets.
#[derive(Clone, Debug)]
pub struct FrameJets {
    /// `sign(LN - M^2)` at the point.
    pub sign: f64,
    pub x_u: J3,
    pub x_v: J3,
    pub second: [Jet2; 3],
    pub metric: [Jet2; 3],
    pub nu: J3,
    /// Affine normal oriented so that `<ν, ξ> = 1`.
    pub xi: J3,
    /// Affine normal exactly as produced by the chart divergence formula.
    pub xi_chart: J3,
}

/// Frame jets at `(u,v)`. `order` is the working height-jet order; the
/// returned `ξ` jets have order `order - 3`.
pub fn frame_jets(s: &SurfaceJet, u: f64, v: f64, order: usize) -> Result<FrameJets> {
    let order = order.max(4);
    let h = s.hjet.with_order(order).shift(u, v);
    let w = order - 2;
    let hu = h.partial(Var::U);
    let hv = h.partial(Var::V);
    let l = hu.partial(Var::U);
    let m = hu.partial(Var::V);
    let n = hv.partial(Var::V);
    let k = &(&l * &n) - &(&m * &m);
    let k0 = k.constant_term();
    let scale = 1.0 + l.constant_term().abs() + n.constant_term().abs();
    if k0.abs() < PARABOLIC_TOL * scale * scale {
        return Err(Error::ParabolicPoint { u, v, k: k0 });
    }
    let sign = k0.signum();
    let kabs = k.scale(sign);
    let k_m14 = kabs.pow(-0.25)?;
    let k_m12 = kabs.pow(-0.5)?;

    let one = Jet2::constant(w, 1.0);
    let zero = Jet2::zero(w);
    let x_u: J3 = [one.clone(), zero.clone(), hu.with_order(w)];
    let x_v: J3 = [zero, one, hv.with_order(w)];

    let nu: J3 = [-(&x_u[2] * &k_m14), -(&x_v[2] * &k_m14), k_m14.clone()];

    // ξ = ½ |K|^{-1/4} { ∂u((N X_u − M X_v)|K|^{-1/2}) + ∂v((L X_v − M X_u)|K|^{-1/2}) }
    let lin = |a: &Jet2, p: &J3, b: &Jet2, q: &J3| -> J3 {
        [&(a * &p[0]) - &(b * &q[0]), &(a * &p[1]) - &(b * &q[1]), &(a * &p[2]) - &(b * &q[2])]
    };
    let fu = jscale(&lin(&n, &x_u, &m, &x_v), &k_m12);
    let fv = jscale(&lin(&l, &x_v, &m, &x_u), &k_m12);
    let du = jpartial(&fu, Var::U);
    let dv = jpartial(&fv, Var::V);
    let pre = k_m14.with_order(w - 1).scale(0.5);
    let xi_chart: J3 = [
        &(&du[0] + &dv[0]) * &pre,
        &(&du[1] + &dv[1]) * &pre,
        &(&du[2] + &dv[2]) * &pre,
    ];
    let xi: J3 = [xi_chart[0].scale(sign), xi_chart[1].scale(sign), xi_chart[2].scale(sign)];
    let metric = [&l * &k_m14, &m * &k_m14, &n * &k_m14];
    Ok(FrameJets { sign, x_u, x_v, second: [l, m, n], metric, nu, xi, xi_chart })
}

impl FrameJets {
    /// `ν_u × ν_v / |LN - M^2|^{1/4}`, the cross-product route to the affine normal.
    pub fn xi_cross(&self) -> Result<J3> {
        let w = self.nu[0].order();
        let nu_u = jtrunc(&jpartial(&self.nu, Var::U), w - 1);
        let nu_v = jtrunc(&jpartial(&self.nu, Var::V), w - 1);
        let k = &(&self.second[0] * &self.second[2]) - &(&self.second[1] * &self.second[1]);
        let kabs = k.scale(self.sign).with_order(w - 1);
        Ok(jscale(&jcross(&nu_u, &nu_v), &kabs.pow(-0.25)?))
    }

    /// `<ν, ξ>` as a jet.
    pub fn nu_dot_xi(&self) -> Jet2 {
        let o = self.xi[0].order();
        jdot(&jtrunc(&self.nu, o), &self.xi)
    }
}

/// Pointwise affine data of a surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointFrame {
    pub point: [f64; 2],
    #[serde(rename = "L")]
    pub big_l: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(rename = "N")]
    pub big_n: f64,
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub nu: [f64; 3],
    pub xi: [f64; 3],
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub b11: f64,
    pub b12: f64,
    pub b21: f64,
    pub b22: f64,
    #[serde(rename = "Ke")]
    pub ke: f64,
    /// `sign(LN - M^2)`: `+1` elliptic, `-1` hyperbolic.
    pub sign: f64,
    pub nu_u: [f64; 3],
    pub nu_v: [f64; 3],
    pub xi_u: [f64; 3],
    pub xi_v: [f64; 3],
}

impl PointFrame {
    /// The affine normal with the chart-formula orientation, `sign(LN-M^2) ξ`.
    pub fn chart_normal(&self) -> [f64; 3] {
        self.xi.map(|c| c * self.sign)
    }

    pub fn x_u(&self, s: &SurfaceJet) -> [f64; 3] {
        [1.0, 0.0, s.hjet.derivative_at(1, 0, self.point[0], self.point[1])]
    }

    pub fn x_v(&self, s: &SurfaceJet) -> [f64; 3] {
        [0.0, 1.0, s.hjet.derivative_at(0, 1, self.point[0], self.point[1])]
    }

    /// Shape operator acting on tangent coordinates `(du, dv)`.
    pub fn shape_operator(&self) -> [[f64; 2]; 2] {
        [[self.b11, self.b12], [self.b21, self.b22]]
    }
}

/// Affine frame at `(u, v)`.
pub fn point_frame(s: &SurfaceJet, u: f64, v: f64) -> Result<PointFrame> {
    let fj = frame_jets(s, u, v, s.order().max(DEFAULT_ORDER))?;
    let [bl, bm, bn] = [0, 1, 2].map(|i| fj.second[i].constant_term());
    let [g11, g12, g22] = [0, 1, 2].map(|i| fj.metric[i].constant_term());
    let nu = jval(&fj.nu);
    let xi = jval(&fj.xi);
    let nu_u = jcoef(&fj.nu, 1, 0);
    let nu_v = jcoef(&fj.nu, 0, 1);
    let xi_u = jcoef(&fj.xi, 1, 0);
    let xi_v = jcoef(&fj.xi, 0, 1);
    let l = dot(&nu_u, &xi_u);
    let m = dot(&nu_u, &xi_v);
    let n = dot(&nu_v, &xi_v);
    // [[b11,b21],[b12,b22]] = -|det g|^{-1} [[l,m],[m,n]] adj(g)
    let dg = (g11 * g22 - g12 * g12).abs();
    let b11 = -(l * g22 - m * g12) / dg;
    let b21 = -(m * g11 - l * g12) / dg;
    let b12 = -(m * g22 - n * g12) / dg;
    let b22 = -(n * g11 - m * g12) / dg;
    let hu = fj.x_u[2].constant_term();
    let hv = fj.x_v[2].constant_term();
    let w = 1.0 + hu * hu + hv * hv;
    Ok(PointFrame {
        point: [u, v],
        big_l: bl,
        big_m: bm,
        big_n: bn,
        g11,
        g12,
        g22,
        nu,
        xi,
        l,
        m,
        n,
        b11,
        b12,
        b21,
        b22,
        ke: (bl * bn - bm * bm) / (w * w),
        sign: fj.sign,
        nu_u,
        nu_v,
        xi_u,
        xi_v,
    })
}

/// Jet of the affine normal `ξ` (oriented by `<ν, ξ> = 1`) at the base point.
pub fn affine_normal_jet(s: &SurfaceJet) -> Result<[Jet2; 3]> {
    Ok(frame_jets(s, 0.0, 0.0, s.order().max(DEFAULT_ORDER))?.xi)
}

/// Spectral type of the shape operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrincipalData {
    /// Distinct real curvatures, ascending, with their directions.
    TwoReal { curvatures: [f64; 2], directions: [Direction; 2] },
    ComplexPair { re: f64, im: f64 },
    Double { curvature: f64, direction: Direction },
    Isotropic { curvature: f64 },
}

/// Eigen-decomposition of the shape operator at a frame.
///
/// Curvatures refer to the oriented normal `xi`, so at hyperbolic points they
/// are the eigenvalues of `-B`. Directions are unaffected.
pub fn principal_data(f: &PointFrame) -> PrincipalData {
    principal_data_of(f.shape_operator().map(|r| r.map(|x| f.sign * x)))
}

/// Eigen-decomposition of a 2×2 operator `[[a, b], [c, d]]` acting on `(du, dv)`.
pub fn principal_data_of(op: [[f64; 2]; 2]) -> PrincipalData {
    let [[a, b], [c, d]] = op;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    let tol = 1e-10 * scale.max(1e-300);
    let half_tr = 0.5 * (a + d);
    if b.abs() <= tol && c.abs() <= tol && (a - d).abs() <= tol {
        return PrincipalData::Isotropic { curvature: half_tr };
    }
    let disc = 0.25 * (a - d) * (a - d) + b * c;
    let eig_dir = |lam: f64| {
        let v1 = (b, lam - a);
        let v2 = (lam - d, c);
        let n1 = v1.0.abs().max(v1.1.abs());
        let n2 = v2.0.abs().max(v2.1.abs());
        let (x, y) = if n1 >= n2 { v1 } else { v2 };
        Direction::new(x, y)
    };
    if disc.abs() <= tol * tol {
        return PrincipalData::Double { curvature: half_tr, direction: eig_dir(half_tr) };
    }
    if disc < 0.0 {
        return PrincipalData::ComplexPair { re: half_tr, im: (-disc).sqrt() };
    }
    let r = disc.sqrt();
    let (k1, k2) = (half_tr - r, half_tr + r);
    PrincipalData::TwoReal { curvatures: [k1, k2], directions: [eig_dir(k1), eig_dir(k2)] }
}

/// Jets of `b11, b12, b21, b22` at `(u, v)`.
pub fn shape_operator_jet(s: &SurfaceJet, u: f64, v: f64) -> Result<[Jet2; 4]> {
    let fj = frame_jets(s, u, v, s.order().max(DEFAULT_ORDER))?;
    let w = fj.xi[0].order();
    if w == 0 {
        return Err(Error::InvalidForm("surface order too low for a shape-operator jet".into()));
    }
    let o = w - 1;
    let nu_u = jtrunc(&jpartial(&fj.nu, Var::U), o);
    let nu_v = jtrunc(&jpartial(&fj.nu, Var::V), o);
    let xi_u = jpartial(&fj.xi, Var::U);
    let xi_v = jpartial(&fj.xi, Var::V);
    let l = jdot(&nu_u, &xi_u);
    let m = jdot(&nu_u, &xi_v);
    let n = jdot(&nu_v, &xi_v);
    let [g11, g12, g22] = [0, 1, 2].map(|i| fj.metric[i].with_order(o));
    let dg = (&(&g11 * &g22) - &(&g12 * &g12)).scale(fj.sign);
    let inv = dg.recip()?.scale(-1.0);
    let b11 = &(&(&l * &g22) - &(&m * &g12)) * &inv;
    let b21 = &(&(&m * &g11) - &(&l * &g12)) * &inv;
    let b12 = &(&(&m * &g22) - &(&n * &g12)) * &inv;
    let b22 = &(&(&n * &g11) - &(&m * &g12)) * &inv;
    Ok([b11, b12, b21, b22])
}

/// Closed-form linear part of `(ξ1, ξ2)` at the origin of a Pick normal form:
/// `[[∂u ξ1, ∂v ξ1], [∂u ξ2, ∂v ξ2]]`.
pub fn pick_xi_linear(kind: SurfaceKind, p: &Params) -> Result<[[f64; 2]; 2]> {
    let sg = p.sigma;
    let q = |i, j| p.q(i, j);
    match kind {
        SurfaceKind::PickElliptic => {
            let c = -0.25 * (q(1, 3) + q(3, 1));
            Ok([
                [0.5 * sg * sg - 0.25 * q(2, 2) - 0.25 * q(4, 0), c],
                [c, 0.5 * sg * sg - 0.25 * q(0, 4) - 0.25 * q(2, 2)],
            ])
        }
        SurfaceKind::PickHyperbolic => {
            let c = 0.25 * (q(1, 3) - q(3, 1));
            Ok([
                [0.5 * sg * sg + 0.25 * q(2, 2) - 0.25 * q(4, 0), c],
                [-c, 0.5 * sg * sg - 0.25 * q(0, 4) + 0.25 * q(2, 2)],
            ])
        }
        other => Err(Error::WrongChart(format!("{other} is not a Pick normal form"))),
    }
}

/// Closed-form `(constant, ∂u, ∂v)` of `b11, b12, b21, b22` at the origin of a
/// Pick normal form.
pub fn pick_shape_linear(kind: SurfaceKind, p: &Params) -> Result<[[f64; 3]; 4]> {
    let s = p.sigma;
    let s2 = s * s;
    let s3 = s2 * s;
    let q = |i, j| p.q(i, j);
    match kind {
        SurfaceKind::PickElliptic => {
            let b12u = -0.25 * q(4, 1) - 0.5 * s * q(1, 3) - 0.25 * q(2, 3);
            let mixed = s3 - 0.25 * q(4, 0) * s - 1.25 * s * q(2, 2) - 0.25 * q(3, 2) - 0.5 * s * q(0, 4) - 0.25 * q(1, 4);
            Ok([
                [
                    0.5 * s2 - 0.25 * q(2, 2) - 0.25 * q(4, 0),
                    -s3 - 0.25 * s * q(2, 2) + 1.25 * q(4, 0) * s - 0.25 * q(3, 2) - 0.25 * q(5, 0),
                    b12u,
                ],
                [
                    -0.25 * (q(1, 3) + q(3, 1)),
                    b12u,
                    s3 - 1.25 * s * q(2, 2) - 0.25 * q(3, 2) - 0.75 * s * q(0, 4) - 0.25 * q(1, 4),
                ],
                [
                    -0.25 * (q(1, 3) + q(3, 1)),
                    -0.5 * q(3, 1) * s - 0.25 * q(4, 1) - s * q(1, 3) - 0.25 * q(2, 3),
                    mixed,
                ],
                [
                    0.5 * s2 - 0.25 * q(2, 2) - 0.25 * q(0, 4),
                    mixed,
                    -0.5 * q(3, 1) * s - 2.0 * s * q(1, 3) - 0.25 * q(2, 3) - 0.25 * q(0, 5),
                ],
            ])
        }
        SurfaceKind::PickHyperbolic => {
            let mixed = -(s3 - 0.25 * q(4, 0) * s + 1.25 * s * q(2, 2) + 0.25 * q(3, 2) - 0.5 * s * q(0, 4) - 0.25 * q(1, 4));
            Ok([
                [
                    -0.5 * s2 - 0.25 * q(2, 2) + 0.25 * q(4, 0),
                    -(-s3 + 0.25 * s * q(2, 2) + 1.25 * q(4, 0) * s + 0.25 * q(3, 2) - 0.25 * q(5, 0)),
                    -(0.5 * s * q(1, 3) + 0.25 * q(2, 3) - 0.25 * q(4, 1)),
                ],
                [
                    0.25 * (q(3, 1) - q(1, 3)),
                    -(-0.25 * q(4, 1) + 0.5 * s * q(1, 3) + 0.25 * q(2, 3)),
                    -(-s3 - 1.25 * s * q(2, 2) - 0.25 * q(3, 2) + 0.75 * s * q(0, 4) + 0.25 * q(1, 4)),
                ],
                [
                    -0.25 * (q(3, 1) - q(1, 3)),
                    -(0.5 * q(3, 1) * s + 0.25 * q(4, 1) - s * q(1, 3) - 0.25 * q(2, 3)),
                    mixed,
                ],
                [
                    -0.5 * s2 - 0.25 * q(2, 2) + 0.25 * q(0, 4),
                    mixed,
                    -(-0.5 * q(3, 1) * s + 2.0 * s * q(1, 3) + 0.25 * q(2, 3) - 0.25 * q(0, 5)),
                ],
            ])
        }
        other => Err(Error::WrongChart(format!("{other} is not a Pick normal form"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_pick_jet() {
        let s = normal_form_surface(SurfaceKind::PickElliptic, &Params::new().with_sigma(1.0), 6).unwrap();
        assert_eq!(s.hjet.coeff(2, 0), 0.5);
        assert_eq!(s.hjet.coeff(0, 2), 0.5);
        assert!((s.hjet.coeff(3, 0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((s.hjet.coeff(1, 2) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn buchin_jet() {
        let p = Params::new().with_q(3, 0, 1.0).with_q(0, 3, 1.0);
        let s = normal_form_surface(SurfaceKind::Buchin, &p, 6).unwrap();
        let want = Jet2::from_terms(6, &[(1, 1, 1.0), (3, 0, 1.0 / 6.0), (0, 3, 1.0 / 6.0)]);
        assert!(s.hjet.terms().zip(want.terms()).all(|(a, b)| (a.2 - b.2).abs() < 1e-15));
    }

    #[test]
    fn parabolic_jet_and_rejections() {
        let p = Params::new().with_k(1.0).with_q(3, 0, 1.0);
        let s = normal_form_surface(SurfaceKind::Parabolic, &p, 6).unwrap();
        assert_eq!(s.hjet.coeff(0, 2), 0.5);
        assert!((s.hjet.coeff(3, 0) - 1.0 / 6.0).abs() < 1e-15);
        assert!(normal_form_surface(SurfaceKind::Parabolic, &Params::new(), 6).is_err());
        assert!(normal_form_surface(SurfaceKind::PickElliptic, &Params::new().with_q(2, 1, 1.0), 6).is_err());
        assert!(normal_form_surface(SurfaceKind::Buchin, &Params::new().with_q(1, 2, 1.0), 6).is_err());
    }

    #[test]
    fn paraboloid_is_affine_sphere() {
        let s = SurfaceJet::monge_from_coefficients(6, &[(2, 0, 1.0), (0, 2, 1.0)]);
        let f = point_frame(&s, 0.0, 0.0).unwrap();
        assert!((f.xi[2] - 1.0).abs() < 1e-15 && f.xi[0].abs() < 1e-15 && f.xi[1].abs() < 1e-15);
        for b in [f.b11, f.b12, f.b21, f.b22, f.l, f.m, f.n] {
            assert!(b.abs() < 1e-15);
        }
        let xi = affine_normal_jet(&s).unwrap();
        for c in &xi {
            for (i, j, val) in c.terms() {
                let want = if (i, j) == (0, 0) && c == &xi[2] { 1.0 } else { 0.0 };
                assert!((val - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn saddle_uv() {
        let s = SurfaceJet::monge_from_coefficients(6, &[(1, 1, 1.0)]);
        let f = point_frame(&s, 0.0, 0.0).unwrap();
        assert_eq!(f.nu, [0.0, 0.0, 1.0]);
        assert_eq!(f.chart_normal(), [0.0, 0.0, -1.0]);
        assert_eq!(f.xi, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn parabolic_point_rejected() {
        let s = SurfaceJet::monge_from_coefficients(6, &[(0, 2, 1.0), (3, 0, 1.0)]);
        assert!(matches!(point_frame(&s, 0.0, 0.0), Err(Error::ParabolicPoint { .. })));
        assert!(point_frame(&s, 0.1, 0.0).is_ok());
    }

    #[test]
    fn principal_examples() {
        assert_eq!(principal_data_of([[0.0; 2]; 2]), PrincipalData::Isotropic { curvature: 0.0 });
        match principal_data_of([[1.0, 0.0], [0.0, 2.0]]) {
            PrincipalData::TwoReal { curvatures, directions } => {
                assert_eq!(curvatures, [1.0, 2.0]);
                assert_eq!(directions[0], Direction::new(1.0, 0.0));
                assert_eq!(directions[1], Direction::new(0.0, 1.0));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(principal_data_of([[0.0, -1.0], [1.0, 0.0]]), PrincipalData::ComplexPair { .. }));
    }

    #[test]
    fn buchin_double_direction() {
        let p = Params::new().with_q(1, 3, 1.3).with_q(2, 2, 0.7).with_q(3, 0, 0.4).with_q(0, 3, -0.9);
        let s = normal_form_surface(SurfaceKind::Buchin, &p, 6).unwrap();
        let f = point_frame(&s, 0.0, 0.0).unwrap();
        let want = -0.5 * (0.7 - 0.5 * 0.4 * -0.9);
        match principal_data(&f) {
            PrincipalData::Double { curvature, direction } => {
                assert!((curvature - want).abs() < 1e-12, "{curvature} vs {want}");
                assert_eq!(direction, Direction::new(1.0, 0.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normal_form_detection() {
        let p = Params::new().with_sigma(0.5).with_q(4, 0, 1.0);
        let s = normal_form_surface(SurfaceKind::PickElliptic, &p, 6).unwrap();
        let m = SurfaceJet::monge(s.hjet.clone());
        let got = m.as_normal_form(SurfaceKind::PickElliptic, 1e-12).unwrap();
        assert!((got.sigma - 0.5).abs() < 1e-15);
        assert!((got.q(4, 0) - 1.0).abs() < 1e-15);
        let err = m.as_normal_form(SurfaceKind::Buchin, 1e-12).unwrap_err();
        assert!(err.to_string().contains("h[1,1]"));
    }
}
