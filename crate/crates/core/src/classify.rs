//! Singular points of the affine curvature-line equation: umbilics, folded
//! double-direction points, ordinary parabolic points and Gauss cusps.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bde::{
    b20_a3minus, b20bar_a3plus, curvature_bde, curvature_bde_jet, discriminant, CurvatureBde, LieCartanField,
};
use crate::error::{Error, Result};
use crate::geometry::{point_frame, Params, SurfaceJet, SurfaceKind};
use crate::jets::Jet2;

/// Relative size below which an invariant counts as zero.
pub const GENERICITY_TOL: f64 = 1e-9;
/// Distance to an interval wall that counts as on the wall.
pub const WALL_TOL: f64 = 1e-9;
/// Tolerance of the raw-jet normal-form detection.
pub const CHART_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    D1,
    D2,
    D3,
    A1,
    A2,
    A3,
    A4,
    A5,
    FoldedCusp,
    FoldedSaddle,
    FoldedNode,
    FoldedFocus,
    OrdinaryParabolic,
    GaussCuspA3Plus,
    GaussCuspR1,
    GaussCuspR2,
    GaussCuspR3,
    GaussCuspR4,
    GaussCuspR5,
    AffineSphereFlat,
    /// Base point is not a singular point of the equation.
    Regular,
    #[default]
    Degenerate,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::D1 => "D1",
            Tag::D2 => "D2",
            Tag::D3 => "D3",
            Tag::A1 => "A1",
            Tag::A2 => "A2",
            Tag::A3 => "A3",
            Tag::A4 => "A4",
            Tag::A5 => "A5",
            Tag::FoldedCusp => "FoldedCusp",
            Tag::FoldedSaddle => "FoldedSaddle",
            Tag::FoldedNode => "FoldedNode",
            Tag::FoldedFocus => "FoldedFocus",
            Tag::OrdinaryParabolic => "OrdinaryParabolic",
            Tag::GaussCuspA3Plus => "GaussCuspA3Plus",
            Tag::GaussCuspR1 => "GaussCuspR1",
            Tag::GaussCuspR2 => "GaussCuspR2",
            Tag::GaussCuspR3 => "GaussCuspR3",
            Tag::GaussCuspR4 => "GaussCuspR4",
            Tag::GaussCuspR5 => "GaussCuspR5",
            Tag::AffineSphereFlat => "AffineSphereFlat",
            Tag::Regular => "Regular",
            Tag::Degenerate => "Degenerate",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a classification with the invariants that justify it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub tag: Tag,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub invariants: BTreeMap<String, f64>,
    pub genericity: BTreeMap<String, bool>,
    pub margins: BTreeMap<String, f64>,
    /// Label under the opposite orientation of the affine normal, when it differs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alternate_tag: Option<Tag>,
}

impl SingularityReport {
    fn new() -> Self {
        Self::default()
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn is_degenerate(&self) -> bool {
        self.tag() == Tag::Degenerate
    }

    fn set(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.invariants.insert(name.to_string(), value);
        }
    }

    /// Records a genericity hypothesis `value != 0` with its relative margin.
    fn check(&mut self, name: &str, value: f64, scale: f64) -> bool {
        let ok = nonzero(value, scale);
        self.genericity.insert(name.to_string(), ok);
        let m = if scale > 0.0 { value / scale } else { 0.0 };
        if m.is_finite() {
            self.margins.insert(name.to_string(), m);
        }
        ok
    }

    fn finish(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    fn degenerate(mut self, reason: impl Into<String>) -> Self {
        self.tag = Tag::Degenerate;
        self.reason = Some(reason.into());
        self
    }
}

fn nonzero(value: f64, scale: f64) -> bool {
    scale > 0.0 && value.abs() > GENERICITY_TOL * scale
}

fn abs_sum(terms: &[f64]) -> f64 {
    terms.iter().map(|t| t.abs()).sum()
}

// ---------------------------------------------------------------------------
// Umbilics

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UmbilicCase {
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UmbilicTest {
    NotUmbilic,
    EllipticUmbilic,
    HyperbolicUmbilic,
}

/// Whether the shape operator at `(u, v)` is a multiple of the identity.
pub fn umbilic_test(s: &SurfaceJet, u: f64, v: f64, tol: f64) -> Result<UmbilicTest> {
    let f = point_frame(s, u, v)?;
    let scale = 1.0 + f.b11.abs().max(f.b12.abs()).max(f.b21.abs()).max(f.b22.abs());
    let umb = f.b12.abs() <= tol * scale && f.b21.abs() <= tol * scale && (f.b11 - f.b22).abs() <= tol * scale;
    Ok(match (umb, f.sign > 0.0) {
        (false, _) => UmbilicTest::NotUmbilic,
        (true, true) => UmbilicTest::EllipticUmbilic,
        (true, false) => UmbilicTest::HyperbolicUmbilic,
    })
}

/// Linear part of the curvature-line equation at an umbilic:
/// `Ā = a1 u + b1 v`, `B̄ = 2(a2 u + b2 v)`, `C̄ = ∓(a1 u + b1 v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UmbilicInvariants {
    pub case: UmbilicCase,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    /// `a2 b1 - a1 b2`.
    pub j: f64,
    /// Cubic `p3[0] k³ + p3[1] k² + p3[2] k + p3[3]`.
    pub p3: [f64; 4],
    /// Discriminant of `p3`.
    pub delta: f64,
    /// Branch quadratic (hyperbolic only).
    pub p2h: Option<[f64; 3]>,
    /// Resultant of `p2h` and `p3` (hyperbolic only).
    pub r: Option<f64>,
}

/// Discriminant of `a k³ + b k² + c k + d` and the sum of its term magnitudes.
pub fn cubic_discriminant(p: [f64; 4]) -> (f64, f64) {
    let [a, b, c, d] = p;
    let terms = [18.0 * a * b * c * d, -4.0 * b.powi(3) * d, b * b * c * c, -4.0 * a * c.powi(3), -27.0 * a * a * d * d];
    (terms.iter().sum(), abs_sum(&terms))
}

impl UmbilicInvariants {
    pub fn from_linear(case: UmbilicCase, a1: f64, b1: f64, a2: f64, b2: f64) -> Self {
        let j = a2 * b1 - a1 * b2;
        match case {
            UmbilicCase::Elliptic => {
                let p3 = [b1, a1 - 2.0 * b2, -(b1 + 2.0 * a2), -a1];
                let delta = cubic_discriminant(p3).0;
                Self { case, a1, b1, a2, b2, j, p3, delta, p2h: None, r: None }
            }
            UmbilicCase::Hyperbolic => {
                let p3 = [b1, a1 + 2.0 * b2, b1 + 2.0 * a2, a1];
                let delta = cubic_discriminant(p3).0;
                let p2h = [-4.0 * b1 * b1 + 4.0 * b2 * b2, -8.0 * a1 * b1 + 8.0 * a2 * b2, -4.0 * a1 * a1 + 4.0 * a2 * a2];
                let r = 64.0 * (-b1 + a1 - a2 + b2).powi(2) * (b1 + a1 + a2 + b2).powi(2) * (a1 * b2 - a2 * b1).powi(2);
                Self { case, a1, b1, a2, b2, j, p3, delta, p2h: Some(p2h), r: Some(r) }
            }
        }
    }

    /// Same invariants with the affine normal reversed.
    pub fn flipped(&self) -> Self {
        Self::from_linear(self.case, -self.a1, -self.b1, -self.a2, -self.b2)
    }

    /// Linear coefficient jets `(Ā, B̄, C̄)` of the model equation.
    pub fn linear_model(&self) -> [Jet2; 3] {
        let s = match self.case {
            UmbilicCase::Elliptic => -1.0,
            UmbilicCase::Hyperbolic => 1.0,
        };
        [
            Jet2::from_terms(1, &[(1, 0, self.a1), (0, 1, self.b1)]),
            Jet2::from_terms(1, &[(1, 0, 2.0 * self.a2), (0, 1, 2.0 * self.b2)]),
            Jet2::from_terms(1, &[(1, 0, s * self.a1), (0, 1, s * self.b1)]),
        ]
    }

    /// `det Hess δ` of the linear model at the origin.
    pub fn hess_delta_lin(&self) -> f64 {
        hess_det_of_discriminant(&self.linear_model())
    }

    /// `64 J²` (elliptic) or `-64 J²` (hyperbolic).
    pub fn expected_hess(&self) -> f64 {
        let s = match self.case {
            UmbilicCase::Elliptic => 1.0,
            UmbilicCase::Hyperbolic => -1.0,
        };
        s * 64.0 * self.j * self.j
    }
}

/// `det Hess(B² - 4AC)` at the origin from the linear parts of `(A, B, C)`.
pub fn hess_det_of_discriminant(c: &[Jet2; 3]) -> f64 {
    let lin = |j: &Jet2| [j.coeff(1, 0), j.coeff(0, 1)];
    let (a, b, cc) = (lin(&c[0]), lin(&c[1]), lin(&c[2]));
    // δ₂ = (b·x)² − 4 (a·x)(c·x): Hessian 2 b bᵀ − 4 (a cᵀ + c aᵀ)
    let h = |i: usize, k: usize| 2.0 * b[i] * b[k] - 4.0 * (a[i] * cc[k] + cc[i] * a[k]);
    h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)
}

fn pick_case(s: &SurfaceJet) -> Result<(UmbilicCase, Params)> {
    match s.kind {
        SurfaceKind::PickElliptic => Ok((UmbilicCase::Elliptic, s.params.clone())),
        SurfaceKind::PickHyperbolic => Ok((UmbilicCase::Hyperbolic, s.params.clone())),
        _ => {
            if let Ok(p) = s.as_normal_form(SurfaceKind::PickElliptic, CHART_TOL) {
                Ok((UmbilicCase::Elliptic, p))
            } else {
                s.as_normal_form(SurfaceKind::PickHyperbolic, CHART_TOL).map(|p| (UmbilicCase::Hyperbolic, p))
            }
        }
    }
}

/// Closed-form `(a1, b1, a2, b2)` of a Pick normal form at an umbilic.
pub fn umbilic_linear_coeffs(s: &SurfaceJet, case: UmbilicCase) -> Result<UmbilicInvariants> {
    let (got, p) = pick_case(s)?;
    if got != case {
        return Err(Error::WrongChart(format!("surface is a {got:?} Pick form, not {case:?}")));
    }
    let sg = p.sigma;
    let q = |i, j| p.q(i, j);
    let (a1, b1, a2, b2) = match case {
        UmbilicCase::Elliptic => (
            0.25 * (2.0 * sg * q(3, 1) - q(2, 3) - q(4, 1)),
            sg.powi(3) - 0.25 * sg * (3.0 * q(4, 0) + 5.0 * q(2, 2)) - 0.25 * (q(1, 4) + q(3, 2)),
            sg.powi(3) - 0.5 * sg * (2.0 * q(4, 0) + q(2, 2)) + 0.125 * (q(5, 0) - q(1, 4)),
            0.5 * sg * q(3, 1) + 0.125 * (q(4, 1) - q(0, 5)),
        ),
        UmbilicCase::Hyperbolic => (
            0.25 * (2.0 * sg * q(3, 1) + q(2, 3) - q(4, 1)),
            -sg.powi(3) + 0.25 * sg * (3.0 * q(4, 0) - 5.0 * q(2, 2)) + 0.25 * (q(1, 4) - q(3, 2)),
            -sg.powi(3) + 0.5 * sg * (2.0 * q(4, 0) - q(2, 2)) - 0.125 * (q(5, 0) - q(1, 4)),
            -0.5 * sg * q(3, 1) - 0.125 * (q(4, 1) - q(0, 5)),
        ),
    };
    Ok(UmbilicInvariants::from_linear(case, a1, b1, a2, b2))
}

/// `(a1, b1, a2, b2)` read off the 1-jet of an equation at the origin.
pub fn umbilic_invariants_from_bde(bde: &CurvatureBde, case: UmbilicCase) -> UmbilicInvariants {
    let [a, b, _] = bde.jet_at(0.0, 0.0, 1);
    UmbilicInvariants::from_linear(case, a.coeff(1, 0), a.coeff(0, 1), 0.5 * b.coeff(1, 0), 0.5 * b.coeff(0, 1))
}

/// Elliptic umbilic type from the sign table of `Δe` and `J`.
pub fn classify_elliptic_umbilic(inv: &UmbilicInvariants) -> Result<Tag> {
    let mut r = SingularityReport::new();
    let tag = elliptic_table(inv, &mut r);
    match tag {
        Some(t) => Ok(t),
        None => Err(Error::DegenerateUmbilic(r.reason.unwrap_or_default())),
    }
}

/// Hyperbolic umbilic type from the sign table of `Δh`, `J` and `a2 + b1`.
pub fn classify_hyperbolic_umbilic(inv: &UmbilicInvariants) -> Result<Tag> {
    let mut r = SingularityReport::new();
    match hyperbolic_table(inv, &mut r) {
        Some(t) => Ok(t),
        None => Err(Error::DegenerateUmbilic(r.reason.unwrap_or_default())),
    }
}

fn j_scale(inv: &UmbilicInvariants) -> f64 {
    (inv.a2 * inv.b1).abs() + (inv.a1 * inv.b2).abs()
}

fn elliptic_table(inv: &UmbilicInvariants, r: &mut SingularityReport) -> Option<Tag> {
    let j_ok = r.check("J", inv.j, j_scale(inv));
    let (d, ds) = cubic_discriminant(inv.p3);
    let d_ok = r.check("delta_e", d, ds);
    if !j_ok {
        r.reason = Some("J = 0".into());
        return None;
    }
    if !d_ok {
        r.reason = Some("cubic discriminant vanishes".into());
        return None;
    }
    Some(if d < 0.0 {
        Tag::D1
    } else if inv.j < 0.0 {
        Tag::D2
    } else {
        Tag::D3
    })
}

fn hyperbolic_table(inv: &UmbilicInvariants, r: &mut SingularityReport) -> Option<Tag> {
    let (a1, b1, a2, b2) = (inv.a1, inv.b1, inv.a2, inv.b2);
    let j_ok = r.check("J", inv.j, j_scale(inv));
    let (d, ds) = cubic_discriminant(inv.p3);
    let d_ok = r.check("delta_h", d, ds);
    let f1 = r.check("R_factor_1", -b1 + a1 - a2 + b2, abs_sum(&[a1, b1, a2, b2]));
    let f2 = r.check("R_factor_2", b1 + a1 + a2 + b2, abs_sum(&[a1, b1, a2, b2]));
    if !j_ok {
        r.reason = Some("J = 0".into());
        return None;
    }
    if !d_ok {
        r.reason = Some("cubic discriminant vanishes".into());
        return None;
    }
    if !(f1 && f2) {
        r.reason = Some("resultant R vanishes".into());
        return None;
    }
    if d < 0.0 {
        return Some(if inv.j < 0.0 { Tag::A1 } else { Tag::A2 });
    }
    let s = a2 + b1;
    let m = (a1 + b2).abs();
    let wall_scale = abs_sum(&[a1, b1, a2, b2]);
    r.check("a2_plus_b1_wall", s.abs() - m, wall_scale);
    if (s.abs() - m).abs() <= GENERICITY_TOL * wall_scale {
        r.reason = Some("|a2 + b1| = |a1 + b2|".into());
        return None;
    }
    Some(if s > m {
        if inv.j > 0.0 {
            Tag::A3
        } else {
            Tag::A4
        }
    } else if s < -m {
        Tag::A5
    } else if inv.j > 0.0 {
        Tag::A4
    } else {
        Tag::A5
    })
}

fn fill_umbilic(r: &mut SingularityReport, inv: &UmbilicInvariants) {
    for (k, v) in [("a1", inv.a1), ("b1", inv.b1), ("a2", inv.a2), ("b2", inv.b2), ("J", inv.j)] {
        r.set(k, v);
    }
    let prefix = match inv.case {
        UmbilicCase::Elliptic => "p3e",
        UmbilicCase::Hyperbolic => "p3h",
    };
    for (i, c) in inv.p3.iter().enumerate() {
        r.set(&format!("{prefix}_{}", 3 - i), *c);
    }
    match inv.case {
        UmbilicCase::Elliptic => r.set("delta_e", inv.delta),
        UmbilicCase::Hyperbolic => r.set("delta_h", inv.delta),
    }
    if let Some(p) = inv.p2h {
        for (i, c) in p.iter().enumerate() {
            r.set(&format!("p2h_{}", 2 - i), *c);
        }
    }
    if let Some(rr) = inv.r {
        r.set("R", rr);
    }
    r.set("hess_delta_lin", inv.hess_delta_lin());
    r.set("a2_plus_b1", inv.a2 + inv.b1);
    r.set("abs_a1_plus_b2", (inv.a1 + inv.b2).abs());
}

/// Report for an umbilic described by its invariants.
pub fn umbilic_report(inv: &UmbilicInvariants) -> SingularityReport {
    let mut r = SingularityReport::new();
    fill_umbilic(&mut r, inv);
    let tag = match inv.case {
        UmbilicCase::Elliptic => elliptic_table(inv, &mut r),
        UmbilicCase::Hyperbolic => hyperbolic_table(inv, &mut r),
    };
    match tag {
        Some(t) => {
            if inv.case == UmbilicCase::Hyperbolic {
                let f = inv.flipped();
                r.set("a2_plus_b1_flipped", f.a2 + f.b1);
                let mut scratch = SingularityReport::new();
                if let Some(alt) = hyperbolic_table(&f, &mut scratch) {
                    if alt != t {
                        r.alternate_tag = Some(alt);
                    }
                }
            }
            r.finish(t)
        }
        None => {
            let reason = r.reason.take().unwrap_or_default();
            r.degenerate(reason)
        }
    }
}

/// Full umbilic classification of a Pick normal form at its base point.
pub fn classify_umbilic(s: &SurfaceJet) -> Result<SingularityReport> {
    let (case, _) = pick_case(s)?;
    let test = umbilic_test(s, 0.0, 0.0, 1e-12)?;
    let want = match case {
        UmbilicCase::Elliptic => UmbilicTest::EllipticUmbilic,
        UmbilicCase::Hyperbolic => UmbilicTest::HyperbolicUmbilic,
    };
    if test != want {
        return Err(Error::DegenerateUmbilic("base point is not an umbilic".into()));
    }
    let inv = umbilic_linear_coeffs(s, case)?;
    let mut r = umbilic_report(&inv);
    let numeric = umbilic_invariants_from_bde(&curvature_bde(s), case);
    for (k, v) in [("a1_numeric", numeric.a1), ("b1_numeric", numeric.b1), ("a2_numeric", numeric.a2), ("b2_numeric", numeric.b2)] {
        r.set(k, v);
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Folded double-direction points

/// Invariants of a Buchin normal form with `q31 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldedInvariants {
    pub transversality: f64,
    pub transversality_scale: f64,
    pub nondegeneracy: f64,
    pub nondegeneracy_scale: f64,
    pub delta_lambda: f64,
    pub delta_lambda_scale: f64,
    pub lambda_product: f64,
    pub lambda_product_scale: f64,
    /// `q03 q40 + 4 q13 q30 - 2 q32`.
    pub trace: f64,
}

impl FoldedInvariants {
    pub fn from_params(p: &Params) -> Self {
        let q = |i, j| p.q(i, j);
        let (q03, q13, q22, q30, q32, q40, q41, q51) = (q(0, 3), q(1, 3), q(2, 2), q(3, 0), q(3, 2), q(4, 0), q(4, 1), q(5, 1));
        let tt = [2.0 * q03 * q30 * q30, -7.0 * q22 * q30, 2.0 * q41];
        let f1 = [18.0 * q13 * q30 * q30, 13.0 * q03 * q40 * q30, -22.0 * q32 * q30, -24.0 * q22 * q40, 4.0 * q51];
        let f2 = [q03 * q40, 4.0 * q13 * q30, -2.0 * q32];
        let dl = [
            q03 * q03 * q40 * q40,
            112.0 * q03 * q13 * q30 * q40,
            160.0 * q13 * q13 * q30 * q30,
            -4.0 * q03 * q32 * q40,
            -192.0 * q13 * q22 * q40,
            -192.0 * q13 * q30 * q32,
            32.0 * q13 * q51,
            4.0 * q32 * q32,
        ];
        let lp = [13.0 * q03 * q30 * q40, 18.0 * q13 * q30 * q30, -24.0 * q22 * q40, -22.0 * q30 * q32, 4.0 * q51];
        let s1: f64 = f1.iter().sum();
        let s2: f64 = f2.iter().sum();
        Self {
            transversality: q13 * tt.iter().sum::<f64>(),
            transversality_scale: q13.abs() * abs_sum(&tt),
            nondegeneracy: s1 * s2,
            nondegeneracy_scale: abs_sum(&f1) * abs_sum(&f2),
            delta_lambda: dl.iter().sum(),
            delta_lambda_scale: abs_sum(&dl),
            lambda_product: -512.0 * q13 * lp.iter().sum::<f64>(),
            lambda_product_scale: 512.0 * q13.abs() * abs_sum(&lp),
            trace: s2,
        }
    }

    /// Closed-form eigenvalues of the lifted field at the origin, in the
    /// normalization of [`curvature_bde`], as `(re, im)` pairs.
    pub fn eigenvalues(&self) -> [(f64, f64); 2] {
        let t = self.trace / 8.0;
        if self.delta_lambda >= 0.0 {
            let r = self.delta_lambda.sqrt() / 8.0;
            [(t - r, 0.0), (t + r, 0.0)]
        } else {
            let r = (-self.delta_lambda).sqrt() / 8.0;
            [(t, -r), (t, r)]
        }
    }
}

fn buchin_params(s: &SurfaceJet) -> Result<Params> {
    if s.kind == SurfaceKind::Buchin {
        Ok(s.params.clone())
    } else {
        s.as_normal_form(SurfaceKind::Buchin, CHART_TOL)
    }
}

/// Folded-singularity type of a Buchin normal form at its base point.
pub fn classify_folded(s: &SurfaceJet) -> Result<SingularityReport> {
    let p = buchin_params(s)?;
    let q31 = p.q(3, 1);
    if q31 != 0.0 {
        return Err(Error::NotADiscriminantPoint { q31 });
    }
    let q13 = p.q(1, 3);
    let mut r = SingularityReport::new();
    for (name, (i, j)) in [("q13", (1, 3)), ("q30", (3, 0)), ("q03", (0, 3)), ("q22", (2, 2)), ("q41", (4, 1)), ("q51", (5, 1))] {
        r.set(name, p.q(i, j));
    }
    let double = r.check("q13", q13, q13.abs().max(1.0));
    if !double {
        return Ok(r.degenerate("q13 = 0: the double direction is not isolated"));
    }
    let inv = FoldedInvariants::from_params(&p);
    r.set("double_eigenvalue", -0.5 * (p.q(2, 2) - 0.5 * p.q(3, 0) * p.q(0, 3)));
    r.set("transversality", inv.transversality);
    if r.check("transversality", inv.transversality, inv.transversality_scale) {
        return Ok(r.finish(Tag::FoldedCusp));
    }
    r.set("nondegeneracy", inv.nondegeneracy);
    r.set("delta_lambda", inv.delta_lambda);
    r.set("lambda_product", inv.lambda_product);
    if !r.check("nondegeneracy", inv.nondegeneracy, inv.nondegeneracy_scale) {
        return Ok(r.degenerate("discriminant contact with the asymptotic branch is degenerate"));
    }
    let dl_ok = r.check("delta_lambda", inv.delta_lambda, inv.delta_lambda_scale);
    let lp_ok = r.check("lambda_product", inv.lambda_product, inv.lambda_product_scale);
    let closed = inv.eigenvalues();
    let bde = curvature_bde(s);
    let numeric = LieCartanField::new(&bde).linearization_eigenvalues([0.0, 0.0, 0.0]);
    for (i, (c, n)) in closed.iter().zip(&numeric).enumerate() {
        r.set(&format!("lambda{}_re", i + 1), c.0);
        r.set(&format!("lambda{}_im", i + 1), c.1);
        r.set(&format!("lambda{}_re_numeric", i + 1), n.0);
        r.set(&format!("lambda{}_im_numeric", i + 1), n.1);
    }
    let mag = closed.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max).max(1e-300);
    let agree = closed.iter().zip(&numeric).all(|(c, n)| (c.0 - n.0).hypot(c.1 - n.1) <= 1e-5 * mag);
    r.genericity.insert("lie_cartan_agrees".into(), agree);
    if !dl_ok {
        return Ok(r.degenerate("eigenvalue discriminant vanishes"));
    }
    if inv.delta_lambda < 0.0 {
        return Ok(r.finish(Tag::FoldedFocus));
    }
    if !lp_ok {
        return Ok(r.degenerate("zero eigenvalue on the lift"));
    }
    Ok(r.finish(if inv.lambda_product > 0.0 { Tag::FoldedNode } else { Tag::FoldedSaddle }))
}

// ---------------------------------------------------------------------------
// Parabolic points and Gauss cusps

/// Gauss-cusp invariants of the parabolic normal form with `q30 = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussCuspInvariants {
    pub k: f64,
    pub q21: f64,
    pub q40: f64,
    /// `3 q21² - k q40`.
    pub cuspcheck: f64,
    /// `k q40 - 4 q21²`.
    pub s: f64,
    /// `9 q21² - 4 k q40`.
    pub a3check_linear: f64,
    /// `k⁶ q21⁴ (k q40 - 4 q21²)(k q40 - 3 q21²)⁴`.
    pub a3check: f64,
    pub b01: f64,
    /// `b20` (A3⁻) or `b̄20` (A3⁺) from `b01`.
    pub b20: Option<f64>,
    pub p11: f64,
    pub p12: f64,
    pub p22: f64,
    /// Discriminant branches `v = α u²` (A3⁻ only).
    pub alpha: Option<[f64; 2]>,
    /// `det Hess` of the principal part of the discriminant.
    pub hess_p: f64,
    /// `b20` from the closed-form coordinate-change coefficients, up to sign.
    pub b20_appendix: Option<f64>,
}

/// Closed-form Gauss-cusp invariants.
pub fn gauss_cusp_invariants(k: f64, q21: f64, q40: f64) -> GaussCuspInvariants {
    let cuspcheck = 3.0 * q21 * q21 - k * q40;
    let s = k * q40 - 4.0 * q21 * q21;
    let lin = 9.0 * q21 * q21 - 4.0 * k * q40;
    let a3check = k.powi(6) * q21.powi(4) * s * (k * q40 - 3.0 * q21 * q21).powi(4);
    let b01 = -(1.0 / 14.0) * lin / cuspcheck;
    let b20 = if s > 0.0 { b20bar_a3plus(b01).ok() } else { b20_a3minus(b01).ok() };
    let p22 = k.powi(4) * q21 * q21 * (4.0 * k * q40 - 9.0 * q21 * q21).powi(2);
    let p12 = -k.powi(3)
        * q21
        * (40.0 * k.powi(3) * q40.powi(3) - 554.0 * k * k * q21 * q21 * q40 * q40 + 2211.0 * k * q21.powi(4) * q40
            - 2736.0 * q21.powi(6));
    let p11 = 0.25
        * k
        * k
        * (100.0 * k.powi(4) * q40.powi(4) - 948.0 * k.powi(3) * q21 * q21 * q40.powi(3)
            + 3513.0 * k * k * q21.powi(4) * q40 * q40
            - 6240.0 * k * q21.powi(6) * q40
            + 4608.0 * q21.powi(8));
    let disc = p12 * p12 - 4.0 * p11 * p22;
    let alpha = (s < 0.0 && disc >= 0.0 && p22 != 0.0).then(|| {
        let r = disc.sqrt();
        let mut a = [(-p12 - r) / (2.0 * p22), (-p12 + r) / (2.0 * p22)];
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        a
    });
    let hess_p = 256.0 * (4.0 * p11 * p22 - p12 * p12);
    let beta10 = (4.0 * q21 * q21 - k * q40).abs()
        / (21952.0 * k.powi(10) * q21.powi(4) * cuspcheck.powi(2) * lin.powi(2));
    let b20_appendix = (beta10.is_finite() && beta10 > 0.0).then(|| {
        let beta2 = beta10.powf(0.1);
        -(1.0 / 10976.0) * (411.0 * q21.powi(4) - 195.0 * q21 * q21 * k * q40 + 20.0 * k * k * q40 * q40)
            / (beta2.powi(5) * k.powi(5) * q21.powi(3) * cuspcheck.powi(2) * lin)
    });
    GaussCuspInvariants {
        k,
        q21,
        q40,
        cuspcheck,
        s,
        a3check_linear: lin,
        a3check,
        b01,
        b20,
        p11,
        p12,
        p22,
        alpha,
        hess_p,
        b20_appendix,
    }
}

/// `(P11, P12, P22)` read off the weighted principal part of the numeric
/// discriminant, in the normalization of the closed-form coefficients.
pub fn numeric_principal_part(s: &SurfaceJet) -> [f64; 3] {
    let [a, b, c] = curvature_bde_jet(s, 4);
    let d = &(&b * &b) - &(&(&a * &c) * 4.0);
    [256.0 * d.coeff(4, 0), 256.0 * d.coeff(2, 1), 256.0 * d.coeff(0, 2)]
}

/// Walls of the Gauss-cusp intervals in `b01`.
pub fn gauss_cusp_walls() -> [f64; 7] {
    let r21 = 21f64.sqrt();
    [-(5.0 + r21) / 4.0, -1.0, -0.5, -2.0 / 7.0, (r21 - 5.0) / 4.0, 0.0, 0.25]
}

fn parabolic_params(s: &SurfaceJet) -> Result<Params> {
    if s.kind == SurfaceKind::Parabolic {
        Ok(s.params.clone())
    } else {
        s.as_normal_form(SurfaceKind::Parabolic, CHART_TOL)
    }
}

/// Parabolic-point type of the parabolic normal form at its base point.
pub fn classify_parabolic(s: &SurfaceJet) -> Result<SingularityReport> {
    let p = parabolic_params(s)?;
    let k = p.k;
    if k == 0.0 {
        return Err(Error::InvalidForm("parabolic form requires k != 0".into()));
    }
    let (q30, q21, q40) = (p.q(3, 0), p.q(2, 1), p.q(4, 0));
    let mut r = SingularityReport::new();
    r.set("k", k);
    r.set("q30", q30);
    r.set("q21", q21);
    r.set("q40", q40);
    if r.check("q30", q30, q30.abs().max(1e-3 * k.abs().max(1.0))) {
        r.genericity.insert("parabolic_curve_is_leaf".into(), true);
        return Ok(r.finish(Tag::OrdinaryParabolic));
    }
    let inv = gauss_cusp_invariants(k, q21, q40);
    r.set("cuspcheck", inv.cuspcheck);
    r.set("s", inv.s);
    r.set("a3check_linear", inv.a3check_linear);
    r.set("a3check", inv.a3check);
    let sq = q21 * q21;
    if !r.check("cuspcheck", inv.cuspcheck, 3.0 * sq + (k * q40).abs()) {
        return Ok(r.degenerate("k q40 - 3 q21^2 = 0: more degenerate than a Gauss cusp"));
    }
    let corank = r.check("q21", q21, q21.abs().max(1e-3 * k.abs().max(1.0)))
        & r.check("a3check_linear", inv.a3check_linear, 9.0 * sq + 4.0 * (k * q40).abs());
    if !corank {
        return Ok(r.degenerate("k q21 (4 k q40 - 9 q21^2) = 0: corank 2 discriminant"));
    }
    if !r.check("s", inv.s, 4.0 * sq + (k * q40).abs()) {
        return Ok(r.degenerate("k q40 - 4 q21^2 = 0: A_k discriminant with k > 3"));
    }
    r.genericity.insert("a3check".into(), true);
    r.set("b01", inv.b01);
    if let Some(b) = inv.b20 {
        r.set(if inv.s > 0.0 { "b20bar" } else { "b20" }, b);
    }
    r.set("P11", inv.p11);
    r.set("P12", inv.p12);
    r.set("P22", inv.p22);
    r.set("hessP", inv.hess_p);
    if let Some(a) = inv.alpha {
        r.set("alpha1", a[0]);
        r.set("alpha2", a[1]);
    }
    if let Some(b) = inv.b20_appendix {
        r.set("b20_appendix", b);
    }
    let numeric = numeric_principal_part(s);
    for (name, v) in ["P11_numeric", "P12_numeric", "P22_numeric"].iter().zip(numeric) {
        r.set(name, v);
    }
    let pscale = inv.p11.abs().max(inv.p12.abs()).max(inv.p22.abs());
    let agree = [inv.p11, inv.p12, inv.p22].iter().zip(numeric).all(|(c, n)| (c - n).abs() <= 1e-6 * pscale);
    r.genericity.insert("principal_part_agrees".into(), agree);

    let walls = gauss_cusp_walls();
    let b = inv.b01;
    let dist = walls.iter().map(|w| (b - w).abs()).fold(f64::INFINITY, f64::min);
    r.margins.insert("b01_wall_distance".into(), dist);
    let off = dist > WALL_TOL;
    r.genericity.insert("b01_off_walls".into(), off);
    if inv.s > 0.0 {
        return Ok(r.finish(Tag::GaussCuspA3Plus));
    }
    if !off {
        return Ok(r.degenerate(format!("b01 = {b} on an interval boundary")));
    }
    let [w1, w2, w3, w4, w5, _, _] = walls;
    let tag = if b < w1 {
        Tag::GaussCuspR1
    } else if b < w2 {
        Tag::GaussCuspR2
    } else if b < w3 || (b > w4 && b < w5) {
        Tag::GaussCuspR3
    } else if b > w5 && b < 0.0 {
        Tag::GaussCuspR4
    } else if b > 0.0 {
        Tag::GaussCuspR5
    } else {
        return Ok(r.degenerate(format!("b01 = {b} outside the A3- intervals")));
    };
    Ok(r.finish(tag))
}

// ---------------------------------------------------------------------------
// Dispatch

/// Classifies the base point of a surface.
///
/// Normal-form kinds go to their classifier; raw Monge input is matched
/// against the normal forms first and otherwise reported as `Regular`, or
/// `Degenerate` with a diagnostic when the point is singular but not in an
/// adapted chart.
pub fn classify_surface(s: &SurfaceJet) -> SingularityReport {
    match classify_inner(s) {
        Ok(r) => r,
        Err(e) => SingularityReport::new().degenerate(e.to_string()),
    }
}

fn classify_inner(s: &SurfaceJet) -> Result<SingularityReport> {
    let bde = curvature_bde(s);
    if bde.is_identically_zero() && s.hessian_det(0.0, 0.0).abs() > 0.0 {
        let mut r = SingularityReport::new();
        r.genericity.insert("equation_identically_zero".into(), true);
        return Ok(r.finish(Tag::AffineSphereFlat));
    }
    match s.kind {
        SurfaceKind::PickElliptic | SurfaceKind::PickHyperbolic => pick_dispatch(s, &bde),
        SurfaceKind::Buchin => buchin_dispatch(s, &bde),
        SurfaceKind::Parabolic => classify_parabolic(s),
        SurfaceKind::Monge => monge_dispatch(s, &bde),
    }
}

fn regular(bde: &CurvatureBde) -> SingularityReport {
    let mut r = SingularityReport::new();
    let c = bde.coeffs(0.0, 0.0);
    r.set("A", c[0]);
    r.set("B", c[1]);
    r.set("C", c[2]);
    r.set("delta", discriminant(bde, 0.0, 0.0));
    r.finish(Tag::Regular)
}

fn pick_dispatch(s: &SurfaceJet, bde: &CurvatureBde) -> Result<SingularityReport> {
    match umbilic_test(s, 0.0, 0.0, 1e-12)? {
        UmbilicTest::NotUmbilic => Ok(regular(bde)),
        _ => classify_umbilic(s),
    }
}

fn buchin_dispatch(s: &SurfaceJet, bde: &CurvatureBde) -> Result<SingularityReport> {
    let p = buchin_params(s)?;
    if p.q(3, 1) != 0.0 {
        return Ok(regular(bde));
    }
    classify_folded(s)
}

fn monge_dispatch(s: &SurfaceJet, bde: &CurvatureBde) -> Result<SingularityReport> {
    let k = s.hessian_det(0.0, 0.0);
    let pv = s.partials(0.0, 0.0);
    let scale = 1.0 + pv.uu.abs() + pv.vv.abs();
    if k.abs() < crate::geometry::PARABOLIC_TOL * scale * scale {
        return match s.as_normal_form(SurfaceKind::Parabolic, CHART_TOL) {
            Ok(_) => classify_parabolic(s),
            Err(e) => Ok(SingularityReport::new().degenerate(format!("parabolic base point not in the adapted chart; {e}"))),
        };
    }
    for kind in [SurfaceKind::PickElliptic, SurfaceKind::PickHyperbolic] {
        if s.as_normal_form(kind, CHART_TOL).is_ok() {
            return pick_dispatch(s, bde);
        }
    }
    if s.as_normal_form(SurfaceKind::Buchin, CHART_TOL).is_ok() {
        return buchin_dispatch(s, bde);
    }
    let c = bde.coeffs(0.0, 0.0);
    let cs = c[0].abs().max(c[1].abs()).max(c[2].abs());
    let jets = bde.jet_at(0.0, 0.0, 1);
    let lin = jets.iter().map(|j| j.coeff(1, 0).abs().max(j.coeff(0, 1).abs())).fold(0.0, f64::max);
    if cs <= 1e-12 * lin.max(1.0) {
        let which = if k > 0.0 { SurfaceKind::PickElliptic } else { SurfaceKind::PickHyperbolic };
        let diag = s.as_normal_form(which, CHART_TOL).err().map(|e| e.to_string()).unwrap_or_default();
        return Ok(SingularityReport::new().degenerate(format!("umbilic base point; reduction to a Pick normal form is not performed: {diag}")));
    }
    let d = discriminant(bde, 0.0, 0.0);
    if d.abs() <= 1e-12 * (c[1] * c[1] + 4.0 * (c[0] * c[2]).abs()) {
        let diag = s.as_normal_form(SurfaceKind::Buchin, CHART_TOL).err().map(|e| e.to_string()).unwrap_or_default();
        return Ok(SingularityReport::new()
            .degenerate(format!("double-direction base point; reduction to the Buchin normal form is not performed: {diag}")));
    }
    Ok(regular(bde))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::normal_form_surface;

    fn pick(kind: SurfaceKind, q50: f64) -> SurfaceJet {
        normal_form_surface(kind, &Params::new().with_sigma(1.0).with_q(5, 0, q50), 6).unwrap()
    }

    #[test]
    fn sigma_one_linear_coeffs() {
        let e = umbilic_linear_coeffs(&pick(SurfaceKind::PickElliptic, 0.0), UmbilicCase::Elliptic).unwrap();
        assert_eq!((e.a1, e.b1, e.a2, e.b2, e.j), (0.0, 1.0, 1.0, 0.0, 1.0));
        let h = umbilic_linear_coeffs(&pick(SurfaceKind::PickHyperbolic, 0.0), UmbilicCase::Hyperbolic).unwrap();
        assert_eq!((h.a1, h.b1, h.a2, h.b2, h.j), (0.0, -1.0, -1.0, 0.0, 1.0));
    }

    #[test]
    fn elliptic_battery() {
        for (q50, tag) in [(0.0, Tag::D3), (-16.0, Tag::D1), (-10.0, Tag::D2)] {
            assert_eq!(classify_surface(&pick(SurfaceKind::PickElliptic, q50)).tag(), tag, "q50={q50}");
        }
    }

    #[test]
    fn hyperbolic_battery() {
        for (q50, tag) in [(0.0, Tag::A2), (-10.0, Tag::A1), (-14.0, Tag::A5)] {
            assert_eq!(classify_surface(&pick(SurfaceKind::PickHyperbolic, q50)).tag(), tag, "q50={q50}");
        }
    }

    #[test]
    fn elliptic_round_trip() {
        for (a2, tag) in [(1.0, Tag::D1), (0.25, Tag::D2), (-1.0, Tag::D3)] {
            let bde = CurvatureBde::explicit(
                Jet2::from_terms(1, &[(0, 1, -1.0)]),
                Jet2::from_terms(1, &[(1, 0, 2.0 * a2)]),
                Jet2::from_terms(1, &[(0, 1, 1.0)]),
            );
            let inv = umbilic_invariants_from_bde(&bde, UmbilicCase::Elliptic);
            assert_eq!(classify_elliptic_umbilic(&inv).unwrap(), tag);
        }
    }

    #[test]
    fn hess_identity() {
        let e = UmbilicInvariants::from_linear(UmbilicCase::Elliptic, 0.3, -1.2, 0.7, 2.0);
        assert!((e.hess_delta_lin() - e.expected_hess()).abs() < 1e-12 * e.expected_hess().abs());
        let h = UmbilicInvariants::from_linear(UmbilicCase::Hyperbolic, 0.3, -1.2, 0.7, 2.0);
        assert!((h.hess_delta_lin() - h.expected_hess()).abs() < 1e-12 * h.expected_hess().abs());
    }

    fn buchin(q51: f64, q03: f64) -> SurfaceJet {
        let p = Params::new().with_q(1, 3, 1.0).with_q(3, 0, 1.0).with_q(0, 3, q03).with_q(5, 1, q51);
        normal_form_surface(SurfaceKind::Buchin, &p, 6).unwrap()
    }

    #[test]
    fn folded_battery() {
        let c = classify_folded(&buchin(0.0, 1.0)).unwrap();
        assert_eq!(c.tag(), Tag::FoldedCusp);
        assert_eq!(c.invariants["transversality"], 2.0);
        let s = classify_folded(&buchin(0.0, 0.0)).unwrap();
        assert_eq!(s.tag(), Tag::FoldedSaddle);
        assert_eq!(s.invariants["delta_lambda"], 160.0);
        assert_eq!(s.invariants["lambda_product"], -512.0 * 18.0);
        assert!(s.genericity["lie_cartan_agrees"], "{s:?}");
        assert_eq!(classify_folded(&buchin(-10.0, 0.0)).unwrap().tag(), Tag::FoldedFocus);
        let n = classify_folded(&buchin(-4.6, 0.0)).unwrap();
        assert_eq!(n.tag(), Tag::FoldedNode);
        assert!((n.invariants["delta_lambda"] - 12.8).abs() < 1e-12);
        assert!((n.invariants["lambda_product"] - 204.8).abs() < 1e-9);
    }

    #[test]
    fn folded_requires_q31_zero() {
        let p = Params::new().with_q(1, 3, 1.0).with_q(3, 1, 0.5);
        let s = normal_form_surface(SurfaceKind::Buchin, &p, 6).unwrap();
        assert!(matches!(classify_folded(&s), Err(Error::NotADiscriminantPoint { .. })));
    }

    fn parab(q30: f64, q21: f64, q40: f64) -> SurfaceJet {
        let p = Params::new().with_k(1.0).with_q(3, 0, q30).with_q(2, 1, q21).with_q(4, 0, q40);
        normal_form_surface(SurfaceKind::Parabolic, &p, 6).unwrap()
    }

    #[test]
    fn parabolic_battery() {
        assert_eq!(classify_surface(&parab(1.0, 0.0, 0.0)).tag(), Tag::OrdinaryParabolic);
        let r3 = classify_surface(&parab(0.0, 1.0, 0.0));
        assert_eq!(r3.tag(), Tag::GaussCuspR3);
        assert!((r3.invariants["b01"] + 3.0 / 14.0).abs() < 1e-15);
        assert_eq!(r3.invariants["P22"], 81.0);
        assert_eq!(r3.invariants["hessP"], -1_820_786_688.0);
        assert!(r3.genericity["principal_part_agrees"], "{r3:?}");
        let a3 = classify_surface(&parab(0.0, 1.0, 5.0));
        assert_eq!(a3.tag(), Tag::GaussCuspA3Plus);
        assert!((a3.invariants["b01"] + 11.0 / 28.0).abs() < 1e-15);
        assert!(classify_surface(&parab(0.0, 1.0, 3.0)).is_degenerate());
    }

    #[test]
    fn appendix_b20_matches_up_to_sign() {
        for (q21, q40) in [(1.0, 0.0), (1.0, 5.0), (0.7, -2.0), (1.3, 1.0)] {
            let inv = gauss_cusp_invariants(1.0, q21, q40);
            let (Some(a), Some(b)) = (inv.b20_appendix, inv.b20) else { panic!() };
            assert!((a.abs() - b.abs()).abs() < 1e-9 * b.abs().max(1.0), "{q21} {q40}: {a} vs {b}");
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = classify_surface(&pick(SurfaceKind::PickElliptic, 0.0));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with("{\"tag\":\"D3\""));
        let back: SingularityReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
