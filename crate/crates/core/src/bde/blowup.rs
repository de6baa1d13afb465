use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which discriminant singularity the Gauss-cusp normal form carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupSign {
    /// `-u³ du² + 2(b01 v + b̄20 u²) du dv + u dv² = 0`.
    A3Plus,
    /// `u³ du² + 2(b01 v + b20 u²) du dv + u dv² = 0`.
    A3Minus,
}

impl BlowupSign {
    /// Coefficient of `u³ du²` in the planar normal form.
    pub fn cubic_sign(self) -> f64 {
        match self {
            BlowupSign::A3Plus => -1.0,
            BlowupSign::A3Minus => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlowupSign::A3Plus => "a3plus",
            BlowupSign::A3Minus => "a3minus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a3plus" | "a3+" => Some(BlowupSign::A3Plus),
            "a3minus" | "a3-" => Some(BlowupSign::A3Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleKind {
    Saddle,
    Node,
}

/// Zero of `A(t)` on the exceptional circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularAngle {
    pub t: f64,
    /// `dA/dt` at `t`.
    pub a_t: f64,
    /// `-2 B(t)`.
    pub minus_2b: f64,
    pub kind: AngleKind,
    /// Index into `invariant_parabolas` of `P = sin t / cos² t`, if `cos t != 0`.
    pub parabola: Option<usize>,
}

/// Weighted polar blow-up `(u, v) = (r cos t, r² sin t)` of the normal form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupPortrait {
    pub b01: f64,
    pub b20: f64,
    pub sign: BlowupSign,
    pub singular_angles: Vec<SingularAngle>,
    /// Real roots of `4(b01+1)P² + 4 b20 P ∓ 1 = 0`, ascending.
    pub invariant_parabolas: Vec<f64>,
}

const SCAN: usize = 4096;
const GENERIC_TOL: f64 = 1e-8;

#[derive(Clone, Copy)]
struct Dual(f64, f64);

impl Dual {
    fn mul(self, o: Dual) -> Dual {
        Dual(self.0 * o.0, self.0 * o.1 + self.1 * o.0)
    }
    fn add(self, o: Dual) -> Dual {
        Dual(self.0 + o.0, self.1 + o.1)
    }
    fn scale(self, k: f64) -> Dual {
        Dual(k * self.0, k * self.1)
    }
    fn c(k: f64) -> Dual {
        Dual(k, 0.0)
    }
}

fn coeffs_dual(sign: BlowupSign, b01: f64, b20: f64, t: f64) -> [Dual; 3] {
    let co = Dual(t.cos(), -t.sin());
    let si = Dual(t.sin(), t.cos());
    let c2 = co.mul(co);
    let c4 = c2.mul(c2);
    let s2 = si.mul(si);
    match sign {
        BlowupSign::A3Plus => {
            let a = co.scale(-1.0).mul(c4.add(c2.mul(si).scale(-4.0 * b20)).add(s2.scale(-4.0 * (b01 + 1.0))));
            let b = c2
                .mul(si)
                .mul(c2.add(Dual::c(2.0)))
                .add(c2.scale(b20).add(si.scale(b01)).mul(c2.scale(3.0).add(Dual::c(-2.0))));
            let c = co.mul(c4.add(c2.mul(si).scale(-2.0 * b20)).add(s2.scale(-2.0 * b01)));
            [a, b, c]
        }
        BlowupSign::A3Minus => {
            let a = co.mul(c4.add(c2.mul(si).scale(4.0 * b20)).add(s2.scale(4.0 * (b01 + 1.0))));
            let b = c2
                .scale(3.0)
                .add(Dual::c(-2.0))
                .mul(si.scale(b01).add(c2.scale(b20)))
                .add(c2.mul(si).mul(c2.add(Dual::c(-2.0))).scale(-1.0));
            let c = co
                .mul(c2.mul(c2.add(Dual::c(-2.0))).add(c2.mul(si).scale(2.0 * b20)).add(s2.scale(2.0 * b01)))
                .scale(-1.0);
            [a, b, c]
        }
    }
}

impl BlowupPortrait {
    /// `(A(t), B(t), C(t))` of `A dr² + 2 r B dr dt + r² C dt² = 0`.
    pub fn coefficients(&self, t: f64) -> [f64; 3] {
        coeffs_dual(self.sign, self.b01, self.b20, t).map(|d| d.0)
    }

    pub fn a(&self, t: f64) -> f64 {
        self.coefficients(t)[0]
    }

    pub fn a_t(&self, t: f64) -> f64 {
        coeffs_dual(self.sign, self.b01, self.b20, t)[0].1
    }

    pub fn saddles(&self) -> usize {
        self.singular_angles.iter().filter(|a| a.kind == AngleKind::Saddle).count()
    }

    pub fn nodes(&self) -> usize {
        self.singular_angles.iter().filter(|a| a.kind == AngleKind::Node).count()
    }
}

/// Real roots of `4(b01+1)P² + 4 b20 P + e = 0` with `e = -1` for A3⁺ and
/// `e = +1` for A3⁻.
pub fn invariant_parabolas(b01: f64, b20: f64, sign: BlowupSign) -> Vec<f64> {
    let e = sign.cubic_sign();
    let a = 4.0 * (b01 + 1.0);
    let b = 4.0 * b20;
    let mut out = Vec::new();
    if a == 0.0 {
        if b != 0.0 {
            out.push(-e / b);
        }
        return out;
    }
    let disc = b * b - 4.0 * a * e;
    if disc < 0.0 {
        return out;
    }
    let r = disc.sqrt();
    let q = -0.5 * (b + b.signum() * r);
    let (x1, x2) = if q != 0.0 { (q / a, e / q) } else { (0.0, 0.0) };
    out.push(x1);
    out.push(x2);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Singular angles of the blown-up equation and their linear type.
pub fn blowup_portrait(b01: f64, b20: f64, sign: BlowupSign) -> Result<BlowupPortrait> {
    if !b01.is_finite() || !b20.is_finite() {
        return Err(Error::InvalidForm("b01 and b20 must be finite".into()));
    }
    let mut portrait = BlowupPortrait { b01, b20, sign, singular_angles: Vec::new(), invariant_parabolas: invariant_parabolas(b01, b20, sign) };
    let a = |t: f64| coeffs_dual(sign, b01, b20, t)[0].0;
    let grid: Vec<f64> = (0..=SCAN).map(|k| 2.0 * PI * (k as f64 + 0.5) / SCAN as f64).collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (fa, fb) = (a(w[0]), a(w[1]));
        if fa == 0.0 {
            roots.push(w[0]);
        } else if fa.signum() != fb.signum() {
            roots.push(bisect(&a, w[0], w[1]));
        }
    }
    for r in roots.iter_mut() {
        *r = r.rem_euclid(2.0 * PI);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // Two vertical angles plus two per parabola (one sin t per P, two t per sin t).
    let expected = 2 + 2 * portrait.invariant_parabolas.iter().filter(|p| p.is_finite()).count();
    if roots.len() != expected {
        return Err(Error::DegeneratePortrait(format!(
            "found {} zeros of A(t), expected {expected} from the invariant parabolas",
            roots.len()
        )));
    }
    for t in roots {
        let [ad, bd, _] = coeffs_dual(sign, b01, b20, t);
        let a_t = ad.1;
        let minus_2b = -2.0 * bd.0;
        if a_t.abs() <= GENERIC_TOL || minus_2b.abs() <= GENERIC_TOL {
            return Err(Error::DegeneratePortrait(format!("non-hyperbolic angle t = {t}: A_t = {a_t:e}, -2B = {minus_2b:e}")));
        }
        let kind = if a_t * minus_2b < 0.0 { AngleKind::Saddle } else { AngleKind::Node };
        let c2 = t.cos().powi(2);
        let parabola = if c2 > 1e-12 {
            let p = t.sin() / c2;
            portrait
                .invariant_parabolas
                .iter()
                .enumerate()
                .min_by(|x, y| (x.1 - p).abs().partial_cmp(&(y.1 - p).abs()).unwrap())
                .map(|(i, _)| i)
        } else {
            None
        };
        portrait.singular_angles.push(SingularAngle { t, a_t, minus_2b, kind, parabola });
    }
    Ok(portrait)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `b20` of the A3⁻ normal form as a function of `b01`.
pub fn b20_a3minus(b01: f64) -> Result<f64> {
    let d = (2.0 * b01 + 1.0) * (7.0 * b01 + 2.0);
    if !(d > 0.0) {
        return Err(Error::InvalidForm(format!("b01 = {b01} outside the A3- range (-inf, -1/2) U (-2/7, inf)")));
    }
    Ok(-(2f64.sqrt() / 4.0) * (4.0 * b01 * b01 + 13.0 * b01 + 4.0) / d.sqrt())
}

/// `b̄20` of the A3⁺ normal form as a function of `b01`.
pub fn b20bar_a3plus(b01: f64) -> Result<f64> {
    let d = -(2.0 * b01 + 1.0) * (7.0 * b01 + 2.0);
    if !(d > 0.0) {
        return Err(Error::InvalidForm(format!("b01 = {b01} outside the A3+ range (-1/2, -2/7)")));
    }
    Ok(-(2f64.sqrt() / 4.0) * (4.0 * b01 * b01 + 13.0 * b01 + 4.0) / d.sqrt())
}

/// Closed-form eigenvalue products `(p1, p2)` at an A3⁻ singular angle,
/// for the first and second invariant parabola.
pub fn a3minus_eigen_products(b01: f64, t: f64) -> (f64, f64) {
    let c2 = t.cos().powi(2);
    let b = b01;
    let p1 = 1.5 * (4.0 * b - 1.0) * (2.0 * c2 * b + c2 + 7.0 * b + 2.0).powi(2) * b * b
        / ((2.0 * b + 1.0) * (7.0 * b + 2.0).powi(3));
    let p2 = -(1.0 / 32.0)
        * (4.0 * b - 1.0)
        * (4.0 * b * b + 10.0 * b + 1.0)
        * (7.0 * c2 * b + 8.0 * b.powi(3) + 2.0 * c2 + 20.0 * b * b + 16.0 * b + 4.0).powi(2)
        * b
        * b
        / ((7.0 * b + 2.0) * (b + 1.0).powi(5) * (2.0 * b + 1.0).powi(3));
    (p1, p2)
}

/// The two A3⁻ parabola slopes in the labelling used by
/// [`a3minus_eigen_products`]: `P = (-b20 ± √(b20² - b01 - 1)) / (2(b01+1))`,
/// `+` first.
pub fn a3minus_labelled_parabolas(b01: f64, b20: f64) -> Option<[f64; 2]> {
    let disc = b20 * b20 - b01 - 1.0;
    if disc < 0.0 || b01 == -1.0 {
        return None;
    }
    let r = disc.sqrt();
    Some([(-b20 + r) / (2.0 * (b01 + 1.0)), (-b20 - r) / (2.0 * (b01 + 1.0))])
}
