use super::CurvatureBde;

/// Affine chart of the projectivized tangent bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LieCartanChart {
    /// `p = dv/du`, `F = A + B p + C p²`.
    Slope,
    /// `p = du/dv`, `G = A p² + B p + C`.
    InverseSlope,
}

/// Lie–Cartan lift of a BDE to the surface `F(u, v, p) = 0`.
#[derive(Clone, Copy, Debug)]
pub struct LieCartanField<'a> {
    pub bde: &'a CurvatureBde,
    pub chart: LieCartanChart,
}

/// Finite-difference step of the linearization.
pub const LINEARIZATION_STEP: f64 = 1e-6;

impl<'a> LieCartanField<'a> {
    pub fn new(bde: &'a CurvatureBde) -> Self {
        Self { bde, chart: LieCartanChart::Slope }
    }

    pub fn in_chart(bde: &'a CurvatureBde, chart: LieCartanChart) -> Self {
        Self { bde, chart }
    }

    /// `F(u, v, p)`.
    pub fn f(&self, u: f64, v: f64, p: f64) -> f64 {
        let [a, b, c] = self.bde.coeffs(u, v);
        match self.chart {
            LieCartanChart::Slope => a + b * p + c * p * p,
            LieCartanChart::InverseSlope => a * p * p + b * p + c,
        }
    }

    /// `(F, F_u, F_v, F_p)`.
    pub fn f_with_gradient(&self, u: f64, v: f64, p: f64) -> [f64; 4] {
        let g = self.bde.coeffs_with_gradient(u, v);
        let (w0, w1, w2) = match self.chart {
            LieCartanChart::Slope => (1.0, p, p * p),
            LieCartanChart::InverseSlope => (p * p, p, 1.0),
        };
        let comb = |k: usize| w0 * g[0][k] + w1 * g[1][k] + w2 * g[2][k];
        let fp = match self.chart {
            LieCartanChart::Slope => g[1][0] + 2.0 * g[2][0] * p,
            LieCartanChart::InverseSlope => 2.0 * g[0][0] * p + g[1][0],
        };
        [comb(0), comb(1), comb(2), fp]
    }

    /// The vector field `(F_p, p F_p, -(F_u + p F_v))` (slope chart) or
    /// `(p G_p, G_p, -(G_v + p G_u))` (inverse-slope chart).
    pub fn x(&self, u: f64, v: f64, p: f64) -> [f64; 3] {
        let [_, fu, fv, fp] = self.f_with_gradient(u, v, p);
        match self.chart {
            LieCartanChart::Slope => [fp, p * fp, -(fu + p * fv)],
            LieCartanChart::InverseSlope => [p * fp, fp, -(fv + p * fu)],
        }
    }

    /// Central-difference Jacobian of `X`.
    pub fn jacobian(&self, at: [f64; 3]) -> [[f64; 3]; 3] {
        let h = LINEARIZATION_STEP;
        let mut jac = [[0.0; 3]; 3];
        for k in 0..3 {
            let mut a = at;
            let mut b = at;
            a[k] += h;
            b[k] -= h;
            let xa = self.x(a[0], a[1], a[2]);
            let xb = self.x(b[0], b[1], b[2]);
            for i in 0..3 {
                jac[i][k] = (xa[i] - xb[i]) / (2.0 * h);
            }
        }
        jac
    }

    /// Eigenvalues of `DX` restricted to the tangent plane of `F = 0`
    /// at a singular point, as `(re, im)` pairs.
    ///
    /// `F` is a first integral of `X`, so at a zero of `X` the plane
    /// `∇F^⊥` is invariant and carries the two nontrivial eigenvalues.
    pub fn linearization_eigenvalues(&self, at: [f64; 3]) -> [(f64, f64); 2] {
        let j = self.jacobian(at);
        let [_, fu, fv, fp] = self.f_with_gradient(at[0], at[1], at[2]);
        let n = normalize([fu, fv, fp]);
        let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let t1 = normalize(sub(seed, scale(n, dot(seed, n))));
        let t2 = cross(n, t1);
        let apply = |t: [f64; 3]| [0, 1, 2].map(|i| j[i][0] * t[0] + j[i][1] * t[1] + j[i][2] * t[2]);
        let (jt1, jt2) = (apply(t1), apply(t2));
        let m = [[dot(t1, jt1), dot(t1, jt2)], [dot(t2, jt1), dot(t2, jt2)]];
        eig2(m)
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    scale(a, 1.0 / dot(a, a).sqrt())
}

/// Eigenvalues of a real 2×2 matrix, real ones in ascending order.
pub(crate) fn eig2(m: [[f64; 2]; 2]) -> [(f64, f64); 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let half = 0.5 * tr;
    let disc = half * half - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        // Avoid cancellation in the smaller root.
        let big = if half >= 0.0 { half + r } else { half - r };
        let small = if big != 0.0 { det / big } else { 0.0 };
        let (a, b) = if big <= small { (big, small) } else { (small, big) };
        [(a, 0.0), (b, 0.0)]
    } else {
        let im = (-disc).sqrt();
        [(half, -im), (half, im)]
    }
}
