//! Truncated bivariate Taylor series.
//!
//! A [`Jet2`] of order `n` stores the coefficients `c[i][j]` of
//! `Σ c_ij u^i v^j` for `i + j <= n`. Every operation returns the exact
//! Taylor expansion of the result truncated at the same order.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Differentiation / coordinate variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    U,
    V,
}

#[inline]
fn tri(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for t in 0..k {
        r = r * (n - t) as f64 / (t + 1) as f64;
    }
    r
}

/// Dense truncated bivariate power series.
#[derive(Clone, PartialEq)]
pub struct Jet2 {
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet2 {
    pub fn zero(order: usize) -> Self {
        Self { order, coeffs: vec![0.0; tri(order)] }
    }

    pub fn constant(order: usize, c: f64) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// The coordinate function `u` or `v` as a jet.
    pub fn var(order: usize, var: Var) -> Self {
        let mut j = Self::zero(order);
        if order >= 1 {
            match var {
                Var::U => j.coeffs[idx(1, 0)] = 1.0,
                Var::V => j.coeffs[idx(0, 1)] = 1.0,
            }
        }
        j
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut j = Self::zero(order);
        for d in 0..=order {
            for jj in 0..=d {
                j.coeffs[idx(d - jj, jj)] = f(d - jj, jj);
            }
        }
        j
    }

    /// Builds a jet from `(i, j, c)` monomials; terms above `order` are dropped.
    pub fn from_terms(order: usize, terms: &[(usize, usize, f64)]) -> Self {
        let mut j = Self::zero(order);
        for &(a, b, c) in terms {
            if a + b <= order {
                j.coeffs[idx(a, b)] += c;
            }
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `u^i v^j`; zero above the truncation order.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j <= self.order {
            self.coeffs[idx(i, j)]
        } else {
            0.0
        }
    }

    /// Sets the coefficient of `u^i v^j`. Panics if `i + j > order`.
    pub fn set_coeff(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= self.order, "monomial u^{i} v^{j} exceeds jet order {}", self.order);
        self.coeffs[idx(i, j)] = c;
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs[0]
    }

    /// Partial derivative `∂^{i+j} / ∂u^i ∂v^j` at the base point.
    pub fn derivative(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    /// Partial derivative `∂^{a+b} / ∂u^a ∂v^b` of the truncated polynomial at offset `(u, v)`.
    pub fn derivative_at(&self, a: usize, b: usize, u: f64, v: f64) -> f64 {
        let mut acc = 0.0;
        for (i, j, c) in self.terms() {
            if i < a || j < b || c == 0.0 {
                continue;
            }
            let fu = falling(i, a) * u.powi((i - a) as i32);
            let fv = falling(j, b) * v.powi((j - b) as i32);
            acc += c * fu * fv;
        }
        acc
    }

    /// Iterates `(i, j, c)` in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.order).flat_map(move |d| (0..=d).map(move |j| (d - j, j, self.coeffs[idx(d - j, j)])))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Evaluates the truncated polynomial at offset `(u, v)` from the base point.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        // Horner in u over polynomials in v.
        let n = self.order;
        let mut acc = 0.0;
        for i in (0..=n).rev() {
            let mut row = 0.0;
            for j in (0..=n - i).rev() {
                row = row * v + self.coeffs[idx(i, j)];
            }
            acc = acc * u + row;
        }
        acc
    }

    /// Drops or zero-pads terms to the requested order.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_fn(order, |i, j| self.coeff(i, j))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch { left: self.order, right: other.order });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = Self::zero(n);
        for (i1, j1, a) in self.terms() {
            if a == 0.0 {
                continue;
            }
            let rem = n - (i1 + j1);
            for d in 0..=rem {
                for j2 in 0..=d {
                    let i2 = d - j2;
                    out.coeffs[idx(i1 + i2, j1 + j2)] += a * other.coeffs[idx(i2, j2)];
                }
            }
        }
        Ok(out)
    }

    /// Real power `self^e`.
    ///
    /// Non-negative integer exponents are computed by repeated squaring and
    /// accept any constant term. Other exponents use the binomial series and
    /// need a nonzero (for negative integers) or positive (for fractional
    /// exponents) constant term.
    pub fn pow(&self, e: f64) -> Result<Self> {
        let a0 = self.constant_term();
        let is_int = e.fract() == 0.0 && e.abs() < 1e9;
        if is_int && e >= 0.0 {
            return Ok(self.powi_nonneg(e as u64));
        }
        if a0 == 0.0 {
            return Err(Error::SingularJet { exponent: e });
        }
        if !is_int && a0 < 0.0 {
            return Err(Error::NegativeBase { base: a0, exponent: e });
        }
        // a = a0 (1 + x), x without constant term.
        let mut x = self.scale(1.0 / a0);
        x.coeffs[0] = 0.0;
        let mut out = Self::constant(self.order, 1.0);
        let mut xk = Self::constant(self.order, 1.0);
        let mut c = 1.0;
        for k in 1..=self.order {
            c *= (e - (k as f64 - 1.0)) / k as f64;
            xk = &xk * &x;
            out = &out + &xk.scale(c);
        }
        Ok(out.scale(a0.powf(e)))
    }

    fn powi_nonneg(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.order, 1.0);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Result<Self> {
        self.pow(-1.0)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.recip()?)
    }

    /// Formal partial derivative; the result has order `order - 1`
    /// (order 0 stays order 0 with a zero value).
    pub fn partial(&self, var: Var) -> Self {
        if self.order == 0 {
            return Self::zero(0);
        }
        let n = self.order - 1;
        Self::from_fn(n, |i, j| match var {
            Var::U => (i + 1) as f64 * self.coeff(i + 1, j),
            Var::V => (j + 1) as f64 * self.coeff(i, j + 1),
        })
    }

    /// Partial derivative kept at the original order (top-degree terms become 0).
    pub fn partial_same_order(&self, var: Var) -> Self {
        self.partial(var).with_order(self.order)
    }

    /// Re-expands the truncated polynomial about the point `(du, dv)`.
    pub fn shift(&self, du: f64, dv: f64) -> Self {
        let n = self.order;
        let mut out = Self::zero(n);
        for (i, j, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            for a in 0..=i {
                let ca = c * binom(i, a) * du.powi((i - a) as i32);
                for b in 0..=j {
                    out.coeffs[idx(a, b)] += ca * binom(j, b) * dv.powi((j - b) as i32);
                }
            }
        }
        out
    }

    /// Composition `self(p(u,v), q(u,v))` where `p`, `q` have zero constant term.
    pub fn compose(&self, p: &Self, q: &Self) -> Result<Self> {
        self.check_order(p)?;
        self.check_order(q)?;
        let n = self.order;
        let mut ppow = vec![Self::constant(n, 1.0)];
        let mut qpow = vec![Self::constant(n, 1.0)];
        for k in 1..=n {
            ppow.push(&ppow[k - 1] * p);
            qpow.push(&qpow[k - 1] * q);
        }
        let mut out = Self::zero(n);
        for (i, j, c) in self.terms() {
            if c != 0.0 {
                out = &out + &(&ppow[i] * &qpow[j]).scale(c);
            }
        }
        Ok(out)
    }

    /// Homogeneous part of total degree `d`, as coefficients `[c_{d,0}, c_{d-1,1}, …, c_{0,d}]`.
    pub fn homogeneous(&self, d: usize) -> Vec<f64> {
        (0..=d).map(|j| self.coeff(d - j, j)).collect()
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |a, t| a * (n - t) as f64)
}

impl Default for Jet2 {
    fn default() -> Self {
        Jet2::zero(0)
    }
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet2[{}](", self.order)?;
        let mut first = true;
        for (i, j, c) in self.terms() {
            if c != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{c}·u^{i}v^{j}")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&Jet2> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &Jet2) -> Jet2 {
                self.$try(rhs).expect("jet orders must match")
            }
        }
        impl $tr<Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet2> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: &Jet2) -> Jet2 {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Mul<f64> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, rhs: f64) -> Jet2 {
        self.coeffs[0] += rhs;
        self
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl AddAssign<&Jet2> for Jet2 {
    fn add_assign(&mut self, rhs: &Jet2) {
        *self = &*self + rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Jet2, b: &Jet2, tol: f64) -> bool {
        a.order() == b.order() && a.terms().zip(b.terms()).all(|(x, y)| (x.2 - y.2).abs() <= tol)
    }

    #[test]
    fn product_telescopes() {
        let a = Jet2::from_terms(4, &[(0, 0, 1.0), (1, 0, 1.0)]);
        let b = Jet2::from_terms(4, &[(0, 0, 1.0), (1, 0, -1.0)]);
        assert!(close(&(&a * &b), &Jet2::from_terms(4, &[(0, 0, 1.0), (2, 0, -1.0)]), 0.0));
    }

    #[test]
    fn square_of_sum() {
        let a = Jet2::from_terms(2, &[(1, 0, 1.0), (0, 1, 1.0)]);
        let want = Jet2::from_terms(2, &[(2, 0, 1.0), (1, 1, 2.0), (0, 2, 1.0)]);
        assert!(close(&(&a * &a), &want, 0.0));
    }

    #[test]
    fn sum_cancels() {
        let a = Jet2::from_terms(3, &[(0, 0, 1.0), (1, 0, 1.0)]);
        let b = Jet2::from_terms(3, &[(0, 0, -1.0), (0, 1, 1.0)]);
        assert!(close(&(&a + &b), &Jet2::from_terms(3, &[(1, 0, 1.0), (0, 1, 1.0)]), 0.0));
    }

    #[test]
    fn mismatched_orders() {
        let a = Jet2::zero(2);
        let b = Jet2::zero(3);
        assert!(matches!(a.try_mul(&b), Err(Error::OrderMismatch { left: 2, right: 3 })));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn quarter_power() {
        let a = Jet2::from_terms(2, &[(0, 0, 1.0), (1, 0, 2.0), (0, 1, 1.0)]);
        let want = Jet2::from_terms(
            2,
            &[(0, 0, 1.0), (1, 0, 0.5), (0, 1, 0.25), (2, 0, -0.375), (1, 1, -0.375), (0, 2, -3.0 / 32.0)],
        );
        assert!(close(&a.pow(0.25).unwrap(), &want, 1e-15));
    }

    #[test]
    fn sqrt_of_constant() {
        assert_eq!(Jet2::constant(0, 4.0).pow(0.5).unwrap().constant_term(), 2.0);
    }

    #[test]
    fn geometric_series() {
        let a = Jet2::from_terms(3, &[(0, 0, 1.0), (1, 0, 1.0)]);
        let want = Jet2::from_terms(3, &[(0, 0, 1.0), (1, 0, -1.0), (2, 0, 1.0), (3, 0, -1.0)]);
        assert!(close(&a.pow(-1.0).unwrap(), &want, 1e-15));
    }

    #[test]
    fn singular_powers() {
        let a = Jet2::var(3, Var::U);
        assert!(matches!(a.pow(0.5), Err(Error::SingularJet { .. })));
        assert!(matches!(a.pow(-2.0), Err(Error::SingularJet { .. })));
        assert!(a.pow(3.0).is_ok());
        let b = Jet2::constant(3, -1.0);
        assert!(matches!(b.pow(0.25), Err(Error::NegativeBase { .. })));
        assert_eq!(b.pow(-1.0).unwrap().constant_term(), -1.0);
    }

    #[test]
    fn partials() {
        let a = Jet2::from_terms(3, &[(2, 1, 1.0)]);
        assert!(close(&a.partial(Var::U), &Jet2::from_terms(2, &[(1, 1, 2.0)]), 0.0));
        assert!(close(&a.partial(Var::V), &Jet2::from_terms(2, &[(2, 0, 1.0)]), 0.0));
        let c = Jet2::constant(0, 7.0);
        assert_eq!(c.partial(Var::U), Jet2::zero(0));
        let c3 = Jet2::constant(3, 7.0);
        assert_eq!(c3.partial(Var::U), Jet2::zero(2));
    }

    #[test]
    fn shift_matches_eval() {
        let a = Jet2::from_fn(4, |i, j| 1.0 / (1 + i + 2 * j) as f64);
        let s = a.shift(0.3, -0.2);
        for &(x, y) in &[(0.0, 0.0), (0.1, 0.2), (-0.3, 0.05)] {
            assert!((s.eval(x, y) - a.eval(x + 0.3, y - 0.2)).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_scaling() {
        let a = Jet2::from_terms(4, &[(2, 1, 0.5)]);
        assert_eq!(a.derivative(2, 1), 1.0);
    }

    #[test]
    fn compose_substitution() {
        // (u + v)^2 with u -> u, v -> u v
        let f = Jet2::from_terms(4, &[(2, 0, 1.0), (1, 1, 2.0), (0, 2, 1.0)]);
        let p = Jet2::var(4, Var::U);
        let q = Jet2::from_terms(4, &[(1, 1, 1.0)]);
        let g = f.compose(&p, &q).unwrap();
        let want = Jet2::from_terms(4, &[(2, 0, 1.0), (2, 1, 2.0), (2, 2, 1.0)]);
        assert!(close(&g, &want, 1e-15));
    }
}
