use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;
use thiserror::Error;

use crate::numerics::{BigComplex, NumericError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("series shapes differ: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("composition needs a zero constant term")]
    NonzeroConstant,
    #[error("unknown series `{0}`")]
    UnknownName(String),
    #[error("order {0:?} outside the supported range")]
    Order((usize, usize)),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Power series in one or two variables, truncated at a maximal exponent
/// per variable. Univariate series have second order 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries {
    orders: (usize, usize),
    prec: u32,
    c: Vec<BigComplex>,
}

impl TruncSeries {
    pub fn zero(prec: u32, orders: (usize, usize)) -> Self {
        let len = (orders.0 + 1) * (orders.1 + 1);
        TruncSeries {
            orders,
            prec,
            c: vec![BigComplex::zero(prec); len],
        }
    }

    pub fn univariate(prec: u32, coeffs: Vec<BigComplex>) -> Self {
        assert!(!coeffs.is_empty(), "need at least one coefficient");
        TruncSeries {
            orders: (coeffs.len() - 1, 0),
            prec,
            c: coeffs,
        }
    }

    pub fn constant(prec: u32, orders: (usize, usize), v: BigComplex) -> Self {
        let mut s = Self::zero(prec, orders);
        s.c[0] = v;
        s
    }

    /// The variable `u` (`k = 0`) or `v` (`k = 1`).
    pub fn var(prec: u32, orders: (usize, usize), k: usize) -> Self {
        let mut s = Self::zero(prec, orders);
        let idx = if k == 0 { (1, 0) } else { (0, 1) };
        if idx.0 <= orders.0 && idx.1 <= orders.1 {
            s.set(idx.0, idx.1, BigComplex::one(prec));
        }
        s
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.prec, self.orders)
    }

    pub fn constant_like(&self, v: BigComplex) -> Self {
        Self::constant(self.prec, self.orders, v)
    }

    pub fn orders(&self) -> (usize, usize) {
        self.orders
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_bivariate(&self) -> bool {
        self.orders.1 > 0
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.orders.1 + 1) + j
    }

    /// Coefficient of `u^i v^j`; zero beyond the truncation.
    pub fn coeff(&self, i: usize, j: usize) -> BigComplex {
        if i > self.orders.0 || j > self.orders.1 {
            return BigComplex::zero(self.prec);
        }
        self.c[self.idx(i, j)].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigComplex) {
        let k = self.idx(i, j);
        self.c[k] = v;
    }

    /// Univariate coefficient list.
    pub fn coeffs1(&self) -> Vec<BigComplex> {
        (0..=self.orders.0).map(|i| self.coeff(i, 0)).collect()
    }

    fn same_shape(&self, o: &Self) -> Result<(), SeriesError> {
        if self.orders != o.orders {
            return Err(SeriesError::ShapeMismatch(self.orders, o.orders));
        }
        Ok(())
    }

    fn zip<F: Fn(&BigComplex, &BigComplex) -> BigComplex>(
        &self,
        o: &Self,
        f: F,
    ) -> Result<Self, SeriesError> {
        self.same_shape(o)?;
        Ok(TruncSeries {
            orders: self.orders,
            prec: self.prec,
            c: self.c.iter().zip(&o.c).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.zip(o, |a, b| a + b)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.zip(o, |a, b| a - b)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.same_shape(o)?;
        let (n0, n1) = self.orders;
        let mut out = self.zero_like();
        for i in 0..=n0 {
            for j in 0..=n1 {
                let a = &self.c[self.idx(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=n0 - i {
                    for l in 0..=n1 - j {
                        let b = &o.c[o.idx(k, l)];
                        if b.is_zero() {
                            continue;
                        }
                        let t = out.idx(i + k, j + l);
                        out.c[t] = &out.c[t] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, x: &BigComplex) -> Self {
        TruncSeries {
            orders: self.orders,
            prec: self.prec,
            c: self.c.iter().map(|a| a * x).collect(),
        }
    }

    pub fn scale_real(&self, x: &Float) -> Self {
        TruncSeries {
            orders: self.orders,
            prec: self.prec,
            c: self.c.iter().map(|a| a.scale(x)).collect(),
        }
    }

    pub fn add_constant(&self, x: &BigComplex) -> Self {
        let mut s = self.clone();
        s.c[0] = &s.c[0] + x;
        s
    }

    /// Multiplicative inverse, degree by degree.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        let c0 = &self.c[0];
        if c0.is_zero() || !c0.is_finite() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = c0.recip();
        let (n0, n1) = self.orders;
        let mut g = self.zero_like();
        for i in 0..=n0 {
            for j in 0..=n1 {
                let mut acc = if i == 0 && j == 0 {
                    BigComplex::one(self.prec)
                } else {
                    BigComplex::zero(self.prec)
                };
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        let a = &self.c[self.idx(k, l)];
                        if a.is_zero() {
                            continue;
                        }
                        acc = &acc - &(a * &g.c[g.idx(i - k, j - l)]);
                    }
                }
                let t = g.idx(i, j);
                g.c[t] = &acc * &inv0;
            }
        }
        Ok(g)
    }

    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        self.try_mul(&o.recip()?)
    }

    /// `sum_k g_k h^k` for `h` with zero constant term.
    pub fn compose(g: &[BigComplex], h: &Self) -> Result<Self, SeriesError> {
        if !h.c[0].is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let need = h.orders.0 + h.orders.1;
        let top = need.min(g.len().saturating_sub(1));
        assert!(
            g.len() > need || g.len() == top + 1,
            "coefficient list too short"
        );
        let mut out = h.zero_like();
        for k in (0..=top).rev() {
            out = out.try_mul(h)?.add_constant(&g[k]);
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        let c0 = self.c[0].clone();
        let mut h = self.clone();
        h.c[0] = BigComplex::zero(self.prec);
        let n = self.orders.0 + self.orders.1;
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut f = BigComplex::one(self.prec);
        for k in 0..=n {
            if k > 0 {
                f = f.div_u(k as u32);
            }
            coeffs.push(f.clone());
        }
        Ok(Self::compose(&coeffs, &h)?.scale(&c0.exp()))
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        let c0 = self.c[0].clone();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let mut h = self.scale(&c0.recip());
        h.c[0] = BigComplex::zero(self.prec);
        let n = self.orders.0 + self.orders.1;
        let mut coeffs = vec![BigComplex::zero(self.prec)];
        for k in 1..=n {
            let v = BigComplex::one(self.prec).div_u(k as u32);
            coeffs.push(if k % 2 == 1 { v } else { -v });
        }
        Ok(Self::compose(&coeffs, &h)?.add_constant(&c0.ln()))
    }

    /// Partial derivative in variable `k`; the top coefficient becomes zero.
    pub fn derivative(&self, k: usize) -> Self {
        let (n0, n1) = self.orders;
        let mut out = self.zero_like();
        for i in 0..=n0 {
            for j in 0..=n1 {
                let (si, sj, m) = if k == 0 {
                    (i + 1, j, i + 1)
                } else {
                    (i, j + 1, j + 1)
                };
                if si <= n0 && sj <= n1 {
                    let v = self.c[self.idx(si, sj)].scale_rational(&crate::words::int(m as i64));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Exact division by `u^a v^b`, dropping the low coefficients (which
    /// callers guarantee vanish); orders shrink accordingly.
    pub fn div_monomial(&self, a: usize, b: usize) -> Self {
        let orders = (
            self.orders.0.saturating_sub(a),
            self.orders.1.saturating_sub(b),
        );
        let mut out = Self::zero(self.prec, orders);
        for i in 0..=orders.0 {
            for j in 0..=orders.1 {
                out.set(i, j, self.coeff(i + a, j + b));
            }
        }
        out
    }

    /// Multiplication by `u^a v^b` within the current orders.
    pub fn mul_monomial(&self, a: usize, b: usize) -> Self {
        let mut out = self.zero_like();
        for i in a..=self.orders.0 {
            for j in b..=self.orders.1 {
                out.set(i, j, self.coeff(i - a, j - b));
            }
        }
        out
    }

    pub fn truncate(&self, orders: (usize, usize)) -> Self {
        let mut out = Self::zero(self.prec, orders);
        for i in 0..=orders.0 {
            for j in 0..=orders.1 {
                out.set(i, j, self.coeff(i, j));
            }
        }
        out
    }

    /// Substitution `u -> c u` (`k = 0`) or `v -> c v` (`k = 1`).
    pub fn rescale(&self, k: usize, c: &BigComplex) -> Self {
        let mut out = self.clone();
        let mut pw = BigComplex::one(self.prec);
        let n = if k == 0 { self.orders.0 } else { self.orders.1 };
        for e in 0..=n {
            if e > 0 {
                pw = &pw * c;
            }
            for m in 0..=(if k == 0 { self.orders.1 } else { self.orders.0 }) {
                let (i, j) = if k == 0 { (e, m) } else { (m, e) };
                let t = out.idx(i, j);
                out.c[t] = &out.c[t] * &pw;
            }
        }
        out
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_diff(&self, o: &Self) -> Result<f64, SeriesError> {
        self.same_shape(o)?;
        Ok(self
            .c
            .iter()
            .zip(&o.c)
            .map(|(a, b)| (a - b).abs_f64())
            .fold(0.0, f64::max))
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    /// Panics on shape mismatch; see `try_add`.
    fn add(self, o: &TruncSeries) -> TruncSeries {
        self.try_add(o).expect("series shapes")
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, o: &TruncSeries) -> TruncSeries {
        self.try_sub(o).expect("series shapes")
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, o: &TruncSeries) -> TruncSeries {
        self.try_mul(o).expect("series shapes")
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries {
            orders: self.orders,
            prec: self.prec,
            c: self.c.iter().map(|a| -a.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 160;

    fn c(x: f64) -> BigComplex {
        BigComplex::from_f64(P, x, 0.0)
    }

    #[test]
    fn exp_log_round_trip() {
        let z = TruncSeries::var(P, (10, 0), 0);
        let one_plus = z.add_constant(&c(1.0));
        let back = one_plus.log().unwrap().exp().unwrap();
        assert!(back.max_diff(&one_plus).unwrap() < 1e-40);
    }

    #[test]
    fn derivative_and_monomials() {
        let s = TruncSeries::univariate(P, (0..6).map(|k| c(k as f64 + 1.0)).collect());
        let d = s.derivative(0);
        assert_eq!(d.coeff(0, 0).to_f64().0, 2.0);
        assert_eq!(d.coeff(4, 0).to_f64().0, 30.0);
        assert!(d.coeff(5, 0).is_zero());
        let shifted = s.mul_monomial(2, 0).div_monomial(2, 0);
        assert_eq!(shifted.orders(), (3, 0));
        assert_eq!(shifted.coeff(3, 0).to_f64().0, 4.0);
    }

    #[test]
    fn reciprocal_bivariate() {
        let u = TruncSeries::var(P, (5, 4), 0);
        let v = TruncSeries::var(P, (5, 4), 1);
        let f = (&(&u * &v) + &u.scale(&c(3.0))).add_constant(&c(2.0));
        let prod = &f * &f.recip().unwrap();
        assert!(prod.max_diff(&f.constant_like(c(1.0))).unwrap() < 1e-40);
        assert!(u.recip().is_err());
        assert!(f.try_add(&TruncSeries::zero(P, (3, 3))).is_err());
        assert!(TruncSeries::compose(&[c(1.0)], &f).is_err());
    }

    #[test]
    fn rescaling() {
        let s = TruncSeries::univariate(P, vec![c(1.0), c(1.0), c(1.0)]);
        let r = s.rescale(0, &c(-2.0));
        assert_eq!(r.coeff(1, 0).to_f64().0, -2.0);
        assert_eq!(r.coeff(2, 0).to_f64().0, 4.0);
    }
}
