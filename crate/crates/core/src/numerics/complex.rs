use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;
use rug::float::Constant;
use rug::{Float, Integer};

use crate::words::Phase;

/// Complex number over two MPFR floats of a common precision.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

/// Convert an exact rational to a float at `prec` bits.
pub fn rational_to_float(q: &BigRational, prec: u32) -> Float {
    let n = Integer::from_str_radix(&q.numer().to_str_radix(16), 16).expect("hex integer");
    let d = Integer::from_str_radix(&q.denom().to_str_radix(16), 16).expect("hex integer");
    Float::with_val(prec, &n) / Float::with_val(prec, &d)
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn i(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::with_val(prec, 1),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(x: Float) -> Self {
        let prec = x.prec();
        BigComplex {
            re: x,
            im: Float::new(prec),
        }
    }

    pub fn from_rational(prec: u32, q: &BigRational) -> Self {
        Self::from_real(rational_to_float(q, prec))
    }

    pub fn from_int(prec: u32, n: i64) -> Self {
        BigComplex {
            re: Float::with_val(prec, n),
            im: Float::new(prec),
        }
    }

    /// `exp(2 pi i q)`; quarter-turns are exact.
    pub fn root_of_unity(prec: u32, q: Phase) -> Self {
        let q = q - q.floor();
        let (n, d) = (*q.numer(), *q.denom());
        let exact = |re: i32, im: i32| BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        };
        match (n, d) {
            (0, _) => exact(1, 0),
            (1, 4) => exact(0, 1),
            (1, 2) => exact(-1, 0),
            (3, 4) => exact(0, -1),
            _ => {
                let angle = Float::with_val(prec, Constant::Pi) * 2i64 * n / d;
                let (s, c) = angle.sin_cos(Float::new(prec));
                BigComplex { re: c, im: s }
            }
        }
    }

    /// The same value rounded to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square()) + Float::with_val(p, self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, x: &Float) -> Self {
        let p = self.prec();
        BigComplex {
            re: Float::with_val(p, &self.re * x),
            im: Float::with_val(p, &self.im * x),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        if q.is_one() {
            return self.clone();
        }
        self.scale(&rational_to_float(q, self.prec()))
    }

    pub fn div_u(&self, n: u32) -> Self {
        BigComplex {
            re: self.re.clone() / n,
            im: self.im.clone() / n,
        }
    }

    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex {
            re: Float::with_val(n.prec(), &self.re / &n),
            im: -Float::with_val(n.prec(), &self.im / &n),
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex {
            re: Float::with_val(p, &r * &c),
            im: Float::with_val(p, &r * &s),
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        BigComplex {
            re: self.abs().ln(),
            im: self.im.clone().atan2(&self.re),
        }
    }

    pub fn powu(&self, e: u32) -> Self {
        let mut out = BigComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn render(&self, digits: usize) -> String {
        let re = render_float(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let im = render_float(&self.im.clone().abs(), digits);
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        format!("{} {} {}i", re, sign, im)
    }
}

/// Fixed-notation decimal string for moderate magnitudes, scientific otherwise.
pub fn render_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mag = x.clone().abs().log10().to_f64();
    if (-4.0..15.0).contains(&mag) {
        let decimals = (digits as i64 - mag.floor() as i64 - 1).max(1) as usize;
        let scale = Float::with_val(x.prec(), Float::u_pow_u(10, decimals as u32));
        let scaled = Float::with_val(x.prec(), x * &scale).round();
        let n = scaled.to_integer().expect("finite");
        let neg = n < 0;
        let s = n.abs().to_string();
        let s = if s.len() <= decimals {
            format!("{}{}", "0".repeat(decimals + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - decimals);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    } else {
        x.to_string_radix(10, Some(digits))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.render(digits))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        BigComplex {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        self * &o.recip()
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, o: BigComplex) -> BigComplex {
        &self + &o
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, o: BigComplex) -> BigComplex {
        &self - &o
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, o: BigComplex) -> BigComplex {
        &self * &o
    }
}

impl Div for BigComplex {
    type Output = BigComplex;
    fn div(self, o: BigComplex) -> BigComplex {
        &self / &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::frac;

    #[test]
    fn arithmetic() {
        let p = 128;
        let a = BigComplex::from_f64(p, 1.0, 2.0);
        let b = BigComplex::from_f64(p, -3.0, 0.5);
        let prod = &a * &b;
        assert_eq!(prod.to_f64(), (-4.0, -5.5));
        let q = &prod / &b;
        assert!((&q - &a).abs_f64() < 1e-35);
        let l = a.ln().exp();
        assert!((&l - &a).abs_f64() < 1e-35);
        assert_eq!(a.powu(3).to_f64(), (-11.0, -2.0));
    }

    #[test]
    fn roots_and_rationals() {
        let p = 200;
        let w = BigComplex::root_of_unity(p, Phase::new(1, 3));
        let cube = w.powu(3);
        assert!((&cube - &BigComplex::one(p)).abs_f64() < 1e-55);
        assert_eq!(
            BigComplex::root_of_unity(p, Phase::new(-1, 4)).to_f64(),
            (0.0, -1.0)
        );
        let third = BigComplex::from_rational(p, &frac(-1, 3));
        assert!((third.re.to_f64() + 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn rendering() {
        let p = 128;
        let x = BigComplex::from_f64(p, 1.25, 0.0);
        assert_eq!(x.render(5), "1.2500");
        let y = BigComplex::from_f64(p, -0.5, -2.0);
        assert_eq!(y.render(3), "-0.500 - 2.00i");
    }
}
