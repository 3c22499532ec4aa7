//! Taylor coefficients of the elementary and special functions used by the
//! closed forms, and series-level helpers built on them.

use num_rational::BigRational;
use rug::Float;

use super::series::{SeriesError, TruncSeries};
use crate::numerics::{
    dirichlet_beta, euler_gamma, euler_number, pi, riemann_zeta, BigComplex, PrecisionContext,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fun {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    /// `sin(x)/x`
    Sinc,
    /// `sinh(x)/x`
    Sinhc,
    /// `sec(x)` from Euler numbers
    Sec,
    /// `A(z) = sum zeta(2r+1) z^(2r)`
    A,
    /// `B(z) = sum (1 - 4^-r) zeta(2r+1) z^(2r)`
    B,
    /// `C(z) = sum beta(2r) z^(2r-1)`
    C,
    DA,
    DB,
}

fn factorials(n: usize, prec: u32) -> Vec<Float> {
    let mut f = vec![Float::with_val(prec, 1)];
    for k in 1..=n {
        let next = Float::with_val(prec, &f[k - 1] * k as u32);
        f.push(next);
    }
    f
}

/// First `len` Taylor coefficients of `f` at 0.
pub fn coeffs(f: Fun, len: usize, ctx: &PrecisionContext) -> Result<Vec<BigComplex>, SeriesError> {
    let p = ctx.prec();
    let fact = factorials(len + 2, p);
    let real = |x: Float| BigComplex::from_real(x);
    let zero = || BigComplex::zero(p);
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let inv_fact = |m: usize| real(Float::with_val(p, fact[m].clone().recip()));
        let sign = |m: usize| if m % 2 == 0 { 1 } else { -1 };
        let v = match f {
            Fun::Exp => inv_fact(k),
            Fun::Sinh => {
                if k % 2 == 1 {
                    inv_fact(k)
                } else {
                    zero()
                }
            }
            Fun::Cosh => {
                if k % 2 == 0 {
                    inv_fact(k)
                } else {
                    zero()
                }
            }
            Fun::Sin => {
                if k % 2 == 1 {
                    inv_fact(k).scale_rational(&crate::words::int(sign(k / 2)))
                } else {
                    zero()
                }
            }
            Fun::Cos => {
                if k % 2 == 0 {
                    inv_fact(k).scale_rational(&crate::words::int(sign(k / 2)))
                } else {
                    zero()
                }
            }
            Fun::Sinc => {
                if k % 2 == 0 {
                    inv_fact(k + 1).scale_rational(&crate::words::int(sign(k / 2)))
                } else {
                    zero()
                }
            }
            Fun::Sinhc => {
                if k % 2 == 0 {
                    inv_fact(k + 1)
                } else {
                    zero()
                }
            }
            Fun::Sec => {
                if k % 2 == 0 {
                    // sec x = sum (-1)^q E_2q x^2q / (2q)!
                    let e = BigRational::from_integer(euler_number(k));
                    inv_fact(k).scale_rational(&(e * crate::words::int(sign(k / 2))))
                } else {
                    zero()
                }
            }
            Fun::A | Fun::B => {
                if k >= 2 && k % 2 == 0 {
                    let r = (k / 2) as u32;
                    let z = riemann_zeta(2 * r + 1, ctx)?;
                    if f == Fun::B {
                        let w = Float::with_val(p, 1)
                            - Float::with_val(p, Float::u_pow_u(4, r)).recip();
                        real(z * w)
                    } else {
                        real(z)
                    }
                } else {
                    zero()
                }
            }
            Fun::DA | Fun::DB => {
                // derivative: coefficient k is (k+1) a_{k+1}
                if k % 2 == 1 {
                    let r = ((k + 1) / 2) as u32;
                    let mut z = riemann_zeta(2 * r + 1, ctx)?;
                    if f == Fun::DB {
                        z *= Float::with_val(p, 1)
                            - Float::with_val(p, Float::u_pow_u(4, r)).recip();
                    }
                    real(z * (k as u32 + 1))
                } else {
                    zero()
                }
            }
            Fun::C => {
                if k % 2 == 1 {
                    real(dirichlet_beta(k as u32 + 1, ctx)?)
                } else {
                    zero()
                }
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// `f(h)` for a series `h` with zero constant term.
pub fn apply(f: Fun, h: &TruncSeries, ctx: &PrecisionContext) -> Result<TruncSeries, SeriesError> {
    let (n0, n1) = h.orders();
    let g = coeffs(f, n0 + n1 + 1, ctx)?;
    TruncSeries::compose(&g, h)
}

/// Base point of a log-gamma expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaBase {
    One,
    Half,
}

/// Coefficients of `log Gamma(a + z) - log Gamma(a)`: for `a = 1`,
/// `-gamma z + sum_k (-1)^k zeta(k) z^k / k`; for `a = 1/2` the zeta
/// values carry a factor `2^k - 1` and the linear term gains `-2 log 2`.
pub fn log_gamma_coeffs(
    a: GammaBase,
    len: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<BigComplex>, SeriesError> {
    let p = ctx.prec();
    let mut out = vec![BigComplex::zero(p)];
    for k in 1..len {
        let v = if k == 1 {
            let mut psi = -euler_gamma(ctx);
            if a == GammaBase::Half {
                psi -= Float::with_val(p, crate::numerics::log2(ctx) * 2u32);
            }
            psi
        } else {
            let mut z = riemann_zeta(k as u32, ctx)?;
            if a == GammaBase::Half {
                z *= Float::with_val(p, Float::u_pow_u(2, k as u32)) - 1u32;
            }
            let z = z / k as u32;
            if k % 2 == 0 {
                z
            } else {
                -z
            }
        };
        out.push(BigComplex::from_real(v));
    }
    Ok(out)
}

/// `log(Gamma(a + h) / Gamma(a))`.
pub fn log_gamma_shift(
    a: GammaBase,
    h: &TruncSeries,
    ctx: &PrecisionContext,
) -> Result<TruncSeries, SeriesError> {
    let (n0, n1) = h.orders();
    let g = log_gamma_coeffs(a, n0 + n1 + 1, ctx)?;
    TruncSeries::compose(&g, h)
}

/// `psi'(1 + h) = sum_k (-1)^k (k+1) zeta(k+2) h^k`.
pub fn trigamma_one_shift(
    h: &TruncSeries,
    ctx: &PrecisionContext,
) -> Result<TruncSeries, SeriesError> {
    let (n0, n1) = h.orders();
    let mut g = Vec::new();
    for k in 0..=(n0 + n1) {
        let z = riemann_zeta(k as u32 + 2, ctx)? * (k as u32 + 1);
        g.push(BigComplex::from_real(if k % 2 == 0 { z } else { -z }));
    }
    TruncSeries::compose(&g, h)
}

/// `pi` as a complex constant.
pub fn pi_c(ctx: &PrecisionContext) -> BigComplex {
    BigComplex::from_real(pi(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;

    #[test]
    fn sec_matches_reciprocal_cosine() {
        let ctx = PrecisionContext::new(30);
        let u = TruncSeries::var(ctx.prec(), (12, 0), 0);
        let sec = apply(Fun::Sec, &u, &ctx).unwrap();
        let cos = apply(Fun::Cos, &u, &ctx).unwrap();
        assert!(sec.max_diff(&cos.recip().unwrap()).unwrap() < 1e-35);
    }

    #[test]
    fn gamma_reflection() {
        // Gamma(1+z) Gamma(1-z) = pi z / sin(pi z)
        let ctx = PrecisionContext::new(30);
        let u = TruncSeries::var(ctx.prec(), (12, 0), 0);
        let lg = &log_gamma_shift(GammaBase::One, &u, &ctx).unwrap()
            + &log_gamma_shift(GammaBase::One, &(-&u), &ctx).unwrap();
        let lhs = lg.exp().unwrap();
        let rhs = apply(Fun::Sinc, &u.scale(&pi_c(&ctx)), &ctx)
            .unwrap()
            .recip()
            .unwrap();
        assert!(lhs.max_diff(&rhs).unwrap() < 1e-30);
        // Gamma(1/2 + z) Gamma(1/2 - z) = pi / cos(pi z), relative to Gamma(1/2)^2 = pi
        let lh = &log_gamma_shift(GammaBase::Half, &u, &ctx).unwrap()
            + &log_gamma_shift(GammaBase::Half, &(-&u), &ctx).unwrap();
        let rhs = apply(Fun::Sec, &u.scale(&pi_c(&ctx)), &ctx).unwrap();
        assert!(lh.exp().unwrap().max_diff(&rhs).unwrap() < 1e-30);
        let catalan = Float::with_val(ctx.prec(), Constant::Catalan);
        let c = coeffs(Fun::C, 4, &ctx).unwrap();
        assert!(
            (Float::with_val(ctx.prec(), &c[1].re - &catalan))
                .abs()
                .to_f64()
                < 1e-35
        );
    }
}
