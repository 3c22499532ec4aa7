use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::complex::rational_to_float;
use super::{BigComplex, ConstKey, NumericError, PrecisionContext};

pub fn pi(ctx: &PrecisionContext) -> Float {
    let p = ctx.prec();
    ctx.constant(ConstKey::Pi, || {
        BigComplex::from_real(Float::with_val(p, Constant::Pi))
    })
    .re
}

pub fn log2(ctx: &PrecisionContext) -> Float {
    let p = ctx.prec();
    ctx.constant(ConstKey::Log2, || {
        BigComplex::from_real(Float::with_val(p, Constant::Log2))
    })
    .re
}

pub fn euler_gamma(ctx: &PrecisionContext) -> Float {
    let p = ctx.prec();
    ctx.constant(ConstKey::EulerGamma, || {
        BigComplex::from_real(Float::with_val(p, Constant::Euler))
    })
    .re
}

/// Riemann zeta at an integer `n >= 2`.
pub fn riemann_zeta(n: u32, ctx: &PrecisionContext) -> Result<Float, NumericError> {
    if n < 2 {
        return Err(NumericError::Pole(format!("zeta({})", n)));
    }
    let p = ctx.prec();
    Ok(ctx
        .constant(ConstKey::Zeta(n), || {
            BigComplex::from_real(Float::with_val(p, Float::zeta_u(n)))
        })
        .re)
}

/// Dirichlet beta `sum_{k>=0} (-1)^k (2k+1)^-n`, by alternating-series
/// acceleration (Cohen, Rodriguez Villegas, Zagier).
pub fn dirichlet_beta(n: u32, ctx: &PrecisionContext) -> Result<Float, NumericError> {
    if n == 0 {
        return Err(NumericError::InvalidArgument("beta(0)".into()));
    }
    let p = ctx.prec();
    Ok(ctx
        .constant(ConstKey::Beta(n), || {
            let terms = ((ctx.digits() + ctx.guard_digits()) as f64 * 1.31).ceil() as u32 + 4;
            let root = Float::with_val(p, 8u32).sqrt() + 3u32;
            let mut d = Float::with_val(p, root.pow(terms));
            d = (Float::with_val(p, d.clone().recip()) + d) / 2u32;
            let mut b = Float::with_val(p, -1);
            let mut c = Float::with_val(p, -&d);
            let mut s = Float::new(p);
            let nn = terms as i64;
            for k in 0..terms as i64 {
                c = Float::with_val(p, &b - &c);
                let ak = Float::with_val(p, Float::u_pow_u((2 * k + 1) as u32, n)).recip();
                s += Float::with_val(p, &c * &ak);
                b = b * ((k + nn) * (k - nn)) / ((2 * k + 1) * (k + 1)) * 2u32;
            }
            BigComplex::from_real(s / d)
        })
        .re)
}

/// Bernoulli numbers `B_0 ..= B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        // sum_{k<=m} binom(m+1, k) B_k = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Euler number `E_n` (`1/cosh z = sum E_n z^n / n!`); zero for odd `n`.
pub fn euler_number(n: usize) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for m in 1..=n / 2 {
        // sum_k binom(2m, 2k) E_{2k} = 0
        let mut acc = BigInt::zero();
        let mut binom = BigInt::one();
        for k in 0..m {
            acc += &binom * &e[k];
            let (a, b) = (2 * k, 2 * m);
            binom = binom * BigInt::from((b - a) * (b - a - 1)) / BigInt::from((a + 1) * (a + 2));
        }
        e.push(-acc);
    }
    e[n / 2].clone()
}

/// Hurwitz zeta `sum_{k>=0} (k+a)^-s` for integer `s >= 2`, `a > 0`,
/// by Euler-Maclaurin summation.
pub fn hurwitz_zeta(s: u32, a: &Float, ctx: &PrecisionContext) -> Result<Float, NumericError> {
    if s < 2 {
        return Err(NumericError::Pole(format!("hurwitz_zeta({}, a)", s)));
    }
    if *a <= 0 {
        return Err(NumericError::Pole("hurwitz_zeta with a <= 0".into()));
    }
    let p = ctx.prec();
    let key = ConstKey::Hurwitz(s, a.to_string_radix(16, None));
    let v = ctx.constant(key, || {
        let n = ctx.digits() + ctx.guard_digits() + 10;
        let mut sum = Float::new(p);
        for k in 0..n {
            let x = Float::with_val(p, a + k);
            sum += Float::with_val(p, x.pow(s)).recip();
        }
        let x = Float::with_val(p, a + n);
        let xs = Float::with_val(p, x.clone().pow(s)).recip();
        sum += Float::with_val(p, &xs * &x) / (s - 1);
        sum += Float::with_val(p, &xs / 2u32);
        let bern = bernoulli(2 * 60);
        let x2 = Float::with_val(p, x.clone().square()).recip();
        // term_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
        let mut rising = Float::with_val(p, s);
        let mut fact = Float::with_val(p, 2u32);
        let mut xp = Float::with_val(p, &xs / &x);
        let tiny = ctx.target() * ctx.ulp();
        for j in 1..=60usize {
            let term =
                Float::with_val(p, &rising * &xp) * rational_to_float(&bern[2 * j], p) / &fact;
            let small = term.clone().abs() < tiny;
            sum += term;
            if small {
                break;
            }
            let (sj, tj) = ((s as usize + 2 * j - 1) as u32, (s as usize + 2 * j) as u32);
            rising = rising * sj * tj;
            fact = fact * ((2 * j + 1) * (2 * j + 2)) as u32;
            xp = Float::with_val(p, &xp * &x2);
        }
        BigComplex::from_real(sum)
    });
    Ok(v.re)
}

/// `psi^(k)(x)` for real `x > 0`.
pub fn polygamma(k: u32, x: &Float, ctx: &PrecisionContext) -> Result<Float, NumericError> {
    if *x <= 0 && x.is_integer() {
        return Err(NumericError::Pole(format!("polygamma at {}", x)));
    }
    if k == 0 {
        return Ok(Float::with_val(ctx.prec(), x).digamma());
    }
    let h = hurwitz_zeta(k + 1, x, ctx)?;
    let mut fact = Float::with_val(ctx.prec(), 1);
    for i in 2..=k {
        fact *= i;
    }
    let v = Float::with_val(ctx.prec(), &fact * &h);
    Ok(if k % 2 == 1 { v } else { -v })
}

pub fn trigamma(x: &Float, ctx: &PrecisionContext) -> Result<Float, NumericError> {
    polygamma(1, x, ctx)
}

fn check_disk(z: &BigComplex, name: &str) -> Result<f64, NumericError> {
    let r = z.abs_f64();
    if r >= 1.0 {
        return Err(NumericError::InvalidArgument(format!(
            "{} needs |z| < 1, got {}",
            name, r
        )));
    }
    Ok(r)
}

fn even_power_series<F: FnMut(u32) -> Result<Float, NumericError>>(
    z: &BigComplex,
    first_power: u32,
    ctx: &PrecisionContext,
    name: &str,
    mut coeff: F,
) -> Result<BigComplex, NumericError> {
    let r = check_disk(z, name)?;
    let p = ctx.prec();
    let z2 = z * z;
    let mut pw = z.powu(first_power);
    let mut total = BigComplex::zero(p);
    let goal = ctx.target() * ctx.ulp().sqrt();
    for k in 1.. {
        total = &total + &pw.scale(&coeff(k)?);
        pw = &pw * &z2;
        // coefficients are bounded by 2 in modulus
        if r == 0.0 || 2.0 * r.powi((2 * k + first_power) as i32) / (1.0 - r * r) < goal {
            break;
        }
    }
    Ok(total)
}

/// `A(z) = sum_{r>=1} zeta(2r+1) z^(2r)`.
pub fn series_a(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex, NumericError> {
    even_power_series(z, 2, ctx, "A", |r| riemann_zeta(2 * r + 1, ctx))
}

/// `B(z) = sum_{r>=1} (1 - 2^(-2r)) zeta(2r+1) z^(2r)`.
pub fn series_b(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex, NumericError> {
    even_power_series(z, 2, ctx, "B", |r| {
        let f = Float::with_val(ctx.prec(), 1)
            - Float::with_val(ctx.prec(), Float::u_pow_u(4, r)).recip();
        Ok(f * riemann_zeta(2 * r + 1, ctx)?)
    })
}

/// `C(z) = sum_{r>=1} beta(2r) z^(2r-1)`.
pub fn series_c(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex, NumericError> {
    even_power_series(z, 1, ctx, "C", |r| dirichlet_beta(2 * r, ctx))
}

fn real_arg(args: &[BigComplex], i: usize, name: &str) -> Result<Float, NumericError> {
    let z = args.get(i).ok_or_else(|| {
        NumericError::InvalidArgument(format!("{} needs argument {}", name, i + 1))
    })?;
    if !z.im.is_zero() {
        return Err(NumericError::InvalidArgument(format!(
            "{} needs a real argument",
            name
        )));
    }
    Ok(z.re.clone())
}

fn int_arg(args: &[BigComplex], i: usize, name: &str) -> Result<u32, NumericError> {
    let x = real_arg(args, i, name)?;
    x.to_integer()
        .filter(|_| x.is_integer())
        .and_then(|n| n.to_u32())
        .ok_or_else(|| {
            NumericError::InvalidArgument(format!("{} needs a nonnegative integer", name))
        })
}

/// Catalog dispatcher for the depth-one special values.
pub fn special(
    name: &str,
    args: &[BigComplex],
    ctx: &PrecisionContext,
) -> Result<BigComplex, NumericError> {
    let real = |x: Float| Ok(BigComplex::from_real(x));
    match name {
        "pi" => real(pi(ctx)),
        "log2" => real(log2(ctx)),
        "euler_gamma" => real(euler_gamma(ctx)),
        "riemann_zeta" | "zeta" => real(riemann_zeta(int_arg(args, 0, name)?, ctx)?),
        "dirichlet_beta" | "beta" => real(dirichlet_beta(int_arg(args, 0, name)?, ctx)?),
        "euler_number" => {
            let n = int_arg(args, 0, name)? as usize;
            real(rational_to_float(
                &BigRational::from_integer(euler_number(n)),
                ctx.prec(),
            ))
        }
        "gamma" | "loggamma" | "digamma" => {
            let x = real_arg(args, 0, name)?;
            if x <= 0 && x.is_integer() {
                return Err(NumericError::Pole(format!("{} at {}", name, x)));
            }
            let x = Float::with_val(ctx.prec(), x);
            real(match name {
                "gamma" => x.gamma(),
                "loggamma" => x.ln_gamma(),
                _ => x.digamma(),
            })
        }
        "trigamma" => real(trigamma(&real_arg(args, 0, name)?, ctx)?),
        "polygamma" => real(polygamma(
            int_arg(args, 0, name)?,
            &real_arg(args, 1, name)?,
            ctx,
        )?),
        "hurwitz_zeta" => real(hurwitz_zeta(
            int_arg(args, 0, name)?,
            &real_arg(args, 1, name)?,
            ctx,
        )?),
        "A" => series_a(
            args.first()
                .ok_or_else(|| NumericError::InvalidArgument("A(z)".into()))?,
            ctx,
        ),
        "B" => series_b(
            args.first()
                .ok_or_else(|| NumericError::InvalidArgument("B(z)".into()))?,
            ctx,
        ),
        "C" => series_c(
            args.first()
                .ok_or_else(|| NumericError::InvalidArgument("C(z)".into()))?,
            ctx,
        ),
        _ => Err(NumericError::InvalidArgument(format!(
            "unknown special function `{}`",
            name
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::frac;
    use num_traits::ToPrimitive;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() < tol
    }

    #[test]
    fn euler_numbers() {
        let e: Vec<i64> = (0..=8).map(|n| euler_number(n).to_i64().unwrap()).collect();
        assert_eq!(e, vec![1, 0, -1, 0, 5, 0, -61, 0, 1385]);
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(8);
        assert_eq!(b[1], frac(-1, 2));
        assert_eq!(b[2], frac(1, 6));
        assert_eq!(b[4], frac(-1, 30));
        assert_eq!(b[8], frac(-1, 30));
        assert!(b[7].is_zero());
    }

    #[test]
    fn beta_values() {
        let ctx = PrecisionContext::new(40);
        let b1 = dirichlet_beta(1, &ctx).unwrap();
        let quarter_pi = pi(&ctx) / 4u32;
        assert!(close(&b1, &quarter_pi, 1e-40));
        let catalan = Float::with_val(ctx.prec(), Constant::Catalan);
        assert!(close(&dirichlet_beta(2, &ctx).unwrap(), &catalan, 1e-40));
        // beta(3) = pi^3 / 32
        let b3 = Float::with_val(ctx.prec(), pi(&ctx).pow(3u32)) / 32u32;
        assert!(close(&dirichlet_beta(3, &ctx).unwrap(), &b3, 1e-40));
    }

    #[test]
    fn hurwitz_and_polygamma() {
        let ctx = PrecisionContext::new(40);
        let p = ctx.prec();
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        let half = Float::with_val(p, 0.5);
        for s in [2u32, 3, 5] {
            let lhs = hurwitz_zeta(s, &half, &ctx).unwrap();
            let rhs = riemann_zeta(s, &ctx).unwrap() * ((1u64 << s) - 1);
            assert!(close(&lhs, &rhs, 1e-38), "s = {}", s);
        }
        // trigamma(1) = zeta(2); psi''(1) = -2 zeta(3)
        assert!(close(
            &trigamma(&Float::with_val(p, 1), &ctx).unwrap(),
            &riemann_zeta(2, &ctx).unwrap(),
            1e-40
        ));
        let pg2 = polygamma(2, &Float::with_val(p, 1), &ctx).unwrap();
        let expected = -riemann_zeta(3, &ctx).unwrap() * 2u32;
        assert!(close(&pg2, &expected, 1e-39));
        // zeta(s,1/4) - zeta(s,3/4) = 4^s beta(s)
        let q1 = hurwitz_zeta(2, &Float::with_val(p, 0.25), &ctx).unwrap();
        let q3 = hurwitz_zeta(2, &Float::with_val(p, 0.75), &ctx).unwrap();
        let diff = Float::with_val(p, &q1 - &q3);
        assert!(close(
            &diff,
            &(dirichlet_beta(2, &ctx).unwrap() * 16u32),
            1e-38
        ));
    }

    #[test]
    fn a_series_matches_digamma_form() {
        let ctx = PrecisionContext::new(30);
        let p = ctx.prec();
        let z = BigComplex::from_f64(p, 0.5, 0.0);
        let a = series_a(&z, &ctx).unwrap();
        // A(z) = psi(1) - (psi(1+z) + psi(1-z))/2
        let psi = |x: f64| Float::with_val(p, x).digamma();
        let rhs = psi(1.0) - (psi(1.5) + psi(0.5)) / 2u32;
        assert!(close(&a.re, &rhs, 1e-30));
        // C(z) leading coefficient is Catalan's constant
        let small = BigComplex::from_f64(p, 1e-6, 0.0);
        let c = series_c(&small, &ctx).unwrap();
        let lead = Float::with_val(p, &c.re / &small.re);
        assert!(close(&lead, &Float::with_val(p, Constant::Catalan), 1e-11));
    }

    #[test]
    fn catalog_dispatch() {
        let ctx = PrecisionContext::new(20);
        let p = ctx.prec();
        let z3 = special("riemann_zeta", &[BigComplex::from_int(p, 3)], &ctx).unwrap();
        assert!((z3.re.to_f64() - 1.2020569031595942).abs() < 1e-15);
        assert!(special("gamma", &[BigComplex::from_int(p, -2)], &ctx).is_err());
        assert!(special("nope", &[], &ctx).is_err());
        assert_eq!(
            special("euler_number", &[BigComplex::from_int(p, 4)], &ctx)
                .unwrap()
                .re
                .to_f64(),
            5.0
        );
    }
}
