//! Closed-form generating series. Each entry returns a `TruncSeries` in
//! `u` (and `v` or `lambda` for the two-variable ones).

use rug::Float;

use super::functions::{apply, log_gamma_shift, pi_c, trigamma_one_shift, Fun, GammaBase};
use super::series::{SeriesError, TruncSeries};
use crate::numerics::{
    euler_gamma, euler_number, log2, pi, riemann_zeta, BigComplex, PrecisionContext,
};
use crate::words::{frac, int};

type R = Result<TruncSeries, SeriesError>;

/// Catalog entry: name, number of variables, description.
pub struct Entry {
    pub name: &'static str,
    pub vars: usize,
    pub about: &'static str,
}

pub const CATALOG: &[Entry] = &[
    Entry {
        name: "F",
        vars: 2,
        about: "sum (-1)^(a+b) zeta({2}^a,3,{2}^b) u^2a v^2b",
    },
    Entry {
        name: "Ft",
        vars: 2,
        about: "sum (-1)^(a+b) t({2}^a,3,{2}^b) u^2a v^2b",
    },
    Entry {
        name: "G2",
        vars: 1,
        about: "zeta({2}^n) u^2n = sinh(pi u)/(pi u)",
    },
    Entry {
        name: "Gt2",
        vars: 1,
        about: "t({2}^n) u^2n = cosh(pi u/2)",
    },
    Entry {
        name: "Gts2",
        vars: 1,
        about: "t*({2}^n) u^2n = sec(pi u/2), via Euler numbers",
    },
    Entry {
        name: "G23",
        vars: 1,
        about: "zeta({2}^n,3) u^(2n+3)",
    },
    Entry {
        name: "G12",
        vars: 1,
        about: "shuffle-reg zeta(1,{2}^n) u^(2n+1), equal to G23",
    },
    Entry {
        name: "Gt23",
        vars: 1,
        about: "t({2}^n,3) u^(2n+3)",
    },
    Entry {
        name: "Gt32",
        vars: 1,
        about: "t(3,{2}^n) u^(2n+3)",
    },
    Entry {
        name: "Gts23",
        vars: 1,
        about: "t*({2}^n,3) u^(2n+3)",
    },
    Entry {
        name: "G21",
        vars: 1,
        about: "shuffle-reg zeta({2}^n,1) u^(2n+1)",
    },
    Entry {
        name: "G211",
        vars: 1,
        about: "shuffle-reg zeta({2}^n,1,1) u^(2n+2)",
    },
    Entry {
        name: "G121",
        vars: 1,
        about: "shuffle-reg zeta(1,{2}^n,1) u^(2n+2)",
    },
    Entry {
        name: "OZ232",
        vars: 1,
        about: "sum_i zeta({2}^i,3,{2}^(n-i)) z^n",
    },
    Entry {
        name: "OZ2323",
        vars: 1,
        about: "sum zeta({2}^i,3,{2}^j,3,{2}^k) + sum zeta({2}^i,4,{2}^(n-i)), z^n",
    },
    Entry {
        name: "OZ242",
        vars: 1,
        about: "sum_i zeta({2}^i,4,{2}^(n-i)) z^n",
    },
    Entry {
        name: "Gt3223",
        vars: 1,
        about: "t(3,{2}^n,3) u^(2n+6)",
    },
    Entry {
        name: "Gts3223",
        vars: 1,
        about: "t*(3,{2}^n,3) u^(2n+6)",
    },
    Entry {
        name: "Gt21",
        vars: 1,
        about: "reg t({2}^n,1) u^(2n+1), T = log 2",
    },
    Entry {
        name: "Gt12",
        vars: 1,
        about: "reg t(1,{2}^n) u^(2n+1), T = log 2",
    },
    Entry {
        name: "Gt121",
        vars: 1,
        about: "reg t(1,{2}^n,1) u^(2n+2), T = log 2",
    },
    Entry {
        name: "Gts21",
        vars: 1,
        about: "reg t*({2}^n,1) u^(2n+1), T = log 2",
    },
    Entry {
        name: "Gts121",
        vars: 1,
        about: "reg t*(1,{2}^n,1) u^(2n+2), T = log 2",
    },
    Entry {
        name: "L",
        vars: 1,
        about: "(-1)^r reg zeta({1bar}^r,1) x^r, T = 0",
    },
    Entry {
        name: "Gtm1",
        vars: 1,
        about: "t({1bar}^n) u^n",
    },
    Entry {
        name: "Gtm11",
        vars: 1,
        about: "reg t({1bar}^n,1) u^(n+1), T = log 2",
    },
    Entry {
        name: "Gt1m11",
        vars: 1,
        about: "reg t(1,{1bar}^n,1) u^(n+2), T = log 2",
    },
    Entry {
        name: "Gts1m11",
        vars: 1,
        about: "reg t*(1,{1bar}^n,1) u^(n+2), T = log 2",
    },
    Entry {
        name: "E",
        vars: 1,
        about: "reg zeta({1}^j) t^j = exp(-gamma t)/Gamma(1+t), T = 0",
    },
    Entry {
        name: "Tdepth1",
        vars: 1,
        about: "depth-one t series at y minus at -y, T = log 2",
    },
    Entry {
        name: "Tuuu",
        vars: 1,
        about: "(-1)^n reg t^(1/2)({1}^n) u^n, T = log 2",
    },
    Entry {
        name: "T00X",
        vars: 2,
        about: "reg zeta({1}^(i-1), a+1) x^a y^i, T = 0",
    },
    Entry {
        name: "R",
        vars: 2,
        about: "t^(1/2)({1}^n, 2l+2) u^n lambda^(2l+2)",
    },
    Entry {
        name: "S",
        vars: 2,
        about: "reg t^(1/2)(2l+2, {1}^n) u^n lambda^(2l+2), T = log 2",
    },
    Entry {
        name: "Gh12",
        vars: 1,
        about: "t^(1/2)({1}^i, 2) u^(i+2)",
    },
    Entry {
        name: "Gh14",
        vars: 1,
        about: "t^(1/2)({1}^i, 4) u^(i+4)",
    },
    Entry {
        name: "Gh212sym",
        vars: 1,
        about: "t^(1/2)(2,{1}^n,2) (1 + (-1)^n) u^(n+4)",
    },
    Entry {
        name: "Gh414",
        vars: 1,
        about: "t^(1/2)(4,{1}^2i,4) u^(8+2i)",
    },
];

pub const DEFAULT_ORDER: usize = 16;
pub const DEFAULT_ORDERS_2D: (usize, usize) = (12, 8);

pub fn entry(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}

struct Build<'a> {
    ctx: &'a PrecisionContext,
    orders: (usize, usize),
}

impl<'a> Build<'a> {
    fn new(ctx: &'a PrecisionContext, orders: (usize, usize)) -> Self {
        Build { ctx, orders }
    }

    fn p(&self) -> u32 {
        self.ctx.prec()
    }

    fn u(&self) -> TruncSeries {
        TruncSeries::var(self.p(), self.orders, 0)
    }

    fn v(&self) -> TruncSeries {
        TruncSeries::var(self.p(), self.orders, 1)
    }

    fn k(&self, x: BigComplex) -> TruncSeries {
        TruncSeries::constant(self.p(), self.orders, x)
    }

    fn q(&self, n: i64, d: i64) -> BigComplex {
        BigComplex::from_rational(self.p(), &frac(n, d))
    }

    fn i(&self) -> BigComplex {
        BigComplex::i(self.p())
    }

    fn pi(&self) -> BigComplex {
        pi_c(self.ctx)
    }

    fn log2(&self) -> BigComplex {
        BigComplex::from_real(log2(self.ctx))
    }

    fn gamma(&self) -> BigComplex {
        BigComplex::from_real(euler_gamma(self.ctx))
    }

    fn pi_pow(&self, e: u32) -> BigComplex {
        self.pi().powu(e)
    }

    /// `zeta(2) = pi^2/6`, `t(2) = pi^2/8`, `t(4) = pi^4/96`.
    fn zeta2(&self) -> BigComplex {
        self.pi_pow(2).div_u(6)
    }

    fn t2(&self) -> BigComplex {
        self.pi_pow(2).div_u(8)
    }

    fn t4(&self) -> BigComplex {
        self.pi_pow(4).div_u(96)
    }

    /// `f(c * x)` for a variable series `x`.
    fn f(&self, fun: Fun, x: &TruncSeries, c: &BigComplex) -> R {
        apply(fun, &x.scale(c), self.ctx)
    }

    fn lg1(&self, h: &TruncSeries) -> R {
        log_gamma_shift(GammaBase::One, h, self.ctx)
    }

    fn lgh(&self, h: &TruncSeries) -> R {
        log_gamma_shift(GammaBase::Half, h, self.ctx)
    }

    fn pow(&self, x: &TruncSeries, e: usize) -> TruncSeries {
        let mut out = self.k(BigComplex::one(self.p()));
        for _ in 0..e {
            out = &out * x;
        }
        out
    }

    fn tan(&self, x: &TruncSeries, c: &BigComplex) -> R {
        self.f(Fun::Sin, x, c)?.div(&self.f(Fun::Cos, x, c)?)
    }
}

/// `f(c sqrt(z))` for an even function, as a series in `z`.
fn even_in_sqrt(fun: Fun, c2: &BigComplex, n: usize, ctx: &PrecisionContext) -> R {
    let full = super::functions::coeffs(fun, 2 * n + 1, ctx)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut pw = BigComplex::one(ctx.prec());
    for k in 0..=n {
        out.push(&full[2 * k] * &pw);
        pw = &pw * c2;
    }
    Ok(TruncSeries::univariate(ctx.prec(), out))
}

fn uni(n: usize) -> (usize, usize) {
    (n, 0)
}

fn f_zeta(ctx: &PrecisionContext, (n0, n1): (usize, usize)) -> R {
    let b = Build::new(ctx, (n0 + 2, n1));
    let (u, v, pi) = (b.u(), b.v(), b.pi());
    let a_sum = &(&apply(Fun::A, &(&u + &v), ctx)? + &apply(Fun::A, &(&u - &v), ctx)?)
        - &apply(Fun::A, &v, ctx)?.scale(&b.q(2, 1));
    let first = (&b.f(Fun::Sinc, &v, &pi)? * &a_sum).div_monomial(2, 0);
    let b2 = Build::new(ctx, (n0 + 1, n1 + 1));
    let (u, v) = (b2.u(), b2.v());
    let b_diff = &apply(Fun::B, &(&u + &v), ctx)? - &apply(Fun::B, &(&u - &v), ctx)?;
    let second = (&b2.f(Fun::Sinc, &u, &pi)? * &b_diff).div_monomial(1, 1);
    // the overall sign is fixed by F(0,0) = zeta(3)
    Ok(&second - &first)
}

fn f_t(ctx: &PrecisionContext, (n0, n1): (usize, usize)) -> R {
    let b = Build::new(ctx, (n0 + 1, n1 + 1));
    let (u, v) = (b.u(), b.v());
    let half = b.q(1, 2);
    let plus = (&u + &v).scale(&half);
    let minus = (&u - &v).scale(&half);
    let hp = b.pi().scale_rational(&frac(1, 2));
    let a = &apply(Fun::A, &plus, ctx)? - &apply(Fun::A, &minus, ctx)?;
    let bb = &apply(Fun::B, &plus, ctx)? - &apply(Fun::B, &minus, ctx)?;
    let num = &(&b.f(Fun::Cos, &v, &hp)? * &a) + &(&b.f(Fun::Cos, &u, &hp)? * &bb);
    Ok(num.div_monomial(1, 1).scale(&half))
}

fn g23(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let (u, i, pi) = (b.u(), b.i(), b.pi());
    let first = (&u * &b.f(Fun::A, &u, &i)?).scale(&b.q(2, 1));
    let coef = &i.scale_rational(&int(2)) / &pi;
    let second = (&(&u * &b.f(Fun::DB, &u, &i)?) * &b.f(Fun::Sinh, &u, &pi)?).scale(&coef);
    Ok(&first - &second)
}

fn gt23(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let iu2 = b.i().scale_rational(&frac(1, 2));
    let u2 = &u * &u;
    let c = b.i().scale_rational(&frac(-1, 2));
    let first = &u2 * &b.f(Fun::DA, &u, &iu2)?;
    let cosh = b.f(Fun::Cosh, &u, &b.pi().scale_rational(&frac(1, 2)))?;
    let second = &(&u2 * &b.f(Fun::DB, &u, &iu2)?) * &cosh;
    Ok((&first + &second).scale(&c))
}

/// `t(3,{2}^n)` from `u^3 F^t(0, i u)`.
fn gt32(ctx: &PrecisionContext, n: usize) -> R {
    let mut out = TruncSeries::zero(ctx.prec(), uni(n));
    if n < 3 {
        return Ok(out);
    }
    let ft = f_t(ctx, (0, n - 3))?.rescale(1, &BigComplex::i(ctx.prec()));
    for k in 0..=(n - 3) {
        out.set(k + 3, 0, ft.coeff(0, k));
    }
    Ok(out)
}

fn gts23(ctx: &PrecisionContext, n: usize) -> R {
    // i G^t_{3{2}}(i u) sec(pi u/2)
    let b = Build::new(ctx, uni(n));
    let g = gt32(ctx, n)?.rescale(0, &b.i()).scale(&b.i());
    Ok(&g * &b.f(Fun::Sec, &b.u(), &b.pi().scale_rational(&frac(1, 2)))?)
}

fn g21(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let (u, i, pi) = (b.u(), b.i(), b.pi());
    let coef = &BigComplex::from_int(b.p(), 2) / &pi;
    Ok((&b.f(Fun::A, &u, &i)? * &b.f(Fun::Sinh, &u, &pi)?).scale(&coef))
}

fn g211(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let (u, i, pi) = (b.u(), b.i(), b.pi());
    let s = b.f(Fun::Sinhc, &u, &pi)?;
    let a = b.f(Fun::A, &u, &i)?;
    let u2 = &u * &u;
    let half = b.q(1, 2);
    let mut out = &s.recip()?.scale(&half) - &s.scale(&half);
    out = &out + &(&u2 * &s).scale(&b.zeta2());
    out = &out + &(&(&u2 * &(&a * &a)) * &s).scale(&b.q(2, 1));
    Ok(out)
}

fn g121(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let (u, i, pi) = (b.u(), b.i(), b.pi());
    let s = b.f(Fun::Sinhc, &u, &pi)?;
    let a = b.f(Fun::A, &u, &i)?;
    let db = b.f(Fun::DB, &u, &i)?;
    let u2 = &u * &u;
    let mut out = b.k(b.q(1, 2));
    out = &out - &u2.scale(&b.zeta2());
    out = &out + &(&u2 * &(&a * &a)).scale(&b.q(2, 1));
    // 3 zeta(2) u^2 / sinh(pi u)^2 = (1/2) / sinhc(pi u)^2
    out = &out - &(&s * &s).recip()?.scale(&b.q(1, 2));
    let cubic = &(&(&u2 * &u) * &(&a * &db)) * &s;
    out = &out - &cubic.scale(&i.scale_rational(&int(4)));
    Ok(out)
}

fn oz232(ctx: &PrecisionContext, n: usize) -> R {
    let minus_one = BigComplex::from_int(ctx.prec(), -1);
    let pi2 = pi_c(ctx).powu(2);
    let a = even_in_sqrt(Fun::A, &minus_one, n + 1, ctx)?;
    let s = even_in_sqrt(Fun::Sinhc, &pi2, n + 1, ctx)?;
    Ok((-&(&a * &s)).div_monomial(1, 0))
}

fn oz2323(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n + 2));
    let minus_one = BigComplex::from_int(ctx.prec(), -1);
    let pi2 = b.pi_pow(2);
    let a = even_in_sqrt(Fun::A, &minus_one, n + 2, ctx)?;
    let s = even_in_sqrt(Fun::Sinhc, &pi2, n + 2, ctx)?;
    let c = even_in_sqrt(Fun::Cosh, &pi2, n + 2, ctx)?;
    let w = &c.div(&s)? - &(&s * &s).recip()?;
    let z = b.u();
    let inner = &(&z * &(&a * &a).add_constant(&b.zeta2())) - &w.scale(&b.q(1, 4));
    Ok((&s * &inner).scale(&b.q(1, 2)).div_monomial(2, 0))
}

fn oz242(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n + 2));
    let pi2 = b.pi_pow(2);
    let s = even_in_sqrt(Fun::Sinhc, &pi2, n + 2, ctx)?;
    let c = even_in_sqrt(Fun::Cosh, &pi2, n + 2, ctx)?;
    let num = &(&s - &c) + &(&b.u() * &s).scale(&b.zeta2().scale_rational(&int(2)));
    Ok(num.scale(&b.q(1, 2)).div_monomial(2, 0))
}

/// `8 pi^(2n+4) / (2n+6)! * binom(n+3, n)`.
pub fn oz242_explicit(n: usize, ctx: &PrecisionContext) -> BigComplex {
    let p = ctx.prec();
    let mut f = Float::with_val(p, 1);
    for k in 2..=(2 * n + 6) {
        f *= k as u32;
    }
    let binom = ((n + 1) * (n + 2) * (n + 3) / 6) as u32;
    let v = Float::with_val(p, pi(ctx).pow_u(2 * n as u32 + 4)) * 8u32 * binom / f;
    BigComplex::from_real(v)
}

trait PowU {
    fn pow_u(self, e: u32) -> Float;
}

impl PowU for Float {
    fn pow_u(self, e: u32) -> Float {
        use rug::ops::Pow;
        self.pow(e)
    }
}

fn gt3223(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let iu2 = b.i().scale_rational(&frac(1, 2));
    let hp = b.pi().scale_rational(&frac(1, 2));
    let da = b.f(Fun::DA, &u, &iu2)?;
    let db = b.f(Fun::DB, &u, &iu2)?;
    let u2 = &u * &u;
    let u4 = &u2 * &u2;
    let mut out = &u2.scale(&b.t2()) - &u4.scale(&b.t4());
    out = &out - &(&u4 * &(&(&da * &da) + &(&db * &db))).scale(&b.q(1, 8));
    out = &out - &(&(&u4 * &(&da * &db)) * &b.f(Fun::Cosh, &u, &hp)?).scale(&b.q(1, 4));
    // 2 t(2)^2 u^4 csch^2(pi u/2) = (pi^2/8) u^2 / sinhc(pi u/2)^2
    let s = b.f(Fun::Sinhc, &u, &hp)?;
    out = &out - &(&u2 * &(&s * &s).recip()?).scale(&b.t2());
    Ok(out)
}

fn gts3223(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let half = b.q(1, 2);
    let hp = b.pi().scale_rational(&frac(1, 2));
    let da = b.f(Fun::DA, &u, &half)?;
    let db = b.f(Fun::DB, &u, &half)?;
    let u2 = &u * &u;
    let u4 = &u2 * &u2;
    let mut out = -&(&u2.scale(&b.t2()) + &u4.scale(&b.t4()));
    out = &out + &(&u4 * &(&(&da * &da) + &(&db * &db))).scale(&b.q(1, 8));
    out = &out + &(&(&u4 * &(&da * &db)) * &b.f(Fun::Sec, &u, &hp)?).scale(&b.q(1, 4));
    let s = b.f(Fun::Sinc, &u, &hp)?;
    out = &out + &(&u2 * &(&s * &s).recip()?).scale(&b.t2());
    Ok(out)
}

fn gt21(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let iu2 = b.i().scale_rational(&frac(1, 2));
    let cosh = b.f(Fun::Cosh, &u, &b.pi().scale_rational(&frac(1, 2)))?;
    let inner =
        (&(&cosh * &b.f(Fun::A, &u, &iu2)?) + &b.f(Fun::B, &u, &iu2)?).add_constant(&b.log2());
    Ok(&u * &inner)
}

fn gt12(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let iu2 = b.i().scale_rational(&frac(1, 2));
    let cosh = b.f(Fun::Cosh, &u, &b.pi().scale_rational(&frac(1, 2)))?;
    let inner =
        &b.f(Fun::A, &u, &iu2)? + &(&cosh * &b.f(Fun::B, &u, &iu2)?.add_constant(&b.log2()));
    Ok(&u * &inner)
}

fn gt121(ctx: &PrecisionContext, n: usize) -> R {
    // -pi^2 u^2/16 + (1/2) G^t_{{2}1}(u)^2 - t(2) u^2 G_{{2}1}(u/2)^2
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let u2 = &u * &u;
    let g = gt21(ctx, n)?;
    let z = g21(ctx, n)?.rescale(0, &b.q(1, 2));
    let mut out = u2.scale(&b.pi_pow(2).scale_rational(&frac(-1, 16)));
    out = &out + &(&g * &g).scale(&b.q(1, 2));
    out = &out - &(&u2 * &(&z * &z)).scale(&b.t2());
    Ok(out)
}

fn gts21(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let half = b.q(1, 2);
    let sec = b.f(Fun::Sec, &u, &b.pi().scale_rational(&frac(1, 2)))?;
    let inner =
        (&b.f(Fun::B, &u, &half)? + &(&b.f(Fun::A, &u, &half)? * &sec)).add_constant(&b.log2());
    Ok(&u * &inner)
}

fn gts121(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let half = b.q(1, 2);
    let l2 = b.log2();
    let sec = b.f(Fun::Sec, &u, &b.pi().scale_rational(&frac(1, 2)))?;
    let a = b.f(Fun::A, &u, &half)?;
    let bb = b.f(Fun::B, &u, &half)?;
    let u2 = &u * &u;
    let two_l2 = l2.scale_rational(&int(2));
    let mut inner = b.k(&b.pi_pow(2).scale_rational(&frac(1, 8)) + &(&l2 * &l2));
    inner = &inner + &(&bb * &bb.add_constant(&two_l2));
    let tail = &(&a + &(&bb * &sec).scale(&b.q(2, 1))) + &sec.scale(&two_l2);
    inner = &inner + &(&a * &tail);
    Ok((&u2 * &inner).scale(&half))
}

fn l_series(ctx: &PrecisionContext, n: usize) -> R {
    // x L(x) = 1 - Q(x) (x(-log 2 - 2 A(x)) + pi x / sin(pi x))
    let b = Build::new(ctx, uni(n + 1));
    let x = b.u();
    let half = b.q(1, 2);
    let q = (-&(&b.lg1(&x.scale(&b.q(-1, 2)))? + &b.lgh(&x.scale(&half))?)).exp()?;
    let a = apply(Fun::A, &x, ctx)?;
    let lin = &x * &(-&a.scale(&b.q(2, 1))).add_constant(&-b.log2());
    let pole = b.f(Fun::Sinc, &x, &b.pi())?.recip()?;
    let xl = (-&(&q * &(&lin + &pole))).add_constant(&BigComplex::one(b.p()));
    Ok(xl.div_monomial(1, 0))
}

fn gtm1(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let qp = b.pi().scale_rational(&frac(1, 4));
    Ok(&b.f(Fun::Cos, &b.u(), &qp)? - &b.f(Fun::Sin, &b.u(), &qp)?)
}

fn gtm11(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let l2 = b.log2();
    let first = &gtm1(ctx, n)?
        * &apply(Fun::A, &u.scale(&b.q(1, 2)), ctx)?
            .scale(&b.q(2, 1))
            .add_constant(&l2);
    let mut second =
        &apply(Fun::A, &u.scale(&b.q(1, 4)), ctx)? - &apply(Fun::A, &u.scale(&b.q(1, 8)), ctx)?;
    second =
        (&second + &apply(Fun::C, &u.scale(&b.q(1, 2)), ctx)?.scale(&b.q(2, 1))).add_constant(&l2);
    Ok((&u * &(&first + &second)).scale(&b.q(1, 2)))
}

fn gt1m11(ctx: &PrecisionContext, n: usize) -> R {
    // -t(2) u^2/2 + G^t_{{1bar}1}(u)^2/2 + (pi u^2/16)(2(L(u/2) - L(-u/2)) + u L(u/2) L(-u/2))
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let u2 = &u * &u;
    let g = gtm11(ctx, n)?;
    let l = l_series(ctx, n)?;
    let lp = l.rescale(0, &b.q(1, 2));
    let lm = l.rescale(0, &b.q(-1, 2));
    let mut out = &u2.scale(&b.t2().scale_rational(&frac(-1, 2))) + &(&g * &g).scale(&b.q(1, 2));
    let bracket = &(&lp - &lm).scale(&b.q(2, 1)) + &(&u * &(&lp * &lm));
    out = &out + &(&u2 * &bracket).scale(&b.pi().scale_rational(&frac(1, 16)));
    Ok(out)
}

fn gts1m11(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let u2 = &u * &u;
    let l2 = b.log2();
    let pi = b.pi();
    let a2 = apply(Fun::A, &u.scale(&b.q(1, 2)), ctx)?
        .scale(&b.q(2, 1))
        .add_constant(&l2);
    let mut c =
        &apply(Fun::A, &u.scale(&b.q(1, 8)), ctx)? - &apply(Fun::A, &u.scale(&b.q(1, 4)), ctx)?;
    c = (&c + &apply(Fun::C, &u.scale(&b.q(1, 2)), ctx)?.scale(&b.q(2, 1)))
        .add_constant(&-l2.clone());
    let hp = pi.scale_rational(&frac(1, 2));
    let mut out = &u.scale(&pi.scale_rational(&frac(1, 4)))
        + &u2.scale(&b.pi_pow(2).scale_rational(&frac(1, 16)));
    // -(pi^2/8) u^2 csc(pi u/2) = -(pi/4) u / sinc(pi u/2)
    out = &out - &(&u * &b.f(Fun::Sinc, &u, &hp)?.recip()?).scale(&pi.scale_rational(&frac(1, 4)));
    out = &out + &(&u2 * &(&(&a2 * &a2) + &(&c * &c))).scale(&b.q(1, 8));
    let sec = b.f(Fun::Sec, &u, &hp)?;
    let cross = &(&(&u2 * &(&a2 * &c)) * &gtm1(ctx, n)?) * &sec;
    out = &out - &cross.scale(&b.q(1, 4));
    Ok(out)
}

fn e_series(ctx: &PrecisionContext, orders: (usize, usize), var: usize) -> R {
    let b = Build::new(ctx, orders);
    let t = if var == 0 { b.u() } else { b.v() };
    // e^{-gamma t} / Gamma(1+t)
    (-&(&b.lg1(&t)? + &t.scale(&b.gamma()))).exp()
}

fn tdepth1(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    Ok(b.tan(&b.u(), &b.pi().scale_rational(&frac(1, 2)))?
        .scale(&b.pi().scale_rational(&frac(1, 2))))
}

fn tuuu(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let e = &(&u.scale(&b.gamma().scale_rational(&frac(1, 2))) + &b.lgh(&u.scale(&b.q(1, 4)))?)
        - &b.lgh(&u.scale(&b.q(-1, 4)))?;
    e.exp()
}

fn t00x(ctx: &PrecisionContext, orders: (usize, usize)) -> R {
    let b = Build::new(ctx, orders);
    let (x, y) = (b.u(), b.v());
    let e = e_series(ctx, orders, 1)?;
    let ratio = (&(&b.lg1(&-&x)? + &b.lg1(&-&y)?) - &b.lg1(&-&(&x + &y))?).exp()?;
    Ok(&e - &ratio)
}

fn r_series(ctx: &PrecisionContext, orders: (usize, usize), s_form: bool) -> R {
    let b = Build::new(ctx, orders);
    let (u, l) = (b.u(), b.v());
    let sign = if s_form { 1 } else { -1 };
    let hl = l.scale(&b.q(1, 2));
    let qu = u.scale(&b.q(sign, 4));
    let mut expo = -&(&b.lg1(&(&qu - &hl))? + &b.lg1(&(&qu + &hl))?);
    if s_form {
        expo = &expo - &u.scale(&b.gamma().scale_rational(&frac(1, 2)));
    } else {
        expo = &(&expo + &b.lgh(&u.scale(&b.q(-1, 4)))?) - &b.lgh(&u.scale(&b.q(1, 4)))?;
    }
    let sec_l = b.f(Fun::Sec, &l, &b.pi().scale_rational(&frac(1, 2)))?;
    let sec_u = b.f(Fun::Sec, &u, &b.pi().scale_rational(&frac(1, 4)))?;
    let body = &(&sec_l * &sec_u) * &expo.exp()?;
    Ok(body
        .scale(&b.pi_pow(2).scale_rational(&frac(1, 8)))
        .mul_monomial(0, 2))
}

fn gh12(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let q = |a: i64, d: i64| u.scale(&b.q(a, d));
    let mut expo = u.scale(&b.log2());
    expo = &expo + &b.lg1(&q(-1, 2))?;
    expo = &expo + &b.lg1(&q(1, 4))?.scale(&b.q(2, 1));
    expo = &expo - &b.lg1(&q(1, 2))?;
    expo = &expo - &b.lg1(&q(-1, 4))?.scale(&b.q(2, 1));
    let tan = b.tan(&u, &b.pi().scale_rational(&frac(1, 4)))?;
    Ok((&(&expo.exp()? * &u) * &tan).scale(&b.pi().scale_rational(&frac(1, 2))))
}

fn psi1_factor(b: &Build, sign: i64) -> R {
    // pi^2 - 2 psi'(1 + sign u/4)
    let h = b.u().scale(&b.q(sign, 4));
    Ok((-&trigamma_one_shift(&h, b.ctx)?.scale(&b.q(2, 1))).add_constant(&b.pi_pow(2)))
}

fn gh14(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let sec = b.f(Fun::Sec, &u, &b.pi().scale_rational(&frac(1, 4)))?;
    let expo = &(&b.lg1(&u.scale(&b.q(-1, 4)))?.scale(&b.q(-2, 1))
        + &b.lgh(&u.scale(&b.q(-1, 4)))?)
        - &b.lgh(&u.scale(&b.q(1, 4)))?;
    let body = &(&sec * &expo.exp()?) * &psi1_factor(&b, -1)?;
    Ok((&b.pow(&u, 4) * &body).scale(&b.pi_pow(2).scale_rational(&frac(1, 64))))
}

fn gh212sym(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let tan = b.tan(&u, &b.pi().scale_rational(&frac(1, 4)))?;
    Ok((&(&u * &u) * &(&tan * &tan)).scale(&b.pi_pow(2).scale_rational(&frac(1, 4))))
}

fn gh414(ctx: &PrecisionContext, n: usize) -> R {
    let b = Build::new(ctx, uni(n));
    let u = b.u();
    let tan = b.tan(&u, &b.pi().scale_rational(&frac(1, 4)))?;
    let body = &(&(&tan * &tan) * &psi1_factor(&b, -1)?) * &psi1_factor(&b, 1)?;
    Ok((&b.pow(&u, 6) * &body).scale(&b.pi_pow(2).scale_rational(&frac(1, 512))))
}

/// Closed form by catalog name. `orders.1` is ignored for one-variable
/// series.
pub fn closed_form(name: &str, orders: (usize, usize), ctx: &PrecisionContext) -> R {
    let n = orders.0;
    let two = |o: (usize, usize)| if o.1 == 0 { DEFAULT_ORDERS_2D } else { o };
    match name {
        "F" => f_zeta(ctx, two(orders)),
        "Ft" => f_t(ctx, two(orders)),
        "G2" => {
            let b = Build::new(ctx, uni(n));
            b.f(Fun::Sinhc, &b.u(), &b.pi())
        }
        "Gt2" => {
            let b = Build::new(ctx, uni(n));
            b.f(Fun::Cosh, &b.u(), &b.pi().scale_rational(&frac(1, 2)))
        }
        "Gts2" => {
            let b = Build::new(ctx, uni(n));
            b.f(Fun::Sec, &b.u(), &b.pi().scale_rational(&frac(1, 2)))
        }
        "G23" | "G12" => g23(ctx, n),
        "Gt23" => gt23(ctx, n),
        "Gt32" => gt32(ctx, n),
        "Gts23" => gts23(ctx, n),
        "G21" => g21(ctx, n),
        "G211" => g211(ctx, n),
        "G121" => g121(ctx, n),
        "OZ232" => oz232(ctx, n),
        "OZ2323" => oz2323(ctx, n),
        "OZ242" => oz242(ctx, n),
        "Gt3223" => gt3223(ctx, n),
        "Gts3223" => gts3223(ctx, n),
        "Gt21" => gt21(ctx, n),
        "Gt12" => gt12(ctx, n),
        "Gt121" => gt121(ctx, n),
        "Gts21" => gts21(ctx, n),
        "Gts121" => gts121(ctx, n),
        "L" => l_series(ctx, n),
        "Gtm1" => gtm1(ctx, n),
        "Gtm11" => gtm11(ctx, n),
        "Gt1m11" => gt1m11(ctx, n),
        "Gts1m11" => gts1m11(ctx, n),
        "E" => e_series(ctx, uni(n), 0),
        "Tdepth1" => tdepth1(ctx, n),
        "Tuuu" => tuuu(ctx, n),
        "T00X" => t00x(ctx, two(orders)),
        "R" => r_series(ctx, two(orders), false),
        "S" => r_series(ctx, two(orders), true),
        "Gh12" => gh12(ctx, n),
        "Gh14" => gh14(ctx, n),
        "Gh212sym" => gh212sym(ctx, n),
        "Gh414" => gh414(ctx, n),
        _ => Err(SeriesError::UnknownName(name.to_string())),
    }
}

fn zeta_f(k: u32, ctx: &PrecisionContext) -> Result<Float, SeriesError> {
    Ok(riemann_zeta(k, ctx)?)
}

fn pi_term(q: usize, ctx: &PrecisionContext, euler: bool) -> Float {
    // (-1)^q pi^2q / (2q)!, or (-1)^q E_2q pi^2q / (2q)!
    let p = ctx.prec();
    let mut f = Float::with_val(p, 1);
    for k in 2..=(2 * q) {
        f *= k as u32;
    }
    let mut v = Float::with_val(p, pi(ctx).pow_u(2 * q as u32)) / f;
    if euler {
        let e = euler_number(2 * q);
        v *= Float::with_val(
            p,
            rug::Integer::from_str_radix(&e.to_str_radix(16), 16).expect("integer"),
        );
    }
    if q % 2 == 1 {
        -v
    } else {
        v
    }
}

/// The explicit single-zeta evaluation of `t(3,{2}^n,3)` (`star = false`)
/// or `t*(3,{2}^n,3)` (`star = true`).
pub fn t3223_explicit(
    n: usize,
    star: bool,
    ctx: &PrecisionContext,
) -> Result<BigComplex, SeriesError> {
    let p = ctx.prec();
    let m = n + 2;
    let w = |r: usize| Float::with_val(p, Float::u_pow_u(4, r as u32)).recip();
    let mut total = Float::with_val(p, zeta_f(2, ctx)? * zeta_f(2 * n as u32 + 4, ctx)?)
        * (9 + 6 * n) as u32
        / 2u32;
    if !star {
        total = -total;
    }
    for q in 1..m {
        for r in 1..(m - q) {
            let s = m - q - r;
            let zz = Float::with_val(
                p,
                zeta_f(2 * r as u32 + 1, ctx)? * zeta_f(2 * s as u32 + 1, ctx)?,
            );
            let c = Float::with_val(p, 2u32) - w(r) - w(s);
            total += zz * c * (2 * r * s) as u32 * pi_term(q, ctx, star);
        }
    }
    for r in 1..m {
        let s = m - r;
        let zz = Float::with_val(
            p,
            zeta_f(2 * r as u32 + 1, ctx)? * zeta_f(2 * s as u32 + 1, ctx)?,
        );
        let c = (Float::with_val(p, 2u32) - w(r)) * (Float::with_val(p, 2u32) - w(s));
        total += zz * c * (2 * r * s) as u32;
    }
    let scale = Float::with_val(p, Float::u_pow_u(4, m as u32)).recip();
    let v = total * scale;
    Ok(BigComplex::from_real(if !star && m % 2 == 1 {
        -v
    } else {
        v
    }))
}
