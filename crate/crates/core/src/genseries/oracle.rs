//! Coefficient-level cross-checks of the closed forms against direct
//! evaluation of the corresponding (regularized) values.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::catalog::{closed_form, entry};
use super::series::SeriesError;
use crate::numerics::{eval_reg, eval_sum, log2, BigComplex, PrecisionContext};
use crate::regularization::{shuffle_reg_zeta, stuffle_reg_sum};
use crate::words::{frac, sigma, Kind, Letter, Word, WordSum};

#[derive(Clone, Debug)]
pub struct CoeffCheck {
    pub index: (usize, usize),
    pub series: BigComplex,
    pub direct: BigComplex,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub name: String,
    pub checks: Vec<CoeffCheck>,
    pub max_residual: f64,
    pub tol: f64,
}

impl SeriesReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }
}

#[derive(Clone, Copy)]
enum Reg {
    Zero,
    Log2,
}

fn twos(n: usize) -> Vec<u32> {
    vec![2; n]
}

fn word(ws: &[u32]) -> Word {
    Word::from_weights(ws)
}

fn cat(parts: &[&[u32]]) -> Word {
    word(&parts.concat())
}

fn alt_ones(n: usize) -> Vec<Letter> {
    vec![Letter::alternating(1); n]
}

/// Stuffle-regularized value of a combination of words, with `Sigma^r`
/// applied first (`r = 0` plain, `1` star, `1/2` interpolated).
fn value(
    w: &Word,
    kind: Kind,
    r: &BigRational,
    t: Reg,
    ctx: &PrecisionContext,
) -> Result<BigComplex, SeriesError> {
    let sum: WordSum = if r.is_zero() {
        WordSum::monomial(w.clone())
    } else {
        sigma(w, r)
    };
    if sum.iter().all(|(w, _)| w.is_admissible()) {
        return Ok(eval_sum(&sum, kind, ctx)?.value);
    }
    let t0 = match t {
        Reg::Zero => BigComplex::zero(ctx.prec()),
        Reg::Log2 => BigComplex::from_real(log2(ctx)),
    };
    Ok(eval_reg(&stuffle_reg_sum(&sum), kind, &t0, ctx)?.value)
}

fn plain(w: &Word, kind: Kind, ctx: &PrecisionContext) -> Result<BigComplex, SeriesError> {
    value(w, kind, &BigRational::zero(), Reg::Zero, ctx)
}

fn t_reg(w: &Word, r: BigRational, ctx: &PrecisionContext) -> Result<BigComplex, SeriesError> {
    value(w, Kind::T, &r, Reg::Log2, ctx)
}

fn shuffle_zeta(w: &Word, ctx: &PrecisionContext) -> Result<BigComplex, SeriesError> {
    let p = shuffle_reg_zeta(w).map_err(|e| SeriesError::UnknownName(e.to_string()))?;
    Ok(eval_reg(&p, Kind::Zeta, &BigComplex::zero(ctx.prec()), ctx)?.value)
}

fn sign(c: BigComplex, negative: bool) -> BigComplex {
    if negative {
        -c
    } else {
        c
    }
}

/// Coefficient `(i, j)` of catalog series `name`, computed from the values
/// it generates. `None` for names without a direct oracle.
pub fn direct_coefficient(
    name: &str,
    (i, j): (usize, usize),
    ctx: &PrecisionContext,
) -> Result<Option<BigComplex>, SeriesError> {
    let p = ctx.prec();
    let zero = || Ok(Some(BigComplex::zero(p)));
    let one = || Ok(Some(BigComplex::one(p)));
    let half = frac(1, 2);
    let star = BigRational::one();
    let zr = BigRational::zero();
    // index n with i = 2n + shift, if any
    let even_at = |shift: usize| {
        if i >= shift && (i - shift) % 2 == 0 {
            Some((i - shift) / 2)
        } else {
            None
        }
    };
    let v = match name {
        "F" | "Ft" => {
            if i % 2 == 1 || j % 2 == 1 {
                return zero();
            }
            let (a, b) = (i / 2, j / 2);
            let kind = if name == "F" { Kind::Zeta } else { Kind::T };
            sign(
                plain(&cat(&[&twos(a), &[3], &twos(b)]), kind, ctx)?,
                (a + b) % 2 == 1,
            )
        }
        "G2" | "Gt2" | "Gts2" => match even_at(0) {
            None => return zero(),
            Some(0) => return one(),
            Some(n) => match name {
                "G2" => plain(&word(&twos(n)), Kind::Zeta, ctx)?,
                "Gt2" => plain(&word(&twos(n)), Kind::T, ctx)?,
                _ => t_reg(&word(&twos(n)), star, ctx)?,
            },
        },
        "G23" | "Gt23" | "Gts23" | "Gt32" => match even_at(3) {
            None => return zero(),
            Some(n) => match name {
                "G23" => plain(&cat(&[&twos(n), &[3]]), Kind::Zeta, ctx)?,
                "Gt23" => plain(&cat(&[&twos(n), &[3]]), Kind::T, ctx)?,
                "Gt32" => plain(&cat(&[&[3], &twos(n)]), Kind::T, ctx)?,
                _ => t_reg(&cat(&[&twos(n), &[3]]), star, ctx)?,
            },
        },
        "G12" | "G21" | "Gt21" | "Gt12" | "Gts21" => match even_at(1) {
            None => return zero(),
            Some(n) => match name {
                "G12" => shuffle_zeta(&cat(&[&[1], &twos(n)]), ctx)?,
                "G21" => shuffle_zeta(&cat(&[&twos(n), &[1]]), ctx)?,
                "Gt21" => t_reg(&cat(&[&twos(n), &[1]]), zr, ctx)?,
                "Gt12" => t_reg(&cat(&[&[1], &twos(n)]), zr, ctx)?,
                _ => t_reg(&cat(&[&twos(n), &[1]]), star, ctx)?,
            },
        },
        "G211" | "G121" | "Gt121" | "Gts121" => match even_at(2) {
            None => return zero(),
            Some(n) => match name {
                "G211" => shuffle_zeta(&cat(&[&twos(n), &[1, 1]]), ctx)?,
                "G121" => shuffle_zeta(&cat(&[&[1], &twos(n), &[1]]), ctx)?,
                "Gt121" => t_reg(&cat(&[&[1], &twos(n), &[1]]), zr, ctx)?,
                _ => t_reg(&cat(&[&[1], &twos(n), &[1]]), star, ctx)?,
            },
        },
        "OZ232" => {
            let mut s = BigComplex::zero(p);
            for k in 0..=i {
                s = &s + &plain(&cat(&[&twos(k), &[3], &twos(i - k)]), Kind::Zeta, ctx)?;
            }
            s
        }
        "OZ242" | "OZ2323" => {
            let mut s = BigComplex::zero(p);
            for k in 0..=i {
                s = &s + &plain(&cat(&[&twos(k), &[4], &twos(i - k)]), Kind::Zeta, ctx)?;
            }
            if name == "OZ2323" && i >= 1 {
                for a in 0..i {
                    for b in 0..(i - a) {
                        let c = i - 1 - a - b;
                        s = &s
                            + &plain(
                                &cat(&[&twos(a), &[3], &twos(b), &[3], &twos(c)]),
                                Kind::Zeta,
                                ctx,
                            )?;
                    }
                }
            }
            s
        }
        "Gt3223" | "Gts3223" => match even_at(6) {
            None => return zero(),
            Some(n) => {
                let w = cat(&[&[3], &twos(n), &[3]]);
                if name == "Gt3223" {
                    plain(&w, Kind::T, ctx)?
                } else {
                    t_reg(&w, star, ctx)?
                }
            }
        },
        "L" => {
            let mut letters = alt_ones(i);
            letters.push(Letter::plain(1));
            sign(
                value(&Word::new(letters), Kind::Zeta, &zr, Reg::Zero, ctx)?,
                i % 2 == 1,
            )
        }
        "Gtm1" => {
            if i == 0 {
                return one();
            }
            plain(&Word::new(alt_ones(i)), Kind::T, ctx)?
        }
        "Gtm11" | "Gt1m11" | "Gts1m11" => {
            let lead = if name == "Gtm11" { 1 } else { 2 };
            if i < lead {
                return zero();
            }
            let mut letters = if lead == 2 {
                vec![Letter::plain(1)]
            } else {
                vec![]
            };
            letters.extend(alt_ones(i - lead));
            letters.push(Letter::plain(1));
            let r = if name == "Gts1m11" { star } else { zr };
            t_reg(&Word::new(letters), r, ctx)?
        }
        "E" => {
            if i == 0 {
                return one();
            }
            value(&word(&vec![1; i]), Kind::Zeta, &zr, Reg::Zero, ctx)?
        }
        "Tdepth1" => {
            if i % 2 == 0 {
                return zero();
            }
            plain(&word(&[i as u32 + 1]), Kind::T, ctx)?.scale_rational(&frac(2, 1))
        }
        "Tuuu" => {
            if i == 0 {
                return one();
            }
            sign(t_reg(&word(&vec![1; i]), half, ctx)?, i % 2 == 1)
        }
        "T00X" => {
            if j == 0 {
                return zero();
            }
            let mut ws = vec![1; j - 1];
            ws.push(i as u32 + 1);
            value(&word(&ws), Kind::Zeta, &zr, Reg::Zero, ctx)?
        }
        "R" | "S" => {
            if j < 2 || j % 2 == 1 {
                return zero();
            }
            let ones = vec![1; i];
            let w = if name == "R" {
                cat(&[&ones, &[j as u32]])
            } else {
                cat(&[&[j as u32], &ones])
            };
            t_reg(&w, half, ctx)?
        }
        "Gh12" | "Gh14" => {
            let d = if name == "Gh12" { 2 } else { 4 };
            if i < d {
                return zero();
            }
            t_reg(&cat(&[&vec![1; i - d], &[d as u32]]), half, ctx)?
        }
        "Gh212sym" => {
            if i < 4 || i % 2 == 1 {
                return zero();
            }
            t_reg(&cat(&[&[2], &vec![1; i - 4], &[2]]), half, ctx)?.scale_rational(&frac(2, 1))
        }
        "Gh414" => match even_at(8) {
            None => return zero(),
            Some(n) => t_reg(&cat(&[&[4], &vec![1; 2 * n], &[4]]), half, ctx)?,
        },
        _ => return Ok(None),
    };
    Ok(Some(v))
}

/// Compares every coefficient of total degree at most `max_weight` of the
/// closed form `name` with `direct`. A coefficient the evaluator does not
/// cover is skipped.
pub fn verify_series<F>(
    name: &str,
    mut direct: F,
    max_weight: usize,
    tol: f64,
    ctx: &PrecisionContext,
) -> Result<SeriesReport, SeriesError>
where
    F: FnMut((usize, usize)) -> Result<Option<BigComplex>, SeriesError>,
{
    let e = entry(name).ok_or_else(|| SeriesError::UnknownName(name.to_string()))?;
    let orders = if e.vars == 2 {
        (max_weight, max_weight)
    } else {
        (max_weight, 0)
    };
    let s = closed_form(name, orders, ctx)?;
    let mut checks = Vec::new();
    let mut max_residual = 0.0f64;
    for i in 0..=orders.0 {
        for j in 0..=orders.1 {
            if i + j > max_weight {
                continue;
            }
            if let Some(d) = direct((i, j))? {
                let c = s.coeff(i, j);
                let residual = (&c - &d).abs_f64();
                max_residual = max_residual.max(residual);
                checks.push(CoeffCheck {
                    index: (i, j),
                    series: c,
                    direct: d,
                    residual,
                });
            }
        }
    }
    Ok(SeriesReport {
        name: name.to_string(),
        checks,
        max_residual,
        tol,
    })
}
