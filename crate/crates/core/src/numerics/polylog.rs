use num_rational::BigRational;
use num_traits::{One, Zero};
use rug::Float;

use super::{BigComplex, Evaluated, NumericError, PrecisionContext};
use crate::regularization::StuffleReg;
use crate::words::{int, reduce_phase, Kind, Letter, Phase, Word, WordSum};

/// Letter of an iterated integral `G(a_1, ..., a_w; z)`: 0 or a root of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GLetter {
    Zero,
    Root(Phase),
}

/// Iterated-integral letters for a zeta word (innermost letter first).
/// The value is `(-1)^depth * G(letters; 1)`.
fn li_letters(w: &Word) -> Vec<GLetter> {
    let mut out = Vec::with_capacity(w.weight() as usize);
    let mut acc = Phase::zero();
    for l in w.letters().iter().rev() {
        out.extend(std::iter::repeat(GLetter::Zero).take(l.weight() as usize - 1));
        acc = reduce_phase(acc - l.phase());
        out.push(GLetter::Root(acc));
    }
    out
}

/// `sum_{k > n} binom(k-1, l-1) r^k`, the tail of the coefficient majorant
/// of a depth-`l` series evaluated at ratio `r`.
fn tail_bound(l: usize, r: f64, n: usize) -> f64 {
    if l == 0 {
        return 0.0;
    }
    let full = full_bound(l, r);
    let k = n + 1;
    if k < l {
        return full;
    }
    let mut log_term = (k as f64) * r.ln();
    for i in 1..l {
        log_term += (((k - l + i) as f64) / (i as f64)).ln();
    }
    let q = r * (k as f64) / ((k + 1 - l) as f64);
    if q >= 1.0 {
        return full;
    }
    (log_term.exp() / (1.0 - q)).min(full)
}

fn full_bound(l: usize, r: f64) -> f64 {
    (r / (1.0 - r)).powi(l as i32)
}

/// `G(letters[s..]; z)` for every suffix start `s` (the empty suffix gives 1),
/// from `n` power-series terms. The last letter must be nonzero.
fn suffix_values(
    letters: &[Option<BigComplex>],
    z: &Float,
    n: usize,
    prec: u32,
) -> Vec<BigComplex> {
    let w = letters.len();
    let mut vals = vec![BigComplex::zero(prec); w + 1];
    vals[w] = BigComplex::one(prec);
    let mut beta = vec![BigComplex::zero(prec); n + 1];
    beta[0] = BigComplex::one(prec);
    let zc = BigComplex::from_real(Float::with_val(prec, z));
    for s in (0..w).rev() {
        let mut alpha = vec![BigComplex::zero(prec); n + 1];
        match &letters[s] {
            None => {
                debug_assert!(beta[0].is_zero(), "trailing zero letter");
                for k in 1..=n {
                    alpha[k] = beta[k].div_u(k as u32);
                }
            }
            Some(b) => {
                let binv = &zc / b;
                let mut g = BigComplex::zero(prec);
                for k in 0..n {
                    g = &(&g - &beta[k]) * &binv;
                    alpha[k + 1] = g.div_u(k as u32 + 1);
                }
            }
        }
        let mut total = BigComplex::zero(prec);
        for a in &alpha {
            total = &total + a;
        }
        vals[s] = total;
        beta = alpha;
    }
    vals
}

struct HolderPlan {
    right: Vec<Option<BigComplex>>,
    left: Vec<Option<BigComplex>>,
    right_depth: Vec<usize>,
    left_depth: Vec<usize>,
    ratio: f64,
    split: Float,
}

fn plan(letters: &[GLetter], prec: u32) -> HolderPlan {
    let w = letters.len();
    let mut rho = f64::INFINITY;
    for l in letters {
        let d = match l {
            GLetter::Zero => 1.0,
            GLetter::Root(q) if q.is_zero() => continue,
            GLetter::Root(q) => {
                2.0 * (std::f64::consts::PI * (*q.numer() as f64) / (*q.denom() as f64))
                    .sin()
                    .abs()
            }
        };
        rho = rho.min(d);
    }
    let rho = rho.min(1.0);
    let ratio = 1.0 / (1.0 + rho);
    let split = Float::with_val(prec, ratio);
    let right: Vec<Option<BigComplex>> = letters
        .iter()
        .map(|l| match l {
            GLetter::Zero => None,
            GLetter::Root(q) => Some(BigComplex::root_of_unity(prec, *q)),
        })
        .collect();
    let left: Vec<Option<BigComplex>> = letters
        .iter()
        .rev()
        .map(|l| match l {
            GLetter::Zero => Some(BigComplex::one(prec)),
            GLetter::Root(q) if q.is_zero() => None,
            GLetter::Root(q) => Some(&BigComplex::one(prec) - &BigComplex::root_of_unity(prec, *q)),
        })
        .collect();
    let depth = |v: &[Option<BigComplex>]| {
        let mut d = vec![0usize; w + 1];
        for s in (0..w).rev() {
            d[s] = d[s + 1] + usize::from(v[s].is_some());
        }
        d
    };
    HolderPlan {
        right_depth: depth(&right),
        left_depth: depth(&left),
        right,
        left,
        ratio,
        split,
    }
}

fn a_priori_error(p: &HolderPlan, n: usize) -> f64 {
    let w = p.right.len();
    let r = p.ratio;
    (0..=w)
        .map(|j| {
            let (lr, ll) = (p.right_depth[j], p.left_depth[w - j]);
            let (tr, tl) = (tail_bound(lr, r, n), tail_bound(ll, r, n));
            tl * full_bound(lr, r) + full_bound(ll, r) * tr + tl * tr
        })
        .sum()
}

/// `G(letters; 1)` by the Hölder split at `c = 1/(1 + rho)`:
/// `sum_j (-1)^j G(1-a_j, ..., 1-a_1; 1-c) G(a_{j+1}, ..., a_w; c)`.
fn holder(
    letters: &[GLetter],
    ctx: &PrecisionContext,
    fixed_terms: Option<usize>,
) -> Result<Evaluated, NumericError> {
    let prec = ctx.prec();
    let w = letters.len();
    if letters.first() == Some(&GLetter::Root(Phase::zero())) {
        return Err(NumericError::NotAdmissible(format!("{:?}", letters)));
    }
    let p = plan(letters, prec);
    let goal = ctx.target() / (2.0 * ctx.safety());
    let n = match fixed_terms {
        Some(n) => n.max(1),
        None => {
            let mut n = (w + 2).max(10);
            while a_priori_error(&p, n) > goal {
                n += (n / 4).max(8);
                if n as u64 > ctx.m_max() {
                    return Err(NumericError::Unreachable {
                        what: format!("iterated integral of weight {}", w),
                        target: ctx.target(),
                        cap: ctx.m_max(),
                    });
                }
            }
            n
        }
    };
    let one_minus = Float::with_val(prec, 1 - &p.split);
    let right = suffix_values(&p.right, &p.split, n, prec);
    let left = suffix_values(&p.left, &one_minus, n, prec);
    let mut total = BigComplex::zero(prec);
    let mut err = 0.0;
    let mut scale = 0.0f64;
    for j in 0..=w {
        let term = &left[w - j] * &right[j];
        total = if j % 2 == 0 {
            &total + &term
        } else {
            &total - &term
        };
        let (lr, ll) = (p.right_depth[j], p.left_depth[w - j]);
        let (tr, tl) = (tail_bound(lr, p.ratio, n), tail_bound(ll, p.ratio, n));
        err += tl * right[j].abs_f64() + left[w - j].abs_f64() * tr + tl * tr;
        scale = scale.max(full_bound(lr, p.ratio) * full_bound(ll, p.ratio));
    }
    let rounding = 4.0 * ((w + 1) * (n + 1) * (w + 1)) as f64 * scale.max(1.0) * ctx.ulp();
    Ok(Evaluated {
        value: total,
        error: ctx.safety() * (err + rounding),
        terms: n as u64,
    })
}

fn eval_zeta_word(
    w: &Word,
    ctx: &PrecisionContext,
    fixed_terms: Option<usize>,
) -> Result<Evaluated, NumericError> {
    let prec = ctx.prec();
    if w.is_empty() {
        return Ok(Evaluated::exact(BigComplex::one(prec)));
    }
    if !w.is_admissible() {
        return Err(NumericError::NotAdmissible(w.display_with(Kind::Zeta)));
    }
    if w.len() == 1 && w.weight() == 1 {
        // -log(1 - e(psi))
        let x = BigComplex::root_of_unity(prec, w.letters()[0].phase());
        let v = -(&BigComplex::one(prec) - &x).ln();
        return Ok(Evaluated {
            value: v,
            error: 4.0 * ctx.ulp(),
            terms: 0,
        });
    }
    let g = holder(&li_letters(w), ctx, fixed_terms)?;
    let value = if w.len() % 2 == 1 { -g.value } else { g.value };
    Ok(Evaluated { value, ..g })
}

/// A t-word as `e(prefactor) * sum c_i zeta(w_i)` over words with halved
/// phases shifted by 0 or 1/2.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaExpansion {
    pub prefactor: Phase,
    pub terms: Vec<(BigRational, Word)>,
}

pub fn t_to_zeta(w: &Word) -> ZetaExpansion {
    let l = w.len();
    let half = Phase::new(1, 2);
    let base: Vec<Phase> = w
        .letters()
        .iter()
        .map(|x| reduce_phase(x.phase()) * half)
        .collect();
    let prefactor = reduce_phase(base.iter().copied().sum());
    let scale = BigRational::one() / int(1i64 << l);
    let mut terms = Vec::with_capacity(1 << l);
    for mask in 0u32..(1 << l) {
        let letters: Vec<Letter> = w
            .letters()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let shift = if mask >> i & 1 == 1 {
                    half
                } else {
                    Phase::zero()
                };
                x.with_phase(base[i] + shift)
            })
            .collect();
        let sign = if mask.count_ones() % 2 == 1 {
            -scale.clone()
        } else {
            scale.clone()
        };
        terms.push((sign, Word::new(letters)));
    }
    ZetaExpansion { prefactor, terms }
}

fn eval_t_word(
    w: &Word,
    ctx: &PrecisionContext,
    fixed_terms: Option<usize>,
) -> Result<Evaluated, NumericError> {
    let prec = ctx.prec();
    if w.is_empty() {
        return Ok(Evaluated::exact(BigComplex::one(prec)));
    }
    if !w.is_admissible() {
        return Err(NumericError::NotAdmissible(w.display_with(Kind::T)));
    }
    let exp = t_to_zeta(w);
    let mut total = BigComplex::zero(prec);
    let mut err = 0.0;
    let mut terms = 0;
    for (c, zw) in &exp.terms {
        let v = match fixed_terms {
            Some(_) => eval_zeta_word(zw, ctx, fixed_terms)?,
            None => eval(zw, Kind::Zeta, ctx)?,
        };
        total = &total + &v.value.scale_rational(c);
        err += v.error * rational_f64(c).abs();
        terms = terms.max(v.terms);
    }
    let pre = BigComplex::root_of_unity(prec, exp.prefactor);
    Ok(Evaluated {
        value: &pre * &total,
        error: err,
        terms,
    })
}

/// Value of an admissible word, cached per context.
pub fn eval(w: &Word, kind: Kind, ctx: &PrecisionContext) -> Result<Evaluated, NumericError> {
    if let Some(v) = ctx.cached_word(kind, w) {
        return Ok(v);
    }
    let v = match kind {
        Kind::Zeta => eval_zeta_word(w, ctx, None)?,
        Kind::T => eval_t_word(w, ctx, None)?,
    };
    ctx.store_word(kind, w, &v);
    Ok(v)
}

/// Value from a fixed number of series terms (no caching); the reported
/// bound is the rigorous truncation bound at that length.
pub fn eval_with_terms(
    w: &Word,
    kind: Kind,
    n_terms: usize,
    ctx: &PrecisionContext,
) -> Result<Evaluated, NumericError> {
    match kind {
        Kind::Zeta => eval_zeta_word(w, ctx, Some(n_terms)),
        Kind::T => eval_t_word(w, ctx, Some(n_terms)),
    }
}

fn rational_f64(q: &BigRational) -> f64 {
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::MAX);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::MAX);
    n / d
}

pub fn eval_sum(
    s: &WordSum,
    kind: Kind,
    ctx: &PrecisionContext,
) -> Result<Evaluated, NumericError> {
    let mut total = BigComplex::zero(ctx.prec());
    let mut err = 0.0;
    let mut terms = 0;
    for (w, c) in s.iter() {
        let v = eval(w, kind, ctx)?;
        total = &total + &v.value.scale_rational(c);
        err += v.error * rational_f64(c).abs();
        terms = terms.max(v.terms);
    }
    Ok(Evaluated {
        value: total,
        error: err,
        terms,
    })
}

/// Substitute `T = t0` into a regularization polynomial, then evaluate.
pub fn eval_reg(
    p: &StuffleReg,
    kind: Kind,
    t0: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<Evaluated, NumericError> {
    let mut total = BigComplex::zero(ctx.prec());
    let mut err = 0.0;
    let mut terms = 0;
    let mut pw = BigComplex::one(ctx.prec());
    let t_abs = t0.abs_f64();
    let mut pw_abs = 1.0;
    for c in p.coeffs() {
        let v = eval_sum(c, kind, ctx)?;
        total = &total + &(&v.value * &pw);
        err += v.error * pw_abs;
        terms = terms.max(v.terms);
        pw = &pw * t0;
        pw_abs *= t_abs;
    }
    Ok(Evaluated {
        value: total,
        error: err,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_of_zeta_words() {
        let w = Word::from_weights(&[1, 3]);
        assert_eq!(
            li_letters(&w),
            vec![
                GLetter::Zero,
                GLetter::Zero,
                GLetter::Root(Phase::zero()),
                GLetter::Root(Phase::zero())
            ]
        );
        let alt = Word::from_pairs(&[(2, Phase::new(1, 2)), (1, Phase::new(1, 3))]);
        assert_eq!(
            li_letters(&alt),
            vec![
                GLetter::Root(Phase::new(2, 3)),
                GLetter::Zero,
                GLetter::Root(Phase::new(1, 6))
            ]
        );
    }

    #[test]
    fn tail_bounds_shrink() {
        let a = tail_bound(3, 0.5, 40);
        let b = tail_bound(3, 0.5, 80);
        assert!(b < a && a < full_bound(3, 0.5));
        assert_eq!(tail_bound(0, 0.5, 3), 0.0);
        // depth 1: sum_{k>n} r^k
        assert!((tail_bound(1, 0.5, 10) - 0.5f64.powi(10)).abs() < 1e-15);
    }

    #[test]
    fn expansion_shape() {
        let e = t_to_zeta(&Word::from_weights(&[2]));
        assert_eq!(e.prefactor, Phase::zero());
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[1].1.letters()[0].phase(), Phase::new(1, 2));
        assert!(e.terms[1].0 < BigRational::zero());
    }
}
