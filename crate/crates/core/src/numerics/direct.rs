use std::collections::HashMap;

use rug::ops::Pow;
use rug::Float;

use super::{BigComplex, Evaluated, NumericError, PrecisionContext};
use crate::words::{reduce_phase, Kind, Phase, Word, WordSum};

struct RootTable {
    prec: u32,
    cache: HashMap<Phase, BigComplex>,
}

impl RootTable {
    fn new(prec: u32) -> Self {
        RootTable {
            prec,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, q: Phase) -> &BigComplex {
        let q = reduce_phase(q);
        let prec = self.prec;
        self.cache
            .entry(q)
            .or_insert_with(|| BigComplex::root_of_unity(prec, q))
    }
}

fn denominator(kind: Kind, k: u64) -> u64 {
    match kind {
        Kind::Zeta => k,
        Kind::T => 2 * k - 1,
    }
}

/// Outermost partial sums `S(k)` for `k = 0..=m` and the second-outermost
/// partial sum at `m`, by nested prefix sums.
fn partial_sums(
    w: &Word,
    kind: Kind,
    m: u64,
    ctx: &PrecisionContext,
) -> (Vec<BigComplex>, BigComplex) {
    let prec = ctx.prec();
    let len = m as usize + 1;
    let mut roots = RootTable::new(prec);
    // prev[k] = value of the inner sum over indices < k + 1, i.e. up to k
    let mut prev: Vec<BigComplex> = vec![BigComplex::one(prec); len];
    let mut inner_at_m = BigComplex::one(prec);
    for letter in w.letters() {
        let mut cur = Vec::with_capacity(len);
        cur.push(BigComplex::zero(prec));
        let n = letter.weight();
        let phi = letter.phase();
        for k in 1..=m {
            let d = Float::with_val(prec, denominator(kind, k));
            let mag = Float::with_val(prec, d.pow(n)).recip();
            let root = roots.get(phi * Phase::from_integer(k as i64)).clone();
            let term = (&root * &prev[k as usize - 1]).scale(&mag);
            let next = &cur[k as usize - 1] + &term;
            cur.push(next);
        }
        inner_at_m = prev[m as usize].clone();
        prev = cur;
    }
    (prev, inner_at_m)
}

/// Exact truncation at order `m`: the sum over `0 < k_1 < ... < k_l <= m`.
pub fn eval_truncated(
    w: &Word,
    kind: Kind,
    m: u64,
    ctx: &PrecisionContext,
) -> Result<BigComplex, NumericError> {
    if m > ctx.m_max() {
        return Err(NumericError::Overflow(format!(
            "truncation order {} exceeds cap {}",
            m,
            ctx.m_max()
        )));
    }
    if w.is_empty() {
        return Ok(BigComplex::one(ctx.prec()));
    }
    let (s, _) = partial_sums(w, kind, m, ctx);
    Ok(s[m as usize].clone())
}

pub fn eval_truncated_sum(
    s: &WordSum,
    kind: Kind,
    m: u64,
    ctx: &PrecisionContext,
) -> Result<BigComplex, NumericError> {
    let mut total = BigComplex::zero(ctx.prec());
    for (w, c) in s.iter() {
        total = &total + &eval_truncated(w, kind, m, ctx)?.scale_rational(c);
    }
    Ok(total)
}

/// Limit estimate from the partial sums up to `m`.
fn tail_corrected(w: &Word, kind: Kind, m: u64, ctx: &PrecisionContext) -> BigComplex {
    let prec = ctx.prec();
    let last = *w.letters().last().expect("nonempty word");
    let phi = reduce_phase(last.phase());
    if phi.is_integer() {
        let (s, inner) = partial_sums(w, kind, m, ctx);
        // sum_{k>m} f(k) ~ integral from m + 1/2, with f(x) = x^-n or (2x-1)^-n
        let n = last.weight();
        let x = match kind {
            Kind::Zeta => Float::with_val(prec, m) + 0.5,
            Kind::T => Float::with_val(prec, 2 * m),
        };
        let mut tail = Float::with_val(prec, x.pow(n - 1)).recip() / (n - 1);
        if kind == Kind::T {
            tail /= 2u32;
        }
        &s[m as usize] + &inner.scale(&tail)
    } else {
        // average the partial sums over one period of the final phase
        let period = *phi.denom() as u64;
        let (s, _) = partial_sums(w, kind, m + period, ctx);
        let mut acc = BigComplex::zero(prec);
        for j in 0..period {
            acc = &acc + &s[(m + j) as usize];
        }
        let mut avg = acc.div_u(period as u32);
        // the average of S(m..m+d-1) sits half a term before the limit
        let half = &s[(m + period) as usize] - &s[m as usize];
        avg = &avg + &half.div_u(2 * period as u32);
        avg
    }
}

/// Direct summation with tail correction at order `m`; the reported bound
/// is the safety factor times the change from order `m/2`.
pub fn eval_direct(
    w: &Word,
    kind: Kind,
    m: u64,
    ctx: &PrecisionContext,
) -> Result<Evaluated, NumericError> {
    if w.is_empty() {
        return Ok(Evaluated::exact(BigComplex::one(ctx.prec())));
    }
    if !w.is_admissible() {
        return Err(NumericError::NotAdmissible(w.display_with(kind)));
    }
    if m < 2 || m > ctx.m_max() {
        return Err(NumericError::InvalidArgument(format!(
            "order {} outside [2, {}]",
            m,
            ctx.m_max()
        )));
    }
    let v = tail_corrected(w, kind, m, ctx);
    let coarse = tail_corrected(w, kind, m / 2, ctx);
    let error = ctx.safety() * (&v - &coarse).abs_f64();
    Ok(Evaluated {
        value: v,
        error,
        terms: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eval;
    use crate::words::Letter;

    #[test]
    fn small_truncations() {
        let ctx = PrecisionContext::new(30);
        let z2 = Word::from_weights(&[2]);
        assert_eq!(
            eval_truncated(&z2, Kind::Zeta, 2, &ctx).unwrap().to_f64(),
            (1.25, 0.0)
        );
        let t = eval_truncated(&z2, Kind::T, 2, &ctx).unwrap().re.to_f64();
        assert!((t - (1.0 + 1.0 / 9.0)).abs() < 1e-15);
        let z12 = Word::from_weights(&[1, 2]);
        // k1 < k2 <= 3: (1,2) (1,3) (2,3)
        let brute = 1.0 / 4.0 + 1.0 / 9.0 + 0.5 / 9.0;
        assert!(
            (eval_truncated(&z12, Kind::Zeta, 3, &ctx)
                .unwrap()
                .re
                .to_f64()
                - brute)
                .abs()
                < 1e-15
        );
        assert!(eval_truncated(&z12, Kind::Zeta, 10, &ctx.with_mmax(5)).is_err());
    }

    #[test]
    fn direct_matches_series_evaluation() {
        let ctx = PrecisionContext::new(20);
        let alt = Word::new(vec![Letter::plain(1), Letter::alternating(1)]);
        let words = [Word::from_weights(&[1, 2]), Word::from_weights(&[3]), alt];
        for w in &words {
            for kind in [Kind::Zeta, Kind::T] {
                let d = eval_direct(w, kind, 4000, &ctx).unwrap();
                let e = eval(w, kind, &ctx).unwrap();
                let diff = (&d.value - &e.value).abs_f64();
                assert!(
                    diff <= d.error + 1e-12,
                    "{} {:?}: diff {} bound {}",
                    w.display_with(kind),
                    kind,
                    diff,
                    d.error
                );
                assert!(
                    d.error < 1e-2,
                    "{} {:?}: bound {}",
                    w.display_with(kind),
                    kind,
                    d.error
                );
            }
        }
    }
}
