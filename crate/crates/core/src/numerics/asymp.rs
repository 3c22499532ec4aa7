use num_traits::FromPrimitive;

use super::{eval, BigComplex, NumericError, PrecisionContext};
use crate::words::{Kind, Letter, Phase, Word};

/// Least-squares fit `f(eps) ~ slope * L + constant`, `L = log(1 - e(eps))`.
/// With three or more points the basis also carries `eps * L`, the leading
/// correction of the depth-one expansion.
#[derive(Clone, Debug)]
pub struct AsympFit {
    pub slope: (f64, f64),
    pub constant: (f64, f64),
    pub residual: f64,
}

/// Fit the depth-one weight-one value at phase `n * eps` against
/// `log(1 - e(eps))` over the given small `eps`.
pub fn asymp_limit_check(
    kind: Kind,
    n: i64,
    eps: &[f64],
    ctx: &PrecisionContext,
) -> Result<AsympFit, NumericError> {
    if n == 0 {
        return Err(NumericError::InvalidArgument("n must be nonzero".into()));
    }
    if eps.len() < 2 {
        return Err(NumericError::InvalidArgument(
            "need at least two eps values".into(),
        ));
    }
    let prec = ctx.prec();
    type C = (f64, f64);
    let mul = |x: C, y: C| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
    let conj = |x: C| (x.0, -x.1);
    let add = |x: C, y: C| (x.0 + y.0, x.1 + y.1);
    let sub = |x: C, y: C| (x.0 - y.0, x.1 - y.1);
    let norm = |x: C| x.0.hypot(x.1);
    let div = |x: C, y: C| {
        let d = y.0 * y.0 + y.1 * y.1;
        let p = mul(x, conj(y));
        (p.0 / d, p.1 / d)
    };
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        if !(e > 0.0 && e * (n.unsigned_abs() as f64) < 1.0) {
            return Err(NumericError::InvalidArgument(format!(
                "eps {} outside (0, 1/|n|)",
                e
            )));
        }
        let q = Phase::from_f64(e)
            .filter(|q| ((*q.numer() as f64 / *q.denom() as f64) - e).abs() <= 1e-12 * e)
            .ok_or_else(|| {
                NumericError::InvalidArgument(format!("eps {} has no small rational form", e))
            })?;
        let w = Word::new(vec![Letter::new(1, q * Phase::from_integer(n))?]);
        let f = eval(&w, kind, ctx)?.value;
        let l = (&BigComplex::one(prec) - &BigComplex::root_of_unity(prec, q)).ln();
        rows.push((e, l.to_f64(), f.to_f64()));
    }
    let basis = |e: f64, l: C| -> Vec<C> {
        let mut b = vec![l, (1.0, 0.0)];
        if eps.len() >= 3 {
            b.push((e * l.0, e * l.1));
        }
        b
    };
    let k = basis(1.0, (0.0, 0.0)).len();
    // normal equations A^H A x = A^H f
    let mut m = vec![vec![(0.0, 0.0); k + 1]; k];
    for &(e, l, f) in &rows {
        let b = basis(e, l);
        for i in 0..k {
            for j in 0..k {
                m[i][j] = add(m[i][j], mul(conj(b[i]), b[j]));
            }
            m[i][k] = add(m[i][k], mul(conj(b[i]), f));
        }
    }
    for c in 0..k {
        let p = (c..k)
            .max_by(|&a, &b| norm(m[a][c]).total_cmp(&norm(m[b][c])))
            .expect("nonempty");
        m.swap(c, p);
        if norm(m[c][c]) == 0.0 {
            return Err(NumericError::InvalidArgument(
                "degenerate eps values".into(),
            ));
        }
        for r in 0..k {
            if r != c {
                let q = div(m[r][c], m[c][c]);
                for j in c..=k {
                    m[r][j] = sub(m[r][j], mul(q, m[c][j]));
                }
            }
        }
    }
    let x: Vec<C> = (0..k).map(|i| div(m[i][k], m[i][i])).collect();
    let residual = rows
        .iter()
        .map(|&(e, l, f)| {
            let fit = basis(e, l)
                .iter()
                .zip(&x)
                .fold((0.0, 0.0), |acc, (b, c)| add(acc, mul(*b, *c)));
            let r = sub(f, fit);
            r.0.hypot(r.1)
        })
        .fold(0.0, f64::max);
    let (a, b) = (x[0], x[1]);
    Ok(AsympFit {
        slope: a,
        constant: b,
        residual,
    })
}
