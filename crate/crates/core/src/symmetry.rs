//! The t-Bernoulli series, the truncated and limiting generating-series
//! identities behind the symmetry theorem, its regularized form, and the
//! coefficient relations it implies.
//!
//! Generating series are sampled at numeric points `y` rather than kept as
//! multivariate series: every identity here is scalar-valued at fixed `y`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::{
    eval, eval_reg, eval_sum, log2, pi, BigComplex, Evaluated, NumericError, PrecisionContext,
};
use crate::regularization::{stuffle_reg, stuffle_reg_sum, Factor, Relation};
use crate::words::{
    compositions_with_parts, frac, int, reduce_phase, sigma, splittings, Kind, Letter, Phase, Word,
    WordError, WordSum,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("pole hit: {0}")]
    Pole(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Phases `phi_1, ..., phi_m`, each reduced to `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVector(Vec<Phase>);

impl PhaseVector {
    pub fn new(phases: Vec<Phase>) -> Result<Self, SymmetryError> {
        if phases.is_empty() {
            return Err(SymmetryError::Precondition(
                "empty phase vector".to_string(),
            ));
        }
        Ok(PhaseVector(phases.into_iter().map(reduce_phase).collect()))
    }

    pub fn zeros(m: usize) -> Self {
        PhaseVector(vec![Phase::zero(); m.max(1)])
    }

    /// Comma-separated rationals, e.g. `1/3,0,1/2`.
    pub fn parse(s: &str) -> Result<Self, SymmetryError> {
        let mut out = Vec::new();
        for tok in s.split(',') {
            let q = Phase::from_str(tok.trim()).map_err(|_| {
                SymmetryError::Word(WordError::Parse(
                    s.to_string(),
                    format!("bad phase '{}'", tok),
                ))
            })?;
            out.push(q);
        }
        Self::new(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn phases(&self) -> &[Phase] {
        &self.0
    }

    pub fn sum(&self) -> Phase {
        reduce_phase(self.0.iter().fold(Phase::zero(), |a, b| a + b))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|q| q.is_zero())
    }

    pub fn sum_integral(&self) -> bool {
        self.sum().is_zero()
    }

    pub fn endpoints_nonintegral(&self) -> bool {
        !self.0[0].is_zero() && !self.0[self.0.len() - 1].is_zero()
    }

    /// Least common denominator of the phases.
    pub fn period(&self) -> i64 {
        self.0.iter().fold(1i64, |a, q| a.lcm(q.denom()))
    }
}

impl std::fmt::Display for PhaseVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Evaluation point `y_1, ..., y_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPoint(Vec<BigComplex>);

impl EvalPoint {
    pub fn new(ys: Vec<BigComplex>) -> Self {
        EvalPoint(ys)
    }

    pub fn from_f64(prec: u32, ys: &[(f64, f64)]) -> Self {
        EvalPoint(
            ys.iter()
                .map(|&(re, im)| BigComplex::from_f64(prec, re, im))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[BigComplex] {
        &self.0
    }

    /// `y_{i,j} = y_i - y_j` (0-based indices).
    pub fn diff(&self, i: usize, j: usize) -> BigComplex {
        &self.0[i] - &self.0[j]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|y| y.abs_f64()).fold(0.0, f64::max)
    }
}

fn check_lengths(phi: &PhaseVector, y: &EvalPoint) -> Result<(), SymmetryError> {
    if phi.len() != y.len() {
        return Err(SymmetryError::Precondition(format!(
            "{} phases but {} points",
            phi.len(),
            y.len()
        )));
    }
    Ok(())
}

fn denominator(kind: Kind, k: i64) -> i64 {
    match kind {
        Kind::Zeta => k,
        Kind::T => 2 * k - 1,
    }
}

/// `e(q k)` for all integers `k`, through a table over one period.
struct Roots {
    table: Vec<BigComplex>,
    q: i64,
}

impl Roots {
    fn new(phi: Phase, prec: u32) -> Self {
        let phi = reduce_phase(phi);
        let q = *phi.denom();
        let table = (0..q)
            .map(|r| BigComplex::root_of_unity(prec, phi * Phase::from_integer(r)))
            .collect();
        Roots { table, q }
    }

    fn at(&self, k: i64) -> &BigComplex {
        &self.table[k.rem_euclid(self.q) as usize]
    }
}

/// Summand `e(phi k) / (d(k) - y)` of one letter over `k in ks`.
fn letter_terms(
    kind: Kind,
    phi: Phase,
    y: &BigComplex,
    ks: std::ops::RangeInclusive<i64>,
    prec: u32,
) -> Result<Vec<BigComplex>, SymmetryError> {
    let roots = Roots::new(phi, prec);
    let mut out = Vec::with_capacity(ks.clone().count());
    for k in ks {
        let d = &BigComplex::from_int(prec, denominator(kind, k)) - y;
        if d.abs_f64() < 1e-30 {
            return Err(SymmetryError::Pole(format!(
                "denominator at k = {} vanishes for y = {}",
                k,
                y.render(10)
            )));
        }
        out.push(roots.at(k) / &d);
    }
    Ok(out)
}

/// Nested prefix sums: entry `p` is the sum over positions
/// `p_1 < ... < p_m < p` of the products of `factors[i][p_i]`.
fn nested_prefix(factors: &[Vec<BigComplex>], len: usize, prec: u32) -> Vec<BigComplex> {
    let mut prev = vec![BigComplex::one(prec); len + 1];
    for f in factors {
        let mut cur = Vec::with_capacity(len + 1);
        cur.push(BigComplex::zero(prec));
        for p in 0..len {
            let next = &cur[p] + &(&f[p] * &prev[p]);
            cur.push(next);
        }
        prev = cur;
    }
    prev
}

/// `Li_N(phi | y)` for every `N = 0..=n_max`.
fn li_prefix(
    kind: Kind,
    phi: &[Phase],
    y: &[BigComplex],
    n_max: usize,
    prec: u32,
) -> Result<Vec<BigComplex>, SymmetryError> {
    let mut factors = Vec::with_capacity(phi.len());
    for (q, yi) in phi.iter().zip(y) {
        factors.push(letter_terms(kind, *q, yi, 1..=n_max as i64, prec)?);
    }
    Ok(nested_prefix(&factors, n_max, prec))
}

/// The truncated t-Bernoulli series
/// `B^t_M(phi | y) = sum_{-M <= k_1 < ... < k_m <= M} e(sum phi_i k_i) / prod (2k_i - 1 - y_i)`.
pub fn bt_truncated(
    phi: &PhaseVector,
    y: &EvalPoint,
    m: u64,
    ctx: &PrecisionContext,
) -> Result<BigComplex, SymmetryError> {
    check_lengths(phi, y)?;
    let big_m = m as i64;
    let len = (2 * m + 1) as usize;
    let mut factors = Vec::with_capacity(phi.len());
    for (q, yi) in phi.phases().iter().zip(y.values()) {
        factors.push(letter_terms(Kind::T, *q, yi, -big_m..=big_m, ctx.prec())?);
    }
    Ok(nested_prefix(&factors, len, ctx.prec())[len].clone())
}

/// `Li_M(phi | y)` (zeta kind, denominators `k - y_i`) or `Li^t_M(phi | y)`
/// (t kind, `2k - 1 - y_i`), summed over `0 < k_1 < ... < k_m <= M`.
pub fn li_series_truncated(
    kind: Kind,
    phi: &[Phase],
    y: &[BigComplex],
    m: u64,
    ctx: &PrecisionContext,
) -> Result<BigComplex, SymmetryError> {
    if phi.len() != y.len() {
        return Err(SymmetryError::Precondition(format!(
            "{} phases but {} points",
            phi.len(),
            y.len()
        )));
    }
    Ok(li_prefix(kind, phi, y, m as usize, ctx.prec())?[m as usize].clone())
}

fn neg_rev_phases(phi: &[Phase]) -> Vec<Phase> {
    phi.iter().rev().map(|q| reduce_phase(-q)).collect()
}

fn neg_rev_points(y: &[BigComplex]) -> Vec<BigComplex> {
    y.iter().rev().map(|v| -v.clone()).collect()
}

/// `(1/2) y_{j,i}` for `i = j-1, ..., 0`.
fn left_points(y: &EvalPoint, j: usize) -> Vec<BigComplex> {
    (0..j)
        .rev()
        .map(|i| y.diff(j, i).scale_rational(&frac(1, 2)))
        .collect()
}

/// `(1/2) y_{i,j}` for `i = j+1, ..., m-1`.
fn right_points(y: &EvalPoint, j: usize) -> Vec<BigComplex> {
    (j + 1..y.len())
        .map(|i| y.diff(i, j).scale_rational(&frac(1, 2)))
        .collect()
}

fn sign(k: usize) -> BigRational {
    if k % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn pow2_inv(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Both sides of the truncated identity at order `M`: the alternating sum of
/// products of truncated t-series, and the sum of zeta-series products
/// around one bidirectional index.
pub fn truncated_identity_sides(
    phi: &PhaseVector,
    y: &EvalPoint,
    m: u64,
    ctx: &PrecisionContext,
) -> Result<(BigComplex, BigComplex), SymmetryError> {
    check_lengths(phi, y)?;
    let prec = ctx.prec();
    let depth = phi.len();
    let ph = phi.phases();
    let ys = y.values();
    let mu = m as usize;

    let mut lhs = BigComplex::zero(prec);
    let mut acc = Phase::zero();
    for j in 0..=depth {
        if j > 0 {
            acc += ph[j - 1];
        }
        let right = li_prefix(Kind::T, &ph[j..], &ys[j..], mu, prec)?[mu].clone();
        let left = li_prefix(
            Kind::T,
            &neg_rev_phases(&ph[..j]),
            &neg_rev_points(&ys[..j]),
            mu + 1,
            prec,
        )?[mu + 1]
            .clone();
        let term = &(&right * &left) * &BigComplex::root_of_unity(prec, acc);
        lhs = &lhs + &term.scale_rational(&sign(j));
    }

    let total = phi.sum();
    let roots = Roots::new(total, prec);
    let mut rhs = BigComplex::zero(prec);
    for j in 0..depth {
        let lp = li_prefix(
            Kind::Zeta,
            &neg_rev_phases(&ph[..j]),
            &left_points(y, j),
            2 * mu,
            prec,
        )?;
        let rp = li_prefix(Kind::Zeta, &ph[j + 1..], &right_points(y, j), 2 * mu, prec)?;
        let mut inner = BigComplex::zero(prec);
        for k in -(m as i64)..=(m as i64) {
            let d = &BigComplex::from_int(prec, 2 * k - 1) - &ys[j];
            if d.abs_f64() < 1e-30 {
                return Err(SymmetryError::Pole(format!(
                    "2k - 1 - y vanishes at k = {}",
                    k
                )));
            }
            let a = &lp[(m as i64 + k) as usize];
            let b = &rp[(m as i64 - k) as usize];
            inner = &inner + &(&(&(a * b) * roots.at(k)) / &d);
        }
        rhs = &rhs + &inner.scale_rational(&sign(j));
    }
    let rhs = rhs.scale_rational(&pow2_inv(depth - 1));
    Ok((lhs, rhs))
}

/// LHS - RHS of the truncated identity; exact at every `M`, so the residual
/// is pure rounding. The bound is a rounding budget proportional to the
/// number of operations and the size of the terms.
pub fn truncated_identity_residual(
    phi: &PhaseVector,
    y: &EvalPoint,
    m: u64,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    let (lhs, rhs) = truncated_identity_sides(phi, y, m, ctx)?;
    let scale = lhs.abs_f64().max(rhs.abs_f64()).max(1.0);
    let ops = (phi.len() * phi.len() + 4) as f64 * (2 * m + 2) as f64;
    Ok(Evaluated {
        value: &lhs - &rhs,
        error: 16.0 * ops * scale * ctx.ulp(),
        terms: m,
    })
}

const RICHARDSON_LEVELS: usize = 9;
const RICHARDSON_BASE: i64 = 8;

/// Richardson extrapolation of samples taken at `N_0 * 2^j`, assuming an
/// expansion in integer powers of `1/N`. The error estimate is the change
/// between the last two diagonal entries.
fn richardson(samples: &[BigComplex]) -> (BigComplex, f64) {
    let mut table: Vec<Vec<BigComplex>> = Vec::with_capacity(samples.len());
    for (j, s) in samples.iter().enumerate() {
        let mut row = vec![s.clone()];
        for k in 1..=j {
            let f = (1u64 << k) - 1;
            let delta = (&row[k - 1] - &table[j - 1][k - 1]).scale_rational(&frac(1, f as i64));
            row.push(&row[k - 1] + &delta);
        }
        table.push(row);
    }
    let n = samples.len();
    let best = table[n - 1][n - 1].clone();
    let prev = table[n - 2][n - 2].clone();
    let est = (&best - &prev).abs_f64();
    (best, est)
}

fn sample_orders(period: i64) -> Vec<usize> {
    (0..RICHARDSON_LEVELS)
        .map(|j| (period * RICHARDSON_BASE * (1i64 << j)) as usize)
        .collect()
}

fn lcm_period(phases: &[Phase]) -> i64 {
    phases
        .iter()
        .fold(1i64, |a, q| a.lcm(reduce_phase(*q).denom()))
}

/// `Li(phi | y)` or `Li^t(phi | y)` as a limit of truncations, extrapolated
/// over orders that are multiples of the phase period. Needs a nonintegral
/// outermost phase. Interior zero phases introduce `log N / N` terms, which
/// this extrapolation does not remove; the reported estimate then grows
/// accordingly.
pub fn li_series_limit(
    kind: Kind,
    phi: &[Phase],
    y: &[BigComplex],
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    if phi.is_empty() {
        return Ok(Evaluated::exact(BigComplex::one(ctx.prec())));
    }
    if reduce_phase(phi[phi.len() - 1]).is_zero() {
        return Err(SymmetryError::Precondition(
            "outermost phase must be nonintegral".to_string(),
        ));
    }
    let orders = sample_orders(lcm_period(phi));
    let n_max = *orders.last().unwrap_or(&0);
    let pre = li_prefix(kind, phi, y, n_max, ctx.prec())?;
    let samples: Vec<BigComplex> = orders.iter().map(|&n| pre[n].clone()).collect();
    let (v, est) = richardson(&samples);
    Ok(Evaluated {
        value: v,
        error: est.max(ctx.ulp()),
        terms: n_max as u64,
    })
}

/// Depth-one `B^t(phi | y)` as the symmetric limit of `B^t_M`, for
/// nonintegral `phi`.
pub fn bt_limit(
    phi: Phase,
    y: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    if reduce_phase(phi).is_zero() {
        return Err(SymmetryError::Precondition(
            "t-Bernoulli limit needs a nonintegral phase".to_string(),
        ));
    }
    let prec = ctx.prec();
    let orders = sample_orders(lcm_period(&[phi]));
    let m_max = *orders.last().unwrap_or(&0) as i64;
    let terms = letter_terms(Kind::T, phi, y, -m_max..=m_max, prec)?;
    let at = |k: i64| &terms[(k + m_max) as usize];
    let mut s = at(0).clone();
    let mut samples = Vec::new();
    let mut next = 0;
    for k in 1..=m_max {
        s = &s + &(at(k) + at(-k));
        if next < orders.len() && k as usize == orders[next] {
            samples.push(s.clone());
            next += 1;
        }
    }
    let (v, est) = richardson(&samples);
    Ok(Evaluated {
        value: v,
        error: est.max(ctx.ulp()),
        terms: m_max as u64,
    })
}

fn mul_eval(a: &Evaluated, b: &Evaluated) -> Evaluated {
    Evaluated {
        value: &a.value * &b.value,
        error: a.error * b.value.abs_f64() + b.error * a.value.abs_f64() + a.error * b.error,
        terms: a.terms.max(b.terms),
    }
}

fn add_scaled_eval(acc: &mut Evaluated, x: &Evaluated, c: &BigComplex) {
    acc.value = &acc.value + &(&x.value * c);
    acc.error += x.error * c.abs_f64();
    acc.terms = acc.terms.max(x.terms);
}

/// Residual of the limiting identity (truncated identity at `M -> oo`),
/// valid when `phi_1`, `phi_m` and `phi_1 + ... + phi_m` are nonintegral.
/// Every series is extrapolated separately; the bound combines their
/// extrapolation estimates.
pub fn limit_identity_residual(
    phi: &PhaseVector,
    y: &EvalPoint,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    check_lengths(phi, y)?;
    if !phi.endpoints_nonintegral() || phi.sum_integral() {
        return Err(SymmetryError::Precondition(format!(
            "phases {} need nonintegral endpoints and sum",
            phi
        )));
    }
    let prec = ctx.prec();
    let depth = phi.len();
    let ph = phi.phases();
    let ys = y.values();
    let mut lhs = Evaluated::exact(BigComplex::zero(prec));
    let mut acc = Phase::zero();
    for j in 0..=depth {
        if j > 0 {
            acc += ph[j - 1];
        }
        let right = li_series_limit(Kind::T, &ph[j..], &ys[j..], ctx)?;
        let left = li_series_limit(
            Kind::T,
            &neg_rev_phases(&ph[..j]),
            &neg_rev_points(&ys[..j]),
            ctx,
        )?;
        let c = BigComplex::root_of_unity(prec, acc).scale_rational(&sign(j));
        add_scaled_eval(&mut lhs, &mul_eval(&right, &left), &c);
    }
    let mut rhs = Evaluated::exact(BigComplex::zero(prec));
    let scale = BigComplex::from_rational(prec, &pow2_inv(depth - 1));
    for j in 0..depth {
        let l = li_series_limit(
            Kind::Zeta,
            &neg_rev_phases(&ph[..j]),
            &left_points(y, j),
            ctx,
        )?;
        let r = li_series_limit(Kind::Zeta, &ph[j + 1..], &right_points(y, j), ctx)?;
        let b = bt_limit(phi.sum(), &ys[j], ctx)?;
        let c = scale.scale_rational(&sign(j));
        add_scaled_eval(&mut rhs, &mul_eval(&mul_eval(&l, &b), &r), &c);
    }
    Ok(Evaluated {
        value: &lhs.value - &rhs.value,
        error: lhs.error + rhs.error,
        terms: lhs.terms.max(rhs.terms),
    })
}

/// Value of a single word, regularized with `T = t0` when divergent.
fn word_value(
    w: &Word,
    kind: Kind,
    t0: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<Evaluated, NumericError> {
    if w.is_empty() {
        return Ok(Evaluated::exact(BigComplex::one(ctx.prec())));
    }
    if w.is_admissible() {
        eval(w, kind, ctx)
    } else {
        eval_reg(&stuffle_reg(w), kind, t0, ctx)
    }
}

/// `Li_{T=t0}(phi | y)` / `Li^t_{T=t0}(phi | y)`: the sum of
/// `reg_{T=t0}` values of the words `((n_1, phi_1), ..., (n_m, phi_m))`
/// times `y_1^(n_1-1) ... y_m^(n_m-1)`, over all weights up to `cutoff`.
///
/// The bound adds the evaluation errors and a geometric remainder: with
/// `rho = max |y_i|` and values bounded by the largest one seen, the
/// omitted weights contribute at most `C * sum_{w > cutoff} binom(w-1, m-1) rho^(w-m)`.
pub fn reg_li_series(
    kind: Kind,
    phi: &[Phase],
    y: &[BigComplex],
    t0: &BigComplex,
    cutoff: u32,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    if phi.len() != y.len() {
        return Err(SymmetryError::Precondition(format!(
            "{} phases but {} points",
            phi.len(),
            y.len()
        )));
    }
    let prec = ctx.prec();
    let m = phi.len();
    if m == 0 {
        return Ok(Evaluated::exact(BigComplex::one(prec)));
    }
    let rho = y.iter().map(|v| v.abs_f64()).fold(0.0, f64::max);
    if rho > 0.25 + 1e-12 {
        return Err(SymmetryError::Precondition(format!(
            "|y| = {} outside the disk |y| <= 1/4",
            rho
        )));
    }
    if cutoff < m as u32 {
        return Err(SymmetryError::Precondition(format!(
            "cutoff {} below depth {}",
            cutoff, m
        )));
    }
    let max_pow = (cutoff as usize).saturating_sub(m) + 1;
    let powers: Vec<Vec<BigComplex>> = y
        .iter()
        .map(|v| {
            let mut p = vec![BigComplex::one(prec)];
            for k in 1..max_pow {
                let next = &p[k - 1] * v;
                p.push(next);
            }
            p
        })
        .collect();
    let mut total = Evaluated::exact(BigComplex::zero(prec));
    let mut vmax = 1.0f64;
    for w in m as u32..=cutoff {
        for parts in compositions_with_parts(w, m) {
            let mut mono = BigComplex::one(prec);
            for (i, &n) in parts.iter().enumerate() {
                mono = &mono * &powers[i][n as usize - 1];
            }
            if mono.is_zero() {
                continue;
            }
            let pairs: Vec<(u32, Phase)> = parts.iter().copied().zip(phi.iter().copied()).collect();
            let word = Word::from_pairs(&pairs);
            let v = word_value(&word, kind, t0, &word_context(&mono, ctx))?;
            let v = Evaluated {
                value: v.value.with_prec(prec),
                ..v
            };
            vmax = vmax.max(v.value.abs_f64());
            add_scaled_eval(&mut total, &v, &mono);
        }
    }
    total.error += remainder_bound(m, rho, cutoff, 2.0 * vmax);
    total.terms = cutoff as u64;
    Ok(total)
}

/// A word multiplied by `mono` only needs `digits + log10 |mono|` digits;
/// precision is lowered in steps of five digits, never below ten.
fn word_context(mono: &BigComplex, ctx: &PrecisionContext) -> PrecisionContext {
    let size = mono.abs_f64();
    if !(size > 0.0) || size >= 1e-5 {
        return ctx.clone();
    }
    let drop = (-size.log10()).floor() as u32 / 5 * 5;
    ctx.reduced(ctx.digits().saturating_sub(drop).max(10))
}

fn remainder_bound(m: usize, rho: f64, cutoff: u32, c: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut w = cutoff as usize + 1;
    loop {
        let mut binom = 1.0f64;
        for i in 1..m {
            binom *= (w - m + i) as f64 / i as f64;
        }
        let term = c * binom * rho.powi((w - m) as i32);
        sum += term;
        if term < 1e-60 || w > cutoff as usize + 2000 {
            break;
        }
        w += 1;
    }
    sum
}

/// Regularized depth-one t-Bernoulli series
/// `B^t_{T=log2}(phi | y) = Li^t_{T=log2}(phi | y) - e(phi) Li^t_{T=log2}(-phi | -y)`.
pub fn reg_bt_series(
    phi: Phase,
    y: &BigComplex,
    cutoff: u32,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    let t0 = BigComplex::from_real(log2(ctx));
    let a = reg_li_series(Kind::T, &[phi], &[y.clone()], &t0, cutoff, ctx)?;
    let b = reg_li_series(
        Kind::T,
        &[reduce_phase(-phi)],
        &[-y.clone()],
        &t0,
        cutoff,
        ctx,
    )?;
    let e = -BigComplex::root_of_unity(ctx.prec(), phi);
    let mut out = a;
    add_scaled_eval(&mut out, &b, &e);
    Ok(out)
}

/// Right-hand constant of the regularized theorem: `(1/m!) (i pi / 2)^m`
/// when all phases vanish and `m` is even, otherwise zero.
pub fn symmetry_constant(phi: &PhaseVector, ctx: &PrecisionContext) -> BigComplex {
    let m = phi.len();
    if !phi.is_zero() || m % 2 == 1 {
        return BigComplex::zero(ctx.prec());
    }
    let (c, k) = constant_coefficient(m);
    ipi_power(&c, k, ctx)
}

/// `(c, k)` with `(1/m!) (i pi / 2)^m = c (i pi)^k`.
fn constant_coefficient(m: usize) -> (BigRational, u32) {
    let mut fact = BigInt::one();
    for i in 2..=m {
        fact *= i;
    }
    (BigRational::new(BigInt::one(), fact << m), m as u32)
}

fn ipi_power(c: &BigRational, k: u32, ctx: &PrecisionContext) -> BigComplex {
    let ipi = BigComplex::from_real(pi(ctx)).mul_i();
    ipi.powu(k).scale_rational(c)
}

/// Residual of the regularized symmetry theorem at the point `y`:
/// the t-side products at `T = log 2`, minus the zeta-side products with
/// `B^t_{T=log2}`, minus the case constant. Series are summed to weight
/// `cutoff`.
pub fn full_symmetry_residual(
    phi: &PhaseVector,
    y: &EvalPoint,
    cutoff: u32,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    check_lengths(phi, y)?;
    let prec = ctx.prec();
    let depth = phi.len();
    let ph = phi.phases();
    let ys = y.values();
    let log_two = BigComplex::from_real(log2(ctx));
    let zero = BigComplex::zero(prec);

    let mut lhs = Evaluated::exact(zero.clone());
    let mut acc = Phase::zero();
    for j in 0..=depth {
        if j > 0 {
            acc += ph[j - 1];
        }
        let right = reg_li_series(Kind::T, &ph[j..], &ys[j..], &log_two, cutoff, ctx)?;
        let left = reg_li_series(
            Kind::T,
            &neg_rev_phases(&ph[..j]),
            &neg_rev_points(&ys[..j]),
            &log_two,
            cutoff,
            ctx,
        )?;
        let c = BigComplex::root_of_unity(prec, acc).scale_rational(&sign(j));
        add_scaled_eval(&mut lhs, &mul_eval(&right, &left), &c);
    }
    let mut mid = Evaluated::exact(zero.clone());
    let scale = BigComplex::from_rational(prec, &pow2_inv(depth - 1));
    for j in 0..depth {
        let l = reg_li_series(
            Kind::Zeta,
            &neg_rev_phases(&ph[..j]),
            &left_points(y, j),
            &zero,
            cutoff,
            ctx,
        )?;
        let r = reg_li_series(
            Kind::Zeta,
            &ph[j + 1..],
            &right_points(y, j),
            &zero,
            cutoff,
            ctx,
        )?;
        let b = reg_bt_series(phi.sum(), &ys[j], cutoff, ctx)?;
        let c = scale.scale_rational(&sign(j));
        add_scaled_eval(&mut mid, &mul_eval(&mul_eval(&l, &b), &r), &c);
    }
    let constant = symmetry_constant(phi, ctx);
    Ok(Evaluated {
        value: &(&lhs.value - &mid.value) - &constant,
        error: lhs.error + mid.error,
        terms: cutoff as u64,
    })
}

/// Alternating sum of zeta-series products that vanishes for nonzero phases
/// summing to an integer (regularized at `T = 0`).
pub fn shuffle_form_residual(
    phi: &PhaseVector,
    y: &EvalPoint,
    cutoff: u32,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    check_lengths(phi, y)?;
    if phi.is_zero() || !phi.sum_integral() {
        return Err(SymmetryError::Precondition(format!(
            "phases {} must be nonzero with integral sum",
            phi
        )));
    }
    let zero = BigComplex::zero(ctx.prec());
    let ph = phi.phases();
    let mut total = Evaluated::exact(zero.clone());
    for j in 0..phi.len() {
        let l = reg_li_series(
            Kind::Zeta,
            &neg_rev_phases(&ph[..j]),
            &left_points(y, j),
            &zero,
            cutoff,
            ctx,
        )?;
        let r = reg_li_series(
            Kind::Zeta,
            &ph[j + 1..],
            &right_points(y, j),
            &zero,
            cutoff,
            ctx,
        )?;
        let c = BigComplex::from_rational(ctx.prec(), &sign(j));
        add_scaled_eval(&mut total, &mul_eval(&l, &r), &c);
    }
    Ok(total)
}

pub const MAX_RELATION_DEPTH: usize = 6;
pub const MAX_RELATION_WEIGHT: u32 = 12;

fn binomial(n: usize, k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * (n - i) / (i + 1);
    }
    b
}

/// Factor key: family, word, and whether it is the t-Bernoulli factor.
type FactorKey = (u8, Word);

fn key_factor(k: &FactorKey) -> Factor {
    let (tag, w) = k;
    match tag {
        0 => Factor::word(Kind::T, w),
        1 => Factor::word(Kind::Zeta, w),
        _ => Factor::labelled(Kind::T, WordSum::monomial(w.clone()), format!("Bt{}", w)),
    }
}

#[derive(Default)]
struct TermCollector(BTreeMap<Vec<FactorKey>, BigRational>);

impl TermCollector {
    fn add(&mut self, mut factors: Vec<FactorKey>, c: BigRational) {
        factors.sort();
        let e = self.0.entry(factors).or_insert_with(BigRational::zero);
        *e += c;
    }

    fn into_relation(self, constant: (BigRational, u32)) -> Relation {
        let mut entries: Vec<(Vec<FactorKey>, BigRational)> =
            self.0.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        entries.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let mut rel = Relation::new();
        for (keys, c) in entries {
            rel.push(c, keys.iter().map(key_factor).collect());
        }
        rel.constant = constant;
        rel
    }
}

fn half_count(phases: &[Phase]) -> usize {
    phases.iter().filter(|q| !q.is_zero()).count()
}

/// The relation obtained by extracting the coefficient of
/// `y_1^(n_1-1) ... y_m^(n_m-1)` from the regularized symmetry theorem, for a
/// word whose letters carry phase 0 or 1/2.
///
/// t-factors are regularized at `T = log 2`, zeta factors at `T = 0`. The
/// t-Bernoulli coefficients appear as factors labelled `Bt[..]`, equal to
/// `2 t(n; sigma)`'s word; at depth one they keep an explicit empty zeta
/// factor so that they never count towards the linear part, which is always
/// `t(w) + (-1)^|w| e(sum phi) t(reverse w)`.
pub fn extract_relation(w: &Word) -> Result<Relation, SymmetryError> {
    let m = w.len();
    if m == 0 || m > MAX_RELATION_DEPTH || w.weight() > MAX_RELATION_WEIGHT {
        return Err(SymmetryError::Unsupported(format!(
            "word {} outside depth 1..={} and weight <= {}",
            w, MAX_RELATION_DEPTH, MAX_RELATION_WEIGHT
        )));
    }
    let half = Phase::new(1, 2);
    if w.letters()
        .iter()
        .any(|l| !l.phase().is_zero() && l.phase() != half)
    {
        return Err(SymmetryError::Unsupported(format!(
            "phases of {} must be 0 or 1/2",
            w
        )));
    }
    let n: Vec<u32> = w.weights();
    let ph: Vec<Phase> = w.phases();
    let letter =
        |weight: u32, q: Phase| Letter::new(weight, reduce_phase(q)).expect("positive weight");
    let mut terms = TermCollector::default();

    // t-side products
    for j in 0..=m {
        let right = Word::new((j..m).map(|i| letter(n[i], ph[i])).collect());
        let left = Word::new((0..j).rev().map(|i| letter(n[i], -ph[i])).collect());
        let flips: usize =
            (0..j).map(|i| n[i] as usize - 1).sum::<usize>() + j + half_count(&ph[..j]);
        let mut fs = Vec::new();
        if !right.is_empty() {
            fs.push((0u8, right));
        }
        if !left.is_empty() {
            fs.push((0u8, left));
        }
        terms.add(fs, sign(flips));
    }

    // zeta-side products with the t-Bernoulli coefficient
    let total = reduce_phase(ph.iter().fold(Phase::zero(), |a, b| a + b));
    let s_odd = !total.is_zero();
    let base = pow2_inv(m - 1) * int(2);
    for j in 0..m {
        let others: Vec<usize> = (0..m).filter(|&i| i != j).collect();
        let budget = n[j] as usize - 1;
        for extra in distributions(others.len(), budget) {
            let used: usize = extra.iter().sum();
            let nb = n[j] as usize - used;
            // b_n = (1 + e(sigma) (-1)^n) t(n; sigma)
            if (nb % 2 == 0) == s_odd {
                continue;
            }
            let mut coeff = base.clone() * sign(j);
            let mut pw = vec![0usize; m];
            for (slot, &i) in others.iter().enumerate() {
                pw[i] = n[i] as usize + extra[slot];
                let b = binomial(pw[i] - 1, n[i] as usize - 1);
                let s = if i < j {
                    sign(n[i] as usize - 1)
                } else {
                    sign(extra[slot])
                };
                coeff = coeff * big_int(b) * s * pow2_inv(pw[i] - 1);
            }
            let left = Word::new((0..j).rev().map(|i| letter(pw[i] as u32, -ph[i])).collect());
            let right = Word::new((j + 1..m).map(|i| letter(pw[i] as u32, ph[i])).collect());
            let mut fs = vec![(2u8, Word::new(vec![letter(nb as u32, total)]))];
            if !left.is_empty() {
                fs.push((1u8, left));
            }
            if !right.is_empty() {
                fs.push((1u8, right));
            }
            if m == 1 {
                fs.push((1u8, Word::empty()));
            }
            terms.add(fs, -coeff);
        }
    }

    let constant = if ph.iter().all(|q| q.is_zero()) && m % 2 == 0 && n.iter().all(|&k| k == 1) {
        constant_coefficient(m)
    } else {
        (BigRational::zero(), 0)
    };
    Ok(terms.into_relation(constant))
}

fn big_int(b: BigInt) -> BigRational {
    BigRational::from_integer(b)
}

/// All vectors of `k` nonnegative integers with sum at most `budget`.
fn distributions(k: usize, budget: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=budget {
        for rest in distributions(k - 1, budget - first) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

fn r_label(r: &BigRational, w: &Word) -> String {
    if r.is_zero() {
        w.display_with(Kind::T)
    } else if r.is_one() {
        format!("t*{}", w)
    } else {
        format!("t^{}{}", r, w)
    }
}

fn t_r_factor(w: &Word, r: &BigRational) -> Factor {
    Factor::labelled(Kind::T, sigma(w, r), r_label(r, w))
}

/// The stuffle antipode identity for `t^r`:
/// `t^r(I) - sum over splittings I = I_1 ... I_k of (-1)^(l(I) - k) prod t^(1-r)(reverse I_i) = 0`,
/// with all values regularized at `T = log 2`.
pub fn antipode_relation(w: &Word, r: &BigRational) -> Result<Relation, SymmetryError> {
    if !w.has_zero_phases() {
        return Err(SymmetryError::Word(WordError::NonZeroPhase(w.to_string())));
    }
    let l = w.len();
    let dual = BigRational::one() - r;
    let mut rel = Relation::new();
    rel.push(BigRational::one(), vec![t_r_factor(w, r)]);
    for blocks in splittings(l) {
        let k = blocks.len();
        let fs: Vec<Factor> = blocks
            .iter()
            .map(|&(s, e)| t_r_factor(&w.slice(s, e).reverse(), &dual))
            .collect();
        rel.push(-sign(l - k), fs);
    }
    Ok(rel)
}

/// For `|I|` and `l(I)` of opposite parity: `t^(1/2)(I)` written as half the
/// sum of the product parts of the antipode identity and of the symmetry
/// relations of the words in `Sigma^(1/2)(I)`, as the relation
/// `t^(1/2)(I) - (products) = 0`.
pub fn half_parity_relation(w: &Word) -> Result<Relation, SymmetryError> {
    if !w.has_zero_phases() {
        return Err(SymmetryError::Word(WordError::NonZeroPhase(w.to_string())));
    }
    if (w.weight() as usize + w.len()) % 2 == 0 {
        return Err(SymmetryError::Precondition(format!(
            "{} has weight and length of equal parity",
            w
        )));
    }
    let half = frac(1, 2);
    let mut rel = Relation::new();
    rel.push(BigRational::one(), vec![t_r_factor(w, &half)]);
    for t in antipode_relation(w, &half)?
        .terms
        .into_iter()
        .filter(|t| t.factors.len() > 1)
    {
        rel.push(&t.coeff * &half, t.factors);
    }
    let mut constant = (BigRational::zero(), 0u32);
    for (j, c) in sigma(w, &half).iter() {
        let sym = extract_relation(j)?;
        for t in sym.terms.into_iter().filter(|t| t.factors.len() > 1) {
            rel.push(&t.coeff * c * &half, t.factors);
        }
        let (sc, sk) = sym.constant;
        if !sc.is_zero() {
            if !constant.0.is_zero() && constant.1 != sk {
                return Err(SymmetryError::Unsupported(
                    "mixed constant powers".to_string(),
                ));
            }
            constant = (constant.0 - sc * c * &half, sk);
        }
    }
    rel.constant = constant;
    Ok(rel)
}

/// Numeric value of `sum(terms) - constant`: t-factors regularized at
/// `T = log 2`, zeta factors at `T = 0`.
pub fn relation_residual(
    rel: &Relation,
    ctx: &PrecisionContext,
) -> Result<Evaluated, SymmetryError> {
    let prec = ctx.prec();
    let log_two = BigComplex::from_real(log2(ctx));
    let zero = BigComplex::zero(prec);
    let mut total = Evaluated::exact(zero.clone());
    for t in &rel.terms {
        let mut prod = Evaluated::exact(BigComplex::one(prec));
        for f in &t.factors {
            let t0 = match f.kind {
                Kind::T => &log_two,
                Kind::Zeta => &zero,
            };
            let v = factor_value(&f.sum, f.kind, t0, ctx)?;
            prod = mul_eval(&prod, &v);
        }
        add_scaled_eval(
            &mut total,
            &prod,
            &BigComplex::from_rational(prec, &t.coeff),
        );
    }
    let (c, k) = &rel.constant;
    if !c.is_zero() {
        total.value = &total.value - &ipi_power(c, *k, ctx);
    }
    Ok(total)
}

fn factor_value(
    s: &WordSum,
    kind: Kind,
    t0: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<Evaluated, NumericError> {
    let empty = s.coeff(&Word::empty());
    let rest: WordSum = WordSum::from_terms(
        s.iter()
            .filter(|(w, _)| !w.is_empty())
            .map(|(w, c)| (w.clone(), c.clone())),
    );
    let mut v = if rest.iter().all(|(w, _)| w.is_admissible()) {
        eval_sum(&rest, kind, ctx)?
    } else {
        eval_reg(&stuffle_reg_sum(&rest), kind, t0, ctx)?
    };
    if !empty.is_zero() {
        v.value = &v.value + &BigComplex::from_rational(ctx.prec(), &empty);
    }
    Ok(v)
}
