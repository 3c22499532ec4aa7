//! Regularization of divergent words as polynomials in a parameter `T`.
//!
//! Stuffle side: trailing `(1, phase 0)` letters are extracted with the
//! stuffle product, `z_1 -> T`. Shuffle side: integral words starting with
//! 0 or ending with 1 are reduced with the shuffle product, both
//! `I(0;0;1)` and `I(0;1;1)` becoming `T`.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::words::{
    int, integral_sum_to_zeta, shuffle_words, sigma, stuffle, stuffle_words, to_integral,
    IntegralSum, IntegralWord, Kind, Letter, LinComb, Word, WordError, WordSum,
};

/// Polynomial in `T` with formal-sum coefficients; `coeffs[k]` multiplies `T^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegPoly<K: Ord> {
    coeffs: Vec<LinComb<K>>,
}

/// Stuffle-side regularization polynomial over signed words.
pub type StuffleReg = RegPoly<Word>;
/// Shuffle-side regularization polynomial over integral words.
pub type ShuffleReg = RegPoly<IntegralWord>;

impl<K: Ord + Clone> RegPoly<K> {
    pub fn zero() -> Self {
        RegPoly { coeffs: Vec::new() }
    }

    pub fn constant(s: LinComb<K>) -> Self {
        let mut p = RegPoly { coeffs: vec![s] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<LinComb<K>>) -> Self {
        let mut p = RegPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Highest power of `T` present; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> LinComb<K> {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[LinComb<K>] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k).plus(&other.coeff(k)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-BigRational::one()))
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|s| s.scaled(c)).collect())
    }

    /// Multiply by `T`.
    pub fn times_t(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![LinComb::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(coeffs)
    }

    /// Product where coefficients are multiplied with `mul`.
    pub fn product_with<F: Fn(&LinComb<K>, &LinComb<K>) -> LinComb<K>>(
        &self,
        other: &Self,
        mul: F,
    ) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![LinComb::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j].add_assign(&mul(a, b));
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Substitute a rational value for `T`.
    pub fn evaluate(&self, t: &BigRational) -> LinComb<K> {
        let mut out = LinComb::zero();
        let mut pw = BigRational::one();
        for c in &self.coeffs {
            out.add_scaled(c, &pw);
            pw *= t;
        }
        out
    }

    /// Re-express with a shifted parameter: the result `q` satisfies
    /// `q(S) = p(S + delta)`.
    pub fn change_parameter(&self, delta: &BigRational) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![LinComb::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            // T^k = sum_j binom(k, j) S^j delta^(k-j)
            let mut binom = BigRational::one();
            for j in (0..=k).rev() {
                let d = crate::words::pow(delta, (k - j) as u32);
                coeffs[j].add_scaled(c, &(&binom * d));
                // binom(k, j-1) = binom(k, j) * j / (k - j + 1)
                if j > 0 {
                    binom = binom * int(j as i64) / int((k - j + 1) as i64);
                }
            }
        }
        Self::from_coeffs(coeffs)
    }
}

impl StuffleReg {
    /// Stuffle product of coefficients.
    pub fn stuffle_product(&self, other: &Self) -> Self {
        self.product_with(other, stuffle)
    }

    pub fn render(&self, kind: Kind) -> String {
        render_poly(&self.coeffs, |s| s.render(kind))
    }

    /// JSON mirror: list of `{tdeg, terms}`.
    pub fn to_json(&self, kind: Kind) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| serde_json::json!({ "tdeg": k, "terms": c.to_json(kind) }))
                .collect(),
        )
    }
}

impl ShuffleReg {
    pub fn shuffle_product(&self, other: &Self) -> Self {
        self.product_with(other, crate::words::shuffle)
    }

    /// Rewrite the (convergent) integral-word coefficients as zeta words.
    pub fn to_zeta_words(&self) -> Result<StuffleReg, WordError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut nonempty = IntegralSum::zero();
                let mut out = WordSum::zero();
                for (iw, v) in c.iter() {
                    if iw.is_empty() {
                        out.add_term(Word::empty(), v.clone());
                    } else {
                        nonempty.add_term(iw.clone(), v.clone());
                    }
                }
                out.add_assign(&integral_sum_to_zeta(&nonempty)?);
                Ok(out)
            })
            .collect::<Result<Vec<_>, WordError>>()?;
        Ok(StuffleReg::from_coeffs(coeffs))
    }
}

fn render_poly<K: Ord + Clone, F: Fn(&LinComb<K>) -> String>(
    coeffs: &[LinComb<K>],
    f: F,
) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => format!("({})", f(c)),
            1 => format!("({})·T", f(c)),
            _ => format!("({})·T^{}", f(c), k),
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for StuffleReg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_poly(&self.coeffs, |s| s.to_string()))
    }
}

/// Memoizing stuffle regularizer.
#[derive(Default)]
pub struct StuffleRegularizer {
    cache: HashMap<Word, StuffleReg>,
}

impl StuffleRegularizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(&mut self, w: &Word) -> StuffleReg {
        if let Some(p) = self.cache.get(w) {
            return p.clone();
        }
        let a = w.trailing_ones();
        let result = if a == 0 {
            StuffleReg::constant(WordSum::monomial(w.clone()))
        } else {
            // v * z_1 = a * w + (words with fewer trailing ones)
            let v = w.slice(0, w.len() - 1);
            let mut rest = stuffle_words(&v, &Word::new(vec![Letter::plain(1)]));
            rest.add_term(w.clone(), -int(a as i64));
            let mut acc = self.word(&v).times_t();
            for (x, c) in rest.iter() {
                acc = acc.sub(&self.word(x).scaled(c));
            }
            acc.scaled(&(BigRational::one() / int(a as i64)))
        };
        self.cache.insert(w.clone(), result.clone());
        result
    }

    pub fn sum(&mut self, s: &WordSum) -> StuffleReg {
        let mut acc = StuffleReg::zero();
        for (w, c) in s.iter() {
            acc = acc.add(&self.word(w).scaled(c));
        }
        acc
    }
}

/// Stuffle regularization of a single word.
pub fn stuffle_reg(w: &Word) -> StuffleReg {
    StuffleRegularizer::new().word(w)
}

/// Stuffle regularization extended linearly.
pub fn stuffle_reg_sum(s: &WordSum) -> StuffleReg {
    StuffleRegularizer::new().sum(s)
}

/// Memoizing shuffle regularizer.
#[derive(Default)]
pub struct ShuffleRegularizer {
    cache: HashMap<IntegralWord, ShuffleReg>,
}

impl ShuffleRegularizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(&mut self, w: &IntegralWord) -> ShuffleReg {
        if let Some(p) = self.cache.get(w) {
            return p.clone();
        }
        let bits = w.letters();
        let trailing = bits.iter().rev().take_while(|&&b| b == 1).count();
        let leading = bits.iter().take_while(|&&b| b == 0).count();
        let result = if trailing > 0 {
            let v = w.slice(0, w.len() - 1);
            let one = IntegralWord::new(vec![1]);
            self.reduce(w, &v, &shuffle_words(&v, &one), trailing)
        } else if leading > 0 {
            let v = w.slice(1, w.len());
            let zero = IntegralWord::new(vec![0]);
            self.reduce(w, &v, &shuffle_words(&zero, &v), leading)
        } else {
            ShuffleReg::constant(IntegralSum::monomial(w.clone()))
        };
        self.cache.insert(w.clone(), result.clone());
        result
    }

    fn reduce(
        &mut self,
        w: &IntegralWord,
        v: &IntegralWord,
        product: &IntegralSum,
        mult: usize,
    ) -> ShuffleReg {
        let mut rest = product.clone();
        rest.add_term(w.clone(), -int(mult as i64));
        let mut acc = self.word(v).times_t();
        for (x, c) in rest.iter() {
            acc = acc.sub(&self.word(x).scaled(c));
        }
        acc.scaled(&(BigRational::one() / int(mult as i64)))
    }

    pub fn sum(&mut self, s: &IntegralSum) -> ShuffleReg {
        let mut acc = ShuffleReg::zero();
        for (w, c) in s.iter() {
            acc = acc.add(&self.word(w).scaled(c));
        }
        acc
    }
}

pub fn shuffle_reg(w: &IntegralWord) -> ShuffleReg {
    ShuffleRegularizer::new().word(w)
}

/// Shuffle regularization of a zeta word (phases 0), returned over zeta words.
pub fn shuffle_reg_zeta(w: &Word) -> Result<StuffleReg, WordError> {
    let (sign, iw) = to_integral(w)?;
    shuffle_reg(&iw)
        .to_zeta_words()
        .map(|p| p.scaled(&int(sign as i64)))
}

/// `t^r(I)` as a combination of plain words: `Sigma^r` applied to `I`.
pub fn r_expand(w: &Word, r: &BigRational) -> Result<WordSum, WordError> {
    if !w.has_zero_phases() {
        return Err(WordError::NonZeroPhase(w.to_string()));
    }
    Ok(sigma(w, r))
}

/// A factor of a product term: a linear combination of words of one family,
/// regularized (stuffle side) at that family's parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: Kind,
    pub sum: WordSum,
    /// Short human-readable label.
    pub label: String,
}

impl Factor {
    pub fn word(kind: Kind, w: &Word) -> Self {
        Factor {
            kind,
            sum: WordSum::monomial(w.clone()),
            label: w.display_with(kind),
        }
    }

    /// Star value `t*(w)`, expanded via `Sigma^1`.
    pub fn star(kind: Kind, w: &Word) -> Self {
        Factor {
            kind,
            sum: sigma(w, &BigRational::one()),
            label: format!("{}*{}", kind.prefix(), w),
        }
    }

    pub fn labelled(kind: Kind, sum: WordSum, label: String) -> Self {
        Factor { kind, sum, label }
    }
}

/// One summand `coeff * prod(factors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: BigRational,
    pub factors: Vec<Factor>,
}

/// A symbolic identity `sum(terms) = constant`, where the constant is
/// `c * (i pi)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<Term>,
    pub constant: (BigRational, u32),
}

impl Relation {
    pub fn new() -> Self {
        Relation {
            terms: Vec::new(),
            constant: (BigRational::zero(), 0),
        }
    }

    pub fn push(&mut self, coeff: BigRational, factors: Vec<Factor>) {
        if !coeff.is_zero() && factors.iter().all(|f| !f.sum.is_zero()) {
            self.terms.push(Term { coeff, factors });
        }
    }

    /// Terms with exactly one factor, merged per family.
    pub fn linear_part(&self) -> Vec<(Kind, WordSum)> {
        let mut out: Vec<(Kind, WordSum)> = Vec::new();
        for t in self.terms.iter().filter(|t| t.factors.len() == 1) {
            let f = &t.factors[0];
            match out.iter_mut().find(|(k, _)| *k == f.kind) {
                Some((_, s)) => s.add_scaled(&f.sum, &t.coeff),
                None => out.push((f.kind, f.sum.scaled(&t.coeff))),
            }
        }
        out.retain(|(_, s)| !s.is_zero());
        out
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let body: Vec<String> = t.factors.iter().map(|f| f.label.clone()).collect();
            let c = &t.coeff;
            let sign = if c < &BigRational::zero() { "-" } else { "+" };
            if i > 0 || sign == "-" {
                s.push_str(&format!(" {} ", sign));
            }
            let a = if c < &BigRational::zero() {
                -c.clone()
            } else {
                c.clone()
            };
            if !a.is_one() || body.is_empty() {
                s.push_str(&a.to_string());
                if !body.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&body.join("*"));
        }
        let (c, k) = &self.constant;
        if s.is_empty() {
            s.push('0');
        }
        if c.is_zero() {
            format!("{} = 0", s.trim())
        } else {
            format!("{} = {}*(i*pi)^{}", s.trim(), c, k)
        }
    }
}

impl Default for Relation {
    fn default() -> Self {
        Self::new()
    }
}

/// The reversal identity between plain and star values of
/// `w = (prefix, {middle}^n, suffix)`:
/// `t*(w) = -(-1)^(len-2) t(reverse w)... ` in the general form
/// `sum_i (-1)^i t(reverse(w_1..w_i)) t*(w_{i+1}..w_l) = 0`,
/// solved for `t*(w)`.
pub fn star_reversal_relation(
    kind: Kind,
    prefix: &[u32],
    middle: &[u32],
    suffix: &[u32],
    n: usize,
) -> Result<Relation, WordError> {
    if prefix.is_empty() || suffix.is_empty() {
        return Err(WordError::Parse(
            format!("{:?},{{{:?}}}^{},{:?}", prefix, middle, n, suffix),
            "pattern needs nonempty outer blocks".to_string(),
        ));
    }
    if n > 0 && middle.is_empty() {
        return Err(WordError::Parse(
            format!("{:?}", middle),
            "empty repeated block".to_string(),
        ));
    }
    let mut weights = prefix.to_vec();
    for _ in 0..n {
        weights.extend_from_slice(middle);
    }
    weights.extend_from_slice(suffix);
    let w = Word::from_weights(&weights);
    let l = w.len();
    // t*(w) + sum_{i>=1} (-1)^i t(rev(w_1..w_i)) t*(w_{i+1}..) = 0
    // written as  t*(w) - [-(-1)^l t(rev w) - sum_{0<i<l} (-1)^i t(rev prefix) t*(suffix)] = 0
    let mut rel = Relation::new();
    rel.push(BigRational::one(), vec![Factor::star(kind, &w)]);
    let sign = |i: usize| if i % 2 == 0 { int(1) } else { int(-1) };
    rel.push(sign(l), vec![Factor::word(kind, &w.reverse())]);
    for i in 1..l {
        let head = w.slice(0, i).reverse();
        let tail = w.slice(i, l);
        rel.push(
            sign(i),
            vec![Factor::word(kind, &head), Factor::star(kind, &tail)],
        );
    }
    Ok(rel)
}
