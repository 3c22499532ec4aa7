//! Signed words, rational linear combinations of them, and the
//! stuffle / interpolated stuffle / shuffle products.
//!
//! A [`Word`] lists its letters innermost summation index first, so
//! `t[2,1,3]` is the sum over `k1 < k2 < k3` of `1/((2k1-1)^2 (2k2-1) (2k3-1)^3)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Phase of a letter: the root of unity `exp(2 pi i q)`, stored as `q mod 1`.
pub type Phase = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter weight must be at least 1")]
    ZeroWeight,
    #[error("operation requires all phases to be 0, got {0}")]
    NonZeroPhase(String),
    #[error("integral word must start with 1: {0}")]
    NotStartingWithOne(String),
    #[error("cannot parse word `{0}`: {1}")]
    Parse(String, String),
    #[error("cannot parse coefficient `{0}`")]
    Coefficient(String),
}

/// Reduce a rational phase into `[0, 1)`.
pub fn reduce_phase(q: Phase) -> Phase {
    q - q.floor()
}

/// Convert a small rational into a `BigRational`.
pub fn big(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Which family of nested sums a word is read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Denominators `k`.
    Zeta,
    /// Denominators `2k - 1`.
    T,
}

impl Kind {
    pub fn prefix(self) -> char {
        match self {
            Kind::Zeta => 'z',
            Kind::T => 't',
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Zeta => write!(f, "zeta"),
            Kind::T => write!(f, "t"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    weight: u32,
    phase: Phase,
}

impl Letter {
    pub fn new(weight: u32, phase: Phase) -> Result<Self, WordError> {
        if weight == 0 {
            return Err(WordError::ZeroWeight);
        }
        Ok(Letter {
            weight,
            phase: reduce_phase(phase),
        })
    }

    /// Letter with phase 0.
    pub fn plain(weight: u32) -> Self {
        assert!(weight >= 1, "letter weight must be at least 1");
        Letter {
            weight,
            phase: Phase::zero(),
        }
    }

    /// Letter with phase 1/2 (sign -1).
    pub fn alternating(weight: u32) -> Self {
        assert!(weight >= 1, "letter weight must be at least 1");
        Letter {
            weight,
            phase: Phase::new(1, 2),
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    /// The divergent letter `(1, phase 0)`.
    pub fn is_divergent_one(&self) -> bool {
        self.weight == 1 && self.phase.is_zero()
    }

    /// Letter produced when two summation indices coincide.
    pub fn merge(&self, other: &Letter) -> Letter {
        Letter {
            weight: self.weight + other.weight,
            phase: reduce_phase(self.phase + other.phase),
        }
    }

    pub fn with_phase(&self, phase: Phase) -> Letter {
        Letter {
            weight: self.weight,
            phase: reduce_phase(phase),
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then(self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase.is_zero() {
            write!(f, "{}", self.weight)
        } else if self.phase == Phase::new(1, 2) {
            write!(f, "-{}", self.weight)
        } else {
            write!(
                f,
                "{}@{}/{}",
                self.weight,
                self.phase.numer(),
                self.phase.denom()
            )
        }
    }
}

/// A finite sequence of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Word with all phases 0.
    pub fn from_weights(weights: &[u32]) -> Self {
        Word(weights.iter().map(|&w| Letter::plain(w)).collect())
    }

    /// Word from weights and phases given pairwise.
    pub fn from_pairs(pairs: &[(u32, Phase)]) -> Self {
        Word(
            pairs
                .iter()
                .map(|&(w, p)| Letter::new(w, p).expect("weight >= 1"))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|l| l.weight).sum()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.0.iter().map(|l| l.weight).collect()
    }

    pub fn phases(&self) -> Vec<Phase> {
        self.0.iter().map(|l| l.phase).collect()
    }

    pub fn has_zero_phases(&self) -> bool {
        self.0.iter().all(|l| l.phase.is_zero())
    }

    /// Convergent as a nested sum: the last letter is not `(1, phase 0)`.
    pub fn is_admissible(&self) -> bool {
        self.0.last().map_or(true, |l| !l.is_divergent_one())
    }

    /// Number of trailing `(1, phase 0)` letters.
    pub fn trailing_ones(&self) -> usize {
        self.0
            .iter()
            .rev()
            .take_while(|l| l.is_divergent_one())
            .count()
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// `(-1)^length`.
    pub fn parity_sign(&self) -> i32 {
        if self.0.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Negate all phases.
    pub fn conjugate_phases(&self) -> Word {
        Word(self.0.iter().map(|l| l.with_phase(-l.phase)).collect())
    }

    /// All ways of cutting the word into a prefix and a suffix.
    pub fn deconcatenations(&self) -> Vec<(Word, Word)> {
        (0..=self.len())
            .map(|i| (self.slice(0, i), self.slice(i, self.len())))
            .collect()
    }

    /// Render with a family prefix, e.g. `t[3,2,-1]`.
    pub fn display_with(&self, kind: Kind) -> String {
        format!("{}{}", kind.prefix(), self)
    }

    fn require_zero_phases(&self) -> Result<(), WordError> {
        if self.has_zero_phases() {
            Ok(())
        } else {
            Err(WordError::NonZeroPhase(self.to_string()))
        }
    }
}

/// Graded lexicographic: weight, depth, weight sequence, phase sequence.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.weights().cmp(&other.weights()))
            .then_with(|| self.phases().cmp(&other.phases()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l)?;
        }
        write!(f, "]")
    }
}

fn parse_letter(tok: &str, whole: &str) -> Result<Letter, WordError> {
    let err = |m: &str| WordError::Parse(whole.to_string(), m.to_string());
    let tok = tok.trim();
    let (w, phase) = if let Some((w, p)) = tok.split_once('@') {
        let p = p.trim();
        let q = if let Some((n, d)) = p.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err("bad phase numerator"))?;
            let d: i64 = d.trim().parse().map_err(|_| err("bad phase denominator"))?;
            if d == 0 {
                return Err(err("zero phase denominator"));
            }
            Phase::new(n, d)
        } else {
            Phase::from_integer(p.parse().map_err(|_| err("bad phase"))?)
        };
        (w.trim(), q)
    } else if let Some(w) = tok.strip_prefix('-') {
        (w.trim(), Phase::new(1, 2))
    } else {
        (tok, Phase::zero())
    };
    let weight: u32 = w.parse().map_err(|_| err("bad letter weight"))?;
    Letter::new(weight, phase).map_err(|_| err("letter weight must be at least 1"))
}

/// Parse `t[3,2,2,3]`, `z[2,-3]` or `z[1@1/3,2]`.
pub fn parse_word(s: &str) -> Result<(Kind, Word), WordError> {
    let err = |m: &str| WordError::Parse(s.to_string(), m.to_string());
    let t = s.trim();
    let kind = match t.chars().next() {
        Some('t') => Kind::T,
        Some('z') => Kind::Zeta,
        _ => return Err(err("expected prefix `t` or `z`")),
    };
    let body = t[1..].trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| err("expected brackets"))?;
    if inner.trim().is_empty() {
        return Ok((kind, Word::empty()));
    }
    let letters = inner
        .split(',')
        .map(|tok| parse_letter(tok, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((kind, Word(letters)))
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.starts_with('[') {
            parse_word(&format!("z{}", t)).map(|(_, w)| w)
        } else {
            parse_word(t).map(|(_, w)| w)
        }
    }
}

/// Word over the two-letter alphabet `{0, 1}` of an iterated integral
/// `I(0; x_1, ..., x_N; 1)`, `x_1` nearest to 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntegralWord(Vec<u8>);

impl IntegralWord {
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(
            bits.iter().all(|&b| b <= 1),
            "integral words use letters 0 and 1"
        );
        IntegralWord(bits)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reverse(&self) -> IntegralWord {
        IntegralWord(self.0.iter().rev().copied().collect())
    }

    pub fn slice(&self, start: usize, end: usize) -> IntegralWord {
        IntegralWord(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &IntegralWord) -> IntegralWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IntegralWord(v)
    }

    /// Convergent iterated integral: does not start with 0 nor end with 1.
    pub fn is_convergent(&self) -> bool {
        self.0.first() != Some(&0) && self.0.last() != Some(&1)
    }
}

impl fmt::Display for IntegralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", b)?;
        }
        write!(f, ")")
    }
}

/// Finite formal sum with exact rational coefficients; zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, BigRational>,
}

pub type WordSum = LinComb<Word>;
pub type IntegralSum = LinComb<IntegralWord>;

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: K) -> Self {
        Self::term(k, BigRational::one())
    }

    pub fn term(k: K, c: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (K, BigRational)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in it {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, k: K, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.sub_assign(other);
        s
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let mut s = Self::zero();
        s.add_scaled(self, c);
        s
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-BigRational::one())
    }

    pub fn coeff(&self, k: &K) -> BigRational {
        self.terms.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Apply a linear map given on basis elements.
    pub fn map_linear<K2: Ord + Clone, F: FnMut(&K) -> LinComb<K2>>(
        &self,
        mut f: F,
    ) -> LinComb<K2> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }
}

impl<K: Ord + Clone + fmt::Display> LinComb<K> {
    /// Human-readable rendering with a per-key formatter.
    pub fn render_with<F: Fn(&K) -> String>(&self, f: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                out.push_str(&format!("{}*", a));
            }
            out.push_str(&f(k));
        }
        out
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|k| k.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    word: String,
    coefficient: String,
}

impl WordSum {
    pub fn render(&self, kind: Kind) -> String {
        self.render_with(|w| w.display_with(kind))
    }

    /// JSON list of `{word, coefficient}` with fraction strings.
    pub fn to_json(&self, kind: Kind) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .iter()
            .map(|(w, c)| JsonTerm {
                word: w.display_with(kind),
                coefficient: c.to_string(),
            })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<(Option<Kind>, WordSum), WordError> {
        let terms: Vec<JsonTerm> = serde_json::from_value(v.clone())
            .map_err(|e| WordError::Parse(v.to_string(), e.to_string()))?;
        let mut kind = None;
        let mut s = WordSum::zero();
        for t in terms {
            let (k, w) = parse_word(&t.word)?;
            kind = Some(k);
            let c = BigRational::from_str(&t.coefficient)
                .map_err(|_| WordError::Coefficient(t.coefficient.clone()))?;
            s.add_term(w, c);
        }
        Ok((kind, s))
    }
}

/// Quasi-shuffle of two letter sequences. `merge` returns the merged
/// letter and its coefficient, or `None` for a plain shuffle.
fn quasi_shuffle<L, F>(a: &[L], b: &[L], merge: &F) -> LinComb<Vec<L>>
where
    L: Clone + Ord,
    F: Fn(&L, &L) -> Option<(L, BigRational)>,
{
    let p = a.len();
    let q = b.len();
    // table[i][j] = a[i..] * b[j..]
    let mut table: Vec<Vec<LinComb<Vec<L>>>> = vec![vec![LinComb::zero(); q + 1]; p + 1];
    for i in (0..=p).rev() {
        for j in (0..=q).rev() {
            let entry = if i == p {
                LinComb::monomial(b[j..].to_vec())
            } else if j == q {
                LinComb::monomial(a[i..].to_vec())
            } else {
                let mut s = prepend(&a[i], &table[i + 1][j]);
                s.add_assign(&prepend(&b[j], &table[i][j + 1]));
                if let Some((m, c)) = merge(&a[i], &b[j]) {
                    s.add_scaled(&prepend(&m, &table[i + 1][j + 1]), &c);
                }
                s
            };
            table[i][j] = entry;
        }
    }
    std::mem::take(&mut table[0][0])
}

fn prepend<L: Clone + Ord>(l: &L, s: &LinComb<Vec<L>>) -> LinComb<Vec<L>> {
    let mut out = LinComb::zero();
    for (k, c) in s.iter() {
        let mut v = Vec::with_capacity(k.len() + 1);
        v.push(l.clone());
        v.extend_from_slice(k);
        out.add_term(v, c.clone());
    }
    out
}

fn bilinear<K, F>(a: &LinComb<K>, b: &LinComb<K>, mut f: F) -> LinComb<K>
where
    K: Ord + Clone,
    F: FnMut(&K, &K) -> LinComb<K>,
{
    let mut out = LinComb::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            out.add_scaled(&f(u, v), &(cu * cv));
        }
    }
    out
}

fn word_product(u: &Word, v: &Word, merge_coeff: &BigRational) -> WordSum {
    let merge = |x: &Letter, y: &Letter| {
        if merge_coeff.is_zero() {
            None
        } else {
            Some((x.merge(y), merge_coeff.clone()))
        }
    };
    let raw = quasi_shuffle(u.letters(), v.letters(), &merge);
    let mut out = WordSum::zero();
    for (k, c) in raw.iter() {
        out.add_term(Word(k.clone()), c.clone());
    }
    out
}

/// Stuffle (harmonic) product.
pub fn stuffle(a: &WordSum, b: &WordSum) -> WordSum {
    let one = BigRational::one();
    bilinear(a, b, |u, v| word_product(u, v, &one))
}

pub fn stuffle_words(u: &Word, v: &Word) -> WordSum {
    word_product(u, v, &BigRational::one())
}

/// Interpolated stuffle: merges carry the coefficient `1 - 2r`.
pub fn interp_stuffle(a: &WordSum, b: &WordSum, r: &BigRational) -> WordSum {
    let c = BigRational::one() - int(2) * r;
    bilinear(a, b, |u, v| word_product(u, v, &c))
}

/// Product of several word sums under the interpolated stuffle.
pub fn interp_product(factors: &[WordSum], r: &BigRational) -> WordSum {
    let mut acc = WordSum::monomial(Word::empty());
    for f in factors {
        acc = interp_stuffle(&acc, f, r);
    }
    acc
}

/// All ways of cutting `0..n` into consecutive nonempty blocks, as lists of
/// block end positions.
pub fn splittings(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                blocks.push((start, i + 1));
                start = i + 1;
            }
        }
        blocks.push((start, n));
        out.push(blocks);
    }
    out
}

fn merge_block(letters: &[Letter]) -> Letter {
    letters[1..].iter().fold(letters[0], |acc, l| acc.merge(l))
}

/// The merging map: sum over splittings into `k` consecutive blocks of
/// `p^(len - k)` times the word of merged blocks.
pub fn sigma(w: &Word, p: &BigRational) -> WordSum {
    let n = w.len();
    let mut out = WordSum::zero();
    if p.is_zero() {
        return WordSum::monomial(w.clone());
    }
    for blocks in splittings(n) {
        let k = blocks.len();
        let merged: Vec<Letter> = blocks
            .iter()
            .map(|&(s, e)| merge_block(&w.letters()[s..e]))
            .collect();
        out.add_term(Word(merged), pow(p, (n - k) as u32));
    }
    out
}

pub fn sigma_sum(s: &WordSum, p: &BigRational) -> WordSum {
    s.map_linear(|w| sigma(w, p))
}

pub fn pow(x: &BigRational, e: u32) -> BigRational {
    let mut r = BigRational::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

/// Which of the two equivalent antipode formulas to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntipodeFormula {
    /// `Sigma^(1-2r) T R`: merge the signed reversal.
    SigmaReversal,
    /// Alternating sum over splittings of interpolated products of blocks.
    Splitting,
}

/// Antipode of the Hopf algebra with product `interp_stuffle(., ., r)` and
/// deconcatenation coproduct.
pub fn antipode(w: &Word, r: &BigRational, formula: AntipodeFormula) -> Result<WordSum, WordError> {
    w.require_zero_phases()?;
    Ok(antipode_unchecked(w, r, formula))
}

fn antipode_unchecked(w: &Word, r: &BigRational, formula: AntipodeFormula) -> WordSum {
    match formula {
        AntipodeFormula::SigmaReversal => {
            let p = BigRational::one() - int(2) * r;
            sigma(&w.reverse(), &p).scaled(&int(w.parity_sign() as i64))
        }
        AntipodeFormula::Splitting => {
            let mut out = WordSum::zero();
            for blocks in splittings(w.len()) {
                let factors: Vec<WordSum> = blocks
                    .iter()
                    .map(|&(s, e)| WordSum::monomial(w.slice(s, e)))
                    .collect();
                let sign = if blocks.len() % 2 == 0 {
                    int(1)
                } else {
                    int(-1)
                };
                out.add_scaled(&interp_product(&factors, r), &sign);
            }
            if w.is_empty() {
                out = WordSum::monomial(Word::empty());
            }
            out
        }
    }
}

pub fn antipode_sum(
    s: &WordSum,
    r: &BigRational,
    formula: AntipodeFormula,
) -> Result<WordSum, WordError> {
    for (w, _) in s.iter() {
        w.require_zero_phases()?;
    }
    Ok(s.map_linear(|w| antipode_unchecked(w, r, formula)))
}

/// Shuffle product of iterated-integral words.
pub fn shuffle(a: &IntegralSum, b: &IntegralSum) -> IntegralSum {
    let none = |_: &u8, _: &u8| None;
    bilinear(a, b, |u, v| {
        let raw = quasi_shuffle(u.letters(), v.letters(), &none);
        let mut out = IntegralSum::zero();
        for (k, c) in raw.iter() {
            out.add_term(IntegralWord(k.clone()), c.clone());
        }
        out
    })
}

pub fn shuffle_words(u: &IntegralWord, v: &IntegralWord) -> IntegralSum {
    shuffle(
        &IntegralSum::monomial(u.clone()),
        &IntegralSum::monomial(v.clone()),
    )
}

/// `zeta(n_1..n_l) = (-1)^l I(0; 1 0^(n_1-1) ... 1 0^(n_l-1); 1)`.
pub fn to_integral(w: &Word) -> Result<(i32, IntegralWord), WordError> {
    w.require_zero_phases()?;
    let mut bits = Vec::with_capacity(w.weight() as usize);
    for l in w.letters() {
        bits.push(1);
        bits.extend(std::iter::repeat(0).take(l.weight() as usize - 1));
    }
    Ok((w.parity_sign(), IntegralWord(bits)))
}

/// Inverse of [`to_integral`].
pub fn from_integral(iw: &IntegralWord) -> Result<(i32, Word), WordError> {
    if iw.0.first() != Some(&1) {
        return Err(WordError::NotStartingWithOne(iw.to_string()));
    }
    let mut weights = Vec::new();
    for &b in &iw.0 {
        if b == 1 {
            weights.push(1);
        } else {
            *weights.last_mut().expect("starts with 1") += 1;
        }
    }
    let w = Word::from_weights(&weights);
    Ok((w.parity_sign(), w))
}

/// Reverse and swap `0 <-> 1`. `I(w) = (-1)^len I(dual w)`.
pub fn dual(iw: &IntegralWord) -> IntegralWord {
    IntegralWord(iw.0.iter().rev().map(|&b| 1 - b).collect())
}

/// Dual zeta word: `zeta(w) = zeta(zeta_dual(w))` for admissible `w`.
pub fn zeta_dual(w: &Word) -> Result<Word, WordError> {
    let (_, iw) = to_integral(w)?;
    from_integral(&dual(&iw)).map(|(_, d)| d)
}

/// [`zeta_dual`] applied termwise.
pub fn zeta_dual_sum(s: &WordSum) -> Result<WordSum, WordError> {
    let mut out = WordSum::zero();
    for (w, c) in s.iter() {
        out.add_term(zeta_dual(w)?, c.clone());
    }
    Ok(out)
}

/// Rewrite a sum of integral words as zeta words (all words must start with 1).
pub fn integral_sum_to_zeta(s: &IntegralSum) -> Result<WordSum, WordError> {
    let mut out = WordSum::zero();
    for (iw, c) in s.iter() {
        let (sign, w) = from_integral(iw)?;
        out.add_term(w, c * int(sign as i64));
    }
    Ok(out)
}

/// Every composition of `n` (all phases 0), in lexicographic order.
pub fn compositions(n: u32) -> Vec<Word> {
    if n == 0 {
        return vec![Word::empty()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut v = vec![Letter::plain(first)];
            v.extend_from_slice(rest.letters());
            out.push(Word(v));
        }
    }
    out
}

/// Compositions of `n` with exactly `m` parts.
pub fn compositions_with_parts(n: u32, m: usize) -> Vec<Vec<u32>> {
    if m == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    if n < m as u32 {
        return out;
    }
    for first in 1..=(n - (m as u32 - 1)) {
        for rest in compositions_with_parts(n - first, m - 1) {
            let mut v = vec![first];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(ws: &[u32]) -> Word {
        Word::from_weights(ws)
    }

    fn ws(terms: &[(&[u32], i64)]) -> WordSum {
        WordSum::from_terms(terms.iter().map(|(w, c)| (z(w), int(*c))))
    }

    #[test]
    fn parse_and_display_round_trip() {
        let (k, w) = parse_word("z[1@1/3, 2, -3]").unwrap();
        assert_eq!(k, Kind::Zeta);
        assert_eq!(w.letters()[0].phase(), Phase::new(1, 3));
        assert_eq!(w.letters()[2].phase(), Phase::new(1, 2));
        assert_eq!(w.display_with(k), "z[1@1/3,2,-3]");
        let (k, w) = parse_word("t[3,2,2,3]").unwrap();
        assert_eq!(k, Kind::T);
        assert_eq!(w, z(&[3, 2, 2, 3]));
        assert!(parse_word("q[1]").is_err());
        assert!(parse_word("t[0]").is_err());
        assert!(parse_word("t[1@1/0]").is_err());
        assert_eq!(parse_word("t[]").unwrap().1, Word::empty());
        assert_eq!(
            parse_word("z[1@-1/3]").unwrap().1.letters()[0].phase(),
            Phase::new(2, 3)
        );
    }

    #[test]
    fn graded_order() {
        assert!(z(&[3]) < z(&[1, 3]));
        assert!(z(&[1, 2]) < z(&[2, 1]));
        assert!(z(&[2, 2]) < z(&[5]));
        let a = Word::from_pairs(&[(2, Phase::zero())]);
        let b = Word::from_pairs(&[(2, Phase::new(1, 2))]);
        assert!(a < b);
    }

    #[test]
    fn stuffle_examples() {
        let p = stuffle(&ws(&[(&[2], 1)]), &ws(&[(&[3, 2], 1)]));
        let expected = ws(&[(&[2, 3, 2], 1), (&[5, 2], 1), (&[3, 2, 2], 2), (&[3, 4], 1)]);
        assert_eq!(p, expected);
        assert_eq!(
            stuffle(&ws(&[(&[1], 1)]), &ws(&[(&[1], 1)])),
            ws(&[(&[1, 1], 2), (&[2], 1)])
        );
        let e = WordSum::monomial(Word::empty());
        assert_eq!(stuffle(&e, &ws(&[(&[4, 1], 3)])), ws(&[(&[4, 1], 3)]));
    }

    #[test]
    fn stuffle_adds_phases() {
        let a = Word::from_pairs(&[(1, Phase::new(1, 3))]);
        let b = Word::from_pairs(&[(2, Phase::new(2, 3))]);
        let p = stuffle_words(&a, &b);
        assert_eq!(p.coeff(&Word::from_pairs(&[(3, Phase::zero())])), int(1));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn interpolated_examples() {
        let r = frac(1, 3);
        let p = interp_stuffle(&ws(&[(&[1], 1)]), &ws(&[(&[1], 1)]), &r);
        let mut expected = ws(&[(&[1, 1], 2)]);
        expected.add_term(z(&[2]), frac(1, 3));
        assert_eq!(p, expected);
        let half = frac(1, 2);
        assert_eq!(
            interp_stuffle(&ws(&[(&[1], 1)]), &ws(&[(&[2], 1)]), &half),
            ws(&[(&[1, 2], 1), (&[2, 1], 1)])
        );
        assert_eq!(
            interp_stuffle(&ws(&[(&[1], 1)]), &ws(&[(&[1], 1)]), &int(0)),
            stuffle(&ws(&[(&[1], 1)]), &ws(&[(&[1], 1)]))
        );
    }

    #[test]
    fn interpolated_square_matches_sigma_oracle() {
        // t^r(1)^2 = t(Sigma^r(z1 * z1))-style check: Sigma^r is an algebra map
        // from the r-product to the stuffle product.
        for r in [frac(0, 1), frac(1, 2), frac(1, 1), frac(1, 3), frac(-2, 5)] {
            let lhs = sigma_sum(
                &interp_stuffle(&ws(&[(&[1], 1)]), &ws(&[(&[1], 1)]), &r),
                &r,
            );
            let rhs = stuffle(&sigma(&z(&[1]), &r), &sigma(&z(&[1]), &r));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sigma_examples() {
        let r = frac(2, 7);
        let s = sigma(&z(&[2, 1, 3]), &r);
        let mut expected = ws(&[(&[2, 1, 3], 1)]);
        expected.add_term(z(&[3, 3]), r.clone());
        expected.add_term(z(&[2, 4]), r.clone());
        expected.add_term(z(&[6]), &r * &r);
        assert_eq!(s, expected);
        assert_eq!(sigma(&z(&[2]), &r), ws(&[(&[2], 1)]));
        let (a, b) = (frac(1, 3), frac(5, 4));
        let lhs = sigma_sum(&sigma(&z(&[1, 1]), &b), &a);
        let mut expected = ws(&[(&[1, 1], 1)]);
        expected.add_term(z(&[2]), &a + &b);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn reverse_and_parity() {
        let w = z(&[2, 1, 3]);
        assert_eq!(w.reverse(), z(&[3, 1, 2]));
        assert_eq!(w.parity_sign(), -1);
        assert_eq!(w.reverse().reverse(), w);
    }

    #[test]
    fn antipode_examples() {
        let r = frac(1, 5);
        for f in [AntipodeFormula::SigmaReversal, AntipodeFormula::Splitting] {
            assert_eq!(antipode(&z(&[2]), &r, f).unwrap(), ws(&[(&[2], -1)]));
            let mut expected = ws(&[(&[1, 1], 1)]);
            expected.add_term(z(&[2]), int(1) - int(2) * &r);
            assert_eq!(antipode(&z(&[1, 1]), &r, f).unwrap(), expected);
        }
        let w = Word::from_pairs(&[(1, Phase::new(1, 2))]);
        assert!(antipode(&w, &r, AntipodeFormula::Splitting).is_err());
    }

    #[test]
    fn shuffle_examples() {
        let one = IntegralWord::new(vec![1]);
        let zero = IntegralWord::new(vec![0]);
        let p = shuffle_words(&one, &zero);
        assert_eq!(p.len(), 2);
        let p = shuffle_words(&IntegralWord::new(vec![1, 0]), &one);
        let expected = IntegralSum::from_terms(vec![
            (IntegralWord::new(vec![1, 0, 1]), int(1)),
            (IntegralWord::new(vec![1, 1, 0]), int(2)),
        ]);
        assert_eq!(p, expected);
        let e = IntegralWord::default();
        assert_eq!(shuffle_words(&e, &one), IntegralSum::monomial(one.clone()));
    }

    #[test]
    fn integral_conversions() {
        let (s, iw) = to_integral(&z(&[2, 3])).unwrap();
        assert_eq!(s, 1);
        assert_eq!(iw, IntegralWord::new(vec![1, 0, 1, 0, 0]));
        assert_eq!(from_integral(&iw).unwrap(), (1, z(&[2, 3])));
        assert!(from_integral(&IntegralWord::new(vec![0, 1])).is_err());
        for n in 0..4 {
            let mut a = vec![2; n];
            a.push(3);
            let (_, iw) = to_integral(&z(&a)).unwrap();
            let d = dual(&iw);
            let mut b = vec![1];
            b.extend(vec![2; n + 1]);
            assert_eq!(from_integral(&d).unwrap().1, z(&b));
            assert_eq!(dual(&d), iw);
        }
    }

    #[test]
    fn json_round_trip() {
        let mut s = ws(&[(&[2, 1], 3)]);
        s.add_term(Word::from_pairs(&[(1, Phase::new(1, 3))]), frac(-2, 7));
        let j = s.to_json(Kind::T);
        let (k, back) = WordSum::from_json(&j).unwrap();
        assert_eq!(k, Some(Kind::T));
        assert_eq!(back, s);
    }

    #[test]
    fn composition_counts() {
        for n in 1..8 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
        assert_eq!(compositions_with_parts(6, 3).len(), 10);
    }
}
