//! Arbitrary-precision evaluation of nested sums at roots of unity.
//!
//! Convergent values are computed from their iterated-integral form with
//! a Hölder split of the unit interval, so every piece is a power series
//! with geometric convergence and an explicit truncation bound. Finite
//! truncations use nested partial-sum dynamic programming; a second,
//! direct summation with tail correction is kept as an independent
//! low-precision check.

mod asymp;
mod complex;
mod direct;
mod polylog;
mod special;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::words::{Kind, Word, WordError};

pub use asymp::{asymp_limit_check, AsympFit};
pub use complex::{rational_to_float, render_float, BigComplex};
pub use direct::{eval_direct, eval_truncated, eval_truncated_sum};
pub use polylog::{eval, eval_reg, eval_sum, eval_with_terms, t_to_zeta, ZetaExpansion};
pub use special::{
    bernoulli, dirichlet_beta, euler_gamma, euler_number, hurwitz_zeta, log2, pi, polygamma,
    riemann_zeta, series_a, series_b, series_c, special, trigamma,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("word {0} is not admissible; regularize it first")]
    NotAdmissible(String),
    #[error("target error {target:e} unreachable for {what} within {cap} terms")]
    Unreachable { what: String, target: f64, cap: u64 },
    #[error("pole hit: {0}")]
    Pole(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precision overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A value with an absolute error bound and the number of series terms used.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub value: BigComplex,
    pub error: f64,
    pub terms: u64,
}

impl Evaluated {
    pub fn exact(value: BigComplex) -> Self {
        Evaluated {
            value,
            error: 0.0,
            terms: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum ConstKey {
    Pi,
    Log2,
    EulerGamma,
    Zeta(u32),
    Beta(u32),
    Hurwitz(u32, String),
}

#[derive(Default)]
struct Caches {
    constants: Mutex<HashMap<ConstKey, BigComplex>>,
    words: Mutex<HashMap<(Kind, Word), Evaluated>>,
    reduced: Mutex<HashMap<u32, PrecisionContext>>,
}

/// Working precision, target error and truncation cap, plus shared
/// constant and word-value caches (filled idempotently).
#[derive(Clone)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
    bits: u32,
    m_max: u64,
    safety: f64,
    caches: Arc<Caches>,
}

impl std::fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrecisionContext")
            .field("digits", &self.digits)
            .field("bits", &self.bits)
            .field("m_max", &self.m_max)
            .finish()
    }
}

pub const GUARD_DIGITS: u32 = 15;
pub const MAX_DIGITS: u32 = 300;

impl PrecisionContext {
    pub fn new(digits: u32) -> Self {
        Self::with_options(digits, 1_000_000, 4.0)
    }

    pub fn with_options(digits: u32, m_max: u64, safety: f64) -> Self {
        let digits = digits.clamp(1, MAX_DIGITS);
        let guard = GUARD_DIGITS;
        let bits = (((digits + guard) as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 8;
        PrecisionContext {
            digits,
            guard,
            bits,
            m_max,
            safety,
            caches: Arc::new(Caches::default()),
        }
    }

    /// Same settings with a different cap; caches are shared.
    pub fn with_mmax(&self, m_max: u64) -> Self {
        PrecisionContext {
            m_max,
            ..self.clone()
        }
    }

    /// A context at fewer digits (same cap and safety), memoized here so
    /// its caches persist across calls. Requests at or above the current
    /// digits return this context.
    pub fn reduced(&self, digits: u32) -> PrecisionContext {
        if digits >= self.digits {
            return self.clone();
        }
        let mut map = self.caches.reduced.lock().expect("cache lock");
        map.entry(digits)
            .or_insert_with(|| Self::with_options(digits, self.m_max, self.safety))
            .clone()
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard
    }

    /// Working precision in bits.
    pub fn prec(&self) -> u32 {
        self.bits
    }

    pub fn m_max(&self) -> u64 {
        self.m_max
    }

    pub fn safety(&self) -> f64 {
        self.safety
    }

    /// Target absolute error `10^-digits`.
    pub fn target(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    /// Relative size of one rounding step at working precision.
    pub fn ulp(&self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }

    pub(crate) fn constant<F: FnOnce() -> BigComplex>(&self, key: ConstKey, make: F) -> BigComplex {
        if let Some(v) = self.caches.constants.lock().expect("cache lock").get(&key) {
            return v.clone();
        }
        let v = make();
        self.caches
            .constants
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert(v)
            .clone()
    }

    pub(crate) fn cached_word(&self, kind: Kind, w: &Word) -> Option<Evaluated> {
        self.caches
            .words
            .lock()
            .expect("cache lock")
            .get(&(kind, w.clone()))
            .cloned()
    }

    pub(crate) fn store_word(&self, kind: Kind, w: &Word, v: &Evaluated) {
        self.caches
            .words
            .lock()
            .expect("cache lock")
            .entry((kind, w.clone()))
            .or_insert_with(|| v.clone());
    }
}
