//! Word algebra, regularization and high-precision numerics for multiple
//! zeta values and multiple t-values at roots of unity.

pub mod genseries;
pub mod numerics;
pub mod regularization;
pub mod symmetry;
pub mod words;
