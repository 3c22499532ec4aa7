//! Truncated power series and the closed-form generating series of
//! families of multiple t- and zeta-values.

mod catalog;
mod functions;
mod oracle;
mod series;

pub use catalog::{
    closed_form, entry, oz242_explicit, t3223_explicit, Entry, CATALOG, DEFAULT_ORDER,
    DEFAULT_ORDERS_2D,
};
pub use functions::{
    apply, coeffs, log_gamma_coeffs, log_gamma_shift, trigamma_one_shift, Fun, GammaBase,
};
pub use oracle::{direct_coefficient, verify_series, CoeffCheck, SeriesReport};
pub use series::{SeriesError, TruncSeries};
