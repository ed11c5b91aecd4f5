//! Exact lower bounds for the Weil height on composita of ray class fields.
//!
//! The crate is organised around a small number of exact-arithmetic layers:
//!
//! - [`exactmath`]: valuations, gcd/lcm combinators and [`exactmath::Factorization`],
//!   the factored-integer form used for every quantity that may be astronomically
//!   large (bounds of the order of 10^1941 appear in routine use).
//! - [`bigfloat`]: fixed-point interval reals with certified natural logarithms;
//!   the only non-exact layer, and every value it produces is an enclosure.
//! - [`krasner`]: counts of extensions of p-adic fields of bounded degree,
//!   total, totally ramified, and per ramification/inertia profile.
//! - [`compositum`]: upper bounds for the ramification index and the inertia
//!   degree of a compositum of local extensions.
//! - [`heightbound`]: the λ/β search and the explicit height lower bound for
//!   a tower scenario, combining the two modules above.
//! - [`density`]: exact natural densities of fields with prescribed splitting
//!   behaviour at a prime, for degrees 2 through 5.
//! - [`heightoracle`]: a numerical Weil-height evaluator with certified error
//!   bounds, used as an independent cross-check of the bound engine.

pub mod bigfloat;
pub mod compositum;
pub mod density;
pub mod exactmath;
pub mod heightbound;
pub mod heightoracle;
pub mod krasner;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an operation's input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An input was valid but outside the supported working range.
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    /// The requested value does not exist (e.g. a non-positive bound).
    #[error("domain error: {0}")]
    Domain(String),
    /// Interval arithmetic failed to reach the requested accuracy.
    #[error("precision failure: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
