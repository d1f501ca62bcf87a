//! Differential operators and fast coefficient expansion for algebraic
//! power series.
//!
//! Given a squarefree bivariate polynomial P(X, Y), the crate computes
//! linear differential operators that annihilate every root of P — the
//! minimal resolvent, creative-telescoping operators, and operators found
//! by Padé–Hermite approximation — converts them to linear recurrences on
//! series coefficients, and uses the recurrences to expand a root of P to
//! N terms in linear time, with Newton iteration as the exact baseline.

pub mod algebra;
pub mod algtodiff;
pub mod arith;
pub mod bounds;
pub mod diffop;
pub mod approx;
pub mod error;
pub mod lab;
pub mod lift;
pub mod linalg;
pub mod rec;
pub mod resolvent;
pub mod telescope;

pub use arith::{BiPoly, FieldSpec, Ring, Scalar, TruncSeries, UniPoly, VarForm};
pub use error::{Error, Result};

#[cfg(test)]
pub(crate) fn test_rng(seed: u64) -> rand_chacha::ChaCha12Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha12Rng::seed_from_u64(seed)
}
