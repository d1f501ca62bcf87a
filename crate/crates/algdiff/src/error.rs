//! Error types shared across the crate.

use crate::arith::{FieldSpec, Scalar, UniPoly};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero precision: operation needs at least one known coefficient")]
    ZeroPrecision,

    #[error("both operands are constant in Y; the resultant in Y is undefined")]
    ConstantInY,

    #[error("polynomial is not separable in Y (gcd(P, P_Y) is nontrivial)")]
    NotSeparable,

    #[error(
        "hypothesis H_b fails at X = 0 ({what}); try shifting X by {suggested_shift} first",
        what = hb_what(*.disc_zero, *.lc_zero)
    )]
    HypothesisHb {
        disc_zero: bool,
        lc_zero: bool,
        suggested_shift: Scalar,
    },

    #[error("hypothesis H' requires deg_Y(P) >= 2")]
    DyTooSmall,

    #[error("{0} is not a simple root of P(0, Y)")]
    NotASimpleRoot(Scalar),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("the defining polynomial is not squarefree")]
    NotSquarefree,

    #[error("element does not belong to the expected algebra")]
    ParentMismatch,

    #[error("{0} does not divide the defining polynomial")]
    NotAFactor(UniPoly),

    #[error("division by a zero divisor; gcd with the modulus gives a proper factor")]
    ZeroDivisor { factor: UniPoly },

    #[error("the field has too few elements to {0}")]
    FieldTooSmall(String),

    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("the homogeneous system has no nonzero kernel vector at these bounds")]
    EmptyKernel,

    #[error("initial segment too short at index {0} and no polynomial available to re-lift")]
    InitialSegmentTooShort(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

fn hb_what(disc_zero: bool, lc_zero: bool) -> &'static str {
    match (disc_zero, lc_zero) {
        (true, true) => "both the discriminant and the leading coefficient vanish",
        (true, false) => "the discriminant vanishes",
        (false, true) => "the leading coefficient vanishes",
        (false, false) => "nothing vanishes (internal error)",
    }
}

pub type Result<T> = std::result::Result<T, Error>;
