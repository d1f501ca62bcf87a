//! A minimal commutative-ring interface.
//!
//! Series arithmetic, Newton lifting and the Padé–Hermite solver run both
//! over the base field and over the quotient algebra `K[Y]/(p)`. The trait
//! keeps elements plain (no back-pointer to their ring); the ring value
//! itself carries the context.

use crate::arith::Scalar;
use crate::error::Result;
use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Inverse of a unit. Fails with `DivisionByZero` on zero and with
    /// `ZeroDivisor { factor }` when the ring is a quotient algebra and the
    /// element is a nonzero zero divisor.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// Embedding of the base field.
    fn from_scalar(&self, s: &Scalar) -> Self::Elem;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_scalar(&self.base_field().from_i64(n))
    }

    /// Multiplication by a base-field scalar.
    fn scale(&self, a: &Self::Elem, s: &Scalar) -> Self::Elem {
        self.mul(a, &self.from_scalar(s))
    }

    fn base_field(&self) -> crate::arith::FieldSpec;
}
