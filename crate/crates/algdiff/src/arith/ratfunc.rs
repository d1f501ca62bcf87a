//! The rational function field K(X), used by the exact fraction backend.
//!
//! Elements are kept reduced: gcd(num, den) = 1 and den monic; zero is
//! 0/1. Arithmetic is deliberately plain — this field is the small-instance
//! oracle, not a performance path.

use crate::arith::field::{FieldSpec, Scalar};
use crate::arith::ring::Ring;
use crate::arith::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RatFunc {
    pub num: UniPoly,
    pub den: UniPoly,
}

/// K(X) as a [`Ring`] (every nonzero element is a unit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatField(pub FieldSpec);

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field;
        if num.is_zero() {
            return Ok(RatFunc { num, den: UniPoly::one(field) });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().map_or(false, |d| d > 0) {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        } else {
            (num, den)
        };
        let lc = den.leading_coeff().unwrap().clone();
        if !field.is_one(&lc) {
            let inv = field.inv(&lc)?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let field = p.field;
        RatFunc { num: p, den: UniPoly::one(field) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// d/dX by the quotient rule.
    pub fn derive(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den)).expect("denominator stays nonzero")
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        let field = self.num.field;
        field.div(&self.num.eval(x), &self.den.eval(x))
    }
}

impl Ring for RatField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::from_poly(UniPoly::zero(self.0))
    }

    fn one(&self) -> RatFunc {
        RatFunc::from_poly(UniPoly::one(self.0))
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        RatFunc::new(num, a.den.mul(&b.den)).expect("denominators nonzero")
    }

    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let num = a.num.mul(&b.den).sub(&b.num.mul(&a.den));
        RatFunc::new(num, a.den.mul(&b.den)).expect("denominators nonzero")
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        RatFunc::new(a.num.mul(&b.num), a.den.mul(&b.den)).expect("denominators nonzero")
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: a.num.neg(), den: a.den.clone() }
    }

    fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(a.den.clone(), a.num.clone())
    }

    fn from_scalar(&self, s: &Scalar) -> RatFunc {
        RatFunc::from_poly(UniPoly::constant(self.0, s.clone()))
    }

    fn base_field(&self) -> FieldSpec {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_field_axioms() {
        let f = FieldSpec::rational();
        let k = RatField(f);
        // (X^2-1)/(X-1) reduces to X+1.
        let r = RatFunc::new(
            UniPoly::from_i64_coeffs(f, &[-1, 0, 1]),
            UniPoly::from_i64_coeffs(f, &[-1, 1]),
        )
        .unwrap();
        assert_eq!(r.num, UniPoly::from_i64_coeffs(f, &[1, 1]));
        assert!(r.is_poly());

        let a = RatFunc::new(
            UniPoly::from_i64_coeffs(f, &[1]),
            UniPoly::from_i64_coeffs(f, &[0, 2]),
        )
        .unwrap();
        // Denominator normalized monic: 1/(2X) = (1/2)/X.
        assert_eq!(a.den, UniPoly::from_i64_coeffs(f, &[0, 1]));
        let prod = k.mul(&a, &k.inv(&a).unwrap());
        assert_eq!(prod, k.one());
        let s = k.add(&a, &k.neg(&a));
        assert!(k.is_zero(&s));
    }

    #[test]
    fn quotient_rule() {
        let f = FieldSpec::rational();
        // d/dX (1/(1+X)) = -1/(1+X)^2
        let r = RatFunc::new(UniPoly::one(f), UniPoly::from_i64_coeffs(f, &[1, 1])).unwrap();
        let d = r.derive();
        assert_eq!(d.num, UniPoly::from_i64_coeffs(f, &[-1]));
        assert_eq!(d.den, UniPoly::from_i64_coeffs(f, &[1, 2, 1]));
    }
}
