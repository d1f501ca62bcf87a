//! Exact scalars: a prime field F_p (word-size p) or arbitrary-precision rationals.
//!
//! A [`Scalar`] is always canonical: modular values satisfy `0 <= v < p`,
//! rationals are kept reduced with positive denominator by `BigRational`.
//! All arithmetic goes through a [`FieldSpec`], which knows which field the
//! scalars live in; mixing fields is a caller bug and is checked where cheap.

use crate::error::{Error, Result};
use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Zero};
use rand::RngExt;
use std::fmt;
use std::str::FromStr;

/// Which exact field scalars are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// The prime field with `modulus` elements; `modulus` must be an odd
    /// prime below 2^31 so that products of reduced values fit in `u64`
    /// headroom used by the linear-algebra kernels.
    Prime { modulus: u64 },
    /// The rational numbers with arbitrary-precision integers.
    Rational,
}

/// An element of the field described by some [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u64),
    Rat(Box<BigRational>),
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // p is prime, so Fermat works and avoids signed extended-gcd juggling.
    Some(mod_pow(a, p - 2, p))
}

impl FieldSpec {
    pub fn prime(modulus: u64) -> Result<Self> {
        if modulus < 3 || modulus >= (1 << 31) {
            return Err(Error::InvalidInput(format!(
                "modulus {modulus} out of supported range 3..2^31"
            )));
        }
        if !is_prime_u64(modulus) {
            return Err(Error::InvalidInput(format!("modulus {modulus} is not prime")));
        }
        Ok(FieldSpec::Prime { modulus })
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldSpec::Prime { modulus } => Some(*modulus),
            FieldSpec::Rational => None,
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldSpec::Prime { .. })
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Prime { .. } => Scalar::Mod(0),
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Prime { .. } => Scalar::Mod(1),
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::one())),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime { modulus } => {
                let r = n.rem_euclid(*modulus as i64) as u64;
                Scalar::Mod(r)
            }
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::from_integer(n.into()))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Prime { modulus } => {
                let m = BigInt::from(*modulus);
                let mut r = n % &m;
                if r.sign() == Sign::Minus {
                    r += &m;
                }
                let (_, digits) = r.to_u64_digits();
                Scalar::Mod(digits.first().copied().unwrap_or(0))
            }
            FieldSpec::Rational => Scalar::Rat(Box::new(BigRational::from_integer(n.clone()))),
        }
    }

    #[inline]
    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Mod(v) => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    #[inline]
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime { modulus }, Scalar::Mod(x), Scalar::Mod(y)) => {
                let s = x + y;
                Scalar::Mod(if s >= *modulus { s - modulus } else { s })
            }
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(&**x + &**y))
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    #[inline]
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime { modulus }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(if x >= y { x - y } else { x + modulus - y })
            }
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(&**x - &**y))
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    #[inline]
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Prime { modulus }, Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(mulmod(*x, *y, *modulus))
            }
            (FieldSpec::Rational, Scalar::Rat(x), Scalar::Rat(y)) => {
                Scalar::Rat(Box::new(&**x * &**y))
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    #[inline]
    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Prime { modulus }, Scalar::Mod(x)) => {
                Scalar::Mod(if *x == 0 { 0 } else { modulus - x })
            }
            (FieldSpec::Rational, Scalar::Rat(x)) => Scalar::Rat(Box::new(-&**x)),
            _ => panic!("scalar does not match field {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (FieldSpec::Prime { modulus }, Scalar::Mod(x)) => mod_inv(*x, *modulus)
                .map(Scalar::Mod)
                .ok_or(Error::DivisionByZero),
            (FieldSpec::Rational, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(Box::new(x.recip())))
                }
            }
            _ => panic!("scalar does not match field {self}"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Uniformly random field element. For the rationals this draws a small
    /// integer, which is what the sampling call sites (coefficients, weights)
    /// actually need.
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Prime { modulus } => Scalar::Mod(rng.random_range(0..*modulus)),
            FieldSpec::Rational => self.from_i64(rng.random_range(-99..100)),
        }
    }

    pub fn random_nonzero<R: rand::Rng>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !self.is_zero(&s) {
                return s;
            }
        }
    }

    /// Parses the decimal-string scalar encoding: an integer, or `num/den`
    /// for rationals.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            FieldSpec::Prime { .. } => {
                let n = BigInt::from_str(s)
                    .map_err(|e| Error::Parse(format!("bad modular scalar {s:?}: {e}")))?;
                Ok(self.from_bigint(&n))
            }
            FieldSpec::Rational => {
                let r = BigRational::from_str(s)
                    .map_err(|e| Error::Parse(format!("bad rational scalar {s:?}: {e}")))?;
                Ok(Scalar::Rat(Box::new(r)))
            }
        }
    }

    /// Renders a scalar in the decimal-string encoding accepted back by
    /// [`FieldSpec::parse_scalar`].
    pub fn format_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Mod(v) => v.to_string(),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { modulus } => write!(f, "F_{modulus}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v) => write!(f, "{v}"),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Scalar {
    /// The raw residue for modular scalars; panics on rationals.
    pub fn as_u64(&self) -> u64 {
        match self {
            Scalar::Mod(v) => *v,
            Scalar::Rat(_) => panic!("rational scalar has no residue"),
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Rat(r) => r,
            Scalar::Mod(_) => panic!("modular scalar is not a rational"),
        }
    }
}
