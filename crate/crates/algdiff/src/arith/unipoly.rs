//! Dense univariate polynomials over an exact field.
//!
//! Coefficients are stored in ascending degree order; the vector is empty
//! for the zero polynomial and otherwise ends with a nonzero coefficient.
//! The same type serves polynomials in `X` (operator coefficients,
//! resultants, recurrence coefficients in `n`) and in `Y` (quotient-algebra
//! representatives).

use crate::arith::field::{FieldSpec, Scalar};
use crate::arith::ring::Ring;
use crate::error::{Error, Result};
use num::{BigInt, BigRational, Integer, One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
    pub field: FieldSpec,
}

impl UniPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map_or(false, |c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs, field }
    }

    pub fn zero(field: FieldSpec) -> Self {
        UniPoly { coeffs: Vec::new(), field }
    }

    pub fn one(field: FieldSpec) -> Self {
        UniPoly { coeffs: vec![field.one()], field }
    }

    pub fn constant(field: FieldSpec, c: Scalar) -> Self {
        Self::new(field, vec![c])
    }

    pub fn from_i64_coeffs(field: FieldSpec, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The monomial c·x^k.
    pub fn monomial(field: FieldSpec, c: Scalar, k: usize) -> Self {
        if field.is_zero(&c) {
            return Self::zero(field);
        }
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs, field }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Canonical degree; `None` is the zero polynomial's -infinity sentinel.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(f.add(&self.coeff(k), &other.coeff(k)));
        }
        Self::new(f, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(f.sub(&self.coeff(k), &other.coeff(k)));
        }
        Self::new(f, out)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
            field: f,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let out = crate::arith::series::mul_slices(&f, &self.coeffs, &other.coeffs, usize::MAX);
        Self::new(f, out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let f = self.field;
        if f.is_zero(s) {
            return Self::zero(f);
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| f.mul(c, s)).collect(),
            field: f,
        }
    }

    /// Multiplication by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs, field: self.field }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let out: Vec<Scalar> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| f.mul(c, &f.from_i64(k as i64)))
            .collect();
        Self::new(f, out)
    }

    /// Taylor shift: p(x + a).
    pub fn compose_shift(&self, a: &Scalar) -> Self {
        let f = self.field;
        if f.is_zero(a) || self.is_zero() {
            return self.clone();
        }
        // Horner on p(x) with x := (x + a).
        let mut acc = Self::zero(f);
        let xa = Self::new(f, vec![a.clone(), f.one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&xa).add(&Self::constant(f, c.clone()));
        }
        acc
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        assert_eq!(self.field, d.field, "field mismatch");
        let f = self.field;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.degree().unwrap();
        if self.degree().map_or(true, |n| n < dd) {
            return Ok((Self::zero(f), self.clone()));
        }
        let lc_inv = f.inv(d.leading_coeff().unwrap())?;
        let mut rem = self.coeffs.clone();
        let nq = rem.len() - dd;
        let mut quot = vec![f.zero(); nq];
        for k in (0..nq).rev() {
            let q = f.mul(&rem[k + dd], &lc_inv);
            if f.is_zero(&q) {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = f.mul(&q, dc);
                rem[k + i] = f.sub(&rem[k + i], &t);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal("exact division left a remainder".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd. Over the rationals the primitive Euclidean scheme on
    /// integer polynomials keeps intermediate coefficients small.
    pub fn gcd(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        match self.field {
            FieldSpec::Rational => self.gcd_rational(other),
            FieldSpec::Prime { .. } => {
                let mut a = self.clone();
                let mut b = other.clone();
                while !b.is_zero() {
                    let r = a.rem(&b).unwrap();
                    a = b;
                    b = r;
                }
                a.monic()
            }
        }
    }

    fn gcd_rational(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = int_primitive(self);
        let mut b = int_primitive(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_pseudo_rem(&a, &b);
            a = b;
            b = int_primitive_part(r);
        }
        let f = self.field;
        let coeffs = a
            .into_iter()
            .map(|n| Scalar::Rat(Box::new(BigRational::from_integer(n))))
            .collect();
        Self::new(f, coeffs).monic()
    }

    /// Extended gcd: returns (g, s, t) with g = s·self + t·other, g monic.
    pub fn extended_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        let f = self.field;
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Self::one(f);
        let mut s1 = Self::zero(f);
        let mut t0 = Self::zero(f);
        let mut t1 = Self::one(f);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lc) = r0.leading_coeff() {
            let inv = f.inv(lc)?;
            r0 = r0.scale(&inv);
            s0 = s0.scale(&inv);
            t0 = t0.scale(&inv);
        }
        Ok((r0, s0, t0))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let g = self.gcd(other);
        self.mul(other).exact_div(&g).unwrap().monic()
    }

    pub fn random<R: rand::Rng>(field: FieldSpec, degree: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<Scalar> = (0..=degree).map(|_| field.random(rng)).collect();
        let last = coeffs.last_mut().unwrap();
        *last = field.random_nonzero(rng);
        UniPoly { coeffs, field }
    }

    /// Lowest exponent with nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.field.is_zero(c))
    }

    pub fn format_with_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = self.field;
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.format_scalar(c);
            let term = match k {
                0 => cs,
                _ => {
                    let pow = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    if f.is_one(c) {
                        pow
                    } else if cs == "-1" {
                        format!("-{pow}")
                    } else {
                        format!("{cs}*{pow}")
                    }
                }
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format_with_var("X"))
    }
}

/// Clears denominators and divides by the integer content; returns ascending
/// integer coefficients (empty for zero).
fn int_primitive(p: &UniPoly) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = den.lcm(c.as_rational().denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational();
            r.numer() * (&den / r.denom())
        })
        .collect();
    int_primitive_part(ints)
}

fn int_primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = content.gcd(c);
    }
    if !content.is_one() {
        for c in &mut v {
            *c = &*c / &content;
        }
    }
    v
}

/// Pseudo-remainder of integer polynomials, `lc(b)^(da-db+1)·a mod b`.
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > db {
        if r.last().unwrap().is_zero() {
            r.pop();
            continue;
        }
        let top = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = &*c * &lc;
        }
        for i in 0..=db {
            let t = &top * &b[i];
            r[shift + i] = &r[shift + i] - t;
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        if r.len() <= db {
            break;
        }
    }
    r
}

impl Ring for FieldSpec {
    type Elem = Scalar;

    fn zero(&self) -> Scalar {
        FieldSpec::zero(self)
    }
    fn one(&self) -> Scalar {
        FieldSpec::one(self)
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        FieldSpec::is_zero(self, a)
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        FieldSpec::add(self, a, b)
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        FieldSpec::sub(self, a, b)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        FieldSpec::mul(self, a, b)
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        FieldSpec::neg(self, a)
    }
    fn inv(&self, a: &Scalar) -> Result<Scalar> {
        FieldSpec::inv(self, a)
    }
    fn from_scalar(&self, s: &Scalar) -> Scalar {
        s.clone()
    }
    fn base_field(&self) -> FieldSpec {
        *self
    }
}
