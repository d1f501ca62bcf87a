//! Truncated power series over a [`Ring`].
//!
//! A series stores exactly `precision` coefficients: the value is known
//! modulo X^precision and nothing more. Arithmetic never claims more
//! precision than the inputs warrant; `d/dX` lowers it by one.

use crate::arith::ring::Ring;
use crate::arith::{FieldSpec, Scalar, UniPoly};
use crate::error::{Error, Result};

const KARATSUBA_THRESHOLD: usize = 32;

/// Full product of two coefficient slices, truncated to `cap` coefficients.
pub fn mul_slices<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], cap: usize) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() || cap == 0 {
        return Vec::new();
    }
    let full = a.len() + b.len() - 1;
    let mut out = karatsuba(ring, a, b);
    debug_assert_eq!(out.len(), full);
    out.truncate(cap.min(full));
    out
}

fn naive_mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = ring.mul(x, y);
            out[i + j] = ring.add(&out[i + j], &t);
        }
    }
    out
}

fn karatsuba<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.len().min(b.len()) <= KARATSUBA_THRESHOLD {
        return naive_mul(ring, a, b);
    }
    let m = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(m.min(a.len()));
    let (b0, b1) = b.split_at(m.min(b.len()));
    let z0 = karatsuba(ring, a0, b0);
    let z2 = if a1.is_empty() || b1.is_empty() {
        Vec::new()
    } else {
        karatsuba(ring, a1, b1)
    };
    let asum = add_padded(ring, a0, a1);
    let bsum = add_padded(ring, b0, b1);
    let mut z1 = karatsuba(ring, &asum, &bsum);
    for (k, c) in z0.iter().enumerate() {
        z1[k] = ring.sub(&z1[k], c);
    }
    for (k, c) in z2.iter().enumerate() {
        z1[k] = ring.sub(&z1[k], c);
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (k, c) in z0.into_iter().enumerate() {
        out[k] = c;
    }
    for (k, c) in z1.into_iter().enumerate() {
        if k + m < out.len() {
            out[k + m] = ring.add(&out[k + m], &c);
        } else {
            debug_assert!(ring.is_zero(&c));
        }
    }
    for (k, c) in z2.into_iter().enumerate() {
        out[k + 2 * m] = ring.add(&out[k + 2 * m], &c);
    }
    out
}

fn add_padded<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => ring.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

/// Series over the base field, the common case.
pub type KSeries = TruncSeries<FieldSpec>;

/// Which derivation a series (or operator) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarForm {
    /// d/dX.
    Dx,
    /// The Euler operator theta = X·d/dX.
    Theta,
}

impl<R: Ring> TruncSeries<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        TruncSeries { ring, coeffs }
    }

    pub fn zero(ring: R, precision: usize) -> Self {
        let coeffs = vec![ring.zero(); precision];
        TruncSeries { ring, coeffs }
    }

    pub fn constant(ring: R, c: R::Elem, precision: usize) -> Self {
        assert!(precision >= 1, "a constant needs at least precision 1");
        let mut coeffs = vec![ring.zero(); precision];
        coeffs[0] = c;
        TruncSeries { ring, coeffs }
    }

    /// Embeds a base-field polynomial, truncated to `precision`.
    pub fn from_unipoly(ring: R, p: &UniPoly, precision: usize) -> Self {
        let mut coeffs: Vec<R::Elem> = p
            .coeffs()
            .iter()
            .take(precision)
            .map(|c| ring.from_scalar(c))
            .collect();
        coeffs.resize(precision, ring.zero());
        TruncSeries { ring, coeffs }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R::Elem {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Lowers the precision to `precision`.
    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision <= self.precision(), "cannot truncate upward");
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..precision].to_vec(),
        }
    }

    /// Internal helper for lifting loops that know the extra coefficients
    /// are about to be corrected; not a precision claim.
    pub(crate) fn pad(&self, precision: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(precision.max(coeffs.len()), self.ring.zero());
        TruncSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|k| self.ring.add(&self.coeffs[k], &other.coeffs[k]))
            .collect();
        TruncSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|k| self.ring.sub(&self.coeffs[k], &other.coeffs[k]))
            .collect();
        TruncSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let mut coeffs = mul_slices(&self.ring, &self.coeffs[..n], &other.coeffs[..n], n);
        coeffs.resize(n, self.ring.zero());
        TruncSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn scale_elem(&self, s: &R::Elem) -> Self {
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.mul(c, s)).collect(),
        }
    }

    /// Multiplies by a base-field polynomial without changing precision.
    pub fn mul_poly(&self, p: &UniPoly) -> Self {
        let n = self.precision();
        let embedded: Vec<R::Elem> = p
            .coeffs()
            .iter()
            .take(n)
            .map(|c| self.ring.from_scalar(c))
            .collect();
        let mut coeffs = mul_slices(&self.ring, &self.coeffs, &embedded, n);
        coeffs.resize(n, self.ring.zero());
        TruncSeries { ring: self.ring.clone(), coeffs }
    }

    /// Applies the chosen derivation once.
    pub fn derive(&self, var_form: VarForm) -> Result<Self> {
        match var_form {
            VarForm::Dx => {
                if self.precision() == 0 {
                    return Err(Error::ZeroPrecision);
                }
                let coeffs = (1..self.precision())
                    .map(|k| self.ring.mul(&self.coeffs[k], &self.ring.from_i64(k as i64)))
                    .collect();
                Ok(TruncSeries { ring: self.ring.clone(), coeffs })
            }
            VarForm::Theta => {
                if self.precision() == 0 {
                    return Err(Error::ZeroPrecision);
                }
                let coeffs = (0..self.precision())
                    .map(|k| self.ring.mul(&self.coeffs[k], &self.ring.from_i64(k as i64)))
                    .collect();
                Ok(TruncSeries { ring: self.ring.clone(), coeffs })
            }
        }
    }

    /// Multiplicative inverse by Newton iteration; the constant term must be
    /// a unit (over a quotient algebra a zero-divisor surfaces as
    /// `Error::ZeroDivisor`).
    pub fn invert(&self) -> Result<Self> {
        let n = self.precision();
        if n == 0 {
            return Err(Error::ZeroPrecision);
        }
        let mut inv = vec![self.ring.inv(&self.coeffs[0])?];
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            // inv <- inv·(2 - f·inv) mod X^prec
            let fi = mul_slices(&self.ring, &self.coeffs[..prec.min(n)], &inv, prec);
            let mut e = vec![self.ring.zero(); prec];
            for (k, c) in fi.into_iter().enumerate() {
                e[k] = self.ring.neg(&c);
            }
            e[0] = self.ring.add(&e[0], &self.ring.from_i64(2));
            let mut next = mul_slices(&self.ring, &inv, &e, prec);
            next.resize(prec, self.ring.zero());
            inv = next;
        }
        Ok(TruncSeries { ring: self.ring.clone(), coeffs: inv })
    }

    /// X^k · self (loses the top k coefficients to the truncation order).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.precision();
        let mut coeffs = vec![self.ring.zero(); n];
        for i in k..n {
            coeffs[i] = self.coeffs[i - k].clone();
        }
        TruncSeries { ring: self.ring.clone(), coeffs }
    }
}

/// K[[X]] mod X^precision as a [`Ring`], so the generic linear algebra can
/// run with series entries. A pivot is a unit iff its constant term is; all
/// elements fed in must share the ring's precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesRing {
    pub field: FieldSpec,
    pub precision: usize,
}

impl Ring for SeriesRing {
    type Elem = KSeries;

    fn zero(&self) -> KSeries {
        TruncSeries::zero(self.field, self.precision)
    }

    fn one(&self) -> KSeries {
        TruncSeries::constant(self.field, self.field.one(), self.precision)
    }

    fn is_zero(&self, a: &KSeries) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &KSeries, b: &KSeries) -> KSeries {
        a.add(b)
    }

    fn sub(&self, a: &KSeries, b: &KSeries) -> KSeries {
        a.sub(b)
    }

    fn mul(&self, a: &KSeries, b: &KSeries) -> KSeries {
        a.mul(b)
    }

    fn neg(&self, a: &KSeries) -> KSeries {
        a.neg()
    }

    fn inv(&self, a: &KSeries) -> Result<KSeries> {
        a.invert()
    }

    fn from_scalar(&self, s: &Scalar) -> KSeries {
        TruncSeries::constant(self.field, s.clone(), self.precision)
    }

    fn base_field(&self) -> FieldSpec {
        self.field
    }
}

impl KSeries {
    /// Series expansion of num/den to `precision`; den(0) must be nonzero.
    pub fn from_rational_function(
        field: FieldSpec,
        num: &UniPoly,
        den: &UniPoly,
        precision: usize,
    ) -> Result<Self> {
        let d = TruncSeries::from_unipoly(field, den, precision);
        let n = TruncSeries::from_unipoly(field, num, precision);
        Ok(n.mul(&d.invert()?))
    }

    pub fn scalar_coeffs(&self) -> &[Scalar] {
        self.coeffs()
    }
}
