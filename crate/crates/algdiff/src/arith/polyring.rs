//! Dense univariate polynomials with coefficients in an arbitrary [`Ring`],
//! represented as bare `Vec<R::Elem>` (index = degree, trailing zeros
//! trimmed). Used for arithmetic in K(X)[Y] and K[[X]][Y], where a dedicated
//! struct per coefficient ring would be noise.

use crate::arith::ring::Ring;
use crate::error::{Error, Result};

pub fn trim<R: Ring>(ring: &R, v: &mut Vec<R::Elem>) {
    while v.last().map_or(false, |c| ring.is_zero(c)) {
        v.pop();
    }
}

pub fn is_zero<R: Ring>(ring: &R, a: &[R::Elem]) -> bool {
    a.iter().all(|c| ring.is_zero(c))
}

pub fn degree<R: Ring>(ring: &R, a: &[R::Elem]) -> Option<usize> {
    a.iter().rposition(|c| !ring.is_zero(c))
}

pub fn add<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let c = match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => ring.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(c);
    }
    trim(ring, &mut out);
    out
}

pub fn sub<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let nb: Vec<R::Elem> = b.iter().map(|c| ring.neg(c)).collect();
    add(ring, a, &nb)
}

pub fn scale<R: Ring>(ring: &R, a: &[R::Elem], s: &R::Elem) -> Vec<R::Elem> {
    let mut out: Vec<R::Elem> = a.iter().map(|c| ring.mul(c, s)).collect();
    trim(ring, &mut out);
    out
}

pub fn mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if is_zero(ring, a) || is_zero(ring, b) {
        return Vec::new();
    }
    let mut out = crate::arith::series::mul_slices(ring, a, b, usize::MAX);
    trim(ring, &mut out);
    out
}

/// d/dY.
pub fn derive<R: Ring>(ring: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    let mut out: Vec<R::Elem> = (1..a.len())
        .map(|k| ring.mul(&a[k], &ring.from_i64(k as i64)))
        .collect();
    trim(ring, &mut out);
    out
}

/// Euclidean division; the leading coefficient of `b` must be a unit.
pub fn divrem<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
) -> Result<(Vec<R::Elem>, Vec<R::Elem>)> {
    let db = degree(ring, b).ok_or(Error::DivisionByZero)?;
    let lc_inv = ring.inv(&b[db])?;
    let mut r: Vec<R::Elem> = a.to_vec();
    trim(ring, &mut r);
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![ring.zero(); r.len() - db];
    while let Some(dr) = degree(ring, &r) {
        if dr < db {
            break;
        }
        let c = ring.mul(&r[dr], &lc_inv);
        q[dr - db] = c.clone();
        for k in 0..=db {
            let t = ring.mul(&b[k], &c);
            r[dr - db + k] = ring.sub(&r[dr - db + k], &t);
        }
        trim(ring, &mut r);
    }
    trim(ring, &mut q);
    Ok((q, r))
}

pub fn rem<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Result<Vec<R::Elem>> {
    Ok(divrem(ring, a, b)?.1)
}

/// Inverse of `u` modulo `m` by the extended Euclidean algorithm. Requires
/// every nonzero element of `R` to be a unit (R a field), and gcd(u, m) = 1;
/// a nontrivial gcd is reported as `Error::DivisionByZero`.
pub fn invert_mod<R: Ring>(ring: &R, u: &[R::Elem], m: &[R::Elem]) -> Result<Vec<R::Elem>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(ring, u, m)?);
    let (mut s0, mut s1): (Vec<R::Elem>, Vec<R::Elem>) = (Vec::new(), vec![ring.one()]);
    while !is_zero(ring, &r1) {
        let (q, r2) = divrem(ring, &r0, &r1)?;
        let s2 = sub(ring, &s0, &mul(ring, &q, &s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    match degree(ring, &r0) {
        Some(0) => Ok(scale(ring, &s0, &ring.inv(&r0[0])?)),
        _ => Err(Error::DivisionByZero),
    }
}
