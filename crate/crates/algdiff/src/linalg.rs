//! Dense Gaussian elimination used by every kernel/solve step in the crate.
//!
//! Two entry points: a generic one over any [`Ring`] whose pivot entries are
//! units (fields, the quotient algebra, power series with unit constant
//! term), and a flat `u64` kernel for prime fields that the big
//! Padé–Hermite systems run on.

use crate::arith::Ring;
use crate::error::Result;

/// One vector of the column kernel of `mat` (rows × cols), or `None` if the
/// kernel is trivial. When several free columns exist, one listed in
/// `preferred` is chosen first (the returned vector has a 1 there).
///
/// Over a quotient algebra a zero-divisor pivot surfaces as
/// `Error::ZeroDivisor`, carrying the factor for the caller to split on.
pub fn nullspace_vector<R: Ring>(
    ring: &R,
    mat: &mut [Vec<R::Elem>],
    preferred: &[usize],
) -> Result<Option<Vec<R::Elem>>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    if cols == 0 {
        return Ok(None);
    }
    // pivot_in_col[c] = row index holding the pivot of column c.
    let mut pivot_in_col: Vec<Option<usize>> = vec![None; cols];
    let mut next_row = 0;
    for col in 0..cols {
        if next_row >= rows {
            break;
        }
        let Some(pr) = (next_row..rows).find(|&r| !ring.is_zero(&mat[r][col])) else {
            continue;
        };
        mat.swap(next_row, pr);
        let pinv = ring.inv(&mat[next_row][col])?;
        for c in col..cols {
            mat[next_row][c] = ring.mul(&mat[next_row][c], &pinv);
        }
        for r in 0..rows {
            if r == next_row || ring.is_zero(&mat[r][col]) {
                continue;
            }
            let f = mat[r][col].clone();
            for c in col..cols {
                let t = ring.mul(&f, &mat[next_row][c]);
                mat[r][c] = ring.sub(&mat[r][c], &t);
            }
        }
        pivot_in_col[col] = Some(next_row);
        next_row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| pivot_in_col[c].is_none()).collect();
    if free.is_empty() {
        return Ok(None);
    }
    let chosen = *preferred
        .iter()
        .find(|c| free.contains(c))
        .unwrap_or(&free[0]);
    let mut v = vec![ring.zero(); cols];
    v[chosen] = ring.one();
    for (c, pr) in pivot_in_col.iter().enumerate() {
        if let Some(r) = pr {
            v[c] = ring.neg(&mat[*r][chosen]);
        }
    }
    Ok(Some(v))
}

/// Solves `mat · x = rhs` (rows ≥ cols) when elimination can run entirely on
/// unit pivots. Returns `Ok(None)` when no unit pivot is available for some
/// column or the tail rows end up inconsistent — for power-series systems
/// that is the "unlucky evaluation point" signal, not a bug.
pub fn solve_unit_pivot<R: Ring>(
    ring: &R,
    mat: &mut [Vec<R::Elem>],
    rhs: &mut [R::Elem],
) -> Result<Option<Vec<R::Elem>>> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivot_row_of = vec![0usize; cols];
    let mut next_row = 0;
    for col in 0..cols {
        let mut pivot = None;
        for r in next_row..rows {
            if ring.is_zero(&mat[r][col]) {
                continue;
            }
            if let Ok(pinv) = ring.inv(&mat[r][col]) {
                pivot = Some((r, pinv));
                break;
            }
        }
        let Some((pr, pinv)) = pivot else {
            return Ok(None);
        };
        mat.swap(next_row, pr);
        rhs.swap(next_row, pr);
        for c in col..cols {
            mat[next_row][c] = ring.mul(&mat[next_row][c], &pinv);
        }
        rhs[next_row] = ring.mul(&rhs[next_row], &pinv);
        for r in 0..rows {
            if r == next_row || ring.is_zero(&mat[r][col]) {
                continue;
            }
            let f = mat[r][col].clone();
            for c in col..cols {
                let t = ring.mul(&f, &mat[next_row][c]);
                mat[r][c] = ring.sub(&mat[r][c], &t);
            }
            let t = ring.mul(&f, &rhs[next_row]);
            rhs[r] = ring.sub(&rhs[r], &t);
        }
        pivot_row_of[col] = next_row;
        next_row += 1;
    }
    for r in rhs.iter().skip(next_row) {
        if !ring.is_zero(r) {
            return Ok(None);
        }
    }
    Ok(Some(
        (0..cols).map(|c| rhs[pivot_row_of[c]].clone()).collect(),
    ))
}

// ---------------------------------------------------------------------------
// Flat prime-field kernel

/// Barrett reducer for a modulus below 2^31; reduces any x below 2^62.
#[derive(Clone, Copy)]
struct Barrett {
    p: u64,
    m: u128, // floor(2^64 / p) + 1
}

impl Barrett {
    fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 31));
        Barrett { p, m: (1u128 << 64) / p as u128 + 1 }
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        // q is floor(x/p) or one above it, so x - q·p lands in (-p, p).
        let q = ((self.m * x as u128) >> 64) as u64;
        let r = x.wrapping_sub(q.wrapping_mul(self.p));
        if r >= self.p { r.wrapping_add(self.p) } else { r }
    }
}

/// Row-major dense matrix over F_p with the elimination loops kept on raw
/// `u64`. Entries must already be reduced mod p.
pub struct FpMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl FpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u64) {
        let idx = r * self.cols + c;
        self.data[idx] = (self.data[idx] + v % self.p) % self.p;
    }

    /// Same contract as [`nullspace_vector`], specialized to F_p. Forward
    /// elimination to echelon form only (rows below the pivot), then
    /// back-substitution for the one kernel vector — for the large
    /// telescoping systems the skipped upward sweep matters.
    pub fn nullspace_vector(&mut self, preferred: &[usize]) -> Option<Vec<u64>> {
        let (p, rows, cols) = (self.p, self.rows, self.cols);
        let red = Barrett::new(p);
        let mut pivot_in_col: Vec<Option<usize>> = vec![None; cols];
        let mut next_row = 0;
        for col in 0..cols {
            if next_row >= rows {
                break;
            }
            let Some(pr) = (next_row..rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if pr != next_row {
                for c in col..cols {
                    self.data.swap(pr * cols + c, next_row * cols + c);
                }
            }
            let pinv = mod_pow(self.data[next_row * cols + col], p - 2, p);
            {
                let row = &mut self.data[next_row * cols..(next_row + 1) * cols];
                for v in row[col..].iter_mut() {
                    *v = red.reduce(((*v as u128 * pinv as u128) % p as u128) as u64);
                }
            }
            let (_, rest) = self.data.split_at_mut(next_row * cols);
            let (prow, after) = rest.split_at_mut(cols);
            for row in after.chunks_exact_mut(cols) {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                for (v, w) in row[col..].iter_mut().zip(prow[col..].iter()) {
                    // *v - f*w mod p, with f·(p−w) < 2^62 so the sum fits u64.
                    *v = red.reduce(*v + f * (p - *w));
                }
            }
            pivot_in_col[col] = Some(next_row);
            next_row += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|&c| pivot_in_col[c].is_none()).collect();
        if free.is_empty() {
            return None;
        }
        let chosen = *preferred.iter().find(|c| free.contains(c)).unwrap_or(&free[0]);
        let mut v = vec![0u64; cols];
        v[chosen] = 1;
        // Pivot rows are unit upper triangular in the pivot columns, so the
        // kernel coordinates resolve in reverse pivot order.
        for c in (0..cols).rev() {
            let Some(r) = pivot_in_col[c] else { continue };
            let row = &self.data[r * cols..(r + 1) * cols];
            let mut acc = 0u64;
            for c2 in c + 1..cols {
                if v[c2] != 0 && row[c2] != 0 {
                    acc = red.reduce(acc + row[c2] * v[c2]);
                }
            }
            v[c] = if acc == 0 { 0 } else { p - acc };
        }
        Some(v)
    }
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        exp >>= 1;
    }
    acc
}
