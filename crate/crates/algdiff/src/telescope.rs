//! Creative telescoping for the rational integrand F = Y·P_Y/P.
//!
//! `find_lambda` finds Λ(X, ∂_X, ∂_Y) with Λ·F = 0 by a kernel computation
//! on the derivative table and strips it to the telescoped part
//! A(X, ∂_X); `find_theta_operator` finds the refined A(X, θ_X) with
//! A·F = ∂_Y(G/P^{d+2}). Both kinds of output are certified against P by
//! `verify_associated`, which makes this module the independent oracle for
//! the Padé–Hermite construction.

use crate::arith::{BiPoly, FieldSpec, Scalar, UniPoly, VarForm};
use crate::bounds::BoundSet;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::lift::{check_hb, newton_lift};
use crate::linalg::{nullspace_vector, FpMat};

/// Telescoped operator Λ = ∂_Y^k (A + ∂_Y·B): the ∂_Y-free part A and the
/// prefactor exponent. B itself is never materialized; only whether the
/// kernel vector carried one.
pub struct Telescoper {
    pub k: usize,
    pub a: DiffOp,
    pub b_present: bool,
}

/// The rational functions X^i ∂_X^j ∂_Y^k F (0 ≤ i ≤ n_x, j + k ≤ n_d)
/// expressed over the common denominator P^{n_d+1}. Numerators are stored
/// once per (j,k); the X^i factor is a row shift applied on read.
pub struct DerivativeTable {
    pub n_x: usize,
    pub n_d: usize,
    /// (i, j, k) per table row, in enumeration order.
    pub entries: Vec<(usize, usize, usize)>,
    base: Vec<BiPoly>,
    /// Columns of a coordinate row: monomials X^a Y^b, a < x_width,
    /// b < y_height, flattened as a·y_height + b.
    pub x_width: usize,
    pub y_height: usize,
}

impl DerivativeTable {
    fn jk_index(&self, j: usize, k: usize) -> usize {
        // k-major enumeration: all j for k=0, then k=1, …
        let n = self.n_d;
        (0..k).map(|t| n + 1 - t).sum::<usize>() + j
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.x_width * self.y_height
    }

    /// Flattened coordinates of one table row.
    pub fn coordinate_row(&self, idx: usize) -> Vec<Scalar> {
        let (i, j, k) = self.entries[idx];
        let b = &self.base[self.jk_index(j, k)];
        let field = b.field;
        let mut out = vec![field.zero(); self.cols()];
        for (a, row) in b.rows().iter().enumerate() {
            for (y, c) in row.iter().enumerate() {
                if !field.is_zero(c) {
                    out[(a + i) * self.y_height + y] = c.clone();
                }
            }
        }
        out
    }
}

/// Numerator of the derivative of G/P^m by the quotient rule, at level m+1.
/// `dp` is ∂P in the same variable as the requested derivative.
fn derive_numerator(g: &BiPoly, p: &BiPoly, dp: &BiPoly, in_y: bool, m: usize) -> BiPoly {
    let field = p.field;
    let dg = if in_y { g.derive_y() } else { g.derive_x() };
    dg.mul(p).sub(&g.mul(dp).scale(&field.from_i64(m as i64)))
}

pub fn derivative_table(p: &BiPoly, n_x: usize, n_d: usize) -> Result<DerivativeTable> {
    let dy = match p.deg_y() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::ConstantInY),
    };
    let dx = p.deg_x().unwrap_or(0);
    let field = p.field;
    let px = p.derive_x();
    let py = p.derive_y();

    let mut pw = Vec::with_capacity(n_d + 1);
    pw.push(BiPoly::constant(field, field.one()));
    for t in 1..=n_d {
        let next = pw[t - 1].mul(p);
        pw.push(next);
    }

    // g[(j,k)] = numerator of ∂_X^j ∂_Y^k F at level j+k+1, k-major.
    let mut base: Vec<BiPoly> = Vec::new();
    let mut entries = Vec::new();
    let mut prev_k_start = 0usize; // index of (j=0, k-1) in `base`
    for k in 0..=n_d {
        let k_start = base.len();
        for j in 0..=n_d - k {
            let g = if (j, k) == (0, 0) {
                py.mul(&BiPoly::monomial(field, field.one(), 0, 1))
            } else if j == 0 {
                derive_numerator(&base[prev_k_start], p, &py, true, k)
            } else {
                derive_numerator(&base[base.len() - 1], p, &px, false, j + k)
            };
            debug_assert!(g.deg_x().map_or(true, |d| d <= dx * (j + k + 1)));
            debug_assert!(g.deg_y().map_or(true, |d| d <= dy * (j + k + 1)));
            base.push(g);
            for i in 0..=n_x {
                entries.push((i, j, k));
            }
        }
        prev_k_start = k_start;
    }
    // Bring every numerator to the common level n_d + 1. The stored g at
    // (j,k) is only needed raw while deriving, so rescale afterwards.
    let mut idx = 0;
    for k in 0..=n_d {
        for j in 0..=n_d - k {
            base[idx] = base[idx].mul(&pw[n_d - j - k]);
            idx += 1;
        }
    }

    Ok(DerivativeTable {
        n_x,
        n_d,
        entries,
        base,
        x_width: n_x + dx * (n_d + 1) + 1,
        y_height: dy * (n_d + 1) + 1,
    })
}

/// Nonzero Λ with Λ·F = 0, from the kernel of the derivative table, split
/// as Λ = ∂_Y^{k₀}(A + ∂_Y·B) with A = Λ_{k₀} ≠ 0 canonicalized.
pub fn find_lambda(p: &BiPoly, n_x: usize, n_d: usize) -> Result<Telescoper> {
    let t = derivative_table(p, n_x, n_d)?;
    let field = p.field;
    let unknowns = t.rows();
    let equations = t.cols();

    let kern: Vec<Scalar> = if let Some(pm) = field.modulus() {
        let mut m = FpMat::zero(pm, equations, unknowns);
        for (u, &(i, j, k)) in t.entries.iter().enumerate() {
            let b = &t.base[t.jk_index(j, k)];
            for (a, row) in b.rows().iter().enumerate() {
                for (y, c) in row.iter().enumerate() {
                    if !field.is_zero(c) {
                        m.set((a + i) * t.y_height + y, u, c.as_u64());
                    }
                }
            }
        }
        m.nullspace_vector(&[])
            .ok_or(Error::EmptyKernel)?
            .into_iter()
            .map(Scalar::Mod)
            .collect()
    } else {
        let mut m: Vec<Vec<Scalar>> = vec![vec![field.zero(); unknowns]; equations];
        for u in 0..unknowns {
            for (eq, c) in t.coordinate_row(u).into_iter().enumerate() {
                if !field.is_zero(&c) {
                    m[eq][u] = c;
                }
            }
        }
        nullspace_vector(&field, &mut m, &[])?.ok_or(Error::EmptyKernel)?
    };

    let k0 = t
        .entries
        .iter()
        .zip(&kern)
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(&(_, _, k), _)| k)
        .min()
        .ok_or(Error::EmptyKernel)?;
    let mut coeffs = vec![UniPoly::zero(field); n_d + 1];
    let mut b_present = false;
    let mut by_j: Vec<Vec<Scalar>> = vec![vec![field.zero(); n_x + 1]; n_d + 1];
    for (&(i, j, k), c) in t.entries.iter().zip(&kern) {
        if field.is_zero(c) {
            continue;
        }
        if k == k0 {
            by_j[j][i] = c.clone();
        } else {
            b_present = true;
        }
    }
    for (j, v) in by_j.into_iter().enumerate() {
        coeffs[j] = UniPoly::new(field, v);
    }
    let a = DiffOp::new(VarForm::Dx, coeffs, field)?;
    Ok(Telescoper { k: k0, a, b_present })
}

// ---------------------------------------------------------------------------
// Refined θ_X operator

/// Dense coefficient grid indexed (X-degree, Y-degree); the reduction
/// workspace for `find_theta_operator`.
struct Grid {
    w: usize,
    h: usize,
    field: FieldSpec,
    c: Vec<Scalar>,
}

impl Grid {
    fn zero(field: FieldSpec, w: usize, h: usize) -> Self {
        Grid { w, h, field, c: vec![field.zero(); w * h] }
    }

    fn get(&self, a: usize, b: usize) -> &Scalar {
        &self.c[a * self.h + b]
    }

    fn add_at(&mut self, a: usize, b: usize, v: &Scalar) {
        let idx = a * self.h + b;
        self.c[idx] = self.field.add(&self.c[idx], v);
    }

    /// self += s · X^shift · bp
    fn add_scaled(&mut self, bp: &BiPoly, shift: usize, s: &Scalar) {
        for (a, row) in bp.rows().iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if !self.field.is_zero(v) {
                    self.add_at(a + shift, b, &self.field.mul(v, s));
                }
            }
        }
    }

    fn nonzero_cells(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for a in 0..self.w {
            for b in 0..self.h {
                let v = self.get(a, b);
                if !self.field.is_zero(v) {
                    out.push((a, b, v.clone()));
                }
            }
        }
        out
    }

    fn to_bipoly(&self) -> BiPoly {
        let rows: Vec<Vec<Scalar>> = (0..self.w)
            .map(|a| (0..self.h).map(|b| self.get(a, b).clone()).collect())
            .collect();
        BiPoly::new(self.field, rows)
    }
}

/// Shared data of one `find_theta_operator` run.
struct ThetaCtx {
    field: FieldSpec,
    dy: usize,
    dxt: usize, // deg of the leading Y-coefficient of P
    gx: usize,
    gy: usize,
    gt: usize,
    /// φ(Y^β) = β·Y^{β-1}·P − (d+2)·Y^β·∂_Y P, for β = 0..=gy.
    red: Vec<BiPoly>,
    /// Inverse of the leading scalar of φ(Y^β), None when it vanishes
    /// (β = gy, or the characteristic divides β − gy).
    lead_inv: Vec<Option<Scalar>>,
}

impl ThetaCtx {
    fn new(p: &BiPoly, d: usize) -> Result<Self> {
        let field = p.field;
        let dy = p.deg_y().ok_or(Error::ConstantInY)?;
        if dy == 0 {
            return Err(Error::ConstantInY);
        }
        let dx = p.deg_x().unwrap_or(0);
        let dd = p.total_degree().unwrap();
        let lc = p.leading_coeff_y();
        let dxt = lc.degree().unwrap();
        let gx = (d + 2) * dx + d + 1;
        let gy = (d + 2) * dy;
        let gt = (d + 2) * dd + d + 1;
        let y = BiPoly::monomial(field, field.one(), 0, 1);
        let pyd = p.derive_y();
        let mut red = Vec::with_capacity(gy + 1);
        let mut lead_inv = Vec::with_capacity(gy + 1);
        for beta in 0..=gy {
            // β·Y^{β-1}·P − (d+2)·Y^β·∂_Y P
            let t2 = pow_y(&y, beta).mul(&pyd).scale(&field.from_i64((d + 2) as i64));
            let r = if beta == 0 {
                t2.neg()
            } else {
                let t1 = pow_y(&y, beta - 1).mul(p).scale(&field.from_i64(beta as i64));
                t1.sub(&t2)
            };
            // Leading scalar: coefficient of X^dxt·Y^{β+dy-1}, equal to
            // (β − (d+2)dy)·lc(p_{D_Y}).
            let s = r.coeff(dxt, beta + dy - 1);
            lead_inv.push(if field.is_zero(&s) { None } else { Some(field.inv(&s)?) });
            red.push(r);
        }
        Ok(ThetaCtx { field, dy, dxt, gx, gy, gt, red, lead_inv })
    }

    /// G-monomial X^α Y^β admissible as support of G.
    fn in_g_support(&self, alpha: usize, beta: usize) -> bool {
        alpha <= self.gx && beta <= self.gy && alpha + beta <= self.gt
    }

    /// Triangular sweep: every reducible cell is eliminated against
    /// φ(X^α Y^β), whose other monomials are strictly smaller in the
    /// (Y-degree, X-degree) order; what remains is the residual modulo the
    /// reducible part of the image of G ↦ P∂_YG − (d+2)G∂_YP. When `g` is
    /// given it accumulates the preimage used.
    fn reduce(&self, w: &mut Grid, mut g: Option<&mut Grid>) {
        for b in (self.dy - 1..w.h).rev() {
            let beta = b + 1 - self.dy;
            if beta > self.gy {
                continue;
            }
            let Some(ref inv) = self.lead_inv[beta] else { continue };
            for a in (self.dxt..w.w).rev() {
                let alpha = a - self.dxt;
                if !self.in_g_support(alpha, beta) {
                    continue;
                }
                let c = w.get(a, b).clone();
                if self.field.is_zero(&c) {
                    continue;
                }
                let f = self.field.mul(&c, inv);
                w.add_scaled(&self.red[beta], alpha, &self.field.neg(&f));
                debug_assert!(self.field.is_zero(w.get(a, b)));
                if let Some(grid) = g.as_deref_mut() {
                    grid.add_at(alpha, beta, &f);
                }
            }
        }
    }
}

fn pow_y(y: &BiPoly, k: usize) -> BiPoly {
    let mut acc = BiPoly::constant(y.field, y.field.one());
    for _ in 0..k {
        acc = acc.mul(y);
    }
    acc
}

/// Numerators H_j of θ^j F at level j+1: H_0 = Y·P_Y and
/// H_{j+1} = X·(∂_X H_j·P − (j+1)·H_j·∂_X P).
fn theta_numerators(p: &BiPoly, d: usize) -> Vec<BiPoly> {
    let field = p.field;
    let x = BiPoly::monomial(field, field.one(), 1, 0);
    let px = p.derive_x();
    let mut out = Vec::with_capacity(d + 1);
    out.push(p.derive_y().mul(&BiPoly::monomial(field, field.one(), 0, 1)));
    for j in 0..d {
        let h = &out[j];
        let next = h
            .derive_x()
            .mul(p)
            .sub(&h.mul(&px).scale(&field.from_i64((j + 1) as i64)))
            .mul(&x);
        out.push(next);
    }
    out
}

/// Refined telescoping: a nonzero A = Σ a_{ij} X^i θ^j (i, j ≤ d) with
/// A·F = ∂_Y(G/P^{d+2}) for some G supported on 𝒱_{d+1}, or `None` when no
/// such A exists at this d. The G-unknowns are eliminated structurally (one
/// reducer per leading monomial), leaving a small dense kernel problem in
/// the a_{ij} and the handful of non-reducer G-columns.
pub fn find_theta_operator(p: &BiPoly, d: usize) -> Result<Option<DiffOp>> {
    let field = p.field;
    let ctx = ThetaCtx::new(p, d)?;
    let h = theta_numerators(p, d);
    let mut pw = vec![BiPoly::constant(field, field.one())];
    for t in 1..=d + 2 {
        let next = pw[t - 1].mul(p);
        pw.push(next);
    }
    let t_polys: Vec<BiPoly> = h
        .iter()
        .enumerate()
        .map(|(j, hj)| hj.mul(&pw[d + 2 - j]))
        .collect();

    // Non-reducer G-columns: their φ-image has no usable leading monomial,
    // so they stay as explicit unknowns alongside the a_{ij}.
    let mut g_cols: Vec<(usize, usize)> = Vec::new();
    for beta in 0..=ctx.gy {
        if ctx.lead_inv[beta].is_some() {
            continue;
        }
        for alpha in 0..=ctx.gx {
            if ctx.in_g_support(alpha, beta) {
                g_cols.push((alpha, beta));
            }
        }
    }
    let a_cols: Vec<(usize, usize)> = (0..=d)
        .flat_map(|i| (0..=d).map(move |j| (i, j)))
        .collect();

    let grid_w = 1 + std::cmp::max(
        d + t_polys.iter().filter_map(|t| t.deg_x()).max().unwrap_or(0),
        ctx.gx + ctx.red.iter().filter_map(|r| r.deg_x()).max().unwrap_or(0),
    );
    let grid_h = 1 + std::cmp::max(
        t_polys.iter().filter_map(|t| t.deg_y()).max().unwrap_or(0),
        ctx.gy + ctx.dy,
    );

    let fill = |which: usize| -> Grid {
        // Columns enumerate g_cols first, then a_cols.
        let mut w = Grid::zero(field, grid_w, grid_h);
        if which < g_cols.len() {
            let (alpha, beta) = g_cols[which];
            w.add_scaled(&ctx.red[beta], alpha, &field.one());
        } else {
            let (i, j) = a_cols[which - g_cols.len()];
            w.add_scaled(&t_polys[j], i, &field.one());
        }
        w
    };

    let n_cols = g_cols.len() + a_cols.len();
    let mut residuals: Vec<Vec<(usize, usize, Scalar)>> = Vec::with_capacity(n_cols);
    let mut support: std::collections::BTreeMap<(usize, usize), usize> =
        std::collections::BTreeMap::new();
    for c in 0..n_cols {
        let mut w = fill(c);
        ctx.reduce(&mut w, None);
        let cells = w.nonzero_cells();
        for &(a, b, _) in &cells {
            let next = support.len();
            support.entry((a, b)).or_insert(next);
        }
        residuals.push(cells);
    }

    let preferred: Vec<usize> = (g_cols.len()..n_cols).collect();
    let kern: Option<Vec<Scalar>> = if let Some(pm) = field.modulus() {
        let mut m = FpMat::zero(pm, support.len(), n_cols);
        for (c, cells) in residuals.iter().enumerate() {
            for (a, b, v) in cells {
                m.set(support[&(*a, *b)], c, v.as_u64());
            }
        }
        m.nullspace_vector(&preferred)
            .map(|v| v.into_iter().map(Scalar::Mod).collect())
    } else {
        let mut m = vec![vec![field.zero(); n_cols]; support.len()];
        for (c, cells) in residuals.iter().enumerate() {
            for (a, b, v) in cells {
                m[support[&(*a, *b)]][c] = v.clone();
            }
        }
        nullspace_vector(&field, &mut m, &preferred)?
    };
    let Some(kern) = kern else { return Ok(None) };
    let a_part = &kern[g_cols.len()..];
    if a_part.iter().all(|c| field.is_zero(c)) {
        // Kernel exists but only inside the image of ∂_Y: no operator here.
        return Ok(None);
    }

    // Reassemble the certified identity A·F·P^{d+3} = P∂_YG − (d+2)G∂_YP.
    let mut comb = Grid::zero(field, grid_w, grid_h);
    for (c, v) in kern.iter().enumerate() {
        if field.is_zero(v) {
            continue;
        }
        if c < g_cols.len() {
            let (alpha, beta) = g_cols[c];
            comb.add_scaled(&ctx.red[beta], alpha, v);
        } else {
            let (i, j) = a_cols[c - g_cols.len()];
            comb.add_scaled(&t_polys[j], i, v);
        }
    }
    let mut g_grid = Grid::zero(field, ctx.gx + 1, ctx.gy + 1);
    ctx.reduce(&mut comb, Some(&mut g_grid));
    if !comb.nonzero_cells().is_empty() {
        return Err(Error::Internal("nonzero residual after kernel solve".into()));
    }
    for (c, v) in kern.iter().enumerate().take(g_cols.len()) {
        let (alpha, beta) = g_cols[c];
        g_grid.add_at(alpha, beta, &field.neg(v));
    }
    let g = g_grid.to_bipoly();
    let mut lhs = BiPoly::zero(field);
    for ((i, j), v) in a_cols.iter().zip(a_part) {
        if !field.is_zero(v) {
            lhs = lhs.add(&t_polys[*j].mul(&BiPoly::monomial(field, v.clone(), *i, 0)));
        }
    }
    let rhs = p
        .mul(&g.derive_y())
        .sub(&g.mul(&p.derive_y()).scale(&field.from_i64((d + 2) as i64)));
    if lhs != rhs {
        return Err(Error::Internal("telescoping identity check failed".into()));
    }

    let mut coeffs = vec![UniPoly::zero(field); d + 1];
    let mut by_j = vec![vec![field.zero(); d + 1]; d + 1];
    for ((i, j), v) in a_cols.iter().zip(a_part) {
        by_j[*j][*i] = v.clone();
    }
    for (j, v) in by_j.into_iter().enumerate() {
        coeffs[j] = UniPoly::new(field, v);
    }
    Ok(Some(DiffOp::new(VarForm::Theta, coeffs, field)?))
}

/// Certifies that A annihilates every root of P: applies A to a Newton
/// lift of all roots at once (over K[Y]/(P(a,Y))) to precision σ derived
/// from A's own degree and order. H_b is arranged by shifting X when the
/// origin is degenerate; the operator is shifted along.
pub fn verify_associated(a: &DiffOp, p: &BiPoly) -> Result<bool> {
    let field = p.field;
    let op = a.to_dx_form()?;
    let dy = p.deg_y().ok_or(Error::ConstantInY)?;
    let dx = p.deg_x().unwrap_or(0);
    let (pp, shift) = match check_hb(p) {
        Ok(()) => (p.clone(), field.zero()),
        Err(Error::HypothesisHb { suggested_shift, .. }) => {
            (p.shift_x(&suggested_shift), suggested_shift)
        }
        Err(e) => return Err(e),
    };
    let op = if field.is_zero(&shift) {
        op
    } else {
        let coeffs = op.coeffs().iter().map(|c| c.compose_shift(&shift)).collect();
        DiffOp::new(VarForm::Dx, coeffs, field)?
    };
    let bounds = BoundSet::new(dx, dy, op.deg_x(), op.order());
    let sigma = bounds.small_sigma.max(1);
    let root = newton_lift(&pp, sigma + op.order())?;
    let out = op.apply(&root.series)?;
    Ok(out.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{thm2_bounds, thm3_bound, DegreeProfile};
    use crate::lift::lift_scalar_root;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn fp() -> FieldSpec {
        FieldSpec::prime(9973).unwrap()
    }

    #[test]
    fn table_definition_rows() {
        let f = q();
        // P = Y - X, n_d = 4.
        let p = BiPoly::from_i64_rows(f, &[&[0, 1], &[-1, 0]]);
        let t = derivative_table(&p, 2, 4).unwrap();
        // ∂⁰ row is Y·P_Y·P^{n_d} = Y(Y-X)^4.
        let expect = {
            let y = BiPoly::monomial(f, f.one(), 0, 1);
            let mut acc = y.clone();
            for _ in 0..4 {
                acc = acc.mul(&p);
            }
            acc
        };
        assert_eq!(t.entries[0], (0, 0, 0));
        let row = t.coordinate_row(0);
        for (a, brow) in expect.rows().iter().enumerate() {
            for (b, c) in brow.iter().enumerate() {
                assert_eq!(&row[a * t.y_height + b], c);
            }
        }
        // ∂_Y F numerator: -X·(Y-X)^{n_d-1} at level n_d+1.
        let idx = t.entries.iter().position(|&e| e == (0, 0, 1)).unwrap();
        let mut expect = BiPoly::monomial(f, f.from_i64(-1), 1, 0);
        for _ in 0..3 {
            expect = expect.mul(&p);
        }
        let row = t.coordinate_row(idx);
        for (a, brow) in expect.rows().iter().enumerate() {
            for (b, c) in brow.iter().enumerate() {
                assert_eq!(&row[a * t.y_height + b], c);
            }
        }
    }

    #[test]
    fn table_dimension_count() {
        let f = fp();
        let mut rng = crate::test_rng(61);
        let p = BiPoly::random_separable(f, 1, 2, &mut rng);
        let t = derivative_table(&p, 6, 12).unwrap();
        assert_eq!(t.rows(), 637);
        assert_eq!(t.cols(), 540);
        assert!(t.rows() > t.cols(), "kernel must be guaranteed");
    }

    #[test]
    fn lambda_annihilates_roots_small() {
        let f = q();
        // P = Y - X at thm2 bounds (1,1): A certified against P.
        let p = BiPoly::from_i64_rows(f, &[&[0, 1], &[-1, 0]]);
        let (n_x, n_d, _, _) = thm2_bounds(1, 1);
        let t = find_lambda(&p, n_x, n_d).unwrap();
        assert!(t.a.order() <= 6);
        assert!(t.a.deg_x() <= 3);
        assert!(verify_associated(&t.a, &p).unwrap());
        let root = lift_scalar_root(&p, &f.zero(), 40).unwrap();
        assert!(t.a.apply(&root.series).unwrap().is_zero());
    }

    #[test]
    fn lambda_on_square_root() {
        let f = fp();
        let p = BiPoly::from_i64_rows(f, &[&[-1, 0, 1], &[-1, 0, 0]]);
        let (n_x, n_d, _, _) = thm2_bounds(1, 2);
        let t = find_lambda(&p, n_x, n_d).unwrap();
        assert!(verify_associated(&t.a, &p).unwrap());
        // Both lifted roots are annihilated at high precision.
        for y0 in [1i64, -1] {
            let root = lift_scalar_root(&p, &f.from_i64(y0), 80).unwrap();
            assert!(t.a.apply(&root.series).unwrap().is_zero());
        }
    }

    #[test]
    fn lambda_random_prime_field() {
        let f = fp();
        let mut rng = crate::test_rng(67);
        for (dx, dy) in [(1, 1), (2, 1), (1, 2)] {
            let p = BiPoly::random_separable(f, dx, dy, &mut rng);
            let (n_x, n_d, _, _) = thm2_bounds(dx, dy);
            let t = find_lambda(&p, n_x, n_d).unwrap();
            assert!(
                verify_associated(&t.a, &p).unwrap(),
                "uncertified telescoper for {p}"
            );
        }
    }

    #[test]
    fn theta_operator_on_monomial_square() {
        let f = q();
        // P = Y - X²: some multiple of θ-2 shows up at d = 2.
        let p = BiPoly::from_i64_rows(f, &[&[0, 1], &[0, 0], &[-1, 0]]);
        let op = find_theta_operator(&p, 2).unwrap().expect("solvable at d = 2");
        assert!(verify_associated(&op, &p).unwrap());
        let root = lift_scalar_root(&p, &f.zero(), 30).unwrap();
        assert!(op.apply(&root.series).unwrap().is_zero());
    }

    #[test]
    fn theta_not_found_is_distinguishable() {
        let f = q();
        // d = 0 asks for a_00·F to be a ∂_Y-derivative: impossible for Y-X².
        let p = BiPoly::from_i64_rows(f, &[&[0, 1], &[0, 0], &[-1, 0]]);
        assert!(find_theta_operator(&p, 0).unwrap().is_none());
    }

    #[test]
    fn theta_at_thm3_bound_random() {
        let f = fp();
        let mut rng = crate::test_rng(71);
        for (dx, dy) in [(1, 1), (2, 1), (1, 2)] {
            let p = BiPoly::random_separable(f, dx, dy, &mut rng);
            let d = thm3_bound(&DegreeProfile::of(&p).unwrap());
            let op = find_theta_operator(&p, d)
                .unwrap()
                .unwrap_or_else(|| panic!("thm3 bound must succeed for {p}"));
            assert!(op.order() <= d && op.deg_x() <= d);
            assert!(verify_associated(&op, &p).unwrap(), "uncertified for {p}");
        }
    }

    #[test]
    fn verify_rejects_wrong_operator() {
        let f = q();
        let p = BiPoly::from_i64_rows(f, &[&[0, 1], &[0, 0], &[-1, 0]]);
        // θ-3 annihilates X³, not X².
        let bad = DiffOp::new(
            VarForm::Theta,
            vec![UniPoly::from_i64_coeffs(f, &[-3]), UniPoly::one(f)],
            f,
        )
        .unwrap();
        assert!(!verify_associated(&bad, &p).unwrap());
        let good = DiffOp::new(
            VarForm::Theta,
            vec![UniPoly::from_i64_coeffs(f, &[-2]), UniPoly::one(f)],
            f,
        )
        .unwrap();
        assert!(verify_associated(&good, &p).unwrap());
        // Left-multiplying by X preserves the solution space (and the
        // canonical form strips the factor right back out).
        let padded = DiffOp::new(
            VarForm::Theta,
            good.coeffs().iter().map(|c| c.shift_up(1)).collect(),
            f,
        )
        .unwrap();
        assert!(verify_associated(&padded, &p).unwrap());
    }

    #[test]
    fn verify_arranges_hb_by_shifting() {
        let f = q();
        // Y² - X: disc vanishes at 0, forcing a shift before lifting.
        let p = BiPoly::from_i64_rows(f, &[&[0, 0, 1], &[-1, 0, 0]]);
        let (res, _) = crate::resolvent::cockle_fraction(&p).unwrap();
        assert!(verify_associated(&res, &p).unwrap());
    }

    #[test]
    fn lambda_certificate_vs_resolvent() {
        // The telescoped A and the resolvent annihilate the same roots.
        let f = fp();
        let mut rng = crate::test_rng(73);
        let p = BiPoly::random_separable(f, 1, 2, &mut rng);
        let (n_x, n_d, _, _) = thm2_bounds(1, 2);
        let t = find_lambda(&p, n_x, n_d).unwrap();
        assert!(verify_associated(&t.a, &p).unwrap());
        let (res, _) = crate::resolvent::cockle_fraction(&p).unwrap();
        assert!(verify_associated(&res, &p).unwrap());
    }
}
