//! Cockle's algorithm for the minimal differential resolvent of an
//! algebraic function.
//!
//! Two backends compute the same canonical operator: `cockle_fraction` does
//! exact linear algebra over K(X) and serves as the small-instance oracle;
//! `cockle_series` runs the V_k recurrence over truncated power series at a
//! lucky point and reconstructs the coefficients by Padé approximation,
//! which is the fast path.

use crate::arith::{
    discriminant_y, polyring, BiPoly, KSeries, RatField, RatFunc, Ring, Scalar,
    SeriesRing, TruncSeries, UniPoly, VarForm,
};
use crate::bounds;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::linalg::{nullspace_vector, solve_unit_pivot};
use rand::RngExt;
use rand::SeedableRng;

/// How `find_lucky_point` searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LuckyMode {
    /// Sample a few candidates and keep the maximal observed rank.
    Probabilistic,
    /// Scan past the exclusion-degree bound; the result is certified.
    Deterministic,
}

/// Intermediate data of a `cockle_series` run, kept for diagnostics. The
/// relation V_r = A_{r-1}V_{r-1} + … + A_0V_0 holds at the full working
/// precision, in coordinates shifted so the lucky point sits at the origin.
pub struct CockleTrace {
    pub r: usize,
    pub lucky_a: Scalar,
    pub v_polys: Vec<Vec<KSeries>>,
    /// A_k as (numerator, denominator) pairs.
    pub relation: Vec<(UniPoly, UniPoly)>,
}

fn hypothesis_h(p: &BiPoly) -> Result<()> {
    if p.deg_y().is_none() || p.deg_y() == Some(0) {
        return Err(Error::ConstantInY);
    }
    if discriminant_y(p)?.is_zero() {
        return Err(Error::NotSeparable);
    }
    Ok(())
}

/// W_1 = -P_X and
/// W_{k+1} = (P_Y ∂_X W_k - P_X ∂_Y W_k)·P_Y - (2k-1)(P_Y ∂_X P_Y - P_X ∂_Y P_Y)·W_k,
/// so that the k-th derivative of any root α is W_k(X,α)/P_Y(X,α)^{2k-1}.
pub fn wk_sequence(p: &BiPoly, k_max: usize) -> Vec<BiPoly> {
    assert!(k_max >= 1);
    let field = p.field;
    let px = p.derive_x();
    let py = p.derive_y();
    // The bracket (P_Y ∂_X P_Y - P_X ∂_Y P_Y) is shared by every step.
    let bracket = py.mul(&py.derive_x()).sub(&px.mul(&py.derive_y()));
    let dx = p.deg_x().unwrap_or(0) as i64;
    let dy = p.deg_y().unwrap_or(0) as i64;
    let mut out = Vec::with_capacity(k_max);
    let mut w = px.neg();
    for k in 1..=k_max {
        if !w.is_zero() {
            let k = k as i64;
            debug_assert!(w.deg_x().unwrap_or(0) as i64 <= (2 * dx - 1) * k - dx);
            debug_assert!(w.deg_y().unwrap_or(0) as i64 <= 2 * (dy - 1) * k - dy + 2);
        }
        out.push(w.clone());
        if out.len() == k_max {
            break;
        }
        let lead = py.mul(&w.derive_x()).sub(&px.mul(&w.derive_y())).mul(&py);
        let corr = bracket.mul(&w).scale(&field.from_i64(2 * k as i64 - 1));
        w = lead.sub(&corr);
    }
    out
}

/// Coordinate matrix whose columns are the elements of `vecs`, padded to
/// `rows` coefficients.
fn column_matrix<R: Ring>(ring: &R, vecs: &[Vec<R::Elem>], rows: usize) -> Vec<Vec<R::Elem>> {
    (0..rows)
        .map(|row| {
            vecs.iter()
                .map(|v| v.get(row).cloned().unwrap_or_else(|| ring.zero()))
                .collect()
        })
        .collect()
}

/// Minimal-order resolvent by exact arithmetic in K(X)[Y]/(P).
///
/// V_0 is the class of Y, V_1 = -P_X/P_Y mod P, and
/// V_{k+1} = ∂_X V_k + V_1 ∂_Y V_k mod P; the first linear dependency
/// V_r ∈ span(V_0, …, V_{r-1}) yields the operator. Returns the cleared
/// canonical form together with the order r ≤ deg_Y(P).
pub fn cockle_fraction(p: &BiPoly) -> Result<(DiffOp, usize)> {
    hypothesis_h(p)?;
    let field = p.field;
    let ring = RatField(field);
    let dy = p.deg_y().unwrap();

    let embed = |b: &BiPoly| -> Vec<RatFunc> {
        let mut v: Vec<RatFunc> = b
            .y_coefficients()
            .into_iter()
            .map(RatFunc::from_poly)
            .collect();
        polyring::trim(&ring, &mut v);
        v
    };
    let pv = embed(p);
    let px = embed(&p.derive_x());
    let py = polyring::derive(&ring, &pv);
    let inv_py = polyring::invert_mod(&ring, &py, &pv).map_err(|_| Error::NotSeparable)?;

    let y_class = polyring::rem(&ring, &[ring.zero(), ring.one()], &pv)?;
    let mut vs: Vec<Vec<RatFunc>> = vec![y_class];
    let minus_px: Vec<RatFunc> = px.iter().map(|c| ring.neg(c)).collect();
    let v1 = polyring::rem(&ring, &polyring::mul(&ring, &minus_px, &inv_py), &pv)?;

    for r in 1..=dy {
        while vs.len() <= r {
            let k = vs.len() - 1;
            let next = if k == 0 {
                v1.clone()
            } else {
                let dxv: Vec<RatFunc> = vs[k].iter().map(|c| c.derive()).collect();
                let dyv = polyring::derive(&ring, &vs[k]);
                let t = polyring::mul(&ring, &v1, &dyv);
                polyring::rem(&ring, &polyring::add(&ring, &dxv, &t), &pv)?
            };
            vs.push(next);
        }
        let mut mat = column_matrix(&ring, &vs[..=r], dy);
        if let Some(kern) = nullspace_vector(&ring, &mut mat, &[r])? {
            // vs[0..r] are independent (no kernel at earlier stages), so the
            // dependency must involve V_r.
            if ring.is_zero(&kern[r]) {
                return Err(Error::Internal("dependency missed V_r".into()));
            }
            debug_assert!(field.is_one(&kern[r].num.coeff(0)) && kern[r].is_poly());
            // Monic operator ∂^r + Σ kern_k ∂^k; clear denominators.
            let mut den = UniPoly::one(field);
            for c in &kern[..r] {
                den = den.lcm(&c.den);
            }
            let mut coeffs: Vec<UniPoly> = Vec::with_capacity(r + 1);
            for c in &kern[..r] {
                coeffs.push(c.num.mul(&den.exact_div(&c.den)?));
            }
            coeffs.push(den);
            return Ok((DiffOp::new(VarForm::Dx, coeffs, field)?, r));
        }
    }
    Err(Error::Internal(
        "no dependency up to deg_Y(P); arithmetic bug".into(),
    ))
}

/// Rank of the V_k images at X = a, or `None` when a is excluded
/// (p_{D_Y}(a)·Δ_Y(a) = 0 or the V-chain degenerates at a). Returns the
/// first k with V_k(a) dependent on the earlier images in K[Y]/(P(a,Y)).
fn rank_at(
    p: &BiPoly,
    wk: &[BiPoly],
    excl: &UniPoly,
    a: &Scalar,
) -> Result<Option<usize>> {
    let field = p.field;
    let dy = p.deg_y().unwrap();
    if field.is_zero(&excl.eval(a)) {
        return Ok(None);
    }
    let pa = p.eval_x(a);
    let pya = pa.derivative();
    let ipy = polyring::invert_mod(&field, pya.coeffs(), pa.coeffs())?;
    let ipy_sq = polyring::rem(&field, &polyring::mul(&field, &ipy, &ipy), pa.coeffs())?;

    let y_class = polyring::rem(&field, &[field.zero(), field.one()], pa.coeffs())?;
    let mut us: Vec<Vec<Scalar>> = vec![y_class];
    // V_k(a) = W_k(a,Y)·P_Y(a,Y)^{-(2k-1)} mod P(a,Y).
    let mut ipy_pow = ipy;
    for k in 1..=dy {
        let wka = wk[k - 1].eval_x(a);
        let u = polyring::rem(
            &field,
            &polyring::mul(&field, wka.coeffs(), &ipy_pow),
            pa.coeffs(),
        )?;
        us.push(u);
        let mut mat = column_matrix(&field, &us, dy);
        if let Some(kern) = nullspace_vector(&field, &mut mat, &[k])? {
            if field.is_zero(&kern[k]) {
                // V_0(a), …, V_{k-1}(a) already dependent: a cannot be lucky.
                return Ok(None);
            }
            return Ok(Some(k));
        }
        ipy_pow = polyring::rem(&field, &polyring::mul(&field, &ipy_pow, &ipy_sq), pa.coeffs())?;
    }
    // k = dy compares dy+1 vectors in a dy-dimensional space.
    unreachable!("dependency must appear by k = deg_Y(P)")
}

/// Finds a point a with p_{D_Y}(a)·Δ_Y(a) ≠ 0 and full rank of the V-images,
/// together with the resolvent order r (the maximal observed rank).
pub fn find_lucky_point(p: &BiPoly, mode: LuckyMode, seed: u64) -> Result<(Scalar, usize)> {
    hypothesis_h(p)?;
    let field = p.field;
    let dy = p.deg_y().unwrap();
    let dx = p.deg_x().unwrap_or(0);
    let excl = p.leading_coeff_y().mul(&discriminant_y(p)?);
    let wk = wk_sequence(p, dy);

    let mut best: Option<(Scalar, usize)> = None;
    let consider = |a: Scalar, r: usize, best: &mut Option<(Scalar, usize)>| {
        if best.as_ref().map_or(true, |(_, br)| r > *br) {
            *best = Some((a, r));
        }
    };

    match mode {
        LuckyMode::Probabilistic => {
            let wanted = field.modulus().map_or(5, |m| 5.min(m as usize));
            let mut found = 0usize;
            if let Some(m) = field.modulus() {
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
                // Unlucky points are rare; a generous attempt budget before
                // falling back to a full scan.
                for _ in 0..64 * wanted {
                    let a = Scalar::Mod(rng.random_range(0..m));
                    if let Some(r) = rank_at(p, &wk, &excl, &a)? {
                        consider(a, r, &mut best);
                        found += 1;
                        if found == wanted {
                            break;
                        }
                    }
                }
                if found == 0 {
                    for v in 0..m {
                        let a = Scalar::Mod(v);
                        if let Some(r) = rank_at(p, &wk, &excl, &a)? {
                            consider(a, r, &mut best);
                            break;
                        }
                    }
                }
            } else {
                let mut v: i64 = 0;
                while found < wanted {
                    let a = field.from_i64(v);
                    if let Some(r) = rank_at(p, &wk, &excl, &a)? {
                        consider(a, r, &mut best);
                        found += 1;
                    }
                    v += 1;
                }
            }
            best.ok_or_else(|| {
                Error::FieldTooSmall("every candidate point is excluded".into())
            })
        }
        LuckyMode::Deterministic => {
            // All unlucky points are roots of p_{D_Y}·Δ_Y·Φ with
            // deg Φ ≤ η(D_X, D_Y, r) ≤ η(D_X, D_Y, D_Y), so scanning past
            // that many points must hit a lucky one.
            let budget = excl.degree().unwrap_or(0) + bounds::eta(dx, dy, dy)? + 1;
            if let Some(m) = field.modulus() {
                if (budget as u64) > m {
                    return Err(Error::FieldTooSmall(format!(
                        "need {budget} distinct points, field has {m}"
                    )));
                }
            }
            for v in 0..budget {
                let a = field.from_i64(v as i64);
                if let Some(r) = rank_at(p, &wk, &excl, &a)? {
                    consider(a, r, &mut best);
                }
            }
            best.ok_or_else(|| {
                Error::FieldTooSmall("every candidate point is excluded".into())
            })
        }
    }
}

/// Series backend: identical canonical operator to `cockle_fraction`, given
/// a lucky point and the true order. See `cockle_series_with_trace`.
pub fn cockle_series(p: &BiPoly, a: &Scalar, r: usize) -> Result<DiffOp> {
    Ok(cockle_series_with_trace(p, a, r)?.0)
}

/// Shifts P so the lucky point is the origin, runs the V_k recurrence over
/// K[[X]][Y]/(P) at precision 2η+1+r, solves the order-r relation by
/// unit-pivot elimination over the series ring, Padé-reconstructs each A_k
/// with degrees (η, η), and shifts back.
///
/// A `ReconstructionFailed` error signals that a was not lucky or r is
/// wrong; the caller retries with a new point.
pub fn cockle_series_with_trace(
    p: &BiPoly,
    a: &Scalar,
    r: usize,
) -> Result<(DiffOp, CockleTrace)> {
    hypothesis_h(p)?;
    let field = p.field;
    let dy = p.deg_y().unwrap();
    let dx = p.deg_x().unwrap_or(0);
    let eta = bounds::eta(dx, dy, r)?;
    let prec = 2 * eta + 1 + r;
    let not_lucky =
        |what: &str| Error::ReconstructionFailed(format!("{what}; the point is not lucky"));

    let q = p.shift_x(a);
    let q0 = q.eval_x(&field.zero());
    if q0.degree() != Some(dy) {
        return Err(not_lucky("leading Y-coefficient vanishes"));
    }
    let ring = SeriesRing { field, precision: prec };
    let embed = |b: &BiPoly| -> Vec<KSeries> {
        let mut v: Vec<KSeries> = b
            .y_coefficients()
            .iter()
            .map(|c| TruncSeries::from_unipoly(field, c, prec))
            .collect();
        polyring::trim(&ring, &mut v);
        v
    };
    let qv = embed(&q);
    let qx = embed(&q.derive_x());
    let qy = polyring::derive(&ring, &qv);

    // Inverse of P_Y mod P over the series ring, Newton-lifted from X = 0.
    // Each step runs at the precision it can actually correct, so the cost
    // is dominated by the final doubling instead of log(prec) full passes.
    let i0 = polyring::invert_mod(&field, q0.derivative().coeffs(), q0.coeffs())
        .map_err(|_| not_lucky("P_Y not invertible at the point"))?;
    let mut inv_py: Vec<KSeries> = i0
        .iter()
        .map(|c| TruncSeries::constant(field, c.clone(), 1))
        .collect();
    let mut done = 1usize;
    while done < prec {
        let next = (2 * done).min(prec);
        let r2 = SeriesRing { field, precision: next };
        let at = |v: &[KSeries]| -> Vec<KSeries> {
            v.iter()
                .map(|s| {
                    let mut c = s.coeffs().to_vec();
                    c.truncate(next);
                    c.resize(next, field.zero());
                    TruncSeries::new(field, c)
                })
                .collect()
        };
        let (qvn, qyn, cur) = (at(&qv), at(&qy), at(&inv_py));
        let two = vec![r2.from_i64(2)];
        let t = polyring::rem(&r2, &polyring::mul(&r2, &qyn, &cur), &qvn)?;
        let e = polyring::sub(&r2, &two, &t);
        inv_py = polyring::rem(&r2, &polyring::mul(&r2, &cur, &e), &qvn)?;
        done = next;
    }

    let y_class = polyring::rem(&ring, &[ring.zero(), ring.one()], &qv)?;
    let minus_qx: Vec<KSeries> = qx.iter().map(|c| c.neg()).collect();
    let v1 = polyring::rem(&ring, &polyring::mul(&ring, &minus_qx, &inv_py), &qv)?;
    let mut vs: Vec<Vec<KSeries>> = vec![y_class, v1.clone()];
    for k in 1..r {
        // d/dX costs one coefficient; V_k keeps precision 2η+1+r-(k-1).
        let dxv: Vec<KSeries> = vs[k]
            .iter()
            .map(|s| s.derive(VarForm::Dx))
            .collect::<Result<_>>()?;
        let dyv = polyring::derive(&ring, &vs[k]);
        let t = polyring::mul(&ring, &v1, &dyv);
        vs.push(polyring::rem(&ring, &polyring::add(&ring, &dxv, &t), &qv)?);
    }

    let mut mat = column_matrix(&ring, &vs[..r], dy);
    let mut rhs: Vec<KSeries> = (0..dy)
        .map(|row| vs[r].get(row).cloned().unwrap_or_else(|| ring.zero()))
        .collect();
    let sol = solve_unit_pivot(&ring, &mut mat, &mut rhs)?
        .ok_or_else(|| not_lucky("relation has no unit-pivot solution"))?;

    // Reconstruct A_k = num/den and verify against the series before use.
    let mut relation: Vec<(UniPoly, UniPoly)> = Vec::with_capacity(r);
    for s in &sol {
        let target = s.truncate(2 * eta + 1);
        let (num, den) = crate::approx::pade(&target, eta, eta)
            .map_err(|_| not_lucky("Padé reconstruction failed"))?;
        if field.is_zero(&den.coeff(0)) {
            return Err(not_lucky("reconstructed denominator vanishes at the point"));
        }
        let back = KSeries::from_rational_function(field, &num, &den, 2 * eta + 1)?;
        if back != target {
            return Err(not_lucky("reconstruction does not match the series"));
        }
        relation.push((num, den));
    }

    let mut den = UniPoly::one(field);
    for (_, d) in &relation {
        den = den.lcm(d);
    }
    // M = den·∂^r - Σ A_k·den·∂^k, then shift X back by -a.
    let mut coeffs: Vec<UniPoly> = Vec::with_capacity(r + 1);
    let neg_a = field.neg(a);
    for (n, d) in &relation {
        coeffs.push(n.neg().mul(&den.exact_div(d)?).compose_shift(&neg_a));
    }
    coeffs.push(den.compose_shift(&neg_a));
    let op = DiffOp::new(VarForm::Dx, coeffs, field)?;
    let trace = CockleTrace {
        r,
        lucky_a: a.clone(),
        v_polys: vs,
        relation,
    };
    Ok((op, trace))
}

/// Lucky-point search plus series backend, with retries; falls back to the
/// deterministic scan when sampling keeps hitting unlucky points.
pub fn resolvent(p: &BiPoly, seed: u64) -> Result<(DiffOp, usize)> {
    for attempt in 0..4u64 {
        let (a, r) = find_lucky_point(p, LuckyMode::Probabilistic, seed.wrapping_add(attempt))?;
        match cockle_series(p, &a, r) {
            Ok(op) => return Ok((op, r)),
            Err(Error::ReconstructionFailed(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let (a, r) = find_lucky_point(p, LuckyMode::Deterministic, 0)?;
    Ok((cockle_series(p, &a, r)?, r))
}
