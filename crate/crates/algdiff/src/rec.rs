//! Operator → recurrence conversion and linear-time series expansion.
//!
//! A θ_X-form operator Σ c_j(X)θ^j translates, coefficient of X^n by
//! coefficient, into a P-recurrence r_0(n)u_n + ⋯ + r_s(n)u_{n+s} = 0 with
//! s the X-degree span. Unrolling the recurrence past the largest integer
//! root ρ of r_s expands an algebraic series in time linear in the number
//! of terms; Newton lifting provides the initial segment, patches the
//! occasional vanishing leading value over F_p, and serves as the exact
//! oracle the expansion is checked against.

use crate::arith::{BiPoly, FieldSpec, Ring, Scalar, UniPoly, VarForm};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::lift::{lift_scalar_root, newton_lift};
use crate::resolvent::resolvent;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// A linear recurrence Σ_{i=0}^{s} r_i(n)·u_{n+i} = 0, valid for all
/// n ≥ 0, with polynomial coefficients in the index n.
#[derive(Debug, Clone, PartialEq)]
pub struct Recurrence {
    /// r_0..r_s; r_s is nonzero.
    pub r: Vec<UniPoly>,
    pub s: usize,
    pub field: FieldSpec,
}

impl Recurrence {
    /// Σ r_i(n)·u_{n+i} over any coefficient ring containing K.
    pub fn apply_at<R: Ring>(&self, ring: &R, u: &[R::Elem], n: usize) -> R::Elem {
        let mut acc = ring.zero();
        for (i, ri) in self.r.iter().enumerate() {
            let v = ri.eval(&self.field.from_i64(n as i64));
            acc = ring.add(&acc, &ring.scale(&u[n + i], &v));
        }
        acc
    }
}

/// Scalar normalization of a recurrence: r_s monic over F_p; integer
/// coefficients with content 1 and positive leading r_s over Q. A common
/// *polynomial* factor in n is never divided out — its integer roots carry
/// constraints the recurrence must keep. (Common polynomial factors in X
/// are already gone: the operator is canonicalized before conversion.)
fn normalize(field: FieldSpec, r: Vec<UniPoly>) -> Vec<UniPoly> {
    let lead = r.last().unwrap().leading_coeff().unwrap().clone();
    match field {
        FieldSpec::Prime { .. } => {
            let c = field.inv(&lead).unwrap();
            r.into_iter().map(|ri| ri.scale(&c)).collect()
        }
        FieldSpec::Rational => {
            // Content = gcd of numerators / lcm of denominators, signed so
            // that r_s keeps a positive leading coefficient.
            let mut num_gcd = BigInt::zero();
            let mut den_lcm = BigInt::one();
            for ri in &r {
                for c in ri.coeffs() {
                    let Scalar::Rat(q) = c else { unreachable!() };
                    num_gcd = num_gcd.gcd(q.numer());
                    den_lcm = den_lcm.lcm(q.denom());
                }
            }
            let mut content = BigRational::new(num_gcd, den_lcm);
            let Scalar::Rat(lq) = &lead else { unreachable!() };
            if lq.is_negative() {
                content = -content;
            }
            let c = field.inv(&Scalar::Rat(Box::new(content))).unwrap();
            r.into_iter().map(|ri| ri.scale(&c)).collect()
        }
    }
}

/// Recurrence satisfied by the coefficient sequence of any series solution
/// of L. The X^m-coefficient of L·u reads Σ_a q_a(m−a)·u_{m−a} with
/// q_a(t) = Σ_j c_{ja} t^j; re-indexing by the X-degree span gives the
/// canonical ascending form.
pub fn diffop_to_recurrence(l: &DiffOp) -> Result<Recurrence> {
    let field = l.field;
    let theta = match l.var_form {
        VarForm::Theta => l.clone(),
        VarForm::Dx => l.to_theta_form()?,
    };
    let a_max = theta.deg_x();
    let q: Vec<UniPoly> = (0..=a_max)
        .map(|a| {
            UniPoly::new(
                field,
                theta.coeffs().iter().map(|c| c.coeff(a)).collect(),
            )
        })
        .collect();
    let a0 = q.iter().position(|p| !p.is_zero()).expect("operator nonzero");
    let a1 = q.iter().rposition(|p| !p.is_zero()).unwrap();
    let s = a1 - a0;
    let r: Vec<UniPoly> = (0..=s)
        .map(|i| q[a1 - i].compose_shift(&field.from_i64(i as i64)))
        .collect();
    Ok(Recurrence { r: normalize(field, r), s, field })
}

/// Largest integer root of r in 0..=n, or −1. Over F_p integer indices
/// alias mod p, so no single ρ is meaningful: this returns −1 and planning
/// scans the leading values over the whole target range instead.
pub fn largest_nonneg_int_root(r: &UniPoly, n: usize) -> i64 {
    let field = r.field;
    if field.modulus().is_some() {
        return -1;
    }
    for v in (0..=n as i64).rev() {
        if field.is_zero(&r.eval(&field.from_i64(v))) {
            return v;
        }
    }
    -1
}

/// r(start), …, r(start+count−1), propagated along the arithmetic
/// progression by finite differences: deg(r)+1 direct evaluations seed the
/// difference table, each further value costs deg(r) additions.
pub fn eval_progression(r: &UniPoly, start: i64, count: usize) -> Vec<Scalar> {
    let field = r.field;
    let d = r.degree().unwrap_or(0);
    if count <= d + 1 {
        return (0..count)
            .map(|t| r.eval(&field.from_i64(start + t as i64)))
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    let mut table: Vec<Vec<Scalar>> =
        vec![(0..=d).map(|t| r.eval(&field.from_i64(start + t as i64))).collect()];
    for k in 1..=d {
        let prev = &table[k - 1];
        table.push((0..prev.len() - 1).map(|t| field.sub(&prev[t + 1], &prev[t])).collect());
    }
    // diffs[k] = Δ^k r at the front of the remaining progression.
    let mut diffs: Vec<Scalar> = table.iter().map(|row| row[0].clone()).collect();
    for _ in 0..count {
        out.push(diffs[0].clone());
        for k in 0..d {
            diffs[k] = field.add(&diffs[k], &diffs[k + 1]);
        }
    }
    out
}

/// Everything `unroll` needs: the recurrence, the largest integer root ρ
/// of its leading coefficient, an initial segment covering indices
/// 0..=ρ+s, and the target length.
pub struct ExpansionPlan<R: Ring> {
    pub rec: Recurrence,
    pub rho: i64,
    pub initial: Vec<R::Elem>,
    pub n: usize,
}

/// Expands to `plan.n` coefficients. On a vanishing leading value r_s(n)
/// past ρ (aliasing over F_p, or an undetected root), `extend` must
/// produce the true coefficients through the given index; without one the
/// gap is an error.
pub fn unroll<R: Ring>(
    ring: &R,
    plan: &ExpansionPlan<R>,
    mut extend: Option<&mut dyn FnMut(usize) -> Result<Vec<R::Elem>>>,
) -> Result<Vec<R::Elem>> {
    let field = plan.rec.field;
    let s = plan.rec.s;
    let need = ((plan.rho + 1).max(0) as usize + s).min(plan.n);
    if plan.initial.len() < need {
        return Err(Error::InitialSegmentTooShort(need));
    }
    let mut out: Vec<R::Elem> = plan.initial[..plan.initial.len().min(plan.n)].to_vec();
    if out.len() >= plan.n {
        return Ok(out);
    }
    let n0 = out.len() - s;
    // One rolling finite-difference table per r_i: diffs[0] = r_i(pos),
    // advancing costs deg(r_i) additions and no per-step memory.
    let seed_table = |ri: &UniPoly| -> Vec<Scalar> {
        let d = ri.degree().unwrap_or(0);
        let mut rows: Vec<Vec<Scalar>> =
            vec![(0..=d).map(|t| ri.eval(&field.from_i64(n0 as i64 + t as i64))).collect()];
        for k in 1..=d {
            let prev = &rows[k - 1];
            rows.push((0..prev.len() - 1).map(|t| field.sub(&prev[t + 1], &prev[t])).collect());
        }
        rows.iter().map(|row| row[0].clone()).collect()
    };
    let mut tabs: Vec<Vec<Scalar>> = plan.rec.r.iter().map(|ri| seed_table(ri)).collect();
    let mut pos = n0;
    while out.len() < plan.n {
        let n = out.len() - s;
        while pos < n {
            for diffs in tabs.iter_mut() {
                for k in 0..diffs.len() - 1 {
                    let step = field.add(&diffs[k], &diffs[k + 1]);
                    diffs[k] = step;
                }
            }
            pos += 1;
        }
        let lead = &tabs[s][0];
        if field.is_zero(lead) {
            let idx = n + s;
            let Some(extend) = extend.as_deref_mut() else {
                return Err(Error::InitialSegmentTooShort(idx + 1));
            };
            let ext = extend(idx)?;
            if ext.len() <= idx {
                return Err(Error::Internal("extension shorter than requested".into()));
            }
            out = ext[..(idx + 1).min(plan.n)].to_vec();
            continue;
        }
        let mut acc = ring.zero();
        for i in 0..s {
            acc = ring.add(&acc, &ring.scale(&out[n + i], &tabs[i][0]));
        }
        let u = ring.neg(&ring.scale(&acc, &field.inv(lead)?));
        out.push(u);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    Recurrence,
    Newton,
}

/// Largest index ν < n−s at which the leading value r_s(ν) vanishes, or −1.
/// Over Q these are the integer roots ≤ ρ; over F_p every residue root of
/// r_s recurs at ν, ν+p, ν+2p, … — coefficients u_{ν+s} at those indices
/// are not determined by the recurrence at all (mod p a derivative cannot
/// see X^p-powers), so they belong to the initial data.
fn last_undetermined(rec: &Recurrence, n: usize) -> i64 {
    let field = rec.field;
    if n <= rec.s {
        return -1;
    }
    let lead = eval_progression(&rec.r[rec.s], 0, n - rec.s);
    lead.iter().rposition(|v| field.is_zero(v)).map_or(-1, |i| i as i64)
}

/// Builds the plan for a given associated operator: recurrence, ρ, and a
/// Newton-lifted initial segment through index ρ+s. ρ here is the last
/// index where the leading value vanishes inside the target range, so the
/// unroll pass never stalls; the patch hook stays as a safety net.
fn plan_for<R: Ring, F>(
    op: &DiffOp,
    n: usize,
    mut lift_to: F,
) -> Result<(Recurrence, i64, Vec<R::Elem>)>
where
    F: FnMut(usize) -> Result<Vec<R::Elem>>,
{
    let rec = diffop_to_recurrence(op)?;
    let rho = last_undetermined(&rec, n);
    let init_len = ((rho + 1).max(0) as usize + rec.s).min(n).max(1.min(n));
    let initial = if init_len == 0 { Vec::new() } else { lift_to(init_len)? };
    Ok((rec, rho, initial))
}

/// First `n` coefficients of the scalar root of P with α(0) = y0, via the
/// chosen engine. The recurrence engine derives its operator from the
/// resolvent; both engines agree exactly.
pub fn expand(p: &BiPoly, y0: &Scalar, n: usize, via: Via, seed: u64) -> Result<Vec<Scalar>> {
    match via {
        Via::Newton => expand_newton(p, y0, n),
        Via::Recurrence => {
            let (op, _) = resolvent(p, seed)?;
            expand_with_op(p, y0, n, &op)
        }
    }
}

pub fn expand_newton(p: &BiPoly, y0: &Scalar, n: usize) -> Result<Vec<Scalar>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(lift_scalar_root(p, y0, n)?.series.coeffs().to_vec())
}

/// The scalar plan `expand_with_op` runs: recurrence from the operator,
/// initial segment Newton-lifted through the last undetermined index.
pub fn scalar_plan(
    p: &BiPoly,
    y0: &Scalar,
    n: usize,
    op: &DiffOp,
) -> Result<ExpansionPlan<FieldSpec>> {
    let (rec, rho, initial) = plan_for::<FieldSpec, _>(op, n, |len| {
        Ok(lift_scalar_root(p, y0, len)?.series.coeffs().to_vec())
    })?;
    Ok(ExpansionPlan { rec, rho, initial, n })
}

/// Recurrence-driven expansion with a caller-supplied associated operator.
pub fn expand_with_op(p: &BiPoly, y0: &Scalar, n: usize, op: &DiffOp) -> Result<Vec<Scalar>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let field = p.field;
    let plan = scalar_plan(p, y0, n, op)?;
    let mut patch = |idx: usize| -> Result<Vec<Scalar>> {
        Ok(lift_scalar_root(p, y0, idx + 1)?.series.coeffs().to_vec())
    };
    unroll(&field, &plan, Some(&mut patch))
}

/// Algebra-valued expansion: all conjugate roots at once, coefficients in
/// K[Y]/(P(0,Y)).
pub fn expand_algebra(p: &BiPoly, n: usize, via: Via, seed: u64) -> Result<Vec<UniPoly>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    match via {
        Via::Newton => Ok(newton_lift(p, n)?.series.coeffs().to_vec()),
        Via::Recurrence => {
            let (op, _) = resolvent(p, seed)?;
            let root = newton_lift(p, 1)?;
            let ring = root.series.ring().clone();
            let (rec, rho, initial) = plan_for::<crate::algebra::QuotientAlgebra, _>(
                &op,
                n,
                |len| Ok(newton_lift(p, len)?.series.coeffs().to_vec()),
            )?;
            let plan = ExpansionPlan { rec, rho, initial, n };
            let mut patch = |idx: usize| -> Result<Vec<UniPoly>> {
                Ok(newton_lift(p, idx + 1)?.series.coeffs().to_vec())
            };
            unroll(&ring, &plan, Some(&mut patch))
        }
    }
}
