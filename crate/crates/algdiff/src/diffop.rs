//! Linear differential operators with polynomial coefficients, in either
//! ∂_X or θ_X = X·∂_X.
//!
//! Operators are kept in a cleared, canonical form: coefficients share no
//! polynomial factor and the leading coefficient is monic. That makes
//! backend equivalence a literal equality test.

use crate::arith::text::{unipoly_from_json, unipoly_to_json};
use crate::arith::{FieldSpec, Ring, Scalar, TruncSeries, UniPoly, VarForm};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    pub var_form: VarForm,
    coeffs: Vec<UniPoly>,
    pub field: FieldSpec,
}

impl DiffOp {
    /// Builds and canonicalizes; the operator must be nonzero.
    pub fn new(var_form: VarForm, mut coeffs: Vec<UniPoly>, field: FieldSpec) -> Result<Self> {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("zero differential operator".into()));
        }
        let mut op = DiffOp { var_form, coeffs, field };
        op.canonicalize();
        Ok(op)
    }

    /// Order in the derivation.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest X-degree among the coefficients.
    pub fn deg_x(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(UniPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[UniPoly] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> &UniPoly {
        self.coeffs.last().unwrap()
    }

    /// Divides out the coefficient gcd and scales the leading coefficient
    /// monic.
    fn canonicalize(&mut self) {
        let mut g = UniPoly::zero(self.field);
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g.degree().map_or(false, |d| d > 0) {
            for c in &mut self.coeffs {
                *c = c.exact_div(&g).expect("gcd divides every coefficient");
            }
        }
        let lc = self
            .coeffs
            .last()
            .unwrap()
            .leading_coeff()
            .expect("leading coefficient nonzero")
            .clone();
        let inv = self.field.inv(&lc).expect("leading coefficient nonzero");
        if !self.field.is_one(&inv) {
            for c in &mut self.coeffs {
                *c = c.scale(&inv);
            }
        }
    }

    /// Applies the operator to a series. In ∂_X form the result precision
    /// drops by the order.
    pub fn apply<R: Ring>(&self, f: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        let mut derivative = f.clone();
        let mut acc = derivative.mul_poly(&self.coeffs[0]);
        for c in &self.coeffs[1..] {
            derivative = derivative.derive(self.var_form)?;
            acc = acc.truncate(derivative.precision().min(acc.precision()));
            acc = acc.add(&derivative.mul_poly(c));
        }
        Ok(acc)
    }

    /// Rewrites into θ form. A ∂^b term needs b powers of X in front, so
    /// the operator is first left-multiplied by the smallest adequate X^m
    /// (left multiplication by X preserves the solution space).
    pub fn to_theta_form(&self) -> Result<DiffOp> {
        if self.var_form == VarForm::Theta {
            return Ok(self.clone());
        }
        let field = self.field;
        let m = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| b.saturating_sub(c.valuation().unwrap()))
            .max()
            .unwrap();
        let order = self.order();
        // X^{a}∂^b = X^{a-b}·θ(θ-1)⋯(θ-b+1) for a ≥ b.
        let s1 = stirling_first_signed(field, order);
        let mut out = vec![UniPoly::zero(field); order + 1];
        for (b, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let shifted = c.shift_up(m); // now every term X^a has a ≥ b
            for (a, ca) in shifted.coeffs().iter().enumerate() {
                if field.is_zero(ca) {
                    continue;
                }
                for (k, s) in s1[b].iter().enumerate() {
                    if field.is_zero(s) {
                        continue;
                    }
                    let term = UniPoly::monomial(field, field.mul(ca, s), a - b);
                    out[k] = out[k].add(&term);
                }
            }
        }
        DiffOp::new(VarForm::Theta, out, field)
    }

    /// Rewrites into ∂_X form via θ^j = Σ_k S(j,k)·X^k∂^k.
    pub fn to_dx_form(&self) -> Result<DiffOp> {
        if self.var_form == VarForm::Dx {
            return Ok(self.clone());
        }
        let field = self.field;
        let order = self.order();
        let s2 = stirling_second(field, order);
        let mut out = vec![UniPoly::zero(field); order + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, out_k) in out.iter_mut().enumerate().take(j + 1) {
                let s = &s2[j][k];
                if field.is_zero(s) {
                    continue;
                }
                *out_k = out_k.add(&c.scale(s).shift_up(k));
            }
        }
        DiffOp::new(VarForm::Dx, out, field)
    }

    /// The monic-over-K(X) shape: coefficient i divided by the leading
    /// coefficient, as (numerator, denominator) pairs.
    pub fn monic_fractions(&self) -> Vec<(UniPoly, UniPoly)> {
        let lead = self.leading_coeff().clone();
        self.coeffs
            .iter()
            .map(|c| {
                let g = c.gcd(&lead);
                if let Some(d) = g.degree() {
                    if d > 0 {
                        return (
                            c.exact_div(&g).unwrap(),
                            lead.exact_div(&g).unwrap(),
                        );
                    }
                }
                (c.clone(), lead.clone())
            })
            .collect()
    }
}

/// Signed Stirling numbers of the first kind up to row `n`, in the field:
/// θ(θ−1)⋯(θ−b+1) = Σ_k s1[b][k]·θ^k. Computed in the field because the
/// integers overflow machine words long before the orders used here.
fn stirling_first_signed(field: FieldSpec, n: usize) -> Vec<Vec<Scalar>> {
    let mut t = vec![vec![field.zero(); n + 1]; n + 1];
    t[0][0] = field.one();
    for b in 1..=n {
        for k in 0..=b {
            // s(b,k) = s(b-1,k-1) - (b-1)·s(b-1,k)
            let mut v = if k > 0 { t[b - 1][k - 1].clone() } else { field.zero() };
            let down = field.mul(&t[b - 1][k], &field.from_i64((b - 1) as i64));
            v = field.sub(&v, &down);
            t[b][k] = v;
        }
    }
    t
}

/// Stirling numbers of the second kind up to row `n`, in the field:
/// θ^j = Σ_k s2[j][k]·X^k∂^k.
fn stirling_second(field: FieldSpec, n: usize) -> Vec<Vec<Scalar>> {
    let mut t = vec![vec![field.zero(); n + 1]; n + 1];
    t[0][0] = field.one();
    for j in 1..=n {
        for k in 1..=j {
            // S(j,k) = k·S(j-1,k) + S(j-1,k-1)
            let v = field.mul(&t[j - 1][k], &field.from_i64(k as i64));
            t[j][k] = field.add(&v, &t[j - 1][k - 1]);
        }
    }
    t
}

// ---------------------------------------------------------------------------
// JSON form: {"var":"Dx"|"Tx","coeffs":[[ascending X coeffs], ...]}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffOpJson {
    pub var: String,
    pub coeffs: Vec<Vec<String>>,
}

pub fn diffop_to_json(op: &DiffOp) -> DiffOpJson {
    DiffOpJson {
        var: match op.var_form {
            VarForm::Dx => "Dx".to_string(),
            VarForm::Theta => "Tx".to_string(),
        },
        coeffs: op.coeffs.iter().map(unipoly_to_json).collect(),
    }
}

pub fn diffop_from_json(field: FieldSpec, j: &DiffOpJson) -> Result<DiffOp> {
    let var_form = match j.var.as_str() {
        "Dx" => VarForm::Dx,
        "Tx" => VarForm::Theta,
        other => return Err(Error::Parse(format!("unknown derivation {other:?}"))),
    };
    let coeffs = j
        .coeffs
        .iter()
        .map(|c| unipoly_from_json(field, c))
        .collect::<Result<Vec<_>>>()?;
    DiffOp::new(var_form, coeffs, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::KSeries;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn upoly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64_coeffs(q(), coeffs)
    }

    #[test]
    fn theta_minus_two_annihilates_x_squared() {
        let op = DiffOp::new(VarForm::Theta, vec![upoly(&[-2]), upoly(&[1])], q()).unwrap();
        let f = KSeries::from_unipoly(q(), &upoly(&[0, 0, 5]), 6);
        assert!(op.apply(&f).unwrap().is_zero());
        let g = KSeries::from_unipoly(q(), &upoly(&[0, 0, 0, 1]), 6);
        assert!(!op.apply(&g).unwrap().is_zero());
    }

    #[test]
    fn resolvent_of_sqrt_annihilates_binomial_series() {
        // 2(1+X)∂ - 1 applied to the series of sqrt(1+X).
        let op = DiffOp::new(VarForm::Dx, vec![upoly(&[-1]), upoly(&[2, 2])], q()).unwrap();
        let root = crate::lift::lift_scalar_root(
            &crate::arith::text::parse_bipoly(q(), "Y^2 - (1 + X)").unwrap(),
            &q().one(),
            10,
        )
        .unwrap();
        let out = op.apply(&root.series).unwrap();
        assert_eq!(out.precision(), 9);
        assert!(out.is_zero());
    }

    #[test]
    fn dx_to_theta_conversion() {
        // 2(1+X)∂ - 1 becomes (2+2X)θ - X after clearing one power of X.
        let op = DiffOp::new(VarForm::Dx, vec![upoly(&[-1]), upoly(&[2, 2])], q()).unwrap();
        let theta = op.to_theta_form().unwrap();
        assert_eq!(
            theta,
            DiffOp::new(VarForm::Theta, vec![upoly(&[0, -1]), upoly(&[2, 2])], q()).unwrap()
        );
    }

    #[test]
    fn theta_dx_round_trip_solution_space() {
        // Round trip θ-form -> dx-form -> θ-form on the sqrt resolvent and
        // check both annihilate the series.
        let op = DiffOp::new(VarForm::Theta, vec![upoly(&[0, -1]), upoly(&[2, 2])], q()).unwrap();
        let dx = op.to_dx_form().unwrap();
        let back = dx.to_theta_form().unwrap();
        let root = crate::lift::lift_scalar_root(
            &crate::arith::text::parse_bipoly(q(), "Y^2 - (1 + X)").unwrap(),
            &q().one(),
            12,
        )
        .unwrap();
        for candidate in [&op, &dx, &back] {
            assert!(candidate.apply(&root.series).unwrap().is_zero());
        }
    }

    #[test]
    fn canonical_form_strips_content_and_scales() {
        // X·(θ - 2) scaled by 3 canonicalizes to θ - 2.
        let op = DiffOp::new(
            VarForm::Theta,
            vec![upoly(&[0, -6]), upoly(&[0, 3])],
            q(),
        )
        .unwrap();
        assert_eq!(op.coeffs(), &[upoly(&[-2]), upoly(&[1])]);
    }

    #[test]
    fn json_round_trip() {
        let op = DiffOp::new(VarForm::Dx, vec![upoly(&[-1]), upoly(&[2, 2])], q()).unwrap();
        let j = diffop_to_json(&op);
        let s = serde_json::to_string(&j).unwrap();
        let back: DiffOpJson = serde_json::from_str(&s).unwrap();
        assert_eq!(diffop_from_json(q(), &back).unwrap(), op);
    }

    #[test]
    fn stirling_triangles_small_values() {
        let f = q();
        let s1 = stirling_first_signed(f, 4);
        // θ(θ-1)(θ-2) = θ^3 - 3θ^2 + 2θ
        assert_eq!(s1[3][1], f.from_i64(2));
        assert_eq!(s1[3][2], f.from_i64(-3));
        assert_eq!(s1[3][3], f.from_i64(1));
        let s2 = stirling_second(f, 4);
        // θ^3 = X∂ + 3X^2∂^2 + X^3∂^3
        assert_eq!(s2[3][1], f.from_i64(1));
        assert_eq!(s2[3][2], f.from_i64(3));
        assert_eq!(s2[3][3], f.from_i64(1));
    }
}
