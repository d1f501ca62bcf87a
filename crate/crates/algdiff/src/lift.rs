//! Newton–Hensel lifting of series roots of P(X, Y).
//!
//! Over the quotient algebra A = K[Y]/(P(0,Y)) there is a unique series φ
//! with φ(0) = y and P(X, φ) = 0; individual K-rational roots lift the same
//! way. Both run the iteration φ ← φ − P(X,φ)/P_Y(X,φ) with doubling
//! precision, maintaining the inverse of P_Y(X,φ) by its own Newton update
//! so no division happens inside the loop.

use crate::algebra::QuotientAlgebra;
use crate::arith::{BiPoly, FieldSpec, Ring, Scalar, TruncSeries, UniPoly};
use crate::arith::discriminant_y;
use crate::error::{Error, Result};

/// A series root of `poly`, in powers of (X − basepoint).
#[derive(Debug, Clone)]
pub struct LiftedRoot<R: Ring> {
    pub series: TruncSeries<R>,
    pub poly: BiPoly,
    pub basepoint: Scalar,
}

/// P(X, s) for a series argument, by Horner in Y.
pub fn eval_bipoly_on_series<R: Ring>(p: &BiPoly, s: &TruncSeries<R>) -> TruncSeries<R> {
    let ring = s.ring().clone();
    let n = s.precision();
    let dy = match p.deg_y() {
        Some(d) => d,
        None => return TruncSeries::zero(ring, n),
    };
    let mut acc = TruncSeries::from_unipoly(ring.clone(), &p.coeff_of_y(dy), n);
    for j in (0..dy).rev() {
        acc = acc
            .mul(s)
            .add(&TruncSeries::from_unipoly(ring.clone(), &p.coeff_of_y(j), n));
    }
    acc
}

/// Checks hypothesis H_b at X = 0: the discriminant and the leading
/// Y-coefficient of P must both be nonzero there. On failure the error
/// carries the smallest nonnegative-integer shift that repairs it.
pub fn check_hb(p: &BiPoly) -> Result<()> {
    let field = p.field;
    if p.deg_y().is_none() || p.deg_y() == Some(0) {
        return Err(Error::ConstantInY);
    }
    let disc = discriminant_y(p)?;
    if disc.is_zero() {
        return Err(Error::NotSeparable);
    }
    let lc = p.leading_coeff_y();
    let zero = field.zero();
    let disc_zero = field.is_zero(&disc.eval(&zero));
    let lc_zero = field.is_zero(&lc.eval(&zero));
    if !disc_zero && !lc_zero {
        return Ok(());
    }
    Err(Error::HypothesisHb {
        disc_zero,
        lc_zero,
        suggested_shift: good_shift(&lc, &disc)?,
    })
}

/// Smallest nonnegative integer a with lc(a)·disc(a) ≠ 0.
fn good_shift(lc: &UniPoly, disc: &UniPoly) -> Result<Scalar> {
    let field = lc.field;
    let limit = match field.modulus() {
        Some(p) => p,
        // Over Q the zero set is finite, so scanning one past the root
        // count always terminates.
        None => (lc.degree().unwrap_or(0) + disc.degree().unwrap_or(0) + 1) as u64,
    };
    for a in 0..=limit {
        let x = field.from_i64(a as i64);
        if !field.is_zero(&lc.eval(&x)) && !field.is_zero(&disc.eval(&x)) {
            return Ok(x);
        }
    }
    Err(Error::FieldTooSmall(
        "find a shift avoiding the discriminant and leading coefficient".into(),
    ))
}

/// Newton iteration from an invertible simple root, generic over the
/// coefficient ring. `y0` must satisfy P(0, y0) = 0 with P_Y(0, y0) a unit.
fn newton_iterate<R: Ring>(
    ring: &R,
    p: &BiPoly,
    y0: R::Elem,
    precision: usize,
) -> Result<TruncSeries<R>> {
    if precision == 0 {
        return Err(Error::ZeroPrecision);
    }
    let py = p.derive_y();
    let mut phi = TruncSeries::constant(ring.clone(), y0, 1);
    let inv0 = ring
        .inv(eval_bipoly_on_series(&py, &phi).coeff(0))
        .map_err(|e| match e {
            Error::ZeroDivisor { .. } | Error::DivisionByZero => Error::Internal(
                "P_Y(0, y0) must be a unit for Newton lifting".into(),
            ),
            other => other,
        })?;
    let mut inv = TruncSeries::constant(ring.clone(), inv0, 1);
    let mut prec = 1;
    while prec < precision {
        prec = (2 * prec).min(precision);
        phi = phi.pad(prec);
        inv = inv.pad(prec);
        // First bring the inverse of P_Y(X, phi) up to the new precision...
        let two = TruncSeries::constant(ring.clone(), ring.from_i64(2), prec);
        let py_val = eval_bipoly_on_series(&py, &phi);
        inv = inv.mul(&two.sub(&py_val.mul(&inv)));
        // ...then take the Newton step on phi itself.
        let val = eval_bipoly_on_series(p, &phi);
        phi = phi.sub(&val.mul(&inv));
    }
    Ok(phi)
}

/// Lifts the canonical root φ ∈ A[[X]], φ(0) = y, of P over the quotient
/// algebra A = K[Y]/(P(0,Y)). Requires H_b; on failure the error names the
/// vanishing quantity and a shift that fixes it (no shift is applied
/// silently).
pub fn newton_lift(p: &BiPoly, precision: usize) -> Result<LiftedRoot<QuotientAlgebra>> {
    check_hb(p)?;
    let algebra = QuotientAlgebra::new(p.eval_x(&p.field.zero()))?;
    // Reduce Y mod p up front: for deg p = 1 the class of Y is a constant.
    let y = algebra
        .element(UniPoly::monomial(p.field, p.field.one(), 1))
        .rep()
        .clone();
    let series = newton_iterate(&algebra, p, y, precision)?;
    Ok(LiftedRoot {
        series,
        poly: p.clone(),
        basepoint: p.field.zero(),
    })
}

/// Lifts the unique α ∈ K[[X]] with α(0) = y0, requiring y0 to be a simple
/// root of P(0, Y).
pub fn lift_scalar_root(
    p: &BiPoly,
    y0: &Scalar,
    precision: usize,
) -> Result<LiftedRoot<FieldSpec>> {
    let field = p.field;
    let zero = field.zero();
    let at0 = p.eval_x(&zero);
    let simple = field.is_zero(&at0.eval(y0)) && !field.is_zero(&at0.derivative().eval(y0));
    if !simple {
        return Err(Error::NotASimpleRoot(y0.clone()));
    }
    let series = newton_iterate(&field, p, y0.clone(), precision)?;
    Ok(LiftedRoot {
        series,
        poly: p.clone(),
        basepoint: zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{component_decompose, project};
    use crate::arith::text::parse_bipoly;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn rat(s: &str) -> Scalar {
        q().parse_scalar(s).unwrap()
    }

    #[test]
    fn algebra_lift_of_sqrt_one_plus_x() {
        let p = parse_bipoly(q(), "Y^2 - (1 + X)").unwrap();
        let root = newton_lift(&p, 3).unwrap();
        // phi = y + (y/2)X - (y/8)X^2 + O(X^3) in Q[Y]/(Y^2 - 1).
        let y_times = |c: Scalar| UniPoly::new(q(), vec![q().zero(), c]);
        assert_eq!(root.series.coeff(0), &y_times(rat("1")));
        assert_eq!(root.series.coeff(1), &y_times(rat("1/2")));
        assert_eq!(root.series.coeff(2), &y_times(rat("-1/8")));
        assert!(eval_bipoly_on_series(&p, &root.series).is_zero());
    }

    #[test]
    fn exact_polynomial_root() {
        let p = parse_bipoly(q(), "Y - X^2").unwrap();
        let root = newton_lift(&p, 9).unwrap();
        // A = Q[Y]/(Y) is one-dimensional; phi = X^2 exactly.
        for k in 0..9 {
            let expected = if k == 2 { UniPoly::one(q()) } else { UniPoly::zero(q()) };
            assert_eq!(root.series.coeff(k), &expected, "coefficient {k}");
        }
    }

    #[test]
    fn idempotent_algebra_first_coefficient() {
        // P = Y^2 - Y + X over A = Q[Y]/(Y^2 - Y): coefficient 1 of phi is
        // -1/(2y-1) = -(2y-1) since (2y-1)^2 = 1 in A.
        let p = parse_bipoly(q(), "Y^2 - Y + X").unwrap();
        let root = newton_lift(&p, 2).unwrap();
        assert_eq!(root.series.coeff(0), &UniPoly::from_i64_coeffs(q(), &[0, 1]));
        assert_eq!(root.series.coeff(1), &UniPoly::from_i64_coeffs(q(), &[1, -2]));
        assert!(eval_bipoly_on_series(&p, &root.series).is_zero());
    }

    #[test]
    fn scalar_lift_binomial_series() {
        let p = parse_bipoly(q(), "Y^2 - (1 + X)").unwrap();
        let root = lift_scalar_root(&p, &q().one(), 4).unwrap();
        let want = [rat("1"), rat("1/2"), rat("-1/8"), rat("1/16")];
        assert_eq!(root.series.coeffs(), &want);
        assert!(eval_bipoly_on_series(&p, &root.series).is_zero());

        let linear = parse_bipoly(q(), "Y - X").unwrap();
        let root = lift_scalar_root(&linear, &q().zero(), 5).unwrap();
        assert_eq!(root.series.coeffs(), &[rat("0"), rat("1"), rat("0"), rat("0"), rat("0")]);
    }

    #[test]
    fn sparse_witness_gap() {
        // Y^5 - Y + X^5 at y0 = 0: alpha = X^5 + X^25 + O(X^26).
        let p = parse_bipoly(q(), "Y^5 - Y + X^5").unwrap();
        let root = lift_scalar_root(&p, &q().zero(), 26).unwrap();
        for k in 0..26 {
            let expected = if k == 5 || k == 25 { q().one() } else { q().zero() };
            assert_eq!(root.series.coeff(k), &expected, "coefficient {k}");
        }
    }

    #[test]
    fn rejects_non_simple_roots_and_bad_basepoints() {
        let p = parse_bipoly(q(), "Y^2 - (1 + X)").unwrap();
        assert!(matches!(
            lift_scalar_root(&p, &q().zero(), 3),
            Err(Error::NotASimpleRoot(_))
        ));
        // P = Y^2 - X: discriminant -4X vanishes at 0; shift 1 works.
        let sing = parse_bipoly(q(), "Y^2 - X").unwrap();
        match newton_lift(&sing, 3) {
            Err(Error::HypothesisHb { disc_zero, lc_zero, suggested_shift }) => {
                assert!(disc_zero);
                assert!(!lc_zero);
                assert_eq!(suggested_shift, q().one());
            }
            other => panic!("expected an H_b failure, got {other:?}"),
        }
        // Vanishing leading coefficient: P = X·Y^2 + Y + 1.
        let lc = parse_bipoly(q(), "X*Y^2 + Y + 1").unwrap();
        match newton_lift(&lc, 3) {
            Err(Error::HypothesisHb { lc_zero, .. }) => assert!(lc_zero),
            other => panic!("expected an H_b failure, got {other:?}"),
        }
    }

    #[test]
    fn projection_agrees_with_scalar_lift() {
        let f = FieldSpec::prime(9973).unwrap();
        let mut rng = crate::test_rng(41);
        let mut done = 0;
        while done < 5 {
            let p = BiPoly::random_separable(f, 2, 3, &mut rng);
            if check_hb(&p).is_err() {
                continue;
            }
            // Pick a root of P(0,Y) in F_p, if any.
            let at0 = p.eval_x(&f.zero());
            let Some(y0) = (0..f.modulus().unwrap())
                .map(Scalar::Mod)
                .find(|c| f.is_zero(&at0.eval(c)))
            else {
                continue;
            };
            let whole = newton_lift(&p, 12).unwrap();
            let scalar = lift_scalar_root(&p, &y0, 12).unwrap();
            let alg = QuotientAlgebra::new(at0.clone()).unwrap();
            let linear = UniPoly::new(f, vec![f.neg(&y0), f.one()]);
            for k in 0..12 {
                let projected = project(&alg.element(whole.series.coeff(k).clone()), &linear)
                    .unwrap();
                assert_eq!(component_decompose(&projected), vec![scalar.series.coeff(k).clone()]);
            }
            done += 1;
        }
    }

    #[test]
    fn doubling_is_consistent() {
        let f = FieldSpec::prime(101).unwrap();
        let mut rng = crate::test_rng(42);
        let mut done = 0;
        while done < 5 {
            let p = BiPoly::random_separable(f, 2, 2, &mut rng);
            if check_hb(&p).is_err() {
                continue;
            }
            let s = newton_lift(&p, 7).unwrap();
            let l = newton_lift(&p, 14).unwrap();
            assert_eq!(s.series, l.series.truncate(7));
            assert!(eval_bipoly_on_series(&p, &l.series).is_zero());
            done += 1;
        }
    }
}
