//! The quotient algebra A = K[Y]/(p(Y)) for squarefree p.
//!
//! A is a product of fields, so every nonzero element is either invertible
//! or exhibits a proper factor of p through a gcd; the factor is handed to
//! the caller, which restarts in the smaller algebra (`project`).

use crate::arith::{FieldSpec, Ring, Scalar, UniPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientAlgebra {
    p: UniPoly,
    pub field: FieldSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgElem {
    rep: UniPoly,
    pub parent: QuotientAlgebra,
}

/// What division by a nonzero element produced.
#[derive(Debug, Clone, PartialEq)]
pub enum InvertOutcome {
    Inverse(AlgElem),
    /// A monic proper factor of the defining polynomial.
    Factor(UniPoly),
}

impl QuotientAlgebra {
    /// Requires deg(p) ≥ 1 and p squarefree, so that A is a product of
    /// fields.
    pub fn new(p: UniPoly) -> Result<Self> {
        let Some(d) = p.degree() else {
            return Err(Error::InvalidInput("defining polynomial is zero".into()));
        };
        if d < 1 {
            return Err(Error::InvalidInput(
                "defining polynomial must have degree at least 1".into(),
            ));
        }
        let g = p.gcd(&p.derivative());
        if g.degree() != Some(0) {
            return Err(Error::NotSquarefree);
        }
        let field = p.field;
        Ok(QuotientAlgebra { p, field })
    }

    pub fn modulus_poly(&self) -> &UniPoly {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.degree().unwrap()
    }

    /// Wraps a representative, reducing it mod p.
    pub fn element(&self, rep: UniPoly) -> AlgElem {
        AlgElem {
            rep: rep.rem(&self.p).expect("nonzero modulus"),
            parent: self.clone(),
        }
    }

    pub fn from_scalar_elem(&self, s: Scalar) -> AlgElem {
        self.element(UniPoly::constant(self.field, s))
    }

    /// The class of Y.
    pub fn generator(&self) -> AlgElem {
        self.element(UniPoly::monomial(self.field, self.field.one(), 1))
    }
}

pub fn alg_add(a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    check_parents(a, b)?;
    Ok(AlgElem {
        rep: a.rep.add(&b.rep),
        parent: a.parent.clone(),
    })
}

pub fn alg_mul(a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
    check_parents(a, b)?;
    Ok(a.parent.element(a.rep.mul(&b.rep)))
}

fn check_parents(a: &AlgElem, b: &AlgElem) -> Result<()> {
    if a.parent != b.parent {
        return Err(Error::ParentMismatch);
    }
    Ok(())
}

/// Inverts a nonzero element, or exhibits the monic proper factor
/// gcd(rep, p) of the defining polynomial that obstructs inversion.
pub fn invert_or_split(a: &AlgElem) -> Result<InvertOutcome> {
    if a.rep.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let alg = &a.parent;
    let (g, s, _) = a.rep.extended_gcd(&alg.p)?;
    if g.degree() == Some(0) {
        // extended_gcd returns g monic, so s·rep ≡ 1 (mod p).
        Ok(InvertOutcome::Inverse(alg.element(s)))
    } else {
        Ok(InvertOutcome::Factor(g))
    }
}

/// Pushes an element into the smaller algebra K[Y]/(p̃) for p̃ | p.
pub fn project(a: &AlgElem, p_tilde: &UniPoly) -> Result<AlgElem> {
    let alg = &a.parent;
    if !alg.p.rem(p_tilde)?.is_zero() {
        return Err(Error::NotAFactor(p_tilde.clone()));
    }
    let target = QuotientAlgebra::new(p_tilde.clone())?;
    Ok(target.element(a.rep.rem(p_tilde)?))
}

/// Coefficients of the representative in the basis 1, y, …, y^{dim−1}.
pub fn component_decompose(a: &AlgElem) -> Vec<Scalar> {
    let n = a.parent.dim();
    (0..n).map(|k| a.rep.coeff(k)).collect()
}

impl AlgElem {
    pub fn rep(&self) -> &UniPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

/// The algebra as a coefficient ring: elements are reduced representatives.
/// A zero-divisor inverse surfaces the factor so series-level callers can
/// split without unwinding by hand.
impl Ring for QuotientAlgebra {
    type Elem = UniPoly;

    fn zero(&self) -> UniPoly {
        UniPoly::zero(self.field)
    }

    fn one(&self) -> UniPoly {
        UniPoly::one(self.field)
    }

    fn is_zero(&self, a: &UniPoly) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.add(b)
    }

    fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.sub(b)
    }

    fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.mul(b).rem(&self.p).expect("nonzero modulus")
    }

    fn neg(&self, a: &UniPoly) -> UniPoly {
        a.neg()
    }

    fn inv(&self, a: &UniPoly) -> Result<UniPoly> {
        match invert_or_split(&self.element(a.clone()))? {
            InvertOutcome::Inverse(x) => Ok(x.rep),
            InvertOutcome::Factor(factor) => Err(Error::ZeroDivisor { factor }),
        }
    }

    fn from_scalar(&self, s: &Scalar) -> UniPoly {
        UniPoly::constant(self.field, s.clone())
    }

    fn base_field(&self) -> FieldSpec {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn alg(field: FieldSpec, coeffs: &[i64]) -> QuotientAlgebra {
        QuotientAlgebra::new(UniPoly::from_i64_coeffs(field, coeffs)).unwrap()
    }

    #[test]
    fn defining_relation_and_zero_divisors() {
        let a = alg(q(), &[-1, 0, 1]); // Y^2 - 1
        let y = a.generator();
        assert_eq!(alg_mul(&y, &y).unwrap(), a.from_scalar_elem(q().one()));
        let one_plus_y = a.element(UniPoly::from_i64_coeffs(q(), &[1, 1]));
        let one_minus_y = a.element(UniPoly::from_i64_coeffs(q(), &[1, -1]));
        assert!(alg_mul(&one_plus_y, &one_minus_y).unwrap().is_zero());
    }

    #[test]
    fn modular_reduction_example() {
        let f = FieldSpec::prime(5).unwrap();
        let a = alg(f, &[1, 0, 1]); // Y^2 + 1 over F_5
        let u = a.element(UniPoly::from_i64_coeffs(f, &[2, 1]));
        let v = a.element(UniPoly::from_i64_coeffs(f, &[3, 1]));
        assert!(alg_mul(&u, &v).unwrap().is_zero());
    }

    #[test]
    fn invert_or_split_branches() {
        let a = alg(q(), &[-1, 0, 1]); // Y^2 - 1
        let y = a.generator();
        match invert_or_split(&y).unwrap() {
            InvertOutcome::Inverse(inv) => assert_eq!(inv, y),
            other => panic!("expected an inverse, got {other:?}"),
        }
        let one_plus_y = a.element(UniPoly::from_i64_coeffs(q(), &[1, 1]));
        match invert_or_split(&one_plus_y).unwrap() {
            InvertOutcome::Factor(f) => {
                assert_eq!(f, UniPoly::from_i64_coeffs(q(), &[1, 1]));
                assert!(a.modulus_poly().rem(&f).unwrap().is_zero());
            }
            other => panic!("expected a factor, got {other:?}"),
        }
        // y in Q[Y]/(Y^2 - 2) inverts to y/2.
        let a2 = alg(q(), &[-2, 0, 1]);
        match invert_or_split(&a2.generator()).unwrap() {
            InvertOutcome::Inverse(inv) => {
                let half = q().parse_scalar("1/2").unwrap();
                assert_eq!(
                    inv,
                    a2.element(UniPoly::new(q(), vec![q().zero(), half]))
                );
            }
            other => panic!("expected an inverse, got {other:?}"),
        }
    }

    #[test]
    fn invert_iff_coprime_on_random_elements() {
        let f = FieldSpec::prime(101).unwrap();
        let mut rng = crate::test_rng(31);
        for _ in 0..40 {
            let p = loop {
                let cand = UniPoly::random(f, 4, &mut rng);
                if cand.gcd(&cand.derivative()).degree() == Some(0) {
                    break cand;
                }
            };
            let a = QuotientAlgebra::new(p.clone()).unwrap();
            let x = a.element(UniPoly::random(f, 3, &mut rng));
            if x.is_zero() {
                continue;
            }
            let coprime = x.rep().gcd(&p).degree() == Some(0);
            match invert_or_split(&x).unwrap() {
                InvertOutcome::Inverse(inv) => {
                    assert!(coprime);
                    assert_eq!(alg_mul(&x, &inv).unwrap(), a.from_scalar_elem(f.one()));
                }
                InvertOutcome::Factor(g) => {
                    assert!(!coprime);
                    let d = g.degree().unwrap();
                    assert!(d >= 1 && d < a.dim());
                    assert!(p.rem(&g).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn projection_is_a_ring_map() {
        let f = FieldSpec::prime(101).unwrap();
        let a = alg(f, &[0, -1, 0, 1]); // Y^3 - Y = Y(Y-1)(Y+1)
        let y = a.generator();
        let y2 = alg_mul(&y, &y).unwrap();
        assert_eq!(component_decompose(&y2), vec![f.zero(), f.zero(), f.one()]);

        let p_tilde = UniPoly::from_i64_coeffs(f, &[-1, 1]); // Y - 1
        let proj = project(&y, &p_tilde).unwrap();
        assert_eq!(component_decompose(&proj), vec![f.one()]);

        let mut rng = crate::test_rng(32);
        for _ in 0..20 {
            let u = a.element(UniPoly::random(f, 2, &mut rng));
            let v = a.element(UniPoly::random(f, 2, &mut rng));
            let lhs = project(&alg_mul(&u, &v).unwrap(), &p_tilde).unwrap();
            let rhs = alg_mul(&project(&u, &p_tilde).unwrap(), &project(&v, &p_tilde).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        // Identity projection and non-factor rejection.
        assert_eq!(project(&y, a.modulus_poly()).unwrap(), y);
        assert!(project(&y, &UniPoly::from_i64_coeffs(f, &[1, 1, 1])).is_err());
    }

    #[test]
    fn rejects_non_squarefree_modulus() {
        let p = UniPoly::from_i64_coeffs(q(), &[1, 2, 1]); // (Y+1)^2
        assert!(matches!(QuotientAlgebra::new(p), Err(Error::NotSquarefree)));
    }
}
