//! Padé reconstruction and Padé–Hermite approximation.
//!
//! `pade` recovers a rational function from its series by the extended
//! Euclidean algorithm. `ph_approx` finds a nonzero ℓ with Σ ℓ_i·Z_i ≡ 0
//! mod X^Σ; the system has Σ equations in (B_X+1)(B_∂+1) = Σ+1 unknowns, so
//! a solution always exists. Over the quotient algebra, division by a zero
//! divisor triggers a split: the inputs are projected modulo the cofactor
//! and the solve restarts in the smaller algebra.

use crate::algebra::QuotientAlgebra;
use crate::arith::{FieldSpec, KSeries, Ring, Scalar, TruncSeries, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::{nullspace_vector, FpMat};

/// A Padé–Hermite approximant. The ℓ_i are polynomials in X with
/// coefficients in K[Y]/(algebra_factor) — plain base-field coefficients
/// (and no factor) when the solve ran over K itself.
#[derive(Debug, Clone)]
pub struct PHSolution {
    /// ℓ_i, stored as X-coefficient lists of Y-polynomials (constants over
    /// a plain field).
    pub ells: Vec<Vec<UniPoly>>,
    /// Defining polynomial of the algebra the solution is valid over;
    /// `None` when the solve ran over the base field.
    pub algebra_factor: Option<UniPoly>,
}

impl PHSolution {
    /// The ℓ_i as base-field polynomials; panics if any coefficient
    /// genuinely involves y.
    pub fn scalar_ells(&self, field: FieldSpec) -> Vec<UniPoly> {
        self.ells
            .iter()
            .map(|cs| {
                UniPoly::new(
                    field,
                    cs.iter()
                        .map(|c| {
                            assert!(
                                c.degree().map_or(true, |d| d == 0),
                                "coefficient involves the algebra generator"
                            );
                            c.coeff(0)
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Rational reconstruction: num/den with deg num ≤ d_num, deg den ≤ d_den
/// and den·f ≡ num mod X^{d_num+d_den+1}, by the extended Euclidean
/// algorithm on (X^{d_num+d_den+1}, f). Normalized to den(0) = 1 when
/// possible, else den monic.
pub fn pade(f: &KSeries, d_num: usize, d_den: usize) -> Result<(UniPoly, UniPoly)> {
    // The Euclidean remainders blow up over Q on large inputs; go through
    // modular images there and certify the combined result exactly.
    if *f.ring() == FieldSpec::Rational && d_num + d_den + 1 > 32 {
        return pade_rational(f, d_num, d_den);
    }
    pade_eea(f, d_num, d_den)
}

fn pade_eea(f: &KSeries, d_num: usize, d_den: usize) -> Result<(UniPoly, UniPoly)> {
    let field = *f.ring();
    let n = d_num + d_den + 1;
    if f.precision() < n {
        return Err(Error::ReconstructionFailed(format!(
            "need {n} known coefficients, have {}",
            f.precision()
        )));
    }
    let xn = UniPoly::monomial(field, field.one(), n);
    let fpoly = UniPoly::new(field, f.coeffs()[..n].to_vec());
    // Invariant: r = s·X^n + t·f; stop at the first remainder small enough.
    let (mut r0, mut r1) = (xn, fpoly);
    let (mut t0, mut t1) = (UniPoly::zero(field), UniPoly::one(field));
    loop {
        if r1.degree().map_or(true, |d| d <= d_num) {
            break;
        }
        let (q, r) = r0.div_rem(&r1)?;
        let t = t0.sub(&q.mul(&t1));
        (r0, r1) = (r1, r);
        (t0, t1) = (t1, t);
    }
    let (num, den) = (r1, t1);
    if den.is_zero() || den.degree().unwrap_or(0) > d_den {
        return Err(Error::ReconstructionFailed(format!(
            "no denominator of degree at most {d_den} matches"
        )));
    }
    let c0 = den.coeff(0);
    if !field.is_zero(&c0) {
        let inv = field.inv(&c0)?;
        Ok((num.scale(&inv), den.scale(&inv)))
    } else {
        let inv = field.inv(den.leading_coeff().unwrap())?;
        Ok((num.scale(&inv), den.scale(&inv)))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Residue of a rational scalar mod p; `None` when p divides the
/// denominator.
fn scalar_mod_p(s: &Scalar, p: u64) -> Option<u64> {
    let Scalar::Rat(q) = s else { unreachable!("rational scalar expected") };
    let pb = num::BigInt::from(p);
    let to_res = |x: &num::BigInt| -> u64 {
        use num::ToPrimitive;
        (((x % &pb) + &pb) % &pb).to_u64().unwrap()
    };
    let den = to_res(q.denom());
    if den == 0 {
        return None;
    }
    let num = to_res(q.numer());
    let inv = crate::arith::field::mod_inv(den, p)?;
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

/// a/b from a residue r mod m with |a|, b ≤ sqrt(m/2), by the half-extended
/// Euclidean algorithm; the caller certifies the combined result.
fn rational_reconstruct(r: &num::BigInt, m: &num::BigInt) -> Option<num::BigRational> {
    use num::{BigInt, Signed, Zero};
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), ((r % m) + m) % m);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), r0 - &q * &r1);
        (t0, t1) = (t1.clone(), t0 - &q * &t1);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    Some(num::BigRational::new(r1, t1))
}

/// Padé over Q by word-size modular images: run the Euclidean solver mod
/// several primes, combine by CRT and rational reconstruction, and accept
/// only once the defining congruence holds exactly.
fn pade_rational(f: &KSeries, d_num: usize, d_den: usize) -> Result<(UniPoly, UniPoly)> {
    use num::{BigInt, Zero};
    let field = *f.ring();
    let n = d_num + d_den + 1;
    if f.precision() < n {
        return Err(Error::ReconstructionFailed(format!(
            "need {n} known coefficients, have {}",
            f.precision()
        )));
    }
    let coeffs = &f.coeffs()[..n];

    // Residues grouped by the shape of the modular result; unlucky primes
    // land in minority groups and are ignored.
    type Shape = (usize, usize, bool);
    let mut groups: std::collections::BTreeMap<Shape, Vec<(u64, Vec<u64>, Vec<u64>)>> =
        std::collections::BTreeMap::new();
    let mut failures = 0usize;

    let mut p = (1u64 << 31) + 1;
    let mut used = 0usize;
    while used < 512 {
        p -= 2;
        if !is_prime(p) {
            continue;
        }
        let fp = FieldSpec::prime(p)?;
        let img: Option<Vec<Scalar>> = coeffs
            .iter()
            .map(|c| scalar_mod_p(c, p).map(Scalar::Mod))
            .collect();
        let Some(img) = img else { continue };
        used += 1;
        match pade_eea(&TruncSeries::new(fp, img), d_num, d_den) {
            Ok((np, dp)) => {
                let shape = (
                    np.degree().map_or(usize::MAX, |d| d),
                    dp.degree().unwrap(),
                    !fp.is_zero(&dp.coeff(0)),
                );
                let grab = |u: &UniPoly, len: usize| -> Vec<u64> {
                    (0..len)
                        .map(|k| match u.coeff(k) {
                            Scalar::Mod(v) => v,
                            _ => unreachable!(),
                        })
                        .collect()
                };
                groups.entry(shape).or_default().push((
                    p,
                    grab(&np, d_num + 1),
                    grab(&dp, d_den + 1),
                ));
            }
            Err(_) => {
                failures += 1;
                // A consistent failure is a genuine "no approximant".
                if failures >= 8 && groups.values().all(|g| g.len() < failures) {
                    return Err(Error::ReconstructionFailed(format!(
                        "no denominator of degree at most {d_den} matches"
                    )));
                }
                continue;
            }
        }

        let best = groups.values().max_by_key(|g| g.len()).unwrap();
        // Try to combine once a group has enough images; retry on the next
        // power-of-two count until the certified result appears.
        if best.len() < 8 || !best.len().is_power_of_two() {
            continue;
        }
        let mut modulus = BigInt::from(1);
        let mut num_res = vec![BigInt::zero(); d_num + 1];
        let mut den_res = vec![BigInt::zero(); d_den + 1];
        for (q, np, dp) in best {
            let qb = BigInt::from(*q);
            // Garner step: lift every residue from `modulus` to `modulus·q`.
            let m_inv = {
                use num::ToPrimitive;
                let m_mod_q = (((&modulus % &qb) + &qb) % &qb).to_u64().unwrap();
                crate::arith::field::mod_inv(m_mod_q, *q).expect("coprime moduli")
            };
            let lift = |res: &mut [BigInt], vals: &[u64]| {
                use num::ToPrimitive;
                for (r, &v) in res.iter_mut().zip(vals) {
                    let r_mod_q = (((&*r % &qb) + &qb) % &qb).to_u64().unwrap();
                    let delta = ((*q + v - r_mod_q) % *q) as u128 * m_inv as u128 % *q as u128;
                    *r += &modulus * BigInt::from(delta as u64);
                }
            };
            lift(&mut num_res, np);
            lift(&mut den_res, dp);
            modulus *= qb;
        }
        let recover = |res: &[BigInt]| -> Option<Vec<Scalar>> {
            res.iter()
                .map(|r| {
                    rational_reconstruct(r, &modulus)
                        .map(|q| Scalar::Rat(Box::new(q)))
                })
                .collect()
        };
        let (Some(nc), Some(dc)) = (recover(&num_res), recover(&den_res)) else {
            continue;
        };
        let (num, den) = (UniPoly::new(field, nc), UniPoly::new(field, dc));
        if den.is_zero() {
            continue;
        }
        // Exact certificate: den·f ≡ num mod X^n.
        let prod = TruncSeries::from_unipoly(field, &num, n)
            .sub(&f.truncate(n).mul_poly(&den));
        if prod.is_zero() {
            return Ok((num, den));
        }
    }
    Err(Error::ReconstructionFailed(
        "modular images never stabilized".into(),
    ))
}

/// Truncation order for a (B_X, B_∂) Padé–Hermite problem.
fn big_sigma(b_x: usize, b_d: usize) -> usize {
    b_x * b_d + b_x + b_d
}

/// Nonzero (ℓ_0..ℓ_{B_∂}) over K with Σ ℓ_i Z_i ≡ 0 mod X^Σ, deg ℓ_i ≤ B_X.
/// Deterministic: plain elimination with first-nonzero pivoting.
pub fn ph_approx(z: &[KSeries], b_x: usize) -> Result<PHSolution> {
    assert!(!z.is_empty());
    let field = *z[0].ring();
    let b_d = z.len() - 1;
    let sigma = big_sigma(b_x, b_d);
    for s in z {
        if s.precision() < sigma {
            return Err(Error::InvalidInput(format!(
                "series precision {} below the truncation order {sigma}",
                s.precision()
            )));
        }
    }
    let cols = (b_x + 1) * z.len();
    let flat = if let Some(p) = field.modulus() {
        // Fast path: the big systems all live over F_p.
        let mut m = FpMat::zero(p, sigma, cols);
        for (i, zi) in z.iter().enumerate() {
            for k in 0..=b_x {
                let col = i * (b_x + 1) + k;
                for c in k..sigma {
                    m.set(c, col, zi.coeff(c - k).as_u64());
                }
            }
        }
        let v = m.nullspace_vector(&[]).ok_or(Error::EmptyKernel)?;
        v.into_iter().map(crate::arith::Scalar::Mod).collect()
    } else {
        let mut m: Vec<Vec<crate::arith::Scalar>> = (0..sigma)
            .map(|c| {
                let mut row = vec![field.zero(); cols];
                for (i, zi) in z.iter().enumerate() {
                    for k in 0..=b_x.min(c) {
                        row[i * (b_x + 1) + k] = zi.coeff(c - k).clone();
                    }
                }
                row
            })
            .collect();
        nullspace_vector(&field, &mut m, &[])?.ok_or(Error::EmptyKernel)?
    };
    let ells = flat
        .chunks(b_x + 1)
        .map(|cs| cs.iter().map(|c| UniPoly::constant(field, c.clone())).collect())
        .collect();
    Ok(PHSolution { ells, algebra_factor: None })
}

/// Padé–Hermite over A = K[Y]/(p). Division by a zero divisor projects all
/// inputs modulo the cofactor of the obstructing factor and restarts; at
/// most deg(p) restarts happen because the algebra shrinks each time.
pub fn ph_approx_algebra(
    z: &[TruncSeries<QuotientAlgebra>],
    b_x: usize,
) -> Result<PHSolution> {
    assert!(!z.is_empty());
    let b_d = z.len() - 1;
    let sigma = big_sigma(b_x, b_d);
    for s in z {
        if s.precision() < sigma {
            return Err(Error::InvalidInput(format!(
                "series precision {} below the truncation order {sigma}",
                s.precision()
            )));
        }
    }
    let mut alg = z[0].ring().clone();
    let mut z: Vec<TruncSeries<QuotientAlgebra>> = z.to_vec();
    loop {
        let cols = (b_x + 1) * z.len();
        let mut m: Vec<Vec<UniPoly>> = (0..sigma)
            .map(|c| {
                let mut row = vec![alg.zero(); cols];
                for (i, zi) in z.iter().enumerate() {
                    for k in 0..=b_x.min(c) {
                        row[i * (b_x + 1) + k] = zi.coeff(c - k).clone();
                    }
                }
                row
            })
            .collect();
        match nullspace_vector(&alg, &mut m, &[]) {
            Ok(Some(flat)) => {
                let ells = flat
                    .chunks(b_x + 1)
                    .map(<[UniPoly]>::to_vec)
                    .collect();
                return Ok(PHSolution {
                    ells,
                    algebra_factor: Some(alg.modulus_poly().clone()),
                });
            }
            Ok(None) => return Err(Error::EmptyKernel),
            Err(Error::ZeroDivisor { factor }) => {
                // The pivot is divisible by `factor`, hence zero modulo it;
                // continue modulo the cofactor, where the pivot survives.
                let cofactor = alg.modulus_poly().exact_div(&factor)?;
                alg = QuotientAlgebra::new(cofactor)?;
                z = z
                    .iter()
                    .map(|s| -> Result<_> {
                        let coeffs = s
                            .coeffs()
                            .iter()
                            .map(|c| c.rem(alg.modulus_poly()))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(TruncSeries::new(alg.clone(), coeffs))
                    })
                    .collect::<Result<Vec<_>>>()?;
            }
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::text::parse_bipoly;
    use crate::arith::{Scalar, VarForm};
    use rand::RngExt;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    fn verify_congruence_field(z: &[KSeries], sol: &PHSolution, sigma: usize) {
        let field = *z[0].ring();
        let ells = sol.scalar_ells(field);
        assert!(ells.iter().any(|l| !l.is_zero()));
        let mut acc = TruncSeries::zero(field, sigma);
        for (l, zi) in ells.iter().zip(z) {
            acc = acc.add(&zi.truncate(sigma).mul_poly(l));
        }
        assert!(acc.is_zero(), "congruence violated");
    }

    #[test]
    fn pade_examples() {
        let f = q();
        let geo = KSeries::from_rational_function(
            f,
            &UniPoly::one(f),
            &UniPoly::from_i64_coeffs(f, &[1, -1]),
            5,
        )
        .unwrap();
        let (num, den) = pade(&geo, 0, 1).unwrap();
        assert_eq!(num, UniPoly::one(f));
        assert_eq!(den, UniPoly::from_i64_coeffs(f, &[1, -1]));

        let poly = KSeries::from_unipoly(f, &UniPoly::from_i64_coeffs(f, &[1, 1]), 5);
        let (num, den) = pade(&poly, 1, 0).unwrap();
        assert_eq!(num, UniPoly::from_i64_coeffs(f, &[1, 1]));
        assert_eq!(den, UniPoly::one(f));

        // 1/(2(1+X)): den(0)-normalization gives (1/2, 1+X).
        let h = KSeries::from_rational_function(
            f,
            &UniPoly::one(f),
            &UniPoly::from_i64_coeffs(f, &[2, 2]),
            5,
        )
        .unwrap();
        let (num, den) = pade(&h, 0, 1).unwrap();
        assert_eq!(num, UniPoly::constant(f, f.parse_scalar("1/2").unwrap()));
        assert_eq!(den, UniPoly::from_i64_coeffs(f, &[1, 1]));
    }

    #[test]
    fn pade_round_trips_random_rational_functions() {
        let f = FieldSpec::prime(9973).unwrap();
        let mut rng = crate::test_rng(61);
        for _ in 0..25 {
            let dn = rng.random_range(0..5usize);
            let dd = rng.random_range(0..5usize);
            let num = UniPoly::random(f, dn, &mut rng);
            let den = loop {
                let d = UniPoly::random(f, dd, &mut rng);
                if !f.is_zero(&d.coeff(0)) {
                    break d;
                }
            };
            let series = KSeries::from_rational_function(f, &num, &den, dn + dd + 1).unwrap();
            let (rn, rd) = pade(&series, dn, dd).unwrap();
            // Equality up to the den(0)=1 normalization.
            let c = f.inv(&den.coeff(0)).unwrap();
            assert_eq!(rn, num.scale(&c));
            assert_eq!(rd, den.scale(&c));
        }
    }

    #[test]
    fn ph_finds_the_resolvent_relation() {
        let f = q();
        let p = parse_bipoly(f, "Y^2 - (1 + X)").unwrap();
        let root = crate::lift::lift_scalar_root(&p, &f.one(), 8).unwrap();
        let z = vec![root.series.truncate(4).clone(), root.series.derive(VarForm::Dx).unwrap().truncate(4)];
        let sol = ph_approx(&z, 1).unwrap();
        verify_congruence_field(&z, &sol, 3);
        // Proportional to (-1, 2(1+X)): (2+2X)·ℓ_0 = -ℓ_1.
        let ells = sol.scalar_ells(f);
        assert_eq!(ells[0].mul(&UniPoly::from_i64_coeffs(f, &[2, 2])), ells[1].neg());
    }

    #[test]
    fn ph_trivial_syzygies() {
        let f = q();
        let s = KSeries::from_unipoly(f, &UniPoly::from_i64_coeffs(f, &[1, 3, 2]), 6);
        let z = vec![s.clone(), s.clone()];
        let sol = ph_approx(&z, 1).unwrap();
        verify_congruence_field(&z, &sol, 3);

        let one = KSeries::from_unipoly(f, &UniPoly::one(f), 6);
        let x = KSeries::from_unipoly(f, &UniPoly::from_i64_coeffs(f, &[0, 1]), 6);
        let z = vec![one, x];
        let sol = ph_approx(&z, 1).unwrap();
        verify_congruence_field(&z, &sol, 3);
    }

    #[test]
    fn ph_algebra_without_split() {
        let f = q();
        let p = parse_bipoly(f, "Y^2 - (1 + X)").unwrap();
        let root = crate::lift::newton_lift(&p, 8).unwrap();
        let z = vec![
            root.series.truncate(4).clone(),
            root.series.derive(VarForm::Dx).unwrap().truncate(4),
        ];
        let sol = ph_approx_algebra(&z, 1).unwrap();
        assert_eq!(
            sol.algebra_factor.as_ref().unwrap(),
            &UniPoly::from_i64_coeffs(f, &[-1, 0, 1])
        );
        // Verify the congruence over A by direct multiplication.
        let alg = z[0].ring().clone();
        let mut acc = TruncSeries::zero(alg.clone(), 3);
        for (l, zi) in sol.ells.iter().zip(&z) {
            for (k, c) in l.iter().enumerate() {
                let term = zi.truncate(3).shift_up(k).scale_elem(c);
                acc = acc.add(&term);
            }
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn ph_algebra_splits_on_planted_zero_divisor() {
        let f = q();
        let alg = QuotientAlgebra::new(UniPoly::from_i64_coeffs(f, &[-1, 0, 1])).unwrap();
        // Z_0 has the non-invertible 1 + y in the pivot position.
        let one_plus_y = UniPoly::from_i64_coeffs(f, &[1, 1]);
        let z0 = TruncSeries::new(alg.clone(), vec![one_plus_y, alg.zero(), alg.zero()]);
        let z1 = TruncSeries::new(
            alg.clone(),
            vec![alg.from_scalar(&f.from_i64(3)), alg.zero(), alg.zero()],
        );
        let sol = ph_approx_algebra(&[z0, z1], 0).unwrap();
        // Split happened: factor gcd(1+y, Y^2-1) = Y+1 was removed.
        assert_eq!(
            sol.algebra_factor.as_ref().unwrap(),
            &UniPoly::from_i64_coeffs(f, &[-1, 1])
        );
        // Over Q[Y]/(Y-1): Z_0 = 2, Z_1 = 3, so 3·ℓ_0 + 2·ℓ_1 ≡ 0 ... the
        // kernel vector satisfies 2ℓ_0 + 3ℓ_1 = 0.
        let l0 = &sol.ells[0][0];
        let l1 = &sol.ells[1][0];
        assert!(!l0.is_zero() || !l1.is_zero());
        assert!(l0.scale(&f.from_i64(2)).add(&l1.scale(&f.from_i64(3))).is_zero());
    }

    #[test]
    fn ph_algebra_dimension_one_matches_field() {
        let f = FieldSpec::prime(101).unwrap();
        let alg = QuotientAlgebra::new(UniPoly::from_i64_coeffs(f, &[5, 1])).unwrap();
        let mut rng = crate::test_rng(62);
        let coeffs: Vec<Scalar> = (0..7).map(|_| f.random(&mut rng)).collect();
        let za = TruncSeries::new(
            alg.clone(),
            coeffs.iter().map(|c| alg.from_scalar(c)).collect::<Vec<_>>(),
        );
        let zb = za.derive(VarForm::Theta).unwrap();
        let sol = ph_approx_algebra(&[za, zb], 1).unwrap();
        assert_eq!(sol.ells.len(), 2);
        for l in &sol.ells {
            for c in l {
                assert!(c.degree().map_or(true, |d| d == 0));
            }
        }
    }
}
