//! Degree, order and precision bounds for every construction in the crate.
//!
//! Everything here is a pure integer formula, kept separate from the
//! algorithms that consume the numbers so the formulas can be audited on
//! their own.

use crate::error::{Error, Result};

/// The degree data of a bivariate polynomial: total degree `d`, partial
/// degrees `dx`/`dy`, and the defect `delta = dx + dy - d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeProfile {
    pub d: usize,
    pub dx: usize,
    pub dy: usize,
    pub delta: usize,
}

impl DegreeProfile {
    pub fn new(dx: usize, dy: usize, d: usize) -> Result<Self> {
        if dy < 1 {
            return Err(Error::OutOfRange("degree in Y must be at least 1".into()));
        }
        if d < dx.max(dy) || d > dx + dy {
            return Err(Error::OutOfRange(format!(
                "total degree {d} incompatible with partial degrees ({dx}, {dy})"
            )));
        }
        Ok(DegreeProfile { d, dx, dy, delta: dx + dy - d })
    }

    pub fn of(p: &crate::arith::BiPoly) -> Result<Self> {
        let dx = p.deg_x().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
        let dy = p.deg_y().unwrap();
        let d = p.total_degree().unwrap();
        DegreeProfile::new(dx, dy, d)
    }
}

/// Parameters for one Padé–Hermite run: degree bound in X, order bound in
/// the derivation, the truncation order `big_sigma` of the input series, and
/// the precision `small_sigma` at which a candidate operator is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundSet {
    pub b_x: usize,
    pub b_d: usize,
    pub big_sigma: usize,
    pub small_sigma: usize,
}

impl BoundSet {
    /// Assembles the truncation and certification orders for bounds
    /// (b_x, b_d) applied to a polynomial of bidegree (dx, dy).
    pub fn new(dx: usize, dy: usize, b_x: usize, b_d: usize) -> Self {
        BoundSet {
            b_x,
            b_d,
            big_sigma: b_x * b_d + b_x + b_d,
            small_sigma: 4 * dx * dy * b_d + b_x * dy - 2 * dx * b_d,
        }
    }
}

/// Degree bound in X for the minimal resolvent of order r:
/// ((2r−1)·D_Y + 2r² − 4r + 3)·D_X − r(r−1)/2.
pub fn eta(dx: usize, dy: usize, r: usize) -> Result<usize> {
    if r < 1 || r > dy {
        return Err(Error::OutOfRange(format!(
            "resolvent order {r} outside 1..={dy}"
        )));
    }
    Ok(((2 * r - 1) * dy + 2 * r * r + 3 - 4 * r) * dx - r * (r - 1) / 2)
}

/// Quadratic telescoping bounds: degree in X, order in the derivation, and
/// the order and coefficient degree of the induced recurrence.
pub fn thm2_bounds(dx: usize, dy: usize) -> (usize, usize, usize, usize) {
    (3 * dx * dy, 6 * dy, 3 * dy * (dx + 2), 6 * dy)
}

/// Refined bound for the θ_X-telescoper order/degree parameter d.
pub fn thm3_bound(profile: &DegreeProfile) -> usize {
    let (dx, dy, delta) = (profile.dx, profile.dy, profile.delta);
    2 * dx * dy + dy + 1 - delta * delta - delta
}

/// The three certified (B_X, B_∂) presets for Padé–Hermite construction.
pub fn thm4_presets(dx: usize, dy: usize) -> Result<[(usize, usize); 3]> {
    if dy < 2 {
        return Err(Error::DyTooSmall);
    }
    let b = 4 * dx * dy + dy - 2 * dx - 2;
    Ok([(4 * dx * dy * dy, dy), (5 * dx * dy, 5 * dy), (b, b)])
}

/// Number of monomials X^a·Y^b with a ≤ delta_x, b ≤ delta_y, a+b ≤ delta:
/// (δ_X+1)(δ_Y+1) − C(δ_X+δ_Y−δ+1, 2).
pub fn monomial_count(delta: usize, delta_x: usize, delta_y: usize) -> Result<usize> {
    if delta < delta_x.max(delta_y) || delta > delta_x + delta_y + 1 {
        return Err(Error::OutOfRange(format!(
            "total-degree cap {delta} incompatible with ({delta_x}, {delta_y})"
        )));
    }
    let m = delta_x + delta_y + 1 - delta;
    let corner = if m == 0 { 0 } else { m * (m - 1) / 2 };
    Ok((delta_x + 1) * (delta_y + 1) - corner)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_reference_values() {
        assert_eq!(eta(1, 1, 1).unwrap(), 2);
        assert_eq!(eta(2, 2, 2).unwrap(), 17);
        assert_eq!(eta(3, 3, 3).unwrap(), 69);
        assert!(eta(2, 2, 3).is_err());
        assert!(eta(2, 2, 0).is_err());
    }

    #[test]
    fn quadratic_bounds() {
        assert_eq!(thm2_bounds(1, 2), (6, 12, 18, 12));
        assert_eq!(thm2_bounds(2, 2), (12, 12, 24, 12));
        assert_eq!(thm2_bounds(0, 1), (0, 6, 6, 6));
    }

    #[test]
    fn refined_bound() {
        let p = DegreeProfile::new(2, 2, 4).unwrap();
        assert_eq!(p.delta, 0);
        assert_eq!(thm3_bound(&p), 11);
        let p = DegreeProfile::new(2, 2, 3).unwrap();
        assert_eq!(thm3_bound(&p), 9);
        let p = DegreeProfile::new(1, 1, 1).unwrap();
        assert_eq!(thm3_bound(&p), 2);
    }

    #[test]
    fn preset_tables() {
        assert_eq!(thm4_presets(1, 2).unwrap(), [(16, 2), (10, 10), (6, 6)]);
        assert_eq!(thm4_presets(2, 2).unwrap(), [(32, 2), (20, 10), (12, 12)]);
        assert_eq!(thm4_presets(1, 3).unwrap(), [(36, 3), (15, 15), (11, 11)]);
        assert!(thm4_presets(3, 1).is_err());
    }

    #[test]
    fn monomial_count_examples_and_enumeration() {
        assert_eq!(monomial_count(2, 2, 2).unwrap(), 6);
        assert_eq!(monomial_count(4, 2, 2).unwrap(), 9);
        assert_eq!(monomial_count(1, 1, 1).unwrap(), 3);
        for dx in 0..=8usize {
            for dy in 0..=8usize {
                for d in dx.max(dy)..=dx + dy + 1 {
                    let brute = (0..=dx)
                        .flat_map(|a| (0..=dy).map(move |b| (a, b)))
                        .filter(|&(a, b)| a + b <= d)
                        .count();
                    assert_eq!(monomial_count(d, dx, dy).unwrap(), brute, "({d},{dx},{dy})");
                }
            }
        }
        assert!(monomial_count(1, 2, 2).is_err());
    }

    #[test]
    fn quadratic_system_stays_underdetermined() {
        // Unknown count minus equation count for the telescoping system at
        // the quadratic bounds, which must stay positive.
        for dx in 1..=10usize {
            for dy in 1..=10usize {
                let (nx, nd, _, _) = thm2_bounds(dx, dy);
                let r = (nx + 1) * (nd + 2) * (nd + 1) / 2;
                let s = (dy * (nd + 1) + 1) * (nx + 1 + dx * (nd + 1));
                let predicted =
                    (12 * dy * dy - 7 * dy - 1) * dx + 12 * dy * dy + 8 * dy;
                assert_eq!(r - s, predicted, "({dx},{dy})");
                assert!(r > s);
            }
        }
    }

    #[test]
    fn presets_certify_within_truncation() {
        for dx in 1..=10usize {
            for dy in 2..=10usize {
                for (bx, bd) in thm4_presets(dx, dy).unwrap() {
                    let b = BoundSet::new(dx, dy, bx, bd);
                    assert!(
                        b.big_sigma >= b.small_sigma,
                        "({dx},{dy}) preset ({bx},{bd}): {} < {}",
                        b.big_sigma,
                        b.small_sigma
                    );
                }
            }
        }
    }
}
