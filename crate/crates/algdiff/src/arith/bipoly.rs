//! Dense bivariate polynomials over an exact field.
//!
//! `coeffs[i][j]` is the coefficient of X^i·Y^j. The matrix is rectangular
//! and canonical: the last row and the last column each contain a nonzero
//! entry, so the bidegree is `(rows-1, cols-1)`. The zero polynomial is the
//! empty matrix.

use crate::arith::field::{FieldSpec, Scalar};
use crate::arith::unipoly::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<Vec<Scalar>>,
    pub field: FieldSpec,
}

impl BiPoly {
    /// Builds from (possibly ragged, possibly padded) rows of Y-coefficients.
    pub fn new(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let mut p = BiPoly { coeffs: rows, field };
        p.normalize();
        p
    }

    pub fn zero(field: FieldSpec) -> Self {
        BiPoly { coeffs: Vec::new(), field }
    }

    pub fn constant(field: FieldSpec, c: Scalar) -> Self {
        BiPoly::new(field, vec![vec![c]])
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        BiPoly::new(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&c| field.from_i64(c)).collect())
                .collect(),
        )
    }

    /// c·X^i·Y^j.
    pub fn monomial(field: FieldSpec, c: Scalar, i: usize, j: usize) -> Self {
        if field.is_zero(&c) {
            return BiPoly::zero(field);
        }
        let mut rows = vec![vec![field.zero(); j + 1]; i + 1];
        rows[i][j] = c;
        BiPoly { coeffs: rows, field }
    }

    /// Embeds p(X) (Y-free).
    pub fn from_unipoly_x(p: &UniPoly) -> Self {
        BiPoly::new(p.field, p.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// Embeds p(Y) (X-free).
    pub fn from_unipoly_y(p: &UniPoly) -> Self {
        BiPoly::new(p.field, vec![p.coeffs().to_vec()])
    }

    fn normalize(&mut self) {
        let width = self.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut self.coeffs {
            row.resize(width, self.field.zero());
        }
        while let Some(last) = self.coeffs.last() {
            if last.iter().all(|c| self.field.is_zero(c)) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        let mut keep = 0;
        for row in &self.coeffs {
            for (j, c) in row.iter().enumerate() {
                if !self.field.is_zero(c) {
                    keep = keep.max(j + 1);
                }
            }
        }
        for row in &mut self.coeffs {
            row.truncate(keep);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in X; `None` for the zero polynomial.
    pub fn deg_x(&self) -> Option<usize> {
        if self.is_zero() { None } else { Some(self.coeffs.len() - 1) }
    }

    /// Degree in Y; `None` for the zero polynomial.
    pub fn deg_y(&self) -> Option<usize> {
        if self.is_zero() { None } else { Some(self.coeffs[0].len() - 1) }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        let mut best = None;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !self.field.is_zero(c) {
                    best = Some(best.map_or(i + j, |b: usize| b.max(i + j)));
                }
            }
        }
        best
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.coeffs
    }

    /// The coefficient of Y^j as a polynomial in X.
    pub fn coeff_of_y(&self, j: usize) -> UniPoly {
        UniPoly::new(
            self.field,
            self.coeffs
                .iter()
                .map(|row| row.get(j).cloned().unwrap_or_else(|| self.field.zero()))
                .collect(),
        )
    }

    /// All Y-coefficients p_0(X), …, p_{D_Y}(X).
    pub fn y_coefficients(&self) -> Vec<UniPoly> {
        (0..=self.deg_y().map_or(0, |d| d))
            .map(|j| self.coeff_of_y(j))
            .collect()
    }

    /// The leading coefficient in Y, p_{D_Y}(X).
    pub fn leading_coeff_y(&self) -> UniPoly {
        match self.deg_y() {
            Some(d) => self.coeff_of_y(d),
            None => UniPoly::zero(self.field),
        }
    }

    /// The coefficient of X^i as a polynomial in Y.
    pub fn coeff_of_x(&self, i: usize) -> UniPoly {
        UniPoly::new(
            self.field,
            self.coeffs.get(i).cloned().unwrap_or_default(),
        )
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_field(other).expect("mixed fields");
        let rows = self.coeffs.len().max(other.coeffs.len());
        let out = (0..rows)
            .map(|i| {
                let cols = self
                    .coeffs
                    .get(i)
                    .map_or(0, Vec::len)
                    .max(other.coeffs.get(i).map_or(0, Vec::len));
                (0..cols)
                    .map(|j| self.field.add(&self.coeff(i, j), &other.coeff(i, j)))
                    .collect()
            })
            .collect();
        BiPoly::new(self.field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|c| self.field.neg(c)).collect())
                .collect(),
            field: self.field,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other).expect("mixed fields");
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero(self.field);
        }
        let (ra, ca) = (self.coeffs.len(), self.coeffs[0].len());
        let (rb, cb) = (other.coeffs.len(), other.coeffs[0].len());
        let mut out = vec![vec![self.field.zero(); ca + cb - 1]; ra + rb - 1];
        for i in 0..ra {
            for j in 0..ca {
                let c = &self.coeffs[i][j];
                if self.field.is_zero(c) {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        let d = &other.coeffs[k][l];
                        if self.field.is_zero(d) {
                            continue;
                        }
                        let t = self.field.mul(c, d);
                        out[i + k][j + l] = self.field.add(&out[i + k][j + l], &t);
                    }
                }
            }
        }
        BiPoly::new(self.field, out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        BiPoly::new(
            self.field,
            self.coeffs
                .iter()
                .map(|row| row.iter().map(|c| self.field.mul(c, s)).collect())
                .collect(),
        )
    }

    /// Multiplication by a polynomial in X alone.
    pub fn mul_poly_x(&self, p: &UniPoly) -> Self {
        self.mul(&BiPoly::from_unipoly_x(p))
    }

    pub fn derive_x(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return BiPoly::zero(self.field);
        }
        BiPoly::new(
            self.field,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let n = self.field.from_i64((i + 1) as i64);
                    row.iter().map(|c| self.field.mul(c, &n)).collect()
                })
                .collect(),
        )
    }

    pub fn derive_y(&self) -> Self {
        BiPoly::new(
            self.field,
            self.coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| self.field.mul(c, &self.field.from_i64(j as i64)))
                        .collect()
                })
                .collect(),
        )
    }

    /// P(X+a, Y), by Horner in X over K[Y] rows.
    pub fn shift_x(&self, a: &Scalar) -> Self {
        if self.is_zero() || self.field.is_zero(a) {
            return self.clone();
        }
        let width = self.coeffs[0].len();
        // acc <- acc·(X+a) + row_i, from the top row down.
        let mut acc: Vec<Vec<Scalar>> = Vec::new();
        for row in self.coeffs.iter().rev() {
            let mut next = vec![vec![self.field.zero(); width]; acc.len() + 1];
            for (i, r) in acc.iter().enumerate() {
                for (j, c) in r.iter().enumerate() {
                    next[i + 1][j] = c.clone();
                    let t = self.field.mul(c, a);
                    next[i][j] = self.field.add(&next[i][j], &t);
                }
            }
            for (j, c) in row.iter().enumerate() {
                next[0][j] = self.field.add(&next[0][j], c);
            }
            acc = next;
        }
        BiPoly::new(self.field, acc)
    }

    /// P(a, Y) as a polynomial in Y.
    pub fn eval_x(&self, a: &Scalar) -> UniPoly {
        let width = self.coeffs.first().map_or(0, Vec::len);
        let mut acc = vec![self.field.zero(); width];
        for row in self.coeffs.iter().rev() {
            for (j, c) in acc.iter_mut().enumerate() {
                *c = self.field.add(&self.field.mul(c, a), &row[j]);
            }
        }
        UniPoly::new(self.field, acc)
    }

    /// P(X, b) as a polynomial in X.
    pub fn eval_y(&self, b: &Scalar) -> UniPoly {
        UniPoly::new(
            self.field,
            self.coeffs
                .iter()
                .map(|row| {
                    let mut acc = self.field.zero();
                    for c in row.iter().rev() {
                        acc = self.field.add(&self.field.mul(&acc, b), c);
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn eval_xy(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.eval_x(a).eval(b)
    }

    /// Dense random polynomial of exact bidegree (dx, dy).
    pub fn random<R: rand::Rng>(field: FieldSpec, dx: usize, dy: usize, rng: &mut R) -> Self {
        loop {
            let rows: Vec<Vec<Scalar>> = (0..=dx)
                .map(|_| (0..=dy).map(|_| field.random(rng)).collect())
                .collect();
            let p = BiPoly::new(field, rows);
            if p.deg_x() == Some(dx) && p.deg_y() == Some(dy) {
                return p;
            }
        }
    }

    /// Random dense polynomial of exact bidegree that is separable in Y.
    pub fn random_separable<R: rand::Rng>(
        field: FieldSpec,
        dx: usize,
        dy: usize,
        rng: &mut R,
    ) -> Self {
        assert!(dy >= 1, "separability needs deg_Y >= 1");
        loop {
            let p = BiPoly::random(field, dx, dy, rng);
            if let Ok(d) = discriminant_y(&p) {
                if !d.is_zero() {
                    return p;
                }
            }
        }
    }

    pub fn format_with_vars(&self, x: &str, y: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if self.field.is_zero(c) {
                    continue;
                }
                let cs = self.field.format_scalar(c);
                let mut factors = Vec::new();
                if !(cs == "1" && (i > 0 || j > 0)) {
                    factors.push(cs);
                }
                if i == 1 {
                    factors.push(x.to_string());
                } else if i > 1 {
                    factors.push(format!("{x}^{i}"));
                }
                if j == 1 {
                    factors.push(y.to_string());
                } else if j > 1 {
                    factors.push(format!("{y}^{j}"));
                }
                parts.push(factors.join("*"));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl std::fmt::Display for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.format_with_vars("X", "Y"))
    }
}

/// Res_Y(a, b) with the Sylvester determinant sign convention, by
/// evaluation at deg-bound+1 points and Lagrange interpolation. Evaluation
/// commutes with the determinant, so vanishing leading coefficients at a
/// sample point cause no degree trouble.
pub fn resultant_y(a: &BiPoly, b: &BiPoly) -> Result<UniPoly> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let field = a.field;
    if a.is_zero() || b.is_zero() {
        return Ok(UniPoly::zero(field));
    }
    let m = a.deg_y().unwrap();
    let n = b.deg_y().unwrap();
    if m == 0 && n == 0 {
        return Err(Error::ConstantInY);
    }
    // deg_X Res <= n·deg_X(a) + m·deg_X(b).
    let bound = n * a.deg_x().unwrap() + m * b.deg_x().unwrap();
    if let Some(p) = field.modulus() {
        if (bound as u64) >= p {
            return Err(Error::FieldTooSmall(format!(
                "interpolate a resultant of degree {bound}"
            )));
        }
    }
    let mut points = Vec::with_capacity(bound + 1);
    for t in 0..=bound as i64 {
        let x = field.from_i64(t);
        let av = a.eval_x(&x);
        let bv = b.eval_x(&x);
        points.push((x, sylvester_det(field, &av, &bv, m, n)));
    }
    Ok(interpolate(field, &points))
}

/// Determinant of the (m+n)×(m+n) Sylvester matrix of a (treated as degree
/// m) and b (treated as degree n); coefficients beyond the true degrees are
/// zero.
fn sylvester_det(field: FieldSpec, a: &UniPoly, b: &UniPoly, m: usize, n: usize) -> Scalar {
    let size = m + n;
    if size == 0 {
        return field.one();
    }
    let entry_a = |k: usize| -> Scalar {
        if k <= m { a.coeff(k) } else { field.zero() }
    };
    let entry_b = |k: usize| -> Scalar {
        if k <= n { b.coeff(k) } else { field.zero() }
    };
    let mut mat = vec![vec![field.zero(); size]; size];
    for (i, row) in mat.iter_mut().take(n).enumerate() {
        for k in 0..=m {
            row[i + k] = entry_a(m - k);
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = entry_b(n - k);
        }
    }
    determinant(field, mat)
}

fn determinant(field: FieldSpec, mut mat: Vec<Vec<Scalar>>) -> Scalar {
    let size = mat.len();
    let mut det = field.one();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !field.is_zero(&mat[r][col]));
        let Some(pivot) = pivot else {
            return field.zero();
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = field.neg(&det);
        }
        let p = mat[col][col].clone();
        det = field.mul(&det, &p);
        let pinv = field.inv(&p).expect("nonzero pivot");
        for r in col + 1..size {
            if field.is_zero(&mat[r][col]) {
                continue;
            }
            let factor = field.mul(&mat[r][col], &pinv);
            for c in col..size {
                let t = field.mul(&factor, &mat[col][c]);
                mat[r][c] = field.sub(&mat[r][c], &t);
            }
        }
    }
    det
}

/// disc_Y(P) := Res_Y(P, P_Y); only its zero set matters here, so no
/// leading-coefficient normalization is applied.
pub fn discriminant_y(p: &BiPoly) -> Result<UniPoly> {
    resultant_y(p, &p.derive_y())
}

/// The unique polynomial of degree < points.len() through the given points
/// (distinct abscissae), by Newton divided differences.
pub(crate) fn interpolate(field: FieldSpec, points: &[(Scalar, Scalar)]) -> UniPoly {
    let n = points.len();
    let mut dd: Vec<Scalar> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = field.sub(&dd[i], &dd[i - 1]);
            let den = field.sub(&points[i].0, &points[i - level].0);
            dd[i] = field.div(&num, &den).expect("distinct interpolation points");
        }
    }
    // Horner on the Newton form.
    let mut acc = UniPoly::zero(field);
    for i in (0..n).rev() {
        let lin = UniPoly::new(field, vec![field.neg(&points[i].0), field.one()]);
        acc = acc.mul(&lin).add(&UniPoly::constant(field, dd[i].clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    #[test]
    fn bidegree_is_canonical() {
        let f = q();
        let p = BiPoly::from_i64_rows(f, &[&[0, 0, 1], &[-1, 0, 0]]); // Y^2 - X
        assert_eq!(p.deg_x(), Some(1));
        assert_eq!(p.deg_y(), Some(2));
        assert_eq!(p.total_degree(), Some(2));
        let z = p.sub(&p);
        assert!(z.is_zero());
        assert_eq!(z.deg_x(), None);
    }

    #[test]
    fn shift_x_examples() {
        let f = q();
        let p = BiPoly::from_i64_rows(f, &[&[0, 0, 1], &[-1]]); // Y^2 - X
        let shifted = p.shift_x(&f.one());
        assert_eq!(shifted, BiPoly::from_i64_rows(f, &[&[-1, 0, 1], &[-1]]));
        assert_eq!(p.shift_x(&f.zero()), p);
        let x2 = BiPoly::from_i64_rows(f, &[&[0], &[0], &[1]]);
        assert_eq!(
            x2.shift_x(&f.one()),
            BiPoly::from_i64_rows(f, &[&[1], &[2], &[1]])
        );
    }

    #[test]
    fn shift_round_trip_on_random_inputs() {
        let f = FieldSpec::prime(9973).unwrap();
        let mut rng = crate::test_rng(11);
        for _ in 0..20 {
            let p = BiPoly::random(f, 3, 4, &mut rng);
            let a = f.random(&mut rng);
            assert_eq!(p.shift_x(&a).shift_x(&f.neg(&a)), p);
        }
    }

    #[test]
    fn resultant_examples() {
        let f = q();
        // Res_Y(Y^2 - (1+X), 2Y) = -4(1+X)
        let p = BiPoly::from_i64_rows(f, &[&[-1, 0, 1], &[-1]]);
        let dy = BiPoly::from_i64_rows(f, &[&[0, 2]]);
        let r = resultant_y(&p, &dy).unwrap();
        assert_eq!(r, UniPoly::from_i64_coeffs(f, &[-4, -4]));
        // Res_Y(Y - X, Y + X) = 2X
        let a = BiPoly::from_i64_rows(f, &[&[0, 1], &[-1]]);
        let b = BiPoly::from_i64_rows(f, &[&[0, 1], &[1]]);
        assert_eq!(
            resultant_y(&a, &b).unwrap(),
            UniPoly::from_i64_coeffs(f, &[0, 2])
        );
        // Discriminant route: same -4(1+X), nonzero, so P is separable.
        let d = discriminant_y(&p).unwrap();
        assert_eq!(d, UniPoly::from_i64_coeffs(f, &[-4, -4]));
    }

    #[test]
    fn resultant_detects_inseparability() {
        let f = q();
        // (Y - X)^2 = Y^2 - 2XY + X^2 has gcd with its Y-derivative.
        let p = BiPoly::from_i64_rows(f, &[&[0, 0, 1], &[0, -2], &[1]]);
        assert!(discriminant_y(&p).unwrap().is_zero());
        let mut rng = crate::test_rng(12);
        let sep = BiPoly::random_separable(FieldSpec::prime(101).unwrap(), 2, 2, &mut rng);
        assert!(!discriminant_y(&sep).unwrap().is_zero());
    }

    #[test]
    fn ring_axioms_on_random_samples() {
        let f = FieldSpec::prime(9973).unwrap();
        let mut rng = crate::test_rng(13);
        for _ in 0..10 {
            let a = BiPoly::random(f, 2, 3, &mut rng);
            let b = BiPoly::random(f, 3, 2, &mut rng);
            let c = BiPoly::random(f, 1, 1, &mut rng);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }

    #[test]
    fn evaluation_slices() {
        let f = q();
        let p = BiPoly::from_i64_rows(f, &[&[1, 0, 1], &[2, 3]]); // 1+Y^2+2X+3XY
        let at0 = p.eval_x(&f.zero());
        assert_eq!(at0, UniPoly::from_i64_coeffs(f, &[1, 0, 1]));
        let aty1 = p.eval_y(&f.one());
        assert_eq!(aty1, UniPoly::from_i64_coeffs(f, &[2, 5]));
        assert_eq!(p.eval_xy(&f.from_i64(2), &f.from_i64(-1)), f.from_i64(0));
    }
}
