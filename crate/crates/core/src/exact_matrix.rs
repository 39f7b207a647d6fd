//! Dense matrices over Z[ζ_L]: products, Hermitian adjoint, powers, Kronecker
//! products, the Kronecker shuffle permutation, and division-free
//! characteristic polynomials (Berkowitz), all exact.

use crate::cyclotomic::{self, CycloElement, Level};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MatrixError {
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: Level, right: Level },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Row-major dense matrix with all entries at one cyclotomic level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloMatrix {
    level: Level,
    rows: usize,
    cols: usize,
    entries: Vec<CycloElement>,
}

impl CycloMatrix {
    pub fn from_fn(
        level: Level,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycloElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                assert_eq!(e.level(), level, "entry level must match matrix level");
                entries.push(e);
            }
        }
        CycloMatrix {
            level,
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(level: Level, rows: usize, cols: usize) -> Self {
        Self::from_fn(level, rows, cols, |_, _| CycloElement::zero(level))
    }

    pub fn identity(level: Level, n: usize) -> Self {
        Self::from_fn(level, n, n, |r, c| {
            if r == c {
                CycloElement::one(level)
            } else {
                CycloElement::zero(level)
            }
        })
    }

    /// λI for a scalar λ.
    pub fn scalar(n: usize, value: &CycloElement) -> Self {
        let level = value.level();
        Self::from_fn(level, n, n, |r, c| {
            if r == c {
                value.clone()
            } else {
                CycloElement::zero(level)
            }
        })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &CycloElement {
        &self.entries[r * self.cols + c]
    }

    fn check_level(&self, other: &Self) -> Result<(), MatrixError> {
        if self.level != other.level {
            return Err(MatrixError::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_level(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(CycloMatrix {
            level: self.level,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_level(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = CycloElement::zero(self.level);
                for k in 0..self.cols {
                    acc = &acc + &(self.at(r, k) * other.at(k, c));
                }
                out.push(acc);
            }
        }
        Ok(CycloMatrix {
            level: self.level,
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    pub fn scalar_mul(&self, s: &CycloElement) -> Result<Self, MatrixError> {
        if s.level() != self.level {
            return Err(MatrixError::LevelMismatch {
                left: self.level,
                right: s.level(),
            });
        }
        Ok(CycloMatrix {
            level: self.level,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        })
    }

    pub fn scalar_mul_int(&self, n: &BigInt) -> Self {
        CycloMatrix {
            level: self.level,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scalar_mul(n)).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn hermitian_adjoint(&self) -> Self {
        Self::from_fn(self.level, self.cols, self.rows, |r, c| {
            self.at(c, r).conjugate()
        })
    }

    /// A^e by iterated multiplication; A must be square.
    pub fn pow(&self, e: u32) -> Result<Self, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = CycloMatrix::identity(self.level, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Lifts every entry into Z[ζ_target].
    pub fn embed(&self, target: Level) -> Result<Self, crate::cyclotomic::CycloError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(e.embed(target)?);
        }
        Ok(CycloMatrix {
            level: target,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Kronecker product; levels are lifted to their lcm internally.
    pub fn kron(&self, other: &Self) -> Self {
        let level = cyclotomic::lcm(self.level, other.level);
        let a = self.embed(level).expect("lcm is a multiple");
        let b = other.embed(level).expect("lcm is a multiple");
        CycloMatrix::from_fn(level, a.rows * b.rows, a.cols * b.cols, |r, c| {
            let (r1, r2) = (r / b.rows, r % b.rows);
            let (c1, c2) = (c / b.cols, c % b.cols);
            a.at(r1, c1) * b.at(r2, c2)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Some(λ) when the matrix equals λI.
    pub fn as_scalar(&self) -> Option<&CycloElement> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let lambda = self.at(0, 0);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c);
                if r == c {
                    if e != lambda {
                        return None;
                    }
                } else if !e.is_zero() {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> CycloElement {
        assert!(self.is_square());
        let mut acc = CycloElement::zero(self.level);
        for i in 0..self.rows {
            acc = &acc + self.at(i, i);
        }
        acc
    }

    /// Characteristic polynomial via the Berkowitz algorithm: division-free,
    /// so coefficients stay in Z[ζ_L].
    pub fn char_poly(&self) -> Result<CharPoly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let level = self.level;
        // char poly of the empty matrix is 1; coefficients kept leading-first
        let mut poly = vec![CycloElement::one(level)];
        for k in (0..n).rev() {
            // trailing principal submatrix A[k.., k..], partitioned as
            //   [ a  R ]
            //   [ C  M ]
            let size = n - k;
            let a = self.at(k, k).clone();
            // Toeplitz column: (1, -a, -R·C, -R·M·C, -R·M²·C, ...)
            let mut col = Vec::with_capacity(size + 1);
            col.push(CycloElement::one(level));
            col.push(-&a);
            if size > 1 {
                // w starts as C, is repeatedly multiplied by M; entries R·w recorded
                let mut w: Vec<CycloElement> = (k + 1..n).map(|r| self.at(r, k).clone()).collect();
                for step in 0..size - 1 {
                    let mut dot = CycloElement::zero(level);
                    for (j, wj) in w.iter().enumerate() {
                        dot = &dot + &(self.at(k, k + 1 + j) * wj);
                    }
                    col.push(-&dot);
                    if step + 1 < size - 1 {
                        let mut next = Vec::with_capacity(w.len());
                        for r in k + 1..n {
                            let mut acc = CycloElement::zero(level);
                            for (j, wj) in w.iter().enumerate() {
                                acc = &acc + &(self.at(r, k + 1 + j) * wj);
                            }
                            next.push(acc);
                        }
                        w = next;
                    }
                }
            }
            // multiply: new = Toeplitz(col) · poly, a convolution truncated to
            // the (size+1) rows of the Toeplitz matrix
            let mut next = vec![CycloElement::zero(level); poly.len() + 1];
            for (i, t) in col.iter().enumerate() {
                if t.is_zero() {
                    continue;
                }
                for (j, p) in poly.iter().enumerate() {
                    if i + j < next.len() {
                        next[i + j] = &next[i + j] + &(t * p);
                    }
                }
            }
            poly = next;
        }
        poly.reverse(); // ascending: index = power of x
        Ok(CharPoly {
            level,
            coeffs: poly,
        })
    }
}

/// Monic characteristic polynomial; coefficients ascending (index = degree).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharPoly {
    level: Level,
    coeffs: Vec<CycloElement>,
}

impl CharPoly {
    pub fn from_coeffs_ascending(level: Level, coeffs: Vec<CycloElement>) -> Self {
        assert!(coeffs
            .last()
            .map(|c| c == &CycloElement::one(level))
            .unwrap_or(false));
        CharPoly { level, coeffs }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients, constant term first; leading coefficient is 1.
    pub fn coeffs(&self) -> &[CycloElement] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &CycloElement {
        &self.coeffs[0]
    }

    /// det(A) = (−1)^n · constant term.
    pub fn determinant(&self) -> CycloElement {
        if self.degree().is_multiple_of(2) {
            self.coeffs[0].clone()
        } else {
            -&self.coeffs[0]
        }
    }

    pub fn embed(&self, target: Level) -> Result<Self, crate::cyclotomic::CycloError> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.embed(target)?);
        }
        Ok(CharPoly {
            level: target,
            coeffs,
        })
    }

    /// Substitutes the matrix into the polynomial (for Cayley–Hamilton checks).
    pub fn eval_matrix(&self, a: &CycloMatrix) -> Result<CycloMatrix, MatrixError> {
        assert!(a.is_square());
        let mut acc = CycloMatrix::zero(a.level(), a.rows(), a.cols());
        let mut pow = CycloMatrix::identity(a.level(), a.rows());
        for (i, c) in self.coeffs.iter().enumerate() {
            let c_lifted = c.embed(a.level()).map_err(|_| MatrixError::LevelMismatch {
                left: self.level,
                right: a.level(),
            })?;
            acc = acc.add(&pow.scalar_mul(&c_lifted)?)?;
            if i + 1 < self.coeffs.len() {
                pow = pow.mul(a)?;
            }
        }
        Ok(acc)
    }

    /// Evaluates at a ring element.
    pub fn eval(&self, x: &CycloElement) -> CycloElement {
        let mut acc = CycloElement::zero(self.level);
        let mut pow = CycloElement::one(self.level);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &(c * &pow);
            if i + 1 < self.coeffs.len() {
                pow = &pow * x;
            }
        }
        acc
    }
}

/// A permutation stored as an index map: `map[old] = new`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn from_map(map: Vec<usize>) -> Self {
        let mut seen = vec![false; map.len()];
        for &i in &map {
            assert!(i < map.len() && !seen[i], "not a permutation");
            seen[i] = true;
        }
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (old, &new) in self.map.iter().enumerate() {
            inv[new] = old;
        }
        Permutation { map: inv }
    }

    /// The 0/1 matrix P with P[map[j], j] = 1, so (P A Pᵀ)[map(r), map(c)] = A[r, c].
    pub fn matrix(&self, level: Level) -> CycloMatrix {
        let n = self.map.len();
        CycloMatrix::from_fn(level, n, n, |r, c| {
            if self.map[c] == r {
                CycloElement::one(level)
            } else {
                CycloElement::zero(level)
            }
        })
    }

    /// P A P⁻¹ computed by exact index relabeling.
    pub fn conjugate(&self, a: &CycloMatrix) -> CycloMatrix {
        assert_eq!(a.rows(), self.map.len());
        assert_eq!(a.cols(), self.map.len());
        let inv = self.inverse();
        CycloMatrix::from_fn(a.level(), a.rows(), a.cols(), |r, c| {
            a.at(inv.apply(r), inv.apply(c)).clone()
        })
    }
}

/// The permutation realizing P (A⊗B) P⁻¹ = B⊗A for all A (n×n) and B (m×m).
///
/// Index r = i·m + j (i < n, j < m) is sent to j·n + i.
pub fn kron_shuffle(m: usize, n: usize) -> Permutation {
    let size = m * n;
    let mut map = vec![0; size];
    for i in 0..n {
        for j in 0..m {
            map[i * m + j] = j * n + i;
        }
    }
    Permutation::from_map(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::sqrt_embed;

    fn root(level: u64, e: u64) -> CycloElement {
        CycloElement::root(level, e)
    }

    fn int(level: u64, n: i64) -> CycloElement {
        CycloElement::from_int(level, n)
    }

    /// [[1,1],[1,-1]] over Z[ζ_2]
    fn f2() -> CycloMatrix {
        CycloMatrix::from_fn(2, 2, 2, |r, c| {
            if r == 1 && c == 1 {
                int(2, -1)
            } else {
                int(2, 1)
            }
        })
    }

    /// Turyn seed [[1,1],[-1,1]]
    fn m8() -> CycloMatrix {
        CycloMatrix::from_fn(2, 2, 2, |r, c| {
            if r == 1 && c == 0 {
                int(2, -1)
            } else {
                int(2, 1)
            }
        })
    }

    /// 4x4 ±1 seed with M^3 = -8I
    fn m6() -> CycloMatrix {
        let signs = [[1, 1, 1, 1], [-1, 1, -1, 1], [-1, 1, 1, -1], [-1, -1, 1, 1]];
        CycloMatrix::from_fn(2, 4, 4, |r, c| int(2, signs[r][c]))
    }

    #[test]
    fn f2_times_adjoint_is_2i() {
        let f = f2();
        let prod = f.mul(&f.hermitian_adjoint()).unwrap();
        assert_eq!(
            prod,
            CycloMatrix::identity(2, 2).scalar_mul_int(&BigInt::from(2))
        );
    }

    #[test]
    fn m8_eighth_power_is_16i() {
        let p = m8().pow(8).unwrap();
        assert_eq!(
            p,
            CycloMatrix::identity(2, 2).scalar_mul_int(&BigInt::from(16))
        );
    }

    #[test]
    fn m6_cube_is_minus_8i() {
        let p = m6().pow(3).unwrap();
        assert_eq!(
            p,
            CycloMatrix::identity(2, 4).scalar_mul_int(&BigInt::from(-8))
        );
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = CycloMatrix::from_fn(12, 3, 3, |r, c| {
            root(12, (r as u64 * 5 + c as u64 * 7) % 12)
        });
        let b = CycloMatrix::from_fn(12, 3, 3, |r, c| root(12, (r as u64 + 2 * c as u64) % 12));
        let lhs = a.mul(&b).unwrap().hermitian_adjoint();
        let rhs = b.hermitian_adjoint().mul(&a.hermitian_adjoint()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(a.hermitian_adjoint().hermitian_adjoint(), a);
    }

    #[test]
    fn kron_with_identity_and_associativity() {
        let b = m8();
        let i1 = CycloMatrix::identity(2, 1);
        assert_eq!(i1.kron(&b), b);

        let a = CycloMatrix::from_fn(4, 2, 2, |r, c| root(4, (r + 3 * c) as u64 % 4));
        let c = CycloMatrix::from_fn(3, 2, 2, |r, c| root(3, (2 * r + c) as u64 % 3));
        assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }

    #[test]
    fn mixed_level_kron_lands_at_lcm() {
        let f3 = CycloMatrix::from_fn(3, 3, 3, |r, c| root(3, (r * c) as u64 % 3));
        let k = f2().kron(&f3);
        assert_eq!(k.level(), 6);
        assert_eq!(k.rows(), 6);
        // H ∈ But(6,6): HH* = 6I exactly
        let prod = k.mul(&k.hermitian_adjoint()).unwrap();
        assert_eq!(
            prod,
            CycloMatrix::identity(6, 6).scalar_mul_int(&BigInt::from(6))
        );
    }

    #[test]
    fn dimension_and_level_errors() {
        let a = CycloMatrix::identity(2, 2);
        let b = CycloMatrix::identity(2, 3);
        assert!(matches!(
            a.mul(&b),
            Err(MatrixError::DimensionMismatch { .. })
        ));
        let c = CycloMatrix::identity(4, 2);
        assert!(matches!(a.add(&c), Err(MatrixError::LevelMismatch { .. })));
        let r = CycloMatrix::zero(2, 2, 3);
        assert!(matches!(r.pow(2), Err(MatrixError::NotSquare { .. })));
        assert!(matches!(r.char_poly(), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn kron_shuffle_small_cases() {
        assert_eq!(kron_shuffle(1, 4), Permutation::identity(4));
        assert_eq!(kron_shuffle(2, 2), Permutation::from_map(vec![0, 2, 1, 3]));
    }

    #[test]
    fn kron_shuffle_matches_entry_formula() {
        // 1-indexed: P[i,j] = 1 iff j + m - 1 = i·m - floor((i-1)/n)·(mn-1)
        for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 4), (1, 5)] {
            let p = kron_shuffle(m, n).matrix(1);
            for i in 1..=m * n {
                for j in 1..=m * n {
                    let rhs = (i * m) as i64 - (((i - 1) / n) * (m * n - 1)) as i64;
                    let expect = (j + m - 1) as i64 == rhs;
                    let got = !p.at(i - 1, j - 1).is_zero();
                    assert_eq!(got, expect, "m={m} n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn kron_shuffle_conjugation_swaps_factors() {
        let a = CycloMatrix::from_fn(12, 3, 3, |r, c| root(12, (5 * r + c * c + 1) as u64 % 12));
        let b = CycloMatrix::from_fn(12, 2, 2, |r, c| root(12, (7 * r + 3 * c) as u64 % 12));
        let shuffle = kron_shuffle(2, 3);
        assert_eq!(shuffle.conjugate(&a.kron(&b)), b.kron(&a));
        // and via the materialized matrix
        let p = shuffle.matrix(12);
        let lhs = p
            .mul(&a.kron(&b))
            .unwrap()
            .mul(&shuffle.inverse().matrix(12))
            .unwrap();
        assert_eq!(lhs, b.kron(&a));
    }

    #[test]
    fn char_poly_examples() {
        // I2 -> x² - 2x + 1
        let cp = CycloMatrix::identity(1, 2).char_poly().unwrap();
        assert_eq!(cp.coeffs(), &[int(1, 1), int(1, -2), int(1, 1)]);

        // M8 -> x² - 2x + 2
        let cp = m8().char_poly().unwrap();
        assert_eq!(cp.coeffs(), &[int(2, 2), int(2, -2), int(2, 1)]);

        // M6 -> (x² - 2x + 4)² = x⁴ - 4x³ + 12x² - 16x + 16
        let cp = m6().char_poly().unwrap();
        assert_eq!(
            cp.coeffs(),
            &[int(2, 16), int(2, -16), int(2, 12), int(2, -4), int(2, 1)]
        );
    }

    #[test]
    fn char_poly_roots_match_turyn_eigenvalues() {
        // eigenvalues of M8 are √2·ζ8 and √2·ζ8⁷: (x - √2ζ8)(x - √2ζ8⁷) = char poly
        let cp = m8().char_poly().unwrap().embed(8).unwrap();
        let g = sqrt_embed(2, 8).unwrap();
        let r1 = &g * &root(8, 1);
        let r2 = &g * &root(8, 7);
        let c0 = &r1 * &r2;
        let c1 = -&(&r1 + &r2);
        assert_eq!(cp.coeffs(), &[c0, c1, CycloElement::one(8)]);
    }

    #[test]
    fn cayley_hamilton_on_seeds_and_random_matrices() {
        for a in [f2(), m8(), m6()] {
            let cp = a.char_poly().unwrap();
            assert!(cp.eval_matrix(&a).unwrap().is_zero());
        }
        let a = CycloMatrix::from_fn(12, 3, 3, |r, c| root(12, (r * r + 5 * c + 2) as u64 % 12));
        let cp = a.char_poly().unwrap();
        assert!(cp.eval_matrix(&a).unwrap().is_zero());
    }

    /// Cofactor-expansion determinant, the independent oracle for small sizes.
    fn det_cofactor(a: &CycloMatrix) -> CycloElement {
        let n = a.rows();
        if n == 1 {
            return a.at(0, 0).clone();
        }
        let mut acc = CycloElement::zero(a.level());
        for c in 0..n {
            let minor = CycloMatrix::from_fn(a.level(), n - 1, n - 1, |i, j| {
                a.at(i + 1, if j < c { j } else { j + 1 }).clone()
            });
            let term = a.at(0, c) * &det_cofactor(&minor);
            if c % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        acc
    }

    #[test]
    fn constant_term_is_signed_determinant() {
        let mats = [
            m8(),
            CycloMatrix::from_fn(6, 3, 3, |r, c| root(6, (r + 2 * c + r * c) as u64 % 6)),
            CycloMatrix::from_fn(4, 3, 3, |r, c| root(4, (3 * r + c + 1) as u64 % 4)),
        ];
        for a in mats {
            let cp = a.char_poly().unwrap();
            assert_eq!(cp.determinant(), det_cofactor(&a));
            let sign_adjust = if a.rows() % 2 == 0 {
                cp.constant_term().clone()
            } else {
                -cp.constant_term()
            };
            assert_eq!(sign_adjust, det_cofactor(&a));
        }
    }
}
