//! The But(n, k) domain: exponent-grid representation, exact verification,
//! entry sets, entrywise power maps, structural predicates, and the canonical
//! text format.
//!
//! A `ButsonMatrix` is always verified: the only way to obtain one is through
//! `ButsonMatrix::verify` or through operations that provably preserve the
//! Hadamard property (and re-verify anyway; verification is cheap at the
//! orders in scope). Candidate grids live in the separate, unvalidated
//! `ExponentGrid`.

use crate::cyclotomic::{self, CycloElement, Level};
use crate::exact_matrix::CycloMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ButsonError {
    #[error("exponent {exponent} out of range for root order {k}")]
    ExponentOutOfRange { exponent: u64, k: u64 },
    #[error("grid is {got} entries, expected {expected} for order {n}")]
    MalformedGrid {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("rows {row_a} and {row_b} are not orthogonal")]
    NotHadamard { row_a: usize, row_b: usize },
    #[error("cannot lift root order {from} to {to}: target must be a multiple")]
    InvalidLift { from: u64, to: u64 },
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
}

/// An unvalidated n×n grid of exponents modulo k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentGrid {
    n: usize,
    k: u64,
    exps: Vec<u64>, // row-major, entry (i,j) denotes ζ_k^exps[i*n+j]
}

impl ExponentGrid {
    pub fn new(n: usize, k: u64, exps: Vec<u64>) -> Result<Self, ButsonError> {
        if exps.len() != n * n {
            return Err(ButsonError::MalformedGrid {
                n,
                expected: n * n,
                got: exps.len(),
            });
        }
        for &e in &exps {
            if e >= k {
                return Err(ButsonError::ExponentOutOfRange { exponent: e, k });
            }
        }
        Ok(ExponentGrid { n, k, exps })
    }

    pub fn from_rows(k: u64, rows: &[Vec<u64>]) -> Result<Self, ButsonError> {
        let n = rows.len();
        let mut exps = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(ButsonError::MalformedGrid {
                    n,
                    expected: n * n,
                    got: row.len() * n,
                });
            }
            exps.extend_from_slice(row);
        }
        Self::new(n, k, exps)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn root_order(&self) -> u64 {
        self.k
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.exps[r * self.n + c]
    }
}

/// A verified member of But(n, k), stored as an exponent grid.
#[derive(Clone, PartialEq, Eq)]
pub struct ButsonMatrix {
    grid: ExponentGrid,
}

/// First Hermitian inner product that fails, if any: rows are orthogonal iff
/// the multiset of exponent differences sums to zero in Z[ζ_k].
fn first_violation(grid: &ExponentGrid) -> Option<(usize, usize)> {
    let n = grid.n;
    let k = grid.k;
    for a in 0..n {
        for b in a + 1..n {
            let mut counts = vec![BigInt::zero(); k as usize];
            for j in 0..n {
                let d = (grid.at(a, j) + k - grid.at(b, j)) % k;
                counts[d as usize] += 1;
            }
            if !CycloElement::from_coeffs(k, counts).is_zero() {
                return Some((a, b));
            }
        }
    }
    None
}

impl ButsonMatrix {
    /// Checks HH* = nI_n exactly over Z[ζ_k]. Row pairs only: column
    /// orthogonality follows for square H.
    pub fn verify(grid: ExponentGrid) -> Result<Self, ButsonError> {
        match first_violation(&grid) {
            None => Ok(ButsonMatrix { grid }),
            Some((row_a, row_b)) => Err(ButsonError::NotHadamard { row_a, row_b }),
        }
    }

    pub fn from_rows(k: u64, rows: &[Vec<u64>]) -> Result<Self, ButsonError> {
        Self::verify(ExponentGrid::from_rows(k, rows)?)
    }

    /// The Fourier matrix F_n with exps[i][j] = i·j mod n, in But(n, n).
    pub fn fourier(n: usize) -> Self {
        let k = n as u64;
        let exps = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i as u64 * j as u64) % k))
            .collect();
        Self::verify(ExponentGrid { n, k, exps }).expect("Fourier matrices are Hadamard")
    }

    pub fn order(&self) -> usize {
        self.grid.n
    }

    pub fn root_order(&self) -> u64 {
        self.grid.k
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.grid.at(r, c)
    }

    pub fn grid(&self) -> &ExponentGrid {
        &self.grid
    }

    /// Entrywise r-th power: each exponent multiplied by r mod k. The result
    /// is a candidate only; Hadamard-ness of powers is a separate question.
    pub fn power_map(&self, r: u64) -> ExponentGrid {
        ExponentGrid {
            n: self.grid.n,
            k: self.grid.k,
            exps: self
                .grid
                .exps
                .iter()
                .map(|e| (e % self.grid.k) * (r % self.grid.k) % self.grid.k)
                .collect(),
        }
    }

    /// The set of exponents appearing in the matrix.
    pub fn entry_set(&self) -> BTreeSet<u64> {
        self.grid.exps.iter().copied().collect()
    }

    pub fn contains_exponent(&self, e: u64) -> bool {
        self.grid.exps.contains(&e)
    }

    /// H* = H exactly: exps[i][j] ≡ -exps[j][i] mod k.
    pub fn is_hermitian(&self) -> bool {
        let n = self.grid.n;
        let k = self.grid.k;
        (0..n).all(|i| (0..n).all(|j| (self.at(i, j) + self.at(j, i)).is_multiple_of(k)))
    }

    /// No entry equal to 1 or −1 ("unreal" in the k = 6 setting).
    pub fn avoids_real(&self) -> bool {
        let k = self.grid.k;
        self.grid
            .exps
            .iter()
            .all(|&e| e != 0 && (!k.is_multiple_of(2) || e != k / 2))
    }

    /// Re-expresses the same matrix over k'-th roots; k must divide k'.
    pub fn lift(&self, target_k: u64) -> Result<Self, ButsonError> {
        if !target_k.is_multiple_of(self.grid.k) {
            return Err(ButsonError::InvalidLift {
                from: self.grid.k,
                to: target_k,
            });
        }
        let f = target_k / self.grid.k;
        let grid = ExponentGrid {
            n: self.grid.n,
            k: target_k,
            exps: self.grid.exps.iter().map(|e| e * f).collect(),
        };
        Self::verify(grid)
    }

    /// Multiplies every entry by ζ_t^a; the result lives at lcm(k, t).
    pub fn scale_by_root(&self, t: u64, a: u64) -> Self {
        let k = self.grid.k;
        let l = cyclotomic::lcm(k, t);
        let shift = (a % t) * (l / t);
        let grid = ExponentGrid {
            n: self.grid.n,
            k: l,
            exps: self
                .grid
                .exps
                .iter()
                .map(|e| (e * (l / k) + shift) % l)
                .collect(),
        };
        Self::verify(grid).expect("global scaling preserves orthogonality")
    }

    /// Entrywise complex conjugate (the (k−1)-th power map).
    pub fn conjugate_entries(&self) -> Self {
        let grid = self.power_map(self.grid.k - 1);
        Self::verify(grid).expect("conjugation preserves orthogonality")
    }

    /// Kronecker product, in But(n·m, lcm(k1, k2)).
    pub fn kron(&self, other: &Self) -> Self {
        let l = cyclotomic::lcm(self.grid.k, other.grid.k);
        let (fa, fb) = (l / self.grid.k, l / other.grid.k);
        let (n1, n2) = (self.grid.n, other.grid.n);
        let n = n1 * n2;
        let mut exps = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let (r1, r2) = (r / n2, r % n2);
                let (c1, c2) = (c / n2, c % n2);
                exps.push((self.at(r1, c1) * fa + other.at(r2, c2) * fb) % l);
            }
        }
        Self::verify(ExponentGrid { n, k: l, exps })
            .expect("Kronecker products of Hadamard matrices are Hadamard")
    }

    /// The matrix as exact cyclotomic entries at a level divisible by k.
    pub fn as_cyclo_matrix(&self, level: Level) -> Result<CycloMatrix, cyclotomic::CycloError> {
        if !level.is_multiple_of(self.grid.k) {
            return Err(cyclotomic::CycloError::InvalidEmbed {
                from: self.grid.k,
                to: level,
            });
        }
        let f = level / self.grid.k;
        Ok(CycloMatrix::from_fn(
            level,
            self.grid.n,
            self.grid.n,
            |r, c| CycloElement::root(level, self.at(r, c) * f),
        ))
    }

    /// Serializes to the canonical text format (bit-exact round trips).
    pub fn serialize(&self) -> String {
        let mut out = format!("butson {} {}\n", self.grid.n, self.grid.k);
        for r in 0..self.grid.n {
            for c in 0..self.grid.n {
                if c > 0 {
                    out.push(' ');
                }
                out.push_str(&self.at(r, c).to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format and verifies the result.
    ///
    /// Line 1 is `butson <n> <k>`, then n lines of n exponents in [0, k).
    /// Lines starting with `#` are comments; trailing whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, ButsonError> {
        let err =
            |line: usize, col: usize, message: String| ButsonError::Parse { line, col, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());

        let (header_no, header) = lines
            .next()
            .ok_or_else(|| err(1, 1, "empty input".into()))?;
        let mut tokens = tokens_with_columns(header);
        match tokens.next() {
            Some((_, "butson")) => {}
            Some((col, word)) => {
                return Err(err(
                    header_no,
                    col,
                    format!("expected 'butson', found '{word}'"),
                ))
            }
            None => return Err(err(header_no, 1, "expected 'butson' header".into())),
        }
        let (col_n, tok_n) = tokens
            .next()
            .ok_or_else(|| err(header_no, header.len() + 1, "missing order n".into()))?;
        let n: usize = tok_n
            .parse()
            .map_err(|_| err(header_no, col_n, format!("invalid order '{tok_n}'")))?;
        let (col_k, tok_k) = tokens
            .next()
            .ok_or_else(|| err(header_no, header.len() + 1, "missing root order k".into()))?;
        let k: u64 = tok_k
            .parse()
            .map_err(|_| err(header_no, col_k, format!("invalid root order '{tok_k}'")))?;
        if let Some((col, word)) = tokens.next() {
            return Err(err(
                header_no,
                col,
                format!("unexpected token '{word}' after header"),
            ));
        }
        if n == 0 || k == 0 {
            return Err(err(
                header_no,
                col_n,
                "order and root order must be positive".into(),
            ));
        }

        let mut exps = Vec::with_capacity(n * n);
        for row in 0..n {
            let (line_no, line) = lines.next().ok_or_else(|| {
                err(
                    header_no + row + 1,
                    1,
                    format!("expected {n} rows, found {row}"),
                )
            })?;
            let mut count = 0;
            for (col, tok) in tokens_with_columns(line) {
                let e: u64 = tok
                    .parse()
                    .map_err(|_| err(line_no, col, format!("invalid exponent '{tok}'")))?;
                if e >= k {
                    return Err(err(
                        line_no,
                        col,
                        format!("exponent {e} out of range for k={k}"),
                    ));
                }
                exps.push(e);
                count += 1;
            }
            if count != n {
                return Err(err(
                    line_no,
                    1,
                    format!("expected {n} exponents, found {count}"),
                ));
            }
        }
        if let Some((line_no, line)) = lines.next() {
            return Err(err(
                line_no,
                1,
                format!("unexpected extra row '{}'", line.trim()),
            ));
        }
        let grid = ExponentGrid::new(n, k, exps).expect("dimensions checked during parse");
        Self::verify(grid)
    }
}

/// Splits a line into whitespace-separated tokens with 1-based column numbers.
fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            return None;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let tok = &trimmed[..end];
        let col = offset + 1;
        rest = &trimmed[end..];
        offset += end;
        Some((col, tok))
    })
}

impl fmt::Debug for ButsonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "But({},{}) ", self.grid.n, self.grid.k)?;
        f.debug_list()
            .entries(
                (0..self.grid.n)
                    .map(|r| (0..self.grid.n).map(|c| self.at(r, c)).collect::<Vec<_>>()),
            )
            .finish()
    }
}

impl fmt::Display for ButsonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.serialize().trim_end())
    }
}
