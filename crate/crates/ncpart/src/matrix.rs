//! Exact sparse integer matrices with a global rational scalar.
//!
//! Rows index tensor-power basis vectors on the target side, columns on the
//! source side. The tensor index convention puts the leftmost factor in the
//! most significant digit, base |Λ|.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("size limit exceeded: {0}")]
    SizeLimitExceeded(String),
}

/// Encodes a tuple of Λ-indices as a mixed-radix integer, leftmost factor
/// most significant.
pub fn encode_basis(elems: &[usize], order: usize) -> usize {
    elems.iter().fold(0, |acc, &e| acc * order + e)
}

/// Inverse of [`encode_basis`] for tuples of length `n`.
pub fn decode_basis(mut idx: usize, n: usize, order: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = idx % order;
        idx /= order;
    }
    out
}

/// Sparse exact matrix: integer entries plus one global rational scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismMatrix {
    rows: usize,
    cols: usize,
    scalar: Rational64,
    entries: BTreeMap<(usize, usize), i64>,
}

impl MorphismMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MorphismMatrix {
            rows,
            cols,
            scalar: Rational64::one(),
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MorphismMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scalar(&self) -> Rational64 {
        self.scalar
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        debug_assert!(row < self.rows && col < self.cols);
        if value == 0 {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, value: i64) {
        let e = self.entries.entry((row, col)).or_insert(0);
        *e += value;
        if *e == 0 {
            self.entries.remove(&(row, col));
        }
    }

    pub fn raw_entry(&self, row: usize, col: usize) -> i64 {
        *self.entries.get(&(row, col)).unwrap_or(&0)
    }

    /// Entry value with the scalar folded in.
    pub fn value(&self, row: usize, col: usize) -> Rational64 {
        self.scalar * Rational64::from_integer(self.raw_entry(row, col))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() || self.entries.is_empty()
    }

    /// Matrix product self ∘ other (self applied after other).
    pub fn compose(&self, other: &MorphismMatrix) -> Result<MorphismMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "compose: {}x{} . {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MorphismMatrix::zero(self.rows, other.cols);
        out.scalar = self.scalar * other.scalar;
        // index other's entries by row for the sparse product
        let mut by_row: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (r, c, v) in other.iter() {
            by_row.entry(r).or_default().push((c, v));
        }
        for (r, mid, v) in self.iter() {
            if let Some(row) = by_row.get(&mid) {
                for &(c, w) in row {
                    out.add_to(r, c, v * w);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with the left factor most significant.
    pub fn tensor(&self, other: &MorphismMatrix) -> MorphismMatrix {
        let mut out = MorphismMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        out.scalar = self.scalar * other.scalar;
        for (r1, c1, v1) in self.iter() {
            for (r2, c2, v2) in other.iter() {
                out.set(r1 * other.rows + r2, c1 * other.cols + c2, v1 * v2);
            }
        }
        out
    }

    /// Adjoint of an exact integer matrix is its transpose.
    pub fn adjoint(&self) -> MorphismMatrix {
        let mut out = MorphismMatrix::zero(self.cols, self.rows);
        out.scalar = self.scalar;
        for (r, c, v) in self.iter() {
            out.set(c, r, v);
        }
        out
    }

    pub fn scale(&self, q: Rational64) -> MorphismMatrix {
        let mut out = self.clone();
        out.scalar *= q;
        out
    }

    /// Exact equality of the represented linear maps (scalars folded in).
    pub fn equal(&self, other: &MorphismMatrix) -> Result<bool, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "equal: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let keys: std::collections::BTreeSet<(usize, usize)> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .copied()
            .collect();
        Ok(keys
            .into_iter()
            .all(|(r, c)| self.value(r, c) == other.value(r, c)))
    }

    /// Line-oriented dump: header `rows cols scalar_num scalar_den`, then one
    /// sorted `row col value` triple per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let num = *self.scalar.numer();
        let den = *self.scalar.denom();
        // keep the denominator positive in the dump
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let _ = writeln!(s, "{} {} {} {}", self.rows, self.cols, num, den);
        for (r, c, v) in self.iter() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }
}
