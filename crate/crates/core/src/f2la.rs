//! Dense linear algebra over the two-element field.
//!
//! Matrices are stored row-major with each row packed into `u64` words.
//! A matrix acts on column vectors: `rows` is the codomain dimension and
//! `cols` the domain dimension. Every operation returns a fresh value.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

/// A matrix over GF(2) with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => {
                        return Err(Error::Parse(format!(
                            "entry ({i},{j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// A uniformly random matrix drawn from `rng`.
    pub fn random<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for w in m.data.iter_mut() {
            *w = rng.gen();
        }
        m.clear_padding();
        m
    }

    /// A uniformly random invertible `n x n` matrix.
    pub fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let bit = 1u64 << (c % WORD_BITS);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn clear_padding(&mut self) {
        let tail = self.cols % WORD_BITS;
        if tail == 0 || self.stride == 0 {
            return;
        }
        let mask = (1u64 << tail) - 1;
        for r in 0..self.rows {
            self.data[r * self.stride + self.stride - 1] &= mask;
        }
    }

    /// True when every padding bit beyond `cols` is clear.
    pub fn padding_is_clean(&self) -> bool {
        let tail = self.cols % WORD_BITS;
        if tail == 0 || self.stride == 0 {
            return true;
        }
        let mask = !((1u64 << tail) - 1);
        (0..self.rows).all(|r| self.data[r * self.stride + self.stride - 1] & mask == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        for k in 0..s {
            let v = self.data[src * s + k];
            self.data[dst * s + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    /// Reduced row echelon form and the pivot columns, leftmost pivot first.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.get(r, c) {
                    m.xor_row_into(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // forward elimination only; cheaper than a full rref
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the null space, one basis vector per column.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = BitMatrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    basis.set(p, k, true);
                }
            }
        }
        basis
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row_words(k);
                    for (w, &v) in out.data[r * s..(r + 1) * s].iter_mut().zip(src) {
                        *w ^= v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (w, v) in out.data.iter_mut().zip(&other.data) {
            *w ^= v;
        }
        Ok(out)
    }

    /// Inverse of a square matrix of full rank.
    pub fn inverse(&self) -> Result<BitMatrix> {
        let n = self.rows;
        if self.cols != n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        let aug = BitMatrix::hstack(&[self, &BitMatrix::identity(n)])?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if r.get(i, n + j) {
                    inv.set(i, j, true);
                }
            }
        }
        Ok(inv)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for a in 0..self.rows {
            for b in 0..self.cols {
                if !self.get(a, b) {
                    continue;
                }
                for c in 0..other.rows {
                    for d in 0..other.cols {
                        if other.get(c, d) {
                            out.set(a * other.rows + c, b * other.cols + d, true);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(parts: &[&BitMatrix]) -> Result<BitMatrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        let col_dims: Vec<usize> = parts.iter().map(|m| m.cols).collect();
        let grid = vec![parts.iter().map(|&m| Some(m.clone())).collect()];
        block_assemble(&grid, &[rows], &col_dims)
    }

    pub fn vstack(parts: &[&BitMatrix]) -> Result<BitMatrix> {
        let cols = parts.first().map_or(0, |m| m.cols);
        let row_dims: Vec<usize> = parts.iter().map(|m| m.rows).collect();
        let grid: Vec<Vec<Option<BitMatrix>>> =
            parts.iter().map(|&m| vec![Some(m.clone())]).collect();
        block_assemble(&grid, &row_dims, &[cols])
    }

    /// Copies the sub-block starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if self.get(r0 + r, c0 + c) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| u8::from(self.get(r, c))).collect())
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<u8>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        BitMatrix::from_rows(&rows, cols).map_err(serde::de::Error::custom)
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_dim(m: &BitMatrix) -> usize {
    m.kernel_dim()
}

pub fn compose(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    a.compose(b)
}

/// Assembles a block matrix. `blocks[i][j]` fills the slot with `row_dims[i]`
/// rows and `col_dims[j]` columns; `None` means a zero block.
pub fn block_assemble(
    blocks: &[Vec<Option<BitMatrix>>],
    row_dims: &[usize],
    col_dims: &[usize],
) -> Result<BitMatrix> {
    if blocks.len() != row_dims.len() {
        return Err(Error::Dimension(format!(
            "grid has {} block rows but {} row dims",
            blocks.len(),
            row_dims.len()
        )));
    }
    let total_rows = row_dims.iter().sum();
    let total_cols = col_dims.iter().sum();
    let mut out = BitMatrix::zeros(total_rows, total_cols);
    let mut r0 = 0;
    for (i, row) in blocks.iter().enumerate() {
        if row.len() != col_dims.len() {
            return Err(Error::Dimension(format!(
                "block row {i} has {} entries but {} col dims",
                row.len(),
                col_dims.len()
            )));
        }
        let mut c0 = 0;
        for (j, block) in row.iter().enumerate() {
            if let Some(b) = block {
                if b.rows != row_dims[i] || b.cols != col_dims[j] {
                    return Err(Error::Dimension(format!(
                        "block ({i},{j}) is {}x{}, slot expects {}x{}",
                        b.rows, b.cols, row_dims[i], col_dims[j]
                    )));
                }
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        if b.get(r, c) {
                            out.set(r0 + r, c0 + c, true);
                        }
                    }
                }
            }
            c0 += col_dims[j];
        }
        r0 += row_dims[i];
    }
    Ok(out)
}

/// A deterministic matrix of exact rank `r`.
///
/// `seed == 0` yields the canonical form with an `r x r` identity in the
/// top-left corner; other seeds conjugate it by random invertible matrices.
pub fn synth_with_rank(rows: usize, cols: usize, r: usize, seed: u64) -> Result<BitMatrix> {
    if r > rows.min(cols) {
        return Err(Error::Validation(format!(
            "rank {r} exceeds min({rows}, {cols})"
        )));
    }
    let mut canon = BitMatrix::zeros(rows, cols);
    for i in 0..r {
        canon.set(i, i, true);
    }
    if seed == 0 {
        return Ok(canon);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let left = BitMatrix::random_invertible(rows, &mut rng);
    let right = BitMatrix::random_invertible(cols, &mut rng);
    left.compose(&canon)?.compose(&right)
}

/// Dimension of the intersection of the column spaces of `a` and `b`.
pub fn column_space_intersection_dim(a: &BitMatrix, b: &BitMatrix) -> Result<usize> {
    let joint = BitMatrix::hstack(&[a, b])?;
    Ok(a.rank() + b.rank() - joint.rank())
}
