use alloc::vec;
use alloc::vec::Vec;

use super::field::{FieldElement, PrimeField};

/// Row-major dense matrix over a single prime field.
///
/// Entries are stored reduced in a `u32`, which halves the footprint of the
/// large interpolation matrices compared to one `u64` per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from signed integers, reducing each entry mod p.
    pub fn from_i64(field: PrimeField, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count mismatch");
        let entries = values
            .iter()
            .map(|&v| field.from_i64(v).value() as u32)
            .collect();
        Self {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> FieldElement {
        self.field
            .element(self.entries[row * self.cols + col] as u64)
    }

    pub fn set(&mut self, row: usize, col: usize, value: FieldElement) {
        debug_assert_eq!(value.modulus(), self.field.modulus());
        self.entries[row * self.cols + col] = value.value() as u32;
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [u32] {
        &mut self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Appends a row of already reduced values.
    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        debug_assert!(row.iter().all(|&v| (v as u64) < self.field.modulus()));
        self.entries.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.entries.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    pub fn rank(&self) -> usize {
        self.clone().into_rank()
    }

    /// Rank by Gaussian elimination, consuming the matrix as scratch space.
    pub fn into_rank(mut self) -> usize {
        let p = self.field.modulus();
        let cols = self.cols;
        let mut rank = 0;
        for col in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.entries[r * cols + col] != 0) else {
                continue;
            };
            self.swap_rows(rank, pivot);

            let (head, below) = self.entries.split_at_mut((rank + 1) * cols);
            let pivot_row = &mut head[rank * cols..];
            let inv = self
                .field
                .element(pivot_row[col] as u64)
                .inverse()
                .expect("pivot is nonzero");
            scale_row(&mut pivot_row[col + 1..], inv.value(), p);
            pivot_row[col] = 1;
            let pivot_tail = &pivot_row[col + 1..];

            eliminate_below(below, cols, col, pivot_tail, p);
            rank += 1;
        }
        rank
    }
}

pub fn rank(m: &DenseMatrix) -> usize {
    m.rank()
}

fn scale_row(row: &mut [u32], factor: u64, p: u64) {
    for v in row {
        *v = (*v as u64 * factor % p) as u32;
    }
}

#[cfg(feature = "parallel")]
fn eliminate_below(below: &mut [u32], cols: usize, col: usize, pivot_tail: &[u32], p: u64) {
    use rayon::prelude::*;
    // small trailing blocks are not worth the scheduling overhead
    if below.len() < 1 << 16 {
        below
            .chunks_exact_mut(cols)
            .for_each(|row| eliminate_row(row, col, pivot_tail, p));
    } else {
        below
            .par_chunks_exact_mut(cols)
            .for_each(|row| eliminate_row(row, col, pivot_tail, p));
    }
}

#[cfg(not(feature = "parallel"))]
fn eliminate_below(below: &mut [u32], cols: usize, col: usize, pivot_tail: &[u32], p: u64) {
    below
        .chunks_exact_mut(cols)
        .for_each(|row| eliminate_row(row, col, pivot_tail, p));
}

/// `row -= row[col] * pivot` where the pivot row is normalized to 1 at `col`.
///
/// The multiplier is fixed for the whole row, so each product is reduced with
/// a precomputed quotient estimate (Shoup's trick) instead of a division. For
/// `p < 2^32` the remainder estimate lies in `[0, 2p)`.
#[inline]
fn eliminate_row(row: &mut [u32], col: usize, pivot_tail: &[u32], p: u64) {
    let f = row[col] as u64;
    if f == 0 {
        return;
    }
    row[col] = 0;
    let c = p - f;
    let c_shoup = (c << 32) / p;
    for (a, &b) in row[col + 1..].iter_mut().zip(pivot_tail) {
        let b = b as u64;
        let q = (c_shoup * b) >> 32;
        let t = (c * b).wrapping_sub(q * p);
        let mut s = *a as u64 + t;
        if s >= p {
            s -= p;
        }
        if s >= p {
            s -= p;
        }
        *a = s as u32;
    }
}
