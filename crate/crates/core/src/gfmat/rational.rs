use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::PrimeField;
use super::matrix::DenseMatrix;

/// Row-major matrix of machine integers, the input of [`rational_rank`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn reduce_mod(&self, field: PrimeField) -> DenseMatrix {
        DenseMatrix::from_i64(field, self.rows, self.cols, &self.entries)
    }
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination.
///
/// After eliminating with pivot columns `c_1 < ... < c_k`, every remaining
/// entry is a `(k+1)`-minor of the input, so each division by the previous
/// pivot is exact.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let cols = m.cols;
    let mut a: Vec<BigInt> = m.entries.iter().map(|&v| BigInt::from(v)).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.rows {
            break;
        }
        let Some(pivot) = (rank..m.rows).find(|&r| !a[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                a.swap(rank * cols + j, pivot * cols + j);
            }
        }
        let piv = a[rank * cols + col].clone();
        for i in rank + 1..m.rows {
            let lead = a[i * cols + col].clone();
            for j in col + 1..cols {
                let num = &piv * &a[i * cols + j] - &lead * &a[rank * cols + j];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                a[i * cols + j] = num / &prev;
            }
            a[i * cols + col] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    rank
}
