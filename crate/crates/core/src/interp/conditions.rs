use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::config::{normalize, PointConfig, SamplePoint};
use crate::gfmat::{DenseMatrix, PrimeField};
use crate::linsys::FatPointSystem;
use crate::{Error, Result};

/// Outcome of one rank computation at a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankReport {
    pub monomials: u64,
    pub conditions: u64,
    pub rank: u64,
    pub h0_sample: u64,
    pub full_rank: bool,
}

impl RankReport {
    fn new(monomials: u64, conditions: u64, rank: u64) -> Self {
        Self {
            monomials,
            conditions,
            rank,
            h0_sample: monomials - rank,
            full_rank: rank == monomials.min(conditions),
        }
    }
}

/// Exponent triples `(i, j, k)` with `i + j + k = d`, in descending
/// lexicographic order (`x^d` first). Empty for negative `d`.
pub fn monomial_basis(d: i64) -> Vec<[u32; 3]> {
    if d < 0 {
        return Vec::new();
    }
    let d = d as u32;
    let mut out = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Evaluation data for one point in its affine chart.
struct ChartPoint {
    /// coordinate set to 1, and the two local coordinates
    chart: usize,
    local: [usize; 2],
    /// powers of the two local coordinates, `0..=d`
    powers: [Vec<u64>; 2],
}

impl ChartPoint {
    fn new(field: PrimeField, point: &SamplePoint, d: u32) -> Self {
        let coords = normalize(field, point.coords);
        // prefer z = 1, then y = 1, then x = 1
        let chart = (0..3)
            .rev()
            .find(|&i| coords[i] == 1)
            .expect("normalized point");
        let local = match chart {
            2 => [0, 1],
            1 => [0, 2],
            _ => [1, 2],
        };
        let powers = local.map(|idx| {
            let base = field.element(coords[idx]);
            let mut acc = field.one();
            (0..=d)
                .map(|_| {
                    let v = acc.value();
                    acc = acc * base;
                    v
                })
                .collect()
        });
        Self {
            chart,
            local,
            powers,
        }
    }
}

/// Pascal's triangle mod p, rows `0..=d`.
fn binomials(field: PrimeField, d: u32) -> Vec<Vec<u64>> {
    let p = field.modulus();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d as usize + 1);
    for n in 0..=d as usize {
        let mut row = vec![1u64; n + 1];
        for k in 1..n {
            row[k] = (rows[n - 1][k - 1] + rows[n - 1][k]) % p;
        }
        rows.push(row);
    }
    rows
}

struct RowBuilder<'a> {
    p: u64,
    basis: &'a [[u32; 3]],
    binom: Vec<Vec<u64>>,
}

impl<'a> RowBuilder<'a> {
    fn new(field: PrimeField, basis: &'a [[u32; 3]], d: u32) -> Self {
        Self {
            p: field.modulus(),
            basis,
            binom: binomials(field, d),
        }
    }

    /// Writes the Hasse derivative `D_u^alpha D_v^beta` of every monomial at
    /// the point into `row`.
    fn fill(&self, row: &mut [u32], pt: &ChartPoint, alpha: u32, beta: u32) {
        debug_assert_eq!(pt.chart, 3 - pt.local[0] - pt.local[1]);
        let p = self.p;
        for (out, exps) in row.iter_mut().zip(self.basis) {
            let eu = exps[pt.local[0]];
            let ev = exps[pt.local[1]];
            *out = if eu < alpha || ev < beta {
                0
            } else {
                let cu = self.binom[eu as usize][alpha as usize]
                    * pt.powers[0][(eu - alpha) as usize]
                    % p;
                let cv =
                    self.binom[ev as usize][beta as usize] * pt.powers[1][(ev - beta) as usize] % p;
                (cu * cv % p) as u32
            };
        }
    }
}

fn check_modulus(field: PrimeField, d: i64) -> Result<()> {
    if field.modulus() as i64 <= d {
        return Err(Error::ModulusTooSmall {
            prime: field.modulus(),
            degree: d,
        });
    }
    Ok(())
}

/// Derivative orders `(alpha, beta)` with `alpha + beta < m`.
fn derivative_orders(m: i64) -> impl Iterator<Item = (u32, u32)> {
    let m = m.max(0) as u32;
    (0..m).flat_map(|s| (0..=s).rev().map(move |a| (a, s - a)))
}

/// The `m(m+1)/2` rows expressing that a degree-`d` curve has multiplicity
/// at least `m` at `point`, one per Hasse derivative of order `< m`.
pub fn condition_rows(
    field: PrimeField,
    point: &SamplePoint,
    m: i64,
    d: i64,
) -> Result<Vec<Vec<u32>>> {
    check_modulus(field, d)?;
    if d < 0 {
        return Err(Error::Domain("negative degree has no monomials"));
    }
    let basis = monomial_basis(d);
    let builder = RowBuilder::new(field, &basis, d as u32);
    let pt = ChartPoint::new(field, point, d as u32);
    Ok(derivative_orders(m)
        .map(|(a, b)| {
            let mut row = vec![0; basis.len()];
            builder.fill(&mut row, &pt, a, b);
            row
        })
        .collect())
}

/// Stacks the condition rows of `effective_part(s)` at the points of `cfg`.
pub fn build_matrix(s: &FatPointSystem, cfg: &PointConfig) -> Result<DenseMatrix> {
    let field = cfg.field()?;
    if cfg.points.len() != s.len()
        || cfg
            .points
            .iter()
            .zip(s.tags())
            .any(|(pt, &t)| pt.placement != t)
    {
        return Err(Error::Placement(
            "configuration tags do not match the system",
        ));
    }
    let eff = s.effective_part();
    let d = eff.degree();
    if d < 0 {
        return Err(Error::Domain("negative degree has no monomials"));
    }
    check_modulus(field, d)?;

    let basis = monomial_basis(d);
    let builder = RowBuilder::new(field, &basis, d as u32);
    let rows = eff.conditions_count() as usize;
    let mut matrix = DenseMatrix::zeros(field, rows, basis.len());
    let mut r = 0;
    for (point, &m) in cfg.points.iter().zip(eff.mults()) {
        if m < 1 {
            continue;
        }
        let pt = ChartPoint::new(field, point, d as u32);
        for (a, b) in derivative_orders(m) {
            builder.fill(matrix.row_mut(r), &pt, a, b);
            r += 1;
        }
    }
    debug_assert_eq!(r, rows);
    Ok(matrix)
}

/// `h^0` of the system at this particular sample.
pub fn h0_at_sample(s: &FatPointSystem, cfg: &PointConfig) -> Result<RankReport> {
    let matrix = build_matrix(s, cfg)?;
    let (monomials, conditions) = (matrix.cols() as u64, matrix.rows() as u64);
    let rank = matrix.into_rank() as u64;
    Ok(RankReport::new(monomials, conditions, rank))
}
