//! Bookkeeping for linear systems `|dH - sum m_i E_i|` on a blow-up of the plane.
//!
//! Multiplicities may be negative: after a twist, an entry `-a` stands for the
//! exceptional curve `E_i` appearing `a` times as a fixed component. Those
//! entries still count in [`FatPointSystem::chi`] but impose no conditions.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Where a point sits when the system is evaluated on a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    Generic,
    OnCubic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct FatPointSystem {
    degree: i64,
    mults: Vec<i64>,
    tags: Vec<Placement>,
}

#[derive(Deserialize)]
struct RawSystem {
    degree: i64,
    mults: Vec<i64>,
    #[serde(default)]
    tags: Option<Vec<Placement>>,
}

impl TryFrom<RawSystem> for FatPointSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        match raw.tags {
            Some(tags) => Self::with_tags(raw.degree, raw.mults, tags),
            None => Ok(Self::new(raw.degree, raw.mults)),
        }
    }
}

/// Numerical invariants of a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInvariants {
    pub chi: i64,
    pub v: i64,
    pub conditions: u64,
    pub monomials: u64,
}

/// `m(m+1)/2`, also for negative `m`.
pub fn point_conditions(m: i64) -> i64 {
    m * (m + 1) / 2
}

/// Number of plane forms of degree `d`; zero for negative `d`.
pub fn monomial_count(d: i64) -> u64 {
    if d < 0 {
        0
    } else {
        let d = d as u64;
        (d + 1) * (d + 2) / 2
    }
}

impl FatPointSystem {
    /// A system with every point in general position.
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        let tags = alloc::vec![Placement::Generic; mults.len()];
        Self {
            degree,
            mults,
            tags,
        }
    }

    pub fn with_tags(degree: i64, mults: Vec<i64>, tags: Vec<Placement>) -> Result<Self> {
        if mults.len() != tags.len() {
            return Err(Error::TagCount {
                mults: mults.len(),
                tags: tags.len(),
            });
        }
        Ok(Self {
            degree,
            mults,
            tags,
        })
    }

    /// `(d; m^n)` with all points generic.
    pub fn homogeneous(degree: i64, n: usize, m: i64) -> Self {
        Self::new(degree, alloc::vec![m; n])
    }

    /// Same system with every tag replaced by `placement`.
    pub fn placed(mut self, placement: Placement) -> Self {
        self.tags.iter_mut().for_each(|t| *t = placement);
        self
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn tags(&self) -> &[Placement] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.mults.windows(2).all(|w| w[0] == w[1])
    }

    pub fn all_generic(&self) -> bool {
        self.tags.iter().all(|&t| t == Placement::Generic)
    }

    /// `chi = d(d+3)/2 + 1 - sum m_i(m_i+1)/2`, summed over every entry.
    pub fn chi(&self) -> i64 {
        let d = self.degree;
        d * (d + 3) / 2 + 1 - self.mults.iter().map(|&m| point_conditions(m)).sum::<i64>()
    }

    /// `v = chi - 1`, unclamped.
    pub fn expected_dim(&self) -> i64 {
        self.chi() - 1
    }

    /// Linear conditions imposed by the positive multiplicities.
    pub fn conditions_count(&self) -> u64 {
        self.mults
            .iter()
            .filter(|&&m| m >= 1)
            .map(|&m| point_conditions(m) as u64)
            .sum()
    }

    pub fn monomial_count(&self) -> u64 {
        monomial_count(self.degree)
    }

    pub fn invariants(&self) -> SystemInvariants {
        let chi = self.chi();
        SystemInvariants {
            chi,
            v: chi - 1,
            conditions: self.conditions_count(),
            monomials: self.monomial_count(),
        }
    }

    /// Drops the fixed exceptional components: every `m_i < 0` becomes 0.
    pub fn effective_part(&self) -> Self {
        Self {
            degree: self.degree,
            mults: self.mults.iter().map(|&m| m.max(0)).collect(),
            tags: self.tags.clone(),
        }
    }

    /// Indices of the three largest multiplicities, stable on ties.
    fn top_three(&self) -> [usize; 3] {
        let mut order: Vec<usize> = (0..self.mults.len()).collect();
        order.sort_by(|&a, &b| self.mults[b].cmp(&self.mults[a]));
        [order[0], order[1], order[2]]
    }

    fn check_cremona(&self) -> Result<()> {
        if self.mults.len() < 3 {
            return Err(Error::Arity {
                needed: 3,
                got: self.mults.len(),
            });
        }
        if !self.all_generic() {
            return Err(Error::Placement(
                "Cremona centers must be points in general position",
            ));
        }
        Ok(())
    }

    /// Quadratic transformation centered at the three largest multiplicities.
    pub fn cremona(&self) -> Result<Self> {
        self.check_cremona()?;
        let [a, b, c] = self.top_three();
        let (ma, mb, mc) = (self.mults[a], self.mults[b], self.mults[c]);
        let d = self.degree;
        let mut out = self.clone();
        out.degree = 2 * d - ma - mb - mc;
        out.mults[a] = d - mb - mc;
        out.mults[b] = d - ma - mc;
        out.mults[c] = d - ma - mb;
        Ok(out)
    }

    /// Sorts multiplicities descending and applies [`Self::cremona`] until
    /// `d >= m_1 + m_2 + m_3`, or the degree or a multiplicity turns negative.
    /// Returns the final system and the number of transformations applied.
    pub fn cremona_standardize(&self) -> Result<(Self, usize)> {
        self.check_cremona()?;
        let mut current = self.clone();
        let mut steps = 0;
        loop {
            current.mults.sort_by(|a, b| b.cmp(a));
            let m = &current.mults;
            if current.degree < 0
                || m.iter().any(|&x| x < 0)
                || current.degree >= m[0] + m[1] + m[2]
            {
                return Ok((current, steps));
            }
            // d < m1 + m2 + m3 so the degree strictly drops
            current = current.cremona()?;
            steps += 1;
        }
    }
}

impl fmt::Display for FatPointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.degree)?;
        let mut i = 0;
        while i < self.mults.len() {
            let mut j = i;
            while j + 1 < self.mults.len()
                && self.mults[j + 1] == self.mults[i]
                && self.tags[j + 1] == self.tags[i]
            {
                j += 1;
            }
            let sep = if i == 0 { "; " } else { ", " };
            let count = j - i + 1;
            if count == 1 {
                write!(f, "{sep}{}", self.mults[i])?;
            } else {
                write!(f, "{sep}{}x{count}", self.mults[i])?;
            }
            if self.tags[i] == Placement::OnCubic {
                write!(f, " on-cubic")?;
            }
            i = j + 1;
        }
        write!(f, ")")
    }
}
