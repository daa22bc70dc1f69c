//! Degeneration of the plane to a rational surface `P'` glued to an elliptic
//! ruled surface `S` along a smooth cubic `C`.
//!
//! Twisting `L = dH - sum m_i E_i` by `mu` copies of `S` and restricting to
//! `P'` gives `(d - 3 mu) H - sum_{i <= k} (m_i - mu) D_i - sum_{i > k} m_i E_i`,
//! where the first `k` points now lie on `C`. Whenever the twisted system has
//! Euler characteristic at least that of `L`, its `h^0` bounds the `h^0` of
//! `L` at general points. The Euler characteristic of the `S` side follows
//! from `chi(L) = chi(L(mu)|P') + chi(L(mu - 1)|S)`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::interp::{Certificate, Method, Sampler, Verdict};
use crate::linsys::{FatPointSystem, Placement};
use crate::{Error, Result};

/// Fewest points the degeneration may move onto the cubic.
pub const MIN_POINTS_ON_CUBIC: usize = 10;

/// Anything that can certify or bound `h^0` of a tagged system.
pub trait H0Backend {
    fn certify(&self, s: &FatPointSystem) -> Result<Certificate>;
}

impl H0Backend for Sampler {
    fn certify(&self, s: &FatPointSystem) -> Result<Certificate> {
        Sampler::certify(self, s)
    }
}

impl<B: H0Backend + ?Sized> H0Backend for &B {
    fn certify(&self, s: &FatPointSystem) -> Result<Certificate> {
        (**self).certify(s)
    }
}

fn check_points(n: usize) -> Result<()> {
    if n < MIN_POINTS_ON_CUBIC {
        return Err(Error::Construction(
            "at least 10 points specialized to the cubic",
        ));
    }
    Ok(())
}

/// Largest admissible twist for `(d; m^n)`: `1 + (2mn - 6d) / (n - 9)`.
pub fn mu_bound(d: i64, n: usize, m: i64) -> Result<Ratio<i64>> {
    if n <= 9 {
        return Err(Error::Domain("the twist bound needs n >= 10"));
    }
    let n = n as i64;
    Ok(Ratio::from_integer(1) + Ratio::new(2 * m * n - 6 * d, n - 9))
}

/// The twist at which the corollary applies, if the bound is a positive
/// integer.
pub fn integral_mu(d: i64, n: usize, m: i64) -> Result<Option<i64>> {
    let bound = mu_bound(d, n, m)?;
    Ok((bound.is_integer() && bound.is_positive()).then(|| bound.to_integer()))
}

/// `chi(L(mu)|P') - chi(L)` for `(d; m^n)` with all points moved to the cubic:
/// `mu (n - 9 - 6d + 2mn - mu (n - 9)) / 2`.
pub fn chi_gap(d: i64, n: usize, m: i64, mu: i64) -> Result<i64> {
    check_points(n)?;
    let n = n as i64;
    let twice = mu * (n - 9 - 6 * d + 2 * m * n - mu * (n - 9));
    debug_assert_eq!(twice % 2, 0);
    Ok(twice / 2)
}

/// One application of the degeneration to a system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub original: FatPointSystem,
    pub k: usize,
    pub mu: i64,
    pub reduced: FatPointSystem,
    pub chi_original: i64,
    pub chi_reduced: i64,
    /// Euler characteristic of the twist restricted to the ruled surface.
    pub chi_s: i64,
    /// `chi_reduced >= chi_original`: the bound applies.
    pub hypothesis: bool,
}

impl ReductionPlan {
    /// Entries of the interpolation matrix needed to sample the reduced system.
    pub fn reduced_matrix_entries(&self) -> u64 {
        let eff = self.reduced.effective_part();
        if eff.degree() < 0 {
            0
        } else {
            eff.conditions_count() * eff.monomial_count()
        }
    }
}

/// Twists by `mu` and moves the first `k` points onto the cubic.
pub fn reduce(s: &FatPointSystem, k: usize, mu: i64) -> Result<ReductionPlan> {
    check_points(k)?;
    if k > s.len() {
        return Err(Error::Arity {
            needed: k,
            got: s.len(),
        });
    }
    if mu < 0 {
        return Err(Error::Domain("the twist must be non-negative"));
    }
    if !s.all_generic() {
        return Err(Error::Placement(
            "the original system must have general points",
        ));
    }
    let mults: Vec<i64> = s
        .mults()
        .iter()
        .enumerate()
        .map(|(i, &m)| if i < k { m - mu } else { m })
        .collect();
    let tags: Vec<Placement> = (0..s.len())
        .map(|i| {
            if i < k {
                Placement::OnCubic
            } else {
                Placement::Generic
            }
        })
        .collect();
    let reduced = FatPointSystem::with_tags(s.degree() - 3 * mu, mults, tags)?;
    let chi_original = s.chi();
    let chi_reduced = reduced.chi();
    Ok(ReductionPlan {
        original: s.clone(),
        k,
        mu,
        reduced,
        chi_original,
        chi_reduced,
        chi_s: chi_original - chi_reduced,
        hypothesis: chi_reduced >= chi_original,
    })
}

/// Recomputes every derived field of `plan` and checks that the `S` side has
/// non-positive Euler characteristic whenever the hypothesis holds.
pub fn chi_identity_check(plan: &ReductionPlan) -> bool {
    let chi_original = plan.original.chi();
    let chi_reduced = plan.reduced.chi();
    let consistent = plan.chi_original == chi_original
        && plan.chi_reduced == chi_reduced
        && plan.chi_s == chi_original - chi_reduced
        && plan.hypothesis == (chi_reduced >= chi_original)
        && plan.reduced.degree() == plan.original.degree() - 3 * plan.mu;
    consistent && (!plan.hypothesis || plan.chi_s <= 0)
}

/// A divisor `mu C_0 + b' f` on a ruled surface over an elliptic curve with
/// invariant `e = -C_0^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuledSurfaceDivisor {
    pub mu: i64,
    pub b_prime: i64,
    pub e: i64,
}

impl RuledSurfaceDivisor {
    /// Riemann–Roch on the ruled surface: `(mu + 1)(b' - mu e / 2)`.
    pub fn chi(&self) -> Ratio<i64> {
        Ratio::from_integer(self.mu + 1)
            * (Ratio::from_integer(self.b_prime) - Ratio::new(self.mu * self.e, 2))
    }
}

pub fn ruled_chi(divisor: &RuledSurfaceDivisor) -> Ratio<i64> {
    divisor.chi()
}

/// `h^0` of the original system at general points is at most `h^0` of the
/// reduced system with its points on the cubic.
///
/// The reduced degree must be at least -2. Below that `h^2` of the reduced
/// system no longer vanishes and the Euler characteristic comparison says
/// nothing about sections: `(0; 0^10)` twisted once gives `(-3; (-1)^10)`
/// with equal `chi` but no sections.
pub fn theorem_upper_bound<B: H0Backend>(plan: &ReductionPlan, backend: &B) -> Result<Certificate> {
    if !plan.hypothesis {
        return Err(Error::HypothesisFails {
            reduced: plan.chi_reduced,
            original: plan.chi_original,
        });
    }
    if plan.reduced.degree() < -2 {
        return Err(Error::DegreeTooNegative(plan.reduced.degree()));
    }
    let reduced = backend.certify(&plan.reduced)?;
    let mut cert = Certificate::new(
        Verdict::UpperBound,
        Method::DegenerationBound,
        plan.chi_original,
    );
    cert.h0_bound = reduced.h0_bound;
    cert.reduced = Some(Box::new(reduced));
    Ok(cert)
}

/// Homogeneous case with all `n` points on the cubic at the twist
/// `mu = 1 + (2mn - 6d)/(n - 9)`, which must be a positive integer. There
/// both Euler characteristics agree, so nonspeciality of the reduced system
/// carries over to `(d; m^n)`.
pub fn corollary_nonspecial<B: H0Backend>(
    d: i64,
    n: usize,
    m: i64,
    backend: &B,
) -> Result<Certificate> {
    let mu =
        integral_mu(d, n, m)?.ok_or(Error::Domain("the twist bound is not a positive integer"))?;
    let plan = reduce(&FatPointSystem::homogeneous(d, n, m), n, mu)?;
    let gap = chi_gap(d, n, m, mu)?;
    if gap != 0 || gap != plan.chi_reduced - plan.chi_original {
        return Err(Error::Domain(
            "Euler characteristics disagree at the integral twist",
        ));
    }
    let bound = theorem_upper_bound(&plan, backend)?;
    let reduced = bound
        .reduced
        .expect("bound carries the reduced certificate");
    let chi = plan.chi_original;
    let mut cert = if reduced.verdict == Verdict::NonspecialCertified {
        let h0 = chi.max(0);
        Certificate {
            h0_bound: Some(h0 as u64),
            h1: Some((h0 - chi) as u64),
            ..Certificate::new(Verdict::NonspecialCertified, Method::CorollaryTransfer, chi)
        }
    } else {
        Certificate {
            h0_bound: reduced.h0_bound,
            ..Certificate::new(Verdict::Inconclusive, Method::CorollaryTransfer, chi)
        }
    };
    cert.reduced = Some(reduced);
    Ok(cert)
}

/// Result of scanning the admissible twists for the smallest bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSearch {
    /// Largest twist satisfying the hypothesis.
    pub mu_max: i64,
    /// Twist attaining the best bound, with its certificate.
    pub best: Option<(i64, Certificate)>,
    /// Twists skipped because the reduced matrix exceeded the size cap.
    pub skipped: Vec<i64>,
}

/// Tries every twist `mu` in `0..=mu_max` satisfying the hypothesis, largest
/// first, and keeps the smallest `h^0` bound. Twists whose reduced system
/// has `chi(effective_part)` at or above the current best cannot improve it
/// and are not sampled. Stops early once the bound reaches `max(chi, 0)`.
pub fn best_bound<B: H0Backend>(
    s: &FatPointSystem,
    k: usize,
    backend: &B,
    max_matrix_entries: Option<u64>,
) -> Result<BoundSearch> {
    // chi_gap is a downward parabola in mu (leading coefficient -(k - 9)/2),
    // so the admissible twists form an interval starting at 0
    let mut mu_max = 0;
    while reduce(s, k, mu_max + 1)?.hypothesis {
        mu_max += 1;
    }
    let floor = s.chi().max(0) as u64;
    let mut best: Option<(i64, Certificate)> = None;
    let mut skipped = Vec::new();
    for mu in (0..=mu_max).rev() {
        let plan = reduce(s, k, mu)?;
        if plan.reduced.degree() < -2 {
            continue;
        }
        // h0 of the reduced system is at least chi of its effective part
        let eff_chi = plan.reduced.effective_part().chi();
        if let Some((_, b)) = &best {
            if plan.reduced.degree() >= 0 && b.h0_bound.is_some_and(|h| eff_chi >= h as i64) {
                continue;
            }
        }
        if max_matrix_entries.is_some_and(|cap| plan.reduced_matrix_entries() > cap) {
            skipped.push(mu);
            continue;
        }
        let cert = theorem_upper_bound(&plan, backend)?;
        let Some(h0) = cert.h0_bound else { continue };
        if best.as_ref().is_none_or(|(_, b)| Some(h0) < b.h0_bound) {
            best = Some((mu, cert));
        }
        if h0 <= floor {
            break;
        }
    }
    Ok(BoundSearch {
        mu_max,
        best,
        skipped,
    })
}

impl BoundSearch {
    pub fn h0_bound(&self) -> Option<u64> {
        self.best.as_ref().and_then(|(_, c)| c.h0_bound)
    }
}
