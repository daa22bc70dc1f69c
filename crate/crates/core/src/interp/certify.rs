use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::conditions::{h0_at_sample, RankReport};
use super::config::PointConfig;
use crate::gfmat::PrimeField;
use crate::linsys::{FatPointSystem, Placement};
use crate::{Error, Result};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TRIALS: u32 = 3;

/// Trials needed before a repeated rank deficit is reported as suspected
/// speciality rather than left inconclusive.
const SUSPECT_QUORUM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NonspecialCertified,
    SpecialExact,
    SpecialSuspected,
    Inconclusive,
    UpperBound,
}

impl Verdict {
    /// Whether the verdict settles speciality of the system it was issued for.
    pub fn is_decided(self) -> bool {
        matches!(self, Verdict::NonspecialCertified | Verdict::SpecialExact)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NonspecialCertified => "nonspecial-certified",
            Verdict::SpecialExact => "special-exact",
            Verdict::SpecialSuspected => "special-suspected",
            Verdict::Inconclusive => "inconclusive",
            Verdict::UpperBound => "upper-bound",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Rank at points in general position.
    DirectGeneric,
    /// Rank with some points on a smooth cubic.
    DirectOnCubic,
    /// Nonspeciality transferred from the reduced system at the integral
    /// twist where both Euler characteristics agree.
    CorollaryTransfer,
    /// `h^0` of the reduced system as an upper bound for the original.
    DegenerationBound,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::DirectGeneric => "direct-generic",
            Method::DirectOnCubic => "direct-on-cubic",
            Method::CorollaryTransfer => "corollary-transfer",
            Method::DegenerationBound => "degeneration-bound",
        }
    }
}

/// One sampled rank computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(with = "super::decimal")]
    pub prime: u64,
    #[serde(with = "super::decimal")]
    pub seed: u64,
    pub report: RankReport,
}

/// Machine-checkable verdict on a system.
///
/// `h0_bound` is the exact `h^0` for decided verdicts and an upper bound
/// otherwise. `h1` is exact for decided verdicts; for `special-suspected` it is
/// the value observed at the samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub verdict: Verdict,
    pub method: Method,
    pub chi: i64,
    pub h0_bound: Option<u64>,
    pub h1: Option<u64>,
    pub evidence: Vec<Evidence>,
    /// Certificate of the reduced system a derived verdict rests on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Box<Certificate>>,
}

impl Certificate {
    pub(crate) fn new(verdict: Verdict, method: Method, chi: i64) -> Self {
        Self {
            schema_version: CERTIFICATE_SCHEMA_VERSION,
            verdict,
            method,
            chi,
            h0_bound: None,
            h1: None,
            evidence: Vec::new(),
            reduced: None,
        }
    }

    /// Verdict from an exactly known `h^0`, given `h^2 = 0`.
    fn exact(method: Method, chi: i64, h0: u64) -> Self {
        let h1 = (h0 as i64 - chi) as u64;
        let verdict = if h0 > 0 && h1 > 0 {
            Verdict::SpecialExact
        } else {
            Verdict::NonspecialCertified
        };
        Self {
            h0_bound: Some(h0),
            h1: Some(h1),
            ..Self::new(verdict, method, chi)
        }
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under the run seed `seed`.
pub fn trial_seed(seed: u64, index: u32) -> u64 {
    mix(seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Sampling backend: prime, trial count and run seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampler {
    pub field: PrimeField,
    pub trials: u32,
    pub seed: u64,
}

impl Sampler {
    pub fn new(field: PrimeField, trials: u32, seed: u64) -> Self {
        Self {
            field,
            trials,
            seed,
        }
    }

    /// Decides or bounds `h^0`/`h^1` for general points with the tag pattern
    /// of `s`.
    ///
    /// Exact cases need no sampling: a negative degree has no sections, and
    /// a system whose conditions all come from negative multiplicities has
    /// the sections of `O(dH)`. Otherwise trials run in order until one
    /// attains the lower bound `max(chi(effective_part), 0)`; that sample pins
    /// the generic `h^0` because rank only drops under specialization and
    /// reduction mod p.
    pub fn certify(&self, s: &FatPointSystem) -> Result<Certificate> {
        if self.trials == 0 {
            return Err(Error::NoTrials);
        }
        let d = s.degree();
        if d < -2 {
            return Err(Error::DegreeTooNegative(d));
        }
        let method = if s.all_generic() {
            Method::DirectGeneric
        } else {
            Method::DirectOnCubic
        };
        let chi = s.chi();
        if d < 0 {
            return Ok(Certificate::exact(method, chi, 0));
        }
        let eff = s.effective_part();
        if eff.conditions_count() == 0 {
            return Ok(Certificate::exact(method, chi, eff.monomial_count()));
        }

        let floor = eff.chi().max(0) as u64;
        let tags: Vec<Placement> = s.tags().to_vec();
        let mut evidence = Vec::new();
        for index in 0..self.trials {
            let seed = trial_seed(self.seed, index);
            let cfg = PointConfig::sample(&tags, self.field, seed)?;
            let report = h0_at_sample(s, &cfg)?;
            debug_assert!(report.h0_sample >= floor);
            evidence.push(Evidence {
                prime: self.field.modulus(),
                seed,
                report,
            });
            if report.full_rank {
                let mut cert = Certificate::exact(method, chi, report.h0_sample);
                cert.evidence = evidence;
                return Ok(cert);
            }
        }

        let best = evidence
            .iter()
            .map(|e| e.report.h0_sample)
            .min()
            .expect("trials >= 1");
        let unanimous = evidence.iter().all(|e| e.report.h0_sample == best);
        let mut cert = if unanimous && evidence.len() >= SUSPECT_QUORUM {
            Certificate {
                h1: Some((best as i64 - chi) as u64),
                ..Certificate::new(Verdict::SpecialSuspected, method, chi)
            }
        } else {
            Certificate::new(Verdict::Inconclusive, method, chi)
        };
        cert.h0_bound = Some(best);
        cert.evidence = evidence;
        Ok(cert)
    }
}

pub fn certify(
    s: &FatPointSystem,
    trials: u32,
    field: PrimeField,
    seed: u64,
) -> Result<Certificate> {
    Sampler::new(field, trials, seed).certify(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn hom(d: i64, n: usize, m: i64) -> FatPointSystem {
        FatPointSystem::homogeneous(d, n, m)
    }

    #[test]
    fn negative_degree_is_exact() {
        let c = certify(&hom(-1, 10, -1), 3, field(), 1).unwrap();
        assert_eq!(c.verdict, Verdict::NonspecialCertified);
        assert_eq!((c.chi, c.h0_bound, c.h1), (0, Some(0), Some(0)));
        assert!(c.evidence.is_empty());
    }

    #[test]
    fn fixed_components_only() {
        let c = certify(&hom(3, 10, -2).placed(Placement::OnCubic), 3, field(), 1).unwrap();
        assert_eq!(c.verdict, Verdict::SpecialExact);
        assert_eq!((c.h0_bound, c.h1), (Some(10), Some(10)));
        assert_eq!(c.method, Method::DirectOnCubic);

        let c = certify(&hom(0, 10, -1), 3, field(), 1).unwrap();
        assert_eq!(c.verdict, Verdict::NonspecialCertified);
        assert_eq!(c.h0_bound, Some(1));

        let c = certify(&hom(3, 10, 0), 3, field(), 1).unwrap();
        assert_eq!(
            (c.verdict, c.h0_bound),
            (Verdict::NonspecialCertified, Some(10))
        );
    }

    #[test]
    fn full_rank_stops_early() {
        let c = certify(&hom(13, 10, 4), 3, field(), 5).unwrap();
        assert_eq!(c.verdict, Verdict::NonspecialCertified);
        assert_eq!(c.h0_bound, Some(5));
        assert_eq!(c.evidence.len(), 1);
        assert_eq!(c.evidence[0].report.rank, 100);
    }

    #[test]
    fn double_line_through_two_double_points_is_suspected() {
        // conics singular at two points: the doubled line, chi = 0, h0 = 1
        let c = certify(&hom(2, 2, 2), 3, field(), 9).unwrap();
        assert_eq!(c.verdict, Verdict::SpecialSuspected);
        assert_eq!((c.h0_bound, c.h1), (Some(1), Some(1)));
        assert_eq!(c.evidence.len(), 3);

        let c = certify(&hom(2, 2, 2), 2, field(), 9).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!((c.h0_bound, c.h1), (Some(1), None));
    }

    #[test]
    fn negative_entries_below_minus_one_make_h1() {
        // effective part (2; 1) is nonspecial with h0 = 5, but the -2 entry
        // lowers chi by one more
        let s = FatPointSystem::new(2, vec![1, -2]);
        let c = certify(&s, 3, field(), 1).unwrap();
        assert_eq!(c.chi, 4);
        assert_eq!(
            (c.verdict, c.h0_bound, c.h1),
            (Verdict::SpecialExact, Some(5), Some(1))
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            certify(&hom(-3, 1, 0), 3, field(), 1),
            Err(Error::DegreeTooNegative(-3))
        );
        assert_eq!(certify(&hom(4, 1, 1), 0, field(), 1), Err(Error::NoTrials));
    }

    #[test]
    fn deterministic_json() {
        let a = certify(&hom(10, 11, 3), 3, field(), 42).unwrap();
        let b = certify(&hom(10, 11, 3), 3, field(), 42).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn json_shape() {
        let c = certify(&hom(4, 10, 1), 3, field(), 7).unwrap();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        assert_eq!(v["verdict"], "nonspecial-certified");
        assert_eq!(v["method"], "direct-generic");
        assert_eq!(v["schema_version"], 1);
        assert!(v["evidence"][0]["seed"].is_string());
        assert!(v.get("reduced").is_none());
        let back: Certificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn trial_seeds_differ() {
        let s: Vec<u64> = (0..4).map(|i| trial_seed(0, i)).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(s[i], s[j]);
            }
        }
    }
}
