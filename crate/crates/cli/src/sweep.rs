//! Batch evaluation of homogeneous systems `(d; m^n)` over ranges.

use std::io::Write;
use std::ops::RangeInclusive;

use anyhow::Result;
use fatpoint_core::elliptic::{corollary_nonspecial, integral_mu, mu_bound, reduce};
use fatpoint_core::interp::Certificate;
use fatpoint_core::linsys::FatPointSystem;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::store::{content_key, RecordConfig, Store, StoreRecord};

pub const SWEEP_COMMAND: &str = "sweep";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Certified { certificate: Certificate },
    Skipped { reason: String },
    Failed { error: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub d: i64,
    pub n: usize,
    pub m: i64,
    pub v: i64,
    pub mu: Option<String>,
    pub integral: Option<bool>,
    pub outcome: Outcome,
    #[serde(skip)]
    pub reused: bool,
}

impl SweepRow {
    pub fn verdict(&self) -> String {
        match &self.outcome {
            Outcome::Certified { certificate } => certificate.verdict.as_str().to_string(),
            Outcome::Skipped { .. } => "skipped".into(),
            Outcome::Failed { .. } => "failed".into(),
        }
    }

    pub fn h0(&self) -> Option<u64> {
        match &self.outcome {
            Outcome::Certified { certificate } => certificate.h0_bound,
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub computed: usize,
    pub reused: usize,
}

/// Corollary first where it applies and fits under the matrix cap, then
/// direct generic sampling under the cap; an undecided corollary result is
/// kept when direct sampling is too large.
pub fn evaluate(d: i64, n: usize, m: i64, config: &RunConfig) -> Outcome {
    match try_evaluate(d, n, m, config) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::Failed {
            error: format!("{e:#}"),
        },
    }
}

fn try_evaluate(d: i64, n: usize, m: i64, config: &RunConfig) -> Result<Outcome> {
    let sampler = config.sampler();
    let cap = config.max_matrix_entries;
    let s = FatPointSystem::homogeneous(d, n, m);

    let mut corollary = None;
    if n >= 10 {
        if let Some(mu) = integral_mu(d, n, m)? {
            let plan = reduce(&s, n, mu)?;
            if plan.reduced_matrix_entries() <= cap && plan.reduced.degree() >= -2 {
                let cert = corollary_nonspecial(d, n, m, &sampler)?;
                if cert.verdict.is_decided() {
                    return Ok(Outcome::Certified { certificate: cert });
                }
                corollary = Some(cert);
            }
        }
    }
    let direct_entries = if d < 0 {
        0
    } else {
        s.conditions_count() * s.monomial_count()
    };
    if direct_entries <= cap && d >= -2 {
        let cert = sampler.certify(&s)?;
        if cert.verdict.is_decided() || corollary.is_none() {
            return Ok(Outcome::Certified { certificate: cert });
        }
    }
    Ok(match corollary {
        Some(cert) => Outcome::Certified { certificate: cert },
        None => Outcome::Skipped {
            reason: format!("matrix exceeds {cap} entries"),
        },
    })
}

/// Evaluates every `(d, n, m)` in the ranges, in `d`, then `n`, then `m`
/// order. Results already in the store are reused; new certificates are
/// appended after all items finish, in input order.
pub fn run_sweep(
    d_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
    config: &RunConfig,
    mut store: Option<&mut Store>,
) -> Result<(Vec<SweepRow>, SweepStats)> {
    let mut items = Vec::new();
    for d in d_range {
        for n in n_range.clone().filter(|&n| n >= 0) {
            for m in m_range.clone() {
                items.push((d, n as usize, m));
            }
        }
    }
    let record_config = RecordConfig::from_run(config, true);
    let cached: Vec<Option<Certificate>> = items
        .iter()
        .map(|&(d, n, m)| {
            let key = content_key(
                SWEEP_COMMAND,
                &FatPointSystem::homogeneous(d, n, m),
                &record_config,
            );
            store
                .as_ref()
                .and_then(|st| st.lookup(&key))
                .map(|r| r.certificate.clone())
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()?;
    let rows: Vec<SweepRow> = pool.install(|| {
        items
            .par_iter()
            .zip(cached.into_par_iter())
            .map(|(&(d, n, m), cached)| {
                let s = FatPointSystem::homogeneous(d, n, m);
                let bound = (n >= 10).then(|| mu_bound(d, n, m).expect("n >= 10"));
                let reused = cached.is_some();
                let outcome = match cached {
                    Some(certificate) => Outcome::Certified { certificate },
                    None => evaluate(d, n, m, config),
                };
                SweepRow {
                    d,
                    n,
                    m,
                    v: s.expected_dim(),
                    mu: bound.map(|b| b.to_string()),
                    integral: bound.map(|b| b.is_integer()),
                    outcome,
                    reused,
                }
            })
            .collect()
    });

    let mut stats = SweepStats::default();
    for row in &rows {
        if row.reused {
            stats.reused += 1;
            continue;
        }
        if let Outcome::Certified { certificate } = &row.outcome {
            stats.computed += 1;
            if let Some(st) = store.as_deref_mut() {
                st.append(StoreRecord::new(
                    SWEEP_COMMAND,
                    FatPointSystem::homogeneous(row.d, row.n, row.m),
                    record_config.clone(),
                    certificate.clone(),
                ))?;
            }
        }
    }
    Ok((rows, stats))
}

pub const CSV_HEADER: [&str; 8] = ["d", "n", "m", "v", "mu", "integral", "verdict", "h0"];

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record([
            row.d.to_string(),
            row.n.to_string(),
            row.m.to_string(),
            row.v.to_string(),
            row.mu.clone().unwrap_or_default(),
            row.integral.map(|b| b.to_string()).unwrap_or_default(),
            row.verdict(),
            row.h0().map(|h| h.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
