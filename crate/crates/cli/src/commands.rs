//! Subcommand implementations. Each returns the text to print and the exit
//! code; printing is left to `main`.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use fatpoint_core::elliptic::{best_bound, mu_bound, reduce, theorem_upper_bound, ReductionPlan};
use fatpoint_core::interp::{Certificate, Verdict};
use fatpoint_core::linsys::FatPointSystem;
use serde_json::json;

use crate::config::{Format, RunConfig};
use crate::exit;
use crate::store::{content_key, RecordConfig, Store, StoreRecord};
use crate::sweep::{run_sweep, write_csv, SweepStats};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub code: i32,
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_lines(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn expdim(s: &FatPointSystem, format: Format) -> Result<Report> {
    let inv = s.invariants();
    let stdout = match format {
        Format::Table => format!(
            "system: {s}\nchi: {}\nv: {}\nmonomials: {}\nconditions: {}\n",
            inv.chi, inv.v, inv.monomials, inv.conditions
        ),
        Format::Json => to_json(&json!({ "system": s, "invariants": inv }))?,
        Format::Csv => csv_lines(
            &["d", "n", "chi", "v", "monomials", "conditions"],
            &[vec![
                s.degree().to_string(),
                s.len().to_string(),
                inv.chi.to_string(),
                inv.v.to_string(),
                inv.monomials.to_string(),
                inv.conditions.to_string(),
            ]],
        )?,
    };
    Ok(Report {
        stdout,
        code: exit::DECIDED,
    })
}

fn describe_certificate(out: &mut String, cert: &Certificate, indent: &str) {
    let _ = writeln!(out, "{indent}verdict: {}", cert.verdict.as_str());
    let _ = writeln!(out, "{indent}method: {}", cert.method.as_str());
    let _ = writeln!(out, "{indent}chi: {}", cert.chi);
    let _ = writeln!(out, "{indent}h0: {}", opt(cert.h0_bound));
    let _ = writeln!(out, "{indent}h1: {}", opt(cert.h1));
    for e in &cert.evidence {
        let r = &e.report;
        let _ = writeln!(
            out,
            "{indent}trial: prime {} seed {} rank {} of {} conditions on {} monomials{}",
            e.prime,
            e.seed,
            r.rank,
            r.conditions,
            r.monomials,
            if r.full_rank { " (full rank)" } else { "" }
        );
    }
    if let Some(reduced) = &cert.reduced {
        let _ = writeln!(out, "{indent}reduced system:");
        describe_certificate(out, reduced, &format!("{indent}  "));
    }
}

fn certificate_exit(cert: &Certificate) -> i32 {
    if cert.verdict.is_decided() {
        exit::DECIDED
    } else {
        exit::UNDECIDED
    }
}

pub fn certify(s: &FatPointSystem, config: &RunConfig, format: Format) -> Result<Report> {
    const COMMAND: &str = "certify";
    let record_config = RecordConfig::from_run(config, false);
    let mut store = config.store.as_deref().map(Store::open).transpose()?;
    let key = content_key(COMMAND, s, &record_config);
    let cert = match store.as_ref().and_then(|st| st.lookup(&key)) {
        Some(record) => record.certificate.clone(),
        None => {
            let cert = config.sampler().certify(s)?;
            if let Some(st) = store.as_mut() {
                st.append(StoreRecord::new(
                    COMMAND,
                    s.clone(),
                    record_config,
                    cert.clone(),
                ))?;
            }
            cert
        }
    };
    let stdout = match format {
        Format::Table => {
            let mut out = format!("system: {s}\n");
            describe_certificate(&mut out, &cert, "");
            out
        }
        Format::Json => to_json(&json!({ "system": s, "certificate": cert }))?,
        Format::Csv => csv_lines(
            &["verdict", "method", "chi", "h0", "h1", "trials"],
            &[vec![
                cert.verdict.as_str().into(),
                cert.method.as_str().into(),
                cert.chi.to_string(),
                cert.h0_bound.map(|v| v.to_string()).unwrap_or_default(),
                cert.h1.map(|v| v.to_string()).unwrap_or_default(),
                cert.evidence.len().to_string(),
            ]],
        )?,
    };
    Ok(Report {
        stdout,
        code: certificate_exit(&cert),
    })
}

/// Twist `(d; m^n)` by `mu` (default: the largest admissible integer) with
/// all points moved to the cubic, and report the plan.
pub fn reduce_cmd(
    d: i64,
    n: usize,
    m: i64,
    mu: Option<i64>,
    config: &RunConfig,
    format: Format,
) -> Result<Report> {
    let bound = mu_bound(d, n, m)?;
    let integral = bound.is_integer();
    let mu = mu.unwrap_or_else(|| bound.floor().to_integer().max(0));
    let plan = reduce(&FatPointSystem::homogeneous(d, n, m), n, mu)?;

    // status of the reduced system when it is cheap to decide
    let reduced_cert = if plan.reduced.degree() >= -2
        && plan.reduced_matrix_entries() <= config.max_matrix_entries
    {
        Some(config.sampler().certify(&plan.reduced)?)
    } else {
        None
    };

    let stdout = match format {
        Format::Table => reduce_table(&plan, &bound.to_string(), integral, reduced_cert.as_ref()),
        Format::Json => to_json(&json!({
            "mu_bound": bound.to_string(),
            "integral": integral,
            "plan": plan,
            "reduced_certificate": reduced_cert,
        }))?,
        Format::Csv => csv_lines(
            &[
                "d",
                "n",
                "m",
                "mu_bound",
                "integral",
                "mu",
                "reduced",
                "chi_original",
                "chi_reduced",
                "chi_s",
                "hypothesis",
                "reduced_verdict",
            ],
            &[vec![
                d.to_string(),
                n.to_string(),
                m.to_string(),
                bound.to_string(),
                integral.to_string(),
                mu.to_string(),
                plan.reduced.to_string(),
                plan.chi_original.to_string(),
                plan.chi_reduced.to_string(),
                plan.chi_s.to_string(),
                plan.hypothesis.to_string(),
                reduced_cert
                    .as_ref()
                    .map(|c| c.verdict.as_str().to_string())
                    .unwrap_or_default(),
            ]],
        )?,
    };
    Ok(Report {
        stdout,
        code: exit::DECIDED,
    })
}

fn reduce_table(
    plan: &ReductionPlan,
    bound: &str,
    integral: bool,
    reduced: Option<&Certificate>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "system: {}", plan.original);
    let _ = writeln!(out, "mu_bound: {bound}");
    let _ = writeln!(out, "integral: {integral}");
    let _ = writeln!(out, "mu: {}", plan.mu);
    let _ = writeln!(out, "reduced: {}", plan.reduced);
    let _ = writeln!(out, "chi_original: {}", plan.chi_original);
    let _ = writeln!(out, "chi_reduced: {}", plan.chi_reduced);
    let _ = writeln!(out, "chi_s: {}", plan.chi_s);
    let _ = writeln!(out, "hypothesis: {}", plan.hypothesis);
    if let Some(c) = reduced {
        let _ = writeln!(
            out,
            "reduced_verdict: {} (h0 {}, h1 {})",
            c.verdict.as_str(),
            opt(c.h0_bound),
            opt(c.h1)
        );
        if matches!(c.verdict, Verdict::SpecialExact | Verdict::SpecialSuspected) {
            let _ = writeln!(
                out,
                "warning: reduced system is special (h0 = {}, h1 = {})",
                opt(c.h0_bound),
                opt(c.h1)
            );
        }
    }
    out
}

/// Best `h^0` upper bound for `(d; m^n)` over the admissible twists.
pub fn bound(
    d: i64,
    n: usize,
    m: i64,
    mu: Option<i64>,
    config: &RunConfig,
    format: Format,
) -> Result<Report> {
    let s = FatPointSystem::homogeneous(d, n, m);
    let sampler = config.sampler();
    let (mu_max, best, skipped) = match mu {
        Some(mu) => {
            let plan = reduce(&s, n, mu)?;
            let cert = theorem_upper_bound(&plan, &sampler)?;
            (mu, Some((mu, cert)), Vec::new())
        }
        None => {
            let search = best_bound(&s, n, &sampler, Some(config.max_matrix_entries))?;
            (search.mu_max, search.best, search.skipped)
        }
    };
    let h0 = best.as_ref().and_then(|(_, c)| c.h0_bound);
    let code = if h0.is_some() {
        exit::DECIDED
    } else {
        exit::UNDECIDED
    };
    let stdout = match format {
        Format::Table => {
            let mut out = format!("system: {s}\n");
            match &best {
                Some((mu, cert)) => {
                    let _ = writeln!(out, "h0 <= {} (mu = {mu})", opt(cert.h0_bound));
                    let _ = writeln!(out, "expected h0: {}", s.chi().max(0));
                }
                None => {
                    let _ = writeln!(out, "unbounded by this method");
                }
            }
            let _ = writeln!(out, "admissible mu: 0..={mu_max}");
            if !skipped.is_empty() {
                let _ = writeln!(out, "skipped (matrix cap): {}", skipped.len());
            }
            out
        }
        Format::Json => to_json(&json!({
            "system": s,
            "h0_bound": h0,
            "mu": best.as_ref().map(|(mu, _)| mu),
            "mu_max": mu_max,
            "skipped": skipped,
            "certificate": best.as_ref().map(|(_, c)| c),
        }))?,
        Format::Csv => csv_lines(
            &["d", "n", "m", "mu", "h0_bound"],
            &[vec![
                d.to_string(),
                n.to_string(),
                m.to_string(),
                best.as_ref()
                    .map(|(mu, _)| mu.to_string())
                    .unwrap_or_default(),
                h0.map(|h| h.to_string()).unwrap_or_default(),
            ]],
        )?,
    };
    Ok(Report { stdout, code })
}

pub fn sweep(
    d: std::ops::RangeInclusive<i64>,
    n: std::ops::RangeInclusive<i64>,
    m: std::ops::RangeInclusive<i64>,
    config: &RunConfig,
    format: Format,
) -> Result<(Report, SweepStats)> {
    let mut store = config.store.as_deref().map(Store::open).transpose()?;
    let (rows, stats) = run_sweep(d, n, m, config, store.as_mut())?;
    let stdout = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Json => to_json(&rows)?,
        Format::Table => {
            let mut out = format!(
                "{:>5} {:>4} {:>4} {:>7} {:>8} {:>8}  {:<22} {:>6}\n",
                "d", "n", "m", "v", "mu", "integral", "verdict", "h0"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>5} {:>4} {:>4} {:>7} {:>8} {:>8}  {:<22} {:>6}",
                    r.d,
                    r.n,
                    r.m,
                    r.v,
                    r.mu.as_deref().unwrap_or("-"),
                    r.integral.map_or("-".into(), |b| b.to_string()),
                    r.verdict(),
                    opt(r.h0())
                );
            }
            out
        }
    };
    Ok((
        Report {
            stdout,
            code: exit::DECIDED,
        },
        stats,
    ))
}

/// Builds a system from positional arguments or a JSON file.
pub fn system_from_args(
    degree: Option<i64>,
    mults: &[String],
    input: Option<&std::path::Path>,
) -> Result<FatPointSystem> {
    match (input, degree) {
        (Some(path), None) if mults.is_empty() => {
            let text = std::fs::read_to_string(path)?;
            Ok(serde_json::from_str(&text)?)
        }
        (Some(_), _) => bail!("give either a degree with multiplicities or --input, not both"),
        (None, Some(d)) => Ok(FatPointSystem::new(d, crate::parse::parse_mults(mults)?)),
        (None, None) => bail!("missing degree"),
    }
}
