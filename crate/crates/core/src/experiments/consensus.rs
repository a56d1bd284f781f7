//! Running checks over several primes and assembling reports.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::curves::{builtin, Model};
use crate::error::{Error, Result};
use crate::experiments::checks::{Check, RunContext};
use crate::experiments::report::{Cell, CheckReport, Expectation, Outcome, SuiteReport, Verdict};
use crate::par;

/// Seeds tried per prime before a built-in model is given up on.
pub const RESAMPLE_ATTEMPTS: u64 = 4;

#[derive(Clone, Debug)]
pub enum ModelSource {
    /// A built-in model, sampled afresh for every prime.
    Builtin(String),
    /// A fixed model; its prime is the only one used.
    Fixed(Model),
}

impl ModelSource {
    pub fn name(&self) -> &str {
        match self {
            ModelSource::Builtin(name) => name,
            ModelSource::Fixed(m) => m.name(),
        }
    }

    /// The model over `prime`, plus a note when it had to be re-sampled.
    fn instantiate(&self, prime: u64, seed: u64) -> Result<(Model, Option<String>)> {
        match self {
            ModelSource::Fixed(m) => Ok((m.clone(), None)),
            ModelSource::Builtin(name) => {
                let mut last = None;
                for attempt in 0..RESAMPLE_ATTEMPTS {
                    match builtin(name, prime, seed.wrapping_add(attempt)) {
                        Ok(m) => {
                            let note = (attempt > 0)
                                .then(|| format!("p = {prime}: model re-sampled {attempt} time(s)"));
                            return Ok((m, note));
                        }
                        Err(e @ (Error::Sampling(_) | Error::Geometry(_) | Error::Normalization(_))) => {
                            last = Some(e)
                        }
                        Err(e) => return Err(e),
                    }
                }
                Err(last.expect("at least one attempt"))
            }
        }
    }
}

/// Runs `check` on the model over every prime. The verdict is PASS (or
/// INAPPLICABLE) only when every prime agrees on every observed value and
/// on the verdict; otherwise the report is a FAIL and the primes that
/// disagree with the majority are listed as suspect.
pub fn consensus_run(check: &Check, source: &ModelSource, primes: &[u64], ctx: &RunContext) -> CheckReport {
    let start = Instant::now();
    let primes: Vec<u64> = match source {
        ModelSource::Fixed(m) => vec![m.field().modulus()],
        ModelSource::Builtin(_) => primes.to_vec(),
    };
    let runs: Vec<Result<(Outcome, Option<String>)>> = par::map(&primes, ctx.parallel, |&p| {
        let (model, note) = source.instantiate(p, ctx.seed)?;
        let model = match ctx.precision_cap {
            Some(cap) => model.with_precision_cap(cap),
            None => model,
        };
        Ok((check.run(&model, ctx)?, note))
    });
    let mut cells = Vec::new();
    let mut notes = Vec::new();
    let mut expected = Vec::new();
    let mut failed_primes = Vec::new();
    let mut signatures: Vec<(u64, Vec<(String, i64)>, Verdict)> = Vec::new();
    for (&p, run) in primes.iter().zip(runs) {
        match run {
            Err(e) => {
                notes.push(format!("p = {p}: {e}"));
                failed_primes.push(p);
            }
            Ok((outcome, resampled)) => {
                notes.extend(resampled);
                if let Some(reason) = &outcome.inapplicable {
                    notes.push(format!("p = {p}: inapplicable: {reason}"));
                }
                let violations = outcome.violations();
                if !violations.is_empty() {
                    notes.push(format!("p = {p}: unmet: {}", violations.join(", ")));
                }
                notes.extend(outcome.notes.iter().map(|n| format!("p = {p}: {n}")));
                for (label, value) in &outcome.observed {
                    cells.push(Cell {
                        prime: p,
                        label: label.clone(),
                        value: *value,
                    });
                }
                for e in &outcome.expected {
                    if !expected.iter().any(|x: &Expectation| x.label == e.label) {
                        expected.push(e.clone());
                    }
                }
                signatures.push((p, outcome.observed.clone(), outcome.verdict()));
            }
        }
    }
    // majority signature
    let mut counts: BTreeMap<(&Vec<(String, i64)>, Verdict), usize> = BTreeMap::new();
    for (_, obs, v) in &signatures {
        *counts.entry((obs, *v)).or_insert(0) += 1;
    }
    let majority = counts.iter().max_by_key(|(_, &c)| c).map(|(k, _)| k.clone());
    let mut suspect: Vec<u64> = failed_primes;
    if let Some((obs, v)) = &majority {
        for (p, o, w) in &signatures {
            if o != *obs || w != v {
                suspect.push(*p);
            }
        }
    }
    suspect.sort_unstable();
    let verdict = match (&majority, suspect.is_empty()) {
        (Some((_, v)), true) => *v,
        _ => Verdict::Fail,
    };
    if !suspect.is_empty() && signatures.len() > 1 {
        notes.push("primes disagree; per-prime values are listed in the cells".into());
    }
    let mut provenance: Vec<String> = Vec::new();
    for e in &expected {
        if !provenance.contains(&e.provenance) {
            provenance.push(e.provenance.clone());
        }
    }
    CheckReport {
        name: check.name().to_string(),
        model: source.name().to_string(),
        primes,
        cells,
        expected,
        provenance,
        verdict,
        suspect_primes: suspect,
        notes,
        millis: start.elapsed().as_millis() as u64,
    }
}

#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub check: Check,
    pub model: &'static str,
}

pub const SUITE_NAMES: &[&str] = &["default", "controls", "stretch", "all"];

fn entries(list: &[(Check, &[&'static str])]) -> Vec<SuiteEntry> {
    list.iter()
        .flat_map(|(check, models)| models.iter().map(move |&model| SuiteEntry { check: *check, model }))
        .collect()
}

/// The checks of a named suite, in report order.
pub fn suite_entries(name: &str) -> Result<Vec<SuiteEntry>> {
    let default: &[(Check, &[&str])] = &[
        (Check::Structure, &["twisted-cubic", "g2-quartic", "g3-quartic", "g4-quintic", "g5-sextic"]),
        (Check::VanishingBoundary { gonality: None }, &["twisted-cubic", "g3-quartic", "g5-sextic"]),
        (Check::MainTheoremOdd, &["g3-quartic", "g5-sextic", "g4-quintic"]),
        (Check::EvenGenus, &["g4-quintic", "g2-quartic", "g3-quartic"]),
        (Check::DivisorPropagation { max_degree: 3 }, &["g3-quartic"]),
        (Check::TwoPoints, &["g3-quartic", "g5-sextic"]),
        (Check::LemmaMultiplication, &["g3-quartic", "g5-sextic"]),
        (Check::Euler, &["g3-quartic", "g5-sextic"]),
        (Check::Duality, &["g3-quartic", "g5-sextic"]),
        (Check::CanonicalGreen, &["g3-quartic", "g5-sextic"]),
        (Check::DegreeBoundScan, &["g3-quartic"]),
        (Check::RiemannRoch { samples: 50 }, &["g2-quartic", "g3-quartic", "g4-quintic", "g5-sextic"]),
    ];
    let controls: &[(Check, &[&str])] = &[
        (Check::VanishingBoundary { gonality: None }, &["g5-trigonal"]),
        (Check::MainTheoremOdd, &["g5-trigonal"]),
        (Check::TwoPoints, &["g5-trigonal"]),
        (Check::CanonicalGreen, &["g5-trigonal"]),
    ];
    let stretch: &[(Check, &[&str])] = &[
        (Check::VanishingBoundary { gonality: None }, &["g7-septic"]),
        (Check::MainTheoremOdd, &["g7-septic"]),
        (Check::CanonicalGreen, &["g7-septic"]),
    ];
    Ok(match name {
        "default" => entries(default),
        "controls" => entries(controls),
        "stretch" => entries(stretch),
        "all" => [entries(default), entries(controls), entries(stretch)].concat(),
        _ => return Err(Error::Parse(format!("unknown suite {name:?}"))),
    })
}

pub fn run_entries(suite: &str, entries: &[SuiteEntry], primes: &[u64], ctx: &RunContext) -> SuiteReport {
    let reports = entries
        .iter()
        .map(|e| consensus_run(&e.check, &ModelSource::Builtin(e.model.to_string()), primes, ctx))
        .collect();
    SuiteReport {
        suite: suite.to_string(),
        seed: ctx.seed,
        reports,
    }
}

pub fn run_suite(name: &str, primes: &[u64], ctx: &RunContext) -> Result<SuiteReport> {
    Ok(run_entries(name, &suite_entries(name)?, primes, ctx))
}
