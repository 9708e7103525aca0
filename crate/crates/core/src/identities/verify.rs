//! Checking cases: left side against right side under a verdict rule.

use super::lhs::{left_side, right_side, EngineBudget};
use super::report::params_json;
use super::{Engine, IdentityCase, RunSettings, Verdict, VerificationRecord};
use crate::error::{Error, Result};
use std::time::Instant;

/// Engines run this much tighter than the verdict tolerance.
const ENGINE_TOL_FACTOR: f64 = 0.1;
/// Tightest relative tolerance handed to quadrature.
const MIN_ENGINE_TOL: f64 = 1e-12;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one case: a hash of its id and canonical parameters mixed with
/// the master seed. Independent of run order and thread count.
pub fn derive_seed(case: &IdentityCase, master_seed: u64) -> u64 {
    let mut key = case.id.as_str().as_bytes().to_vec();
    key.push(0);
    key.extend_from_slice(params_json(case.params()).as_bytes());
    splitmix64(fnv1a(&key) ^ master_seed)
}

/// Checks one case. Engine failures become `engine-error` records.
pub fn verify_case(case: &IdentityCase, run: &RunSettings) -> VerificationRecord {
    let start = Instant::now();
    let tol = run.tol;
    let rel_tol = case.settings.rel_tol.unwrap_or(tol.rel_tol);
    let engine = case.engine();
    let seed = match engine {
        Engine::MonteCarlo => Some(case.settings.seed.unwrap_or_else(|| derive_seed(case, run.master_seed))),
        Engine::Quadrature => None,
    };
    // A vanishing integral is driven by the absolute floor alone.
    let (engine_rel, engine_abs) = if case.id.is_vanishing() {
        (MIN_ENGINE_TOL, ENGINE_TOL_FACTOR * tol.abs_floor)
    } else {
        ((ENGINE_TOL_FACTOR * rel_tol).max(MIN_ENGINE_TOL), 0.0)
    };
    let budget = EngineBudget {
        rel_tol: engine_rel,
        abs_tol: engine_abs,
        samples: case.settings.samples.unwrap_or(run.mc_samples),
        seed: seed.unwrap_or(0),
    };
    let mut record = VerificationRecord {
        id: case.id,
        params: case.params().clone(),
        lhs: None,
        lhs_err: None,
        rhs: None,
        abs_err: None,
        rel_err: None,
        verdict: Verdict::EngineError,
        evals_or_samples: 0,
        seed,
        wall_ms: None,
        error: None,
    };
    let outcome = right_side(case).and_then(|rhs| {
        record.rhs = Some(rhs);
        left_side(case, &budget).map(|lhs| (lhs, rhs))
    });
    match outcome {
        Ok((lhs, rhs)) => {
            let abs_err = (lhs.value - rhs).norm();
            let threshold = match lhs.engine {
                Engine::Quadrature => tol.abs_floor.max(rel_tol * rhs.norm()),
                Engine::MonteCarlo => tol.mc_sigma_multiplier * lhs.err,
            };
            record.lhs = Some(lhs.value);
            record.lhs_err = Some(lhs.err);
            record.abs_err = Some(abs_err);
            record.rel_err = (rhs.norm() > 0.0).then(|| abs_err / rhs.norm());
            record.evals_or_samples = lhs.count;
            record.verdict = if abs_err <= threshold { Verdict::Pass } else { Verdict::Fail };
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    if run.timings {
        record.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    record
}

/// Counts of verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub engine_errors: usize,
}

/// Records of a run, in suite order grouped by identity.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }
}

/// Checks every case in parallel. Records are ordered by identity and then
/// by position in `cases`, whatever the thread count.
pub fn run_suite(cases: &[IdentityCase], run: &RunSettings) -> Result<SuiteReport> {
    use rayon::prelude::*;
    run.tol.validate()?;
    let work = || cases.par_iter().map(|c| verify_case(c, run)).collect::<Vec<_>>();
    let mut records = if run.parallelism == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(run.parallelism)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {} worker threads: {e}", run.parallelism)))?
            .install(work)
    };
    records.sort_by_key(|r| r.id);
    let mut summary = Summary {
        total: records.len(),
        ..Summary::default()
    };
    for r in &records {
        match r.verdict {
            Verdict::Pass => summary.passed += 1,
            Verdict::Fail => summary.failed += 1,
            Verdict::EngineError => summary.engine_errors += 1,
        }
    }
    Ok(SuiteReport { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{CaseSettings, IdentityId};
    use std::f64::consts::PI;

    fn cb(a1: f64) -> IdentityCase {
        IdentityCase::real(
            IdentityId::Cb1,
            &[("alpha1", a1), ("alpha2", 1.0), ("sigma1", 1.0), ("sigma2", 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn cauchy_beta_passes() {
        let r = verify_case(&cb(1.0), &RunSettings::default());
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert!((r.rhs.unwrap().re - PI).abs() < 1e-15);
        assert_eq!(r.seed, None);
        assert_eq!(r.wall_ms, None);
    }

    #[test]
    fn vanishing_case_has_no_relative_error() {
        let c = IdentityCase::real(
            IdentityId::Cb0,
            &[("alpha1", 1.0), ("alpha2", 1.0), ("sigma1", 1.0), ("sigma2", 1.0)],
        )
        .unwrap();
        let r = verify_case(&c, &RunSettings::default());
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        assert_eq!(r.rel_err, None);
        assert!(r.abs_err.unwrap() <= 1e-8);
    }

    #[test]
    fn seeds_depend_on_case_and_master() {
        let a = derive_seed(&cb(1.0), 0);
        assert_eq!(a, derive_seed(&cb(1.0), 0));
        assert_ne!(a, derive_seed(&cb(2.0), 0));
        assert_ne!(a, derive_seed(&cb(1.0), 1));
    }

    #[test]
    fn monte_carlo_case_records_seed() {
        let c = IdentityCase::real(IdentityId::Gd1, &[("d", 1.0), ("alpha", 1.5)])
            .unwrap()
            .with_settings(CaseSettings {
                samples: Some(20_000),
                seed: Some(5),
                ..CaseSettings::default()
            })
            .unwrap();
        let r = verify_case(&c, &RunSettings::default());
        assert_eq!(r.seed, Some(5));
        assert_eq!(r.evals_or_samples, 20_000);
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }

    #[test]
    fn order_and_values_do_not_depend_on_threads() {
        let cases = vec![cb(2.0), cb(1.0), cb(1.5)];
        let one = run_suite(&cases, &RunSettings { parallelism: 1, ..RunSettings::default() }).unwrap();
        let four = run_suite(&cases, &RunSettings { parallelism: 4, ..RunSettings::default() }).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.summary.passed, 3);
        assert_eq!(one.records[0].params, cases[0].params().clone());
    }
}
