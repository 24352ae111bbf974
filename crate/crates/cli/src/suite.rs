//! Running verifications: one `(family, m)` pair, or the whole configured
//! grid on a bounded worker pool together with the exact check suites.

use std::time::Instant;

use catseries_core::catalog::DISPLAYED;
use catseries_core::closed_form::{cf_eval, ClosedForm};
use catseries_core::family::{FamilyDescriptor, FamilyId};
use catseries_core::float::Mag;
use catseries_core::lemmas::{all_checks, CheckOutcome};
use catseries_core::pslq::{parse_basis, recognize};
use catseries_core::rhs::rhs;
use catseries_core::series::{sum_series_with, SumOptions, SumResult};
use catseries_core::{Error, TrackedReal};
use rayon::prelude::*;

use crate::config::SuiteConfig;
use crate::report::{decimal_mag, Approx, CheckReport, SuiteReport, Symbolic, VerificationReport};

/// Summation target relative to the class tolerance, so the truncation
/// radius uses a small part of the budget.
const EPS_FRACTION: f64 = 1.0 / 16.0;

pub fn sum_options(config: &SuiteConfig) -> SumOptions {
    SumOptions { prec: config.precision_bits, max_direct: config.max_terms, ..SumOptions::default() }
}

/// Sum one member and compare it with its closed form. Convergence failures
/// give a failing report carrying the best estimate; configuration and
/// parameter errors are returned before any summation.
pub fn verify(family: FamilyId, m: i64, config: &SuiteConfig) -> Result<VerificationReport, Error> {
    config.validate()?;
    let d = FamilyDescriptor::new(family, m)?;
    let class = d.convergence_class();
    let tol = config.tolerance(class);
    let prec = config.precision_bits;
    let start = Instant::now();
    let cf = rhs(family, m)?;
    let rhs_val = cf_eval(&cf, prec)?;
    let (sum, diagnostic): (Option<SumResult>, Option<String>) =
        match sum_series_with(family, m, tol * EPS_FRACTION, &sum_options(config)) {
            Ok(r) => (Some(r), None),
            Err(Error::Convergence { message, best }) => (best.map(|b| *b), Some(message)),
            Err(e @ (Error::Usage(_) | Error::Domain(_))) => return Err(e),
            Err(e) => (None, Some(e.to_string())),
        };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let mut report = VerificationReport {
        family: family.name().to_string(),
        m,
        class: class.name().to_string(),
        tolerance: format!("{tol:e}"),
        lhs: Approx::unknown(),
        rhs: Approx::of(&rhs_val),
        rhs_symbolic: Symbolic::of(&cf),
        abs_diff: "inf".into(),
        terms_used: 0,
        strategy: "none".into(),
        elapsed_ms,
        pass: false,
        diagnostic: diagnostic.clone(),
    };
    if let Some(s) = sum {
        let diff = Mag::from_bigfloat_up(&s.value.value().sub(rhs_val.value()).abs());
        let allowed = Mag::from_f64_up(tol).add(&s.value.radius()).add(&rhs_val.radius());
        report.lhs = Approx::of(&s.value);
        report.abs_diff = decimal_mag(&diff);
        report.terms_used = s.terms_used;
        report.strategy = s.strategy.name().to_string();
        report.pass = diagnostic.is_none() && diff <= allowed;
    }
    Ok(report)
}

/// Exact agreement of every displayed special case with its family, as a
/// check outcome alongside the lemma suites.
pub fn displayed_identity_check() -> Result<CheckOutcome, Error> {
    let mut out = CheckOutcome { name: "displayed identities", checked: 0, failures: Vec::new() };
    for e in DISPLAYED.iter() {
        out.checked += 1;
        let (a, b) = (e.family_value()?, e.displayed_value()?);
        if a != b {
            out.failures.push(format!("{}: family gives {a}, displayed {b}", e.name));
        }
        out.checked += 1;
        if let Some(msg) = e.check_terms(40)? {
            out.failures.push(msg);
        }
    }
    Ok(out)
}

/// All `(family, m)` pairs of the configured grid, optionally one family only.
pub fn jobs(config: &SuiteConfig, only: Option<FamilyId>) -> Vec<(FamilyId, i64)> {
    FamilyId::ALL
        .iter()
        .filter(|f| only.is_none_or(|o| o == **f))
        .filter_map(|f| config.range(*f).map(|r| (*f, r)))
        .flat_map(|(f, r)| r.iter().map(move |m| (f, m)))
        .collect()
}

/// Verify the grid in parallel and run the exact check suites. Reports come
/// back ordered by `(family, m)` whatever the scheduling.
pub fn run_suite(config: &SuiteConfig, only: Option<FamilyId>, checks: bool) -> Result<SuiteReport, Error> {
    config.validate()?;
    let jobs = jobs(config, only);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let mut reports = pool.install(|| {
        jobs.par_iter()
            .map(|(f, m)| verify(*f, *m, config).map(|r| ((*f, *m), r)))
            .collect::<Result<Vec<_>, Error>>()
    })?;
    reports.sort_by_key(|(k, _)| *k);
    let mut check_reports = Vec::new();
    if checks {
        let mut outcomes = all_checks()?;
        outcomes.push(displayed_identity_check()?);
        check_reports = outcomes.iter().map(CheckReport::from).collect();
    }
    Ok(SuiteReport::new(config.clone(), reports.into_iter().map(|(_, r)| r).collect(), check_reports))
}

/// Sum a member tightly enough for PSLQ at `prec` bits and look for it as a
/// rational combination of the basis.
pub fn recognize_member(
    family: FamilyId,
    m: i64,
    basis: &str,
    prec: u32,
    coeff_bound: u64,
    denom_bound: u64,
) -> Result<(TrackedReal, Option<ClosedForm>), Error> {
    let basis = parse_basis(basis)?;
    let eps = 2f64.powi(12 - prec as i32);
    let opts = SumOptions { prec, ..SumOptions::default() };
    let s = sum_series_with(family, m, eps, &opts)?;
    let found = recognize(&s.value, &basis, coeff_bound, denom_bound)?;
    Ok((s.value, found))
}
