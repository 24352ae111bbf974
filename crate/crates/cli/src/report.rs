//! Verification reports and their JSON form. Numbers are written as
//! decimal strings with 40 significant digits.

use std::collections::BTreeMap;

use catseries_core::closed_form::ClosedForm;
use catseries_core::float::Mag;
use catseries_core::lemmas::CheckOutcome;
use catseries_core::{Error, TrackedReal};
use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;

pub const DIGITS: usize = 40;

pub fn decimal(x: &TrackedReal) -> String {
    x.to_sci_string(DIGITS)
}

pub fn decimal_mag(m: &Mag) -> String {
    m.to_bigfloat().to_sci_string(DIGITS)
}

/// A midpoint and the radius around it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Approx {
    pub value: String,
    pub radius: String,
}

impl Approx {
    pub fn of(x: &TrackedReal) -> Self {
        Self { value: decimal(x), radius: decimal_mag(&x.radius()) }
    }

    pub fn unknown() -> Self {
        Self { value: "nan".into(), radius: "inf".into() }
    }
}

/// A closed form both as text and as its lossless monomial map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbolic {
    pub pretty: String,
    pub terms: BTreeMap<String, String>,
}

impl Symbolic {
    pub fn of(cf: &ClosedForm) -> Self {
        Self { pretty: cf.to_string(), terms: cf.to_key_map().into_iter().collect() }
    }

    pub fn closed_form(&self) -> Result<ClosedForm, Error> {
        ClosedForm::from_key_map(self.terms.iter().map(|(k, v)| (k.as_str(), v.as_str())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub m: i64,
    pub class: String,
    pub tolerance: String,
    pub lhs: Approx,
    pub rhs: Approx,
    pub rhs_symbolic: Symbolic,
    pub abs_diff: String,
    pub terms_used: u64,
    pub strategy: String,
    pub elapsed_ms: u64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl VerificationReport {
    pub fn line(&self) -> String {
        let mut s = format!(
            "{:<5} m={:<2} {} diff={} tol={} terms={} {} {}ms",
            self.family,
            self.m,
            if self.pass { "PASS" } else { "FAIL" },
            short(&self.abs_diff),
            short(&self.tolerance),
            self.terms_used,
            self.strategy,
            self.elapsed_ms
        );
        if let Some(d) = &self.diagnostic {
            s.push_str(" (");
            s.push_str(d);
            s.push(')');
        }
        s
    }
}

/// Three significant digits of a decimal string, for terminal output.
fn short(s: &str) -> String {
    let Some((mant, exp)) = s.split_once('e') else { return s.to_string() };
    let keep: String = mant.chars().take(if mant.starts_with('-') { 5 } else { 4 }).collect();
    format!("{keep}e{exp}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub checked: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl From<&CheckOutcome> for CheckReport {
    fn from(o: &CheckOutcome) -> Self {
        Self { name: o.name.to_string(), checked: o.checked, pass: o.passed(), failures: o.failures.clone() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub checks_pass: usize,
    pub checks_fail: usize,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.fail == 0 && self.checks_fail == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub reports: Vec<VerificationReport>,
    #[serde(default)]
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, reports: Vec<VerificationReport>, checks: Vec<CheckReport>) -> Self {
        let pass = reports.iter().filter(|r| r.pass).count();
        let checks_pass = checks.iter().filter(|c| c.pass).count();
        let summary =
            Summary { pass, fail: reports.len() - pass, checks_pass, checks_fail: checks.len() - checks_pass };
        Self { config, reports, checks, summary }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        serde_json::from_str(s).map_err(|e| Error::Usage(format!("bad report JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_round_trip() {
        let cf: ClosedForm = "12 - 160*pi^-2 + 64*ln2*pi^-2".parse().unwrap();
        let s = Symbolic::of(&cf);
        assert_eq!(s.closed_form().unwrap(), cf);
    }

    #[test]
    fn forty_digits() {
        let x = TrackedReal::from_int(2, 256).div(&TrackedReal::from_int(3, 256)).unwrap();
        let s = decimal(&x);
        assert_eq!(s, "6.666666666666666666666666666666666666667e-1");
    }

    #[test]
    fn short_form() {
        assert_eq!(short("1.234567e-30"), "1.23e-30");
        assert_eq!(short("-1.234567e-30"), "-1.23e-30");
        assert_eq!(short("0"), "0");
    }
}
