//! Suite configuration: defaults, `key=value` files, and the
//! `CATSERIES_PREC` environment override.

use std::collections::BTreeMap;
use std::path::PathBuf;

use catseries_core::family::{ConvergenceClass, FamilyId};
use catseries_core::Error;
use serde::{Deserialize, Serialize};

pub const PREC_ENV: &str = "CATSERIES_PREC";

/// An inclusive range of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MRange {
    pub lo: i64,
    pub hi: i64,
}

impl MRange {
    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl std::str::FromStr for MRange {
    type Err = Error;

    /// `A..B` (inclusive) or a single `M`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Usage(format!("bad m range {s:?}, expected A..B or M"));
        let t = s.trim();
        let (lo, hi) = match t.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
            }
            None => {
                let v = t.parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(MRange { lo, hi })
    }
}

impl std::fmt::Display for MRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

pub fn default_range(f: FamilyId) -> MRange {
    use FamilyId::*;
    let (lo, hi) = match f {
        F1 | F2 | F3 | F4 | F5 | F6 | F7 | F11 => (0, 5),
        F1a | F3a | F11a | F11b => (0, 3),
        F1b | F3b => (1, 3),
        F8 | F9 => (0, 4),
        F10 => (1, 5),
    };
    MRange { lo, hi }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub precision_bits: u32,
    #[serde(with = "float_string")]
    pub tolerance_fast: f64,
    #[serde(with = "float_string")]
    pub tolerance_accelerated: f64,
    #[serde(with = "float_string")]
    pub tolerance_slow: f64,
    pub ranges: BTreeMap<String, MRange>,
    /// Term budget for direct summation.
    pub max_terms: u64,
    pub parallelism: usize,
    pub output: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            precision_bits: 256,
            tolerance_fast: ConvergenceClass::Fast.default_tolerance(),
            tolerance_accelerated: ConvergenceClass::Accelerated.default_tolerance(),
            tolerance_slow: ConvergenceClass::SlowMonotone.default_tolerance(),
            ranges: FamilyId::ALL.iter().map(|f| (f.name().to_string(), default_range(*f))).collect(),
            max_terms: 200_000,
            parallelism: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8),
            output: None,
        }
    }
}

impl SuiteConfig {
    /// Defaults with the precision taken from `CATSERIES_PREC` when set.
    pub fn from_env() -> Result<Self, Error> {
        let mut c = Self::default();
        if let Ok(v) = std::env::var(PREC_ENV) {
            c.precision_bits = parse_prec(&v)?;
        }
        Ok(c)
    }

    /// Apply `key=value` lines on top of `self`. Blank lines and `#`
    /// comments are skipped; ranges use `range.F1 = 0..5`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), Error> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v.trim()).map_err(|e| match e {
                Error::Usage(m) => Error::Usage(format!("line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| Error::Usage(format!("{key}: bad number {v:?}")));
        let int = |v: &str| v.parse::<u64>().map_err(|_| Error::Usage(format!("{key}: bad integer {v:?}")));
        match key {
            "precision_bits" => self.precision_bits = parse_prec(value)?,
            "tolerance_fast" => self.tolerance_fast = num(value)?,
            "tolerance_accelerated" => self.tolerance_accelerated = num(value)?,
            "tolerance_slow" => self.tolerance_slow = num(value)?,
            "tolerance" => self.set_tolerance(num(value)?),
            "max_terms" => self.max_terms = int(value)?,
            "parallelism" => self.parallelism = int(value)?.max(1) as usize,
            "output" => self.output = Some(PathBuf::from(value)),
            _ => {
                let Some(name) = key.strip_prefix("range.") else {
                    return Err(Error::Usage(format!("unknown key {key:?}")));
                };
                let f: FamilyId = name.parse()?;
                self.ranges.insert(f.name().to_string(), value.parse()?);
            }
        }
        Ok(())
    }

    /// The same tolerance for every class.
    pub fn set_tolerance(&mut self, tol: f64) {
        self.tolerance_fast = tol;
        self.tolerance_accelerated = tol;
        self.tolerance_slow = tol;
    }

    pub fn tolerance(&self, class: ConvergenceClass) -> f64 {
        match class {
            ConvergenceClass::Fast => self.tolerance_fast,
            ConvergenceClass::Accelerated => self.tolerance_accelerated,
            ConvergenceClass::SlowMonotone => self.tolerance_slow,
        }
    }

    pub fn range(&self, f: FamilyId) -> Option<MRange> {
        self.ranges.get(f.name()).copied()
    }

    /// Every tolerance must sit above `2^(-precision_bits + 32)`, and every
    /// range must start at or above the family minimum.
    pub fn validate(&self) -> Result<(), Error> {
        if self.precision_bits < 64 {
            return Err(Error::Usage(format!("precision {} is below 64 bits", self.precision_bits)));
        }
        let floor = 2f64.powi(32 - self.precision_bits as i32);
        for (name, t) in [
            ("tolerance_fast", self.tolerance_fast),
            ("tolerance_accelerated", self.tolerance_accelerated),
            ("tolerance_slow", self.tolerance_slow),
        ] {
            if !(t > floor) || !t.is_finite() {
                return Err(Error::Usage(format!(
                    "{name} = {t:e} is not above the precision floor 2^{} = {floor:e}",
                    32 - self.precision_bits as i64
                )));
            }
        }
        for (name, r) in &self.ranges {
            let f: FamilyId = name.parse()?;
            if r.lo < f.min_m() {
                return Err(Error::Usage(format!("{f} needs m >= {}, range is {r}", f.min_m())));
            }
        }
        if self.parallelism == 0 {
            return Err(Error::Usage("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}

/// Floats as decimal strings; `{:e}` is the shortest form that parses back
/// to the same value.
mod float_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:e}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

fn parse_prec(v: &str) -> Result<u32, Error> {
    v.trim().parse().map_err(|_| Error::Usage(format!("bad precision {v:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("0..5".parse::<MRange>().unwrap(), MRange { lo: 0, hi: 5 });
        assert_eq!("3".parse::<MRange>().unwrap(), MRange { lo: 3, hi: 3 });
        assert_eq!("1..=2".parse::<MRange>().unwrap(), MRange { lo: 1, hi: 2 });
        assert!("5..1".parse::<MRange>().is_err());
    }

    #[test]
    fn default_grid_size() {
        let c = SuiteConfig::default();
        let n: i64 = c.ranges.values().map(|r| r.hi - r.lo + 1).sum();
        assert_eq!(n, 85);
        c.validate().unwrap();
    }

    #[test]
    fn text_overrides() {
        let mut c = SuiteConfig::default();
        c.apply_text("# comment\nprecision_bits = 320\nrange.F8 = 1..2\ntolerance_slow=1e-9\n").unwrap();
        assert_eq!(c.precision_bits, 320);
        assert_eq!(c.range(FamilyId::F8), Some(MRange { lo: 1, hi: 2 }));
        assert_eq!(c.tolerance_slow, 1e-9);
        assert!(c.apply_text("nonsense").is_err());
        assert!(c.apply_text("colour = red").is_err());
    }

    #[test]
    fn tolerance_floor() {
        let mut c = SuiteConfig { precision_bits: 128, ..SuiteConfig::default() };
        c.set_tolerance(1e-60);
        assert!(matches!(c.validate(), Err(Error::Usage(_))));
        c.set_tolerance(1e-20);
        c.validate().unwrap();
    }

    #[test]
    fn range_below_family_minimum() {
        let mut c = SuiteConfig::default();
        c.set("range.F10", "0..2").unwrap();
        assert!(c.validate().is_err());
    }
}
