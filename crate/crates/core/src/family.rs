//! The seventeen series families and their exact terms.
//!
//! Every family sums, from its start index, terms of the shape
//! `s^k (base_k * P(k, n))^p * weight(k)` where `base_k` is `C_k / 4^k` or
//! `binom(2k, k) / 4^k`, `P(k, n) = prod_{j=1}^{n} 1/(2k-2j+1)`, `s` is 1 or -1
//! and the weight is 1, a linear factor `4k - 2n + c`, an odd harmonic number
//! `O_{k-n}`, or a combination of the two.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::combinatorics::{big, catalan, central_binomial, int, odd_harmonic, odd_product, rat};
use crate::error::{usage, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    F1,
    F1a,
    F1b,
    F2,
    F3,
    F3a,
    F3b,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F11a,
    F11b,
}

impl FamilyId {
    pub const ALL: [FamilyId; 17] = [
        FamilyId::F1,
        FamilyId::F1a,
        FamilyId::F1b,
        FamilyId::F2,
        FamilyId::F3,
        FamilyId::F3a,
        FamilyId::F3b,
        FamilyId::F4,
        FamilyId::F5,
        FamilyId::F6,
        FamilyId::F7,
        FamilyId::F8,
        FamilyId::F9,
        FamilyId::F10,
        FamilyId::F11,
        FamilyId::F11a,
        FamilyId::F11b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::F1 => "F1",
            FamilyId::F1a => "F1a",
            FamilyId::F1b => "F1b",
            FamilyId::F2 => "F2",
            FamilyId::F3 => "F3",
            FamilyId::F3a => "F3a",
            FamilyId::F3b => "F3b",
            FamilyId::F4 => "F4",
            FamilyId::F5 => "F5",
            FamilyId::F6 => "F6",
            FamilyId::F7 => "F7",
            FamilyId::F8 => "F8",
            FamilyId::F9 => "F9",
            FamilyId::F10 => "F10",
            FamilyId::F11 => "F11",
            FamilyId::F11a => "F11a",
            FamilyId::F11b => "F11b",
        }
    }

    /// Smallest valid parameter.
    pub fn min_m(self) -> i64 {
        match self {
            FamilyId::F1b | FamilyId::F3b | FamilyId::F10 => 1,
            _ => 0,
        }
    }

    pub fn check_m(self, m: i64) -> Result<()> {
        if m < self.min_m() {
            return Err(usage(format!("{} needs m >= {}, got {m}", self.name(), self.min_m())));
        }
        if m > 1000 {
            return Err(usage(format!("m = {m} is beyond the supported range")));
        }
        Ok(())
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| usage(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Base {
    /// `C_k / 4^k`
    Catalan,
    /// `binom(2k, k) / 4^k`
    CentralBinomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Plain,
    /// `4k - 2n + c`
    Linear { c: i64 },
    /// `O_{k-n}`
    Harmonic,
    /// `(4k - 2n + c) O_{k-n} + offset`
    LinearHarmonic { c: i64, offset: BigRational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    PositiveTail,
    Alternating,
}

/// How hard a member is to sum, which fixes its verification tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConvergenceClass {
    Fast,
    Accelerated,
    SlowMonotone,
}

impl ConvergenceClass {
    pub fn name(self) -> &'static str {
        match self {
            ConvergenceClass::Fast => "fast",
            ConvergenceClass::Accelerated => "accelerated",
            ConvergenceClass::SlowMonotone => "slow-monotone",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            ConvergenceClass::Fast => 1e-25,
            ConvergenceClass::Accelerated => 1e-12,
            ConvergenceClass::SlowMonotone => 1e-8,
        }
    }
}

impl fmt::Display for ConvergenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One family at one parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDescriptor {
    pub id: FamilyId,
    pub m: i64,
    /// Number of factors in the odd product.
    pub n: i64,
    pub base: Base,
    pub power: u32,
    pub alternating: bool,
    pub weight: Weight,
    pub start: i64,
}

impl FamilyDescriptor {
    pub fn new(id: FamilyId, m: i64) -> Result<Self> {
        id.check_m(m)?;
        use FamilyId::*;
        let n = match id {
            F1a | F3a | F11a => 2 * m,
            F1b | F3b => 2 * m - 1,
            F11b => 2 * m + 1,
            _ => m,
        };
        let base = match id {
            F8 | F9 | F10 | F11 | F11a | F11b => Base::CentralBinomial,
            _ => Base::Catalan,
        };
        let power = match id {
            F6 | F7 | F10 => 4,
            _ => 3,
        };
        let alternating = matches!(id, F2 | F5 | F8 | F9);
        let weight = match id {
            F1 | F1a | F1b | F11 | F11a | F11b => Weight::Plain,
            F2 | F3 | F3a | F3b | F6 => Weight::Linear { c: 3 },
            F8 | F10 => Weight::Linear { c: 1 },
            F4 => Weight::Harmonic,
            F5 => Weight::LinearHarmonic { c: 3, offset: rat(1, 3) },
            F7 => Weight::LinearHarmonic { c: 3, offset: rat(1, 4) },
            F9 => Weight::LinearHarmonic { c: 1, offset: rat(1, 3) },
        };
        let start = match id {
            F4 | F5 | F7 | F9 => m,
            _ => 0,
        };
        Ok(Self { id, m, n, base, power, alternating, weight, start })
    }

    /// Slow: the members listed as slow plus any positive member with
    /// `alpha < 5/2`; accelerated: the other alternating members.
    pub fn convergence_class(&self) -> ConvergenceClass {
        use FamilyId::*;
        let listed = matches!((self.id, self.m), (F11, 0) | (F11a, 0) | (F1b, 1) | (F9, 0));
        if listed || (!self.alternating && self.decay_exponent() < rat(5, 2)) {
            ConvergenceClass::SlowMonotone
        } else if self.alternating {
            ConvergenceClass::Accelerated
        } else {
            ConvergenceClass::Fast
        }
    }

    pub fn sign_class(&self) -> SignClass {
        if self.alternating {
            SignClass::Alternating
        } else {
            SignClass::PositiveTail
        }
    }

    /// `alpha` with `|t_k| ~ k^(-alpha)` (up to a logarithm for harmonic weights).
    pub fn decay_exponent(&self) -> BigRational {
        let beta = match self.base {
            Base::Catalan => rat(3, 2),
            Base::CentralBinomial => rat(1, 2),
        };
        let a = (beta + int(self.n)) * int(self.power as i64);
        match self.weight {
            Weight::Linear { .. } | Weight::LinearHarmonic { .. } => a - int(1),
            _ => a,
        }
    }

    pub fn decay_exponent_f64(&self) -> f64 {
        let a = self.decay_exponent();
        num_traits::ToPrimitive::to_f64(&a).unwrap()
    }

    pub fn has_log_factor(&self) -> bool {
        matches!(self.weight, Weight::Harmonic | Weight::LinearHarmonic { .. })
    }

    /// `base_k`, exact.
    pub fn base_value(&self, k: i64) -> BigRational {
        let k = k as usize;
        let num = match self.base {
            Base::Catalan => catalan(k),
            Base::CentralBinomial => central_binomial(k),
        };
        big(&num) / BigRational::from_integer(BigInt::one() << (2 * k))
    }

    /// `base_{k+1} P(k+1, n) / (base_k P(k, n))`.
    pub fn core_ratio(&self, k: i64) -> BigRational {
        let den = match self.base {
            Base::Catalan => 2 * (k + 2),
            Base::CentralBinomial => 2 * (k + 1),
        };
        rat(2 * k - 2 * self.n + 1, den)
    }

    /// `base_k P(k, n)`, exact.
    pub fn core(&self, k: i64) -> BigRational {
        self.base_value(k) * odd_product(k, self.n)
    }

    pub fn linear(&self, k: i64) -> Option<i64> {
        match self.weight {
            Weight::Linear { c } | Weight::LinearHarmonic { c, .. } => Some(4 * k - 2 * self.n + c),
            _ => None,
        }
    }

    /// The term formula at any `k >= 0`, ignoring the start index; odd
    /// harmonic numbers at negative index use `O_{-j} = O_j`.
    pub fn term_unchecked(&self, k: i64) -> BigRational {
        let mut t = Pow::pow(self.core(k), self.power);
        if self.alternating && k % 2 == 1 {
            t = -t;
        }
        let w = match &self.weight {
            Weight::Plain => BigRational::one(),
            Weight::Linear { c } => int(4 * k - 2 * self.n + c),
            Weight::Harmonic => odd_harmonic(k - self.n),
            Weight::LinearHarmonic { c, offset } => {
                int(4 * k - 2 * self.n + c) * odd_harmonic(k - self.n) + offset
            }
        };
        t * w
    }

    /// Sum of the term formula over `0 <= k < start`; the right-hand sides of
    /// the shifted families subtract this.
    pub fn head_correction(&self) -> BigRational {
        let mut s = BigRational::zero();
        for k in 0..self.start {
            s += self.term_unchecked(k);
        }
        s
    }
}

/// Exact term `t_k` of a family.
pub fn term(family: FamilyId, m: i64, k: i64) -> Result<BigRational> {
    let d = FamilyDescriptor::new(family, m)?;
    if k < d.start {
        return Err(usage(format!("{family} at m = {m} starts at k = {}, got k = {k}", d.start)));
    }
    Ok(d.term_unchecked(k))
}

/// Exact partial sum `sum_{k=start}^{N} t_k`.
pub fn partial_sum(family: FamilyId, m: i64, n: i64) -> Result<BigRational> {
    let d = FamilyDescriptor::new(family, m)?;
    if n < d.start {
        return Err(usage(format!("{family} at m = {m} starts at k = {}, got N = {n}", d.start)));
    }
    let mut s = BigRational::zero();
    for k in d.start..=n {
        s += d.term_unchecked(k);
    }
    Ok(s)
}

pub fn describe(d: &FamilyDescriptor) -> String {
    format!(
        "{} m={} n={} p={} {} start={} alpha={}",
        d.id,
        d.m,
        d.n,
        d.power,
        if d.alternating { "alternating" } else { "positive" },
        d.start,
        d.decay_exponent()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use FamilyId::*;

    #[test]
    fn sample_terms_and_sums() {
        assert_eq!(term(F1a, 0, 0).unwrap(), int(1));
        assert_eq!(term(F2, 0, 1).unwrap(), rat(-7, 64));
        assert_eq!(term(F8, 0, 1).unwrap(), rat(-5, 8));
        assert_eq!(partial_sum(F1a, 0, 0).unwrap(), int(1));
        assert_eq!(partial_sum(F2, 0, 1).unwrap(), rat(185, 64));
        // 1 - 5/8 + (3/8)^3 * 9
        assert_eq!(partial_sum(F8, 0, 2).unwrap(), rat(435, 512));
        assert!(term(F4, 2, 1).is_err());
        assert!(FamilyDescriptor::new(F10, 0).is_err());
    }

    #[test]
    fn shifted_families_vanish_at_their_start() {
        for m in 0..6 {
            assert_eq!(term(F4, m, m).unwrap(), int(0));
        }
    }

    #[test]
    fn decay_table() {
        let a = |f: FamilyId, m: i64| FamilyDescriptor::new(f, m).unwrap().decay_exponent();
        assert_eq!(a(F1, 1), rat(15, 2));
        assert_eq!(a(F1a, 1), rat(21, 2));
        assert_eq!(a(F1b, 1), rat(15, 2));
        assert_eq!(a(F2, 0), rat(7, 2));
        assert_eq!(a(F3b, 1), rat(13, 2));
        assert_eq!(a(F6, 0), int(5));
        assert_eq!(a(F8, 1), rat(7, 2));
        assert_eq!(a(F10, 1), int(5));
        assert_eq!(a(F11, 0), rat(3, 2));
        assert_eq!(a(F11b, 0), rat(9, 2));
    }

    #[test]
    fn empirical_decay_matches_table() {
        for f in FamilyId::ALL {
            let d = FamilyDescriptor::new(f, f.min_m()).unwrap();
            let t1 = num_traits::ToPrimitive::to_f64(&d.term_unchecked(1000)).unwrap().abs();
            let t4 = num_traits::ToPrimitive::to_f64(&d.term_unchecked(4000)).unwrap().abs();
            let emp = libm::log(t1 / t4) / libm::log(4.0);
            let want = d.decay_exponent_f64();
            let slack = if d.has_log_factor() { 0.3 } else { 0.05 };
            assert!((emp - want).abs() < slack, "{f}: {emp} vs {want}");
        }
    }

    #[test]
    fn names_round_trip() {
        for f in FamilyId::ALL {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert_eq!("f11A".parse::<FamilyId>().unwrap(), F11a);
        assert!("F12".parse::<FamilyId>().is_err());
    }
}
