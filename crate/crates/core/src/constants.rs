//! The constant basis: pi, ln 2, sqrt 2 and Gamma(1/4), each computed by its
//! own algorithm and cached per precision.
//!
//! Pi comes from the Gauss-Legendre AGM iteration and is cross-checked against
//! Machin's arctangent formula; Gamma(1/4) comes from the AGM of 1 and sqrt 2
//! and is cross-checked against the Stirling-series log-Gamma.

use alloc::collections::BTreeMap;
use alloc::format;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use spin::RwLock;

use crate::error::{usage, Error, Result};
use crate::float::{BigFloat, Mag};
use crate::real::{atanh_fixed, TrackedReal, MIN_PREC};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Pi,
    Ln2,
    Sqrt2,
    GammaQuarter,
}

impl Constant {
    pub const ALL: [Constant; 4] = [Constant::Pi, Constant::Ln2, Constant::Sqrt2, Constant::GammaQuarter];

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "PI",
            Constant::Ln2 => "LN2",
            Constant::Sqrt2 => "SQRT2",
            Constant::GammaQuarter => "GAMMA_QUARTER",
        }
    }
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PI" => Ok(Constant::Pi),
            "LN2" => Ok(Constant::Ln2),
            "SQRT2" => Ok(Constant::Sqrt2),
            "GAMMA_QUARTER" | "G" => Ok(Constant::GammaQuarter),
            _ => Err(usage(format!("unknown constant {s:?}"))),
        }
    }
}

/// Fixed-point approximations `round(c * 2^frac)` keyed by constant and a
/// 64-bit-aligned fraction width; error at most a few units in the last place.
static FIXED: RwLock<BTreeMap<(Constant, u32), BigInt>> = RwLock::new(BTreeMap::new());

/// Initialize-once, read-many cache of tracked constants.
pub struct ConstantCache {
    map: RwLock<BTreeMap<(Constant, u32), TrackedReal>>,
}

impl ConstantCache {
    pub const fn new() -> Self {
        Self { map: RwLock::new(BTreeMap::new()) }
    }

    pub fn get(&self, c: Constant, prec: u32) -> Result<TrackedReal> {
        let prec = prec.max(MIN_PREC);
        if let Some(v) = self.map.read().get(&(c, prec)) {
            return Ok(v.clone());
        }
        // Computed outside the lock; a racing writer computes the same value
        // and the first insert wins.
        let v = compute(c, prec)?;
        let mut w = self.map.write();
        Ok(w.entry((c, prec)).or_insert(v).clone())
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for ConstantCache {
    fn default() -> Self {
        Self::new()
    }
}

static CACHE: ConstantCache = ConstantCache::new();

/// The constant at `prec` bits with radius at most `2^(-prec+4)`.
pub fn constant(c: Constant, prec: u32) -> Result<TrackedReal> {
    CACHE.get(c, prec)
}

/// Lookup by name (`PI`, `LN2`, `SQRT2`, `GAMMA_QUARTER`).
pub fn constant_by_name(name: &str, prec: u32) -> Result<TrackedReal> {
    constant(name.parse()?, prec)
}

/// Fixed-point value of the elementary constants with `frac` fraction bits.
pub(crate) fn fixed(c: Constant, frac: u32) -> BigInt {
    let aligned = (frac + 8).div_ceil(64) * 64;
    if let Some(v) = FIXED.read().get(&(c, aligned)) {
        return v >> (aligned - frac);
    }
    let v = match c {
        Constant::Pi => pi_agm_fixed(aligned),
        Constant::Ln2 => ln2_fixed(aligned),
        Constant::Sqrt2 => sqrt2_fixed(aligned),
        Constant::GammaQuarter => panic!("Gamma(1/4) has no fixed-point generator"),
    };
    let out = &v >> (aligned - frac);
    FIXED.write().entry((c, aligned)).or_insert(v);
    out
}

fn tracked_from_fixed(v: BigInt, frac: u32, prec: u32) -> TrackedReal {
    // fixed-point generators are good to 2^(8 - frac)
    TrackedReal::new(BigFloat::from_fixed(v, frac), prec, Mag::pow2(8 - frac as i64))
}

fn compute(c: Constant, prec: u32) -> Result<TrackedReal> {
    let frac = prec + 32;
    match c {
        Constant::Pi => {
            let a = pi_agm_fixed(frac);
            let b = pi_machin_fixed(frac);
            if (&a - &b).abs() > BigInt::from(1u32 << 12) {
                return Err(Error::Precision("pi: AGM and Machin values disagree".into()));
            }
            Ok(tracked_from_fixed(a, frac, prec))
        }
        Constant::Ln2 => Ok(tracked_from_fixed(fixed(Constant::Ln2, frac), frac, prec)),
        Constant::Sqrt2 => Ok(tracked_from_fixed(sqrt2_fixed(frac), frac, prec)),
        Constant::GammaQuarter => {
            let w = prec + 32;
            let g = gamma_quarter_agm(w)?;
            let check = crate::gamma::log_gamma_rational(
                &num_rational::BigRational::new(BigInt::one(), BigInt::from(4)),
                w,
            )?
            .exp()?;
            let d = Mag::from_bigfloat_up(&g.value().sub(check.value()));
            if d > Mag::pow2(-(prec as i64) + 8) {
                return Err(Error::Precision(
                    "Gamma(1/4): AGM value and log-Gamma value disagree".into(),
                ));
            }
            Ok(g.with_prec(prec))
        }
    }
}

/// Gamma(1/4) from `Gamma(1/4)^2 = (2 pi)^(3/2) / agm(1, sqrt 2)`.
pub fn gamma_quarter_agm(prec: u32) -> Result<TrackedReal> {
    let w = prec + 16;
    let pi = constant(Constant::Pi, w)?;
    let two_pi = pi.mul_pow2(1);
    let num = two_pi.mul(&two_pi.sqrt()?);
    let m = agm(&TrackedReal::from_int(1, w), &constant(Constant::Sqrt2, w)?)?;
    Ok(num.div(&m)?.sqrt()?.with_prec(prec))
}

/// Pi from Machin's formula, exposed for independent comparison.
pub fn pi_machin(prec: u32) -> TrackedReal {
    let frac = prec + 32;
    tracked_from_fixed(pi_machin_fixed(frac), frac, prec)
}

/// Pi from the Gauss-Legendre iteration, bypassing the cache.
pub fn pi_agm(prec: u32) -> TrackedReal {
    let frac = prec + 32;
    tracked_from_fixed(pi_agm_fixed(frac), frac, prec)
}

/// ln 2 from a three-term arctanh formula, independent of the default series.
pub fn ln2_alternate(prec: u32) -> TrackedReal {
    let frac = prec + 32;
    let one = BigInt::one() << (frac + 16);
    let at = |n: u32| atanh_fixed(&(&one / BigInt::from(n)), frac + 16);
    let v = at(26) * 18 - at(4801) * 2 + at(8749) * 8;
    tracked_from_fixed(v >> 16u32, frac, prec)
}

/// Arithmetic-geometric mean of two positive intervals.
pub fn agm(a: &TrackedReal, b: &TrackedReal) -> Result<TrackedReal> {
    if !a.is_positive() || !b.is_positive() {
        return Err(crate::error::domain("agm requires positive arguments"));
    }
    let prec = a.prec().max(b.prec());
    let w = prec + 32;
    let exact = |x: &TrackedReal| TrackedReal::exact(x.value().clone(), w);
    let (mut x, mut y) = (exact(a), exact(b));
    let mut iters = 0i64;
    let mut last_diff;
    loop {
        let diff = x.value().sub(y.value());
        last_diff = Mag::from_bigfloat_up(&diff);
        if diff.is_zero() || diff.top() <= x.value().top() - w as i64 + 3 {
            break;
        }
        let nx = x.add(&y).mul_pow2(-1);
        let ny = x.mul(&y).sqrt()?;
        x = TrackedReal::exact(nx.value().clone(), w);
        y = TrackedReal::exact(ny.value().clone(), w);
        iters += 1;
        if iters > 400 {
            return Err(Error::Precision("agm iteration did not settle".into()));
        }
    }
    // Each step is a relative perturbation of a few ulps and the mean is
    // non-expansive in relative terms, so the errors add up.
    let m = x;
    let ma = Mag::from_bigfloat_up(m.value());
    let mut radius = ma
        .mul(&Mag::pow2(-(w as i64) + 4))
        .mul(&Mag::from_u64(iters as u64 + 2))
        .add(&last_diff);
    // agm(a(1+e), b(1+e)) = (1+e) agm(a, b) and agm is increasing in both
    // arguments, so the input radii enter relatively.
    let rel = |t: &TrackedReal| t.radius().div_up(&t.abs_lower());
    let r = rel(a).max(rel(b));
    if !r.is_zero() {
        radius = radius.add(&ma.add(&radius).mul(&r).mul_pow2(1));
    }
    Ok(TrackedReal::new(m.value().clone(), prec, radius))
}

/// `sum atan(1/n)` helper: `atan(1/n) * 2^frac` by the alternating series.
fn atan_inv_fixed(n: u32, frac: u32) -> BigInt {
    let mut pow = (BigInt::one() << frac) / BigInt::from(n);
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        let t = &pow / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        pow /= &n2;
        k += 1;
    }
    sum
}

fn pi_machin_fixed(frac: u32) -> BigInt {
    let g = 16;
    let f = frac + g;
    (atan_inv_fixed(5, f) * 16 - atan_inv_fixed(239, f) * 4) >> g
}

fn pi_agm_fixed(frac: u32) -> BigInt {
    let g = 32;
    let f = frac + g;
    let one = BigInt::one() << f;
    let mut a = one.clone();
    // 1/sqrt(2) = sqrt(1/2)
    let mut b = (BigInt::one() << (2 * f - 1)).sqrt();
    let mut t = &one >> 2u32;
    let mut p = 0u32;
    loop {
        let an = (&a + &b) >> 1u32;
        let bn = (&a * &b).sqrt();
        let d = &a - &an;
        t -= ((&d * &d) >> f) << p;
        p += 1;
        a = an;
        b = bn;
        if (&a - &b).abs() <= BigInt::from(4u32) {
            break;
        }
    }
    let s = &a + &b;
    let num = (&s * &s) >> f;
    ((num << f) / (t << 2u32)) >> g
}

fn ln2_fixed(frac: u32) -> BigInt {
    let g = 16;
    let f = frac + g;
    let third = (BigInt::one() << f) / BigInt::from(3);
    (atanh_fixed(&third, f) << 1u32) >> g
}

fn sqrt2_fixed(frac: u32) -> BigInt {
    (BigInt::from(2) << (2 * frac)).sqrt()
}
