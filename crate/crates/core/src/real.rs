//! Reals with a stored working precision and a certified absolute error radius.
//!
//! Every operation rounds to nearest and adds a full ulp to the radius when
//! the rounding was inexact, so radii are worst case rather than statistical.

use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::constants::{self, Constant};
use crate::error::{domain, Error, Result};
use crate::float::{BigFloat, Mag, Round};

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PREC: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedReal {
    value: BigFloat,
    prec: u32,
    radius: Mag,
}

fn ulp(v: &BigFloat, prec: u32) -> Mag {
    if v.is_zero() {
        Mag::ZERO
    } else {
        Mag::pow2(v.top() - prec as i64)
    }
}

impl TrackedReal {
    pub fn new(value: BigFloat, prec: u32, radius: Mag) -> Self {
        let prec = prec.max(MIN_PREC);
        let (value, inexact) = value.round(prec, Round::Nearest);
        let radius = if inexact { radius.add(&ulp(&value, prec)) } else { radius };
        Self { value, prec, radius }
    }

    pub fn exact(value: BigFloat, prec: u32) -> Self {
        Self::new(value, prec, Mag::ZERO)
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(BigFloat::zero(), prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::exact(BigFloat::from_int(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::exact(BigFloat::from_int(v.clone()), prec)
    }

    /// Nearest value at `prec` bits, radius at most one ulp.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let prec = prec.max(MIN_PREC);
        let (v, inexact) = BigFloat::from_ratio(q.numer(), q.denom(), prec, Round::Nearest);
        let radius = if inexact { ulp(&v, prec) } else { Mag::ZERO };
        Self { value: v, prec, radius }
    }

    /// Upper bound on the distance to `f`'s true value is the caller's job:
    /// `radius` is taken as given.
    pub fn from_f64(f: f64, prec: u32, radius: Mag) -> Self {
        let bits = f.to_bits();
        let neg = f < 0.0;
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1 << 52), raw_exp - 1075) };
        let m = if neg { -BigInt::from(m) } else { BigInt::from(m) };
        Self::new(BigFloat::from_parts(m, e), prec, radius)
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn radius(&self) -> Mag {
        self.radius
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    /// Same value with a larger radius.
    pub fn widen(&self, extra: Mag) -> Self {
        Self { value: self.value.clone(), prec: self.prec, radius: self.radius.add(&extra) }
    }

    /// Re-round to a new precision, absorbing the rounding error into the radius.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.value.clone(), prec, self.radius)
    }

    /// Upper bound on `|x|` over the whole interval.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_bigfloat_up(&self.value).add(&self.radius)
    }

    /// Lower bound on `|x|` over the whole interval, zero if the interval straddles zero.
    pub fn abs_lower(&self) -> Mag {
        Mag::from_bigfloat_down(&self.value).sub_down(&self.radius)
    }

    /// True when every point of the interval is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.value.signum() > 0 && !self.abs_lower().is_zero()
    }

    /// True when every point of the interval is strictly negative.
    pub fn is_negative(&self) -> bool {
        self.value.signum() < 0 && !self.abs_lower().is_zero()
    }

    /// Whether the intervals of `self` and `other` overlap.
    pub fn overlaps(&self, other: &Self) -> bool {
        let d = Mag::from_bigfloat_down(&self.value.sub(&other.value));
        d <= self.radius.add(&other.radius)
    }

    /// Whether the exact rational `q` lies in the interval.
    pub fn contains_rational(&self, q: &BigRational) -> bool {
        // |v - q| <= r  <=>  |v*den - num| <= r*den
        let den = BigFloat::from_int(q.denom().clone());
        let num = BigFloat::from_int(q.numer().clone());
        let d = self.value.mul(&den).sub(&num).abs();
        d <= self.radius.to_bigfloat().mul(&den)
    }

    fn wider(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> Self {
        Self { value: self.value.neg(), prec: self.prec, radius: self.radius }
    }

    pub fn abs(&self) -> Self {
        Self { value: self.value.abs(), prec: self.prec, radius: self.radius }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.wider(other);
        let (v, inexact) = self.value.add_rounded(&other.value, prec);
        let mut radius = self.radius.add(&other.radius);
        if inexact {
            radius = radius.add(&ulp(&v, prec));
        }
        Self { value: v, prec, radius }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.wider(other);
        let (v, inexact) = self.value.mul(&other.value).round(prec, Round::Nearest);
        let a = Mag::from_bigfloat_up(&self.value);
        let b = Mag::from_bigfloat_up(&other.value);
        let mut radius = a
            .mul(&other.radius)
            .add(&b.mul(&self.radius))
            .add(&self.radius.mul(&other.radius));
        if inexact {
            radius = radius.add(&ulp(&v, prec));
        }
        Self { value: v, prec, radius }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(k, self.prec))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        if q.denom().is_one() {
            return self.mul(&Self::from_bigint(q.numer(), self.prec));
        }
        self.mul(&Self::from_rational(q, self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { value: self.value.mul_pow2(k), prec: self.prec, radius: self.radius.mul_pow2(k) }
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        self.add(&Self::from_rational(q, self.prec))
    }

    /// Quotient; fails when the divisor interval contains zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let prec = self.wider(other);
        let lo = other.abs_lower();
        if lo.is_zero() {
            return Err(Error::Precision(format!(
                "divisor interval contains zero (value {}, radius {:e})",
                other.value.to_sci_string(10),
                other.radius.to_f64()
            )));
        }
        let (q, inexact) = self.value.div(&other.value, prec, Round::Nearest);
        let mut radius = Mag::ZERO;
        if !self.radius.is_zero() || !other.radius.is_zero() {
            let qa = Mag::from_bigfloat_up(&q);
            radius = self.radius.add(&qa.mul(&other.radius)).div_up(&lo);
        }
        if inexact {
            radius = radius.add(&ulp(&q, prec));
        }
        Ok(Self { value: q, prec, radius })
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        self.div(&Self::from_int(k, self.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_int(1, self.prec).div(self)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// Integer power by repeated squaring; negative exponents divide.
    pub fn powi(&self, n: i32) -> Result<Self> {
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        let mut acc = Self::from_int(1, self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(domain("square root of a negative number"));
        }
        let x = if self.value.signum() < 0 { BigFloat::zero() } else { self.value.clone() };
        let (s, inexact) = x.sqrt(self.prec, Round::Nearest);
        let lo = Mag::from_bigfloat_down(&x).sub_down(&self.radius);
        let mut radius = if self.radius.is_zero() {
            Mag::ZERO
        } else if !lo.is_zero() {
            self.radius.div_up(&lo.sqrt_down())
        } else {
            // interval touches zero: |sqrt(y) - s| <= sqrt(x + r)
            let hi = Mag::from_bigfloat_up(&x).add(&self.radius);
            let r = hi.sqrt_down();
            r.add(&Mag::pow2(r.top() - 60))
        };
        if inexact {
            radius = radius.add(&ulp(&s, self.prec));
        }
        Ok(Self { value: s, prec: self.prec, radius })
    }

    fn guard(&self) -> u32 {
        self.prec + 64
    }

    /// `e^x`. Requires the input radius to be below 1.
    pub fn exp(&self) -> Result<Self> {
        if self.radius > Mag::pow2(-1) {
            return Err(Error::Precision("exp argument radius too large".into()));
        }
        let xf = self.value.to_f64();
        if xf.abs() > 1e15 {
            return Err(domain("exp argument out of range"));
        }
        let s: u32 = 24;
        let frac = self.guard() + s + 16;
        let ln2 = constants::fixed(Constant::Ln2, frac);
        let x = self.value.to_fixed(frac);
        // n = round(x / ln2)
        let n: BigInt = {
            let num: BigInt = (&x << 1u32) + &ln2;
            let den: BigInt = &ln2 << 1u32;
            num_integer::Integer::div_floor(&num, &den)
        };
        let r = &x - &n * &ln2;
        let r = r >> s;
        let e = exp_fixed(&r, frac);
        let mut y = e;
        for _ in 0..s {
            y = (&y * &y) >> frac;
        }
        let n = n.to_i64().ok_or_else(|| domain("exp argument out of range"))?;
        let v = BigFloat::from_fixed(y, frac).mul_pow2(n);
        let (v, inexact) = v.round(self.prec, Round::Nearest);
        let va = Mag::from_bigfloat_up(&v);
        let mut radius = va.mul(&Mag::pow2(-(self.prec as i64) - 16));
        if inexact {
            radius = radius.add(&ulp(&v, self.prec));
        }
        if !self.radius.is_zero() {
            // e^(x+d) - e^x <= e^x * 2|d| for |d| <= 1/2
            radius = radius.add(&va.mul(&self.radius).mul_pow2(1));
        }
        Ok(Self { value: v, prec: self.prec, radius })
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(domain("logarithm of a non-positive number"));
        }
        let frac = self.guard();
        // x = m * 2^e with m in [1, 2)
        let e = self.value.top() - 1;
        let m = self.value.mul_pow2(-e).to_fixed(frac);
        let one = BigInt::one() << frac;
        // ln m = 2 atanh((m-1)/(m+1)), argument at most 1/3
        let t = ((&m - &one) << frac) / (&m + &one);
        let l = atanh_fixed(&t, frac) << 1u32;
        let ln2 = constants::fixed(Constant::Ln2, frac);
        let total = l + ln2 * BigInt::from(e);
        let v = BigFloat::from_fixed(total, frac);
        let (v, inexact) = v.round(self.prec, Round::Nearest);
        let slack = 16 + (64 - (e.unsigned_abs() | 1).leading_zeros() as i64);
        let mut radius = Mag::pow2(slack - frac as i64);
        if inexact {
            radius = radius.add(&ulp(&v, self.prec));
        }
        if !self.radius.is_zero() {
            let lo = self.abs_lower();
            radius = radius.add(&self.radius.div_up(&lo));
        }
        Ok(Self { value: v, prec: self.prec, radius })
    }

    /// Sine and cosine together.
    pub fn sin_cos(&self) -> Result<(Self, Self)> {
        let frac = self.guard();
        if self.value.top() > 60 {
            return Err(domain("trigonometric argument too large"));
        }
        let pi = constants::fixed(Constant::Pi, frac + 64);
        let half_pi = &pi >> 1u32;
        let x = self.value.to_fixed(frac + 64);
        let q = {
            let num: BigInt = (&x << 1u32) + &half_pi;
            let den: BigInt = &half_pi << 1u32;
            num_integer::Integer::div_floor(&num, &den)
        };
        let r = (&x - &q * &half_pi) >> 64u32;
        let (s, c) = sin_cos_fixed(&r, frac);
        let quadrant = q.mod_floor_i64(4);
        let (s, c) = match quadrant {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        };
        let build = |f: BigInt| {
            let v = BigFloat::from_fixed(f, frac);
            let (v, inexact) = v.round(self.prec, Round::Nearest);
            let mut radius = Mag::pow2(16 - frac as i64).add(&self.radius);
            if inexact {
                radius = radius.add(&ulp(&v, self.prec));
            }
            Self { value: v, prec: self.prec, radius }
        };
        Ok((build(s), build(c)))
    }

    pub fn sin(&self) -> Result<Self> {
        Ok(self.sin_cos()?.0)
    }

    pub fn cos(&self) -> Result<Self> {
        Ok(self.sin_cos()?.1)
    }

    /// `sin(pi q)` with exact reduction of the rational argument.
    pub fn sin_pi(q: &BigRational, prec: u32) -> Result<Self> {
        trig_pi(q, prec, true)
    }

    /// `cos(pi q)` with exact reduction of the rational argument.
    pub fn cos_pi(q: &BigRational, prec: u32) -> Result<Self> {
        trig_pi(q, prec, false)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> alloc::string::String {
        self.value.to_sci_string(digits)
    }
}

trait ModFloor {
    fn mod_floor_i64(&self, m: i64) -> i64;
}

impl ModFloor for BigInt {
    fn mod_floor_i64(&self, m: i64) -> i64 {
        num_integer::Integer::mod_floor(self, &BigInt::from(m)).to_i64().unwrap()
    }
}

fn trig_pi(q: &BigRational, prec: u32, sine: bool) -> Result<TrackedReal> {
    let prec = prec.max(MIN_PREC);
    // reduce to r in [0, 2)
    let two = BigRational::from_integer(BigInt::from(2));
    let r = q - (q / &two).floor() * &two;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    // cos(pi r) = sin(pi (r + 1/2))
    let r = if sine { r } else { r + &half };
    let r = &r - (&r / &two).floor() * &two;
    let quarter_turns = &r / &half;
    if quarter_turns.is_integer() {
        let v = match quarter_turns.to_integer().to_i64().unwrap() {
            1 => 1,
            3 => -1,
            _ => 0,
        };
        return Ok(TrackedReal::from_int(v, prec));
    }
    let w = prec + 16;
    let pi = constants::constant(Constant::Pi, w)?;
    let arg = pi.mul_rational(&r);
    Ok(arg.sin()?.with_prec(prec))
}

/// `exp(r)` for a small fixed-point `r`.
fn exp_fixed(r: &BigInt, frac: u32) -> BigInt {
    let one = BigInt::one() << frac;
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = ((&term * r) >> frac) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    sum
}

/// `atanh(t)` for fixed-point `|t| <= 1/2`.
pub(crate) fn atanh_fixed(t: &BigInt, frac: u32) -> BigInt {
    let t2 = (t * t) >> frac;
    let mut pow = t.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pow.is_zero() {
        sum += &pow / BigInt::from(2 * k + 1);
        pow = (&pow * &t2) >> frac;
        k += 1;
    }
    sum
}

/// `(sin r, cos r)` for fixed-point `|r| <= pi/4` (approximately).
fn sin_cos_fixed(r: &BigInt, frac: u32) -> (BigInt, BigInt) {
    let r2 = (r * r) >> frac;
    let mut s = r.clone();
    let mut term = r.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = -((&term * &r2) >> frac) / BigInt::from((2 * k) * (2 * k + 1));
        s += &term;
        k += 1;
    }
    let one = BigInt::one() << frac;
    let mut c = one.clone();
    let mut term = one;
    let mut k = 1u64;
    while !term.is_zero() {
        term = -((&term * &r2) >> frac) / BigInt::from((2 * k - 1) * (2 * k));
        c += &term;
        k += 1;
    }
    (s, c)
}

/// Convenience for tests and callers holding an `f64` magnitude.
pub fn mag(x: f64) -> Mag {
    Mag::from_f64_up(x.abs())
}

impl core::fmt::Display for TrackedReal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} +/- {:.3e}", self.value.to_sci_string(20), self.radius.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn close(x: &TrackedReal, f: f64, tol: f64) -> bool {
        (x.to_f64() - f).abs() <= tol * f.abs().max(1.0)
    }

    #[test]
    fn rational_conversion() {
        let z = TrackedReal::from_rational(&rat(0, 1), 256);
        assert!(z.value().is_zero() && z.radius().is_zero());
        let t = TrackedReal::from_rational(&rat(1, 3), 128);
        assert!(t.radius() <= Mag::pow2(-126));
        let a = TrackedReal::from_rational(&rat(23, 15), 128);
        let b = TrackedReal::from_rational(&rat(23, 15), 512);
        assert!(a.radius() <= Mag::pow2(-125));
        assert!(a.overlaps(&b));
        assert!(a.contains_rational(&rat(23, 15)));
    }

    #[test]
    fn elementary_functions() {
        let p = 192;
        let one = TrackedReal::from_int(1, p);
        let e = one.exp().unwrap();
        assert!(close(&e, core::f64::consts::E, 1e-15));
        assert!(e.radius() < Mag::pow2(-180));
        let l = e.ln().unwrap();
        assert!(l.overlaps(&one));
        let two = TrackedReal::from_int(2, p);
        let ln2 = two.ln().unwrap();
        assert!(close(&ln2, core::f64::consts::LN_2, 1e-15));
        let s = two.sqrt().unwrap();
        assert!(s.sqr().overlaps(&two));
        let (sn, cs) = TrackedReal::from_rational(&rat(1, 2), p).sin_cos().unwrap();
        assert!(close(&sn, libm::sin(0.5), 1e-15));
        assert!(close(&cs, libm::cos(0.5), 1e-15));
        let sum = sn.sqr().add(&cs.sqr());
        assert!(sum.overlaps(&one));
        let neg = TrackedReal::from_int(-40, p).exp().unwrap();
        assert!(close(&neg, libm::exp(-40.0), 1e-15));
    }

    #[test]
    fn rational_multiples_of_pi() {
        let s = TrackedReal::sin_pi(&rat(3, 2), 128).unwrap();
        assert_eq!(s.to_f64(), -1.0);
        assert!(s.is_exact());
        let c = TrackedReal::cos_pi(&rat(7, 1), 128).unwrap();
        assert_eq!(c.to_f64(), -1.0);
        let c = TrackedReal::cos_pi(&rat(1, 4), 128).unwrap();
        assert!(close(&c, core::f64::consts::FRAC_1_SQRT_2, 1e-15));
        let s = TrackedReal::sin_pi(&rat(-7, 3), 128).unwrap();
        assert!(close(&s, -libm::sin(core::f64::consts::PI / 3.0), 1e-15));
    }

    #[test]
    fn division_by_uncertain_zero_fails() {
        let z = TrackedReal::from_int(0, 64).widen(Mag::pow2(-10));
        assert!(TrackedReal::from_int(1, 64).div(&z).is_err());
        assert!(TrackedReal::from_int(-1, 64).ln().is_err());
    }

    #[derive(Clone, Debug)]
    enum Expr {
        Leaf(i64, i64),
        Add(Box<Expr>, Box<Expr>),
        Sub(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Div(Box<Expr>, Box<Expr>),
        Sqrt(Box<Expr>),
        Exp(Box<Expr>),
        Ln(Box<Expr>),
        Sin(Box<Expr>),
    }
    use alloc::boxed::Box;

    fn eval(e: &Expr, p: u32) -> Option<TrackedReal> {
        Some(match e {
            Expr::Leaf(n, d) => TrackedReal::from_rational(&rat(*n, *d), p),
            Expr::Add(a, b) => eval(a, p)?.add(&eval(b, p)?),
            Expr::Sub(a, b) => eval(a, p)?.sub(&eval(b, p)?),
            Expr::Mul(a, b) => eval(a, p)?.mul(&eval(b, p)?),
            Expr::Div(a, b) => eval(a, p)?.div(&eval(b, p)?).ok()?,
            Expr::Sqrt(a) => eval(a, p)?.abs().sqrt().ok()?,
            Expr::Exp(a) => {
                let x = eval(a, p)?;
                if x.to_f64().abs() > 30.0 {
                    return None;
                }
                x.exp().ok()?
            }
            Expr::Ln(a) => eval(a, p)?.abs().ln().ok()?,
            Expr::Sin(a) => eval(a, p)?.sin().ok()?,
        })
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = (-50i64..50, 1i64..20).prop_map(|(n, d)| Expr::Leaf(n, d));
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Sqrt(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Exp(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Ln(Box::new(a))),
                inner.prop_map(|a| Expr::Sin(Box::new(a))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn doubling_precision_stays_inside_radius(e in expr()) {
            let p = 96;
            if let (Some(lo), Some(hi)) = (eval(&e, p), eval(&e, 2 * p)) {
                let d = Mag::from_bigfloat_up(&lo.value().sub(hi.value()));
                prop_assert!(d <= lo.radius(), "{} vs {}", lo, hi);
            }
        }

        #[test]
        fn mul_then_div_round_trips(a in -1000i64..1000, b in 1i64..1000) {
            let x = TrackedReal::from_rational(&rat(a, 7), 128);
            let y = TrackedReal::from_rational(&rat(b, 3), 128);
            let back = x.mul(&y).div(&y).unwrap();
            prop_assert!(back.overlaps(&x));
            prop_assert!(back.sub(&x).abs_upper() <= Mag::pow2(-100).mul(&Mag::from_u64(a.unsigned_abs() + 1)));
        }
    }
}
