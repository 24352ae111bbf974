//! Binary floating-point values with unbounded mantissas, and [`Mag`], a
//! compact non-negative magnitude that only ever rounds upward (or downward
//! when explicitly asked for a lower bound). `Mag` carries error radii.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt::Write;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// Rounding direction for [`BigFloat::round`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Nearest,
    AwayFromZero,
    TowardZero,
}

/// The value `mant * 2^exp`. Zero is stored as `mant = 0, exp = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        Self { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_parts(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            Self::zero()
        } else {
            Self { mant, exp }
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::from_parts(v.into(), 0)
    }

    /// `v * 2^-frac`, the inverse of [`BigFloat::to_fixed`].
    pub fn from_fixed(v: BigInt, frac: u32) -> Self {
        Self::from_parts(v, -(frac as i64))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// One past the most significant bit: `2^(top-1) <= |x| < 2^top`.
    /// Meaningless for zero.
    pub fn top(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Self { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `prec` mantissa bits. The flag reports whether the
    /// value changed.
    pub fn round(&self, prec: u32, mode: Round) -> (Self, bool) {
        let bits = self.bits();
        if bits <= prec as u64 {
            return (self.clone(), false);
        }
        let mut shift = bits - prec as u64;
        let sign = self.mant.sign();
        let mag = self.mant.magnitude();
        let mut q: BigUint = mag >> shift;
        let inexact = mag.trailing_zeros().is_some_and(|tz| tz < shift);
        match mode {
            Round::Nearest => {
                if mag.bit(shift - 1) {
                    q += 1u32;
                }
            }
            Round::AwayFromZero => {
                if inexact {
                    q += 1u32;
                }
            }
            Round::TowardZero => {}
        }
        if q.bits() > prec as u64 {
            q >>= 1u32;
            shift += 1;
        }
        (
            Self::from_parts(BigInt::from_biguint(sign, q), self.exp + shift as i64),
            inexact,
        )
    }

    /// Exact sum. Costly when the exponents are far apart; prefer
    /// [`BigFloat::add_rounded`] for working arithmetic.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = (hi.exp - lo.exp) as u64;
        Self::from_parts((&hi.mant << d) + &lo.mant, lo.exp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Sum rounded to nearest at `prec` bits; the flag reports inexactness.
    pub fn add_rounded(&self, other: &Self, prec: u32) -> (Self, bool) {
        if self.is_zero() {
            return other.round(prec, Round::Nearest);
        }
        if other.is_zero() {
            return self.round(prec, Round::Nearest);
        }
        let (big, small) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        if small.top() < big.top() - prec as i64 - 2 {
            let (r, _) = big.round(prec, Round::Nearest);
            return (r, true);
        }
        self.add(other).round(prec, Round::Nearest)
    }

    /// Quotient rounded at `prec` bits. Panics on a zero divisor.
    pub fn div(&self, other: &Self, prec: u32, mode: Round) -> (Self, bool) {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return (Self::zero(), false);
        }
        let shift = (prec as i64 + 2 - (self.bits() as i64 - other.bits() as i64)).max(0) as u64;
        let num = self.mant.magnitude() << shift;
        let (q, r) = num.div_rem(other.mant.magnitude());
        let sticky = !r.is_zero();
        let sign = if self.mant.sign() == other.mant.sign() { Sign::Plus } else { Sign::Minus };
        let q2 = (q << 1u32) + BigUint::from(sticky as u32);
        let exp = self.exp - other.exp - shift as i64 - 1;
        let (v, inexact) = Self::from_parts(BigInt::from_biguint(sign, q2), exp).round(prec, mode);
        (v, inexact || sticky)
    }

    /// Square root of a non-negative value. Panics on negative input.
    pub fn sqrt(&self, prec: u32, mode: Round) -> (Self, bool) {
        assert!(self.signum() >= 0, "BigFloat sqrt of a negative value");
        if self.is_zero() {
            return (Self::zero(), false);
        }
        let mut s = (2 * (prec as i64 + 2) - self.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = self.mant.magnitude() << (s as u64);
        let r = m.sqrt();
        let sticky = &r * &r != m;
        let q2 = (r << 1u32) + BigUint::from(sticky as u32);
        let exp = (self.exp - s) / 2 - 1;
        let (v, inexact) = Self::from_parts(BigInt::from_biguint(Sign::Plus, q2), exp).round(prec, mode);
        (v, inexact || sticky)
    }

    /// `num / den` rounded at `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, mode: Round) -> (Self, bool) {
        Self::from_int(num.clone()).div(&Self::from_int(den.clone()), prec, mode)
    }

    /// `floor(x * 2^frac)`.
    pub fn to_fixed(&self, frac: u32) -> BigInt {
        let e = self.exp + frac as i64;
        if e >= 0 {
            &self.mant << (e as u64)
        } else {
            &self.mant >> ((-e) as u64)
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << (self.exp as u64);
        }
        let half = BigFloat::from_parts(BigInt::one(), -1);
        let shifted = if self.signum() >= 0 { self.add(&half) } else { self.sub(&half) };
        let sh = (-shifted.exp) as u64;
        let mag = shifted.mant.magnitude() >> sh;
        BigInt::from_biguint(shifted.mant.sign(), mag)
    }

    /// Approximate conversion; saturates to infinity or zero outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let sh = bits.saturating_sub(64);
        let top = (self.mant.magnitude() >> sh).to_u64().unwrap_or(u64::MAX);
        let e = (self.exp + sh as i64).clamp(-100_000, 100_000) as i32;
        let v = libm::ldexp(top as f64, e);
        if self.signum() < 0 {
            -v
        } else {
            v
        }
    }

    /// Approximate `log2 |x|` for non-zero values of any magnitude.
    pub fn log2_abs(&self) -> f64 {
        let bits = self.bits();
        let sh = bits.saturating_sub(64);
        let top = (self.mant.magnitude() >> sh).to_u64().unwrap_or(u64::MAX);
        libm::log2(top as f64) + (self.exp + sh as i64) as f64
    }

    /// Scientific notation with `digits` significant digits, e.g.
    /// `6.366197723675813430755350534900574481378e-1`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return String::from("0");
        }
        let mag = self.abs();
        let mut e10 = libm::floor(mag.log2_abs() * core::f64::consts::LOG10_2) as i64;
        let lower = BigUint::from(10u32).pow((digits - 1) as u32);
        let upper = &lower * 10u32;
        let mut int = BigUint::zero();
        for _ in 0..4 {
            int = mag.scaled_decimal(digits as i64 - 1 - e10);
            if int >= upper {
                e10 += 1;
            } else if int < lower {
                e10 -= 1;
            } else {
                break;
            }
        }
        if int >= upper {
            // 9.99..95 rounded up to 10.00..0
            int = lower.clone();
            e10 += 1;
        }
        let s = int.to_str_radix(10);
        let mut out = String::new();
        if self.signum() < 0 {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        let _ = write!(out, "e{}", e10);
        out
    }

    /// `round(|x| * 10^s)` for non-negative `self`.
    fn scaled_decimal(&self, s: i64) -> BigUint {
        let ten = BigUint::from(10u32);
        let m = self.mant.magnitude().clone();
        let (num, den) = if s >= 0 {
            (m * ten.pow(s as u32), BigUint::one())
        } else {
            (m, ten.pow((-s) as u32))
        };
        let (num, den) = if self.exp >= 0 {
            (num << (self.exp as u64), den)
        } else {
            (num, den << ((-self.exp) as u64))
        };
        let (q, r) = num.div_rem(&den);
        if (r << 1u32) >= den {
            q + 1u32
        } else {
            q
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare by magnitude first when tops differ.
        let ord_mag = if self.top() != other.top() {
            self.top().cmp(&other.top())
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.magnitude() << ((self.exp - e) as u64);
            let b = other.mant.magnitude() << ((other.exp - e) as u64);
            a.cmp(&b)
        };
        if sa > 0 {
            ord_mag
        } else {
            ord_mag.reverse()
        }
    }
}

/// A non-negative value `mant * 2^exp` with a 64-bit mantissa. Arithmetic
/// rounds upward unless the method name says otherwise, so chains of `Mag`
/// operations always produce upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mag {
    mant: u64,
    exp: i64,
}

const TOP_BIT: u64 = 1 << 63;

impl Mag {
    pub const ZERO: Mag = Mag { mant: 0, exp: 0 };

    fn norm(v: u128, exp: i64, up: bool) -> Mag {
        if v == 0 {
            return Mag::ZERO;
        }
        let b = 128 - v.leading_zeros() as i64;
        if b > 64 {
            let sh = (b - 64) as u32;
            let mut m = v >> sh;
            let mut e = exp + sh as i64;
            if up && v & ((1u128 << sh) - 1) != 0 {
                m += 1;
                if m == 1u128 << 64 {
                    m >>= 1;
                    e += 1;
                }
            }
            Mag { mant: m as u64, exp: e }
        } else {
            let sh = (64 - b) as u32;
            Mag { mant: (v << sh) as u64, exp: exp - sh as i64 }
        }
    }

    pub fn from_u64(v: u64) -> Mag {
        Self::norm(v as u128, 0, true)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Mag {
        Mag { mant: TOP_BIT, exp: e - 63 }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    /// `2^(top-1) <= self < 2^top` for non-zero values.
    pub fn top(&self) -> i64 {
        self.exp + 64
    }

    fn from_bigfloat(x: &BigFloat, up: bool) -> Mag {
        if x.is_zero() {
            return Mag::ZERO;
        }
        let mag = x.mant.magnitude();
        let n = mag.bits();
        if n <= 64 {
            return Self::norm(mag.to_u64().unwrap() as u128, x.exp, up);
        }
        let sh = n - 64;
        let top = (mag >> sh).to_u64().unwrap() as u128;
        let sticky = up && mag.trailing_zeros().is_some_and(|tz| tz < sh);
        Self::norm(top + sticky as u128, x.exp + sh as i64, up)
    }

    /// Smallest representable bound `>= |x|`.
    pub fn from_bigfloat_up(x: &BigFloat) -> Mag {
        Self::from_bigfloat(x, true)
    }

    /// Largest representable bound `<= |x|`.
    pub fn from_bigfloat_down(x: &BigFloat) -> Mag {
        Self::from_bigfloat(x, false)
    }

    /// Upper bound for a non-negative finite `f64`; negative input is treated as zero.
    pub fn from_f64_up(x: f64) -> Mag {
        if !(x > 0.0) {
            return Mag::ZERO;
        }
        let bits = x.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        if raw_exp == 0 {
            Self::norm(frac as u128, -1074, true)
        } else {
            Self::norm((frac | (1u64 << 52)) as u128, raw_exp - 1075, true)
        }
    }

    pub fn to_bigfloat(&self) -> BigFloat {
        BigFloat::from_parts(BigInt::from(self.mant), self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        libm::ldexp(self.mant as f64, self.exp.clamp(-100_000, 100_000) as i32)
    }

    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        libm::log2(self.mant as f64) + self.exp as f64
    }

    pub fn mul_pow2(&self, k: i64) -> Mag {
        if self.is_zero() {
            return *self;
        }
        Mag { mant: self.mant, exp: self.exp + k }
    }

    pub fn add(&self, o: &Mag) -> Mag {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.exp >= o.exp { (self, o) } else { (o, self) };
        let d = hi.exp - lo.exp;
        if d >= 64 {
            return Self::norm(hi.mant as u128 + 1, hi.exp, true);
        }
        Self::norm(((hi.mant as u128) << d) + lo.mant as u128, lo.exp, true)
    }

    pub fn mul(&self, o: &Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::ZERO;
        }
        Self::norm(self.mant as u128 * o.mant as u128, self.exp + o.exp, true)
    }

    /// Upward-rounded quotient. Panics on a zero divisor.
    pub fn div_up(&self, o: &Mag) -> Mag {
        assert!(!o.is_zero(), "Mag division by zero");
        if self.is_zero() {
            return Mag::ZERO;
        }
        let num = (self.mant as u128) << 64;
        let q = num / o.mant as u128;
        let r = num % o.mant as u128;
        Self::norm(q + (r != 0) as u128, self.exp - 64 - o.exp, true)
    }

    /// Lower bound for `self - o`, saturating at zero.
    pub fn sub_down(&self, o: &Mag) -> Mag {
        if o.is_zero() {
            return *self;
        }
        if *o >= *self {
            return Mag::ZERO;
        }
        let d = self.exp - o.exp;
        if d >= 64 {
            return Self::norm(self.mant as u128 - 1, self.exp, false);
        }
        // d >= 0 here since o < self and both are normalized.
        Self::norm(((self.mant as u128) << d) - o.mant as u128, o.exp, false)
    }

    /// Lower bound for the square root.
    pub fn sqrt_down(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let (v, e) = if self.exp.rem_euclid(2) == 0 {
            ((self.mant as u128) << 64, self.exp - 64)
        } else {
            ((self.mant as u128) << 63, self.exp - 63)
        };
        let r = BigUint::from(v).sqrt().to_u128().unwrap();
        Self::norm(r, e / 2, false)
    }

    pub fn max(self, o: Mag) -> Mag {
        if self >= o {
            self
        } else {
            o
        }
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.exp.cmp(&other.exp).then(self.mant.cmp(&other.mant)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bf(m: i64, e: i64) -> BigFloat {
        BigFloat::from_parts(BigInt::from(m), e)
    }

    #[test]
    fn rounding_modes() {
        // 0b10111 = 23 at 3 bits: nearest 24, toward zero 20, away 24
        let x = bf(23, 0);
        assert_eq!(x.round(3, Round::Nearest).0, bf(6, 2));
        assert_eq!(x.round(3, Round::TowardZero).0, bf(5, 2));
        assert_eq!(x.round(3, Round::AwayFromZero).0, bf(6, 2));
        assert!(x.round(3, Round::Nearest).1);
        assert!(!bf(24, 0).round(3, Round::Nearest).1);
        // carry out of the top bit: 15 -> 16
        assert_eq!(bf(15, 0).round(3, Round::Nearest).0, bf(4, 2));
    }

    #[test]
    fn division_and_sqrt() {
        let (q, inexact) = bf(1, 0).div(&bf(3, 0), 64, Round::Nearest);
        assert!(inexact);
        assert!((q.to_f64() - 1.0 / 3.0).abs() < 1e-18);
        let (s, inexact) = bf(2, 0).sqrt(80, Round::Nearest);
        assert!(inexact);
        assert!((s.to_f64() - core::f64::consts::SQRT_2).abs() < 1e-15);
        let (s, inexact) = bf(9, 4).sqrt(80, Round::Nearest);
        assert!(!inexact);
        assert_eq!(s.to_f64(), 12.0);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(bf(1, 0).to_sci_string(5), "1.0000e0");
        assert_eq!(bf(-3, -2).to_sci_string(3), "-7.50e-1");
        assert_eq!(bf(1000, 0).to_sci_string(2), "1.0e3");
        assert_eq!(BigFloat::zero().to_sci_string(4), "0");
    }

    #[test]
    fn mag_rounds_upward() {
        let third = Mag::from_u64(1).div_up(&Mag::from_u64(3));
        assert!(third.to_f64() >= 1.0 / 3.0);
        let a = Mag::from_u64(u64::MAX);
        let s = a.add(&Mag::from_u64(1));
        assert!(s.to_f64() >= 18446744073709551616.0);
        assert_eq!(Mag::pow2(-10).to_f64(), 1.0 / 1024.0);
        assert_eq!(Mag::from_u64(5).sub_down(&Mag::from_u64(7)), Mag::ZERO);
        assert!(Mag::from_u64(16).sqrt_down().to_f64() <= 4.0);
        assert!(Mag::from_u64(16).sqrt_down().to_f64() > 3.999);
    }

    proptest! {
        #[test]
        fn mag_bounds_hold(a in 1u64..u64::MAX, b in 1u64..u64::MAX, ea in -80i64..80, eb in -80i64..80) {
            let ma = Mag::from_u64(a).mul_pow2(ea);
            let mb = Mag::from_u64(b).mul_pow2(eb);
            let fa = BigFloat::from_parts(BigInt::from(a), ea);
            let fb = BigFloat::from_parts(BigInt::from(b), eb);
            prop_assert!(ma.add(&mb).to_bigfloat() >= fa.add(&fb));
            prop_assert!(ma.mul(&mb).to_bigfloat() >= fa.mul(&fb));
            let (q, _) = fa.div(&fb, 200, Round::TowardZero);
            prop_assert!(ma.div_up(&mb).to_bigfloat() >= q);
            if fa > fb {
                prop_assert!(ma.sub_down(&mb).to_bigfloat() <= fa.sub(&fb));
            }
        }

        #[test]
        fn add_rounded_error_within_ulp(a in any::<i64>(), b in any::<i64>(), ea in -300i64..300, eb in -300i64..300) {
            let fa = bf(a, ea);
            let fb = bf(b, eb);
            let exact = fa.add(&fb);
            let (r, inexact) = fa.add_rounded(&fb, 53);
            if !inexact {
                prop_assert_eq!(r.clone(), exact.clone());
            }
            if !exact.is_zero() {
                let err = Mag::from_bigfloat_up(&r.sub(&exact));
                prop_assert!(err <= Mag::pow2(exact.top() - 53));
            }
        }
    }
}
