//! Closed-form right-hand sides of every family, including the finite
//! correction sums of the shifted families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::closed_form::{gamma_ratio_cf, ClosedForm, Monomial};
use crate::combinatorics::{
    big, catalan, ceil_half, central_binomial, extended_product, factorial, harmonic, int, odd_harmonic,
    quarter_harmonic_diff, rat, sign,
};
use crate::error::Result;
use crate::family::{FamilyDescriptor, FamilyId};

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

fn mono(pi: i32, gamma: i32, ln2: u32, sqrt2: u8) -> ClosedForm {
    ClosedForm::monomial(Monomial::new(pi, gamma, ln2, sqrt2))
}

fn c(q: BigRational) -> ClosedForm {
    ClosedForm::rational(q)
}

/// `(-1)^m 2^(3m+6) / (((m+2)!)^3 C_{m+1}^3)`
fn p3(m: i64) -> BigRational {
    let den = big(&(factorial(m as u64 + 2) * catalan(m as usize + 1)));
    int(sign(m)) * pow2(3 * m + 6) / Pow::pow(den, 3u32)
}

/// `2^(4m+8) / (((m+2)!)^4 C_{m+1}^4)`
fn p4(m: i64) -> BigRational {
    let den = big(&(factorial(m as u64 + 2) * catalan(m as usize + 1)));
    pow2(4 * m + 8) / Pow::pow(den, 4u32)
}

/// `m! binom(2m, m) / 2^m`
fn w(m: i64) -> BigRational {
    big(&(factorial(m as u64) * central_binomial(m as usize))) / pow2(m)
}

/// `(-1)^ceil(m/2)`
fn s(m: i64) -> i64 {
    sign(ceil_half(m))
}

/// `2^(4m+1) / ((m+1)(2m+1) C_m)`, the value of `pi binom(2m, m + 1/2)`.
fn half_binom(m: i64) -> BigRational {
    pow2(4 * m + 1) / (int((m + 1) * (2 * m + 1)) * big(&catalan(m as usize)))
}

fn prod(lo: i64, hi: i64, f: impl Fn(i64) -> i64) -> BigRational {
    extended_product(lo, hi, |j| int(f(j)))
}

/// The exact right-hand side of `family` at parameter `m`.
pub fn rhs(family: FamilyId, m: i64) -> Result<ClosedForm> {
    let d = FamilyDescriptor::new(family, m)?;
    let correction = c(-d.head_correction());
    use FamilyId::*;
    let one = ClosedForm::integer(1);
    let out = match family {
        F1 => {
            let inner = gamma_ratio_cf(2 * m + 1)?
                .mul(&mono(0, 0, 0, 1))
                .scale(&(int(24 * s(m)) / int((2 * m + 1).pow(2))));
            one.sub(&inner).scale(&p3(m))
        }
        F1a => {
            let a = pow2(6 * m + 6)
                / Pow::pow(big(&(factorial(2 * m as u64 + 2) * catalan(2 * m as usize + 1))), 3u32);
            let q = int(48 * sign(m)) / int((4 * m + 1).pow(2)) * prod(1, 3 * m, |j| 4 * j - 1)
                / Pow::pow(prod(1, m, |j| 4 * j - 3), 3u32);
            one.sub(&mono(1, -4, 0, 0).scale(&q)).scale(&a)
        }
        F1b => {
            let b = pow2(6 * m + 3)
                / Pow::pow(big(&(factorial(2 * m as u64 + 1) * catalan(2 * m as usize))), 3u32);
            let q = int(sign(m)) / int((4 * m - 1).pow(2)) * rat(3, 4) * prod(1, 3 * m - 1, |j| 4 * j - 3)
                / Pow::pow(prod(1, m - 1, |j| 4 * j - 1), 3u32);
            one.sub(&mono(-3, 4, 0, 0).scale(&q)).scale(&-b)
        }
        F2 => ClosedForm::integer(2 * m + 1)
            .sub(&mono(-1, 0, 0, 0).scale(&int(2 * sign(m))))
            .scale(&p3(m)),
        F3 => {
            let inner = gamma_ratio_cf(2 * m - 1)?
                .mul(&mono(0, 0, 0, 1))
                .scale(&(int(sign(m + ceil_half(m)) * 24 * (6 * m + 1)) / int((2 * m - 1).pow(2))));
            ClosedForm::integer(2 * m + 1).sub(&inner).scale(&-p3(m))
        }
        F3a => {
            let a = pow2(6 * m + 6)
                / Pow::pow(big(&(factorial(2 * m as u64 + 2) * catalan(2 * m as usize + 1))), 3u32);
            let q = int(sign(m) * (12 * m + 1)) / int((4 * m - 1).pow(2)) * rat(3, 4)
                * prod(1, 3 * m - 1, |j| 4 * j - 3)
                / Pow::pow(prod(1, m - 1, |j| 4 * j - 1), 3u32);
            ClosedForm::integer(4 * m + 1).sub(&mono(-3, 4, 0, 0).scale(&q)).scale(&-a)
        }
        F3b => {
            let b = pow2(6 * m + 3)
                / Pow::pow(big(&(factorial(2 * m as u64 + 1) * catalan(2 * m as usize))), 3u32);
            let q = int(sign(m) * (12 * m - 5)) / int((4 * m - 3).pow(2)) * int(48)
                * prod(1, 3 * m - 3, |j| 4 * j - 1)
                / Pow::pow(prod(1, m - 1, |j| 4 * j - 3), 3u32);
            ClosedForm::integer(4 * m - 1).add(&mono(1, -4, 0, 0).scale(&q)).scale(&b)
        }
        F4 => {
            let o = odd_harmonic(m + 1);
            let first = c(p3(m) * &o);
            let bracket = mono(1, 0, 0, 0)
                .scale(&rat(sign(m - 1), 3))
                .add(&quarter_harmonic_diff(m))
                .sub(&c(int(4) * &o));
            let coef = int(2 * s(m)) * p3(m) * int(3) / int((2 * m + 1).pow(2));
            let second = gamma_ratio_cf(2 * m + 1)?.mul(&mono(0, 0, 0, 1)).mul(&bracket).scale(&coef);
            correction.add(&first).add(&second)
        }
        F5 => {
            let o = odd_harmonic(m + 1);
            let inner = ClosedForm::integer(2 * m + 1)
                .sub(&mono(-1, 0, 0, 0).scale(&int(2 * sign(m))))
                .scale(&o)
                .sub(&c(rat(1, 3)));
            correction.add(&inner.scale(&p3(m)))
        }
        F6 => ClosedForm::integer(2 * m + 1)
            .sub(&mono(-2, 0, 0, 0).scale(&(int(sign(m)) * pow2(2) * half_binom(m))))
            .scale(&p4(m)),
        F7 => {
            let o = odd_harmonic(m + 1);
            // 3 (-1)^(m+1) 2^(4m+2) / (...) = -6 (-1)^m half_binom
            let first = ClosedForm::integer(2 * m + 1)
                .add(&mono(-2, 0, 0, 0).scale(&(int(-6 * sign(m)) * half_binom(m))))
                .scale(&(p4(m) * &o));
            let log_part = mono(-2, 0, 1, 0)
                .scale(&int(2))
                .add(&mono(-2, 0, 0, 0).scale(&harmonic(2 * m as u64 + 1)))
                .scale(&(int(sign(m)) * half_binom(m)));
            let second = log_part.sub(&c(rat(1, 4))).scale(&p4(m));
            correction.add(&first).add(&second)
        }
        F8 => mono(-1, 0, 0, 0).scale(&(int(2) / Pow::pow(w(m), 3u32))),
        F9 => correction.add(&mono(-1, 0, 0, 0).scale(&(int(2) / Pow::pow(w(m), 3u32) * odd_harmonic(m)))),
        F10 => {
            let num = int(sign(m)) * pow2(8 * m);
            let den = Pow::pow(big(&factorial(m as u64)), 4u32) * int(m)
                * Pow::pow(big(&central_binomial(m as usize)), 5u32);
            mono(-2, 0, 0, 0).scale(&(num / den))
        }
        F11 => gamma_ratio_cf(2 * m - 1)?
            .mul(&mono(0, 0, 0, 1))
            .scale(&(int(24 * s(m)) / int((2 * m - 1).pow(2)) / Pow::pow(w(m), 3u32))),
        F11a => {
            let lead = big(&(factorial(2 * m as u64) * central_binomial(2 * m as usize))) / pow2(2 * m);
            let q = int(sign(m)) / int((4 * m - 1).pow(2)) * rat(1, 4) * prod(0, 3 * m - 1, |j| 4 * j - 3)
                / Pow::pow(prod(0, m - 1, |j| 4 * j - 1), 3u32);
            mono(-3, 4, 0, 0).scale(&(q / Pow::pow(lead, 3u32)))
        }
        F11b => {
            let lead = big(&(factorial(2 * m as u64 + 1) * central_binomial(2 * m as usize + 1))) / pow2(2 * m + 1);
            let q = int(sign(m + 1)) / int((4 * m + 1).pow(2)) * int(48) * prod(1, 3 * m, |j| 4 * j - 1)
                / Pow::pow(prod(1, m, |j| 4 * j - 3), 3u32);
            mono(1, -4, 0, 0).scale(&(q / Pow::pow(lead, 3u32)))
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use FamilyId::*;

    fn cf(s: &str) -> ClosedForm {
        s.parse().unwrap()
    }

    #[test]
    fn displayed_values() {
        assert_eq!(rhs(F1, 0).unwrap(), cf("8 - 384*pi*G^-4"));
        assert_eq!(rhs(F1a, 0).unwrap(), cf("8 - 384*pi*G^-4"));
        assert_eq!(rhs(F2, 0).unwrap(), cf("8 - 16*pi^-1"));
        assert_eq!(rhs(F3, 0).unwrap(), cf("-8 + 2*G^4*pi^-3"));
        assert_eq!(rhs(F3a, 0).unwrap(), cf("-8 + 2*G^4*pi^-3"));
        assert_eq!(rhs(F4, 0).unwrap(), cf("8 + 64*pi^2*G^-4 - 640*pi*G^-4"));
        assert_eq!(rhs(F5, 0).unwrap(), cf("16/3 - 16*pi^-1"));
        assert_eq!(rhs(F6, 0).unwrap(), cf("16 - 128*pi^-2"));
        assert_eq!(rhs(F7, 0).unwrap(), cf("12 - 160*pi^-2 + 64*ln2*pi^-2"));
        for m in [0, 1] {
            assert_eq!(rhs(F8, m).unwrap(), cf("2*pi^-1"));
        }
        assert_eq!(rhs(F8, 2).unwrap(), cf("2/27*pi^-1"));
        assert_eq!(rhs(F9, 0).unwrap(), ClosedForm::zero());
        assert_eq!(rhs(F10, 1).unwrap(), cf("-8*pi^-2"));
        assert_eq!(rhs(F10, 2).unwrap(), cf("64/243*pi^-2"));
        assert_eq!(rhs(F11, 0).unwrap(), cf("1/4*G^4*pi^-3"));
        assert_eq!(rhs(F11, 1).unwrap(), cf("-48*pi*G^-4"));
        assert_eq!(rhs(F11, 2).unwrap(), cf("-5/324*G^4*pi^-3"));
        assert_eq!(rhs(F11, 3).unwrap(), cf("1232/9375*pi*G^-4"));
        assert_eq!(rhs(F1b, 1).unwrap(), cf("-8/27 - 10/81*G^4*pi^-3"));
        assert_eq!(rhs(F3, 1).unwrap(), cf("8/9 - 896/9*pi*G^-4"));
        assert!(rhs(F10, 0).is_err());
    }

    #[test]
    fn corollaries_reparameterize() {
        for m in 0..=6 {
            assert_eq!(rhs(F1a, m).unwrap(), rhs(F1, 2 * m).unwrap(), "F1a {m}");
            assert_eq!(rhs(F3a, m).unwrap(), rhs(F3, 2 * m).unwrap(), "F3a {m}");
            assert_eq!(rhs(F11a, m).unwrap(), rhs(F11, 2 * m).unwrap(), "F11a {m}");
            assert_eq!(rhs(F11b, m).unwrap(), rhs(F11, 2 * m + 1).unwrap(), "F11b {m}");
            if m >= 1 {
                assert_eq!(rhs(F1b, m).unwrap(), rhs(F1, 2 * m - 1).unwrap(), "F1b {m}");
                assert_eq!(rhs(F3b, m).unwrap(), rhs(F3, 2 * m - 1).unwrap(), "F3b {m}");
            }
        }
    }
}
