//! Log-Gamma on the positive reals: shift the argument up until Stirling's
//! series converges fast enough, sum until the terms drop below the working
//! precision, and charge the first omitted term to the radius.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use spin::RwLock;

use crate::constants::{constant, Constant};
use crate::error::{domain, Result};
use crate::float::Mag;
use crate::real::TrackedReal;

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> BigRational {
    if let Some(b) = BERNOULLI.read().get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write();
    if table.is_empty() {
        table.push(BigRational::one());
    }
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0
    while table.len() <= n {
        let m = table.len();
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, b) in table.iter().enumerate() {
            acc += b * &binom;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        table.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    table[n].clone()
}

/// `ln Gamma(x)` for an interval of strictly positive reals, radius at most
/// `2^(-prec+6)` plus the propagated input radius.
pub fn log_gamma(x: &TrackedReal, prec: u32) -> Result<TrackedReal> {
    if !x.is_positive() {
        return Err(domain("log_gamma requires a positive argument"));
    }
    let w = prec + 64;
    let xv = TrackedReal::exact(x.value().clone(), w);
    let xf = x.to_f64();
    let zmin = (20.0f64).max(0.3 * w as f64);
    let shift = if xf < zmin { libm::ceil(zmin - xf) as i64 } else { 0 };

    let mut prod = TrackedReal::from_int(1, w);
    for i in 0..shift {
        prod = prod.mul(&xv.add(&TrackedReal::from_int(i, w)));
    }
    let z = xv.add(&TrackedReal::from_int(shift, w));
    let half = TrackedReal::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)), w);
    let two_pi = constant(Constant::Pi, w)?.mul_pow2(1);
    let mut s = z.sub(&half).mul(&z.ln()?).sub(&z).add(&two_pi.ln()?.mul_pow2(-1));

    let zinv = z.recip()?;
    let zinv2 = zinv.sqr();
    let mut zpow = zinv;
    let cutoff = Mag::pow2(-(w as i64));
    let mut k = 1usize;
    loop {
        let coef = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let term = zpow.mul_rational(&coef);
        if term.abs_upper() < cutoff {
            // Stirling's remainder on the positive axis is bounded by the
            // first omitted term.
            s = s.widen(term.abs_upper());
            break;
        }
        s = s.add(&term);
        zpow = zpow.mul(&zinv2);
        k += 1;
    }
    if shift > 0 {
        s = s.sub(&prod.ln()?);
    }

    let mut out = s.with_prec(prec);
    if !x.radius().is_zero() {
        // |psi(t)| <= max |ln t| + 1/t on the interval
        let r = x.radius().to_f64();
        let lo = (xf - r).max(f64::MIN_POSITIVE);
        let hi = xf + r;
        let psi = libm::fabs(libm::log(lo)).max(libm::fabs(libm::log(hi))) + 1.0 / lo;
        out = out.widen(x.radius().mul(&Mag::from_f64_up(2.0 * psi + 1.0)));
    }
    Ok(out)
}

pub fn log_gamma_rational(q: &BigRational, prec: u32) -> Result<TrackedReal> {
    if !q.is_positive() {
        return Err(domain("log_gamma requires a positive argument"));
    }
    log_gamma(&TrackedReal::from_rational(q, prec + 64), prec)
}

/// `Gamma(q)` for any rational that is not a pole, using the reflection
/// formula `Gamma(q) Gamma(1-q) = pi / sin(pi q)` for non-positive arguments.
pub fn gamma_rational(q: &BigRational, prec: u32) -> Result<TrackedReal> {
    let w = prec + 32;
    if q.is_positive() {
        return Ok(log_gamma_rational(q, w)?.exp()?.with_prec(prec));
    }
    if q.is_integer() {
        return Err(domain("Gamma has a pole at non-positive integers"));
    }
    let one_minus = BigRational::one() - q;
    let g = log_gamma_rational(&one_minus, w)?.exp()?;
    let s = TrackedReal::sin_pi(q, w)?;
    let pi = constant(Constant::Pi, w)?;
    Ok(pi.div(&s.mul(&g))?.with_prec(prec))
}

/// Convenience for magnitudes of moderate rationals.
pub fn log_gamma_f64(q: &BigRational) -> Option<f64> {
    let f = q.to_f64()?;
    if f <= 0.0 {
        return None;
    }
    Some(log_gamma_rational(q, 64).ok()?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn known_values() {
        let p = 192;
        let z = log_gamma_rational(&rat(1, 1), p).unwrap();
        assert!(z.contains_rational(&rat(0, 1)));
        assert!(z.radius() <= Mag::pow2(-(p as i64) + 6));
        // ln Gamma(1/2) = ln(pi)/2
        let h = log_gamma_rational(&rat(1, 2), p).unwrap();
        let lp = constant(Constant::Pi, p).unwrap().ln().unwrap().mul_pow2(-1);
        assert!(h.overlaps(&lp));
        // Gamma(5) = 24
        let g = log_gamma_rational(&rat(5, 1), p).unwrap();
        assert!(g.overlaps(&TrackedReal::from_int(24, p).ln().unwrap()));
        // Gamma(1/4)
        let q = log_gamma_rational(&rat(1, 4), p).unwrap().exp().unwrap();
        assert!(q.overlaps(&constant(Constant::GammaQuarter, p).unwrap()));
        assert!(log_gamma_rational(&rat(0, 1), p).is_err());
    }

    #[test]
    fn reflection_for_negative_arguments() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let g = gamma_rational(&rat(-1, 2), 128).unwrap();
        let want = constant(Constant::Pi, 128).unwrap().sqrt().unwrap().mul_int(-2);
        assert!(g.overlaps(&want));
        assert!(gamma_rational(&rat(-2, 1), 128).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn functional_equation(n in 1i64..2000) {
            let x = rat(n, 100);
            let a = log_gamma_rational(&(x.clone() + BigRational::one()), 128).unwrap().exp().unwrap();
            let b = log_gamma_rational(&x, 128).unwrap().exp().unwrap();
            let ratio = a.div(&b).unwrap();
            prop_assert!(ratio.overlaps(&TrackedReal::from_rational(&x, 128)));
        }
    }
}
