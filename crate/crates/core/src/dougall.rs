//! Dougall-type summation formulas for cubes and fourth powers of `binom(x, k+1)`,
//! evaluated on both sides at rational `x`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::accel::{cvz_bound, cvz_sum};
use crate::asymptotic::{evaluate, Series, TailExpansion};
use crate::combinatorics::{int, rat};
use crate::constants::{constant, Constant};
use crate::error::{domain, usage, Error, Result};
use crate::float::Mag;
use crate::gamma::log_gamma_rational;
use crate::real::TrackedReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DougallVariant {
    /// `sum (-1)^k binom(x, k+1)^3`
    AltPlain,
    /// `sum binom(x, k+1)^3 (2k + 2 - x)`
    Linear,
    /// `sum (-1)^k binom(x, k+1)^3 (2k + 2 - x)`
    AltLinear,
    /// `sum binom(x, k+1)^4 (2k + 2 - x)`
    Fourth,
}

impl DougallVariant {
    pub const ALL: [DougallVariant; 4] =
        [DougallVariant::AltPlain, DougallVariant::Linear, DougallVariant::AltLinear, DougallVariant::Fourth];

    pub fn name(self) -> &'static str {
        match self {
            DougallVariant::AltPlain => "D-alt-plain",
            DougallVariant::Linear => "D-linear",
            DougallVariant::AltLinear => "D-alt-linear",
            DougallVariant::Fourth => "D-fourth",
        }
    }

    /// Open lower end of the range of `x` accepted on both sides.
    pub fn lower_limit(self) -> BigRational {
        match self {
            DougallVariant::AltPlain => rat(-2, 3),
            DougallVariant::Linear | DougallVariant::AltLinear => rat(-1, 3),
            DougallVariant::Fourth => rat(-1, 2),
        }
    }

    fn power(self) -> u32 {
        if self == DougallVariant::Fourth {
            4
        } else {
            3
        }
    }

    fn alternating(self) -> bool {
        matches!(self, DougallVariant::AltPlain | DougallVariant::AltLinear)
    }

    fn linear(self) -> bool {
        self != DougallVariant::AltPlain
    }

    fn check(self, x: &BigRational) -> Result<()> {
        if *x <= self.lower_limit() {
            return Err(domain(format!("{} needs x > {}, got {x}", self.name(), self.lower_limit())));
        }
        Ok(())
    }
}

impl fmt::Display for DougallVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DougallVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        DougallVariant::ALL
            .iter()
            .copied()
            .find(|v| v.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| usage(format!("unknown Dougall variant {s:?}")))
    }
}

/// The left-hand series, summed to absolute accuracy `eps`.
///
/// `binom(x, k+1)` follows the falling-product recurrence
/// `binom(x, k+2) = binom(x, k+1) (x - k - 1) / (k + 2)`, which is pole free.
/// Past `k = x` the sign pattern settles: the tail is alternating for
/// `D-linear` and of one sign for the other three variants.
pub fn dougall_lhs(variant: DougallVariant, x: &BigRational, eps: f64, prec: u32) -> Result<TrackedReal> {
    variant.check(x)?;
    if !(eps > 0.0) {
        return Err(usage(format!("eps must be positive, got {eps}")));
    }
    let w = prec + 40;
    let k0 = x.ceil().to_integer().to_i64().unwrap_or(0).max(0) + 8;
    let mut beta = TrackedReal::from_rational(x, w);
    let mut exact_zero = x.is_zero();
    let mut k: i64 = 0;
    let term = |k: i64, beta: &TrackedReal| -> TrackedReal {
        let mut t = beta.powi(variant.power() as i32).expect("positive power");
        if variant.linear() {
            t = t.mul_rational(&(int(2 * k + 2) - x));
        }
        if variant.alternating() && k % 2 == 1 {
            t = t.neg();
        }
        t
    };
    let advance = |k: &mut i64, beta: &mut TrackedReal, exact_zero: &mut bool| {
        let f = x - int(*k + 1);
        if f.is_zero() {
            *exact_zero = true;
        }
        *beta = beta.mul_rational(&(f / int(*k + 2)));
        *k += 1;
    };
    let mut head = TrackedReal::zero(w);
    while k < k0 {
        if exact_zero {
            // integer x: every later binomial vanishes
            return Ok(head.with_prec(prec));
        }
        head = head.add(&term(k, &beta));
        advance(&mut k, &mut beta, &mut exact_zero);
    }
    if exact_zero {
        return Ok(head.with_prec(prec));
    }
    let eps_mag = Mag::from_f64_up(eps);
    if variant == DougallVariant::Linear {
        // the tail alternates, so its orientation is the sign of its first term
        let s0 = term(k, &beta).value().signum();
        let mut a: Vec<TrackedReal> = Vec::new();
        let mut n1 = ((((-libm::log2(eps)) + 6.0) / 2.54).ceil() as usize).max(8) + 2;
        loop {
            let n2 = n1 + 12;
            while a.len() < n2 {
                a.push(term(k, &beta).abs());
                advance(&mut k, &mut beta, &mut exact_zero);
            }
            let s1 = cvz_sum(&a[..n1], w);
            let s2 = cvz_sum(&a[..n2], w);
            let err = s1.sub(&s2).abs_upper().add(&cvz_bound(a[0].abs_upper(), n2));
            let tail = if s0 > 0 { s2 } else { s2.neg() };
            let total = head.add(&tail).widen(err);
            if total.radius() <= eps_mag {
                return Ok(total.with_prec(prec));
            }
            if n1 > 2000 {
                return Err(Error::Convergence {
                    message: format!("{} at x = {x}: acceleration did not settle", variant.name()),
                    best: None,
                });
            }
            n1 += n1 / 2;
        }
    }
    // one-signed tail: asymptotic expansion of sum_{j >= N} t_j / t_N,
    // cross-checked between N and 2N
    let one = BigRational::from_integer(1.into());
    let mut r = Series::mobius(&(&one - x), &int(2), 110).pow(variant.power());
    if variant.linear() {
        let c = (int(2) - x) / int(2);
        r = r.mul(&Series::mobius(&(&c + &one), &c, 110));
    }
    let phi = TailExpansion::new(&r)?.plain();
    let mut acc = head;
    let mut n1 = (2 * k0).max(64);
    let mut prev: Option<TrackedReal> = None;
    loop {
        while k < n1 {
            acc = acc.add(&term(k, &beta));
            advance(&mut k, &mut beta, &mut exact_zero);
        }
        let est = acc.add(&term(k, &beta).mul(&evaluate(&phi, k as u64, w)?));
        if let Some(p) = &prev {
            let total = est.widen(p.sub(&est).abs_upper());
            if total.radius() <= eps_mag {
                return Ok(total.with_prec(prec));
            }
        }
        if n1 > 100_000 {
            return Err(Error::Convergence {
                message: format!("{} at x = {x}: tail expansion did not settle", variant.name()),
                best: None,
            });
        }
        prev = Some(est);
        n1 *= 2;
    }
}

/// `exp(sum_i c_i log Gamma(a_i))` for positive rational arguments.
fn gamma_product(parts: &[(i64, BigRational)], prec: u32) -> Result<TrackedReal> {
    let mut acc = TrackedReal::zero(prec + 20);
    for (c, a) in parts {
        if *a <= BigRational::zero() {
            return Err(domain(format!("Gamma argument {a} is not positive")));
        }
        acc = acc.add(&log_gamma_rational(a, prec + 20)?.mul_int(*c));
    }
    acc.exp()
}

/// The closed-form right-hand side.
pub fn dougall_rhs(variant: DougallVariant, x: &BigRational, prec: u32) -> Result<TrackedReal> {
    variant.check(x)?;
    let w = prec + 20;
    let xr = TrackedReal::from_rational(x, w);
    let half = rat(1, 2);
    let v = match variant {
        DougallVariant::AltPlain => {
            let g = gamma_product(&[(1, (int(3) * x + int(2)) * &half), (-3, (x + int(2)) * &half)], w)?;
            TrackedReal::from_int(1, w).sub(&g.mul(&TrackedReal::cos_pi(&(x * &half), w)?))
        }
        DougallVariant::Linear => {
            let pi = constant(Constant::Pi, w)?;
            xr.sub(&TrackedReal::sin_pi(x, w)?.div(&pi)?)
        }
        DougallVariant::AltLinear => {
            // sin(pi x)/pi * Gamma((1-x)/2) = 2 sin(pi x/2) / Gamma((1+x)/2) by reflection
            let g = gamma_product(&[(1, (int(1) + int(3) * x) * &half), (-3, (int(1) + x) * &half)], w)?;
            xr.neg().add(&TrackedReal::sin_pi(&(x * &half), w)?.mul_int(2).mul(&g))
        }
        DougallVariant::Fourth => {
            let pi = constant(Constant::Pi, w)?;
            let b = gamma_product(&[(1, int(2) * x + int(1)), (-2, x + int(1))], w)?;
            xr.sub(&TrackedReal::sin_pi(x, w)?.div(&pi)?.mul(&b))
        }
    };
    Ok(v.with_prec(prec))
}
