//! Numerical summation of the families with certified or cross-checked error radii.
//!
//! Three strategies: direct summation with an integral-comparison tail bound,
//! Cohen-Villegas-Zagier acceleration for alternating families, and an
//! asymptotic expansion of the tail for positive series that converge too
//! slowly for direct summation.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::accel::{cvz_bound, cvz_sum};
use crate::asymptotic::{evaluate, Series, TailExpansion};
use crate::combinatorics::{int, odd_harmonic, rat};
use crate::error::{usage, Error, Result};
use crate::family::{Base, FamilyDescriptor, FamilyId, Weight};
use crate::float::Mag;
use crate::real::TrackedReal;

/// Guard bits carried by the term stream above the requested precision.
const GUARD: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Direct,
    AlternatingAccel,
    MonotoneExtrapolation,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::AlternatingAccel => "alternating-accel",
            Strategy::MonotoneExtrapolation => "monotone-extrapolation",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(Strategy::Direct),
            "alternating-accel" | "accel" | "cvz" => Ok(Strategy::AlternatingAccel),
            "monotone-extrapolation" | "extrapolation" => Ok(Strategy::MonotoneExtrapolation),
            _ => Err(usage(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SumResult {
    /// Its radius covers rounding and the truncation estimate.
    pub value: TrackedReal,
    pub terms_used: u64,
    pub strategy: Strategy,
    pub tail_bound: TrackedReal,
}

#[derive(Clone, Debug)]
pub struct SumOptions {
    pub prec: u32,
    pub max_direct: u64,
    pub max_accel: u64,
    /// Force a strategy instead of dispatching on the family.
    pub strategy: Option<Strategy>,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self { prec: 256, max_direct: 200_000, max_accel: 2000, strategy: None }
    }
}

/// Terms `t_k` in floating point, advanced by the exact term ratio.
pub struct TermStream<'a> {
    d: &'a FamilyDescriptor,
    k: i64,
    /// `(base_k P(k, n))^p`
    core: TrackedReal,
    /// `O_{k-n}`
    odd: TrackedReal,
    prec: u32,
}

impl<'a> TermStream<'a> {
    pub fn new(d: &'a FamilyDescriptor, k: i64, prec: u32) -> Self {
        let core = TrackedReal::from_rational(&Pow::pow(d.core(k), d.power), prec);
        let odd = TrackedReal::from_rational(&odd_harmonic(k - d.n), prec);
        Self { d, k, core, odd, prec }
    }

    pub fn index(&self) -> i64 {
        self.k
    }

    pub fn core(&self) -> &TrackedReal {
        &self.core
    }

    pub fn odd(&self) -> &TrackedReal {
        &self.odd
    }

    /// `t_k` at the current index.
    pub fn term(&self) -> TrackedReal {
        let d = self.d;
        let t = match &d.weight {
            Weight::Plain => self.core.clone(),
            Weight::Linear { c } => self.core.mul_int(4 * self.k - 2 * d.n + c),
            Weight::Harmonic => self.core.mul(&self.odd),
            Weight::LinearHarmonic { c, offset } => {
                let w = self.odd.mul_int(4 * self.k - 2 * d.n + c).add_rational(offset);
                self.core.mul(&w)
            }
        };
        if d.alternating && self.k % 2 == 1 {
            t.neg()
        } else {
            t
        }
    }

    pub fn advance(&mut self) {
        let r = Pow::pow(self.d.core_ratio(self.k), self.d.power);
        self.core = self
            .core
            .mul_rational(&BigRational::from_integer(r.numer().clone()))
            .div(&TrackedReal::from_bigint(r.denom(), self.prec))
            .expect("term ratio denominators are positive integers");
        let step = 2 * (self.k - self.d.n) + 1;
        self.odd = self.odd.add(&TrackedReal::from_int(1, self.prec).div_int(step).expect("odd step"));
        self.k += 1;
    }
}

/// Floating-point partial sum `sum_{k=start}^{N} t_k`.
pub fn partial_sum_real(family: FamilyId, m: i64, n: i64, prec: u32) -> Result<TrackedReal> {
    let d = FamilyDescriptor::new(family, m)?;
    if n < d.start {
        return Err(usage(format!("{family} at m = {m} starts at k = {}, got N = {n}", d.start)));
    }
    let w = prec + GUARD;
    let mut s = TermStream::new(&d, d.start, w);
    let mut acc = TrackedReal::zero(w);
    loop {
        acc = acc.add(&s.term());
        if s.index() == n {
            return Ok(acc);
        }
        s.advance();
    }
}

/// Partial sum through `N` and `|t_{N+1}|`, the remainder bound of an
/// alternating series with decreasing terms.
pub fn alternating_partial(family: FamilyId, m: i64, n: i64, prec: u32) -> Result<(TrackedReal, TrackedReal)> {
    let d = FamilyDescriptor::new(family, m)?;
    if !d.alternating {
        return Err(Error::Strategy(format!("{family} is not alternating")));
    }
    if n < d.start {
        return Err(usage(format!("{family} at m = {m} starts at k = {}, got N = {n}", d.start)));
    }
    let w = prec + GUARD;
    let mut s = TermStream::new(&d, d.start, w);
    let mut acc = TrackedReal::zero(w);
    loop {
        acc = acc.add(&s.term());
        s.advance();
        if s.index() == n + 1 {
            return Ok((acc, s.term().abs()));
        }
    }
}

/// Upper bound for a quantity given by its base-2 logarithm.
fn mag_from_log2(l: f64) -> Mag {
    let i = libm::floor(l);
    let f = libm::exp2(l - i) * (1.0 + 1e-9);
    Mag::from_f64_up(f).mul_pow2(i as i64)
}

/// Tail bound from `log2 |t_k|` for `k = start..=N`.
fn bound_from_logs(d: &FamilyDescriptor, log2t: &[f64], n: i64) -> Result<Mag> {
    let lo = (n / 4).max(d.start + 1);
    let (mut sx, mut sy, mut sxx, mut sxy, mut cnt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in lo..=n {
        let x = libm::log(k as f64);
        let y = log2t[(k - d.start) as usize] * core::f64::consts::LN_2;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1.0;
    }
    let slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    let alpha_hat = -slope - 0.25;
    if !(alpha_hat > 1.5) {
        return Err(Error::Strategy(format!(
            "{} at m = {}: empirical decay exponent {:.3} is too small for a tail bound",
            d.id, d.m, alpha_hat
        )));
    }
    let nf = n as f64;
    let mut l = log2t[(n - d.start) as usize] + libm::log2(nf) - libm::log2(alpha_hat - 1.0) + 1.0;
    if d.has_log_factor() {
        l += libm::log2(1.0 + libm::log(nf));
    }
    Ok(mag_from_log2(l))
}

fn log2_abs(t: &TrackedReal) -> f64 {
    t.abs_upper().log2()
}

/// A bound `B >= sum_{k>N} |t_k|` from the measured decay of the terms
/// between `N/4` and `N`, with a 0.25 margin on the exponent and a factor 2.
pub fn tail_bound(family: FamilyId, m: i64, n: i64) -> Result<TrackedReal> {
    let d = FamilyDescriptor::new(family, m)?;
    if n < 4 * d.start + 64 {
        return Err(usage(format!("tail bound needs N >= {}, got {n}", 4 * d.start + 64)));
    }
    if d.alternating {
        return Err(Error::Strategy(format!("{family} is alternating; tail bounds cover positive tails only")));
    }
    let prec = 128;
    let mut s = TermStream::new(&d, d.start, prec);
    let mut logs = Vec::with_capacity((n - d.start + 1) as usize);
    loop {
        logs.push(log2_abs(&s.term()));
        if s.index() == n {
            break;
        }
        s.advance();
    }
    let b = bound_from_logs(&d, &logs, n)?;
    Ok(TrackedReal::exact(b.to_bigfloat(), prec))
}

/// Sum a family to absolute accuracy `eps` with default options.
pub fn sum_series(family: FamilyId, m: i64, eps: f64) -> Result<SumResult> {
    sum_series_with(family, m, eps, &SumOptions::default())
}

/// Number of terms direct summation is expected to need.
fn predicted_direct_terms(d: &FamilyDescriptor, eps: f64) -> f64 {
    let a = d.decay_exponent_f64();
    if a <= 1.0 {
        return f64::INFINITY;
    }
    4.0 * libm::pow(1.0 / eps, 1.0 / (a - 1.0)) + 4.0 * d.start as f64 + 64.0
}

pub fn choose_strategy(d: &FamilyDescriptor, eps: f64, opts: &SumOptions) -> Strategy {
    if d.alternating {
        Strategy::AlternatingAccel
    } else if d.decay_exponent_f64() >= 2.5 && predicted_direct_terms(d, eps) <= opts.max_direct as f64 {
        Strategy::Direct
    } else {
        Strategy::MonotoneExtrapolation
    }
}

pub fn sum_series_with(family: FamilyId, m: i64, eps: f64, opts: &SumOptions) -> Result<SumResult> {
    if !(eps > 0.0) {
        return Err(usage(format!("eps must be positive, got {eps}")));
    }
    let d = FamilyDescriptor::new(family, m)?;
    let strategy = opts.strategy.unwrap_or_else(|| choose_strategy(&d, eps, opts));
    let r = match strategy {
        Strategy::Direct => direct(&d, eps, opts),
        Strategy::AlternatingAccel => {
            if !d.alternating {
                return Err(Error::Strategy(format!("{family} is not alternating")));
            }
            accelerated(&d, eps, opts)
        }
        Strategy::MonotoneExtrapolation => {
            if d.alternating {
                return Err(Error::Strategy(format!("{family} is alternating; use acceleration")));
            }
            extrapolated(&d, eps, opts)
        }
    }?;
    Ok(SumResult { value: r.value.with_prec(opts.prec), ..r })
}

fn convergence(d: &FamilyDescriptor, what: &str, best: SumResult) -> Error {
    Error::Convergence {
        message: format!("{} at m = {}: {what}", d.id, d.m),
        best: Some(Box::new(best)),
    }
}

fn direct(d: &FamilyDescriptor, eps: f64, opts: &SumOptions) -> Result<SumResult> {
    let w = opts.prec + GUARD;
    let mut s = TermStream::new(d, d.start, w);
    let mut acc = TrackedReal::zero(w);
    let mut logs = Vec::new();
    let mut checkpoint = 4 * d.start + 64;
    let eps_mag = Mag::from_f64_up(eps);
    loop {
        let t = s.term();
        logs.push(log2_abs(&t));
        acc = acc.add(&t);
        let k = s.index();
        s.advance();
        if k < checkpoint {
            continue;
        }
        let bound = if d.alternating { s.term().abs_upper() } else { bound_from_logs(d, &logs, k)? };
        let result = SumResult {
            value: acc.widen(bound),
            terms_used: (k - d.start + 1) as u64,
            strategy: Strategy::Direct,
            tail_bound: TrackedReal::exact(bound.to_bigfloat(), w),
        };
        if bound.add(&acc.radius()) <= eps_mag {
            return Ok(result);
        }
        checkpoint *= 2;
        if (checkpoint - d.start + 1) as u64 > opts.max_direct {
            return Err(convergence(d, "direct summation exhausted its term budget", result));
        }
    }
}

fn accelerated(d: &FamilyDescriptor, eps: f64, opts: &SumOptions) -> Result<SumResult> {
    let w = opts.prec + GUARD;
    // past every sign change of the odd product and the linear weight
    let k0 = d.start + 2 * d.n.max(0) + 8;
    let mut s = TermStream::new(d, d.start, w);
    let mut head = TrackedReal::zero(w);
    while s.index() < k0 {
        head = head.add(&s.term());
        s.advance();
    }
    let head_terms = (k0 - d.start) as u64;
    let eps_mag = Mag::from_f64_up(eps);
    let need = -libm::log2(eps) + 6.0;
    let mut n1 = ((need / 2.54).ceil() as usize).max(8) + 2;
    // |t_k| for k >= k0, extended on demand
    let mut a: Vec<TrackedReal> = Vec::new();
    let sign_k0 = if k0 % 2 == 0 { 1 } else { -1 };
    loop {
        let n2 = n1 + 12;
        while a.len() < n2 {
            a.push(s.term().abs());
            s.advance();
        }
        let s1 = cvz_sum(&a[..n1], w);
        let s2 = cvz_sum(&a[..n2], w);
        let diff = s1.sub(&s2).abs_upper();
        let err = diff.add(&cvz_bound(a[0].abs_upper(), n2));
        let tail = if sign_k0 > 0 { s2 } else { s2.neg() };
        let result = SumResult {
            value: head.add(&tail).widen(err),
            terms_used: head_terms + n2 as u64,
            strategy: Strategy::AlternatingAccel,
            tail_bound: TrackedReal::exact(err.to_bigfloat(), w),
        };
        if result.value.radius() <= eps_mag {
            return Ok(result);
        }
        let next = n1 + n1 / 2;
        if head_terms + (next + 12) as u64 > opts.max_accel {
            return Err(convergence(d, "acceleration exhausted its term budget", result));
        }
        n1 = next;
    }
}

/// Tail expansions for one family at one parameter.
struct TailModel {
    /// Expansion of the tail of `core^p * L(k)` where `L` is the linear weight or 1.
    main: Vec<BigRational>,
    /// Correction for the `O_{k-n}` factor.
    harmonic: Option<Vec<BigRational>>,
    /// Expansion of the tail of `core^p` alone, for the constant offset.
    offset: Option<(BigRational, Vec<BigRational>)>,
}

const EXPANSION_LEN: usize = 110;

impl TailModel {
    fn new(d: &FamilyDescriptor) -> Result<Self> {
        let len = EXPANSION_LEN;
        let shift = match d.base {
            Base::Catalan => int(2),
            Base::CentralBinomial => int(1),
        };
        // (2k - 2n + 1) / (2k + 2s) = (1 - (n - 1/2) u) / (1 + s u)
        let rc = Series::mobius(&(rat(1, 2) - int(d.n)), &shift, len).pow(d.power);
        let lin = d.linear(0).map(|c0| {
            // (4k + 4 + c0) / (4k + c0)
            Series::mobius(&(rat(c0, 4) + int(1)), &rat(c0, 4), len)
        });
        let ra = match &lin {
            Some(l) => rc.mul(l),
            None => rc.clone(),
        };
        let ta = TailExpansion::new(&ra)?;
        let main = ta.plain();
        let harmonic = d.has_log_factor().then(|| ta.harmonic(&main, &ra, d.n));
        let offset = match &d.weight {
            Weight::LinearHarmonic { offset, .. } => Some((offset.clone(), TailExpansion::new(&rc)?.plain())),
            _ => None,
        };
        Ok(Self { main, harmonic, offset })
    }

    /// `sum_{k >= N} t_k` from the stream positioned at `N`.
    fn tail(&self, d: &FamilyDescriptor, s: &TermStream<'_>, prec: u32) -> Result<TrackedReal> {
        let n = s.index() as u64;
        let f = evaluate(&self.main, n, prec)?;
        let lin = d.linear(s.index()).map_or_else(BigRational::one, int);
        let g = s.core().mul_rational(&lin);
        let mut t = match &self.harmonic {
            Some(b) => g.mul(&s.odd().mul(&f).add(&evaluate(b, n, prec)?)),
            None => g.mul(&f),
        };
        if let Some((off, phi)) = &self.offset {
            t = t.add(&s.core().mul_rational(off).mul(&evaluate(phi, n, prec)?));
        }
        Ok(t)
    }
}

fn extrapolated(d: &FamilyDescriptor, eps: f64, opts: &SumOptions) -> Result<SumResult> {
    let w = opts.prec + GUARD;
    let model = TailModel::new(d)?;
    let eps_mag = Mag::from_f64_up(eps);
    let mut n1 = (d.start + 128).max(32 * (d.n.abs() + 2));
    let mut s = TermStream::new(d, d.start, w);
    let mut head = TrackedReal::zero(w);
    let mut prev: Option<TrackedReal> = None;
    loop {
        while s.index() < n1 {
            head = head.add(&s.term());
            s.advance();
        }
        let est = match model.tail(d, &s, w) {
            Ok(t) => Some(head.add(&t)),
            Err(Error::Precision(_)) => None,
            Err(e) => return Err(e),
        };
        if let (Some(p), Some(e)) = (&prev, &est) {
            let diff = p.sub(e).abs_upper();
            let value = e.widen(diff);
            let result = SumResult {
                terms_used: (n1 - d.start) as u64,
                strategy: Strategy::MonotoneExtrapolation,
                tail_bound: TrackedReal::exact(diff.add(&e.radius()).to_bigfloat(), w),
                value,
            };
            if result.value.radius() <= eps_mag {
                return Ok(result);
            }
            if (2 * n1 - d.start) as u64 > opts.max_direct {
                return Err(convergence(d, "tail expansion did not settle within the term budget", result));
            }
        } else if (2 * n1 - d.start) as u64 > opts.max_direct {
            return Err(Error::Convergence {
                message: format!("{} at m = {}: tail expansion did not reach working precision", d.id, d.m),
                best: None,
            });
        }
        prev = est;
        n1 *= 2;
    }
}
