//! Asymptotic expansions of series tails.
//!
//! For a positive hypergeometric sequence `g_k` with `g_{k+1} / g_k = R(k)`
//! the tail `T_N = sum_{k >= N} g_k` satisfies `T_N = g_N F(N)` with
//! `F(N) = 1 + R(N) F(N+1)`. Writing `u = 1/N` and `Phi(u) = u F(1/u)`, the
//! recurrence becomes `Phi(u) = u + R(u) (1+u) Phi(u/(1+u))`, which fixes the
//! power-series coefficients of `Phi` one at a time. Tails weighted by
//! `O_{k-n}` reduce to the same triangular solve with a different source
//! series. The expansions diverge, so evaluation stops at the smallest term.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{int, rat};
use crate::error::{Error, Result};
use crate::float::Mag;
use crate::real::TrackedReal;

/// Truncated power series in `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series(pub Vec<BigRational>);

impl Series {
    pub fn one(len: usize) -> Self {
        let mut v = vec![BigRational::zero(); len];
        v[0] = BigRational::one();
        Series(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coef(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mul(&self, o: &Series) -> Series {
        let len = self.len().min(o.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.0.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series(out)
    }

    pub fn pow(&self, p: u32) -> Series {
        let mut acc = Series::one(self.len());
        for _ in 0..p {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(1 + a u)^e` for integer `e`.
    pub fn binomial(a: &BigRational, e: i64, len: usize) -> Series {
        let mut v = Vec::with_capacity(len);
        let mut c = BigRational::one();
        let mut apow = BigRational::one();
        for j in 0..len as i64 {
            v.push(&c * &apow);
            c = c * int(e - j) / int(j + 1);
            apow *= a;
        }
        Series(v)
    }

    /// `(1 + b u) / (1 + a u)`.
    pub fn mobius(b: &BigRational, a: &BigRational, len: usize) -> Series {
        let mut num = vec![BigRational::zero(); len];
        num[0] = BigRational::one();
        if len > 1 {
            num[1] = b.clone();
        }
        Series(num).mul(&Series::binomial(a, -1, len))
    }

    /// Shift by one power of `u`.
    pub fn times_u(&self) -> Series {
        let mut v = vec![BigRational::zero()];
        v.extend(self.0.iter().take(self.len() - 1).cloned());
        Series(v)
    }
}

/// Solver for tail expansions of one ratio function `R(u)`.
pub struct TailExpansion {
    len: usize,
    alpha: BigRational,
    /// `m[i] = R(u) (1+u)^(1-i)`
    m: Vec<Series>,
}

impl TailExpansion {
    /// `r` holds the coefficients of `R(1/k)` in powers of `u = 1/k`;
    /// `R(u) = 1 - alpha u + ...` with `alpha > 1` is required.
    pub fn new(r: &Series) -> Result<Self> {
        let len = r.len();
        if r.coef(0) != BigRational::one() {
            return Err(Error::Strategy("ratio does not tend to 1".into()));
        }
        let alpha = -r.coef(1);
        if alpha <= int(1) {
            return Err(Error::Strategy("tail does not converge (alpha <= 1)".into()));
        }
        // M_0 = R (1+u), then M_{i+1} = M_i / (1+u)
        let mut m = Vec::with_capacity(len);
        m.push(r.mul(&Series::binomial(&BigRational::one(), 1, len)));
        for i in 1..len {
            let prev: &Series = &m[i - 1];
            let mut next: Vec<BigRational> = Vec::with_capacity(len);
            for (j, p) in prev.0.iter().enumerate() {
                let v = if j == 0 { p.clone() } else { p - &next[j - 1] };
                next.push(v);
            }
            m.push(Series(next));
        }
        Ok(Self { len, alpha, m })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    /// Coefficients `c` of the solution of `C(u) - R(u) (1+u) C(u/(1+u)) = S(u)`;
    /// `S` must vanish at `u = 0`.
    pub fn solve(&self, source: &Series) -> Vec<BigRational> {
        let mut c: Vec<BigRational> = Vec::with_capacity(self.len - 1);
        for q in 1..self.len {
            // order q: 0 = S_q + sum_{i<=q-1} c_i [u^(q-i)] M_i
            // and [u^1] M_{q-1} = -alpha + 2 - q
            let mut acc = source.coef(q);
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_zero() {
                    acc += ci * &self.m[i].0[q - i];
                }
            }
            let denom = &self.alpha + int(q as i64 - 2);
            c.push(acc / denom);
        }
        c
    }

    /// `Phi` for the plain tail: source `u`.
    pub fn plain(&self) -> Vec<BigRational> {
        let mut s = Series(vec![BigRational::zero(); self.len]);
        s.0[1] = BigRational::one();
        self.solve(&s)
    }

    /// Coefficients for the `O_{k-n}` correction of a tail whose plain
    /// expansion is `phi`:
    /// `B(N) = R(N) (B(N+1) + F(N+1) / (2N - 2n + 1))`.
    pub fn harmonic(&self, phi: &[BigRational], r: &Series, n: i64) -> Vec<BigRational> {
        let len = self.len;
        let one = BigRational::one();
        // Phi(u / (1+u)) = sum phi_i u^i (1+u)^(-i)
        let mut composed = Series(vec![BigRational::zero(); len]);
        for (i, p) in phi.iter().enumerate().take(len) {
            let b = Series::binomial(&one, -(i as i64), len - i);
            for (j, bj) in b.0.iter().enumerate() {
                composed.0[i + j] += p * bj;
            }
        }
        // u / (2 + (1-2n) u) = (u/2) / (1 + ((1-2n)/2) u)
        let inv = Series::binomial(&rat(1 - 2 * n, 2), -1, len).times_u();
        let half = Series(inv.0.iter().map(|c| c / int(2)).collect());
        let one_plus_u = Series::binomial(&one, 1, len);
        let source = r.mul(&one_plus_u).mul(&half).mul(&composed);
        self.solve(&source)
    }
}

/// Evaluate `sum_i c_i N^(1-i)` at `N`. Summation stops once terms drop below
/// the working precision; for a diverging tail it stops before the smallest
/// term, which is then charged to the radius.
pub fn evaluate(c: &[BigRational], n: u64, prec: u32) -> Result<TrackedReal> {
    let inv = TrackedReal::from_int(1, prec).div(&TrackedReal::from_int(n as i64, prec))?;
    let mut pow = TrackedReal::from_int(n as i64, prec);
    let mut sum = TrackedReal::zero(prec);
    let mut best: Option<(Mag, TrackedReal)> = None;
    let floor = Mag::pow2(-(prec as i64) - 8);
    for ci in c {
        if !ci.is_zero() {
            let t = pow.mul_rational(ci);
            let mag = t.abs_upper();
            if mag < floor.mul(&sum.abs_upper().max(Mag::pow2(-(prec as i64)))) {
                return Ok(sum.add(&t).widen(mag));
            }
            match &best {
                Some((b, _)) if mag >= *b => {
                    // clearly diverging: no point going on
                    if mag > b.mul_pow2(20) {
                        break;
                    }
                }
                _ => best = Some((mag, sum.clone())),
            }
            sum = sum.add(&t);
        }
        pow = pow.mul(&inv);
    }
    Ok(match best {
        Some((b, s)) => s.widen(b),
        None => sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tail of `sum 1/k^2` is `psi'(N)`; check against the Euler-Maclaurin value.
    #[test]
    fn zeta_two_tail() {
        let len = 40;
        // R(k) = k^2/(k+1)^2 = (1+u)^-2
        let r = Series::binomial(&int(1), -2, len);
        let t = TailExpansion::new(&r).unwrap();
        assert_eq!(t.alpha(), &int(2));
        let phi = t.plain();
        // F(N) = N^2 psi'(N)
        let n = 100u64;
        let f = evaluate(&phi, n, 200).unwrap();
        // psi'(N) ~ 1/N + 1/(2N^2) + 1/(6N^3) - 1/(30 N^5) + 1/(42 N^7)
        let nf = n as f64;
        let psi1 = 1.0 / nf + 0.5 / (nf * nf) + 1.0 / (6.0 * nf * nf * nf) - 1.0 / (30.0 * nf.powi(5))
            + 1.0 / (42.0 * nf.powi(7));
        assert!((f.to_f64() / (nf * nf) - psi1).abs() < 1e-18);
    }

    /// `sum_{k>=N} O_k / k^3` checked against a long direct sum.
    #[test]
    fn harmonic_tail() {
        let len = 40;
        let r = Series::binomial(&int(1), -3, len);
        let t = TailExpansion::new(&r).unwrap();
        let phi = t.plain();
        let b = t.harmonic(&phi, &r, 0);
        let n = 50u64;
        let prec = 128;
        let f = evaluate(&phi, n, prec).unwrap().to_f64();
        let bb = evaluate(&b, n, prec).unwrap().to_f64();
        let mut o = 0.0f64;
        for j in 1..=n {
            o += 1.0 / (2.0 * j as f64 - 1.0);
        }
        let g = 1.0 / (n as f64).powi(3);
        let predicted = g * (o * f + bb);
        let mut direct = 0.0f64;
        let mut oj = o;
        let mut k = n;
        // sum in f64 far enough that the remainder is below 1e-13 relative
        while k < 4_000_000 {
            direct += oj / (k as f64).powi(3);
            oj += 1.0 / (2.0 * k as f64 + 1.0);
            k += 1;
        }
        assert!((predicted - direct).abs() / direct < 1e-9, "{predicted} {direct}");
    }
}
