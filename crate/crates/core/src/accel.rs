//! Cohen-Villegas-Zagier acceleration of alternating series.
//!
//! For `S = sum_{k>=0} (-1)^k a_k` with `a_k` a moment sequence, the weighted
//! sum `sum_{k<n} w_k a_k` with the weights below is within
//! `2 a_0 / (3 + sqrt 8)^n` of `S`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::int;
use crate::float::Mag;
use crate::real::TrackedReal;

/// `((3 + sqrt 8)^n + (3 - sqrt 8)^n) / 2`, an integer.
pub fn chebyshev_three(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::one(), BigInt::from(3));
    for _ in 0..n {
        let next = &b * 6 - &a;
        a = b;
        b = next;
    }
    a
}

/// Exact weights `w_k`, signs included, so that `sum w_k a_k ~ sum (-1)^k a_k`.
pub fn cvz_weights(n: usize) -> Vec<BigRational> {
    let d = BigRational::from_integer(chebyshev_three(n));
    let mut b = -BigRational::one();
    let mut c = -d.clone();
    let mut out = Vec::with_capacity(n);
    let ni = n as i64;
    for k in 0..ni {
        c = &b - &c;
        out.push(&c / &d);
        b = b * int(2 * (k + ni) * (k - ni)) / int((2 * k + 1) * (k + 1));
    }
    out
}

/// Accelerated value of `sum (-1)^k a_k` from the first `n = a.len()` terms.
pub fn cvz_sum(a: &[TrackedReal], prec: u32) -> TrackedReal {
    let mut s = TrackedReal::zero(prec);
    for (w, ak) in cvz_weights(a.len()).iter().zip(a) {
        if !w.is_zero() {
            s = s.add(&ak.mul(&TrackedReal::from_rational(w, prec)));
        }
    }
    s
}

/// The a-priori error bound `2 a_0 / 5.828^n`.
pub fn cvz_bound(a0: Mag, n: usize) -> Mag {
    // log2(3 + sqrt 8) = 2.5431...; use 2.54 to stay on the safe side
    let bits = (2.54 * n as f64).floor() as i64;
    a0.mul_pow2(1 - bits)
}
