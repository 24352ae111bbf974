//! Exact combinatorial quantities: Catalan numbers, central binomials,
//! harmonic and odd harmonic numbers, rational binomials and the signed odd
//! products that appear in every series term.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use spin::RwLock;

use crate::closed_form::ClosedForm;

static CATALAN: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `C_k = binom(2k, k) / (k + 1)`, via `(j+2) C_{j+1} = 2 (2j+1) C_j`.
pub fn catalan(k: usize) -> BigUint {
    if let Some(c) = CATALAN.read().get(k) {
        return c.clone();
    }
    let mut table = CATALAN.write();
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= k {
        let j = table.len() - 1;
        let next = &table[j] * BigUint::from(2 * (2 * j + 1)) / BigUint::from(j + 2);
        table.push(next);
    }
    table[k].clone()
}

/// `binom(2k, k)`.
pub fn central_binomial(k: usize) -> BigUint {
    catalan(k) * BigUint::from(k + 1)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// `O_n = sum_{j=1}^{n} 1/(2j-1)`, extended to negative `n` by `O_{-n} = O_n`.
pub fn odd_harmonic(n: i64) -> BigRational {
    let n = n.unsigned_abs();
    let mut s = BigRational::zero();
    for j in 1..=n {
        s += BigRational::new(BigInt::one(), BigInt::from(2 * j - 1));
    }
    s
}

/// `O_{-n}` from the defining sum with the reversed-limit convention
/// `sum_{j=1}^{-n} f(j) = -sum_{j=1-n}^{0} f(j)`, independent of [`odd_harmonic`].
pub fn odd_harmonic_literal(n: i64) -> BigRational {
    let mut s = BigRational::zero();
    if n >= 0 {
        for j in 1..=n {
            s += BigRational::new(BigInt::one(), BigInt::from(2 * j - 1));
        }
    } else {
        for j in (1 + n)..=0 {
            s -= BigRational::new(BigInt::one(), BigInt::from(2 * j - 1));
        }
    }
    s
}

/// `H_n = sum_{j=1}^{n} 1/j`.
pub fn harmonic(n: u64) -> BigRational {
    let mut s = BigRational::zero();
    for j in 1..=n {
        s += BigRational::new(BigInt::one(), BigInt::from(j));
    }
    s
}

/// `prod_{j=1}^{m} 1/(2k-2j+1)`, taken literally (factors may be negative).
pub fn odd_product(k: i64, m: i64) -> BigRational {
    let mut den = BigInt::one();
    for j in 1..=m {
        den *= BigInt::from(2 * k - 2 * j + 1);
    }
    BigRational::new(BigInt::one(), den)
}

/// `prod_{j=lo}^{hi} f(j)` with the convention that keeps
/// `prod_{lo}^{hi} = prod_{lo}^{hi-1} * f(hi)` valid for every `hi`:
/// the empty product at `hi = lo - 1` is 1, and for `hi < lo - 1` the result
/// is `1 / prod_{j=hi+1}^{lo-1} f(j)`.
pub fn extended_product(lo: i64, hi: i64, f: impl Fn(i64) -> BigRational) -> BigRational {
    if hi >= lo - 1 {
        let mut p = BigRational::one();
        for j in lo..=hi {
            p *= f(j);
        }
        p
    } else {
        let mut p = BigRational::one();
        for j in (hi + 1)..=(lo - 1) {
            p *= f(j);
        }
        p.recip()
    }
}

/// `binom(x, j) = x (x-1) ... (x-j+1) / j!` for rational `x`.
pub fn binomial_rational(x: &BigRational, j: u64) -> BigRational {
    let mut p = BigRational::one();
    for i in 0..j {
        p = p * (x - int(i as i64)) / int(i as i64 + 1);
    }
    p
}

/// `binom(r + 1/2, k + 1)`.
pub fn half_integer_binomial(r: u64, k: u64) -> BigRational {
    binomial_rational(&(int(r as i64) + rat(1, 2)), k + 1)
}

/// `binom(r - 1/2, k)`.
pub fn half_integer_binomial_lower(r: u64, k: u64) -> BigRational {
    binomial_rational(&(int(r as i64) - rat(1, 2)), k)
}

pub fn factorial(n: u64) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=n {
        f *= BigUint::from(i);
    }
    f
}

/// `(-1)^n`.
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `ceil(m / 2)` for any integer.
pub fn ceil_half(m: i64) -> i64 {
    (m + 1).div_euclid(2)
}

/// `floor(m / 2)` for any integer.
pub fn floor_half(m: i64) -> i64 {
    m.div_euclid(2)
}

/// Exact harmonic number at a rational argument `r = base + n`, returned as
/// `H_base + q` with the rational offset `q` (n may be negative).
fn harmonic_offset(r: &BigRational) -> (BigRational, BigRational) {
    let n = r.floor();
    let base = r - &n;
    let mut q = BigRational::zero();
    let n = n.to_integer();
    let mut i = BigInt::zero();
    // H_r = H_{r-1} + 1/r, walked from base up to r
    while i < n {
        i += 1;
        q += (&base + BigRational::from_integer(i.clone())).recip();
    }
    while i > n {
        q -= (&base + BigRational::from_integer(i.clone())).recip();
        i -= 1;
    }
    (base, q)
}

/// `H_{3(2m+1)/4} - H_{(2m+1)/4}` as `q + s pi`, using
/// `H_{3/4} - H_{1/4} = pi - 8/3`.
pub fn quarter_harmonic_diff(m: i64) -> ClosedForm {
    let a = rat(2 * m + 1, 4);
    let b = rat(3 * (2 * m + 1), 4);
    let (base_b, qb) = harmonic_offset(&b);
    let (base_a, qa) = harmonic_offset(&a);
    let diff_base = if base_b == rat(3, 4) && base_a == rat(1, 4) {
        ClosedForm::pi_pow(1).sub(&ClosedForm::rational(rat(8, 3)))
    } else if base_b == rat(1, 4) && base_a == rat(3, 4) {
        ClosedForm::rational(rat(8, 3)).sub(&ClosedForm::pi_pow(1))
    } else {
        unreachable!("odd multiples of 1/4 and 3/4 always land on different offsets")
    };
    diff_base.add(&ClosedForm::rational(qb - qa))
}

/// Pascal's triangle row `n`, used as an independent oracle in tests.
pub fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row
}
