//! Integer relation detection with PSLQ, and recognition of a number as a
//! rational combination of closed-form constants.
//!
//! The iteration runs in fixed point with 60 extra bits, following the
//! two-level formulation of Ferguson, Bailey and Arno with `gamma = sqrt(4/3)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::closed_form::{ClosedForm, Monomial};
use crate::error::{usage, Error, Result};
use crate::float::Mag;
use crate::real::TrackedReal;

const EXTRA: u32 = 60;

#[derive(Clone, Debug)]
pub struct RelationResult {
    pub coefficients: Option<Vec<BigInt>>,
    /// `|sum c_i x_i|` bound for the returned relation, or the smallest
    /// reduced entry seen when none was found.
    pub residual: TrackedReal,
    pub iterations: u32,
}

fn round_fixed(x: &BigInt, prec: u32) -> BigInt {
    ((x + (BigInt::one() << (prec - 1))) >> prec) << prec
}

/// `a / b` for fixed-point operands with `prec` fractional bits.
fn fixed_div(a: &BigInt, b: &BigInt, prec: u32) -> BigInt {
    (a << prec) / b
}

/// Look for integers `c` with `sum c_i x_i = 0`, `max |c_i| <= coeff_bound`,
/// detected when a reduced entry falls below `2^(-prec/2)` relative to `|x|`.
pub fn pslq(xs: &[TrackedReal], coeff_bound: &BigInt, prec: u32) -> Result<RelationResult> {
    let n = xs.len();
    if n < 2 {
        return Err(usage("pslq needs at least two numbers"));
    }
    if (prec as usize) < 64 * n {
        return Err(Error::Precision(format!("pslq on {n} numbers needs at least {} bits, got {prec}", 64 * n)));
    }
    let max_radius = Mag::pow2(16 - prec as i64);
    for x in xs {
        if x.radius() > max_radius {
            return Err(Error::Precision(format!(
                "input radius 2^{:.1} exceeds 2^{} needed at {prec} bits",
                x.radius().log2(),
                16 - prec as i64
            )));
        }
    }
    let wp = prec + EXTRA;
    let tol = BigInt::one() << (wp - prec / 2);
    let x: Vec<BigInt> = xs.iter().map(|v| v.value().to_fixed(wp)).collect();
    if x.iter().any(|v| v.abs() < (&tol >> 7)) {
        // a zero entry would be its own trivial relation
        return Ok(RelationResult { coefficients: None, residual: TrackedReal::zero(prec), iterations: 0 });
    }
    let one = BigInt::one() << wp;
    let g = ((BigInt::from(4) << (2 * wp)) / BigInt::from(3)).sqrt();
    let mut a = vec![vec![BigInt::zero(); n]; n];
    let mut b = vec![vec![BigInt::zero(); n]; n];
    let mut h = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        a[i][i] = one.clone();
        b[i][i] = one.clone();
    }
    // partial norms
    let mut s = vec![BigInt::zero(); n];
    for k in 0..n {
        let mut t = BigInt::zero();
        for xj in &x[k..] {
            t += (xj * xj) >> wp;
        }
        s[k] = (t << wp).sqrt();
    }
    let t0 = s[0].clone();
    let mut y: Vec<BigInt> = x.iter().map(|v| fixed_div(v, &t0, wp)).collect();
    for sk in s.iter_mut() {
        *sk = fixed_div(sk, &t0, wp);
    }
    for i in 0..n {
        if i + 1 < n && !s[i].is_zero() {
            h[i][i] = fixed_div(&s[i + 1], &s[i], wp);
        }
        for j in 0..i {
            let sjj = &s[j] * &s[j + 1];
            if !sjj.is_zero() {
                h[i][j] = ((-&y[i] * &y[j]) << wp) / sjj;
            }
        }
    }
    let reduce = |i: usize, j: usize, y: &mut Vec<BigInt>, h: &mut Vec<Vec<BigInt>>, a: &mut Vec<Vec<BigInt>>, b: &mut Vec<Vec<BigInt>>| -> bool {
        if h[j][j].is_zero() {
            return false;
        }
        let t = round_fixed(&fixed_div(&h[i][j], &h[j][j], wp), wp);
        if t.is_zero() {
            return true;
        }
        let yi = y[i].clone();
        y[j] += (&t * yi) >> wp;
        for k in 0..=j {
            let v = (&t * &h[j][k]) >> wp;
            h[i][k] -= v;
        }
        for k in 0..n {
            let v = (&t * &a[j][k]) >> wp;
            a[i][k] -= v;
            let v = (&t * &b[k][i]) >> wp;
            b[k][j] += v;
        }
        true
    };
    for i in 1..n {
        for j in (0..i).rev() {
            reduce(i, j, &mut y, &mut h, &mut a, &mut b);
        }
    }
    let bound_fixed = coeff_bound << wp;
    let mut best = y.iter().map(|v| v.abs()).min().unwrap();
    let max_steps = 40 * n as u32 * prec;
    for step in 1..=max_steps {
        // exchange the row maximizing gamma^i |h_ii|
        let mut m = 0;
        let mut szmax = BigInt::from(-1);
        let mut gpow = g.clone();
        for i in 0..n - 1 {
            let sz = &gpow * h[i][i].abs();
            if sz > szmax {
                m = i;
                szmax = sz;
            }
            gpow = (&gpow * &g) >> wp;
        }
        y.swap(m, m + 1);
        h.swap(m, m + 1);
        a.swap(m, m + 1);
        for row in b.iter_mut() {
            row.swap(m, m + 1);
        }
        if m + 2 < n {
            let t0 = (((&h[m][m] * &h[m][m]) + (&h[m][m + 1] * &h[m][m + 1])) >> wp << wp).sqrt();
            if t0.is_zero() {
                break;
            }
            let t1 = fixed_div(&h[m][m], &t0, wp);
            let t2 = fixed_div(&h[m][m + 1], &t0, wp);
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = (&t1 * &t3 + &t2 * &t4) >> wp;
                row[m + 1] = (-&t2 * &t3 + &t1 * &t4) >> wp;
            }
        }
        for i in m + 1..n {
            for j in (0..(i - 1).min(m + 1) + 1).rev() {
                if !reduce(i, j, &mut y, &mut h, &mut a, &mut b) {
                    break;
                }
            }
        }
        for i in 0..n {
            let err = y[i].abs();
            if err < tol {
                let vec: Vec<BigInt> = (0..n).map(|j| round_fixed(&b[j][i], wp) >> wp).collect();
                if vec.iter().all(|c| (c.abs() << wp) <= bound_fixed) && vec.iter().any(|c| !c.is_zero()) {
                    let residual = relation_residual(xs, &vec, prec);
                    return Ok(RelationResult { coefficients: Some(vec), residual, iterations: step });
                }
            }
            if err < best {
                best = err.clone();
            }
        }
        // |relation| >= 1 / max |h_ij|, so once that exceeds the bound no
        // admissible relation remains
        let recnorm = h.iter().flatten().map(|v| v.abs()).max().unwrap();
        if !recnorm.is_zero() {
            let norm = ((BigInt::one() << (2 * wp)) / recnorm) / 100;
            if norm >= bound_fixed {
                let residual = TrackedReal::exact(crate::float::BigFloat::from_fixed(best, wp), prec);
                return Ok(RelationResult { coefficients: None, residual, iterations: step });
            }
        }
    }
    let residual = TrackedReal::exact(crate::float::BigFloat::from_fixed(best, wp), prec);
    Ok(RelationResult { coefficients: None, residual, iterations: max_steps })
}

/// Upper bound on `|sum c_i x_i|`, evaluated directly.
pub fn relation_residual(xs: &[TrackedReal], c: &[BigInt], prec: u32) -> TrackedReal {
    let mut acc = TrackedReal::zero(prec + 16);
    for (x, ci) in xs.iter().zip(c) {
        acc = acc.add(&x.mul(&TrackedReal::from_bigint(ci, prec + 16)));
    }
    TrackedReal::exact(acc.abs_upper().to_bigfloat(), prec)
}

/// Express `value` as `sum q_i b_i` over the basis monomials with rational
/// `q_i` of denominator at most `denom_bound` and numerator at most
/// `coeff_bound * denom_bound`. Returns `None` when PSLQ finds no relation
/// involving `value`.
pub fn recognize(
    value: &TrackedReal,
    basis: &[Monomial],
    coeff_bound: u64,
    denom_bound: u64,
) -> Result<Option<ClosedForm>> {
    if basis.is_empty() {
        return Err(usage("recognition needs a non-empty basis"));
    }
    for (i, b) in basis.iter().enumerate() {
        if basis[..i].contains(b) {
            return Err(usage(format!("basis monomial {} repeated", b.key())));
        }
    }
    let prec = value.prec();
    let mut xs = vec![value.clone()];
    for b in basis {
        xs.push(b.eval(prec + 32)?.with_prec(prec));
    }
    let bound = BigInt::from(coeff_bound) * BigInt::from(denom_bound);
    let r = pslq(&xs, &bound, prec)?;
    let Some(c) = r.coefficients else { return Ok(None) };
    let c0 = &c[0];
    if c0.is_zero() || c0.abs() > BigInt::from(denom_bound) {
        return Ok(None);
    }
    let mut cf = ClosedForm::zero();
    for (b, ci) in basis.iter().zip(&c[1..]) {
        let q = BigRational::new(-ci, c0.clone());
        cf = cf.add(&ClosedForm::term(*b, q));
    }
    // soundness: the closed form must reproduce the value
    let diff = value.sub(&cf.eval(prec + 32)?).abs_upper();
    let scale = value.abs_upper().max(Mag::from_u64(1));
    if diff > scale.mul(&Mag::pow2(-(prec as i64) / 2)) {
        return Ok(None);
    }
    Ok(Some(cf))
}

/// Parse a comma-separated basis such as `1, pi^-1, ln2*pi^-2`.
pub fn parse_basis(text: &str) -> Result<Vec<Monomial>> {
    text.split(',')
        .map(|s| {
            let cf: ClosedForm = s.trim().parse()?;
            match cf.as_single() {
                Some((m, q)) if q.is_one() => Ok(m),
                _ => Err(usage(format!("basis entry {s:?} is not a single monomial"))),
            }
        })
        .collect()
}
