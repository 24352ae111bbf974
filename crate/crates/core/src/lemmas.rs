//! Exact checks of the auxiliary identities the closed forms are built from.
//! Each check compares two independent computations and records every
//! mismatch rather than stopping at the first.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::closed_form::{cf_eval, gamma_quarter_cf, gamma_ratio_cf, ClosedForm};
use crate::combinatorics::{
    big, catalan, ceil_half, factorial, floor_half, half_integer_binomial, int, odd_harmonic_literal,
    odd_product, rat, sign,
};
use crate::error::Result;
use crate::family::FamilyId;
use crate::float::Mag;
use crate::gamma::gamma_rational;
use crate::rhs::rhs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

/// `binom(r + 1/2, k + 1)` as a falling product against its Catalan form
/// `(-1)^r (r+2)! C_{r+1} / 2^(r+2) * (-1)^k C_k / 4^k * prod_{j=1}^{r} 1/(2k-2j+1)`.
pub fn half_binomial_bridge(max: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new("half-integer binomial bridge");
    for r in 0..=max {
        let lead = int(sign(r as i64)) * big(&(factorial(r + 2) * catalan(r as usize + 1)))
            / big(&(BigUint::one() << (r + 2)));
        for k in 0..=max {
            let rhs = &lead * int(sign(k as i64)) * big(&catalan(k as usize))
                / big(&(BigUint::one() << (2 * k)))
                * odd_product(k as i64, r as i64);
            let lhs = half_integer_binomial(r, k);
            out.record(lhs == rhs, || format!("r={r} k={k}: {lhs} != {rhs}"));
        }
    }
    out
}

/// `(j+2) C_{j+1} = 2 (2j+1) C_j`, with `C_j` also checked against `(2j)! / (j! (j+1)!)`.
pub fn catalan_recurrence(max: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("Catalan recurrence");
    for j in 0..=max {
        let lhs = BigUint::from(j + 2) * catalan(j + 1);
        let rhs = BigUint::from(2 * (2 * j + 1)) * catalan(j);
        out.record(lhs == rhs, || format!("recurrence fails at j={j}"));
        let direct = factorial(2 * j as u64) / (factorial(j as u64) * factorial(j as u64 + 1));
        out.record(direct == catalan(j), || format!("C_{j} differs from the factorial formula"));
    }
    out
}

/// `O_{-n} = O_n` from the literal sum with reversed limits.
pub fn odd_harmonic_symmetry(max: i64) -> CheckOutcome {
    let mut out = CheckOutcome::new("odd harmonic symmetry");
    for n in 0..=max {
        let (a, b) = (odd_harmonic_literal(-n), odd_harmonic_literal(n));
        out.record(a == b, || format!("O_-{n} = {a} but O_{n} = {b}"));
    }
    out
}

/// `(cos, sin)(pi q / 4)` for odd `q`, times `sqrt 2`, read off the octant.
fn octant_signs(q: i64) -> (i64, i64) {
    match q.rem_euclid(8) {
        1 => (1, 1),
        3 => (-1, 1),
        5 => (-1, -1),
        7 => (1, -1),
        _ => unreachable!("odd numerator"),
    }
}

/// The four sign formulas for cosines and sines of odd multiples of `pi/4`,
/// checked exactly by octant and numerically against `cos_pi` / `sin_pi`.
pub fn quarter_angle_parity(max: i64) -> CheckOutcome {
    let mut out = CheckOutcome::new("quarter-angle parity");
    let prec = 128;
    let inv_sqrt2 = crate::constants::constant(crate::constants::Constant::Sqrt2, prec)
        .and_then(|s| s.recip())
        .expect("sqrt 2");
    for m in -max..=max {
        let (c1, s1) = octant_signs(2 * m + 1);
        let (c2, s2) = octant_signs(2 * m - 1);
        let claims = [
            ("cos pi(2m+1)/4", c1, sign(ceil_half(m)), 2 * m + 1, true),
            ("sin pi(2m+1)/4", s1, sign(m + ceil_half(m)), 2 * m + 1, false),
            ("cos pi(2m-1)/4", c2, sign(floor_half(m)), 2 * m - 1, true),
            ("sin pi(2m-1)/4", s2, -sign(ceil_half(m)), 2 * m - 1, false),
        ];
        for (what, exact, formula, q, is_cos) in claims {
            out.record(exact == formula, || format!("{what} at m={m}: octant {exact}, formula {formula}"));
            let angle = rat(q, 4);
            let v = if is_cos {
                crate::real::TrackedReal::cos_pi(&angle, prec)
            } else {
                crate::real::TrackedReal::sin_pi(&angle, prec)
            }
            .expect("trig at rational multiples of pi");
            let want = inv_sqrt2.mul_int(formula);
            out.record(v.overlaps(&want), || format!("{what} at m={m}: numeric value disagrees"));
        }
    }
    out
}

/// The reparameterized families have right-hand sides equal, as closed forms,
/// to the parent family at `2m`, `2m - 1` or `2m + 1`.
pub fn reparameterization(max: i64) -> Result<CheckOutcome> {
    use FamilyId::*;
    let mut out = CheckOutcome::new("reparameterization");
    let pairs: [(FamilyId, FamilyId, fn(i64) -> i64); 6] = [
        (F1a, F1, |m| 2 * m),
        (F1b, F1, |m| 2 * m - 1),
        (F3a, F3, |m| 2 * m),
        (F3b, F3, |m| 2 * m - 1),
        (F11a, F11, |m| 2 * m),
        (F11b, F11, |m| 2 * m + 1),
    ];
    for (child, parent, map) in pairs {
        for m in child.min_m()..=max {
            let a = rhs(child, m)?;
            let b = rhs(parent, map(m))?;
            out.record(a == b, || format!("{child}({m}) = {a} but {parent}({}) = {b}", map(m)));
        }
    }
    Ok(out)
}

/// `Gamma(n/4)` from its closed form against the Stirling-series evaluation,
/// to `2^-tol_bits`.
pub fn quarter_gamma_consistency(max: i64, tol_bits: i64) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("quarter Gamma closed forms");
    let prec = (tol_bits + 32) as u32;
    let tol = Mag::pow2(-tol_bits);
    for n in (-max..=max).filter(|n| n.rem_euclid(2) == 1) {
        let cf = cf_eval(&gamma_quarter_cf(n)?, prec)?;
        let oracle = gamma_rational(&rat(n, 4), prec)?;
        let d = cf.sub(&oracle).abs_upper();
        let scale = oracle.abs_upper().max(Mag::from_u64(1));
        out.record(d <= tol.mul(&scale), || format!("Gamma({n}/4): difference 2^{:.1}", d.log2()));
    }
    Ok(out)
}

/// `Gamma(3n/4) / Gamma(n/4)^3` from individual closed forms.
fn ratio_from_values(n: i64) -> Result<ClosedForm> {
    gamma_quarter_cf(3 * n)?.div(&gamma_quarter_cf(n)?.pow(3))
}

/// The two Gamma-quotient shift identities, exactly at closed-form level:
/// `Gamma((6m+7)/4) / Gamma((2m+5)/4)^3 = 48/(2m+1)^2 * ratio(2m+1)` and
/// `Gamma((6m+5)/4) / Gamma((2m+3)/4)^3 = 12(6m+1)/(2m-1)^2 * ratio(2m-1)`,
/// with `ratio(n) = Gamma(3n/4) / Gamma(n/4)^3`.
pub fn gamma_quotient_shifts(max: i64) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("Gamma quotient shifts");
    for m in -max..=max {
        let lhs1 = gamma_quarter_cf(6 * m + 7)?.div(&gamma_quarter_cf(2 * m + 5)?.pow(3))?;
        let lhs2 = gamma_quarter_cf(6 * m + 5)?.div(&gamma_quarter_cf(2 * m + 3)?.pow(3))?;
        let c1 = rat(48, (2 * m + 1) * (2 * m + 1));
        let c2 = rat(12 * (6 * m + 1), (2 * m - 1) * (2 * m - 1));
        for (which, lhs, c, n) in [(1, &lhs1, c1, 2 * m + 1), (2, &lhs2, c2, 2 * m - 1)] {
            let direct = ratio_from_values(n)?.scale(&c);
            let stepped = gamma_ratio_cf(n)?.scale(&c);
            out.record(*lhs == direct, || format!("shift {which} at m={m}: {lhs} != {direct}"));
            out.record(*lhs == stepped, || format!("shift {which} at m={m}: stepped ratio {stepped}"));
        }
    }
    Ok(out)
}

/// Every check at its default range.
pub fn all_checks() -> Result<Vec<CheckOutcome>> {
    Ok(alloc::vec![
        half_binomial_bridge(25),
        catalan_recurrence(500),
        odd_harmonic_symmetry(50),
        quarter_angle_parity(20),
        reparameterization(8)?,
        quarter_gamma_consistency(41, 240)?,
        gamma_quotient_shifts(15)?,
    ])
}
