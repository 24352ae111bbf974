//! Rational combinations of monomials `pi^a G^b (ln 2)^c sqrt(2)^d`, where
//! `G = Gamma(1/4)`, and the exact quarter-integer Gamma values built on them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{int, rat};
use crate::constants::{constant, Constant};
use crate::error::{usage, Error, Result};
use crate::real::TrackedReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub pi: i32,
    pub gamma: i32,
    pub ln2: u32,
    pub sqrt2: u8,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { pi: 0, gamma: 0, ln2: 0, sqrt2: 0 };

    pub fn new(pi: i32, gamma: i32, ln2: u32, sqrt2: u8) -> Self {
        Self { pi, gamma, ln2, sqrt2 }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    /// Product of monomials; `sqrt2^2` comes back as the rational factor 2.
    fn mul(&self, o: &Monomial) -> (Monomial, bool) {
        let s = self.sqrt2 + o.sqrt2;
        (
            Monomial { pi: self.pi + o.pi, gamma: self.gamma + o.gamma, ln2: self.ln2 + o.ln2, sqrt2: s % 2 },
            s == 2,
        )
    }

    /// `(a,b,c,d)` key used in the lossless JSON encoding.
    pub fn key(&self) -> String {
        format!("({},{},{},{})", self.pi, self.gamma, self.ln2, self.sqrt2)
    }

    pub fn parse_key(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| usage(format!("bad monomial key {s:?}")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(usage(format!("bad monomial key {s:?}")));
        }
        let bad = || usage(format!("bad monomial key {s:?}"));
        let m = Monomial {
            pi: parts[0].parse().map_err(|_| bad())?,
            gamma: parts[1].parse().map_err(|_| bad())?,
            ln2: parts[2].parse().map_err(|_| bad())?,
            sqrt2: parts[3].parse().map_err(|_| bad())?,
        };
        if m.sqrt2 > 1 {
            return Err(bad());
        }
        Ok(m)
    }

    /// The monomial's value at `prec` bits.
    pub fn eval(&self, prec: u32) -> Result<TrackedReal> {
        let mut v = TrackedReal::from_int(1, prec);
        if self.pi != 0 {
            v = v.mul(&constant(Constant::Pi, prec)?.powi(self.pi)?);
        }
        if self.gamma != 0 {
            v = v.mul(&constant(Constant::GammaQuarter, prec)?.powi(self.gamma)?);
        }
        if self.ln2 != 0 {
            v = v.mul(&constant(Constant::Ln2, prec)?.powi(self.ln2 as i32)?);
        }
        if self.sqrt2 == 1 {
            v = v.mul(&constant(Constant::Sqrt2, prec)?);
        }
        Ok(v)
    }

    fn factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut push = |name: &str, e: i64| match e {
            0 => {}
            1 => out.push(name.to_string()),
            _ => out.push(format!("{name}^{e}")),
        };
        push("pi", self.pi as i64);
        push("G", self.gamma as i64);
        push("ln2", self.ln2 as i64);
        push("sqrt2", self.sqrt2 as i64);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClosedForm {
    terms: BTreeMap<Monomial, BigRational>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        Self::term(Monomial::ONE, q)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn term(m: Monomial, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        Self { terms }
    }

    pub fn pi_pow(a: i32) -> Self {
        Self::term(Monomial::new(a, 0, 0, 0), BigRational::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no transcendental monomial survives.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn rational_part(&self) -> BigRational {
        self.coefficient(&Monomial::ONE)
    }

    fn insert_add(&mut self, m: Monomial, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigRational::zero);
        *e += q;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, q) in &o.terms {
            out.insert_add(*m, q.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect() }
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        self.add(&Self::rational(q.clone()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &o.terms {
                let (m, two) = ma.mul(mb);
                let mut q = qa * qb;
                if two {
                    q *= int(2);
                }
                out.insert_add(m, q);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::integer(1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The single monomial and coefficient of a one-term form.
    pub fn as_single(&self) -> Option<(Monomial, BigRational)> {
        if self.terms.len() == 1 {
            let (m, q) = self.terms.iter().next().unwrap();
            Some((*m, q.clone()))
        } else {
            None
        }
    }

    /// Reciprocal of a one-term form.
    pub fn recip(&self) -> Result<Self> {
        let (m, q) = self
            .as_single()
            .ok_or_else(|| usage("only single-term closed forms can be inverted"))?;
        let mut coef = q.recip();
        if m.sqrt2 == 1 {
            // 1/sqrt2 = sqrt2/2
            coef /= int(2);
        }
        let inv = Monomial { pi: -m.pi, gamma: -m.gamma, ln2: 0, sqrt2: m.sqrt2 };
        if m.ln2 != 0 {
            return Err(usage("negative powers of ln 2 are outside the basis"));
        }
        Ok(Self::term(inv, coef))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    /// Numerical value at `prec` bits with a propagated radius.
    pub fn eval(&self, prec: u32) -> Result<TrackedReal> {
        let w = prec + 32;
        let mut s = TrackedReal::zero(w);
        for (m, q) in &self.terms {
            s = s.add(&m.eval(w)?.mul_rational(q));
        }
        Ok(s.with_prec(prec))
    }

    /// Lossless encoding: `(a,b,c,d)` keys with `num/den` coefficient strings.
    pub fn to_key_map(&self) -> Vec<(String, String)> {
        self.terms.iter().map(|(m, q)| (m.key(), q.to_string())).collect()
    }

    pub fn from_key_map<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut out = Self::zero();
        for (k, v) in entries {
            let m = Monomial::parse_key(k)?;
            let q: BigRational = v.parse().map_err(|_| usage(format!("bad coefficient {v:?}")))?;
            out.insert_add(m, q);
        }
        Ok(out)
    }
}

/// Evaluate a closed form at `prec` bits.
pub fn cf_eval(cf: &ClosedForm, prec: u32) -> Result<TrackedReal> {
    cf.eval(prec)
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ordered = self
            .terms
            .iter()
            .filter(|(m, _)| m.is_one())
            .chain(self.terms.iter().filter(|(m, _)| !m.is_one()));
        for (i, (m, q)) in ordered.enumerate() {
            let neg = q.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = q.abs();
            let mut parts = Vec::new();
            if m.is_one() || !a.is_one() {
                parts.push(a.to_string());
            }
            parts.extend(m.factors());
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    /// Parses the pretty form, e.g. `8 - 384*pi*G^-4` or `1/4*G^4*pi^-3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(usage("empty closed form"));
        }
        if s == "0" {
            return Ok(Self::zero());
        }
        // split into signed terms at + or - not preceded by '^'
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.trim().is_empty() {
                    terms.push((neg, core::mem::take(&mut cur)));
                } else if !cur.is_empty() {
                    cur.clear();
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            if !ch.is_whitespace() {
                prev = Some(ch);
            }
        }
        if cur.trim().is_empty() {
            return Err(usage(format!("dangling sign in {s:?}")));
        }
        terms.push((neg, cur));

        let mut out = Self::zero();
        for (neg, t) in terms {
            let mut coef = BigRational::one();
            let mut mono = Self::integer(1);
            for factor in t.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(usage(format!("empty factor in {s:?}")));
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let e: i32 = e.trim().parse().map_err(|_| usage(format!("bad exponent in {factor:?}")))?;
                        (n.trim(), e)
                    }
                    None => (factor, 1),
                };
                let base = match name {
                    "pi" => Some(Monomial::new(1, 0, 0, 0)),
                    "G" => Some(Monomial::new(0, 1, 0, 0)),
                    "ln2" => Some(Monomial::new(0, 0, 1, 0)),
                    "sqrt2" => Some(Monomial::new(0, 0, 0, 1)),
                    _ => None,
                };
                match base {
                    Some(b) => {
                        let f = ClosedForm::monomial(b);
                        let p = if exp >= 0 { f.pow(exp as u32) } else { f.recip()?.pow(exp.unsigned_abs()) };
                        mono = mono.mul(&p);
                    }
                    None => {
                        let q: BigRational = name.parse().map_err(|_| usage(format!("bad factor {factor:?}")))?;
                        let q = if exp >= 0 { num_traits::Pow::pow(&q, exp as u32) } else { num_traits::Pow::pow(&q.recip(), exp.unsigned_abs()) };
                        coef *= q;
                    }
                }
            }
            if neg {
                coef = -coef;
            }
            out = out.add(&mono.scale(&coef));
        }
        Ok(out)
    }
}

/// `Gamma(n/4)` for odd `n` as an exact closed form.
pub fn gamma_quarter_cf(n: i64) -> Result<ClosedForm> {
    if n.rem_euclid(2) == 0 {
        return Err(usage(format!("gamma_quarter_cf needs an odd argument, got {n}")));
    }
    if n < 0 {
        // Gamma(u) = Gamma(u + 1) / u with u = n/4
        return Ok(gamma_quarter_cf(n + 4)?.scale(&rat(4, n)));
    }
    let m = n / 4;
    let four_m = BigRational::from_integer(BigInt::from(4).pow(m as u32));
    if n % 4 == 1 {
        let mut p = BigRational::one();
        for j in 1..=m {
            p *= int(4 * j - 3);
        }
        Ok(ClosedForm::term(Monomial::new(0, 1, 0, 0), p / four_m))
    } else {
        let mut p = BigRational::one();
        for j in 1..=m {
            p *= int(4 * j - 1);
        }
        Ok(ClosedForm::term(Monomial::new(1, -1, 0, 1), p / four_m))
    }
}

/// `Gamma(3n/4) / Gamma(n/4)^3` for odd `n`, from the values at `n = 1` and
/// `n = -1` stepped by `ratio(n+4) = 3n (3n+4) (3n+8) / n^3 * ratio(n)`.
pub fn gamma_ratio_cf(n: i64) -> Result<ClosedForm> {
    if n.rem_euclid(2) == 0 {
        return Err(usage(format!("gamma_ratio_cf needs an odd argument, got {n}")));
    }
    let step = |k: i64| rat(3 * k * (3 * k + 4) * (3 * k + 8), k * k * k);
    let (mut k, mut r) = if n.rem_euclid(4) == 1 {
        // Gamma(3/4) / Gamma(1/4)^3 = pi sqrt2 / G^4
        (1i64, ClosedForm::term(Monomial::new(1, -4, 0, 1), int(1)))
    } else {
        // Gamma(-3/4) / Gamma(-1/4)^3 = sqrt2 G^4 / (192 pi^3)
        (-1i64, ClosedForm::term(Monomial::new(-3, 4, 0, 1), rat(1, 192)))
    };
    while k < n {
        r = r.scale(&step(k));
        k += 4;
    }
    while k > n {
        k -= 4;
        r = r.scale(&step(k).recip());
    }
    Ok(r)
}
