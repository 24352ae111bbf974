//! The closed-form special cases as they are usually displayed, each tied to
//! the family member it comes from.
//!
//! A displayed sum is `scale * sum_{k >= 0} t_{k + shift}` for a family term
//! `t`, so its value is `scale * (rhs - head)` with `head` the family terms
//! skipped by the shift. The displayed summand is kept as its own formula so
//! the tie to the family can be checked term by term.

use alloc::format;
use alloc::string::String;

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::closed_form::ClosedForm;
use crate::combinatorics::{big, catalan, central_binomial, int, odd_harmonic, rat};
use crate::error::{usage, Result};
use crate::family::{FamilyDescriptor, FamilyId};
use crate::rhs::rhs;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Divisor {
    None,
    /// `k + 2`
    KPlusTwo,
    /// `2k - 1`
    TwoKMinusOne,
}

/// The displayed summand `(s base_k / d_k)^p * w_k`.
#[derive(Clone, Copy, Debug)]
pub struct DisplayedTerm {
    pub alternating: bool,
    /// `C_k` when true, `binom(2k, k)` otherwise.
    pub catalan: bool,
    pub divisor: Divisor,
    pub power: u32,
    /// `a k + b`
    pub linear: Option<(i64, i64)>,
    pub odd_harmonic: bool,
    /// Added after the linear and harmonic factors, as `num/den`.
    pub offset: Option<(i64, i64)>,
}

impl DisplayedTerm {
    pub fn at(&self, k: i64) -> BigRational {
        let ku = k as usize;
        let b = if self.catalan { catalan(ku) } else { central_binomial(ku) };
        let mut x = big(&b) / big(&(num_bigint::BigUint::one() << (2 * ku)));
        match self.divisor {
            Divisor::None => {}
            Divisor::KPlusTwo => x /= int(k + 2),
            Divisor::TwoKMinusOne => x /= int(2 * k - 1),
        }
        if self.alternating && k % 2 == 1 {
            x = -x;
        }
        let mut w = match self.linear {
            Some((a, b)) => int(a * k + b),
            None => BigRational::one(),
        };
        if self.odd_harmonic {
            w *= odd_harmonic(k);
        }
        if let Some((n, d)) = self.offset {
            w += rat(n, d);
        }
        Pow::pow(x, self.power) * w
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DisplayedIdentity {
    pub name: &'static str,
    pub family: FamilyId,
    pub m: i64,
    pub scale: i64,
    pub shift: i64,
    pub term: DisplayedTerm,
    /// The displayed value in closed-form syntax.
    pub value: &'static str,
}

impl DisplayedIdentity {
    pub fn displayed_value(&self) -> Result<ClosedForm> {
        self.value.parse()
    }

    /// Family terms with index below `shift`, from the family start on.
    pub fn head(&self) -> Result<BigRational> {
        let d = FamilyDescriptor::new(self.family, self.m)?;
        let mut s = BigRational::zero();
        for k in d.start..self.shift {
            s += d.term_unchecked(k);
        }
        Ok(s)
    }

    /// `scale * (rhs - head)`, the value the family predicts.
    pub fn family_value(&self) -> Result<ClosedForm> {
        let r = rhs(self.family, self.m)?;
        Ok(r.add_rational(&-self.head()?).scale(&int(self.scale)))
    }

    /// Compares the displayed summand against `scale * t_{k + shift}` for
    /// `k < count`; returns the first mismatch.
    pub fn check_terms(&self, count: i64) -> Result<Option<String>> {
        let d = FamilyDescriptor::new(self.family, self.m)?;
        if self.shift < d.start {
            return Err(usage(format!("{}: shift below the family start", self.name)));
        }
        for k in 0..count {
            let want = self.term.at(k);
            let got = d.term_unchecked(k + self.shift) * int(self.scale);
            if want != got {
                return Ok(Some(format!("{}: term {k} is {got}, displayed {want}", self.name)));
            }
        }
        Ok(None)
    }
}

const fn t(
    alternating: bool,
    catalan: bool,
    divisor: Divisor,
    power: u32,
    linear: Option<(i64, i64)>,
    odd_harmonic: bool,
    offset: Option<(i64, i64)>,
) -> DisplayedTerm {
    DisplayedTerm { alternating, catalan, divisor, power, linear, odd_harmonic, offset }
}

use Divisor::{KPlusTwo, TwoKMinusOne};
use FamilyId::*;

pub const DISPLAYED: [DisplayedIdentity; 19] = [
    DisplayedIdentity {
        name: "cubed Catalan",
        family: F1a,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, true, Divisor::None, 3, None, false, None),
        value: "8 - 384*pi*G^-4",
    },
    DisplayedIdentity {
        name: "cubed Catalan over k+2",
        family: F1b,
        m: 1,
        scale: 8,
        shift: 1,
        term: t(false, true, KPlusTwo, 3, None, false, None),
        value: "152/27 - 80/81*G^4*pi^-3",
    },
    DisplayedIdentity {
        name: "alternating cubed Catalan, 4k+3",
        family: F2,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(true, true, Divisor::None, 3, Some((4, 3)), false, None),
        value: "8 - 16*pi^-1",
    },
    DisplayedIdentity {
        name: "alternating cubed Catalan over k+2, 4k+5",
        family: F2,
        m: 1,
        scale: -8,
        shift: 1,
        term: t(true, true, KPlusTwo, 3, Some((4, 5)), false, None),
        value: "-8/9 + 128/27*pi^-1",
    },
    DisplayedIdentity {
        name: "cubed Catalan, 4k+3",
        family: F3a,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, true, Divisor::None, 3, Some((4, 3)), false, None),
        value: "-8 + 2*G^4*pi^-3",
    },
    DisplayedIdentity {
        name: "cubed Catalan over k+2, 4k+5",
        family: F3b,
        m: 1,
        scale: 8,
        shift: 1,
        term: t(false, true, KPlusTwo, 3, Some((4, 5)), false, None),
        value: "136/9 - 7168/9*pi*G^-4",
    },
    DisplayedIdentity {
        name: "cubed Catalan with odd harmonic",
        family: F4,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, true, Divisor::None, 3, None, true, None),
        value: "8 + 64*pi^2*G^-4 - 640*pi*G^-4",
    },
    DisplayedIdentity {
        name: "cubed Catalan over k+2 with odd harmonic",
        family: F4,
        m: 1,
        scale: 8,
        shift: 1,
        term: t(false, true, KPlusTwo, 3, None, true, None),
        value: "392/81 - 40/243*G^4*pi^-2 - 256/729*G^4*pi^-3",
    },
    DisplayedIdentity {
        name: "alternating cubed Catalan with odd harmonic",
        family: F5,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(true, true, Divisor::None, 3, Some((4, 3)), true, Some((1, 3))),
        value: "16/3 - 16*pi^-1",
    },
    DisplayedIdentity {
        name: "alternating cubed Catalan over k+2 with odd harmonic",
        family: F5,
        m: 1,
        scale: -8,
        shift: 1,
        term: t(true, true, KPlusTwo, 3, Some((4, 5)), true, Some((1, 3))),
        value: "-160/81 + 512/81*pi^-1",
    },
    DisplayedIdentity {
        name: "fourth-power Catalan, 4k+3",
        family: F6,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, true, Divisor::None, 4, Some((4, 3)), false, None),
        value: "16 - 128*pi^-2",
    },
    DisplayedIdentity {
        name: "fourth-power Catalan over k+2, 4k+5",
        family: F6,
        m: 1,
        scale: 16,
        shift: 1,
        term: t(false, true, KPlusTwo, 4, Some((4, 5)), false, None),
        value: "-176/27 + 16384/243*pi^-2",
    },
    DisplayedIdentity {
        name: "fourth-power Catalan with odd harmonic",
        family: F7,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, true, Divisor::None, 4, Some((4, 3)), true, Some((1, 4))),
        value: "12 - 160*pi^-2 + 64*ln2*pi^-2",
    },
    DisplayedIdentity {
        name: "fourth-power Catalan over k+2 with odd harmonic",
        family: F7,
        m: 1,
        scale: 16,
        shift: 1,
        term: t(false, true, KPlusTwo, 4, Some((4, 5)), true, Some((1, 4))),
        value: "-220/27 + 75776/729*pi^-2 - 8192/243*ln2*pi^-2",
    },
    DisplayedIdentity {
        name: "Bauer series",
        family: F8,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(true, false, Divisor::None, 3, Some((4, 1)), false, None),
        value: "2*pi^-1",
    },
    DisplayedIdentity {
        name: "Bauer-type series over 2k-1",
        family: F8,
        m: 1,
        scale: 1,
        shift: 0,
        term: t(true, false, TwoKMinusOne, 3, Some((4, -1)), false, None),
        value: "2*pi^-1",
    },
    DisplayedIdentity {
        name: "fourth-power central binomial over 2k-1",
        family: F10,
        m: 1,
        scale: 1,
        shift: 0,
        term: t(false, false, TwoKMinusOne, 4, Some((4, -1)), false, None),
        value: "-8*pi^-2",
    },
    DisplayedIdentity {
        name: "cubed central binomial",
        family: F11,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, false, Divisor::None, 3, None, false, None),
        value: "1/4*G^4*pi^-3",
    },
    DisplayedIdentity {
        name: "cubed central binomial, even reindexing",
        family: F11a,
        m: 0,
        scale: 1,
        shift: 0,
        term: t(false, false, Divisor::None, 3, None, false, None),
        value: "1/4*G^4*pi^-3",
    },
];
