//! Exact scalar arithmetic: the two ground fields, exact rational values,
//! and the value line extended by +∞.
//!
//! Grid positions, gaps, oscillations and all other *quantities* are
//! [`Rational`] regardless of the coefficient field; only the entries of
//! linear maps vary between GF(2) and ℚ.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};

/// Exact rational number; every index value, gap and bound in the crate.
pub type Rational = Ratio<BigInt>;

/// Shorthand constructor for `p/q`. Panics on `q = 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand constructor for an integer rational.
pub fn rat_int(p: i64) -> Rational {
    Ratio::from_integer(BigInt::from(p))
}

/// Canonical string form: `"p/q"` with the denominator omitted when 1.
/// `Ratio` keeps values reduced with a positive denominator, so equal
/// rationals always render identically.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"p"` or `"p/q"`. Returns `None` on malformed input or `q = 0`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let mut parts = text.splitn(2, '/');
    let numer: BigInt = parts.next()?.trim().parse().ok()?;
    match parts.next() {
        None => Some(Ratio::from_integer(numer)),
        Some(denom_text) => {
            let denom: BigInt = denom_text.trim().parse().ok()?;
            if denom.is_zero() {
                None
            } else {
                Some(Ratio::new(numer, denom))
            }
        }
    }
}

/// A field with exact arithmetic. Implementations must be total and
/// deterministic; `inv` returns `None` exactly on zero.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Gf2(pub bool);

impl Field for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }

    fn one() -> Self {
        Gf2(true)
    }

    fn add(&self, rhs: &Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        // Characteristic 2: subtraction is addition.
        self.add(rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Gf2(self.0 & rhs.0)
    }

    fn inv(&self) -> Option<Self> {
        self.0.then_some(Gf2(true))
    }
}

impl fmt::Display for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl Field for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// A rational extended with +∞: the value of a spectral invariant whose
/// class never enters an image, and of a bottleneck distance across
/// mismatched colimit-bar counts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Extended {
    Finite(Rational),
    Infinity,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    /// Translation by a finite amount; +∞ absorbs it.
    pub fn plus(&self, s: &Rational) -> Extended {
        match self {
            Extended::Finite(v) => Extended::Finite(v + s),
            Extended::Infinity => Extended::Infinity,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinity) => Ordering::Less,
            (Extended::Infinity, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => f.write_str(&format_rational(v)),
            Extended::Infinity => f.write_str("+inf"),
        }
    }
}
