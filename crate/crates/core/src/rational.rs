//! Exact rational costs with a distinguished infinity.
//!
//! Costs, durations and search bounds are compared exactly: the iterative
//! deepening searches select "the least value above the bound", which is
//! only well defined with exact arithmetic.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

/// A rational number, or `+∞`.
///
/// `Finite` values are always reduced with a positive denominator (the
/// invariant of [`Ratio`]). The derived ordering places every finite value
/// below `Infinity`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rational {
    Finite(Ratio<i64>),
    Infinity,
}

pub const ZERO: Rational = Rational::Finite(Ratio::new_raw(0, 1));
pub const ONE: Rational = Rational::Finite(Ratio::new_raw(1, 1));
pub const INFINITY: Rational = Rational::Infinity;

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Rational {
        assert!(denom != 0, "zero denominator");
        Rational::Finite(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Rational {
        Rational::Finite(Ratio::from_integer(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Rational::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Finite(r) if r.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Rational::Finite(r) if r.is_negative())
    }

    /// Numerator and denominator of a finite value.
    pub fn parts(&self) -> Option<(i64, i64)> {
        match self {
            Rational::Finite(r) => Some((*r.numer(), *r.denom())),
            Rational::Infinity => None,
        }
    }

    pub fn ceil(self) -> Rational {
        match self {
            Rational::Finite(r) => Rational::Finite(r.ceil()),
            Rational::Infinity => Rational::Infinity,
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Rational::Finite(r) if r.is_integer())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Rational::Infinity => f64::INFINITY,
        }
    }

    /// `max(self - other, 0)`; infinity minus a finite value stays infinite.
    pub fn saturating_sub(self, other: Rational) -> Rational {
        let d = self - other;
        if d.is_negative() {
            ZERO
        } else {
            d
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl Add for Rational {
    type Output = Rational;

    fn add(self, rhs: Rational) -> Rational {
        match (self, rhs) {
            (Rational::Finite(a), Rational::Finite(b)) => Rational::Finite(a + b),
            _ => Rational::Infinity,
        }
    }
}

impl Sub for Rational {
    type Output = Rational;

    /// Panics when subtracting infinity, which has no meaning for costs.
    fn sub(self, rhs: Rational) -> Rational {
        match (self, rhs) {
            (Rational::Finite(a), Rational::Finite(b)) => Rational::Finite(a - b),
            (Rational::Infinity, Rational::Finite(_)) => Rational::Infinity,
            (_, Rational::Infinity) => panic!("cannot subtract infinity"),
        }
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    /// Integers print plainly, terminating fractions as decimals
    /// (`1.204`), everything else as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self {
            Rational::Infinity => return f.write_str("inf"),
            Rational::Finite(r) => r,
        };
        if r.is_integer() {
            return write!(f, "{}", r.numer());
        }
        let mut d = *r.denom();
        let (mut twos, mut fives) = (0u32, 0u32);
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return write!(f, "{}/{}", r.numer(), r.denom());
        }
        let digits = twos.max(fives);
        let scale = 10i128.pow(digits);
        let scaled = (*r.numer() as i128) * scale / (*r.denom() as i128);
        let sign = if scaled < 0 { "-" } else { "" };
        let scaled = scaled.abs();
        let int = scaled / scale;
        let frac = scaled % scale;
        write!(f, "{sign}{int}.{frac:0width$}", width = digits as usize)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `inf`, integers, decimals (`82.99`) and fractions (`3/2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Rational::Infinity);
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Rational::new(n, d));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        if frac.len() > 15 {
            return Err(err());
        }
        let denom = 10i64.pow(frac.len() as u32);
        let int_val: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| err())? };
        let frac_val: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| err())? };
        let numer = int_val
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(err)?;
        Ok(Rational::new(if neg { -numer } else { numer }, denom))
    }
}

/// Greatest common divisor of two positive rationals: the largest `c` with
/// `a = m·c` and `b = n·c` for integers `m`, `n`.
pub fn rational_gcd(a: Rational, b: Rational) -> Option<Rational> {
    let (an, ad) = a.parts()?;
    let (bn, bd) = b.parts()?;
    let l = ad.lcm(&bd);
    let x = an * (l / ad);
    let y = bn * (l / bd);
    Some(Rational::new(x.gcd(&y), l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn infinity_absorbs_and_dominates() {
        assert_eq!(INFINITY + ONE, INFINITY);
        assert!(Rational::integer(i64::MAX / 2) < INFINITY);
        assert_eq!(INFINITY - ONE, INFINITY);
        assert_eq!(ONE.max(INFINITY), INFINITY);
    }

    #[test]
    fn normalized() {
        let r = Rational::new(6, -4);
        assert_eq!(r.parts(), Some((-3, 2)));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1.204".parse::<Rational>().unwrap(), Rational::new(1204, 1000));
        assert_eq!("82.99".parse::<Rational>().unwrap().to_string(), "82.99");
        assert_eq!("3/2".parse::<Rational>().unwrap().to_string(), "1.5");
        assert_eq!(Rational::new(1, 3).to_string(), "1/3");
        assert_eq!("7".parse::<Rational>().unwrap().to_string(), "7");
        assert_eq!("-0.5".parse::<Rational>().unwrap(), Rational::new(-1, 2));
        assert_eq!("inf".parse::<Rational>().unwrap(), INFINITY);
        assert!("1.2.3".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn ceil_rounds_up() {
        assert_eq!("1.204".parse::<Rational>().unwrap().ceil(), Rational::integer(2));
        assert_eq!("82.99".parse::<Rational>().unwrap().ceil(), Rational::integer(83));
        assert_eq!(Rational::integer(3).ceil(), Rational::integer(3));
        assert_eq!(ZERO.ceil(), ZERO);
    }

    #[test]
    fn saturating_sub_clamps() {
        assert_eq!(Rational::integer(5).saturating_sub(Rational::integer(2)), Rational::integer(3));
        assert_eq!(Rational::integer(1).saturating_sub(Rational::integer(2)), ZERO);
    }

    #[test]
    fn gcd_of_durations() {
        let a = "1.204".parse().unwrap();
        let b = "82.99".parse().unwrap();
        assert_eq!(rational_gcd(a, b), Some(Rational::new(86, 1000)));
        assert_eq!(rational_gcd(Rational::new(3, 2), Rational::integer(1)), Some(Rational::new(1, 2)));
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..60).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn addition_associates(a in small(), b in small(), c in small()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
        }

        #[test]
        fn min_max_agree_with_order(a in small(), b in small()) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert_eq!(a.min(b), lo);
            prop_assert_eq!(a.max(b), hi);
            prop_assert!(a.max(b) >= a.min(b));
        }

        #[test]
        fn display_parses_back(a in small()) {
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
