//! Exact rationals and the extended distance type.
//!
//! [`Rational`] keeps small values in an `i128` ratio and transparently
//! switches to arbitrary precision when an operand leaves the fast range, so
//! every result is exact regardless of magnitude. [`Distance`] adds the
//! absorbing `Infinite` value used for unreachable pairs and infinite weights.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Operands below this magnitude can be combined in `i128` without overflow.
const FAST_LIMIT: i128 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i128>),
    Big(BigRational),
}

/// An exact rational number of unbounded precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(Ratio::from_integer(0)))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Ratio::from_integer(1)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small(Ratio::from_integer(n as i128)))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Repr::Small(Ratio::new(numer as i128, denom as i128)))
    }

    pub fn from_big(value: BigRational) -> Self {
        let (n, d) = (value.numer().to_i128(), value.denom().to_i128());
        match (n, d) {
            (Some(n), Some(d)) if n != i128::MIN && d != i128::MIN => {
                Rational(Repr::Small(Ratio::new_raw(n, d)))
            }
            _ => Rational(Repr::Big(value)),
        }
    }

    pub fn from_bigint(value: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(value))
    }

    /// `2^exp` exactly.
    pub fn pow2(exp: u32) -> Self {
        Self::from_bigint(BigInt::one() << exp as usize)
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.denom() == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        let big = self.to_big();
        big.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn fast_pair<'a>(&'a self, other: &'a Self) -> Option<(&'a Ratio<i128>, &'a Ratio<i128>)> {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b))
                if fits_fast(a) && fits_fast(b) =>
            {
                Some((a, b))
            }
            _ => None,
        }
    }
}

fn fits_fast(r: &Ratio<i128>) -> bool {
    r.numer().abs() < FAST_LIMIT && *r.denom() < FAST_LIMIT
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                if let Some((a, b)) = self.fast_pair(rhs) {
                    return Rational(Repr::Small(*a $op *b));
                }
                Rational::from_big(self.to_big() $op rhs.to_big())
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if let Some((a, b)) = self.fast_pair(rhs) {
            return Rational(Repr::Small(*a / *b));
        }
        Rational::from_big(self.to_big() / rhs.to_big())
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        &self / rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational::zero() - self
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `<int>` or `<int>/<int>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || ParseRationalError::Malformed(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer: BigInt = n.parse().map_err(|_| malformed())?;
        let denom: BigInt = d.parse().map_err(|_| malformed())?;
        if denom.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational::from_big(BigRational::new(numer, denom)))
    }
}

/// A nonnegative length that may be infinite.
///
/// Used both for edge weights and for distances. `Infinite` absorbs addition
/// and compares above every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Finite(Rational::zero())
    }

    pub fn finite(value: impl Into<Rational>) -> Self {
        Distance::Finite(value.into())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Distance::Finite(r) => Some(r),
            Distance::Infinite => None,
        }
    }

    /// `self <= bound` for a finite bound.
    pub fn at_most(&self, bound: &Rational) -> bool {
        match self {
            Distance::Finite(r) => r <= bound,
            Distance::Infinite => false,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for Distance {
    fn from(r: Rational) -> Self {
        Distance::Finite(r)
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
            (Distance::Finite(_), Distance::Infinite) => Ordering::Less,
            (Distance::Infinite, Distance::Finite(_)) => Ordering::Greater,
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Distance> for &'a Distance {
    type Output = Distance;
    fn add(self, rhs: &'a Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }
}

impl Add for Distance {
    type Output = Distance;
    fn add(self, rhs: Distance) -> Distance {
        &self + &rhs
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => write!(f, "{r}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Distance {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("inf") {
            Ok(Distance::Infinite)
        } else {
            s.parse().map(Distance::Finite)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-2/1").to_string(), "-2");
        assert_eq!(q(" 7 ").to_string(), "7");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!("inf".parse::<Distance>().unwrap(), Distance::Infinite);
    }

    #[test]
    fn large_values_promote_and_demote() {
        let big = Rational::pow2(100);
        let prod = &big * &big;
        assert_eq!(prod, Rational::pow2(200));
        let back = &prod / &Rational::pow2(190);
        assert_eq!(back, Rational::from_integer(1024));
        // demoted value compares equal to the natively small one
        assert_eq!(back.clone(), Rational::from_integer(1024));
        assert!(Rational::pow2(200) > Rational::pow2(199));
    }

    #[test]
    fn infinity_absorbs_and_dominates() {
        let one = Distance::finite(1);
        assert_eq!(&one + &Distance::Infinite, Distance::Infinite);
        assert!(Distance::Infinite > Distance::Finite(Rational::pow2(300)));
        assert!(!Distance::Infinite.at_most(&Rational::pow2(300)));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        prop_oneof![
            (-1000i64..1000, 1i64..50).prop_map(|(n, d)| Rational::new(n, d)),
            (0u32..140, any::<bool>()).prop_map(|(e, neg)| {
                let p = Rational::pow2(e) / Rational::from_integer(3);
                if neg { -p } else { p }
            }),
        ]
    }

    proptest! {
        #[test]
        fn matches_big_rational(a in arb_rational(), b in arb_rational()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
            prop_assert_eq!(Rational::from_big(ba.clone()), a.clone());
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
