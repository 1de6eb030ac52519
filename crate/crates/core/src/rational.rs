//! Exact rational numbers with a `"p/q"` string form.
//!
//! `Rational` wraps an arbitrary-precision fraction that is always kept in
//! lowest terms with a positive denominator, so structural equality is
//! numeric equality.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Closest rational to `x` with denominator at most `max_denom`, taken
    /// from the continued-fraction convergents and best semiconvergent.
    pub fn approximate(x: f64, max_denom: u64) -> Result<Self, Error> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        if max_denom == 0 {
            return Err(Error::InvalidInput("max denominator must be positive".into()));
        }
        let exact = BigRational::from_float(x).ok_or(Error::NonFinite(x))?;
        let bound = BigInt::from(max_denom);

        // convergents h/k
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        let mut rem = exact.clone();
        loop {
            let a = rem.floor().to_integer();
            let h_next = &a * &h + &h_prev;
            let k_next = &a * &k + &k_prev;
            if k_next > bound {
                // best semiconvergent with denominator within the bound
                let steps = (&bound - &k_prev).div_floor(&k);
                let semi = Rational::from_big(&steps * &h + &h_prev, &steps * &k + &k_prev);
                let conv = Rational::from_big(h.clone(), k.clone());
                let target = Rational(exact);
                let d_semi = (&semi - &target).abs();
                let d_conv = (&conv - &target).abs();
                return Ok(if d_semi < d_conv { semi } else { conv });
            }
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
            let frac = &rem - BigRational::from_integer(a);
            if frac.is_zero() {
                return Ok(Rational::from_big(h, k));
            }
            rem = frac.recip();
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let numer: BigInt = n.parse().map_err(|_| bad())?;
        let denom: BigInt = d.parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for building rationals in tests and fixtures.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = q(6, -8);
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(r, q(-3, 4));
        assert_eq!(Rational::from_integer(2).to_string(), "2/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/8".parse::<Rational>().unwrap(), q(3, 8));
        assert_eq!(" -1 ".parse::<Rational>().unwrap(), q(-1, 1));
        assert_eq!("4/-6".parse::<Rational>().unwrap(), q(-2, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("0.5".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn json_is_string() {
        let s = serde_json::to_string(&q(1, 8)).unwrap();
        assert_eq!(s, "\"1/8\"");
        let back: Rational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q(1, 8));
        assert!(serde_json::from_str::<Rational>("0.125").is_err());
    }

    #[test]
    fn approximate_picks_best_bounded_fraction() {
        assert_eq!(Rational::approximate(0.5, 10_000).unwrap(), q(1, 2));
        assert_eq!(Rational::approximate(-0.4999, 10_000).unwrap(), q(-4999, 10_000));
        let pi = Rational::approximate(std::f64::consts::PI, 1000).unwrap();
        assert_eq!(pi, q(355, 113));
        let s = Rational::approximate(std::f64::consts::FRAC_1_SQRT_2, 10_000).unwrap();
        assert!((s.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
        assert!(s.denom() <= &BigInt::from(10_000));
        assert!(Rational::approximate(f64::NAN, 10).is_err());
    }

    #[test]
    fn approximate_semiconvergent() {
        // brute force over all fractions with denominator <= 12
        for &x in &[0.2857, 0.61803, -0.7072, 0.999] {
            let got = Rational::approximate(x, 12).unwrap();
            let mut best = (f64::INFINITY, q(0, 1));
            for d in 1..=12i64 {
                for n in -12..=12i64 {
                    let c = q(n, d);
                    let e = (c.to_f64() - x).abs();
                    if e < best.0 - 1e-15 {
                        best = (e, c);
                    }
                }
            }
            assert_eq!(got, best.1, "x = {x}");
        }
    }
}
