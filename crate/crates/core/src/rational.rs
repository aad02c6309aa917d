//! Arbitrary-precision rationals in lowest terms.
//!
//! `Rational` is a thin wrapper around [`num::BigRational`] that pins the
//! invariants the rest of the crate relies on (canonical form, positive
//! denominator) and adds the handful of dyadic helpers the interval and
//! real layers need.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// An exact rational number, always reduced, denominator always positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n / d`. Panics if `d == 0`.
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        let d = d.into();
        assert!(!d.is_zero(), "zero denominator");
        Rational(BigRational::new(n.into(), d))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `2^exp` for any integer exponent, exactly.
    pub fn pow2(exp: i64) -> Self {
        let one = BigInt::one();
        if exp >= 0 {
            Rational(BigRational::from_integer(one << exp as usize))
        } else {
            Rational(BigRational::new(one.clone(), one << (-exp) as usize))
        }
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Smallest `p` with `2^(-p) < self`. Requires `self > 0`.
    ///
    /// Used to pick the query precision that makes a comparison against a
    /// rational gap decidable.
    pub fn precision_above(&self) -> u32 {
        assert!(self.is_positive(), "precision_above needs a positive gap");
        if *self > Rational::one() {
            return 0;
        }
        // 2^(-p) < n/d  <=>  d < n * 2^p; start from the bit-length estimate
        // and walk up until the strict inequality holds.
        let bits = self.denom().bits().saturating_sub(self.numer().bits());
        let mut p = bits as u32;
        while Rational::pow2(-(p as i64)) >= *self {
            p += 1;
        }
        p
    }

    /// Rounds to the nearest fraction with denominator `2^p` (ties toward
    /// negative infinity). Keeps interval endpoints from growing unboundedly
    /// deep denominators during long refinement loops.
    pub fn dyadic_floor(&self, p: u32) -> Self {
        let scale = BigInt::one() << p as usize;
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        Rational(BigRational::new(scaled.floor().to_integer(), scale))
    }

    pub fn dyadic_ceil(&self, p: u32) -> Self {
        let scale = BigInt::one() << p as usize;
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        Rational(BigRational::new(scaled.ceil().to_integer(), scale))
    }

    /// Approximate magnitude as a double; only used for log-style precision
    /// planning, never for certified answers.
    pub fn to_f64_lossy(&self) -> f64 {
        use num::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"a"` or `"a/b"` with optional leading `-`.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let n: BigInt = num.parse().map_err(|_| ParseRationalError(s.to_string()))?;
        let d: BigInt = match den {
            Some(d) => d.parse().map_err(|_| ParseRationalError(s.to_string()))?,
            None => BigInt::one(),
        };
        if d <= BigInt::zero() {
            return Err(ParseRationalError(s.to_string()));
        }
        Ok(Rational::new(n, d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational (expected `a` or `a/b` with b > 0): {}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

/// Shorthand used pervasively in tests and fixtures.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

impl Rational {
    /// Total order comparison against another rational; exact.
    pub fn cmp_rat(&self, other: &Rational) -> Ordering {
        self.0.cmp(&other.0)
    }
}
