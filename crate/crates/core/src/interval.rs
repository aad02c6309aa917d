//! Closed rational intervals and exact interval arithmetic.

use std::fmt;

use crate::rational::Rational;

/// A closed interval `[lo, hi]` with rational endpoints, `lo <= hi`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatInterval {
    lo: Rational,
    hi: Rational,
}

impl RatInterval {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        RatInterval { lo, hi }
    }

    /// The degenerate interval `[q, q]`.
    pub fn point(q: Rational) -> Self {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::new(1, 2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(RatInterval::new(lo, hi))
        } else {
            None
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// Widens both endpoints outward by `r >= 0`.
    pub fn inflate(&self, r: &Rational) -> RatInterval {
        assert!(!r.is_negative(), "inflate by a negative amount");
        RatInterval::new(&self.lo - r, &self.hi + r)
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        RatInterval::new(lo, hi)
    }

    pub fn scale(&self, k: &Rational) -> RatInterval {
        if k.is_negative() {
            RatInterval::new(&self.hi * k, &self.lo * k)
        } else {
            RatInterval::new(&self.lo * k, &self.hi * k)
        }
    }

    pub fn abs(&self) -> RatInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RatInterval::new(Rational::zero(), self.lo.abs().max(self.hi.abs()))
        }
    }

    pub fn min_interval(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    pub fn max_interval(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    /// Rounds endpoints outward to denominator `2^p`. Sound (the result
    /// contains the original) and keeps endpoint sizes bounded in long loops.
    pub fn outward_round(&self, p: u32) -> RatInterval {
        RatInterval::new(self.lo.dyadic_floor(p), self.hi.dyadic_ceil(p))
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> RatInterval {
        RatInterval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn arithmetic_encloses_pointwise_results() {
        let x = iv((1, 2), (3, 4));
        let y = iv((-1, 3), (1, 3));
        // spot-check with the midpoints
        let mx = x.midpoint();
        let my = y.midpoint();
        assert!(x.add(&y).contains(&(&mx + &my)));
        assert!(x.sub(&y).contains(&(&mx - &my)));
        assert!(x.mul(&y).contains(&(&mx * &my)));
        assert!(x.abs().contains(&mx.abs()));
    }

    #[test]
    fn mul_handles_sign_straddling() {
        let x = iv((-2, 1), (3, 1));
        let y = iv((-5, 1), (7, 1));
        let m = x.mul(&y);
        assert_eq!(m.lo(), &rat(-15, 1));
        assert_eq!(m.hi(), &rat(21, 1));
    }

    #[test]
    fn abs_of_straddling_interval() {
        let x = iv((-1, 4), (1, 8));
        let a = x.abs();
        assert_eq!(a.lo(), &rat(0, 1));
        assert_eq!(a.hi(), &rat(1, 4));
    }

    #[test]
    fn outward_round_is_sound() {
        let x = RatInterval::new(rat(1, 3), rat(2, 3));
        let r = x.outward_round(8);
        assert!(r.contains_interval(&x));
        assert!(r.width() <= &x.width() + &Rational::pow2(-7));
    }
}
