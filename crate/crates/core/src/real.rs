//! Exact real numbers as precision-indexed rational enclosures.
//!
//! An [`ExactReal`] is a function from a precision `p` to a rational interval
//! of width at most `2^(-p)` containing the number. All intervals produced at
//! different precisions describe the same point, and repeated queries at the
//! same precision are answered from a per-value cache, so every consumer sees
//! identical enclosures.
//!
//! Comparisons against rational thresholds are provided in the two total
//! forms that remain available without deciding equality:
//! [`split`] (near/far against a pair of thresholds) and [`sign_or_small`]
//! (sign with an explicit smallness band).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::interval::RatInterval;
use crate::rational::Rational;
use crate::streams::ConvergentSeq;

/// Working precision beyond which arithmetic refuses to escalate. Reaching
/// it means an operand enclosure failed its own width contract.
pub const PRECISION_CAP: u32 = 4096;

/// An exact real number, shared by cheap clone.
#[derive(Clone)]
pub struct ExactReal {
    inner: Arc<Inner>,
}

struct Inner {
    approx: Box<dyn Fn(u32) -> RatInterval + Send + Sync>,
    cache: Mutex<BTreeMap<u32, RatInterval>>,
}

impl ExactReal {
    /// Wraps an enclosure function. The closure must honour the width
    /// contract (`width(f(p)) <= 2^(-p)`) and describe one fixed point;
    /// violations are caught by a debug assertion at query time.
    pub fn from_fn(f: impl Fn(u32) -> RatInterval + Send + Sync + 'static) -> Self {
        ExactReal {
            inner: Arc::new(Inner {
                approx: Box::new(f),
                cache: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    /// The real with the constant enclosure `[q, q]`.
    pub fn from_rational(q: Rational) -> Self {
        ExactReal::from_fn(move |_| RatInterval::point(q.clone()))
    }

    pub fn from_int(n: i64) -> Self {
        ExactReal::from_rational(Rational::from_int(n))
    }

    /// An enclosure of width at most `2^(-p)` containing the number.
    pub fn approximate(&self, p: u32) -> RatInterval {
        if let Some(i) = self.inner.cache.lock().unwrap().get(&p) {
            return i.clone();
        }
        let i = (self.inner.approx)(p);
        debug_assert!(
            i.width() <= Rational::pow2(-(p as i64)),
            "enclosure at precision {p} has width {}",
            i.width()
        );
        self.inner
            .cache
            .lock()
            .unwrap()
            .entry(p)
            .or_insert_with(|| i.clone());
        i
    }

    /// Builds a real from a nested bracket family: `brackets(n)` must contain
    /// the point and have width at most `2^(-n)`. Used for bisection limits.
    pub fn from_brackets(brackets: impl Fn(u32) -> RatInterval + Send + Sync + 'static) -> Self {
        ExactReal::from_fn(brackets)
    }

    /// Limit of a sequence with an explicit convergence modulus.
    ///
    /// The enclosure at `p` is the term enclosure at index `modulus(p+2)`
    /// inflated by the convergence tolerance `2^(-(p+2))`; it contains the
    /// limit and, up to that same tolerance, every term past `modulus(p+1)`.
    pub fn limit_of(seq: &ConvergentSeq) -> Self {
        let seq = seq.clone();
        ExactReal::from_fn(move |p| {
            let q = p + 2;
            let n = seq.modulus(q);
            let tol = Rational::pow2(-(q as i64));
            seq.term(n).approximate(q).inflate(&tol)
        })
    }

    fn binary(
        x: &ExactReal,
        y: &ExactReal,
        start: impl Fn(u32) -> u32 + Send + Sync + 'static,
        op: impl Fn(&RatInterval, &RatInterval) -> RatInterval + Send + Sync + 'static,
    ) -> ExactReal {
        let x = x.clone();
        let y = y.clone();
        ExactReal::from_fn(move |p| {
            let target = Rational::pow2(-(p as i64));
            let mut q = start(p);
            loop {
                let i = op(&x.approximate(q), &y.approximate(q));
                if i.width() <= target {
                    return i;
                }
                assert!(
                    q < PRECISION_CAP,
                    "arithmetic escalation exceeded the {PRECISION_CAP}-bit precision cap"
                );
                q = (q * 2).max(q + 8).min(PRECISION_CAP);
            }
        })
    }

    pub fn add(&self, other: &ExactReal) -> ExactReal {
        ExactReal::binary(self, other, |p| p + 1, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &ExactReal) -> ExactReal {
        ExactReal::binary(self, other, |p| p + 1, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &ExactReal) -> ExactReal {
        ExactReal::binary(self, other, |p| p + 4, |a, b| a.mul(b))
    }

    pub fn min(&self, other: &ExactReal) -> ExactReal {
        ExactReal::binary(self, other, |p| p, |a, b| a.min_interval(b))
    }

    pub fn max(&self, other: &ExactReal) -> ExactReal {
        ExactReal::binary(self, other, |p| p, |a, b| a.max_interval(b))
    }

    pub fn neg(&self) -> ExactReal {
        let x = self.clone();
        ExactReal::from_fn(move |p| x.approximate(p).neg())
    }

    pub fn abs(&self) -> ExactReal {
        let x = self.clone();
        ExactReal::from_fn(move |p| x.approximate(p).abs())
    }

    pub fn scale(&self, k: &Rational) -> ExactReal {
        let x = self.clone();
        let k = k.clone();
        if k.is_zero() {
            return ExactReal::from_rational(Rational::zero());
        }
        // Evaluate at p + shift with 2^shift >= |k| to keep the width
        // contract after scaling.
        let a = k.abs();
        let mut shift: u32 = 0;
        while Rational::pow2(shift as i64) < a {
            shift += 1;
        }
        ExactReal::from_fn(move |p| x.approximate(p + shift).scale(&k))
    }

    pub fn add_rational(&self, q: &Rational) -> ExactReal {
        let x = self.clone();
        let q = q.clone();
        ExactReal::from_fn(move |p| {
            let i = x.approximate(p);
            RatInterval::new(i.lo() + &q, i.hi() + &q)
        })
    }

    /// `|self - other|` as an exact real.
    pub fn distance(&self, other: &ExactReal) -> ExactReal {
        self.sub(other).abs()
    }

    /// True if some enclosure certifies `self < q` (tries up to `max_p`).
    pub fn certainly_below(&self, q: &Rational, max_p: u32) -> bool {
        let mut p = 2;
        loop {
            if self.approximate(p).hi() < q {
                return true;
            }
            if p >= max_p {
                return false;
            }
            p = (p * 2).min(max_p);
        }
    }

    /// True if some enclosure certifies `self > q` (tries up to `max_p`).
    pub fn certainly_above(&self, q: &Rational, max_p: u32) -> bool {
        let mut p = 2;
        loop {
            if self.approximate(p).lo() > q {
                return true;
            }
            if p >= max_p {
                return false;
            }
            p = (p * 2).min(max_p);
        }
    }
}

impl std::fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExactReal≈{}", self.approximate(16))
    }
}

/// Which side of a threshold pair a number was certified on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitResult {
    /// Certifies `x < b`.
    IsBelow,
    /// Certifies `x > a`.
    IsAbove,
}

/// Total comparison against two rational thresholds `a < b`.
///
/// Queries one enclosure at the first precision finer than half the gap and
/// compares its midpoint with the gap's midpoint. `IsBelow` certifies
/// `x < b`; `IsAbove` certifies `x > a`. For `x` strictly inside `(a, b)`
/// both answers would be sound; the midpoint rule picks one
/// deterministically.
pub fn split(x: &ExactReal, a: &Rational, b: &Rational) -> SplitResult {
    assert!(a < b, "split needs a < b (got {a} >= {b})");
    let half_gap = (b - a) * Rational::new(1, 2);
    let p = half_gap.precision_above();
    let i = x.approximate(p);
    let threshold = (a + b) * Rational::new(1, 2);
    if i.midpoint() <= threshold {
        SplitResult::IsBelow
    } else {
        SplitResult::IsAbove
    }
}

/// Sign information relative to a width-`eps` uncertainty band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignOrSmall {
    /// Certifies `x > eps/4`.
    Positive,
    /// Certifies `x < -eps/4`.
    Negative,
    /// Certifies `|x| < eps/2`.
    Small,
}

/// Total three-way sign test with tolerance `eps > 0`.
pub fn sign_or_small(x: &ExactReal, eps: &Rational) -> SignOrSmall {
    assert!(eps.is_positive(), "sign_or_small needs eps > 0");
    let p = (eps * &Rational::new(1, 8)).precision_above();
    let i = x.approximate(p);
    let quarter = eps * &Rational::new(1, 4);
    if i.lo() > &quarter {
        SignOrSmall::Positive
    } else if i.hi() < &-quarter {
        SignOrSmall::Negative
    } else {
        SignOrSmall::Small
    }
}

/// Interval-level version of [`split`] for callers that already hold an
/// enclosure of width at most half the gap `b - a`. `IsBelow` certifies that
/// the enclosed number is below `b`, `IsAbove` that it is above `a`.
pub fn split_interval(i: &RatInterval, a: &Rational, b: &Rational) -> SplitResult {
    assert!(a < b, "split needs a < b (got {a} >= {b})");
    debug_assert!(i.width() <= (b - a) * Rational::new(1, 2));
    if i.midpoint() <= (a + b) * Rational::new(1, 2) {
        SplitResult::IsBelow
    } else {
        SplitResult::IsAbove
    }
}

/// The precision at which an enclosure is narrow enough for
/// [`split_interval`] against thresholds `gap` apart.
pub fn split_precision(gap: &Rational) -> u32 {
    assert!(gap.is_positive());
    (gap * &Rational::new(1, 2)).precision_above()
}

/// Interval-level version of [`sign_or_small`] for callers that already hold
/// an enclosure of width at most `eps/8`.
pub fn classify_interval(i: &RatInterval, eps: &Rational) -> SignOrSmall {
    debug_assert!(i.width() <= eps * &Rational::new(1, 8));
    let quarter = eps * &Rational::new(1, 4);
    if i.lo() > &quarter {
        SignOrSmall::Positive
    } else if i.hi() < &-quarter {
        SignOrSmall::Negative
    } else {
        SignOrSmall::Small
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::streams::ConvergentSeq;

    fn assert_contract(x: &ExactReal, truth: &Rational, ps: &[u32]) {
        for &p in ps {
            let i = x.approximate(p);
            assert!(i.contains(truth), "enclosure {i} misses {truth} at p={p}");
            assert!(
                i.width() <= Rational::pow2(-(p as i64)),
                "width {} exceeds 2^-{p}",
                i.width()
            );
        }
    }

    #[test]
    fn rational_constants_have_zero_width() {
        let x = ExactReal::from_rational(rat(22, 7));
        for p in [0, 5, 50] {
            let i = x.approximate(p);
            assert!(i.is_point());
            assert_eq!(i.lo(), &rat(22, 7));
        }
    }

    #[test]
    fn arithmetic_meets_width_contract() {
        let a = ExactReal::from_rational(rat(3, 1));
        let b = ExactReal::from_rational(rat(-7, 2));
        let cases: Vec<(ExactReal, Rational)> = vec![
            (a.add(&b), rat(-1, 2)),
            (a.sub(&b), rat(13, 2)),
            (a.mul(&b), rat(-21, 2)),
            (a.neg(), rat(-3, 1)),
            (b.abs(), rat(7, 2)),
            (a.min(&b), rat(-7, 2)),
            (a.max(&b), rat(3, 1)),
            (b.scale(&rat(2, 5)), rat(-7, 5)),
        ];
        for (x, truth) in &cases {
            assert_contract(x, truth, &[0, 8, 32, 128]);
        }
    }

    #[test]
    fn mul_escalates_for_wide_operands() {
        // A value presented with the loosest legal enclosures, so that the
        // product is forced to escalate its working precision.
        let loose = ExactReal::from_fn(|p| {
            let h = Rational::pow2(-(p as i64 + 1));
            RatInterval::new(&rat(100, 1) - &h, &rat(100, 1) + &h)
        });
        let prod = loose.mul(&loose);
        assert_contract(&prod, &rat(10_000, 1), &[0, 16, 64]);
    }

    #[test]
    fn consistency_across_precisions() {
        let x = ExactReal::from_rational(rat(1, 3));
        let y = ExactReal::from_rational(rat(1, 7));
        let s = x.add(&y);
        let coarse = s.approximate(4);
        let fine = s.approximate(40);
        assert!(coarse.intersects(&fine));
        assert!(coarse.contains_interval(&fine) || coarse.intersect(&fine).is_some());
    }

    #[test]
    fn determinism_across_threads() {
        let x = ExactReal::from_rational(rat(1, 3));
        let y = ExactReal::from_rational(rat(2, 7));
        let s = x.mul(&y);
        let expected = s.approximate(64);
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let s = s.clone();
                std::thread::spawn(move || s.approximate(64))
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), expected);
        }
    }

    #[test]
    fn split_certificates_hold() {
        // x = 1/2 against (0, 1/3): the only sound answer is IsAbove.
        let x = ExactReal::from_rational(rat(1, 2));
        assert_eq!(split(&x, &rat(0, 1), &rat(1, 3)), SplitResult::IsAbove);
        // x = 1/10 against (1/3, 1/2): the only sound answer is IsBelow.
        let y = ExactReal::from_rational(rat(1, 10));
        assert_eq!(split(&y, &rat(1, 3), &rat(1, 2)), SplitResult::IsBelow);
    }

    #[test]
    fn split_inside_the_gap_is_sound_either_way() {
        // x strictly inside (a, b): both answers are sound; check the one
        // returned satisfies its certificate.
        let x = ExactReal::from_rational(rat(2, 5));
        let (a, b) = (rat(1, 3), rat(1, 2));
        match split(&x, &a, &b) {
            SplitResult::IsBelow => assert!(rat(2, 5) < b),
            SplitResult::IsAbove => assert!(rat(2, 5) > a),
        }
    }

    #[test]
    fn sign_or_small_three_ways() {
        let eps = rat(1, 4);
        let x = ExactReal::from_rational(rat(1, 2));
        assert_eq!(sign_or_small(&x, &eps), SignOrSmall::Positive);
        let y = ExactReal::from_rational(rat(-1, 2));
        assert_eq!(sign_or_small(&y, &eps), SignOrSmall::Negative);
        let z = ExactReal::from_rational(rat(1, 100));
        assert_eq!(sign_or_small(&z, &eps), SignOrSmall::Small);
        // Boundary-ish value: whatever comes back must satisfy its contract.
        let w = ExactReal::from_rational(rat(1, 16));
        match sign_or_small(&w, &eps) {
            SignOrSmall::Positive => assert!(rat(1, 16) > &eps * &rat(1, 4)),
            SignOrSmall::Small => assert!(rat(1, 16).abs() < &eps * &rat(1, 2)),
            SignOrSmall::Negative => panic!("1/16 certified negative"),
        }
    }

    #[test]
    fn limit_of_partial_sums() {
        // sum of 2^-k for k = 1..n converges to 1 with modulus p -> p.
        let seq = ConvergentSeq::new(
            |n| {
                let mut s = Rational::zero();
                for k in 1..=n {
                    s = &s + &Rational::pow2(-(k as i64));
                }
                ExactReal::from_rational(s)
            },
            ExactReal::from_int(1),
            |p| p as u64,
        );
        let x = ExactReal::limit_of(&seq);
        assert_contract(&x, &rat(1, 1), &[0, 8, 64]);
    }

    #[test]
    fn limit_interval_consistent_with_late_terms() {
        let seq = ConvergentSeq::new(
            |n| ExactReal::from_rational(Rational::pow2(-(n as i64)))
,
            ExactReal::from_int(0),
            |p| p as u64,
        );
        let x = ExactReal::limit_of(&seq);
        for p in [3u32, 10, 20] {
            let i = x.approximate(p);
            let tol = Rational::pow2(-(p as i64 + 1));
            // Every term past modulus(p+1) sits within tol of the enclosure.
            for n in (p as u64 + 1)..(p as u64 + 6) {
                let t = seq.term(n).approximate(p + 4);
                assert!(i.inflate(&tol).intersects(&t));
            }
        }
    }
}
