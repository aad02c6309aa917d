//! Line decompositions from covering decisions, located-distance
//! dichotomies, and neat coverings.
//!
//! The oracles here are trusted inputs: a covering decision's soundness and
//! a separation oracle's classifications are preconditions, not conclusions.
//! Whatever finite certificates can be re-checked are re-checked — positive
//! gaps by direct subtraction and enclosure bounds, separation of returned
//! prefixes by the same split tests that admitted them.

use std::sync::Arc;

use crate::interval::RatInterval;
use crate::outcome::{Budget, Error, OpResult, Outcome};
use crate::rational::Rational;
use crate::real::{split, split_precision, ExactReal, SplitResult, PRECISION_CAP};

/// Which half of a two-set covering of the line a point was assigned to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoveringSide {
    /// The point belongs to the lower set `(-inf, b]`.
    LowerSet,
    /// The point belongs to the upper set `(a, inf)`.
    UpperSet,
}

/// A total decision procedure for a covering of the line by `(-inf, b]` and
/// `(a, inf)`. Soundness — `LowerSet` implies the point is at most `b`,
/// `UpperSet` implies it exceeds `a` — is a trusted precondition.
#[derive(Clone)]
pub struct CoveringDecision {
    decide: Arc<dyn Fn(&ExactReal) -> CoveringSide + Send + Sync>,
}

impl CoveringDecision {
    pub fn new(decide: impl Fn(&ExactReal) -> CoveringSide + Send + Sync + 'static) -> Self {
        CoveringDecision {
            decide: Arc::new(decide),
        }
    }

    /// The direct-comparison decision for known rational parameters: settle
    /// each queried point against `b` from above or `a` from below at
    /// whatever precision that takes. Total whenever `a <= b`.
    pub fn for_parameters(a: Rational, b: Rational) -> Self {
        CoveringDecision::new(move |z| {
            let mut p = 4u32;
            loop {
                let iv = z.approximate(p);
                if iv.hi() <= &b {
                    return CoveringSide::LowerSet;
                }
                if iv.lo() > &a {
                    return CoveringSide::UpperSet;
                }
                assert!(
                    p < PRECISION_CAP,
                    "covering decision failed to settle below the precision cap"
                );
                p = (p * 2).min(PRECISION_CAP);
            }
        })
    }

    pub fn decide(&self, z: &ExactReal) -> CoveringSide {
        (self.decide)(z)
    }
}

/// Verdict of [`decompose_line`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineDecomposition {
    /// `b - a` re-verified positive; `gap` is a certified rational lower
    /// bound on the difference.
    ALessB { gap: Rational },
    /// The lower-set branch. No finite certificate accompanies it: under
    /// the trusted covering this entails `a = b`, and nothing less.
    AEqualsB,
}

/// Decides `a < b` versus `a = b` with a single oracle call at the
/// reflected point `2b - a`, given a sound covering decision for the
/// parameters and `a <= b`.
///
/// On the upper branch the difference `b - a` is re-verified positive by
/// direct subtraction at escalating precision; a refutation at the
/// precision cap means the trusted decision was wrong, and panics.
pub fn decompose_line(d: &CoveringDecision, a: &ExactReal, b: &ExactReal) -> LineDecomposition {
    let z = b.add(&b.sub(a));
    match d.decide(&z) {
        CoveringSide::LowerSet => LineDecomposition::AEqualsB,
        CoveringSide::UpperSet => {
            let e = b.sub(a);
            let mut p = 4u32;
            loop {
                let iv = e.approximate(p);
                if iv.lo().is_positive() {
                    return LineDecomposition::ALessB {
                        gap: iv.lo().clone(),
                    };
                }
                assert!(
                    p < PRECISION_CAP,
                    "upper-set point requires b - a > 0, refuted at the precision cap"
                );
                p = (p * 2).min(PRECISION_CAP);
            }
        }
    }
}

/// A set presented through its distance function: `dist(x, p)` is within
/// `2^(-p)` of the true infimum distance, and `near_point(x, p)` is a
/// member whose distance to `x` exceeds that infimum by at most `2^(-p)`.
#[derive(Clone)]
pub struct LocatedSet {
    dist: Arc<dyn Fn(&ExactReal, u32) -> Rational + Send + Sync>,
    near_point: Arc<dyn Fn(&ExactReal, u32) -> ExactReal + Send + Sync>,
}

impl LocatedSet {
    pub fn new(
        dist: impl Fn(&ExactReal, u32) -> Rational + Send + Sync + 'static,
        near_point: impl Fn(&ExactReal, u32) -> ExactReal + Send + Sync + 'static,
    ) -> Self {
        LocatedSet {
            dist: Arc::new(dist),
            near_point: Arc::new(near_point),
        }
    }

    /// A finite set of rational points.
    pub fn finite(points: Vec<Rational>) -> Self {
        assert!(!points.is_empty(), "a located set is inhabited");
        let for_dist = points.clone();
        LocatedSet::new(
            move |x, p| {
                let mut best: Option<Rational> = None;
                for q in &for_dist {
                    let d = x.add_rational(&-q.clone()).abs();
                    let mid = d.approximate(p + 2).midpoint();
                    best = Some(match best {
                        None => mid,
                        Some(b) => b.min(mid),
                    });
                }
                best.unwrap()
            },
            move |x, p| {
                let mut best: Option<(Rational, &Rational)> = None;
                for q in &points {
                    let d = x.add_rational(&-q.clone()).abs();
                    let mid = d.approximate(p + 4).midpoint();
                    best = match best {
                        Some((bd, bq)) if bd <= mid => Some((bd, bq)),
                        _ => Some((mid, q)),
                    };
                }
                ExactReal::from_rational(best.unwrap().1.clone())
            },
        )
    }

    /// A closed rational segment.
    pub fn segment(seg: RatInterval) -> Self {
        let (lo, hi) = (seg.lo().clone(), seg.hi().clone());
        let (lo2, hi2) = (lo.clone(), hi.clone());
        LocatedSet::new(
            move |x, p| {
                let below = ExactReal::from_rational(lo.clone()).sub(x);
                let above = x.add_rational(&-hi.clone());
                let d = below.max(&above).max(&ExactReal::from_int(0));
                d.approximate(p + 2).midpoint()
            },
            move |x, p| {
                let _ = p;
                x.max(&ExactReal::from_rational(lo2.clone()))
                    .min(&ExactReal::from_rational(hi2.clone()))
            },
        )
    }

    pub fn dist(&self, x: &ExactReal, p: u32) -> Rational {
        (self.dist)(x, p)
    }

    pub fn near_point(&self, x: &ExactReal, p: u32) -> ExactReal {
        (self.near_point)(x, p)
    }
}

/// Answer of a separation oracle for the pair (Q, x): the queried point is
/// apart from `x` by at least `gap`, or it lies outside Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationAnswer {
    ApartFromX { gap: Rational },
    NotInQ,
}

/// Trusted classifier realizing "apart from x, or not in Q" for every
/// queried point. `ApartFromX` answers are re-verified against the queried
/// point before they are acted on.
#[derive(Clone)]
pub struct SeparationOracle {
    classify: Arc<dyn Fn(&ExactReal) -> SeparationAnswer + Send + Sync>,
}

impl SeparationOracle {
    pub fn new(classify: impl Fn(&ExactReal) -> SeparationAnswer + Send + Sync + 'static) -> Self {
        SeparationOracle {
            classify: Arc::new(classify),
        }
    }

    pub fn not_in_q() -> Self {
        SeparationOracle::new(|_| SeparationAnswer::NotInQ)
    }

    pub fn classify(&self, z: &ExactReal) -> SeparationAnswer {
        (self.classify)(z)
    }
}

/// Verdict of [`located_distance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceDecision {
    /// The distance from x to the set exceeds `lower > 0`, re-verified
    /// against a second distance query.
    DistPositive { lower: Rational },
    /// Every scanned scale put a member within `2^(-n)` of x, and the
    /// spliced limit of near points classified as outside Q.
    DistZero,
}

/// The scale-`n` test: does the distance function place the set certifiably
/// beyond `2^(-(n+1))`?
fn far_at_scale(q: &LocatedSet, x: &ExactReal, n: u32) -> bool {
    let d = q.dist(x, n + 2);
    d >= &Rational::from_int(3) * &Rational::pow2(-(n as i64 + 2))
}

/// The limit of near points taken at successive scales while the far test
/// stays quiet, frozen at the first scale where it fires. While all tests
/// are quiet the near points cluster within `2^(-n)` of x, so the limit
/// exists with a fixed modulus either way.
fn spliced_near_limit(q: &LocatedSet, x: &ExactReal) -> ExactReal {
    let q = q.clone();
    let x = x.clone();
    ExactReal::from_fn(move |p| {
        let depth = p + 4;
        for k in 1..=depth {
            if far_at_scale(&q, &x, k) {
                return q.near_point(&x, k + 2).approximate(p);
            }
        }
        let iv = q.near_point(&x, depth + 2).approximate(depth + 2);
        let w = Rational::pow2(-(depth as i64 - 2));
        RatInterval::new(iv.lo() - &w, iv.hi() + &w)
    })
}

/// A certified positive lower bound at scale `n`, re-verified with a second
/// finer distance query.
fn certified_positive(
    q: &LocatedSet,
    x: &ExactReal,
    n: u32,
    meter: &mut crate::outcome::BudgetMeter,
) -> Outcome<DistanceDecision> {
    let p1 = n + 2;
    let p2 = (n + 6).min(meter.precision_cap());
    let l1 = &q.dist(x, p1) - &Rational::pow2(-(p1 as i64));
    let l2 = &q.dist(x, p2) - &Rational::pow2(-(p2 as i64));
    let lower = l1.min(l2);
    if lower.is_positive() {
        Outcome::Decided(DistanceDecision::DistPositive { lower })
    } else {
        meter.exhausted(None)
    }
}

/// Decides whether the distance from `x` to a located set is positive or
/// zero. Scales are scanned for a certified far test; if none fires within
/// the first phase, the spliced limit of near points is classified by the
/// separation oracle — outside Q settles distance zero, while a re-verified
/// apartness gap bounds how much deeper the far test can stay quiet, and
/// the scan resumes to that depth.
pub fn located_distance(
    q: &LocatedSet,
    x: &ExactReal,
    sep: &SeparationOracle,
    budget: Budget,
) -> Outcome<DistanceDecision> {
    let mut meter = budget.meter();
    let first_phase = (budget.max_precision / 2).max(4);
    for n in 1..=first_phase {
        if meter.spend(1).is_err() || meter.request_precision(n + 2).is_err() {
            return meter.exhausted(None);
        }
        if far_at_scale(q, x, n) {
            return certified_positive(q, x, n, &mut meter);
        }
    }
    if meter.spend(2).is_err() {
        return meter.exhausted(None);
    }
    let y = spliced_near_limit(q, x);
    match sep.classify(&y) {
        SeparationAnswer::NotInQ => Outcome::Decided(DistanceDecision::DistZero),
        SeparationAnswer::ApartFromX { gap } => {
            let e = y.sub(x).abs();
            let mut p = split_precision(&gap) + 2;
            loop {
                if meter.spend(1).is_err() {
                    return meter.exhausted(Some(e.approximate(p)));
                }
                let iv = e.approximate(p);
                if iv.lo() > &gap {
                    break;
                }
                if p >= meter.precision_cap() {
                    return meter.exhausted(Some(iv));
                }
                p = (p * 2).min(meter.precision_cap());
            }
            // A verified gap forces the far test to fire within a few
            // scales of the gap's magnitude.
            let bound = (split_precision(&gap) + 4).min(budget.max_precision);
            for n in (first_phase + 1)..=bound {
                if meter.spend(1).is_err() || meter.request_precision(n + 2).is_err() {
                    return meter.exhausted(None);
                }
                if far_at_scale(q, x, n) {
                    return certified_positive(q, x, n, &mut meter);
                }
            }
            meter.exhausted(None)
        }
    }
}

/// Verdict of [`neat_dichotomy`].
#[derive(Clone, Debug)]
pub enum NeatOutcome {
    /// Every enumerated point scanned within the budget lies within `eps`
    /// of one of these points (certificate relative to the scanned prefix).
    FiniteApprox { points: Vec<ExactReal> },
    /// A prefix of pairwise certifiably `> eps/2`-separated points that was
    /// still growing when the scan stopped.
    SeparatedSeq { prefix: Vec<ExactReal> },
}

/// Greedy packing dichotomy over a dense enumeration of a set: either the
/// packing stabilizes — a finite `eps`-approximation of everything scanned
/// — or separated points keep arriving and a pairwise-certified prefix is
/// returned. A scan cut short by the budget while the packing looked
/// stable is reported as exhausted rather than decided.
pub fn neat_dichotomy(
    points: impl Fn(u64) -> ExactReal,
    eps: &Rational,
    budget: Budget,
) -> OpResult<NeatOutcome> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let half = eps * &Rational::new(1, 2);
    let mut meter = budget.meter();
    let planned = (budget.max_queries / 8).clamp(8, 10_000);
    let mut centers: Vec<ExactReal> = Vec::new();
    let mut last_new: u64 = 0;
    let mut reached: u64 = 0;
    for n in 1..=planned {
        if meter.spend(1 + centers.len() as u64).is_err() {
            break;
        }
        reached = n;
        let xn = points(n);
        let mut is_new = true;
        for c in &centers {
            match split(&xn.sub(c).abs(), &half, eps) {
                SplitResult::IsBelow => {
                    is_new = false;
                    break;
                }
                SplitResult::IsAbove => {}
            }
        }
        if is_new {
            centers.push(xn);
            last_new = n;
        }
    }
    if last_new * 2 > reached {
        return Ok(Outcome::Decided(NeatOutcome::SeparatedSeq {
            prefix: centers,
        }));
    }
    if reached < planned {
        return Ok(meter.exhausted(None));
    }
    Ok(Outcome::Decided(NeatOutcome::FiniteApprox {
        points: centers,
    }))
}

/// Which covering condition a sample point fell through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverFamily {
    /// The point is in neither S nor S'.
    S,
    /// The point is in neither T nor T'.
    T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoveringViolation {
    CoverHole {
        point: Rational,
        family: CoverFamily,
    },
    GapViolation {
        s_point: Rational,
        t_point: Rational,
        distance: Rational,
    },
}

#[derive(Clone, Debug, Default)]
pub struct CoveringReport {
    pub violations: Vec<CoveringViolation>,
}

impl CoveringReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Four membership tests and a gap claimed to make a neat covering: the
/// space is covered by S with S' and by T with T', and sampled points of S'
/// and T' keep distance strictly greater than `eps` from each other.
pub struct NeatCovering {
    pub eps: Rational,
    s: Arc<dyn Fn(&Rational) -> bool + Send + Sync>,
    t: Arc<dyn Fn(&Rational) -> bool + Send + Sync>,
    s_prime: Arc<dyn Fn(&Rational) -> bool + Send + Sync>,
    t_prime: Arc<dyn Fn(&Rational) -> bool + Send + Sync>,
}

impl NeatCovering {
    pub fn new(
        eps: Rational,
        s: impl Fn(&Rational) -> bool + Send + Sync + 'static,
        t: impl Fn(&Rational) -> bool + Send + Sync + 'static,
        s_prime: impl Fn(&Rational) -> bool + Send + Sync + 'static,
        t_prime: impl Fn(&Rational) -> bool + Send + Sync + 'static,
    ) -> Self {
        NeatCovering {
            eps,
            s: Arc::new(s),
            t: Arc::new(t),
            s_prime: Arc::new(s_prime),
            t_prime: Arc::new(t_prime),
        }
    }
}

/// Checks the covering conditions on the given samples and the gap
/// condition on every sampled S'-T' pair, reporting each violation.
pub fn validate_neat_covering(c: &NeatCovering, samples: &[Rational]) -> CoveringReport {
    let mut report = CoveringReport::default();
    let mut s_primes: Vec<&Rational> = Vec::new();
    let mut t_primes: Vec<&Rational> = Vec::new();
    for x in samples {
        if !(c.s)(x) && !(c.s_prime)(x) {
            report.violations.push(CoveringViolation::CoverHole {
                point: x.clone(),
                family: CoverFamily::S,
            });
        }
        if !(c.t)(x) && !(c.t_prime)(x) {
            report.violations.push(CoveringViolation::CoverHole {
                point: x.clone(),
                family: CoverFamily::T,
            });
        }
        if (c.s_prime)(x) {
            s_primes.push(x);
        }
        if (c.t_prime)(x) {
            t_primes.push(x);
        }
    }
    for s in &s_primes {
        for t in &t_primes {
            let distance = (*s - *t).abs();
            if distance <= c.eps {
                report.violations.push(CoveringViolation::GapViolation {
                    s_point: (*s).clone(),
                    t_point: (*t).clone(),
                    distance,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn blurred(c: Rational) -> ExactReal {
        ExactReal::from_fn(move |p| {
            let w = Rational::pow2(-(p as i64 + 1));
            RatInterval::new(&c - &w, &c + &w)
        })
    }

    #[test]
    fn upper_set_decision_certifies_a_gap() {
        let d = CoveringDecision::for_parameters(rat(0, 1), rat(1, 4));
        let a = ExactReal::from_int(0);
        let b = ExactReal::from_rational(rat(1, 4));
        match decompose_line(&d, &a, &b) {
            LineDecomposition::ALessB { gap } => {
                assert!(gap.is_positive());
                assert!(gap <= rat(1, 4));
            }
            LineDecomposition::AEqualsB => panic!("0 < 1/4 must land in the upper set"),
        }
    }

    #[test]
    fn lower_set_decision_reports_equality() {
        let d = CoveringDecision::new(|_| CoveringSide::LowerSet);
        let a = ExactReal::from_rational(rat(1, 3));
        let b = ExactReal::from_rational(rat(1, 3));
        assert_eq!(decompose_line(&d, &a, &b), LineDecomposition::AEqualsB);
    }

    #[test]
    fn hairline_gap_forces_deep_precision() {
        let a_rat = &rat(1, 3) - &Rational::pow2(-40);
        let b_rat = rat(1, 3);
        let d = CoveringDecision::for_parameters(a_rat.clone(), b_rat.clone());
        let a = blurred(a_rat);
        let b = blurred(b_rat);
        match decompose_line(&d, &a, &b) {
            LineDecomposition::ALessB { gap } => {
                assert!(gap.is_positive());
                assert!(gap <= Rational::pow2(-40));
            }
            LineDecomposition::AEqualsB => panic!("a hairline gap is still a gap"),
        }
    }

    #[test]
    fn singleton_set_is_certified_apart() {
        let q = LocatedSet::finite(vec![rat(0, 1)]);
        let x = ExactReal::from_rational(rat(1, 2));
        let sep = SeparationOracle::new(|_| panic!("an early far test needs no oracle"));
        match located_distance(&q, &x, &sep, Budget::new(1_000, 24)) {
            Outcome::Decided(DistanceDecision::DistPositive { lower }) => {
                assert!(lower >= rat(1, 4));
            }
            other => panic!("expected a positive distance, got {other:?}"),
        }
    }

    #[test]
    fn member_point_reports_distance_zero() {
        let q = LocatedSet::segment(RatInterval::new(rat(0, 1), rat(1, 1)));
        let x = ExactReal::from_rational(rat(1, 2));
        let out = located_distance(&q, &x, &SeparationOracle::not_in_q(), Budget::new(300, 16));
        assert_eq!(out.expect_decided("member point"), DistanceDecision::DistZero);
    }

    #[test]
    fn unattained_infimum_still_reports_zero() {
        let q = LocatedSet::new(
            |_, p| Rational::pow2(-(p as i64 + 2)),
            |_, p| ExactReal::from_rational(Rational::pow2(-(p as i64 + 2))),
        );
        let x = ExactReal::from_int(0);
        let out = located_distance(&q, &x, &SeparationOracle::not_in_q(), Budget::new(300, 20));
        assert_eq!(
            out.expect_decided("vanishing distances"),
            DistanceDecision::DistZero
        );
    }

    #[test]
    fn tiny_distance_flips_during_the_scan() {
        let q = LocatedSet::finite(vec![rat(0, 1)]);
        let x = ExactReal::from_rational(Rational::pow2(-10));
        let sep = SeparationOracle::new(|_| panic!("the scan itself must find this gap"));
        match located_distance(&q, &x, &sep, Budget::new(1_000, 24)) {
            Outcome::Decided(DistanceDecision::DistPositive { lower }) => {
                assert!(lower >= Rational::pow2(-12));
            }
            other => panic!("expected a positive distance, got {other:?}"),
        }
    }

    #[test]
    fn apartness_answer_extends_the_scan() {
        let q = LocatedSet::finite(vec![rat(0, 1)]);
        let x = ExactReal::from_rational(Rational::pow2(-20));
        let sep = SeparationOracle::new(|_| SeparationAnswer::ApartFromX {
            gap: Rational::pow2(-21),
        });
        match located_distance(&q, &x, &sep, Budget::new(1_000, 30)) {
            Outcome::Decided(DistanceDecision::DistPositive { lower }) => {
                assert!(lower >= Rational::pow2(-22));
                assert!(lower <= Rational::pow2(-19));
            }
            other => panic!("expected the extended scan to settle, got {other:?}"),
        }
    }

    #[test]
    fn starved_scan_exhausts() {
        let q = LocatedSet::finite(vec![rat(0, 1)]);
        let x = ExactReal::from_int(0);
        let out = located_distance(&q, &x, &SeparationOracle::not_in_q(), Budget::new(3, 24));
        assert!(!out.is_decided());
    }

    fn dyadic(n: u64) -> Rational {
        match n {
            1 => rat(0, 1),
            2 => rat(1, 1),
            _ => {
                let mut m = n - 2;
                let mut level = 1u32;
                loop {
                    let c = 1u64 << (level - 1);
                    if m <= c {
                        return Rational::new(2 * m as i64 - 1, 1i64 << level);
                    }
                    m -= c;
                    level += 1;
                }
            }
        }
    }

    #[test]
    fn dyadic_cover_settles_to_five_centers() {
        let eps = rat(1, 4);
        let out = neat_dichotomy(
            |n| ExactReal::from_rational(dyadic(n)),
            &eps,
            Budget::new(20_000, 64),
        )
        .unwrap()
        .expect_decided("dyadic cover");
        match out {
            NeatOutcome::FiniteApprox { points } => {
                assert!(points.len() <= 5);
                // Every scanned point is within eps of some center.
                let half = &eps * &Rational::new(1, 2);
                for n in 1..=100u64 {
                    let x = ExactReal::from_rational(dyadic(n));
                    assert!(points.iter().any(|c| matches!(
                        split(&x.sub(c).abs(), &half, &eps),
                        SplitResult::IsBelow
                    )));
                }
            }
            NeatOutcome::SeparatedSeq { .. } => panic!("[0,1] has a finite 1/4-approximation"),
        }
    }

    #[test]
    fn separated_points_keep_arriving() {
        let out = neat_dichotomy(
            |n| ExactReal::from_int(n as i64),
            &rat(1, 2),
            Budget::new(400, 32),
        )
        .unwrap()
        .expect_decided("integer enumeration");
        match out {
            NeatOutcome::SeparatedSeq { prefix } => {
                assert!(prefix.len() >= 5);
                for i in 0..prefix.len() {
                    for j in (i + 1)..prefix.len() {
                        let d = prefix[i].sub(&prefix[j]).abs().approximate(10);
                        assert!(d.lo() > &rat(1, 4));
                    }
                }
            }
            NeatOutcome::FiniteApprox { .. } => panic!("integers admit no finite approximation"),
        }
    }

    #[test]
    fn singleton_enumeration_returns_itself() {
        let out = neat_dichotomy(
            |_| ExactReal::from_rational(rat(1, 3)),
            &rat(1, 4),
            Budget::default(),
        )
        .unwrap()
        .expect_decided("singleton");
        match out {
            NeatOutcome::FiniteApprox { points } => {
                assert_eq!(points.len(), 1);
                assert!(points[0].approximate(10).contains(&rat(1, 3)));
            }
            NeatOutcome::SeparatedSeq { .. } => panic!("one point cannot separate"),
        }
    }

    #[test]
    fn stale_truncated_scan_exhausts() {
        let out = neat_dichotomy(
            |_| ExactReal::from_rational(rat(1, 3)),
            &rat(1, 4),
            Budget::new(10, 16),
        )
        .unwrap();
        assert!(!out.is_decided());
    }

    #[test]
    fn nonpositive_eps_is_rejected() {
        match neat_dichotomy(|_| ExactReal::from_int(0), &rat(0, 1), Budget::default()) {
            Err(Error::InvalidParameter(_)) => {}
            other => panic!("expected a parameter error, got {other:?}"),
        }
    }

    fn grid() -> Vec<Rational> {
        (-8..=12).map(|k| rat(k, 4)).collect()
    }

    fn tail_covering(eps: Rational) -> NeatCovering {
        NeatCovering::new(
            eps,
            |q| q < &rat(1, 1),
            |q| q > &rat(0, 1),
            |q| q >= &rat(1, 1),
            |q| q <= &rat(0, 1),
        )
    }

    #[test]
    fn separated_tails_validate() {
        let report = validate_neat_covering(&tail_covering(rat(1, 4)), &grid());
        assert!(report.is_valid(), "violations: {:?}", report.violations);
    }

    #[test]
    fn oversized_eps_reports_the_gap_pair() {
        let report = validate_neat_covering(&tail_covering(rat(3, 2)), &grid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, CoveringViolation::GapViolation { s_point, t_point, distance }
                if s_point == &rat(1, 1) && t_point == &rat(0, 1) && distance == &rat(1, 1))));
    }

    #[test]
    fn cover_hole_is_reported() {
        let holed = NeatCovering::new(
            rat(1, 4),
            |q| q < &rat(1, 1),
            |q| q > &rat(1, 2),
            |q| q >= &rat(1, 1),
            |q| q <= &rat(0, 1),
        );
        let report = validate_neat_covering(&holed, &grid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, CoveringViolation::CoverHole { point, family: CoverFamily::T }
                if point == &rat(1, 4))));
    }
}
