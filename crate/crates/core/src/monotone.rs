//! Decision procedures for monotone functions: one-sided limits, ε-step
//! partitions, and enumeration of jump discontinuities, extended to finite
//! spans of monotone parts.
//!
//! Everything here queries the function at rational points only, so each
//! individual test is total; budgets bound how many tests run. Certificates
//! are finite statements about tested points: a step flag certifies that
//! the value at a tested probe is far from the level it crosses, and an
//! emitted discontinuity carries a straddle bound that held at every tested
//! scale. Equality of such bounds with the true one-sided-limit gap is
//! checked against fixtures with known jumps, not asserted for black boxes.

use num::{Integer, ToPrimitive};

use crate::functions::{Direction, MonotoneFn, RationalFn, SpanFn};
use crate::interval::RatInterval;
use crate::ivt::{approx_root_rational, RationalRootResult};
use crate::outcome::{Budget, Error, OpResult, Outcome, Precondition};
use crate::rational::Rational;
use crate::real::{split, ExactReal, SplitResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Flag attached to a partition point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepFlag {
    /// The value at the tested probe sits near its level.
    NearLevel,
    /// The value at the tested probe is at least `gap_lower` away from the
    /// level it crosses — the variation there is concentrated like a step.
    StepCandidate { gap_lower: Rational },
}

/// One partition point with its working enclosure.
#[derive(Clone, Debug)]
pub struct PartitionPoint {
    pub location: ExactReal,
    pub enclosure: RatInterval,
    pub flag: StepFlag,
}

/// An ordered partition of the domain such that, away from the points, the
/// sampled variation stays below `eps`.
#[derive(Clone, Debug)]
pub struct StepPartition {
    pub eps: Rational,
    pub points: Vec<PartitionPoint>,
}

/// An entry of the discontinuity enumeration: a certified jump, or a
/// placeholder slot that yielded none.
#[derive(Clone, Debug)]
pub enum StreamEntry {
    Point {
        location: ExactReal,
        gap_lower: Rational,
    },
    Star,
}

impl StreamEntry {
    pub fn is_point(&self) -> bool {
        matches!(self, StreamEntry::Point { .. })
    }
}

/// A finite prefix of the discontinuity stream.
#[derive(Clone, Debug)]
pub struct DiscontinuityStream {
    pub entries: Vec<StreamEntry>,
}

impl DiscontinuityStream {
    pub fn points(&self) -> impl Iterator<Item = (&ExactReal, &Rational)> {
        self.entries.iter().filter_map(|e| match e {
            StreamEntry::Point {
                location,
                gap_lower,
            } => Some((location, gap_lower)),
            StreamEntry::Star => None,
        })
    }
}

/// The one-sided limit of a monotone function at `x`, to within `2^(-p)`
/// for functions whose variation past the stabilized probe scale stays
/// below that tolerance (true for every fixture with finitely many jumps).
///
/// Probes march geometrically into the chosen side; the returned value is
/// the function's value at the deepest probe once a window of consecutive
/// probes agrees within `2^(-p-1)`. When the ladder cannot stabilize inside
/// the budget, the outcome is `Exhausted` and its diagnostics carry a
/// bracketing interval that certifiably contains the limit.
pub fn one_sided_limit(
    f: &MonotoneFn,
    x: &Rational,
    side: Side,
    p: u32,
    budget: Budget,
) -> OpResult<ExactReal> {
    if f.direction() == Direction::Decreasing {
        let inner = one_sided_limit(&f.negated(), x, side, p, budget)?;
        return Ok(inner.map(|v| v.neg()));
    }
    let lo = f.domain().lo();
    let hi = f.domain().hi();
    let in_range = match side {
        Side::Right => x >= lo && x < hi,
        Side::Left => x > lo && x <= hi,
    };
    if !in_range {
        return Err(Error::InvalidParameter(format!(
            "no room for a {side:?} limit at {x} in {:?}",
            f.domain()
        )));
    }

    let ext = crate::functions::extend_increasing(f.rational_fn());
    let mut meter = budget.meter();
    let q = p + 4;
    let tol = Rational::pow2(-(p as i64 + 1));
    let window = 3usize;
    let mut recent: Vec<RatInterval> = Vec::new();
    let mut deepest: Option<(ExactReal, RatInterval)> = None;

    let bracket = |deepest: &Option<(ExactReal, RatInterval)>| {
        let fx = ext.eval(x).approximate(q);
        match deepest {
            None => fx,
            Some((_, iv)) => match side {
                Side::Right => RatInterval::new(fx.lo().clone(), iv.hi().clone()),
                Side::Left => RatInterval::new(iv.lo().clone(), fx.hi().clone()),
            },
        }
    };

    for k in 1..=(p as i64 + 64) {
        if meter.spend(1).is_err() || meter.request_precision(q).is_err() {
            let br = bracket(&deepest);
            return Ok(meter.exhausted(Some(br)));
        }
        let delta = Rational::pow2(-k);
        let t = match side {
            Side::Right => x + &delta,
            Side::Left => x - &delta,
        };
        let v = ext.eval(&t);
        let iv = v.approximate(q);
        if let Some((_, prev)) = &deepest {
            // The probes move toward x, so an increasing function must show
            // non-increasing values on the right and non-decreasing on the
            // left; a certified reversal refutes the declared direction.
            let violated = match side {
                Side::Right => iv.lo() > prev.hi(),
                Side::Left => iv.hi() < prev.lo(),
            };
            if violated {
                return Err(Error::Precondition(Precondition::Monotonicity));
            }
        }
        recent.push(iv.clone());
        if recent.len() > window + 1 {
            recent.remove(0);
        }
        deepest = Some((v.clone(), iv));
        if recent.len() == window + 1 {
            let mut hull = recent[0].clone();
            for r in &recent[1..] {
                hull = hull.hull(r);
            }
            if hull.width() <= tol {
                return Ok(Outcome::Decided(v));
            }
        }
    }
    let br = bracket(&deepest);
    Ok(meter.exhausted(Some(br)))
}

/// Uniform level grid: the anchor `y0`, the spacing, and the number of
/// intervals `n`, minimal with spacing strictly below `target`.
fn level_grid(
    g: &MonotoneFn,
    eps: &Rational,
    anchor_precision: u32,
) -> Result<(Rational, Rational, u64), Error> {
    let flo = g.eval(g.domain().lo()).approximate(anchor_precision);
    let fhi = g.eval(g.domain().hi()).approximate(anchor_precision);
    let y0 = flo.lo().clone();
    let y1 = fhi.hi().clone();
    let total = &(&y1 - &y0) + &(eps * &Rational::new(1, 4));
    let target = eps * &Rational::new(1, 2);
    let ratio = &total / &target;
    let n = ratio
        .numer()
        .div_floor(ratio.denom())
        .to_u64()
        .and_then(|n| n.checked_add(1))
        .filter(|n| *n <= 65_536)
        .ok_or_else(|| {
            Error::InvalidParameter("eps is too small for the function's range".into())
        })?;
    let spacing = &total / &Rational::new(n as i64, 1);
    Ok((y0, spacing, n))
}

fn shifted_by_level(g: &RationalFn, y: &Rational) -> RationalFn {
    let g = g.clone();
    let neg = -y.clone();
    RationalFn::new(g.domain().clone(), move |q| g.eval(q).add_rational(&neg))
}

/// Spot-check of the declared direction on a coarse sample; a certified
/// decrease anywhere refutes it.
fn check_increasing(g: &MonotoneFn) -> Result<(), Error> {
    let lo = g.domain().lo();
    let hi = g.domain().hi();
    let w = hi - lo;
    let mut prev: Option<RatInterval> = None;
    for i in 0..=4i64 {
        let q = lo + &(&w * &Rational::new(i, 4));
        let iv = g.eval(&q).approximate(16);
        if let Some(p) = &prev {
            if iv.hi() < p.lo() {
                return Err(Error::Precondition(Precondition::Monotonicity));
            }
        }
        prev = Some(iv);
    }
    Ok(())
}

/// Partitions the domain so that, between consecutive points, sampled
/// variation stays below `eps`; each point is flagged by whether the value
/// at its tested probe sits near the crossed level or certifiably far from
/// it (an ε-step).
///
/// One level crossing is localized per grid line with the rational-query
/// bisection; the budget's precision bound doubles as the bisection depth,
/// and each line is charged as `depth + 4` queries.
pub fn eps_steps(f: &MonotoneFn, eps: &Rational, budget: Budget) -> OpResult<StepPartition> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let g = match f.direction() {
        Direction::Increasing => f.clone(),
        Direction::Decreasing => f.negated(),
    };
    check_increasing(&g)?;
    let mut meter = budget.meter();
    let depth = budget.max_precision;
    let fifth = eps * &Rational::new(1, 5);
    let anchor_precision = crate::real::split_precision(&fifth) + 4;
    let (y0, spacing, n) = level_grid(&g, eps, anchor_precision)?;

    let mut raw: Vec<PartitionPoint> = Vec::new();
    for i in 1..n {
        if meter.spend(depth as u64 + 4).is_err() {
            return Ok(meter.exhausted(None));
        }
        let y = &y0 + &(&spacing * &Rational::new(i as i64, 1));
        let shifted = shifted_by_level(g.rational_fn(), &y);
        match approx_root_rational(&shifted, &fifth, depth) {
            Err(_) => continue,
            Ok(RationalRootResult::RootAtRational(q)) => raw.push(PartitionPoint {
                location: ExactReal::from_rational(q.clone()),
                enclosure: RatInterval::point(q),
                flag: StepFlag::NearLevel,
            }),
            Ok(RationalRootResult::Candidate {
                z, lower, upper, ..
            }) => {
                let probe = (&lower + &upper) * Rational::new(1, 2);
                let d = g.eval(&probe).add_rational(&-y.clone()).abs();
                let flag = match split(&d, &fifth, &(eps * &Rational::new(1, 4))) {
                    SplitResult::IsAbove => StepFlag::StepCandidate {
                        gap_lower: fifth.clone(),
                    },
                    SplitResult::IsBelow => StepFlag::NearLevel,
                };
                raw.push(PartitionPoint {
                    location: z,
                    enclosure: RatInterval::new(lower, upper),
                    flag,
                });
            }
        }
    }

    let lo = g.domain().lo().clone();
    let hi = g.domain().hi().clone();
    raw.push(PartitionPoint {
        location: ExactReal::from_rational(lo.clone()),
        enclosure: RatInterval::point(lo),
        flag: StepFlag::NearLevel,
    });
    raw.push(PartitionPoint {
        location: ExactReal::from_rational(hi.clone()),
        enclosure: RatInterval::point(hi),
        flag: StepFlag::NearLevel,
    });
    raw.sort_by(|a, b| a.enclosure.lo().cmp(b.enclosure.lo()));

    // Crossings of neighboring levels at one step coincide; merge points
    // whose working enclosures overlap, keeping the stronger flag.
    let mut points: Vec<PartitionPoint> = Vec::new();
    for pt in raw {
        match points.last_mut() {
            Some(last) if last.enclosure.intersects(&pt.enclosure) => {
                last.enclosure = last.enclosure.hull(&pt.enclosure);
                let take = match (&last.flag, &pt.flag) {
                    (StepFlag::NearLevel, StepFlag::StepCandidate { .. }) => true,
                    (
                        StepFlag::StepCandidate { gap_lower: a },
                        StepFlag::StepCandidate { gap_lower: b },
                    ) => b > a,
                    _ => false,
                };
                if take {
                    last.flag = pt.flag;
                    last.location = pt.location;
                }
            }
            _ => points.push(pt),
        }
    }

    Ok(Outcome::Decided(StepPartition {
        eps: eps.clone(),
        points,
    }))
}

/// Certified straddle refinement: the increase of `g` across the candidate
/// bracket must clear the level-`k` two-threshold split at the working
/// depth and at two finer scales.
fn refine_monotone_gap(g: &MonotoneFn, z: &ExactReal, k: u32, depth: u32) -> Option<Rational> {
    let lo_t = Rational::pow2(-(k as i64 + 1));
    let hi_t = Rational::pow2(-(k as i64));
    for extra in [0u32, 6, 12] {
        let e = z.approximate(depth + extra);
        if e.is_point() {
            return None;
        }
        let u = g.eval(e.hi()).sub(&g.eval(e.lo()));
        match split(&u, &lo_t, &hi_t) {
            SplitResult::IsAbove => {}
            SplitResult::IsBelow => return None,
        }
    }
    Some(lo_t)
}

/// Enumerates certified jump discontinuities as a stream prefix of length
/// `count`. Scales `2^(-k)` are scanned in order; each grid line of a scale
/// contributes one entry — a new certified `Point`, or `Star` when the line
/// crosses continuously, duplicates an earlier point, or fails the straddle
/// refinement. Every emitted gap bound was checked at three scales, so a
/// merely steep continuous stretch is filtered out rather than reported.
pub fn enumerate_discontinuities(
    f: &MonotoneFn,
    count: u64,
    budget: Budget,
) -> OpResult<DiscontinuityStream> {
    let g = match f.direction() {
        Direction::Increasing => f.clone(),
        Direction::Decreasing => f.negated(),
    };
    check_increasing(&g)?;
    let mut meter = budget.meter();
    let depth = budget.max_precision;
    let mut entries: Vec<StreamEntry> = Vec::new();
    let mut known: Vec<RatInterval> = Vec::new();

    'levels: for k in 1..=40u32 {
        if entries.len() as u64 >= count {
            break;
        }
        let eps_k = Rational::pow2(-(k as i64));
        let fifth = &eps_k * &Rational::new(1, 5);
        let anchor_precision = crate::real::split_precision(&fifth) + 4;
        let grid = match level_grid(&g, &eps_k, anchor_precision) {
            Ok(t) => t,
            Err(_) => break,
        };
        let (y0, spacing, n) = grid;
        if n <= 1 {
            entries.push(StreamEntry::Star);
            continue;
        }
        for i in 1..n {
            if entries.len() as u64 >= count {
                break 'levels;
            }
            if meter.spend(depth as u64 + 4).is_err() {
                return Ok(meter.exhausted(None));
            }
            let y = &y0 + &(&spacing * &Rational::new(i as i64, 1));
            let shifted = shifted_by_level(g.rational_fn(), &y);
            let entry = match approx_root_rational(&shifted, &fifth, depth) {
                Err(_) | Ok(RationalRootResult::RootAtRational(_)) => StreamEntry::Star,
                Ok(RationalRootResult::Candidate { z, .. }) => {
                    let e = z.approximate(depth);
                    if known.iter().any(|kn| kn.intersects(&e)) {
                        StreamEntry::Star
                    } else {
                        match refine_monotone_gap(&g, &z, k, depth) {
                            Some(gap_lower) => {
                                known.push(e);
                                StreamEntry::Point {
                                    location: z,
                                    gap_lower,
                                }
                            }
                            None => StreamEntry::Star,
                        }
                    }
                }
            };
            entries.push(entry);
        }
    }
    while (entries.len() as u64) < count {
        entries.push(StreamEntry::Star);
    }
    entries.truncate(count as usize);
    Ok(Outcome::Decided(DiscontinuityStream { entries }))
}

/// Straddle of the whole span across the candidate bracket, certified by
/// the dyadic two-threshold ladder at two scales. `None` means the span's
/// parts cancel (or the bracket pinned to a point).
fn refine_span_gap(f: &SpanFn, z: &ExactReal, depth: u32) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for extra in [0u32, 6] {
        let e = z.approximate(depth + extra);
        if e.is_point() {
            return None;
        }
        let u = f.eval(e.hi()).sub(&f.eval(e.lo())).abs();
        let mut certified: Option<Rational> = None;
        for m in 1..=depth.max(8) as i64 {
            let lo_t = Rational::pow2(-(m + 1));
            let hi_t = Rational::pow2(-m);
            match split(&u, &lo_t, &hi_t) {
                SplitResult::IsAbove => {
                    certified = Some(lo_t);
                    break;
                }
            SplitResult::IsBelow => continue,
            }
        }
        match certified {
            None => return None,
            Some(gap) => {
                best = Some(match best {
                    None => gap,
                    Some(b) => b.min(gap),
                });
            }
        }
    }
    best
}

/// Discontinuity enumeration for a finite span of coefficient-scaled
/// monotone parts. Candidates come from the parts' own enumerations,
/// interleaved round-robin, and each is re-certified against the whole
/// span — so gaps that cancel in the sum are filtered to `Star`.
/// Coefficients given exactly as zero drop their part outright.
pub fn span_discontinuities(
    f: &SpanFn,
    count: u64,
    budget: Budget,
) -> OpResult<DiscontinuityStream> {
    let mut meter = budget.meter();
    let depth = budget.max_precision;

    let mut parts: Vec<MonotoneFn> = Vec::new();
    for (c, g) in f.terms() {
        let ic = c.approximate(24);
        if ic.is_point() && ic.lo().is_zero() {
            continue;
        }
        parts.push(g.clone());
    }
    if parts.is_empty() {
        return Ok(Outcome::Decided(DiscontinuityStream {
            entries: vec![StreamEntry::Star; count as usize],
        }));
    }

    let per_part = Budget::new(
        (budget.max_queries / (parts.len() as u64 + 1)).max(64),
        depth,
    );
    let mut part_entries: Vec<Vec<StreamEntry>> = Vec::new();
    for g in &parts {
        if meter.spend(count * 2).is_err() {
            return Ok(meter.exhausted(None));
        }
        match enumerate_discontinuities(g, count, per_part)? {
            Outcome::Decided(s) => part_entries.push(s.entries),
            Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
        }
    }

    let mut entries: Vec<StreamEntry> = Vec::new();
    let mut known: Vec<RatInterval> = Vec::new();
    'fill: for round in 0..count as usize {
        for per_part in &part_entries {
            if entries.len() as u64 >= count {
                break 'fill;
            }
            let entry = match per_part.get(round) {
                Some(StreamEntry::Point { location, .. }) => {
                    if meter.spend(4).is_err() {
                        return Ok(meter.exhausted(None));
                    }
                    let e = location.approximate(depth);
                    if known.iter().any(|kn| kn.intersects(&e)) {
                        StreamEntry::Star
                    } else {
                        match refine_span_gap(f, location, depth) {
                            Some(gap_lower) => {
                                known.push(e);
                                StreamEntry::Point {
                                    location: location.clone(),
                                    gap_lower,
                                }
                            }
                            None => StreamEntry::Star,
                        }
                    }
                }
                _ => StreamEntry::Star,
            };
            entries.push(entry);
        }
    }
    while (entries.len() as u64) < count {
        entries.push(StreamEntry::Star);
    }
    entries.truncate(count as usize);
    Ok(Outcome::Decided(DiscontinuityStream { entries }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{piecewise_linear, staircase, unit_domain};
    use crate::rational::rat;

    fn identity_fn() -> MonotoneFn {
        MonotoneFn::increasing(RationalFn::from_rational_values(unit_domain(), |q| {
            q.clone()
        }))
    }

    fn one_jump() -> MonotoneFn {
        MonotoneFn::increasing(staircase(rat(0, 1), vec![(rat(1, 3), rat(3, 5))]))
    }

    #[test]
    fn continuous_one_sided_limits_match_the_value() {
        let f = identity_fn();
        for side in [Side::Left, Side::Right] {
            let y = one_sided_limit(&f, &rat(1, 2), side, 8, Budget::default())
                .unwrap()
                .expect_decided("identity limit");
            let iv = y.approximate(12);
            assert!(iv.lo() >= &(&rat(1, 2) - &Rational::pow2(-8)));
            assert!(iv.hi() <= &(&rat(1, 2) + &Rational::pow2(-8)));
        }
    }

    #[test]
    fn staircase_limits_take_the_step_values() {
        let f = one_jump();
        let right = one_sided_limit(&f, &rat(1, 3), Side::Right, 10, Budget::default())
            .unwrap()
            .expect_decided("right limit");
        assert!(right.approximate(12).contains(&rat(3, 5)));
        let left = one_sided_limit(&f, &rat(1, 3), Side::Left, 10, Budget::default())
            .unwrap()
            .expect_decided("left limit");
        assert!(left.approximate(12).contains(&rat(0, 1)));
    }

    #[test]
    fn decreasing_functions_are_handled_by_negation() {
        let f = one_jump().negated();
        assert_eq!(f.direction(), Direction::Decreasing);
        let right = one_sided_limit(&f, &rat(1, 3), Side::Right, 10, Budget::default())
            .unwrap()
            .expect_decided("negated right limit");
        assert!(right.approximate(12).contains(&rat(-3, 5)));
    }

    #[test]
    fn exhaustion_reports_a_bracketing_interval() {
        let f = identity_fn();
        let out = one_sided_limit(&f, &rat(1, 2), Side::Right, 20, Budget::new(2, 64)).unwrap();
        match out {
            Outcome::Exhausted(diag) => {
                let br = diag.last_candidate.expect("bracket");
                assert!(br.contains(&rat(1, 2)));
            }
            Outcome::Decided(_) => panic!("two probes cannot stabilize a window of four"),
        }
    }

    #[test]
    fn misdeclared_direction_is_refuted() {
        let lying = MonotoneFn::increasing(RationalFn::from_rational_values(
            unit_domain(),
            |q| -q.clone(),
        ));
        match one_sided_limit(&lying, &rat(1, 2), Side::Right, 6, Budget::default()) {
            Err(Error::Precondition(Precondition::Monotonicity)) => {}
            other => panic!("expected the monotonicity guard, got {other:?}"),
        }
        match eps_steps(&lying, &rat(1, 4), Budget::default()) {
            Err(Error::Precondition(Precondition::Monotonicity)) => {}
            other => panic!("expected the monotonicity guard, got {other:?}"),
        }
    }

    #[test]
    fn identity_partition_has_no_step_candidates() {
        let f = identity_fn();
        let eps = rat(1, 4);
        let part = eps_steps(&f, &eps, Budget::new(100_000, 24))
            .unwrap()
            .expect_decided("identity partition");
        assert!(part.points.len() >= 3);
        for pt in &part.points {
            assert_eq!(pt.flag, StepFlag::NearLevel);
        }
        // Sampled variation between consecutive points stays below eps.
        for w in part.points.windows(2) {
            let gap_lo = w[0].enclosure.hi();
            let gap_hi = w[1].enclosure.lo();
            if gap_lo >= gap_hi {
                continue;
            }
            let width = gap_hi - gap_lo;
            let q = gap_lo + &(&width * &Rational::new(1, 3));
            let r = gap_lo + &(&width * &Rational::new(2, 3));
            let d = f.eval(&r).sub(&f.eval(&q)).abs().approximate(20);
            assert!(d.hi() <= &eps, "variation {} exceeds eps", d.hi());
        }
    }

    #[test]
    fn staircase_partition_flags_every_jump() {
        let f = MonotoneFn::increasing(staircase(
            rat(0, 1),
            vec![
                (rat(1, 4), rat(3, 10)),
                (rat(1, 2), rat(2, 5)),
                (rat(3, 4), rat(3, 10)),
            ],
        ));
        let depth = 24u32;
        let part = eps_steps(&f, &rat(1, 5), Budget::new(100_000, depth))
            .unwrap()
            .expect_decided("staircase partition");
        let jumps = [rat(1, 4), rat(1, 2), rat(3, 4)];
        let candidates: Vec<&PartitionPoint> = part
            .points
            .iter()
            .filter(|p| matches!(p.flag, StepFlag::StepCandidate { .. }))
            .collect();
        assert_eq!(candidates.len(), 3, "one candidate per jump");
        for jump in &jumps {
            assert!(
                candidates.iter().any(|p| {
                    let e = p.location.approximate(depth);
                    let lo = e.lo() - &Rational::pow2(-(depth as i64));
                    let hi = e.hi() + &Rational::pow2(-(depth as i64));
                    &lo <= jump && jump <= &hi
                }),
                "no candidate within 2^-depth of {jump}"
            );
        }
        for c in &candidates {
            match &c.flag {
                StepFlag::StepCandidate { gap_lower } => assert!(gap_lower >= &rat(1, 25)),
                StepFlag::NearLevel => unreachable!(),
            }
        }
    }

    #[test]
    fn extended_constant_has_no_step_candidates() {
        let f = MonotoneFn::increasing(RationalFn::new(
            RatInterval::new(rat(0, 1), rat(2, 1)),
            |q| {
                if q <= &rat(1, 1) {
                    ExactReal::from_rational(rat(1, 2))
                } else {
                    ExactReal::from_rational(q - &rat(1, 2))
                }
            },
        ));
        let part = eps_steps(&f, &rat(1, 4), Budget::new(100_000, 20))
            .unwrap()
            .expect_decided("extended constant");
        for pt in &part.points {
            assert_eq!(pt.flag, StepFlag::NearLevel);
        }
    }

    #[test]
    fn continuous_function_enumerates_to_all_stars() {
        let f = identity_fn();
        let stream = enumerate_discontinuities(&f, 50, Budget::new(1 << 20, 20))
            .unwrap()
            .expect_decided("identity discontinuities");
        assert_eq!(stream.entries.len(), 50);
        assert!(stream.entries.iter().all(|e| !e.is_point()));
    }

    #[test]
    fn single_jump_is_found_once_with_its_gap() {
        let f = MonotoneFn::increasing(staircase(rat(1, 4), vec![(rat(1, 3), rat(1, 2))]));
        let depth = 30u32;
        let stream = enumerate_discontinuities(&f, 6, Budget::new(1 << 20, depth))
            .unwrap()
            .expect_decided("single jump");
        let points: Vec<_> = stream.points().collect();
        assert_eq!(points.len(), 1, "exactly one certified point");
        let (loc, gap) = &points[0];
        assert!(gap >= &&rat(1, 4));
        let e = loc.approximate(depth);
        assert!(e.contains(&rat(1, 3)));
        assert!(e.width() <= Rational::pow2(-(depth as i64)));
    }

    #[test]
    fn jump_sizes_surface_at_their_scales() {
        let f = MonotoneFn::increasing(staircase(
            rat(0, 1),
            vec![(rat(1, 4), rat(1, 2)), (rat(2, 3), rat(1, 8))],
        ));
        let stream = enumerate_discontinuities(&f, 24, Budget::new(1 << 20, 24))
            .unwrap()
            .expect_decided("two jumps");
        let points: Vec<_> = stream.points().collect();
        assert_eq!(points.len(), 2, "both jumps, no spurious points");
        let big = points
            .iter()
            .find(|(loc, _)| loc.approximate(24).contains(&rat(1, 4)))
            .expect("the 1/2 jump");
        assert!(big.1 >= &rat(1, 4));
        let small = points
            .iter()
            .find(|(loc, _)| loc.approximate(24).contains(&rat(2, 3)))
            .expect("the 1/8 jump");
        assert!(small.1 >= &rat(1, 16));
        // The large jump is certified within the first level's entries.
        assert!(stream.entries[..2].iter().any(|e| e.is_point()));
    }

    #[test]
    fn steep_but_continuous_slopes_are_not_reported() {
        let f = MonotoneFn::increasing(piecewise_linear(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 2) - Rational::pow2(-12), rat(1, 4)),
            (rat(1, 2) + Rational::pow2(-12), rat(3, 4)),
            (rat(1, 1), rat(1, 1)),
        ]));
        let stream = enumerate_discontinuities(&f, 8, Budget::new(1 << 20, 16))
            .unwrap()
            .expect_decided("steep slope");
        assert!(
            stream.entries.iter().all(|e| !e.is_point()),
            "a continuous slope must refine away"
        );
    }

    #[test]
    fn zero_coefficient_drops_its_part() {
        let stairs = MonotoneFn::increasing(staircase(rat(1, 4), vec![(rat(1, 3), rat(1, 2))]));
        let span = SpanFn::new(vec![
            (ExactReal::from_int(1), stairs),
            (ExactReal::from_int(0), identity_fn()),
        ]);
        let stream = span_discontinuities(&span, 6, Budget::new(1 << 20, 24))
            .unwrap()
            .expect_decided("span with zero part");
        let points: Vec<_> = stream.points().collect();
        assert_eq!(points.len(), 1);
        assert!(points[0].0.approximate(24).contains(&rat(1, 3)));
    }

    #[test]
    fn disjoint_jump_sets_merge() {
        let g = MonotoneFn::increasing(staircase(rat(0, 1), vec![(rat(1, 4), rat(1, 2))]));
        let h = MonotoneFn::increasing(staircase(rat(0, 1), vec![(rat(3, 4), rat(1, 4))]));
        let span = SpanFn::new(vec![
            (ExactReal::from_int(1), g),
            (ExactReal::from_int(-1), h),
        ]);
        let stream = span_discontinuities(&span, 10, Budget::new(1 << 20, 24))
            .unwrap()
            .expect_decided("difference of staircases");
        let points: Vec<_> = stream.points().collect();
        assert_eq!(points.len(), 2, "the union of both jump sets");
        assert!(points
            .iter()
            .any(|(l, gap)| l.approximate(24).contains(&rat(1, 4)) && *gap >= &rat(1, 4)));
        assert!(points
            .iter()
            .any(|(l, gap)| l.approximate(24).contains(&rat(3, 4)) && *gap >= &rat(1, 8)));
    }

    #[test]
    fn cancelling_parts_leave_only_stars() {
        let stairs = staircase(rat(0, 1), vec![(rat(2, 5), rat(1, 2))]);
        let span = SpanFn::new(vec![
            (ExactReal::from_int(1), MonotoneFn::increasing(stairs.clone())),
            (ExactReal::from_int(-1), MonotoneFn::increasing(stairs)),
        ]);
        let stream = span_discontinuities(&span, 8, Budget::new(1 << 20, 24))
            .unwrap()
            .expect_decided("cancelling span");
        assert!(stream.entries.iter().all(|e| !e.is_point()));
    }
}
