//! Approximate root localization without continuity assumptions.
//!
//! Given a black-box function with certified opposite signs at the domain
//! endpoints, bisection keeps one-sided sign certificates at every step.
//! Three things can happen within a budget of `depth` halvings:
//!
//! * some tested point certifies a small value — an approximate root;
//! * the bracket collapses onto a limit where the function still certifies
//!   a small value — an approximate root at the limit;
//! * the limit value certifies a definite sign — then the function provably
//!   jumps across the bracket, and the result is [`RootResult::Stuck`] with
//!   [`DiscontinuityEvidence`]: the limit point, an approach sequence from
//!   the side with the opposite sign, and a certified value gap.
//!
//! Locations are returned as live processes: asking a returned point for a
//! finer enclosure resumes the bisection beyond the original depth. That
//! resumption re-evaluates the function at dyadic rationals with a private,
//! effectively unbounded budget, and panics if the function stops being
//! evaluable there (no fixture in this crate does).

use std::sync::{Arc, Mutex};

use crate::functions::{classify_value, split_value, RationalFn, RealFn};
use crate::outcome::{Budget, BudgetMeter, Error, OpResult, Outcome, Precondition};
use crate::rational::Rational;
use crate::real::{sign_or_small, ExactReal, SignOrSmall, SplitResult, PRECISION_CAP};
use crate::streams::{BinarySeq, ConvergentSeq, OmniscienceOracle, OracleAnswer};

/// From which side the approach sequence closes in on the location.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproachSide {
    FromLeft,
    FromRight,
    /// An approach interleaving both sides; produced by hand-assembled
    /// evidence, not by the bisection itself.
    Mixed,
}

/// A point, a sequence converging to it, and a certified value gap between
/// the function's value at the point and its values along the sequence.
#[derive(Clone)]
pub struct DiscontinuityEvidence {
    pub location: ExactReal,
    pub approach: ConvergentSeq,
    /// Certified lower bound on `|f(location) - f(approach.term(n))|` at
    /// every index carrying a sign certificate.
    pub gap_certificate: Rational,
    pub side: ApproachSide,
}

impl DiscontinuityEvidence {
    /// Re-checks, by direct interval evaluation, that
    /// `f(location) · f(approach.term(n)) < -bound` for `n = 1..=count`.
    pub fn verify_products(
        &self,
        f: &RealFn,
        bound: &Rational,
        count: u64,
        meter: &mut BudgetMeter,
    ) -> Outcome<bool> {
        let neg_bound = Rational::zero() - bound;
        for n in 1..=count {
            let xn = self.approach.term(n);
            let mut p = (bound * &Rational::new(1, 8)).precision_above().max(4);
            loop {
                let iz = match f.eval(&self.location, p, meter) {
                    Outcome::Decided(i) => i,
                    Outcome::Exhausted(d) => return Outcome::Exhausted(d),
                };
                let ixn = match f.eval(&xn, p, meter) {
                    Outcome::Decided(i) => i,
                    Outcome::Exhausted(d) => return Outcome::Exhausted(d),
                };
                if iz.mul(&ixn).hi() < &neg_bound {
                    break;
                }
                if p >= meter.precision_cap() {
                    return Outcome::Decided(false);
                }
                p = (p * 2).min(meter.precision_cap());
            }
        }
        Outcome::Decided(true)
    }
}

impl std::fmt::Debug for DiscontinuityEvidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DiscontinuityEvidence({:?}, gap>={}, at {:?})",
            self.side, self.gap_certificate, self.location
        )
    }
}

/// The two decided branches of approximate root localization.
#[derive(Clone, Debug)]
pub enum RootResult {
    /// `|f(location)| < value_bound`, certified.
    Root {
        location: ExactReal,
        value_bound: Rational,
    },
    /// The bracket collapsed but the limit value kept a definite sign: the
    /// function jumps. Carries checkable evidence.
    Stuck(DiscontinuityEvidence),
}

/// One recorded bisection step.
#[derive(Clone, Debug)]
pub struct BisectionStep {
    pub midpoint: Rational,
    /// Sign class of the original function at the midpoint.
    pub class: SignOrSmall,
    /// Bracket after the step.
    pub bracket: (Rational, Rational),
}

/// A record of the endpoint tests and every halving.
#[derive(Clone, Debug, Default)]
pub struct BisectionTrace {
    pub low_endpoint: Option<(Rational, SignOrSmall)>,
    pub high_endpoint: Option<(Rational, SignOrSmall)>,
    /// True when the function crosses downward and was negated internally.
    pub descending: bool,
    pub steps: Vec<BisectionStep>,
}

/// Shared bisection state for a (possibly negated) function `g` with
/// certified `g(left) < 0 < g(right)` margins. The recorded bracket history
/// can be extended lazily after the main run has returned.
struct LiveBisection {
    g: RealFn,
    tol: Rational,
    shift: u32,
    state: Mutex<BracketHistory>,
}

struct BracketHistory {
    left: Vec<Rational>,
    right: Vec<Rational>,
}

impl LiveBisection {
    fn new(g: RealFn, a0: Rational, b0: Rational, tol: Rational) -> Arc<Self> {
        let width = &b0 - &a0;
        let mut shift = 0u32;
        while Rational::pow2(shift as i64) < width {
            shift += 1;
        }
        Arc::new(LiveBisection {
            g,
            tol,
            shift,
            state: Mutex::new(BracketHistory {
                left: vec![a0],
                right: vec![b0],
            }),
        })
    }

    /// One halving. Holds the state lock across the midpoint evaluation so
    /// the history stays a coherent chain.
    fn halve_once(&self, meter: &mut BudgetMeter) -> Outcome<(Rational, SignOrSmall)> {
        let mut st = self.state.lock().unwrap();
        let a = st.left.last().unwrap().clone();
        let b = st.right.last().unwrap().clone();
        if a == b {
            st.left.push(a.clone());
            st.right.push(a.clone());
            return Outcome::Decided((a, SignOrSmall::Small));
        }
        let m = (&a + &b) * Rational::new(1, 2);
        let cls = match classify_value(
            &self.g,
            &ExactReal::from_rational(m.clone()),
            &self.tol,
            meter,
        ) {
            Outcome::Decided(c) => c,
            Outcome::Exhausted(d) => return Outcome::Exhausted(d),
        };
        match cls {
            SignOrSmall::Negative => {
                st.left.push(m.clone());
                st.right.push(b);
            }
            SignOrSmall::Positive => {
                st.left.push(a);
                st.right.push(m.clone());
            }
            SignOrSmall::Small => {
                st.left.push(m.clone());
                st.right.push(m.clone());
            }
        }
        Outcome::Decided((m, cls))
    }

    fn depth(&self) -> usize {
        self.state.lock().unwrap().left.len() - 1
    }

    fn bracket(&self, k: usize) -> (Rational, Rational) {
        let st = self.state.lock().unwrap();
        (st.left[k].clone(), st.right[k].clone())
    }

    /// Extends the history to `k` halvings with a private budget. Panics if
    /// the function exhausts during the extension (see module docs).
    fn ensure_depth(&self, k: usize) {
        while self.depth() < k {
            let mut private = Budget::new(u64::MAX / 4, PRECISION_CAP).meter();
            if let Outcome::Exhausted(d) = self.halve_once(&mut private) {
                panic!(
                    "function stopped being evaluable while refining a root \
                     location past the original budget: {d}"
                );
            }
        }
    }

    /// The bracket limit as a live exact real.
    fn limit_real(self: &Arc<Self>) -> ExactReal {
        let core = self.clone();
        ExactReal::from_fn(move |p| {
            let k = (p + core.shift) as usize;
            core.ensure_depth(k);
            let (a, b) = core.bracket(k);
            crate::interval::RatInterval::new(a, b)
        })
    }

    fn evidence(self: &Arc<Self>, from_left: bool, gap: Rational) -> DiscontinuityEvidence {
        let z = self.limit_real();
        let core = self.clone();
        let shift = self.shift;
        let term = move |n: u64| {
            let k = n as usize;
            core.ensure_depth(k);
            let (a, b) = core.bracket(k);
            ExactReal::from_rational(if from_left { a } else { b })
        };
        let approach = ConvergentSeq::new(term, z.clone(), move |p| (p + shift) as u64);
        DiscontinuityEvidence {
            location: z,
            approach,
            gap_certificate: gap,
            side: if from_left {
                ApproachSide::FromLeft
            } else {
                ApproachSide::FromRight
            },
        }
    }
}

fn flip_class(c: SignOrSmall) -> SignOrSmall {
    match c {
        SignOrSmall::Positive => SignOrSmall::Negative,
        SignOrSmall::Negative => SignOrSmall::Positive,
        SignOrSmall::Small => SignOrSmall::Small,
    }
}

fn root_core(
    f: &RealFn,
    eps: &Rational,
    depth: u32,
    meter: &mut BudgetMeter,
    trace: &mut BisectionTrace,
) -> OpResult<RootResult> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    // Classification tolerance 2ε: Negative/Positive certify values beyond
    // ±ε/2 (the bisection invariant), Small certifies |value| < ε.
    let tol = eps * &Rational::from_int(2);
    let a0 = f.domain().lo().clone();
    let b0 = f.domain().hi().clone();

    let cls_lo = match classify_value(f, &ExactReal::from_rational(a0.clone()), &tol, meter) {
        Outcome::Decided(c) => c,
        Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
    };
    trace.low_endpoint = Some((a0.clone(), cls_lo));
    if cls_lo == SignOrSmall::Small {
        return Ok(Outcome::Decided(RootResult::Root {
            location: ExactReal::from_rational(a0),
            value_bound: eps.clone(),
        }));
    }
    let cls_hi = match classify_value(f, &ExactReal::from_rational(b0.clone()), &tol, meter) {
        Outcome::Decided(c) => c,
        Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
    };
    trace.high_endpoint = Some((b0.clone(), cls_hi));
    if cls_hi == SignOrSmall::Small {
        return Ok(Outcome::Decided(RootResult::Root {
            location: ExactReal::from_rational(b0),
            value_bound: eps.clone(),
        }));
    }

    let g = match (cls_lo, cls_hi) {
        (SignOrSmall::Negative, SignOrSmall::Positive) => f.clone(),
        (SignOrSmall::Positive, SignOrSmall::Negative) => {
            trace.descending = true;
            f.negated()
        }
        _ => return Err(Error::Precondition(Precondition::SignChange)),
    };

    let core = LiveBisection::new(g.clone(), a0, b0, tol.clone());
    for _ in 1..=depth {
        match core.halve_once(meter) {
            Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            Outcome::Decided((m, cls)) => {
                let oriented = if trace.descending { flip_class(cls) } else { cls };
                trace.steps.push(BisectionStep {
                    midpoint: m.clone(),
                    class: oriented,
                    bracket: core.bracket(core.depth()),
                });
                if cls == SignOrSmall::Small {
                    return Ok(Outcome::Decided(RootResult::Root {
                        location: ExactReal::from_rational(m),
                        value_bound: eps.clone(),
                    }));
                }
            }
        }
    }

    // The bracket collapsed without a small value; the final three-way test
    // at the limit gets the remaining budget.
    let z = core.limit_real();
    match classify_value(&g, &z, &tol, meter) {
        Outcome::Exhausted(d) => Ok(Outcome::Exhausted(d)),
        Outcome::Decided(SignOrSmall::Small) => Ok(Outcome::Decided(RootResult::Root {
            location: z,
            value_bound: eps.clone(),
        })),
        // g(z) > ε/2 while every left endpoint certified g < -ε/2: the jump
        // is against the approach from the left (and symmetrically).
        Outcome::Decided(SignOrSmall::Positive) => Ok(Outcome::Decided(RootResult::Stuck(
            core.evidence(true, eps.clone()),
        ))),
        Outcome::Decided(SignOrSmall::Negative) => Ok(Outcome::Decided(RootResult::Stuck(
            core.evidence(false, eps.clone()),
        ))),
    }
}

/// Localizes an approximate root of `f` on its domain, or produces
/// discontinuity evidence when the function provably jumps across the
/// collapsed bracket. The budget's precision bound doubles as the number of
/// halvings.
pub fn approx_root(f: &RealFn, eps: &Rational, budget: Budget) -> OpResult<RootResult> {
    approx_root_with_trace(f, eps, budget).0
}

/// [`approx_root`] plus the full step record for auditing the bisection
/// invariant.
pub fn approx_root_with_trace(
    f: &RealFn,
    eps: &Rational,
    budget: Budget,
) -> (OpResult<RootResult>, BisectionTrace) {
    let mut trace = BisectionTrace::default();
    let depth = budget.max_precision;
    let mut meter = budget.meter();
    let result = root_core(f, eps, depth, &mut meter, &mut trace);
    (result, trace)
}

/// Root localization that only ever queries the function at rational
/// points, so it needs no completeness of evaluation and no budget: every
/// step is a total computation.
#[derive(Clone, Debug)]
pub enum RationalRootResult {
    /// `|f(q)| < eps`, certified.
    RootAtRational(Rational),
    /// No small value surfaced in `depth` halvings. Both one-sided
    /// certificates are intact: beyond ±eps/2 at `lower` and `upper`
    /// (signs per `descending`), with `upper - lower <= width·2^(-depth)`.
    Candidate {
        z: ExactReal,
        lower: Rational,
        upper: Rational,
        descending: bool,
    },
}

struct RationalBisection {
    g: RationalFn,
    tol: Rational,
    shift: u32,
    state: Mutex<BracketHistory>,
}

impl RationalBisection {
    fn new(g: RationalFn, a0: Rational, b0: Rational, tol: Rational) -> Arc<Self> {
        let width = &b0 - &a0;
        let mut shift = 0u32;
        while Rational::pow2(shift as i64) < width {
            shift += 1;
        }
        Arc::new(RationalBisection {
            g,
            tol,
            shift,
            state: Mutex::new(BracketHistory {
                left: vec![a0],
                right: vec![b0],
            }),
        })
    }

    fn halve_once(&self) -> (Rational, SignOrSmall) {
        let mut st = self.state.lock().unwrap();
        let a = st.left.last().unwrap().clone();
        let b = st.right.last().unwrap().clone();
        if a == b {
            st.left.push(a.clone());
            st.right.push(a.clone());
            return (a, SignOrSmall::Small);
        }
        let m = (&a + &b) * Rational::new(1, 2);
        let cls = sign_or_small(&self.g.eval(&m), &self.tol);
        match cls {
            SignOrSmall::Negative => {
                st.left.push(m.clone());
                st.right.push(b);
            }
            SignOrSmall::Positive => {
                st.left.push(a);
                st.right.push(m.clone());
            }
            SignOrSmall::Small => {
                st.left.push(m.clone());
                st.right.push(m.clone());
            }
        }
        (m, cls)
    }

    fn depth(&self) -> usize {
        self.state.lock().unwrap().left.len() - 1
    }

    fn bracket(&self, k: usize) -> (Rational, Rational) {
        let st = self.state.lock().unwrap();
        (st.left[k].clone(), st.right[k].clone())
    }

    fn limit_real(self: &Arc<Self>) -> ExactReal {
        let core = self.clone();
        ExactReal::from_fn(move |p| {
            let k = (p + core.shift) as usize;
            while core.depth() < k {
                core.halve_once();
            }
            let (a, b) = core.bracket(k);
            crate::interval::RatInterval::new(a, b)
        })
    }
}

/// The rational-query bisection (no budget needed: total).
pub fn approx_root_rational(
    f: &RationalFn,
    eps: &Rational,
    depth: u32,
) -> Result<RationalRootResult, Error> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let tol = eps * &Rational::from_int(2);
    let a0 = f.domain().lo().clone();
    let b0 = f.domain().hi().clone();

    let cls_lo = sign_or_small(&f.eval(&a0), &tol);
    if cls_lo == SignOrSmall::Small {
        return Ok(RationalRootResult::RootAtRational(a0));
    }
    let cls_hi = sign_or_small(&f.eval(&b0), &tol);
    if cls_hi == SignOrSmall::Small {
        return Ok(RationalRootResult::RootAtRational(b0));
    }
    let (g, descending) = match (cls_lo, cls_hi) {
        (SignOrSmall::Negative, SignOrSmall::Positive) => (f.clone(), false),
        (SignOrSmall::Positive, SignOrSmall::Negative) => {
            let f2 = f.clone();
            (
                RationalFn::new(f.domain().clone(), move |q| f2.eval(q).neg()),
                true,
            )
        }
        _ => return Err(Error::Precondition(Precondition::SignChange)),
    };

    let core = RationalBisection::new(g, a0, b0, tol);
    for _ in 1..=depth {
        let (m, cls) = core.halve_once();
        if cls == SignOrSmall::Small {
            return Ok(RationalRootResult::RootAtRational(m));
        }
    }
    let (lower, upper) = core.bracket(core.depth());
    Ok(RationalRootResult::Candidate {
        z: core.limit_real(),
        lower,
        upper,
        descending,
    })
}

/// The two branches of the oracle-assisted root dichotomy.
#[derive(Clone, Debug)]
pub enum OracleRootOutcome {
    /// A point with certified `|f| < eps`.
    RootBelowEps(ExactReal),
    /// Trusted universal branch: the oracle answered `AllZero` for the test
    /// sequence, whose bits each certify `f(q_n) > eps/2` when 0. Only a
    /// fixture oracle can produce this.
    AllRationalsAtLeast(Rational),
}

/// Decides between a small value and the (oracle-certified) universal lower
/// bound over an enumeration of the rational points.
///
/// The test sequence realizes `f(q_n) < eps` with the two-threshold split
/// `eps/2` vs `eps`, so a 1-bit certifies "below eps" and a 0-bit certifies
/// "above eps/2". Endpoint sign-change is advisory here: when it fails, the
/// procedure goes straight to the oracle phase, where the universal branch
/// is still meaningful.
pub fn oracle_root_dichotomy(
    f: &RealFn,
    eps: &Rational,
    oracle: &OmniscienceOracle,
    enumeration: impl Fn(u64) -> Rational + Send + Sync + 'static,
    budget: Budget,
) -> Outcome<OracleRootOutcome> {
    let mut meter = budget.meter();
    let enumeration: Arc<dyn Fn(u64) -> Rational + Send + Sync> = Arc::new(enumeration);

    // Phase 1: a direct root search on half the query budget.
    {
        let sub_budget = Budget::new(meter.queries_left() / 2, meter.precision_cap());
        let mut sub = sub_budget.meter();
        let mut trace = BisectionTrace::default();
        let attempt = root_core(f, eps, budget.max_precision, &mut sub, &mut trace);
        let used = sub.queries_used();
        let _ = meter.spend(used);
        let _ = meter.request_precision(sub.deepest_precision());
        if let Ok(Outcome::Decided(RootResult::Root { location, .. })) = attempt {
            return Outcome::Decided(OracleRootOutcome::RootBelowEps(location));
        }
    }

    // Phase 2: scan the enumeration through the oracle.
    let half = eps * &Rational::new(1, 2);
    let tol = eps * &Rational::from_int(2);
    let prec_cap = meter.precision_cap();
    let bit_test: Arc<dyn Fn(u64) -> bool + Send + Sync> = {
        let f = f.clone();
        let enumeration = enumeration.clone();
        let half = half.clone();
        let eps = eps.clone();
        Arc::new(move |idx: u64| {
            let q = enumeration(idx);
            let mut private = Budget::new(256, prec_cap).meter();
            matches!(
                split_value(
                    &f,
                    &ExactReal::from_rational(q),
                    &half,
                    &eps,
                    &mut private
                ),
                Outcome::Decided(SplitResult::IsBelow)
            )
        })
    };

    let mut offset = 0u64;
    loop {
        let t = bit_test.clone();
        let bits = BinarySeq::new(move |i| t(offset + i));
        let answer = oracle.decide(&bits);
        let scan_cost = match &answer {
            OracleAnswer::AllZero => 1,
            OracleAnswer::FirstOneAt(k) => *k,
            OracleAnswer::Unknown { scanned } => *scanned,
        };
        if meter.spend(scan_cost).is_err() {
            return meter.exhausted(None);
        }
        match answer {
            OracleAnswer::AllZero => {
                return Outcome::Decided(OracleRootOutcome::AllRationalsAtLeast(eps.clone()));
            }
            OracleAnswer::Unknown { .. } => {
                return meter.exhausted(None);
            }
            OracleAnswer::FirstOneAt(k) => {
                let n = offset + k;
                let q = enumeration(n);
                let x = ExactReal::from_rational(q.clone());
                match classify_value(f, &x, &tol, &mut meter) {
                    Outcome::Exhausted(d) => return Outcome::Exhausted(d),
                    Outcome::Decided(SignOrSmall::Small) => {
                        return Outcome::Decided(OracleRootOutcome::RootBelowEps(x));
                    }
                    Outcome::Decided(SignOrSmall::Negative) => {
                        // A certified negative value: a sign change exists
                        // between q and the high endpoint; bisect there.
                        let hi = f.domain().hi().clone();
                        if q >= hi {
                            return meter.exhausted(None);
                        }
                        let restricted = f.restricted(q, hi);
                        let sub_budget =
                            Budget::new(meter.queries_left(), meter.precision_cap());
                        let mut sub = sub_budget.meter();
                        let mut trace = BisectionTrace::default();
                        let attempt = root_core(
                            &restricted,
                            eps,
                            budget.max_precision,
                            &mut sub,
                            &mut trace,
                        );
                        let _ = meter.spend(sub.queries_used());
                        return match attempt {
                            Ok(Outcome::Decided(RootResult::Root { location, .. })) => {
                                Outcome::Decided(OracleRootOutcome::RootBelowEps(location))
                            }
                            _ => meter.exhausted(None),
                        };
                    }
                    Outcome::Decided(SignOrSmall::Positive) => {
                        // The split fired inside (eps/2, eps): not a root;
                        // resume the scan past this index.
                        offset = n;
                    }
                }
            }
        }
    }
}

/// The standard enumeration of the rationals in `[0, 1]`: `0, 1`, then all
/// reduced fractions grouped by ascending denominator, numerators
/// ascending. One-based.
pub fn rational_enumeration(n: u64) -> Rational {
    assert!(n >= 1, "enumeration indices start at 1");
    match n {
        1 => return Rational::zero(),
        2 => return Rational::one(),
        _ => {}
    }
    let mut idx = 2u64;
    let mut d: i64 = 2;
    loop {
        for num in 1..d {
            if num::integer::gcd(num, d) == 1 {
                idx += 1;
                if idx == n {
                    return Rational::new(num, d);
                }
            }
        }
        d += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{piecewise_linear_real, step_fn, step_fn_real, unit_domain, RealFn};
    use crate::rational::rat;

    fn poly_domain() -> RealFn {
        RealFn::from_exact(unit_domain(), |x| {
            x.add(&ExactReal::from_rational(rat(-1, 2)))
        })
    }

    fn reverify_root(f: &RealFn, result: &RootResult, eps: &Rational) {
        match result {
            RootResult::Root { location, .. } => {
                let p = eps.precision_above() + 2;
                let mut meter = Budget::new(1 << 20, PRECISION_CAP).meter();
                let i = f.eval(location, p, &mut meter).expect_decided("re-verify");
                assert!(
                    i.lo() > &(Rational::zero() - eps) && i.hi() < eps,
                    "value {i} not inside ±{eps}"
                );
            }
            RootResult::Stuck(_) => panic!("expected a root"),
        }
    }

    #[test]
    fn linear_function_roots_at_the_midpoint() {
        let f = poly_domain();
        let eps = rat(1, 10);
        let out = approx_root(&f, &eps, Budget::new(100_000, 40))
            .unwrap()
            .expect_decided("linear root");
        reverify_root(&f, &out, &eps);
        if let RootResult::Root { location, .. } = &out {
            assert!(location.approximate(20).contains(&rat(1, 2)));
        }
    }

    #[test]
    fn quadratic_root_near_a_quarter_of_machine_eps() {
        let f = RealFn::from_exact(unit_domain(), |x| {
            x.mul(x).add(&ExactReal::from_rational(rat(-1, 4)))
        });
        let eps = Rational::pow2(-20);
        let out = approx_root(&f, &eps, Budget::new(1 << 20, 64))
            .unwrap()
            .expect_decided("quadratic root");
        reverify_root(&f, &out, &eps);
        if let RootResult::Root { location, .. } = &out {
            let i = location.approximate(30);
            assert!(
                i.contains(&rat(1, 2))
                    || (&rat(1, 2) - &i.midpoint()).abs() <= Rational::pow2(-18)
            );
        }
    }

    #[test]
    fn irrational_root_is_located() {
        // 4x² − 2 has its root at √2/2 ≈ 0.7071, not a dyadic point.
        let f = RealFn::from_exact(unit_domain(), |x| {
            x.mul(x)
                .scale(&rat(4, 1))
                .add(&ExactReal::from_rational(rat(-2, 1)))
        });
        let eps = Rational::pow2(-10);
        let out = approx_root(&f, &eps, Budget::new(1 << 20, 64))
            .unwrap()
            .expect_decided("irrational root");
        reverify_root(&f, &out, &eps);
        if let RootResult::Root { location, .. } = &out {
            let i = location.approximate(20);
            assert!(i.lo() < &rat(7072, 10000) && i.hi() > &rat(7070, 10000));
        }
    }

    #[test]
    fn step_jump_produces_checked_evidence() {
        let f = step_fn_real(rat(1, 3), rat(-1, 1), rat(1, 1));
        let eps = rat(1, 2);
        let out = approx_root(&f, &eps, Budget::new(100_000, 30))
            .unwrap()
            .expect_decided("step dichotomy");
        match out {
            RootResult::Stuck(ev) => {
                assert_eq!(ev.side, ApproachSide::FromLeft);
                assert_eq!(ev.gap_certificate, rat(1, 2));
                let i = ev.location.approximate(30);
                assert!(i.contains(&rat(1, 3)));
                assert!(i.width() <= Rational::pow2(-30));
                for n in [1u64, 3, 7] {
                    let t = ev.approach.term(n).approximate(40);
                    assert!(t.hi() < &rat(1, 3));
                }
                let mut meter = Budget::new(1 << 20, 80).meter();
                assert!(ev
                    .verify_products(&f, &rat(1, 16), 6, &mut meter)
                    .expect_decided("products"));
            }
            RootResult::Root { .. } => panic!("a step with gap 2 has no eps-root"),
        }
    }

    #[test]
    fn downward_step_is_handled_by_negation() {
        let f = step_fn_real(rat(1, 3), rat(1, 1), rat(-1, 1));
        let eps = rat(1, 2);
        let (out, trace) = approx_root_with_trace(&f, &eps, Budget::new(100_000, 24));
        assert!(trace.descending);
        match out.unwrap().expect_decided("downward step") {
            RootResult::Stuck(ev) => {
                assert_eq!(ev.side, ApproachSide::FromLeft);
                let mut meter = Budget::new(1 << 20, 80).meter();
                assert!(ev
                    .verify_products(&f, &rat(1, 16), 4, &mut meter)
                    .expect_decided("products"));
            }
            RootResult::Root { .. } => panic!("expected evidence"),
        }
    }

    #[test]
    fn continuous_fixture_never_gets_stuck() {
        let f = piecewise_linear_real(vec![
            (rat(0, 1), rat(-1, 1)),
            (rat(1, 3), rat(-1, 2)),
            (rat(2, 3), rat(1, 4)),
            (rat(1, 1), rat(1, 1)),
        ]);
        let eps = Rational::pow2(-8);
        let out = approx_root(&f, &eps, Budget::new(1 << 20, 48))
            .unwrap()
            .expect_decided("piecewise linear");
        reverify_root(&f, &out, &eps);
    }

    #[test]
    fn same_signs_fail_the_precondition() {
        let f = RealFn::from_exact(unit_domain(), |x| {
            x.add(&ExactReal::from_rational(rat(1, 1)))
        });
        match approx_root(&f, &rat(1, 10), Budget::new(1000, 20)) {
            Err(Error::Precondition(Precondition::SignChange)) => {}
            other => panic!("expected the sign-change precondition, got {other:?}"),
        }
    }

    #[test]
    fn tiny_budget_exhausts_honestly() {
        let f = poly_domain();
        let out = approx_root(&f, &Rational::pow2(-6), Budget::new(2, 40)).unwrap();
        assert!(!out.is_decided());
    }

    #[test]
    fn trace_records_the_invariant() {
        let f = piecewise_linear_real(vec![
            (rat(0, 1), rat(-1, 1)),
            (rat(1, 1), rat(1, 1)),
        ]);
        let eps = Rational::pow2(-16);
        let (out, trace) = approx_root_with_trace(&f, &eps, Budget::new(1 << 20, 40));
        assert!(out.unwrap().is_decided());
        for (n, step) in trace.steps.iter().enumerate() {
            let (a, b) = &step.bracket;
            assert!(b - a <= Rational::pow2(-(n as i64 + 1)));
            match step.class {
                SignOrSmall::Negative => assert_eq!(&step.midpoint, a),
                SignOrSmall::Positive => assert_eq!(&step.midpoint, b),
                SignOrSmall::Small => assert_eq!(a, b),
            }
        }
    }

    #[test]
    fn rational_variant_finds_exact_dyadic_roots() {
        let f = RationalFn::from_rational_values(unit_domain(), |q| q - &rat(1, 2));
        match approx_root_rational(&f, &rat(1, 10), 30).unwrap() {
            RationalRootResult::RootAtRational(q) => assert_eq!(q, rat(1, 2)),
            other => panic!("expected an exact root, got {other:?}"),
        }

        let g = RationalFn::from_rational_values(unit_domain(), |q| q * q - &rat(1, 16));
        match approx_root_rational(&g, &Rational::pow2(-10), 40).unwrap() {
            RationalRootResult::RootAtRational(q) => {
                assert!((&q * &q - rat(1, 16)).abs() < Rational::pow2(-10));
                assert_eq!(q, rat(1, 4));
            }
            other => panic!("expected a rational root, got {other:?}"),
        }
    }

    #[test]
    fn rational_variant_candidates_keep_their_certificates() {
        let f = step_fn(rat(1, 3), rat(-1, 1), rat(1, 1));
        match approx_root_rational(&f, &rat(1, 2), 30).unwrap() {
            RationalRootResult::Candidate {
                z,
                lower,
                upper,
                descending,
            } => {
                assert!(!descending);
                assert!(&upper - &lower <= Rational::pow2(-30));
                assert!(lower < rat(1, 3) && rat(1, 3) <= upper);
                // Sign certificates at the final bracket.
                assert!(f.eval(&lower).approximate(10).hi() < &rat(-1, 4));
                assert!(f.eval(&upper).approximate(10).lo() > &rat(1, 4));
                // The limit point keeps refining past the requested depth.
                let fine = z.approximate(50);
                assert!(fine.contains(&rat(1, 3)));
                assert!(fine.width() <= Rational::pow2(-50));
            }
            other => panic!("expected a candidate, got {other:?}"),
        }
    }

    #[test]
    fn oracle_dichotomy_prefers_the_direct_root() {
        let f = poly_domain();
        let out = oracle_root_dichotomy(
            &f,
            &rat(1, 10),
            &OmniscienceOracle::bounded_search(100),
            rational_enumeration,
            Budget::new(1 << 20, 40),
        )
        .expect_decided("direct root");
        match out {
            OracleRootOutcome::RootBelowEps(z) => {
                assert!(z.approximate(20).contains(&rat(1, 2)));
            }
            other => panic!("expected a root, got {other:?}"),
        }
    }

    #[test]
    fn oracle_dichotomy_certifies_the_universal_branch_via_fixture() {
        let f = RealFn::from_exact(unit_domain(), |_| ExactReal::from_rational(rat(2, 5)));
        let out = oracle_root_dichotomy(
            &f,
            &rat(1, 5),
            &OmniscienceOracle::fixture(OracleAnswer::AllZero),
            rational_enumeration,
            Budget::new(100_000, 30),
        )
        .expect_decided("universal branch");
        match out {
            OracleRootOutcome::AllRationalsAtLeast(e) => assert_eq!(e, rat(1, 5)),
            other => panic!("expected the universal branch, got {other:?}"),
        }
    }

    #[test]
    fn bounded_oracle_cannot_certify_the_universal_branch() {
        let f = RealFn::from_exact(unit_domain(), |_| ExactReal::from_rational(rat(2, 5)));
        let out = oracle_root_dichotomy(
            &f,
            &rat(1, 5),
            &OmniscienceOracle::bounded_search(50),
            rational_enumeration,
            Budget::new(100_000, 30),
        );
        assert!(!out.is_decided());
    }

    #[test]
    fn rational_dip_is_found_through_the_oracle() {
        // |x − 1/2| + 1/8: no sign change, but the value at 1/2 is 1/8 < 1/4.
        let f = RealFn::from_exact(unit_domain(), |x| {
            x.add(&ExactReal::from_rational(rat(-1, 2)))
                .abs()
                .add(&ExactReal::from_rational(rat(1, 8)))
        });
        let out = oracle_root_dichotomy(
            &f,
            &rat(1, 4),
            &OmniscienceOracle::bounded_search(100),
            rational_enumeration,
            Budget::new(1 << 20, 40),
        )
        .expect_decided("dip at 1/2");
        match out {
            OracleRootOutcome::RootBelowEps(z) => {
                assert!(z.approximate(20).contains(&rat(1, 2)));
            }
            other => panic!("expected the dip, got {other:?}"),
        }
    }

    #[test]
    fn borderline_band_values_lead_to_exhaustion() {
        // Constant 3ε/16 above ε/2: the split keeps firing, verification
        // keeps certifying Positive, and the scan finally runs out.
        let f = RealFn::from_exact(unit_domain(), |_| ExactReal::from_rational(rat(3, 16)));
        let out = oracle_root_dichotomy(
            &f,
            &rat(1, 4),
            &OmniscienceOracle::bounded_search(20),
            rational_enumeration,
            Budget::new(400, 30),
        );
        assert!(!out.is_decided());
    }

    #[test]
    fn enumeration_prefix_is_the_expected_one() {
        let expected = [
            rat(0, 1),
            rat(1, 1),
            rat(1, 2),
            rat(1, 3),
            rat(2, 3),
            rat(1, 4),
            rat(3, 4),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(4, 5),
            rat(1, 6),
            rat(5, 6),
        ];
        for (i, want) in expected.iter().enumerate() {
            assert_eq!(&rational_enumeration(i as u64 + 1), want);
        }
    }

    #[test]
    fn hand_built_mixed_evidence_verifies() {
        let f = step_fn_real(rat(1, 2), rat(-1, 1), rat(1, 1));
        let z = ExactReal::from_rational(rat(1, 2));
        // Alternate approach strictly from the left; label it Mixed to
        // exercise the variant.
        let approach = ConvergentSeq::new(
            |n| ExactReal::from_rational(&rat(1, 2) - &Rational::pow2(-(n as i64 + 1))),
            ExactReal::from_rational(rat(1, 2)),
            |p| p as u64,
        );
        let ev = DiscontinuityEvidence {
            location: z,
            approach,
            gap_certificate: rat(1, 2),
            side: ApproachSide::Mixed,
        };
        let mut meter = Budget::new(1 << 20, 60).meter();
        assert!(ev
            .verify_products(&f, &rat(1, 16), 5, &mut meter)
            .expect_decided("mixed products"));
    }
}
