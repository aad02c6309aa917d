//! The positive-infimum dichotomy for quasi-convex functions presented with
//! an infimum oracle, a sampling checker for quasi-convexity, and the spike
//! fixtures that show why the oracle hypothesis cannot be dropped.
//!
//! The driver bisects the domain, keeping the invariant that the current
//! interval carries the global infimum. At each step the midpoint value
//! splits the situation: both halves certifiably above half the midpoint
//! value end the search with a positive bound, while a certified dip decides
//! which half to keep. A certified dip on *both* sides of a midpoint is
//! impossible for quasi-convex functions and aborts the run instead of
//! mis-certifying. If the bisection never settles, the second phase probes
//! the infimum against the limit point's value and either certifies
//! positivity after all or produces a vanishing-value approach sequence —
//! concrete discontinuity evidence at the limit.

use std::fmt;
use std::sync::{Arc, Mutex};

use num::{Integer, ToPrimitive};

use crate::functions::{RationalFn, RealFn};
use crate::interval::RatInterval;
use crate::outcome::{Budget, BudgetMeter, Error, OpResult, Outcome, Precondition};
use crate::rational::Rational;
use crate::real::{ExactReal, PRECISION_CAP};
use crate::streams::{ConvergentSeq, SeparatedSeqFixture};

/// Oracle access to subinterval infima: `inf_approx(I, p)` is within
/// `2^(-p)` of the true infimum of the function on `I`.
#[derive(Clone)]
pub struct InfOracle {
    inf_approx: Arc<dyn Fn(&RatInterval, u32) -> Rational + Send + Sync>,
}

impl InfOracle {
    pub fn new(inf_approx: impl Fn(&RatInterval, u32) -> Rational + Send + Sync + 'static) -> Self {
        InfOracle {
            inf_approx: Arc::new(inf_approx),
        }
    }

    /// Grid infimum with Lipschitz slack for a total function with a
    /// declared constant. The grid is sized as `width * L * 2^(p+1)`, so
    /// this is intended for narrow intervals or modest precisions; the
    /// constructor refuses absurd grids by panicking.
    pub fn lipschitz(f: RationalFn, constant: Rational) -> Self {
        assert!(constant.is_positive(), "a Lipschitz constant is positive");
        InfOracle::new(move |i, p| {
            let width = i.width();
            let spread = &width * &(&constant * &Rational::pow2(p as i64 + 1));
            let cells = spread
                .numer()
                .div_ceil(spread.denom())
                .to_u64()
                .filter(|c| *c <= 65_536)
                .expect("Lipschitz grid size out of range");
            let n = cells.max(1);
            let h = &width / &Rational::new(n as i64, 1);
            let mut best: Option<Rational> = None;
            for j in 0..=n {
                let q = i.lo() + &(&h * &Rational::new(j as i64, 1));
                let v = f.eval(&q).approximate(p + 3).midpoint();
                best = Some(match best {
                    None => v,
                    Some(b) => b.min(v),
                });
            }
            let slack = &(&constant * &h) * &Rational::new(1, 4);
            &best.unwrap() - &slack
        })
    }

    /// Exact infima for a finite family of disjoint downward spikes on a
    /// baseline of 1: each entry is (center, half-width, depth).
    pub fn hat_family(dips: Vec<(Rational, Rational, Rational)>) -> Self {
        InfOracle::new(move |i, _| {
            let mut candidates = vec![
                hat_family_value(&dips, i.lo()),
                hat_family_value(&dips, i.hi()),
            ];
            for (c, _, _) in &dips {
                if c >= i.lo() && c <= i.hi() {
                    candidates.push(hat_family_value(&dips, c));
                }
            }
            candidates
                .into_iter()
                .reduce(Rational::min)
                .unwrap()
        })
    }

    pub fn inf_approx(&self, i: &RatInterval, p: u32) -> Rational {
        (self.inf_approx)(i, p)
    }
}

/// The classic unit hat around `z`, scaled to half-width `w`.
fn hat(z: &Rational, w: &Rational, x: &Rational) -> Rational {
    let d = (x - z).abs();
    if d >= *w {
        return Rational::from_int(0);
    }
    &Rational::from_int(1) - &(&d / w)
}

fn hat_family_value(dips: &[(Rational, Rational, Rational)], x: &Rational) -> Rational {
    let mut v = Rational::from_int(1);
    for (c, w, depth) in dips {
        v = &v - &(depth * &hat(c, w, x));
    }
    v
}

/// Verdict of [`inf_dichotomy`].
#[derive(Clone)]
pub enum InfResult {
    /// The infimum over the whole domain is at least `lower > 0`; the bound
    /// came from the function's value near `witness_mid` and stays at or
    /// below half of it.
    InfPositive {
        lower: Rational,
        witness_mid: ExactReal,
    },
    /// The infimum vanishes while the value at the bisection limit stays
    /// certifiably positive: `approach` converges to `z` with the function
    /// certified below `2^(-n)` at every tested term.
    InfZeroEvidence {
        z: ExactReal,
        approach: ConvergentSeq,
    },
}

impl fmt::Debug for InfResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfResult::InfPositive { lower, witness_mid } => f
                .debug_struct("InfPositive")
                .field("lower", lower)
                .field("witness_mid", witness_mid)
                .finish(),
            InfResult::InfZeroEvidence { z, .. } => f
                .debug_struct("InfZeroEvidence")
                .field("z", z)
                .finish_non_exhaustive(),
        }
    }
}

struct InfState {
    brackets: Vec<RatInterval>,
}

enum StepVerdict {
    Descend,
    BothHalvesHigh { lower: Rational, witness: Rational },
    Pinned,
}

/// Shared bisection state: the main loop advances it under the caller's
/// meter, and the returned limit point advances it further on demand.
struct InfBisection {
    f: RealFn,
    oracle: InfOracle,
    state: Mutex<InfState>,
    shift: u32,
}

impl InfBisection {
    fn new(f: RealFn, oracle: InfOracle) -> Self {
        let domain = f.domain().clone();
        let mut shift = 0u32;
        while Rational::pow2(shift as i64) < domain.width() {
            shift += 1;
        }
        InfBisection {
            f,
            oracle,
            state: Mutex::new(InfState {
                brackets: vec![domain],
            }),
            shift,
        }
    }

    /// One bisection step on the locked state. The lock is held across the
    /// evaluation and both oracle queries so that concurrent refinements of
    /// the limit point see one deterministic history.
    fn step_locked(
        &self,
        state: &mut InfState,
        meter: &mut BudgetMeter,
    ) -> Result<Outcome<StepVerdict>, Error> {
        let j = state.brackets.last().unwrap().clone();
        if j.is_point() {
            state.brackets.push(j);
            return Ok(Outcome::Decided(StepVerdict::Pinned));
        }
        let n = state.brackets.len() as u32;
        let m = j.midpoint();
        let m_real = ExactReal::from_rational(m.clone());

        // Certify f(m) inside a positive interval [c, C] fine enough for
        // the threshold tests: c >= 5 * 2^(-p).
        let mut p = n + 4;
        let (c, cap_c) = loop {
            if meter.spend(1).is_err() {
                return Ok(meter.exhausted(Some(j)));
            }
            let fm = match self.f.eval(&m_real, p, meter) {
                Outcome::Decided(iv) => iv,
                Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            };
            if !fm.hi().is_positive() {
                return Err(Error::Precondition(Precondition::Positivity));
            }
            let fine = &Rational::from_int(5) * &Rational::pow2(-(p as i64));
            if fm.lo() >= &fine {
                break (fm.lo().clone(), fm.hi().clone());
            }
            if p >= meter.precision_cap() {
                return Ok(meter.exhausted(Some(fm)));
            }
            p = (p * 2).min(meter.precision_cap());
        };

        let left = RatInterval::new(j.lo().clone(), m.clone());
        let right = RatInterval::new(m.clone(), j.hi().clone());
        if meter.spend(1).is_err() || meter.request_precision(p).is_err() {
            return Ok(meter.exhausted(Some(j)));
        }
        let il = self.oracle.inf_approx(&left, p);
        let tol = Rational::pow2(-(p as i64));
        let mid_threshold = &(&c + &(&cap_c * &Rational::new(1, 2))) * &Rational::new(1, 2);

        let keep = if il >= mid_threshold {
            // Left infimum certified at least f(m)/2; the right half either
            // matches (ending the search) or dips certifiably below it.
            let mut q = p;
            loop {
                if meter.spend(2).is_err() {
                    return Ok(meter.exhausted(Some(j)));
                }
                let tq = Rational::pow2(-(q as i64));
                let irq = self.oracle.inf_approx(&right, q);
                let ilq = self.oracle.inf_approx(&left, q);
                if &irq - &tq >= &cap_c * &Rational::new(1, 2) {
                    return Ok(Outcome::Decided(StepVerdict::BothHalvesHigh {
                        lower: &c * &Rational::new(1, 2),
                        witness: m,
                    }));
                }
                if &irq + &tq < &ilq - &tq {
                    break right;
                }
                if q >= p + 24 {
                    return Ok(meter.exhausted(Some(j)));
                }
                q = (q * 2).min(p + 24);
            }
        } else {
            // Left infimum certified below f(m). A certified dip below f(m)
            // on the right as well would put low values on both sides of
            // the midpoint, which quasi-convexity forbids.
            debug_assert!(&il + &tol < c);
            let mut q = p;
            loop {
                if meter.spend(2).is_err() {
                    return Ok(meter.exhausted(Some(j)));
                }
                let tq = Rational::pow2(-(q as i64));
                let irq = self.oracle.inf_approx(&right, q);
                let ilq = self.oracle.inf_approx(&left, q);
                if &irq - &tq > &ilq + &tq {
                    break left;
                }
                if &irq + &tq < c {
                    return Err(Error::Precondition(Precondition::QuasiConvexity));
                }
                if q >= p + 24 {
                    return Ok(meter.exhausted(Some(j)));
                }
                q = (q * 2).min(p + 24);
            }
        };

        #[cfg(debug_assertions)]
        {
            let before = self.oracle.inf_approx(&j, p);
            let after = self.oracle.inf_approx(&keep, p);
            debug_assert!(
                (&before - &after).abs() <= Rational::pow2(-(p as i64 - 1)),
                "kept half must carry the interval's infimum"
            );
        }
        state.brackets.push(keep);
        Ok(Outcome::Decided(StepVerdict::Descend))
    }

    fn step(&self, meter: &mut BudgetMeter) -> Result<Outcome<StepVerdict>, Error> {
        let mut state = self.state.lock().unwrap();
        self.step_locked(&mut state, meter)
    }

    /// Extends the bisection to `depth` halvings under a private allowance.
    /// The limit point is only handed out with the history already sound,
    /// so a failure to extend here means the trusted inputs broke their
    /// contract; that panics rather than fabricating enclosures.
    fn ensure_depth(&self, depth: u32) {
        let mut state = self.state.lock().unwrap();
        while (state.brackets.len() as u32) <= depth {
            let mut meter = Budget::new(u64::MAX / 4, PRECISION_CAP).meter();
            match self.step_locked(&mut state, &mut meter) {
                Ok(Outcome::Decided(_)) => {}
                Ok(Outcome::Exhausted(_)) | Err(_) => {
                    panic!("bisection continuation failed beyond its certified regime")
                }
            }
        }
    }

    fn bracket(&self, n: u32) -> RatInterval {
        self.ensure_depth(n);
        self.state.lock().unwrap().brackets[n as usize].clone()
    }

    fn limit_real(self: &Arc<Self>) -> ExactReal {
        let bis = self.clone();
        let shift = self.shift;
        ExactReal::from_fn(move |p| bis.bracket(p + shift))
    }
}

/// One consistency query before a positive verdict goes out: the claimed
/// lower bound may not exceed the oracle's own whole-domain estimate.
fn verified_positive(
    lower: Rational,
    witness_mid: ExactReal,
    oracle: &InfOracle,
    domain: &RatInterval,
    meter: &mut BudgetMeter,
) -> Outcome<InfResult> {
    if meter.spend(1).is_err() {
        return meter.exhausted(None);
    }
    let g = oracle.inf_approx(domain, 8);
    if lower > &g + &Rational::pow2(-8) {
        return meter.exhausted(None);
    }
    Outcome::Decided(InfResult::InfPositive { lower, witness_mid })
}

/// Scans a 32-cell grid of `j` for a point with value certified below
/// `2^(-n)`.
fn find_small_value(
    f: &RealFn,
    j: &RatInterval,
    n: u32,
    meter: &mut BudgetMeter,
) -> Option<Rational> {
    let w = j.width();
    let bound = Rational::pow2(-(n as i64));
    for i in 0..=32i64 {
        let q = j.lo() + &(&w * &Rational::new(i, 32));
        if q < *f.domain().lo() || q > *f.domain().hi() {
            continue;
        }
        if let Outcome::Decided(iv) = f.eval_at_rational(&q, n + 6, meter) {
            if iv.hi() < &bound {
                return Some(q);
            }
        }
    }
    None
}

/// Decides whether the infimum of a positive quasi-convex function is
/// bounded away from zero, given oracle access to subinterval infima.
/// `quasi_convex` is the caller's pledge; the pledge is still watched at
/// runtime, and a certified violation aborts with a precondition error.
pub fn inf_dichotomy(
    f: &RealFn,
    oracle: &InfOracle,
    quasi_convex: bool,
    budget: Budget,
) -> OpResult<InfResult> {
    if !quasi_convex {
        return Err(Error::InvalidParameter(
            "the dichotomy is only sound under a quasi-convexity pledge".into(),
        ));
    }
    let mut meter = budget.meter();
    let bis = Arc::new(InfBisection::new(f.clone(), oracle.clone()));
    // Each step works at precision (depth + 4); descending past that would
    // breach the precision allowance, which is the cue for the second phase.
    for _ in 1..=budget.max_precision.saturating_sub(4) {
        match bis.step(&mut meter)? {
            Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            Outcome::Decided(StepVerdict::BothHalvesHigh { lower, witness }) => {
                return Ok(verified_positive(
                    lower,
                    ExactReal::from_rational(witness),
                    oracle,
                    f.domain(),
                    &mut meter,
                ));
            }
            Outcome::Decided(StepVerdict::Descend | StepVerdict::Pinned) => {}
        }
    }

    // Second phase: the bisection kept descending. Its limit has a
    // certifiably positive value (or the function is genuinely opaque
    // there); probe the oracle against half that value.
    let z = bis.limit_real();
    let mut qf = 6u32;
    let cz = loop {
        if meter.spend(1).is_err() {
            return Ok(meter.exhausted(None));
        }
        let fe = match f.eval(&z, qf, &mut meter) {
            Outcome::Decided(iv) => iv,
            Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
        };
        if !fe.hi().is_positive() {
            return Err(Error::Precondition(Precondition::Positivity));
        }
        if fe.lo().is_positive() {
            break fe.lo().clone();
        }
        if qf >= meter.precision_cap() {
            return Ok(meter.exhausted(Some(fe)));
        }
        qf = (qf * 2).min(meter.precision_cap());
    };
    let half_cz = &cz * &Rational::new(1, 2);

    let mut q = 4u32;
    loop {
        if meter.spend(1).is_err() {
            return Ok(meter.exhausted(None));
        }
        let g = oracle.inf_approx(f.domain(), q);
        let tq = Rational::pow2(-(q as i64));
        if (&g - &tq).is_positive() {
            let lower = (&g - &tq).min(half_cz.clone());
            return Ok(verified_positive(lower, z, oracle, f.domain(), &mut meter));
        }
        if &g + &tq < half_cz {
            break;
        }
        if q >= meter.precision_cap() {
            return Ok(meter.exhausted(None));
        }
        q = (q * 2).min(meter.precision_cap());
    }

    // The infimum is certified below half of f(z): march the two-threshold
    // scale tests down, collecting a grid witness with a certified small
    // value inside each bisection interval.
    let alpha_depth = (budget.max_precision / 2).max(6);
    let mut witnesses: Vec<Rational> = Vec::new();
    for n in 1..=alpha_depth {
        if meter.spend(2).is_err() {
            return Ok(meter.exhausted(None));
        }
        let beta = oracle.inf_approx(f.domain(), n + 2);
        if beta >= &Rational::from_int(3) * &Rational::pow2(-(n as i64 + 2)) {
            let lower = (&beta - &Rational::pow2(-(n as i64 + 2))).min(half_cz.clone());
            return Ok(verified_positive(lower, z, oracle, f.domain(), &mut meter));
        }
        let j = bis.bracket(n);
        match find_small_value(f, &j, n, &mut meter) {
            Some(y) => witnesses.push(y),
            None => return Ok(meter.exhausted(Some(j))),
        }
    }

    let approach = {
        let f = f.clone();
        let bis = bis.clone();
        let scanned = witnesses;
        ConvergentSeq::new(
            move |k| {
                let k = k.max(1);
                if let Some(y) = scanned.get(k as usize - 1) {
                    return ExactReal::from_rational(y.clone());
                }
                let n = u32::try_from(k).expect("approach index out of range");
                let j = bis.bracket(n);
                let mut meter = Budget::new(u64::MAX / 4, PRECISION_CAP).meter();
                match find_small_value(&f, &j, n, &mut meter) {
                    Some(y) => ExactReal::from_rational(y),
                    None => panic!("a vanishing-infimum witness vanished on extension"),
                }
            },
            z.clone(),
            |p| p as u64 + 1,
        )
    };
    Ok(Outcome::Decided(InfResult::InfZeroEvidence { z, approach }))
}

/// One sampled quasi-convexity violation: the value at the convex
/// combination is certifiably above both endpoint values.
#[derive(Clone, Debug)]
pub struct QuasiViolation {
    pub x: Rational,
    pub y: Rational,
    pub lambda: Rational,
    pub combination: Rational,
    pub value_bound: RatInterval,
    pub max_bound: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct QuasiReport {
    pub checked: u64,
    pub violations: Vec<QuasiViolation>,
}

impl QuasiReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples the quasi-convexity inequality on the given triples. Only
/// certified violations are reported: the lower bound of the value at the
/// combination must exceed the upper bound of both endpoint values.
pub fn quasiconvex_check(
    f: &RealFn,
    triples: &[(Rational, Rational, Rational)],
    budget: Budget,
) -> OpResult<QuasiReport> {
    let mut meter = budget.meter();
    let mut report = QuasiReport::default();
    for (x, y, lambda) in triples {
        if lambda < &Rational::from_int(0) || lambda > &Rational::from_int(1) {
            return Err(Error::InvalidParameter(format!(
                "lambda {lambda} outside [0, 1]"
            )));
        }
        if !f.domain().contains(x) || !f.domain().contains(y) {
            return Err(Error::InvalidParameter(
                "sample point outside the domain".into(),
            ));
        }
        let combination = &(lambda * x) + &(&(&Rational::from_int(1) - lambda) * y);
        report.checked += 1;
        for p in [8u32, 14] {
            if meter.spend(3).is_err() {
                return Ok(meter.exhausted(None));
            }
            let vx = match f.eval_at_rational(x, p, &mut meter) {
                Outcome::Decided(iv) => iv,
                Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            };
            let vy = match f.eval_at_rational(y, p, &mut meter) {
                Outcome::Decided(iv) => iv,
                Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            };
            let vc = match f.eval_at_rational(&combination, p, &mut meter) {
                Outcome::Decided(iv) => iv,
                Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            };
            let max_hi = vx.hi().clone().max(vy.hi().clone());
            if vc.lo() > &max_hi {
                report.violations.push(QuasiViolation {
                    x: x.clone(),
                    y: y.clone(),
                    lambda: lambda.clone(),
                    combination: combination.clone(),
                    value_bound: vc,
                    max_bound: max_hi,
                });
                break;
            }
        }
    }
    Ok(Outcome::Decided(report))
}

/// The hat bump `max(0, 1 - |x - z|/eps)` as an evaluable function on the
/// unit interval.
pub fn spike(z: Rational, eps: Rational) -> RealFn {
    assert!(eps.is_positive(), "spike width must be positive");
    let inv = &Rational::from_int(1) / &eps;
    RealFn::from_exact(crate::functions::unit_domain(), move |x| {
        ExactReal::from_int(1)
            .sub(&x.add_rational(&-z.clone()).abs().scale(&inv))
            .max(&ExactReal::from_int(0))
    })
}

/// The one-spike family over the separated fixture points: constantly 1
/// when no index is lit, and dipping to `1/m` at the fixture's `m`-th point
/// when `dip_at = Some(m)`.
pub fn single_dip_family(points: SeparatedSeqFixture, dip_at: Option<u64>) -> RealFn {
    match dip_at {
        None => RealFn::from_exact(crate::functions::unit_domain(), |_| ExactReal::from_int(1)),
        Some(m) => {
            assert!(m >= points.first_index());
            let r = points.point(m);
            let w = Rational::pow2(-(m as i64));
            let depth = &Rational::from_int(1) - &Rational::new(1, m as i64);
            let inv = &Rational::from_int(1) / &w;
            RealFn::from_exact(crate::functions::unit_domain(), move |x| {
                let t = ExactReal::from_int(1)
                    .sub(&x.add_rational(&-r.clone()).abs().scale(&inv))
                    .max(&ExactReal::from_int(0));
                ExactReal::from_int(1).sub(&t.scale(&depth))
            })
        }
    }
}

/// Support half-width of the `n`-th vanishing spike.
fn vanishing_width(n: u64) -> Rational {
    Rational::pow2(-(n as i64 + 2))
}

/// Depth factor of the `n`-th vanishing spike: the dip bottoms out at
/// exactly `2^(-n)`.
fn vanishing_depth(n: u64) -> Rational {
    &Rational::from_int(1) - &Rational::pow2(-(n as i64))
}

fn vanishing_value(points: &SeparatedSeqFixture, x: &Rational) -> Rational {
    if !x.is_positive() {
        return Rational::from_int(1);
    }
    let mut n = points.first_index();
    loop {
        let r = points.point(n);
        let w = vanishing_width(n);
        if &(&r + &w) < x {
            return Rational::from_int(1);
        }
        if (x - &r).abs() <= w {
            return &Rational::from_int(1) - &(&vanishing_depth(n) * &hat(&r, &w, x));
        }
        n += 1;
        if Rational::pow2(-(n as i64)) < x * &Rational::new(1, 8) {
            return Rational::from_int(1);
        }
    }
}

/// A quasi-convex function on the unit interval with infimum 0: downward
/// spikes at the separated fixture points, with the `n`-th dip bottoming at
/// `2^(-n)`, marching into the accumulation point 0 where the function
/// itself stays 1.
///
/// Enclosures that pin a positive interval see finitely many spikes and
/// evaluate by their exact hulls. An enclosure that still straddles 0 at
/// the meter's precision cap is read as denoting 0 itself and evaluates to
/// 1 — the same privileged reading the step fixture uses at its jump.
pub fn vanishing_spikes(points: SeparatedSeqFixture) -> RealFn {
    RealFn::new(crate::functions::unit_domain(), move |x, p, meter| {
        if meter.spend(1).is_err() || meter.request_precision(p).is_err() {
            return meter.exhausted(None);
        }
        let target = Rational::pow2(-(p as i64));
        let mut q = p.max(6);
        loop {
            let iv = x.approximate(q);
            if iv.hi().is_positive() && !iv.lo().is_positive() && iv.hi() > &Rational::pow2(-(q as i64 - 2)) {
                // Wide positive straddle: refine the argument first.
            } else if iv.lo().is_positive() || iv.hi() < &Rational::from_int(0) || iv.is_point() {
                let hull = vanishing_hull(&points, &iv);
                if hull.width() <= target {
                    return Outcome::Decided(hull);
                }
            } else if q >= meter.precision_cap() {
                return Outcome::Decided(RatInterval::point(Rational::from_int(1)));
            }
            if q >= meter.precision_cap() {
                return meter.exhausted(Some(iv));
            }
            q = (q * 2).min(meter.precision_cap());
        }
    })
}

/// Exact value hull of the vanishing-spike family over a rational interval
/// that stays clear of the accumulation point (or is a single point).
fn vanishing_hull(points: &SeparatedSeqFixture, iv: &RatInterval) -> RatInterval {
    if iv.is_point() {
        return RatInterval::point(vanishing_value(points, iv.lo()));
    }
    let (a, b) = (iv.lo(), iv.hi());
    let mut lo = Rational::from_int(1);
    let mut hi: Option<Rational> = None;
    let mut covered = false;
    let mut n = points.first_index();
    loop {
        let r = points.point(n);
        let w = vanishing_width(n);
        let (sl, sh) = (&r - &w, &r + &w);
        if &sh >= a && &sl <= b {
            let inner_lo = if a > &sl { a.clone() } else { sl.clone() };
            let inner_hi = if b < &sh { b.clone() } else { sh.clone() };
            let tmax = if &r >= &inner_lo && &r <= &inner_hi {
                Rational::from_int(1)
            } else {
                hat(&r, &w, &inner_lo).max(hat(&r, &w, &inner_hi))
            };
            let tmin = hat(&r, &w, &inner_lo).min(hat(&r, &w, &inner_hi));
            let d = vanishing_depth(n);
            let vlo = &Rational::from_int(1) - &(&d * &tmax);
            let vhi = &Rational::from_int(1) - &(&d * &tmin);
            lo = lo.min(vlo);
            hi = Some(match hi {
                None => vhi,
                Some(h) => h.max(vhi),
            });
            if &sl <= a && &sh >= b {
                covered = true;
            }
        }
        if &sh < a {
            break;
        }
        n += 1;
        if Rational::pow2(-(n as i64)) < a * &Rational::new(1, 8) {
            break;
        }
    }
    let hi = match (hi, covered) {
        (Some(h), true) => h,
        _ => Rational::from_int(1),
    };
    RatInterval::new(lo, hi)
}

/// Exact subinterval infima for [`vanishing_spikes`].
pub fn vanishing_spikes_oracle(points: SeparatedSeqFixture) -> InfOracle {
    InfOracle::new(move |i, _| {
        if !i.lo().is_positive() {
            if i.is_point() {
                return Rational::from_int(1);
            }
            // Every tail spike lives inside the interval, so the infimum
            // over their vanishing dips is 0 exactly.
            return Rational::from_int(0);
        }
        let hull = vanishing_hull(&points, i);
        hull.lo().clone()
    })
}
