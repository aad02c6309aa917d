//! Two decision procedures for comparing a function's values along a
//! convergent sequence against its value at the limit.
//!
//! Both rest on the same construction: turn threshold tests on the
//! distances `d_n = |f(x_n) - f(x)|` into an increasing binary sequence,
//! splice that sequence into the points, and evaluate `f` at the spliced
//! limit. The function is trusted to be strongly extensional — apart values
//! imply apart arguments — which is what lets a definite value gap at the
//! spliced limit be traced back to a concrete index.
//!
//! Threshold tests that run inside lazily evaluated streams use private,
//! effectively unbounded budgets; the caller's budget is charged for the
//! evaluations the procedure performs directly. A private test that cannot
//! decide poisons the run, and the affected universal branch degrades to
//! `Exhausted` instead of asserting something unchecked.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};

use crate::functions::RealFn;
use crate::interval::RatInterval;
use crate::outcome::{Budget, BudgetMeter, Error, OpResult, Outcome};
use crate::rational::Rational;
use crate::real::{split_precision, ExactReal, PRECISION_CAP};
use crate::streams::{
    interval_distance, BinarySeq, ConvergentSeq, OmniscienceOracle, OracleAnswer,
};

/// Result of the first trick: either a concrete index whose distance
/// certifiably exceeds `alpha`, or the guarantee that every tested distance
/// stays below `beta`.
#[derive(Clone, Debug)]
pub enum TrickOneResult {
    WitnessAbove { n: u64, certified_gap: Rational },
    AllBelow(Rational),
}

/// Result of the second trick: a tail index past which tested distances
/// stay below `beta`, or a stream of certified far indices (available only
/// under a trusted oracle).
#[derive(Clone, Debug)]
pub enum TrickTwoResult {
    EventuallyBelow(u64),
    InfinitelyOften(FarIndexStream),
}

/// Enclosure of `|f(a) - f(b)|` at precision `p`.
fn distance_enclosure(
    f: &RealFn,
    a: &ExactReal,
    b: &ExactReal,
    p: u32,
    meter: &mut BudgetMeter,
) -> Outcome<RatInterval> {
    let ia = match f.eval(a, p, meter) {
        Outcome::Decided(i) => i,
        Outcome::Exhausted(d) => return Outcome::Exhausted(d),
    };
    let ib = match f.eval(b, p, meter) {
        Outcome::Decided(i) => i,
        Outcome::Exhausted(d) => return Outcome::Exhausted(d),
    };
    Outcome::Decided(interval_distance(&ia, &ib))
}

fn generous_meter() -> BudgetMeter {
    Budget::new(u64::MAX / 4, PRECISION_CAP).meter()
}

/// Decides `d_n > gamma` versus `d_n < gamma_hi` with a private budget.
/// `None` when even the precision cap cannot separate the enclosure from
/// both thresholds (a partial evaluator near a bad point).
fn threshold_bit(
    f: &RealFn,
    xn: &ExactReal,
    x: &ExactReal,
    gamma: &Rational,
    gamma_hi: &Rational,
) -> Option<bool> {
    let mut meter = generous_meter();
    let mut p = split_precision(&(gamma_hi - gamma)).max(2);
    loop {
        let d = match distance_enclosure(f, xn, x, p, &mut meter) {
            Outcome::Decided(d) => d,
            Outcome::Exhausted(_) => return None,
        };
        if d.hi() < gamma_hi {
            return Some(false);
        }
        if d.lo() > gamma {
            return Some(true);
        }
        if p >= meter.precision_cap() {
            return None;
        }
        p = p.saturating_mul(2).min(meter.precision_cap());
    }
}

/// `true` only when `d_n >= beta` is certified by interval evaluation.
fn far_bit(f: &RealFn, xn: &ExactReal, x: &ExactReal, beta: &Rational) -> bool {
    let mut meter = generous_meter();
    let mut p = split_precision(beta).max(2);
    loop {
        let d = match distance_enclosure(f, xn, x, p, &mut meter) {
            Outcome::Decided(d) => d,
            Outcome::Exhausted(_) => return false,
        };
        if d.lo() >= beta {
            return true;
        }
        if d.hi() < beta {
            return false;
        }
        if p >= meter.precision_cap() {
            return false;
        }
        p = p.saturating_mul(2).min(meter.precision_cap());
    }
}

fn far_bits(f: &RealFn, xs: &ConvergentSeq, beta: &Rational) -> BinarySeq {
    let f = f.clone();
    let xs = xs.clone();
    let x = xs.limit_point();
    let beta = beta.clone();
    BinarySeq::new(move |n| far_bit(&f, &xs.term(n), &x, &beta))
}

/// Either finds an index `n` with `|f(x_n) - f(x)| > alpha` (certified), or
/// reports that every tested distance stays below `beta`.
///
/// `alpha < beta` is required; `alpha` may be negative, in which case index
/// 1 is a witness outright — a distance is nonnegative — and the function
/// is not evaluated at all.
pub fn trick_one(
    f: &RealFn,
    xs: &ConvergentSeq,
    alpha: &Rational,
    beta: &Rational,
    budget: Budget,
) -> OpResult<TrickOneResult> {
    let mut meter = budget.meter();
    trick_one_metered(f, xs, alpha, beta, &mut meter)
}

fn trick_one_metered(
    f: &RealFn,
    xs: &ConvergentSeq,
    alpha: &Rational,
    beta: &Rational,
    meter: &mut BudgetMeter,
) -> OpResult<TrickOneResult> {
    if alpha >= beta {
        return Err(Error::InvalidParameter(
            "trick thresholds must satisfy alpha < beta".into(),
        ));
    }
    if alpha.is_negative() {
        return Ok(Outcome::Decided(TrickOneResult::WitnessAbove {
            n: 1,
            certified_gap: Rational::zero(),
        }));
    }

    let third = (beta - alpha) * Rational::new(1, 3);
    let gamma = alpha + &third;
    let gamma_hi = &gamma + &third;
    let x = xs.limit_point();

    // The threshold bits: bit n reports a certified `d_n > gamma` (and its
    // absence certifies `d_n < gamma_hi`). A bit that cannot be decided
    // poisons the universal branch.
    let poisoned = Arc::new(AtomicBool::new(false));
    let bits = {
        let f = f.clone();
        let xs = xs.clone();
        let x = x.clone();
        let gamma = gamma.clone();
        let gamma_hi = gamma_hi.clone();
        let poisoned = poisoned.clone();
        BinarySeq::new(move |n| match threshold_bit(&f, &xs.term(n), &x, &gamma, &gamma_hi) {
            Some(b) => b,
            None => {
                poisoned.store(true, Ordering::SeqCst);
                false
            }
        })
    };

    let spliced = crate::streams::splice(&bits, xs);
    let z = spliced.limit_point();

    // One three-way test at the spliced limit decides everything: a value
    // gap above 0 means the splice fired, a value gap below gamma means it
    // cannot have fired on any distance reaching beta.
    let mut p = split_precision(&gamma).max(2);
    let d = loop {
        let d = match distance_enclosure(f, &z, &x, p, meter) {
            Outcome::Decided(d) => d,
            Outcome::Exhausted(diag) => return Ok(Outcome::Exhausted(diag)),
        };
        if d.hi() < &gamma || d.lo() > &Rational::zero() {
            break d;
        }
        if p >= meter.precision_cap() {
            return Ok(meter.exhausted(Some(d)));
        }
        p = p.saturating_mul(2).min(meter.precision_cap());
    };

    if d.hi() < &gamma {
        if poisoned.load(Ordering::SeqCst) {
            return Ok(meter.exhausted(Some(d)));
        }
        return Ok(Outcome::Decided(TrickOneResult::AllBelow(beta.clone())));
    }

    // The splice fired somewhere; scan for the first set bit.
    let mut n = 1u64;
    let n0 = loop {
        if meter.spend(1).is_err() {
            return Ok(meter.exhausted(Some(d)));
        }
        if bits.bit(n) {
            break n;
        }
        n += 1;
    };

    // Re-certify the witness distance under the caller's meter.
    let xn = xs.term(n0);
    let mut p = split_precision(&gamma).max(2);
    loop {
        let dn = match distance_enclosure(f, &xn, &x, p, meter) {
            Outcome::Decided(d) => d,
            Outcome::Exhausted(diag) => return Ok(Outcome::Exhausted(diag)),
        };
        if dn.lo() > alpha {
            return Ok(Outcome::Decided(TrickOneResult::WitnessAbove {
                n: n0,
                certified_gap: dn.lo().clone(),
            }));
        }
        if p >= meter.precision_cap() {
            return Ok(meter.exhausted(Some(dn)));
        }
        p = p.saturating_mul(2).min(meter.precision_cap());
    }
}

/// Lazy, strictly increasing stream of indices with certified distance at
/// least `beta`. Extending the stream re-queries the trusted oracle; each
/// produced index is re-verified by interval evaluation before it is
/// handed out, and a failure to extend or verify panics — by then the
/// trusted hypothesis behind the stream has been refuted.
#[derive(Clone)]
pub struct FarIndexStream {
    state: Arc<FarStreamState>,
}

struct FarStreamState {
    f: RealFn,
    xs: ConvergentSeq,
    beta: Rational,
    oracle: OmniscienceOracle,
    found: Mutex<Vec<u64>>,
}

impl FarIndexStream {
    /// The `i`-th certified far index (one-based).
    pub fn index(&self, i: u64) -> u64 {
        assert!(i >= 1, "far-index stream is one-based");
        let mut found = self.state.found.lock().unwrap();
        while (found.len() as u64) < i {
            let prev = *found.last().expect("stream is seeded before exposure");
            let bits = far_bits(&self.state.f, &self.state.xs.tail(prev), &self.state.beta);
            match self.state.oracle.decide(&bits) {
                OracleAnswer::FirstOneAt(k) => {
                    let abs = prev + k;
                    let verified = far_bit(
                        &self.state.f,
                        &self.state.xs.term(abs),
                        &self.state.xs.limit_point(),
                        &self.state.beta,
                    );
                    assert!(
                        verified,
                        "trusted oracle produced an unverifiable far index {abs}"
                    );
                    found.push(abs);
                }
                other => panic!("oracle declined to extend the far-index stream: {other:?}"),
            }
        }
        found[i as usize - 1]
    }
}

impl std::fmt::Debug for FarIndexStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let found = self.state.found.lock().unwrap();
        write!(f, "FarIndexStream(>= {}, seen {:?})", self.state.beta, &*found)
    }
}

/// Either the distances drop below `beta` from some tail on (tested), or —
/// under a trusted oracle — they stay at least `beta` infinitely often,
/// witnessed by a certified index stream.
///
/// Tails are tried at starting indices 1, 2, 4, 8, …; each attempt runs the
/// first trick with `alpha = (3/4)·beta`. A bounded oracle never certifies
/// the infinitary branch, so with one the procedure either finds a good
/// tail or exhausts.
pub fn trick_two(
    f: &RealFn,
    xs: &ConvergentSeq,
    beta: &Rational,
    oracle: &OmniscienceOracle,
    budget: Budget,
) -> OpResult<TrickTwoResult> {
    if !beta.is_positive() {
        return Err(Error::InvalidParameter("beta must be positive".into()));
    }
    let mut meter = budget.meter();
    let alpha = beta * &Rational::new(3, 4);
    let mut start = 1u64;
    loop {
        if meter.spend(1).is_err() {
            return Ok(meter.exhausted(None));
        }
        let tail = if start == 1 {
            xs.clone()
        } else {
            xs.tail(start - 1)
        };
        match trick_one_metered(f, &tail, &alpha, beta, &mut meter)? {
            Outcome::Decided(TrickOneResult::AllBelow(_)) => {
                return Ok(Outcome::Decided(TrickTwoResult::EventuallyBelow(start)));
            }
            Outcome::Exhausted(d) => return Ok(Outcome::Exhausted(d)),
            Outcome::Decided(TrickOneResult::WitnessAbove { .. }) => {
                if oracle.is_fixture() {
                    let bits = far_bits(f, &tail, beta);
                    if let OracleAnswer::FirstOneAt(k) = oracle.decide(&bits) {
                        let abs = start - 1 + k;
                        if far_bit(f, &xs.term(abs), &xs.limit_point(), beta) {
                            let stream = FarIndexStream {
                                state: Arc::new(FarStreamState {
                                    f: f.clone(),
                                    xs: xs.clone(),
                                    beta: beta.clone(),
                                    oracle: oracle.clone(),
                                    found: Mutex::new(vec![abs]),
                                }),
                            };
                            return Ok(Outcome::Decided(TrickTwoResult::InfinitelyOften(
                                stream,
                            )));
                        }
                    }
                }
            }
        }
        start *= 2;
    }
}
