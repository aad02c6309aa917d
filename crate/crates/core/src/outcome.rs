//! Outcomes, budgets, and the error type shared by every algorithm.
//!
//! Every search in this crate either *decides* with a value that carries its
//! own certificate, or runs out of a caller-declared budget and reports how
//! far it got. There is no third, silent state: a non-terminating branch of
//! the underlying mathematics surfaces here as `Exhausted`.

use std::fmt;

use crate::interval::RatInterval;

/// Result of a budgeted search.
#[derive(Clone, Debug)]
pub enum Outcome<T> {
    /// The search committed to an answer; the payload carries the evidence.
    Decided(T),
    /// The declared budget ran out first.
    Exhausted(Diagnostics),
}

impl<T> Outcome<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Decided(t) => Outcome::Decided(f(t)),
            Outcome::Exhausted(d) => Outcome::Exhausted(d),
        }
    }

    pub fn is_decided(&self) -> bool {
        matches!(self, Outcome::Decided(_))
    }

    pub fn decided(self) -> Option<T> {
        match self {
            Outcome::Decided(t) => Some(t),
            Outcome::Exhausted(_) => None,
        }
    }

    /// Unwraps a decided outcome; panics with the diagnostics otherwise.
    /// Test-side convenience.
    pub fn expect_decided(self, what: &str) -> T {
        match self {
            Outcome::Decided(t) => t,
            Outcome::Exhausted(d) => panic!("{what}: exhausted ({d})"),
        }
    }
}

/// What an exhausted search managed to establish before giving up.
#[derive(Clone, Debug)]
pub struct Diagnostics {
    /// Function/oracle queries performed.
    pub queries: u64,
    /// Deepest approximation precision requested anywhere in the run.
    pub deepest_precision: u32,
    /// Best enclosure of the sought value at the point of exhaustion, when
    /// the algorithm had one (e.g. the current bisection bracket).
    pub last_candidate: Option<RatInterval>,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} queries, deepest precision {}",
            self.queries, self.deepest_precision
        )?;
        if let Some(c) = &self.last_candidate {
            write!(f, ", last candidate {c}")?;
        }
        Ok(())
    }
}

/// Caller-declared resource bounds. Plain data; the mutable counters live in
/// [`BudgetMeter`], which is created per invocation and never shared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of point evaluations / oracle queries.
    pub max_queries: u64,
    /// Maximum approximation precision (in bits) any single query may request.
    pub max_precision: u32,
}

impl Budget {
    pub fn new(max_queries: u64, max_precision: u32) -> Self {
        Budget {
            max_queries,
            max_precision,
        }
    }

    pub fn meter(self) -> BudgetMeter {
        BudgetMeter {
            budget: self,
            queries: 0,
            deepest: 0,
        }
    }
}

impl Default for Budget {
    /// Roomy enough for every fixture in the test suite; callers that want
    /// to see exhaustion pass something tighter.
    fn default() -> Self {
        Budget {
            max_queries: 100_000,
            max_precision: 256,
        }
    }
}

/// Per-invocation consumption tracker for a [`Budget`].
#[derive(Debug)]
pub struct BudgetMeter {
    budget: Budget,
    queries: u64,
    deepest: u32,
}

/// Marker returned when a meter runs dry; converted to [`Diagnostics`] at the
/// point where the algorithm knows its best current candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spent;

impl BudgetMeter {
    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn queries_used(&self) -> u64 {
        self.queries
    }

    pub fn deepest_precision(&self) -> u32 {
        self.deepest
    }

    pub fn queries_left(&self) -> u64 {
        self.budget.max_queries.saturating_sub(self.queries)
    }

    /// Registers `n` queries; fails if the allowance is exceeded.
    pub fn spend(&mut self, n: u64) -> Result<(), Spent> {
        if self.queries.saturating_add(n) > self.budget.max_queries {
            self.queries = self.budget.max_queries;
            Err(Spent)
        } else {
            self.queries += n;
            Ok(())
        }
    }

    /// Registers a precision request; fails if it exceeds the cap.
    pub fn request_precision(&mut self, p: u32) -> Result<(), Spent> {
        if p > self.budget.max_precision {
            Err(Spent)
        } else {
            self.deepest = self.deepest.max(p);
            Ok(())
        }
    }

    pub fn precision_cap(&self) -> u32 {
        self.budget.max_precision
    }

    pub fn diagnostics(&self, last_candidate: Option<RatInterval>) -> Diagnostics {
        Diagnostics {
            queries: self.queries,
            deepest_precision: self.deepest,
            last_candidate,
        }
    }

    /// Shorthand for `Outcome::Exhausted` with current counters.
    pub fn exhausted<T>(&self, last_candidate: Option<RatInterval>) -> Outcome<T> {
        Outcome::Exhausted(self.diagnostics(last_candidate))
    }
}

/// Violations of trusted preconditions and other non-budget failures.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("precondition failed: {0}")]
    Precondition(Precondition),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Which declared precondition was found violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Precondition {
    /// Endpoint values do not straddle zero with certified signs.
    SignChange,
    /// A value that must be certified positive was certified non-positive.
    Positivity,
    /// Both halves of an interval were certified to dip under the midpoint
    /// value, which no quasi-convex function allows.
    QuasiConvexity,
    /// A sampled monotonicity check failed.
    Monotonicity,
    /// Anything else, described in prose.
    Other(String),
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::SignChange => write!(f, "no certified sign change"),
            Precondition::Positivity => write!(f, "value certified non-positive"),
            Precondition::QuasiConvexity => write!(f, "quasi-convexity violated"),
            Precondition::Monotonicity => write!(f, "monotonicity violated"),
            Precondition::Other(s) => write!(f, "{s}"),
        }
    }
}

/// Standard result alias: hard errors outside, budget exhaustion inside.
pub type OpResult<T> = Result<Outcome<T>, Error>;
