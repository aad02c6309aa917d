//! Certified decision procedures over exact real arithmetic.
//!
//! The crate provides a small exact-real layer (rationals, rational
//! intervals, precision-indexed enclosures) and, on top of it, a family of
//! budgeted dichotomy procedures for black-box functions and sequences:
//! root localization for functions with a sign change, tail/infinitely-often
//! tests for distance sequences, step decomposition and discontinuity
//! enumeration for monotone functions, line and distance decompositions,
//! neat coverings, and infimum analysis for quasi-convex functions.
//!
//! Every procedure returns an [`outcome::Outcome`]: either a decision
//! carrying checkable certificates (rational inequalities at stated
//! tolerances) or an honest `Exhausted` with diagnostics when the search
//! budget ran out. Decisions are never guesses; each certificate is sound
//! regardless of how the budget was spent.

pub mod dichotomies;
pub mod functions;
pub mod interval;
pub mod ishihara;
pub mod ivt;
pub mod monotone;
pub mod outcome;
pub mod quasiconvex;
pub mod rational;
pub mod real;
pub mod streams;

pub use dichotomies::{
    decompose_line, located_distance, neat_dichotomy, validate_neat_covering, CoveringDecision,
    CoveringReport, CoveringSide, CoveringViolation, DistanceDecision, LineDecomposition,
    LocatedSet, NeatCovering, NeatOutcome, SeparationAnswer, SeparationOracle,
};
pub use functions::{
    classify_value, extend_increasing, lift, piecewise_linear, piecewise_linear_real, split_value,
    staircase, step_fn, step_fn_real, unit_domain, Direction, LiftMode, MonotoneFn, RationalFn,
    RealFn, SpanFn,
};
pub use interval::RatInterval;
pub use ishihara::{trick_one, trick_two, FarIndexStream, TrickOneResult, TrickTwoResult};
pub use ivt::{
    approx_root, approx_root_rational, approx_root_with_trace, oracle_root_dichotomy,
    rational_enumeration, ApproachSide, BisectionTrace, DiscontinuityEvidence, OracleRootOutcome,
    RationalRootResult, RootResult,
};
pub use monotone::{
    enumerate_discontinuities, eps_steps, one_sided_limit, span_discontinuities,
    DiscontinuityStream, PartitionPoint, Side, StepFlag, StepPartition, StreamEntry,
};
pub use outcome::{Budget, BudgetMeter, Diagnostics, Error, OpResult, Outcome, Precondition};
pub use quasiconvex::{
    inf_dichotomy, quasiconvex_check, single_dip_family, spike, vanishing_spikes,
    vanishing_spikes_oracle, InfOracle, InfResult, QuasiReport, QuasiViolation,
};
pub use rational::{rat, Rational};
pub use real::{sign_or_small, split, ExactReal, SignOrSmall, SplitResult};
pub use streams::{
    splice, BinarySeq, ConvergentSeq, OmniscienceOracle, OracleAnswer, SeparatedSeqFixture,
};
