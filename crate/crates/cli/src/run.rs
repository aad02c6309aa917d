//! Subcommand drivers: compile the expression, run the procedure under the
//! requested budget, and fold the result into a [`RunReport`] plus exit
//! code.
//!
//! Exit codes: 0 for a decided dichotomy branch (including `Stuck` and
//! `InfZeroEvidence`, which are decisions), 2 for budget exhaustion, 3 for
//! a failed precondition or invalid parameter, 4 for an unparseable
//! expression or flag.

use std::fs;
use std::str::FromStr;
use std::time::Instant;

use serde::Deserialize;

use dichotomy_core::functions::MonotoneFn;
use dichotomy_core::ivt::{oracle_root_dichotomy, rational_enumeration, OracleRootOutcome};
use dichotomy_core::monotone::{StepFlag, StreamEntry};
use dichotomy_core::outcome::Diagnostics;
use dichotomy_core::quasiconvex::{inf_dichotomy, InfOracle, InfResult};
use dichotomy_core::rational::rat;
use dichotomy_core::{
    approx_root_with_trace, eps_steps, neat_dichotomy, trick_one, trick_two, Budget, ConvergentSeq,
    Error, ExactReal, NeatOutcome, OmniscienceOracle, OracleAnswer, Outcome, RatInterval, Rational,
    RootResult, TrickOneResult, TrickTwoResult,
};

use crate::expr::{self, Expr};
use crate::report::RunReport;

pub struct CmdOutput {
    pub report: RunReport,
    pub exit: i32,
}

fn fmt_interval(i: &RatInterval) -> String {
    format!("[{}, {}]", i.lo(), i.hi())
}

fn fmt_real(x: &ExactReal, p: u32) -> String {
    fmt_interval(&x.approximate(p))
}

fn budget_from(flag: Option<u32>) -> Budget {
    let n = flag.unwrap_or(256);
    Budget::new(1_000 + 50 * n as u64, n.max(1))
}

fn invalid_expression(mut report: RunReport, detail: String) -> CmdOutput {
    report.outcome = "invalid-expression".into();
    report.certificates.push(detail);
    CmdOutput { report, exit: 4 }
}

fn parse_function(report: RunReport, text: &str) -> Result<Expr, CmdOutput> {
    match expr::parse(text) {
        Ok(e) => Ok(e),
        Err(err) => Err(invalid_expression(report, err.to_string())),
    }
}

fn parse_rational_flag(report: RunReport, text: &str, flag: &str) -> Result<Rational, CmdOutput> {
    match Rational::from_str(text) {
        Ok(q) => Ok(q),
        Err(err) => Err(invalid_expression(report, format!("--{flag}: {err}"))),
    }
}

fn apply_error(report: &mut RunReport, err: &Error) -> i32 {
    report.outcome = "precondition-failed".into();
    report.certificates.push(err.to_string());
    3
}

fn apply_exhausted(report: &mut RunReport, d: &Diagnostics) -> i32 {
    report.outcome = "exhausted".into();
    report.trace.queries = d.queries;
    report.trace.deepest_precision = d.deepest_precision;
    if let Some(c) = &d.last_candidate {
        report
            .certificates
            .push(format!("best enclosure at exhaustion: {}", fmt_interval(c)));
    }
    2
}

fn finalize(mut output: CmdOutput, started: Instant) -> CmdOutput {
    output.report.timing.millis = started.elapsed().as_millis() as u64;
    output
}

pub fn run_eval(function: &str, at: &str, precision: u32, budget: Option<u32>) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("eval");
    report
        .input("fn", function)
        .input("at", at)
        .input("precision", precision);
    let out = (|| {
        let e = parse_function(report.clone(), function)?;
        let at = parse_rational_flag(report.clone(), at, "at")?;
        if at < rat(0, 1) || at > rat(1, 1) {
            let exit = apply_error(
                &mut report,
                &Error::InvalidParameter("evaluation point outside [0, 1]".into()),
            );
            return Ok(CmdOutput { report, exit });
        }
        let f = expr::to_real_fn(&e);
        let mut meter = budget_from(budget).meter();
        let exit = match f.eval_at_rational(&at, precision, &mut meter) {
            Outcome::Decided(enclosure) => {
                report.outcome = "decided".into();
                report.branch = Some("Enclosure".into());
                report.value = Some(fmt_interval(&enclosure));
                report
                    .certificates
                    .push(format!("width {} <= 2^-{}", enclosure.width(), precision));
                let oracle_value = expr::interpret(&e, &at);
                report.certificates.push(format!(
                    "interpreter value {} {} the enclosure",
                    oracle_value,
                    if enclosure.contains(&oracle_value) {
                        "inside"
                    } else {
                        "OUTSIDE"
                    }
                ));
                0
            }
            Outcome::Exhausted(d) => apply_exhausted(&mut report, &d),
        };
        report.trace.queries = meter.queries_used();
        report.trace.deepest_precision = meter.deepest_precision();
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}

#[derive(Deserialize)]
struct OracleFile {
    answer: OracleAnswerSpec,
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case")]
enum OracleAnswerSpec {
    AllZero,
    FirstOneAt(u64),
    UnknownAfter(u64),
}

fn parse_oracle(report: RunReport, spec: &str) -> Result<OmniscienceOracle, CmdOutput> {
    if let Some(n) = spec.strip_prefix("bounded:") {
        match n.parse::<u64>() {
            Ok(limit) => return Ok(OmniscienceOracle::bounded_search(limit)),
            Err(err) => {
                return Err(invalid_expression(report, format!("--oracle bounded: {err}")))
            }
        }
    }
    if let Some(path) = spec.strip_prefix("fixture:") {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(err) => return Err(invalid_expression(report, format!("--oracle {path}: {err}"))),
        };
        let parsed: OracleFile = match serde_json::from_str(&text) {
            Ok(p) => p,
            Err(err) => return Err(invalid_expression(report, format!("--oracle {path}: {err}"))),
        };
        let answer = match parsed.answer {
            OracleAnswerSpec::AllZero => OracleAnswer::AllZero,
            OracleAnswerSpec::FirstOneAt(k) => OracleAnswer::FirstOneAt(k),
            OracleAnswerSpec::UnknownAfter(scanned) => OracleAnswer::Unknown { scanned },
        };
        return Ok(OmniscienceOracle::fixture(answer));
    }
    Err(invalid_expression(
        report,
        "--oracle: expected bounded:<N> or fixture:<file>".into(),
    ))
}

pub fn run_root(function: &str, eps: &str, budget: Option<u32>, oracle: Option<&str>) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("root");
    report.input("fn", function).input("eps", eps);
    let out = (|| {
        let e = parse_function(report.clone(), function)?;
        let eps = parse_rational_flag(report.clone(), eps, "eps")?;
        let f = expr::to_real_fn(&e);
        let b = budget_from(budget);

        if let Some(spec) = oracle {
            report.input("oracle", spec);
            let oracle = parse_oracle(report.clone(), spec)?;
            let exit = match oracle_root_dichotomy(&f, &eps, &oracle, rational_enumeration, b) {
                Outcome::Decided(OracleRootOutcome::RootBelowEps(z)) => {
                    report.outcome = "decided".into();
                    report.branch = Some("RootBelowEps".into());
                    report.value = Some(fmt_real(&z, eps.precision_above() + 8));
                    report
                        .certificates
                        .push(format!("|f(z)| < {eps} at the reported point"));
                    0
                }
                Outcome::Decided(OracleRootOutcome::AllRationalsAtLeast(bound)) => {
                    report.outcome = "decided".into();
                    report.branch = Some("AllRationalsAtLeast".into());
                    report.value = Some(bound.to_string());
                    report.certificates.push(
                        "trusted oracle: every tested rational kept |f| above the bound".into(),
                    );
                    0
                }
                Outcome::Exhausted(d) => apply_exhausted(&mut report, &d),
            };
            return Ok(CmdOutput { report, exit });
        }

        let (result, trace) = approx_root_with_trace(&f, &eps, b);
        let exit = match result {
            Err(err) => apply_error(&mut report, &err),
            Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
            Ok(Outcome::Decided(RootResult::Root {
                location,
                value_bound,
            })) => {
                report.outcome = "decided".into();
                report.branch = Some("Root".into());
                report.value = Some(fmt_real(&location, eps.precision_above() + 8));
                report
                    .certificates
                    .push(format!("|f(root)| < {value_bound} certified"));
                let mut check = Budget::new(1 << 20, 256).meter();
                match f.eval(&location, eps.precision_above() + 4, &mut check) {
                    Outcome::Decided(v) => {
                        let ok = v.hi() < &eps && v.lo() > &-&eps;
                        report.certificates.push(format!(
                            "re-verified f(root) in {} ({} eps)",
                            fmt_interval(&v),
                            if ok { "within" } else { "NOT within" }
                        ));
                    }
                    Outcome::Exhausted(_) => report
                        .certificates
                        .push("re-verification ran out of budget".into()),
                }
                0
            }
            Ok(Outcome::Decided(RootResult::Stuck(ev))) => {
                report.outcome = "decided".into();
                report.branch = Some("Stuck".into());
                report.value = Some(fmt_real(&ev.location, 40));
                report.certificates.push(format!(
                    "one-sided jump: |f(location) - f(approach)| >= {} ({:?})",
                    ev.gap_certificate, ev.side
                ));
                0
            }
        };
        report.trace.steps = trace.steps.len() as u64;
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}

pub fn run_steps(function: &str, eps: &str, budget: Option<u32>) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("steps");
    report.input("fn", function).input("eps", eps);
    let out = (|| {
        let e = parse_function(report.clone(), function)?;
        let eps = parse_rational_flag(report.clone(), eps, "eps")?;
        let f = MonotoneFn::increasing(expr::to_rational_fn(&e));
        let exit = match eps_steps(&f, &eps, budget_from(budget)) {
            Err(err) => apply_error(&mut report, &err),
            Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
            Ok(Outcome::Decided(partition)) => {
                report.outcome = "decided".into();
                report.branch = Some("StepPartition".into());
                let candidates = partition
                    .points
                    .iter()
                    .filter(|p| matches!(p.flag, StepFlag::StepCandidate { .. }))
                    .count();
                report.value = Some(format!(
                    "{} partition points, {} step candidates",
                    partition.points.len(),
                    candidates
                ));
                for p in &partition.points {
                    match &p.flag {
                        StepFlag::NearLevel => report
                            .certificates
                            .push(format!("near-level at {}", fmt_interval(&p.enclosure))),
                        StepFlag::StepCandidate { gap_lower } => report.certificates.push(format!(
                            "step candidate at {}, jump >= {}",
                            fmt_interval(&p.enclosure),
                            gap_lower
                        )),
                    }
                }
                report.trace.steps = partition.points.len() as u64;
                0
            }
        };
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}

pub fn run_discont(function: &str, count: u64, budget: Option<u32>) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("discont");
    report.input("fn", function).input("count", count);
    let out = (|| {
        let e = parse_function(report.clone(), function)?;
        let f = MonotoneFn::increasing(expr::to_rational_fn(&e));
        let exit = match dichotomy_core::enumerate_discontinuities(&f, count, budget_from(budget)) {
            Err(err) => apply_error(&mut report, &err),
            Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
            Ok(Outcome::Decided(stream)) => {
                report.outcome = "decided".into();
                report.branch = Some("DiscontinuityStream".into());
                let points = stream.entries.iter().filter(|e| e.is_point()).count();
                report.value = Some(format!("{points} certified jump points"));
                for entry in &stream.entries {
                    match entry {
                        StreamEntry::Point {
                            location,
                            gap_lower,
                        } => report.certificates.push(format!(
                            "jump in {}, size >= {}",
                            fmt_real(location, 30),
                            gap_lower
                        )),
                        StreamEntry::Star => report.certificates.push("*".into()),
                    }
                }
                report.trace.steps = stream.entries.len() as u64;
                0
            }
        };
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}

pub fn run_inf(function: &str, budget: Option<u32>) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("inf");
    report.input("fn", function).input("quasi_convex", "pledged");
    let out = (|| {
        let e = parse_function(report.clone(), function)?;
        if expr::has_steps(&e) {
            let exit = apply_error(
                &mut report,
                &Error::InvalidParameter(
                    "the infimum oracle needs a Lipschitz expression (no step/stair)".into(),
                ),
            );
            return Ok(CmdOutput { report, exit });
        }
        let domain = dichotomy_core::unit_domain();
        let l = expr::lipschitz_bound(&e, &domain)
            .expect("step-free expressions have a Lipschitz bound")
            .max(rat(1, 64));
        // The grid oracle refuses more than 65536 cells; clamp the precision
        // allowance so every whole-domain query stays within that.
        let mut pmax = 1u32;
        while pmax < 64 && &l * &Rational::pow2(pmax as i64 + 2) <= Rational::from_int(65_536) {
            pmax += 1;
        }
        let requested = budget_from(budget);
        let b = Budget::new(requested.max_queries, requested.max_precision.min(pmax));
        report.input("precision_allowance", b.max_precision);
        let oracle = InfOracle::lipschitz(expr::to_rational_fn(&e), l.clone());
        let exit = match inf_dichotomy(&expr::to_real_fn(&e), &oracle, true, b) {
            Err(err) => apply_error(&mut report, &err),
            Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
            Ok(Outcome::Decided(InfResult::InfPositive { lower, witness_mid })) => {
                report.outcome = "decided".into();
                report.branch = Some("InfPositive".into());
                report.value = Some(lower.to_string());
                report.certificates.push(format!(
                    "infimum >= {lower} > 0; bound anchored at {}",
                    fmt_real(&witness_mid, 20)
                ));
                let g = oracle.inf_approx(&domain, 8);
                report.certificates.push(format!(
                    "oracle whole-domain infimum {} within 2^-8, bound below it",
                    g
                ));
                0
            }
            Ok(Outcome::Decided(InfResult::InfZeroEvidence { z, approach })) => {
                report.outcome = "decided".into();
                report.branch = Some("InfZeroEvidence".into());
                report.value = Some(fmt_real(&z, 32));
                for n in 1..=3u64 {
                    report.certificates.push(format!(
                        "approach term {n} at {}",
                        fmt_real(&approach.term(n), 16)
                    ));
                }
                0
            }
        };
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}

pub fn run_ishihara(
    function: &str,
    eps: &str,
    at: &str,
    budget: Option<u32>,
    oracle: Option<&str>,
) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("ishihara");
    report.input("fn", function).input("eps", eps).input("at", at);
    let out = (|| {
        let e = parse_function(report.clone(), function)?;
        let eps = parse_rational_flag(report.clone(), eps, "eps")?;
        let at = parse_rational_flag(report.clone(), at, "at")?;
        if at < rat(0, 1) || at > rat(1, 1) || !eps.is_positive() {
            let exit = apply_error(
                &mut report,
                &Error::InvalidParameter("need 0 <= at <= 1 and eps > 0".into()),
            );
            return Ok(CmdOutput { report, exit });
        }
        let f = expr::to_real_fn(&e);
        let limit = at.clone();
        let xs = ConvergentSeq::new(
            move |n| {
                let spread = Rational::pow2(-(n as i64 + 2)).min(&rat(1, 1) - &limit);
                ExactReal::from_rational(&limit + &spread)
            },
            ExactReal::from_rational(at.clone()),
            |p| p as u64,
        );
        let b = budget_from(budget);
        let alpha = &eps * &rat(1, 2);

        let exit = if let Some(spec) = oracle {
            report.input("oracle", spec);
            let oracle = parse_oracle(report.clone(), spec)?;
            match trick_two(&f, &xs, &eps, &oracle, b) {
                Err(err) => apply_error(&mut report, &err),
                Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
                Ok(Outcome::Decided(TrickTwoResult::EventuallyBelow(n))) => {
                    report.outcome = "decided".into();
                    report.branch = Some("EventuallyBelow".into());
                    report.value = Some(n.to_string());
                    report
                        .certificates
                        .push(format!("tested distances stay below {eps} past index {n}"));
                    0
                }
                Ok(Outcome::Decided(TrickTwoResult::InfinitelyOften(_stream))) => {
                    report.outcome = "decided".into();
                    report.branch = Some("InfinitelyOften".into());
                    report.certificates.push(
                        "trusted oracle: a lazy stream of certified far indices is available"
                            .into(),
                    );
                    0
                }
            }
        } else {
            match trick_one(&f, &xs, &alpha, &eps, b) {
                Err(err) => apply_error(&mut report, &err),
                Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
                Ok(Outcome::Decided(TrickOneResult::WitnessAbove { n, certified_gap })) => {
                    report.outcome = "decided".into();
                    report.branch = Some("WitnessAbove".into());
                    report.value = Some(format!("index {n}"));
                    report.certificates.push(format!(
                        "|f(x_{n}) - f(limit)| >= {certified_gap} > {alpha}"
                    ));
                    0
                }
                Ok(Outcome::Decided(TrickOneResult::AllBelow(bound))) => {
                    report.outcome = "decided".into();
                    report.branch = Some("AllBelow".into());
                    report.value = Some(bound.to_string());
                    report
                        .certificates
                        .push(format!("every tested distance certified below {bound}"));
                    0
                }
            }
        };
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}

pub fn run_neat(points: &str, eps: &str, budget: Option<u32>) -> CmdOutput {
    let started = Instant::now();
    let mut report = RunReport::new("neat");
    report.input("points", points).input("eps", eps);
    let out = (|| {
        let eps = parse_rational_flag(report.clone(), eps, "eps")?;
        let enumeration: Box<dyn Fn(u64) -> ExactReal> = match points {
            "dense" => Box::new(|n| ExactReal::from_rational(rational_enumeration(n))),
            "separated" => Box::new(|n| ExactReal::from_rational(Rational::from_int(n as i64))),
            other => {
                return Err(invalid_expression(
                    report.clone(),
                    format!("--points: expected dense or separated, found {other}"),
                ))
            }
        };
        let exit = match neat_dichotomy(enumeration, &eps, budget_from(budget)) {
            Err(err) => apply_error(&mut report, &err),
            Ok(Outcome::Exhausted(d)) => apply_exhausted(&mut report, &d),
            Ok(Outcome::Decided(NeatOutcome::FiniteApprox { points })) => {
                report.outcome = "decided".into();
                report.branch = Some("FiniteApprox".into());
                report.value = Some(format!("{} centers", points.len()));
                for c in &points {
                    report
                        .certificates
                        .push(format!("center at {}", fmt_real(c, 20)));
                }
                0
            }
            Ok(Outcome::Decided(NeatOutcome::SeparatedSeq { prefix })) => {
                report.outcome = "decided".into();
                report.branch = Some("SeparatedSeq".into());
                report.value = Some(format!("{} pairwise separated points", prefix.len()));
                for c in &prefix {
                    report
                        .certificates
                        .push(format!("separated point at {}", fmt_real(c, 20)));
                }
                0
            }
        };
        Ok(CmdOutput { report, exit })
    })();
    finalize(out.unwrap_or_else(|e| e), started)
}
