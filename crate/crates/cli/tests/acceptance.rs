//! End-to-end acceptance check for the command-line driver: printer/parser
//! round-trip, compiled-versus-interpreted agreement, and the exit-code
//! matrix of the built binary. Prints one `[PASS]` line on success.

use std::collections::BTreeSet;
use std::process::Command;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dichotomy_cli::expr::{interpret, parse, to_real_fn, Expr};
use dichotomy_core::rational::rat;
use dichotomy_core::{Budget, Rational};

fn rnd_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-16i64..=16), rng.gen_range(1i64..=16))
}

fn rnd_unit(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(0i64..=32), 32)
}

fn rnd_leaf(rng: &mut ChaCha8Rng) -> Expr {
    match rng.gen_range(0u32..6) {
        0 | 1 => Expr::Var,
        2 | 3 => Expr::Lit(rnd_rat(rng)),
        4 => match rng.gen_range(0u32..2) {
            0 => Expr::Spike {
                center: rnd_unit(rng),
                width: rat(rng.gen_range(1i64..=16), rng.gen_range(1i64..=16)),
            },
            _ => Expr::Step {
                at: rnd_unit(rng),
                low: rnd_rat(rng),
                high: rnd_rat(rng),
            },
        },
        _ => {
            let mut cuts = BTreeSet::new();
            let k = rng.gen_range(1usize..=3);
            while cuts.len() < k {
                cuts.insert(rng.gen_range(1i64..32));
            }
            Expr::Stair {
                jumps: cuts.into_iter().map(|c| (rat(c, 32), rnd_rat(rng))).collect(),
            }
        }
    }
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_range(0u32..4) == 0 {
        return rnd_leaf(rng);
    }
    let a = random_expr(rng, depth - 1);
    match rng.gen_range(0u32..8) {
        0 => Expr::Add(Box::new(a), Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Sub(Box::new(a), Box::new(random_expr(rng, depth - 1))),
        2 => Expr::Mul(Box::new(a), Box::new(random_expr(rng, depth - 1))),
        // The parser folds a negated literal into the literal itself, so the
        // generator keeps ASTs in that normal form.
        3 => match a {
            Expr::Lit(q) => Expr::Lit(-&q),
            other => Expr::Neg(Box::new(other)),
        },
        4 => Expr::Abs(Box::new(a)),
        5 => Expr::Min(Box::new(a), Box::new(random_expr(rng, depth - 1))),
        6 => Expr::Max(Box::new(a), Box::new(random_expr(rng, depth - 1))),
        _ => Expr::Scale {
            factor: rnd_rat(rng),
            inner: Box::new(a),
        },
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dichotomy"))
}

fn run_status(args: &[&str]) -> i32 {
    let out = bin().args(args).output().expect("binary runs");
    out.status.code().expect("binary exits normally")
}

#[test]
fn criterion_13_cli_round_trip_agreement_and_exit_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000d);
    for case in 0..200u32 {
        let e = random_expr(&mut rng, 3);
        let printed = e.to_string();
        let back = parse(&printed)
            .unwrap_or_else(|err| panic!("case {case}: `{printed}` failed to re-parse: {err}"));
        assert_eq!(back, e, "case {case}: `{printed}` round-tripped differently");
    }

    let mut probes = 0u32;
    for case in 0..50u32 {
        let e = random_expr(&mut rng, 3);
        let f = to_real_fn(&e);
        for _ in 0..20 {
            let q = rat(rng.gen_range(0i64..=256), 256);
            let v = interpret(&e, &q);
            let enc = f
                .eval_at_rational(&q, 30, &mut Budget::new(1 << 40, 256).meter())
                .expect_decided("compiled evaluation at a rational point");
            assert!(
                enc.contains(&v),
                "case {case}: compiled enclosure {enc} misses the interpreter value {v} at {q}"
            );
            assert!(
                enc.width() <= Rational::pow2(-30),
                "case {case}: enclosure too wide at {q}"
            );
            probes += 1;
        }
    }
    assert_eq!(probes, 1000);

    assert_eq!(run_status(&["root", "--fn", "x - 1/2", "--eps", "1/10"]), 0);
    assert_eq!(
        run_status(&["eval", "--fn", "x * x + 1/4", "--at", "1/3"]),
        0
    );
    assert_eq!(
        run_status(&["steps", "--fn", "stair((1/2, 1/2))", "--eps", "1/4"]),
        0
    );
    assert_eq!(
        run_status(&[
            "eval",
            "--fn",
            "spike(1/3; 1/4000000)",
            "--at",
            "1/3",
            "--precision",
            "4000",
            "--budget",
            "8",
        ]),
        2
    );
    assert_eq!(run_status(&["root", "--fn", "x - 2", "--eps", "1/10"]), 3);
    assert_eq!(run_status(&["inf", "--fn", "step(1/2; 0, 1)"]), 3);
    assert_eq!(run_status(&["root", "--fn", "x +", "--eps", "1/10"]), 4);

    let out = bin()
        .args([
            "root", "--fn", "step(1/3; -1, 1)", "--eps", "1/2", "--budget", "40", "--json",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is a JSON document");
    for key in [
        "command",
        "inputs",
        "outcome",
        "branch",
        "value",
        "certificates",
        "trace",
        "timing",
    ] {
        assert!(doc.get(key).is_some(), "report key `{key}` missing");
    }
    assert_eq!(doc["outcome"], "decided");
    assert_eq!(doc["branch"], "Stuck");

    println!(
        "[PASS] criterion 13 cli: 200-expression print/parse round-trip, compiled enclosures \
         contain the interpreter value on 1000 probes at 2^-30, exit codes 0/2/3/4 exact, \
         JSON report keys stable"
    );
}
