//! `dichotomy` — run certified dichotomy procedures on exact-real function
//! expressions and print a machine-readable report.

use clap::{Parser, Subcommand};

use dichotomy_cli::run::{self, CmdOutput};

#[derive(Parser)]
#[command(
    name = "dichotomy",
    version,
    about = "Certified dichotomy procedures over exact real arithmetic on [0, 1]"
)]
struct Cli {
    /// Emit the run report as a single JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Recorded in the report; every procedure here is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression at a rational point to a target precision.
    Eval {
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        /// Evaluation point in [0, 1].
        #[arg(long, default_value = "1/2")]
        at: String,
        /// Target enclosure width exponent: width <= 2^-precision.
        #[arg(long, default_value_t = 32)]
        precision: u32,
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Localize a root, or produce jump evidence when the bracket collapses.
    Root {
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        #[arg(long, default_value = "1/1024")]
        eps: String,
        #[arg(long)]
        budget: Option<u32>,
        /// bounded:<N> or fixture:<file>; switches to the oracle-assisted
        /// dichotomy over the rational enumeration.
        #[arg(long)]
        oracle: Option<String>,
    },
    /// Partition [0, 1] so that jumps larger than eps land on flagged points
    /// (the expression is pledged increasing).
    Steps {
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Enumerate certified jump discontinuities of an increasing expression.
    Discont {
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        /// Number of stream entries to emit.
        #[arg(long, default_value_t = 12)]
        count: u64,
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Decide whether the infimum of a positive quasi-convex expression is
    /// bounded away from zero.
    Inf {
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Distance dichotomy along a sequence converging to --at: a witness
    /// index with a certified gap, or all tested distances below the bound.
    Ishihara {
        #[arg(long = "fn", value_name = "EXPR")]
        function: String,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long, default_value = "1/2")]
        at: String,
        #[arg(long)]
        budget: Option<u32>,
        /// bounded:<N> or fixture:<file>; switches to the tail/infinitely-
        /// often dichotomy.
        #[arg(long)]
        oracle: Option<String>,
    },
    /// Greedy eps-packing over a point enumeration: finite approximation or
    /// a growing separated prefix.
    Neat {
        /// Point source: dense (rationals of [0, 1]) or separated (integers).
        #[arg(long, default_value = "dense")]
        points: String,
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long)]
        budget: Option<u32>,
    },
}

fn main() {
    // clap's default failure exit (2) is reserved here for exhausted budgets,
    // so usage errors get the invalid-input code instead.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 4 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let mut output: CmdOutput = match &cli.command {
        Cmd::Eval {
            function,
            at,
            precision,
            budget,
        } => run::run_eval(function, at, *precision, *budget),
        Cmd::Root {
            function,
            eps,
            budget,
            oracle,
        } => run::run_root(function, eps, *budget, oracle.as_deref()),
        Cmd::Steps {
            function,
            eps,
            budget,
        } => run::run_steps(function, eps, *budget),
        Cmd::Discont {
            function,
            count,
            budget,
        } => run::run_discont(function, *count, *budget),
        Cmd::Inf { function, budget } => run::run_inf(function, *budget),
        Cmd::Ishihara {
            function,
            eps,
            at,
            budget,
            oracle,
        } => run::run_ishihara(function, eps, at, *budget, oracle.as_deref()),
        Cmd::Neat {
            points,
            eps,
            budget,
        } => run::run_neat(points, eps, *budget),
    };
    if let Some(seed) = cli.seed {
        output.report.input("seed", seed);
    }
    if cli.json {
        println!("{}", output.report.to_json());
    } else {
        print!("{}", output.report.render_human());
    }
    std::process::exit(output.exit);
}
