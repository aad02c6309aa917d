//! Library surface behind the `dichotomy` binary: the expression language,
//! the report shape, and the subcommand runners.

pub mod expr;
pub mod report;
pub mod run;
