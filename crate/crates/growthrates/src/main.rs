use std::process::ExitCode;

use clap::{Parser, Subcommand};
use growthrates::commands::{bench, certify, gen_lp, rate_check, solve, Verdict};

/// Growth conditions and first-order rates for `min g(Ax) + cᵀx`.
///
/// Exit status: 0 pass, 1 bound or certificate violation, 2 usage or parse error.
#[derive(Debug, Parser)]
#[command(name = "growthrates", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random LP with a known solution
    GenLp(gen_lp::GenLpArgs),
    /// Run a solver and write its trace
    Solve(solve::SolveArgs),
    /// Sample a growth condition and emit a certificate
    Certify(certify::CertifyArgs),
    /// Check a trace against a theoretical rate
    RateCheck(rate_check::RateCheckArgs),
    /// Compare algorithms on one LP
    Bench(bench::BenchArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::GenLp(a) => gen_lp::run(a),
        Command::Solve(a) => solve::run(a),
        Command::Certify(a) => certify::run(a),
        Command::RateCheck(a) => rate_check::run(a),
        Command::Bench(a) => bench::run(a),
    };
    match outcome {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
