use std::path::PathBuf;

use clap::Args;
use growthrates_core::problems::{embed_lp_solution, gen_random_lp};

use super::{Verdict, B_FILE, C_FILE, E_FILE, META_FILE, SOLUTION_FILE};
use crate::config::seed_override;
use crate::error::{CliError, Result};
use crate::io;

/// Random Gaussian LP `min cᵀu, Eu = b, u ≥ 0` with a planted solution.
#[derive(Debug, Clone, Args)]
pub struct GenLpArgs {
    /// Number of equality constraints
    #[arg(long)]
    pub m: usize,
    /// Number of variables
    #[arg(long = "N", value_name = "N")]
    pub big_n: usize,
    /// Fraction of nonzero entries in E
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    /// RNG seed; GROWTHRATES_SEED takes precedence
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

pub fn run(args: &GenLpArgs) -> Result<Verdict> {
    let seed = seed_override()?
        .or(args.seed)
        .ok_or_else(|| CliError::usage("gen-lp needs --seed or GROWTHRATES_SEED"))?;
    let lp = gen_random_lp(args.m, args.big_n, args.density, seed)?;
    io::write_matrix(&args.out.join(E_FILE), &lp.e)?;
    io::write_vector(&args.out.join(B_FILE), lp.b.as_slice())?;
    io::write_vector(&args.out.join(C_FILE), lp.c.as_slice())?;
    let x = embed_lp_solution(lp.u_star.as_slice(), lp.v_star.as_slice(), lp.s_star.as_slice());
    io::write_vector(&args.out.join(SOLUTION_FILE), x.as_slice())?;
    let meta = io::format_key_values([
        ("seed", seed.to_string()),
        ("m", args.m.to_string()),
        ("N", args.big_n.to_string()),
        ("density", args.density.to_string()),
    ]);
    io::write_text(&args.out.join(META_FILE), &meta)?;
    println!("wrote LP with m={} N={} seed={seed} to {}", args.m, args.big_n, args.out.display());
    Ok(Verdict::Pass)
}
