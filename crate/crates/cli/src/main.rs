//! `moufang`: free Moufang loop words, loop-algebra arithmetic, truncated
//! ideal spans and the verification suites.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error,
//! 3 a closure cap or search budget was hit.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "moufang", version, about = "Free Moufang loops and their loop algebras")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON file with run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: ConfigFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct ConfigFlags {
    /// Coefficient field: Q or GF(p).
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Number of generators for sampling and spans.
    #[arg(long = "gens", global = true)]
    pub n_gens: Option<u32>,
    /// Longest sampled word.
    #[arg(long = "max-word-len", visible_alias = "max-len", global = true)]
    pub max_word_len: Option<usize>,
    /// Truncation length of the ideal span.
    #[arg(long, global = true)]
    pub universe_len: Option<usize>,
    /// Longest argument of a seed generator.
    #[arg(long, global = true)]
    pub seed_len: Option<usize>,
    /// Largest Moufang class enumerated before refusing (exit 3).
    #[arg(long, global = true)]
    pub closure_cap: Option<usize>,
    /// Most classes visited by one reduction search before refusing (exit 3).
    #[arg(long, global = true)]
    pub path_budget: Option<usize>,
    /// Random seed of the sampling suites.
    #[arg(long = "seed", global = true)]
    pub rng_seed: Option<u64>,
    /// Samples per randomized check.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical form of a loop word.
    Nf { expr: String },
    /// Whether two loop words are equal in the free Moufang loop.
    Eq { left: String, right: String },
    /// Canonical product of two loop words.
    Mul { left: String, right: String },
    /// Canonical inverse of a loop word.
    Inv { expr: String },
    /// Associator (a,b,c) = (ab)c - a(bc) of three algebra expressions.
    Assoc { a: String, b: String, c: String },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Build truncated ideal spans and query membership.
    #[command(subcommand)]
    Ideal(IdealCommand),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// One of: alternativity, ip, lemma1, lemma3, lemma4, lemma5, moufang, theorem1.
    pub target: String,
    /// Cayley-table JSON file (lemma1).
    #[arg(long, value_name = "FILE")]
    pub cayley: Option<PathBuf>,
    /// Generators of H, comma separated labels or indices (lemma1).
    #[arg(long, value_delimiter = ',')]
    pub subloop: Vec<String>,
    /// Generators of a second subloop to compare against H (lemma1).
    #[arg(long, value_delimiter = ',')]
    pub second_subloop: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
pub enum IdealCommand {
    /// Generate the truncated span and write it as JSON.
    Span {
        #[arg(long, short, value_name = "FILE")]
        out: PathBuf,
    },
    /// Test an algebra element against a stored span.
    Member {
        #[arg(long, value_name = "FILE")]
        basis: PathBuf,
        #[arg(long)]
        elem: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    ExitCode::from(commands::run(cli, &mut stdout))
}
