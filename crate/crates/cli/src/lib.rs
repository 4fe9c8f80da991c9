//! Batch front-end for `hicat-core`: load category specs, sections and
//! hypermatrices, run validators and numeric suites, and emit reports.
//!
//! [`run`] does all the work and returns the exit code and output instead of
//! printing, so tests can drive the tool in-process.

pub mod catfile;
pub mod coeffs;
mod commands;
pub mod output;
pub mod secfile;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use output::Outcome;

#[derive(Debug, Parser)]
#[command(name = "hicat", version, about = "Finite higher categories, convolution algebras and hypermatrix C*-checks")]
pub struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Number of samples drawn by suites.
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Report format. Defaults to json for validate and suite, and to text
    /// for the data commands.
    #[arg(long, global = true, value_enum)]
    pub report: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExchangeMode {
    Full,
    Nc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleSet {
    /// Zero and the matrix units (for `C`: zero and one).
    Units,
    /// Zero and `±1`, `±i` times the unit.
    Signs,
}

/// Which composition of the base to use: a depth for globular bases, a
/// held-fixed level set for full-depth ones.
#[derive(Debug, Clone, Args)]
pub struct CompArgs {
    #[arg(long, conflicts_with = "subset")]
    pub depth: Option<usize>,
    #[arg(long)]
    pub subset: Option<String>,
    /// Coefficient product serving that composition (an index, or a level
    /// set for hypermatrix coefficients). Chosen automatically by default.
    #[arg(long)]
    pub product: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    #[arg(long)]
    pub base: PathBuf,
    /// `C`, `M<d>` or `H<N1,N2,..>`.
    #[arg(long)]
    pub coeff: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a category spec.
    Validate {
        file: PathBuf,
        /// Also check the full or the non-commutative exchange law.
        #[arg(long, value_enum)]
        exchange: Option<ExchangeMode>,
        /// Check the conjugation section and the folding laws.
        #[arg(long)]
        conjugation: bool,
        /// Require every involution to fix the identities it reverses.
        #[arg(long)]
        hermitian: bool,
    },
    /// Convolve two sections.
    Convolve {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        comp: CompArgs,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Apply an involution of the base to a section.
    Involve {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Involution name; defaults to the first one in the category file.
        #[arg(long)]
        involution: Option<String>,
        a: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Operator norm of a section in the left regular representation.
    Norm {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[command(flatten)]
        comp: CompArgs,
        a: PathBuf,
    },
    /// Hypermatrix operations.
    #[command(subcommand)]
    Hyper(HyperCommand),
    /// Seeded numeric suites.
    #[command(subcommand)]
    Suite(SuiteCommand),
    /// Write the category of embedded cells `a·δ^x` for a finite coefficient set.
    Embed {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, value_enum, default_value = "units")]
        sample: SampleSet,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Rewrite a spec (builder or tables) in table form.
    Export {
        file: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HyperCommand {
    /// `x •_γ y`.
    Mul {
        #[arg(long)]
        gamma: String,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// `x^{⋆_γ}`.
    Invol {
        #[arg(long)]
        gamma: String,
        a: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// `‖x‖_γ`.
    Norm {
        #[arg(long)]
        gamma: String,
        a: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    /// Hypermatrices of these dims, e.g. `2,2`.
    #[arg(long, conflicts_with_all = ["matrix", "base"])]
    pub hyper: Option<String>,
    /// `all` for every level set, or one level set.
    #[arg(long, default_value = "all")]
    pub gamma: String,
    /// `d × d` matrices.
    #[arg(long, conflicts_with = "base")]
    pub matrix: Option<usize>,
    /// Convolution algebra over this base (needs `--coeff`).
    #[arg(long, requires = "coeff")]
    pub base: Option<PathBuf>,
    #[arg(long)]
    pub coeff: Option<String>,
    #[arg(long)]
    pub involution: Option<String>,
    #[command(flatten)]
    pub comp: CompArgs,
}

#[derive(Debug, Subcommand)]
pub enum SuiteCommand {
    /// C*-identity, submultiplicativity and isometric involution.
    Cstar {
        #[command(flatten)]
        target: Target,
    },
    /// Eckmann–Hilton collapse on every diagonal block.
    Collapse { file: PathBuf },
    /// Pairwise ratios between norms.
    Equivalence {
        #[command(flatten)]
        target: Target,
    },
    /// Positivity of `λ(σ^ ∘̂ σ)` and `λ(σ^) = λ(σ)†` on sampled sections.
    Positivity {
        #[command(flatten)]
        target: Target,
    },
}

/// Caps the worker pool at `HICAT_THREADS` when it is set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("HICAT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Parses the arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => commands::dispatch(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: output::usage_error(&rendered), stderr: rendered }
            }
        }
    }
}
