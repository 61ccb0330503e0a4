//! `wcsp`: command-line front end.
//!
//! Machine-readable results go to stdout as JSON, diagnostics to stderr.
//! Exit codes: 0 success, 2 input error, 3 refusal (budget or
//! precondition), 4 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{CliError, Context};

#[derive(Parser)]
#[command(name = "wcsp", version, about = "Exact partition functions for weighted Boolean #CSP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-function flags, witnesses and the family verdict for a catalog.
    Classify {
        /// Instance or catalog JSON; its whole function catalog is classified.
        file: Option<PathBuf>,
        /// Add a built-in function (`delta0`, `neq`, `xor3`, `unary:2`, ...).
        #[arg(long = "builtin", value_name = "NAME")]
        builtins: Vec<String>,
    },
    /// Partition function, choosing the evaluator from the classifier verdict.
    Eval {
        file: PathBuf,
        /// Always use brute-force enumeration.
        #[arg(long)]
        force_oracle: bool,
    },
    /// Executable simulations and reductions.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Graph homomorphisms, the Ising model and code weight enumerators.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Seeded property suites against the brute-force oracle.
    Verify {
        /// oracle-equivalence, reduction-soundness, cut-identity or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per check.
        #[arg(long, default_value_t = 40)]
        cases: usize,
        /// Corrupt the fast side of one named check.
        #[arg(long, value_name = "CHECK")]
        inject_fault: Option<String>,
    },
    /// Reproducible random instance.
    Gen {
        /// product-type, pure-affine, mixed or graph-hom.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Variables (vertices for graph-hom).
        #[arg(short, long, default_value_t = 10)]
        n: usize,
        #[arg(short, long, default_value_t = 12)]
        constraints: usize,
    },
}

#[derive(Args)]
struct VerifyFlag {
    /// Evaluate both sides with the brute-force oracle and compare.
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Replace every `g` constraint by `f` with fresh variables off `--keep`.
    Project {
        file: PathBuf,
        #[arg(long)]
        g: String,
        /// Catalog entry or built-in name.
        #[arg(long)]
        f: String,
        /// 0-based positions of `f`, increasing, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
        #[command(flatten)]
        verify: VerifyFlag,
    },
    /// Replace every `g = f^{i=α}` constraint by `f` plus a pinned fresh variable.
    Pin {
        file: PathBuf,
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        position: usize,
        #[arg(long)]
        value: usize,
        #[command(flatten)]
        verify: VerifyFlag,
    },
    /// Remove `delta0`/`delta1` constraints with two or four evaluator calls.
    PinVars {
        file: PathBuf,
        #[arg(long)]
        force_oracle: bool,
        #[command(flatten)]
        verify: VerifyFlag,
    },
    /// Remove a unary `U_c` by interpolation from `U_λ` evaluations.
    Interpolate {
        file: PathBuf,
        /// Catalog name of `U_c`.
        #[arg(long)]
        unary: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        force_oracle: bool,
        #[command(flatten)]
        verify: VerifyFlag,
    },
    /// The `⊕_k` gadget over `xor3` and `delta0`.
    ParityChain {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        verify: VerifyFlag,
    },
    /// Remove the all-distinct constraint by Möbius inversion, or with
    /// `--symmetric` remove `delta_c` pins from a permutation-invariant family.
    MobiusPin {
        file: PathBuf,
        /// Index of the all-distinct constraint when several match.
        #[arg(long)]
        constraint: Option<usize>,
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        verify: VerifyFlag,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Ising partition function with `H = [[1, λ], [λ, 1]]`.
    Ising {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: String,
    },
    /// `Z_H(G)` and the Bulatov–Grohe verdict for `H`.
    Evalh {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Weight enumerator of a generator matrix or of a graph's incidence code.
    Wenum {
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        lambda: String,
    },
    /// Check `W_A(λ) = Z_H(G) / 2` for the incidence code of `G`.
    CutCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: String,
    },
}

fn run(cli: Cli, ctx: &Context) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { file, builtins } => commands::classify(ctx, file.as_deref(), &builtins),
        Command::Eval { file, force_oracle } => commands::eval(ctx, &file, force_oracle),
        Command::Reduce(r) => match r {
            ReduceCommand::Project { file, g, f, keep, verify } => {
                commands::reduce_project(ctx, &file, &g, &f, &keep, verify.verify)
            }
            ReduceCommand::Pin {
                file,
                g,
                f,
                position,
                value,
                verify,
            } => commands::reduce_pin(ctx, &file, &g, &f, position, value, verify.verify),
            ReduceCommand::PinVars {
                file,
                force_oracle,
                verify,
            } => commands::reduce_pin_vars(ctx, &file, force_oracle, verify.verify),
            ReduceCommand::Interpolate {
                file,
                unary,
                lambda,
                force_oracle,
                verify,
            } => commands::reduce_interpolate(ctx, &file, &unary, &lambda, force_oracle, verify.verify),
            ReduceCommand::ParityChain { k, verify } => commands::reduce_parity_chain(ctx, k, verify.verify),
            ReduceCommand::MobiusPin {
                file,
                constraint,
                symmetric,
                verify,
            } => commands::reduce_mobius(ctx, &file, constraint, symmetric, verify.verify),
        },
        Command::Model(m) => match m {
            ModelCommand::Ising { graph, lambda } => commands::model_ising(ctx, &graph, &lambda),
            ModelCommand::Evalh { graph, matrix } => commands::model_evalh(ctx, graph.as_deref(), &matrix),
            ModelCommand::Wenum { matrix, graph, lambda } => {
                commands::model_wenum(ctx, matrix.as_deref(), graph.as_deref(), &lambda)
            }
            ModelCommand::CutCheck { graph, lambda } => commands::model_cut_check(ctx, &graph, &lambda),
        },
        Command::Verify {
            suite,
            seed,
            cases,
            inject_fault,
        } => commands::verify(&suite, seed, cases, inject_fault),
        Command::Gen {
            profile,
            seed,
            n,
            constraints,
        } => commands::gen(&profile, seed, n, constraints),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = Context::from_env().and_then(|ctx| run(cli, &ctx));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wcsp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
