//! `selfsim` — compute with self-similar groups and post-critical
//! portraits from the command line.
//!
//! Exit codes: 0 success or affirmative verdict, 1 well-formed negative
//! verdict, 2 input error, 3 resource limit. Reports go to stdout as
//! JSON (CSV for dimension sequences), diagnostics to stderr.

mod commands;
mod output;
mod portrait;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use selfsim_core::{Error, Limits};

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Self-similar groups, tree actions and orbifold portraits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for independent levels (1 = sequential).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Seed for element sampling in `check`; all algebra is
    /// deterministic regardless.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format; sequences default to CSV, everything else to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Maximum machine states during products and evaluations.
    #[arg(long, global = true)]
    max_states: Option<usize>,

    /// Maximum explicit tree level.
    #[arg(long, global = true)]
    max_level: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a .grp file and check the automaton and kneading conditions.
    Validate { path: PathBuf },
    /// Build the wreath recursion of a quadratic portrait and validate it.
    Img {
        path: PathBuf,
        /// Letter placement overrides, e.g. "0=1,-1=0".
        #[arg(long)]
        placement: Option<String>,
        /// Depth of the generator-product transitivity check.
        #[arg(long, default_value_t = 8)]
        check_depth: u32,
        /// Write the .grp text here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Orbifold signature, exceptional sets and the retraction verdict.
    Orbifold { path: PathBuf },
    /// Exact data of the level-n quotient of a .grp group.
    Quotient {
        path: PathBuf,
        #[arg(long)]
        level: u32,
        /// Report the exact group order.
        #[arg(long)]
        order: bool,
        /// Check transitivity on every level up to n.
        #[arg(long)]
        transitive: bool,
        /// Report abelianization order and generator orders.
        #[arg(long)]
        abelianization: bool,
        /// Report the rigid stabilizer of this vertex.
        #[arg(long)]
        rist: Option<String>,
        /// Emit the dimension-estimate sequence eta_1..eta_n.
        #[arg(long)]
        hdim: bool,
    },
    /// Dimension-estimate sequence (alias of `quotient --hdim`).
    Hdim {
        path: PathBuf,
        #[arg(long)]
        level: u32,
    },
    /// Evaluate a word in the generators.
    Word {
        path: PathBuf,
        /// The word, e.g. "a*b^-2".
        #[arg(long)]
        expr: String,
        /// Decide triviality through machine minimization.
        #[arg(long)]
        is_identity: bool,
        /// Bounded order computation up to this bound.
        #[arg(long)]
        order_bound: Option<u64>,
        /// Level for the order lower bound (defaults to 8).
        #[arg(long, default_value_t = 8)]
        order_level: u32,
    },
    /// Run a lemma harness inside a finite quotient.
    Check {
        path: PathBuf,
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long)]
        level: u32,
        /// Prime for the torsion witness.
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Explicit element (a word); sampled from --seed when absent.
        #[arg(long)]
        element: Option<String>,
        /// Number of sampled instances for the closure check.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Graphviz DOT export of the generator automaton or cycle diagram.
    Dot {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = DotKind::Automaton)]
        what: DotKind,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Lemma {
    /// Normal closures contain rigid derived subgroups at moved vertices.
    RistClosure,
    /// The diagonal retract construction for a torsion element.
    TorsionWitness,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotKind {
    Automaton,
    Cycles,
}

pub(crate) struct Ctx {
    pub limits: Limits,
    pub threads: usize,
    pub seed: u64,
    pub format: Option<Format>,
}

impl Ctx {
    /// Effective format for scalar reports (JSON unless overridden).
    pub fn format_or_json(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    /// Effective format for sequence reports (CSV unless overridden).
    pub fn format_or_csv(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Some(ms) = cli.max_states {
        limits.max_states = ms;
    }
    if let Some(ml) = cli.max_level {
        limits.max_level = ml;
    }
    let ctx = Ctx {
        limits,
        threads: cli.threads.max(1),
        seed: cli.seed,
        format: cli.format,
    };
    let result = match cli.command {
        Command::Validate { path } => commands::validate::run(&ctx, &path),
        Command::Img {
            path,
            placement,
            check_depth,
            out,
        } => commands::img::run(&ctx, &path, placement.as_deref(), check_depth, out.as_deref()),
        Command::Orbifold { path } => commands::orbifold::run(&ctx, &path),
        Command::Quotient {
            path,
            level,
            order,
            transitive,
            abelianization,
            rist,
            hdim,
        } => commands::quotient::run(
            &ctx,
            &path,
            commands::quotient::Request {
                level,
                order,
                transitive,
                abelianization,
                rist,
                hdim,
            },
        ),
        Command::Hdim { path, level } => commands::quotient::run(
            &ctx,
            &path,
            commands::quotient::Request {
                level,
                order: false,
                transitive: false,
                abelianization: false,
                rist: None,
                hdim: true,
            },
        ),
        Command::Word {
            path,
            expr,
            is_identity,
            order_bound,
            order_level,
        } => commands::word::run(&ctx, &path, &expr, is_identity, order_bound, order_level),
        Command::Check {
            path,
            lemma,
            level,
            prime,
            element,
            count,
        } => commands::check::run(&ctx, &path, lemma, level, prime, element.as_deref(), count),
        Command::Dot { path, what } => commands::dot::run(&ctx, &path, what),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

pub(crate) fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::LevelTooLarge { .. } | Error::ResourceLimit(_) => 3,
        _ => 2,
    }
}
