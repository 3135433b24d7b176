//! `oscalg`: classify, close and verify oscillator algebras from the
//! command line. Output is JSON on stdout; diagnostics go to stderr.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use input::SeqArgs;

#[derive(Parser)]
#[command(name = "oscalg", version, about = "Dimension and identities of generalized oscillator algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite or infinite dimension from b_n².
    Classify {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = oscalg::classifier::DEFAULT_WINDOW)]
        window: usize,
        #[arg(long, default_value_t = oscalg::classifier::DEFAULT_JMAX)]
        jmax: usize,
    },
    /// Bracket closure of A, A†, N, I.
    Closure {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        limits: ClosureLimits,
        /// Also run the truncated-matrix engine and compare.
        #[arg(long)]
        oracle: bool,
        /// Include the basis elements in the output.
        #[arg(long)]
        dump: bool,
    },
    /// Check one family of operator identities.
    Verify {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_enum)]
        what: What,
        /// Deformation parameter for `gdeformed`.
        #[arg(long = "G", value_name = "G")]
        g: Option<String>,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
        #[arg(long, value_enum, default_value_t = ReadingArg::Both)]
        reading: ReadingArg,
    },
    /// Orthonormality of a built-in family under its measure.
    Family {
        #[arg(long)]
        family: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Points at which to report Ψ_0..Ψ_nmax.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
    },
    /// Moments from the Jacobi matrix and the moment relation per n.
    Moments {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = ReadingArg::Both)]
        reading: ReadingArg,
    },
    /// Reduce a multi-boson system and classify the reduction.
    Multiboson {
        /// JSON system description.
        #[arg(long)]
        spec: Option<std::path::PathBuf>,
        /// Built-in harmonic example `k0,k1,c`.
        #[arg(long, value_name = "K0,K1,C", conflicts_with = "spec")]
        example_ah: Option<String>,
        /// λ_1 sample for the built-in example (repeatable).
        #[arg(long = "lambda-rest", allow_hyphen_values = true)]
        lambda_rest: Vec<String>,
        /// Largest λ_0 tabulated.
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        closure: bool,
    },
}

#[derive(Args, Clone, Copy)]
struct ClosureLimits {
    #[arg(long, default_value_t = oscalg::shiftalg::DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    #[arg(long, default_value_t = oscalg::shiftalg::DEFAULT_MAX_DIM)]
    max_dim: usize,
    /// Matrix size for the oracle.
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    /// Rows and columns skipped at the low end by the oracle.
    #[arg(long, default_value_t = 2)]
    margin: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Ccr,
    Gdeformed,
    Moments,
    Mj,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    Literal,
    Shifted,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Classify { seq, window, jmax } => commands::classify(&seq, window, jmax),
        Command::Closure {
            seq,
            limits,
            oracle,
            dump,
        } => commands::closure(&seq, limits, oracle, dump),
        Command::Verify {
            seq,
            what,
            g,
            nmax,
            jmax,
            reading,
        } => commands::verify(&seq, what, g.as_deref(), nmax, jmax, reading),
        Command::Family {
            family,
            alpha,
            nmax,
            points,
            x,
        } => commands::family(&family, alpha.as_deref(), nmax, points, &x),
        Command::Moments { seq, nmax, reading } => commands::moments(&seq, nmax, reading),
        Command::Multiboson {
            spec,
            example_ah,
            lambda_rest,
            length,
            closure,
        } => commands::multiboson(spec.as_deref(), example_ah.as_deref(), &lambda_rest, length, closure),
    };
    commands::emit(outcome)
}
