use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use skewhom::scalar::parse_rational;
use skewhom::Strategy;
use skewhom_cli::{
    parse_theta_list, render, run_check_algebra, run_cohomology, run_counterexample, run_nullspace, run_verify, CliError,
    Format, SuiteConfig, SuiteReport,
};

#[derive(Parser)]
#[command(name = "skewhom", version, about = "Exact checks for Hom-Lie and skew-Hom-Lie algebras")]
struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite over the builtin families.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "0,1,1/2")]
        theta: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        s: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Record wall-clock time per check (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
        #[arg(long, hide = true)]
        inject_mutation: bool,
    },
    /// Load an algebra file (or builtin name) and classify it.
    CheckAlgebra {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check d^s o d^s = 0 for an algebra and representation.
    Cohomology {
        /// Algebra file or builtin name (r3:A=..., gl2:theta=..., gl4:theta=..., se4:theta=...).
        algebra: String,
        /// Representation file; defaults to the zero representation with phi = id.
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Cochain file; prints d^s eta and d^s d^s eta.
        #[arg(long)]
        cochain: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit the V* membership table as CSV.
    Nullspace {
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for a basis triple breaking Hom-Jacobi under Ad_alpha^2.
    Counterexample {
        /// gl2 or gl4 (block alpha).
        family: String,
        #[arg(long, default_value = "0")]
        theta: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Output {
    Report(SuiteReport, Format),
    Raw(String),
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::default() };
    let theta = |t: &str| parse_rational(t).map_err(|e| CliError::Usage(format!("bad theta {t:?}: {e}")));
    Ok(match cli.command {
        Command::Verify { theta, k, s, seed, samples, format, timing, inject_mutation } => {
            let cfg = SuiteConfig {
                thetas: parse_theta_list(&theta)?,
                ks: k,
                ss: s,
                seed,
                samples,
                strategy,
                timing,
                mutate: inject_mutation,
            };
            Output::Report(run_verify(&cfg)?, format)
        }
        Command::CheckAlgebra { file, format } => Output::Report(run_check_algebra(&file)?, format),
        Command::Cohomology { algebra, rep, cochain, k, s, format } => {
            Output::Report(run_cohomology(&algebra, rep.as_deref(), cochain.as_deref(), k, s, strategy)?, format)
        }
        Command::Nullspace { theta: t, samples, seed } => Output::Raw(run_nullspace(&theta(&t)?, samples, seed, strategy)),
        Command::Counterexample { family, theta: t, format } => {
            Output::Report(run_counterexample(&family, &theta(&t)?, strategy)?, format)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let (text, passed) = match run(cli) {
        Ok(Output::Report(r, f)) => (render(&r, f), r.passed),
        Ok(Output::Raw(text)) => (text, true),
        Err(e) => {
            eprintln!("skewhom: {e}");
            return ExitCode::from(2);
        }
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("skewhom: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
