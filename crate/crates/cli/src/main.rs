use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "polyreal",
    version,
    about = "Dissipative scattering realizations and von Neumann-type certificates"
)]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 20120601)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SearchArgs {
    /// Phase grid points per torus axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Golden-section refinement sweeps after the grid search.
    #[arg(long, default_value_t = 200)]
    refine: usize,
    /// Certificate tolerance.
    #[arg(long, default_value_t = polyreal::DEFAULT_TOL)]
    tol: f64,
}

impl SearchArgs {
    fn options(&self) -> polyreal::SearchOptions {
        polyreal::SearchOptions::new(self.grid, self.refine)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reproduce the Kaijser–Varopoulos counterexample end to end.
    Counterexample {
        #[arg(long)]
        json: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Random operator triples used for the structural checks.
        #[arg(long, default_value_t = 20)]
        triples: usize,
        /// Self-test: corrupt v_1 and expect a failing certificate.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Decide why a candidate system can not be a dissipative realization of p.
    Refute {
        #[arg(long)]
        system: PathBuf,
        /// Polynomial file or `kv`.
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Tolerance on Taylor coefficients when matching p.
        #[arg(long, default_value_t = 1e-6)]
        realize_tol: f64,
        /// Radius used for the tensor escalation.
        #[arg(long, default_value_t = 0.999)]
        radius: f64,
        #[arg(long)]
        json: bool,
    },
    /// Sampled check that ||sum zeta_k G_k|| <= 1 on the torus.
    CheckDissipative {
        #[arg(long)]
        system: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the transfer function at a point of the open polydisk.
    Transfer {
        #[arg(long)]
        system: PathBuf,
        /// Point as "re,im;re,im;...".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare ||p(T)|| with the torus supremum of |p|.
    VnTest {
        /// Polynomial file or `kv`.
        #[arg(long)]
        poly: String,
        /// Tuple file or `kv`.
        #[arg(long)]
        tuple: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Random torus samples backing the supremum estimate.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

fn emit(report: &Report, json: bool, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let text = report.render(json);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let seed = cli.seed;
    let (report, json, out) = match cli.command {
        Command::Counterexample {
            json,
            out,
            triples,
            inject_fault,
        } => (
            commands::counterexample(seed, triples, inject_fault)?,
            json,
            out,
        ),
        Command::Refute {
            system,
            poly,
            search,
            realize_tol,
            radius,
            json,
        } => (
            commands::refute(&system, &poly, search, realize_tol, radius)?,
            json,
            None,
        ),
        Command::CheckDissipative {
            system,
            search,
            json,
        } => (commands::check_dissipative(&system, search)?, json, None),
        Command::Transfer { system, z, json } => (commands::transfer(&system, &z)?, json, None),
        Command::VnTest {
            poly,
            tuple,
            search,
            samples,
            json,
        } => (
            commands::vn_test(&poly, &tuple, search, samples, seed)?,
            json,
            None,
        ),
    };
    emit(&report, json, out.as_ref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
