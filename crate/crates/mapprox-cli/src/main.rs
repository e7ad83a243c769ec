//! `mapprox` — the command-line surface for the martingale-approximation
//! analysis library: file ingestion, command dispatch, reproducible
//! structured reports.
//!
//! Reports are JSON documents with a stable `report_version` field and an
//! echo of the full effective configuration (including the seed), so any
//! report can be reproduced bit-exactly by re-running its own config.
//! Errors are emitted to stderr as one JSON object with a stable
//! machine-readable `code`.

mod commands;
mod files;
mod report;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mapprox",
    version,
    about = "Martingale-approximation diagnostics for additive functionals of stationary chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutArg {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide existence of a martingale approximation for a finite chain
    /// observable: criteria, plus norm, limiting kernel, residuals.
    ChainDiagnose {
        /// Chain file (TOML: n_states, Q, optional pi).
        #[arg(long)]
        chain: PathBuf,
        /// Observable file (TOML: values).
        #[arg(long)]
        g: PathBuf,
        /// Dyadic grid `dyadic:A:B` for the n- and m-criteria.
        #[arg(long, default_value = "dyadic:1:8")]
        grid: String,
        /// Margin of the slope-fit verdict band.
        #[arg(long, default_value_t = 0.1)]
        margin: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// One-column (causal linear process) verdict from coefficients.
    Linear {
        /// Coefficient file: numeric lines, or TOML with `values` or `generator`.
        #[arg(long, conflicts_with = "generator")]
        coeffs: Option<PathBuf>,
        /// Named generator: `geometric:RHO`, `example5`.
        #[arg(long)]
        generator: Option<String>,
        /// Materialization horizon.
        #[arg(long, default_value_t = 16384)]
        n_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Multi-column (superposition) verdict from a coefficient array.
    Superlinear {
        /// Column file (TOML: columns = [[…], …]).
        #[arg(long, conflicts_with = "generator")]
        coeffs: Option<PathBuf>,
        /// Named generator: `example6`.
        #[arg(long)]
        generator: Option<String>,
        #[arg(long, default_value_t = 131072)]
        n_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Apply the √(I−Q) series to a chain observable or a coefficient
    /// sequence.
    FracPoisson {
        #[arg(long, requires = "g")]
        chain: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long, conflicts_with = "chain")]
        coeffs: Option<PathBuf>,
        #[arg(long, conflicts_with = "chain")]
        generator: Option<String>,
        /// Certified remainder tolerance (chain mode).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Series length cap (chain mode) / truncation order (sequence mode).
        #[arg(long, default_value_t = 200_000)]
        k_max: usize,
        /// Coefficient horizon (sequence mode).
        #[arg(long, default_value_t = 2000)]
        j_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monte Carlo conditional-CLT check for a chain observable or a
    /// coefficient-driven process.
    Simulate {
        #[arg(long, requires = "g")]
        chain: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long, conflicts_with = "chain")]
        coeffs: Option<PathBuf>,
        #[arg(long, conflicts_with = "chain")]
        generator: Option<String>,
        /// Horizon of each path.
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 20000)]
        paths: usize,
        /// Seed (mandatory: reports must be reproducible).
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "kolmogorov")]
        distance: String,
        /// Reference κ²; defaults to the analytic value when one exists.
        #[arg(long)]
        kappa_sq: Option<f64>,
        /// Innovation law: gaussian, rademacher, centered_uniform, two_point:P.
        #[arg(long, default_value = "gaussian")]
        noise: String,
        /// Innovation warmup (sequence mode); default from the certified tail.
        #[arg(long)]
        warmup: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verdict for a sparse Fourier observable of the dyadic shift.
    Bernoulli {
        /// Fourier file (TOML: terms = [{r, re, im}, …]).
        #[arg(long)]
        fourier: PathBuf,
        #[arg(long, default_value_t = 8192)]
        n_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Reproduce the built-in worked examples, with pass/fail per claim.
    Examples {
        /// Which example: 1, 4, 5, 6, ar1, or all.
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 20000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ChainDiagnose { chain, g, grid, margin, out } => {
            commands::chain_diagnose(&chain, &g, &grid, margin).map(|r| (r, out))
        }
        Command::Linear { coeffs, generator, n_max, out } => {
            commands::linear(coeffs.as_deref(), generator.as_deref(), n_max).map(|r| (r, out))
        }
        Command::Superlinear { coeffs, generator, n_max, out } => {
            commands::superlinear(coeffs.as_deref(), generator.as_deref(), n_max)
                .map(|r| (r, out))
        }
        Command::FracPoisson { chain, g, coeffs, generator, tol, k_max, j_max, out } => {
            commands::frac_poisson(
                chain.as_deref(),
                g.as_deref(),
                coeffs.as_deref(),
                generator.as_deref(),
                tol,
                k_max,
                j_max,
            )
            .map(|r| (r, out))
        }
        Command::Simulate {
            chain,
            g,
            coeffs,
            generator,
            n,
            paths,
            seed,
            distance,
            kappa_sq,
            noise,
            warmup,
            out,
        } => commands::simulate(commands::SimulateConfig {
            chain,
            g,
            coeffs,
            generator,
            n,
            paths,
            seed,
            distance,
            kappa_sq,
            noise,
            warmup,
        })
        .map(|r| (r, out)),
        Command::Bernoulli { fourier, n_max, out } => {
            commands::bernoulli(&fourier, n_max).map(|r| (r, out))
        }
        Command::Examples { which, paths, seed, out } => {
            commands::examples(&which, paths, seed).map(|r| (r, out))
        }
    };

    match result {
        Ok((value, out)) => match report::emit(&value, out.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                report::emit_error("Io", &e.to_string());
                ExitCode::FAILURE
            }
        },
        Err(e) => {
            report::emit_error(e.code(), &e.to_string());
            ExitCode::FAILURE
        }
    }
}
