use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lgspec::report::{
    emit_report, is_input_error, run_asymptotics, run_gamma, run_gram, run_hypergeom, run_info, run_spectrum,
    run_verify, Format, RunOptions, DEFAULT_X_GRID,
};

/// Verification engine for Landau-Ginzburg pairs of general type.
///
/// Inputs are weight systems `d;w1,...,wN` or named families
/// `A:n`, `DT:n`, `E6`, `E7`, `E8`, `Fermat:d,N`.
#[derive(Parser)]
#[command(name = "lgspec", version)]
struct Cli {
    /// Emit the JSON report instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,
    /// Relative tolerance for numeric verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads for grid evaluations.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Narrow and Mir sectors, index, central charge, tau(t) and T.
    Info { input: String },
    /// Hypergeometric index data and the identities it satisfies.
    Hypergeom { input: String },
    /// Gram matrix, its inverse, partition counts and Stokes coefficients.
    Gram { input: String },
    /// Chern character, Gamma class and asymptotic class of C(l).
    Gamma {
        input: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        ell: i64,
    },
    /// Eigenvalues of the quantum multiplication and the conjecture verdict.
    Spectrum { family: String },
    /// Barnes combinations against their exponential asymptotics.
    Asymptotics {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        x_grid: Option<Vec<u32>>,
    },
    /// Every applicable check; exit status 0 iff all pass.
    Verify { input: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.precision < 32 {
        eprintln!("error: precision must be at least 32 bits");
        return ExitCode::from(2);
    }
    let opts = RunOptions { precision: cli.precision, tol: cli.tol };
    let result = match &cli.command {
        Command::Info { input } => run_info(input, &opts),
        Command::Hypergeom { input } => run_hypergeom(input, &opts),
        Command::Gram { input } => run_gram(input, &opts),
        Command::Gamma { input, ell } => run_gamma(input, *ell, &opts),
        Command::Spectrum { family } => run_spectrum(family, &opts),
        Command::Asymptotics { input, ell, x_grid } => {
            let grid = x_grid.clone().unwrap_or_else(|| DEFAULT_X_GRID.to_vec());
            run_asymptotics(input, *ell, &grid, &opts)
        }
        Command::Verify { input } => run_verify(input, &opts),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if is_input_error(&e) { 2 } else { 1 });
        }
    };
    let format = if cli.json { Format::Json } else { Format::Text };
    let text = emit_report(&report, format);
    print!("{text}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
