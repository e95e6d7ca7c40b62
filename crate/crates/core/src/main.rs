use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use schnewton::cli::{load_config, run_solve, RunConfig, RunManifest, SelfInteractionChoice};
use schnewton::Error;

#[derive(Parser)]
#[command(
    name = "schnewton",
    version,
    about = "Radial hydrogen solver with Hartree-type electric/gravitational self-interaction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one SCF per requested level and emit report/density files.
    Solve(SolveArgs),
}

#[derive(clap::Args)]
struct SolveArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Target level (repeatable), 1 = ground s-state.
    #[arg(long = "level")]
    levels: Vec<u32>,
    /// Which self-interaction terms to include.
    #[arg(long = "self-interaction", value_enum)]
    self_interaction: Option<SelfInteractionArg>,
    /// Box radius in Bohr (default: per-level).
    #[arg(long = "r-max")]
    r_max: Option<f64>,
    /// Number of interior grid points (default: per-level).
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    /// Potential mixing fraction in (0, 1].
    #[arg(long)]
    beta: Option<f64>,
    /// Energy convergence tolerance in Hartree.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Write the JSON report here (default: stdout).
    #[arg(long = "report-out")]
    report_out: Option<PathBuf>,
    /// Write per-level density CSVs with this stem.
    #[arg(long = "density-out")]
    density_out: Option<PathBuf>,
    /// Test-only multiplier on the gravitational couplings.
    #[arg(long = "amplify-gravity")]
    amplify_gravity: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelfInteractionArg {
    None,
    Electric,
    Gravitational,
    Both,
}

impl From<SelfInteractionArg> for SelfInteractionChoice {
    fn from(arg: SelfInteractionArg) -> Self {
        match arg {
            SelfInteractionArg::None => SelfInteractionChoice::None,
            SelfInteractionArg::Electric => SelfInteractionChoice::Electric,
            SelfInteractionArg::Gravitational => SelfInteractionChoice::Gravitational,
            SelfInteractionArg::Both => SelfInteractionChoice::Both,
        }
    }
}

fn build_manifest(args: &SolveArgs) -> Result<RunManifest, Error> {
    let mut config = match &args.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if !args.levels.is_empty() {
        config.levels = args.levels.clone();
    }
    if let Some(choice) = args.self_interaction {
        config.self_interaction = choice.into();
    }
    if let Some(r) = args.r_max {
        config.r_max = Some(r);
    }
    if let Some(n) = args.grid_points {
        config.grid_points = Some(n);
    }
    if let Some(beta) = args.beta {
        config.mixing_beta = beta;
    }
    if let Some(tol) = args.tolerance {
        config.energy_tolerance = tol;
    }
    if let Some(a) = args.amplify_gravity {
        config.amplify_gravity = a;
    }
    config.validate()?;
    Ok(RunManifest {
        config,
        config_path: args.config.clone(),
        report_out: args.report_out.clone(),
        density_out: args.density_out.clone(),
    })
}

fn solve(args: &SolveArgs) -> Result<ExitCode, Error> {
    let manifest = build_manifest(args)?;
    let outcome = run_solve(&manifest)?;

    for result in &outcome.results {
        let status = if result.converged { "converged" } else { "NOT CONVERGED" };
        println!(
            "level {}: E = {} eV ({}, {} iterations, residual {:.3e} Hartree)",
            result.level,
            schnewton::cli::format_5sig(result.energy_ev),
            status,
            result.iterations,
            result.final_residual
        );
    }
    match &outcome.report_path {
        Some(path) => println!("report written to {}", path.display()),
        None => print!("{}", outcome.report_json),
    }
    for path in &outcome.density_paths {
        println!("density written to {}", path.display());
    }

    Ok(if outcome.all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => solve(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
