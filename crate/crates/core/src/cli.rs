//! Config loading, run driving, and report/density emission.
//!
//! Runs are fully deterministic: no clock, no randomness, no environment
//! dependence enters any numeric path, so identical manifests byte-reproduce
//! every output file. Reports are JSON with sorted keys and round-trip-exact
//! number rendering; densities are CSV with one row per grid node.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::constants::{InteractionConfig, PhysicalConstants};
use crate::error::{Error, Result};
use crate::grid::integrate;
use crate::scf::{scf_solve, ScfResult, SolverConfig};
use crate::spectroscopy::{build_report, SpectroscopyReport};

/// Which self-interaction terms a run enables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelfInteractionChoice {
    None,
    Electric,
    Gravitational,
    Both,
}

impl SelfInteractionChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelfInteractionChoice::None => "none",
            SelfInteractionChoice::Electric => "electric",
            SelfInteractionChoice::Gravitational => "gravitational",
            SelfInteractionChoice::Both => "both",
        }
    }
}

fn default_levels() -> Vec<u32> {
    vec![1]
}
fn default_self_interaction() -> SelfInteractionChoice {
    SelfInteractionChoice::Both
}
fn default_true() -> bool {
    true
}
fn default_z() -> f64 {
    1.0
}
fn default_mixing_beta() -> f64 {
    0.5
}
fn default_energy_tolerance() -> f64 {
    1e-9
}
fn default_max_iterations() -> usize {
    200
}
fn default_amplify_gravity() -> f64 {
    1.0
}

/// One run request: levels to solve plus solver settings. Unknown keys are
/// rejected. Absent fields take the documented defaults; `r_max` and
/// `grid_points` default per level.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_levels")]
    pub levels: Vec<u32>,
    #[serde(default = "default_self_interaction")]
    pub self_interaction: SelfInteractionChoice,
    #[serde(default = "default_true")]
    pub gravitational_external: bool,
    #[serde(default = "default_z")]
    pub z: f64,
    #[serde(default)]
    pub r_max: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default = "default_mixing_beta")]
    pub mixing_beta: f64,
    #[serde(default = "default_energy_tolerance")]
    pub energy_tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_amplify_gravity")]
    pub amplify_gravity: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            levels: default_levels(),
            self_interaction: default_self_interaction(),
            gravitational_external: true,
            z: default_z(),
            r_max: None,
            grid_points: None,
            mixing_beta: default_mixing_beta(),
            energy_tolerance: default_energy_tolerance(),
            max_iterations: default_max_iterations(),
            amplify_gravity: default_amplify_gravity(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::Config("levels must not be empty".into()));
        }
        if let Some(&bad) = self.levels.iter().find(|&&l| l < 1) {
            return Err(Error::Config(format!("levels entries must be >= 1 (got {bad})")));
        }
        if !self.z.is_finite() || self.z <= 0.0 {
            return Err(Error::Config(format!("z must be positive and finite (got {})", self.z)));
        }
        if let Some(r) = self.r_max {
            if !r.is_finite() || r <= 0.0 {
                return Err(Error::Config(format!("r_max must be positive and finite (got {r})")));
            }
        }
        if let Some(n) = self.grid_points {
            if n < crate::grid::MIN_GRID_POINTS {
                return Err(Error::Config(format!(
                    "grid_points must be at least {} (got {n})",
                    crate::grid::MIN_GRID_POINTS
                )));
            }
        }
        if !self.mixing_beta.is_finite() || self.mixing_beta <= 0.0 || self.mixing_beta > 1.0 {
            return Err(Error::Config(format!(
                "mixing_beta must lie in (0, 1] (got {})",
                self.mixing_beta
            )));
        }
        if !self.energy_tolerance.is_finite() || self.energy_tolerance <= 0.0 {
            return Err(Error::Config(format!(
                "energy_tolerance must be positive (got {})",
                self.energy_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !self.amplify_gravity.is_finite() || self.amplify_gravity < 0.0 {
            return Err(Error::Config(format!(
                "amplify_gravity must be nonnegative and finite (got {})",
                self.amplify_gravity
            )));
        }
        Ok(())
    }

    pub fn interaction_config(&self) -> InteractionConfig {
        let mut cfg = match self.self_interaction {
            SelfInteractionChoice::None => InteractionConfig::none(),
            SelfInteractionChoice::Electric => InteractionConfig::electric_only(),
            SelfInteractionChoice::Gravitational => InteractionConfig::gravitational_only(),
            SelfInteractionChoice::Both => InteractionConfig::both(),
        };
        cfg.gravitational_external = self.gravitational_external;
        cfg
    }

    /// Resolve the solver configuration for one level, applying per-level grid
    /// defaults where the config leaves them open.
    pub fn solver_config(&self, level: u32) -> SolverConfig {
        let mut cfg = SolverConfig::for_level(level, self.interaction_config());
        if let Some(r) = self.r_max {
            cfg.grid.r_max = r;
        }
        if let Some(n) = self.grid_points {
            cfg.grid.n = n;
        }
        cfg.z = self.z;
        cfg.energy_tolerance = self.energy_tolerance;
        cfg.max_iterations = self.max_iterations;
        cfg.mixing_beta = self.mixing_beta;
        cfg.gravity_amplification = self.amplify_gravity;
        cfg
    }
}

/// Load and validate a JSON run config. An empty (or whitespace-only) file
/// means "all defaults".
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
    let trimmed = text.trim();
    let config: RunConfig = if trimmed.is_empty() {
        RunConfig::default()
    } else {
        serde_json::from_str(trimmed)
            .map_err(|e| Error::Config(format!("malformed config {}: {e}", path.display())))?
    };
    config.validate()?;
    Ok(config)
}

/// A fully resolved run: configuration plus output destinations. Runs are
/// seedless; re-running the same manifest byte-reproduces all outputs.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config: RunConfig,
    pub config_path: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
    pub density_out: Option<PathBuf>,
}

/// Everything a run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub results: Vec<ScfResult>,
    pub spectroscopy: SpectroscopyReport,
    pub report_json: String,
    pub report_path: Option<PathBuf>,
    pub density_paths: Vec<PathBuf>,
    pub all_converged: bool,
}

/// Execute one SCF per requested level (levels run concurrently), assemble
/// the spectroscopy report, and write the requested artifacts. Non-converged
/// levels are reported, not errors; the caller maps them to the exit status.
pub fn run_solve(manifest: &RunManifest) -> Result<RunOutcome> {
    manifest.config.validate()?;
    let constants = PhysicalConstants::codata2018();
    let configs: Vec<SolverConfig> = manifest
        .config
        .levels
        .iter()
        .map(|&level| manifest.config.solver_config(level))
        .collect();

    let solve_outputs: Vec<Result<ScfResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|cfg| {
                let constants = &constants;
                scope.spawn(move || scf_solve(cfg, constants))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let mut results = Vec::with_capacity(solve_outputs.len());
    for r in solve_outputs {
        results.push(r?);
    }

    let spectroscopy = build_report(&results, &constants)?;
    let report_json = render_report_json(&results, &spectroscopy, &manifest.config, &constants);

    let report_path = match &manifest.report_out {
        Some(path) => {
            write_text(path, &report_json)?;
            Some(path.clone())
        }
        None => None,
    };

    let mut density_paths = Vec::new();
    if let Some(stem) = &manifest.density_out {
        for result in results.iter().filter(|r| r.converged) {
            let path = density_path(stem, result.level);
            emit_density_csv(result, &path)?;
            density_paths.push(path);
        }
    }

    let all_converged = results.iter().all(|r| r.converged);
    Ok(RunOutcome {
        results,
        spectroscopy,
        report_json,
        report_path,
        density_paths,
        all_converged,
    })
}

/// Per-level density file name: `stem_levelN.csv` (the `.csv` suffix of the
/// stem, if present, is preserved at the end).
pub fn density_path(stem: &Path, level: u32) -> PathBuf {
    let s = stem.to_string_lossy();
    let base = s.strip_suffix(".csv").unwrap_or(&s);
    PathBuf::from(format!("{base}_level{level}.csv"))
}

/// Write the radial probability density as CSV: header `r_bohr,F_per_bohr`,
/// one row per grid node, full double precision, LF line endings.
pub fn emit_density_csv(result: &ScfResult, path: &Path) -> Result<()> {
    if !result.converged {
        return Err(Error::Contract(format!(
            "density output requires a converged result (level {})",
            result.level
        )));
    }
    let mut out = String::with_capacity(result.grid.n * 32);
    out.push_str("r_bohr,F_per_bohr\n");
    for (r, f) in result.grid.nodes.iter().zip(&result.density.values) {
        out.push_str(&format!("{r},{f:e}\n"));
    }
    // Emitted samples integrate to 1 by the normalization convention.
    let total = integrate(&result.density, &result.grid);
    debug_assert!((total - 1.0).abs() < 1e-8);
    write_text(path, &out)
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(content.as_bytes())?;
    Ok(())
}

/// Render `x` with exactly five significant digits, round-half-even, keeping
/// trailing zeros (e.g. −1.04009 → "-1.0401", −1.04 → "-1.0400").
pub fn format_5sig(x: f64) -> String {
    if x == 0.0 {
        return "0.0000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // {:.4e} is correctly rounded (ties to even) from the exact binary value;
    // the rest is pure string manipulation, so no double rounding occurs.
    let sci = format!("{x:.4e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 5);

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp >= 4 {
        out.push_str(&digits);
        for _ in 0..(exp - 4) {
            out.push('0');
        }
    } else if exp >= 0 {
        let split = (exp + 1) as usize;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    } else {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    }
    out
}

fn f64_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn config_value(config: &RunConfig) -> Value {
    json!({
        "levels": config.levels,
        "self_interaction": config.self_interaction.as_str(),
        "gravitational_external": config.gravitational_external,
        "z": f64_value(config.z),
        "r_max": config.r_max.map_or(Value::Null, f64_value),
        "grid_points": config.grid_points,
        "mixing_beta": f64_value(config.mixing_beta),
        "energy_tolerance": f64_value(config.energy_tolerance),
        "max_iterations": config.max_iterations,
        "amplify_gravity": f64_value(config.amplify_gravity),
    })
}

/// Deterministic JSON report: sorted keys, shortest round-trip-exact numbers,
/// five-significant-figure renderings alongside the full-precision values,
/// and a provenance block echoing the configuration and constants.
pub fn render_report_json(
    results: &[ScfResult],
    spectroscopy: &SpectroscopyReport,
    config: &RunConfig,
    constants: &PhysicalConstants,
) -> String {
    let levels: Vec<Value> = results
        .iter()
        .map(|r| {
            let experimental = spectroscopy
                .levels
                .iter()
                .find(|l| l.level == r.level)
                .and_then(|l| l.experimental_ev);
            json!({
                "level": r.level,
                "energy_hartree": f64_value(r.energy_hartree),
                "energy_ev": f64_value(r.energy_ev),
                "energy_ev_5sig": format_5sig(r.energy_ev),
                "experimental_ev": experimental.map_or(Value::Null, f64_value),
                "iterations": r.iterations,
                "converged": r.converged,
                "residual_hartree": f64_value(r.final_residual),
                "node_count": r.node_count,
            })
        })
        .collect();

    let transitions: Vec<Value> = spectroscopy
        .transitions
        .iter()
        .map(|t| {
            json!({
                "from": t.from_level,
                "to": t.to_level,
                "gap_ev": f64_value(t.gap_ev),
                "gap_ev_5sig": format_5sig(t.gap_ev),
                "experimental_ev": t.experimental_ev.map_or(Value::Null, f64_value),
            })
        })
        .collect();

    let bohr: Vec<Value> = spectroscopy
        .bohr_deviations
        .iter()
        .map(|d| {
            json!({
                "level": d.level,
                "deviation": f64_value(d.deviation),
            })
        })
        .collect();

    let mut root = Map::new();
    root.insert("levels".into(), Value::Array(levels));
    root.insert("transitions".into(), Value::Array(transitions));
    root.insert("bohr_deviations".into(), Value::Array(bohr));
    root.insert("gravity_ratio".into(), f64_value(spectroscopy.gravity_ratio));
    root.insert(
        "provenance".into(),
        json!({
            "code_version": env!("CARGO_PKG_VERSION"),
            "config": config_value(config),
            "constants": {
                "G": f64_value(constants.g),
                "hbar": f64_value(constants.hbar),
                "m_e": f64_value(constants.m_e),
                "m_p": f64_value(constants.m_p),
                "ke_e2": f64_value(constants.ke_e2),
                "mu": f64_value(constants.mu),
                "bohr_radius_m": f64_value(constants.bohr_radius),
                "hartree_J": f64_value(constants.hartree),
                "ev_per_hartree": f64_value(constants.ev_per_hartree),
            },
        }),
    );

    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes");
    text.push('\n');
    text
}

/// Write the report produced by `render_report_json`.
pub fn emit_report_json(
    results: &[ScfResult],
    spectroscopy: &SpectroscopyReport,
    config: &RunConfig,
    constants: &PhysicalConstants,
    path: &Path,
) -> Result<()> {
    let text = render_report_json(results, spectroscopy, config, constants);
    write_text(path, &text)
}
