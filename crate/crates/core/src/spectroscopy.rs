//! Transition energies, Bohr-relationship diagnostics, and the perturbative
//! gravitational shift estimates.
//!
//! Gravitational effects on the spectrum are ~1 part in 10³⁹ — far below
//! double-precision eigensolver resolution — so they are derived analytically
//! here: the (k_e·e² + G·m_p·m_e)² coupling square is expanded with the cross
//! term kept symbolically separated, making the relative shift representable
//! even though the absolute shifted energy is not.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::scf::ScfResult;

/// Experimental s-level energies (eV), stored verbatim and never recomputed.
pub const EXPERIMENTAL_LEVELS_EV: [(u32, f64); 3] =
    [(1, -13.598), (2, -3.3996), (3, -1.5109)];

/// Experimental transition gaps (eV) for (initial, final) pairs, verbatim.
pub const EXPERIMENTAL_TRANSITIONS_EV: [((u32, u32), f64); 3] =
    [((3, 2), -1.8887), ((2, 1), -10.199), ((3, 1), -12.087)];

/// One level entry of a spectroscopy report.
#[derive(Debug, Clone)]
pub struct LevelSummary {
    pub level: u32,
    pub energy_ev: f64,
    pub experimental_ev: Option<f64>,
}

/// One electronic transition n_i → n_f: gap = E(n_f) − E(n_i), negative for
/// downward transitions (energy released).
#[derive(Debug, Clone)]
pub struct TransitionGap {
    pub from_level: u32,
    pub to_level: u32,
    pub gap_ev: f64,
    pub experimental_ev: Option<f64>,
}

/// Deviation of E_n·n²/E_1 from 1 for one excited level.
#[derive(Debug, Clone)]
pub struct BohrDeviation {
    pub level: u32,
    pub deviation: f64,
}

/// Everything derived from a set of converged levels.
#[derive(Debug, Clone)]
pub struct SpectroscopyReport {
    pub levels: Vec<LevelSummary>,
    pub transitions: Vec<TransitionGap>,
    pub bohr_deviations: Vec<BohrDeviation>,
    /// 2·G·m_p·m_e/(k_e·e²), the perturbative relative shift of the
    /// ionization energy.
    pub gravity_ratio: f64,
}

fn find_level(results: &[ScfResult], level: u32) -> Result<&ScfResult> {
    let r = results
        .iter()
        .find(|r| r.level == level)
        .ok_or_else(|| Error::Contract(format!("level {level} missing from results")))?;
    if !r.converged {
        return Err(Error::Contract(format!("level {level} did not converge")));
    }
    Ok(r)
}

fn experimental_level(level: u32) -> Option<f64> {
    EXPERIMENTAL_LEVELS_EV
        .iter()
        .find(|(l, _)| *l == level)
        .map(|&(_, e)| e)
}

fn experimental_transition(from: u32, to: u32) -> Option<f64> {
    EXPERIMENTAL_TRANSITIONS_EV
        .iter()
        .find(|((i, f), _)| *i == from && *f == to)
        .map(|&(_, e)| e)
}

/// Gaps E(n_f) − E(n_i) for the requested (n_i, n_f) pairs, in eV. Each gap is
/// the plain difference of the stored level energies, with no separate
/// rounding path.
pub fn transition_energies(
    results: &[ScfResult],
    pairs: &[(u32, u32)],
) -> Result<Vec<TransitionGap>> {
    pairs
        .iter()
        .map(|&(from, to)| {
            let e_from = find_level(results, from)?.energy_ev;
            let e_to = find_level(results, to)?.energy_ev;
            Ok(TransitionGap {
                from_level: from,
                to_level: to,
                gap_ev: e_to - e_from,
                experimental_ev: experimental_transition(from, to),
            })
        })
        .collect()
}

/// |E_n·n²/E_1 − 1| for every level n ≥ 2 present. Empty when fewer than two
/// levels (or no ground level) are available.
pub fn bohr_ratio_check(results: &[ScfResult]) -> Vec<BohrDeviation> {
    let Some(ground) = results.iter().find(|r| r.level == 1) else {
        return Vec::new();
    };
    let mut deviations: Vec<BohrDeviation> = results
        .iter()
        .filter(|r| r.level >= 2)
        .map(|r| BohrDeviation {
            level: r.level,
            deviation: (r.energy_ev * f64::from(r.level).powi(2) / ground.energy_ev - 1.0).abs(),
        })
        .collect();
    deviations.sort_by_key(|d| d.level);
    deviations
}

/// Closed-form hydrogenic level energy with the gravitational correction kept
/// as a separated relative offset.
#[derive(Debug, Clone, Copy)]
pub struct IonizationEstimate {
    /// −(Z²μ/2ħ²n²)(k_e·e²)² expressed in eV. Adding the gravitational term
    /// does not change this double-precision value.
    pub energy_ev: f64,
    /// Relative offset ((k_e·e² + G·m_p·m_e)² / (k_e·e²)²) − 1 = 2g + g² with
    /// g = G·m_p·m_e/(k_e·e²); zero when gravity is excluded.
    pub gravity_relative_shift: f64,
}

/// Hydrogenic level-n energy −(Z²μ/2ħ²n²)·(k_e·e² [+ G·m_p·m_e])², evaluated
/// so the gravitational correction survives as a relative quantity.
pub fn ionization_energy_estimate(
    constants: &PhysicalConstants,
    z: f64,
    n: u32,
    include_gravity: bool,
) -> IonizationEstimate {
    let n2 = f64::from(n) * f64::from(n);
    // Internal units: k_e·e² = 1 Hartree·Bohr, so the base value is −Z²/(2n²).
    let energy_hartree = -z * z / (2.0 * n2);
    let gravity_relative_shift = if include_gravity {
        let g = constants.gravitational_coupling_ratio();
        2.0 * g + g * g
    } else {
        0.0
    };
    IonizationEstimate {
        energy_ev: constants.hartree_to_ev(energy_hartree),
        gravity_relative_shift,
    }
}

/// Perturbative relative change of the ionization energy when the
/// gravitational electron-proton coupling is added to the Coulomb one:
/// 2·G·m_p·m_e/(k_e·e²) ≈ 8.8e-40.
pub fn perturbative_gravity_shift(constants: &PhysicalConstants) -> f64 {
    2.0 * constants.g * constants.m_p * constants.m_e / constants.ke_e2
}

/// Assemble the full report for a set of solved levels: level summaries with
/// experimental references, all downward transitions among the levels, Bohr
/// deviations, and the perturbative gravity ratio.
pub fn build_report(
    results: &[ScfResult],
    constants: &PhysicalConstants,
) -> Result<SpectroscopyReport> {
    let mut levels: Vec<LevelSummary> = results
        .iter()
        .map(|r| LevelSummary {
            level: r.level,
            energy_ev: r.energy_ev,
            experimental_ev: experimental_level(r.level),
        })
        .collect();
    levels.sort_by_key(|l| l.level);

    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for a in &levels {
        for b in &levels {
            if a.level > b.level {
                pairs.push((a.level, b.level));
            }
        }
    }
    // Match the conventional table order: nearest transitions first, higher
    // initial level first among equals.
    pairs.sort_by_key(|&(from, to)| (from - to, std::cmp::Reverse(from)));
    let transitions = if results.iter().all(|r| r.converged) {
        transition_energies(results, &pairs)?
    } else {
        Vec::new()
    };

    Ok(SpectroscopyReport {
        levels,
        transitions,
        bohr_deviations: bohr_ratio_check(results),
        gravity_ratio: perturbative_gravity_shift(constants),
    })
}
