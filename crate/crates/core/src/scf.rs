//! Self-consistent field iteration: test function → self-interaction
//! potential → eigenproblem → selected eigenstate → repeat until the target
//! eigenenergy is stable.
//!
//! Each target level runs its own independent iteration, with the
//! self-interaction potential built from that level's eigenfunction. The
//! potential is linearly damped (W ← (1−β)·W_prev + β·W_new after the first
//! round) because the undamped map oscillates: the self-repulsion screens the
//! nucleus so strongly that the binding energy drops by an order of
//! magnitude, and the iterates alternate between compact and diffuse states.
//! The state of interest is tracked by node count (k-th s-state has k−1
//! nodes), with maximal overlap against the previous iterate as a fallback if
//! the node count is ambiguous.

use crate::constants::{
    coupling_alpha_amplified, external_coupling_amplified, validate_z, InteractionConfig,
    PhysicalConstants,
};
use crate::eigensolver::{
    assemble_hamiltonian, lowest_eigenpairs, residual_norm, EigenPair, WaveFunction,
};
use crate::error::{Error, Result};
use crate::grid::{make_grid, GridFunction, RadialGrid};
use crate::potentials::{
    self_interaction_potential, total_potential, PotentialKind, PotentialOnGrid,
};

/// Extra states solved beyond the target level, so the node-count selection
/// always sees the target even while the spectrum reorders early on.
pub const SOLVE_MARGIN: usize = 2;

/// Kinetic coefficient ħ²/(2μ) in internal units.
pub const KINETIC_COEFFICIENT: f64 = 0.5;

/// Grid geometry for one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub n: usize,
}

/// Per-level grid defaults. Self-interacting states are far more diffuse than
/// their plain counterparts (the self-repulsion screens the nucleus), so they
/// get much larger boxes; the excited ones tolerate a coarser spacing because
/// their structure lives at large radius.
pub fn default_grid(level: u32, interactions: &InteractionConfig) -> GridSpec {
    if interactions.has_self_interaction() {
        // The spacing loosens with the level: the eigenpair residual floor
        // scales like eps/h², so it must stay below the contract bound
        // 1e-10·|E| + 1e-12 even for the small excited-state energies, and
        // these diffuse states lose nothing to the coarser mesh.
        match level {
            1 => GridSpec { r_max: 100.0, n: 5_000 },
            2 => GridSpec { r_max: 300.0, n: 10_000 },
            3 => GridSpec { r_max: 400.0, n: 10_000 },
            l => GridSpec {
                r_max: 150.0 * f64::from(l),
                n: 3_000 * l as usize,
            },
        }
    } else {
        GridSpec {
            r_max: 60.0 * f64::from(level),
            n: 6_000 * level as usize,
        }
    }
}

/// Full configuration of one SCF solve.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub grid: GridSpec,
    pub interactions: InteractionConfig,
    /// Nuclear charge multiplier.
    pub z: f64,
    /// 1 = ground s-state, 2 = first excited s-state, ...
    pub target_level: u32,
    /// Convergence threshold on |ΔE| between successive rounds (Hartree).
    pub energy_tolerance: f64,
    pub max_iterations: usize,
    /// Damping fraction in (0, 1]; 1 disables mixing.
    pub mixing_beta: f64,
    /// Test-only multiplier on the gravitational couplings (1 = physical).
    pub gravity_amplification: f64,
}

impl SolverConfig {
    /// Defaults for one level: tolerance 1e-9 Hartree, β = 0.5, Z = 1,
    /// per-level grid from `default_grid`.
    pub fn for_level(level: u32, interactions: InteractionConfig) -> Self {
        SolverConfig {
            grid: default_grid(level, &interactions),
            interactions,
            z: 1.0,
            target_level: level,
            energy_tolerance: 1e-9,
            max_iterations: 200,
            mixing_beta: 0.5,
            gravity_amplification: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_level < 1 {
            return Err(Error::Config(format!(
                "target_level must be at least 1 (got {})",
                self.target_level
            )));
        }
        if !self.energy_tolerance.is_finite() || self.energy_tolerance <= 0.0 {
            return Err(Error::Config(format!(
                "energy_tolerance must be positive (got {})",
                self.energy_tolerance
            )));
        }
        if !self.mixing_beta.is_finite() || self.mixing_beta <= 0.0 || self.mixing_beta > 1.0 {
            return Err(Error::Config(format!(
                "mixing_beta must lie in (0, 1] (got {})",
                self.mixing_beta
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !self.gravity_amplification.is_finite() || self.gravity_amplification < 0.0 {
            return Err(Error::Config(format!(
                "amplify_gravity must be nonnegative and finite (got {})",
                self.gravity_amplification
            )));
        }
        validate_z(self.z)?;
        Ok(())
    }
}

/// Outcome of one SCF solve.
#[derive(Debug, Clone)]
pub struct ScfResult {
    pub level: u32,
    pub energy_hartree: f64,
    pub energy_ev: f64,
    /// Converged eigenfunction, normalized (4π∫φ²dr = 1), first lobe positive.
    pub phi: WaveFunction,
    pub iterations: usize,
    pub converged: bool,
    /// Selected eigenenergy per round (Hartree).
    pub energy_history: Vec<f64>,
    /// ‖Hφ − Eφ‖/‖φ‖ of the final pair against the final Hamiltonian.
    pub final_residual: f64,
    pub node_count: usize,
    /// Radial probability density F(r) = 4π|φ|².
    pub density: GridFunction,
    pub grid: RadialGrid,
}

/// Associated Laguerre polynomial L_k^{(1)} by the three-term recurrence.
fn laguerre_assoc1(k: u32, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 - x;
    for i in 2..=k {
        let i = f64::from(i);
        let next = ((2.0 * i - x) * cur - i * prev) / i;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized hydrogenic ns reduced radial function for nuclear charge `z`:
/// φ ∝ r·e^{−Zr/n}·L¹_{n−1}(2Zr/n), grid-normalized. Any normalized function
/// with the right node count would do; the hydrogenic shape just speeds up
/// convergence.
pub fn initial_guess(grid: &RadialGrid, level: u32, z: f64) -> WaveFunction {
    assert!(level >= 1, "level must be at least 1");
    let n = f64::from(level);
    let values = grid
        .nodes
        .iter()
        .map(|&r| {
            let x = 2.0 * z * r / n;
            r * (-z * r / n).exp() * laguerre_assoc1(level - 1, x)
        })
        .collect();
    let mut phi = WaveFunction::from_values(GridFunction::from_values(values));
    phi.normalize(grid);
    phi.fix_sign();
    phi
}

/// Damped potential update: old + β·(new − old). Exactly the fixed point when
/// new == old, and exactly `new` when β = 1.
pub fn mix_potentials(
    old: &PotentialOnGrid,
    new: &PotentialOnGrid,
    beta: f64,
) -> Result<PotentialOnGrid> {
    if old.values.len() != new.values.len() {
        return Err(Error::Contract(format!(
            "mix_potentials: grid mismatch ({} vs {} nodes)",
            old.values.len(),
            new.values.len()
        )));
    }
    if old.kind != new.kind {
        return Err(Error::Contract(
            "mix_potentials: potentials must have the same kind".into(),
        ));
    }
    if !beta.is_finite() || beta <= 0.0 || beta > 1.0 {
        return Err(Error::Contract(format!("mix_potentials: beta {beta} outside (0, 1]")));
    }
    if beta == 1.0 {
        return Ok(new.clone());
    }
    let values = old
        .values
        .values
        .iter()
        .zip(&new.values.values)
        .map(|(&o, &n)| o + beta * (n - o))
        .collect();
    Ok(PotentialOnGrid {
        values: GridFunction::from_values(values),
        kind: old.kind,
    })
}

/// Pick the eigenpair with the target node count; fall back to maximal
/// overlap with the previous iterate if several match.
fn select_state(pairs: Vec<EigenPair>, level: u32, previous: &WaveFunction) -> Result<EigenPair> {
    let wanted = (level - 1) as usize;
    let mut matching: Vec<EigenPair> = Vec::new();
    let mut seen = Vec::new();
    for pair in pairs {
        seen.push(pair.nodes);
        if pair.nodes == wanted {
            matching.push(pair);
        }
    }
    match matching.len() {
        1 => Ok(matching.pop().expect("one element")),
        0 => Err(Error::Numerical(format!(
            "no eigenstate with {wanted} nodes among the lowest {} (node counts {seen:?}); \
             increase the solve margin or refine the grid",
            seen.len()
        ))),
        _ => {
            let mut best = matching.pop().expect("nonempty");
            let mut best_overlap = best.phi.overlap(previous).abs();
            for pair in matching {
                let ov = pair.phi.overlap(previous).abs();
                if ov > best_overlap {
                    best_overlap = ov;
                    best = pair;
                }
            }
            Ok(best)
        }
    }
}

/// Run the self-consistent iteration for one target level.
///
/// Without self-interaction the problem is linear and a single eigensolve is
/// returned. Non-convergence after `max_iterations` is not an error: the
/// result carries `converged = false` and the full energy history.
pub fn scf_solve(config: &SolverConfig, constants: &PhysicalConstants) -> Result<ScfResult> {
    config.validate()?;
    let grid = make_grid(config.grid.r_max, config.grid.n)?;
    let alpha = coupling_alpha_amplified(
        constants,
        &config.interactions,
        config.gravity_amplification,
    );
    let external_c = external_coupling_amplified(
        constants,
        &config.interactions,
        config.gravity_amplification,
    );
    let v_external = crate::potentials::external_potential(&grid, external_c, config.z);
    let has_self = config.interactions.has_self_interaction();
    let states_to_solve = config.target_level as usize + SOLVE_MARGIN;

    let mut phi = initial_guess(&grid, config.target_level, config.z);
    let mut w_prev: Option<PotentialOnGrid> = None;
    let mut energy_history: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut last: Option<(crate::eigensolver::TridiagonalHamiltonian, EigenPair)> = None;

    for _ in 0..config.max_iterations {
        let w_new = if has_self {
            self_interaction_potential(&phi, &grid, alpha)?
        } else {
            PotentialOnGrid::zeros(grid.n, PotentialKind::SelfInteraction)
        };
        let w = match &w_prev {
            None => w_new,
            Some(prev) => mix_potentials(prev, &w_new, config.mixing_beta)?,
        };
        let v_total = total_potential(&v_external, &w);
        let hamiltonian = assemble_hamiltonian(&grid, &v_total, KINETIC_COEFFICIENT);
        let pairs = lowest_eigenpairs(&hamiltonian, states_to_solve, &grid)?;
        let pair = select_state(pairs, config.target_level, &phi)?;
        phi = pair.phi.clone();
        energy_history.push(pair.energy);
        last = Some((hamiltonian, pair));
        w_prev = Some(w);

        let m = energy_history.len();
        if !has_self {
            // Linear problem: one eigensolve reproduces the plain equation.
            converged = true;
            break;
        }
        if m >= 2 && (energy_history[m - 1] - energy_history[m - 2]).abs() < config.energy_tolerance
        {
            converged = true;
            break;
        }
    }

    let (hamiltonian, pair) = last.expect("max_iterations >= 1 guarantees one round");
    let final_residual = residual_norm(&hamiltonian, &pair);
    let density = pair.phi.density();
    Ok(ScfResult {
        level: config.target_level,
        energy_hartree: pair.energy,
        energy_ev: constants.hartree_to_ev(pair.energy),
        phi: pair.phi,
        iterations: energy_history.len(),
        converged,
        energy_history,
        final_residual,
        node_count: pair.nodes,
        density,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::integrate;

    fn constants() -> PhysicalConstants {
        PhysicalConstants::codata2018()
    }

    #[test]
    fn initial_guess_ground_state_shape() {
        let grid = make_grid(40.0, 2000).unwrap();
        let phi = initial_guess(&grid, 1, 1.0);
        assert_eq!(crate::eigensolver::count_nodes(&phi), 0);
        assert!((phi.norm_4pi(&grid) - 1.0).abs() < 1e-10);
        // Shape ∝ r e^{−r}: check the ratio at two radii.
        let j1 = 99; // r = 2.0
        let j2 = 199; // r = 4.0
        let r1 = grid.nodes[j1];
        let r2 = grid.nodes[j2];
        let expected_ratio = (r2 * (-r2).exp()) / (r1 * (-r1).exp());
        let actual_ratio = phi.values.values[j2] / phi.values.values[j1];
        assert!((actual_ratio / expected_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn initial_guess_excited_states_node_structure() {
        let grid = make_grid(60.0, 3000).unwrap();
        for level in 1..=6u32 {
            let phi = initial_guess(&grid, level, 1.0);
            assert_eq!(
                crate::eigensolver::count_nodes(&phi),
                (level - 1) as usize,
                "level {level}"
            );
            assert!((phi.norm_4pi(&grid) - 1.0).abs() < 1e-10);
        }
        // The 2s node sits at r = 2/Z.
        let phi2 = initial_guess(&grid, 2, 1.0);
        let crossing = grid
            .nodes
            .windows(2)
            .zip(phi2.values.values.windows(2))
            .find(|(_, w)| w[0] > 0.0 && w[1] < 0.0)
            .map(|(r, _)| 0.5 * (r[0] + r[1]))
            .expect("2s has a node");
        assert!((crossing - 2.0).abs() < grid.h);
    }

    #[test]
    fn initial_guess_scales_with_z() {
        let grid = make_grid(30.0, 1500).unwrap();
        let phi = initial_guess(&grid, 2, 0.5);
        // Node at 2/Z = 4 Bohr.
        let crossing = grid
            .nodes
            .windows(2)
            .zip(phi.values.values.windows(2))
            .find(|(_, w)| w[0] > 0.0 && w[1] < 0.0)
            .map(|(r, _)| 0.5 * (r[0] + r[1]))
            .expect("node exists");
        assert!((crossing - 4.0).abs() < grid.h);
    }

    #[test]
    fn mix_potentials_contracts() {
        let n = 32;
        let zero = PotentialOnGrid::zeros(n, PotentialKind::SelfInteraction);
        let two = PotentialOnGrid {
            values: GridFunction::from_values(vec![2.0; n]),
            kind: PotentialKind::SelfInteraction,
        };
        // β = 1 returns the new potential exactly.
        let m1 = mix_potentials(&zero, &two, 1.0).unwrap();
        assert_eq!(m1.values.values, two.values.values);
        // β = 0.5 halves the step.
        let m05 = mix_potentials(&zero, &two, 0.5).unwrap();
        assert!(m05.values.values.iter().all(|&v| v == 1.0));
        // Fixed point for any β.
        for &beta in &[0.1, 0.3, 0.5, 0.7, 1.0] {
            let m = mix_potentials(&two, &two, beta).unwrap();
            assert_eq!(m.values.values, two.values.values);
        }
    }

    #[test]
    fn mix_potentials_rejects_mismatch() {
        let a = PotentialOnGrid::zeros(8, PotentialKind::SelfInteraction);
        let b = PotentialOnGrid::zeros(9, PotentialKind::SelfInteraction);
        assert!(matches!(mix_potentials(&a, &b, 0.5), Err(Error::Contract(_))));
        let c = PotentialOnGrid::zeros(8, PotentialKind::External);
        assert!(matches!(mix_potentials(&a, &c, 0.5), Err(Error::Contract(_))));
    }

    #[test]
    fn config_validation_names_fields() {
        let mut cfg = SolverConfig::for_level(1, InteractionConfig::none());
        cfg.mixing_beta = 1.5;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("mixing_beta"), "{err}");

        let mut cfg = SolverConfig::for_level(1, InteractionConfig::none());
        cfg.energy_tolerance = 0.0;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("energy_tolerance"), "{err}");

        let mut cfg = SolverConfig::for_level(1, InteractionConfig::none());
        cfg.target_level = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn plain_ground_state_single_pass() {
        let c = constants();
        let cfg = SolverConfig::for_level(1, InteractionConfig::none());
        let result = scf_solve(&cfg, &c).unwrap();
        assert!(result.converged);
        assert_eq!(result.iterations, 1);
        assert_eq!(result.node_count, 0);
        // Reference value −13.593 eV within 0.05%.
        let rel = (result.energy_ev / -13.593 - 1.0).abs();
        assert!(rel < 5e-4, "E = {} eV (rel {rel:.2e})", result.energy_ev);
        assert!((integrate(&result.density, &result.grid) - 1.0).abs() < 1e-10);
        assert!(result.final_residual < 1e-10);
    }

    #[test]
    fn self_interaction_raises_energy_and_spreads_density() {
        let c = constants();
        let mut plain_cfg = SolverConfig::for_level(1, InteractionConfig::none());
        plain_cfg.grid = GridSpec { r_max: 80.0, n: 4000 };
        let plain = scf_solve(&plain_cfg, &c).unwrap();

        let mut si_cfg = SolverConfig::for_level(1, InteractionConfig::electric_only());
        si_cfg.grid = GridSpec { r_max: 80.0, n: 4000 };
        si_cfg.energy_tolerance = 1e-8;
        let si = scf_solve(&si_cfg, &c).unwrap();

        assert!(si.converged, "history: {:?}", si.energy_history);
        assert!(si.energy_hartree > plain.energy_hartree);
        assert_eq!(si.node_count, 0);

        let peak = |r: &ScfResult| {
            let j = r
                .density
                .values
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            r.grid.nodes[j]
        };
        let plain_peak = peak(&plain);
        let si_peak = peak(&si);
        assert!((plain_peak - 1.0).abs() < 2.0 * plain.grid.h);
        assert!(si_peak > plain_peak);
    }

    #[test]
    fn amplified_gravitational_attraction_deepens_binding() {
        let c = constants();
        let mut plain_cfg = SolverConfig::for_level(1, InteractionConfig::none());
        plain_cfg.grid = GridSpec { r_max: 40.0, n: 2000 };
        let plain = scf_solve(&plain_cfg, &c).unwrap();

        let mut grav_cfg = SolverConfig::for_level(1, InteractionConfig::gravitational_only());
        grav_cfg.grid = GridSpec { r_max: 40.0, n: 2000 };
        // Amplify G·m_e·m_p/(k_e e²) ≈ 4.41e-40 up to α ≈ −0.1.
        grav_cfg.gravity_amplification = 0.1 / 4.407886e-40;
        grav_cfg.energy_tolerance = 1e-8;
        let grav = scf_solve(&grav_cfg, &c).unwrap();

        assert!(grav.converged);
        assert!(grav.energy_hartree < plain.energy_hartree);
    }

    #[test]
    fn non_convergence_reported_not_thrown() {
        let c = constants();
        let mut cfg = SolverConfig::for_level(1, InteractionConfig::electric_only());
        cfg.grid = GridSpec { r_max: 60.0, n: 2000 };
        cfg.max_iterations = 3;
        let result = scf_solve(&cfg, &c).unwrap();
        assert!(!result.converged);
        assert_eq!(result.iterations, 3);
        assert_eq!(result.energy_history.len(), 3);
    }

    #[test]
    fn electric_only_and_both_give_bit_identical_energies() {
        // The gravitational correction is ~4.4e-40 relative: invisible in f64,
        // so the two configurations run bit-identical arithmetic.
        let c = constants();
        let mut cfg_e = SolverConfig::for_level(1, InteractionConfig::electric_only());
        cfg_e.grid = GridSpec { r_max: 60.0, n: 3000 };
        cfg_e.energy_tolerance = 1e-8;
        let mut cfg_b = cfg_e.clone();
        cfg_b.interactions = InteractionConfig::both();
        let a = scf_solve(&cfg_e, &c).unwrap();
        let b = scf_solve(&cfg_b, &c).unwrap();
        assert_eq!(a.energy_hartree, b.energy_hartree);
        assert_eq!(a.phi.values.values, b.phi.values.values);
    }
}
