//! Physical constants (CODATA 2018), derived couplings, and unit conversions.
//!
//! Internal unit system: lengths in Bohr radii of the reduced-mass hydrogen
//! problem, energies in the corresponding Hartree. In these units the electric
//! coupling k_e·e² is exactly 1 Hartree·Bohr and ħ²/(2μ) = 1/2, so the
//! Hamiltonian coefficients are O(1) and the electric-only problem is
//! canonical. SI values appear only at the I/O boundary.

use crate::error::{Error, Result};

/// Newtonian gravitational constant (m³·kg⁻¹·s⁻²). CODATA 2018.
pub const GRAVITATIONAL_CONSTANT: f64 = 6.67430e-11;

/// Reduced Planck constant ħ (J·s). CODATA 2018.
pub const HBAR: f64 = 1.054571817e-34;

/// Electron mass (kg). CODATA 2018.
pub const ELECTRON_MASS: f64 = 9.1093837015e-31;

/// Proton mass (kg). CODATA 2018.
pub const PROTON_MASS: f64 = 1.67262192369e-27;

/// Elementary charge (C), exact in the 2019 SI.
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;

/// Vacuum permittivity ε₀ (F/m). CODATA 2018.
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

/// Full constant set plus the derived couplings and conversion factors used
/// throughout the solver. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PhysicalConstants {
    /// Gravitational constant G (m³·kg⁻¹·s⁻²).
    pub g: f64,
    /// Reduced Planck constant ħ (J·s).
    pub hbar: f64,
    /// Electron mass (kg).
    pub m_e: f64,
    /// Proton mass (kg).
    pub m_p: f64,
    /// Coulomb constant times squared elementary charge, k_e·e² (J·m).
    pub ke_e2: f64,
    /// Reduced mass μ = m_e·m_p/(m_e + m_p) (kg).
    pub mu: f64,
    /// Bohr radius of the reduced-mass problem, a₀ = ħ²/(μ·k_e·e²) (m).
    pub bohr_radius: f64,
    /// Hartree of the reduced-mass problem, ħ²/(μ·a₀²) (J).
    pub hartree: f64,
    /// Conversion factor, eV per (reduced-mass) Hartree.
    pub ev_per_hartree: f64,
}

impl PhysicalConstants {
    /// Build the constant set from the CODATA 2018 values above.
    pub fn codata2018() -> Self {
        let ke = 1.0 / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY);
        let ke_e2 = ke * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE;
        let mu = ELECTRON_MASS * PROTON_MASS / (ELECTRON_MASS + PROTON_MASS);
        let bohr_radius = HBAR * HBAR / (mu * ke_e2);
        let hartree = HBAR * HBAR / (mu * bohr_radius * bohr_radius);
        let ev_per_hartree = hartree / ELEMENTARY_CHARGE;
        PhysicalConstants {
            g: GRAVITATIONAL_CONSTANT,
            hbar: HBAR,
            m_e: ELECTRON_MASS,
            m_p: PROTON_MASS,
            ke_e2,
            mu,
            bohr_radius,
            hartree,
            ev_per_hartree,
        }
    }

    /// Convert an energy from internal Hartree to eV.
    pub fn hartree_to_ev(&self, energy_hartree: f64) -> f64 {
        energy_hartree * self.ev_per_hartree
    }

    /// Convert an energy from eV to internal Hartree.
    pub fn ev_to_hartree(&self, energy_ev: f64) -> f64 {
        energy_ev / self.ev_per_hartree
    }

    /// Dimensionless ratio G·m_e·m_p / (k_e·e²) ≈ 4.4e-40: the strength of the
    /// gravitational electron-proton coupling relative to the electric one.
    /// This is also the gravitational coupling expressed in internal
    /// Hartree·Bohr units.
    pub fn gravitational_coupling_ratio(&self) -> f64 {
        self.g * self.m_e * self.m_p / self.ke_e2
    }
}

/// Which self-interaction terms enter the nonlinear potential, and whether the
/// external potential carries the (numerically invisible) gravitational
/// electron-proton attraction in addition to the Coulomb one.
///
/// All eight flag combinations are valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteractionConfig {
    /// Include the repulsive electric self-interaction in W(r).
    pub electric_self: bool,
    /// Include the attractive gravitational self-interaction in W(r).
    pub gravitational_self: bool,
    /// Include −G·m_e·m_p/r in the external potential (the Coulomb term is
    /// always present).
    pub gravitational_external: bool,
}

impl InteractionConfig {
    /// No self-interaction: the ordinary linear Schrödinger problem.
    pub fn none() -> Self {
        InteractionConfig {
            electric_self: false,
            gravitational_self: false,
            gravitational_external: true,
        }
    }

    /// Electric self-interaction only.
    pub fn electric_only() -> Self {
        InteractionConfig {
            electric_self: true,
            gravitational_self: false,
            gravitational_external: true,
        }
    }

    /// Gravitational self-interaction only.
    pub fn gravitational_only() -> Self {
        InteractionConfig {
            electric_self: false,
            gravitational_self: true,
            gravitational_external: true,
        }
    }

    /// Both self-interaction terms.
    pub fn both() -> Self {
        InteractionConfig {
            electric_self: true,
            gravitational_self: true,
            gravitational_external: true,
        }
    }

    /// True when any self-interaction term is switched on.
    pub fn has_self_interaction(&self) -> bool {
        self.electric_self || self.gravitational_self
    }
}

/// Self-interaction coupling α in internal Hartree·Bohr units:
/// (k_e·e² if electric) + (−G·m_e·m_p if gravitational).
///
/// Note the gravitational self-term uses the electron-proton mass product
/// m_e·m_p rather than m_e²; the single-particle form of the self-potential
/// would suggest the latter, but the two differ by ~1e-40 relative and the
/// m_e·m_p form is the one adopted here.
pub fn coupling_alpha(constants: &PhysicalConstants, cfg: &InteractionConfig) -> f64 {
    coupling_alpha_amplified(constants, cfg, 1.0)
}

/// `coupling_alpha` with the gravitational part multiplied by `amplification`.
/// Physical runs use 1.0; large factors exercise the attractive (α < 0)
/// branch, which is otherwise below double-precision resolution.
pub fn coupling_alpha_amplified(
    constants: &PhysicalConstants,
    cfg: &InteractionConfig,
    amplification: f64,
) -> f64 {
    let electric = if cfg.electric_self { 1.0 } else { 0.0 };
    let gravitational = if cfg.gravitational_self {
        amplification * constants.gravitational_coupling_ratio()
    } else {
        0.0
    };
    electric - gravitational
}

/// Magnitude C of the attractive −C·Z/r external coupling in internal units:
/// k_e·e² plus optionally G·m_e·m_p.
pub fn external_coupling(constants: &PhysicalConstants, cfg: &InteractionConfig) -> f64 {
    external_coupling_amplified(constants, cfg, 1.0)
}

/// `external_coupling` with the gravitational part multiplied by
/// `amplification` (see `coupling_alpha_amplified`).
pub fn external_coupling_amplified(
    constants: &PhysicalConstants,
    cfg: &InteractionConfig,
    amplification: f64,
) -> f64 {
    let gravitational = if cfg.gravitational_external {
        amplification * constants.gravitational_coupling_ratio()
    } else {
        0.0
    };
    1.0 + gravitational
}

/// Validate a nuclear charge multiplier.
pub fn validate_z(z: f64) -> Result<()> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::Config(format!("z must be positive and finite (got {z})")));
    }
    Ok(())
}
