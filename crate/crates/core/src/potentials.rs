//! External −C·Z/r potential and the Hartree-type self-interaction potential
//! built from the reduced radial density.
//!
//! For a reduced radial function φ = rψ normalized as 4π∫φ² dr = 1, the
//! spherically symmetric (monopole) reduction of the 1/|r−r'| convolution is
//!
//!   W(r) = 4πα · [ (1/r) ∫₀^r φ(r')² dr'  +  ∫_r^∞ φ(r')²/r' dr' ],
//!
//! the shell-theorem split into an interior charge seen from outside and an
//! exterior shell potential. Both integrals are prefix/suffix sums on the
//! grid, so assembly costs O(n). The upper limit is truncated at the box
//! radius r_max; for bound states that have decayed at the boundary the
//! truncation error is exponentially small, and r·W(r) → α·(4π∫φ² dr) = α
//! in the far field.
//!
//! Sign conventions: α > 0 (electric self-repulsion) gives W ≥ 0, monotone
//! nonincreasing; α < 0 (gravitational self-attraction) flips both.

use crate::eigensolver::WaveFunction;
use crate::error::{Error, Result};
use crate::grid::{cumulative_from_zero, cumulative_to_infinity, integrate, GridFunction, RadialGrid};

/// Tolerance on |4π∫φ² dr − 1| accepted by `self_interaction_potential`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Role of a potential sampled on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    External,
    SelfInteraction,
    Total,
}

/// A potential sampled on the interior nodes, in Hartree.
#[derive(Debug, Clone)]
pub struct PotentialOnGrid {
    pub values: GridFunction,
    pub kind: PotentialKind,
}

impl PotentialOnGrid {
    pub fn zeros(n: usize, kind: PotentialKind) -> Self {
        PotentialOnGrid {
            values: GridFunction::zeros(n),
            kind,
        }
    }
}

/// Attractive external potential V(r_j) = −C·Z/r_j. The grid excludes r = 0,
/// so no node is singular.
pub fn external_potential(grid: &RadialGrid, coupling: f64, z: f64) -> PotentialOnGrid {
    let values = grid.nodes.iter().map(|&r| -coupling * z / r).collect();
    PotentialOnGrid {
        values: GridFunction::from_values(values),
        kind: PotentialKind::External,
    }
}

/// Self-interaction potential W(r) of a normalized reduced wavefunction.
///
/// Rejects φ whose 4π-norm deviates from 1 by more than
/// `NORMALIZATION_TOLERANCE`: the strength of the nonlinear term is otherwise
/// arbitrary.
pub fn self_interaction_potential(
    phi: &WaveFunction,
    grid: &RadialGrid,
    alpha: f64,
) -> Result<PotentialOnGrid> {
    let norm = FOUR_PI * integrate(&phi.density_bare(), grid);
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Contract(format!(
            "self_interaction_potential requires a normalized wavefunction: 4π∫φ²dr = {norm}"
        )));
    }
    Ok(self_interaction_potential_unchecked(&phi.values, grid, alpha))
}

/// `self_interaction_potential` without the normalization gate. Used for
/// identity checks on non-normalizable inputs (e.g. φ ≡ 0); production code
/// goes through the checked entry point.
pub fn self_interaction_potential_unchecked(
    phi_values: &GridFunction,
    grid: &RadialGrid,
    alpha: f64,
) -> PotentialOnGrid {
    assert_eq!(phi_values.len(), grid.n, "wavefunction length must match grid");
    let density = GridFunction::from_values(phi_values.values.iter().map(|&v| v * v).collect());
    let tail_integrand = GridFunction::from_values(
        density
            .values
            .iter()
            .zip(&grid.nodes)
            .map(|(&d, &r)| d / r)
            .collect(),
    );
    let interior = cumulative_from_zero(&density, grid);
    let exterior = cumulative_to_infinity(&tail_integrand, grid);
    let coupling = FOUR_PI * alpha;
    let values = (0..grid.n)
        .map(|j| coupling * (interior.values[j] / grid.nodes[j] + exterior.values[j]))
        .collect();
    PotentialOnGrid {
        values: GridFunction::from_values(values),
        kind: PotentialKind::SelfInteraction,
    }
}

/// Pointwise sum of the external and self-interaction potentials.
pub fn total_potential(external: &PotentialOnGrid, self_interaction: &PotentialOnGrid) -> PotentialOnGrid {
    assert_eq!(
        external.values.len(),
        self_interaction.values.len(),
        "potentials must share a grid"
    );
    let values = external
        .values
        .values
        .iter()
        .zip(&self_interaction.values.values)
        .map(|(&a, &b)| a + b)
        .collect();
    PotentialOnGrid {
        values: GridFunction::from_values(values),
        kind: PotentialKind::Total,
    }
}
