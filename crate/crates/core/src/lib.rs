//! Numerical solver for the spherically symmetric stationary states of the
//! hydrogen atom when the electron's own probability density sources an
//! additional Hartree-type potential — electric, gravitational
//! (Schrödinger–Newton), or both.
//!
//! The 3-D problem reduces to a 1-D radial one via φ(r) = r·ψ(r) with
//! φ(0) = φ(r_max) = 0. Each self-consistent round builds the self-interaction
//! potential W(r) from the current φ by prefix/suffix cumulative integrals,
//! assembles a symmetric tridiagonal Hamiltonian on a uniform mesh, extracts
//! the lowest eigenpairs by Sturm bisection plus inverse iteration, selects
//! the target s-state by node count, and repeats until the eigenenergy is
//! stable. Everything runs in reduced-mass atomic units (k_e·e² = 1
//! Hartree·Bohr, ħ²/2μ = 1/2) and is fully deterministic.

pub mod cli;
pub mod constants;
pub mod eigensolver;
pub mod error;
pub mod grid;
pub mod potentials;
pub mod scf;
pub mod spectroscopy;

pub use constants::{InteractionConfig, PhysicalConstants};
pub use eigensolver::{EigenPair, TridiagonalHamiltonian, WaveFunction};
pub use error::{Error, Result};
pub use grid::{GridFunction, RadialGrid};
pub use potentials::PotentialOnGrid;
pub use scf::{ScfResult, SolverConfig};
pub use spectroscopy::SpectroscopyReport;
