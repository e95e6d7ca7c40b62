//! Uniform radial mesh with Dirichlet endpoints, trapezoidal quadrature, and
//! O(n) cumulative integrals.
//!
//! The mesh covers (0, r_max) with n interior nodes r_j = j·h where
//! h = r_max/(n+1). The boundary values f(0) = f(r_max) = 0 are implicit and
//! never stored. All quadrature is the trapezoidal rule with those zero
//! endpoint values, which reduces the full integral to h·Σ f_j and makes the
//! discrete identity
//!
//!   cumulative_from_zero(f)[j] + cumulative_to_infinity(f)[j] = integrate(f)
//!
//! hold for every j up to roundoff. This pins the stencil: the prefix
//! integral starts with a half cell h·f_1/2 at the first node and the suffix
//! integral ends with a half cell h·f_n/2 at the last.

use crate::error::{Error, Result};

/// Uniform radial mesh: interior nodes only, Dirichlet endpoints implicit.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    /// Box radius (Bohr). φ(r_max) = 0.
    pub r_max: f64,
    /// Number of interior nodes.
    pub n: usize,
    /// Spacing h = r_max/(n+1) (Bohr).
    pub h: f64,
    /// Nodes r_j = j·h for j = 1..n (Bohr), strictly increasing.
    pub nodes: Vec<f64>,
}

/// Minimum admissible number of interior nodes.
pub const MIN_GRID_POINTS: usize = 16;

/// Build a uniform radial grid with `n` interior nodes on (0, r_max).
pub fn make_grid(r_max: f64, n: usize) -> Result<RadialGrid> {
    if !r_max.is_finite() || r_max <= 0.0 {
        return Err(Error::Config(format!(
            "r_max must be positive and finite (got {r_max})"
        )));
    }
    if n < MIN_GRID_POINTS {
        return Err(Error::Config(format!(
            "n must be at least {MIN_GRID_POINTS} (got {n})"
        )));
    }
    let h = r_max / (n as f64 + 1.0);
    let nodes = (1..=n).map(|j| j as f64 * h).collect();
    Ok(RadialGrid { r_max, n, h, nodes })
}

/// Real values sampled on the interior nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(n: usize) -> Self {
        GridFunction { values: vec![0.0; n] }
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        GridFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Trapezoidal ∫₀^{r_max} f dr with the implicit zero boundary values:
/// h·(f(0)/2 + Σ f_j + f(r_max)/2) = h·Σ f_j.
pub fn integrate(f: &GridFunction, grid: &RadialGrid) -> f64 {
    assert_eq!(f.len(), grid.n, "grid function length must match grid");
    grid.h * f.values.iter().sum::<f64>()
}

/// Prefix trapezoid g_j = ∫₀^{r_j} f dr' with f(0) = 0, so
/// g_1 = h·f_1/2 and g_j = g_{j−1} + h·(f_{j−1} + f_j)/2.
/// Monotone nondecreasing when f ≥ 0.
pub fn cumulative_from_zero(f: &GridFunction, grid: &RadialGrid) -> GridFunction {
    assert_eq!(f.len(), grid.n, "grid function length must match grid");
    let half_h = 0.5 * grid.h;
    let mut out = Vec::with_capacity(grid.n);
    let mut acc = 0.0;
    let mut prev = 0.0; // f(0) = 0
    for &v in &f.values {
        acc += half_h * (prev + v);
        out.push(acc);
        prev = v;
    }
    GridFunction::from_values(out)
}

/// Suffix trapezoid g_j = ∫_{r_j}^{r_max} f dr' with f(r_max) = 0, so
/// g_n = h·f_n/2 and g_j = g_{j+1} + h·(f_j + f_{j+1})/2.
/// Monotone nonincreasing when f ≥ 0.
pub fn cumulative_to_infinity(f: &GridFunction, grid: &RadialGrid) -> GridFunction {
    assert_eq!(f.len(), grid.n, "grid function length must match grid");
    let half_h = 0.5 * grid.h;
    let mut out = vec![0.0; grid.n];
    let mut acc = 0.0;
    let mut next = 0.0; // f(r_max) = 0
    for j in (0..grid.n).rev() {
        let v = f.values[j];
        acc += half_h * (v + next);
        out[j] = acc;
        next = v;
    }
    GridFunction::from_values(out)
}
