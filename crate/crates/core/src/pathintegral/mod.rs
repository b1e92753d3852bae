//! Lattice path sum for one particle in one dimension.
//!
//! One time step sums `exp(iS(x, a)/ħ) ψ(a)` over every lattice point `a`
//! with the short-time action
//!
//! ```text
//! S(x, a) = (m/2)((x − a)/ε)² ε − V((x + a)/2) ε
//! ```
//!
//! and the factor `√(m/(2πiħε)) Δx`, then renormalizes. [`CrankNicolson`]
//! solves the same problem as a PDE and serves as the oracle.

mod io;
mod kernel;
mod observables;
mod oracle;

pub use io::{read_tabulated, write_snapshot_csv, SNAPSHOT_HEADER};
pub use kernel::{propagate, step, steps_for, Kernel, Propagation, Propagator, MAX_DRIFT, MIN_RESOLUTION};
pub use observables::{expectation_x, l2_distance, l2_distance_up_to_phase, mean_velocity, width};
pub use oracle::CrankNicolson;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amplitude::Amplitude;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathIntegralError {
    #[error("grid needs at least 3 points and x_min < x_max (got n={n}, [{x_min}, {x_max}])")]
    InvalidGrid { x_min: f64, x_max: f64, n: usize },
    #[error("time step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("final time {t} is not a whole number of steps of {epsilon}")]
    NotAMultiple { t: f64, epsilon: f64 },
    #[error("ħ and m must be positive and finite")]
    InvalidUnits,
    #[error("potential is not finite at x = {0}")]
    NonFinitePotential(f64),
    #[error("tabulated potential covers [{from}, {to}], grid needs [{need_from}, {need_to}]")]
    PotentialRange {
        from: f64,
        to: f64,
        need_from: f64,
        need_to: f64,
    },
    #[error("kernel under-resolved: π√(ħε/m)/Δx = {ratio:.2}, need at least {min}; use a finer grid or a longer step")]
    Unresolved { ratio: f64, min: f64 },
    #[error("dense kernel aliases: 2πħε/(mΔx) = {period:.3} must exceed the grid length {length:.3}")]
    Aliased { period: f64, length: f64 },
    #[error("instability at step {step}: norm drifted by {drift:e} before renormalization")]
    Unstable { step: usize, drift: f64 },
    #[error("wavefunction has zero norm")]
    ZeroNorm,
    #[error("wavefunction has {values} values for {points} grid points")]
    LengthMismatch { values: usize, points: usize },
    #[error("tabulated grid is not uniform at row {0}")]
    NonUniform(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

/// Physical constants. Defaults are natural units `ħ = m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0, mass: 1.0 }
    }
}

impl Units {
    fn validate(&self) -> Result<(), PathIntegralError> {
        if self.hbar.is_finite() && self.hbar > 0.0 && self.mass.is_finite() && self.mass > 0.0 {
            Ok(())
        } else {
            Err(PathIntegralError::InvalidUnits)
        }
    }
}

/// Uniform grid `x_j = x_min + jΔx`, `j = 0..n`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    x_min: f64,
    dx: f64,
    n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, PathIntegralError> {
        if n < 3 || !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(PathIntegralError::InvalidGrid { x_min, x_max, n });
        }
        Ok(Grid {
            x_min,
            dx: (x_max - x_min) / (n - 1) as f64,
            n,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    Free,
    /// `½ m ω² x²`.
    Harmonic {
        omega: f64,
    },
    /// Linear interpolation between samples `(x, V)`, `x` increasing.
    Tabulated {
        x: Vec<f64>,
        v: Vec<f64>,
    },
}

impl Potential {
    pub fn value(&self, x: f64, units: Units) -> f64 {
        match self {
            Potential::Free => 0.0,
            Potential::Harmonic { omega } => 0.5 * units.mass * omega * omega * x * x,
            Potential::Tabulated { x: xs, v } => {
                let k = xs.partition_point(|&p| p <= x);
                if k == 0 {
                    return v.first().copied().unwrap_or(f64::NAN);
                }
                if k == xs.len() {
                    return if x == xs[k - 1] { v[k - 1] } else { f64::NAN };
                }
                let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
                v[k - 1] + t * (v[k] - v[k - 1])
            }
        }
    }

    /// Checks that the potential is finite everywhere the path sum
    /// evaluates it: the grid and the midpoints between grid points.
    pub fn validate_on(&self, grid: &Grid, units: Units) -> Result<(), PathIntegralError> {
        if let Potential::Tabulated { x, .. } = self {
            let (from, to) = (
                x.first().copied().unwrap_or(f64::NAN),
                x.last().copied().unwrap_or(f64::NAN),
            );
            if !(from <= grid.x_min() && to >= grid.x_max()) {
                return Err(PathIntegralError::PotentialRange {
                    from,
                    to,
                    need_from: grid.x_min(),
                    need_to: grid.x_max(),
                });
            }
        }
        for s in 0..2 * grid.len() - 1 {
            let x = grid.x_min() + s as f64 * grid.dx() / 2.0;
            if !self.value(x, units).is_finite() {
                return Err(PathIntegralError::NonFinitePotential(x));
            }
        }
        Ok(())
    }
}

/// One straight-line segment of a path from `a` to `x` in time `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionSegment {
    pub a: f64,
    pub x: f64,
    pub epsilon: f64,
}

impl ActionSegment {
    /// Kinetic minus potential energy times `ε`, with the potential taken
    /// at the midpoint.
    pub fn value(&self, potential: &Potential, units: Units) -> f64 {
        let v = (self.x - self.a) / self.epsilon;
        0.5 * units.mass * v * v * self.epsilon - potential.value(0.5 * (self.a + self.x), units) * self.epsilon
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWavefunction {
    grid: Grid,
    values: Vec<Amplitude>,
    time: f64,
    units: Units,
}

impl LatticeWavefunction {
    /// Wraps `values` at time zero and normalizes them.
    pub fn new(grid: Grid, values: Vec<Amplitude>, units: Units) -> Result<Self, PathIntegralError> {
        if values.len() != grid.len() {
            return Err(PathIntegralError::LengthMismatch {
                values: values.len(),
                points: grid.len(),
            });
        }
        units.validate()?;
        let mut psi = LatticeWavefunction {
            grid,
            values,
            time: 0.0,
            units,
        };
        psi.normalize()?;
        Ok(psi)
    }

    /// `exp(−(x−x₀)²/(4σ₀²) + ik₀x)`, normalized, so that `σ₀` is the
    /// standard deviation of `|ψ|²`.
    pub fn gaussian(grid: Grid, units: Units, x0: f64, sigma0: f64, k0: f64) -> Result<Self, PathIntegralError> {
        let values = grid
            .points()
            .map(|x| Amplitude::from_polar((-(x - x0).powi(2) / (4.0 * sigma0 * sigma0)).exp(), k0 * x))
            .collect();
        Self::new(grid, values, units)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Amplitude] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// `Σ|ψ_j|² Δx`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Rescales to unit norm and returns the norm before rescaling.
    pub fn normalize(&mut self) -> Result<f64, PathIntegralError> {
        let norm = self.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(PathIntegralError::ZeroNorm);
        }
        let scale = norm.sqrt().recip();
        for c in &mut self.values {
            *c *= scale;
        }
        Ok(norm)
    }

    pub(crate) fn evolved(&self, values: Vec<Amplitude>, dt: f64) -> Self {
        LatticeWavefunction {
            grid: self.grid,
            values,
            time: self.time + dt,
            units: self.units,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_and_endpoints() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.x_max(), 1.0);
        assert!(Grid::new(1.0, 0.0, 5).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
    }

    #[test]
    fn gaussian_is_normalized_and_centered() {
        let g = Grid::new(-20.0, 20.0, 2001).unwrap();
        let psi = LatticeWavefunction::gaussian(g, Units::default(), 2.5, 1.0, 0.0).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!((expectation_x(&psi) - 2.5).abs() < 1e-6);
        assert!((width(&psi) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn action_segment() {
        let s = ActionSegment {
            a: 0.0,
            x: 1.0,
            epsilon: 0.5,
        };
        assert_eq!(s.value(&Potential::Free, Units::default()), 1.0);
        let back = ActionSegment {
            a: 1.0,
            x: 0.0,
            epsilon: 0.5,
        };
        let h = Potential::Harmonic { omega: 2.0 };
        assert_eq!(s.value(&h, Units::default()), back.value(&h, Units::default()));
    }

    #[test]
    fn tabulated_interpolates_and_checks_range() {
        let p = Potential::Tabulated {
            x: vec![-1.0, 0.0, 1.0],
            v: vec![1.0, 0.0, 1.0],
        };
        assert_eq!(p.value(0.5, Units::default()), 0.5);
        assert_eq!(p.value(1.0, Units::default()), 1.0);
        assert!(p.value(1.5, Units::default()).is_nan());
        let inside = Grid::new(-1.0, 1.0, 11).unwrap();
        assert!(p.validate_on(&inside, Units::default()).is_ok());
        let outside = Grid::new(-2.0, 1.0, 11).unwrap();
        assert!(p.validate_on(&outside, Units::default()).is_err());
    }
}
