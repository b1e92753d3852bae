//! Crank-Nicolson solver of the Schrödinger equation, with hard walls.

use super::{steps_for, Grid, LatticeWavefunction, PathIntegralError, Potential, Units};
use crate::amplitude::Amplitude;

/// Solves `(1 + iΔtH/2ħ)ψ' = (1 − iΔtH/2ħ)ψ` with the three-point
/// Laplacian and `ψ = 0` beyond the grid. The tridiagonal system is
/// factored once (Thomas algorithm).
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    grid: Grid,
    dt: f64,
    /// Diagonal of `1 − iΔtH/2ħ`.
    explicit_diag: Vec<Amplitude>,
    /// Off-diagonal of `1 − iΔtH/2ħ`; the implicit side has its negative.
    explicit_off: Amplitude,
    implicit_off: Amplitude,
    /// Forward-sweep coefficients `c'_j` and pivots of the implicit matrix.
    sweep: Vec<Amplitude>,
    pivots: Vec<Amplitude>,
}

impl CrankNicolson {
    pub fn new(grid: Grid, units: Units, potential: &Potential, dt: f64) -> Result<Self, PathIntegralError> {
        units.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(PathIntegralError::InvalidStep(dt));
        }
        potential.validate_on(&grid, units)?;
        let kappa = Amplitude::new(0.0, dt / (2.0 * units.hbar));
        let hop = units.hbar * units.hbar / (2.0 * units.mass * grid.dx() * grid.dx());
        let h_diag: Vec<f64> = grid.points().map(|x| 2.0 * hop + potential.value(x, units)).collect();
        let explicit_diag = h_diag.iter().map(|h| 1.0 - kappa * h).collect();
        let implicit_diag: Vec<Amplitude> = h_diag.iter().map(|h| 1.0 + kappa * h).collect();
        let implicit_off = -kappa * hop;
        let mut sweep = Vec::with_capacity(grid.len());
        let mut pivots = Vec::with_capacity(grid.len());
        for (j, d) in implicit_diag.iter().enumerate() {
            let pivot = if j == 0 { *d } else { d - implicit_off * sweep[j - 1] };
            pivots.push(pivot);
            sweep.push(implicit_off / pivot);
        }
        Ok(CrankNicolson {
            grid,
            dt,
            explicit_diag,
            explicit_off: kappa * hop,
            implicit_off,
            sweep,
            pivots,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, psi: &LatticeWavefunction) -> LatticeWavefunction {
        assert_eq!(psi.grid(), &self.grid, "wavefunction lives on a different grid");
        let v = psi.values();
        let n = v.len();
        let mut y = Vec::with_capacity(n);
        for j in 0..n {
            let mut rhs = self.explicit_diag[j] * v[j];
            if j > 0 {
                rhs += self.explicit_off * v[j - 1];
            }
            if j + 1 < n {
                rhs += self.explicit_off * v[j + 1];
            }
            let prev = if j == 0 { Amplitude::default() } else { y[j - 1] };
            y.push((rhs - self.implicit_off * prev) / self.pivots[j]);
        }
        for j in (0..n - 1).rev() {
            y[j] = y[j] - self.sweep[j] * y[j + 1];
        }
        psi.evolved(y, self.dt)
    }

    pub fn propagate(&self, psi: &LatticeWavefunction, t: f64) -> Result<LatticeWavefunction, PathIntegralError> {
        let steps = steps_for(t, self.dt)?;
        Ok((0..steps).fold(psi.clone(), |p, _| self.step(&p)))
    }
}
