//! The short-time propagator as a lattice convolution.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use statrs::function::erf::erfc;

use super::{Grid, LatticeWavefunction, PathIntegralError, Potential, Units};
use crate::amplitude::Amplitude;

/// Largest tolerated `|norm − 1|` of one step before renormalization.
pub const MAX_DRIFT: f64 = 1e-3;

/// Least acceptable `π√(ħε/m)/Δx`: how many Fresnel widths `√(ħε/m)` fit
/// inside the Nyquist radius `πħε/(mΔx)`.
pub const MIN_RESOLUTION: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// Fades the kernel out around `d_c = min(width·√(ħε/m), πħε/(mΔx))`
    /// with `½ erfc((|x − a| − d_c)/w)`, `w = d_c/8`, and sums over
    /// `|x − a| ≤ d_c + 6w`. Past the second bound of `d_c` the kernel's
    /// phase step per grid point exceeds `π`. The fade has a Gaussian
    /// spectrum, so the cut costs `~exp(−(m d_c w/ħε)²/4)`.
    Windowed { width: f64 },
    /// Every lattice point, no fade. Only alias-free when the kernel's
    /// alias period `2πħε/(mΔx)` exceeds the grid length.
    Dense,
}

impl Default for Kernel {
    fn default() -> Self {
        Kernel::Windowed { width: 24.0 }
    }
}

/// Fade of the windowed kernel at distance `d` for centre `centre`.
fn fade(d: f64, centre: f64) -> f64 {
    0.5 * erfc((d.abs() - centre) / (centre / FADE_SHARPNESS))
}

const FADE_SHARPNESS: f64 = 8.0;
const FADE_TAIL: f64 = 6.0;

/// Precomputed kernel, potential phases and prefactor for one `(grid, ε)`.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: Grid,
    epsilon: f64,
    radius: usize,
    /// Indexed by offset `i − j + radius`.
    kinetic: Vec<Amplitude>,
    /// Indexed by `i + j`: the phase at the midpoint `x_min + (i+j)Δx/2`.
    potential: Vec<Amplitude>,
    prefactor: Amplitude,
}

/// Result of [`Propagator::run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub wavefunction: LatticeWavefunction,
    pub steps: usize,
    /// Largest pre-renormalization norm drift over all steps.
    pub max_drift: f64,
}

impl Propagator {
    pub fn new(
        grid: Grid,
        units: Units,
        potential: &Potential,
        epsilon: f64,
        kernel: Kernel,
    ) -> Result<Self, PathIntegralError> {
        units.validate()?;
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(PathIntegralError::InvalidStep(epsilon));
        }
        potential.validate_on(&grid, units)?;
        let (hbar, m, dx, n) = (units.hbar, units.mass, grid.dx(), grid.len());
        let fresnel = (hbar * epsilon / m).sqrt();
        let alias_free = PI * hbar * epsilon / (m * dx);
        let (radius, centre) = match kernel {
            Kernel::Windowed { width } => {
                let ratio = PI * fresnel / dx;
                if ratio < MIN_RESOLUTION {
                    return Err(PathIntegralError::Unresolved {
                        ratio,
                        min: MIN_RESOLUTION,
                    });
                }
                let centre = (width * fresnel).min(alias_free);
                let reach = centre * (1.0 + FADE_TAIL / FADE_SHARPNESS);
                (((reach / dx).floor() as usize).min(n - 1), Some(centre))
            }
            Kernel::Dense => {
                let length = grid.x_max() - grid.x_min();
                if 2.0 * alias_free <= length {
                    return Err(PathIntegralError::Aliased {
                        period: 2.0 * alias_free,
                        length,
                    });
                }
                (n - 1, None)
            }
        };
        let kinetic = (0..=2 * radius)
            .map(|k| {
                let d = (k as f64 - radius as f64) * dx;
                let taper = centre.map_or(1.0, |c| fade(d, c));
                Amplitude::from_polar(taper, m * d * d / (2.0 * hbar * epsilon))
            })
            .collect();
        let potential = (0..2 * n - 1)
            .map(|s| {
                let x = grid.x_min() + s as f64 * dx / 2.0;
                Amplitude::from_polar(1.0, -epsilon * potential.value(x, units) / hbar)
            })
            .collect();
        let prefactor = Amplitude::from_polar((m / (2.0 * PI * hbar * epsilon)).sqrt() * dx, -FRAC_PI_4);
        Ok(Propagator {
            grid,
            epsilon,
            radius,
            kinetic,
            potential,
            prefactor,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Half-width of the summation window in grid points.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// One step without renormalization.
    pub fn apply(&self, psi: &LatticeWavefunction) -> Vec<Amplitude> {
        let n = self.grid.len();
        let r = self.radius;
        let values = psi.values();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let lo = i.saturating_sub(r);
                let hi = (i + r).min(n - 1);
                let sum: Amplitude = (lo..=hi)
                    .map(|j| self.kinetic[i + r - j] * self.potential[i + j] * values[j])
                    .sum();
                sum * self.prefactor
            })
            .collect()
    }

    /// One renormalized step and its norm drift.
    pub fn step(&self, psi: &LatticeWavefunction) -> Result<(LatticeWavefunction, f64), PathIntegralError> {
        let mut next = psi.evolved(self.apply(psi), self.epsilon);
        let drift = (next.normalize()? - 1.0).abs();
        Ok((next, drift))
    }

    /// Runs `steps` steps, calling `observe` after each one. Aborts when a
    /// step's drift exceeds [`MAX_DRIFT`].
    pub fn run(
        &self,
        psi: &LatticeWavefunction,
        steps: usize,
        mut observe: impl FnMut(usize, &LatticeWavefunction),
    ) -> Result<Propagation, PathIntegralError> {
        let mut current = psi.clone();
        let mut max_drift = 0.0f64;
        for k in 1..=steps {
            let (next, drift) = self.step(&current)?;
            if drift > MAX_DRIFT {
                return Err(PathIntegralError::Unstable { step: k, drift });
            }
            max_drift = max_drift.max(drift);
            observe(k, &next);
            current = next;
        }
        Ok(Propagation {
            wavefunction: current,
            steps,
            max_drift,
        })
    }
}

/// Number of steps of `epsilon` that make up `t`.
pub fn steps_for(t: f64, epsilon: f64) -> Result<usize, PathIntegralError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(PathIntegralError::InvalidStep(epsilon));
    }
    let k = (t / epsilon).round();
    if !(t >= 0.0 && t.is_finite()) || (k * epsilon - t).abs() > 1e-9 * t.abs().max(1.0) {
        return Err(PathIntegralError::NotAMultiple { t, epsilon });
    }
    Ok(k as usize)
}

/// One step with the default windowed kernel.
pub fn step(
    psi: &LatticeWavefunction,
    potential: &Potential,
    epsilon: f64,
) -> Result<LatticeWavefunction, PathIntegralError> {
    let p = Propagator::new(*psi.grid(), psi.units(), potential, epsilon, Kernel::default())?;
    Ok(p.run(psi, 1, |_, _| {})?.wavefunction)
}

/// Evolves to `t_final` in steps of `epsilon` with the default kernel.
pub fn propagate(
    psi: &LatticeWavefunction,
    potential: &Potential,
    t_final: f64,
    epsilon: f64,
) -> Result<LatticeWavefunction, PathIntegralError> {
    let steps = steps_for(t_final, epsilon)?;
    let p = Propagator::new(*psi.grid(), psi.units(), potential, epsilon, Kernel::default())?;
    Ok(p.run(psi, steps, |_, _| {})?.wavefunction)
}
