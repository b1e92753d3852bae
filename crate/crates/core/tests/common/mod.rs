//! Closed-form wavefunctions used as oracles by several test targets.
#![allow(dead_code)]

use num_complex::Complex64;
use shadowpath::pathintegral::{Grid, LatticeWavefunction, Units};

/// Freely spreading Gaussian with `ħ = m = 1`, started as
/// `exp(−(x−x₀)²/(4σ₀²) + ik₀x)` at time zero. Known up to a global phase.
pub fn free_gaussian(grid: Grid, x0: f64, sigma0: f64, k0: f64, t: f64) -> LatticeWavefunction {
    let a = 1.0 / (4.0 * sigma0 * sigma0);
    let denom = Complex64::new(1.0, 2.0 * a * t);
    let values = grid
        .points()
        .map(|x| {
            let y = x - x0;
            let exponent = Complex64::new(-a * y * y, k0 * y - 0.5 * k0 * k0 * t) / denom;
            exponent.exp() / denom.sqrt()
        })
        .collect();
    LatticeWavefunction::new(grid, values, Units::default()).unwrap()
}

/// `|ψ(x,t)|²` width of the free packet.
pub fn free_width(sigma0: f64, t: f64) -> f64 {
    sigma0 * (1.0 + (t / (2.0 * sigma0 * sigma0)).powi(2)).sqrt()
}

/// Coherent state of `½ω²x²` (`ħ = m = 1`) displaced to `x₀` at rest at
/// time zero, up to a global phase.
pub fn coherent_state(grid: Grid, omega: f64, x0: f64, t: f64) -> LatticeWavefunction {
    let var = 1.0 / (2.0 * omega);
    let (xc, pc) = (x0 * (omega * t).cos(), -omega * x0 * (omega * t).sin());
    let values = grid
        .points()
        .map(|x| Complex64::from_polar((-(x - xc).powi(2) / (4.0 * var)).exp(), pc * x))
        .collect();
    LatticeWavefunction::new(grid, values, Units::default()).unwrap()
}

/// Least-squares slope of `ln error` against `ln ε`.
pub fn convergence_order(epsilons: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
