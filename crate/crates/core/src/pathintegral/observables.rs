//! Expectation values on the lattice.

use super::LatticeWavefunction;
use crate::amplitude::Amplitude;

/// `⟨x⟩ = Σ x_j |ψ_j|² Δx`.
pub fn expectation_x(psi: &LatticeWavefunction) -> f64 {
    let g = psi.grid();
    psi.values()
        .iter()
        .enumerate()
        .map(|(j, c)| g.x(j) * c.norm_sqr())
        .sum::<f64>()
        * g.dx()
}

/// Standard deviation of `|ψ|²`.
pub fn width(psi: &LatticeWavefunction) -> f64 {
    let g = psi.grid();
    let mean = expectation_x(psi);
    let var: f64 = psi
        .values()
        .iter()
        .enumerate()
        .map(|(j, c)| (g.x(j) - mean).powi(2) * c.norm_sqr())
        .sum::<f64>()
        * g.dx();
    var.sqrt()
}

/// `(ħ/m) Im Σ ψ_j* (ψ_{j+1} − ψ_{j−1})/(2Δx) Δx`, the real part of
/// `−(iħ/m)∫ψ*∂ψ/∂x dx`. Values beyond the grid are zero.
pub fn mean_velocity(psi: &LatticeWavefunction) -> f64 {
    let v = psi.values();
    let n = v.len();
    let at = |j: isize| {
        if j < 0 || j as usize >= n {
            Amplitude::default()
        } else {
            v[j as usize]
        }
    };
    let sum: Amplitude = (0..n as isize)
        .map(|j| v[j as usize].conj() * (at(j + 1) - at(j - 1)))
        .sum();
    let u = psi.units();
    u.hbar / u.mass * sum.im / 2.0
}

/// `√(Σ|a_j − b_j|² Δx)`. Both must live on the same grid.
pub fn l2_distance(a: &LatticeWavefunction, b: &LatticeWavefunction) -> f64 {
    assert_eq!(a.grid(), b.grid(), "wavefunctions live on different grids");
    let sum: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm_sqr()).sum();
    (sum * a.grid().dx()).sqrt()
}

/// [`l2_distance`] after rotating `a` by the global phase that best aligns
/// it with `b`.
pub fn l2_distance_up_to_phase(a: &LatticeWavefunction, b: &LatticeWavefunction) -> f64 {
    assert_eq!(a.grid(), b.grid(), "wavefunctions live on different grids");
    let overlap: Amplitude = a.values().iter().zip(b.values()).map(|(x, y)| x.conj() * y).sum();
    let rot = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Amplitude::new(1.0, 0.0)
    };
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x * rot - y).norm_sqr())
        .sum();
    (sum * a.grid().dx()).sqrt()
}
