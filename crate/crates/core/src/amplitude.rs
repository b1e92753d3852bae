//! Complex amplitudes and path clocks.

use num_complex::Complex64;

use crate::angle::canonical_phase;

/// Probability amplitude. Its Born-rule probability is `norm_sqr()`.
pub type Amplitude = Complex64;

/// Default absolute tolerance for amplitude and probability comparisons.
pub const TOLERANCE: f64 = 1e-12;

/// The rotating unit phase carried along a path.
///
/// Stored as an angle only, so its modulus is exactly one by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathClock {
    phase: f64,
}

impl PathClock {
    pub fn new(phase: f64) -> Self {
        PathClock {
            phase: canonical_phase(phase),
        }
    }

    /// Current clock reading in `[0, 2π)`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn advance(&mut self, by: f64) {
        self.phase = canonical_phase(self.phase + by);
    }

    pub fn advanced(mut self, by: f64) -> Self {
        self.advance(by);
        self
    }

    /// `modulus · e^{iφ}`.
    pub fn scaled(&self, modulus: f64) -> Amplitude {
        Complex64::from_polar(modulus, self.phase)
    }
}

/// Largest absolute componentwise difference between two amplitude lists
/// after removing the best-fit global phase from `a`.
///
/// Returns the deviation and the phase `φ` such that `a·e^{iφ} ≈ b`.
pub fn max_deviation_up_to_phase(a: &[Amplitude], b: &[Amplitude]) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "amplitude lists differ in length");
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
    let rot = Complex64::from_polar(1.0, phase);
    let dev = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x * rot - y;
            d.re.abs().max(d.im.abs())
        })
        .fold(0.0, f64::max);
    (dev, phase)
}
