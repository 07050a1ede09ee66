//! Reproducible random Hardy fields.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spectral::{HardyField, SpectralGrid};

/// Decay exponent of the random coefficient envelope (1 + k)^{−p}.
pub const COEFF_DECAY: f64 = 1.5;

/// Random field with c_k = (N + iN)/√2 · (1 + k)^{−1.5} for k < `modes`.
pub fn random_field<R: Rng + ?Sized>(grid: &Arc<SpectralGrid>, rng: &mut R, modes: usize) -> HardyField {
    let modes = modes.min(grid.hardy_modes());
    let coeffs: Vec<Complex64> = (0..modes)
        .map(|k| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * (std::f64::consts::FRAC_1_SQRT_2 * (1.0 + k as f64).powf(-COEFF_DECAY))
        })
        .collect();
    HardyField::from_coefficients(grid, &coeffs).expect("modes fit the grid")
}

/// Random field with its first `drop` coefficients zeroed.
pub fn random_field_without_low_modes<R: Rng + ?Sized>(
    grid: &Arc<SpectralGrid>,
    rng: &mut R,
    modes: usize,
    drop: usize,
) -> HardyField {
    let f = random_field(grid, rng, modes);
    let mut c = f.coefficients().to_vec();
    for v in c.iter_mut().take(drop) {
        *v = Complex64::new(0.0, 0.0);
    }
    HardyField::from_coefficients(grid, &c).expect("same length")
}
