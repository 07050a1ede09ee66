//! Rational spectral discretization of the Hardy space L²₊(ℝ).
//!
//! Fields are expanded in the Malmquist–Takenaka basis
//!
//! ```text
//! ρ_k(x) = √(s/π) · (x − is)^k / (x + is)^{k+1},    k ∈ ℤ,
//! ```
//!
//! which is orthonormal in L²(ℝ); the modes k ≥ 0 span L²₊ and the modes
//! k < 0 span its orthogonal complement. Under x = s·tan(θ/2) the basis
//! becomes a Fourier basis in θ, so a uniform θ-grid of `n` points and one
//! FFT move between point values and coefficients. The Szegő projector
//! drops the k < 0 modes; η = 1/(x+i) is √π·ρ_0 when s = 1.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::quad;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default number of collocation points.
pub const DEFAULT_POINTS: usize = 4096;

/// Relative L² size of the coefficient tail dropped when truncating series
/// for point evaluation and frequency-side quadrature.
const DEGREE_TOL: f64 = 1e-14;

/// Uniform θ-grid carrying the rational basis.
pub struct SpectralGrid {
    n: usize,
    scale: f64,
    theta: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    frame: Vec<Complex64>,
    half_shift: Vec<Complex64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n_points", &self.n)
            .field("map_scale", &self.scale)
            .finish()
    }
}

impl SpectralGrid {
    /// Builds a grid with `n_points` collocation points (a power of two,
    /// at least 16) and map scale `s` > 0.
    pub fn new(n_points: usize, map_scale: f64) -> Result<Arc<Self>> {
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 16, got {n_points}"
            )));
        }
        if !(map_scale.is_finite() && map_scale > 0.0) {
            return Err(Error::InvalidGrid(format!("map scale must be positive, got {map_scale}")));
        }
        let n = n_points;
        let s = map_scale;
        let h = 2.0 * PI / n as f64;
        let theta: Vec<f64> = (0..n).map(|j| -PI + (j as f64 + 0.5) * h).collect();
        let nodes: Vec<f64> = theta.iter().map(|t| s * (0.5 * t).tan()).collect();
        let weights = nodes.iter().map(|x| h * 0.5 * s * (1.0 + (x / s) * (x / s))).collect();
        let norm = (PI / s).sqrt();
        let frame = nodes.iter().map(|&x| Complex64::new(x, s) * norm).collect();
        let half_shift = (0..n)
            .map(|b| {
                let k = mode_of_bin(b, n) as f64;
                Complex64::from_polar(1.0, -0.5 * k * h)
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(Arc::new(SpectralGrid { n, scale: s, theta, nodes, weights, frame, half_shift, fwd, inv }))
    }

    pub fn default_grid() -> Arc<Self> {
        Self::new(DEFAULT_POINTS, 1.0).expect("default grid is valid")
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn map_scale(&self) -> f64 {
        self.scale
    }

    /// Number of Hardy modes k = 0..n/2 − 1.
    pub fn hardy_modes(&self) -> usize {
        self.n / 2
    }

    /// Collocation points x_j = s·tan(θ_j/2).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Quadrature weights of the periodic trapezoid rule in θ, expressed in x.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Signed mode index k ∈ [−n/2, n/2) of every FFT bin, in bin order.
    pub fn mode_indices(&self) -> Vec<i64> {
        (0..self.n).map(|b| mode_of_bin(b, self.n)).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    pub(crate) fn same_as(&self, other: &SpectralGrid) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.scale != other.scale {
            return Err(Error::InvalidGrid(format!(
                "map scales differ: {} vs {}",
                self.scale, other.scale
            )));
        }
        Ok(())
    }

    /// All n basis coefficients of a sampled function, in FFT-bin order.
    pub fn analyze(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(samples.len())?;
        let mut buf: Vec<Complex64> =
            samples.iter().zip(&self.frame).map(|(f, w)| f * w).collect();
        self.fwd.process(&mut buf);
        let inv_n = 1.0 / self.n as f64;
        for (c, sh) in buf.iter_mut().zip(&self.half_shift) {
            *c *= sh * inv_n;
        }
        Ok(buf)
    }

    /// Hardy coefficients (k = 0..n/2) of a sampled function plus the squared
    /// L² mass carried by the discarded k < 0 modes.
    pub fn hardy_coefficients(&self, samples: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
        let mut all = self.analyze(samples)?;
        let half = self.n / 2;
        let negative_mass = all[half..].iter().map(|c| c.norm_sqr()).sum();
        all.truncate(half);
        Ok((all, negative_mass))
    }

    /// Point values of the Hardy series with the given coefficients.
    pub fn synthesize_coefficients(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (b, c) in coeffs.iter().enumerate().take(self.n / 2) {
            buf[b] = c / self.half_shift[b];
        }
        self.inv.process(&mut buf);
        for (v, w) in buf.iter_mut().zip(&self.frame) {
            *v /= w;
        }
        buf
    }

    /// Periodic trapezoid rule in θ for ∫ f dx.
    pub fn quadrature(&self, samples: &[f64]) -> Result<f64> {
        self.check_len(samples.len())?;
        Ok(samples.iter().zip(&self.weights).map(|(f, w)| f * w).sum())
    }

    pub fn quadrature_complex(&self, samples: &[Complex64]) -> Result<Complex64> {
        self.check_len(samples.len())?;
        Ok(samples.iter().zip(&self.weights).map(|(f, w)| f * w).sum())
    }
}

fn mode_of_bin(b: usize, n: usize) -> i64 {
    if b < n / 2 {
        b as i64
    } else {
        b as i64 - n as i64
    }
}

/// Element of L²₊ on a [`SpectralGrid`]: point values and Hardy coefficients
/// kept in sync. Immutable once built.
#[derive(Clone)]
pub struct HardyField {
    grid: Arc<SpectralGrid>,
    values: Vec<Complex64>,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for HardyField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HardyField")
            .field("n_points", &self.grid.n)
            .field("l2_norm", &self.l2_norm())
            .finish()
    }
}

impl HardyField {
    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        HardyField {
            grid: grid.clone(),
            values: vec![zero; grid.n],
            coeffs: vec![zero; grid.n / 2],
        }
    }

    /// Field with the given Hardy coefficients (missing high modes are zero).
    pub fn from_coefficients(grid: &Arc<SpectralGrid>, coeffs: &[Complex64]) -> Result<Self> {
        let half = grid.n / 2;
        if coeffs.len() > half {
            return Err(Error::DimensionMismatch { expected: half, got: coeffs.len() });
        }
        let mut c = coeffs.to_vec();
        c.resize(half, Complex64::new(0.0, 0.0));
        let values = grid.synthesize_coefficients(&c);
        Ok(HardyField { grid: grid.clone(), values, coeffs: c })
    }

    fn from_coeff_vec(grid: &Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Self {
        let values = grid.synthesize_coefficients(&coeffs);
        HardyField { grid: grid.clone(), values, coeffs }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Hardy coefficients, mode k at index k.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Same L² norm computed from point values by quadrature.
    pub fn l2_norm_sq_physical(&self) -> f64 {
        self.values.iter().zip(&self.grid.weights).map(|(v, w)| v.norm_sqr() * w).sum()
    }

    /// (1/2π)∫ ξ|ĥ(ξ)|² dξ = ⟨−i∂ₓh, h⟩.
    pub fn h12_homogeneous_sq(&self) -> f64 {
        let d = self.neg_i_derivative_coeffs();
        d.iter().zip(&self.coeffs).map(|(a, b)| (a * b.conj()).re).sum()
    }

    /// (1/2π)∫ (1+ξ²)^{1/2}|ĥ(ξ)|² dξ.
    pub fn h12_sq(&self) -> f64 {
        let k = self.effective_degree();
        self.h12_homogeneous_sq() + bounded_symbol_part(&self.coeffs[..k], self.grid.scale)
    }

    /// Smallest K such that the modes k ≥ K carry at most a fraction
    /// `DEGREE_TOL` of the L² norm (roundoff sits near 1e-16 per mode).
    pub fn effective_degree(&self) -> usize {
        let total = self.l2_norm_sq();
        if total == 0.0 {
            return 0;
        }
        let cut = DEGREE_TOL * DEGREE_TOL * total;
        let mut tail = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            tail += c.norm_sqr();
            if tail > cut {
                return k + 1;
            }
        }
        0
    }

    /// Copy with every mode k ≥ `degree` set to zero.
    pub fn truncated(&self, degree: usize) -> HardyField {
        if degree >= self.coeffs.len() {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        for v in c.iter_mut().skip(degree) {
            *v = Complex64::new(0.0, 0.0);
        }
        HardyField::from_coeff_vec(&self.grid, c)
    }

    /// Copy without the roundoff-level tail beyond [`Self::effective_degree`].
    pub fn denoised(&self) -> HardyField {
        self.truncated(self.effective_degree())
    }

    /// L² mass in the top quarter of the Hardy modes, relative to the total.
    /// Products of fields alias once this is not negligible.
    pub fn top_mode_fraction(&self) -> f64 {
        let total = self.l2_norm_sq();
        if total == 0.0 {
            return 0.0;
        }
        let half = self.coeffs.len();
        let top: f64 = self.coeffs[half / 2..].iter().map(|c| c.norm_sqr()).sum();
        top / total
    }

    fn neg_i_derivative_coeffs(&self) -> Vec<Complex64> {
        // −i∂ₓρ_k = (1/2s)[(2k+1)ρ_k − kρ_{k−1} − (k+1)ρ_{k+1}]
        let c = &self.coeffs;
        let m = c.len();
        let f = 0.5 / self.grid.scale;
        (0..m)
            .map(|j| {
                let jf = j as f64;
                let mut acc = c[j] * (2.0 * jf + 1.0);
                if j + 1 < m {
                    acc -= c[j + 1] * (jf + 1.0);
                }
                if j > 0 {
                    acc -= c[j - 1] * jf;
                }
                acc * f
            })
            .collect()
    }

    /// ∂ₓh.
    pub fn derivative(&self) -> HardyField {
        let d: Vec<Complex64> = self.neg_i_derivative_coeffs().into_iter().map(|c| c * I).collect();
        HardyField::from_coeff_vec(&self.grid, d)
    }

    /// x·∂ₓh (scale-free: x∂ₓρ_k = ½[kρ_{k−1} − ρ_k − (k+1)ρ_{k+1}]).
    pub fn x_derivative(&self) -> HardyField {
        let c = &self.coeffs;
        let m = c.len();
        let d = (0..m)
            .map(|j| {
                let jf = j as f64;
                let mut acc = -c[j];
                if j + 1 < m {
                    acc += c[j + 1] * (jf + 1.0);
                }
                if j > 0 {
                    acc -= c[j - 1] * jf;
                }
                acc * 0.5
            })
            .collect();
        HardyField::from_coeff_vec(&self.grid, d)
    }

    pub fn mul_i(&self) -> HardyField {
        self.scale(I)
    }

    pub fn scale(&self, z: Complex64) -> HardyField {
        HardyField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * z).collect(),
            coeffs: self.coeffs.iter().map(|v| v * z).collect(),
        }
    }

    pub fn scale_real(&self, a: f64) -> HardyField {
        self.scale(Complex64::new(a, 0.0))
    }

    /// self + a·other, combining values and coefficients without transforms.
    pub fn axpy(&self, a: Complex64, other: &HardyField) -> HardyField {
        debug_assert_eq!(self.grid.n, other.grid.n);
        HardyField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| x + a * y).collect(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + a * y).collect(),
        }
    }

    /// Linear combination Σ wᵢ·fᵢ.
    pub fn combine(grid: &Arc<SpectralGrid>, terms: &[(Complex64, &HardyField)]) -> HardyField {
        let mut out = HardyField::zeros(grid);
        for (w, f) in terms {
            for (o, v) in out.values.iter_mut().zip(&f.values) {
                *o += w * v;
            }
            for (o, v) in out.coeffs.iter_mut().zip(&f.coeffs) {
                *o += w * v;
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Evaluates the series at an arbitrary real point.
    pub fn evaluate(&self, y: f64) -> Complex64 {
        let k = self.effective_degree();
        eval_series(&self.coeffs[..k], self.grid.scale, y)
    }

    /// Evaluates the series at many real points.
    pub fn evaluate_many(&self, ys: &[f64]) -> Vec<Complex64> {
        use rayon::prelude::*;
        let k = self.effective_degree();
        let c = &self.coeffs[..k];
        let s = self.grid.scale;
        ys.par_iter().map(|&y| eval_series(c, s, y)).collect()
    }

    /// Π(m·self) for a pointwise multiplier given on the grid.
    pub fn multiply_project(&self, multiplier: &[Complex64]) -> Result<HardyField> {
        let prod: Vec<Complex64> =
            self.values.iter().zip(multiplier).map(|(a, b)| a * b).collect();
        szego_project(&self.grid, &prod)
    }
}

fn eval_series(c: &[Complex64], s: f64, y: f64) -> Complex64 {
    if c.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let den = Complex64::new(y, s);
    let b = Complex64::new(y, -s) / den;
    let mut acc = c[c.len() - 1];
    for ck in c[..c.len() - 1].iter().rev() {
        acc = acc * b + ck;
    }
    acc * (s / PI).sqrt() / den
}

/// ∫₀^∞ r(t) e^{−t} |Σ c_k L_k(t)|² dt with r = √(1+τ²) − τ, τ = t/2s: the
/// part of the inhomogeneous H^{1/2} symbol left after removing |ξ|.
///
/// The Fourier transform of ρ_k is −2i√(πs) e^{−sξ} L_k(2sξ) on ξ > 0, so
/// after t = 2sξ the norm is an integral against Laguerre functions. The
/// substitution t = v² makes their oscillation uniform in v.
fn bounded_symbol_part(c: &[Complex64], s: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    let k = c.len() as f64;
    let t_max = 4.0 * k + 2.0 + 12.0 * (4.0 * k + 2.0).cbrt() + 80.0;
    let v_max = t_max.sqrt();
    let wavelength = PI / (4.0 * k + 2.0).sqrt();
    let r = |t: f64| {
        let tau = t / (2.0 * s);
        1.0 / ((1.0 + tau * tau).sqrt() + tau)
    };
    quad::composite(
        |v| {
            let t = v * v;
            let (sum, log_scale) = laguerre_sum(c, t);
            let mag = sum.norm_sqr() * (2.0 * log_scale - t).exp();
            r(t) * mag * 2.0 * v
        },
        0.0,
        v_max,
        wavelength,
    )
}

/// Σ c_k L_k(t) returned as (value, ln scale) with the true sum equal to
/// value·e^{ln scale}; rescaling keeps the recurrence inside f64 range.
fn laguerre_sum(c: &[Complex64], t: f64) -> (Complex64, f64) {
    const BIG: f64 = 1e150;
    let mut log_scale = 0.0;
    let mut prev = 1.0f64;
    let mut sum = c[0] * prev;
    if c.len() == 1 {
        return (sum, log_scale);
    }
    let mut cur = 1.0 - t;
    sum += c[1] * cur;
    for (kk, ck) in c.iter().enumerate().skip(2) {
        let km = (kk - 1) as f64;
        let next = ((2.0 * km + 1.0 - t) * cur - km * prev) / (km + 1.0);
        prev = cur;
        cur = next;
        sum += ck * cur;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            sum /= BIG;
            log_scale += BIG.ln();
        }
    }
    (sum, log_scale)
}

macro_rules! field_binop {
    ($tr:ident, $method:ident, $sign:expr) => {
        impl $tr<&HardyField> for &HardyField {
            type Output = HardyField;
            fn $method(self, rhs: &HardyField) -> HardyField {
                self.axpy(Complex64::new($sign, 0.0), rhs)
            }
        }
    };
}
field_binop!(Add, add, 1.0);
field_binop!(Sub, sub, -1.0);

impl Mul<Complex64> for &HardyField {
    type Output = HardyField;
    fn mul(self, z: Complex64) -> HardyField {
        self.scale(z)
    }
}

impl Mul<f64> for &HardyField {
    type Output = HardyField;
    fn mul(self, a: f64) -> HardyField {
        self.scale_real(a)
    }
}

impl Neg for &HardyField {
    type Output = HardyField;
    fn neg(self) -> HardyField {
        self.scale_real(-1.0)
    }
}

/// Π f: keeps the k ≥ 0 modes of a sampled function.
pub fn szego_project(grid: &Arc<SpectralGrid>, samples: &[Complex64]) -> Result<HardyField> {
    let (coeffs, _) = grid.hardy_coefficients(samples)?;
    Ok(HardyField::from_coeff_vec(grid, coeffs))
}

/// Supported Sobolev indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SobolevIndex {
    Zero,
    Half,
}

impl TryFrom<f64> for SobolevIndex {
    type Error = Error;
    fn try_from(s: f64) -> Result<Self> {
        if s == 0.0 {
            Ok(SobolevIndex::Zero)
        } else if s == 0.5 {
            Ok(SobolevIndex::Half)
        } else {
            Err(Error::UnsupportedExponent(s))
        }
    }
}

/// ((1/2π)∫(1+ξ²)^s|ĥ|²dξ)^{1/2}, or with |ξ|^{2s} when `homogeneous`.
pub fn sobolev_norm(h: &HardyField, s: f64, homogeneous: bool) -> Result<f64> {
    let v = match (SobolevIndex::try_from(s)?, homogeneous) {
        (SobolevIndex::Zero, _) => h.l2_norm_sq(),
        (SobolevIndex::Half, true) => h.h12_homogeneous_sq(),
        (SobolevIndex::Half, false) => h.h12_sq(),
    };
    Ok(v.max(0.0).sqrt())
}

/// ⟨u, v⟩ = Re ∫ u v̄.
pub fn inner_real(u: &HardyField, v: &HardyField) -> Result<f64> {
    u.grid.same_as(&v.grid)?;
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| (a * b.conj()).re).sum())
}

/// ω(u, v) = Im ∫ u v̄.
pub fn symplectic_pair(u: &HardyField, v: &HardyField) -> Result<f64> {
    u.grid.same_as(&v.grid)?;
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| (a * b.conj()).im).sum())
}

/// Hermitian product (u, v) = ∫ u v̄.
pub fn hermitian(u: &HardyField, v: &HardyField) -> Result<Complex64> {
    u.grid.same_as(&v.grid)?;
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b.conj()).sum())
}

/// Result of sampling a closed-form function onto the grid.
#[derive(Debug, Clone)]
pub struct Synthesized {
    pub field: HardyField,
    /// Squared L² mass discarded by the projection.
    pub negative_mass: f64,
}

/// Samples `f` at the collocation points and projects onto L²₊.
pub fn synthesize<F>(grid: &Arc<SpectralGrid>, f: F) -> Result<Synthesized>
where
    F: Fn(f64) -> Complex64,
{
    let mut samples = Vec::with_capacity(grid.n);
    for &x in &grid.nodes {
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteSample { x });
        }
        samples.push(v);
    }
    let (coeffs, negative_mass) = grid.hardy_coefficients(&samples)?;
    Ok(Synthesized { field: HardyField::from_coeff_vec(grid, coeffs), negative_mass })
}

/// η(x) = 1/(x + i).
pub fn eta(x: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / Complex64::new(x, 1.0)
}

/// η sampled on the grid.
pub fn eta_field(grid: &Arc<SpectralGrid>) -> HardyField {
    synthesize(grid, eta).expect("η is finite on the real line").field
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Arc<SpectralGrid> {
        SpectralGrid::new(1024, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(SpectralGrid::new(8, 1.0).is_err());
        assert!(SpectralGrid::new(100, 1.0).is_err());
        assert!(SpectralGrid::new(64, 0.0).is_err());
        let g = SpectralGrid::new(64, 2.0).unwrap();
        assert_eq!(g.hardy_modes(), 32);
        let modes = g.mode_indices();
        assert_eq!(modes[0], 0);
        assert_eq!(modes[32], -32);
        // symmetric except the single Nyquist mode
        assert_eq!(modes.iter().filter(|&&k| k > 0).count() + 1, modes.iter().filter(|&&k| k < 0).count());
    }

    #[test]
    fn eta_is_a_single_mode() {
        let g = grid();
        let e = synthesize(&g, eta).unwrap();
        assert!(e.negative_mass < 1e-28);
        let c = e.field.coefficients();
        assert_relative_eq!(c[0].re, PI.sqrt(), epsilon = 1e-13);
        assert!(c[1..].iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn cosine_projects_to_positive_half() {
        // 2·Re ρ_1-type function: f = ρ_1 + conj(ρ_1); its Hardy part is ρ_1.
        let g = grid();
        let rho1 = |x: f64| {
            let z = Complex64::new(x, -1.0) / Complex64::new(x, 1.0);
            z / Complex64::new(x, 1.0) / PI.sqrt()
        };
        let f: Vec<Complex64> = g.nodes().iter().map(|&x| rho1(x) + rho1(x).conj()).collect();
        let p = szego_project(&g, &f).unwrap();
        let expected = synthesize(&g, rho1).unwrap().field;
        assert!((&p - &expected).l2_norm() < 1e-13);
    }

    #[test]
    fn partial_fraction_oracle() {
        // 1/(1+x²) = (1/2i)(1/(x−i) − 1/(x+i)); its Hardy part is (i/2)η.
        let g = grid();
        let f: Vec<Complex64> =
            g.nodes().iter().map(|&x| Complex64::new(1.0 / (1.0 + x * x), 0.0)).collect();
        let p = szego_project(&g, &f).unwrap();
        let expected = eta_field(&g).scale(I * 0.5);
        assert!((&p - &expected).l2_norm() < 1e-13);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = grid();
        let err = szego_project(&g, &[Complex64::new(1.0, 0.0); 10]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1024, got: 10 }));
        let other = SpectralGrid::new(512, 1.0).unwrap();
        assert!(inner_real(&eta_field(&g), &eta_field(&other)).is_err());
    }

    #[test]
    fn sobolev_norms_of_eta() {
        let g = grid();
        let e = eta_field(&g);
        assert_relative_eq!(sobolev_norm(&e, 0.0, false).unwrap(), PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(
            sobolev_norm(&e, 0.5, true).unwrap(),
            (PI / 2.0).sqrt(),
            max_relative = 1e-13
        );
        // scipy quad of (1/2π)∫√(1+ξ²)·4π²e^{−2ξ}dξ
        assert_relative_eq!(e.h12_sq(), 3.71983494826407002, max_relative = 1e-12);
        assert_eq!(sobolev_norm(&HardyField::zeros(&g), 0.5, false).unwrap(), 0.0);
        assert!(matches!(sobolev_norm(&e, 1.0, false), Err(Error::UnsupportedExponent(_))));
    }

    #[test]
    fn inhomogeneous_norm_of_shifted_soliton_matches_quadrature_oracle() {
        // α/(x−a+i/μ), α=0.8, μ=2, a=1: (1/2π)∫√(1+ξ²)4π²α²e^{−2ξ/μ}dξ (scipy quad)
        let g = grid();
        let f = synthesize(&g, |x| Complex64::new(0.8, 0.0) / Complex64::new(x - 1.0, 0.5))
            .unwrap()
            .field;
        assert_relative_eq!(f.h12_sq(), 6.18813241478396669, max_relative = 1e-11);
        // ρ_2: (1/2π)∫√(1+ξ²)·4π e^{−2ξ}L₂(2ξ)² dξ
        let mut c = vec![Complex64::new(0.0, 0.0); 3];
        c[2] = Complex64::new(1.0, 0.0);
        let r2 = HardyField::from_coefficients(&g, &c).unwrap();
        assert_relative_eq!(r2.h12_sq(), 2.84346492651395977, max_relative = 1e-11);
    }

    #[test]
    fn quadrature_examples() {
        let g = grid();
        let e = eta_field(&g);
        let m: Vec<f64> = e.values().iter().map(|v| v.norm_sqr()).collect();
        assert_relative_eq!(g.quadrature(&m).unwrap(), PI, max_relative = 1e-13);
        let q: Vec<f64> = e.values().iter().map(|v| v.norm_sqr().powi(2)).collect();
        assert_relative_eq!(g.quadrature(&q).unwrap(), PI / 2.0, max_relative = 1e-13);
        let lor: Vec<f64> = g.nodes().iter().map(|x| 1.0 / (1.0 + x * x)).collect();
        assert_relative_eq!(g.quadrature(&lor).unwrap(), PI, max_relative = 1e-13);
    }

    #[test]
    fn pairing_examples() {
        let g = grid();
        let e = eta_field(&g);
        assert_relative_eq!(inner_real(&e, &e).unwrap(), PI, max_relative = 1e-13);
        assert!(inner_real(&e, &e.mul_i()).unwrap().abs() < 1e-14);
        assert!(symplectic_pair(&e, &e).unwrap().abs() < 1e-14);
        // ω(−∂ₓη, η) = −π/2
        let e1 = -&e.derivative();
        assert_relative_eq!(symplectic_pair(&e1, &e).unwrap(), -PI / 2.0, max_relative = 1e-13);
    }

    #[test]
    fn synthesize_reports_non_finite_samples() {
        let g = grid();
        let err = synthesize(&g, |x| Complex64::new(1.0 / x.signum().max(0.0), 0.0)).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { .. }));
        let z = synthesize(&g, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(z.field.l2_norm(), 0.0);
    }

    #[test]
    fn soliton_mass_scales_with_alpha_squared_mu() {
        let g = grid();
        let (alpha, mu) = (1.3, 2.0);
        let f = synthesize(&g, |x| Complex64::new(alpha, 0.0) / Complex64::new(x, 1.0 / mu))
            .unwrap()
            .field;
        assert_relative_eq!(f.l2_norm_sq(), PI * alpha * alpha * mu, max_relative = 1e-12);
    }

    #[test]
    fn derivative_matches_closed_form() {
        let g = grid();
        let f = synthesize(&g, |x| Complex64::new(1.0, 0.0) / Complex64::new(x - 0.7, 0.8)).unwrap().field;
        let df = synthesize(&g, |x| {
            let z = Complex64::new(x - 0.7, 0.8);
            -Complex64::new(1.0, 0.0) / (z * z)
        })
        .unwrap()
        .field;
        assert!((&f.derivative() - &df).l2_norm() < 1e-11);
        let xdf = synthesize(&g, |x| {
            let z = Complex64::new(x - 0.7, 0.8);
            -Complex64::new(x, 0.0) / (z * z)
        })
        .unwrap()
        .field;
        assert!((&f.x_derivative() - &xdf).l2_norm() < 1e-11);
    }

    #[test]
    fn point_evaluation_reproduces_closed_form() {
        let g = grid();
        let prof = |x: f64| Complex64::new(0.3, 0.4) / Complex64::new(x + 2.0, 0.6);
        let f = synthesize(&g, prof).unwrap().field;
        for y in [-40.0, -3.3, 0.0, 0.25, 7.0, 1e4] {
            assert!((f.evaluate(y) - prof(y)).norm() < 1e-13);
        }
    }

    #[test]
    fn scaled_map_is_consistent() {
        let g = SpectralGrid::new(1024, 3.0).unwrap();
        let e = eta_field(&g);
        assert_relative_eq!(e.l2_norm_sq(), PI, max_relative = 1e-13);
        assert_relative_eq!(e.l2_norm_sq_physical(), PI, max_relative = 1e-13);
        assert_relative_eq!(e.h12_homogeneous_sq(), PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(e.h12_sq(), 3.71983494826407002, max_relative = 1e-11);
    }
}
