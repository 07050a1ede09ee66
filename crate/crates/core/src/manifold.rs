//! The group G of translations, amplitudes, phases and scalings, its action
//! g·u(x) = e^{iφ}αμ u(μ(x−a)), the Lie-algebra frame e₁..e₄ and the
//! symplectic geometry of the soliton manifold M = G·η.

use std::f64::consts::PI;
use std::ops::{Add, Index, Mul, Sub};
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{symplectic_pair, synthesize, HardyField, SpectralGrid, I};

/// Point (a, α, φ, μ) of G. The phase is kept continuous (not reduced mod
/// 2π) so that time series of φ can be differenced and compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: f64,
    pub alpha: f64,
    pub phi: f64,
    pub mu: f64,
}

impl GroupElement {
    pub fn new(a: f64, alpha: f64, phi: f64, mu: f64) -> Result<Self> {
        let g = GroupElement { a, alpha, phi, mu };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.a, self.alpha, self.phi, self.mu].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGroupElement(format!("non-finite entry in {self:?}")));
        }
        if self.alpha <= 0.0 || self.mu <= 0.0 {
            return Err(Error::InvalidGroupElement(format!(
                "alpha and mu must be positive, got alpha={} mu={}",
                self.alpha, self.mu
            )));
        }
        Ok(())
    }

    pub const fn identity() -> Self {
        GroupElement { a: 0.0, alpha: 1.0, phi: 0.0, mu: 1.0 }
    }

    /// g·g′ with a″ = a + a′/μ, α″ = αα′, φ″ = φ + φ′, μ″ = μμ′.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a + other.a / self.mu,
            alpha: self.alpha * other.alpha,
            phi: self.phi + other.phi,
            mu: self.mu * other.mu,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { a: -self.a * self.mu, alpha: 1.0 / self.alpha, phi: -self.phi, mu: 1.0 / self.mu }
    }

    /// Phase reduced to [0, 2π).
    pub fn phi_wrapped(&self) -> f64 {
        self.phi.rem_euclid(2.0 * PI)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.a, self.alpha, self.phi, self.mu]
    }

    pub fn from_array(v: [f64; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// Factors c with ∂_{gᵢ}(g·f) = g·(cᵢ eᵢ f): (μ, 1/α, 1, 1/μ).
    pub fn frame_factors(&self) -> [f64; 4] {
        [self.mu, 1.0 / self.alpha, 1.0, 1.0 / self.mu]
    }

    /// Conformal factor α²μ of the pulled-back symplectic form.
    pub fn conformal_factor(&self) -> f64 {
        self.alpha * self.alpha * self.mu
    }

    /// Largest componentwise difference, comparing phases modulo 2π.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        let dphi = (self.phi - other.phi + PI).rem_euclid(2.0 * PI) - PI;
        [self.a - other.a, self.alpha - other.alpha, dphi, self.mu - other.mu]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl Default for GroupElement {
    fn default() -> Self {
        Self::identity()
    }
}

/// Coefficients (y₁..y₄) in the basis (e₁, e₂, e₃, e₄) = (−∂ₓ, 1, i, ∂ₓx) of 𝔤.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LieVector(pub [f64; 4]);

impl LieVector {
    pub const ZERO: LieVector = LieVector([0.0; 4]);

    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        LieVector(v)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for LieVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for LieVector {
    type Output = LieVector;
    fn add(self, o: LieVector) -> LieVector {
        LieVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for LieVector {
    type Output = LieVector;
    fn sub(self, o: LieVector) -> LieVector {
        LieVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<f64> for LieVector {
    type Output = LieVector;
    fn mul(self, s: f64) -> LieVector {
        LieVector(self.0.map(|v| v * s))
    }
}

/// Closed-form profile Σ_m c_m (x − p)^{−m}, m = 1..len, with Im p < 0.
/// The family is closed under the Lie-algebra generators and the group
/// action, so solitons and their tangent vectors are evaluated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSeries {
    pub pole: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl PoleSeries {
    /// η(x) = 1/(x + i).
    pub fn eta() -> Self {
        PoleSeries { pole: -I, coeffs: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let z = Complex64::new(1.0, 0.0) / (Complex64::new(x, 0.0) - self.pole);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = (acc + c) * z;
        }
        acc
    }

    /// eᵢ applied to the series (i = 0..4 for e₁..e₄).
    pub fn generator(&self, i: usize) -> PoleSeries {
        let m_max = self.coeffs.len();
        let coeffs = match i {
            0 => {
                // −∂ₓ(x−p)^{−m} = m(x−p)^{−m−1}
                let mut c = vec![Complex64::new(0.0, 0.0); m_max + 1];
                for (k, ck) in self.coeffs.iter().enumerate() {
                    c[k + 1] += ck * (k as f64 + 1.0);
                }
                c
            }
            1 => self.coeffs.clone(),
            2 => self.coeffs.iter().map(|c| c * I).collect(),
            3 => {
                // ∂ₓ(x(x−p)^{−m}) = (1−m)(x−p)^{−m} − mp(x−p)^{−m−1}
                let mut c = vec![Complex64::new(0.0, 0.0); m_max + 1];
                for (k, ck) in self.coeffs.iter().enumerate() {
                    let m = k as f64 + 1.0;
                    c[k] += ck * (1.0 - m);
                    c[k + 1] -= ck * m * self.pole;
                }
                c
            }
            _ => panic!("generator index {i} out of range"),
        };
        PoleSeries { pole: self.pole, coeffs }
    }

    /// Y·f for a Lie vector Y.
    pub fn lie_apply(&self, y: &LieVector) -> PoleSeries {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + 1];
        for i in 0..4 {
            if y[i] == 0.0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&self.generator(i).coeffs) {
                *o += c * y[i];
            }
        }
        PoleSeries { pole: self.pole, coeffs: out }
    }

    /// g·f: pole a + p/μ, coefficients c_m e^{iφ}αμ^{1−m}.
    pub fn act(&self, g: &GroupElement) -> PoleSeries {
        let phase = Complex64::from_polar(g.alpha, g.phi);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * phase * g.mu.powi(-(k as i32)))
            .collect();
        PoleSeries { pole: g.a + self.pole / g.mu, coeffs }
    }

    pub fn to_field(&self, grid: &Arc<SpectralGrid>) -> HardyField {
        synthesize(grid, |x| self.eval(x)).expect("pole series is finite on the real line").field
    }
}

/// g·u for a general field, by evaluating the series of u at μ(xⱼ − a).
pub fn act(g: &GroupElement, u: &HardyField) -> HardyField {
    let grid = u.grid();
    let pts: Vec<f64> = grid.nodes().iter().map(|&x| g.mu * (x - g.a)).collect();
    let vals = u.evaluate_many(&pts);
    let factor = Complex64::from_polar(g.alpha * g.mu, g.phi);
    let scaled: Vec<Complex64> = vals.into_iter().map(|v| v * factor).collect();
    let (coeffs, negative) = grid.hardy_coefficients(&scaled).expect("grid-sized samples");
    let out = HardyField::from_coefficients(grid, &coeffs).expect("grid-sized coefficients").denoised();
    let total = out.l2_norm_sq();
    if total > 0.0 && (negative > 1e-20 * total || out.top_mode_fraction() > 1e-20) {
        log::warn!(
            "group action near the band limit: negative mass {:.2e}, top-mode fraction {:.2e}",
            negative / total,
            out.top_mode_fraction()
        );
    }
    out
}

/// g·η, synthesized from its closed form e^{iφ}α/(x − a + i/μ).
pub fn soliton_profile(grid: &Arc<SpectralGrid>, g: &GroupElement) -> HardyField {
    PoleSeries::eta().act(g).to_field(grid)
}

/// y₁(−∂ₓu) + y₂u + y₃iu + y₄∂ₓ(xu).
pub fn lie_apply(y: &LieVector, u: &HardyField) -> HardyField {
    let grid = u.grid();
    let du = u.derivative();
    let xdu = u.x_derivative();
    let c = |v: f64| Complex64::new(v, 0.0);
    HardyField::combine(
        grid,
        &[
            (c(-y[0]), &du),
            (Complex64::new(y[1] + y[3], y[2]), u),
            (c(y[3]), &xdu),
        ],
    )
}

/// The fields e₁η .. e₄η on a grid.
#[derive(Debug, Clone)]
pub struct EtaTangents {
    pub fields: [HardyField; 4],
}

impl EtaTangents {
    pub fn new(grid: &Arc<SpectralGrid>) -> Self {
        let eta = PoleSeries::eta();
        EtaTangents { fields: std::array::from_fn(|i| eta.generator(i).to_field(grid)) }
    }

    /// Y·η.
    pub fn combine(&self, y: &LieVector) -> HardyField {
        let grid = self.fields[0].grid().clone();
        let terms: Vec<(Complex64, &HardyField)> =
            (0..4).map(|i| (Complex64::new(y[i], 0.0), &self.fields[i])).collect();
        HardyField::combine(&grid, &terms)
    }

    /// (ω(u, eⱼη))ⱼ.
    pub fn pairings(&self, u: &HardyField) -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for (o, f) in out.iter_mut().zip(&self.fields) {
            *o = symplectic_pair(u, f)?;
        }
        Ok(out)
    }

    /// P(u) from the explicit inverse of the ω_η table.
    pub fn project(&self, u: &HardyField) -> Result<LieVector> {
        let w = self.pairings(u)?;
        let k = 2.0 / PI;
        Ok(LieVector([
            k * (w[1] - 2.0 * w[3]),
            k * (-w[2] - w[0]),
            k * (w[1] - w[3]),
            k * (2.0 * w[0] + w[2]),
        ]))
    }
}

/// ω_η(eᵢη, eⱼη) in closed form.
pub fn omega_eta_reference() -> Matrix4<f64> {
    let h = PI / 2.0;
    Matrix4::new(
        0.0, -h, 0.0, -h, //
        h, 0.0, -PI, 0.0, //
        0.0, PI, 0.0, h, //
        h, 0.0, -h, 0.0,
    )
}

/// ω(eᵢη, eⱼη) computed on the grid.
pub fn omega_eta_matrix(grid: &Arc<SpectralGrid>) -> Matrix4<f64> {
    let t = EtaTangents::new(grid);
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = symplectic_pair(&t.fields[i], &t.fields[j]).expect("same grid");
        }
    }
    m
}

/// P(u): the Lie vector with ω(u − P(u)·η, Y·η) = 0 for all Y.
pub fn manifold_project(u: &HardyField) -> LieVector {
    EtaTangents::new(u.grid()).project(u).expect("same grid")
}

/// Coordinate velocity (ȧ, α̇, φ̇, μ̇) of the Hamiltonian vector field of f
/// on M, given df = (f_a, f_α, f_φ, f_μ).
pub fn hamiltonian_field_on_m(df: [f64; 4], g: &GroupElement) -> Result<[f64; 4]> {
    g.validate()?;
    let [fa, fal, fph, fmu] = df;
    let (al, mu) = (g.alpha, g.mu);
    let k2 = 2.0 / (al * al * mu * mu * PI);
    let k1 = 2.0 / (al * al * mu * PI);
    Ok([
        -k2 * (-2.0 * mu * fmu + al * fal),
        k2 * (al * fa + al * mu * fph),
        k1 * (mu * fmu - al * fal),
        -k1 * (mu * fph + 2.0 * fa),
    ])
}

/// Coefficient matrix of ω|_M in the coordinates (a, α, φ, μ).
pub fn omega_on_m(g: &GroupElement) -> Matrix4<f64> {
    let (al, mu) = (g.alpha, g.mu);
    let h = PI / 2.0;
    let aal = -h * al * mu * mu;
    let amu = -h * al * al * mu;
    let alph = -PI * al * mu;
    let phmu = h * al * al;
    Matrix4::new(
        0.0, aal, 0.0, amu, //
        -aal, 0.0, alph, 0.0, //
        0.0, -alph, 0.0, phmu, //
        -amu, 0.0, -phmu, 0.0,
    )
}

/// Lie vector of a coordinate tangent vector at g: (μȧ, α̇/α, φ̇, μ̇/μ).
pub fn coordinate_to_lie(g: &GroupElement, v: [f64; 4]) -> LieVector {
    let c = g.frame_factors();
    LieVector(std::array::from_fn(|i| c[i] * v[i]))
}

pub fn to_vector4(v: [f64; 4]) -> Vector4<f64> {
    Vector4::new(v[0], v[1], v[2], v[3])
}
