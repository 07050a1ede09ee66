//! Toeplitz and Hankel operators, the conserved functionals, the linearized
//! operator ℒ at η and the nonlinear remainder 𝒩.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::spectral::{eta, szego_project, HardyField, SpectralGrid, I};

/// Default number of modes used to realize Hankel matrices.
pub const DEFAULT_HANKEL_MODES: usize = 256;
/// Default relative singular-value threshold for rank estimates.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct OperatorDiagnostics {
    pub symmetry_defect: f64,
    pub rank_estimate: usize,
    pub singular_values: Vec<f64>,
}

/// T_b h = Π(b h).
pub fn toeplitz_apply(b: &PotentialSpec, h: &HardyField) -> HardyField {
    let bv = b.sample(h.grid().nodes());
    toeplitz_apply_sampled(&bv, h)
}

/// T_b h for b already sampled at the grid nodes.
pub fn toeplitz_apply_sampled(b: &[f64], h: &HardyField) -> HardyField {
    let prod: Vec<Complex64> = h.values().iter().zip(b).map(|(v, b)| v * b).collect();
    szego_project(h.grid(), &prod).expect("sampled potential matches grid")
}

/// H_u h = Π(u h̄).
pub fn hankel_apply(u: &HardyField, h: &HardyField) -> Result<HardyField> {
    u.grid().same_as(h.grid())?;
    let prod: Vec<Complex64> =
        u.values().iter().zip(h.values()).map(|(a, b)| a * b.conj()).collect();
    szego_project(u.grid(), &prod)
}

/// Singular values and numerical rank of H_u restricted to the first `m`
/// basis modes. Entry (k, j) is the k-th coefficient of H_u ρ_j.
pub fn hankel_rank(u: &HardyField, m: usize, tol: f64) -> Result<OperatorDiagnostics> {
    let grid = u.grid();
    let available = grid.hardy_modes();
    if m > available || m == 0 {
        return Err(Error::TooManyModes { requested: m, available });
    }
    let s = grid.map_scale();
    let norm = (s / PI).sqrt();
    // conj ρ_j = √(s/π) conj(B)^j / (x − is), B = (x − is)/(x + is)
    let mut basis_conj: Vec<Complex64> =
        grid.nodes().iter().map(|&x| norm / Complex64::new(x, -s)).collect();
    let ratio: Vec<Complex64> =
        grid.nodes().iter().map(|&x| (Complex64::new(x, -s) / Complex64::new(x, s)).conj()).collect();
    let mut mat = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m {
        let prod: Vec<Complex64> =
            u.values().iter().zip(&basis_conj).map(|(a, b)| a * b).collect();
        let (c, _) = grid.hardy_coefficients(&prod)?;
        for k in 0..m {
            mat[(k, j)] = c[k];
        }
        for (b, r) in basis_conj.iter_mut().zip(&ratio) {
            *b *= r;
        }
    }
    let mut defect: f64 = 0.0;
    for j in 0..m {
        for k in 0..j {
            defect = defect.max((mat[(k, j)] - mat[(j, k)]).norm());
        }
    }
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let smax = sv.first().copied().unwrap_or(0.0);
    let rank = if smax == 0.0 { 0 } else { sv.iter().filter(|&&v| v > tol * smax).count() };
    Ok(OperatorDiagnostics { symmetry_defect: defect, rank_estimate: rank, singular_values: sv })
}

/// f = ((x − i)/(x + i))² h, an element of Ker H_{η²} for every h ∈ L²₊.
pub fn kernel_witness(h: &HardyField) -> HardyField {
    let factor: Vec<Complex64> = h
        .grid()
        .nodes()
        .iter()
        .map(|&x| {
            let b = Complex64::new(x, -1.0) / Complex64::new(x, 1.0);
            b * b
        })
        .collect();
    h.multiply_project(&factor).expect("factor sampled on the field's grid")
}

/// η sampled at the nodes of `grid`.
pub fn eta_values(grid: &SpectralGrid) -> Vec<Complex64> {
    grid.nodes().iter().map(|&x| eta(x)).collect()
}

/// Reusable precomputation for ℒ and 𝒩 on one grid.
#[derive(Debug, Clone)]
pub struct EtaFrame {
    grid: Arc<SpectralGrid>,
    eta: Vec<Complex64>,
}

impl EtaFrame {
    pub fn new(grid: &Arc<SpectralGrid>) -> Self {
        EtaFrame { grid: grid.clone(), eta: eta_values(grid) }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// ℒw = −(i/2)∂ₓw − 2T_{|η|²}w − H_{η²}w + w/4.
    pub fn linearized(&self, w: &HardyField) -> HardyField {
        let pointwise: Vec<Complex64> = self
            .eta
            .iter()
            .zip(w.values())
            .map(|(e, v)| -2.0 * e.norm_sqr() * v - e * e * v.conj())
            .collect();
        let nl = szego_project(&self.grid, &pointwise).expect("same grid");
        let dw = w.derivative().scale(-0.5 * I);
        HardyField::combine(&self.grid, &[(1.0.into(), &dw), (1.0.into(), &nl), (0.25.into(), w)])
    }

    /// 𝒩w = Π(|w|²w + |w|²η + 2w Re(η w̄)).
    pub fn nonlinear(&self, w: &HardyField) -> HardyField {
        let pointwise: Vec<Complex64> = self
            .eta
            .iter()
            .zip(w.values())
            .map(|(e, v)| {
                let m = v.norm_sqr();
                m * v + m * e + 2.0 * v * (e * v.conj()).re
            })
            .collect();
        szego_project(&self.grid, &pointwise).expect("same grid")
    }
}

pub fn linearized_apply(w: &HardyField) -> HardyField {
    EtaFrame::new(w.grid()).linearized(w)
}

pub fn nonlinear_remainder(w: &HardyField) -> HardyField {
    EtaFrame::new(w.grid()).nonlinear(w)
}

/// Q(u) = ∫|u|².
pub fn mass(u: &HardyField) -> f64 {
    u.l2_norm_sq()
}

/// ‖u‖²_{Ḣ^{1/2}}.
pub fn momentum(u: &HardyField) -> f64 {
    u.h12_homogeneous_sq()
}

/// ∫|u|⁴ by quadrature.
pub fn quartic(u: &HardyField) -> f64 {
    u.values().iter().zip(u.grid().weights()).map(|(v, w)| v.norm_sqr().powi(2) * w).sum()
}

/// H_b(u) = ¼∫|u|⁴ + (ε/2)∫b|u|².
pub fn hamiltonian(u: &HardyField, b: &PotentialSpec, eps: f64) -> f64 {
    let bv = b.sample(u.grid().nodes());
    hamiltonian_sampled(u, &bv, eps)
}

pub fn hamiltonian_sampled(u: &HardyField, b: &[f64], eps: f64) -> f64 {
    let w = u.grid().weights();
    let pot: f64 = u.values().iter().zip(b).zip(w).map(|((v, b), w)| b * v.norm_sqr() * w).sum();
    0.25 * quartic(u) + 0.5 * eps * pot
}

/// ℰ(u) = ¼∫|u|⁴ + (i/4)∫(∂ₓu)ū − ⅛∫|u|²; the middle term equals −¼‖u‖²_{Ḣ^{1/2}}.
pub fn energy_e(u: &HardyField) -> f64 {
    0.25 * quartic(u) - 0.25 * momentum(u) - 0.125 * mass(u)
}

/// (i/2)∂ₓu + Π(|u|²u) − u/4, the gradient of ℰ.
pub fn energy_gradient(u: &HardyField) -> HardyField {
    let cubic: Vec<Complex64> = u.values().iter().map(|v| v.norm_sqr() * v).collect();
    let c = szego_project(u.grid(), &cubic).expect("same grid");
    let d = u.derivative().scale(0.5 * I);
    HardyField::combine(u.grid(), &[(1.0.into(), &d), (1.0.into(), &c), ((-0.25).into(), u)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eta_field, hermitian, inner_real, synthesize};
    use crate::random::random_field;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Arc<SpectralGrid> {
        SpectralGrid::new(1024, 1.0).unwrap()
    }

    #[test]
    fn toeplitz_constant_and_self_adjoint() {
        let g = grid();
        let e = eta_field(&g);
        let t = toeplitz_apply(&PotentialSpec::constant(3.0), &e);
        assert!((&t - &e.scale_real(3.0)).l2_norm() < 1e-13);
        let b = PotentialSpec::gaussian(1.0, 0.3, 1.0).unwrap();
        let tb = toeplitz_apply(&b, &e);
        assert!(tb.l2_norm() <= e.l2_norm() * b.norms().sup_b);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let h1 = random_field(&g, &mut rng, 64);
            let h2 = random_field(&g, &mut rng, 64);
            let l = hermitian(&toeplitz_apply(&b, &h1), &h2).unwrap();
            let r = hermitian(&h1, &toeplitz_apply(&b, &h2)).unwrap();
            assert!((l - r).norm() < 1e-12);
        }
    }

    #[test]
    fn hankel_examples() {
        let g = grid();
        let e = eta_field(&g);
        let h = hankel_apply(&e, &e).unwrap();
        assert!((&h - &e.scale(0.5 * I)).l2_norm() < 1e-13);
        assert_eq!(hankel_apply(&e, &HardyField::zeros(&g)).unwrap().l2_norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_field(&g, &mut rng, 32);
        for _ in 0..20 {
            let h1 = random_field(&g, &mut rng, 64);
            let h2 = random_field(&g, &mut rng, 64);
            let l = hermitian(&hankel_apply(&u, &h1).unwrap(), &h2).unwrap();
            let r = hermitian(&hankel_apply(&u, &h2).unwrap(), &h1).unwrap();
            assert!((l - r).norm() < 1e-12);
        }
    }

    #[test]
    fn kronecker_ranks() {
        let g = grid();
        let one = synthesize(&g, eta).unwrap().field;
        let two = synthesize(&g, |x| eta(x) * eta(x)).unwrap().field;
        let three = synthesize(&g, |x| {
            eta(x) + Complex64::new(1.0, 0.0) / Complex64::new(x - 2.0, 0.5)
                + Complex64::new(0.0, 0.3) / Complex64::new(x + 1.0, 2.0)
        })
        .unwrap()
        .field;
        let d1 = hankel_rank(&one, 64, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(d1.rank_estimate, 1);
        assert!(d1.symmetry_defect < 1e-13);
        assert_eq!(hankel_rank(&two, 64, DEFAULT_RANK_TOL).unwrap().rank_estimate, 2);
        assert_eq!(hankel_rank(&three, 64, DEFAULT_RANK_TOL).unwrap().rank_estimate, 3);
        assert_eq!(hankel_rank(&one.scale_real(-2.5), 64, DEFAULT_RANK_TOL).unwrap().rank_estimate, 1);
        let d = hankel_rank(&two, 64, DEFAULT_RANK_TOL).unwrap();
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1] && w[1] >= 0.0));
        assert!(matches!(hankel_rank(&one, 1000, 1e-8), Err(Error::TooManyModes { .. })));
    }

    #[test]
    fn kernel_witness_examples() {
        let g = grid();
        let e = eta_field(&g);
        let e2 = synthesize(&g, |x| eta(x) * eta(x)).unwrap().field;
        let f = kernel_witness(&e);
        assert!(hankel_apply(&e2, &f).unwrap().l2_norm() < 1e-12 * f.l2_norm());
        assert_eq!(kernel_witness(&HardyField::zeros(&g)).l2_norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_field(&g, &mut rng, 128);
        assert_relative_eq!(kernel_witness(&h).l2_norm(), h.l2_norm(), max_relative = 1e-10);
    }

    #[test]
    fn linearized_on_kernel_witness() {
        let g = grid();
        let e = eta_field(&g);
        let f = kernel_witness(&e);
        let inner = e.derivative().scale(-0.5 * I).axpy(0.25.into(), &e);
        let expected = kernel_witness(&inner);
        assert!((&linearized_apply(&f) - &expected).l2_norm() < 1e-12);
        assert_eq!(linearized_apply(&HardyField::zeros(&g)).l2_norm(), 0.0);
    }

    #[test]
    fn linearized_is_symmetric() {
        let g = grid();
        let frame = EtaFrame::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let w1 = random_field(&g, &mut rng, 64);
            let w2 = random_field(&g, &mut rng, 64);
            let l = inner_real(&frame.linearized(&w1), &w2).unwrap();
            let r = inner_real(&w1, &frame.linearized(&w2)).unwrap();
            assert!((l - r).abs() < 1e-11 * (1.0 + l.abs()));
        }
    }

    #[test]
    fn nonlinear_remainder_is_quadratic() {
        let g = grid();
        let frame = EtaFrame::new(&g);
        assert_eq!(frame.nonlinear(&HardyField::zeros(&g)).l2_norm(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = random_field(&g, &mut rng, 32);
        let r1 = frame.nonlinear(&w.scale_real(1e-3)).l2_norm() / 1e-6;
        let r2 = frame.nonlinear(&w.scale_real(5e-4)).l2_norm() / 2.5e-7;
        assert_relative_eq!(r1, r2, max_relative = 1e-2);
    }

    #[test]
    fn functionals_of_eta() {
        let g = grid();
        let e = eta_field(&g);
        assert_relative_eq!(mass(&e), PI, max_relative = 1e-13);
        assert_relative_eq!(momentum(&e), PI / 2.0, max_relative = 1e-13);
        assert_relative_eq!(hamiltonian(&e, &PotentialSpec::constant(1.0), 0.0), PI / 8.0, max_relative = 1e-13);
        assert_eq!(hamiltonian(&HardyField::zeros(&g), &PotentialSpec::constant(1.0), 0.1), 0.0);
        assert!(energy_gradient(&e).l2_norm() < 1e-13);
        // ℰ(η) = π/8 − π/8 − π/8
        assert_relative_eq!(energy_e(&e), -PI / 8.0, max_relative = 1e-13);
    }

    #[test]
    fn soliton_hamiltonian() {
        let g = grid();
        let (alpha, mu) = (0.8, 1.5);
        let u = synthesize(&g, |x| Complex64::new(alpha, 0.0) / Complex64::new(x - 0.4, 1.0 / mu))
            .unwrap()
            .field;
        let expected = alpha.powi(4) * mu.powi(3) * PI / 8.0;
        assert_relative_eq!(hamiltonian(&u, &PotentialSpec::constant(0.0), 0.0), expected, max_relative = 1e-12);
    }
}
