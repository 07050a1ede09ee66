//! Effective dynamics: the Hamiltonian flow of H_b restricted to M.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::coefficients::{abc_coefficients, CoefficientTriple};
use crate::dynamics::ode::{dopri5, OdeOptions, OdeStats};
use crate::dynamics::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::manifold::GroupElement;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveState {
    pub t: f64,
    pub g: GroupElement,
}

/// (ȧ, α̇, φ̇, μ̇) from the coefficients:
/// ȧ = α²μ/2 − 2B/μ, α̇ = αC, φ̇ = −α²μ²/4 − A − B, μ̇ = −2μC.
pub fn effective_rhs_from(g: &GroupElement, k: &CoefficientTriple) -> [f64; 4] {
    let (al, mu) = (g.alpha, g.mu);
    [
        0.5 * al * al * mu - 2.0 * k.b / mu,
        al * k.c,
        -0.25 * al * al * mu * mu - k.a - k.b,
        -2.0 * mu * k.c,
    ]
}

pub fn effective_rhs(g: &GroupElement, b: &PotentialSpec, eps: f64) -> [f64; 4] {
    effective_rhs_from(g, &abc_coefficients(g, b, eps))
}

/// Differential (f_a, f_α, f_φ, f_μ) of H_b|_M = α⁴μ³π/8 + (π/2)α²μA.
pub fn restricted_hamiltonian_gradient(g: &GroupElement, k: &CoefficientTriple) -> [f64; 4] {
    let (al, mu) = (g.alpha, g.mu);
    [
        0.5 * PI * al * al * mu * mu * k.c,
        0.5 * PI * al.powi(3) * mu.powi(3) + PI * al * mu * k.a,
        0.0,
        3.0 * PI * al.powi(4) * mu * mu / 8.0 + 0.5 * PI * al * al * (k.a - k.b),
    ]
}

/// H_b restricted to M.
pub fn restricted_hamiltonian(g: &GroupElement, k: &CoefficientTriple) -> f64 {
    let (al, mu) = (g.alpha, g.mu);
    PI * al.powi(4) * mu.powi(3) / 8.0 + 0.5 * PI * al * al * mu * k.a
}

#[derive(Debug, Clone)]
pub struct EffectiveTrajectory {
    pub states: Vec<EffectiveState>,
    pub stats: OdeStats,
    /// max_t |α²μ − α₀²μ₀|/(α₀²μ₀)
    pub alpha2mu_drift: f64,
}

/// Integrates the effective system from `s0` and samples it at `times`.
pub fn evolve_effective(
    s0: &EffectiveState,
    b: &PotentialSpec,
    eps: f64,
    times: &[f64],
    opts: &OdeOptions,
) -> Result<EffectiveTrajectory> {
    s0.g.validate()?;
    let rhs = |_t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        if !(y[1] > 0.0 && y[3] > 0.0) {
            return Err(Error::InvalidGroupElement(format!("effective state left G: {y:?}")));
        }
        let g = GroupElement { a: y[0], alpha: y[1], phi: y[2], mu: y[3] };
        Ok(effective_rhs(&g, b, eps))
    };
    let (ys, stats) = dopri5(rhs, s0.t, s0.g.to_array(), times, opts)?;
    let c0 = s0.g.conformal_factor();
    let mut drift: f64 = 0.0;
    let mut states = Vec::with_capacity(ys.len());
    for (t, y) in times.iter().zip(ys) {
        let g = GroupElement::from_array(y)?;
        drift = drift.max(((g.conformal_factor() - c0) / c0).abs());
        states.push(EffectiveState { t: *t, g });
    }
    Ok(EffectiveTrajectory { states, stats, alpha2mu_drift: drift })
}

/// Closed-form unperturbed soliton motion.
pub fn unperturbed_soliton(g0: &GroupElement, t: f64) -> GroupElement {
    let (al, mu) = (g0.alpha, g0.mu);
    GroupElement {
        a: g0.a + 0.5 * al * al * mu * t,
        alpha: al,
        phi: g0.phi - 0.25 * al * al * mu * mu * t,
        mu,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::hamiltonian_field_on_m;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian() -> PotentialSpec {
        PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_potential_rhs() {
        let g = GroupElement::new(0.3, 1.2, 0.1, 0.9).unwrap();
        let v = effective_rhs(&g, &PotentialSpec::constant(2.0), 0.01);
        let expected = [0.5 * 1.44 * 0.9, 0.0, -0.25 * 1.44 * 0.81 - 0.02, 0.0];
        for (x, e) in v.iter().zip(expected) {
            assert!((x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn rhs_is_the_hamiltonian_field_of_the_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let b = gaussian();
        for _ in 0..20 {
            let g = GroupElement::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(0.5..1.5),
                rng.random_range(-1.0..1.0),
                rng.random_range(0.5..2.0),
            )
            .unwrap();
            let k = abc_coefficients(&g, &b, 0.03);
            let direct = effective_rhs_from(&g, &k);
            let field = hamiltonian_field_on_m(restricted_hamiltonian_gradient(&g, &k), &g).unwrap();
            for (x, y) in direct.iter().zip(field) {
                assert!((x - y).abs() < 1e-13);
            }
            // d/dt(α²μ) = 0 identically
            let d = 2.0 * g.alpha * direct[1] * g.mu + g.alpha * g.alpha * direct[3];
            assert!(d.abs() < 1e-15);
        }
    }

    #[test]
    fn unperturbed_flow_is_exact() {
        let g0 = GroupElement::new(0.5, 0.8, 0.2, 1.7).unwrap();
        let times = [1.0, 5.0, 10.0];
        let tr = evolve_effective(
            &EffectiveState { t: 0.0, g: g0 },
            &gaussian(),
            0.0,
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        for (s, t) in tr.states.iter().zip(times) {
            assert!(s.g.distance(&unperturbed_soliton(&g0, t)) < 1e-12);
        }
    }

    #[test]
    fn constant_potential_phase() {
        let g0 = GroupElement::identity();
        let tr = evolve_effective(
            &EffectiveState { t: 0.0, g: g0 },
            &PotentialSpec::constant(3.0),
            0.01,
            &[4.0],
            &OdeOptions::default(),
        )
        .unwrap();
        assert!((tr.states[0].g.phi - (-(0.25 + 0.03) * 4.0)).abs() < 1e-12);
    }

    #[test]
    fn alpha2mu_is_conserved() {
        let g0 = GroupElement::new(-2.0, 1.0, 0.0, 1.0).unwrap();
        let times: Vec<f64> = (1..=40).map(|i| i as f64 * 0.25).collect();
        let tr = evolve_effective(
            &EffectiveState { t: 0.0, g: g0 },
            &gaussian(),
            0.04,
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        assert!(tr.alpha2mu_drift < 1e-10);
        let moved = tr.states.last().unwrap().g;
        assert!((moved.mu - 1.0).abs() > 1e-4);
    }
}
