//! The perturbed Szegő equation i∂ₜu = Π(|u|²u) + εT_b u.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::operators::{hamiltonian_sampled, mass, momentum};
use crate::spectral::{szego_project, HardyField, SpectralGrid, I};

/// Right-hand side −i(Π(|u|²u) + εΠ(bu)) with b pre-sampled on one grid.
#[derive(Debug, Clone)]
pub struct PdeSystem {
    grid: Arc<SpectralGrid>,
    b: Vec<f64>,
    eps: f64,
}

impl PdeSystem {
    pub fn new(grid: &Arc<SpectralGrid>, b: &PotentialSpec, eps: f64) -> Self {
        PdeSystem { grid: grid.clone(), b: b.sample(grid.nodes()), eps }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn rhs(&self, u: &HardyField) -> HardyField {
        let eps = self.eps;
        let vals: Vec<Complex64> = u
            .values()
            .iter()
            .zip(&self.b)
            .map(|(v, b)| -I * (v.norm_sqr() + eps * b) * v)
            .collect();
        szego_project(&self.grid, &vals).expect("field lives on the system grid")
    }

    pub fn hamiltonian(&self, u: &HardyField) -> f64 {
        hamiltonian_sampled(u, &self.b, self.eps)
    }

    /// One classical RK4 step; every stage is a Hardy field.
    pub fn rk4_step(&self, u: &HardyField, dt: f64) -> HardyField {
        let h = Complex64::new(dt, 0.0);
        let k1 = self.rhs(u);
        let k2 = self.rhs(&u.axpy(h * 0.5, &k1));
        let k3 = self.rhs(&u.axpy(h * 0.5, &k2));
        let k4 = self.rhs(&u.axpy(h, &k3));
        HardyField::combine(
            &self.grid,
            &[(1.0.into(), u), (h / 6.0, &k1), (h / 3.0, &k2), (h / 3.0, &k3), (h / 6.0, &k4)],
        )
    }
}

/// −i(Π(|u|²u) + εT_b u).
pub fn pde_rhs(u: &HardyField, b: &PotentialSpec, eps: f64) -> HardyField {
    PdeSystem::new(u.grid(), b, eps).rhs(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeOptions {
    pub t_final: f64,
    pub dt: f64,
    /// Emit a sample every `stride` steps (the final time is always emitted).
    pub stride: usize,
}

impl PdeOptions {
    /// Number of steps and the step actually used so that the run ends
    /// exactly at `t_final`.
    pub fn schedule(&self) -> Result<(usize, f64)> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidStepping(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::InvalidStepping(format!("t_final must be >= 0, got {}", self.t_final)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidStepping("stride must be >= 1".into()));
        }
        if self.t_final == 0.0 {
            return Ok((0, self.dt));
        }
        let steps = (self.t_final / self.dt - 1e-9).ceil().max(1.0) as usize;
        Ok((steps, self.t_final / steps as f64))
    }
}

/// Drift of the conserved (and one non-conserved) functionals over a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservationReport {
    pub steps: usize,
    pub dt: f64,
    pub mass_initial: f64,
    pub hamiltonian_initial: f64,
    pub momentum_initial: f64,
    /// max_t |Q(u(t)) − Q(u₀)|/Q(u₀)
    pub mass_drift: f64,
    /// max_t |H_b(u(t)) − H_b(u₀)|/|H_b(u₀)|
    pub hamiltonian_drift: f64,
    /// max_t |‖u(t)‖²_{Ḣ½} − ‖u₀‖²_{Ḣ½}|/‖u₀‖²_{Ḣ½}
    pub momentum_drift: f64,
    /// Largest fraction of L² mass seen in the top quarter of the modes.
    pub max_top_mode_fraction: f64,
}

/// Observables written for each emitted sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeObservables {
    pub t: f64,
    pub norm_l2: f64,
    pub norm_h12: f64,
    pub mass: f64,
    pub hamiltonian: f64,
}

#[derive(Debug, Clone)]
pub struct PdeSample {
    pub t: f64,
    pub field: HardyField,
}

#[derive(Debug, Clone)]
pub struct PdeTrajectory {
    pub samples: Vec<PdeSample>,
    pub observables: Vec<PdeObservables>,
    pub report: ConservationReport,
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Integrates from `u0` at t = 0 and hands every sample to `observe`.
pub fn evolve_pde_with<F>(
    system: &PdeSystem,
    u0: &HardyField,
    opts: &PdeOptions,
    mut observe: F,
) -> Result<ConservationReport>
where
    F: FnMut(f64, &HardyField) -> Result<()>,
{
    system.grid.same_as(u0.grid())?;
    let (steps, dt) = opts.schedule()?;
    let q0 = mass(u0);
    let h0 = system.hamiltonian(u0);
    let p0 = momentum(u0);
    let mut report = ConservationReport {
        steps,
        dt,
        mass_initial: q0,
        hamiltonian_initial: h0,
        momentum_initial: p0,
        mass_drift: 0.0,
        hamiltonian_drift: 0.0,
        momentum_drift: 0.0,
        max_top_mode_fraction: u0.top_mode_fraction(),
    };
    observe(0.0, u0)?;
    let mut u = u0.clone();
    let mut warned = false;
    for step in 1..=steps {
        u = system.rk4_step(&u, dt);
        let t = step as f64 * dt;
        let q = mass(&u);
        if !u.is_finite() || !q.is_finite() || q > 1e6 * (1.0 + q0) {
            return Err(Error::Divergence { step, t });
        }
        let emit = step % opts.stride == 0 || step == steps;
        if emit {
            report.mass_drift = report.mass_drift.max(rel(q, q0));
            report.hamiltonian_drift = report.hamiltonian_drift.max(rel(system.hamiltonian(&u), h0));
            report.momentum_drift = report.momentum_drift.max(rel(momentum(&u), p0));
            let top = u.top_mode_fraction();
            report.max_top_mode_fraction = report.max_top_mode_fraction.max(top);
            if top > 1e-20 && !warned {
                log::warn!("solution reaching the band limit at t = {t}: top-mode fraction {top:.2e}");
                warned = true;
            }
            observe(t, &u).map_err(|e| e.at_time(t))?;
        }
    }
    Ok(report)
}

/// Integrates and keeps every emitted sample.
pub fn evolve_pde(
    u0: &HardyField,
    b: &PotentialSpec,
    eps: f64,
    opts: &PdeOptions,
) -> Result<PdeTrajectory> {
    let system = PdeSystem::new(u0.grid(), b, eps);
    let mut samples = Vec::new();
    let mut observables = Vec::new();
    let report = evolve_pde_with(&system, u0, opts, |t, u| {
        observables.push(observe(&system, t, u));
        samples.push(PdeSample { t, field: u.clone() });
        Ok(())
    })?;
    Ok(PdeTrajectory { samples, observables, report })
}

pub fn observe(system: &PdeSystem, t: f64, u: &HardyField) -> PdeObservables {
    let m = mass(u);
    PdeObservables {
        t,
        norm_l2: m.sqrt(),
        norm_h12: u.h12_sq().sqrt(),
        mass: m,
        hamiltonian: system.hamiltonian(u),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{soliton_profile, GroupElement};
    use crate::spectral::{eta_field, inner_real};

    #[test]
    fn rhs_examples() {
        let g = SpectralGrid::new(512, 1.0).unwrap();
        let zero = HardyField::zeros(&g);
        let b = PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap();
        assert_eq!(pde_rhs(&zero, &b, 0.1).l2_norm(), 0.0);
        let e = eta_field(&g);
        let r = pde_rhs(&e, &b, 0.0);
        let expected = e.derivative().scale_real(-0.5).axpy(-0.25 * I, &e);
        assert!((&r - &expected).l2_norm() < 1e-13);
        let r = pde_rhs(&e, &b, 0.05);
        assert!(inner_real(&r, &e).unwrap().abs() < 1e-14);
    }

    #[test]
    fn schedule_hits_t_final() {
        let o = PdeOptions { t_final: 1.0, dt: 0.3, stride: 1 };
        let (n, dt) = o.schedule().unwrap();
        assert_eq!(n, 4);
        assert!((n as f64 * dt - 1.0).abs() < 1e-15);
        assert!(PdeOptions { dt: 0.0, ..o }.schedule().is_err());
        assert!(PdeOptions { stride: 0, ..o }.schedule().is_err());
        assert_eq!(PdeOptions { t_final: 0.0, ..o }.schedule().unwrap().0, 0);
    }

    #[test]
    fn short_soliton_run_tracks_closed_form() {
        let g = SpectralGrid::new(1024, 1.0).unwrap();
        let g0 = GroupElement::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let u0 = soliton_profile(&g, &g0);
        let b = PotentialSpec::constant(0.0);
        let traj = evolve_pde(&u0, &b, 0.0, &PdeOptions { t_final: 1.0, dt: 1e-2, stride: 50 }).unwrap();
        assert_eq!(traj.samples.len(), 3);
        let last = traj.samples.last().unwrap();
        let exact = soliton_profile(&g, &GroupElement { a: 0.5, phi: -0.25, ..g0 });
        assert!((&last.field - &exact).l2_norm() < 1e-8);
        assert!(traj.report.mass_drift < 1e-12);
    }
}
