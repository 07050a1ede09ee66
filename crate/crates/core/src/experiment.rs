//! End-to-end runs: PDE plus decomposition plus effective comparison.

use std::sync::Arc;

use serde::Serialize;

use crate::decomposition::{theorem_metrics, TheoremMetrics, TrackOptions, TrackReport, Tracker};
use crate::dynamics::effective::{evolve_effective, EffectiveState, EffectiveTrajectory};
use crate::dynamics::ode::OdeOptions;
use crate::dynamics::pde::{evolve_pde_with, observe, ConservationReport, PdeObservables, PdeOptions, PdeSystem};
use crate::dynamics::potential::PotentialSpec;
use crate::error::Result;
use crate::manifold::{soliton_profile, GroupElement};
use crate::spectral::SpectralGrid;

/// Everything needed to start a tracked run from a soliton.
#[derive(Debug, Clone)]
pub struct TrackSetup {
    pub grid: Arc<SpectralGrid>,
    pub g0: GroupElement,
    pub potential: PotentialSpec,
    pub eps: f64,
    pub delta: f64,
    pub pde: PdeOptions,
    pub track: TrackOptions,
    pub ode: OdeOptions,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackRun {
    pub report: TrackReport,
    pub observables: Vec<PdeObservables>,
    pub conservation: ConservationReport,
    pub metrics: TheoremMetrics,
    #[serde(skip)]
    pub effective: EffectiveTrajectory,
}

/// Evolves the soliton g₀·η under the perturbed equation, decomposes every
/// emitted sample and compares with the effective dynamics.
pub fn run_tracked(setup: &TrackSetup) -> Result<TrackRun> {
    let system = PdeSystem::new(&setup.grid, &setup.potential, setup.eps);
    let u0 = soliton_profile(&setup.grid, &setup.g0);
    let mut tracker = Tracker::new(&system, &setup.potential, setup.g0, setup.track)
        .with_initial_mass(u0.l2_norm_sq());
    let mut observables = Vec::new();
    let conservation = evolve_pde_with(&system, &u0, &setup.pde, |t, u| {
        observables.push(observe(&system, t, u));
        tracker.push(t, u)?;
        Ok(())
    })?;
    let times: Vec<f64> = observables.iter().map(|o| o.t).collect();
    let effective = evolve_effective(
        &EffectiveState { t: 0.0, g: setup.g0 },
        &setup.potential,
        setup.eps,
        &times,
        &setup.ode,
    )?;
    let report = tracker.finish(Some(&effective.states))?;
    let metrics = theorem_metrics(&report, setup.eps, setup.delta);
    Ok(TrackRun { report, observables, conservation, metrics, effective })
}

/// Least-squares slope of log y against log x over the finite positive pairs.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Fitted ε-exponents of the theorem metrics across a sweep, next to the
/// predicted ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSlopes {
    pub w_h12: f64,
    pub mu: f64,
    pub a: f64,
    pub phi: f64,
    pub predicted_w_h12: f64,
    pub predicted_mu: f64,
    pub predicted_a: f64,
    pub predicted_phi: f64,
}

pub fn sweep_slopes(metrics: &[TheoremMetrics]) -> SweepSlopes {
    let eps: Vec<f64> = metrics.iter().map(|m| m.eps).collect();
    let fit = |f: fn(&TheoremMetrics) -> f64| loglog_slope(&eps, &metrics.iter().map(f).collect::<Vec<_>>());
    let delta = metrics.first().map_or(f64::NAN, |m| m.delta);
    SweepSlopes {
        w_h12: fit(|m| m.sup_w_h12),
        mu: fit(|m| m.sup_dmu),
        a: fit(|m| m.sup_da),
        phi: fit(|m| m.sup_dphi),
        predicted_w_h12: 0.5 + delta / 3.0,
        predicted_mu: 0.5 + delta,
        predicted_a: 0.5 + delta,
        predicted_phi: 2.0 * delta,
    }
}

/// Runs independent tracked setups on the current rayon pool, keeping
/// input order.
pub fn run_tracked_many(setups: &[TrackSetup]) -> Vec<Result<TrackRun>> {
    use rayon::prelude::*;
    setups.par_iter().map(run_tracked).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let x = [0.04, 0.02, 0.01];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(0.7)).collect();
        assert!((loglog_slope(&x, &y) - 0.7).abs() < 1e-12);
        assert!(loglog_slope(&[1.0], &[1.0]).is_nan());
    }

    #[test]
    fn soliton_without_potential_stays_on_the_manifold() {
        let setup = TrackSetup {
            grid: SpectralGrid::new(512, 1.0).unwrap(),
            g0: GroupElement::new(0.0, 1.0, 0.0, 1.0).unwrap(),
            potential: PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap(),
            eps: 0.0,
            delta: 0.35,
            pde: PdeOptions { t_final: 1.0, dt: 1e-2, stride: 10 },
            track: TrackOptions::default(),
            ode: OdeOptions::default(),
        };
        let run = run_tracked(&setup).unwrap();
        assert!(run.metrics.sup_w_h12 < 1e-6);
        assert!(run.metrics.sup_da < 1e-8 && run.metrics.sup_dmu < 1e-8);
        assert!(run.metrics.sup_x_norm < 1e-8);
    }
}
