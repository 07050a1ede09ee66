//! Symplectically orthogonal decomposition u = g·(η + w), the X-vector and
//! the deviation metrics against the effective dynamics.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::dynamics::coefficients::abc_coefficients;
use crate::dynamics::effective::EffectiveState;
use crate::dynamics::pde::PdeSystem;
use crate::dynamics::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::manifold::{act, EtaTangents, GroupElement, LieVector, PoleSeries};
use crate::spectral::{symplectic_pair, HardyField, SpectralGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NewtonOptions {
    /// Stop when max_j |ω(w, eⱼη)| < tol·‖u‖.
    pub tol: f64,
    pub max_iter: usize,
    /// Largest accepted ‖w‖_{H½}.
    pub tubular_radius: f64,
    pub max_condition: f64,
    /// Take one extra Newton step after convergence, so the residual ends
    /// at roundoff rather than at `tol`.
    pub polish: bool,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-11, max_iter: 50, tubular_radius: 0.25, max_condition: 1e12, polish: true }
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub g: GroupElement,
    pub w: HardyField,
    /// max_j |ω(w, eⱼη)|
    pub residual: f64,
    pub newton_iters: usize,
    pub w_h12: f64,
    /// ∂G/∂g at the solution, G_j(g) = ω(u − g·η, g·(eⱼη)).
    pub jacobian: Matrix4<f64>,
}

/// Fields g·(eⱼη) and g·(eᵢeⱼη) on a grid.
struct FrameFields {
    tangent: [HardyField; 4],
    second: [[HardyField; 4]; 4],
    soliton: HardyField,
}

impl FrameFields {
    fn new(grid: &Arc<SpectralGrid>, g: &GroupElement) -> Self {
        let eta = PoleSeries::eta();
        let ej: [PoleSeries; 4] = std::array::from_fn(|j| eta.generator(j));
        let tangent = std::array::from_fn(|j| ej[j].act(g).to_field(grid));
        let second =
            std::array::from_fn(|i| std::array::from_fn(|j| ej[j].generator(i).act(g).to_field(grid)));
        FrameFields { tangent, second, soliton: eta.act(g).to_field(grid) }
    }

    /// (G, ∂G/∂g) at g.
    fn system(&self, u: &HardyField, g: &GroupElement) -> Result<(Vector4<f64>, Matrix4<f64>)> {
        let r = u - &self.soliton;
        let c = g.frame_factors();
        let mut gv = Vector4::zeros();
        let mut jac = Matrix4::zeros();
        for j in 0..4 {
            gv[j] = symplectic_pair(&r, &self.tangent[j])?;
            for i in 0..4 {
                jac[(j, i)] = c[i]
                    * (symplectic_pair(&r, &self.second[i][j])?
                        - symplectic_pair(&self.tangent[i], &self.tangent[j])?);
            }
        }
        Ok((gv, jac))
    }
}

fn condition_number(m: &Matrix4<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Finds g near `g_guess` with ω(g⁻¹·u − η, eⱼη) = 0 for j = 1..4 and
/// returns it with w = g⁻¹·u − η.
pub fn reparametrize(
    u: &HardyField,
    g_guess: &GroupElement,
    opts: &NewtonOptions,
) -> Result<Decomposition> {
    g_guess.validate()?;
    let grid = u.grid();
    let unorm = u.l2_norm();
    let mut g = *g_guess;
    let mut iters = 0;
    let mut residual;
    loop {
        let frame = FrameFields::new(grid, &g);
        let (gv, jac) = frame.system(u, &g)?;
        residual = gv.amax() / g.conformal_factor();
        if residual < opts.tol * unorm.max(f64::MIN_POSITIVE) {
            let cond = condition_number(&jac);
            if cond > opts.max_condition {
                return Err(Error::DegenerateParametrization(cond));
            }
            if opts.polish {
                if let Some(step) = jac.lu().solve(&(-gv)) {
                    let cand = GroupElement {
                        a: g.a + step[0],
                        alpha: g.alpha + step[1],
                        phi: g.phi + step[2],
                        mu: g.mu + step[3],
                    };
                    if cand.validate().is_ok() {
                        let frame = FrameFields::new(grid, &cand);
                        let (gv2, jac2) = frame.system(u, &cand)?;
                        let r2 = gv2.amax() / cand.conformal_factor();
                        if r2 < residual {
                            return finish(u, cand, iters + 1, jac2, opts);
                        }
                    }
                }
            }
            return finish(u, g, iters, jac, opts);
        }
        if iters >= opts.max_iter {
            break;
        }
        let cond = condition_number(&jac);
        if cond > opts.max_condition {
            return Err(Error::DegenerateParametrization(cond));
        }
        let step = jac.lu().solve(&(-gv)).ok_or(Error::DegenerateParametrization(f64::INFINITY))?;
        let mut lambda = 1.0;
        let next = loop {
            let cand = GroupElement {
                a: g.a + lambda * step[0],
                alpha: g.alpha + lambda * step[1],
                phi: g.phi + lambda * step[2],
                mu: g.mu + lambda * step[3],
            };
            if cand.validate().is_ok() {
                break cand;
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::TubularNeighborhoodExceeded {
                    iterations: iters,
                    residual,
                    w_norm: f64::NAN,
                });
            }
        };
        g = next;
        iters += 1;
    }
    let w = &act(&g.inverse(), u) - &PoleSeries::eta().to_field(grid);
    Err(Error::TubularNeighborhoodExceeded { iterations: iters, residual, w_norm: w.h12_sq().sqrt() })
}

fn finish(
    u: &HardyField,
    g: GroupElement,
    iters: usize,
    jacobian: Matrix4<f64>,
    opts: &NewtonOptions,
) -> Result<Decomposition> {
    let grid = u.grid();
    let tangents = EtaTangents::new(grid);
    let pulled = act(&g.inverse(), u);
    let w = (&pulled - &tangents.fields[1]).truncated(pulled.effective_degree().max(1));
    let residual = tangents.pairings(&w)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let w_h12 = w.h12_sq().sqrt();
    if w_h12 > opts.tubular_radius {
        return Err(Error::TubularNeighborhoodExceeded { iterations: iters, residual, w_norm: w_h12 });
    }
    Ok(Decomposition { g, w, residual, newton_iters: iters, w_h12, jacobian })
}

/// Velocity ġ of the decomposition along u̇, from differentiating the
/// orthogonality conditions: J ġ = −(ω(u̇, g·eⱼη))ⱼ.
pub fn parameter_velocity(d: &Decomposition, udot: &HardyField) -> Result<[f64; 4]> {
    let grid = udot.grid();
    let eta = PoleSeries::eta();
    let mut rhs = Vector4::zeros();
    for j in 0..4 {
        let f = eta.generator(j).act(&d.g).to_field(grid);
        rhs[j] = -symplectic_pair(udot, &f)?;
    }
    let v = d.jacobian.lu().solve(&rhs).ok_or(Error::DegenerateParametrization(f64::INFINITY))?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// X = (ȧμ − α²μ²/2 + 2B, α̇/α − C, φ̇ + α²μ²/4 + A + B, μ̇/μ + 2C).
pub fn x_vector(g: &GroupElement, gdot: [f64; 4], b: &PotentialSpec, eps: f64) -> LieVector {
    let k = abc_coefficients(g, b, eps);
    let (al, mu) = (g.alpha, g.mu);
    let [ad, ald, phd, mud] = gdot;
    LieVector([
        ad * mu - 0.5 * al * al * mu * mu + 2.0 * k.b,
        ald / al - k.c,
        phd + 0.25 * al * al * mu * mu + k.a + k.b,
        mud / mu + 2.0 * k.c,
    ])
}

/// How ġ is obtained along a tracked run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GdotMethod {
    /// Differentiate the orthogonality conditions along the PDE vector field.
    Tangent,
    /// Centered differences of the extracted g-series.
    CenteredDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackOptions {
    pub newton: NewtonOptions,
    pub gdot: GdotMethod,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions { newton: NewtonOptions::default(), gdot: GdotMethod::Tangent }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackReport {
    pub eps: f64,
    pub g0: GroupElement,
    pub times: Vec<f64>,
    pub g_series: Vec<GroupElement>,
    pub gdot_series: Vec<[f64; 4]>,
    pub w_l2: Vec<f64>,
    pub w_h12: Vec<f64>,
    pub x_series: Vec<LieVector>,
    pub x_norm: Vec<f64>,
    pub newton_iters: Vec<usize>,
    pub residuals: Vec<f64>,
    /// |‖w‖²_{L²} − π(α₀²μ₀/(α²μ) − 1)| per sample.
    pub mass_identity_error: Vec<f64>,
    /// |g − ḡ| componentwise, when an effective run was supplied.
    pub deviations: Option<Vec<[f64; 4]>>,
    pub effective: Option<Vec<GroupElement>>,
    /// Times at which μ left [μ₀/2, 3μ₀/2].
    pub mu_window_exits: Vec<f64>,
}

impl TrackReport {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest relative mass-identity error, with relative errors measured
    /// against max(‖w‖², `floor`).
    pub fn mass_identity_max_rel(&self, floor: f64) -> f64 {
        self.mass_identity_error
            .iter()
            .zip(&self.w_l2)
            .map(|(e, w)| e / (w * w).max(floor))
            .fold(0.0, f64::max)
    }
}

/// Online tracker: feed PDE samples in time order, then call
/// [`Tracker::finish`].
pub struct Tracker<'a> {
    system: &'a PdeSystem,
    b: &'a PotentialSpec,
    opts: TrackOptions,
    g0: GroupElement,
    mass0: f64,
    last: Option<(f64, GroupElement, [f64; 4])>,
    latest: Option<Decomposition>,
    report: TrackReport,
}

impl<'a> Tracker<'a> {
    pub fn new(system: &'a PdeSystem, b: &'a PotentialSpec, g0: GroupElement, opts: TrackOptions) -> Self {
        Tracker {
            system,
            b,
            opts,
            g0,
            mass0: PI * g0.conformal_factor(),
            last: None,
            latest: None,
            report: TrackReport {
                eps: system.eps(),
                g0,
                times: vec![],
                g_series: vec![],
                gdot_series: vec![],
                w_l2: vec![],
                w_h12: vec![],
                x_series: vec![],
                x_norm: vec![],
                newton_iters: vec![],
                residuals: vec![],
                mass_identity_error: vec![],
                deviations: None,
                effective: None,
                mu_window_exits: vec![],
            },
        }
    }

    /// Uses the initial field's mass instead of πα₀²μ₀ in the mass identity.
    pub fn with_initial_mass(mut self, mass0: f64) -> Self {
        self.mass0 = mass0;
        self
    }

    pub fn push(&mut self, t: f64, u: &HardyField) -> Result<&Decomposition> {
        let guess = match self.last {
            None => self.g0,
            Some((t_prev, g_prev, gd)) => {
                let dt = t - t_prev;
                let cand = GroupElement {
                    a: g_prev.a + dt * gd[0],
                    alpha: g_prev.alpha + dt * gd[1],
                    phi: g_prev.phi + dt * gd[2],
                    mu: g_prev.mu + dt * gd[3],
                };
                if cand.validate().is_ok() {
                    cand
                } else {
                    g_prev
                }
            }
        };
        let d = reparametrize(u, &guess, &self.opts.newton).map_err(|e| e.at_time(t))?;
        let gdot = match self.opts.gdot {
            GdotMethod::Tangent => parameter_velocity(&d, &self.system.rhs(u))?,
            GdotMethod::CenteredDifference => [0.0; 4],
        };
        let g = d.g;
        let w_l2 = d.w.l2_norm();
        let predicted = self.mass0 / g.conformal_factor() - PI;
        let r = &mut self.report;
        r.times.push(t);
        r.g_series.push(g);
        r.gdot_series.push(gdot);
        r.w_l2.push(w_l2);
        r.w_h12.push(d.w_h12);
        r.newton_iters.push(d.newton_iters);
        r.residuals.push(d.residual);
        r.mass_identity_error.push((w_l2 * w_l2 - predicted).abs());
        if !(0.5 * self.g0.mu..=1.5 * self.g0.mu).contains(&g.mu) {
            r.mu_window_exits.push(t);
        }
        let velocity = match self.opts.gdot {
            GdotMethod::Tangent => gdot,
            GdotMethod::CenteredDifference => match self.last {
                Some((tp, gp, _)) => {
                    let h = t - tp;
                    [(g.a - gp.a) / h, (g.alpha - gp.alpha) / h, (g.phi - gp.phi) / h, (g.mu - gp.mu) / h]
                }
                None => [0.0; 4],
            },
        };
        self.last = Some((t, g, velocity));
        self.latest = Some(d);
        Ok(self.latest.as_ref().expect("just stored"))
    }

    /// Computes the X-series (differencing g if requested) and compares with
    /// an effective run sampled at the same times.
    pub fn finish(mut self, effective: Option<&[EffectiveState]>) -> Result<TrackReport> {
        if self.opts.gdot == GdotMethod::CenteredDifference {
            self.report.gdot_series = centered_differences(&self.report.times, &self.report.g_series);
        }
        let r = &mut self.report;
        for (g, gd) in r.g_series.iter().zip(&r.gdot_series) {
            let x = x_vector(g, *gd, self.b, r.eps);
            r.x_norm.push(x.norm());
            r.x_series.push(x);
        }
        if let Some(eff) = effective {
            if eff.len() != r.times.len()
                || eff.iter().zip(&r.times).any(|(s, t)| (s.t - t).abs() > 1e-9 * t.abs().max(1.0))
            {
                return Err(Error::InvalidStepping(
                    "effective trajectory is not sampled at the tracked times".into(),
                ));
            }
            r.deviations = Some(
                eff.iter()
                    .zip(&r.g_series)
                    .map(|(s, g)| {
                        [
                            (g.a - s.g.a).abs(),
                            (g.alpha - s.g.alpha).abs(),
                            (g.phi - s.g.phi).abs(),
                            (g.mu - s.g.mu).abs(),
                        ]
                    })
                    .collect(),
            );
            r.effective = Some(eff.iter().map(|s| s.g).collect());
        }
        Ok(self.report)
    }
}

/// Second-order differences of the g-series (one-sided at the ends).
pub fn centered_differences(times: &[f64], gs: &[GroupElement]) -> Vec<[f64; 4]> {
    let n = gs.len();
    if n < 3 {
        return vec![[0.0; 4]; n];
    }
    let arr: Vec<[f64; 4]> = gs.iter().map(|g| g.to_array()).collect();
    (0..n)
        .map(|k| {
            let (i0, i1, i2) = if k == 0 {
                (0, 1, 2)
            } else if k == n - 1 {
                (n - 3, n - 2, n - 1)
            } else {
                (k - 1, k, k + 1)
            };
            let (t0, t1, t2) = (times[i0], times[i1], times[i2]);
            let t = times[k];
            // derivative of the quadratic interpolant through three samples
            let l0 = (2.0 * t - t1 - t2) / ((t0 - t1) * (t0 - t2));
            let l1 = (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
            let l2 = (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
            std::array::from_fn(|c| l0 * arr[i0][c] + l1 * arr[i1][c] + l2 * arr[i2][c])
        })
        .collect()
}

/// Suprema of the monitored quantities over a tracked run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremMetrics {
    pub eps: f64,
    pub delta: f64,
    pub t_final: f64,
    pub sup_w_h12: f64,
    pub sup_da: f64,
    pub sup_dalpha: f64,
    pub sup_dphi: f64,
    pub sup_dmu: f64,
    pub sup_x_norm: f64,
    /// max_t |α²μ − α₀²μ₀| of the extracted series.
    pub alpha2mu_drift: f64,
    /// Predicted exponents: ‖w‖ ~ ε^{1/2+δ/3}, |a−ā|, |μ−μ̄| ~ ε^{1/2+δ}, |φ−φ̄| ~ ε^{2δ}.
    pub exponent_w: f64,
    pub exponent_a: f64,
    pub exponent_mu: f64,
    pub exponent_phi: f64,
}

pub fn theorem_metrics(report: &TrackReport, eps: f64, delta: f64) -> TheoremMetrics {
    let sup = |v: &mut dyn Iterator<Item = f64>| v.fold(0.0f64, f64::max);
    let dev = |c: usize| {
        report.deviations.as_ref().map_or(f64::NAN, |d| d.iter().map(|v| v[c]).fold(0.0, f64::max))
    };
    let c0 = report.g0.conformal_factor();
    TheoremMetrics {
        eps,
        delta,
        t_final: report.times.last().copied().unwrap_or(0.0),
        sup_w_h12: sup(&mut report.w_h12.iter().copied()),
        sup_da: dev(0),
        sup_dalpha: dev(1),
        sup_dphi: dev(2),
        sup_dmu: dev(3),
        sup_x_norm: sup(&mut report.x_norm.iter().copied()),
        alpha2mu_drift: sup(&mut report.g_series.iter().map(|g| (g.conformal_factor() - c0).abs())),
        exponent_w: 0.5 + delta / 3.0,
        exponent_a: 0.5 + delta,
        exponent_mu: 0.5 + delta,
        exponent_phi: 2.0 * delta,
    }
}

/// Smallest c with ‖X‖ ≤ c(ε‖w‖_{L²} + ‖w‖²_{H½} + ‖w‖³_{H½}) over the
/// samples whose bound exceeds `floor`.
pub fn x_bound_constant(report: &TrackReport, floor: f64) -> f64 {
    let eps = report.eps;
    report
        .x_norm
        .iter()
        .zip(report.w_l2.iter().zip(&report.w_h12))
        .filter_map(|(x, (l2, h))| {
            let bound = eps * l2 + h * h + h * h * h;
            (bound > floor).then(|| x / bound)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::effective::effective_rhs;
    use crate::manifold::soliton_profile;
    use crate::random::random_field_without_low_modes;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Arc<SpectralGrid> {
        SpectralGrid::new(1024, 1.0).unwrap()
    }

    #[test]
    fn recovers_soliton_parameters() {
        let gr = grid();
        let g0 = GroupElement::new(0.4, 1.2, 0.7, 1.3).unwrap();
        let u = soliton_profile(&gr, &g0);
        let d = reparametrize(&u, &g0, &NewtonOptions::default()).unwrap();
        assert!(d.g.distance(&g0) < 1e-12);
        assert!(d.w.l2_norm() < 1e-10);
        assert!(d.newton_iters <= 2);
        let guess = GroupElement { a: 0.45, alpha: 1.15, phi: 0.75, mu: 1.25 };
        let d = reparametrize(&u, &guess, &NewtonOptions::default()).unwrap();
        assert!(d.g.distance(&g0) < 1e-10);
        assert!(d.newton_iters <= 5);
    }

    #[test]
    fn jacobian_at_identity_is_omega_eta() {
        let gr = grid();
        let u = soliton_profile(&gr, &GroupElement::identity());
        let d = reparametrize(&u, &GroupElement::identity(), &NewtonOptions::default()).unwrap();
        let om = crate::manifold::omega_eta_reference();
        assert!((d.jacobian - om).amax() < 1e-12);
        assert!((d.jacobian.determinant() - om.determinant()).abs() < 1e-10);
        assert!(om.determinant() > 0.0);
    }

    #[test]
    fn round_trip_with_orthogonal_perturbation() {
        let gr = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let eta = PoleSeries::eta().to_field(&gr);
        for _ in 0..5 {
            let w = random_field_without_low_modes(&gr, &mut rng, 32, 2);
            let w = w.scale_real(0.05 / w.h12_sq().sqrt());
            let g0 = GroupElement::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(0.7..1.4),
                rng.random_range(-1.0..1.0),
                rng.random_range(0.7..1.4),
            )
            .unwrap();
            let u = act(&g0, &(&eta + &w));
            let guess = GroupElement { a: g0.a + 0.02, mu: g0.mu * 0.98, ..g0 };
            let d = reparametrize(&u, &guess, &NewtonOptions::default()).unwrap();
            assert!(d.g.distance(&g0) < 1e-9, "{:?} vs {:?}", d.g, g0);
            assert!((&d.w - &w).l2_norm() < 1e-8);
        }
    }

    #[test]
    fn far_from_manifold_is_rejected() {
        let gr = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let w = random_field_without_low_modes(&gr, &mut rng, 32, 2);
        let w = w.scale_real(2.0 / w.h12_sq().sqrt());
        let u = &PoleSeries::eta().to_field(&gr) + &w;
        let r = reparametrize(&u, &GroupElement::identity(), &NewtonOptions::default());
        assert!(matches!(r, Err(Error::TubularNeighborhoodExceeded { .. })));
    }

    #[test]
    fn x_vector_vanishes_on_effective_flow() {
        let b = PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let g = GroupElement::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(0.5..1.5),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.5..2.0),
            )
            .unwrap();
            let eps = rng.random_range(0.0..0.05);
            assert!(x_vector(&g, effective_rhs(&g, &b, eps), &b, eps).norm() < 1e-14);
        }
        let g = GroupElement::identity();
        assert!(x_vector(&g, [0.5, 0.0, -0.25, 0.0], &b, 0.0).norm() < 1e-16);
    }

    #[test]
    fn centered_differences_are_exact_for_quadratics() {
        let times: Vec<f64> = (0..6).map(|i| i as f64 * 0.1).collect();
        let gs: Vec<GroupElement> = times
            .iter()
            .map(|t| GroupElement { a: t * t, alpha: 1.0 + t, phi: -3.0 * t, mu: 2.0 })
            .collect();
        let d = centered_differences(&times, &gs);
        for (t, v) in times.iter().zip(d) {
            assert!((v[0] - 2.0 * t).abs() < 1e-12);
            assert!((v[1] - 1.0).abs() < 1e-12);
            assert!((v[2] + 3.0).abs() < 1e-12);
            assert!(v[3].abs() < 1e-12);
        }
    }
}
