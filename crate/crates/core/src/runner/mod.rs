//! Configuration-driven commands behind the `szego-lab` binary.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::dynamics::effective::{evolve_effective, EffectiveState};
use crate::dynamics::ode::{OdeOptions, OdeStats};
use crate::dynamics::pde::{evolve_pde_with, observe, ConservationReport, PdeOptions, PdeSystem};
use crate::error::{Error, Result};
use crate::experiment::{run_tracked, sweep_slopes, SweepSlopes, TrackRun};
use crate::decomposition::{x_bound_constant, TheoremMetrics};
use crate::manifold::soliton_profile;
use crate::validation::{self, ValidationOptions, ValidationSummary};

pub use config::ExperimentConfig;
use output::{line_plot, write_json, CsvWriter, Series};

/// Environment variable that overrides `--parallel`.
pub const THREADS_ENV: &str = "SZEGO_LAB_THREADS";

/// Process exit code for an error: 2 for configuration problems, 1 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } => 2,
        Error::AtTime { source, .. } => exit_code(source),
        _ => 1,
    }
}

/// Worker count: `SZEGO_LAB_THREADS` if set, else `parallel`, else all cores.
pub fn resolve_threads(parallel: Option<usize>) -> Result<Option<usize>> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::config(THREADS_ENV, format!("must be a positive integer, got {v:?}")))?;
        return Ok(Some(n));
    }
    match parallel {
        Some(0) => Err(Error::config("--parallel", "must be positive")),
        p => Ok(p),
    }
}

/// Sizes the global rayon pool; a no-op if it was already built.
pub fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::debug!("rayon pool already initialized");
        }
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Emission times of a PDE run with these options.
pub fn sample_times(opts: &PdeOptions) -> Result<Vec<f64>> {
    let (steps, dt) = opts.schedule()?;
    let mut t = vec![0.0];
    t.extend((1..=steps).filter(|s| s % opts.stride == 0 || *s == steps).map(|s| s as f64 * dt));
    Ok(t)
}

const TRAJECTORY_HEADER: [&str; 5] = ["t", "norm_L2", "norm_H12", "mass", "hamiltonian"];

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub eps: f64,
    pub t_final: f64,
    pub samples: usize,
    pub conservation: ConservationReport,
}

/// Evolves the soliton of the config under the PDE and writes
/// `trajectory.csv`, `conservation.json` and optionally `snapshots.csv`
/// and `norms.svg`.
pub fn cmd_simulate(cfg: &ExperimentConfig, out: &Path, plots: bool) -> Result<SimulateSummary> {
    let grid = cfg.grid()?;
    let b = cfg.potential_spec()?;
    let opts = cfg.pde_options(cfg.eps)?;
    let u0 = soliton_profile(&grid, &cfg.group_element()?);
    let system = PdeSystem::new(&grid, &b, cfg.eps);
    prepare_dir(out)?;
    write_json(&out.join("config.json"), cfg)?;
    let mut csv = CsvWriter::create(&out.join("trajectory.csv"), &TRAJECTORY_HEADER)?;
    let mut snaps = if cfg.snapshots {
        let mut header = vec!["t".to_string()];
        for j in 0..grid.n_points() {
            header.push(format!("re_{j}"));
            header.push(format!("im_{j}"));
        }
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        Some(CsvWriter::create(&out.join("snapshots.csv"), &refs)?)
    } else {
        None
    };
    let mut series = (Vec::new(), Vec::new());
    let mut samples = 0;
    let conservation = evolve_pde_with(&system, &u0, &opts, |t, u| {
        let o = observe(&system, t, u);
        csv.row(&[o.t, o.norm_l2, o.norm_h12, o.mass, o.hamiltonian])?;
        if let Some(s) = snaps.as_mut() {
            let mut row = Vec::with_capacity(1 + 2 * u.values().len());
            row.push(t);
            for v in u.values() {
                row.push(v.re);
                row.push(v.im);
            }
            s.row(&row)?;
        }
        series.0.push((t, o.norm_l2));
        series.1.push((t, o.norm_h12));
        samples += 1;
        Ok(())
    });
    csv.finish()?;
    if let Some(s) = snaps {
        s.finish()?;
    }
    let conservation = conservation?;
    write_json(&out.join("conservation.json"), &conservation)?;
    if plots {
        let svg = line_plot(
            "norms along the run",
            "t",
            "norm",
            &[
                Series { label: "L2".into(), points: series.0 },
                Series { label: "H1/2".into(), points: series.1 },
            ],
            false,
        );
        fs::write(out.join("norms.svg"), svg)?;
    }
    Ok(SimulateSummary { eps: cfg.eps, t_final: opts.t_final, samples, conservation })
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveSummary {
    pub eps: f64,
    pub t_final: f64,
    pub samples: usize,
    pub alpha2mu_drift: f64,
    pub stats: OdeStats,
}

/// Integrates the effective dynamics at the PDE sample times and writes
/// `effective.csv` and `effective.json`.
pub fn cmd_effective(cfg: &ExperimentConfig, out: &Path, plots: bool) -> Result<EffectiveSummary> {
    let opts = cfg.pde_options(cfg.eps)?;
    let times = sample_times(&opts)?;
    let s0 = EffectiveState { t: 0.0, g: cfg.group_element()? };
    let tr = evolve_effective(&s0, &cfg.potential_spec()?, cfg.eps, &times, &OdeOptions::default())?;
    prepare_dir(out)?;
    write_json(&out.join("config.json"), cfg)?;
    let mut csv = CsvWriter::create(&out.join("effective.csv"), &["t", "a", "alpha", "phi", "mu"])?;
    for s in &tr.states {
        csv.row(&[s.t, s.g.a, s.g.alpha, s.g.phi, s.g.mu])?;
    }
    csv.finish()?;
    let summary = EffectiveSummary {
        eps: cfg.eps,
        t_final: opts.t_final,
        samples: tr.states.len(),
        alpha2mu_drift: tr.alpha2mu_drift,
        stats: tr.stats,
    };
    write_json(&out.join("effective.json"), &summary)?;
    if plots {
        let names = ["a", "alpha", "phi", "mu"];
        let series: Vec<Series> = (0..4)
            .map(|c| Series {
                label: names[c].into(),
                points: tr.states.iter().map(|s| (s.t, s.g.to_array()[c])).collect(),
            })
            .collect();
        fs::write(out.join("effective.svg"), line_plot("effective dynamics", "t", "parameter", &series, false))?;
    }
    Ok(summary)
}

/// Metrics file of a tracked run.
#[derive(Debug, Clone, Serialize)]
pub struct TrackSummary {
    pub metrics: TheoremMetrics,
    pub conservation: ConservationReport,
    /// Smallest c with ‖X‖ ≤ c(ε‖w‖_{L²} + ‖w‖²_{H½} + ‖w‖³_{H½}).
    pub x_bound_constant: f64,
    pub mass_identity_max_rel: f64,
    pub max_newton_iters: usize,
    pub max_residual: f64,
    pub mu_window_exits: usize,
    pub first_mu_window_exit: Option<f64>,
    pub effective_alpha2mu_drift: f64,
    pub samples: usize,
}

impl TrackSummary {
    pub fn from_run(run: &TrackRun) -> Self {
        let r = &run.report;
        TrackSummary {
            metrics: run.metrics,
            conservation: run.conservation,
            x_bound_constant: x_bound_constant(r, validation::tol::X_BOUND_FLOOR),
            mass_identity_max_rel: r.mass_identity_max_rel(validation::tol::MASS_IDENTITY_FLOOR),
            max_newton_iters: r.newton_iters.iter().copied().max().unwrap_or(0),
            max_residual: r.residuals.iter().copied().fold(0.0, f64::max),
            mu_window_exits: r.mu_window_exits.len(),
            first_mu_window_exit: r.mu_window_exits.first().copied(),
            effective_alpha2mu_drift: run.effective.alpha2mu_drift,
            samples: r.len(),
        }
    }
}

pub const TRACK_HEADER: [&str; 11] =
    ["t", "a", "alpha", "phi", "mu", "w_h12", "x_norm", "da", "dalpha", "dphi", "dmu"];

/// Writes `track.csv`, `trajectory.csv`, `metrics.json` and optional plots.
pub fn write_track_outputs(run: &TrackRun, out: &Path, plots: bool) -> Result<TrackSummary> {
    prepare_dir(out)?;
    let r = &run.report;
    let dev = r.deviations.as_ref();
    let mut csv = CsvWriter::create(&out.join("track.csv"), &TRACK_HEADER)?;
    for i in 0..r.len() {
        let g = r.g_series[i];
        let d = dev.map_or([f64::NAN; 4], |d| d[i]);
        csv.row(&[r.times[i], g.a, g.alpha, g.phi, g.mu, r.w_h12[i], r.x_norm[i], d[0], d[1], d[2], d[3]])?;
    }
    csv.finish()?;
    let mut csv = CsvWriter::create(&out.join("trajectory.csv"), &TRAJECTORY_HEADER)?;
    for o in &run.observables {
        csv.row(&[o.t, o.norm_l2, o.norm_h12, o.mass, o.hamiltonian])?;
    }
    csv.finish()?;
    let summary = TrackSummary::from_run(run);
    write_json(&out.join("metrics.json"), &summary)?;
    if plots {
        let w = Series { label: "|w|_H1/2".into(), points: r.times.iter().copied().zip(r.w_h12.iter().copied()).collect() };
        fs::write(out.join("w_h12.svg"), line_plot("remainder size", "t", "|w|_H1/2", &[w], false))?;
        if let Some(d) = dev {
            let names = ["|a - a_eff|", "|alpha - alpha_eff|", "|phi - phi_eff|", "|mu - mu_eff|"];
            let series: Vec<Series> = (0..4)
                .map(|c| Series {
                    label: names[c].into(),
                    points: r.times.iter().zip(d).map(|(t, v)| (*t, v[c])).collect(),
                })
                .collect();
            fs::write(out.join("deviations.svg"), line_plot("deviation from the effective dynamics", "t", "deviation", &series, true))?;
        }
    }
    Ok(summary)
}

/// PDE, decomposition and effective comparison at the config's ε.
pub fn cmd_track(cfg: &ExperimentConfig, out: &Path, plots: bool) -> Result<TrackSummary> {
    let grid = cfg.grid()?;
    let run = run_tracked(&cfg.track_setup(&grid, cfg.eps)?)?;
    prepare_dir(out)?;
    write_json(&out.join("config.json"), cfg)?;
    write_track_outputs(&run, out, plots)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepMember {
    pub eps: f64,
    pub dir: PathBuf,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<TrackSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub delta: f64,
    pub members: Vec<SweepMember>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slopes: Option<SweepSlopes>,
    pub complete: bool,
}

/// Tracked runs over `eps_list` on the rayon pool; one directory per
/// member and `summary.json` with fitted slopes. A failing member fails the
/// sweep after the summary of the others is written.
pub fn cmd_sweep(cfg: &ExperimentConfig, out: &Path, plots: bool) -> Result<SweepSummary> {
    use rayon::prelude::*;
    let eps_list = cfg.sweep_eps()?;
    for &e in &eps_list {
        cfg.t_final_for(e)?;
    }
    let grid = cfg.grid()?;
    prepare_dir(out)?;
    write_json(&out.join("config.json"), cfg)?;
    let results: Vec<(f64, PathBuf, Result<TrackSummary>)> = eps_list
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let dir = out.join(format!("eps_{i:02}"));
            let res = cfg
                .track_setup(&grid, eps)
                .and_then(|s| run_tracked(&s))
                .and_then(|run| write_track_outputs(&run, &dir, plots));
            (eps, dir, res)
        })
        .collect();
    let mut members = Vec::new();
    let mut first_err = None;
    for (eps, dir, res) in results {
        let (status, summary) = match res {
            Ok(s) => ("ok".to_string(), Some(s)),
            Err(e) => {
                let msg = e.to_string();
                log::error!("sweep member eps = {eps} failed: {msg}");
                first_err.get_or_insert(e);
                (format!("failed: {msg}"), None)
            }
        };
        members.push(SweepMember { eps, dir, status, summary });
    }
    let complete = first_err.is_none();
    let slopes = complete.then(|| {
        let metrics: Vec<TheoremMetrics> = members.iter().filter_map(|m| m.summary.as_ref().map(|s| s.metrics)).collect();
        sweep_slopes(&metrics)
    });
    let summary = SweepSummary { delta: cfg.delta, members, slopes, complete };
    write_json(&out.join("summary.json"), &summary)?;
    match first_err {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}

/// Validation settings taken from a config: grid, seed, dt, stride, δ and
/// (when given) the sweep list.
pub fn validation_options(cfg: Option<&ExperimentConfig>) -> Result<ValidationOptions> {
    let mut o = ValidationOptions::default();
    if let Some(c) = cfg {
        o.n_points = c.grid.n;
        o.map_scale = c.grid.map_scale;
        o.seed = c.seed;
        o.dt = c.dt;
        o.stride = c.stride;
        o.delta = c.delta;
        if c.eps_list.is_some() {
            o.sweep_eps = c.sweep_eps()?;
        }
    }
    Ok(o)
}

/// Runs the acceptance suite, printing each criterion as it completes, and
/// writes `validation.json`.
pub fn cmd_validate(cfg: Option<&ExperimentConfig>, out: &Path) -> Result<ValidationSummary> {
    let opts = validation_options(cfg)?;
    let summary = validation::run_all_with(&opts, |c| println!("{c}"))?;
    prepare_dir(out)?;
    write_json(&out.join("validation.json"), &summary)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::config("$.delta", "bad")), 2);
        assert_eq!(exit_code(&Error::config("$", "x").at_time(1.0)), 2);
        assert_eq!(exit_code(&Error::Divergence { step: 3, t: 0.1 }), 1);
    }

    #[test]
    fn sample_times_match_the_schedule() {
        let t = sample_times(&PdeOptions { t_final: 1.0, dt: 0.1, stride: 3 }).unwrap();
        assert_eq!(t.len(), 5);
        assert!((t[1] - 0.3).abs() < 1e-12 && (t[4] - 1.0).abs() < 1e-12);
    }
}
