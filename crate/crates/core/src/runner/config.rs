//! JSON experiment configuration and its validation.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decomposition::TrackOptions;
use crate::dynamics::ode::OdeOptions;
use crate::dynamics::pde::PdeOptions;
use crate::dynamics::potential::{PotentialKind, PotentialSpec};
use crate::error::{Error, Result};
use crate::experiment::TrackSetup;
use crate::manifold::GroupElement;
use crate::spectral::{SpectralGrid, DEFAULT_POINTS};

/// Admissible scale parameters.
pub const MU_LIMITS: (f64, f64) = (1.0 / 64.0, 64.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(default = "one")]
    pub map_scale: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: DEFAULT_POINTS, map_scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonConfig {
    pub a: f64,
    pub alpha: f64,
    pub phi: f64,
    pub mu: f64,
}

impl Default for SolitonConfig {
    fn default() -> Self {
        SolitonConfig { a: 0.0, alpha: 1.0, phi: 0.0, mu: 1.0 }
    }
}

/// How the final time is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimePolicy {
    Fixed { value: f64 },
    /// (δ/(6 ln c₀))·ε^{−(1/2−δ)}·ln(1/ε)
    TheoremHorizon {
        #[serde(default = "default_c0")]
        c0_fit: f64,
    },
    /// scale·ε^{−power}
    EpsPower { power: f64, #[serde(default = "one")] scale: f64 },
}

impl Default for TimePolicy {
    fn default() -> Self {
        TimePolicy::Fixed { value: 10.0 }
    }
}

impl TimePolicy {
    pub fn t_final(&self, eps: f64, delta: f64) -> f64 {
        match *self {
            TimePolicy::Fixed { value } => value,
            TimePolicy::TheoremHorizon { c0_fit } => {
                delta / (6.0 * c0_fit.ln()) * eps.powf(-(0.5 - delta)) * (1.0 / eps).ln()
            }
            TimePolicy::EpsPower { power, scale } => scale * eps.powf(-power),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_c0() -> f64 {
    32.0
}

fn default_potential() -> PotentialKind {
    PotentialKind::Gaussian { amplitude: 1.0, center: 0.0, width: 1.0 }
}

fn default_delta() -> f64 {
    0.35
}

fn default_dt() -> f64 {
    1e-3
}

fn default_stride() -> usize {
    10
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// One experiment, as read from a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub soliton: SolitonConfig,
    #[serde(default = "default_potential")]
    pub potential: PotentialKind,
    #[serde(default)]
    pub eps: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub t_final: TimePolicy,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// ε values of a sweep; ignored by the other commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(default)]
    pub track: TrackOptions,
    /// Also write every sample's field values (interleaved re/im).
    #[serde(default)]
    pub snapshots: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("every field has a default")
    }
}

fn check(ok: bool, path: &str, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(path, message()))
    }
}

impl ExperimentConfig {
    /// Parses a JSON document; errors name the offending path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { "$".to_string() } else { format!("$.{path}") }, e.inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), format!("cannot read: {e}")))?;
        Self::from_json(&text)
    }

    /// Checks the hypotheses that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        check(g.n >= 16 && g.n.is_power_of_two(), "$.grid.n", || {
            format!("must be a power of two >= 16, got {}", g.n)
        })?;
        check(g.map_scale.is_finite() && g.map_scale > 0.0, "$.grid.map_scale", || {
            format!("must be positive, got {}", g.map_scale)
        })?;
        let s = &self.soliton;
        check(s.a.is_finite() && s.phi.is_finite(), "$.soliton", || "a and phi must be finite".into())?;
        check(s.alpha.is_finite() && s.alpha > 0.0, "$.soliton.alpha", || {
            format!("must be positive, got {}", s.alpha)
        })?;
        check((MU_LIMITS.0..=MU_LIMITS.1).contains(&s.mu), "$.soliton.mu", || {
            format!("must lie in [{}, {}], got {}", MU_LIMITS.0, MU_LIMITS.1, s.mu)
        })?;
        check(self.eps.is_finite() && self.eps >= 0.0, "$.eps", || format!("must be >= 0, got {}", self.eps))?;
        check(self.delta > 0.0 && self.delta < 0.5, "$.delta", || {
            format!("must lie in (0, 1/2), got {}", self.delta)
        })?;
        let spec = PotentialSpec::new(self.potential.clone()).map_err(|e| Error::config("$.potential", e.to_string()))?;
        let n = spec.norms();
        check(n.sup_b.is_finite() && n.l1_db.is_finite() && n.l2_db.is_finite(), "$.potential", || {
            format!("norms must be finite, got {n:?}")
        })?;
        check(self.dt.is_finite() && self.dt > 0.0, "$.dt", || format!("must be positive, got {}", self.dt))?;
        check(self.stride >= 1, "$.stride", || "must be >= 1".into())?;
        match self.t_final {
            TimePolicy::Fixed { value } => check(value.is_finite() && value >= 0.0, "$.t_final.value", || {
                format!("must be >= 0, got {value}")
            })?,
            TimePolicy::TheoremHorizon { c0_fit } => {
                check(c0_fit.is_finite() && c0_fit > 1.0, "$.t_final.c0_fit", || {
                    format!("must exceed 1, got {c0_fit}")
                })?;
            }
            TimePolicy::EpsPower { power, scale } => {
                check(power.is_finite() && scale.is_finite() && scale > 0.0, "$.t_final", || {
                    "power must be finite and scale positive".into()
                })?;
            }
        }
        if let Some(list) = &self.eps_list {
            for (i, e) in list.iter().enumerate() {
                check(e.is_finite() && *e > 0.0, &format!("$.eps_list[{i}]"), || {
                    format!("must be positive, got {e}")
                })?;
            }
        }
        let tn = &self.track.newton;
        check(tn.tol > 0.0 && tn.max_iter >= 1 && tn.tubular_radius > 0.0, "$.track.newton", || {
            "tol, max_iter and tubular_radius must be positive".into()
        })?;
        Ok(())
    }

    /// Final time for a run at `eps`.
    pub fn t_final_for(&self, eps: f64) -> Result<f64> {
        if !matches!(self.t_final, TimePolicy::Fixed { .. }) && eps <= 0.0 {
            return Err(Error::config("$.t_final", "ε-dependent horizons need eps > 0"));
        }
        let t = self.t_final.t_final(eps, self.delta);
        check(t.is_finite() && t >= 0.0, "$.t_final", || format!("evaluates to {t}"))?;
        Ok(t)
    }

    /// The ε values of a sweep: at least three, geometrically spaced.
    pub fn sweep_eps(&self) -> Result<Vec<f64>> {
        let list = self.eps_list.as_ref().ok_or_else(|| Error::config("$.eps_list", "required for a sweep"))?;
        check(list.len() >= 3, "$.eps_list", || format!("needs at least 3 values, got {}", list.len()))?;
        let ratios: Vec<f64> = list.windows(2).map(|w| w[1] / w[0]).collect();
        let r0 = ratios[0];
        check(
            (r0 - 1.0).abs() > 1e-9 && ratios.iter().all(|r| ((r - r0) / r0).abs() < 1e-6),
            "$.eps_list",
            || format!("must be geometrically spaced, got ratios {ratios:?}"),
        )?;
        Ok(list.clone())
    }

    pub fn grid(&self) -> Result<Arc<SpectralGrid>> {
        SpectralGrid::new(self.grid.n, self.grid.map_scale)
    }

    pub fn group_element(&self) -> Result<GroupElement> {
        let s = self.soliton;
        GroupElement::new(s.a, s.alpha, s.phi, s.mu)
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec> {
        PotentialSpec::new(self.potential.clone())
    }

    pub fn pde_options(&self, eps: f64) -> Result<PdeOptions> {
        Ok(PdeOptions { t_final: self.t_final_for(eps)?, dt: self.dt, stride: self.stride })
    }

    /// Tracked-run setup at `eps` on `grid`.
    pub fn track_setup(&self, grid: &Arc<SpectralGrid>, eps: f64) -> Result<TrackSetup> {
        Ok(TrackSetup {
            grid: grid.clone(),
            g0: self.group_element()?,
            potential: self.potential_spec()?,
            eps,
            delta: self.delta,
            pde: self.pde_options(eps)?,
            track: self.track,
            ode: OdeOptions::default(),
        })
    }
}
