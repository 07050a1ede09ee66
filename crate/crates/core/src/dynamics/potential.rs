//! Real potentials b with b′ ∈ L¹.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Analytic families and tabulated data accepted as potentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialKind {
    /// amplitude · exp(−((y − center)/width)²)
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// amplitude · sech²((y − center)/width)
    Sech2 { amplitude: f64, center: f64, width: f64 },
    Constant { value: f64 },
    /// C¹ cubic spline through (x, b) with zero end slopes, constant outside.
    Table { x: Vec<f64>, b: Vec<f64> },
}

/// Cheap-to-evaluate potential with precomputed norms and the window
/// outside which b is constant (to double precision).
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    kind: PotentialKind,
    spline: Option<Spline>,
    window: (f64, f64),
    feature: f64,
    norms: PotentialNorms,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialNorms {
    pub sup_b: f64,
    pub l1_db: f64,
    pub l2_db: f64,
}

const GAUSSIAN_REACH: f64 = 9.0;
const SECH2_REACH: f64 = 40.0;

impl PotentialSpec {
    pub fn new(kind: PotentialKind) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidPotential(m));
        let (spline, window, feature) = match &kind {
            PotentialKind::Gaussian { amplitude, center, width }
            | PotentialKind::Sech2 { amplitude, center, width } => {
                if !(amplitude.is_finite() && center.is_finite()) {
                    return bad("amplitude and center must be finite".into());
                }
                if !(width.is_finite() && *width > 0.0) {
                    return bad(format!("width must be positive, got {width}"));
                }
                let reach = if matches!(kind, PotentialKind::Gaussian { .. }) {
                    GAUSSIAN_REACH
                } else {
                    SECH2_REACH
                };
                (None, (center - reach * width, center + reach * width), *width)
            }
            PotentialKind::Constant { value } => {
                if !value.is_finite() {
                    return bad("constant value must be finite".into());
                }
                (None, (0.0, 0.0), 1.0)
            }
            PotentialKind::Table { x, b } => {
                let sp = Spline::new(x, b)?;
                let feature = x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
                (Some(sp), (x[0], x[x.len() - 1]), feature)
            }
        };
        let mut spec = PotentialSpec {
            kind,
            spline,
            window,
            feature,
            norms: PotentialNorms { sup_b: 0.0, l1_db: 0.0, l2_db: 0.0 },
        };
        spec.norms = spec.compute_norms();
        Ok(spec)
    }

    pub fn gaussian(amplitude: f64, center: f64, width: f64) -> Result<Self> {
        Self::new(PotentialKind::Gaussian { amplitude, center, width })
    }

    pub fn sech2(amplitude: f64, center: f64, width: f64) -> Result<Self> {
        Self::new(PotentialKind::Sech2 { amplitude, center, width })
    }

    pub fn constant(value: f64) -> Self {
        Self::new(PotentialKind::Constant { value }).expect("finite constant")
    }

    pub fn table(x: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(PotentialKind::Table { x, b })
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn norms(&self) -> PotentialNorms {
        self.norms
    }

    /// Interval outside which b′ vanishes and b equals its limits.
    pub fn support_hint(&self) -> Option<(f64, f64)> {
        match self.kind {
            PotentialKind::Constant { .. } => None,
            _ => Some(self.window),
        }
    }

    pub(crate) fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Smallest length scale on which b varies.
    pub fn feature_scale(&self) -> f64 {
        self.feature
    }

    /// Limits b(−∞), b(+∞).
    pub fn limits(&self) -> (f64, f64) {
        match &self.kind {
            PotentialKind::Gaussian { .. } | PotentialKind::Sech2 { .. } => (0.0, 0.0),
            PotentialKind::Constant { value } => (*value, *value),
            PotentialKind::Table { b, .. } => (b[0], b[b.len() - 1]),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, PotentialKind::Constant { .. })
    }

    pub fn b(&self, y: f64) -> f64 {
        match &self.kind {
            PotentialKind::Gaussian { amplitude, center, width } => {
                let z = (y - center) / width;
                amplitude * (-z * z).exp()
            }
            PotentialKind::Sech2 { amplitude, center, width } => {
                let s = sech((y - center) / width);
                amplitude * s * s
            }
            PotentialKind::Constant { value } => *value,
            PotentialKind::Table { .. } => self.spline.as_ref().expect("table spline").eval(y).0,
        }
    }

    pub fn db(&self, y: f64) -> f64 {
        match &self.kind {
            PotentialKind::Gaussian { amplitude, center, width } => {
                let z = (y - center) / width;
                -2.0 * z / width * amplitude * (-z * z).exp()
            }
            PotentialKind::Sech2 { amplitude, center, width } => {
                let z = (y - center) / width;
                let s = sech(z);
                -2.0 * amplitude * s * s * z.tanh() / width
            }
            PotentialKind::Constant { .. } => 0.0,
            PotentialKind::Table { .. } => self.spline.as_ref().expect("table spline").eval(y).1,
        }
    }

    /// b sampled at the given points.
    pub fn sample(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.b(x)).collect()
    }

    /// ∫ f over the window with composite Gauss–Legendre panels no wider than
    /// `max_panel` (and never straddling a table knot).
    pub(crate) fn integrate_window<F: FnMut(f64) -> f64>(&self, mut f: F, max_panel: f64) -> f64 {
        let panel = max_panel.min(0.5 * self.feature);
        match &self.kind {
            PotentialKind::Constant { .. } => 0.0,
            PotentialKind::Table { x, .. } => {
                x.windows(2).map(|w| quad::composite(&mut f, w[0], w[1], panel)).sum()
            }
            _ => quad::composite(f, self.window.0, self.window.1, panel),
        }
    }

    fn compute_norms(&self) -> PotentialNorms {
        let (lo, hi) = self.limits();
        let mut sup_b = lo.abs().max(hi.abs());
        let l1_db = self.integrate_window(
            |y| {
                sup_b = sup_b.max(self.b(y).abs());
                self.db(y).abs()
            },
            f64::INFINITY,
        );
        let l2_db = self.integrate_window(|y| self.db(y).powi(2), f64::INFINITY).sqrt();
        if let PotentialKind::Gaussian { amplitude, .. } | PotentialKind::Sech2 { amplitude, .. } =
            self.kind
        {
            sup_b = amplitude.abs();
        }
        PotentialNorms { sup_b, l1_db, l2_db }
    }
}

fn sech(z: f64) -> f64 {
    let e = (-z.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// Cubic spline with clamped (zero) end slopes.
#[derive(Debug, Clone)]
struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::InvalidPotential(format!(
                "table needs matching x and b of length >= 2 (got {} and {})",
                n,
                y.len()
            )));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("table entries must be finite".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidPotential("table x must be strictly increasing".into()));
        }
        // Second derivatives M_i from the clamped tridiagonal system.
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = h[0] / 3.0;
        sup[0] = h[0] / 6.0;
        rhs[0] = (y[1] - y[0]) / h[0];
        for i in 1..n - 1 {
            sub[i] = h[i - 1] / 6.0;
            diag[i] = (h[i - 1] + h[i]) / 3.0;
            sup[i] = h[i] / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
        }
        sub[n - 1] = h[n - 2] / 6.0;
        diag[n - 1] = h[n - 2] / 3.0;
        rhs[n - 1] = -(y[n - 1] - y[n - 2]) / h[n - 2];
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(Spline { x: x.to_vec(), y: y.to_vec(), m })
    }

    /// (value, derivative)
    fn eval(&self, t: f64) -> (f64, f64) {
        let n = self.x.len();
        if t <= self.x[0] {
            return (self.y[0], 0.0);
        }
        if t >= self.x[n - 1] {
            return (self.y[n - 1], 0.0);
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let d = (self.y[i + 1] - self.y[i]) / h
            + (-(3.0 * a * a - 1.0) * mi + (3.0 * b * b - 1.0) * mj) * h / 6.0;
        (v, d)
    }
}
