//! Dormand–Prince 5(4) integrator with embedded error control.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-12, max_steps: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates y′ = f(t, y) from (t0, y0) and returns y at each of `times`
/// (non-decreasing, all ≥ t0). Steps are shortened to land on every output
/// time exactly.
pub fn dopri5<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    times: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<[f64; N]>, OdeStats)>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < t0) {
        return Err(Error::InvalidStepping("output times must be sorted and >= t0".into()));
    }
    let mut stats = OdeStats { accepted: 0, rejected: 0, evaluations: 0 };
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    stats.evaluations += 1;
    let scale0 = y.iter().map(|v| v.abs()).fold(0.0, f64::max) * opts.rtol + opts.atol;
    let rate = k1.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut h = if rate > 0.0 { (scale0 / rate).powf(0.2).min(0.1) } else { 0.1 };
    for &target in times {
        while t < target {
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(Error::InvalidStepping(format!("exceeded {} steps", opts.max_steps)));
            }
            let remaining = target - t;
            let last = h >= remaining;
            let hs = if last { remaining } else { h };
            if hs < 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow { t, h: hs });
            }
            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += hs * a * kj[i];
                        }
                    }
                }
                k[s] = f(t + C[s] * hs, &ys)?;
                stats.evaluations += 1;
            }
            let mut y5 = y;
            let mut err = 0.0;
            for i in 0..N {
                let mut d5 = 0.0;
                let mut d4 = 0.0;
                for s in 0..7 {
                    d5 += B5[s] * k[s][i];
                    d4 += B4[s] * k[s][i];
                }
                y5[i] += hs * d5;
                let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
                err += (hs * (d5 - d4) / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            if !err.is_finite() || y5.iter().any(|v| !v.is_finite()) {
                if hs < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t, h: hs });
                }
                h = hs * 0.1;
                stats.rejected += 1;
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                y = y5;
                k1 = k[6];
                stats.accepted += 1;
                if !last || factor < 1.0 {
                    h = hs * factor;
                }
            } else {
                stats.rejected += 1;
                h = hs * factor.min(1.0);
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t, h });
                }
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let (ys, stats) =
            dopri5(|_, y: &[f64; 2]| Ok([y[1], -y[0]]), 0.0, [1.0, 0.0], &times, &OdeOptions::default())
                .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0] - t.cos()).abs() < 1e-9);
            assert!((y[1] + t.sin()).abs() < 1e-9);
        }
        assert!(stats.accepted > 0);
    }

    #[test]
    fn fifth_order_convergence() {
        // error on y′ = y over [0, 1] shrinks with tolerance
        let run = |rtol: f64| {
            let o = OdeOptions { rtol, atol: rtol * 1e-2, ..Default::default() };
            let (ys, _) = dopri5(|_, y: &[f64; 1]| Ok([y[0]]), 0.0, [1.0], &[1.0], &o).unwrap();
            (ys[0][0] - std::f64::consts::E).abs()
        };
        assert!(run(1e-6) > run(1e-10));
        assert!(run(1e-10) < 1e-9);
    }

    #[test]
    fn rejects_unsorted_times_and_reports_blowup() {
        let o = OdeOptions::default();
        assert!(dopri5(|_, y: &[f64; 1]| Ok([y[0]]), 0.0, [1.0], &[1.0, 0.5], &o).is_err());
        let r = dopri5(|_, y: &[f64; 1]| Ok([y[0] * y[0]]), 0.0, [1.0], &[2.0], &o);
        assert!(matches!(r, Err(Error::StepSizeUnderflow { .. })));
    }
}
