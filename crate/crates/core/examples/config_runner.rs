//! Driving the command layer from a JSON document.

use szego_lab::runner::{cmd_effective, cmd_track, ExperimentConfig};

fn main() -> szego_lab::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "grid": {"n": 1024},
            "soliton": {"a": -1.0, "alpha": 1.0, "phi": 0.0, "mu": 1.0},
            "potential": {"kind": "sech2", "amplitude": 1.0, "center": 0.0, "width": 1.0},
            "eps": 0.02,
            "t_final": {"policy": "fixed", "value": 2.0},
            "dt": 0.005,
            "stride": 20
        }"#,
    )?;
    let out = std::env::temp_dir().join("szego-lab-config-runner");
    let eff = cmd_effective(&cfg, &out, false)?;
    let track = cmd_track(&cfg, &out, true)?;
    println!("effective alpha^2 mu drift {:.1e}", eff.alpha2mu_drift);
    println!("sup |w|_H1/2 {:.3e}, X-bound constant {:.3}", track.metrics.sup_w_h12, track.x_bound_constant);
    println!("artifacts in {}", out.display());

    match ExperimentConfig::from_json(r#"{"delta": 0.7}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
