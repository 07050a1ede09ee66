//! A soliton crossing a Gaussian bump under the effective dynamics.

use szego_lab::dynamics::{evolve_effective, EffectiveState, OdeOptions, PotentialSpec};
use szego_lab::manifold::GroupElement;

fn main() -> szego_lab::Result<()> {
    let b = PotentialSpec::gaussian(1.0, 0.0, 1.0)?;
    let s0 = EffectiveState { t: 0.0, g: GroupElement::new(-4.0, 1.0, 0.0, 1.0)? };
    let times: Vec<f64> = (1..=8).map(|k| 2.0 * k as f64).collect();
    let tr = evolve_effective(&s0, &b, 0.05, &times, &OdeOptions::default())?;
    println!("{:>5} {:>9} {:>9} {:>10} {:>9}", "t", "a", "alpha", "phi", "mu");
    for s in &tr.states {
        println!("{:5.1} {:9.5} {:9.6} {:10.5} {:9.6}", s.t, s.g.a, s.g.alpha, s.g.phi, s.g.mu);
    }
    println!("alpha^2 mu drift {:.1e}, {} steps", tr.alpha2mu_drift, tr.stats.accepted);
    Ok(())
}
