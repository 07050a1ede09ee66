//! Fitted ε-exponents of the tracked deviations on a coarse grid.

use szego_lab::decomposition::TrackOptions;
use szego_lab::dynamics::{OdeOptions, PdeOptions, PotentialSpec};
use szego_lab::experiment::{run_tracked_many, sweep_slopes, TrackSetup};
use szego_lab::manifold::GroupElement;
use szego_lab::spectral::SpectralGrid;

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(1024, 1.0)?;
    let setups: Vec<TrackSetup> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&eps| TrackSetup {
            grid: grid.clone(),
            g0: GroupElement::identity(),
            potential: PotentialSpec::gaussian(1.0, 0.0, 1.0).expect("valid"),
            eps,
            delta: 0.35,
            pde: PdeOptions { t_final: 0.5 * eps.powf(-0.5), dt: 5e-3, stride: 20 },
            track: TrackOptions::default(),
            ode: OdeOptions::default(),
        })
        .collect();
    let runs = run_tracked_many(&setups).into_iter().collect::<szego_lab::Result<Vec<_>>>()?;
    for r in &runs {
        let m = r.metrics;
        println!("eps {:<5} t {:5.2}  sup|w| {:.3e}  sup|a-a_eff| {:.3e}  sup|mu-mu_eff| {:.3e}", m.eps, m.t_final, m.sup_w_h12, m.sup_da, m.sup_dmu);
    }
    let metrics: Vec<_> = runs.iter().map(|r| r.metrics).collect();
    println!("{:#?}", sweep_slopes(&metrics));
    Ok(())
}
