//! A perturbed soliton decomposed along the run and compared with the
//! effective dynamics.

use szego_lab::decomposition::{x_bound_constant, TrackOptions};
use szego_lab::dynamics::{OdeOptions, PdeOptions, PotentialSpec};
use szego_lab::experiment::{run_tracked, TrackSetup};
use szego_lab::manifold::GroupElement;
use szego_lab::spectral::SpectralGrid;

fn main() -> szego_lab::Result<()> {
    let setup = TrackSetup {
        grid: SpectralGrid::new(2048, 1.0)?,
        g0: GroupElement::identity(),
        potential: PotentialSpec::gaussian(1.0, 0.0, 1.0)?,
        eps: 0.02,
        delta: 0.35,
        pde: PdeOptions { t_final: 4.0, dt: 2e-3, stride: 50 },
        track: TrackOptions::default(),
        ode: OdeOptions::default(),
    };
    let run = run_tracked(&setup)?;
    let r = &run.report;
    let dev = r.deviations.as_ref().expect("effective comparison");
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "t", "|w|_H1/2", "|X|", "|a-a_eff|", "|mu-mu_eff|");
    for i in (0..r.len()).step_by(8) {
        println!("{:5.2} {:10.3e} {:10.3e} {:10.3e} {:10.3e}", r.times[i], r.w_h12[i], r.x_norm[i], dev[i][0], dev[i][3]);
    }
    let m = run.metrics;
    println!("sup |w| {:.3e}, sup |a-a_eff| {:.3e}, sup |phi-phi_eff| {:.3e}", m.sup_w_h12, m.sup_da, m.sup_dphi);
    println!("X-bound constant {:.3}, mass identity error {:.1e}", x_bound_constant(r, 1e-12), r.mass_identity_max_rel(1e-8));
    Ok(())
}
