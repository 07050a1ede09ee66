//! The unperturbed soliton under RK4 against its closed-form motion.

use szego_lab::dynamics::effective::unperturbed_soliton;
use szego_lab::dynamics::{evolve_pde, PdeOptions, PotentialSpec};
use szego_lab::manifold::{soliton_profile, GroupElement};
use szego_lab::spectral::SpectralGrid;

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(2048, 1.0)?;
    let g0 = GroupElement::identity();
    let u0 = soliton_profile(&grid, &g0);
    let b = PotentialSpec::constant(0.0);
    for dt in [0.1, 0.05, 0.025, 1e-2] {
        let tr = evolve_pde(&u0, &b, 0.0, &PdeOptions { t_final: 5.0, dt, stride: 1000 })?;
        let last = tr.samples.last().expect("final sample");
        let exact = soliton_profile(&grid, &unperturbed_soliton(&g0, last.t));
        println!(
            "dt = {dt:<6} |u(5) - exact| = {:.3e}  mass drift {:.1e}",
            (&last.field - &exact).l2_norm(),
            tr.report.mass_drift
        );
    }
    Ok(())
}
