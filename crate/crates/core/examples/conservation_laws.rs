//! Mass and H_b are conserved under the perturbation; the momentum is not.

use szego_lab::dynamics::{evolve_pde, PdeOptions, PotentialSpec};
use szego_lab::manifold::{soliton_profile, GroupElement};
use szego_lab::spectral::SpectralGrid;

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(2048, 1.0)?;
    let u0 = soliton_profile(&grid, &GroupElement::identity());
    let b = PotentialSpec::gaussian(1.0, 0.0, 1.0)?;
    let opts = PdeOptions { t_final: 4.0, dt: 2e-3, stride: 100 };
    for eps in [0.0, 0.01, 0.05] {
        let r = evolve_pde(&u0, &b, eps, &opts)?.report;
        println!(
            "eps = {eps:<5} mass drift {:.1e}  H_b drift {:.1e}  momentum drift {:.1e}",
            r.mass_drift, r.hamiltonian_drift, r.momentum_drift
        );
    }
    Ok(())
}
