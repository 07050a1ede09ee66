//! Quadratic form of the linearized operator on the symplectic complement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szego_lab::spectral::SpectralGrid;
use szego_lab::validation::{coercivity_ratios, coercivity_witness_ratio};

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(4096, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut r = coercivity_ratios(&grid, &mut rng, 200);
    r.sort_by(f64::total_cmp);
    println!("<Lw,w>/|w|^2_H1/2 over 200 random fields:");
    println!("  min {:.4}  median {:.4}  max {:.4}", r[0], r[100], r[199]);
    println!("at rho_2 = (x-i)^2/(x+i)^3/sqrt(pi): {:.4}", coercivity_witness_ratio(&grid));
    Ok(())
}
