//! Finite-rank Hankel operators and the kernel of H_{η²}.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szego_lab::operators::{hankel_apply, hankel_rank, kernel_witness, DEFAULT_HANKEL_MODES, DEFAULT_RANK_TOL};
use szego_lab::random::random_field;
use szego_lab::spectral::{eta_field, szego_project, SpectralGrid};

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(2048, 1.0)?;
    let eta = eta_field(&grid);
    let eta2 = szego_project(&grid, &eta.values().iter().map(|v| v * v).collect::<Vec<_>>())?;

    for (name, u) in [("eta", &eta), ("eta^2", &eta2)] {
        let d = hankel_rank(u, DEFAULT_HANKEL_MODES, DEFAULT_RANK_TOL)?;
        let top: Vec<String> = d.singular_values.iter().take(4).map(|s| format!("{s:.3e}")).collect();
        println!("H_{name}: rank {} (symmetry defect {:.1e}), sigma = [{}]", d.rank_estimate, d.symmetry_defect, top.join(", "));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let h = random_field(&grid, &mut rng, 64);
        let f = kernel_witness(&h);
        println!("|H_eta2 f| / |h| = {:.2e}", hankel_apply(&eta2, &f)?.l2_norm() / h.l2_norm());
    }
    Ok(())
}
