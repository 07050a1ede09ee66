//! Recovering g from u = g·(η + w) by Newton iteration.

use szego_lab::decomposition::{reparametrize, NewtonOptions};
use szego_lab::manifold::{act, manifold_project, GroupElement};
use szego_lab::spectral::{eta_field, synthesize, SpectralGrid};

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(2048, 1.0)?;
    let g = GroupElement::new(1.2, 0.9, -0.6, 1.25)?;

    // a small bump, with its P-component removed so that it is admissible as w
    let bump = synthesize(&grid, |x| num_complex::Complex64::new(0.0, 0.02) / (x - 1.0 + num_complex::Complex64::i()).powi(2))?.field;
    let p = manifold_project(&bump);
    let w0 = &bump - &szego_lab::manifold::EtaTangents::new(&grid).combine(&p);
    let u = act(&g, &(&eta_field(&grid) + &w0));

    let guess = GroupElement::new(1.0, 1.0, -0.5, 1.1)?;
    let d = reparametrize(&u, &guess, &NewtonOptions::default())?;
    println!("recovered g = {:?} in {} iterations", d.g, d.newton_iters);
    println!("|g - g_true| = {:.2e}, |w - w0| = {:.2e}", d.g.distance(&g), (&d.w - &w0).l2_norm());
    println!("residual {:.1e}, |w|_H1/2 = {:.4e}", d.residual, d.w_h12);
    Ok(())
}
