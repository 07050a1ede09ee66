//! The soliton manifold: group action, symplectic table and projection.

use szego_lab::manifold::{
    act, manifold_project, omega_eta_matrix, omega_eta_reference, soliton_profile, EtaTangents, GroupElement,
    LieVector,
};
use szego_lab::spectral::{eta_field, SpectralGrid};

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(2048, 1.0)?;
    let m = omega_eta_matrix(&grid);
    println!("omega(e_i eta, e_j eta):\n{m:.6}");
    println!("max deviation from the closed form: {:.2e}", (m - omega_eta_reference()).amax());

    let g = GroupElement::new(0.7, 1.3, 0.4, 0.8)?;
    let direct = soliton_profile(&grid, &g);
    let acted = act(&g, &eta_field(&grid));
    println!("|g.eta (closed form) - act(g, eta)| = {:.2e}", (&direct - &acted).l2_norm());
    println!("mass of g.eta = {:.12} (pi alpha^2 mu = {:.12})", direct.l2_norm_sq(), std::f64::consts::PI * g.conformal_factor());

    let y = LieVector([0.3, -0.2, 0.5, 0.1]);
    let p = manifold_project(&EtaTangents::new(&grid).combine(&y));
    println!("P(Y.eta) recovers Y = {:?}", p.0);
    Ok(())
}
