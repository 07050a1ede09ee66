//! Szegő projection and Sobolev norms on the rational spectral grid.

use num_complex::Complex64;
use szego_lab::spectral::{eta_field, sobolev_norm, synthesize, SpectralGrid};

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::new(2048, 1.0)?;

    // cos x = (e^{ix} + e^{-ix})/2: the projection keeps e^{ix}/2
    let s = synthesize(&grid, |x| Complex64::new((-x * x / 50.0).exp() * x.cos(), 0.0))?;
    println!("negative-frequency mass discarded: {:.6}", s.negative_mass);
    println!("kept L2 norm: {:.6}", s.field.l2_norm());

    let eta = eta_field(&grid);
    println!("|eta|_L2^2   = {:.15} (pi)", eta.l2_norm_sq());
    println!("|eta|_H1/2   = {:.15}", sobolev_norm(&eta, 0.5, false)?);
    println!("|eta|_dot H1/2^2 = {:.15} (pi/2)", eta.h12_homogeneous_sq());
    println!("effective degree of eta: {}", eta.effective_degree());
    Ok(())
}
