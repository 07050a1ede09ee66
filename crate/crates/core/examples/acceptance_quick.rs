//! The fast acceptance criteria on the default grid.

use szego_lab::spectral::SpectralGrid;
use szego_lab::validation::{coercivity, effective_fixed_point, kernel_and_kronecker, symplectic_table};

fn main() -> szego_lab::Result<()> {
    let grid = SpectralGrid::default_grid();
    println!("{}", symplectic_table(&grid));
    println!("{}", coercivity(&grid, 0));
    println!("{}", kernel_and_kronecker(&grid, 0)?);
    println!("{}", effective_fixed_point(0)?);
    Ok(())
}
