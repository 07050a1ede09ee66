//! Right-hand side of the equation satisfied by w in u = g·(η + w).

use num_complex::Complex64;

use crate::decomposition::x_vector;
use crate::dynamics::coefficients::abc_coefficients;
use crate::dynamics::potential::PotentialSpec;
use crate::error::Result;
use crate::manifold::{lie_apply, GroupElement, LieVector, PoleSeries};
use crate::operators::EtaFrame;
use crate::spectral::{szego_project, HardyField, I};

/// ∂ₜw = (Z − X)·(η + w) − iεΠ(b(a + x/μ)(η + w)) + iα²μ²(ℒw − 𝒩w),
/// with Z = 2B e₁ − C e₂ + (A+B) e₃ + 2C e₄ and X from [`x_vector`].
pub fn w_equation_rhs(
    w: &HardyField,
    g: &GroupElement,
    gdot: [f64; 4],
    b: &PotentialSpec,
    eps: f64,
) -> Result<HardyField> {
    let grid = w.grid();
    let k = abc_coefficients(g, b, eps);
    let x = x_vector(g, gdot, b, eps);
    let z = LieVector([2.0 * k.b, -k.c, k.a + k.b, 2.0 * k.c]);
    let eta = PoleSeries::eta();
    let eta_field = eta.to_field(grid);
    let full = &eta_field + w;
    let moving = lie_apply(&(z - x), &full);
    let potential: Vec<Complex64> = grid
        .nodes()
        .iter()
        .zip(full.values())
        .map(|(&xn, v)| -I * eps * b.b(g.a + xn / g.mu) * v)
        .collect();
    let potential = szego_project(grid, &potential)?;
    let frame = EtaFrame::new(grid);
    let lin = &frame.linearized(w) - &frame.nonlinear(w);
    let k2 = g.alpha * g.alpha * g.mu * g.mu;
    Ok(HardyField::combine(
        grid,
        &[(1.0.into(), &moving), (1.0.into(), &potential), (I * k2, &lin)],
    ))
}
