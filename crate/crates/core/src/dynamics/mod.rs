//! Time evolution: the perturbed Szegő equation, the effective dynamics on
//! the soliton manifold, the modulation coefficients and the w-equation.

pub mod coefficients;
pub mod potential;

pub use coefficients::{abc_coefficients, CoefficientTriple};
pub use potential::{PotentialKind, PotentialNorms, PotentialSpec};
pub mod effective;
pub mod ode;
pub mod pde;
pub mod w_equation;

pub use effective::{effective_rhs, evolve_effective, EffectiveState, EffectiveTrajectory};
pub use ode::OdeOptions;
pub use pde::{evolve_pde, pde_rhs, ConservationReport, PdeOptions, PdeSystem, PdeTrajectory};
pub use w_equation::w_equation_rhs;
