//! Numerical laboratory for boundary stabilization of the viscous
//! Saint-Venant equations.
//!
//! The pipeline is: [`steady::solve_steady`] builds a boundary-layer steady
//! state, [`linear::build_linear_system`] linearizes around it,
//! [`lyapunov`] builds the diagonal quadratic Lyapunov certificate and checks
//! the boundary conditions, and [`sim`] / [`spectrum`] verify decay directly.

pub mod eigen;
pub mod error;
pub mod io;
pub mod linear;
pub mod lyapunov;
pub mod mat2;
pub mod model;
pub mod ode;
pub mod sim;
pub mod spectrum;
pub mod steady;

pub use error::{Error, OmegaBound, Result};
pub use linear::{build_linear_system, LinearizedSystem, Stencil};
pub use lyapunov::{
    auto_boundary_coeffs, build_weights, check_stability, LyapunovWeights, StabilityReport,
};
pub use model::{BoundaryCoeffs, Grid, PhysicalParams, StateVector};
pub use sim::{simulate, SimulationConfig, SimulationTrace};
pub use spectrum::{spectrum, SpectrumReport};
pub use steady::{solve_steady, SteadyState};
