//! Lagrangian solver and diagnostics for the one-dimensional viscous
//! Saint-Venant system with a physical-vacuum free boundary.
//!
//! On the reference interval `I = [0, 1]` the velocity `v(x, t)` solves
//!
//! ```text
//! rho0 v_t + (rho0^2 / eta_x^2)_x = (rho0 v_x / eta_x^2)_x,   eta = x + int_0^t v,
//! ```
//!
//! where the initial height `rho0` vanishes linearly at both ends. The crate
//! builds the solution by Galerkin approximation of the linearized problem
//! and Picard iteration on the flow map, checks the weighted inequalities the
//! construction relies on, monitors the energy functionals along the
//! solution, and maps everything back to the moving Eulerian interval.
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//!
//! | example | shows |
//! |---|---|
//! | `vacuum_profiles` | grids, profiles, quadrature, differentiation |
//! | `weighted_inequalities` | weighted norms, inequality constants, identities |
//! | `initial_jet` | compatibility jets of the initial data |
//! | `galerkin_linearized` | assembly and the linearized modal solve |
//! | `picard_contraction` | the nonlinear solve and its contraction history |
//! | `oracle_cross_check` | Galerkin versus the finite-volume oracle |
//! | `energy_monitor` | energy functionals along a solution |
//! | `free_boundary` | Eulerian reconstruction and boundary diagnostics |
//! | `contraction_sweep` | charting convergence over a range of final times |

pub mod config;
pub mod error;
pub mod eulerian;
pub mod galerkin;
pub mod jet;
pub mod numerics;
pub mod oracle;
pub mod picard;
pub mod problem;
pub mod profile;
pub mod report;
pub mod run;
pub mod series;
pub mod trajectory;
pub mod verify;
pub mod weighted;

pub use config::{load_config, RunConfig};
pub use error::{Error, Result};
pub use problem::{InitialGuess, Problem};
pub use trajectory::SolutionTrajectory;
