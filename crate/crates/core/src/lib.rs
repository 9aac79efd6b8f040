//! Integer optimal control with total-variation regularization.
//!
//! This crate solves control problems of the form
//!
//! ```text
//!     min  j(w) + alpha * TV(w)
//!     s.t. w(t) in W  for a.a. t in (0,T),
//! ```
//!
//! where `W` is a finite set of integer levels, `TV` is the total variation
//! of the piecewise-constant control `w`, and `j` is a smooth reduced
//! objective driven by a PDE. The solver is a trust-region method whose
//! subproblems are integer linear programs solved exactly by dynamic
//! programming ([`trsub`]), wrapped in an outer loop with radius resets and
//! a sufficient-decrease acceptance test ([`slip`]).
//!
//! Because convergence of the trust-region method needs more smoothness
//! than some state equations provide, the control input can be regularized
//! by convolution with a compactly supported mollifier ([`mollifier`]); a
//! homotopy drives the support parameter to zero while warm-starting each
//! solve from the previous one ([`homotopy`]).
//!
//! The bundled testbed is a one-dimensional linear poro(visco)elastic
//! system with incompressible constituents ([`pde`]): displacement and
//! pressure are tracked against target profiles, the control acts either
//! as a boundary Darcy flux or as a distributed fluid source, and gradients
//! come from a discrete adjoint of the implicit Euler scheme
//! ([`objective`]). Truncated eigenfunction series for both the elastic and
//! viscoelastic case serve as independent validation oracles.

pub mod control;
pub mod homotopy;
pub mod mollifier;
pub mod objective;
pub mod pde;
pub mod quad;
pub mod slip;
pub mod trsub;

pub use control::{ControlGrid, LevelSet, SwitchPoint, TimeGrid};
pub use homotopy::{run_homotopy, HomotopyConfig, HomotopyReport, StageRecord};
pub use mollifier::{build_operator, standard_mollifier, MollifierConfig, MollifierOp};
pub use objective::{
    check_l_stationarity, instationarity, Evaluator, GradientVector, ObjectiveConfig,
    SwitchCheck, TrackingTargets,
};
pub use pde::{solve_forward, InputKind, PdeParams, PdeState};
pub use slip::{
    actual_reduction, run_slip, IterRecord, ReducedObjective, SlipConfig, SlipReport,
    TerminationReason,
};
pub use trsub::{predicted_reduction, solve_dp, TrInstance, TrSolution};

/// Errors produced by solver construction and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates its domain (non-positive horizon, empty level
    /// set, epsilon out of range, ...).
    #[error("invalid argument: {0}")]
    Invalid(String),
    /// Two objects that must share a grid or level set do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// A vector has the wrong length for the grid it is used with.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// The time-step matrix could not be factorized.
    #[error("singular step matrix at elimination column {column} (pivot {pivot:e})")]
    SingularSystem { column: usize, pivot: f64 },
    /// A trust-region step leaves the feasible level set.
    #[error("infeasible step: {0}")]
    InfeasibleStep(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
