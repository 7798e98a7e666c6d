//! Error types shared across the engine.

use thiserror::Error;

/// Errors raised by model construction, solvers, and the simulator.
#[derive(Debug, Clone, Error)]
pub enum ModelError {
    /// A scalar argument fell outside its admissible domain.
    #[error("domain error in {context}: {message}")]
    Domain {
        context: &'static str,
        message: String,
    },

    /// A swap was attempted against a pool with zero depth.
    #[error("empty pool: cannot swap {quantity} against zero depth")]
    EmptyPool { quantity: f64 },

    /// The game has no non-trivial equilibrium for these parameters
    /// (the JIT LP's optimal deposit would be infinite).
    #[error("no non-trivial equilibrium: {0}")]
    NoNontrivialEquilibrium(String),

    /// A simulated strategy violates feasibility (endowment bounds or a
    /// malformed swap order).
    #[error("infeasible strategy: {0}")]
    InfeasibleStrategy(String),

    /// A bracketing or bisection failure. Unreachable for the monotone
    /// first-order conditions unless the inputs are out of domain.
    #[error("solver failure: {0}")]
    Solver(String),

    /// Crowding-out classification needs equilibria at both pi = 0 and pi.
    #[error("classification error: {0}")]
    Classification(String),

    /// Bad sweep or run configuration (unknown parameter or target name).
    #[error("configuration error: {0}")]
    Config(String),
}

impl ModelError {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        ModelError::Domain {
            context,
            message: message.into(),
        }
    }
}
