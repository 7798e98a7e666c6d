//! Equilibrium engine for just-in-time (JIT) liquidity provision on
//! constant-product automated market makers.
//!
//! The library computes subgame-perfect equilibria of a five-period
//! liquidity-provision game between passive LPs, one or two JIT LPs, an
//! informed trader, an uninformed trader, and an arbitrageur. It covers:
//!
//! - the baseline game with a monopolist JIT LP ([`baseline`]),
//! - a two-tiered fee design that transfers part of the JIT LP's fee share
//!   to passive LPs, with welfare analysis ([`fee_tier`]),
//! - Cournot competition between two JIT LPs ([`cournot`]),
//! - crowding-out vs. complementing thresholds on the uninformed shock
//!   size ([`thresholds`]),
//! - a step-by-step pool simulator that replays the game period by period
//!   ([`amm`]), and
//! - a brute-force grid oracle that verifies every closed form against an
//!   independent numerical search ([`oracle`]).
//!
//! All arithmetic is plain `f64`; the closed forms are smooth and the
//! solvers are bracketed bisections on monotone functions, so binary64 is
//! ample for the stated tolerances.

// Validation uses negated comparisons (`!(x > 0.0)`) on purpose: they
// reject NaN inputs, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amm;
pub mod baseline;
pub mod cournot;
pub mod error;
pub mod fee_tier;
pub mod oracle;
pub mod solver;
pub mod sweep;
pub mod thresholds;

pub use amm::{
    delta_risky, delta_stable, fee_split, price_adjust, simulate_game, GamePayoffs,
    GameStrategies, PoolParams, PoolState, Scenario, SimulationRun, SwapOrder, TraceRow,
};
pub use baseline::{
    adverse_selection_cost, fee_revenue, informed_multiple, jit_best_response, jit_multiple,
    martingale_weight, solve_equilibrium, solve_mu, trader_foc, zeta_lower, BestResponse,
    Classification, EquilibriumOutcome, MarketParams, MuSolution,
};
pub use cournot::{
    cournot_foc, cournot_outcome, nu_hat, passive_k_equilibria, solve_mu_cournot,
    CompetitionParams, CournotOutcome, PassiveParticipation,
};
pub use error::ModelError;
pub use fee_tier::{
    fbar, fee_design_report, optimal_lambda, welfare, zeta_hat, zeta_lower_lambda,
    FeeDesignReport,
};
pub use oracle::{run_verification, GridResponse, GridSpec, OracleCheck, OracleReport};
pub use sweep::{run_sweep, SweepAxis, SweepMode, SweepRow, SweepSpec, SweepStatus};
pub use thresholds::{
    classify, threshold_report, volume_no_jit, volume_with_jit, zeta_star, zeta_star_closed,
    zeta_star_cournot, ThresholdOutcome, ThresholdReport,
};
