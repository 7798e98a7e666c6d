//! Equilibrium of the baseline game with a monopolist JIT LP.
//!
//! Backward induction pins the whole game down to a handful of scalars per
//! parameter set: the informed trade multiple `μ_I`, the uninformed trade
//! multiple `μ(π)` solving the trader's first-order condition, the JIT
//! deposit multiple `ν(π)`, the per-unit adverse-selection cost `C`, the
//! per-unit fee revenue `R(π)`, and the passive participation decision
//! `d_P* = e_P·1{U ≥ 0}` with `U = α·C + (1−α)·R`.
//!
//! Every function here also accepts the fee-transfer rate `λ`; the
//! baseline model is the special case `λ = 1`.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::fee_tier::zeta_lower_lambda;
use crate::solver::{self, solve_decreasing};

/// All exogenous scalars of the game.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MarketParams {
    /// Probability that the period-2 trader is informed, `α ∈ [0, 1]`.
    pub alpha: f64,
    /// Informed price-shock size, `ζ > 1 + f`.
    pub zeta: f64,
    /// Uninformed private-value shock size, `ζ_U > 1 + f`.
    pub zeta_u: f64,
    /// Probability of a downward price shock, `ψ ∈ [0, 1]`.
    pub psi: f64,
    /// Probability of a low private value, `ψ_U ∈ [0, 1]`.
    pub psi_u: f64,
    /// Proportional fee rate, `f ≥ 0`.
    pub fee_rate: f64,
    /// JIT arrival probability, `π ∈ [0, 1]`.
    pub pi: f64,
    /// Initial risky-coin price, `p > 0`.
    pub price: f64,
    /// Total passive endowment in risky coins, `e_P > 0`.
    pub passive_endowment: f64,
    /// Number of identical passive LPs, `N ≥ 1`.
    pub num_passive: u32,
}

impl MarketParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        zeta: f64,
        zeta_u: f64,
        psi: f64,
        psi_u: f64,
        fee_rate: f64,
        pi: f64,
        price: f64,
        passive_endowment: f64,
        num_passive: u32,
    ) -> Result<Self, ModelError> {
        let check_prob = |name: &'static str, v: f64| -> Result<(), ModelError> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ModelError::domain("MarketParams", format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        check_prob("alpha", alpha)?;
        check_prob("psi", psi)?;
        check_prob("psi_u", psi_u)?;
        check_prob("pi", pi)?;
        if !(fee_rate >= 0.0) {
            return Err(ModelError::domain("MarketParams", format!("fee rate must be >= 0, got {fee_rate}")));
        }
        if !(zeta > 1.0 + fee_rate) {
            return Err(ModelError::domain(
                "MarketParams",
                format!("zeta must exceed 1 + f = {}, got {zeta}", 1.0 + fee_rate),
            ));
        }
        if !(zeta_u > 1.0 + fee_rate) {
            return Err(ModelError::domain(
                "MarketParams",
                format!("zeta_u must exceed 1 + f = {}, got {zeta_u}", 1.0 + fee_rate),
            ));
        }
        if !(price > 0.0) {
            return Err(ModelError::domain("MarketParams", format!("price must be > 0, got {price}")));
        }
        if !(passive_endowment > 0.0) {
            return Err(ModelError::domain(
                "MarketParams",
                format!("passive endowment must be > 0, got {passive_endowment}"),
            ));
        }
        if num_passive == 0 {
            return Err(ModelError::domain("MarketParams", "need at least one passive LP".to_string()));
        }
        Ok(MarketParams {
            alpha,
            zeta,
            zeta_u,
            psi,
            psi_u,
            fee_rate,
            pi,
            price,
            passive_endowment,
            num_passive,
        })
    }

    /// Construct with the martingale shock weights `ψ = ζ/(ζ+1)` and
    /// `ψ_U = ζ_U/(ζ_U+1)` under which the pre-shock price is the expected
    /// post-shock price. These are the weights used by the reference
    /// parameter sets.
    #[allow(clippy::too_many_arguments)]
    pub fn with_martingale_psi(
        alpha: f64,
        zeta: f64,
        zeta_u: f64,
        fee_rate: f64,
        pi: f64,
        price: f64,
        passive_endowment: f64,
        num_passive: u32,
    ) -> Result<Self, ModelError> {
        Self::new(
            alpha,
            zeta,
            zeta_u,
            martingale_weight(zeta),
            martingale_weight(zeta_u),
            fee_rate,
            pi,
            price,
            passive_endowment,
            num_passive,
        )
    }

    /// Price-adjusted total passive endowment `ẽ_P = √p · e_P`.
    pub fn passive_endowment_adj(&self) -> f64 {
        self.price.sqrt() * self.passive_endowment
    }
}

/// Martingale shock weight `ζ/(ζ+1)` for a multiplicative shock of size ζ.
pub fn martingale_weight(zeta: f64) -> f64 {
    zeta / (zeta + 1.0)
}

/// Whether the JIT LP raises or lowers passive fee revenue relative to
/// its absence (`R(0) ≤ R(π)` means complement).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Complement,
    CrowdOut,
    Undefined,
}

/// Root of the trader's first-order condition with diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct MuSolution {
    /// Uninformed trade multiple `μ`.
    pub mu: f64,
    /// `μ > f`: the subgame has a non-trivial equilibrium.
    pub nontrivial: bool,
    /// `|M_T(μ) − (1+f)/ζ_U|` at the root.
    pub residual: f64,
    pub iterations: u32,
}

/// JIT LP's best response to a pending swap: a finite deposit or a
/// divergent one (the pole of the deposit formula).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BestResponse {
    Finite(f64),
    Unbounded,
}

/// Full equilibrium description for one parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumOutcome {
    /// Whether a non-trivial equilibrium exists (`ζ_U > ζ̲(f, λ, π)`).
    pub exists: bool,
    /// Equilibrium total passive deposit in risky coins: `e_P` or 0.
    pub passive_deposit: f64,
    /// Informed trade multiple `μ_I` (zero in the trivial outcome).
    pub informed_multiple: f64,
    /// Uninformed trade multiple `μ(λ, π)`.
    pub uninformed_multiple: f64,
    /// JIT deposit multiple `ν(λ, π)`.
    pub jit_multiple: f64,
    /// Per-unit adverse-selection cost `C < 0`.
    pub adverse_selection_cost: f64,
    /// Per-unit fee revenue `R(λ, π)`.
    pub fee_revenue: f64,
    /// Per-unit passive utility `U = α·C + (1−α)·R`.
    pub per_unit_utility: f64,
    pub classification: Classification,
    /// Value of the informed trader's swap order at period-2 prices,
    /// `μ_I·p·d_P*`, for both the sell (IS) and buy (IB) scenarios.
    pub informed_swap_value: f64,
    /// Value of the uninformed trader's swap order, `μ·p·d_P*` (US and UB).
    pub uninformed_swap_value: f64,
    /// JIT deposit `ν·d_P*` in risky coins, provided only in US/UB.
    pub jit_deposit: f64,
}

impl EquilibriumOutcome {
    fn trivial(c: f64, classification: Classification) -> Self {
        EquilibriumOutcome {
            exists: false,
            passive_deposit: 0.0,
            informed_multiple: 0.0,
            uninformed_multiple: 0.0,
            jit_multiple: 0.0,
            adverse_selection_cost: c,
            fee_revenue: 0.0,
            per_unit_utility: 0.0,
            classification,
            informed_swap_value: 0.0,
            uninformed_swap_value: 0.0,
            jit_deposit: 0.0,
        }
    }
}

/// Existence threshold `ζ̲(f, π) = 2(1+f)³ / (2 + π·f·(3+f))`.
///
/// A non-trivial equilibrium exists iff `ζ_U` exceeds this bound.
pub fn zeta_lower(fee_rate: f64, pi: f64) -> f64 {
    2.0 * (1.0 + fee_rate).powi(3) / (2.0 + pi * fee_rate * (3.0 + fee_rate))
}

/// Informed trade multiple `μ_I = √(ζ/(1+f)) − 1`, independent of `π`.
pub fn informed_multiple(zeta: f64, fee_rate: f64) -> Result<f64, ModelError> {
    if !(zeta > 1.0 + fee_rate) {
        return Err(ModelError::domain(
            "informed_multiple",
            format!("zeta must exceed 1 + f = {}, got {zeta}; the informed trader would not trade", 1.0 + fee_rate),
        ));
    }
    Ok((zeta / (1.0 + fee_rate)).sqrt() - 1.0)
}

/// Uninformed trader's first-order condition
/// `M_T(μ) = (1−π)/(1+μ)² + π·(2+μ)·√((1+λf)(1+μ)) / (2(1+μ)²)`.
///
/// Strictly decreasing in μ with `M_T(0) ≥ 1`; the equilibrium trade
/// multiple solves `M_T(μ) = (1+f)/ζ_U`.
pub fn trader_foc(mu: f64, fee_rate: f64, pi: f64, lambda: f64) -> f64 {
    let one_mu = 1.0 + mu;
    (1.0 - pi) / (one_mu * one_mu)
        + pi * (2.0 + mu) * ((1.0 + lambda * fee_rate) * one_mu).sqrt() / (2.0 * one_mu * one_mu)
}

/// Solve `M_T(μ) = (1+f)/ζ_U` by bracketed bisection.
pub fn solve_mu(fee_rate: f64, pi: f64, zeta_u: f64, lambda: f64) -> Result<MuSolution, ModelError> {
    if !(zeta_u > 1.0 + fee_rate) {
        return Err(ModelError::domain(
            "solve_mu",
            format!("zeta_u must exceed 1 + f = {}, got {zeta_u}", 1.0 + fee_rate),
        ));
    }
    let target = (1.0 + fee_rate) / zeta_u;
    let root = solve_decreasing(
        |mu| trader_foc(mu, fee_rate, pi, lambda),
        target,
        1e-12,
        1.0,
        solver::DEFAULT_XTOL,
        solver::DEFAULT_MAX_ITER,
    )?;
    Ok(MuSolution {
        mu: root.root,
        nontrivial: root.root > fee_rate,
        residual: root.residual,
        iterations: root.iterations,
    })
}

/// JIT deposit multiple
/// `ν = [λf(1+μ) + μ·√((1+λf)(1+μ))] / (μ − λf)` for `μ > λf`.
///
/// Satisfies `(1 + μ/(1+ν))² = (1+μ)/(1+λf)`. As `μ → λf⁺` the optimal
/// deposit diverges, which is the no-equilibrium signal.
pub fn jit_multiple(mu: f64, fee_rate: f64, lambda: f64) -> Result<f64, ModelError> {
    let lf = lambda * fee_rate;
    if mu <= lf {
        return Err(ModelError::NoNontrivialEquilibrium(format!(
            "mu = {mu} <= lambda*f = {lf}: the JIT LP's optimal deposit is infinite"
        )));
    }
    let one_mu = 1.0 + mu;
    Ok((lf * one_mu + mu * ((1.0 + lf) * one_mu).sqrt()) / (mu - lf))
}

/// JIT LP's best-response deposit (price-adjusted) to a pending sell of
/// `q_R` against passive depth `d̃_P`:
/// `[λf·d̃_P(d̃_P+q_R) + q_R·√((1+λf)·d̃_P·(d̃_P+q_R))] / (q_R − λf·d̃_P)`.
///
/// Divergent when `q_R ≤ λf·d̃_P`. By 1-homogeneity the buy side reuses
/// this with `q_S/p` in place of `q_R`.
pub fn jit_best_response(
    d_p_adj: f64,
    q_r: f64,
    fee_rate: f64,
    lambda: f64,
) -> Result<BestResponse, ModelError> {
    if !(d_p_adj > 0.0) {
        return Err(ModelError::domain(
            "jit_best_response",
            format!("passive depth must be > 0, got {d_p_adj}"),
        ));
    }
    if q_r < 0.0 {
        return Err(ModelError::domain("jit_best_response", format!("swap size must be >= 0, got {q_r}")));
    }
    let lf = lambda * fee_rate;
    if q_r <= lf * d_p_adj {
        return Ok(BestResponse::Unbounded);
    }
    let total = d_p_adj + q_r;
    let deposit =
        (lf * d_p_adj * total + q_r * ((1.0 + lf) * d_p_adj * total).sqrt()) / (q_r - lf * d_p_adj);
    Ok(BestResponse::Finite(deposit))
}

/// Per-unit adverse-selection cost of passive liquidity against the
/// informed trader:
/// `C = −[ψ·(1 − √((1+f)/ζ))² + (1−ψ)·(√ζ − √(1+f))²] < 0`.
///
/// The two branches are the per-unit losses in the informed-sell and
/// informed-buy scenarios at the informed trade multiple `μ_I`; the buy
/// branch is `ζ` times the sell branch.
pub fn adverse_selection_cost(zeta: f64, psi: f64, fee_rate: f64) -> f64 {
    let x = ((1.0 + fee_rate) / zeta).sqrt();
    let sell_loss = (1.0 - x) * (1.0 - x);
    let buy_loss = (zeta.sqrt() - (1.0 + fee_rate).sqrt()).powi(2);
    -(psi * sell_loss + (1.0 - psi) * buy_loss)
}

/// Per-unit passive fee revenue
/// `R = [(1−π)(μ + μ/(1+μ)) + π·S·(μ + (1+ν)μ/(1+ν+μ))]·f` with the
/// effective share `S = (1 + (1−λ)ν)/(1+ν)` (`1/(1+ν)` at λ = 1).
pub fn fee_revenue(mu: f64, nu: f64, pi: f64, fee_rate: f64, lambda: f64) -> f64 {
    let no_jit = mu + mu / (1.0 + mu);
    let share = (1.0 + (1.0 - lambda) * nu) / (1.0 + nu);
    let with_jit = share * (mu + (1.0 + nu) * mu / (1.0 + nu + mu));
    ((1.0 - pi) * no_jit + pi * with_jit) * fee_rate
}

/// Solve the full game: existence, multiples, per-unit utilities, passive
/// participation, and the crowding classification.
///
/// When no non-trivial equilibrium exists the trivial all-zero outcome is
/// returned with `exists = false` rather than an error.
pub fn solve_equilibrium(market: &MarketParams, lambda: f64) -> Result<EquilibriumOutcome, ModelError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(ModelError::domain("solve_equilibrium", format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let f = market.fee_rate;
    let pi = market.pi;
    let c = adverse_selection_cost(market.zeta, market.psi, f);

    if market.zeta_u <= zeta_lower_lambda(f, lambda, pi) {
        return Ok(EquilibriumOutcome::trivial(c, Classification::Undefined));
    }

    let mu_i = informed_multiple(market.zeta, f)?;
    let mu = solve_mu(f, pi, market.zeta_u, lambda)?.mu;
    let nu = jit_multiple(mu, f, lambda)?;
    let r = fee_revenue(mu, nu, pi, f, lambda);
    let u = market.alpha * c + (1.0 - market.alpha) * r;

    // R(0): fee revenue with the JIT LP absent, at the pi = 0 trade size.
    let mu0 = solve_mu(f, 0.0, market.zeta_u, lambda)?.mu;
    let r0 = fee_revenue(mu0, 0.0, 0.0, f, lambda);
    let classification = if r0 <= r { Classification::Complement } else { Classification::CrowdOut };

    // Assumption 1 tie-breaking: passive LPs deposit when indifferent.
    let d_p_star = if u >= 0.0 { market.passive_endowment } else { 0.0 };
    let p = market.price;
    Ok(EquilibriumOutcome {
        exists: true,
        passive_deposit: d_p_star,
        informed_multiple: mu_i,
        uninformed_multiple: mu,
        jit_multiple: nu,
        adverse_selection_cost: c,
        fee_revenue: r,
        per_unit_utility: u,
        classification,
        informed_swap_value: mu_i * p * d_p_star,
        uninformed_swap_value: mu * p * d_p_star,
        jit_deposit: nu * d_p_star,
    })
}
