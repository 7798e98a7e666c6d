//! Cournot competition between two JIT LPs.
//!
//! Each JIT LP holds an endowment `e_J = ν̄·e_P` and observes whether its
//! competitor arrived. With a single arrival the arriving LP behaves like
//! the monopolist; when both arrive, each LP's unconstrained optimum would
//! claim over half the pool, which is mutually impossible, so both deposit
//! their entire endowment. The uninformed trader prices in all three
//! arrival outcomes, giving the competitive first-order condition
//! [`cournot_foc`]. Passive fee revenue now depends on the deposit level
//! itself through `ν̂ = ẽ_J/d̃_P`, which lets interior participation
//! levels `k < N` arise in equilibrium.

use serde::{Deserialize, Serialize};

use crate::baseline::{informed_multiple, jit_multiple, MarketParams, MuSolution};
use crate::error::ModelError;
use crate::fee_tier::zeta_lower_lambda;
use crate::solver::{self, solve_decreasing};

/// Market parameters extended with the JIT endowment and transfer rate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CompetitionParams {
    pub base: MarketParams,
    /// Each JIT LP's endowment `e_J` in risky coins.
    pub jit_endowment: f64,
    /// Fee transfer rate λ (1 reproduces the plain competitive game).
    pub lambda: f64,
}

impl CompetitionParams {
    pub fn new(base: MarketParams, jit_endowment: f64, lambda: f64) -> Result<Self, ModelError> {
        if !(jit_endowment > 0.0) {
            return Err(ModelError::domain(
                "CompetitionParams",
                format!("JIT endowment must be > 0, got {jit_endowment}"),
            ));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(ModelError::domain(
                "CompetitionParams",
                format!("lambda must lie in [0, 1], got {lambda}"),
            ));
        }
        Ok(CompetitionParams { base, jit_endowment, lambda })
    }

    /// Endowment ratio `ν̄ = e_J / e_P`.
    pub fn nu_bar(&self) -> f64 {
        self.jit_endowment / self.base.passive_endowment
    }
}

/// Equilibrium outcome of the competitive subgame at a fixed passive
/// deposit level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CournotOutcome {
    /// Whether `ζ_U` clears the existence threshold `ζ̲(f, λ, π)`.
    pub exists: bool,
    /// Uninformed trade multiple `μ_C`.
    pub mu_c: f64,
    /// Single-arrival JIT deposit multiple `ν_C`.
    pub nu_c: f64,
    /// Endowment-to-passive-depth ratio `ν̂ = ẽ_J/d̃_P`.
    pub nu_hat: f64,
    /// Informed trade multiple (unchanged from the monopolist game).
    pub informed_multiple: f64,
    /// Liquidity-dependent per-unit fee revenue `R(π, d_P)`.
    pub r_comp: f64,
    /// Per-unit passive utility `α·C + (1−α)·R(π, d_P)`.
    pub per_unit_utility: f64,
    /// Single-arrival deposit `ν_C·d_P` in risky coins.
    pub single_arrival_deposit: f64,
    /// Deposit of each JIT LP when both arrive: the full endowment `e_J`
    /// (zero when `d_P = 0`).
    pub both_arrive_deposit: f64,
    /// `μ_C > λf`: the single-arrival best response is finite.
    pub nontrivial: bool,
    /// Whether the single-arrival optimum respects the endowment,
    /// `ν_C·d_P ≤ e_J`. Violations are reported, never silently ignored.
    pub assumption2_ok: bool,
    /// Passive participation levels `k` supported in SPNE.
    pub feasible_k: Vec<u32>,
}

/// Passive participation levels under competition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PassiveParticipation {
    /// All supported levels, including 0 when the all-out profile is an
    /// equilibrium.
    pub feasible_k: Vec<u32>,
    /// Whether `k = 0` is supported; reported separately because the
    /// all-out outcome is a market breakdown rather than an interior
    /// equilibrium.
    pub trivial_freeze: bool,
    /// Per-unit utility `U(π, d_P(k))` for `k = 1..N` (None when the
    /// k-level subgame has no non-trivial equilibrium).
    pub utilities: Vec<Option<f64>>,
}

/// Ratio of one JIT LP's price-adjusted endowment to passive depth,
/// `ν̂ = ẽ_J / d̃_P` (0 when `d̃_P = 0`).
pub fn nu_hat(d_p_adj: f64, e_j_adj: f64) -> f64 {
    if d_p_adj > 0.0 {
        e_j_adj / d_p_adj
    } else {
        0.0
    }
}

/// Competitive trader first-order condition
/// `M_TC(μ) = (1−π)²/(1+μ)² + π(1−π)(2+μ)√((1+λf)(1+μ))/(1+μ)²
///  + π²(1+2ν̂)²/(1+2ν̂+μ)²`.
///
/// The three terms weight no arrival, one arrival (the monopolist branch),
/// and both arriving at the endowment corner. Strictly decreasing in μ.
pub fn cournot_foc(mu: f64, fee_rate: f64, pi: f64, nu_hat: f64, lambda: f64) -> f64 {
    let one_mu = 1.0 + mu;
    let corner = 1.0 + 2.0 * nu_hat;
    (1.0 - pi) * (1.0 - pi) / (one_mu * one_mu)
        + pi * (1.0 - pi) * (2.0 + mu) * ((1.0 + lambda * fee_rate) * one_mu).sqrt()
            / (one_mu * one_mu)
        + pi * pi * corner * corner / ((corner + mu) * (corner + mu))
}

/// Solve `M_TC(μ) = (1+f)/ζ_U` at the depth level `d_P` (risky coins).
pub fn solve_mu_cournot(params: &CompetitionParams, d_p: f64) -> Result<MuSolution, ModelError> {
    let m = &params.base;
    if !(m.zeta_u > 1.0 + m.fee_rate) {
        return Err(ModelError::domain(
            "solve_mu_cournot",
            format!("zeta_u must exceed 1 + f = {}, got {}", 1.0 + m.fee_rate, m.zeta_u),
        ));
    }
    if d_p < 0.0 || d_p > m.passive_endowment * (1.0 + 1e-12) {
        return Err(ModelError::domain(
            "solve_mu_cournot",
            format!("d_P = {d_p} outside [0, e_P = {}]", m.passive_endowment),
        ));
    }
    let nh = nu_hat(d_p, params.jit_endowment);
    let target = (1.0 + m.fee_rate) / m.zeta_u;
    let root = solve_decreasing(
        |mu| cournot_foc(mu, m.fee_rate, m.pi, nh, params.lambda),
        target,
        1e-12,
        1.0,
        solver::DEFAULT_XTOL,
        solver::DEFAULT_MAX_ITER,
    )?;
    Ok(MuSolution {
        mu: root.root,
        nontrivial: root.root > params.lambda * m.fee_rate,
        residual: root.residual,
        iterations: root.iterations,
    })
}

/// Liquidity-dependent per-unit fee revenue
/// `R(π, d_P) = [(1−π)²·V₀ᵇʳ + 2π(1−π)·S₁·V₁ᵇʳ + π²·S₂·V₂ᵇʳ]·f`
/// where the branch volumes use the no-JIT, single-arrival, and
/// both-arrive depths and `S₁ = (1+(1−λ)ν_C)/(1+ν_C)`,
/// `S₂ = (1+(1−λ)·2ν̂)/(1+2ν̂)` are the passive effective shares.
fn fee_revenue_cournot(mu_c: f64, nu_c: f64, nh: f64, pi: f64, fee_rate: f64, lambda: f64) -> f64 {
    let no_jit = mu_c + mu_c / (1.0 + mu_c);
    let s1 = (1.0 + (1.0 - lambda) * nu_c) / (1.0 + nu_c);
    let one_arrival = s1 * (mu_c + (1.0 + nu_c) * mu_c / (1.0 + nu_c + mu_c));
    let corner = 1.0 + 2.0 * nh;
    let s2 = (1.0 + (1.0 - lambda) * 2.0 * nh) / corner;
    let both = s2 * (mu_c + corner * mu_c / (corner + mu_c));
    ((1.0 - pi) * (1.0 - pi) * no_jit + 2.0 * pi * (1.0 - pi) * one_arrival + pi * pi * both)
        * fee_rate
}

/// Full competitive outcome at passive deposit `d_P`.
pub fn cournot_outcome(params: &CompetitionParams, d_p: f64) -> Result<CournotOutcome, ModelError> {
    let m = &params.base;
    let f = m.fee_rate;
    let lambda = params.lambda;
    let c = crate::baseline::adverse_selection_cost(m.zeta, m.psi, f);
    let exists = m.zeta_u > zeta_lower_lambda(f, lambda, m.pi);
    let nh = nu_hat(d_p, params.jit_endowment);

    if !exists || d_p == 0.0 {
        return Ok(CournotOutcome {
            exists,
            mu_c: 0.0,
            nu_c: 0.0,
            nu_hat: nh,
            informed_multiple: 0.0,
            r_comp: 0.0,
            per_unit_utility: 0.0,
            single_arrival_deposit: 0.0,
            both_arrive_deposit: 0.0,
            nontrivial: false,
            assumption2_ok: true,
            feasible_k: if exists { passive_k_equilibria(params)?.feasible_k } else { vec![0] },
        });
    }

    let sol = solve_mu_cournot(params, d_p)?;
    let mu_c = sol.mu;
    let nu_c = jit_multiple(mu_c, f, lambda)?;
    let r = fee_revenue_cournot(mu_c, nu_c, nh, m.pi, f, lambda);
    let u = m.alpha * c + (1.0 - m.alpha) * r;
    Ok(CournotOutcome {
        exists,
        mu_c,
        nu_c,
        nu_hat: nh,
        informed_multiple: informed_multiple(m.zeta, f)?,
        r_comp: r,
        per_unit_utility: u,
        single_arrival_deposit: nu_c * d_p,
        both_arrive_deposit: params.jit_endowment,
        nontrivial: sol.nontrivial,
        assumption2_ok: nu_c * d_p <= params.jit_endowment * (1.0 + 1e-12),
        feasible_k: passive_k_equilibria(params)?.feasible_k,
    })
}

/// Per-unit utility `U(π, d_P(k))` at participation level `k`, or `None`
/// when the k-level subgame has no non-trivial equilibrium.
fn utility_at_level(params: &CompetitionParams, k: u32) -> Result<Option<f64>, ModelError> {
    let m = &params.base;
    let f = m.fee_rate;
    if m.zeta_u <= zeta_lower_lambda(f, params.lambda, m.pi) {
        return Ok(None);
    }
    let d_p = k as f64 * m.passive_endowment / m.num_passive as f64;
    let nh = nu_hat(d_p, params.jit_endowment);
    let sol = solve_mu_cournot(params, d_p)?;
    if sol.mu <= params.lambda * f {
        return Ok(None);
    }
    let nu_c = jit_multiple(sol.mu, f, params.lambda)?;
    let c = crate::baseline::adverse_selection_cost(m.zeta, m.psi, f);
    let r = fee_revenue_cournot(sol.mu, nu_c, nh, m.pi, f, params.lambda);
    Ok(Some(m.alpha * c + (1.0 - m.alpha) * r))
}

/// Passive participation levels supported in SPNE.
///
/// Level `k < N` is supported iff `U(π, d_P(k)) ≥ 0` and
/// `U(π, d_P(k+1)) < 0`; `k = N` iff `U(π, e_P) > 0`; `k = 0` iff a lone
/// deviator would lose, `U(π, d_P(1)) < 0`. Multiple levels can coexist
/// because each passive LP's revenue falls as more of them join.
pub fn passive_k_equilibria(params: &CompetitionParams) -> Result<PassiveParticipation, ModelError> {
    let n = params.base.num_passive;
    let mut utilities = Vec::with_capacity(n as usize);
    for k in 1..=n {
        utilities.push(utility_at_level(params, k)?);
    }
    let u_at = |k: u32| -> f64 { utilities[(k - 1) as usize].unwrap_or(f64::NEG_INFINITY) };

    let mut feasible = Vec::new();
    let trivial_freeze = u_at(1) < 0.0;
    if trivial_freeze {
        feasible.push(0);
    }
    for k in 1..n {
        if u_at(k) >= 0.0 && u_at(k + 1) < 0.0 {
            feasible.push(k);
        }
    }
    if u_at(n) > 0.0 {
        feasible.push(n);
    }
    Ok(PassiveParticipation { feasible_k: feasible, trivial_freeze, utilities })
}
