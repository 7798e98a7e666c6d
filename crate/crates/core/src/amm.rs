//! Pool math and the step-by-step game simulator.
//!
//! The pool prices swaps with the Uniswap-v3 invariant over a single range
//! `[a, b]`. After the change of variables `d̃ = √p · d` the trading
//! functions are range-free: for a price-adjusted depth `d̃`,
//!
//! - `delta_stable(r, d̃, p) = p·d̃·r / (d̃ + r)` stable coins out for `r`
//!   risky coins in, and
//! - `delta_risky(s, d̃, p) = d̃·s / (p·d̃ + s)` risky coins out for `s`
//!   stable coins in.
//!
//! The range bounds only enter the reserve bookkeeping through the
//! multipliers `(1 − √(p/b))` and `(p − √(pa))`. The simulator replays the
//! five-period game on real reserves and returns per-agent payoffs that
//! match the closed-form utility expressions used by the equilibrium
//! modules.

use serde::{Deserialize, Serialize};

use crate::baseline::MarketParams;
use crate::error::ModelError;

/// Static pool parameters: initial price, provision range, and fee rate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoolParams {
    /// Initial risky-coin price in stable coins, `p > 0`.
    pub price: f64,
    /// Lower bound of the liquidity range, `0 ≤ a ≤ p`.
    pub lower_bound: f64,
    /// Upper bound of the liquidity range, `b ≥ p` (may be infinite).
    pub upper_bound: f64,
    /// Proportional fee rate `f ≥ 0` charged on the swapped quantity.
    pub fee_rate: f64,
}

impl PoolParams {
    pub fn new(price: f64, lower_bound: f64, upper_bound: f64, fee_rate: f64) -> Result<Self, ModelError> {
        if !(price > 0.0) {
            return Err(ModelError::domain("PoolParams", format!("price must be > 0, got {price}")));
        }
        if !(lower_bound >= 0.0) || lower_bound > price {
            return Err(ModelError::domain(
                "PoolParams",
                format!("need 0 <= a <= p, got a = {lower_bound}, p = {price}"),
            ));
        }
        if upper_bound < price {
            return Err(ModelError::domain(
                "PoolParams",
                format!("need b >= p, got b = {upper_bound}, p = {price}"),
            ));
        }
        if !(fee_rate >= 0.0) {
            return Err(ModelError::domain("PoolParams", format!("fee rate must be >= 0, got {fee_rate}")));
        }
        Ok(PoolParams { price, lower_bound, upper_bound, fee_rate })
    }

    /// Constant-product pool (full range `[0, ∞)`).
    pub fn constant_product(price: f64, fee_rate: f64) -> Result<Self, ModelError> {
        Self::new(price, 0.0, f64::INFINITY, fee_rate)
    }

    /// Pool matching a market parameter set: same price and fee, full range.
    pub fn from_market(market: &MarketParams) -> Self {
        PoolParams {
            price: market.price,
            lower_bound: 0.0,
            upper_bound: f64::INFINITY,
            fee_rate: market.fee_rate,
        }
    }

    /// Risky-reserve multiplier `1 − √(p/b)` per risky coin of depth.
    fn risky_factor(&self) -> f64 {
        1.0 - (self.price / self.upper_bound).sqrt()
    }

    /// Stable-reserve multiplier `p − √(p·a)` per risky coin of depth.
    fn stable_factor(&self) -> f64 {
        self.price - (self.price * self.lower_bound).sqrt()
    }
}

/// Snapshot of the pool at one step of the game.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoolState {
    /// Risky coins held by the pool.
    pub reserve_risky: f64,
    /// Stable coins held by the pool.
    pub reserve_stable: f64,
    /// Price-adjusted depth `d̃ = √p · d` summed over all deposits.
    pub depth_adj: f64,
    /// Which of periods 1–5 the state belongs to.
    pub period_tag: u8,
}

/// A swap order: at most one side may be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapOrder {
    /// Risky coins sent by the trader (sell side).
    pub risky_in: f64,
    /// Stable coins sent by the trader (buy side).
    pub stable_in: f64,
}

impl SwapOrder {
    pub fn sell_risky(q_r: f64) -> Self {
        SwapOrder { risky_in: q_r, stable_in: 0.0 }
    }

    pub fn buy_risky(q_s: f64) -> Self {
        SwapOrder { risky_in: 0.0, stable_in: q_s }
    }

    pub fn none() -> Self {
        SwapOrder { risky_in: 0.0, stable_in: 0.0 }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.risky_in < 0.0 || self.stable_in < 0.0 {
            return Err(ModelError::InfeasibleStrategy(format!(
                "swap quantities must be nonnegative, got ({}, {})",
                self.risky_in, self.stable_in
            )));
        }
        if self.risky_in > 0.0 && self.stable_in > 0.0 {
            return Err(ModelError::InfeasibleStrategy(
                "at most one of (q_R, q_S) may be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// The four trading scenarios: informed/uninformed crossed with sell/buy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Informed sell: price will drop to `p/ζ`, trader sells risky coins.
    InformedSell,
    /// Informed buy: price will rise to `ζ·p`, trader buys risky coins.
    InformedBuy,
    /// Uninformed sell: private value `p/ζ_U`, no price shock.
    UninformedSell,
    /// Uninformed buy: private value `ζ_U·p`, no price shock.
    UninformedBuy,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::InformedSell,
        Scenario::InformedBuy,
        Scenario::UninformedSell,
        Scenario::UninformedBuy,
    ];

    pub fn is_informed(self) -> bool {
        matches!(self, Scenario::InformedSell | Scenario::InformedBuy)
    }

    pub fn is_sell(self) -> bool {
        matches!(self, Scenario::InformedSell | Scenario::UninformedSell)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Scenario::InformedSell => "IS",
            Scenario::InformedBuy => "IB",
            Scenario::UninformedSell => "US",
            Scenario::UninformedBuy => "UB",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self, ModelError> {
        match tag {
            "IS" => Ok(Scenario::InformedSell),
            "IB" => Ok(Scenario::InformedBuy),
            "US" => Ok(Scenario::UninformedSell),
            "UB" => Ok(Scenario::UninformedBuy),
            other => Err(ModelError::Config(format!(
                "unknown scenario '{other}', expected IS, IB, US, or UB"
            ))),
        }
    }

    /// Probability weight `P(ω)` implied by the market parameters.
    pub fn weight(self, market: &MarketParams) -> f64 {
        match self {
            Scenario::InformedSell => market.alpha * market.psi,
            Scenario::InformedBuy => market.alpha * (1.0 - market.psi),
            Scenario::UninformedSell => (1.0 - market.alpha) * market.psi_u,
            Scenario::UninformedBuy => (1.0 - market.alpha) * (1.0 - market.psi_u),
        }
    }
}

/// Price-adjusted depth `d̃ = √p · d` of a deposit of `d` risky coins.
pub fn price_adjust(deposit: f64, price: f64) -> Result<f64, ModelError> {
    if deposit < 0.0 {
        return Err(ModelError::domain("price_adjust", format!("deposit must be >= 0, got {deposit}")));
    }
    if !(price > 0.0) {
        return Err(ModelError::domain("price_adjust", format!("price must be > 0, got {price}")));
    }
    Ok(price.sqrt() * deposit)
}

/// Stable coins received for `r` risky coins at price-adjusted depth `d̃`.
///
/// `δ_S(r, d̃) = p·d̃·r / (d̃ + r)`; strictly increasing and concave in `r`,
/// jointly 1-homogeneous in `(r, d̃)`.
pub fn delta_stable(risky_in: f64, depth_adj: f64, price: f64) -> Result<f64, ModelError> {
    if risky_in < 0.0 || depth_adj < 0.0 {
        return Err(ModelError::domain(
            "delta_stable",
            format!("arguments must be nonnegative, got r = {risky_in}, depth = {depth_adj}"),
        ));
    }
    if risky_in == 0.0 {
        return Ok(0.0);
    }
    if depth_adj == 0.0 {
        return Err(ModelError::EmptyPool { quantity: risky_in });
    }
    Ok(price * depth_adj * risky_in / (depth_adj + risky_in))
}

/// Risky coins received for `s` stable coins at price-adjusted depth `d̃`.
///
/// `δ_R(s, d̃) = d̃·s / (p·d̃ + s)`.
pub fn delta_risky(stable_in: f64, depth_adj: f64, price: f64) -> Result<f64, ModelError> {
    if stable_in < 0.0 || depth_adj < 0.0 {
        return Err(ModelError::domain(
            "delta_risky",
            format!("arguments must be nonnegative, got s = {stable_in}, depth = {depth_adj}"),
        ));
    }
    if stable_in == 0.0 {
        return Ok(0.0);
    }
    if depth_adj == 0.0 {
        return Err(ModelError::EmptyPool { quantity: stable_in });
    }
    Ok(depth_adj * stable_in / (price * depth_adj + stable_in))
}

/// Split a fee amount between passive LPs and JIT LPs under transfer rate λ.
///
/// Passive LPs keep their pro-rata share plus `(1 − λ)` of the JIT share;
/// the JIT side keeps `λ` of its pro-rata share. The JIT part is computed
/// as the remainder, so the two parts reproduce `fee_total` to within one
/// unit in the last place.
pub fn fee_split(fee_total: f64, d_p: f64, d_j: f64, lambda: f64) -> Result<(f64, f64), ModelError> {
    if d_p < 0.0 || d_j < 0.0 {
        return Err(ModelError::domain("fee_split", format!("depths must be nonnegative, got ({d_p}, {d_j})")));
    }
    if d_p + d_j == 0.0 {
        return Err(ModelError::domain("fee_split", "both depths are zero".to_string()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(ModelError::domain("fee_split", format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let passive = fee_total * (d_p + (1.0 - lambda) * d_j) / (d_p + d_j);
    Ok((passive, fee_total - passive))
}

/// Deposits and swap order fed to [`simulate_game`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameStrategies {
    /// Total passive deposit `d_P` in risky coins (the stable leg `p·d_P`
    /// is implied).
    pub passive_deposit: f64,
    /// One entry per *arriving* JIT LP (zero, one, or two entries); each is
    /// that LP's deposit in risky coins. An arriving LP may deposit 0.
    pub jit_deposits: Vec<f64>,
    /// The trader's swap order in real coin units.
    pub swap: SwapOrder,
}

/// Realized per-agent payoffs, valued in stable coins after period 5.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GamePayoffs {
    /// Aggregate payoff of all passive LPs.
    pub passive: f64,
    /// Payoff of each arriving JIT LP (same order as the deposits).
    pub jit: Vec<f64>,
    pub trader: f64,
    pub arbitrageur: f64,
}

/// One row of the period-by-period trace: a pool snapshot plus the
/// reserve-table row label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRow {
    pub label: String,
    #[serde(flatten)]
    pub state: PoolState,
}

/// Output of a simulation run: payoffs plus the reserve trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationRun {
    pub payoffs: GamePayoffs,
    pub trace: Vec<TraceRow>,
}

/// Replay the five-period game for one realized scenario and JIT-arrival
/// outcome, and return per-agent payoffs.
///
/// Periods: passive deposit, swap order submission, JIT arrival, JIT
/// deposit / swap / JIT withdrawal, then either the price shock (informed
/// scenarios, holdings valued at `p' = ζ∓¹·p`) or the arbitrageur's reverse
/// trade (uninformed scenarios, reserves restored to their period-1
/// values).
///
/// Payoffs are measured against the no-participation counterfactual at
/// period-5 valuations, which makes the aggregate passive payoff equal the
/// per-unit utility times `p·d_P`. Fee income is attributed with the
/// λ-effective share: passive LPs receive
/// `(d_P + (1−λ)·d_J)/(d_P + d_J)` of the fee on both the swap leg and the
/// reverse-trade leg, each JIT LP keeps `λ·d_J⁽ʲ⁾/(d_P + d_J)` of the swap
/// fee, and the informed-scenario position terms carry the same effective
/// share. At `λ = 1` this is exact pro-rata accounting and every fee coin
/// paid is a fee coin received.
///
/// `jit_endowment`, when given, caps each arriving JIT LP's deposit.
pub fn simulate_game(
    pool: &PoolParams,
    market: &MarketParams,
    lambda: f64,
    scenario: Scenario,
    strategies: &GameStrategies,
    jit_endowment: Option<f64>,
) -> Result<SimulationRun, ModelError> {
    strategies.swap.validate()?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(ModelError::domain("simulate_game", format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let d_p = strategies.passive_deposit;
    if d_p < 0.0 || d_p > market.passive_endowment * (1.0 + 1e-12) {
        return Err(ModelError::InfeasibleStrategy(format!(
            "passive deposit {d_p} outside [0, e_P = {}]",
            market.passive_endowment
        )));
    }
    if strategies.jit_deposits.len() > 2 {
        return Err(ModelError::InfeasibleStrategy(format!(
            "at most two JIT LPs may arrive, got {}",
            strategies.jit_deposits.len()
        )));
    }
    for (j, &d) in strategies.jit_deposits.iter().enumerate() {
        if d < 0.0 {
            return Err(ModelError::InfeasibleStrategy(format!("JIT deposit {j} is negative: {d}")));
        }
        if let Some(e_j) = jit_endowment {
            if d > e_j * (1.0 + 1e-12) {
                return Err(ModelError::InfeasibleStrategy(format!(
                    "JIT deposit {d} exceeds endowment e_J = {e_j}"
                )));
            }
        }
    }

    let p = pool.price;
    let f = pool.fee_rate;
    let rf = pool.risky_factor();
    let sf = pool.stable_factor();
    let d_j_total: f64 = strategies.jit_deposits.iter().sum();
    let depth_full = d_p + d_j_total;
    let jit_arrived = !strategies.jit_deposits.is_empty();

    let mut trace = Vec::with_capacity(7);
    let state = |d: f64, extra_r: f64, extra_s: f64, period: u8, label: &str| TraceRow {
        label: label.to_string(),
        state: PoolState {
            reserve_risky: d * rf + extra_r,
            reserve_stable: d * sf + extra_s,
            depth_adj: p.sqrt() * d,
            period_tag: period,
        },
    };

    trace.push(state(d_p, 0.0, 0.0, 1, "passive LPs deposit"));
    trace.push(state(d_p, 0.0, 0.0, 2, "trader submits swap order"));
    trace.push(state(
        d_p,
        0.0,
        0.0,
        3,
        match strategies.jit_deposits.len() {
            0 => "JIT LP does not arrive",
            1 => "JIT LP arrives",
            _ => "JIT LPs arrive",
        },
    ));
    if jit_arrived {
        trace.push(state(depth_full, 0.0, 0.0, 4, "JIT LP deposits"));
    }

    // Swap execution. A zero-depth pool rejects any swap: the game
    // degenerates to the no-trade outcome with all payoffs zero.
    let (q_r, q_s) = (strategies.swap.risky_in, strategies.swap.stable_in);
    let trade_attempted = q_r > 0.0 || q_s > 0.0;
    if depth_full == 0.0 || !trade_attempted {
        trace.push(state(depth_full, 0.0, 0.0, 4, "swap occurs"));
        if jit_arrived {
            trace.push(state(d_p, 0.0, 0.0, 4, "JIT LP withdraws"));
        }
        trace.push(state(
            d_p,
            0.0,
            0.0,
            5,
            if scenario.is_informed() { "price shock" } else { "possible reverse trade" },
        ));
        return Ok(SimulationRun {
            payoffs: GamePayoffs {
                passive: 0.0,
                jit: vec![0.0; strategies.jit_deposits.len()],
                trader: 0.0,
                arbitrageur: 0.0,
            },
            trace,
        });
    }

    // Trading outputs at the full (combined) depth, in real coin units.
    // delta_stable/delta_risky are 1-homogeneous, so feeding real depth and
    // real quantities yields real outputs.
    let stable_out = delta_stable(q_r, depth_full, p)?;
    let risky_out = delta_risky(q_s, depth_full, p)?;
    trace.push(state(depth_full, q_r - risky_out, q_s - stable_out, 4, "swap occurs"));

    // JIT withdrawal removes the pro-rata share of post-swap reserves.
    let passive_frac = if depth_full > 0.0 { d_p / depth_full } else { 1.0 };
    if jit_arrived {
        trace.push(state(
            d_p,
            passive_frac * (q_r - risky_out),
            passive_frac * (q_s - stable_out),
            4,
            "JIT LP withdraws",
        ));
    }
    trace.push(state(
        d_p,
        if scenario.is_informed() { passive_frac * (q_r - risky_out) } else { 0.0 },
        if scenario.is_informed() { passive_frac * (q_s - stable_out) } else { 0.0 },
        5,
        if scenario.is_informed() { "price shock" } else { "possible reverse trade" },
    ));

    // Effective fee share of the passive LPs under the two-tiered rule.
    let eff = (d_p + (1.0 - lambda) * d_j_total) / depth_full;

    let zeta = market.zeta;
    let zeta_u = market.zeta_u;
    let passive;
    let trader;
    let arbitrageur;
    let mut jit = Vec::with_capacity(strategies.jit_deposits.len());
    match scenario {
        Scenario::InformedSell => {
            // Future price p' = p/ζ; inflow (1+f)·q_R risky valued at p'.
            let p_post = p / zeta;
            passive = eff * (p_post * (1.0 + f) * q_r - stable_out);
            trader = stable_out - p_post * (1.0 + f) * q_r;
            arbitrageur = 0.0;
            for &d in &strategies.jit_deposits {
                jit.push(d / depth_full * (p_post * (1.0 + lambda * f) * q_r - stable_out));
            }
        }
        Scenario::InformedBuy => {
            let p_post = p * zeta;
            passive = eff * ((1.0 + f) * q_s - p_post * risky_out);
            trader = p_post * risky_out - (1.0 + f) * q_s;
            arbitrageur = 0.0;
            for &d in &strategies.jit_deposits {
                jit.push(d / depth_full * ((1.0 + lambda * f) * q_s - p_post * risky_out));
            }
        }
        Scenario::UninformedSell => {
            // No shock; LP income is the swap fee plus the reverse-trade fee.
            let p_u = p / zeta_u;
            passive = eff * (p * q_r + stable_out) * f;
            trader = stable_out - p_u * (1.0 + f) * q_r;
            arbitrageur = passive_frac * (p * q_r - (1.0 + f) * stable_out);
            for &d in &strategies.jit_deposits {
                jit.push(d / depth_full * (p * (1.0 + lambda * f) * q_r - stable_out));
            }
        }
        Scenario::UninformedBuy => {
            let p_u = p * zeta_u;
            passive = eff * (q_s + p * risky_out) * f;
            trader = p_u * risky_out - (1.0 + f) * q_s;
            arbitrageur = passive_frac * (q_s - p * (1.0 + f) * risky_out);
            for &d in &strategies.jit_deposits {
                jit.push(d / depth_full * ((1.0 + lambda * f) * q_s - p * risky_out));
            }
        }
    }

    Ok(SimulationRun {
        payoffs: GamePayoffs { passive, jit, trader, arbitrageur },
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::MarketParams;

    fn market(p: f64, f: f64) -> MarketParams {
        MarketParams::with_martingale_psi(0.1, 1.05, 1.02, f, 1.0, p, 1.0, 4).unwrap()
    }

    #[test]
    fn price_adjust_examples() {
        assert_eq!(price_adjust(0.0, 4.0).unwrap(), 0.0);
        assert_eq!(price_adjust(1.0, 1.0).unwrap(), 1.0);
        let adj = price_adjust(2.0, 4.0).unwrap();
        assert_eq!(adj, 4.0);
        // round trip: (d̃)²/p = d²
        assert!((adj * adj / 4.0 - 4.0).abs() < 1e-15);
        assert!(price_adjust(-1.0, 4.0).is_err());
        assert!(price_adjust(1.0, 0.0).is_err());
    }

    #[test]
    fn delta_stable_examples() {
        assert_eq!(delta_stable(0.0, 5.0, 2.0).unwrap(), 0.0);
        let out = delta_stable(1.0, 1.0, 1.0).unwrap();
        assert!((out - 0.5).abs() < 1e-15);
        // virtual product is conserved: (d̃+r)(p·d̃−δ_S) = p·d̃²
        assert!(((1.0 + 1.0) * (1.0 - out) - 1.0).abs() < 1e-15);
        // homogeneity: doubling both input and depth doubles the output
        assert!((delta_stable(2.0, 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            delta_stable(1.0, 0.0, 1.0),
            Err(ModelError::EmptyPool { .. })
        ));
    }

    #[test]
    fn delta_risky_examples() {
        assert_eq!(delta_risky(0.0, 3.0, 1.0).unwrap(), 0.0);
        assert!((delta_risky(1.0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((delta_risky(2.0, 1.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        // price symmetry: δ_R(s, d̃, p) equals δ_S(s, p·d̃, 1/p)
        let lhs = delta_risky(0.7, 1.3, 2.5).unwrap();
        let rhs = delta_stable(0.7, 2.5 * 1.3, 1.0 / 2.5).unwrap();
        assert!((lhs - rhs).abs() < 1e-15 * lhs.abs().max(1.0));
    }

    #[test]
    fn fee_split_examples() {
        assert_eq!(fee_split(10.0, 1.0, 0.0, 1.0).unwrap(), (10.0, 0.0));
        assert_eq!(fee_split(10.0, 1.0, 1.0, 1.0).unwrap(), (5.0, 5.0));
        assert_eq!(fee_split(10.0, 1.0, 1.0, 0.0).unwrap(), (10.0, 0.0));
        assert!(fee_split(10.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn no_trade_yields_zero_payoffs() {
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let run = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::UninformedSell,
            &GameStrategies {
                passive_deposit: 1.0,
                jit_deposits: vec![],
                swap: SwapOrder::none(),
            },
            None,
        )
        .unwrap();
        assert_eq!(run.payoffs.passive, 0.0);
        assert_eq!(run.payoffs.trader, 0.0);
        assert_eq!(run.trace.len(), 5);
    }

    #[test]
    fn empty_pool_rejects_swaps_with_zero_payoffs() {
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let run = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::UninformedSell,
            &GameStrategies {
                passive_deposit: 0.0,
                jit_deposits: vec![],
                swap: SwapOrder::sell_risky(0.5),
            },
            None,
        )
        .unwrap();
        assert_eq!(run.payoffs.passive, 0.0);
        assert_eq!(run.payoffs.trader, 0.0);
        assert_eq!(run.payoffs.arbitrageur, 0.0);
    }

    #[test]
    fn infeasible_strategies_are_rejected() {
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let bad_swap = GameStrategies {
            passive_deposit: 1.0,
            jit_deposits: vec![],
            swap: SwapOrder { risky_in: 1.0, stable_in: 1.0 },
        };
        assert!(matches!(
            simulate_game(&pool, &m, 1.0, Scenario::UninformedSell, &bad_swap, None),
            Err(ModelError::InfeasibleStrategy(_))
        ));
        let too_big = GameStrategies {
            passive_deposit: 2.0,
            jit_deposits: vec![],
            swap: SwapOrder::none(),
        };
        assert!(simulate_game(&pool, &m, 1.0, Scenario::UninformedSell, &too_big, None).is_err());
        let over_endowment = GameStrategies {
            passive_deposit: 1.0,
            jit_deposits: vec![4.0],
            swap: SwapOrder::none(),
        };
        assert!(
            simulate_game(&pool, &m, 1.0, Scenario::UninformedSell, &over_endowment, Some(3.0)).is_err()
        );
    }

    #[test]
    fn trace_row_counts_match_the_reserve_tables() {
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let with_jit = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::UninformedSell,
            &GameStrategies {
                passive_deposit: 1.0,
                jit_deposits: vec![1.4],
                swap: SwapOrder::sell_risky(0.0185),
            },
            None,
        )
        .unwrap();
        assert_eq!(with_jit.trace.len(), 7);
        let without = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::InformedSell,
            &GameStrategies {
                passive_deposit: 1.0,
                jit_deposits: vec![],
                swap: SwapOrder::sell_risky(0.0232),
            },
            None,
        )
        .unwrap();
        assert_eq!(without.trace.len(), 5);
        // informed sell leaves the swap imbalance in the pool at period 5
        let last = without.trace.last().unwrap();
        assert!(last.state.reserve_risky > without.trace[0].state.reserve_risky);
    }

    #[test]
    fn us_fee_payoff_matches_the_revenue_formula() {
        // no JIT, swap at the pi = 0 equilibrium size: the passive fee
        // payoff is R(0) * p * d_P
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let mu0 = crate::baseline::solve_mu(0.003, 0.0, 1.02, 1.0).unwrap().mu;
        let d_p = 0.7;
        let run = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::UninformedSell,
            &GameStrategies {
                passive_deposit: d_p,
                jit_deposits: vec![],
                swap: SwapOrder::sell_risky(mu0 * d_p),
            },
            None,
        )
        .unwrap();
        let r0 = crate::baseline::fee_revenue(mu0, 0.0, 0.0, 0.003, 1.0);
        let expected = r0 * 1.0 * d_p;
        assert!((run.payoffs.passive - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn is_loss_matches_the_adverse_selection_branch() {
        // no JIT, informed sell at mu_I: the passive payoff is the
        // downward-shock branch of C times p * d_P
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let mu_i = crate::baseline::informed_multiple(m.zeta, m.fee_rate).unwrap();
        let run = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::InformedSell,
            &GameStrategies {
                passive_deposit: 1.0,
                jit_deposits: vec![],
                swap: SwapOrder::sell_risky(mu_i),
            },
            None,
        )
        .unwrap();
        // isolate the psi branch: C with psi = 1
        let sell_branch = crate::baseline::adverse_selection_cost(m.zeta, 1.0, m.fee_rate);
        assert!(
            (run.payoffs.passive - sell_branch).abs() <= 1e-12 * sell_branch.abs(),
            "sim {} vs branch {}",
            run.payoffs.passive,
            sell_branch
        );
        // informed trading is zero-sum between the trader and the LPs
        assert!((run.payoffs.passive + run.payoffs.trader).abs() < 1e-15);
    }

    #[test]
    fn reverse_trade_restores_reserves() {
        let m = market(4.0, 0.01);
        let pool = PoolParams::new(4.0, 1.0, 16.0, 0.01).unwrap();
        let run = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::UninformedBuy,
            &GameStrategies {
                passive_deposit: 1.0,
                jit_deposits: vec![0.8],
                swap: SwapOrder::buy_risky(0.3),
            },
            None,
        )
        .unwrap();
        let first = &run.trace[0];
        let last = run.trace.last().unwrap();
        assert!((last.state.reserve_risky - first.state.reserve_risky).abs() <= 1e-12 * first.state.reserve_risky);
        assert!((last.state.reserve_stable - first.state.reserve_stable).abs() <= 1e-12 * first.state.reserve_stable);
    }

    #[test]
    fn jit_withdrawal_takes_the_pro_rata_share() {
        let m = market(1.0, 0.003);
        let pool = PoolParams::from_market(&m);
        let run = simulate_game(
            &pool,
            &m,
            1.0,
            Scenario::UninformedSell,
            &GameStrategies {
                passive_deposit: 1.0,
                jit_deposits: vec![1.5],
                swap: SwapOrder::sell_risky(0.02),
            },
            None,
        )
        .unwrap();
        let post_swap = &run.trace[4];
        let post_withdraw = &run.trace[5];
        let frac = 1.0 / 2.5;
        assert!((post_withdraw.state.reserve_risky - frac * post_swap.state.reserve_risky).abs() < 1e-14);
        assert!((post_withdraw.state.reserve_stable - frac * post_swap.state.reserve_stable).abs() < 1e-14);
    }
}
