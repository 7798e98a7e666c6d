//! Two-tiered fee design: comparative statics in the transfer rate λ,
//! freeze-prevention thresholds, welfare, and the welfare-optimal λ*.
//!
//! Under the two-tiered structure the JIT LP keeps only a λ fraction of
//! its pro-rata fee share; the rest flows to the passive LPs. Welfare is
//! maximized at the largest λ at which passive LPs still participate,
//! `λ* = max{λ ∈ [0,1] : U(λ) ≥ 0}`.

use serde::{Deserialize, Serialize};

use crate::amm::delta_risky;
use crate::baseline::{solve_equilibrium, trader_foc, MarketParams};
use crate::error::ModelError;
use crate::solver::{self, solve_increasing};

/// Grid size used by [`optimal_lambda`] when scanning `U(λ)`.
const LAMBDA_SCAN_POINTS: usize = 1024;
/// Bisection tolerance on λ*.
const LAMBDA_TOL: f64 = 1e-6;

/// λ-dependent existence threshold
/// `ζ̲(f, λ, π) = 2(1+f)³ / (2 + π[(2+f)√((1+f)(1+λf)) − 2])`.
///
/// Reduces to [`crate::baseline::zeta_lower`] at λ = 1 because
/// `(2+f)√((1+f)(1+f)) − 2 = f(3+f)`.
pub fn zeta_lower_lambda(fee_rate: f64, lambda: f64, pi: f64) -> f64 {
    let f = fee_rate;
    2.0 * (1.0 + f).powi(3)
        / (2.0 + pi * ((2.0 + f) * ((1.0 + f) * (1.0 + lambda * f)).sqrt() - 2.0))
}

/// Upper bound on the fee rate below which a higher transfer (lower λ)
/// raises passive utility at trade size μ:
/// `f̄(μ, π) = π·μ(1+μ) / [2 + μ(2+μ) + π((1+μ)^{3/2} − 1)]`.
///
/// Increasing in μ with limit π as μ → ∞.
pub fn fbar(mu: f64, pi: f64) -> f64 {
    pi * mu * (1.0 + mu) / (2.0 + mu * (2.0 + mu) + pi * ((1.0 + mu).powf(1.5) - 1.0))
}

/// Freeze-prevention threshold on the uninformed shock size.
///
/// Requires `f < π` (returns `None` otherwise). Inverts the increasing
/// map `μ ↦ f̄(μ, π)` at `f` and converts the root back to a shock size
/// through the λ = 1 first-order condition: `ζ̂ = (1+f)/M_T(μ̂)`. For
/// `ζ_U ≥ ζ̂` the passive per-unit utility decreases in λ over all of
/// `[0, 1]`.
pub fn zeta_hat(fee_rate: f64, pi: f64) -> Result<Option<f64>, ModelError> {
    if fee_rate >= pi {
        return Ok(None);
    }
    if fee_rate == 0.0 {
        // fbar(0) = 0 exactly; the threshold is 1/M_T(0).
        return Ok(Some(1.0 / trader_foc(0.0, 0.0, pi, 1.0)));
    }
    let root = solve_increasing(
        |mu| fbar(mu, pi),
        fee_rate,
        1e-12,
        1.0,
        solver::DEFAULT_XTOL,
        solver::DEFAULT_MAX_ITER,
    )
    .map_err(|e| ModelError::Solver(format!("zeta_hat: inverting fbar failed: {e}")))?;
    Ok(Some((1.0 + fee_rate) / trader_foc(root.root, fee_rate, pi, 1.0)))
}

/// Expected welfare at the equilibrium of `(market, λ)`, conditional on an
/// uninformed arrival:
/// `W = ψ_U(1 − ζ_U⁻¹)·p(1+f)·q_R* + (1−ψ_U)(ζ_U − 1)·p·[π·δ_R(q_S*, d̃_P*+d̃_J*) + (1−π)·δ_R(q_S*, d̃_P*)]`.
///
/// Informed arrivals only transfer value, so welfare conditional on them
/// is zero; pass `unconditional = true` to scale by `(1−α)` instead.
/// Returns 0 when the passive LPs stay out (`d_P* = 0`).
pub fn welfare(market: &MarketParams, lambda: f64, unconditional: bool) -> Result<f64, ModelError> {
    let eq = solve_equilibrium(market, lambda)?;
    if !eq.exists || eq.passive_deposit == 0.0 {
        return Ok(0.0);
    }
    let p = market.price;
    let d_p = eq.passive_deposit;
    let mu = eq.uninformed_multiple;
    let nu = eq.jit_multiple;
    let q_r = mu * d_p;
    let q_s = mu * p * d_p;
    let with_jit = delta_risky(q_s, (1.0 + nu) * d_p, p)?;
    let without = delta_risky(q_s, d_p, p)?;
    let zu = market.zeta_u;
    let sell_part = market.psi_u * (1.0 - 1.0 / zu) * p * (1.0 + market.fee_rate) * q_r;
    let buy_part =
        (1.0 - market.psi_u) * (zu - 1.0) * p * (market.pi * with_jit + (1.0 - market.pi) * without);
    let w = sell_part + buy_part;
    Ok(if unconditional { (1.0 - market.alpha) * w } else { w })
}

/// Welfare-optimal transfer rate `λ* = max{λ : U(λ) ≥ 0}`.
///
/// Scans `U(λ)` on a 1024-point grid (monotonicity of U in λ is only
/// guaranteed under the freeze-prevention condition, so no shape is
/// assumed), then bisects the sign change above the largest nonnegative
/// grid point to `|Δλ| ≤ 1e-6`. Returns `None` when `U < 0` everywhere.
pub fn optimal_lambda(market: &MarketParams) -> Result<Option<f64>, ModelError> {
    let utility = |lambda: f64| -> Result<f64, ModelError> {
        let eq = solve_equilibrium(market, lambda)?;
        if eq.exists {
            Ok(eq.per_unit_utility)
        } else {
            // no participation possible: treat as negative utility
            Ok(f64::NEG_INFINITY)
        }
    };
    if utility(1.0)? >= 0.0 {
        return Ok(Some(1.0));
    }
    let n = LAMBDA_SCAN_POINTS;
    let mut best: Option<usize> = None;
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let lambda = i as f64 / n as f64;
        let u = utility(lambda)?;
        values.push(u);
        if u >= 0.0 {
            best = Some(i);
        }
    }
    let Some(i) = best else {
        return Ok(None);
    };
    // crossing lies in (lambda_i, lambda_{i+1}]
    let mut lo = i as f64 / n as f64;
    let mut hi = (i + 1) as f64 / n as f64;
    while hi - lo > LAMBDA_TOL {
        let mid = 0.5 * (lo + hi);
        if utility(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // report the participation side of the bracket so that U(lambda*) >= 0
    Ok(Some(lo))
}

/// λ-grid evaluation of utilities and welfare plus the design thresholds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeeDesignReport {
    pub lambda_grid: Vec<f64>,
    /// Per-unit passive utility `U(λ)` per grid point.
    pub u_of_lambda: Vec<f64>,
    /// Welfare `W(λ)` per grid point (conditional on uninformed arrival).
    pub w_of_lambda: Vec<f64>,
    /// `λ* = max{λ : U(λ) ≥ 0}`, or `None` when the market is frozen for
    /// every λ.
    pub lambda_star: Option<f64>,
    /// λ range(s) on the grid where `U < 0` (the freeze region), as the
    /// smallest and largest frozen grid values when any exist.
    pub freeze_interval: Option<(f64, f64)>,
    /// Whether the freeze-prevention precondition `f < π` holds.
    pub fbar_ok: bool,
    /// Freeze-prevention threshold `ζ̂(f, π)` when `f < π`.
    pub zeta_hat: Option<f64>,
}

/// Evaluate the fee design over a λ grid of `grid_points` values.
///
/// `unconditional_welfare` scales the welfare column by `(1−α)` instead
/// of reporting it conditional on an uninformed arrival.
pub fn fee_design_report(
    market: &MarketParams,
    grid_points: usize,
    unconditional_welfare: bool,
) -> Result<FeeDesignReport, ModelError> {
    if grid_points < 2 {
        return Err(ModelError::Config(format!(
            "fee design grid needs at least 2 points, got {grid_points}"
        )));
    }
    let n = grid_points - 1;
    let mut lambda_grid = Vec::with_capacity(grid_points);
    let mut u_of_lambda = Vec::with_capacity(grid_points);
    let mut w_of_lambda = Vec::with_capacity(grid_points);
    let mut freeze_lo: Option<f64> = None;
    let mut freeze_hi: Option<f64> = None;
    for i in 0..=n {
        let lambda = i as f64 / n as f64;
        let eq = solve_equilibrium(market, lambda)?;
        let u = if eq.exists { eq.per_unit_utility } else { f64::NEG_INFINITY };
        let w = welfare(market, lambda, unconditional_welfare)?;
        if u < 0.0 {
            freeze_lo.get_or_insert(lambda);
            freeze_hi = Some(lambda);
        }
        lambda_grid.push(lambda);
        u_of_lambda.push(u);
        w_of_lambda.push(w);
    }
    Ok(FeeDesignReport {
        lambda_grid,
        u_of_lambda,
        w_of_lambda,
        lambda_star: optimal_lambda(market)?,
        freeze_interval: freeze_lo.zip(freeze_hi),
        fbar_ok: market.fee_rate < market.pi,
        zeta_hat: zeta_hat(market.fee_rate, market.pi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{jit_multiple, solve_mu, zeta_lower};

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual} (gap {})",
            (actual - expected).abs()
        );
    }

    fn figure_market() -> MarketParams {
        MarketParams::with_martingale_psi(0.1, 1.05, 1.02, 0.003, 1.0, 1.0, 1.0, 4).unwrap()
    }

    #[test]
    fn zeta_lower_lambda_reduces_to_baseline_at_lambda_one() {
        for &(f, pi) in &[(0.003, 1.0), (0.01, 0.4), (0.1, 0.9), (0.0, 0.5)] {
            assert_close(zeta_lower_lambda(f, 1.0, pi), zeta_lower(f, pi), 1e-12);
        }
    }

    #[test]
    fn zeta_lower_lambda_examples() {
        assert_eq!(zeta_lower_lambda(0.0, 0.3, 0.7), 1.0);
        let at_zero = zeta_lower_lambda(0.003, 0.0, 1.0);
        assert_close(at_zero, 1.006007871626898, 1e-13);
        // lowering lambda tightens existence: threshold weakly larger
        assert!(at_zero >= zeta_lower_lambda(0.003, 1.0, 1.0));
    }

    #[test]
    fn fbar_examples() {
        assert!(fbar(1e-12, 0.8) < 1e-11);
        assert_close(fbar(1.0, 1.0), 2.0 / (4.0 + 2.0 * 2.0f64.sqrt()), 1e-15);
        // approaches pi from below for large mu
        let big = fbar(1e8, 0.5);
        assert!(big < 0.5 && big > 0.4999);
        // increasing in mu
        assert!(fbar(0.5, 0.7) < fbar(1.0, 0.7));
    }

    #[test]
    fn zeta_hat_examples() {
        assert_eq!(zeta_hat(0.5, 0.4).unwrap(), None);
        assert_close(zeta_hat(0.0, 0.6).unwrap().unwrap(), 1.0, 1e-15);
        let zh = zeta_hat(0.003, 1.0).unwrap().unwrap();
        assert_close(zh, 1.007530471453, 1e-9);
        assert!(zh > 1.003);
    }

    #[test]
    fn zeta_hat_is_increasing_in_f() {
        // checked numerically on a grid; nothing downstream relies on it
        for &pi in &[0.3, 0.6, 1.0] {
            let mut prev = 0.0;
            for i in 1..=20 {
                let f = pi * i as f64 / 25.0;
                let zh = zeta_hat(f, pi).unwrap().unwrap();
                assert!(zh > prev, "zeta_hat({f}, {pi}) = {zh} not above {prev}");
                prev = zh;
            }
        }
    }

    #[test]
    fn utility_decreases_in_lambda_above_zeta_hat() {
        // f < pi and zeta_u just above the freeze-prevention threshold
        let f = 0.003;
        let pi = 1.0;
        let zh = zeta_hat(f, pi).unwrap().unwrap();
        let m =
            MarketParams::with_martingale_psi(0.1, 1.05, zh * 1.01, f, pi, 1.0, 1.0, 4).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=10 {
            let lambda = i as f64 / 10.0;
            let u = solve_equilibrium(&m, lambda).unwrap().per_unit_utility;
            assert!(u < prev, "U({lambda}) = {u} not below {prev}");
            prev = u;
        }
    }

    #[test]
    fn dampening_mu_and_nu_nondecreasing_in_lambda() {
        // deterministic spread of admissible parameter sets with pi > 0
        let cases = [
            (0.003, 1.0, 1.02),
            (0.01, 0.5, 1.08),
            (0.02, 0.25, 1.15),
            (0.005, 0.75, 1.03),
            (0.04, 1.0, 1.3),
        ];
        for &(f, pi, zu) in &cases {
            let mut prev_mu = -1.0;
            let mut prev_nu = -1.0;
            for i in 0..=20 {
                let lambda = i as f64 / 20.0;
                if zu <= zeta_lower_lambda(f, lambda, pi) {
                    continue;
                }
                let mu = solve_mu(f, pi, zu, lambda).unwrap().mu;
                assert!(mu >= prev_mu - 1e-13, "mu not nondecreasing at ({f}, {pi}, {zu})");
                prev_mu = mu;
                if mu > lambda * f {
                    let nu = jit_multiple(mu, f, lambda).unwrap();
                    assert!(
                        nu >= prev_nu - 1e-10,
                        "nu not nondecreasing at ({f}, {pi}, {zu}, {lambda})"
                    );
                    prev_nu = nu;
                }
            }
        }
    }

    #[test]
    fn optimal_lambda_edge_cases() {
        // alpha = 0: utility positive everywhere, lambda* = 1
        let all_uninformed =
            MarketParams::with_martingale_psi(0.0, 1.05, 1.02, 0.003, 1.0, 1.0, 1.0, 4).unwrap();
        assert_eq!(optimal_lambda(&all_uninformed).unwrap(), Some(1.0));
        // alpha = 1: utility negative everywhere, no lambda*
        let all_informed =
            MarketParams::with_martingale_psi(1.0, 1.05, 1.02, 0.003, 1.0, 1.0, 1.0, 4).unwrap();
        assert_eq!(optimal_lambda(&all_informed).unwrap(), None);
    }

    #[test]
    fn optimal_lambda_reference_set() {
        let lam = optimal_lambda(&figure_market()).unwrap().unwrap();
        assert_close(lam, 0.815649229753, 1e-4);
    }

    #[test]
    fn welfare_zero_when_frozen_and_shaped_otherwise() {
        let m = figure_market();
        let lam_star = optimal_lambda(&m).unwrap().unwrap();
        // below lambda*: positive, nondecreasing
        let mut prev = -1.0;
        for i in 0..=8 {
            let lambda = lam_star * i as f64 / 8.0;
            let w = welfare(&m, lambda, false).unwrap();
            assert!(w >= prev - 1e-15, "W({lambda}) decreased");
            assert!(w > 0.0);
            prev = w;
        }
        // above lambda*: exactly zero
        assert_eq!(welfare(&m, lam_star + 0.01, false).unwrap(), 0.0);
        assert_eq!(welfare(&m, 1.0, false).unwrap(), 0.0);
        // unconditional variant scales by (1 - alpha)
        let w_cond = welfare(&m, 0.5, false).unwrap();
        let w_unc = welfare(&m, 0.5, true).unwrap();
        assert_close(w_unc, 0.9 * w_cond, 1e-15);
    }

    #[test]
    fn welfare_vanishes_with_the_gains_from_trade() {
        // zero fee keeps the equilibrium alive for any zeta_u > 1; as the
        // private-value shock shrinks, trade sizes and welfare vanish
        let mut prev = f64::INFINITY;
        for &zu in &[1.01, 1.001, 1.0001] {
            let m = MarketParams::with_martingale_psi(0.0, 1.05, zu, 0.0, 1.0, 1.0, 1.0, 4)
                .unwrap();
            let w = welfare(&m, 1.0, false).unwrap();
            assert!(w > 0.0 && w < prev);
            prev = w;
        }
        assert!(prev < 1e-7, "welfare should vanish near zeta_u = 1 + f, got {prev}");
    }

    #[test]
    fn fee_design_report_straddles_lambda_star() {
        let report = fee_design_report(&figure_market(), 101, false).unwrap();
        let lam = report.lambda_star.unwrap();
        assert!(report.fbar_ok);
        assert!(report.zeta_hat.is_some());
        let (lo, hi) = report.freeze_interval.unwrap();
        assert!(lo > lam && hi == 1.0);
        // U is nonnegative on the grid below lambda*, negative above
        for (l, u) in report.lambda_grid.iter().zip(&report.u_of_lambda) {
            if *l <= lam - 0.01 {
                assert!(*u >= 0.0, "U({l}) = {u} expected >= 0");
            }
            if *l >= lam + 0.01 {
                assert!(*u < 0.0, "U({l}) = {u} expected < 0");
            }
        }
    }
}
