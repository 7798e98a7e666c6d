//! Crowding-out vs. complement classification and the ζ-thresholds.
//!
//! Passive fee revenue scaled by `1/f` is the expected trading volume the
//! pool attracts from an uninformed arrival: `V_0` without a JIT LP and
//! `V(μ)` (or `V_C(μ)` under competition) with one. The JIT LP complements
//! the passive LPs iff `V ≥ V_0`, which reduces to
//! `G(μ) = M_T(μ)·(2 + V² + V·√(4+V²)) ≥ 2` at the equilibrium trade
//! size. `G` is increasing in μ, so a single crossing `G(μ*) = 2` marks
//! the crowding threshold `ζ* = (1+f)/M_T(μ*)`.

use serde::{Deserialize, Serialize};

use crate::baseline::{solve_mu, trader_foc, zeta_lower, Classification, MarketParams};
use crate::cournot::{cournot_foc, nu_hat, solve_mu_cournot, CompetitionParams};
use crate::error::ModelError;
use crate::fee_tier::{zeta_hat, zeta_lower_lambda};
use crate::solver::{self, solve_increasing};

/// Offset used to evaluate `G` just above the ν-pole at μ = f.
const MU_POLE_OFFSET: f64 = 1e-9;
/// Slack for the boundary comparison `G(f⁺) ≥ 2` (G is exactly 2 in the
/// f → 0 limit, so the test must tolerate rounding).
const G_BOUNDARY_TOL: f64 = 1e-12;
/// Sample count for the Cournot monotonicity scan.
const G_SCAN_POINTS: usize = 1000;

/// Threshold search outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdOutcome {
    /// Complementing for every admissible shock size.
    AlwaysComplement,
    /// Crowding out over the whole configured band (competition only).
    AlwaysCrowdOut,
    /// Crossing at this `ζ_U`.
    Threshold(f64),
}

impl ThresholdOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            ThresholdOutcome::Threshold(z) => Some(*z),
            _ => None,
        }
    }
}

/// Solver bookkeeping for the report.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ThresholdDiagnostics {
    pub zeta_star_residual: Option<f64>,
    pub zeta_star_iterations: Option<u32>,
    pub zeta_star_bracket: Option<(f64, f64)>,
    /// Whether the sampled Cournot `G` was monotone on the band; when it
    /// is not, the first sign change is used instead of bisection.
    pub cournot_monotone_g: Option<bool>,
    pub cournot_residual: Option<f64>,
    /// ζ_U band the competitive search was clamped to.
    pub cournot_band: Option<(f64, f64)>,
}

/// Everything the thresholds module knows about one parameter set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// Existence threshold `ζ̲(f, π)`.
    pub zeta_lower: f64,
    /// Crowding threshold `ζ*(f, π)` or AlwaysComplement.
    pub zeta_star: ThresholdOutcome,
    /// Closed form `(√f + √(1+f))²`, reported when π = 1.
    pub zeta_star_closed: Option<f64>,
    /// Whether the root-found ζ* matches the π = 1 closed form to 1e-6.
    pub closed_form_match: Option<bool>,
    /// Freeze-prevention threshold `ζ̂(f, π)` when `f < π`.
    pub zeta_hat: Option<f64>,
    /// Whether the `f < π` precondition for ζ̂ holds.
    pub fbar_ok: bool,
    /// Welfare-optimal transfer rate for the supplied market.
    pub lambda_star: Option<f64>,
    /// Competitive crowding threshold, when competition parameters are
    /// supplied.
    pub zeta_star_cournot: Option<ThresholdOutcome>,
    /// Classification sampled at a few ζ_U values around the threshold.
    pub classification_at: Vec<(f64, Classification)>,
    pub diagnostics: ThresholdDiagnostics,
}

/// Trading volume with no JIT LP:
/// `V_0 = √(ζ_U/(1+f)) − √((1+f)/ζ_U)`, the uninformed swap plus the
/// arbitrageur's reverse swap per unit of passive liquidity.
pub fn volume_no_jit(zeta_u: f64, fee_rate: f64) -> Result<f64, ModelError> {
    if zeta_u < 1.0 + fee_rate {
        return Err(ModelError::domain(
            "volume_no_jit",
            format!("zeta_u must be >= 1 + f = {}, got {zeta_u}", 1.0 + fee_rate),
        ));
    }
    let ratio = zeta_u / (1.0 + fee_rate);
    Ok(ratio.sqrt() - (1.0 / ratio).sqrt())
}

/// Trading volume at equilibrium trade size μ with a JIT arrival
/// probability π:
/// `V(μ) = (1−π)(μ + μ/(1+μ)) + π(√((1+μ)/(1+f)) − √((1+f)/(1+μ)))`.
///
/// Equals `R(π)/f` at the equilibrium μ; requires `μ > f` so the JIT
/// branch is on its interior best response.
pub fn volume_with_jit(mu: f64, fee_rate: f64, pi: f64) -> Result<f64, ModelError> {
    if mu <= fee_rate {
        return Err(ModelError::domain(
            "volume_with_jit",
            format!("mu must exceed f = {fee_rate}, got {mu}"),
        ));
    }
    let no_jit = mu + mu / (1.0 + mu);
    let ratio = (1.0 + mu) / (1.0 + fee_rate);
    Ok((1.0 - pi) * no_jit + pi * (ratio.sqrt() - (1.0 / ratio).sqrt()))
}

/// Classify the JIT LP as complementing or crowding out the passive LPs
/// at this market's π: complement iff `R(0) ≤ R(π)`.
///
/// Comparisons within a relative 1e-9 band count as ties and break
/// toward Complement, so a vanishing π (where `R(π) → R(0)`) classifies
/// as complementing.
pub fn classify(market: &MarketParams, lambda: f64) -> Result<Classification, ModelError> {
    let f = market.fee_rate;
    if market.zeta_u <= zeta_lower_lambda(f, lambda, 0.0) {
        return Err(ModelError::Classification(format!(
            "no equilibrium at pi = 0: zeta_u = {} below {}",
            market.zeta_u,
            zeta_lower_lambda(f, lambda, 0.0)
        )));
    }
    if market.zeta_u <= zeta_lower_lambda(f, lambda, market.pi) {
        return Err(ModelError::Classification(format!(
            "no equilibrium at pi = {}: zeta_u = {} below {}",
            market.pi,
            market.zeta_u,
            zeta_lower_lambda(f, lambda, market.pi)
        )));
    }
    let mu0 = solve_mu(f, 0.0, market.zeta_u, lambda)?.mu;
    let r0 = crate::baseline::fee_revenue(mu0, 0.0, 0.0, f, lambda);
    let mu = solve_mu(f, market.pi, market.zeta_u, lambda)?.mu;
    let nu = crate::baseline::jit_multiple(mu, f, lambda)?;
    let r = crate::baseline::fee_revenue(mu, nu, market.pi, f, lambda);
    let tie_band = 1e-9 * r0.abs().max(r.abs());
    Ok(if r0 <= r + tie_band { Classification::Complement } else { Classification::CrowdOut })
}

/// `G(μ) = M_T(μ)·(2 + V(μ)² + V(μ)√(4 + V(μ)²))`, increasing on (f, ∞).
fn g_monopolist(mu: f64, fee_rate: f64, pi: f64) -> f64 {
    let v = volume_with_jit(mu, fee_rate, pi).unwrap_or(0.0);
    trader_foc(mu, fee_rate, pi, 1.0) * (2.0 + v * v + v * (4.0 + v * v).sqrt())
}

/// Result of a ζ* search with the root diagnostics attached.
#[derive(Debug, Clone, Copy)]
pub struct ZetaStarSolution {
    pub outcome: ThresholdOutcome,
    pub residual: Option<f64>,
    pub iterations: Option<u32>,
    pub bracket: Option<(f64, f64)>,
}

/// Crowding threshold `ζ*(f, π)` of the monopolist game.
///
/// If `G(f⁺) ≥ 2` the JIT LP complements at every admissible shock size;
/// otherwise the unique crossing `G(μ*) = 2` converts to
/// `ζ* = (1+f)/M_T(μ*)`.
pub fn zeta_star(fee_rate: f64, pi: f64) -> Result<ZetaStarSolution, ModelError> {
    if !(pi > 0.0 && pi <= 1.0) {
        return Err(ModelError::domain("zeta_star", format!("pi must lie in (0, 1], got {pi}")));
    }
    // just above the nu-pole at mu = f
    let mu_lo = if fee_rate > 0.0 { fee_rate * (1.0 + MU_POLE_OFFSET) } else { MU_POLE_OFFSET };
    if g_monopolist(mu_lo, fee_rate, pi) >= 2.0 - G_BOUNDARY_TOL {
        return Ok(ZetaStarSolution {
            outcome: ThresholdOutcome::AlwaysComplement,
            residual: None,
            iterations: None,
            bracket: None,
        });
    }
    let root = solve_increasing(
        |mu| g_monopolist(mu, fee_rate, pi),
        2.0,
        mu_lo,
        (2.0 * fee_rate).max(1.0),
        solver::DEFAULT_XTOL,
        solver::DEFAULT_MAX_ITER,
    )?;
    let z = (1.0 + fee_rate) / trader_foc(root.root, fee_rate, pi, 1.0);
    // a crossing at or below the existence bound means every admissible
    // shock size already complements
    let outcome = if z <= zeta_lower(fee_rate, pi) * (1.0 + 1e-9) {
        ThresholdOutcome::AlwaysComplement
    } else {
        ThresholdOutcome::Threshold(z)
    };
    Ok(ZetaStarSolution {
        outcome,
        residual: Some(root.residual),
        iterations: Some(root.iterations),
        bracket: Some(root.bracket),
    })
}

/// Closed-form π = 1 crowding threshold `ζ*(f, 1) = (√f + √(1+f))²`.
pub fn zeta_star_closed(fee_rate: f64) -> f64 {
    let s = fee_rate.sqrt() + (1.0 + fee_rate).sqrt();
    s * s
}

/// Competitive volume
/// `V_C(μ) = (1−π)²(μ + μ/(1+μ)) + 2π(1−π)(√((1+μ)/(1+f)) − √((1+f)/(1+μ)))
///  + π²(μ/(1+2ν̂) + μ/(1+2ν̂+μ))`.
fn volume_cournot(mu: f64, fee_rate: f64, pi: f64, nu_hat: f64) -> f64 {
    let no_jit = mu + mu / (1.0 + mu);
    let ratio = (1.0 + mu) / (1.0 + fee_rate);
    let single = ratio.sqrt() - (1.0 / ratio).sqrt();
    let corner = 1.0 + 2.0 * nu_hat;
    let both = mu / corner + mu / (corner + mu);
    (1.0 - pi) * (1.0 - pi) * no_jit + 2.0 * pi * (1.0 - pi) * single + pi * pi * both
}

fn g_cournot(mu: f64, fee_rate: f64, pi: f64, nu_hat: f64) -> f64 {
    let v = volume_cournot(mu, fee_rate, pi, nu_hat);
    cournot_foc(mu, fee_rate, pi, nu_hat, 1.0) * (2.0 + v * v + v * (4.0 + v * v).sqrt())
}

/// Competitive ζ* search result.
#[derive(Debug, Clone, Copy)]
pub struct ZetaStarCournotSolution {
    pub outcome: ThresholdOutcome,
    /// Whether the sampled `G` was monotone on the search band; when not,
    /// the first sign change from below is reported.
    pub monotone_g: bool,
    pub residual: Option<f64>,
    /// The ζ_U band that was searched.
    pub band: (f64, f64),
}

/// Competitive crowding threshold `ζ*_C(f, π, d_P)` over a ζ_U band.
///
/// The band defaults to `[ζ̲·(1+1e−9), 10·ζ̲]`. The three outcomes follow
/// the sign of `G_C − 2` at the band edges; monotonicity of `G_C` is only
/// guaranteed for large `ν̂`, so it is checked by sampling and a
/// first-sign-change scan is used as the fallback.
pub fn zeta_star_cournot(
    params: &CompetitionParams,
    d_p: f64,
    band: Option<(f64, f64)>,
) -> Result<ZetaStarCournotSolution, ModelError> {
    let m = &params.base;
    let f = m.fee_rate;
    let pi = m.pi;
    if !(pi > 0.0 && pi < 1.0) {
        return Err(ModelError::domain(
            "zeta_star_cournot",
            format!("pi must lie in (0, 1), got {pi}"),
        ));
    }
    if !(d_p > 0.0) {
        return Err(ModelError::domain("zeta_star_cournot", format!("d_P must be > 0, got {d_p}")));
    }
    let zl = zeta_lower(f, pi);
    let band = band.unwrap_or((zl * (1.0 + 1e-9), 10.0 * zl));
    if band.0 >= band.1 || band.0 <= zl * (1.0 - 1e-12) {
        return Err(ModelError::domain(
            "zeta_star_cournot",
            format!("band ({}, {}) must sit above zeta_lower = {zl}", band.0, band.1),
        ));
    }
    let nh = nu_hat(m.price.sqrt() * d_p, m.price.sqrt() * params.jit_endowment);

    // convert the zeta band to the mu band through the competitive FOC
    let mu_at = |zeta_u: f64| -> Result<f64, ModelError> {
        let mut base = *m;
        base.zeta_u = zeta_u;
        let p = CompetitionParams { base, jit_endowment: params.jit_endowment, lambda: 1.0 };
        Ok(solve_mu_cournot(&p, d_p)?.mu)
    };
    let mu_lo = mu_at(band.0)?.max(if f > 0.0 { f * (1.0 + MU_POLE_OFFSET) } else { MU_POLE_OFFSET });
    let mu_hi = mu_at(band.1)?;
    if mu_hi <= mu_lo {
        return Err(ModelError::Solver(format!(
            "degenerate mu band [{mu_lo}, {mu_hi}] for zeta band ({}, {})",
            band.0, band.1
        )));
    }

    let g = |mu: f64| g_cournot(mu, f, pi, nh);
    if g(mu_lo) >= 2.0 - G_BOUNDARY_TOL {
        return Ok(ZetaStarCournotSolution {
            outcome: ThresholdOutcome::AlwaysComplement,
            monotone_g: true,
            residual: None,
            band,
        });
    }
    if g(mu_hi) < 2.0 {
        return Ok(ZetaStarCournotSolution {
            outcome: ThresholdOutcome::AlwaysCrowdOut,
            monotone_g: true,
            residual: None,
            band,
        });
    }

    // monotonicity scan; Lemma-type guarantees only hold for large nu_hat
    let mut monotone = true;
    let mut prev = g(mu_lo);
    let mut first_cross: Option<(f64, f64)> = None;
    for i in 1..=G_SCAN_POINTS {
        let mu = mu_lo + (mu_hi - mu_lo) * i as f64 / G_SCAN_POINTS as f64;
        let gv = g(mu);
        if gv < prev {
            monotone = false;
        }
        if first_cross.is_none() && prev < 2.0 && gv >= 2.0 {
            let lo = mu_lo + (mu_hi - mu_lo) * (i - 1) as f64 / G_SCAN_POINTS as f64;
            first_cross = Some((lo, mu));
        }
        prev = gv;
    }
    let (lo, hi) = first_cross.ok_or_else(|| {
        ModelError::Solver("no G = 2 crossing found inside the band despite edge signs".into())
    })?;
    let mut lo = lo;
    let mut hi = hi;
    let mut iterations = 0;
    while hi - lo > solver::DEFAULT_XTOL && iterations < solver::DEFAULT_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mu_star = 0.5 * (lo + hi);
    let z = (1.0 + f) / cournot_foc(mu_star, f, pi, nh, 1.0);
    Ok(ZetaStarCournotSolution {
        outcome: ThresholdOutcome::Threshold(z),
        monotone_g: monotone,
        residual: Some((g(mu_star) - 2.0).abs()),
        band,
    })
}

/// Assemble the full threshold report for a market (and optionally the
/// competitive extension).
pub fn threshold_report(
    market: &MarketParams,
    competition: Option<&CompetitionParams>,
    d_p: f64,
    cournot_band: Option<(f64, f64)>,
) -> Result<ThresholdReport, ModelError> {
    let f = market.fee_rate;
    let pi = market.pi;
    let star = zeta_star(f, pi)?;
    let closed = if pi == 1.0 { Some(zeta_star_closed(f)) } else { None };
    let closed_match = match (closed, star.outcome.value()) {
        (Some(c), Some(z)) => Some((c - z).abs() <= 1e-6),
        _ => None,
    };

    let mut diagnostics = ThresholdDiagnostics {
        zeta_star_residual: star.residual,
        zeta_star_iterations: star.iterations,
        zeta_star_bracket: star.bracket,
        ..Default::default()
    };
    let zeta_star_cournot_outcome = match competition {
        Some(params) if pi > 0.0 && pi < 1.0 => {
            let sol = zeta_star_cournot(params, d_p, cournot_band)?;
            diagnostics.cournot_monotone_g = Some(sol.monotone_g);
            diagnostics.cournot_residual = sol.residual;
            diagnostics.cournot_band = Some(sol.band);
            Some(sol.outcome)
        }
        _ => None,
    };

    // sample classifications on a deterministic grid around the threshold
    let zl = zeta_lower(f, pi);
    let mut sample_points = vec![zl * 1.05, zl * 1.5, zl * 3.0];
    if let Some(z) = star.outcome.value() {
        sample_points.extend([z * (1.0 - 1e-3), z * (1.0 + 1e-3)]);
    }
    sample_points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut classification_at = Vec::new();
    for z in sample_points {
        let mut probe = *market;
        probe.zeta_u = z;
        if let Ok(c) = classify(&probe, 1.0) {
            classification_at.push((z, c));
        }
    }

    Ok(ThresholdReport {
        zeta_lower: zl,
        zeta_star: star.outcome,
        zeta_star_closed: closed,
        closed_form_match: closed_match,
        zeta_hat: zeta_hat(f, pi)?,
        fbar_ok: f < pi,
        lambda_star: crate::fee_tier::optimal_lambda(market)?,
        zeta_star_cournot: zeta_star_cournot_outcome,
        classification_at,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual} (gap {})",
            (actual - expected).abs()
        );
    }

    #[test]
    fn volume_no_jit_examples() {
        assert_eq!(volume_no_jit(1.003, 0.003).unwrap(), 0.0);
        let v = volume_no_jit(1.02, 0.003).unwrap();
        // equals mu(0) + mu(0)/(1+mu(0))
        let mu0 = (1.02f64 / 1.003).sqrt() - 1.0;
        assert_close(v, mu0 + mu0 / (1.0 + mu0), 1e-14);
        assert_close(volume_no_jit(4.0, 0.0).unwrap(), 1.5, 1e-15);
        assert!(volume_no_jit(1.0, 0.01).is_err());
    }

    #[test]
    fn volume_with_jit_examples() {
        // pi = 0 reduces to the no-JIT volume at the same mu
        let v = volume_with_jit(0.05, 0.003, 0.0).unwrap();
        assert_close(v, 0.05 + 0.05 / 1.05, 1e-15);
        // pi = 1, f = 0, mu = 3: sqrt(4) - sqrt(1/4)
        assert_close(volume_with_jit(3.0, 0.0, 1.0).unwrap(), 1.5, 1e-15);
        // equals R(pi)/f at the equilibrium mu (share-weighted route)
        let mu = solve_mu(0.003, 1.0, 1.02, 1.0).unwrap().mu;
        let nu = crate::baseline::jit_multiple(mu, 0.003, 1.0).unwrap();
        let r = crate::baseline::fee_revenue(mu, nu, 1.0, 0.003, 1.0);
        assert_close(volume_with_jit(mu, 0.003, 1.0).unwrap(), r / 0.003, 1e-9);
        assert!(volume_with_jit(0.003, 0.003, 1.0).is_err());
    }

    #[test]
    fn zeta_star_reference_and_closed_form() {
        let sol = zeta_star(0.03, 1.0).unwrap();
        let z = sol.outcome.value().unwrap();
        assert_close(z, 1.411567916625, 1e-6);
        assert_close(z, zeta_star_closed(0.03), 1e-6);
    }

    #[test]
    fn zeta_star_closed_examples() {
        assert_eq!(zeta_star_closed(0.0), 1.0);
        assert_close(zeta_star_closed(0.03), 1.411567916625, 1e-9);
        assert_close(zeta_star_closed(1.0), 3.0 + 2.0 * 2.0f64.sqrt(), 1e-15);
    }

    #[test]
    fn zero_fee_always_complements() {
        assert_eq!(zeta_star(0.0, 1.0).unwrap().outcome, ThresholdOutcome::AlwaysComplement);
        assert_eq!(zeta_star(0.0, 0.5).unwrap().outcome, ThresholdOutcome::AlwaysComplement);
    }

    #[test]
    fn closed_form_matches_root_finder_across_fees() {
        for &f in &[0.001, 0.003, 0.01, 0.03, 0.1] {
            let z = zeta_star(f, 1.0).unwrap().outcome.value().unwrap();
            assert_close(z, zeta_star_closed(f), 1e-6);
        }
    }

    #[test]
    fn g_is_increasing_in_mu() {
        // deterministic spread standing in for random draws
        let cases = [(0.001, 0.2), (0.005, 0.5), (0.01, 0.9), (0.03, 1.0), (0.08, 0.35)];
        for &(f, pi) in &cases {
            let mu_lo = f * (1.0 + 1e-6);
            let mu_hi = 3.0;
            let mut prev = g_monopolist(mu_lo, f, pi);
            for i in 1..=1000 {
                let mu = mu_lo + (mu_hi - mu_lo) * i as f64 / 1000.0;
                let g = g_monopolist(mu, f, pi);
                assert!(g >= prev, "G not increasing at f = {f}, pi = {pi}, mu = {mu}");
                prev = g;
            }
        }
    }

    #[test]
    fn classify_examples_and_threshold_straddle() {
        // f = 0.03, pi = 1: threshold near 1.4116
        let above =
            MarketParams::with_martingale_psi(0.1, 1.5, 1.5, 0.03, 1.0, 1.0, 1.0, 4).unwrap();
        assert_eq!(classify(&above, 1.0).unwrap(), Classification::Complement);
        let below =
            MarketParams::with_martingale_psi(0.1, 1.5, 1.2, 0.03, 1.0, 1.0, 1.0, 4).unwrap();
        assert_eq!(classify(&below, 1.0).unwrap(), Classification::CrowdOut);

        let z = zeta_star(0.03, 1.0).unwrap().outcome.value().unwrap();
        let mut probe = above;
        probe.zeta_u = z + 1e-3;
        assert_eq!(classify(&probe, 1.0).unwrap(), Classification::Complement);
        probe.zeta_u = z - 1e-3;
        assert_eq!(classify(&probe, 1.0).unwrap(), Classification::CrowdOut);
    }

    #[test]
    fn classify_continuity_at_small_pi() {
        let m =
            MarketParams::with_martingale_psi(0.1, 1.05, 1.05, 0.01, 1e-9, 1.0, 1.0, 4).unwrap();
        assert_eq!(classify(&m, 1.0).unwrap(), Classification::Complement);
    }

    #[test]
    fn classify_errors_without_equilibrium() {
        // zeta_u above the pi-threshold but below the pi = 0 threshold (1+f)^3
        let f = 0.05f64;
        let m = MarketParams::with_martingale_psi(0.1, 2.0, 1.12, f, 1.0, 1.0, 1.0, 4).unwrap();
        assert!(1.12 < (1.0 + f).powi(3));
        assert!(matches!(classify(&m, 1.0), Err(ModelError::Classification(_))));
    }

    #[test]
    fn cournot_threshold_sits_below_monopolist() {
        let base =
            MarketParams::with_martingale_psi(0.1, 1.05, 1.05, 0.01, 0.5, 1.0, 1.0, 4).unwrap();
        let params = CompetitionParams::new(base, 3.0, 1.0).unwrap();
        let comp = zeta_star_cournot(&params, 1.0, None).unwrap();
        let mono = zeta_star(0.01, 0.5).unwrap();
        let zc = comp.outcome.value().unwrap();
        let zm = mono.outcome.value().unwrap();
        assert_close(zc, 1.118160141955, 1e-6);
        assert_close(zm, 1.183975579405, 1e-6);
        assert!(zc <= zm);
        assert!(comp.monotone_g);
    }

    #[test]
    fn cournot_band_edges_classify_the_three_cases() {
        let base =
            MarketParams::with_martingale_psi(0.1, 1.05, 1.05, 0.01, 0.5, 1.0, 1.0, 4).unwrap();
        let params = CompetitionParams::new(base, 3.0, 1.0).unwrap();
        let zl = zeta_lower(0.01, 0.5);
        // threshold near 1.1182 sits inside the default band
        let interior = zeta_star_cournot(&params, 1.0, None).unwrap();
        assert!(matches!(interior.outcome, ThresholdOutcome::Threshold(_)));
        // a band capped below the threshold crowds out everywhere
        let low = zeta_star_cournot(&params, 1.0, Some((zl * 1.0001, zl * 1.01))).unwrap();
        assert_eq!(low.outcome, ThresholdOutcome::AlwaysCrowdOut);
        // a band starting above the threshold complements everywhere
        let high = zeta_star_cournot(&params, 1.0, Some((1.2, 2.0))).unwrap();
        assert_eq!(high.outcome, ThresholdOutcome::AlwaysComplement);
    }

    #[test]
    fn thresholds_coincide_as_pi_vanishes() {
        let base =
            MarketParams::with_martingale_psi(0.1, 1.05, 1.05, 0.01, 1e-4, 1.0, 1.0, 4).unwrap();
        let params = CompetitionParams::new(base, 30.0, 1.0).unwrap();
        let zc = zeta_star_cournot(&params, 1.0, None).unwrap().outcome;
        let zm = zeta_star(0.01, 1e-4).unwrap().outcome;
        match (zc, zm) {
            (ThresholdOutcome::Threshold(a), ThresholdOutcome::Threshold(b)) => {
                assert_close(a, b, 1e-4);
            }
            (a, b) => assert_eq!(a, b),
        }
    }

    #[test]
    fn report_carries_all_fields() {
        let m = MarketParams::with_martingale_psi(0.1, 1.5, 1.5, 0.03, 1.0, 1.0, 1.0, 4).unwrap();
        let report = threshold_report(&m, None, 1.0, None).unwrap();
        assert!(report.zeta_star.value().is_some());
        assert_eq!(report.closed_form_match, Some(true));
        assert!(report.fbar_ok);
        assert!(report.zeta_hat.is_some());
        assert!(!report.classification_at.is_empty());
        // classification samples flip from crowd-out to complement in order
        let mut seen_complement = false;
        for (_, c) in &report.classification_at {
            if *c == Classification::Complement {
                seen_complement = true;
            } else {
                assert!(!seen_complement, "complement region must sit above crowd-out");
            }
        }
    }
}
