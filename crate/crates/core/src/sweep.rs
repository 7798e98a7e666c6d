//! Parameter-sweep engine: evaluate any registered scalar output over 1-D
//! and 2-D grids with deterministic row ordering.
//!
//! Rows where the equilibrium fails to exist are emitted with
//! `NoEquilibrium` status instead of being skipped, so downstream plots
//! show the existence boundary itself.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::baseline::{martingale_weight, solve_equilibrium, Classification, MarketParams};
use crate::cournot::{cournot_outcome, CompetitionParams};
use crate::error::ModelError;
use crate::fee_tier::{optimal_lambda, welfare, zeta_hat};
use crate::thresholds::{zeta_star, zeta_star_closed, zeta_star_cournot};

/// Which game variant a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Baseline,
    TwoTier,
    Cournot,
    CournotTwoTier,
}

impl SweepMode {
    pub fn from_name(name: &str) -> Result<Self, ModelError> {
        match name {
            "baseline" => Ok(SweepMode::Baseline),
            "two_tier" => Ok(SweepMode::TwoTier),
            "cournot" => Ok(SweepMode::Cournot),
            "cournot_two_tier" => Ok(SweepMode::CournotTwoTier),
            other => Err(ModelError::Config(format!(
                "unknown mode '{other}' (expected baseline, two_tier, cournot, cournot_two_tier)"
            ))),
        }
    }

    fn competitive(self) -> bool {
        matches!(self, SweepMode::Cournot | SweepMode::CournotTwoTier)
    }
}

/// One sweep axis: a named parameter and a uniform grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl SweepAxis {
    fn values(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

/// Sweep request: target output, one or two axes, and the fixed
/// parameters for everything else.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub target: String,
    pub axis1: SweepAxis,
    pub axis2: Option<SweepAxis>,
    /// Fixed parameter values by name (see [`PARAMETER_NAMES`]). `psi`
    /// and `psi_u` default to the martingale weights of the point's
    /// current `zeta` and `zeta_u` (tracking a swept axis) unless pinned
    /// here explicitly.
    pub fixed: BTreeMap<String, f64>,
    pub mode: SweepMode,
}

/// Evaluation status of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepStatus {
    Ok,
    NoEquilibrium,
}

/// One output row. `axis2` is `NaN`-free: absent axes serialize as `None`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub target: String,
    pub value: Option<f64>,
    pub status: SweepStatus,
}

/// Parameter names accepted in `fixed` and on the axes.
pub const PARAMETER_NAMES: &[&str] = &[
    "alpha", "zeta", "zeta_u", "psi", "psi_u", "f", "pi", "p", "e_p", "n_passive", "lambda",
    "e_j", "d_p",
];

/// Target names accepted by [`run_sweep`].
pub const TARGET_NAMES: &[&str] = &[
    "U", "R", "C", "W", "mu", "nu", "mu_i", "d_p_star", "classification", "exists", "lambda_star",
    "zeta_lower", "zeta_star", "zeta_star_closed", "zeta_star_cournot", "zeta_hat", "mu_c",
    "nu_c", "r_comp",
];

#[derive(Debug, Clone, Copy)]
struct ParamPoint {
    alpha: f64,
    zeta: f64,
    zeta_u: f64,
    psi: f64,
    psi_u: f64,
    psi_explicit: bool,
    psi_u_explicit: bool,
    f: f64,
    pi: f64,
    p: f64,
    e_p: f64,
    n_passive: u32,
    lambda: f64,
    e_j: f64,
    d_p: f64,
}

impl ParamPoint {
    fn from_fixed(fixed: &BTreeMap<String, f64>) -> Result<Self, ModelError> {
        for key in fixed.keys() {
            if !PARAMETER_NAMES.contains(&key.as_str()) {
                return Err(ModelError::Config(format!("unknown parameter '{key}'")));
            }
        }
        let get = |name: &str, default: f64| fixed.get(name).copied().unwrap_or(default);
        let zeta = get("zeta", 1.05);
        let zeta_u = get("zeta_u", 1.02);
        Ok(ParamPoint {
            alpha: get("alpha", 0.1),
            zeta,
            zeta_u,
            psi: get("psi", martingale_weight(zeta)),
            psi_u: get("psi_u", martingale_weight(zeta_u)),
            psi_explicit: fixed.contains_key("psi"),
            psi_u_explicit: fixed.contains_key("psi_u"),
            f: get("f", 0.003),
            pi: get("pi", 1.0),
            p: get("p", 1.0),
            e_p: get("e_p", 1.0),
            n_passive: get("n_passive", 4.0) as u32,
            lambda: get("lambda", 1.0),
            e_j: get("e_j", 3.0),
            d_p: get("d_p", get("e_p", 1.0)),
        })
    }

    fn set(&mut self, name: &str, value: f64) -> Result<(), ModelError> {
        match name {
            "alpha" => self.alpha = value,
            "zeta" => self.zeta = value,
            "zeta_u" => self.zeta_u = value,
            "psi" => {
                self.psi = value;
                self.psi_explicit = true;
            }
            "psi_u" => {
                self.psi_u = value;
                self.psi_u_explicit = true;
            }
            "f" => self.f = value,
            "pi" => self.pi = value,
            "p" => self.p = value,
            "e_p" => self.e_p = value,
            "n_passive" => self.n_passive = value as u32,
            "lambda" => self.lambda = value,
            "e_j" => self.e_j = value,
            "d_p" => self.d_p = value,
            other => return Err(ModelError::Config(format!("unknown parameter '{other}'"))),
        }
        Ok(())
    }

    fn market(&self) -> Result<MarketParams, ModelError> {
        let psi = if self.psi_explicit { self.psi } else { martingale_weight(self.zeta) };
        let psi_u = if self.psi_u_explicit { self.psi_u } else { martingale_weight(self.zeta_u) };
        MarketParams::new(
            self.alpha, self.zeta, self.zeta_u, psi, psi_u, self.f, self.pi, self.p, self.e_p,
            self.n_passive,
        )
    }
}

fn evaluate(
    point: &ParamPoint,
    target: &str,
    mode: SweepMode,
) -> Result<(Option<f64>, SweepStatus), ModelError> {
    let market = point.market()?;
    let lambda = if mode == SweepMode::Baseline || mode == SweepMode::Cournot {
        1.0
    } else {
        point.lambda
    };

    // threshold targets are defined without an equilibrium at the point
    match target {
        "zeta_lower" => return Ok((Some(crate::baseline::zeta_lower(point.f, point.pi)), SweepStatus::Ok)),
        "zeta_star" => {
            let sol = zeta_star(point.f, point.pi)?;
            return Ok((sol.outcome.value(), SweepStatus::Ok));
        }
        "zeta_star_closed" => return Ok((Some(zeta_star_closed(point.f)), SweepStatus::Ok)),
        "zeta_hat" => return Ok((zeta_hat(point.f, point.pi)?, SweepStatus::Ok)),
        "lambda_star" => return Ok((optimal_lambda(&market)?, SweepStatus::Ok)),
        "zeta_star_cournot" => {
            let params = CompetitionParams::new(market, point.e_j, lambda)?;
            let sol = zeta_star_cournot(&params, point.d_p, None)?;
            return Ok((sol.outcome.value(), SweepStatus::Ok));
        }
        _ => {}
    }

    if mode.competitive() {
        let params = CompetitionParams::new(market, point.e_j, lambda)?;
        let out = cournot_outcome(&params, point.d_p)?;
        if !out.exists {
            return Ok((None, SweepStatus::NoEquilibrium));
        }
        let value = match target {
            "U" => out.per_unit_utility,
            "R" | "r_comp" => out.r_comp,
            "C" => crate::baseline::adverse_selection_cost(market.zeta, market.psi, market.fee_rate),
            "mu" | "mu_c" => out.mu_c,
            "nu" | "nu_c" => out.nu_c,
            "mu_i" => out.informed_multiple,
            "exists" => 1.0,
            "d_p_star" => {
                if out.per_unit_utility >= 0.0 {
                    market.passive_endowment
                } else {
                    0.0
                }
            }
            "classification" => {
                // complement iff R(0) <= R(pi, d_P)
                let mu0 = crate::baseline::solve_mu(market.fee_rate, 0.0, market.zeta_u, lambda)?.mu;
                let r0 = crate::baseline::fee_revenue(mu0, 0.0, 0.0, market.fee_rate, lambda);
                if r0 <= out.r_comp {
                    1.0
                } else {
                    0.0
                }
            }
            "W" => {
                return Err(ModelError::Config(
                    "welfare sweeps are supported in baseline/two_tier modes only".into(),
                ))
            }
            other => return Err(ModelError::Config(format!("unknown target '{other}'"))),
        };
        return Ok((Some(value), SweepStatus::Ok));
    }

    let eq = solve_equilibrium(&market, lambda)?;
    if !eq.exists {
        return Ok((None, SweepStatus::NoEquilibrium));
    }
    let value = match target {
        "U" => eq.per_unit_utility,
        "R" => eq.fee_revenue,
        "C" => eq.adverse_selection_cost,
        "W" => welfare(&market, lambda, false)?,
        "mu" => eq.uninformed_multiple,
        "nu" => eq.jit_multiple,
        "mu_i" => eq.informed_multiple,
        "d_p_star" => eq.passive_deposit,
        "exists" => 1.0,
        "classification" => match eq.classification {
            Classification::Complement => 1.0,
            Classification::CrowdOut => 0.0,
            Classification::Undefined => return Ok((None, SweepStatus::NoEquilibrium)),
        },
        other => return Err(ModelError::Config(format!("unknown target '{other}'"))),
    };
    Ok((Some(value), SweepStatus::Ok))
}

/// Run the sweep. Rows come out in row-major order over `(axis1, axis2)`;
/// evaluation is embarrassingly parallel and the assembly is
/// order-preserving, so output is deterministic for any thread count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, ModelError> {
    if !TARGET_NAMES.contains(&spec.target.as_str()) {
        return Err(ModelError::Config(format!(
            "unknown target '{}' (expected one of {})",
            spec.target,
            TARGET_NAMES.join(", ")
        )));
    }
    for axis in std::iter::once(&spec.axis1).chain(spec.axis2.as_ref()) {
        if !PARAMETER_NAMES.contains(&axis.param.as_str()) {
            return Err(ModelError::Config(format!("unknown axis parameter '{}'", axis.param)));
        }
        if axis.n < 2 {
            return Err(ModelError::Config(format!(
                "axis '{}' needs at least 2 grid points, got {}",
                axis.param, axis.n
            )));
        }
    }
    let base = ParamPoint::from_fixed(&spec.fixed)?;

    let axis1_values = spec.axis1.values();
    let axis2_values = spec.axis2.as_ref().map(|a| a.values());
    let mut coords = Vec::new();
    match &axis2_values {
        Some(vals2) => {
            for &v1 in &axis1_values {
                for &v2 in vals2 {
                    coords.push((v1, Some(v2)));
                }
            }
        }
        None => coords.extend(axis1_values.iter().map(|&v1| (v1, None))),
    }

    coords
        .par_iter()
        .map(|&(v1, v2)| -> Result<SweepRow, ModelError> {
            let mut point = base;
            point.set(&spec.axis1.param, v1)?;
            if let (Some(axis2), Some(v2)) = (&spec.axis2, v2) {
                point.set(&axis2.param, v2)?;
            }
            let (value, status) = evaluate(&point, &spec.target, spec.mode)?;
            Ok(SweepRow { axis1: v1, axis2: v2, target: spec.target.clone(), value, status })
        })
        .collect()
}
