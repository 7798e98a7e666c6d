//! Key-value run configuration.
//!
//! The same schema is accepted from a config file (`key = value` per
//! line, `#` comments) and from repeated `--set key=value` flags; flags
//! win over the file. Unknown keys are rejected before anything runs.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use jit_liquidity::{
    martingale_weight, CompetitionParams, MarketParams, ModelError, PoolParams, Scenario,
    SweepMode,
};

/// Keys shared by every subcommand.
pub const MARKET_KEYS: &[&str] = &[
    "mode", "alpha", "zeta", "zeta_u", "psi", "psi_u", "f", "pi", "p", "e_p", "n_passive",
    "lambda", "e_j", "d_p",
];

/// Extra keys accepted per subcommand.
pub const THRESHOLD_KEYS: &[&str] = &["zeta_band_lo", "zeta_band_hi"];
pub const FEE_DESIGN_KEYS: &[&str] = &["lambda_grid", "welfare_unconditional"];
pub const SWEEP_KEYS: &[&str] = &[
    "target", "axis1", "axis1_lo", "axis1_hi", "axis1_n", "axis2", "axis2_lo", "axis2_hi",
    "axis2_n",
];
pub const SIMULATE_KEYS: &[&str] = &["scenario", "jit_arrivals", "q_r", "q_s", "d_j", "a", "b"];
pub const VERIFY_KEYS: &[&str] = &["draws", "grid_n", "refine_rounds"];

/// Flat, string-valued view of the run configuration.
#[derive(Debug, Clone, Default)]
pub struct ParamBag {
    values: BTreeMap<String, String>,
}

impl ParamBag {
    /// Load `file` (when given) and apply `--set` overrides on top.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self, ModelError> {
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = fs::read_to_string(path).map_err(|e| {
                ModelError::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(ModelError::Config(format!(
                        "{}:{}: expected 'key = value', got '{raw}'",
                        path.display(),
                        lineno + 1
                    )));
                };
                values.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        for entry in overrides {
            let Some((key, value)) = entry.split_once('=') else {
                return Err(ModelError::Config(format!("--set expects KEY=VALUE, got '{entry}'")));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ParamBag { values })
    }

    /// Reject any key outside the allowed schema for this command.
    pub fn ensure_known(&self, extra: &[&str]) -> Result<(), ModelError> {
        for key in self.values.keys() {
            if !MARKET_KEYS.contains(&key.as_str()) && !extra.contains(&key.as_str()) {
                return Err(ModelError::Config(format!("unknown configuration key '{key}'")));
            }
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ModelError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| ModelError::Config(format!("key '{key}': expected a number, got '{v}'"))),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>, ModelError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| ModelError::Config(format!("key '{key}': expected a number, got '{v}'"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ModelError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.parse::<usize>().map_err(|_| {
                ModelError::Config(format!("key '{key}': expected an integer, got '{v}'"))
            }),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, ModelError> {
        match self.values.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(ModelError::Config(format!(
                "key '{key}': expected true/false, got '{v}'"
            ))),
        }
    }

    /// Shock weight: a number, or the literal `martingale` for ζ/(ζ+1).
    fn shock_weight(&self, key: &str, zeta: f64) -> Result<f64, ModelError> {
        match self.values.get(key).map(String::as_str) {
            None | Some("martingale") => Ok(martingale_weight(zeta)),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| ModelError::Config(format!("key '{key}': expected a number or 'martingale', got '{v}'"))),
        }
    }

    pub fn mode(&self) -> Result<SweepMode, ModelError> {
        match self.values.get("mode") {
            None => Ok(SweepMode::Baseline),
            Some(v) => SweepMode::from_name(v),
        }
    }

    /// Transfer rate implied by the mode: plain modes pin λ = 1.
    pub fn lambda(&self) -> Result<f64, ModelError> {
        match self.mode()? {
            SweepMode::Baseline | SweepMode::Cournot => Ok(1.0),
            SweepMode::TwoTier | SweepMode::CournotTwoTier => self.f64_or("lambda", 1.0),
        }
    }

    pub fn market(&self) -> Result<MarketParams, ModelError> {
        let zeta = self.f64_or("zeta", 1.05)?;
        let zeta_u = self.f64_or("zeta_u", 1.02)?;
        MarketParams::new(
            self.f64_or("alpha", 0.1)?,
            zeta,
            zeta_u,
            self.shock_weight("psi", zeta)?,
            self.shock_weight("psi_u", zeta_u)?,
            self.f64_or("f", 0.003)?,
            self.f64_or("pi", 1.0)?,
            self.f64_or("p", 1.0)?,
            self.f64_or("e_p", 1.0)?,
            self.usize_or("n_passive", 4)? as u32,
        )
    }

    pub fn competition(&self) -> Result<CompetitionParams, ModelError> {
        CompetitionParams::new(self.market()?, self.f64_or("e_j", 3.0)?, self.lambda()?)
    }

    pub fn pool(&self) -> Result<PoolParams, ModelError> {
        let market = self.market()?;
        PoolParams::new(
            market.price,
            self.f64_or("a", 0.0)?,
            self.f64_or("b", f64::INFINITY)?,
            market.fee_rate,
        )
    }

    pub fn scenario(&self) -> Result<Scenario, ModelError> {
        Scenario::from_tag(self.raw("scenario").unwrap_or("US"))
    }

    /// `d_P` for threshold/cournot evaluations, defaulting to `e_P`.
    pub fn d_p(&self) -> Result<f64, ModelError> {
        self.f64_or("d_p", self.f64_or("e_p", 1.0)?)
    }

    /// Echo of the resolved inputs for report headers.
    pub fn echo(&self) -> BTreeMap<String, String> {
        self.values.clone()
    }
}
