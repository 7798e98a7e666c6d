//! `jitliq` — command-line front end for the JIT liquidity equilibrium
//! engine: single-point solves, threshold and fee-design reports,
//! parameter sweeps, game traces, and the verification suite.
//!
//! Exit codes: 0 success, 1 configuration/validation error, 2 model
//! nonexistence, 3 verification failure.

mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::ParamBag;
use jit_liquidity::{
    cournot_outcome, fee_design_report, run_sweep, run_verification, simulate_game,
    solve_equilibrium, threshold_report, GameStrategies, GridSpec, ModelError, SweepAxis,
    SweepMode, SweepRow, SweepSpec, SweepStatus, SwapOrder,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_NO_EQUILIBRIUM: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "jitliq",
    version,
    about = "Equilibrium engine for just-in-time liquidity on constant-product AMMs",
    after_help = "Configuration is a flat key = value schema, read from --config and/or \
                  repeated --set flags (flags win). Common keys: mode (baseline | two_tier | \
                  cournot | cournot_two_tier), alpha, zeta, zeta_u, psi, psi_u (number or \
                  'martingale'), f, pi, p, e_p, n_passive, lambda, e_j, d_p."
)]
struct Cli {
    /// Config file with one `key = value` per line (# comments allowed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a single configuration key; repeatable, wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweep/verification evaluation (default: all
    /// cores). Output is deterministic for any value.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the equilibrium at one parameter point (JSON report).
    Equilibrium,
    /// Existence, crowding, and freeze-prevention thresholds (JSON).
    Thresholds,
    /// Two-tiered fee design: U(λ), W(λ), λ*, ζ̂ (JSON).
    FeeDesign,
    /// Evaluate a target over a 1-D or 2-D parameter grid (CSV).
    Sweep,
    /// Replay one game period by period (JSON lines).
    Simulate,
    /// Run the brute-force verification suite (JSON; exit 3 on failure).
    Verify {
        /// Seed for the random parameter draws.
        #[arg(long, default_value_t = 20240101)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore the error if a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, ModelError> {
    let bag = ParamBag::load(cli.config.as_deref(), &cli.set)?;
    match &cli.command {
        Command::Equilibrium => cmd_equilibrium(cli, &bag),
        Command::Thresholds => cmd_thresholds(cli, &bag),
        Command::FeeDesign => cmd_fee_design(cli, &bag),
        Command::Sweep => cmd_sweep(cli, &bag),
        Command::Simulate => cmd_simulate(cli, &bag),
        Command::Verify { seed } => cmd_verify(cli, &bag, *seed),
    }
}

fn write_output(cli: &Cli, payload: &str) -> Result<(), ModelError> {
    match &cli.out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| ModelError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .map_err(|e| ModelError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    s.push('\n');
    s
}

fn cmd_equilibrium(cli: &Cli, bag: &ParamBag) -> Result<u8, ModelError> {
    bag.ensure_known(&[])?;
    let mode = bag.mode()?;
    let lambda = bag.lambda()?;
    let (payload, exists) = match mode {
        SweepMode::Baseline | SweepMode::TwoTier => {
            let market = bag.market()?;
            let outcome = solve_equilibrium(&market, lambda)?;
            let exists = outcome.exists;
            (
                json!({
                    "mode": mode,
                    "lambda": lambda,
                    "input": bag.echo(),
                    "outcome": outcome,
                }),
                exists,
            )
        }
        SweepMode::Cournot | SweepMode::CournotTwoTier => {
            let params = bag.competition()?;
            let outcome = cournot_outcome(&params, bag.d_p()?)?;
            let exists = outcome.exists;
            (
                json!({
                    "mode": mode,
                    "lambda": lambda,
                    "input": bag.echo(),
                    "outcome": outcome,
                }),
                exists,
            )
        }
    };
    write_output(cli, &to_pretty(&payload))?;
    Ok(if exists { 0 } else { EXIT_NO_EQUILIBRIUM })
}

fn cmd_thresholds(cli: &Cli, bag: &ParamBag) -> Result<u8, ModelError> {
    bag.ensure_known(config::THRESHOLD_KEYS)?;
    let market = bag.market()?;
    let mode = bag.mode()?;
    let competition = match mode {
        SweepMode::Cournot | SweepMode::CournotTwoTier => Some(bag.competition()?),
        _ => None,
    };
    let band = match (bag.f64("zeta_band_lo")?, bag.f64("zeta_band_hi")?) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (None, None) => None,
        _ => {
            return Err(ModelError::Config(
                "zeta_band_lo and zeta_band_hi must be given together".into(),
            ))
        }
    };
    let report = threshold_report(&market, competition.as_ref(), bag.d_p()?, band)?;
    let payload = json!({
        "mode": mode,
        "input": bag.echo(),
        "report": report,
    });
    write_output(cli, &to_pretty(&payload))?;
    Ok(0)
}

fn cmd_fee_design(cli: &Cli, bag: &ParamBag) -> Result<u8, ModelError> {
    bag.ensure_known(config::FEE_DESIGN_KEYS)?;
    let market = bag.market()?;
    let grid = bag.usize_or("lambda_grid", 101)?;
    let unconditional = bag.bool_or("welfare_unconditional", false)?;
    let report = fee_design_report(&market, grid, unconditional)?;
    let payload = json!({
        "input": bag.echo(),
        "welfare_unconditional": unconditional,
        "report": report,
    });
    write_output(cli, &to_pretty(&payload))?;
    Ok(0)
}

/// CSV schema: `axis1,axis2,target,value,status` with 17-significant-digit
/// floats, '.' decimal separator, and LF line endings.
fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("axis1,axis2,target,value,status\n");
    for row in rows {
        let axis2 = row.axis2.map(fmt_float).unwrap_or_default();
        let value = row.value.map(fmt_float).unwrap_or_default();
        let status = match row.status {
            SweepStatus::Ok => "ok",
            SweepStatus::NoEquilibrium => "no_equilibrium",
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(row.axis1),
            axis2,
            row.target,
            value,
            status
        ));
    }
    out
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_sweep(cli: &Cli, bag: &ParamBag) -> Result<u8, ModelError> {
    bag.ensure_known(config::SWEEP_KEYS)?;
    let target = bag
        .raw("target")
        .ok_or_else(|| ModelError::Config("sweep needs a 'target' key".into()))?
        .to_string();
    let axis = |name: &str, required: bool| -> Result<Option<SweepAxis>, ModelError> {
        match bag.raw(name) {
            Some(param) => Ok(Some(SweepAxis {
                param: param.to_string(),
                lo: bag.f64_or(&format!("{name}_lo"), 0.0)?,
                hi: bag.f64_or(&format!("{name}_hi"), 1.0)?,
                n: bag.usize_or(&format!("{name}_n"), 101)?,
            })),
            None if required => Err(ModelError::Config(format!("sweep needs an '{name}' key"))),
            None => Ok(None),
        }
    };
    let axis1 = axis("axis1", true)?.expect("required axis");
    let axis2 = axis("axis2", false)?;

    // the fixed set is exactly what the user pinned; engine defaults fill
    // the rest (psi/psi_u track the swept zeta unless pinned numerically,
    // so the literal 'martingale' stays unpinned)
    let mut fixed = std::collections::BTreeMap::new();
    for key in config::MARKET_KEYS {
        if *key == "mode" {
            continue;
        }
        if (*key == "psi" || *key == "psi_u") && bag.raw(key) == Some("martingale") {
            continue;
        }
        if let Some(v) = bag.f64(key)? {
            fixed.insert(key.to_string(), v);
        }
    }
    let spec = SweepSpec { target, axis1, axis2, fixed, mode: bag.mode()? };
    let rows = run_sweep(&spec)?;
    write_output(cli, &sweep_csv(&rows))?;
    Ok(0)
}

fn cmd_simulate(cli: &Cli, bag: &ParamBag) -> Result<u8, ModelError> {
    bag.ensure_known(config::SIMULATE_KEYS)?;
    let market = bag.market()?;
    let pool = bag.pool()?;
    let mode = bag.mode()?;
    let lambda = bag.lambda()?;
    let scenario = bag.scenario()?;
    let arrivals = bag.usize_or("jit_arrivals", 0)?;
    if arrivals > 2 {
        return Err(ModelError::Config(format!("jit_arrivals must be 0, 1, or 2, got {arrivals}")));
    }
    let competitive = matches!(mode, SweepMode::Cournot | SweepMode::CournotTwoTier);
    let d_p = bag.d_p()?;

    // equilibrium-derived defaults for any strategy piece not pinned
    let needs_equilibrium =
        (bag.raw("q_r").is_none() && bag.raw("q_s").is_none()) || (arrivals > 0 && bag.raw("d_j").is_none());
    let multiples = if needs_equilibrium {
        let (exists, mu_i, mu, nu) = if competitive {
            let out = cournot_outcome(&bag.competition()?, d_p)?;
            (out.exists, out.informed_multiple, out.mu_c, out.nu_c)
        } else {
            let eq = solve_equilibrium(&market, lambda)?;
            (eq.exists, eq.informed_multiple, eq.uninformed_multiple, eq.jit_multiple)
        };
        if !exists {
            eprintln!(
                "no non-trivial equilibrium at these parameters; supply q_r/q_s and d_j explicitly"
            );
            return Ok(EXIT_NO_EQUILIBRIUM);
        }
        Some((mu_i, mu, nu))
    } else {
        None
    };

    let swap = match (bag.f64("q_r")?, bag.f64("q_s")?) {
        (Some(q_r), None) => SwapOrder::sell_risky(q_r),
        (None, Some(q_s)) => SwapOrder::buy_risky(q_s),
        (Some(_), Some(_)) => {
            return Err(ModelError::Config("give at most one of q_r and q_s".into()))
        }
        (None, None) => {
            let (mu_i, mu, _) = multiples.expect("equilibrium solved above");
            let mult = if scenario.is_informed() { mu_i } else { mu };
            if scenario.is_sell() {
                SwapOrder::sell_risky(mult * d_p)
            } else {
                SwapOrder::buy_risky(mult * market.price * d_p)
            }
        }
    };

    let jit_deposits: Vec<f64> = match bag.raw("d_j") {
        Some(list) => {
            let parsed: Result<Vec<f64>, _> = list.split(',').map(|v| v.trim().parse::<f64>()).collect();
            let parsed = parsed
                .map_err(|_| ModelError::Config(format!("d_j: expected comma-separated numbers, got '{list}'")))?;
            match (parsed.len(), arrivals) {
                (n, a) if n == a => parsed,
                (1, a) => vec![parsed[0]; a],
                (n, a) => {
                    return Err(ModelError::Config(format!(
                        "d_j has {n} entries but jit_arrivals = {a}"
                    )))
                }
            }
        }
        None => {
            if arrivals == 0 {
                vec![]
            } else if scenario.is_informed() {
                vec![0.0; arrivals]
            } else if arrivals == 2 && competitive {
                vec![bag.f64_or("e_j", 3.0)?; 2]
            } else {
                let (_, _, nu) = multiples.expect("equilibrium solved above");
                vec![nu * d_p; arrivals]
            }
        }
    };

    let strategies = GameStrategies { passive_deposit: d_p, jit_deposits, swap };
    let endowment = if competitive { Some(bag.f64_or("e_j", 3.0)?) } else { None };
    let run = simulate_game(&pool, &market, lambda, scenario, &strategies, endowment)?;

    let mut lines = String::new();
    for row in &run.trace {
        lines.push_str(&serde_json::to_string(row).expect("trace row serialization cannot fail"));
        lines.push('\n');
    }
    write_output(cli, &lines)?;
    // payoffs are a byproduct of the trace command; keep them visible but
    // out of the JSONL stream
    eprintln!(
        "{}",
        serde_json::to_string(&run.payoffs).expect("payoff serialization cannot fail")
    );
    Ok(0)
}

fn cmd_verify(cli: &Cli, bag: &ParamBag, seed: u64) -> Result<u8, ModelError> {
    bag.ensure_known(config::VERIFY_KEYS)?;
    let draws = bag.usize_or("draws", 20)?;
    let grid = GridSpec {
        n: bag.usize_or("grid_n", 4001)?,
        refine_rounds: bag.usize_or("refine_rounds", 3)?,
        ..GridSpec::default()
    };
    let report = run_verification(seed, draws, &grid)?;
    let payload = json!({
        "input": bag.echo(),
        "draws": draws,
        "report": report,
    });
    write_output(cli, &to_pretty(&payload))?;
    Ok(if report.pass { 0 } else { EXIT_VERIFY_FAILED })
}
