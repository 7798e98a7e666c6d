//! Bracketed bisection on monotone scalar functions.
//!
//! Every first-order condition in this crate is strictly monotone in the
//! unknown, so unconditionally convergent bisection with bracket expansion
//! is the entire root-finding story. Defaults follow the solver contract
//! used throughout: initial bracket `[1e-12, 1]`, doubling expansion,
//! absolute x-tolerance `1e-13`, 200 iterations.

use crate::error::ModelError;

/// Default absolute tolerance on the root location.
pub const DEFAULT_XTOL: f64 = 1e-13;
/// Default iteration cap for the bisection loop.
pub const DEFAULT_MAX_ITER: u32 = 200;

/// Converged root with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub root: f64,
    /// `|f(root) - target|` at the returned root.
    pub residual: f64,
    pub iterations: u32,
    /// Final bracket `[lo, hi]` containing the root.
    pub bracket: (f64, f64),
}

/// Solve `f(x) = target` for a strictly decreasing `f`.
///
/// Starts from `[lo, hi0]` and doubles `hi` until `f(hi) < target`.
pub fn solve_decreasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    hi0: f64,
    xtol: f64,
    max_iter: u32,
) -> Result<RootResult, ModelError> {
    let flo = f(lo);
    if !flo.is_finite() || flo < target {
        return Err(ModelError::Solver(format!(
            "lower bracket invalid: f({lo}) = {flo} < target {target}"
        )));
    }
    let mut hi = hi0;
    let mut expansions = 0;
    while f(hi) >= target {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(ModelError::Solver(format!(
                "bracket expansion failure: f({hi}) never fell below target {target}"
            )));
        }
    }
    bisect(f, target, lo, hi, xtol, max_iter, true)
}

/// Solve `f(x) = target` for a strictly increasing `f`.
///
/// Starts from `[lo, hi0]` and doubles `hi` until `f(hi) > target`.
pub fn solve_increasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    hi0: f64,
    xtol: f64,
    max_iter: u32,
) -> Result<RootResult, ModelError> {
    let flo = f(lo);
    if !flo.is_finite() || flo > target {
        return Err(ModelError::Solver(format!(
            "lower bracket invalid: f({lo}) = {flo} > target {target}"
        )));
    }
    let mut hi = hi0;
    let mut expansions = 0;
    while f(hi) <= target {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(ModelError::Solver(format!(
                "bracket expansion failure: f({hi}) never rose above target {target}"
            )));
        }
    }
    bisect(f, target, lo, hi, xtol, max_iter, false)
}

fn bisect(
    f: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: u32,
    decreasing: bool,
) -> Result<RootResult, ModelError> {
    let mut iterations = 0;
    while hi - lo > xtol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(ModelError::Solver(format!("f({mid}) is not finite")));
        }
        let above = fm > target;
        if above == decreasing {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let root = 0.5 * (lo + hi);
    Ok(RootResult {
        root,
        residual: (f(root) - target).abs(),
        iterations,
        bracket: (lo, hi),
    })
}
