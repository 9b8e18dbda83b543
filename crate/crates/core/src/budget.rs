//! Exact bookkeeping for the global-well-posedness iteration: regularity
//! thresholds, the scaling parameter, subinterval counts, the cutoff/horizon
//! feasibility condition, and the polynomial growth exponent.
//!
//! Thresholds and exponents are exact rationals; only the horizon arithmetic
//! (powers of `T`, the ceiling for the subinterval count, the dyadic search
//! for the minimal cutoff) runs in floating point.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::grid::is_dyadic;

pub fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// The regularity threshold `γ(d) = max{3 − 8/d, 8/d, 8(d−4)/(3d−8)}`:
/// `8/5`, `5/3`, `13/7` for `d = 5, 6, 7`.
pub fn gamma_threshold(d: usize) -> Result<Rational64> {
    if !(5..=7).contains(&d) {
        return Err(Error::BudgetDimension(d));
    }
    let di = d as i64;
    let candidates = [
        rat(3, 1) - rat(8, di),
        rat(8, di),
        rat(8 * (di - 4), 3 * di - 8),
    ];
    Ok(candidates.into_iter().max().unwrap())
}

/// The scaling parameter `λ ≈ N^{(2−γ)/γ}`, plus its dyadic rounding.
#[derive(Debug, Clone, Copy)]
pub struct Lambda {
    pub exact: f64,
    /// Nearest power of two (ties round up).
    pub dyadic: f64,
}

/// `λ = N^{(2−γ)/γ}` for dyadic `N ≥ 1` and `γ ∈ (0, 2)`. The exponent is
/// formed in exact rational arithmetic so that e.g. `512^{1/9}` comes out as
/// exactly 2.
pub fn choose_lambda(n: f64, gamma: Rational64) -> Result<Lambda> {
    if !(n >= 1.0) || !is_dyadic(n) {
        return Err(Error::InvalidBudgetInput(format!(
            "N = {n} must be a dyadic value >= 1"
        )));
    }
    if !(gamma > rat(0, 1) && gamma < rat(2, 1)) {
        return Err(Error::InvalidBudgetInput(format!(
            "gamma = {gamma} outside (0, 2)"
        )));
    }
    let j = n.log2().round() as i64;
    let exponent = (rat(2, 1) - gamma) / gamma * rat(j, 1);
    let exact = ratio_to_f64(exponent).exp2();
    let k = (exact.log2() + 0.5).floor();
    Ok(Lambda {
        exact,
        dyadic: k.exp2(),
    })
}

/// `L = ⌈(2K T₀^{(d−4)/(8(d−3))} / μ)^{8(d−3)/d}⌉`, the number of subintervals
/// on which the space-time norm stays below `μ`.
pub fn subinterval_count(t0: f64, k_const: f64, mu: f64, d: usize) -> Result<u64> {
    if !(5..=7).contains(&d) {
        return Err(Error::BudgetDimension(d));
    }
    if !(t0 > 0.0) || !(k_const > 0.0) || !(mu > 0.0) {
        return Err(Error::InvalidBudgetInput(
            "T0, K and mu must be positive".into(),
        ));
    }
    let df = d as f64;
    let base = 2.0 * k_const * t0.powf((df - 4.0) / (8.0 * (df - 3.0))) / mu;
    let l = base.powf(8.0 * (df - 3.0) / df).ceil();
    if !l.is_finite() || l >= 9.22e18 {
        return Err(Error::InvalidBudgetInput(format!(
            "subinterval count {l:e} overflows"
        )));
    }
    Ok(l as u64)
}

/// Outcome of the feasibility inequality `4(2−γ)(d−4)/(γd) < 2−γ+δ`, with
/// both sides reported exactly.
#[derive(Debug, Clone)]
pub struct ConditionVerdict {
    pub pass: bool,
    pub lhs: Rational64,
    pub rhs: Rational64,
    pub reason: Option<String>,
}

/// Check the global condition for `γ ∈ (max{3−8/d, 8/d}, 2)` and
/// `δ ∈ (0, γ+8/d−3)`. Invalid ranges yield a false verdict with a reason,
/// not an error.
pub fn check_global_condition(
    gamma: Rational64,
    delta: Rational64,
    d: usize,
) -> Result<ConditionVerdict> {
    if !(5..=7).contains(&d) {
        return Err(Error::BudgetDimension(d));
    }
    let di = d as i64;
    let two = rat(2, 1);
    let lhs = rat(4, 1) * (two - gamma) * rat(di - 4, 1) / (gamma * rat(di, 1));
    let rhs = two - gamma + delta;
    let fail = |reason: String| ConditionVerdict {
        pass: false,
        lhs,
        rhs,
        reason: Some(reason),
    };

    if gamma >= two {
        return Ok(fail(format!("gamma = {gamma} must be < 2")));
    }
    let delta_upper = gamma + rat(8, di) - rat(3, 1);
    if delta_upper <= rat(0, 1) {
        return Ok(fail(format!(
            "admissible delta range (0, {delta_upper}) is empty; needs gamma > {}",
            rat(3, 1) - rat(8, di)
        )));
    }
    if !(delta > rat(0, 1) && delta < delta_upper) {
        return Ok(fail(format!(
            "delta = {delta} outside (0, {delta_upper})"
        )));
    }
    let gamma_lower = std::cmp::max(rat(3, 1) - rat(8, di), rat(8, di));
    if gamma <= gamma_lower {
        return Ok(fail(format!(
            "gamma = {gamma} must exceed max(3-8/d, 8/d) = {gamma_lower}"
        )));
    }
    if lhs < rhs {
        Ok(ConditionVerdict {
            pass: true,
            lhs,
            rhs,
            reason: None,
        })
    } else {
        Ok(fail(format!("{lhs} >= {rhs}")))
    }
}

/// Inputs of the full bookkeeping pass.
#[derive(Debug, Clone)]
pub struct BudgetInput {
    pub dimension: usize,
    pub gamma: Rational64,
    pub delta: Rational64,
    /// Original time horizon `T`.
    pub t_horizon: f64,
    /// The claim constant `K`.
    pub k_const: f64,
    /// Smallness constant for the per-interval space-time norm.
    pub mu: f64,
    /// Margin factor quantifying `≪`: the smallness requirement is
    /// `N^{-e'} L ≤ c/4`.
    pub smallness: f64,
}

impl BudgetInput {
    pub fn new(dimension: usize, gamma: Rational64, delta: Rational64, t_horizon: f64) -> Self {
        BudgetInput {
            dimension,
            gamma,
            delta,
            t_horizon,
            k_const: 1.0,
            mu: 0.1,
            smallness: 0.01,
        }
    }
}

/// Derived bookkeeping quantities.
#[derive(Debug, Clone)]
pub struct BudgetReport {
    pub threshold: Rational64,
    /// `e = (2−γ+δ) − 4(2−γ)(d−4)/(γd)`, the net decay exponent.
    pub decay_exponent: Rational64,
    /// Growth exponent `α(γ, d) = (2−γ)(d−4)/(d e)`.
    pub alpha: Rational64,
    /// Minimal dyadic `N` with `N^e ≥ (4/c) T^{(d−4)/d}`.
    pub min_n: f64,
    pub lambda: Lambda,
    /// Rescaled horizon `T₀ = λ⁴ T` (exact λ).
    pub t0: f64,
    pub subintervals: u64,
    pub condition: ConditionVerdict,
}

/// Solve for the minimal dyadic cutoff and the growth exponent.
pub fn solve_min_n_and_alpha(input: &BudgetInput) -> Result<BudgetReport> {
    let d = input.dimension;
    if !(5..=7).contains(&d) {
        return Err(Error::BudgetDimension(d));
    }
    if !(input.t_horizon > 0.0) || !(input.smallness > 0.0) || !(input.mu > 0.0 && input.mu < 1.0)
    {
        return Err(Error::InvalidBudgetInput(
            "T > 0, c > 0 and mu in (0,1) required".into(),
        ));
    }
    let condition = check_global_condition(input.gamma, input.delta, d)?;
    let decay_exponent = condition.rhs - condition.lhs;
    if decay_exponent <= rat(0, 1) {
        return Err(Error::NonPositiveDecayExponent(ratio_to_f64(
            decay_exponent,
        )));
    }
    if !condition.pass {
        return Err(Error::InvalidBudgetInput(
            condition.reason.unwrap_or_else(|| "condition fails".into()),
        ));
    }
    let di = d as i64;
    let e = ratio_to_f64(decay_exponent);
    let df = d as f64;
    let threshold_value = 4.0 / input.smallness * input.t_horizon.powf((df - 4.0) / df);

    // smallest j >= 0 with 2^{je} >= threshold, robust against the log rounding
    let mut j = (threshold_value.log2() / e).ceil().max(0.0) as i64;
    while j > 0 && ((j - 1) as f64 * e).exp2() >= threshold_value {
        j -= 1;
    }
    while ((j as f64) * e).exp2() < threshold_value {
        j += 1;
    }
    let min_n = (j as f64).exp2();

    let alpha = (rat(2, 1) - input.gamma) * rat(di - 4, di) / decay_exponent;
    let lambda = choose_lambda(min_n, input.gamma)?;
    let t0 = lambda.exact.powi(4) * input.t_horizon;
    let subintervals = subinterval_count(t0, input.k_const, input.mu, d)?;

    Ok(BudgetReport {
        threshold: gamma_threshold(d)?,
        decay_exponent,
        alpha,
        min_n,
        lambda,
        t0,
        subintervals,
        condition,
    })
}
