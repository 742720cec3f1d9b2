use serde::{Deserialize, Serialize};

use super::numeric::bisect;
use super::{bound_value, check_theta, BoundParams, BoundValue, TheoremTag};
use crate::error::{Error, Result};

/// Binary information divergence `𝔇(a‖b) = a log(a/b) + (1−a) log((1−a)/(1−b))`
/// for `a, b ∈ (0, 1)`.
pub fn binary_divergence(a: f64, b: f64) -> Result<f64> {
    let open = |x: f64| x > 0.0 && x < 1.0;
    if !open(a) || !open(b) {
        return Err(Error::Domain(format!(
            "binary divergence needs a, b in (0, 1), got ({a}, {b})"
        )));
    }
    Ok(divergence_closed(a, b).max(0.0))
}

// Continuous extension to a ∈ [0, 1], b ∈ [0, 1] using 0 log 0 = 0.
fn divergence_closed(a: f64, b: f64) -> f64 {
    let term = |x: f64, y: f64| {
        if x == 0.0 {
            0.0
        } else if y == 0.0 {
            f64::INFINITY
        } else {
            x * (x / y).ln()
        }
    };
    term(a, b) + term(1.0 - a, 1.0 - b)
}

fn chernoff_i(tag: TheoremTag, p: &BoundParams, theta: f64, mu_bar: f64, lo: f64, hi: f64) -> Result<BoundValue> {
    p.validate()?;
    if !(0.0..=1.0).contains(&mu_bar) {
        return Err(Error::Domain(format!("averaged mean {mu_bar} outside [0, 1]")));
    }
    if !(lo..=hi).contains(&theta) {
        return Err(Error::Domain(format!("{tag}: theta = {theta} outside [{lo}, {hi}]")));
    }
    let d = if theta == mu_bar {
        0.0
    } else {
        divergence_closed(theta, mu_bar)
    };
    let value = p.dim() * (-(p.n as f64) * d).exp();
    Ok(bound_value(tag, p, theta, value))
}

/// `𝕀 e^{−n𝔇(θ‖μ̄_max)}` for `P(λ_max(Σ𝒳ᵢ) ≥ nθ)`, `μ̄_max ≤ θ ≤ 1`, with
/// summands normalized to `T = 1`.
pub fn chernoff_i_upper(p: &BoundParams, theta: f64) -> Result<BoundValue> {
    chernoff_i(TheoremTag::Chernoff1Upper, p, theta, p.mu_bar_max, p.mu_bar_max, 1.0)
}

/// `𝕀 e^{−n𝔇(θ‖μ̄_min)}` for `P(λ_min(Σ𝒳ᵢ) ≤ nθ)`, `0 ≤ θ ≤ μ̄_min`.
pub fn chernoff_i_lower(p: &BoundParams, theta: f64) -> Result<BoundValue> {
    chernoff_i(TheoremTag::Chernoff1Lower, p, theta, p.mu_bar_min, 0.0, p.mu_bar_min)
}

/// `𝕀 (e^θ/(1+θ)^{1+θ})^{μ_max/T}` for `P(λ_max ≥ (1+θ)μ_max)`.
pub fn chernoff_ii_upper(p: &BoundParams, theta: f64) -> Result<BoundValue> {
    p.validate()?;
    check_theta(theta)?;
    if p.mu_max < 0.0 {
        return Err(Error::Domain(format!("mu_max = {} must be nonnegative", p.mu_max)));
    }
    let exponent = (p.mu_max / p.t_bound) * (theta - (1.0 + theta) * theta.ln_1p());
    Ok(bound_value(
        TheoremTag::Chernoff2Upper,
        p,
        theta,
        p.dim() * exponent.exp(),
    ))
}

/// `𝕀 (e^{−θ}/(1−θ)^{1−θ})^{μ_min/T}` for `P(λ_min ≤ (1−θ)μ_min)`, `θ ∈ [0, 1]`.
pub fn chernoff_ii_lower(p: &BoundParams, theta: f64) -> Result<BoundValue> {
    p.validate()?;
    check_theta(theta)?;
    if theta > 1.0 {
        return Err(Error::Domain(format!("chernoff2-lower: theta = {theta} exceeds 1")));
    }
    if p.mu_min < 0.0 {
        return Err(Error::Domain(format!("mu_min = {} must be nonnegative", p.mu_min)));
    }
    let rest = 1.0 - theta;
    let rest_log_rest = if rest == 0.0 { 0.0 } else { rest * rest.ln() };
    let exponent = (p.mu_min / p.t_bound) * (-theta - rest_log_rest);
    Ok(bound_value(
        TheoremTag::Chernoff2Lower,
        p,
        theta,
        p.dim() * exponent.exp(),
    ))
}

/// The optimizing `δ*` of `e^{e^δ}/δ` and the resulting constant `C`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffConstant {
    pub delta_star: f64,
    pub c: f64,
}

/// Solves `e^δ = 1/δ` by bisection on `(0.1, 1)` and evaluates
/// `C = e^{e^{δ*}}/δ*`.
pub fn chernoff_constant() -> ChernoffConstant {
    let delta_star = bisect(|d| d.exp() - 1.0 / d, 0.1, 1.0, 1e-15).expect("sign change on (0.1, 1)");
    ChernoffConstant {
        delta_star,
        c: delta_star.exp().exp() / delta_star,
    }
}

/// `(μ_max, C 𝕀 e^{−μ_max/T})` as stated for the expected maximum
/// eigenvalue of a sum of bounded PSD tensors.
pub fn chernoff_expectation_bounds(p: &BoundParams) -> Result<(f64, f64)> {
    p.validate()?;
    if p.mu_max < 0.0 {
        return Err(Error::Domain(format!("mu_max = {} must be nonnegative", p.mu_max)));
    }
    let c = chernoff_constant().c;
    Ok((p.mu_max, c * p.dim() * (-p.mu_max / p.t_bound).exp()))
}
