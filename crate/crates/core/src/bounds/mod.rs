//! Closed-form tail and expectation bounds for sums of random Hermitian
//! tensors, plus a numeric master bound for user-supplied log-MGF envelopes.
//!
//! Every evaluator returns the raw right-hand side. Values above 1 are kept
//! as is; clamping only happens when rendering reports.

mod bernstein;
mod chernoff;
mod master;
pub mod numeric;
mod series;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bernstein::{bernstein_bounded, bernstein_subexponential, subexp_expectation_upper};
pub use chernoff::{
    binary_divergence, chernoff_constant, chernoff_expectation_bounds, chernoff_i_lower, chernoff_i_upper,
    chernoff_ii_lower, chernoff_ii_upper, ChernoffConstant,
};
pub use master::{default_t_grid, master_bound_numeric, T_GRID_MAX, T_GRID_MIN, T_GRID_POINTS};
pub use series::{
    azuma_mcdiarmid_bound, expectation_norm_sandwich, gaussian_series_bound, hadamard_series_params,
    nonuniform_gaussian_sigma, rectangular_series_params,
};

/// Hypothesis statistics consumed by the bound formulas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// `𝕀₁ᴹ`, the product of the square mode sizes (or of `I_m + J_m` after
    /// dilation).
    pub dim_product: u64,
    pub sigma_sq: f64,
    #[serde(rename = "T")]
    pub t_bound: f64,
    pub n: usize,
    pub mu_max: f64,
    pub mu_min: f64,
    pub mu_bar_max: f64,
    pub mu_bar_min: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            dim_product: 1,
            sigma_sq: 0.0,
            t_bound: 1.0,
            n: 1,
            mu_max: 0.0,
            mu_min: 0.0,
            mu_bar_max: 0.0,
            mu_bar_min: 0.0,
        }
    }
}

impl BoundParams {
    pub fn new(dim_product: u64) -> Self {
        Self {
            dim_product,
            ..Self::default()
        }
    }

    /// Product of the given mode sizes.
    pub fn from_dims(dims: &[usize]) -> Self {
        Self::new(dims.iter().map(|&d| d as u64).product())
    }

    pub fn with_sigma_sq(mut self, sigma_sq: f64) -> Self {
        self.sigma_sq = sigma_sq;
        self
    }

    pub fn with_t(mut self, t_bound: f64) -> Self {
        self.t_bound = t_bound;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_mu(mut self, mu_min: f64, mu_max: f64) -> Self {
        self.mu_min = mu_min;
        self.mu_max = mu_max;
        self
    }

    pub fn with_mu_bar(mut self, mu_bar_min: f64, mu_bar_max: f64) -> Self {
        self.mu_bar_min = mu_bar_min;
        self.mu_bar_max = mu_bar_max;
        self
    }

    pub fn dim(&self) -> f64 {
        self.dim_product as f64
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.sigma_sq,
            self.t_bound,
            self.mu_max,
            self.mu_min,
            self.mu_bar_max,
            self.mu_bar_min,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("bound parameters must be finite".into()));
        }
        if self.dim_product == 0 || self.n == 0 {
            return Err(Error::Domain("dim_product and n must be positive".into()));
        }
        if self.sigma_sq < 0.0 {
            return Err(Error::Domain(format!("sigma_sq = {} is negative", self.sigma_sq)));
        }
        if self.t_bound <= 0.0 {
            return Err(Error::Domain(format!("T = {} must be positive", self.t_bound)));
        }
        if self.mu_min > self.mu_max {
            return Err(Error::Domain(format!(
                "mu_min {} > mu_max {}",
                self.mu_min, self.mu_max
            )));
        }
        if self.mu_bar_min > self.mu_bar_max {
            return Err(Error::Domain(format!(
                "mu_bar_min {} > mu_bar_max {}",
                self.mu_bar_min, self.mu_bar_max
            )));
        }
        Ok(())
    }
}

/// Identifies which theorem produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremTag {
    #[serde(rename = "gaussian")]
    Gaussian,
    #[serde(rename = "gaussian-norm")]
    GaussianNorm,
    #[serde(rename = "rectangular")]
    Rectangular,
    #[serde(rename = "chernoff1-upper")]
    Chernoff1Upper,
    #[serde(rename = "chernoff1-lower")]
    Chernoff1Lower,
    #[serde(rename = "chernoff2-upper")]
    Chernoff2Upper,
    #[serde(rename = "chernoff2-lower")]
    Chernoff2Lower,
    #[serde(rename = "bernstein")]
    Bernstein,
    #[serde(rename = "bernstein-small")]
    BernsteinSmall,
    #[serde(rename = "bernstein-large")]
    BernsteinLarge,
    #[serde(rename = "subexp")]
    Subexp,
    #[serde(rename = "subexp-small")]
    SubexpSmall,
    #[serde(rename = "subexp-large")]
    SubexpLarge,
    #[serde(rename = "azuma")]
    Azuma,
    #[serde(rename = "mcdiarmid")]
    McDiarmid,
    #[serde(rename = "hoeffding")]
    Hoeffding,
    #[serde(rename = "master")]
    Master,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 17] = [
        TheoremTag::Gaussian,
        TheoremTag::GaussianNorm,
        TheoremTag::Rectangular,
        TheoremTag::Chernoff1Upper,
        TheoremTag::Chernoff1Lower,
        TheoremTag::Chernoff2Upper,
        TheoremTag::Chernoff2Lower,
        TheoremTag::Bernstein,
        TheoremTag::BernsteinSmall,
        TheoremTag::BernsteinLarge,
        TheoremTag::Subexp,
        TheoremTag::SubexpSmall,
        TheoremTag::SubexpLarge,
        TheoremTag::Azuma,
        TheoremTag::McDiarmid,
        TheoremTag::Hoeffding,
        TheoremTag::Master,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::Gaussian => "gaussian",
            TheoremTag::GaussianNorm => "gaussian-norm",
            TheoremTag::Rectangular => "rectangular",
            TheoremTag::Chernoff1Upper => "chernoff1-upper",
            TheoremTag::Chernoff1Lower => "chernoff1-lower",
            TheoremTag::Chernoff2Upper => "chernoff2-upper",
            TheoremTag::Chernoff2Lower => "chernoff2-lower",
            TheoremTag::Bernstein => "bernstein",
            TheoremTag::BernsteinSmall => "bernstein-small",
            TheoremTag::BernsteinLarge => "bernstein-large",
            TheoremTag::Subexp => "subexp",
            TheoremTag::SubexpSmall => "subexp-small",
            TheoremTag::SubexpLarge => "subexp-large",
            TheoremTag::Azuma => "azuma",
            TheoremTag::McDiarmid => "mcdiarmid",
            TheoremTag::Hoeffding => "hoeffding",
            TheoremTag::Master => "master",
        }
    }

    /// Lower-tail theorems bound `P(λ_min ≤ ·)` rather than `P(λ_max ≥ ·)`.
    pub fn is_lower_tail(self) -> bool {
        matches!(self, TheoremTag::Chernoff1Lower | TheoremTag::Chernoff2Lower)
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown theorem `{s}`")))
    }
}

/// Which form of a Bernstein-type bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// The regime simplification selected by `θ` versus `σ²/T`.
    #[default]
    Auto,
    General,
    Small,
    Large,
}

/// A raw bound value with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub theorem: TheoremTag,
    pub params: BoundParams,
    pub theta: f64,
}

impl BoundValue {
    /// `min(value, 1)`, for presentation only.
    pub fn clamped(&self) -> f64 {
        self.value.min(1.0)
    }
}

/// Evaluates the tail bound named by `tag` at `theta`.
///
/// For the Chernoff I bounds `theta` is the averaged threshold in `[0, 1]`;
/// for Chernoff II it is the relative deviation. `Master` has no closed form
/// and is rejected here.
pub fn evaluate(tag: TheoremTag, p: &BoundParams, theta: f64) -> Result<BoundValue> {
    match tag {
        TheoremTag::Gaussian | TheoremTag::Rectangular => gaussian_series_bound(p, theta, false),
        TheoremTag::GaussianNorm => gaussian_series_bound(p, theta, true),
        TheoremTag::Chernoff1Upper => chernoff_i_upper(p, theta),
        TheoremTag::Chernoff1Lower => chernoff_i_lower(p, theta),
        TheoremTag::Chernoff2Upper => chernoff_ii_upper(p, theta),
        TheoremTag::Chernoff2Lower => chernoff_ii_lower(p, theta),
        TheoremTag::Bernstein => bernstein_bounded(p, theta, Regime::General),
        TheoremTag::BernsteinSmall => bernstein_bounded(p, theta, Regime::Small),
        TheoremTag::BernsteinLarge => bernstein_bounded(p, theta, Regime::Large),
        TheoremTag::Subexp => bernstein_subexponential(p, theta, Regime::General),
        TheoremTag::SubexpSmall => bernstein_subexponential(p, theta, Regime::Small),
        TheoremTag::SubexpLarge => bernstein_subexponential(p, theta, Regime::Large),
        TheoremTag::Azuma | TheoremTag::McDiarmid | TheoremTag::Hoeffding => {
            azuma_mcdiarmid_bound(p, theta).map(|b| BoundValue { theorem: tag, ..b })
        }
        TheoremTag::Master => Err(Error::Domain(
            "the master bound needs a log-MGF envelope; use master_bound_numeric".into(),
        )),
    }
}

/// Range of `theta` on which `tag` is defined for the given parameters, as
/// `(lo, hi)` with `hi` possibly infinite.
pub fn theta_range(tag: TheoremTag, p: &BoundParams) -> (f64, f64) {
    let regime_edge = if p.t_bound > 0.0 {
        p.sigma_sq / p.t_bound
    } else {
        f64::INFINITY
    };
    match tag {
        TheoremTag::Chernoff1Upper => (p.mu_bar_max, 1.0),
        TheoremTag::Chernoff1Lower => (0.0, p.mu_bar_min),
        TheoremTag::Chernoff2Lower => (0.0, 1.0),
        TheoremTag::BernsteinSmall | TheoremTag::SubexpSmall => (0.0, regime_edge),
        TheoremTag::BernsteinLarge | TheoremTag::SubexpLarge => (regime_edge, f64::INFINITY),
        _ => (0.0, f64::INFINITY),
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::Domain(format!("theta = {theta} must be finite and nonnegative")));
    }
    Ok(())
}

fn bound_value(tag: TheoremTag, p: &BoundParams, theta: f64, value: f64) -> BoundValue {
    BoundValue {
        value,
        theorem: tag,
        params: p.clone(),
        theta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tag_round_trip() {
        for tag in TheoremTag::ALL {
            assert_eq!(tag.as_str().parse::<TheoremTag>().unwrap(), tag);
            let json = serde_json::to_string(&tag).unwrap();
            assert_eq!(json, format!("\"{}\"", tag.as_str()));
        }
        assert!("bennett".parse::<TheoremTag>().is_err());
    }

    #[test]
    fn params_validation() {
        assert!(BoundParams::new(4).with_sigma_sq(1.0).validate().is_ok());
        assert!(BoundParams::new(4).with_mu(2.0, 1.0).validate().is_err());
        assert!(BoundParams::new(4).with_sigma_sq(-1.0).validate().is_err());
        assert!(BoundParams::new(4).with_t(0.0).validate().is_err());
        assert!(BoundParams::new(0).validate().is_err());
    }

    #[test]
    fn params_serialize_t_as_capital() {
        let json = serde_json::to_value(BoundParams::new(2).with_t(3.0)).unwrap();
        assert_eq!(json["T"], 3.0);
    }
}
