use super::numeric::gaussian_integral;
use super::{bound_value, check_theta, BoundParams, BoundValue, Regime, TheoremTag};
use crate::error::{Error, Result};

struct Forms {
    tags: [TheoremTag; 3],
    // exponent denominators: general θ²/2/(σ² + kTθ), small θ²/(s σ²), large θ/(l T)
    k: f64,
    s: f64,
    l: f64,
}

const BOUNDED: Forms = Forms {
    tags: [
        TheoremTag::Bernstein,
        TheoremTag::BernsteinSmall,
        TheoremTag::BernsteinLarge,
    ],
    k: 1.0 / 3.0,
    s: 8.0 / 3.0,
    l: 8.0 / 3.0,
};

const SUBEXP: Forms = Forms {
    tags: [TheoremTag::Subexp, TheoremTag::SubexpSmall, TheoremTag::SubexpLarge],
    k: 1.0,
    s: 4.0,
    l: 4.0,
};

fn evaluate(forms: &Forms, p: &BoundParams, theta: f64, regime: Regime) -> Result<BoundValue> {
    p.validate()?;
    check_theta(theta)?;
    let (sigma_sq, t) = (p.sigma_sq, p.t_bound);
    if sigma_sq == 0.0 && theta > 0.0 {
        return Err(Error::Degenerate("sigma_sq = 0 with theta > 0".into()));
    }
    let edge = sigma_sq / t;
    let general = || {
        if theta == 0.0 {
            p.dim()
        } else {
            p.dim() * (-0.5 * theta * theta / (sigma_sq + forms.k * t * theta)).exp()
        }
    };
    let small = || p.dim() * (-theta * theta / (forms.s * sigma_sq)).exp();
    let large = || p.dim() * (-theta / (forms.l * t)).exp();
    let (tag, value) = match regime {
        Regime::General => (forms.tags[0], general()),
        Regime::Small if theta <= edge => (forms.tags[1], small()),
        Regime::Large if theta >= edge => (forms.tags[2], large()),
        Regime::Small | Regime::Large => {
            return Err(Error::RegimeMismatch(format!(
                "theta = {theta} is on the other side of sigma^2/T = {edge}"
            )))
        }
        Regime::Auto => {
            let picked = if theta <= edge {
                (forms.tags[1], small())
            } else {
                (forms.tags[2], large())
            };
            debug_assert!(general() <= picked.1 * (1.0 + 1e-12));
            picked
        }
    };
    Ok(bound_value(tag, p, theta, value))
}

/// Bernstein bound for centered summands with `λ_max(𝒳ᵢ) ≤ T`:
/// `𝕀 exp(−(θ²/2)/(σ² + Tθ/3))` in general, `𝕀 e^{−3θ²/(8σ²)}` for
/// `θ ≤ σ²/T` and `𝕀 e^{−3θ/(8T)}` for `θ ≥ σ²/T`.
pub fn bernstein_bounded(p: &BoundParams, theta: f64, regime: Regime) -> Result<BoundValue> {
    evaluate(&BOUNDED, p, theta, regime)
}

/// Bernstein bound under the subexponential moment condition
/// `E 𝒳ᵢᵖ ⪯ p!/2 · Tᵖ⁻² 𝒜ᵢ²`: `𝕀 exp(−(θ²/2)/(σ² + Tθ))` in general,
/// `𝕀 e^{−θ²/(4σ²)}` and `𝕀 e^{−θ/(4T)}` in the two regimes.
pub fn bernstein_subexponential(p: &BoundParams, theta: f64, regime: Regime) -> Result<BoundValue> {
    evaluate(&SUBEXP, p, theta, regime)
}

/// `2𝕀(σ𝔊(σ/(2T)) + 2T e^{−σ²/(4T²)})`, an upper bound on
/// `E λ_max(Σ𝒳ᵢ)` in the subexponential setting.
pub fn subexp_expectation_upper(p: &BoundParams) -> Result<f64> {
    p.validate()?;
    let sigma = p.sigma_sq.sqrt();
    let t = p.t_bound;
    Ok(2.0 * p.dim() * (sigma * gaussian_integral(sigma / (2.0 * t)) + 2.0 * t * (-p.sigma_sq / (4.0 * t * t)).exp()))
}
