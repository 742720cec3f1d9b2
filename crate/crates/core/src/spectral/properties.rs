//! Trace and operator inequalities as numerically checkable predicates.
//!
//! Each function evaluates both sides of one inequality on concrete inputs;
//! the caller decides the slack.

use super::{
    eigenvalues, perspective_map, product, psd_compare, relative_entropy, tensor_exp, tensor_function, tensor_log,
    trace_exp, PsdVerdict, SpectralFn,
};
use crate::error::{Error, Result};
use crate::tensor::HermitianTensor;

/// Two sides of an inequality `lesser ≤ greater`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub lesser: f64,
    pub greater: f64,
}

impl InequalityCheck {
    pub fn gap(&self) -> f64 {
        self.greater - self.lesser
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.lesser <= self.greater + slack
    }
}

fn midpoint(a: &HermitianTensor, b: &HermitianTensor) -> Result<HermitianTensor> {
    a.add(b)?.scale(0.5)
}

/// Golden–Thompson: `Tr e^{X+Y} ≤ Tr(e^X ⋆ e^Y)`.
pub fn golden_thompson(x: &HermitianTensor, y: &HermitianTensor) -> Result<InequalityCheck> {
    let lesser = trace_exp(&x.add(y)?);
    let greater = product(&tensor_exp(x)?, &tensor_exp(y)?)?.trace()?.re;
    Ok(InequalityCheck { lesser, greater })
}

/// Klein form: `Tr X − Tr X log X + Tr X log Y ≤ Tr Y` for positive definite `X`, `Y`.
pub fn klein(x: &HermitianTensor, y: &HermitianTensor) -> Result<InequalityCheck> {
    let entropy = relative_entropy(x, y)?;
    Ok(InequalityCheck {
        lesser: x.trace_real() - entropy,
        greater: y.trace_real(),
    })
}

/// `g(t) = Tr exp(H + log(t A₁ + (1−t) A₂))`.
pub fn lieb_trace_function(h: &HermitianTensor, a1: &HermitianTensor, a2: &HermitianTensor, t: f64) -> Result<f64> {
    let mix = a1.scale(t)?.add(&a2.scale(1.0 - t)?)?;
    Ok(trace_exp(&h.add(&tensor_log(&mix)?)?))
}

/// Lieb concavity at the midpoint: `½g(0) + ½g(1) ≤ g(½)`.
pub fn lieb_midpoint(h: &HermitianTensor, a1: &HermitianTensor, a2: &HermitianTensor) -> Result<InequalityCheck> {
    let g0 = lieb_trace_function(h, a1, a2, 0.0)?;
    let g1 = lieb_trace_function(h, a1, a2, 1.0)?;
    let gm = lieb_trace_function(h, a1, a2, 0.5)?;
    Ok(InequalityCheck {
        lesser: 0.5 * (g0 + g1),
        greater: gm,
    })
}

/// Log monotonicity: for `X ⪰ Y ≻ 0`, checks `log X ⪰ log Y`.
pub fn log_monotone(x: &HermitianTensor, y: &HermitianTensor, tol: f64) -> Result<PsdVerdict> {
    let premise = psd_compare(x, y, tol)?;
    if !premise.holds {
        return Err(Error::Domain(format!(
            "log monotonicity needs X ⪰ Y (lambda_min(X - Y) = {:e})",
            premise.lambda_min_of_difference
        )));
    }
    psd_compare(&tensor_log(x)?, &tensor_log(y)?, tol)
}

/// Midpoint concavity of log: `½ log X₁ + ½ log X₂ ⪯ log(½X₁ + ½X₂)`.
pub fn log_midpoint_concavity(x1: &HermitianTensor, x2: &HermitianTensor, tol: f64) -> Result<PsdVerdict> {
    let lhs = midpoint(&tensor_log(x1)?, &tensor_log(x2)?)?;
    let rhs = tensor_log(&midpoint(x1, x2)?)?;
    psd_compare(&rhs, &lhs, tol)
}

/// Joint convexity of relative entropy at the midpoint:
/// `D(½A₁+½A₂ ‖ ½B₁+½B₂) ≤ ½D(A₁‖B₁) + ½D(A₂‖B₂)`.
pub fn entropy_joint_convexity(
    a1: &HermitianTensor,
    a2: &HermitianTensor,
    b1: &HermitianTensor,
    b2: &HermitianTensor,
) -> Result<InequalityCheck> {
    let lesser = relative_entropy(&midpoint(a1, a2)?, &midpoint(b1, b2)?)?;
    let greater = 0.5 * (relative_entropy(a1, b1)? + relative_entropy(a2, b2)?);
    Ok(InequalityCheck { lesser, greater })
}

/// Midpoint joint convexity of the perspective of `f` on commuting pairs:
/// `h(½X₁+½X₂, ½Y₁+½Y₂) ⪯ ½h(X₁,Y₁) + ½h(X₂,Y₂)`.
pub fn perspective_midpoint_convexity(
    x1: &HermitianTensor,
    y1: &HermitianTensor,
    x2: &HermitianTensor,
    y2: &HermitianTensor,
    f: &SpectralFn,
    tol: f64,
) -> Result<PsdVerdict> {
    let at_mid = perspective_map(&midpoint(x1, x2)?, &midpoint(y1, y2)?, f)?;
    let avg = midpoint(&perspective_map(x1, y1, f)?, &perspective_map(x2, y2, f)?)?;
    psd_compare(&avg, &at_mid, tol)
}

/// Largest per-eigenvalue deviation between `f(eig X)` and `eig f(X)`, both
/// sorted.
pub fn spectral_mapping_error(x: &HermitianTensor, f: &SpectralFn) -> Result<f64> {
    let mut mapped: Vec<f64> = eigenvalues(x).iter().map(|&l| f.eval(l)).collect();
    mapped.sort_by(|a, b| b.total_cmp(a));
    let direct = eigenvalues(&tensor_function(x, f)?);
    Ok(mapped
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Order transport: if `f ≥ g` on `[λ_min, λ_max]` then `f(X) ⪰ g(X)`.
/// Returns an error when the pointwise premise fails on a 257-point grid.
pub fn order_transport(x: &HermitianTensor, f: &SpectralFn, g: &SpectralFn, tol: f64) -> Result<PsdVerdict> {
    let ev = eigenvalues(x);
    let (lo, hi) = (*ev.last().unwrap(), ev[0]);
    let violates = (0..=256).any(|k| {
        let t = lo + (hi - lo) * k as f64 / 256.0;
        f.eval(t) < g.eval(t) - tol
    }) || ev.iter().any(|&l| f.eval(l) < g.eval(l) - tol);
    if violates {
        return Err(Error::Domain("f ≥ g does not hold on the spectrum interval".into()));
    }
    psd_compare(&tensor_function(x, f)?, &tensor_function(x, g)?, tol)
}
