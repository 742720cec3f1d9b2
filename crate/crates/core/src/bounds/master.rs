use super::numeric::golden_section_minimize;
use super::{bound_value, check_theta, BoundParams, BoundValue, TheoremTag};
use crate::error::{Error, Result};

pub const T_GRID_MIN: f64 = 1e-4;
pub const T_GRID_MAX: f64 = 50.0;
pub const T_GRID_POINTS: usize = 200;
const POLISH_WIDTH: f64 = 1e-10;

/// Log-spaced grid of `T_GRID_POINTS` values on `[T_GRID_MIN, T_GRID_MAX]`.
pub fn default_t_grid() -> Vec<f64> {
    let (lo, hi) = (T_GRID_MIN.ln(), T_GRID_MAX.ln());
    (0..T_GRID_POINTS)
        .map(|k| (lo + (hi - lo) * k as f64 / (T_GRID_POINTS - 1) as f64).exp())
        .collect()
}

/// `𝕀 inf_t exp(−tθ + g(t))`, where `g(t)` bounds `Σᵢ log E e^{t𝒳ᵢ}` at the
/// level of the maximum eigenvalue.
///
/// The infimum is taken over `t_grid` (or [`default_t_grid`]) and then
/// polished by golden-section search between the neighbours of the best grid
/// point. The result never exceeds any single evaluated `t`. When `g` stays
/// small the infimum may sit at the end of the grid; the value is then only
/// the grid limit.
pub fn master_bound_numeric(
    dim_product: u64,
    g: impl Fn(f64) -> f64,
    theta: f64,
    t_grid: Option<&[f64]>,
) -> Result<BoundValue> {
    check_theta(theta)?;
    if dim_product == 0 {
        return Err(Error::Domain("dim_product must be positive".into()));
    }
    let mut grid: Vec<f64> = match t_grid {
        Some(g) => g.to_vec(),
        None => default_t_grid(),
    };
    if grid.is_empty() {
        return Err(Error::Domain("empty t grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return Err(Error::Domain("t grid must contain positive finite values".into()));
    }
    grid.sort_by(f64::total_cmp);

    let mut exponents = Vec::with_capacity(grid.len());
    for &t in &grid {
        let gt = g(t);
        if !gt.is_finite() {
            return Err(Error::Domain(format!("g({t}) = {gt} is not finite")));
        }
        exponents.push(-t * theta + gt);
    }
    let (best, &grid_min) = exponents
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");

    let mut exponent = grid_min;
    if grid.len() > 1 {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let (_, polished) = golden_section_minimize(
            |t| {
                let v = -t * theta + g(t);
                if v.is_finite() {
                    v
                } else {
                    f64::INFINITY
                }
            },
            lo,
            hi,
            POLISH_WIDTH,
        );
        exponent = exponent.min(polished);
    }
    let params = BoundParams::new(dim_product);
    Ok(bound_value(
        TheoremTag::Master,
        &params,
        theta,
        dim_product as f64 * exponent.exp(),
    ))
}
