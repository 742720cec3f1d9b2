use statrs::function::beta::beta_reg;

use crate::bounds::numeric::bisect;

/// Default one-sided confidence level parameter.
pub const DEFAULT_ALPHA: f64 = 1e-3;

/// One-sided exact (Clopper–Pearson) upper confidence limit for a binomial
/// proportion after `hits` successes in `trials`: the `p` with
/// `P(Bin(trials, p) ≤ hits) = alpha`.
pub fn clopper_pearson_upper(hits: u64, trials: u64, alpha: f64) -> f64 {
    assert!(trials > 0 && hits <= trials, "need 0 <= hits <= trials, trials > 0");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
    if hits == trials {
        return 1.0;
    }
    let n = trials as f64;
    if hits == 0 {
        return -(alpha.ln() / n).exp_m1();
    }
    let (a, b) = (hits as f64 + 1.0, n - hits as f64);
    // I_p(k+1, n−k) = P(Bin(n, p) ≥ k+1) rises from 0 to 1 in p
    bisect(|p| beta_reg(a, b, p) - (1.0 - alpha), 0.0, 1.0, 1e-15).expect("monotone in p")
}
