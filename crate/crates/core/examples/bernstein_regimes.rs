//! Bernstein bounds for bounded and subexponential summands in the general,
//! small-deviation and large-deviation forms, plus an empirical check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::bounds::{bernstein_bounded, bernstein_subexponential, subexp_expectation_upper, Regime, TheoremTag};
use tensor_tail::ensembles::random::random_hermitian;
use tensor_tail::ensembles::EnsembleSpec;
use tensor_tail::montecarlo::{verify, RunConfig, Tamper, ThetaGrid};
use tensor_tail::spectral::spectral_norm;

fn main() -> tensor_tail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut coeffs = vec![];
    for _ in 0..6 {
        let h = random_hermitian(&[2, 2], 1.0, &mut rng)?.into_tensor();
        let s = 1.0 / spectral_norm(&h);
        coeffs.push(h.scale_real(s)?);
    }
    let e = EnsembleSpec::centered_bounded(coeffs.clone(), 1.0).prepare()?;
    let p = e.params()?.params;
    println!(
        "σ² = {:.4}, T = {}, regime edge σ²/T = {:.4}\n",
        p.sigma_sq,
        p.t_bound,
        p.sigma_sq / p.t_bound
    );
    println!(
        "{:>7} {:>11} {:>11} {:>11} {:>11}",
        "theta", "general", "small", "large", "subexp"
    );
    for k in 1..=8 {
        let theta = k as f64;
        let g = bernstein_bounded(&p, theta, Regime::General)?.value;
        // each simplified form only holds on its own side of σ²/T
        let form = |r| bernstein_bounded(&p, theta, r).map_or("-".to_string(), |b| format!("{:.4e}", b.value));
        let x = bernstein_subexponential(&p, theta, Regime::General)?.value;
        println!(
            "{theta:>7.2} {g:>11.4e} {:>11} {:>11} {x:>11.4e}",
            form(Regime::Small),
            form(Regime::Large)
        );
    }
    println!(
        "\nE λ_max upper (subexponential form): {:.4}",
        subexp_expectation_upper(&p)?
    );

    let cfg = RunConfig::new(50_000, 29);
    for tag in [TheoremTag::Bernstein, TheoremTag::Subexp] {
        let v = verify(&e, tag, &ThetaGrid::default(), &cfg, Tamper::none())?;
        println!("{tag}: {} points, {} failures", v.verdicts.len(), v.failures());
    }
    let sub = EnsembleSpec::subexponential(coeffs, 1.0).prepare()?;
    let v = verify(&sub, TheoremTag::Subexp, &ThetaGrid::default(), &cfg, Tamper::none())?;
    println!(
        "subexp on subexponential summands: {} points, {} failures",
        v.verdicts.len(),
        v.failures()
    );
    Ok(())
}
