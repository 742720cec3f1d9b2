//! Chernoff bounds on sums of bounded PSD tensors, with a μ-halved control
//! that the harness has to flag.

use tensor_tail::bounds::{chernoff_expectation_bounds, TheoremTag};
use tensor_tail::ensembles::{EnsembleSpec, Profile};
use tensor_tail::montecarlo::{estimate_expectation, verify, Moment, RunConfig, Tamper, ThetaGrid};

fn main() -> tensor_tail::Result<()> {
    let cfg = RunConfig::new(20_000, 23);
    for n in [8, 32] {
        let e = EnsembleSpec::psd_bounded(&[2, 2], 1.0, n, Profile::Uniform).prepare()?;
        let p = e.params()?.params;
        println!("n = {n}: μ_min = {}, μ_max = {}", p.mu_min, p.mu_max);
        for tag in [TheoremTag::Chernoff2Upper, TheoremTag::Chernoff2Lower] {
            let honest = verify(&e, tag, &ThetaGrid::default(), &cfg, Tamper::none())?;
            let control = verify(&e, tag, &ThetaGrid::default(), &cfg, Tamper::halve_mu())?;
            println!(
                "  {tag:<16} {} points, {} failures; with μ halved: {} failures",
                honest.verdicts.len(),
                honest.failures(),
                control.failures()
            );
        }
        let (lower, upper) = chernoff_expectation_bounds(&p)?;
        let (mean, se) = estimate_expectation(&e, Moment::LambdaMax, 20_000, 5)?;
        println!("  E λ_max = {mean:.4} ± {se:.4}; stated lower {lower}, upper term {upper:.3e}");
    }
    Ok(())
}
