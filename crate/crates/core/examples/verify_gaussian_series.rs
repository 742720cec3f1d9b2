//! Monte Carlo check of the Gaussian series bound on a random coefficient
//! set, printed as a θ table with Clopper–Pearson upper ends.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::bounds::TheoremTag;
use tensor_tail::ensembles::random::random_hermitian;
use tensor_tail::ensembles::{EnsembleKind, EnsembleSpec};
use tensor_tail::montecarlo::{verify, RunConfig, Tamper, ThetaGrid, Verification};

fn print(v: &Verification) {
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>6}",
        "theta", "p_hat", "ci_upper", "bound", "pass"
    );
    for r in &v.verdicts {
        println!(
            "{:>8.4} {:>10.2e} {:>10.2e} {:>10.2e} {:>6}",
            r.estimate.theta, r.estimate.p_hat, r.estimate.ci_upper, r.bound.value, r.pass
        );
    }
    println!("σ² = {:.4}, {} failures\n", v.params.sigma_sq, v.failures());
}

fn main() -> tensor_tail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let coeffs = (0..6)
        .map(|_| random_hermitian(&[2, 2], 1.0, &mut rng).map(|h| h.into_tensor()))
        .collect::<tensor_tail::Result<Vec<_>>>()?;
    let cfg = RunConfig::new(50_000, 17);
    for kind in [EnsembleKind::GaussianSeries, EnsembleKind::RademacherSeries] {
        let e = EnsembleSpec::series(kind, coeffs.clone()).prepare()?;
        println!("{kind}");
        print(&verify(
            &e,
            TheoremTag::Gaussian,
            &ThetaGrid::default(),
            &cfg,
            Tamper::none(),
        )?);
    }
    Ok(())
}
