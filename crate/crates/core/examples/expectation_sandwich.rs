//! Sampled E‖X‖² for Gaussian series against σ² ≤ E‖X‖² ≤ 2σ² log(2e𝕀).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::bounds::expectation_norm_sandwich;
use tensor_tail::ensembles::random::random_hermitian;
use tensor_tail::ensembles::{EnsembleKind, EnsembleSpec};
use tensor_tail::montecarlo::{estimate_expectation, Moment};

fn main() -> tensor_tail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    println!("{:<8} {:>3} {:>9} {:>14} {:>9}", "dims", "n", "σ²", "E‖X‖²", "upper");
    for (dims, n) in [(vec![2, 2], 4), (vec![2, 3], 8), (vec![3, 3], 5)] {
        let coeffs = (0..n)
            .map(|_| random_hermitian(&dims, 1.0, &mut rng).map(|h| h.into_tensor()))
            .collect::<tensor_tail::Result<Vec<_>>>()?;
        let e = EnsembleSpec::series(EnsembleKind::GaussianSeries, coeffs).prepare()?;
        let (lo, hi) = expectation_norm_sandwich(&e.params()?.params);
        let (mean, se) = estimate_expectation(&e, Moment::NormSq, 20_000, 1)?;
        println!(
            "{:<8} {n:>3} {lo:>9.4} {:>14} {hi:>9.4}",
            format!("{dims:?}"),
            format!("{mean:.4}±{se:.4}")
        );
    }
    Ok(())
}
