//! Azuma on an adaptive martingale and McDiarmid on a bounded-difference
//! function, checked by sampling paths.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::bounds::TheoremTag;
use tensor_tail::ensembles::random::random_hermitian;
use tensor_tail::ensembles::{EnsembleSpec, RngState};
use tensor_tail::montecarlo::{verify, RunConfig, Tamper, ThetaGrid};
use tensor_tail::spectral::spectral_norm;

fn main() -> tensor_tail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let coeffs = (0..5)
        .map(|_| random_hermitian(&[2, 2], 1.0, &mut rng).map(|h| h.into_tensor()))
        .collect::<tensor_tail::Result<Vec<_>>>()?;

    let azuma = EnsembleSpec::azuma(coeffs.clone(), true).prepare()?;
    let path = azuma.sample_summands(RngState::new(1, 0))?;
    let steps: Vec<String> = path.iter().map(|x| format!("{:.3}", spectral_norm(x))).collect();
    println!("one path, ‖increment‖: {}", steps.join(" "));

    let cfg = RunConfig::new(100_000, 31);
    let mcd = EnsembleSpec::mcdiarmid(coeffs).prepare()?;
    for (e, tag) in [(&azuma, TheoremTag::Azuma), (&mcd, TheoremTag::McDiarmid)] {
        let v = verify(e, tag, &ThetaGrid::default(), &cfg, Tamper::none())?;
        let tightest = v.verdicts.iter().map(|r| r.tightness).fold(f64::INFINITY, f64::min);
        println!(
            "{tag}: σ² = {:.4}, {} points, {} failures, min bound/p̂ = {tightest:.2}",
            v.params.sigma_sq,
            v.verdicts.len(),
            v.failures()
        );
    }
    Ok(())
}
