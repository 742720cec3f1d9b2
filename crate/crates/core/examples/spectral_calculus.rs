//! Eigendecomposition, tensor exp/log, Hermitian dilation and a few of the
//! trace inequalities checked on random inputs.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::ensembles::random::{random_hermitian, random_pd, random_tensor};
use tensor_tail::spectral::properties::{golden_thompson, klein, lieb_midpoint};
use tensor_tail::spectral::{
    eigenvalues, hermitian_dilation, lambda_max, relative_entropy, spectral_norm, tensor_exp, tensor_log,
};
use tensor_tail::tensor::Shape;

fn main() -> tensor_tail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dims = [2, 2];
    let x = random_hermitian(&dims, 1.0, &mut rng)?;
    let spectrum = eigenvalues(&x);
    println!("λ(X) = {spectrum:.4?}");
    let e: Vec<f64> = eigenvalues(&tensor_exp(&x)?);
    println!("λ(e^X) = {e:.4?}");

    let a = random_pd(&dims, 0.1, 2.0, &mut rng)?;
    let back = tensor_exp(&tensor_log(&a)?)?;
    println!(
        "‖exp(log A) − A‖∞ = {:.2e}",
        back.as_tensor().sub(a.as_tensor())?.max_abs()
    );

    let y = random_tensor(Shape::new(vec![2, 1], vec![3, 2])?, &mut rng)?;
    println!(
        "λ_max(𝔻(Y)) = {:.12}  ‖Y‖ = {:.12}",
        lambda_max(&hermitian_dilation(&y)?),
        spectral_norm(&y)
    );

    let b = random_pd(&dims, 0.1, 2.0, &mut rng)?;
    let h = random_hermitian(&dims, 1.0, &mut rng)?;
    for (name, check) in [
        ("golden-thompson", golden_thompson(&x, &h)?),
        ("klein", klein(&a, &b)?),
        ("lieb midpoint", lieb_midpoint(&h, &a, &b)?),
    ] {
        println!(
            "{name:<16} {:>12.6} ≤ {:>12.6}  gap {:.3e}",
            check.lesser,
            check.greater,
            check.gap()
        );
    }
    let b = b.scale(a.trace_real() / b.trace_real())?;
    println!("D(A‖B) with tr A = tr B: {:.6}", relative_entropy(&a, &b)?);
    Ok(())
}
