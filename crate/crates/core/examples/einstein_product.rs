//! Einstein products, unfolding and the trace on a pair of order-4 tensors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::ensembles::random::random_tensor;
use tensor_tail::tensor::{einstein_product, DenseTensor, Shape};

fn main() -> tensor_tail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_tensor(Shape::new(vec![2, 3], vec![2, 2])?, &mut rng)?;
    let b = random_tensor(Shape::new(vec![2, 2], vec![3, 2])?, &mut rng)?;

    // contract the trailing two modes of `a` with the leading two of `b`
    let c = einstein_product(&a, &b, 2)?;
    println!("a: {:?}  b: {:?}  a⋆b: {:?}", a.shape(), b.shape(), c.shape());

    let via_matrix = DenseTensor::refold(&(a.unfold() * b.unfold()), c.shape().clone())?;
    println!(
        "‖a⋆b − fold(unfold a · unfold b)‖_F = {:.2e}",
        c.sub(&via_matrix)?.frobenius_norm()
    );

    let sq = random_tensor(Shape::square(&[2, 3])?, &mut rng)?;
    let id = DenseTensor::identity(&[2, 3])?;
    println!("tr(I) = {}", id.trace()?);
    println!("tr(X) = {:.6}", sq.trace()?);
    println!("tr(Xᴴ) = {:.6}", sq.conjugate_transpose().trace()?);
    Ok(())
}
