use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::ensembles::random::{random_hermitian, random_tensor};
use tensor_tail::ensembles::{
    check_subexp_moments, sample_subexponential, subexp_moment, EnsembleKind, EnsembleSpec, Profile, Provenance,
    RngState, SUBEXP_CAP,
};
use tensor_tail::error::Error;
use tensor_tail::spectral::{lambda_max, psd_compare, spectral_norm};
use tensor_tail::tensor::{DenseTensor, HermitianTensor, Shape};

const DIMS: [usize; 2] = [2, 2];

fn coefficients(count: usize, seed: u64, norm: Option<f64>) -> Vec<DenseTensor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let h = random_hermitian(&DIMS, 1.0, &mut rng).unwrap().into_tensor();
            match norm {
                Some(n) => h.scale_real(n / spectral_norm(&h)).unwrap(),
                None => h,
            }
        })
        .collect()
}

fn total_variance(coeffs: &[DenseTensor]) -> f64 {
    let mut sum = HermitianTensor::zero(&DIMS).unwrap();
    for a in coeffs {
        sum = sum
            .add(&HermitianTensor::new(a.clone()).unwrap().square().unwrap())
            .unwrap();
    }
    lambda_max(&sum)
}

#[test]
fn zero_coefficients_give_zero_sum() {
    let zeros = vec![DenseTensor::zeros(Shape::square(&DIMS).unwrap()); 3];
    for kind in [EnsembleKind::GaussianSeries, EnsembleKind::RademacherSeries] {
        let e = EnsembleSpec::series(kind, zeros.clone()).prepare().unwrap();
        for k in 0..10 {
            assert_eq!(e.sample(RngState::new(1, k)).unwrap().max_abs(), 0.0);
        }
    }
    let mask = DenseTensor::zeros(Shape::new(vec![2], vec![3]).unwrap());
    let e = EnsembleSpec::hadamard(mask).prepare().unwrap();
    assert_eq!(e.sample(RngState::new(1, 0)).unwrap().max_abs(), 0.0);
}

#[test]
fn gaussian_series_mean_is_zero() {
    let coeffs = coefficients(4, 31, None);
    let e = EnsembleSpec::series(EnsembleKind::GaussianSeries, coeffs)
        .prepare()
        .unwrap();
    let n = 100_000;
    let mut sum = vec![Complex64::new(0.0, 0.0); 16];
    let mut sq = [0.0; 16];
    for k in 0..n {
        let x = e.sample(RngState::new(5, k)).unwrap();
        for (i, v) in x.data().iter().enumerate() {
            sum[i] += v;
            sq[i] += v.norm_sqr();
        }
    }
    for i in 0..16 {
        let mean = sum[i] / n as f64;
        let se = (sq[i] / n as f64 / n as f64).sqrt();
        assert!(mean.norm() <= 5.0 * se, "entry {i}: {mean} vs se {se}");
    }
}

#[test]
fn hadamard_entry_variance_matches_mask() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mask = random_tensor(Shape::new(vec![2], vec![3]).unwrap(), &mut rng).unwrap();
    let e = EnsembleSpec::hadamard(mask.clone()).prepare().unwrap();
    let n = 100_000;
    let mut sq = [0.0; 6];
    for k in 0..n {
        let x = e.sample(RngState::new(6, k)).unwrap();
        for (i, v) in x.data().iter().enumerate() {
            sq[i] += v.norm_sqr();
        }
    }
    for (i, a) in mask.data().iter().enumerate() {
        let want = a.norm_sqr();
        let se = want * 2f64.sqrt() / (n as f64).sqrt();
        assert!((sq[i] / n as f64 - want).abs() <= 5.0 * se, "entry {i}");
    }
}

#[test]
fn hadamard_one_hot_norm_is_half_normal() {
    let c = 2.5;
    let shape = Shape::new(vec![2], vec![2]).unwrap();
    let mask = DenseTensor::from_fn(shape, |r, col| {
        Complex64::new(if r == [0] && col == [1] { c } else { 0.0 }, 0.0)
    })
    .unwrap();
    let e = EnsembleSpec::hadamard(mask).prepare().unwrap();
    let n = 100_000;
    let mut norms: Vec<f64> = (0..n)
        .map(|k| spectral_norm(&e.sample(RngState::new(7, k)).unwrap()))
        .collect();
    norms.sort_by(f64::total_cmp);
    let median = norms[n as usize / 2];
    // half-normal median Φ⁻¹(3/4); SE 1/(2 f(m) √n) with f the half-normal density
    let m = 0.674_489_750_196_081_7;
    let density = 2.0 * (-m * m / 2.0f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let se = c / (2.0 * density * (n as f64).sqrt());
    assert!((median - c * m).abs() <= 5.0 * se, "{median}");
}

#[test]
fn psd_uniform_mean_trace_and_params() {
    let e = EnsembleSpec::psd_bounded(&DIMS, 1.5, 3, Profile::Uniform)
        .prepare()
        .unwrap();
    let p = e.params().unwrap();
    assert_eq!(p.provenance, Provenance::Exact);
    assert_eq!((p.params.mu_max, p.params.mu_min), (3.0 * 1.5 / 2.0, 3.0 * 1.5 / 2.0));
    assert_eq!((p.params.mu_bar_max, p.params.mu_bar_min), (0.5, 0.5));
    let n = 100_000;
    let (mut s, mut s2) = (0.0, 0.0);
    let mut mean_entries = vec![Complex64::new(0.0, 0.0); 16];
    for k in 0..n {
        let x = e.sample(RngState::new(8, k)).unwrap();
        let tr = x.trace().unwrap().re;
        s += tr;
        s2 += tr * tr;
        for (i, v) in x.data().iter().enumerate() {
            mean_entries[i] += v / n as f64;
        }
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    // trace of Σ E𝒳ᵢ = n · 𝕀 · T/2
    assert!((mean - 3.0 * 4.0 * 0.75).abs() <= 5.0 * se, "{mean} ± {se}");
    // the Haar average is (nT/2)·I; off-diagonal entries vanish
    for r in 0..4 {
        for c in 0..4 {
            let want = if r == c { 2.25 } else { 0.0 };
            assert!((mean_entries[r * 4 + c] - Complex64::new(want, 0.0)).norm() < 0.02);
        }
    }
}

#[test]
fn psd_draws_certify_and_aligned_mean_is_estimated() {
    let e = EnsembleSpec::psd_bounded(&DIMS, 1.0, 5, Profile::Aligned { concentration: 3.0 })
        .with_seed(3)
        .prepare()
        .unwrap();
    for k in 0..32 {
        e.certify(RngState::new(9, k)).unwrap();
    }
    let p = e.params().unwrap();
    assert!(matches!(p.provenance, Provenance::Estimated { .. }));
    assert!(p.params.mu_min < p.params.mu_max);
    let beta = EnsembleSpec::psd_bounded(&DIMS, 2.0, 4, Profile::Beta { a: 2.0, b: 5.0 })
        .prepare()
        .unwrap();
    let q = beta.params().unwrap().params;
    assert!((q.mu_max - 4.0 * 2.0 * 2.0 / 7.0).abs() < 1e-12);
}

#[test]
fn sigma_sq_is_total_variance() {
    let coeffs = coefficients(6, 33, Some(1.0));
    for spec in [
        EnsembleSpec::series(EnsembleKind::GaussianSeries, coeffs.clone()),
        EnsembleSpec::centered_bounded(coeffs.clone(), 1.0),
        EnsembleSpec::mcdiarmid(coeffs.clone()),
        EnsembleSpec::azuma(coeffs.clone(), true),
    ] {
        let p = spec.prepare().unwrap().params().unwrap().params;
        assert!((p.sigma_sq - total_variance(&coeffs)).abs() <= 1e-12 * p.sigma_sq);
        assert_eq!(p.dim_product, 4);
    }
}

#[test]
fn centered_rejects_coefficients_above_t() {
    let coeffs = coefficients(3, 34, Some(2.0));
    assert!(EnsembleSpec::centered_bounded(coeffs.clone(), 1.0).prepare().is_err());
    assert!(EnsembleSpec::centered_bounded(coeffs, 2.0).prepare().is_ok());
}

#[test]
fn subexponential_moment_condition() {
    // E s² with s = min(Exp(1)/√2, cap) is 1 minus a tail far below 1e-12
    let m2 = subexp_moment(2, SUBEXP_CAP);
    assert!(m2 <= 1.0 && m2 > 1.0 - 1e-9, "{m2}");
    check_subexp_moments(SUBEXP_CAP).unwrap();
    for p in 2..=8u32 {
        let exact = (1..=p).map(f64::from).product::<f64>() / 2f64.powf(p as f64 / 2.0);
        assert!((subexp_moment(p, SUBEXP_CAP) - exact).abs() <= 1e-8 * exact);
    }
}

#[test]
fn subexponential_sampled_fourth_moment_dominated() {
    // E𝒳⁴ = E s⁴ 𝒜⁴ = 6𝒜⁴ ⪯ (4!/2) T² 𝒜²
    let t = 1.0;
    let a = HermitianTensor::new(coefficients(1, 35, Some(t)).remove(0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let n = 100_000;
    let mut acc = 0.0;
    let mut acc3 = 0.0;
    for _ in 0..n {
        let x = sample_subexponential(&a, t, &mut rng).unwrap();
        let s = spectral_norm(x.as_tensor());
        acc += s.powi(4);
        acc3 += s.powi(3);
    }
    let fourth = acc / n as f64;
    let a2 = a.square().unwrap();
    let a4 = a2.square().unwrap();
    let moment = a4.scale(fourth).unwrap();
    let rhs = a2.scale(12.0 * t * t).unwrap();
    assert!(psd_compare(&rhs, &moment, 1e-10).unwrap().holds);
    // third absolute moment against 3!/2 T with ‖𝒜‖ = T
    assert!(acc3 / n as f64 <= 3.0 * t);
}

#[test]
fn adaptive_azuma_paths_move_and_are_predictable() {
    let coeffs = coefficients(4, 37, None);
    let e = EnsembleSpec::azuma(coeffs.clone(), true).prepare().unwrap();
    let n = 100_000;
    // condition on the prefix β₁: the second increment has conditional mean zero
    let mut groups: [(usize, Vec<Complex64>, f64); 2] =
        std::array::from_fn(|_| (0, vec![Complex64::new(0.0, 0.0); 16], 0.0));
    for k in 0..n {
        let parts = e.sample_summands(RngState::new(10, k)).unwrap();
        assert!(parts[0].max_abs() > 0.0);
        let sign = parts[0].inner_product(&coeffs[0]).unwrap().re > 0.0;
        let g = &mut groups[sign as usize];
        g.0 += 1;
        for (i, v) in parts[1].data().iter().enumerate() {
            g.1[i] += v;
        }
        g.2 = g.2.max(parts[1].max_abs());
    }
    let a1 = coeffs[1].max_abs();
    for (count, sum, _) in &groups {
        assert!(*count > 40_000);
        for v in sum {
            let mean = v / *count as f64;
            // |entry| ≤ ‖𝒜₂‖∞ per draw, so SE ≤ a1/√count
            assert!(mean.norm() <= 5.0 * a1 / (*count as f64).sqrt());
        }
    }
    // the step size depends on the prefix, so the two groups use different scales
    assert!((groups[0].2 - groups[1].2).abs() > 1e-6);
    for k in 0..16 {
        e.certify(RngState::new(10, k)).unwrap();
    }
}

#[test]
fn mcdiarmid_bounded_differences_certify() {
    let coeffs = coefficients(5, 38, None);
    let e = EnsembleSpec::mcdiarmid(coeffs).prepare().unwrap();
    for k in 0..32 {
        e.certify(RngState::new(11, k)).unwrap();
    }
}

#[test]
fn non_hermitian_coefficients_rejected_where_required() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    let rect = random_tensor(Shape::new(vec![2], vec![2]).unwrap(), &mut rng).unwrap();
    assert!(EnsembleSpec::azuma(vec![rect.clone()], false).prepare().is_err());
    assert!(EnsembleSpec::centered_bounded(vec![rect.clone()], 10.0)
        .prepare()
        .is_err());
    // series accept it as a rectangular sum
    let e = EnsembleSpec::series(EnsembleKind::GaussianSeries, vec![rect])
        .prepare()
        .unwrap();
    assert!(!e.is_hermitian());
    assert!(matches!(
        EnsembleSpec::psd_bounded(&DIMS, -1.0, 3, Profile::Uniform).prepare(),
        Err(Error::Domain(_) | Error::Config(_))
    ));
}

#[test]
fn same_seed_same_draws() {
    let coeffs = coefficients(3, 40, Some(1.0));
    let e = EnsembleSpec::subexponential(coeffs, 1.0).prepare().unwrap();
    let a = e.sample(RngState::new(12, 3)).unwrap();
    let b = e.sample(RngState::new(12, 3)).unwrap();
    let c = e.sample(RngState::new(12, 4)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
