//! Frozen values were computed independently with 30-digit mpmath.

use std::f64::consts::{E, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_tail::bounds::numeric::gaussian_integral;
use tensor_tail::bounds::{
    azuma_mcdiarmid_bound, bernstein_bounded, bernstein_subexponential, binary_divergence, chernoff_constant,
    chernoff_expectation_bounds, chernoff_i_lower, chernoff_i_upper, chernoff_ii_lower, chernoff_ii_upper, evaluate,
    expectation_norm_sandwich, gaussian_series_bound, master_bound_numeric, nonuniform_gaussian_sigma,
    rectangular_series_params, subexp_expectation_upper, BoundParams, Regime, TheoremTag,
};
use tensor_tail::ensembles::random::random_tensor;
use tensor_tail::error::Error;
use tensor_tail::spectral::{hermitian_dilation, spectral_norm};
use tensor_tail::tensor::{Complex64, DenseTensor, Shape};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

fn divergence_oracle(a: f64, b: f64) -> f64 {
    a * (a / b).ln() + (1.0 - a) * ((1.0 - a) / (1.0 - b)).ln()
}

#[test]
fn gaussian_frozen() {
    let p = BoundParams::new(4).with_sigma_sq(1.0);
    assert_eq!(gaussian_series_bound(&p, 0.0, false).unwrap().value, 4.0);
    let one = gaussian_series_bound(&p, 2.0, false).unwrap().value;
    assert!(close(one, 0.541_341_132_946_450_8, 1e-14));
    assert_eq!(gaussian_series_bound(&p, 2.0, true).unwrap().value, 2.0 * one);
    let zero = BoundParams::new(4);
    assert!(matches!(
        gaussian_series_bound(&zero, 1.0, false),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn rectangular_sigma_matches_dilation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let coeffs: Vec<DenseTensor> = (0..5)
        .map(|_| random_tensor(Shape::new(vec![2, 2], vec![3, 1]).unwrap(), &mut rng).unwrap())
        .collect();
    let p = rectangular_series_params(&coeffs).unwrap();
    let mut sum = hermitian_dilation(&coeffs[0]).unwrap().square().unwrap();
    for a in &coeffs[1..] {
        sum = sum.add(&hermitian_dilation(a).unwrap().square().unwrap()).unwrap();
    }
    assert!(close(p.sigma_sq, spectral_norm(sum.as_tensor()), 1e-12));
    assert_eq!(p.dim_product, 5 * 3);
    assert_eq!(p.n, 5);
}

#[test]
fn nonuniform_sigma_examples() {
    let ones = DenseTensor::ones(Shape::new(vec![2], vec![3]).unwrap());
    assert_eq!(nonuniform_gaussian_sigma(&ones), 3.0);
    let shape = Shape::new(vec![2, 2], vec![2]).unwrap();
    let single = DenseTensor::from_fn(shape, |r, c| {
        if r == [1, 0] && c == [1] {
            Complex64::new(0.6, 0.8) * 1.5
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .unwrap();
    assert!(close(nonuniform_gaussian_sigma(&single), 2.25, 1e-15));
}

#[test]
fn sandwich_frozen() {
    let (lo, hi) = expectation_norm_sandwich(&BoundParams::new(1).with_sigma_sq(1.0));
    assert_eq!(lo, 1.0);
    assert!(close(hi, 3.386_294_361_119_891, 1e-14));
    assert_eq!(expectation_norm_sandwich(&BoundParams::new(3)), (0.0, 0.0));
    for d in [1u64, 4, 16, 256] {
        let (lo, hi) = expectation_norm_sandwich(&BoundParams::new(d).with_sigma_sq(2.5));
        assert!(close(hi / lo, 2.0 * (2.0 * E * d as f64).ln(), 1e-14));
    }
}

#[test]
fn divergence_frozen_and_pinsker() {
    let d = binary_divergence(0.75, 0.5).unwrap();
    assert!(close(d, 0.130_812_035_941_136_96, 1e-14));
    for i in 1..40 {
        for j in 1..40 {
            let (a, b) = (i as f64 / 40.0, j as f64 / 40.0);
            let d = binary_divergence(a, b).unwrap();
            assert!(close(d, divergence_oracle(a, b), 1e-12) || (d - divergence_oracle(a, b)).abs() < 1e-15);
            assert!(d >= 2.0 * (a - b).powi(2) - 1e-15);
        }
    }
    assert!(binary_divergence(0.0, 0.5).is_err());
    assert!(binary_divergence(0.5, 1.0).is_err());
}

#[test]
fn chernoff_i_frozen_and_monotone() {
    let p = BoundParams::new(4).with_n(10).with_mu_bar(0.2, 0.5);
    let v = chernoff_i_upper(&p, 0.75).unwrap().value;
    // 4·exp(−10·0.130812…); the stated example rounds this to 1.0804
    assert!(close(v, 1.081_310_792_227_118, 1e-13));
    assert!(close(v, 4.0 * (-10.0 * divergence_oracle(0.75, 0.5)).exp(), 1e-13));
    assert_eq!(chernoff_i_upper(&p, 0.5).unwrap().value, 4.0);
    let mut last = f64::INFINITY;
    for k in 1..50 {
        let theta = 0.5 + 0.5 * k as f64 / 50.0;
        let v = chernoff_i_upper(&p, theta).unwrap().value;
        assert!(v < last);
        last = v;
    }
    assert!(chernoff_i_upper(&p, 0.4).is_err());
    assert!(chernoff_i_lower(&p, 0.3).is_err());
    assert_eq!(chernoff_i_lower(&p, 0.2).unwrap().value, 4.0);
}

#[test]
fn chernoff_ii_frozen() {
    let p = BoundParams::new(1).with_mu(1.0, 1.0);
    assert!(close(
        chernoff_ii_upper(&p, 1.0).unwrap().value,
        0.679_570_457_114_761_3,
        1e-14
    ));
    let q = BoundParams::new(3).with_mu(2.0, 5.0).with_t(1.0);
    assert_eq!(chernoff_ii_upper(&q, 0.0).unwrap().value, 3.0);
    assert_eq!(chernoff_ii_lower(&q, 0.0).unwrap().value, 3.0);
    assert!(close(
        chernoff_ii_lower(&q, 1.0).unwrap().value,
        3.0 * (-2.0f64).exp(),
        1e-14
    ));
    assert!(chernoff_ii_lower(&q, 1.01).is_err());
}

#[test]
fn chernoff_constant_against_oracle() {
    let c = chernoff_constant();
    // independent: the omega constant, W(1)
    assert!(close(c.delta_star, 0.567_143_290_409_784, 1e-12));
    assert!(close(c.c, 10.281_705_230_887_245, 1e-10));
    // stated: δ ≈ 0.56699 and C about 10.28
    assert!((c.delta_star - 0.56699).abs() / 0.56699 < 1e-3);
    assert!((c.c - 10.28).abs() < 0.1);
    let (lo, hi) = chernoff_expectation_bounds(&BoundParams::new(2).with_mu(0.0, 3.0).with_t(1.5)).unwrap();
    assert_eq!(lo, 3.0);
    assert!(close(hi, c.c * 2.0 * (-2.0f64).exp(), 1e-14));
}

#[test]
fn bernstein_frozen() {
    let p = BoundParams::new(4).with_sigma_sq(1.0).with_t(1.0);
    let general = bernstein_bounded(&p, 1.0, Regime::General).unwrap().value;
    assert!(close(general, 2.749_157_115_163_888_6, 1e-14));
    let small = bernstein_bounded(&p, 1.0, Regime::Small).unwrap().value;
    let large = bernstein_bounded(&p, 1.0, Regime::Large).unwrap().value;
    assert!(close(small, general, 1e-14) && close(large, general, 1e-14));
    assert_eq!(bernstein_bounded(&p, 0.0, Regime::General).unwrap().value, 4.0);
    let s = BoundParams::new(1).with_sigma_sq(1.0).with_t(1.0);
    assert!(close(
        bernstein_subexponential(&s, 1.0, Regime::General).unwrap().value,
        0.778_800_783_071_404_9,
        1e-14
    ));
    assert_eq!(bernstein_subexponential(&s, 0.0, Regime::General).unwrap().value, 1.0);
}

#[test]
fn gaussian_integral_anchor() {
    assert!((gaussian_integral(f64::INFINITY) - PI.sqrt() / 2.0).abs() <= 1e-9);
    assert!(close(gaussian_integral(1.0), 0.746_824_132_812_427, 1e-12));
}

#[test]
fn subexp_expectation_frozen() {
    let p = BoundParams::new(1).with_sigma_sq(4.0).with_t(1.0);
    assert!(close(
        subexp_expectation_upper(&p).unwrap(),
        4.458_814_295_935_477,
        1e-12
    ));
    let tiny = BoundParams::new(3).with_sigma_sq(1e-30).with_t(2.0);
    assert!(close(subexp_expectation_upper(&tiny).unwrap(), 4.0 * 3.0 * 2.0, 1e-12));
}

#[test]
fn azuma_frozen_and_gaussian_identity() {
    let p = BoundParams::new(4).with_sigma_sq(1.0);
    assert_eq!(azuma_mcdiarmid_bound(&p, 0.0).unwrap().value, 4.0);
    assert!(close(
        azuma_mcdiarmid_bound(&p, 2.0).unwrap().value,
        2.426_122_638_850_533_7,
        1e-14
    ));
    let four = p.clone().with_sigma_sq(4.0);
    for k in 0..30 {
        let theta = k as f64 * 0.25;
        let a = azuma_mcdiarmid_bound(&p, theta).unwrap().value;
        let g = gaussian_series_bound(&four, theta, false).unwrap().value;
        assert!(close(a, g, 1e-14));
    }
    for tag in [TheoremTag::McDiarmid, TheoremTag::Hoeffding] {
        let v = evaluate(tag, &p, 2.0).unwrap();
        assert_eq!(v.theorem, tag);
        assert!(close(v.value, 2.426_122_638_850_533_7, 1e-14));
    }
}

#[test]
fn master_recovers_gaussian() {
    for (sigma_sq, theta) in [(1.0, 2.0), (0.5, 1.0), (2.0, 3.0)] {
        let m = master_bound_numeric(4, |t| sigma_sq * t * t / 2.0, theta, None).unwrap();
        let g = gaussian_series_bound(&BoundParams::new(4).with_sigma_sq(sigma_sq), theta, false).unwrap();
        assert!(close(m.value, g.value, 1e-6), "{} vs {}", m.value, g.value);
    }
}

#[test]
fn master_at_bernstein_optimizer() {
    // with g(t) = (eᵗ − t − 1)σ², the exponent at t = log(1 + θ/σ²) is the
    // Bennett form, which the master infimum can only improve on and which
    // the general Bernstein bound (T = 1) dominates
    for (sigma_sq, theta) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.5)] {
        let g = |t: f64| (t.exp() - t - 1.0) * sigma_sq;
        let t_opt = (1.0 + theta / sigma_sq).ln();
        let at_opt = 4.0 * (g(t_opt) - t_opt * theta).exp();
        let m = master_bound_numeric(4, g, theta, None).unwrap().value;
        assert!(close(m, at_opt, 1e-8), "{m} vs {at_opt}");
        let b = bernstein_bounded(
            &BoundParams::new(4).with_sigma_sq(sigma_sq).with_t(1.0),
            theta,
            Regime::General,
        )
        .unwrap()
        .value;
        assert!(m <= b * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bounds_at_zero_equal_dim(d in 1u64..100, sigma_sq in 0.01f64..10.0, t in 0.1f64..5.0, mu in 0.1f64..10.0) {
        let p = BoundParams::new(d).with_sigma_sq(sigma_sq).with_t(t).with_mu(mu, mu);
        for tag in [TheoremTag::Gaussian, TheoremTag::Chernoff2Upper, TheoremTag::Chernoff2Lower,
                    TheoremTag::Bernstein, TheoremTag::Subexp, TheoremTag::Azuma] {
            prop_assert_eq!(evaluate(tag, &p, 0.0).unwrap().value, d as f64);
        }
    }

    #[test]
    fn bounds_decrease_in_theta(sigma_sq in 0.01f64..10.0, t in 0.1f64..5.0, mu in 0.1f64..10.0, a in 0.0f64..5.0, da in 1e-3f64..5.0) {
        let p = BoundParams::new(6).with_sigma_sq(sigma_sq).with_t(t).with_mu(mu, mu);
        for tag in [TheoremTag::Gaussian, TheoremTag::Chernoff2Upper, TheoremTag::Bernstein, TheoremTag::Subexp, TheoremTag::Azuma] {
            let lo = evaluate(tag, &p, a).unwrap().value;
            let hi = evaluate(tag, &p, a + da).unwrap().value;
            prop_assert!(hi <= lo, "{tag}: {hi} > {lo}");
        }
        let (x, y) = ((a / 5.0).min(1.0), ((a + da) / 10.0).min(1.0));
        let (x, y) = (x.min(y), x.max(y));
        prop_assert!(chernoff_ii_lower(&p, y).unwrap().value <= chernoff_ii_lower(&p, x).unwrap().value);
    }

    #[test]
    fn general_bernstein_below_regime_forms(sigma_sq in 0.01f64..10.0, t in 0.1f64..5.0, theta in 0.0f64..20.0) {
        let p = BoundParams::new(5).with_sigma_sq(sigma_sq).with_t(t);
        for f in [bernstein_bounded, bernstein_subexponential] {
            let general = f(&p, theta, Regime::General).unwrap().value;
            let auto = f(&p, theta, Regime::Auto).unwrap().value;
            prop_assert!(general <= auto * (1.0 + 1e-12));
        }
    }

    #[test]
    fn subexp_weaker_than_bounded(sigma_sq in 0.01f64..10.0, t in 0.1f64..5.0, theta in 0.0f64..20.0) {
        let p = BoundParams::new(5).with_sigma_sq(sigma_sq).with_t(t);
        let bounded = bernstein_bounded(&p, theta, Regime::General).unwrap().value;
        let subexp = bernstein_subexponential(&p, theta, Regime::General).unwrap().value;
        prop_assert!(subexp >= bounded);
    }

    #[test]
    fn scale_covariance(c in 0.01f64..100.0, sigma_sq in 0.01f64..10.0, t in 0.1f64..5.0, theta in 0.0f64..1.0, mu in 0.1f64..10.0) {
        let p = BoundParams::new(4).with_sigma_sq(sigma_sq).with_t(t).with_mu(mu, mu);
        let q = BoundParams::new(4).with_sigma_sq(c * c * sigma_sq).with_t(c * t).with_mu(c * mu, c * mu);
        for f in [bernstein_bounded, bernstein_subexponential] {
            let a = f(&p, theta * 3.0, Regime::General).unwrap().value;
            let b = f(&q, c * theta * 3.0, Regime::General).unwrap().value;
            prop_assert!(close(a, b, 1e-10));
        }
        // Chernoff II is stated in relative deviation, so θ is unchanged
        prop_assert!(close(chernoff_ii_upper(&p, theta).unwrap().value, chernoff_ii_upper(&q, theta).unwrap().value, 1e-10));
        prop_assert!(close(chernoff_ii_lower(&p, theta).unwrap().value, chernoff_ii_lower(&q, theta).unwrap().value, 1e-10));
    }

    #[test]
    fn bounds_scale_linearly_in_dim(d in 1u64..1000, theta in 0.0f64..5.0) {
        let p = BoundParams::new(1).with_sigma_sq(1.0).with_mu(2.0, 2.0);
        let q = BoundParams::new(d).with_sigma_sq(1.0).with_mu(2.0, 2.0);
        for tag in [TheoremTag::Gaussian, TheoremTag::Chernoff2Upper, TheoremTag::Bernstein] {
            let a = evaluate(tag, &p, theta).unwrap().value;
            let b = evaluate(tag, &q, theta).unwrap().value;
            prop_assert!(close(b, d as f64 * a, 1e-13));
        }
    }
}
