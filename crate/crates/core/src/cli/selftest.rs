//! Identity checks on seeded random instances.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Hooks, SelftestArgs, EXIT_FAILURE, EXIT_OK};
use crate::ensembles::random::{random_hermitian, random_pd, random_tensor};
use crate::ensembles::StreamFamily;
use crate::error::Result;
use crate::spectral::properties::{golden_thompson, klein, lieb_midpoint, log_monotone, spectral_mapping_error};
use crate::spectral::{hermitian_dilation, lambda_max, spectral_norm, tensor_exp, tensor_log, SpectralFn};
use crate::tensor::{multi_index, DenseTensor, Shape};

/// Purpose codes for the selftest streams, kept clear of the sampling ones.
const PURPOSE_BASE: u64 = 1000;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub instances: usize,
    /// Largest violation over all instances (0 when an inequality holds).
    pub max_error: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn random_dims(rng: &mut ChaCha8Rng, modes: usize) -> Vec<usize> {
    (0..modes).map(|_| rng.random_range(1..=3)).collect()
}

fn max_abs_diff(a: &DenseTensor, b: &DenseTensor) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Contraction by explicit index loops, independent of the unfolding.
fn brute_force_product(a: &DenseTensor, b: &DenseTensor) -> DenseTensor {
    let (rows, inner, cols) = (a.shape().row_dims(), a.shape().col_dims(), b.shape().col_dims());
    let shape = Shape::new(rows.to_vec(), cols.to_vec()).expect("valid");
    let inner_len: usize = inner.iter().product();
    DenseTensor::from_fn(shape, |i, j| {
        (0..inner_len)
            .map(|k| {
                let k = multi_index(inner, k);
                a.get(i, &k) * b.get(&k, j)
            })
            .sum::<Complex64>()
    })
    .expect("valid")
}

fn scale_of(t: &DenseTensor) -> f64 {
    t.max_abs().max(1.0)
}

type Check = fn(&mut ChaCha8Rng, &Hooks) -> Result<f64>;

fn einstein_vs_loops(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let (n, m, l) = (
        rng.random_range(1..=2),
        rng.random_range(1..=2),
        rng.random_range(1..=2),
    );
    let (i, k, j) = (random_dims(rng, n), random_dims(rng, m), random_dims(rng, l));
    let a = random_tensor(Shape::new(i, k.clone())?, rng)?;
    let b = random_tensor(Shape::new(k, j)?, rng)?;
    let fast = a.einstein_product(&b, b.shape().row_dims().len())?;
    let slow = brute_force_product(&a, &b);
    Ok(max_abs_diff(&fast, &slow) / (scale_of(&a) * scale_of(&b)))
}

fn adjoint_unfolding(rng: &mut ChaCha8Rng, hooks: &Hooks) -> Result<f64> {
    let (n, m) = (rng.random_range(1..=2), rng.random_range(1..=2));
    let a = random_tensor(Shape::new(random_dims(rng, n), random_dims(rng, m))?, rng)?;
    let adj = (hooks.conjugate_transpose)(&a);
    let expected = a.unfold().adjoint();
    let got = adj.unfold();
    if got.shape() != expected.shape() {
        return Ok(f64::INFINITY);
    }
    Ok((got - expected).camax() / scale_of(&a))
}

fn adjoint_reverses_products(rng: &mut ChaCha8Rng, hooks: &Hooks) -> Result<f64> {
    let (i, k, j) = (random_dims(rng, 2), random_dims(rng, 1), random_dims(rng, 2));
    let a = random_tensor(Shape::new(i, k.clone())?, rng)?;
    let b = random_tensor(Shape::new(k, j)?, rng)?;
    let ct = hooks.conjugate_transpose;
    let lhs = ct(&a.einstein_product(&b, 1)?);
    let rhs = ct(&b).einstein_product(&ct(&a), 1)?;
    Ok(max_abs_diff(&lhs, &rhs) / (scale_of(&a) * scale_of(&b)))
}

fn trace_cyclic(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let (i, j) = (random_dims(rng, 2), random_dims(rng, 2));
    let a = random_tensor(Shape::new(i.clone(), j.clone())?, rng)?;
    let b = random_tensor(Shape::new(j, i)?, rng)?;
    let ab = a.einstein_product(&b, 2)?.trace()?;
    let ba = b.einstein_product(&a, 2)?.trace()?;
    Ok((ab - ba).norm() / (scale_of(&a) * scale_of(&b) * 36.0))
}

fn dilation_norm(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let m = rng.random_range(1..=2);
    let y = random_tensor(Shape::new(random_dims(rng, m), random_dims(rng, m))?, rng)?;
    let norm = spectral_norm(&y);
    Ok((lambda_max(&hermitian_dilation(&y)?) - norm).abs() / norm.max(1.0))
}

fn spectral_mapping(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let dims = random_dims(rng, 2);
    let x = random_hermitian(&dims, 1.0, rng)?;
    let pd = random_pd(&dims, 0.1, 4.0, rng)?;
    let square = spectral_mapping_error(&x, &SpectralFn::Power(2.0))?;
    let exp = spectral_mapping_error(&x, &SpectralFn::Exp)?;
    let log = spectral_mapping_error(&pd, &SpectralFn::Log)?;
    Ok(square.max(exp / lambda_max(&x).exp().max(1.0)).max(log))
}

fn exp_log_round_trip(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let pd = random_pd(&random_dims(rng, 2), 0.1, 4.0, rng)?;
    let back = tensor_exp(&tensor_log(&pd)?)?;
    Ok(max_abs_diff(back.as_tensor(), pd.as_tensor()) / 4.0)
}

fn golden_thompson_check(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let dims = random_dims(rng, 2);
    let (x, y) = (random_hermitian(&dims, 1.0, rng)?, random_hermitian(&dims, 1.0, rng)?);
    let c = golden_thompson(&x, &y)?;
    Ok((-c.gap() / c.greater.abs().max(1.0)).max(0.0))
}

fn klein_check(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let dims = random_dims(rng, 2);
    let (x, y) = (random_pd(&dims, 0.05, 3.0, rng)?, random_pd(&dims, 0.05, 3.0, rng)?);
    let c = klein(&x, &y)?;
    Ok((-c.gap() / c.greater.abs().max(1.0)).max(0.0))
}

fn lieb_check(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let dims = random_dims(rng, 2);
    let h = random_hermitian(&dims, 1.0, rng)?;
    let (a1, a2) = (random_pd(&dims, 0.05, 3.0, rng)?, random_pd(&dims, 0.05, 3.0, rng)?);
    let c = lieb_midpoint(&h, &a1, &a2)?;
    Ok((-c.gap() / c.greater.abs().max(1.0)).max(0.0))
}

fn log_monotone_check(rng: &mut ChaCha8Rng, _: &Hooks) -> Result<f64> {
    let dims = random_dims(rng, 2);
    let y = random_pd(&dims, 0.05, 3.0, rng)?;
    let x = y.add(&random_pd(&dims, 0.0, 1.0, rng)?)?;
    let v = log_monotone(&x, &y, 0.0)?;
    Ok((-v.lambda_min_of_difference).max(0.0))
}

const CHECKS: [(&str, Check); 11] = [
    ("einstein_vs_index_loops", einstein_vs_loops),
    ("adjoint_unfolding", adjoint_unfolding),
    ("adjoint_reverses_products", adjoint_reverses_products),
    ("trace_cyclic", trace_cyclic),
    ("dilation_norm", dilation_norm),
    ("spectral_mapping", spectral_mapping),
    ("exp_log_round_trip", exp_log_round_trip),
    ("golden_thompson", golden_thompson_check),
    ("klein", klein_check),
    ("lieb_midpoint", lieb_check),
    ("log_monotone", log_monotone_check),
];

fn run_check(
    index: usize,
    name: &'static str,
    check: Check,
    seed: u64,
    instances: usize,
    hooks: &Hooks,
) -> SelftestCheck {
    let family = StreamFamily::new(seed, PURPOSE_BASE + index as u64);
    let mut max_error = 0.0f64;
    let mut failed = false;
    for k in 0..instances {
        match check(&mut family.rng(k as u64), hooks) {
            Ok(err) if err.is_finite() => max_error = max_error.max(err),
            _ => failed = true,
        }
    }
    SelftestCheck {
        name,
        instances,
        max_error: if failed { f64::INFINITY } else { max_error },
        pass: !failed && max_error <= TOL,
    }
}

pub fn run_selftest(seed: u64, instances: usize, hooks: &Hooks) -> SelftestReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, &(name, check))| run_check(i, name, check, seed, instances, hooks))
        .collect();
    SelftestReport { seed, checks }
}

pub(super) fn command(a: &SelftestArgs, hooks: Hooks, out: &mut dyn Write) -> Result<i32> {
    let report = run_selftest(a.seed, a.instances, &hooks);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        for c in &report.checks {
            writeln!(
                out,
                "{:<28} {:>4} {:>12.3e}  {}",
                c.name,
                c.instances,
                c.max_error,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_FAILURE })
}
