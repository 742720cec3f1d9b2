//! Scalar numerics used by the bound evaluators.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `width`. Returns `(x, f(x))` for the best point
/// evaluated.
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let mut iterations = 0;
    while (b - a).abs() > width && iterations < 500 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
        iterations += 1;
    }
    best
}

/// Bisection for a sign change of `f` on `[a, b]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!("no sign change on [{a}, {b}]")));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if m == a && m == b {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

// 15-point Kronrod nodes with embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Relative accuracy floor for [`integrate`]; asking for more than this
/// only burns subdivisions on rounding noise.
pub const QUADRATURE_REL_TOL: f64 = 1e-14;

/// Adaptive Gauss–Kronrod quadrature of `f` over a finite `[a, b]`. Stops
/// once the error estimate is below `max(abs_tol, QUADRATURE_REL_TOL·|I|)`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: f64, depth: u32) -> f64 {
        let (value, err) = gauss_kronrod_15(f, a, b);
        if err <= tol.max(QUADRATURE_REL_TOL * whole) || depth >= 40 {
            return value;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, 0.5 * tol, whole, depth + 1) + recurse(f, m, b, 0.5 * tol, whole, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = gauss_kronrod_15(&f, a, b).0.abs();
    recurse(&f, a, b, abs_tol, whole, 0)
}

/// Past this point `e^{-s²}` is below `1e-390` and contributes nothing.
const GAUSSIAN_TAIL_CUTOFF: f64 = 30.0;

/// `𝔊(x) = ∫₀ˣ e^{−s²} ds`, accepting `x = +∞`.
pub fn gaussian_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -gaussian_integral(-x);
    }
    integrate(|s| (-s * s).exp(), 0.0, x.min(GAUSSIAN_TAIL_CUTOFF), 1e-14)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section_minimize(|t| (t - 1.3).powi(2) + 2.0, 0.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-8);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-14).is_err());
    }

    #[test]
    fn quadrature_polynomials_exact() {
        for k in 0..10 {
            let v = integrate(|x| x.powi(k), 0.0, 1.0, 1e-15);
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k={k}");
        }
    }

    // Maclaurin series Σ (−1)ⁿ x^{2n+1} / (n! (2n+1)), fine for small x.
    fn series_oracle(x: f64) -> f64 {
        let mut term = x;
        let mut sum = 0.0;
        for n in 0..80 {
            sum += term / (2 * n + 1) as f64;
            term *= -x * x / (n + 1) as f64;
        }
        sum
    }

    #[test]
    fn gaussian_integral_against_series() {
        for &x in &[0.0, 0.1, 0.5, 1.0, 2.0, 3.0] {
            let expected = series_oracle(x);
            assert!((gaussian_integral(x) - expected).abs() < 1e-13, "x={x}");
        }
        assert!((gaussian_integral(1.0) - 0.746_824).abs() < 1e-6);
        let half_sqrt_pi = std::f64::consts::PI.sqrt() / 2.0;
        assert!((gaussian_integral(f64::INFINITY) - half_sqrt_pi).abs() < 1e-13);
    }
}
