use std::io::Write;

use serde_json::json;

use super::{BoundArgs, EXIT_OK};
use crate::bounds::{
    bernstein_bounded, bernstein_subexponential, chernoff_constant, chernoff_expectation_bounds, evaluate,
    expectation_norm_sandwich, subexp_expectation_upper, BoundParams, BoundValue, Regime, TheoremTag,
};
use crate::error::{Error, Result};

fn params(a: &BoundArgs) -> BoundParams {
    let base = match (&a.dims, a.dim_product) {
        (Some(dims), _) => BoundParams::from_dims(dims),
        (None, Some(d)) => BoundParams::new(d),
        (None, None) => BoundParams::default(),
    };
    base.with_sigma_sq(a.sigma_sq)
        .with_t(a.t_bound)
        .with_n(a.n)
        .with_mu(a.mu_min, a.mu_max)
        .with_mu_bar(a.mu_bar_min, a.mu_bar_max)
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

pub(super) fn command(a: &BoundArgs, out: &mut dyn Write) -> Result<i32> {
    let p = params(a);
    p.validate()?;
    match a.theorem.as_str() {
        "chernoff-constant" => {
            let c = chernoff_constant();
            if a.json {
                write_json(out, &json!({"delta_star": c.delta_star, "C": c.c}))?;
            } else {
                writeln!(out, "delta_star\t{}\nC\t{}", c.delta_star, c.c)?;
            }
        }
        "chernoff-expectation" => {
            let (lower, upper) = chernoff_expectation_bounds(&p)?;
            let c = chernoff_constant();
            if a.json {
                write_json(
                    out,
                    &json!({"lower": lower, "upper": upper, "delta_star": c.delta_star, "C": c.c}),
                )?;
            } else {
                writeln!(
                    out,
                    "lower\t{lower}\nupper\t{upper}\ndelta_star\t{}\nC\t{}",
                    c.delta_star, c.c
                )?;
            }
        }
        "subexp-expectation" => {
            let upper = subexp_expectation_upper(&p)?;
            if a.json {
                write_json(out, &json!({"upper": upper}))?;
            } else {
                writeln!(out, "upper\t{upper}")?;
            }
        }
        "sandwich" => {
            let (lower, upper) = expectation_norm_sandwich(&p);
            if a.json {
                write_json(out, &json!({"lower": lower, "upper": upper}))?;
            } else {
                writeln!(out, "lower\t{lower}\nupper\t{upper}")?;
            }
        }
        name => {
            let tag: TheoremTag = name.parse()?;
            if tag == TheoremTag::Master {
                return Err(Error::Config(
                    "master bound needs an envelope function; use the library API".into(),
                ));
            }
            if a.theta.is_empty() {
                return Err(Error::Config("--theta is required".into()));
            }
            let values = a
                .theta
                .iter()
                .map(|&theta| evaluate_with_regime(tag, &p, theta, a.regime.map(Regime::from)))
                .collect::<Result<Vec<_>>>()?;
            if a.json {
                write_json(out, &serde_json::to_value(&values)?)?;
            } else {
                writeln!(out, "theta\tbound\ttheorem")?;
                for v in &values {
                    writeln!(out, "{}\t{}\t{}", v.theta, v.value, v.theorem)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn evaluate_with_regime(tag: TheoremTag, p: &BoundParams, theta: f64, regime: Option<Regime>) -> Result<BoundValue> {
    match (tag, regime) {
        (TheoremTag::Bernstein, Some(r)) => bernstein_bounded(p, theta, r),
        (TheoremTag::Subexp, Some(r)) => bernstein_subexponential(p, theta, r),
        (_, Some(_)) => Err(Error::Config(format!(
            "--regime only applies to bernstein and subexp, not {tag}"
        ))),
        (_, None) => evaluate(tag, p, theta),
    }
}
