//! Tabulates every closed-form tail bound for one parameter set, plus the
//! numeric master bound for a Gaussian log-MGF envelope.

use tensor_tail::bounds::{chernoff_constant, evaluate, master_bound_numeric, theta_range, BoundParams, TheoremTag};

fn main() -> tensor_tail::Result<()> {
    let p = BoundParams::from_dims(&[2, 2])
        .with_sigma_sq(1.0)
        .with_t(1.0)
        .with_n(8)
        .with_mu(3.0, 4.0)
        .with_mu_bar(0.4, 0.6);
    println!("{p:?}\n");
    println!("{:<18} {:>8} {:>14}", "theorem", "theta", "bound");
    for tag in TheoremTag::ALL {
        if tag == TheoremTag::Master {
            continue;
        }
        let (lo, hi) = theta_range(tag, &p);
        let theta = if hi.is_finite() { (lo + hi) / 2.0 } else { lo + 2.0 };
        let b = evaluate(tag, &p, theta)?;
        println!("{:<18} {:>8.4} {:>14.6e}", tag.as_str(), theta, b.value);
    }

    // g(t) = σ²t²/2 is the Gaussian envelope; the infimum recovers 𝕀 e^{−θ²/2σ²}
    let m = master_bound_numeric(4, |t| t * t / 2.0, 2.0, None)?;
    println!("\nmaster (gaussian envelope, θ = 2): {:.12}", m.value);
    println!(
        "closed form:                       {:.12}",
        evaluate(TheoremTag::Gaussian, &p, 2.0)?.value
    );

    let k = chernoff_constant();
    println!("\nδ* = {:.10}  C = {:.6}", k.delta_star, k.c);
    Ok(())
}
