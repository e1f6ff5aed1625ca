//! Closed-form moduli of monotonicity and convexity next to sampled estimates.

use dualball::moduli::{modulus_convexity, monotonicity_modulus, sampled_monotonicity, SamplingConfig};
use dualball::space::SpaceSpec;

fn main() -> dualball::Result<()> {
    let specs = [
        SpaceSpec::lp(1.0, 3)?,
        SpaceSpec::lp(1.5, 3)?,
        SpaceSpec::lp(2.0, 3)?,
        SpaceSpec::lp(4.0, 3)?,
        SpaceSpec::sup(3)?,
        SpaceSpec::l1_sum(vec![SpaceSpec::lp(2.0, 2)?, SpaceSpec::lp(3.0, 2)?])?,
    ];
    let sampling = SamplingConfig::default();
    for spec in &specs {
        let m = monotonicity_modulus(spec);
        println!("{spec}");
        println!("  {:>5} {:>12} {:>12} {:>12} {:>12}", "eps", "M", "M sampled", "M^-1(M)", "delta");
        for eps in [0.1, 0.5, 1.0] {
            let delta = modulus_convexity(spec, eps).map_or("-".to_string(), |d| format!("{d:.6e}"));
            let sampled = sampled_monotonicity(spec, eps, &sampling)?;
            println!(
                "  {eps:>5} {:>12.6e} {sampled:>12.6e} {:>12.6} {delta:>12}",
                m.eval(eps),
                m.inverse(m.eval(eps))
            );
        }
    }
    Ok(())
}
