//! Weight carried by the large coefficients of a near-extremal convex series.

use dualball::bpb::convex_series_bound;

fn main() -> dualball::Result<()> {
    let c = [1.0, 0.98, 0.95, 0.2, -0.4];
    let alpha = [0.3, 0.3, 0.3, 0.05, 0.05];
    let average: f64 = c.iter().zip(&alpha).map(|(c, a)| c * a).sum();
    let eta = 1.0 - average + 1e-3;
    for r in [0.1, 0.5, 0.9, 0.97] {
        let out = convex_series_bound(&c, &alpha, eta, r)?;
        println!("r = {r}: indices {:?}, mass {:.3} vs threshold {:.3} -> ok = {}", out.indices, out.mass, out.threshold, out.ok);
    }
    Ok(())
}
