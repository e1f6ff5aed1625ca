//! Norm-attaining perturbation of an operator into C(K) for a three-point K.

use dualball::bpb::{perturb_compact, perturb_general, Bump, OperatorIntoC0};
use dualball::retract::RetractionHandle;
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    let space = Space::new(SpaceSpec::lp(2.0, 2)?)?;
    let rows = vec![vec![0.9995, 0.0], vec![0.0, 0.6], vec![-0.3, 0.3]];
    let t = OperatorIntoC0::new(&space, vec!["s".into(), "u".into(), "v".into()], rows)?;
    let x0 = space.primal(vec![1.0, 0.01])?.normalized();
    let eps = 0.2;
    println!("|T| = {:.6}, |T x0| = {:.6}, premise needs > {:.6}", t.operator_norm()?, t.image_norm(&x0)?, 1.0 - eps * eps / 64.0);
    let cert = perturb_compact(&t, &x0, eps)?;
    let (s, sx) = cert.attained_norms()?;
    println!("witness {} (sign {}), |S| = {s:.12}, |S x1| = {sx:.12}", cert.witness_label, cert.sign);
    println!("|S - T| = {:.3e} <= {}", cert.distance, 4.0 * eps);
    let radial = RetractionHandle::radial(&space);
    let general = perturb_general(&t, &x0, eps / 4.0, &radial, &Bump::Ones)?;
    println!("general form with a radial handle: |S - T| = {:.3e}, bound {:.3}", general.distance, general.bound);
    println!("{}", serde_json::to_string_pretty(&cert.new_operator)?);
    Ok(())
}
