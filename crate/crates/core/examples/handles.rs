//! Composite retraction handles, their bounds and their JSON descriptors.

use dualball::retract::RetractionHandle;
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    let children = vec![
        RetractionHandle::truncation(&Space::new(SpaceSpec::sup(2)?)?)?,
        RetractionHandle::truncation(&Space::new(SpaceSpec::lp(2.0, 2)?)?)?,
        RetractionHandle::radial(&Space::new(SpaceSpec::lp(3.0, 1)?)?),
    ];
    let sum = RetractionHandle::l1_sum(children)?;
    println!("{} handle on {}", sum.kind_name(), sum.space().spec());
    let f = sum.space().dual(vec![0.8, 0.7, 0.6, 0.9, 0.5])?;
    let image = sum.apply(&f)?;
    println!("  {:?} -> {:?} (norm {:.6})", f.coords(), image.coords(), image.norm());
    println!("  nearest-point defect {:.3e}", sum.nearest_point_defect(&f)?);
    for t in [0.01, 0.1, 0.5] {
        println!("  t = {t}: modulus bound {:.4}, nearest-point bound {:.4}", sum.modulus_bound(t), sum.nearest_point_bound(t));
    }
    println!("{}", serde_json::to_string_pretty(&sum.descriptor())?);
    Ok(())
}
