//! Moving a retraction on C(K)* with K = L ∪ {∞} down to measures on L.

use dualball::compactify::{extend_measure, transfer_retract, FiniteMeasure};
use dualball::retract::RetractionHandle;
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    let mu = FiniteMeasure::new(vec!["a".into(), "b".into(), "c".into()], vec![0.6, -0.5, 0.4])?;
    println!("mu = {}, total variation {:.2}", serde_json::to_string(&mu)?, mu.norm());
    println!("extended = {}", serde_json::to_string(&extend_measure(&mu)?)?);
    let on_k = RetractionHandle::truncation(&Space::new(SpaceSpec::sup(mu.len() + 1)?)?)?;
    let psi = transfer_retract(&on_k, &mu)?;
    println!("psi(mu) = {}, total variation {:.2}", serde_json::to_string(&psi)?, psi.norm());
    let handle = RetractionHandle::transferred(on_k)?;
    println!("as a handle: {:?}", handle.apply(&mu.to_dual()?)?.coords());
    Ok(())
}
