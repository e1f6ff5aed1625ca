//! A functional that almost attains its norm at x, moved to one that attains it at a nearby y.

use dualball::bpb::bpb_point;
use dualball::space::{Space, SpaceSpec};

fn main() -> dualball::Result<()> {
    let space = Space::new(SpaceSpec::lp(3.0, 4)?)?;
    let eps = 0.5;
    let f = space.dual(vec![0.8, 0.5, -0.3, 0.2])?;
    let f = f.scaled(1.0 / f.norm());
    let x = space.primal(vec![0.75, 0.6, -0.4, 0.1])?.normalized();
    println!("f(x) = {:.6}, premise needs > {:.6}", f.pair(&x)?, 1.0 - eps * eps / 4.0);
    let out = bpb_point(&x, &f, eps)?;
    println!("strategy {:?}", out.strategy);
    println!("y = {:?}", out.y.coords());
    println!("g = {:?}", out.g.coords());
    println!("g(y) = {:.12}, |x - y| = {:.4}, |f - g| = {:.4}", out.g.pair(&out.y)?, out.point_distance, out.functional_distance);
    Ok(())
}
