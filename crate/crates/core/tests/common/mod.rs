#![allow(dead_code)]

pub mod oracle;

use dualball::bpb::OperatorIntoC0;
use dualball::retract::RetractionHandle;
use dualball::sampling::{unit_direction, vector_with_norm};
use dualball::space::{DualElement, PrimalVector, Space, SpaceSpec};
use rand::Rng;

pub fn lp(p: f64, dim: usize) -> Space {
    Space::new(SpaceSpec::lp(p, dim).unwrap()).unwrap()
}

pub fn sup(dim: usize) -> Space {
    Space::new(SpaceSpec::sup(dim).unwrap()).unwrap()
}

pub fn c0_of_l2(dims: &[usize]) -> Space {
    let comps = dims.iter().map(|&d| SpaceSpec::lp(2.0, d).unwrap()).collect();
    Space::new(SpaceSpec::c0_sum(comps).unwrap()).unwrap()
}

/// Truncation handles on duals of c₀-type and ℓ_p-type leaves, dims 2–8.
pub fn truncation_spaces() -> Vec<Space> {
    let mut out = Vec::new();
    for d in 2..=8 {
        out.push(sup(d));
        out.push(lp([1.5, 2.0, 3.0][d % 3], d));
    }
    out
}

/// One handle per family, labelled.
pub fn handle_families() -> Vec<(String, RetractionHandle)> {
    let mut out = vec![
        ("radial l2^4".to_string(), RetractionHandle::radial(&lp(2.0, 4))),
        ("radial l1^3".to_string(), RetractionHandle::radial(&lp(1.0, 3))),
    ];
    for s in truncation_spaces() {
        out.push((format!("truncation on dual of {}", s.spec()), RetractionHandle::truncation(&s).unwrap()));
    }
    let children = vec![
        RetractionHandle::truncation(&sup(3)).unwrap(),
        RetractionHandle::truncation(&lp(2.0, 2)).unwrap(),
        RetractionHandle::radial(&lp(3.0, 2)),
    ];
    out.push(("l1-sum of 3 children".to_string(), RetractionHandle::l1_sum(children).unwrap()));
    out.push(("c0 chain 2 x l2^2".to_string(), RetractionHandle::c0_chain(&c0_of_l2(&[2, 2])).unwrap()));
    out.push(("c0 chain l2^3, l2^1, l2^2".to_string(), RetractionHandle::c0_chain(&c0_of_l2(&[3, 1, 2])).unwrap()));
    out.push((
        "transfer of truncation on C(K)*, |L| = 4".to_string(),
        RetractionHandle::transferred(RetractionHandle::truncation(&sup(5)).unwrap()).unwrap(),
    ));
    out.push((
        "transfer of radial on C(K)*, |L| = 3".to_string(),
        RetractionHandle::transferred(RetractionHandle::radial(&sup(4))).unwrap(),
    ));
    out
}

/// Random dual element: inside, on or outside the ball, dense or sparse.
pub fn random_dual<R: Rng>(space: &Space, rng: &mut R) -> DualElement {
    let dual = space.dual_spec();
    let radius = match rng.random_range(0..4) {
        0 => rng.random_range(0.0..1.0),
        1 => 1.0,
        2 => rng.random_range(1.0..1.2),
        _ => rng.random_range(1.0..4.0),
    };
    space.dual(vector_with_norm(dual, radius, rng)).unwrap()
}

/// Adversarial pair `(x*, y*)` near the sphere, often straddling a crossing index.
pub fn adversarial_pair<R: Rng>(space: &Space, rng: &mut R) -> (DualElement, DualElement) {
    let dual = space.dual_spec();
    let t = 10f64.powf(rng.random_range(-6.0..0.3));
    let x = space.dual(vector_with_norm(dual, rng.random_range(0.9..1.5), rng)).unwrap();
    let y = match rng.random_range(0..3) {
        0 => x.add_scaled(t, &space.dual(vector_with_norm(dual, 1.0, rng)).unwrap()).unwrap(),
        _ => {
            // Move a single coordinate: the crossing index can shift by one.
            let j = rng.random_range(0..space.dim());
            let mut c = x.coords().to_vec();
            c[j] += if rng.random_bool(0.5) { t } else { -t };
            x.with_coords(c).unwrap()
        }
    };
    (x, y)
}

/// `(x, f)` with unit norms and `1 − ε²/4 < f(x)`, often close to the boundary.
pub fn bpb_instance<R: Rng>(space: &Space, eps: f64, rng: &mut R) -> (PrimalVector, DualElement) {
    loop {
        let x = space.primal(unit_direction(space.spec(), rng)).unwrap();
        let j = space.duality_map(&x, true).unwrap();
        let tau = rng.random_range(0.0..1.0) * eps;
        let f = j.add_scaled(tau, &space.dual(unit_direction(space.dual_spec(), rng)).unwrap()).unwrap();
        let f = f.scaled(1.0 / f.norm());
        if f.pair(&x).unwrap() > 1.0 - eps * eps / 4.0 {
            return (x, f);
        }
    }
}

/// `(T, x₀)` with `‖T‖ = 1` and `‖Tx₀‖ > 1 − η`.
pub fn operator_instance<R: Rng>(space: &Space, points: usize, eta: f64, rng: &mut R) -> (OperatorIntoC0, PrimalVector) {
    let dual = space.dual_spec();
    loop {
        let mut rows: Vec<Vec<f64>> =
            (0..points).map(|_| vector_with_norm(dual, rng.random_range(0.1..1.0), rng)).collect();
        let top = rng.random_range(0..points);
        rows[top] = vector_with_norm(dual, 1.0 - rng.random_range(0.0..1.0) * eta, rng);
        if points > 1 {
            let other = (top + rng.random_range(1..points)) % points;
            rows[other] = unit_direction(dual, rng);
        }
        let t = OperatorIntoC0::numbered(space, rows).unwrap();
        let n = space.norming_point(&t.rows()[top]).unwrap();
        let tau = rng.random_range(0.0..1.0) * eta.sqrt();
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let x0 = n.add_scaled(tau, &space.primal(unit_direction(space.spec(), rng)).unwrap()).unwrap().normalized();
        let x0 = x0.scaled(sign);
        if t.image_norm(&x0).unwrap() > 1.0 - eta {
            return (t, x0);
        }
    }
}

/// `(c, α, η, r)` with `Σαᵢcᵢ > 1 − η`.
pub fn lemma_tuple<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>, f64, f64) {
    let n = rng.random_range(1..=10);
    let w: Vec<f64> = (0..n).map(|_| -rng.random_range(f64::MIN_POSITIVE..1.0).ln()).collect();
    let total: f64 = w.iter().sum();
    let alpha: Vec<f64> = w.iter().map(|x| x / total).collect();
    let c: Vec<f64> = (0..n)
        .map(|_| if rng.random_bool(0.75) { 1.0 - 0.3 * rng.random::<f64>().powi(2) } else { rng.random_range(-1.0..=1.0) })
        .collect();
    let avg: f64 = c.iter().zip(&alpha).map(|(c, a)| c * a).sum();
    let eta = (1.0 - avg) * (1.0 + 1e-9) + 1e-12 + 0.02 * rng.random::<f64>();
    let r = rng.random_range(0.01..0.99);
    (c, alpha, eta, r)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
