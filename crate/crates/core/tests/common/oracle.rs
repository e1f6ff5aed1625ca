//! Brute-force references computed without the library's closed forms.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

pub fn lp_norm(p: f64, v: &[f64]) -> f64 {
    if p.is_infinite() {
        return v.iter().fold(0.0, |m, a| m.max(a.abs()));
    }
    v.iter().map(|a| a.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn unit(p: f64, v: Vec<f64>) -> Vec<f64> {
    let n = lp_norm(p, &v);
    v.into_iter().map(|a| a / n).collect()
}

fn arc(p: f64, theta: f64) -> Vec<f64> {
    unit(p, vec![theta.cos(), theta.sin()])
}

// Nonnegative part of the unit sphere of ℓ_p^3 on a `n × n` angular grid.
fn octant(p: f64, n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a = FRAC_PI_2 * i as f64 / (n - 1) as f64;
            let b = FRAC_PI_2 * j as f64 / (n - 1) as f64;
            out.push(unit(p, vec![a.sin() * b.cos(), a.sin() * b.sin(), a.cos()]));
        }
    }
    out
}

// Quarter circles of ℓ_p^3 lying in each coordinate plane.
fn plane_arcs(p: f64, n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for k in 0..n {
            let q = arc(p, FRAC_PI_2 * k as f64 / (n - 1) as f64);
            let mut v = vec![0.0; 3];
            v[i] = q[0];
            v[j] = q[1];
            out.push(v);
        }
    }
    out
}

fn monotonicity_over(p: f64, eps: f64, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> f64 {
    xs.par_iter()
        .map(|x| {
            ys.iter()
                .map(|y| {
                    let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + eps * b).collect();
                    lp_norm(p, &s) - 1.0
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Grid minimum of `‖|x| + |y|‖_p − 1` over nonnegative unit `x` and `y = ε·(unit)`.
///
/// Dimension 2 uses one fine quarter-circle grid; dimension 3 combines a coarse
/// octant grid with fine coordinate-plane arcs.
pub fn monotonicity_grid(p: f64, dim: usize, eps: f64) -> f64 {
    match dim {
        2 => {
            let q: Vec<Vec<f64>> = (0..=400).map(|k| arc(p, FRAC_PI_2 * k as f64 / 400.0)).collect();
            monotonicity_over(p, eps, &q, &q)
        }
        3 => {
            let coarse = octant(p, 14);
            let planes = plane_arcs(p, 120);
            monotonicity_over(p, eps, &coarse, &coarse).min(monotonicity_over(p, eps, &planes, &planes))
        }
        _ => panic!("grid oracle covers dimensions 2 and 3"),
    }
}

// Point at chord distance exactly `eps` from `x` along the curve `y(s)`, s ∈ [0, 1]
// with y(0) = x and y(1) = −x; chord length is monotone along a symmetric convex curve.
fn at_distance(p: f64, x: &[f64], eps: f64, y: impl Fn(f64) -> Vec<f64>) -> Vec<f64> {
    let dist = |s: f64| {
        let v = y(s);
        lp_norm(p, &x.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>())
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) < eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    y(hi)
}

fn midpoint_gap(p: f64, x: &[f64], y: &[f64]) -> f64 {
    1.0 - lp_norm(p, &x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect::<Vec<_>>())
}

/// `min_θ 1 − ‖(x(θ) + y)/2‖_p` over the ℓ_p^2 unit circle with `‖x − y‖ = ε`.
pub fn convexity_circle(p: f64, eps: f64, n: usize) -> f64 {
    (0..n)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64;
            let x = arc(p, theta);
            let y = at_distance(p, &x, eps, |s| arc(p, theta + PI * s));
            midpoint_gap(p, &x, &y)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Smallest `1 − ‖(x + y)/2‖` seen over random planes of ℓ_p^3 through the
/// origin, with `‖x − y‖ = ε`.
pub fn convexity_random_planes(p: f64, eps: f64, samples: usize, seed: u64) -> f64 {
    use dualball::sampling::stream;
    use rand::Rng;
    use rand_distr::StandardNormal;
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(seed, k as u64);
            let mut g = || -> Vec<f64> { (0..3).map(|_| rng.sample(StandardNormal)).collect() };
            let x = unit(p, g());
            let u = g();
            let y = at_distance(p, &x, eps, |s| {
                let a = PI * s;
                unit(p, x.iter().zip(&u).map(|(xi, ui)| a.cos() * xi + a.sin() * ui).collect())
            });
            midpoint_gap(p, &x, &y)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Maximizer of `⟨f, x⟩` over the ℓ_p^2 unit circle: angular scan, then golden section.
pub fn norming_circle(p: f64, f: &[f64]) -> Vec<f64> {
    let value = |t: f64| {
        let x = arc(p, t);
        f[0] * x[0] + f[1] * x[1]
    };
    let n = 7200;
    let step = 2.0 * PI / n as f64;
    let best = (0..n).map(|k| k as f64 * step).max_by(|a, b| value(*a).total_cmp(&value(*b))).unwrap();
    let (mut a, mut b) = (best - step, best + step);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if value(c) > value(d) {
            b = d;
        } else {
            a = c;
        }
    }
    arc(p, 0.5 * (a + b))
}

/// Minimum-ℓ₂-norm `h` with `h_j = g_j` on the support: `h = Aᵀ(AAᵀ)⁻¹g` with
/// `A` the coordinate constraint rows.
pub fn lagrange_extension(dim: usize, support: &[usize], values: &[f64]) -> Vec<f64> {
    let m = support.len();
    let a = DMatrix::from_fn(m, dim, |i, j| if support[i] == j { 1.0 } else { 0.0 });
    let g = DVector::from_column_slice(values);
    let gram = &a * a.transpose();
    let lambda = gram.lu().solve(&g).expect("constraint rows are independent");
    (a.transpose() * lambda).iter().copied().collect()
}
