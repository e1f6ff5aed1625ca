//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::oracle;
use common::*;
use dualball::bpb::{bpb_point, convex_series_bound, perturb_compact, perturb_general, Bump, UNIT_TOL};
use dualball::moduli::{modulus_convexity, modulus_monotonicity};
use dualball::retract::{hahn_banach_min_extension, RetractionHandle, ROOT_TOL};
use dualball::sampling::{stream, vector_with_norm};
use dualball::space::{conjugate_exponent, DualElement, Space, SpaceSpec};
use dualball::Error;
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "retraction suite", budget: Some(Duration::from_secs(60)), check: retraction_suite },
        Criterion { name: "modulus bound", budget: Some(Duration::from_secs(60)), check: modulus_bound },
        Criterion { name: "nearest-point bound", budget: None, check: nearest_point_bound },
        Criterion { name: "weak-* proxy sequences", budget: None, check: weak_star_sequences },
        Criterion { name: "BPB functional", budget: None, check: bpb_functional },
        Criterion { name: "compact perturbation", budget: Some(Duration::from_secs(120)), check: compact_perturbation },
        Criterion { name: "convex-series lemma", budget: None, check: convex_series_lemma },
        Criterion { name: "oracle equivalence", budget: None, check: oracle_equivalence },
        Criterion { name: "CLI determinism", budget: None, check: cli_determinism },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = (c.check)();
        let elapsed = start.elapsed();
        if let (Ok(detail), Some(budget)) = (&outcome, c.budget) {
            if elapsed > budget {
                outcome = Err(format!("{detail}; took {elapsed:.1?}, budget {budget:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS {}. {}: {detail} ({elapsed:.1?})", i + 1, c.name),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {}: {detail} ({elapsed:.1?})", i + 1, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

const SUITE_SAMPLES: u64 = 10_000;

fn retraction_suite() -> Outcome {
    let families = handle_families();
    for (f, (label, handle)) in families.iter().enumerate() {
        let worst = (0..SUITE_SAMPLES)
            .into_par_iter()
            .map(|k| -> Result<(f64, f64), String> {
                let mut rng = stream(100 + f as u64, k);
                let x = random_dual(handle.space(), &mut rng);
                let y = handle.apply(&x).map_err(|e| format!("{label}: {e}"))?;
                if x.norm() <= 1.0 && y.coords() != x.coords() {
                    return Err(format!("{label}: sample {k} moved a point of the ball"));
                }
                let yy = handle.apply(&y).map_err(|e| format!("{label}: {e}"))?;
                Ok((y.norm() - 1.0, yy.distance(&y).unwrap()))
            })
            .try_reduce(|| (f64::NEG_INFINITY, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
        if worst.0 > 1e-9 {
            return Err(format!("{label}: image norm exceeds 1 by {:e}", worst.0));
        }
        if worst.1 > 1e-9 {
            return Err(format!("{label}: idempotence defect {:e}", worst.1));
        }
    }
    Ok(format!("{} families x {SUITE_SAMPLES} inputs", families.len()))
}

// `M⁻¹` of the dual lattice computed from the exponent alone.
fn inverse_monotonicity(space: &Space) -> impl Fn(f64) -> f64 {
    let q = match space.spec() {
        SpaceSpec::Sup { .. } => 1.0,
        SpaceSpec::Lp { p, .. } => conjugate_exponent(*p),
        other => panic!("no closed form for {other}"),
    };
    move |t: f64| if q == 1.0 { t } else { ((1.0 + t).powf(q) - 1.0).powf(1.0 / q) }
}

fn modulus_bound() -> Outcome {
    let spaces = truncation_spaces();
    let mut worst = f64::NEG_INFINITY;
    for (s, space) in spaces.iter().enumerate() {
        let handle = RetractionHandle::truncation(space).map_err(|e| e.to_string())?;
        let inv = inverse_monotonicity(space);
        let excess = (0..SUITE_SAMPLES)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(200 + s as u64, k);
                let (x, y) = adversarial_pair(space, &mut rng);
                let t = x.distance(&y).unwrap();
                let moved = handle.apply(&x).unwrap().distance(&handle.apply(&y).unwrap()).unwrap();
                let bound = 2.0 * inv(t);
                let declared = handle.modulus_bound(t);
                if declared < bound.min(2.0) - 1e-9 {
                    f64::INFINITY
                } else {
                    moved - bound
                }
            })
            .reduce(|| f64::NEG_INFINITY, f64::max);
        if excess > 1e-6 {
            return Err(format!("on the dual of {}: bound exceeded by {excess:e}", space.spec()));
        }
        worst = worst.max(excess);
    }
    Ok(format!("{} spaces x {SUITE_SAMPLES} pairs, max ‖Δφ‖ − 2M⁻¹(t) = {worst:.2e}", spaces.len()))
}

fn nearest_point_bound() -> Outcome {
    let spaces = truncation_spaces();
    let mut worst = f64::NEG_INFINITY;
    for (s, space) in spaces.iter().enumerate() {
        let handle = RetractionHandle::truncation(space).map_err(|e| e.to_string())?;
        let inv = inverse_monotonicity(space);
        let excess = (0..SUITE_SAMPLES)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream(300 + s as u64, k);
                let radius = if rng.random_bool(0.5) {
                    1.0 + 10f64.powf(rng.random_range(-6.0..0.0))
                } else {
                    rng.random_range(1.0..4.0)
                };
                let x = space.dual(vector_with_norm(space.dual_spec(), radius, &mut rng)).unwrap();
                if x.norm() <= 1.0 {
                    return f64::NEG_INFINITY;
                }
                let moved = x.distance(&handle.apply(&x).unwrap()).unwrap();
                moved - inv(x.norm() - 1.0)
            })
            .reduce(|| f64::NEG_INFINITY, f64::max);
        if excess > 1e-6 {
            return Err(format!("on the dual of {}: bound exceeded by {excess:e}", space.spec()));
        }
        worst = worst.max(excess);
    }
    Ok(format!("{} spaces x {SUITE_SAMPLES} samples, max ‖x − φx‖ − M⁻¹(‖x‖ − 1) = {worst:.2e}", spaces.len()))
}

/// Coordinatewise error of `φ(x_k)` against `φ(x)` along `k = 10¹, …, 10¹²`.
fn sequence_errors(space: &Space, limit: &[f64], term: impl Fn(f64) -> Vec<f64>) -> Vec<f64> {
    let handle = RetractionHandle::truncation(space).unwrap();
    let target = handle.apply(&space.dual(limit.to_vec()).unwrap()).unwrap();
    (1..=12)
        .map(|m| {
            let image = handle.apply(&space.dual(term(10f64.powi(-m))).unwrap()).unwrap();
            max_abs_diff(image.coords(), target.coords())
        })
        .collect()
}

// Errors must be non-increasing and stay under the Hölder envelope `2(q·h)^{1/q}`
// of a crossing displaced by `h` in an ℓ_q lattice.
fn converging(label: &str, q: f64, errors: &[f64]) -> Result<(), String> {
    // Allow for the bisection tolerance on the crossing scale.
    let slack = 10.0 * ROOT_TOL;
    if errors.windows(2).any(|w| w[1] > w[0] + slack) {
        return Err(format!("{label}: errors not non-increasing {errors:?}"));
    }
    for (m, e) in (1..).zip(errors) {
        let h = 10f64.powi(-m);
        if *e > 2.0 * (q * h).powf(1.0 / q) + slack {
            return Err(format!("{label}: error {e:e} at h = {h:e} above the envelope"));
        }
    }
    Ok(())
}

fn weak_star_sequences() -> Outcome {
    let mut cases = 0;
    for space in [sup(3), lp(2.0, 3), lp(1.5, 3), lp(3.0, 3)] {
        let q = match space.spec() {
            SpaceSpec::Sup { .. } => 1.0,
            SpaceSpec::Lp { p, .. } => conjugate_exponent(*p),
            _ => unreachable!(),
        };
        let name = space.spec().to_string();
        let stable = [0.5, 1.2, 0.4];
        converging(
            &format!("stable crossing on the dual of {name}"),
            q,
            &sequence_errors(&space, &stable, |h| vec![0.5 + h, 1.2 - h, 0.4 + h]),
        )?;
        // Partial norm of the limit reaches exactly 1 at index 1.
        let a1 = (1.0 - 0.5f64.powf(q)).powf(1.0 / q);
        let edge = [0.5, a1, 0.4];
        converging(
            &format!("shifting crossing on the dual of {name}"),
            q,
            &sequence_errors(&space, &edge, |h| vec![0.5, a1 - h, 0.4]),
        )?;
        converging(
            &format!("t → 1 on the dual of {name}"),
            q,
            &sequence_errors(&space, &edge, |h| vec![0.5, a1 + h, 0.4]),
        )?;
        cases += 3;
    }
    // Inside the ball, with a fixed mass escaping to ever farther coordinates.
    for p in [f64::INFINITY, 2.0] {
        let errors: Vec<f64> = (1..=12)
            .map(|m| {
                let dim = 4 + m as usize;
                let space = if p.is_infinite() { sup(dim) } else { lp(p, dim) };
                let handle = RetractionHandle::truncation(&space).unwrap();
                let mut c = vec![0.0; dim];
                c[..3].copy_from_slice(&[0.3 + 10f64.powi(-m), 0.2, 0.1]);
                c[dim - 1] = 0.3;
                let image = handle.apply(&space.dual(c).unwrap()).unwrap();
                max_abs_diff(&image.coords()[..dim - 1], &[&[0.3, 0.2, 0.1][..], &vec![0.0; dim - 4]].concat())
            })
            .collect();
        converging(&format!("always inside, escaping mass, p = {p}"), 1.0, &errors)?;
        cases += 1;
    }
    Ok(format!("{cases} sequences converge coordinatewise, k = 10¹..10¹²"))
}

const BPB_SAMPLES: u64 = 1_000;
const EPSILONS: [f64; 5] = [0.05, 0.1, 0.2, 0.4, 0.8];

fn bpb_functional() -> Outcome {
    let mut report = Vec::new();
    for p in [2.0, 3.0] {
        let stats = (0..BPB_SAMPLES)
            .into_par_iter()
            .map(|k| -> Result<(f64, f64), String> {
                let space = lp(p, 2 + (k % 7) as usize);
                let eps = EPSILONS[(k % 5) as usize];
                let mut rng = stream(500 + p as u64, k);
                let (x, f) = bpb_instance(&space, eps, &mut rng);
                let out = match bpb_point(&x, &f, eps) {
                    Ok(o) => o,
                    Err(Error::SearchExhausted) => return Err(format!("SearchExhausted in {}", space.spec())),
                    Err(e) => return Err(e.to_string()),
                };
                let pair = out.g.pair(&out.y).unwrap();
                let (dy, dg) = (x.distance(&out.y).unwrap(), f.distance(&out.g).unwrap());
                let units = (out.y.norm() - 1.0).abs().max((out.g.norm() - 1.0).abs());
                if (pair - 1.0).abs() > UNIT_TOL || units > UNIT_TOL || dy >= eps || dg >= eps {
                    return Err(format!(
                        "{} at ε = {eps}: pair {pair}, ‖x − y‖ = {dy}, ‖f − g‖ = {dg}",
                        space.spec()
                    ));
                }
                Ok((dy / eps, dg / eps))
            })
            .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
        report.push(format!("ℓ{p}: max ‖x − y‖/ε = {:.3}, max ‖f − g‖/ε = {:.3}", stats.0, stats.1));
    }
    Ok(format!("{BPB_SAMPLES} instances each, no SearchExhausted; {}", report.join("; ")))
}

fn compact_perturbation() -> Outcome {
    let stats = (0..BPB_SAMPLES)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64), String> {
            let space = lp([2.0, 3.0, 1.5][(k % 3) as usize], 2 + (k % 5) as usize);
            let eps = EPSILONS[(k % 4) as usize];
            let mut rng = stream(600, k);
            let (t, x0) = operator_instance(&space, 1 + (k % 4) as usize, eps * eps / 64.0, &mut rng);
            let cert = perturb_compact(&t, &x0, eps).map_err(|e| format!("{}: {e}", space.spec()))?;
            if !cert.attains(1e-9) {
                return Err(format!("{} at ε = {eps}: norms {:?}", space.spec(), cert.attained_norms()));
            }
            if cert.distance > 4.0 * eps {
                return Err(format!("{} at ε = {eps}: ‖S − T‖ = {}", space.spec(), cert.distance));
            }
            let radial = RetractionHandle::radial(&space);
            let general = perturb_general(&t, &x0, eps, &radial, &Bump::Ones).map_err(|e| e.to_string())?;
            let bound = 4.0 * eps + radial.nearest_point_bound(2.0 * eps);
            if !general.attains(1e-9) || general.distance > bound {
                return Err(format!("{} at ε = {eps}: general distance {} > {bound}", space.spec(), general.distance));
            }
            Ok((cert.distance / eps, general.distance / bound))
        })
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
    Ok(format!(
        "{BPB_SAMPLES} instances; max ‖S − T‖/ε = {:.3}, max general distance / bound = {:.3}",
        stats.0, stats.1
    ))
}

fn convex_series_lemma() -> Outcome {
    let margin = (0..SUITE_SAMPLES)
        .into_par_iter()
        .map(|k| -> Result<f64, String> {
            let mut rng = stream(700, k);
            let (c, alpha, eta, r) = lemma_tuple(&mut rng);
            let out = convex_series_bound(&c, &alpha, eta, r).map_err(|e| format!("tuple {k}: {e}"))?;
            if !out.ok {
                return Err(format!("tuple {k}: mass {} below threshold {}", out.mass, out.threshold));
            }
            Ok(out.mass - out.threshold)
        })
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))?;
    Ok(format!("{SUITE_SAMPLES} tuples, min mass − threshold = {margin:.2e}"))
}

fn oracle_equivalence() -> Outcome {
    let exponents = [1.5, 2.0, 3.0, 4.0];
    let mut gap_m = 0.0_f64;
    for &p in &exponents {
        for dim in [2, 3] {
            for eps in [0.1, 0.3, 0.5, 0.8, 1.0] {
                let analytic = modulus_monotonicity(&SpaceSpec::lp(p, dim).unwrap(), eps).map_err(|e| e.to_string())?;
                let grid = oracle::monotonicity_grid(p, dim, eps);
                gap_m = gap_m.max((analytic - grid).abs());
            }
        }
    }
    let mut gap_d = 0.0_f64;
    for &p in &exponents {
        for eps in [0.2, 0.5, 1.0, 1.5] {
            let planar = oracle::convexity_circle(p, eps, 20_000);
            let spatial = planar.min(oracle::convexity_random_planes(p, eps, 2_000, 800));
            for dim in [2, 3] {
                let analytic = modulus_convexity(&SpaceSpec::lp(p, dim).unwrap(), eps).map_err(|e| e.to_string())?;
                let grid = if dim == 2 { planar } else { spatial };
                gap_d = gap_d.max((analytic - grid).abs());
            }
        }
    }
    let mut gap_hb = 0.0_f64;
    let mut rng = stream(900, 0);
    for k in 0..500 {
        let dim = 2 + k % 7;
        let space = lp(2.0, dim);
        let support: Vec<usize> = (0..dim).filter(|_| rng.random_bool(0.5)).collect();
        let values: Vec<f64> = support.iter().map(|_| rng.random_range(-2.0..2.0)).collect();
        let ours: DualElement = hahn_banach_min_extension(&space, &support, &values).map_err(|e| e.to_string())?;
        let lagrange = if support.is_empty() { vec![0.0; dim] } else { oracle::lagrange_extension(dim, &support, &values) };
        gap_hb = gap_hb.max(max_abs_diff(ours.coords(), &lagrange));
    }
    let detail = format!("|M − grid| ≤ {gap_m:.1e}, |δ − grid| ≤ {gap_d:.1e}, |HB − Lagrange| ≤ {gap_hb:.1e}");
    if gap_m <= 1e-3 && gap_d <= 1e-3 && gap_hb <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn subcommand_of(config: &Path) -> Result<String, String> {
    let text = fs::read_to_string(config).map_err(|e| e.to_string())?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let experiment = value["experiment"].as_str().ok_or("config without experiment")?;
    Ok(match experiment {
        "retraction-continuity" => "continuity",
        "perturbation" => "perturb",
        "convex-lemma" => "lemma",
        other => other,
    }
    .to_string())
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut configs: Vec<_> = fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    configs.sort();
    for config in &configs {
        let sub = subcommand_of(config)?;
        let out = dir.path().join(config.file_stem().unwrap()).with_extension("csv");
        let mut runs = Vec::new();
        for _ in 0..2 {
            let status = Command::new(env!("CARGO_BIN_EXE_dualball-lab"))
                .arg(&sub)
                .arg("--config")
                .arg(config)
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!("{}: exit {:?}", config.display(), status.status.code()));
            }
            let csv = fs::read(&out).map_err(|e| e.to_string())?;
            let sidecar = fs::read(out.with_extension("json")).map_err(|e| e.to_string())?;
            runs.push((csv, sidecar));
        }
        if runs[0] != runs[1] {
            return Err(format!("{}: outputs differ between runs", config.display()));
        }
    }
    Ok(format!("{} shipped configs, two runs each, byte-identical and all passing", configs.len()))
}
