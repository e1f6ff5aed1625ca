use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ExperimentConfig, RunReport};
use crate::bpb::{bpb_point, convex_series_bound, perturb_compact, perturb_general, Bump, OperatorIntoC0};
use crate::error::{Error, Result};
use crate::moduli::{
    modulus_convexity, modulus_inverse, modulus_monotonicity, sampled_monotonicity, ModulusCurve, SamplingConfig,
};
use crate::retract::{omega_estimate, HandleDescriptor, RetractionHandle, RetractionKind};
use crate::sampling::{stream, unit_direction, vector_with_norm};
use crate::space::Space;

const SAMPLED_TOL: f64 = 1e-3;
const BOUND_SLACK: f64 = 1e-6;
const UNIT_TOL: f64 = 1e-9;

struct Table {
    writer: csv::Writer<Vec<u8>>,
    rows: usize,
    failures: usize,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer, rows: 0, failures: 0 })
    }

    fn row(&mut self, fields: Vec<String>, pass: bool) -> Result<()> {
        let mut fields = fields;
        fields.push(pass.to_string());
        self.writer.write_record(&fields)?;
        self.rows += 1;
        self.failures += usize::from(!pass);
        Ok(())
    }

    fn finish(self) -> Result<RunReport> {
        let bytes = self.writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        let csv = String::from_utf8(bytes).expect("csv output is utf-8");
        Ok(RunReport { csv, rows: self.rows, failures: self.failures })
    }
}

fn space_of(config: &ExperimentConfig) -> Result<Space> {
    Space::new(config.space.clone()).map_err(|e| Error::ConfigInvalid(e.to_string()))
}

// One generator per (grid point, sample), results in index order.
fn per_sample<T: Send>(
    config: &ExperimentConfig,
    grid_index: usize,
    f: impl Fn(&mut ChaCha8Rng) -> T + Sync,
) -> Vec<T> {
    let base = (grid_index * config.samples) as u64;
    (0..config.samples)
        .into_par_iter()
        .map(|k| f(&mut stream(config.seed, base + k as u64)))
        .collect()
}

/// Columns `epsilon, M, delta, M_inverse_of_M, M_sampled, pass` for the
/// lattice `config.space`; `delta` is empty where the space is not uniformly
/// convex. `M_sampled` uses `config.samples` starts per coordinate.
pub fn run_modulus(config: &ExperimentConfig) -> Result<RunReport> {
    let spec = &config.space;
    let m = ModulusCurve::tabulate_fallible(&config.grid, |e| modulus_monotonicity(spec, e))?;
    let rows: Vec<Result<(f64, Option<f64>, f64, f64)>> = config
        .grid
        .par_iter()
        .enumerate()
        .map(|(i, &eps)| {
            let value = m.values()[i];
            let delta = match modulus_convexity(spec, eps) {
                Ok(d) => Some(d),
                Err(Error::NotUniformlyConvex) => None,
                Err(e) => return Err(e),
            };
            let sampling = SamplingConfig {
                samples_per_dim: config.samples,
                seed: config.seed.wrapping_add(i as u64),
                ..SamplingConfig::default()
            };
            let sampled = sampled_monotonicity(spec, eps, &sampling)?;
            Ok((value, delta, modulus_inverse(&m, value)?, sampled))
        })
        .collect();
    let mut table = Table::new(&["epsilon", "M", "delta", "M_inverse_of_M", "M_sampled", "pass"])?;
    for (&eps, row) in config.grid.iter().zip(rows) {
        let (value, delta, inverse, sampled) = row?;
        let pass = value <= eps + 1e-12 && inverse >= eps - UNIT_TOL && (sampled - value).abs() <= SAMPLED_TOL;
        let delta = delta.map_or(String::new(), |d| d.to_string());
        table.row(vec![eps.to_string(), value.to_string(), delta, inverse.to_string(), sampled.to_string()], pass)?;
    }
    table.finish()
}

/// Columns `t, omega_hat, bound_2Minv, pass`. The bound is the handle's
/// claimed modulus (`2M⁻¹(t)` for truncation); radial handles get empty bound
/// and pass columns.
pub fn run_continuity(config: &ExperimentConfig) -> Result<RunReport> {
    let descriptor = config.handle.clone().unwrap_or(HandleDescriptor::Truncation { space: config.space.clone() });
    let handle = RetractionHandle::from_descriptor(&descriptor).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
    let omega = omega_estimate(&handle, &config.grid, config.seed, config.samples)?;
    let radial = matches!(handle.kind(), RetractionKind::Radial);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["t", "omega_hat", "bound_2Minv", "pass"])?;
    let mut failures = 0;
    for (&t, &w) in omega.grid().iter().zip(omega.values()) {
        if radial {
            writer.write_record([t.to_string(), w.to_string(), String::new(), String::new()])?;
        } else {
            let bound = handle.modulus_bound(t);
            let pass = w <= bound + BOUND_SLACK;
            failures += usize::from(!pass);
            writer.write_record([t.to_string(), w.to_string(), bound.to_string(), pass.to_string()])?;
        }
    }
    let table = Table { writer, rows: omega.len(), failures };
    table.finish()
}

enum Outcome<T> {
    Skipped,
    Done(T),
    Failed(Error),
}

/// Columns `epsilon, instances, skipped, max_point_distance,
/// max_functional_distance, max_pair_error, search_exhausted, pass`.
pub fn run_bpb(config: &ExperimentConfig) -> Result<RunReport> {
    let space = space_of(config)?;
    let spec = space.spec();
    let dual = space.dual_spec();
    let mut table = Table::new(&[
        "epsilon",
        "instances",
        "skipped",
        "max_point_distance",
        "max_functional_distance",
        "max_pair_error",
        "search_exhausted",
        "pass",
    ])?;
    for (i, &eps) in config.grid.iter().enumerate() {
        let outcomes = per_sample(config, i, |rng| -> Outcome<(f64, f64, f64)> {
            let mut attempt = || -> Result<Outcome<(f64, f64, f64)>> {
                let x = space.primal(unit_direction(spec, rng))?;
                let j = space.duality_map(&x, true)?;
                let tau = rng.random_range(0.0..0.5) * eps;
                let f = j.add_scaled(tau, &space.dual(unit_direction(dual, rng))?)?;
                let f = f.scaled(1.0 / f.norm());
                if f.pair(&x)? <= 1.0 - eps * eps / 4.0 {
                    return Ok(Outcome::Skipped);
                }
                let out = bpb_point(&x, &f, eps)?;
                let pair_error = (out.g.pair(&out.y)? - 1.0).abs();
                Ok(Outcome::Done((out.point_distance, out.functional_distance, pair_error)))
            };
            attempt().unwrap_or_else(Outcome::Failed)
        });
        let (mut done, mut skipped, mut exhausted, mut errors) = (0, 0, 0, 0);
        let (mut pd, mut fd, mut pe) = (0.0_f64, 0.0_f64, 0.0_f64);
        for o in outcomes {
            match o {
                Outcome::Skipped => skipped += 1,
                Outcome::Done((a, b, c)) => {
                    done += 1;
                    pd = pd.max(a);
                    fd = fd.max(b);
                    pe = pe.max(c);
                }
                Outcome::Failed(Error::SearchExhausted) => exhausted += 1,
                Outcome::Failed(_) => errors += 1,
            }
        }
        let pass = exhausted == 0 && errors == 0 && pd < eps && fd < eps && pe <= UNIT_TOL;
        table.row(
            vec![
                eps.to_string(),
                done.to_string(),
                skipped.to_string(),
                pd.to_string(),
                fd.to_string(),
                pe.to_string(),
                exhausted.to_string(),
            ],
            pass,
        )?;
    }
    table.finish()
}

struct PerturbRow {
    distance: f64,
    attained: bool,
    general_distance: f64,
    general_ok: bool,
}

/// Random `(T, x₀, ε)` with `‖Tx₀‖ > 1 − ε²/64`, perturbed by the compact
/// construction and by the general one with the radial handle.
///
/// Columns `epsilon, instances, skipped, distance, bound_4eps, attained,
/// general_distance, bound_general, pass`; distances are maxima over the
/// instances and `attained` means every certificate has `‖S‖ = ‖Sx₁‖ = 1`.
pub fn run_perturbation(config: &ExperimentConfig) -> Result<RunReport> {
    let space = space_of(config)?;
    let spec = space.spec();
    let dual = space.dual_spec();
    let radial = RetractionHandle::radial(&space);
    let mut table = Table::new(&[
        "epsilon",
        "instances",
        "skipped",
        "distance",
        "bound_4eps",
        "attained",
        "general_distance",
        "bound_general",
        "pass",
    ])?;
    for (i, &eps) in config.grid.iter().enumerate() {
        let outcomes = per_sample(config, i, |rng| -> Outcome<PerturbRow> {
            let mut attempt = || -> Result<Outcome<PerturbRow>> {
                let mut rows: Vec<Vec<f64>> = (0..config.points)
                    .map(|_| {
                        let r = rng.random_range(0.1..1.0);
                        vector_with_norm(dual, r, rng)
                    })
                    .collect();
                // The witness row sits just inside the ball; another row carries ‖T‖ = 1.
                let eta = eps * eps / 64.0;
                let top = rng.random_range(0..config.points);
                let inset = 1.0 - rng.random_range(0.0..0.5) * eta;
                rows[top] = vector_with_norm(dual, inset, rng);
                if config.points > 1 {
                    let other = (top + rng.random_range(1..config.points)) % config.points;
                    rows[other] = unit_direction(dual, rng);
                }
                let t = OperatorIntoC0::numbered(&space, rows)?;
                let n = space.norming_point(&t.rows()[top])?;
                let tau = rng.random_range(0.0..0.25) * eps;
                let x0 = n.add_scaled(tau, &space.primal(unit_direction(spec, rng))?)?.normalized();
                let cert = match perturb_compact(&t, &x0, eps) {
                    Err(Error::PremiseViolation(_)) => return Ok(Outcome::Skipped),
                    other => other?,
                };
                let general = perturb_general(&t, &x0, eps, &radial, &Bump::Indicator)?;
                Ok(Outcome::Done(PerturbRow {
                    distance: cert.distance,
                    attained: cert.attains(UNIT_TOL),
                    general_distance: general.distance,
                    general_ok: general.verify(UNIT_TOL),
                }))
            };
            attempt().unwrap_or_else(Outcome::Failed)
        });
        let (mut done, mut skipped, mut errors) = (0, 0, 0);
        let (mut distance, mut general_distance) = (0.0_f64, 0.0_f64);
        let (mut attained, mut general_ok) = (true, true);
        for o in outcomes {
            match o {
                Outcome::Skipped => skipped += 1,
                Outcome::Done(r) => {
                    done += 1;
                    distance = distance.max(r.distance);
                    general_distance = general_distance.max(r.general_distance);
                    attained &= r.attained;
                    general_ok &= r.general_ok;
                }
                Outcome::Failed(_) => errors += 1,
            }
        }
        let bound = 4.0 * eps;
        let bound_general = 4.0 * eps + radial.nearest_point_bound(2.0 * eps);
        let pass = errors == 0 && attained && general_ok && distance <= bound && general_distance <= bound_general;
        table.row(
            vec![
                eps.to_string(),
                done.to_string(),
                skipped.to_string(),
                distance.to_string(),
                bound.to_string(),
                attained.to_string(),
                general_distance.to_string(),
                bound_general.to_string(),
            ],
            pass,
        )?;
    }
    table.finish()
}

/// Random premise-satisfying tuples for each `r` in the grid (`r < 1`).
///
/// Columns `r, instances, skipped, failures, min_margin, pass`, where the
/// margin is `Σ_{i∈A} αᵢ − (1 − η/(1 − r))`.
pub fn run_lemma(config: &ExperimentConfig) -> Result<RunReport> {
    let mut table = Table::new(&["r", "instances", "skipped", "failures", "min_margin", "pass"])?;
    for (i, &r) in config.grid.iter().enumerate() {
        let outcomes = per_sample(config, i, |rng| -> Outcome<(bool, f64)> {
            let n = rng.random_range(1..=8);
            let weights: Vec<f64> = (0..n).map(|_| -rng.random_range(f64::MIN_POSITIVE..1.0).ln()).collect();
            let total: f64 = weights.iter().sum();
            let alpha: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let c: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.random_bool(0.7) {
                        1.0 - 0.5 * rng.random::<f64>().powi(3)
                    } else {
                        rng.random_range(-1.0..=1.0)
                    }
                })
                .collect();
            let average: f64 = c.iter().zip(&alpha).map(|(c, a)| c * a).sum();
            let eta = (1.0 - average) + 0.05 * rng.random::<f64>() + 1e-9;
            match convex_series_bound(&c, &alpha, eta, r) {
                Ok(s) => Outcome::Done((s.ok, s.mass - s.threshold)),
                Err(Error::PremiseViolation(_)) => Outcome::Skipped,
                Err(e) => Outcome::Failed(e),
            }
        });
        let (mut done, mut skipped, mut failures) = (0, 0, 0);
        let mut margin = f64::INFINITY;
        for o in outcomes {
            match o {
                Outcome::Skipped => skipped += 1,
                Outcome::Done((ok, m)) => {
                    done += 1;
                    failures += usize::from(!ok);
                    margin = margin.min(m);
                }
                Outcome::Failed(_) => failures += 1,
            }
        }
        table.row(
            vec![r.to_string(), done.to_string(), skipped.to_string(), failures.to_string(), margin.to_string()],
            failures == 0,
        )?;
    }
    table.finish()
}
