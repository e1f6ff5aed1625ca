//! Operators into `C₀(K)` for finite `K`, the Bishop-Phelps-Bollobás step for
//! functionals, and the two operator perturbations built on it.

mod functional;
mod lemma;
mod operator;
mod perturb;

pub use functional::{bpb_point, BpbPoint, BpbStrategy, UNIT_TOL};
pub use lemma::{convex_series_bound, ConvexSeries};
pub use operator::{is_norm_attaining, OperatorIntoC0};
pub use perturb::{perturb_compact, perturb_general, Bump, PerturbationCertificate};
