pub mod bpb;
pub mod compactify;
pub mod error;
pub mod lab;
pub mod moduli;
pub mod retract;
pub mod root;
pub mod sampling;
pub mod space;

pub use error::{Error, Result};
