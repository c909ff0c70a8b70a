pub mod concentration;
pub mod error;
pub mod harness;
pub mod ldp;
pub mod mgf;
pub mod mittag;
pub mod model;
pub mod partition;
pub mod quadrature;
pub mod rng;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use model::ModelParams;
