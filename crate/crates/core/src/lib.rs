//! Exact verification engine for curve-singularity rings, their rank-1
//! torsion-free modules, and one-parameter deformation certificates.
//!
//! Everything is finite linear algebra over exact scalars: the base field
//! is the rationals, deformations live over rational functions in a
//! parameter `a`, and ring/module identities are asserted on a guarded
//! truncation window. There is no floating point anywhere.

pub mod algebra;
pub mod catalog;
pub mod certify;
pub mod config;
pub mod error;
pub mod io;
pub mod linalg;
pub mod modules;
pub mod scalar;
pub mod series;

pub use algebra::Subring;
pub use catalog::{Catalog, CatalogEntry, Fingerprint};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use modules::Submodule;
pub use scalar::{Rat, RatFunc, Scalar};
pub use series::{MultiBranch, TruncSeries};
