//! Computer-assisted existence proofs for localized radial solutions of
//! `ΔU + N(U) = 0` on `R^d`.

pub mod bvp;
pub mod cmat;
pub mod config;
pub mod dense;
pub mod error;
pub mod fit;
pub mod interval;
pub mod kantorovich;
pub mod manifold;
pub mod numstr;
pub mod pipeline;
pub mod poly;
pub mod problem;
pub mod scalar;
pub mod seed;
pub mod seq;
pub mod spectra;

pub use error::{PipelineError, ProofError, RigorError, Stage};
pub use interval::{CInterval, Interval};
