//! Forbidden colored cliques: templates, the optimisation problem over them,
//! analytic estimates for the dichromatic triangle, exact counting oracles
//! and the parameter sweeps that produce the optimal part counts.

pub mod analytic;
pub mod cli;
pub mod counting;
pub mod error;
pub mod patterns;
pub mod qsolver;
pub mod report;
pub mod sweeps;
pub mod templates;

pub use error::{Error, Result};
