//! Field-sweep experiments and self-checks.
//!
//! A sweep drives a first-neighbor chain through a range of transverse
//! fields expressed as multiples of the factorizing field, records sector
//! ground energies and ground-state negativities between site pairs, and
//! reports parity transitions and separability side limits. The field
//! construction is a pluggable [`family::SolutionFamily`] selected by name
//! from the config.

pub mod config;
pub mod family;
pub mod run;
pub mod verify;

pub use config::{ConfigError, GridSpec, PairSelection, SweepConfig};
pub use family::{AlternatingFamily, FamilyRegistry, SolutionFamily, UniformFamily};
pub use run::{
    run_sweep, side_limit_report, Side, SideLimitEntry, SideLimitReport, SweepOutput, SweepRow,
    DEGENERACY_FLAG, SIDE_LIMIT_TOL,
};
pub use verify::{verify_suite, Check, VerifyReport};

use crate::analytic::AnalyticError;
use crate::ed::EdError;
use crate::factor::FactorError;
use crate::model::ModelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown solution family `{name}` (known: {known})")]
    UnknownFamily { name: String, known: String },
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Ed(#[from] EdError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
