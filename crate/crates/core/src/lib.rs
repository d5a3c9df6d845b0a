//! Construction, certification and exact diagonalization of XYZ spin arrays
//! in transverse fields that admit exactly separable eigenstates, together
//! with the closed-form entanglement side limits of the associated
//! definite-parity states.
//!
//! Layout:
//! - [`spin`]: local spin-s operators, coherent states, y-rotations
//! - [`basis`]: mixed-radix many-body indexing and parity grading
//! - [`model`]: problem definition, matrix-free Hamiltonian action, text format
//! - [`factor`]: separability conditions, factorized energies, certificates,
//!   uniform and alternating special solutions
//! - [`analytic`]: overlap-based closed forms for concurrences, negativities,
//!   Schmidt weights, magnetization steps and monogamy identities
//! - [`ed`]: parity-sector Lanczos, dense spectra, partial traces, partial
//!   transposes and entanglement measures
//! - [`sweep`]: field-sweep experiments, side-limit reports, self-check suite

pub mod analytic;
pub mod basis;
pub mod ed;
pub mod factor;
pub mod model;
pub mod spin;
pub mod sweep;

pub use basis::{HilbertSpace, Parity};
pub use model::{CouplingTensor, FieldProfile, ModelSpec, Topology};
pub use spin::SpinValue;
