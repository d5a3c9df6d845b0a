//! Numerical ground truth: parity-sector Lanczos ground states, dense
//! spectra for small systems, partial traces, partial transposes and
//! entanglement measures.

mod density;
mod lanczos;
mod scan;

pub use density::{
    entanglement_measures, expectation_sz, negativity, reduced_density, total_magnetization,
    wootters_concurrence, Measures, ReducedDensity,
};
pub use lanczos::{ground_state, sector_ground_state, LanczosOptions, SectorGroundState};
pub use scan::{locate_crossings, parity_transition_scan, Crossing, ScanOutcome, ScanPoint};

use crate::model::ModelError;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EdError {
    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    NonConvergence { iterations: usize, best_residual: f64 },
    #[error("total dimension {dim} exceeds the memory budget {budget}")]
    MemoryBudget { dim: usize, budget: usize },
    #[error("selector site {site} out of range for {n} sites")]
    SelectorOutOfRange { site: usize, n: usize },
    #[error("selector must be strictly increasing")]
    SelectorNotSorted,
    #[error("split site {0} is not part of the selector")]
    SplitNotInSelector(usize),
    #[error("mixture weights must be nonnegative and sum to 1 (got {0})")]
    BadWeights(f64),
    #[error("state norm {0} is not 1")]
    BadNorm(f64),
    #[error("expected a {want}×{want} density, got {got_r}×{got_c}")]
    BadDensityShape { want: usize, got_r: usize, got_c: usize },
    #[error("scan grid must be strictly increasing and have ≥ 2 points")]
    BadGrid,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// All eigenvalues of the dense Hamiltonian, ascending. Oracle path for
/// small systems (dimension ≤ the dense cap).
pub fn full_spectrum(spec: &crate::model::ModelSpec) -> Result<Vec<f64>, EdError> {
    let h = spec.dense_h()?;
    let mut evals: Vec<f64> = h.symmetric_eigenvalues().as_slice().to_vec();
    evals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(evals)
}

/// Eigenvalues (ascending) with matching eigenvectors as columns.
pub fn full_spectrum_with_vectors(
    spec: &crate::model::ModelSpec,
) -> Result<(Vec<f64>, DMatrix<f64>), EdError> {
    let h = spec.dense_h()?;
    let eig = h.symmetric_eigen();
    let dim = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::zeros(dim, dim);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    Ok((evals, vecs))
}
