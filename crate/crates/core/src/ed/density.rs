//! Partial traces, partial transposes and entanglement measures.
//!
//! All states in this crate are real in the standard basis, so reduced
//! densities are real symmetric and the partial transpose stays within the
//! same matrix type.

use super::EdError;
use crate::basis::HilbertSpace;
use crate::spin::SpinValue;
use nalgebra::DMatrix;

/// Reduced density matrix of a subsystem, indexed mixed-radix over the kept
/// sites in order.
#[derive(Clone, Debug)]
pub struct ReducedDensity {
    pub sites: Vec<usize>,
    pub dims: Vec<usize>,
    pub matrix: DMatrix<f64>,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|v| v * v).sum()
    }

    /// Eigenvalues clipped at zero, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut evals: Vec<f64> =
            self.matrix.symmetric_eigenvalues().iter().map(|&e| e.max(0.0)).collect();
        evals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        evals
    }
}

fn check_selector(space: &HilbertSpace, sites: &[usize]) -> Result<(), EdError> {
    let n = space.n_sites();
    for (k, &s) in sites.iter().enumerate() {
        if s >= n {
            return Err(EdError::SelectorOutOfRange { site: s, n });
        }
        if k > 0 && sites[k - 1] >= s {
            return Err(EdError::SelectorNotSorted);
        }
    }
    Ok(())
}

/// Mixed-radix offsets of a site subset: every combination of the subset's
/// digits mapped to its flat-index contribution.
fn subset_offsets(space: &HilbertSpace, sites: &[usize]) -> (Vec<usize>, usize) {
    let dims: Vec<usize> = sites.iter().map(|&s| space.local_dims()[s]).collect();
    let strides: Vec<usize> = sites.iter().map(|&s| space.strides()[s]).collect();
    let total: usize = dims.iter().product::<usize>().max(1);
    let mut offsets = vec![0usize; total];
    for (a, offset) in offsets.iter_mut().enumerate() {
        let mut rem = a;
        let mut off = 0;
        for k in (0..dims.len()).rev() {
            off += (rem % dims[k]) * strides[k];
            rem /= dims[k];
        }
        *offset = off;
    }
    (offsets, total)
}

/// Partial trace of a weighted mixture of pure states over the complement
/// of `sites`. Weights must be nonnegative and sum to 1; vectors must be
/// unit norm over the full space.
pub fn reduced_density(
    states: &[(f64, &[f64])],
    space: &HilbertSpace,
    sites: &[usize],
) -> Result<ReducedDensity, EdError> {
    check_selector(space, sites)?;
    let wsum: f64 = states.iter().map(|(w, _)| w).sum();
    if states.iter().any(|(w, _)| *w < 0.0) || (wsum - 1.0).abs() > 1e-10 {
        return Err(EdError::BadWeights(wsum));
    }
    for (_, psi) in states {
        let n2: f64 = psi.iter().map(|v| v * v).sum();
        if (n2 - 1.0).abs() > 1e-8 {
            return Err(EdError::BadNorm(n2.sqrt()));
        }
    }

    let env: Vec<usize> = (0..space.n_sites()).filter(|s| !sites.contains(s)).collect();
    let (keep_offsets, d_a) = subset_offsets(space, sites);
    let (env_offsets, _) = subset_offsets(space, &env);

    let mut rho = DMatrix::zeros(d_a, d_a);
    let mut sub = vec![0.0f64; d_a];
    for (weight, psi) in states {
        for &base in &env_offsets {
            for (a, &off) in keep_offsets.iter().enumerate() {
                sub[a] = psi[base + off];
            }
            for r in 0..d_a {
                let wr = weight * sub[r];
                if wr == 0.0 {
                    continue;
                }
                for c in 0..d_a {
                    rho[(r, c)] += wr * sub[c];
                }
            }
        }
    }
    let dims: Vec<usize> = sites.iter().map(|&s| space.local_dims()[s]).collect();
    Ok(ReducedDensity { sites: sites.to_vec(), dims, matrix: rho })
}

/// Negativity of a reduced density across a bipartition of its selector:
/// the sites named in `transposed` are partially transposed and N is the
/// absolute sum of the negative eigenvalues, equal to ½(‖ρ^{T_B}‖₁ − 1).
pub fn negativity(rho: &ReducedDensity, transposed: &[usize]) -> Result<f64, EdError> {
    for t in transposed {
        if !rho.sites.contains(t) {
            return Err(EdError::SplitNotInSelector(*t));
        }
    }
    let d = rho.dim();
    let k = rho.dims.len();
    // digit tables for the selector's own mixed radix
    let mut digits = vec![vec![0usize; k]; d];
    for (a, row) in digits.iter_mut().enumerate() {
        let mut rem = a;
        for i in (0..k).rev() {
            row[i] = rem % rho.dims[i];
            rem /= rho.dims[i];
        }
    }
    let flip: Vec<bool> = rho.sites.iter().map(|s| transposed.contains(s)).collect();
    let mut pt = DMatrix::zeros(d, d);
    let mut rdig = vec![0usize; k];
    let mut cdig = vec![0usize; k];
    for r in 0..d {
        for c in 0..d {
            // swap the transposed sites' digits between row and column
            for i in 0..k {
                if flip[i] {
                    rdig[i] = digits[c][i];
                    cdig[i] = digits[r][i];
                } else {
                    rdig[i] = digits[r][i];
                    cdig[i] = digits[c][i];
                }
            }
            let enc = |dg: &[usize]| {
                dg.iter().zip(&rho.dims).fold(0, |idx, (&d, &dim)| idx * dim + d)
            };
            pt[(enc(&rdig), enc(&cdig))] = rho.matrix[(r, c)];
        }
    }
    let evals = pt.symmetric_eigenvalues();
    let neg_sum: f64 = evals.iter().filter(|&&e| e < 0.0).map(|e| -e).sum::<f64>().max(0.0);
    let trace_norm: f64 = evals.iter().map(|e| e.abs()).sum();
    let via_trace_norm = 0.5 * (trace_norm - evals.iter().sum::<f64>());
    debug_assert!((neg_sum - via_trace_norm).abs() < 1e-12);
    Ok(neg_sum)
}

/// Scalar entanglement measures of a density.
#[derive(Copy, Clone, Debug)]
pub struct Measures {
    /// von Neumann entropy in bits, −Σ λ log₂ λ.
    pub entropy_bits: f64,
    /// √(2(1 − tr ρ²)): the global concurrence of the purifying bipartition.
    pub global_concurrence: f64,
    pub purity: f64,
}

pub fn entanglement_measures(rho: &ReducedDensity) -> Measures {
    let purity = rho.purity();
    let entropy_bits = rho
        .spectrum()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    Measures {
        entropy_bits,
        global_concurrence: (2.0 * (1.0 - purity)).max(0.0).sqrt(),
        purity,
    }
}

/// Two-qubit mixed-state concurrence max(0, λ₁−λ₂−λ₃−λ₄), with λᵢ the
/// descending absolute eigenvalues of √ρ (σʸ⊗σʸ) √ρ (real states, so the
/// conjugation is a no-op).
pub fn wootters_concurrence(rho: &DMatrix<f64>) -> Result<f64, EdError> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(EdError::BadDensityShape { want: 4, got_r: rho.nrows(), got_c: rho.ncols() });
    }
    let eig = rho.clone().symmetric_eigen();
    let mut sqrt_rho = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let l = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        for r in 0..4 {
            for c in 0..4 {
                sqrt_rho[(r, c)] += l * v[r] * v[c];
            }
        }
    }
    // σʸ⊗σʸ in the computational basis: antidiagonal (−1, 1, 1, −1)
    let mut yy = DMatrix::<f64>::zeros(4, 4);
    yy[(0, 3)] = -1.0;
    yy[(1, 2)] = 1.0;
    yy[(2, 1)] = 1.0;
    yy[(3, 0)] = -1.0;
    let m = &sqrt_rho * &yy * &sqrt_rho;
    let mut lambdas: Vec<f64> = m.symmetric_eigenvalues().iter().map(|e| e.abs()).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// ⟨ψ|sᶻ_site|ψ⟩ through digit decomposition.
pub fn expectation_sz(psi: &[f64], space: &HilbertSpace, spins: &[SpinValue], site: usize) -> f64 {
    let stride = space.strides()[site];
    let d = space.local_dims()[site];
    psi.iter()
        .enumerate()
        .map(|(x, &a)| a * a * spins[site].sz_value(x / stride % d))
        .sum()
}

/// Σᵢ ⟨ψ|sᶻᵢ|ψ⟩.
pub fn total_magnetization(psi: &[f64], space: &HilbertSpace, spins: &[SpinValue]) -> f64 {
    (0..spins.len()).map(|i| expectation_sz(psi, space, spins, i)).sum()
}
