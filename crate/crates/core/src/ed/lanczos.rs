//! Lanczos ground states restricted to one parity sector.
//!
//! The Krylov recurrence runs on vectors supported on the sector index set,
//! with the matrix-free action applied through a full-space scratch buffer
//! (H preserves the sector, so nothing leaks). Full reorthogonalization
//! keeps the basis clean; the start vector is seeded, so results are
//! reproducible bit for bit.

use super::EdError;
use crate::basis::Parity;
use crate::model::{HamiltonianAction, ModelSpec};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Copy, Clone, Debug)]
pub struct LanczosOptions {
    /// Target residual ‖Hv − Ev‖.
    pub tol: f64,
    /// Krylov dimension cap.
    pub max_iter: usize,
    /// Start-vector seed.
    pub seed: u64,
    /// Refuse systems larger than this (state vectors only; no dense H).
    pub max_dim: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 500, seed: 0x5EED, max_dim: 1 << 24 }
    }
}

/// Lowest eigenpair of H restricted to a parity sector.
#[derive(Clone, Debug)]
pub struct SectorGroundState {
    pub parity: Parity,
    pub energy: f64,
    /// Unit vector over the full space, exactly zero outside the sector.
    pub vector: Vec<f64>,
    /// Explicit ‖Hv − Ev‖ of the returned pair.
    pub residual: f64,
    /// The two lowest Ritz values differ by less than 10× the tolerance.
    pub near_degenerate: bool,
    pub iterations: usize,
}

pub fn ground_state(
    spec: &ModelSpec,
    parity: Parity,
    opts: &LanczosOptions,
) -> Result<SectorGroundState, EdError> {
    let action = HamiltonianAction::new(spec);
    sector_ground_state(&action, parity, opts)
}

/// Same as [`ground_state`] but reusing a precompiled action.
pub fn sector_ground_state(
    action: &HamiltonianAction,
    parity: Parity,
    opts: &LanczosOptions,
) -> Result<SectorGroundState, EdError> {
    let space = action.space();
    let dim = space.total_dim();
    if dim > opts.max_dim {
        return Err(EdError::MemoryBudget { dim, budget: opts.max_dim });
    }
    let sector = space.sector(parity);
    let sdim = sector.len();
    debug_assert!(sdim > 0);

    // sector-restricted matvec via full-space scratch
    let mut full = vec![0.0f64; dim];
    let mut full_out = vec![0.0f64; dim];
    let mut apply = |v: &[f64], out: &mut [f64]| {
        full.fill(0.0);
        full_out.fill(0.0);
        for (k, &x) in sector.iter().enumerate() {
            full[x] = v[k];
        }
        action.apply(&full, &mut full_out).expect("dimension checked");
        for (k, &x) in sector.iter().enumerate() {
            out[k] = full_out[x];
        }
    };

    let m_max = opts.max_iter.min(sdim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q = vec![0.0f64; sdim];
    for v in q.iter_mut() {
        *v = rng.gen_range(-0.5..0.5);
    }
    normalize(&mut q);

    let mut basis: Vec<Vec<f64>> = vec![q.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0f64; sdim];
    let mut best_residual = f64::INFINITY;

    let tol = opts.tol;
    let finish = |alphas: &[f64],
                      betas: &[f64],
                      basis: &[Vec<f64>],
                      apply: &mut dyn FnMut(&[f64], &mut [f64])|
     -> (f64, Vec<f64>, f64, bool) {
        let m = alphas.len();
        let (energy, second, coeffs) = tridiag_lowest(alphas, betas);
        let near = m > 1 && (second - energy) < 10.0 * tol;
        let mut ritz = vec![0.0f64; sdim];
        for (j, qj) in basis.iter().enumerate().take(m) {
            let c = coeffs[j];
            for (r, &qv) in ritz.iter_mut().zip(qj) {
                *r += c * qv;
            }
        }
        normalize(&mut ritz);
        let mut hv = vec![0.0f64; sdim];
        apply(&ritz, &mut hv);
        let resid = hv
            .iter()
            .zip(&ritz)
            .map(|(h, v)| {
                let d = h - energy * v;
                d * d
            })
            .sum::<f64>()
            .sqrt();
        (energy, ritz, resid, near)
    };

    let mut iterations = 0;
    for j in 0..m_max {
        iterations = j + 1;
        apply(&basis[j], &mut w);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        axpy(&mut w, -alpha, &basis[j]);
        if j > 0 {
            let beta_prev = betas[j - 1];
            let prev = basis[j - 1].clone();
            axpy(&mut w, -beta_prev, &prev);
        }
        // Full reorthogonalization. A pass that collapses the norm leaves
        // relative pollution of order ε·(old norm)/(new norm), so repeat
        // until the norm holds; persistent collapse means w lies in the span.
        let norm_before = norm(&w);
        let floor = 1e-13 * norm_before.max(alpha.abs()).max(1.0);
        let mut beta = norm_before;
        let mut krylov_exhausted = beta == 0.0;
        let mut reference = norm_before;
        for _pass in 0..4 {
            if krylov_exhausted {
                break;
            }
            for qj in &basis {
                let overlap = dot(qj, &w);
                axpy(&mut w, -overlap, qj);
            }
            beta = norm(&w);
            if beta > 0.5 * reference {
                break;
            }
            if beta <= floor {
                krylov_exhausted = true;
                break;
            }
            reference = beta;
        }
        krylov_exhausted = krylov_exhausted || beta <= floor;
        let check = krylov_exhausted || j + 1 == m_max || (j + 1) % 10 == 0;
        if check {
            let (energy, ritz, resid, near) = finish(&alphas, &betas, &basis, &mut apply);
            best_residual = best_residual.min(resid);
            if resid <= opts.tol {
                let mut vector = vec![0.0f64; dim];
                for (k, &x) in sector.iter().enumerate() {
                    vector[x] = ritz[k];
                }
                return Ok(SectorGroundState {
                    parity,
                    energy,
                    vector,
                    residual: resid,
                    near_degenerate: near,
                    iterations,
                });
            }
        }
        if krylov_exhausted {
            break;
        }
        betas.push(beta);
        let mut next = w.clone();
        scale(&mut next, 1.0 / beta);
        basis.push(next);
    }

    Err(EdError::NonConvergence { iterations, best_residual })
}

/// Lowest eigenpair of the Lanczos tridiagonal matrix plus the second
/// eigenvalue. The eigenvector is polished by inverse iteration, which is
/// much more accurate than the raw dense-eigensolver columns.
fn tridiag_lowest(alphas: &[f64], betas: &[f64]) -> (f64, f64, Vec<f64>) {
    let m = alphas.len();
    if m == 1 {
        return (alphas[0], f64::INFINITY, vec![1.0]);
    }
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i > 0 {
            t[(i, i - 1)] = betas[i - 1];
            t[(i - 1, i)] = betas[i - 1];
        }
    }
    let eig = t.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let lambda0 = eig.eigenvalues[order[0]];
    let lambda1 = eig.eigenvalues[order[1]];
    let mut u = eig.eigenvectors.column(order[0]).into_owned();
    for _ in 0..2 {
        let mut shifted = t.clone();
        for i in 0..m {
            shifted[(i, i)] -= lambda0;
        }
        if let Some(x) = shifted.lu().solve(&u) {
            let n = x.norm();
            if n.is_finite() && n > 0.0 {
                u = x / n;
            } else {
                break;
            }
        } else {
            break;
        }
    }
    (lambda0, lambda1, u.as_slice().to_vec())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    if n > 0.0 {
        scale(a, 1.0 / n);
    }
}

fn scale(a: &mut [f64], c: f64) {
    for v in a.iter_mut() {
        *v *= c;
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yv, xv) in y.iter_mut().zip(x) {
        *yv += a * xv;
    }
}
