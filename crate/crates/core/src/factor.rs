//! Separable parity-breaking eigenstates.
//!
//! Given per-site rotation angles θᵢ, a product of spin coherent states
//! |Θ⟩ = ⊗ᵢ exp(iθᵢ sʸᵢ)|0ᵢ⟩ is an exact eigenstate of the XYZ Hamiltonian
//! iff the couplings and fields satisfy
//!
//!   vʸⁱʲ = vˣⁱʲ cosθᵢ cosθⱼ + vᶻⁱʲ sinθᵢ sinθⱼ
//!   bⁱ sinθᵢ = Σⱼ (sⱼ − ½δᵢⱼ)(vˣⁱʲ cosθᵢ sinθⱼ − vᶻⁱʲ sinθᵢ cosθⱼ)
//!
//! in which case the parity partner |−Θ⟩ is degenerate with it. This module
//! derives the completing couplings/fields from angles, evaluates the
//! factorized energy, certifies when the pair are ground states, and builds
//! the uniform (common-angle) and alternating (two-sublattice) special
//! solutions on a first-neighbor chain.

use crate::basis::tensor_product_state;
use crate::model::{CouplingTensor, FieldProfile, ModelError, ModelSpec, Topology};
use crate::spin::{coherent_local, SpinValue};
use nalgebra::DMatrix;
use thiserror::Error;

/// Angle magnitude below which sinθᵢ is treated as exactly degenerate in the
/// field equation.
pub const EPS_SIN: f64 = 1e-9;

/// Relative tolerance for the shared-anisotropy-ratio consistency check.
pub const RATIO_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("angle count {got} does not match site count {want}")]
    AngleCount { got: usize, want: usize },
    #[error("no separable solution: site {site} has sinθ ≈ 0 but a nonzero field constraint {residual:.3e}")]
    InconsistentDegenerateSite { site: usize, residual: f64 },
    #[error("anisotropy ratio must lie in [0, 1], got {0}")]
    RatioOutOfRange(f64),
    #[error("pairs carry mixed anisotropy ratios: ({i}, {j}) has {got}, expected {expect}")]
    MixedRatios { i: usize, j: usize, got: f64, expect: f64 },
    #[error("alternating solution needs an even cyclic chain, got odd n = {0}")]
    OddCycle(usize),
    #[error("alternating solution parameters invalid: {0}")]
    BadAlternating(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A completed separable construction.
#[derive(Clone, Debug)]
pub struct FactorizedSolution {
    /// Per-site rotation angles θᵢ (radians, normalized to [−π, π]).
    pub angles: Vec<f64>,
    /// Eigenvalue of |±Θ⟩.
    pub energy: f64,
    /// Whether the ground-state sufficiency condition holds.
    pub gs_certified: bool,
    /// Overlap ⟨−Θ|Θ⟩ = Π cos^{2sᵢ}θᵢ.
    pub overlap: f64,
}

/// Overlap ⟨−Θ|Θ⟩ of the full product state.
pub fn total_overlap(spins: &[SpinValue], angles: &[f64]) -> f64 {
    spins
        .iter()
        .zip(angles)
        .map(|(s, &t)| t.cos().powi(s.twice() as i32))
        .product()
}

/// vʸ completing the separability condition, entrywise over all (i, j)
/// including self-energies (θⱼ = θᵢ at i = j). Entries where both vˣ and vᶻ
/// vanish come out zero.
pub fn derive_vy(vx: &DMatrix<f64>, vz: &DMatrix<f64>, angles: &[f64]) -> DMatrix<f64> {
    let n = angles.len();
    DMatrix::from_fn(n, n, |i, j| {
        vx[(i, j)] * angles[i].cos() * angles[j].cos()
            + vz[(i, j)] * angles[i].sin() * angles[j].sin()
    })
}

/// Fields derived from the factorization condition, plus per-site flags.
#[derive(Clone, Debug)]
pub struct DerivedFields {
    pub fields: FieldProfile,
    /// Sites where sinθᵢ ≈ 0 and the constraint degenerates: the field is
    /// arbitrary there (0 is returned).
    pub field_free: Vec<bool>,
}

/// bⁱ from the stationarity condition. Sites with sinθᵢ ≈ 0 must have a
/// vanishing right-hand side: the field there is unconstrained and reported
/// as 0 with a `field_free` flag; a nonzero right-hand side means no
/// separable solution exists for this angle set.
pub fn derive_fields(
    vx: &DMatrix<f64>,
    vz: &DMatrix<f64>,
    angles: &[f64],
    spins: &[SpinValue],
) -> Result<DerivedFields, FactorError> {
    let n = spins.len();
    if angles.len() != n {
        return Err(FactorError::AngleCount { got: angles.len(), want: n });
    }
    let cos: Vec<f64> = angles.iter().map(|t| t.cos()).collect();
    let sin: Vec<f64> = angles.iter().map(|t| t.sin()).collect();
    let mut fields = vec![0.0; n];
    let mut field_free = vec![false; n];
    for i in 0..n {
        let mut rhs = 0.0;
        for j in 0..n {
            let w = spins[j].s() - if i == j { 0.5 } else { 0.0 };
            rhs += w * (vx[(i, j)] * cos[i] * sin[j] - vz[(i, j)] * sin[i] * cos[j]);
        }
        if sin[i].abs() > EPS_SIN {
            fields[i] = rhs / sin[i];
        } else if rhs.abs() <= 1e-12 {
            field_free[i] = true;
        } else {
            return Err(FactorError::InconsistentDegenerateSite { site: i, residual: rhs });
        }
    }
    Ok(DerivedFields { fields: FieldProfile(fields), field_free })
}

/// Eigenvalue of the separable state, including the ¼(vˣⁱⁱ+vʸⁱⁱ+vᶻⁱⁱ)
/// self-energy contribution.
pub fn factorized_energy(spec: &ModelSpec, angles: &[f64]) -> f64 {
    let n = spec.n_sites();
    let c = &spec.couplings;
    let cos: Vec<f64> = angles.iter().map(|t| t.cos()).collect();
    let sin: Vec<f64> = angles.iter().map(|t| t.sin()).collect();
    let mut energy = 0.0;
    for i in 0..n {
        let mut pair = 0.0;
        for j in 0..n {
            let w = spec.spins[j].s() - if i == j { 0.5 } else { 0.0 };
            pair += w * (c.vx[(i, j)] * sin[i] * sin[j] + c.vz[(i, j)] * cos[i] * cos[j]);
        }
        let inner = spec.fields.0[i] * cos[i]
            + 0.5 * pair
            + 0.25 * (c.vx[(i, i)] + c.vy[(i, i)] + c.vz[(i, i)]);
        energy -= spec.spins[i].s() * inner;
    }
    energy
}

/// The product state ⊗ᵢ coherent(sᵢ, θᵢ) over the full space.
pub fn product_state(spins: &[SpinValue], angles: &[f64]) -> Vec<f64> {
    let locals: Vec<_> =
        spins.iter().zip(angles).map(|(s, &t)| coherent_local(*s, t)).collect();
    tensor_product_state(&locals)
}

/// Residuals of the eigenstate claim for |Θ⟩ and its parity partner |−Θ⟩.
#[derive(Clone, Debug)]
pub struct EigenResidual {
    /// ‖H|Θ⟩ − E|Θ⟩‖₂ with E the factorized energy.
    pub residual: f64,
    /// Same for |−Θ⟩ (shares E when the construction is consistent).
    pub partner_residual: f64,
    /// The factorized energy E.
    pub energy: f64,
    /// Rayleigh quotient ⟨−Θ|H|−Θ⟩ of the partner.
    pub partner_energy: f64,
}

impl EigenResidual {
    pub fn max_residual(&self) -> f64 {
        self.residual.max(self.partner_residual)
    }
}

/// Apply H to both |±Θ⟩ and measure how far they are from eigenstates at the
/// factorized energy.
pub fn eigen_residual(spec: &ModelSpec, angles: &[f64]) -> Result<EigenResidual, FactorError> {
    let energy = factorized_energy(spec, angles);
    let psi = product_state(&spec.spins, angles);
    let flipped: Vec<f64> = angles.iter().map(|t| -t).collect();
    let psi_partner = product_state(&spec.spins, &flipped);

    let resid = |state: &[f64]| -> Result<(f64, f64), FactorError> {
        let hv = spec.apply_h(state)?;
        let rayleigh: f64 = state.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let r2: f64 = hv
            .iter()
            .zip(state)
            .map(|(h, s)| {
                let d = h - energy * s;
                d * d
            })
            .sum();
        Ok((r2.sqrt(), rayleigh))
    };
    let (residual, _) = resid(&psi)?;
    let (partner_residual, partner_energy) = resid(&psi_partner)?;
    Ok(EigenResidual { residual, partner_residual, energy, partner_energy })
}

/// Outcome of the ground-state sufficiency check: |vʸⁱʲ| ≤ vˣⁱʲ for every
/// pair carrying an x/y coupling, with all θᵢ ∈ (0, π).
#[derive(Clone, Debug)]
pub struct Certificate {
    pub certified: bool,
    /// First failing condition, when not certified.
    pub reason: Option<String>,
}

pub fn gs_certificate(spec: &ModelSpec, angles: &[f64]) -> Certificate {
    let n = spec.n_sites();
    for (i, &t) in angles.iter().enumerate() {
        if !(t > 0.0 && t < std::f64::consts::PI) {
            return Certificate {
                certified: false,
                reason: Some(format!("θ_{i} = {t} outside (0, π)")),
            };
        }
    }
    for i in 0..n {
        for j in i..n {
            let vx = spec.couplings.vx[(i, j)];
            let vy = spec.couplings.vy[(i, j)];
            if vy.abs() > vx + 1e-14 {
                return Certificate {
                    certified: false,
                    reason: Some(format!("|vy| > vx at pair ({i}, {j}): |{vy}| > {vx}")),
                };
            }
        }
    }
    Certificate { certified: true, reason: None }
}

/// π rotation around z at one site: θᵢ → −θᵢ and vˣ/vʸ rows and columns of
/// that site change sign (off-diagonal only). The spectrum is unchanged.
pub fn gauge_flip_z(spec: &ModelSpec, angles: &[f64], site: usize) -> (ModelSpec, Vec<f64>) {
    let mut out = spec.clone();
    let n = spec.n_sites();
    for j in 0..n {
        if j != site {
            for m in [&mut out.couplings.vx, &mut out.couplings.vy] {
                m[(site, j)] = -m[(site, j)];
                m[(j, site)] = -m[(j, site)];
            }
        }
    }
    let mut ang = angles.to_vec();
    ang[site] = -ang[site];
    (out, ang)
}

/// Flip every site with a negative angle so that all θᵢ ≥ 0. Used to gauge
/// antiferromagnetic alternating-angle constructions into certifiable form.
pub fn gauge_positive_angles(spec: &ModelSpec, angles: &[f64]) -> (ModelSpec, Vec<f64>) {
    let mut cur = spec.clone();
    let mut ang = angles.to_vec();
    for i in 0..ang.len() {
        if ang[i] < 0.0 {
            let (next, next_ang) = gauge_flip_z(&cur, &ang, i);
            cur = next;
            ang = next_ang;
        }
    }
    (cur, ang)
}

/// Normalize an angle to [−π, π].
pub fn normalize_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta % two_pi;
    if t > std::f64::consts::PI {
        t -= two_pi;
    } else if t < -std::f64::consts::PI {
        t += two_pi;
    }
    t
}

/// Complete a model from (vx, vz, angles): derives vy and b, evaluates the
/// energy and certificate, and bundles the result.
pub fn solve_from_angles(
    vx: &DMatrix<f64>,
    vz: &DMatrix<f64>,
    angles: &[f64],
    spins: &[SpinValue],
) -> Result<(ModelSpec, FactorizedSolution), FactorError> {
    let vy = derive_vy(vx, vz, angles);
    let derived = derive_fields(vx, vz, angles, spins)?;
    let spec = ModelSpec::new(
        spins.to_vec(),
        CouplingTensor { vx: vx.clone(), vy, vz: vz.clone() },
        derived.fields,
    );
    let energy = factorized_energy(&spec, angles);
    let cert = gs_certificate(&spec, angles);
    let angles: Vec<f64> = angles.iter().map(|&t| normalize_angle(t)).collect();
    let overlap = total_overlap(spins, &angles);
    let solution = FactorizedSolution { angles, energy, gs_certified: cert.certified, overlap };
    Ok((spec, solution))
}

// ---------------------------------------------------------------------------
// Uniform solution: common angle θ with cos²θ = χ and a fixed ratio
// χ = (vʸ−vᶻ)/(vˣ−vᶻ) shared by all anisotropic pairs.
// ---------------------------------------------------------------------------

/// Extract the shared anisotropy ratio of a complete coupling tensor.
/// Isotropic pairs (vˣ = vᶻ, which force vʸ = vˣ) are skipped; anisotropic
/// pairs must agree within [`RATIO_TOL`] relative.
pub fn uniform_ratio(couplings: &CouplingTensor) -> Result<Option<f64>, FactorError> {
    let n = couplings.n();
    let mut chi: Option<f64> = None;
    for i in 0..n {
        for j in i..n {
            let (vx, vy, vz) = (couplings.vx[(i, j)], couplings.vy[(i, j)], couplings.vz[(i, j)]);
            if vx == 0.0 && vy == 0.0 && vz == 0.0 {
                continue;
            }
            let denom = vx - vz;
            if denom == 0.0 {
                if (vy - vx).abs() > RATIO_TOL * vx.abs().max(1.0) {
                    return Err(FactorError::MixedRatios { i, j, got: f64::NAN, expect: 1.0 });
                }
                continue;
            }
            let r = (vy - vz) / denom;
            match chi {
                None => chi = Some(r),
                Some(r0) => {
                    if (r - r0).abs() > RATIO_TOL * r0.abs().max(1.0) {
                        return Err(FactorError::MixedRatios { i, j, got: r, expect: r0 });
                    }
                }
            }
        }
    }
    Ok(chi)
}

/// A uniform (common-angle) separable construction.
#[derive(Clone, Debug)]
pub struct UniformSolution {
    pub theta: f64,
    pub couplings: CouplingTensor,
    pub fields: FieldProfile,
    /// True in the isotropic-xy limit χ = 1 (θ = 0), where every field is
    /// unconstrained.
    pub field_free: bool,
    pub energy: f64,
}

/// Build the uniform solution from vˣ, vᶻ and the ratio χ = cos²θ ∈ [0, 1]:
/// vʸ = vᶻ + χ(vˣ − vᶻ), θ = arccos √χ,
/// bⁱ = cosθ Σⱼ (vˣⁱʲ − vᶻⁱʲ)(sⱼ − ½δᵢⱼ).
pub fn uniform_solution(
    vx: &DMatrix<f64>,
    vz: &DMatrix<f64>,
    chi: f64,
    spins: &[SpinValue],
) -> Result<UniformSolution, FactorError> {
    if !(0.0..=1.0).contains(&chi) {
        return Err(FactorError::RatioOutOfRange(chi));
    }
    let n = spins.len();
    let theta = chi.sqrt().acos();
    let cos = chi.sqrt();
    let vy = vz + (vx - vz) * chi;
    let field_free = chi == 1.0;
    let mut fields = vec![0.0; n];
    if !field_free {
        for (i, field) in fields.iter_mut().enumerate() {
            *field = cos
                * (0..n)
                    .map(|j| {
                        (vx[(i, j)] - vz[(i, j)])
                            * (spins[j].s() - if i == j { 0.5 } else { 0.0 })
                    })
                    .sum::<f64>();
        }
    }
    // closed-form energy: −½ Σᵢⱼ sᵢ [sⱼ(vˣ+vʸ−vᶻ) + δᵢⱼ vᶻⁱⁱ]
    let mut energy = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut term = spins[j].s() * (vx[(i, j)] + vy[(i, j)] - vz[(i, j)]);
            if i == j {
                term += vz[(i, i)];
            }
            energy -= 0.5 * spins[i].s() * term;
        }
    }
    Ok(UniformSolution {
        theta,
        couplings: CouplingTensor { vx: vx.clone(), vy, vz: vz.clone() },
        fields: FieldProfile(fields),
        field_free,
        energy,
    })
}

// ---------------------------------------------------------------------------
// Alternating solution: first-neighbor XY chain (vᶻ = 0), two sublattice
// fields b_o, b_e on the separability curve b_e·b_o = (2s)² vˣ vʸ.
// Sites are 0-based; the "odd" sublattice of the 1-based physics labels is
// the 0-based even one.
// ---------------------------------------------------------------------------

/// How the alternating fields are driven: directly by the odd-sublattice
/// field, or by the ratio η = b_e/b_o.
#[derive(Copy, Clone, Debug)]
pub enum AlternatingDrive {
    OddField(f64),
    EvenOddRatio(f64),
}

#[derive(Clone, Debug)]
pub struct AlternatingSolution {
    pub theta_odd: f64,
    pub theta_even: f64,
    /// Per-site angles (θ_o on 0-based even sites).
    pub angles: Vec<f64>,
    pub b_odd: f64,
    pub b_even: f64,
    /// Fields including halved borders for open chains.
    pub fields: FieldProfile,
    pub couplings: CouplingTensor,
}

/// Two-sublattice separable construction on a spin-s first-neighbor XY
/// chain. Requires χ = vʸ/vˣ ∈ [0, 1]; cyclic chains must have even n.
/// Antiferromagnetic sign convention: θ_o > 0, θ_e < 0 when vˣ < 0.
pub fn alternating_solution(
    vx: f64,
    vy: f64,
    s: SpinValue,
    n: usize,
    topology: Topology,
    drive: AlternatingDrive,
) -> Result<AlternatingSolution, FactorError> {
    if vx == 0.0 {
        return Err(FactorError::BadAlternating("vx must be nonzero".into()));
    }
    let chi = vy / vx;
    if !(0.0..=1.0).contains(&chi) {
        return Err(FactorError::RatioOutOfRange(chi));
    }
    if topology == Topology::Cyclic && n % 2 == 1 {
        return Err(FactorError::OddCycle(n));
    }
    if n < 2 {
        return Err(FactorError::BadAlternating(format!("chain too short: n = {n}")));
    }
    let two_s = s.twice() as f64;
    let b_star = two_s * (vx * vy).sqrt(); // uniform factorizing field
    let (b_odd, b_even) = match drive {
        AlternatingDrive::OddField(b_o) => {
            if b_o <= 0.0 {
                return Err(FactorError::BadAlternating(format!("b_o must be > 0, got {b_o}")));
            }
            (b_o, (b_star * b_star) / b_o)
        }
        AlternatingDrive::EvenOddRatio(eta) => {
            if eta <= 0.0 {
                return Err(FactorError::BadAlternating(format!("η must be > 0, got {eta}")));
            }
            let b_o = b_star / eta.sqrt();
            (b_o, eta * b_o)
        }
    };

    let cos2 = |b: f64| (b * b + (two_s * vy).powi(2)) / (b * b + (two_s * vx).powi(2));
    let theta_odd = cos2(b_odd).sqrt().acos();
    let theta_even =
        if vx > 0.0 { cos2(b_even).sqrt().acos() } else { -cos2(b_even).sqrt().acos() };

    let angles: Vec<f64> =
        (0..n).map(|i| if i % 2 == 0 { theta_odd } else { theta_even }).collect();
    let mut fields: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { b_odd } else { b_even }).collect();
    if topology == Topology::Open {
        fields[0] *= 0.5;
        fields[n - 1] *= 0.5;
    }
    let couplings = CouplingTensor::first_neighbor(n, topology, vx, vy, 0.0);
    Ok(AlternatingSolution {
        theta_odd,
        theta_even,
        angles,
        b_odd,
        b_even,
        fields: FieldProfile(fields),
        couplings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Axis;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain_vx(n: usize, v: f64) -> DMatrix<f64> {
        CouplingTensor::first_neighbor(n, Topology::Open, v, 0.0, 0.0).vx
    }

    #[test]
    fn derive_vy_limits() {
        let n = 2;
        let vx = chain_vx(n, 1.0);
        let mut vz = DMatrix::zeros(n, n);
        vz[(0, 1)] = 0.7;
        vz[(1, 0)] = 0.7;

        // θ = 0 → vy = vx entrywise
        let vy = derive_vy(&vx, &vz, &[0.0, 0.0]);
        assert!((vy.clone() - &vx).norm() < 1e-15);

        // θ = π/2 → vy = vz
        let t = std::f64::consts::FRAC_PI_2;
        let vy = derive_vy(&vx, &vz, &[t, t]);
        assert!((vy.clone() - &vz).norm() < 1e-14);

        // cosθ = 1/2, vz = 0 → vy = vx/4
        let vz0 = DMatrix::zeros(n, n);
        let theta = (0.5f64).acos();
        let vy = derive_vy(&vx, &vz0, &[theta, theta]);
        assert_abs_diff_eq!(vy[(0, 1)], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn derive_fields_two_site() {
        // n=2, s=1/2, vx=1, equal angles: b = cosθ/2 on both sites.
        let vx = chain_vx(2, 1.0);
        let vz = DMatrix::zeros(2, 2);
        let theta = 0.8f64;
        let d = derive_fields(&vx, &vz, &[theta, theta], &[SpinValue::HALF; 2]).unwrap();
        assert_abs_diff_eq!(d.fields.0[0], theta.cos() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.fields.0[1], theta.cos() / 2.0, epsilon = 1e-15);
        assert!(!d.field_free[0]);
    }

    #[test]
    fn derive_fields_open_chain_borders() {
        // first-neighbor chain, cosθ = √χ: inner sites carry 2s√χ·vx, the two
        // borders half of that.
        let n = 6;
        let chi = 0.41f64;
        let theta = chi.sqrt().acos();
        for s in [SpinValue::HALF, SpinValue::from_twice(3).unwrap()] {
            let vx = chain_vx(n, 1.0);
            let vz = DMatrix::zeros(n, n);
            let d = derive_fields(&vx, &vz, &vec![theta; n], &vec![s; n]).unwrap();
            let b_s = 2.0 * s.s() * chi.sqrt();
            assert_abs_diff_eq!(d.fields.0[0], b_s / 2.0, epsilon = 1e-14);
            assert_abs_diff_eq!(d.fields.0[n - 1], b_s / 2.0, epsilon = 1e-14);
            for i in 1..n - 1 {
                assert_abs_diff_eq!(d.fields.0[i], b_s, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn derive_fields_degenerate_branches() {
        // all θ = 0: field-free everywhere
        let vx = chain_vx(3, 1.0);
        let vz = DMatrix::zeros(3, 3);
        let d = derive_fields(&vx, &vz, &[0.0; 3], &[SpinValue::HALF; 3]).unwrap();
        assert!(d.field_free.iter().all(|&f| f));
        assert_eq!(d.fields.0, vec![0.0; 3]);

        // θ₀ = 0 with a rotated neighbor: inconsistent
        let err = derive_fields(&vx, &vz, &[0.0, 0.9, 0.9], &[SpinValue::HALF; 3]).unwrap_err();
        assert!(matches!(err, FactorError::InconsistentDegenerateSite { site: 0, .. }));
    }

    #[test]
    fn energy_reduces_to_field_sum() {
        // no couplings, θ = 0 → E = −Σ sᵢ bⁱ
        let spec = ModelSpec::new(
            vec![SpinValue::HALF, SpinValue::ONE],
            CouplingTensor::zeros(2),
            FieldProfile(vec![0.3, -1.1]),
        );
        let e = factorized_energy(&spec, &[0.0, 0.0]);
        assert_abs_diff_eq!(e, -(0.5 * 0.3 + 1.0 * -1.1), epsilon = 1e-15);
    }

    fn random_factorized(
        rng: &mut ChaCha8Rng,
        max_n: usize,
        certified: bool,
    ) -> (ModelSpec, Vec<f64>) {
        let n = rng.gen_range(2..=max_n);
        let spins: Vec<SpinValue> =
            (0..n).map(|_| SpinValue::from_twice(rng.gen_range(1..=3)).unwrap()).collect();
        // keep the dense oracle affordable
        let dim: usize = spins.iter().map(|s| s.dim()).product();
        if dim > 1024 {
            return random_factorized(rng, max_n, certified);
        }
        let mut vx = DMatrix::zeros(n, n);
        let mut vz = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if i == j && spins[i].twice() < 2 {
                    continue;
                }
                if i != j && rng.gen_bool(0.25) {
                    continue; // leave some pairs uncoupled, keep long-range ones
                }
                let x = if certified { rng.gen_range(0.4..1.2) } else { rng.gen_range(-1.0..1.0) };
                let z =
                    if certified { x * rng.gen_range(0.0..1.0) } else { rng.gen_range(-1.0..1.0) };
                vx[(i, j)] = x;
                vx[(j, i)] = x;
                vz[(i, j)] = z;
                vz[(j, i)] = z;
            }
        }
        let angles: Vec<f64> = (0..n)
            .map(|_| {
                if certified {
                    rng.gen_range(0.15..std::f64::consts::PI - 0.15)
                } else {
                    rng.gen_range(0.1..std::f64::consts::PI - 0.1)
                        * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
                }
            })
            .collect();
        let (spec, _) = solve_from_angles(&vx, &vz, &angles, &spins).unwrap();
        (spec, angles)
    }

    #[test]
    fn random_constructions_are_exact_eigenstates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let (spec, angles) = random_factorized(&mut rng, 5, false);
            let r = eigen_residual(&spec, &angles).unwrap();
            assert!(r.max_residual() < 1e-10, "residual {}", r.max_residual());
            assert_abs_diff_eq!(r.partner_energy, r.energy, epsilon = 1e-10);
        }
    }

    #[test]
    fn perturbed_field_breaks_eigenstate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut spec, angles) = random_factorized(&mut rng, 4, false);
        spec.fields.0[0] += 1e-3;
        let r = eigen_residual(&spec, &angles).unwrap();
        assert!(r.residual > 1e-4, "perturbation undetected: {}", r.residual);
    }

    #[test]
    fn xxz_product_state_any_fields() {
        // θ = 0 with vy = vx: |0⟩ stays an eigenstate for arbitrary fields.
        let n = 4;
        let c = CouplingTensor::first_neighbor(n, Topology::Open, 0.9, 0.9, 0.4);
        let spec =
            ModelSpec::new(vec![SpinValue::ONE; n], c, FieldProfile(vec![0.3, -0.2, 1.4, 0.05]));
        let r = eigen_residual(&spec, &[0.0; 4]).unwrap();
        assert!(r.max_residual() < 1e-12);
    }

    #[test]
    fn certificate_detects_violations() {
        let n = 3;
        let vx = chain_vx(n, 1.0);
        let vz = DMatrix::zeros(n, n);
        let theta = 0.9;
        let (spec, sol) =
            solve_from_angles(&vx, &vz, &vec![theta; n], &vec![SpinValue::HALF; n]).unwrap();
        assert!(sol.gs_certified);

        let mut bad = spec.clone();
        bad.couplings.set(Axis::Y, 0, 1, 1.5);
        let cert = gs_certificate(&bad, &vec![theta; n]);
        assert!(!cert.certified);
        assert!(cert.reason.unwrap().contains("(0, 1)"));
    }

    #[test]
    fn afm_alternating_angles_certify_after_gauge() {
        // vx < 0 with staggered angles: gauge flips map it onto the
        // ferromagnetic case, preserving the spectrum.
        let n = 4;
        let vx = chain_vx(n, -1.0);
        let vz = DMatrix::zeros(n, n);
        let theta = 0.7;
        let angles: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { theta } else { -theta }).collect();
        let (spec, _) = solve_from_angles(&vx, &vz, &angles, &vec![SpinValue::HALF; n]).unwrap();
        let r = eigen_residual(&spec, &angles).unwrap();
        assert!(r.max_residual() < 1e-12);
        assert!(!gs_certificate(&spec, &angles).certified);

        let (gauged, gauged_angles) = gauge_positive_angles(&spec, &angles);
        assert!(gs_certificate(&gauged, &gauged_angles).certified);
        let rg = eigen_residual(&gauged, &gauged_angles).unwrap();
        assert!(rg.max_residual() < 1e-12);
        assert_abs_diff_eq!(rg.energy, r.energy, epsilon = 1e-13);

        // spectrum equality under the z-gauge at one site
        let h0 = spec.dense_h().unwrap();
        let (flipped, _) = gauge_flip_z(&spec, &angles, 1);
        let h1 = flipped.dense_h().unwrap();
        let mut e0 = h0.symmetric_eigenvalues().as_slice().to_vec();
        let mut e1 = h1.symmetric_eigenvalues().as_slice().to_vec();
        e0.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e1.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in e0.iter().zip(&e1) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn uniform_solution_first_neighbor() {
        let n = 5;
        let s = SpinValue::ONE;
        let chi = 0.36;
        let vx = chain_vx(n, 1.0);
        let vz = DMatrix::zeros(n, n);
        let u = uniform_solution(&vx, &vz, chi, &vec![s; n]).unwrap();
        let b_s = 2.0 * s.s() * chi.sqrt();
        assert_abs_diff_eq!(u.fields.0[0], b_s / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(u.fields.0[2], b_s, epsilon = 1e-14);
        assert_abs_diff_eq!(u.couplings.vy[(0, 1)], chi, epsilon = 1e-15);

        // round-trips through the general angle equations
        let angles = vec![u.theta; n];
        let vy = derive_vy(&vx, &vz, &angles);
        assert!((vy - &u.couplings.vy).norm() < 1e-12);
        let d = derive_fields(&vx, &vz, &angles, &vec![s; n]).unwrap();
        for (a, b) in d.fields.0.iter().zip(&u.fields.0) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let spec = ModelSpec::new(vec![s; n], u.couplings.clone(), u.fields.clone());
        assert_abs_diff_eq!(factorized_energy(&spec, &angles), u.energy, epsilon = 1e-12);
        let r = eigen_residual(&spec, &angles).unwrap();
        assert!(r.max_residual() < 1e-10);
    }

    #[test]
    fn uniform_solution_cyclic_with_vz() {
        let n = 4;
        let s = SpinValue::HALF;
        let chi = 0.5;
        let c = CouplingTensor::first_neighbor(n, Topology::Cyclic, 1.0, 0.0, -0.3);
        let u = uniform_solution(&c.vx, &c.vz, chi, &vec![s; n]).unwrap();
        // every site sees two neighbors: b = 2s(vx−vz)√χ
        let expect = 2.0 * s.s() * (1.0 - -0.3) * chi.sqrt();
        for b in &u.fields.0 {
            assert_abs_diff_eq!(*b, expect, epsilon = 1e-14);
        }
        let spec = ModelSpec::new(vec![s; n], u.couplings.clone(), u.fields.clone());
        let r = eigen_residual(&spec, &vec![u.theta; n]).unwrap();
        assert!(r.max_residual() < 1e-10);
    }

    #[test]
    fn uniform_solution_xxz_limit() {
        let vx = chain_vx(3, 1.0);
        let vz = DMatrix::zeros(3, 3);
        let u = uniform_solution(&vx, &vz, 1.0, &[SpinValue::HALF; 3]).unwrap();
        assert!(u.field_free);
        assert_eq!(u.theta, 0.0);
        assert!((u.couplings.vy.clone() - &vx).norm() < 1e-15);
    }

    #[test]
    fn uniform_ratio_consistency() {
        let mut c = CouplingTensor::first_neighbor(4, Topology::Open, 1.0, 0.25, 0.0);
        c.set(Axis::X, 0, 2, 0.4); // long-range pair with the same ratio
        c.set(Axis::Y, 0, 2, 0.1);
        assert_abs_diff_eq!(uniform_ratio(&c).unwrap().unwrap(), 0.25, epsilon = 1e-15);

        c.set(Axis::Y, 0, 2, 0.2); // now ratio 0.5 on that pair
        assert!(matches!(uniform_ratio(&c), Err(FactorError::MixedRatios { i: 0, j: 2, .. })));
    }

    #[test]
    fn alternating_solution_fields_and_angles() {
        // s=1/2, vx=1, vy=1/4, η=4: b_o = 1/4, b_e = 1,
        // cos²θ_o = 0.125/1.0625, cos²θ_e = 1.0625/2, cosθ_o·cosθ_e = 1/4.
        let sol = alternating_solution(
            1.0,
            0.25,
            SpinValue::HALF,
            6,
            Topology::Open,
            AlternatingDrive::EvenOddRatio(4.0),
        )
        .unwrap();
        assert_abs_diff_eq!(sol.b_odd, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.b_even, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.theta_odd.cos().powi(2), 0.125 / 1.0625, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.theta_even.cos().powi(2), 1.0625 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.theta_odd.cos() * sol.theta_even.cos(), 0.25, epsilon = 1e-12);
        // open-chain borders: ½b_o at site 0; site n−1 is even-sublattice for even n
        assert_abs_diff_eq!(sol.fields.0[0], 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.fields.0[5], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.fields.0[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.fields.0[2], 0.25, epsilon = 1e-15);

        // the construction is an exact eigenstate
        let spec =
            ModelSpec::new(vec![SpinValue::HALF; 6], sol.couplings.clone(), sol.fields.clone());
        let r = eigen_residual(&spec, &sol.angles).unwrap();
        assert!(r.max_residual() < 1e-10, "residual {}", r.max_residual());

        // fields match the general stationarity equation
        let d = derive_fields(&spec.couplings.vx, &spec.couplings.vz, &sol.angles, &spec.spins)
            .unwrap();
        for (a, b) in d.fields.0.iter().zip(&sol.fields.0) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn alternating_reduces_to_uniform() {
        let s = SpinValue::from_twice(3).unwrap();
        let (vx, vy) = (1.0f64, 0.49f64);
        let b_s = 2.0 * s.s() * (vx * vy).sqrt();
        let sol = alternating_solution(
            vx,
            vy,
            s,
            4,
            Topology::Cyclic,
            AlternatingDrive::EvenOddRatio(1.0),
        )
        .unwrap();
        assert_abs_diff_eq!(sol.b_odd, b_s, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.b_even, b_s, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.theta_odd, sol.theta_even, epsilon = 1e-14);
        let chi = vy / vx;
        assert_abs_diff_eq!(sol.theta_odd.cos().powi(2), chi, epsilon = 1e-12);
    }

    #[test]
    fn alternating_large_even_field_limit() {
        // large b_e: cosθ_e → 1 while cosθ_o → χ
        let chi = 0.3;
        let sol = alternating_solution(
            1.0,
            chi,
            SpinValue::HALF,
            8,
            Topology::Open,
            AlternatingDrive::EvenOddRatio(1e6),
        )
        .unwrap();
        assert!((sol.theta_even.cos() - 1.0).abs() < 1e-5);
        assert!((sol.theta_odd.cos() - chi).abs() < 1e-5);
    }

    #[test]
    fn alternating_afm_sign_convention() {
        let sol = alternating_solution(
            -1.0,
            -0.25,
            SpinValue::HALF,
            6,
            Topology::Cyclic,
            AlternatingDrive::EvenOddRatio(2.0),
        )
        .unwrap();
        assert!(sol.theta_odd > 0.0 && sol.theta_even < 0.0);
        let spec =
            ModelSpec::new(vec![SpinValue::HALF; 6], sol.couplings.clone(), sol.fields.clone());
        let r = eigen_residual(&spec, &sol.angles).unwrap();
        assert!(r.max_residual() < 1e-10, "AFM residual {}", r.max_residual());
    }

    #[test]
    fn alternating_rejects_bad_input() {
        assert!(matches!(
            alternating_solution(
                1.0,
                0.25,
                SpinValue::HALF,
                5,
                Topology::Cyclic,
                AlternatingDrive::EvenOddRatio(2.0)
            ),
            Err(FactorError::OddCycle(5))
        ));
        assert!(matches!(
            alternating_solution(
                1.0,
                1.5,
                SpinValue::HALF,
                4,
                Topology::Open,
                AlternatingDrive::EvenOddRatio(2.0)
            ),
            Err(FactorError::RatioOutOfRange(_))
        ));
    }

    #[test]
    fn overlap_recomputable_from_angles() {
        let spins = [SpinValue::HALF, SpinValue::ONE, SpinValue::from_twice(3).unwrap()];
        let angles = [0.4, -1.1, 2.0];
        let o = total_overlap(&spins, &angles);
        let direct: f64 =
            spins.iter().zip(&angles).map(|(s, t)| t.cos().powi(s.twice() as i32)).product();
        assert_abs_diff_eq!(o, direct, epsilon = 1e-14);
        // ⟨−Θ|Θ⟩ from explicit vectors
        let psi = product_state(&spins, &angles);
        let neg: Vec<f64> = angles.iter().map(|t| -t).collect();
        let psim = product_state(&spins, &neg);
        let inner: f64 = psi.iter().zip(&psim).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(o, inner, epsilon = 1e-14);
    }
}
