//! Closed-form entanglement side limits at the separability point.
//!
//! Everything here is a function of subsystem overlaps O_A = Π_{i∈A}
//! cos^{2sᵢ}θᵢ of the two degenerate product states. The definite-parity
//! combinations |Θ^±⟩ = (|Θ⟩ ± |−Θ⟩)/√(2(1 ± O)) have Schmidt rank 2 across
//! any bipartition; their reduced states over two disjoint subsystems B, C
//! are effective two-qubit mixed states whose concurrences and negativities
//! admit closed forms, evaluated here and cross-checked numerically by the
//! `ed` module.
//!
//! The canonical gauge |θᵢ| ≤ π/2 (all local overlaps ≥ 0, so O ≥ 0) is
//! applied by the angle adapters; a local π rotation around x maps
//! θ → π − θ without changing any overlap magnitude.

use crate::basis::Parity;
use crate::spin::SpinValue;
use nalgebra::Matrix4;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("total overlap −1 leaves the odd combination undefined")]
    DegenerateOverlap,
    #[error("subsystems overlap at site {0}")]
    OverlappingSubsystems(usize),
    #[error("inconsistent mixture inputs: |ΔC⁰| = {0:.3e}")]
    InconsistentMixture(f64),
}

/// Fold an angle into [−π/2, π/2] by the local π x-rotation θ → π − θ,
/// making cosθ ≥ 0.
pub fn fold_angle(theta: f64) -> f64 {
    let t = crate::factor::normalize_angle(theta);
    if t > std::f64::consts::FRAC_PI_2 {
        std::f64::consts::PI - t
    } else if t < -std::f64::consts::FRAC_PI_2 {
        -std::f64::consts::PI - t
    } else {
        t
    }
}

/// Overlap ⟨−Θ_A|Θ_A⟩ of a site subset, in the canonical gauge. The empty
/// subset has overlap 1.
pub fn subsystem_overlap(angles: &[f64], spins: &[SpinValue], sites: &[usize]) -> f64 {
    sites
        .iter()
        .map(|&i| fold_angle(angles[i]).cos().powi(spins[i].twice() as i32))
        .product()
}

/// The overlap bundle describing a disjoint pair (B, C): O_B, O_C, the
/// complement of B∪C, and the total.
#[derive(Copy, Clone, Debug)]
pub struct OverlapSet {
    pub o_b: f64,
    pub o_c: f64,
    pub o_comp: f64,
    pub o_total: f64,
}

impl OverlapSet {
    pub fn new(o_b: f64, o_c: f64, o_comp: f64) -> Self {
        Self { o_b, o_c, o_comp, o_total: o_b * o_c * o_comp }
    }

    /// Overlaps of disjoint site sets B and C of a factorized model.
    pub fn for_subsystems(
        angles: &[f64],
        spins: &[SpinValue],
        b: &[usize],
        c: &[usize],
    ) -> Result<Self, AnalyticError> {
        if let Some(&site) = b.iter().find(|site| c.contains(site)) {
            return Err(AnalyticError::OverlappingSubsystems(site));
        }
        let rest: Vec<usize> =
            (0..spins.len()).filter(|i| !b.contains(i) && !c.contains(i)).collect();
        Ok(Self::new(
            subsystem_overlap(angles, spins, b),
            subsystem_overlap(angles, spins, c),
            subsystem_overlap(angles, spins, &rest),
        ))
    }

    /// Overlap of A = B∪C.
    pub fn o_a(&self) -> f64 {
        self.o_b * self.o_c
    }
}

/// A value carried by both parity branches: `plus` belongs to |Θ⁺⟩, `minus`
/// to |Θ⁻⟩.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SidePair {
    pub plus: f64,
    pub minus: f64,
}

impl SidePair {
    pub fn get(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Even => self.plus,
            Parity::Odd => self.minus,
        }
    }
}

/// Schmidt weights p^±_{A^ν} of |Θ^±⟩ across a bipartition (A, Ā):
/// p^±_{A^ν} = (1 + ν O_A)(1 ± ν O_Ā) / (2(1 ± O)).
#[derive(Copy, Clone, Debug)]
pub struct SchmidtWeights {
    pub plus_a_plus: f64,
    pub plus_a_minus: f64,
    pub minus_a_plus: f64,
    pub minus_a_minus: f64,
}

impl SchmidtWeights {
    /// The (p_{A⁺}, p_{A⁻}) row of one parity branch.
    pub fn branch(&self, parity: Parity) -> (f64, f64) {
        match parity {
            Parity::Even => (self.plus_a_plus, self.plus_a_minus),
            Parity::Odd => (self.minus_a_plus, self.minus_a_minus),
        }
    }
}

pub fn schmidt_weights(
    o_a: f64,
    o_comp: f64,
    o_total: f64,
) -> Result<SchmidtWeights, AnalyticError> {
    if o_total == -1.0 {
        return Err(AnalyticError::DegenerateOverlap);
    }
    let p = |pm: f64, nu: f64| {
        (1.0 + nu * o_a) * (1.0 + pm * nu * o_comp) / (2.0 * (1.0 + pm * o_total))
    };
    // At O = 1 the odd combination does not exist (the two product states
    // coincide); take the weight convention (1, 0) so every downstream
    // entanglement formula degenerates to zero.
    let (minus_a_plus, minus_a_minus) =
        if o_total == 1.0 { (1.0, 0.0) } else { (p(-1.0, 1.0), p(-1.0, -1.0)) };
    Ok(SchmidtWeights {
        plus_a_plus: p(1.0, 1.0),
        plus_a_minus: p(1.0, -1.0),
        minus_a_plus,
        minus_a_minus,
    })
}

/// Subsystem concurrence side limits
/// C^± = √((1−O_B²)(1−O_C²)) · O_comp / (1 ± O); the global bipartition is
/// the special case O_comp = 1. C⁺ is the parallel branch, C⁻ the
/// antiparallel one.
pub fn concurrence_limits(ov: &OverlapSet) -> SidePair {
    let base = ((1.0 - ov.o_b * ov.o_b) * (1.0 - ov.o_c * ov.o_c)).sqrt() * ov.o_comp;
    if base == 0.0 {
        // separable already; also covers the 0/0 at |O| = 1
        return SidePair { plus: 0.0, minus: 0.0 };
    }
    SidePair { plus: base / (1.0 + ov.o_total), minus: base / (1.0 - ov.o_total) }
}

/// Negativity side limits
/// N^± = ½[√((p^±_{A^∓})² + (C^±)²/O_comp) − p^±_{A^∓}], with the
/// (C^±)²/O_comp term expanded to (1−O_B²)(1−O_C²)·O_comp/(1±O)² so the
/// O_comp → 0 limit is branch-free.
pub fn negativity_limits(ov: &OverlapSet) -> Result<SidePair, AnalyticError> {
    let w = schmidt_weights(ov.o_a(), ov.o_comp, ov.o_total)?;
    let cross = (1.0 - ov.o_b * ov.o_b) * (1.0 - ov.o_c * ov.o_c) * ov.o_comp;
    let neg = |p_opposite: f64, denom: f64| {
        let c2 = cross / (denom * denom);
        0.5 * ((p_opposite * p_opposite + c2).sqrt() - p_opposite)
    };
    Ok(SidePair {
        plus: neg(w.plus_a_minus, 1.0 + ov.o_total),
        minus: neg(w.minus_a_plus, 1.0 - ov.o_total),
    })
}

/// Concurrence of the equal mixture of |Θ⁺⟩ and |Θ⁻⟩:
/// C⁰ = ½(C⁻ − C⁺) = C⁻·O/(1+O). Both routes are evaluated and must agree.
pub fn mixture_concurrence(c: &SidePair, o_total: f64) -> Result<f64, AnalyticError> {
    let half_split = 0.5 * (c.minus - c.plus);
    let via_minus = c.minus * o_total / (1.0 + o_total);
    if (half_split - via_minus).abs() > 1e-10 {
        return Err(AnalyticError::InconsistentMixture((half_split - via_minus).abs()));
    }
    Ok(half_split)
}

/// The full side-limit bundle for one disjoint pair (B, C).
#[derive(Copy, Clone, Debug)]
pub struct EntanglementLimits {
    pub concurrence: SidePair,
    pub negativity: SidePair,
    pub mixture: f64,
}

pub fn entanglement_limits(ov: &OverlapSet) -> Result<EntanglementLimits, AnalyticError> {
    let concurrence = concurrence_limits(ov);
    let negativity = negativity_limits(ov)?;
    let mixture = mixture_concurrence(&concurrence, ov.o_total)?;
    Ok(EntanglementLimits { concurrence, negativity, mixture })
}

/// The effective two-qubit reduced states of |Θ^±⟩ over (B, C), in the
/// product basis |Θ_B^ν Θ_C^ν'⟩ ordered (++, +−, −+, −−):
/// diagonal q^±_{BC^ν} blocks with α^± = √(q^±_{BC⁺}q^±_{BC⁻}) coherences,
/// weighted by the A-level Schmidt weights.
#[derive(Clone, Debug)]
pub struct TwoQubitReductions {
    pub plus: Matrix4<f64>,
    pub minus: Matrix4<f64>,
}

pub fn two_qubit_reduction(
    o_b: f64,
    o_c: f64,
    weights: &SchmidtWeights,
) -> Result<TwoQubitReductions, AnalyticError> {
    let o_a = o_b * o_c;
    if o_a == -1.0 {
        return Err(AnalyticError::DegenerateOverlap);
    }
    let q =
        |pm: f64, nu: f64| (1.0 + nu * o_b) * (1.0 + pm * nu * o_c) / (2.0 * (1.0 + pm * o_a));
    let branch = |pm: f64| {
        // same degenerate-branch convention as in `schmidt_weights`
        if 1.0 + pm * o_a == 0.0 {
            (1.0, 0.0)
        } else {
            (q(pm, 1.0), q(pm, -1.0))
        }
    };
    let build = |p_a_plus: f64, p_a_minus: f64| {
        let (qp_p, qp_m) = branch(1.0);
        let (qm_p, qm_m) = branch(-1.0);
        let alpha_p = (qp_p * qp_m).sqrt();
        let alpha_m = (qm_p * qm_m).sqrt();
        let mut m = Matrix4::zeros();
        m[(0, 0)] = p_a_plus * qp_p;
        m[(3, 3)] = p_a_plus * qp_m;
        m[(0, 3)] = p_a_plus * alpha_p;
        m[(3, 0)] = p_a_plus * alpha_p;
        m[(1, 1)] = p_a_minus * qm_p;
        m[(2, 2)] = p_a_minus * qm_m;
        m[(1, 2)] = p_a_minus * alpha_m;
        m[(2, 1)] = p_a_minus * alpha_m;
        m
    };
    Ok(TwoQubitReductions {
        plus: build(weights.plus_a_plus, weights.plus_a_minus),
        minus: build(weights.minus_a_plus, weights.minus_a_minus),
    })
}

/// Magnetization step of one site between the two definite-parity states,
/// ΔMᵢ = ⟨Θ⁻|sᶻᵢ|Θ⁻⟩ − ⟨Θ⁺|sᶻᵢ|Θ⁺⟩ = 2 sᵢ sin²θᵢ O / (cosθᵢ (1 − O²)).
/// Zero when the total overlap vanishes.
pub fn magnetization_step(angles: &[f64], spins: &[SpinValue], site: usize) -> f64 {
    let all: Vec<usize> = (0..spins.len()).collect();
    let o = subsystem_overlap(angles, spins, &all);
    if o == 0.0 {
        return 0.0;
    }
    let t = fold_angle(angles[site]);
    // o ≠ 0 forces cosθᵢ ≠ 0
    debug_assert!(t.cos() != 0.0);
    2.0 * spins[site].s() * t.sin().powi(2) * o / (t.cos() * (1.0 - o * o))
}

/// Total magnetization step ΔM = Σᵢ ΔMᵢ between the two definite-parity
/// states; approaches 1 in the isotropic-xy limit θ → 0.
pub fn magnetization_step_total(angles: &[f64], spins: &[SpinValue]) -> f64 {
    (0..spins.len()).map(|i| magnetization_step(angles, spins, i)).sum()
}

/// Both sides of the monogamy identity for disjoint subsystems B, C, D:
/// lhs = C²_BC + C²_BD,
/// rhs = C²_{B,C∪D} · [1 − (1−O_C²)(1−O_D²)/(1−O_C²O_D²)],
/// where C_{B,C∪D} treats C∪D as one subsystem with O_{C∪D} = O_C·O_D.
pub fn monogamy_gap(o_b: f64, o_c: f64, o_d: f64, o_comp_bcd: f64, parity: Parity) -> (f64, f64) {
    let c_bc = concurrence_limits(&OverlapSet::new(o_b, o_c, o_d * o_comp_bcd)).get(parity);
    let c_bd = concurrence_limits(&OverlapSet::new(o_b, o_d, o_c * o_comp_bcd)).get(parity);
    let c_b_cd = concurrence_limits(&OverlapSet::new(o_b, o_c * o_d, o_comp_bcd)).get(parity);
    let lhs = c_bc * c_bc + c_bd * c_bd;
    let bracket = 1.0 - (1.0 - o_c * o_c) * (1.0 - o_d * o_d) / (1.0 - o_c * o_c * o_d * o_d);
    (lhs, c_b_cd * c_b_cd * bracket)
}

// ---------------------------------------------------------------------------
// Uniform (common-angle) closed forms: overlaps become powers of χ = cos²θ.
// Subsystem spins are carried as 2S integers so half-integer totals stay
// exact.
// ---------------------------------------------------------------------------

/// Exact limits and large-S approximations of the uniform solution, at
/// anisotropy χ and scaled gap parameter δ = 2S(1 − χ).
#[derive(Clone, Debug)]
pub struct UniformLimits {
    pub exact: EntanglementLimits,
    pub delta: f64,
    /// √(S_Bδ/S)·√(1−e^{−δ})/(1 ± e^{−δ/2}), for the complementary
    /// bipartition with S_A = S_B.
    pub approx_global: SidePair,
    /// (δ/S)·√(S_B S_C)·e^{−δ/2}/(1 ± e^{−δ/2}) for small subsystems.
    pub approx_pair: SidePair,
}

/// Closed-form limits for the uniform solution. `twice_*` are 2S values;
/// B and C must fit inside the system.
pub fn uniform_limits(
    chi: f64,
    twice_s_total: u32,
    twice_s_b: u32,
    twice_s_c: u32,
) -> Result<UniformLimits, AnalyticError> {
    assert!(twice_s_b + twice_s_c <= twice_s_total, "subsystems exceed the system");
    let s_total = twice_s_total as f64 / 2.0;
    let s_b = twice_s_b as f64 / 2.0;
    let s_c = twice_s_c as f64 / 2.0;
    let ov = OverlapSet::new(chi.powf(s_b), chi.powf(s_c), chi.powf(s_total - s_b - s_c));
    let exact = entanglement_limits(&ov)?;
    let delta = 2.0 * s_total * (1.0 - chi);
    let e_half = (-delta / 2.0).exp();
    let approx_global = SidePair {
        plus: (s_b * delta / s_total).sqrt() * (1.0 - e_half * e_half).sqrt() / (1.0 + e_half),
        minus: (s_b * delta / s_total).sqrt() * (1.0 - e_half * e_half).sqrt() / (1.0 - e_half),
    };
    let pair_base = delta / s_total * (s_b * s_c).sqrt() * e_half;
    let approx_pair =
        SidePair { plus: pair_base / (1.0 + e_half), minus: pair_base / (1.0 - e_half) };
    Ok(UniformLimits { exact, delta, approx_global, approx_pair })
}

/// Shannon entropy in bits of a two-outcome distribution.
pub fn binary_entropy_bits(p: f64) -> f64 {
    let q = 1.0 - p;
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(q)
}

/// Entanglement entropy (bits) of one parity branch across a bipartition,
/// from its rank-2 Schmidt weights.
pub fn schmidt_entropy_bits(weights: &SchmidtWeights, parity: Parity) -> f64 {
    let (p, _) = weights.branch(parity);
    binary_entropy_bits(p)
}
