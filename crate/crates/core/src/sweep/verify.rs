//! Self-check suites: random-construction residuals, ground-state
//! certificates against the dense oracle, analytic-vs-numeric entanglement
//! cross-checks, and the closed-form identities. The acceptance tests and
//! the `verify` CLI subcommand both run these.

use super::SweepError;
use crate::analytic::{
    fold_angle,
    concurrence_limits, entanglement_limits, magnetization_step, mixture_concurrence,
    monogamy_gap, negativity_limits, schmidt_entropy_bits, schmidt_weights, subsystem_overlap,
    uniform_limits, OverlapSet,
};
use crate::basis::Parity;
use crate::ed::{
    full_spectrum, ground_state, negativity, reduced_density, wootters_concurrence,
    LanczosOptions,
};
use crate::factor::{
    alternating_solution, eigen_residual, gs_certificate, product_state, solve_from_angles,
    total_overlap, AlternatingDrive,
};
use crate::model::ModelSpec;
use crate::spin::SpinValue;
use crate::Topology;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// One named check with its observed worst deviation.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn from_worst(name: &str, worst: f64, tolerance: f64, detail: String) -> Check {
        Check { name: name.into(), passed: worst <= tolerance, worst, tolerance, detail }
    }
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for c in &self.checks {
            writeln!(
                out,
                "{:<48} {:>12.3e} <= {:>8.0e}  {}",
                c.name,
                c.worst,
                c.tolerance,
                if c.passed { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
        let (npass, total) = (self.checks.iter().filter(|c| c.passed).count(), self.checks.len());
        writeln!(out, "{npass}/{total} checks passed").unwrap();
        out
    }

    pub fn write_jsonl<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        for c in &self.checks {
            let line = serde_json::to_string(c).map_err(std::io::Error::other)?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// A random separable construction: mixed spins, long-range couplings,
/// self-energies on s ≥ 1 sites. `certified` restricts to parameters that
/// satisfy the ground-state sufficiency condition by construction.
pub fn random_factorized_model(
    rng: &mut ChaCha8Rng,
    max_n: usize,
    max_dim: usize,
    certified: bool,
) -> (ModelSpec, Vec<f64>) {
    loop {
        let n = rng.gen_range(2..=max_n);
        let spins: Vec<SpinValue> =
            (0..n).map(|_| SpinValue::from_twice(rng.gen_range(1..=3)).unwrap()).collect();
        let dim: usize = spins.iter().map(|s| s.dim()).product();
        if dim > max_dim {
            continue;
        }
        let mut vx = DMatrix::zeros(n, n);
        let mut vz = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if i == j && spins[i].twice() < 2 {
                    continue;
                }
                if i != j && rng.gen_bool(0.3) {
                    continue;
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
                let t = rng.gen_range(0.1..std::f64::consts::PI - 0.1);
                if certified || rng.gen_bool(0.7) {
                    t
                } else {
                    -t
                }
            })
            .collect();
        match solve_from_angles(&vx, &vz, &angles, &spins) {
            Ok((spec, _)) => return (spec, angles),
            Err(_) => continue,
        }
    }
}

/// Residual suite: random factorized constructions must be exact
/// eigenstates, degenerate with their parity partners.
pub fn residual_suite(count: usize, seed: u64) -> Result<VerifyReport, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_residual = 0.0f64;
    let mut worst_energy_split = 0.0f64;
    for _ in 0..count {
        let (spec, angles) = random_factorized_model(&mut rng, 6, 4096, false);
        let r = eigen_residual(&spec, &angles)?;
        worst_residual = worst_residual.max(r.max_residual());
        worst_energy_split = worst_energy_split.max((r.partner_energy - r.energy).abs());
    }
    let mut report = VerifyReport::default();
    report.checks.push(Check::from_worst(
        "residual: H|Θ⟩ = E|Θ⟩ and H|−Θ⟩ = E|−Θ⟩",
        worst_residual,
        1e-10,
        format!("{count} random constructions"),
    ));
    report.checks.push(Check::from_worst(
        "residual: |±Θ⟩ energies degenerate",
        worst_energy_split,
        1e-10,
        format!("{count} random constructions"),
    ));
    Ok(report)
}

/// Certificate suite: whenever the sufficiency condition holds, the
/// factorized energy is the global minimum and both parity sectors reach it.
pub fn certificate_suite(count: usize, seed: u64) -> Result<VerifyReport, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = LanczosOptions { seed, ..Default::default() };
    let mut worst_gs_gap = 0.0f64;
    let mut worst_sector_split = 0.0f64;
    let mut certified_seen = 0usize;
    for _ in 0..count {
        let (spec, angles) = random_factorized_model(&mut rng, 5, 1024, true);
        let cert = gs_certificate(&spec, &angles);
        if !cert.certified {
            continue;
        }
        certified_seen += 1;
        let energy = eigen_residual(&spec, &angles)?.energy;
        let spectrum = full_spectrum(&spec)?;
        worst_gs_gap = worst_gs_gap.max((spectrum[0] - energy).abs());
        let even = ground_state(&spec, Parity::Even, &opts)?;
        let odd = ground_state(&spec, Parity::Odd, &opts)?;
        worst_sector_split = worst_sector_split.max((even.energy - odd.energy).abs());
    }
    let mut report = VerifyReport::default();
    report.checks.push(Check::from_worst(
        "certificate: E_Θ is the global minimum",
        worst_gs_gap,
        1e-9,
        format!("{certified_seen}/{count} constructions certified"),
    ));
    report.checks.push(Check::from_worst(
        "certificate: parity sector minima coincide",
        worst_sector_split,
        1e-9,
        format!("{certified_seen}/{count} constructions certified"),
    ));
    Ok(report)
}

/// Oracle suite: closed-form concurrences, negativities, mixture values,
/// magnetization steps and Schmidt ranks against quantities computed from
/// explicitly constructed definite-parity states.
pub fn oracle_suite(count: usize, seed: u64) -> Result<VerifyReport, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_negativity = 0.0f64;
    let mut worst_wootters = 0.0f64;
    let mut worst_mixture = 0.0f64;
    let mut worst_step = 0.0f64;
    let mut worst_rank_leak = 0.0f64;
    let mut worst_global = 0.0f64;
    let mut qubit_pairs = 0usize;

    for _ in 0..count {
        let (spec, raw_angles) = random_factorized_model(&mut rng, 5, 1024, false);
        let n = spec.n_sites();
        let space = spec.hilbert_space();
        // canonical gauge: all local overlaps nonnegative, so the closed
        // forms and the explicit states agree branch by branch
        let angles: Vec<f64> = raw_angles.iter().map(|&t| fold_angle(t)).collect();
        let overlap = total_overlap(&spec.spins, &angles);
        if overlap.abs() > 1.0 - 1e-6 {
            continue;
        }

        // explicit definite-parity states
        let psi = product_state(&spec.spins, &angles);
        let flipped: Vec<f64> = angles.iter().map(|t| -t).collect();
        let psi_partner = product_state(&spec.spins, &flipped);
        let build = |sign: f64, norm2: f64| -> Vec<f64> {
            psi.iter()
                .zip(&psi_partner)
                .map(|(a, b)| (a + sign * b) / norm2.sqrt())
                .collect()
        };
        let plus = build(1.0, 2.0 * (1.0 + overlap));
        let minus = build(-1.0, 2.0 * (1.0 - overlap));

        // a random disjoint pair of single sites
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let ov = OverlapSet::for_subsystems(&angles, &spec.spins, &[i], &[j])?;
        let limits = entanglement_limits(&ov)?;

        for (parity, state) in [(Parity::Even, &plus), (Parity::Odd, &minus)] {
            let rho = reduced_density(&[(1.0, state)], &space, &[i, j])?;
            let num = negativity(&rho, &[i])?;
            worst_negativity = worst_negativity.max((num - limits.negativity.get(parity)).abs());
            if spec.spins[i].twice() == 1 && spec.spins[j].twice() == 1 {
                qubit_pairs += 1;
                let c = wootters_concurrence(&rho.matrix)?;
                worst_wootters = worst_wootters.max((c - limits.concurrence.get(parity)).abs());
            }
            // Schmidt rank 2 across the (pair, rest) bipartition
            let spectrum = rho.spectrum();
            let leak: f64 = spectrum.iter().skip(2).sum();
            worst_rank_leak = worst_rank_leak.max(leak);
        }

        // a three-site selection: B one site, C two sites
        if n >= 4 {
            let mut picks: Vec<usize> = (0..n).collect();
            for t in 0..3 {
                let swap = rng.gen_range(t..n);
                picks.swap(t, swap);
            }
            let (b_site, mut c_sites) = (picks[0], [picks[1], picks[2]]);
            c_sites.sort_unstable();
            let ov3 =
                OverlapSet::for_subsystems(&angles, &spec.spins, &[b_site], &c_sites)?;
            let limits3 = negativity_limits(&ov3)?;
            let mut sel = vec![b_site, c_sites[0], c_sites[1]];
            sel.sort_unstable();
            for (parity, state) in [(Parity::Even, &plus), (Parity::Odd, &minus)] {
                let rho = reduced_density(&[(1.0, state)], &space, &sel)?;
                let num = negativity(&rho, &[b_site])?;
                worst_negativity =
                    worst_negativity.max((num - limits3.get(parity)).abs());
            }
        }

        // global bipartition concurrence from purity
        let cut = rng.gen_range(1..n);
        let left: Vec<usize> = (0..cut).collect();
        let o_left = subsystem_overlap(&angles, &spec.spins, &left);
        let rest: Vec<usize> = (cut..n).collect();
        let o_rest = subsystem_overlap(&angles, &spec.spins, &rest);
        let global = concurrence_limits(&OverlapSet::new(o_left, o_rest, 1.0));
        for (parity, state) in [(Parity::Even, &plus), (Parity::Odd, &minus)] {
            let rho = reduced_density(&[(1.0, state)], &space, &left)?;
            let c = (2.0 * (1.0 - rho.purity())).max(0.0).sqrt();
            worst_global = worst_global.max((c - global.get(parity)).abs());
        }

        // magnetization step against explicit expectation values
        let site = rng.gen_range(0..n);
        let step = magnetization_step(&angles, &spec.spins, site);
        let sz = |state: &[f64]| crate::ed::expectation_sz(state, &space, &spec.spins, site);
        worst_step = worst_step.max((sz(&minus) - sz(&plus) - step).abs());

        // mixture concurrence for qubit pairs via the two-qubit oracle
        if spec.spins[i].twice() == 1 && spec.spins[j].twice() == 1 {
            let rho0 = reduced_density(&[(0.5, &plus), (0.5, &minus)], &space, &[i, j])?;
            let c0 = mixture_concurrence(&limits.concurrence, ov.o_total)?;
            let woot = wootters_concurrence(&rho0.matrix)?;
            worst_mixture = worst_mixture.max((woot - c0).abs());
        }
    }

    let mut report = VerifyReport::default();
    report.checks.push(Check::from_worst(
        "oracle: negativity side limits vs partial transpose",
        worst_negativity,
        1e-10,
        format!("{count} models, both parities"),
    ));
    report.checks.push(Check::from_worst(
        "oracle: pair concurrence limits vs two-qubit formula",
        worst_wootters,
        1e-10,
        format!("{qubit_pairs} spin-1/2 pairs"),
    ));
    report.checks.push(Check::from_worst(
        "oracle: mixture concurrence vs two-qubit formula",
        worst_mixture,
        1e-10,
        "equal mixtures of both parities".into(),
    ));
    report.checks.push(Check::from_worst(
        "oracle: global concurrence vs purity route",
        worst_global,
        1e-10,
        "random bipartitions".into(),
    ));
    report.checks.push(Check::from_worst(
        "oracle: magnetization step vs expectation values",
        worst_step,
        1e-10,
        "random sites".into(),
    ));
    report.checks.push(Check::from_worst(
        "oracle: Schmidt rank 2 (weight beyond two levels)",
        worst_rank_leak,
        1e-12,
        "pair reductions of definite-parity states".into(),
    ));
    Ok(report)
}

/// Identity suite: the pure-overlap algebra, checked without any
/// diagonalization.
pub fn identity_suite(seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport::default();

    // monogamy identity over random overlap tuples
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let o: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.95..0.95)).collect();
        for parity in [Parity::Even, Parity::Odd] {
            let (lhs, rhs) = monogamy_gap(o[0], o[1], o[2], o[3], parity);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    report.checks.push(Check::from_worst(
        "identity: monogamy distribution over pair concurrences",
        worst,
        1e-12,
        "100 random overlap tuples".into(),
    ));

    // alternating-solution angle product equals the anisotropy ratio
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let chi = rng.gen_range(0.05..0.999);
        let eta = rng.gen_range(0.2..25.0);
        let s = SpinValue::from_twice(rng.gen_range(1..=4)).unwrap();
        let n = 2 * rng.gen_range(2..=5);
        let sol = alternating_solution(
            1.0,
            chi,
            s,
            n,
            Topology::Cyclic,
            AlternatingDrive::EvenOddRatio(eta),
        )
        .expect("valid alternating parameters");
        worst = worst.max((sol.theta_odd.cos() * sol.theta_even.cos() - chi).abs());
    }
    report.checks.push(Check::from_worst(
        "identity: cosθ_o·cosθ_e = vy/vx for alternating solutions",
        worst,
        1e-12,
        "50 random (χ, η, s, n)".into(),
    ));

    // uniform closed form equals the generic overlap form under χ-powers
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let chi = rng.gen_range(0.01..0.999);
        let ts_total = rng.gen_range(4..=20u32);
        let ts_b = rng.gen_range(1..=ts_total / 3);
        let ts_c = rng.gen_range(1..=ts_total / 3);
        let u = uniform_limits(chi, ts_total, ts_b, ts_c).expect("valid uniform parameters");
        let ov = OverlapSet::new(
            chi.powf(ts_b as f64 / 2.0),
            chi.powf(ts_c as f64 / 2.0),
            chi.powf((ts_total - ts_b - ts_c) as f64 / 2.0),
        );
        let generic = concurrence_limits(&ov);
        worst = worst.max((u.exact.concurrence.plus - generic.plus).abs());
        worst = worst.max((u.exact.concurrence.minus - generic.minus).abs());
        let ngen = negativity_limits(&ov).expect("valid overlaps");
        worst = worst.max((u.exact.negativity.plus - ngen.plus).abs());
        worst = worst.max((u.exact.negativity.minus - ngen.minus).abs());
    }
    report.checks.push(Check::from_worst(
        "identity: uniform closed form equals generic overlap form",
        worst,
        1e-12,
        "50 random (χ, S, S_B, S_C)".into(),
    ));

    // balanced bipartition: antiparallel global concurrence is 1
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let o = rng.gen_range(0.0..0.999);
        let c = concurrence_limits(&OverlapSet::new(o, o, 1.0));
        worst = worst.max((c.minus - 1.0).abs());
    }
    report.checks.push(Check::from_worst(
        "identity: C⁻ = 1 when the two half overlaps agree",
        worst,
        1e-12,
        "balanced global bipartitions".into(),
    ));

    // block entropy approaches one bit as overlaps vanish
    let w = schmidt_weights(1e-4, 1e-4, 1e-8).expect("regular overlap");
    let worst = (schmidt_entropy_bits(&w, Parity::Even) - 1.0)
        .abs()
        .max((schmidt_entropy_bits(&w, Parity::Odd) - 1.0).abs());
    report.checks.push(Check::from_worst(
        "identity: block entropy → 1 bit at vanishing overlaps",
        worst,
        1e-6,
        "overlaps at 1e-4".into(),
    ));

    // small-overlap expansion of the global concurrence
    let (o_a, o_comp) = (1e-2, 0.6e-2);
    let c = concurrence_limits(&OverlapSet::new(o_a, o_comp, 1.0));
    let worst = (c.plus - (1.0 - 0.5 * (o_a + o_comp) * (o_a + o_comp)))
        .abs()
        .max((c.minus - (1.0 - 0.5 * (o_a - o_comp) * (o_a - o_comp))).abs());
    report.checks.push(Check::from_worst(
        "identity: second-order small-overlap expansion",
        worst,
        1e-5,
        "overlaps at 1e-2".into(),
    ));

    report
}

/// The full verification battery.
pub fn verify_suite(seed: u64) -> Result<VerifyReport, SweepError> {
    let mut report = VerifyReport::default();
    report.checks.extend(residual_suite(50, seed)?.checks);
    report.checks.extend(certificate_suite(25, seed ^ 0x517E)?.checks);
    report.checks.extend(oracle_suite(25, seed ^ 0x0A11)?.checks);
    report.checks.extend(identity_suite(seed ^ 0x1D31).checks);
    Ok(report)
}
