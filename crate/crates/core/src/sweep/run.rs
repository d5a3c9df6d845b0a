//! Field sweeps: per-grid-point sector ground states, ground-state
//! negativities between site pairs, parity-transition detection, CSV
//! emission and analytic-vs-numeric side-limit reports.

use super::config::SweepConfig;
use super::family::FamilyRegistry;
use super::SweepError;
use crate::analytic::{negativity_limits, OverlapSet};
use crate::basis::Parity;
use crate::ed::{
    entanglement_measures, locate_crossings, negativity, reduced_density, sector_ground_state,
    Crossing, LanczosOptions, ScanPoint, SectorGroundState,
};
use crate::model::HamiltonianAction;
use rayon::prelude::*;
use serde::Serialize;
use std::io::{self, Write};

/// Rows with |E₊ − E₋| below this are flagged instead of picking a side.
pub const DEGENERACY_FLAG: f64 = 1e-10;

/// Side-limit report tolerance.
pub const SIDE_LIMIT_TOL: f64 = 1e-3;

/// One grid point of a sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub scale: f64,
    /// Applied fields, one per family field header.
    pub fields: Vec<f64>,
    /// +1 even, −1 odd, 0 when flagged near-degenerate.
    pub gs_parity: i32,
    pub e_even: f64,
    pub e_odd: f64,
    /// Ground-state negativities per requested pair.
    pub negativities: Vec<f64>,
    /// Half-chain entanglement entropy (bits), when requested.
    pub entropy_half: Option<f64>,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub config: SweepConfig,
    /// 1-based pair labels in column order.
    pub pair_labels: Vec<(usize, usize)>,
    pub field_headers: Vec<&'static str>,
    pub factorizing_field: f64,
    pub rows: Vec<SweepRow>,
    /// Parity transitions detected on the grid, bisection-refined.
    pub transitions: Vec<Crossing>,
}

fn lanczos_options(cfg: &SweepConfig) -> LanczosOptions {
    LanczosOptions { seed: cfg.seed, ..Default::default() }
}

fn sector_pair(
    action: &HamiltonianAction,
    opts: &LanczosOptions,
) -> Result<(SectorGroundState, SectorGroundState), SweepError> {
    let even = sector_ground_state(action, Parity::Even, opts)?;
    let odd = sector_ground_state(action, Parity::Odd, opts)?;
    Ok((even, odd))
}

/// Negativities N_{ij} of one state for each requested 0-based pair.
fn pair_negativities(
    state: &SectorGroundState,
    space: &crate::basis::HilbertSpace,
    pairs: &[(usize, usize)],
) -> Result<Vec<f64>, SweepError> {
    let mut out = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        let sites = if i < j { [i, j] } else { [j, i] };
        let rho = reduced_density(&[(1.0, &state.vector)], space, &sites)?;
        out.push(negativity(&rho, &[sites[0]])?);
    }
    Ok(out)
}

/// Run the configured sweep. Grid points are dispatched to a worker pool;
/// rows come back ordered by scale regardless of completion order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, SweepError> {
    cfg.validate()?;
    let registry = FamilyRegistry::with_builtins();
    let family = registry
        .get(&cfg.field_mode)
        .ok_or_else(|| SweepError::UnknownFamily {
            name: cfg.field_mode.clone(),
            known: registry.names().join(", "),
        })?;
    let opts = lanczos_options(cfg);
    let pairs = cfg.pairs.resolve(cfg.n);
    let base = family.base_model(cfg)?;
    let space = base.hilbert_space();
    let half: Vec<usize> = (0..cfg.n / 2).collect();

    let eval_row = |scale: f64| -> Result<SweepRow, SweepError> {
        let spec = family.model_at(cfg, scale)?;
        let action = HamiltonianAction::new(&spec);
        let (even, odd) = sector_pair(&action, &opts)?;
        let gap = even.energy - odd.energy;
        let (gs, gs_parity) = if gap.abs() < DEGENERACY_FLAG {
            (&even, 0)
        } else if gap < 0.0 {
            (&even, 1)
        } else {
            (&odd, -1)
        };
        let negativities = pair_negativities(gs, &space, &pairs)?;
        let entropy_half = if cfg.entropy_half {
            let rho = reduced_density(&[(1.0, &gs.vector)], &space, &half)?;
            Some(entanglement_measures(&rho).entropy_bits)
        } else {
            None
        };
        Ok(SweepRow {
            scale,
            fields: family.field_values(cfg, scale),
            gs_parity,
            e_even: even.energy,
            e_odd: odd.energy,
            negativities,
            entropy_half,
        })
    };

    let grid = cfg.grid.values();
    let rows: Vec<SweepRow> =
        grid.par_iter().map(|&scale| eval_row(scale)).collect::<Result<_, _>>()?;

    // transition detection re-evaluates energies only
    let points: Vec<ScanPoint> = rows
        .iter()
        .map(|r| ScanPoint { scale: r.scale, e_even: r.e_even, e_odd: r.e_odd })
        .collect();
    let eval_energies = |scale: f64| -> Result<ScanPoint, crate::ed::EdError> {
        let spec = base.with_fields(base.fields.scaled(scale));
        let action = HamiltonianAction::new(&spec);
        let even = sector_ground_state(&action, Parity::Even, &opts)?;
        let odd = sector_ground_state(&action, Parity::Odd, &opts)?;
        Ok(ScanPoint { scale, e_even: even.energy, e_odd: odd.energy })
    };
    let transitions = locate_crossings(&points, eval_energies)?;

    Ok(SweepOutput {
        config: cfg.clone(),
        pair_labels: pairs.iter().map(|&(i, j)| (i + 1, j + 1)).collect(),
        field_headers: family.field_headers(),
        factorizing_field: family.factorizing_field(cfg),
        rows,
        transitions,
    })
}

impl SweepOutput {
    /// Fixed-column CSV: scale, applied fields, parity, sector energies,
    /// then one negativity column per pair (and optionally the half-chain
    /// entropy). Identical config and seed give byte-identical output.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let mut header: Vec<String> = vec!["scale".into()];
        header.extend(self.field_headers.iter().map(|h| h.to_string()));
        header.extend(["parity".into(), "E_even".into(), "E_odd".into()]);
        header.extend(self.pair_labels.iter().map(|(i, j)| format!("N_{i}_{j}")));
        if self.config.entropy_half {
            header.push("entropy_half".into());
        }
        writeln!(w, "{}", header.join(","))?;
        for row in &self.rows {
            let mut cols: Vec<String> = vec![format!("{}", row.scale)];
            cols.extend(row.fields.iter().map(|v| format!("{v}")));
            cols.push(format!("{}", row.gs_parity));
            cols.push(format!("{}", row.e_even));
            cols.push(format!("{}", row.e_odd));
            cols.extend(row.negativities.iter().map(|v| format!("{v}")));
            if let Some(s) = row.entropy_half {
                cols.push(format!("{s}"));
            }
            writeln!(w, "{}", cols.join(","))?;
        }
        Ok(())
    }

    /// Human-readable transition summary.
    pub fn summary(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(
            out,
            "family {} | n = {} | 2s = {} | delta = {} | factorizing field = {}",
            self.config.field_mode,
            self.config.n,
            self.config.twice_s,
            self.config.delta,
            self.factorizing_field
        )
        .unwrap();
        writeln!(out, "parity transitions detected: {}", self.transitions.len()).unwrap();
        for c in &self.transitions {
            writeln!(
                out,
                "  scale {:.9} (field {:.9}): {} -> {}",
                c.scale,
                c.scale * self.factorizing_field,
                c.parity_below,
                c.parity_above
            )
            .unwrap();
        }
        out
    }
}

/// Which side of the separability point a report entry belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    Above,
}

/// One pair × side entry of the side-limit report.
#[derive(Clone, Debug, Serialize)]
pub struct SideLimitEntry {
    /// 1-based site labels.
    pub pair: (usize, usize),
    pub side: Side,
    pub scale: f64,
    /// Ground-state negativity at the offset scale.
    pub numeric: f64,
    /// Closed-form side limit from the overlap formulas.
    pub analytic: f64,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideLimitReport {
    pub factorizing_field: f64,
    pub epsilon_side: f64,
    pub tolerance: f64,
    pub entries: Vec<SideLimitEntry>,
    pub all_pass: bool,
}

impl SideLimitReport {
    pub fn table(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(
            out,
            "side limits at factorizing field {} (offset ±{}, tolerance {})",
            self.factorizing_field, self.epsilon_side, self.tolerance
        )
        .unwrap();
        writeln!(out, "{:<8} {:<6} {:>14} {:>14} {:>12} {:>6}", "pair", "side", "numeric", "analytic", "abs_diff", "pass")
            .unwrap();
        for e in &self.entries {
            writeln!(
                out,
                "{:<8} {:<6} {:>14.9} {:>14.9} {:>12.3e} {:>6}",
                format!("{}-{}", e.pair.0, e.pair.1),
                match e.side {
                    Side::Below => "below",
                    Side::Above => "above",
                },
                e.numeric,
                e.analytic,
                e.abs_diff,
                if e.pass { "ok" } else { "FAIL" }
            )
            .unwrap();
        }
        out
    }

    /// One JSON record per line.
    pub fn write_jsonl<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for e in &self.entries {
            let line = serde_json::to_string(e).map_err(io::Error::other)?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Evaluate the numeric ground-state negativities just below and above the
/// separability point and compare them with the closed-form side limits.
/// Below the crossing the ground state is the odd combination, so the
/// antiparallel (minus) limit applies; above, the parallel (plus) one.
pub fn side_limit_report(cfg: &SweepConfig) -> Result<SideLimitReport, SweepError> {
    cfg.validate()?;
    let registry = FamilyRegistry::with_builtins();
    let family = registry
        .get(&cfg.field_mode)
        .ok_or_else(|| SweepError::UnknownFamily {
            name: cfg.field_mode.clone(),
            known: registry.names().join(", "),
        })?;
    let opts = lanczos_options(cfg);
    let pairs = cfg.pairs.resolve(cfg.n);
    let angles = family.separable_angles(cfg)?;
    let base = family.base_model(cfg)?;
    let space = base.hilbert_space();
    let spins = &base.spins;

    let mut entries = Vec::new();
    for (side, scale, parity) in [
        (Side::Below, 1.0 - cfg.epsilon_side, Parity::Odd),
        (Side::Above, 1.0 + cfg.epsilon_side, Parity::Even),
    ] {
        let spec = family.model_at(cfg, scale)?;
        let action = HamiltonianAction::new(&spec);
        let (even, odd) = sector_pair(&action, &opts)?;
        let gs = if even.energy <= odd.energy { &even } else { &odd };
        debug_assert_eq!(gs.parity, parity);
        let numeric = pair_negativities(gs, &space, &pairs)?;
        for (&(i, j), &num) in pairs.iter().zip(&numeric) {
            let ov = OverlapSet::for_subsystems(&angles, spins, &[i.min(j)], &[i.max(j)])?;
            let limits = negativity_limits(&ov)?;
            let analytic = limits.get(parity);
            let abs_diff = (num - analytic).abs();
            entries.push(SideLimitEntry {
                pair: (i + 1, j + 1),
                side,
                scale,
                numeric: num,
                analytic,
                abs_diff,
                pass: abs_diff <= SIDE_LIMIT_TOL,
            });
        }
    }
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(SideLimitReport {
        factorizing_field: family.factorizing_field(cfg),
        epsilon_side: cfg.epsilon_side,
        tolerance: SIDE_LIMIT_TOL,
        entries,
        all_pass,
    })
}
