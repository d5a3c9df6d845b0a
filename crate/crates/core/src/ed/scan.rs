//! Parity-transition scans: track the two sector ground energies along a
//! field path and locate their crossings.

use super::lanczos::{sector_ground_state, LanczosOptions};
use super::EdError;
use crate::basis::Parity;
use crate::model::{FieldProfile, HamiltonianAction, ModelSpec};
use rayon::prelude::*;

/// Sector ground energies at one grid point.
#[derive(Copy, Clone, Debug)]
pub struct ScanPoint {
    pub scale: f64,
    pub e_even: f64,
    pub e_odd: f64,
}

impl ScanPoint {
    pub fn gs_parity(&self) -> Parity {
        if self.e_even <= self.e_odd {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn gap(&self) -> f64 {
        self.e_even - self.e_odd
    }
}

/// A located crossing of the two sector ground levels.
#[derive(Copy, Clone, Debug)]
pub struct Crossing {
    /// Crossing scale, refined by bisection to relative width 1e−8.
    pub scale: f64,
    /// Ground-state parity just below the crossing.
    pub parity_below: Parity,
    /// Ground-state parity just above the crossing.
    pub parity_above: Parity,
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub points: Vec<ScanPoint>,
    pub crossings: Vec<Crossing>,
}

const BISECTION_REL_WIDTH: f64 = 1e-8;

/// Scan sector ground energies over a strictly increasing grid of scale
/// factors, with `fields_at` mapping a scale to the full field profile
/// (border and sublattice ratios preserved by the caller). Crossings are
/// located by sign changes of E₊ − E₋ and refined by bisection.
pub fn parity_transition_scan<F>(
    spec_base: &ModelSpec,
    fields_at: F,
    grid: &[f64],
    opts: &LanczosOptions,
) -> Result<ScanOutcome, EdError>
where
    F: Fn(f64) -> FieldProfile + Sync,
{
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EdError::BadGrid);
    }

    let eval = |scale: f64| -> Result<ScanPoint, EdError> {
        let spec = spec_base.with_fields(fields_at(scale));
        let action = HamiltonianAction::new(&spec);
        let even = sector_ground_state(&action, Parity::Even, opts)?;
        let odd = sector_ground_state(&action, Parity::Odd, opts)?;
        Ok(ScanPoint { scale, e_even: even.energy, e_odd: odd.energy })
    };

    let points: Vec<ScanPoint> =
        grid.par_iter().map(|&scale| eval(scale)).collect::<Result<_, _>>()?;
    let crossings = locate_crossings(&points, eval)?;
    Ok(ScanOutcome { points, crossings })
}

/// Locate sector-level crossings between consecutive scan points, refining
/// each bracket by bisection through `eval`.
pub fn locate_crossings<F>(points: &[ScanPoint], eval: F) -> Result<Vec<Crossing>, EdError>
where
    F: Fn(f64) -> Result<ScanPoint, EdError>,
{
    let mut crossings = Vec::new();
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo.gap() == 0.0 {
            // exactly degenerate grid point: the previous window owns it
            continue;
        }
        if hi.gap() == 0.0 {
            crossings.push(Crossing {
                scale: hi.scale,
                parity_below: lo.gs_parity(),
                parity_above: lo.gs_parity().flip(),
            });
            continue;
        }
        if lo.gap().signum() == hi.gap().signum() {
            continue;
        }
        let (mut a, mut fa) = (lo.scale, lo.gap());
        let mut b = hi.scale;
        let mut steps = 0;
        while (b - a) > BISECTION_REL_WIDTH * b.abs().max(f64::MIN_POSITIVE) && steps < 200 {
            steps += 1;
            let mid = 0.5 * (a + b);
            let fm = eval(mid)?.gap();
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fm.signum() == fa.signum() {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        crossings.push(Crossing {
            scale: 0.5 * (a + b),
            parity_below: lo.gs_parity(),
            parity_above: hi.gs_parity(),
        });
    }
    Ok(crossings)
}
