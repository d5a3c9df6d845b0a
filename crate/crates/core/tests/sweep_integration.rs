//! Cross-module behavior of the sweep layer on desk-scale chains.

use spinsep::basis::Parity;
use spinsep::ed::{ground_state, LanczosOptions};
use spinsep::factor::product_state;
use spinsep::sweep::{run_sweep, side_limit_report, FamilyRegistry, GridSpec, SweepConfig};

fn small_config() -> SweepConfig {
    SweepConfig {
        n: 6,
        delta: 2.0,
        grid: GridSpec { min_scale: 0.1, max_scale: 1.3, points: 25 },
        seed: 9,
        ..SweepConfig::figure_preset(1).unwrap()
    }
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let cfg = small_config();
    let mut a = Vec::new();
    run_sweep(&cfg).unwrap().write_csv(&mut a).unwrap();
    let mut b = Vec::new();
    run_sweep(&cfg).unwrap().write_csv(&mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn parity_alternates_across_detected_transitions() {
    let cfg = small_config();
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.transitions.len(), 3, "ns = 3 transitions for n=6, s=1/2");
    for c in &out.transitions {
        assert_ne!(c.parity_below, c.parity_above, "crossing must flip the parity");
    }
    for w in out.transitions.windows(2) {
        assert_eq!(w[0].parity_above, w[1].parity_below, "no double-counted crossings");
    }
    // last transition at the factorizing field, ground state even beyond it
    let last = out.transitions.last().unwrap();
    assert!((last.scale - 1.0).abs() < 1e-6);
    assert_eq!(last.parity_above, Parity::Even);
}

#[test]
fn sector_energies_degenerate_at_the_factorizing_field() {
    // a grid point exactly at scale 1 sits on the separability manifold:
    // both sector minima coincide and the row is flagged
    let cfg = SweepConfig {
        grid: GridSpec { min_scale: 0.5, max_scale: 1.5, points: 3 },
        ..small_config()
    };
    let out = run_sweep(&cfg).unwrap();
    let row = &out.rows[1];
    assert_eq!(row.scale, 1.0);
    assert!((row.e_even - row.e_odd).abs() <= 1e-9, "split {}", row.e_even - row.e_odd);
    assert_eq!(row.gs_parity, 0, "near-degenerate row must be flagged");
}

#[test]
fn numeric_ground_states_approach_the_analytic_pair() {
    // just below the last transition the ground state is the odd
    // combination of the two product states; just above, the even one
    let cfg = small_config();
    let registry = FamilyRegistry::with_builtins();
    let family = registry.get("uniform").unwrap();
    let angles = family.separable_angles(&cfg).unwrap();
    let base = family.base_model(&cfg).unwrap();

    let psi = product_state(&base.spins, &angles);
    let flipped: Vec<f64> = angles.iter().map(|t| -t).collect();
    let partner = product_state(&base.spins, &flipped);
    let overlap: f64 = psi.iter().zip(&partner).map(|(a, b)| a * b).sum();

    for (scale, parity, sign) in
        [(1.0 - 1e-4, Parity::Odd, -1.0), (1.0 + 1e-4, Parity::Even, 1.0)]
    {
        let spec = base.with_fields(base.fields.scaled(scale));
        let opts = LanczosOptions { seed: 5, ..Default::default() };
        let even = ground_state(&spec, Parity::Even, &opts).unwrap();
        let odd = ground_state(&spec, Parity::Odd, &opts).unwrap();
        let gs = if even.energy <= odd.energy { even } else { odd };
        assert_eq!(gs.parity, parity, "wrong ground-state parity at scale {scale}");

        let norm = (2.0 * (1.0 + sign * overlap)).sqrt();
        let analytic: Vec<f64> =
            psi.iter().zip(&partner).map(|(a, b)| (a + sign * b) / norm).collect();
        let fidelity: f64 =
            gs.vector.iter().zip(&analytic).map(|(a, b)| a * b).sum::<f64>().powi(2);
        assert!(
            fidelity >= 1.0 - 1e-3,
            "fidelity {fidelity} with the analytic state at scale {scale}"
        );
    }
}

#[test]
fn side_limits_stable_under_smaller_offsets() {
    let cfg = small_config();
    let wide = side_limit_report(&cfg).unwrap();
    let narrow =
        side_limit_report(&SweepConfig { epsilon_side: 1e-5, ..cfg.clone() }).unwrap();
    assert!(wide.all_pass && narrow.all_pass);
    for (a, b) in wide.entries.iter().zip(&narrow.entries) {
        assert_eq!(a.pair, b.pair);
        assert_eq!(a.side, b.side);
        assert!(
            (a.numeric - b.numeric).abs() <= 1e-4,
            "pair {:?} {:?}: {} vs {}",
            a.pair,
            a.side,
            a.numeric,
            b.numeric
        );
    }
}

#[test]
fn unknown_family_is_rejected_with_known_names() {
    let cfg = SweepConfig { field_mode: "spiral".into(), ..small_config() };
    let err = run_sweep(&cfg).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("spiral") && msg.contains("uniform") && msg.contains("alternating"));
}
