use std::f64::consts::PI;
use std::time::Instant;

use prabhakar_wasm_demo::{example_slice, green_profile, linspace, mittag_leffler_curve};

#[test]
fn classical_parameters_give_the_exponential() {
    let zs = linspace(-3.0, 2.0, 11);
    let curve = mittag_leffler_curve(1.0, 1.0, 1.0, -3.0, 2.0, 11).unwrap();
    for (z, e) in zs.iter().zip(&curve) {
        assert!((e - z.exp()).abs() <= 1e-12 * z.exp(), "{z}: {e}");
    }
}

#[test]
fn green_profile_vanishes_on_the_walls_and_peaks_near_the_source() {
    let g = green_profile(0.5, 0.05, 1.2, 61).unwrap();
    assert_eq!(g[0], 0.0);
    assert_eq!(g[60], 0.0);
    let peak = linspace(0.0, PI, 61)[g
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0];
    assert!((peak - 1.2).abs() < 0.06, "peak at {peak}");
}

#[test]
fn example_slices_respect_the_walls_and_stay_quick() {
    for example in [1, 2] {
        let start = Instant::now();
        let u = example_slice(example, 0.5, 1.0, 21).unwrap();
        assert!(start.elapsed().as_secs_f64() < 10.0);
        assert_eq!(u.len(), 21);
        assert!(u[0].abs() < 1e-12 && u[20].abs() < 1e-12);
        assert!(u[10] > 0.0);
        assert!((u[3] - u[17]).abs() < 1e-6 * u[10], "symmetric in x");
    }
}

#[test]
fn bad_requests_are_reported() {
    assert!(mittag_leffler_curve(1.0, 1.0, 1.0, 0.0, 1.0, 1).is_err());
    assert!(green_profile(1.5, 0.3, 1.0, 11).is_err());
    assert!(example_slice(3, 0.5, 1.0, 11).is_err());
}
