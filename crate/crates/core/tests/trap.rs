mod common;

use std::f64::consts::PI;

use ehybrid_core::par::Exec;
use ehybrid_core::trap::{mathieu_edge, secular_frequency, stability_scan, StabilityOptions, TrapFieldModel};

const RF: f64 = 2.0 * PI * 1e9;

#[test]
fn secular_frequency_matches_floquet_oracle() {
    for (a, q) in [(0.0, 0.15), (0.01, 0.3), (-0.01, 0.5), (0.0, 0.7)] {
        let w = secular_frequency(&TrapFieldModel::mathieu(a, q, RF), 1).unwrap();
        let beta = common::floquet_beta(a, q);
        assert!((2.0 * w / RF / beta - 1.0).abs() < 0.01, "a={a} q={q}: {} vs {beta}", 2.0 * w / RF);
    }
}

#[test]
fn stability_edge_matches_floquet_oracle() {
    let opts = StabilityOptions::default();
    let edge = mathieu_edge(0.0, 0.85, 0.95, RF, 5e-4, &opts).unwrap();
    let oracle = common::floquet_edge(0.0, 0.8, 1.0);
    assert!((oracle - 0.908046).abs() < 1e-4, "{oracle}");
    assert!((edge - oracle).abs() < 0.01, "{edge} vs {oracle}");
}

#[test]
fn scan_is_identical_in_both_modes_and_splits_at_the_edge() {
    let grid: Vec<(f64, f64)> = (1..=10).map(|i| (0.0, 0.1 * i as f64)).collect();
    let opts = StabilityOptions::default();
    let par = stability_scan(Exec::Parallel, &grid, |a, q| TrapFieldModel::mathieu(a, q, RF), &opts).unwrap();
    let seq = stability_scan(Exec::Sequential, &grid, |a, q| TrapFieldModel::mathieu(a, q, RF), &opts).unwrap();
    assert_eq!(par, seq);
    for p in &par {
        let oracle_stable = common::mathieu_half_trace(p.a, p.q).abs() < 1.0;
        assert_eq!(p.stable, oracle_stable, "q = {}", p.q);
    }
}
