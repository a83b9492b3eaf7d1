//! Capacity identification. Interval ends are frozen from an independent
//! scipy `linprog` run over the direct parametrization.

use choquet_core::learn::constraints::{shapley_functional, Functional};
use choquet_core::learn::{
    build_constraints, check_fit, identify, probe_functional, IdentificationConfig, LearnStatus, Objective,
    PreferenceDataset, PreferenceKind,
};
use choquet_core::capacity::Capacity;

fn four_alternatives() -> PreferenceDataset {
    let mut d = PreferenceDataset::new(3);
    for p in [[0.9, 0.2, 0.4], [0.3, 0.8, 0.5], [0.6, 0.6, 0.1], [0.2, 0.3, 0.9]] {
        d.add_alternative(p.to_vec());
    }
    for (a, b) in [(0, 1), (2, 3), (1, 3)] {
        d.prefer(a, b, PreferenceKind::Strict);
    }
    d.deltas.learning_set = 0.05;
    d
}

fn set_value(a: usize) -> Functional {
    vec![(a, 1.0)]
}

#[test]
fn probed_intervals_match_scipy() {
    let prog = build_constraints(&four_alternatives(), &IdentificationConfig::default()).unwrap();
    let frozen: [(Functional, f64, f64); 5] = [
        (set_value(0b001), 0.0, 1.0),
        (set_value(0b011), 0.3, 1.0),
        (set_value(0b101), 3.0 / 14.0, 1.0),
        (set_value(0b110), 0.0, 1.0),
        (shapley_functional(3, 0), 1.0 / 3.0, 1.0),
    ];
    for (f, lo, hi) in frozen {
        let (a, b) = probe_functional(&prog, &f).unwrap();
        assert!((a.value - lo).abs() < 1e-9, "{f:?}: {} vs {lo}", a.value);
        assert!((b.value - hi).abs() < 1e-9, "{f:?}: {} vs {hi}", b.value);
        assert!(a.capacity.validate().is_empty() && b.capacity.validate().is_empty());
    }
}

#[test]
fn learned_capacity_satisfies_its_data() {
    let data = four_alternatives();
    for objective in [Objective::Feasibility, Objective::MinTotalSlack, Objective::MaxMinSlack] {
        let cfg = IdentificationConfig { objective, ..Default::default() };
        let out = identify(&data, &cfg).unwrap();
        assert_eq!(out.status, LearnStatus::FeasibleExact);
        assert!(out.capacity.validate().is_empty());
        assert_eq!(check_fit(&out.capacity, &data).unwrap().count(), 0, "{objective:?}");
    }
    let cfg = IdentificationConfig { objective: Objective::MaxMinSlack, ..Default::default() };
    assert!(identify(&data, &cfg).unwrap().min_margin.unwrap() >= 0.05 - 1e-9);
}

#[test]
fn two_criteria_polytope() {
    // (0.2, 0.8) ≻ (0.8, 0.2) forces 0.6 ν{1} - 0.6 ν{0} ≥ δ.
    let mut d = PreferenceDataset::new(2);
    d.add_alternative(vec![0.2, 0.8]);
    d.add_alternative(vec![0.8, 0.2]);
    d.prefer(0, 1, PreferenceKind::Strict);
    d.deltas.learning_set = 0.06;
    let prog = build_constraints(&d, &IdentificationConfig::default()).unwrap();
    let (lo, hi) = probe_functional(&prog, &set_value(0b01)).unwrap();
    assert!(lo.value.abs() < 1e-12);
    assert!((hi.value - 0.9).abs() < 1e-9);
    let (lo, hi) = probe_functional(&prog, &set_value(0b10)).unwrap();
    assert!((lo.value - 0.1).abs() < 1e-9);
    assert!((hi.value - 1.0).abs() < 1e-12);
}

#[test]
fn cyclic_preferences_fall_back_to_least_slack() {
    let mut d = PreferenceDataset::new(2);
    for p in [[0.2, 0.8], [0.8, 0.2], [0.5, 0.5]] {
        d.add_alternative(p.to_vec());
    }
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        d.prefer(a, b, PreferenceKind::Strict);
    }
    let out = identify(&d, &IdentificationConfig::default()).unwrap();
    assert_eq!(out.status, LearnStatus::InfeasibleMinSlack);
    assert!(out.total_slack > 0.0 && !out.slacks.is_empty());
    assert!(out.capacity.validate().is_empty());
    // Summing the three rows gives 0 ≥ 3δ, so the least total slack is 3δ.
    assert!((out.total_slack - 3.0 * d.deltas.learning_set).abs() < 1e-9);
}

#[test]
fn min_preference_excludes_max() {
    // A decision maker who ranks by the worst criterion.
    let mut d = PreferenceDataset::new(3);
    for p in [[0.5, 0.5, 0.5], [0.9, 0.9, 0.1], [0.3, 0.3, 0.3], [1.0, 0.2, 1.0]] {
        d.add_alternative(p.to_vec());
    }
    d.prefer(0, 1, PreferenceKind::Strict);
    d.prefer(2, 3, PreferenceKind::Strict);
    let out = identify(&d, &IdentificationConfig::default()).unwrap();
    assert_eq!(out.status, LearnStatus::FeasibleExact);
    let min = Capacity::from_values(3, (0..8).map(|a| if a == 7 { 1.0 } else { 0.0 }).collect()).unwrap();
    let max = Capacity::from_values(3, (0..8).map(|a| if a == 0 { 0.0 } else { 1.0 }).collect()).unwrap();
    assert_eq!(check_fit(&min, &d).unwrap().count(), 0);
    assert_eq!(check_fit(&max, &d).unwrap().count(), 2);
}

#[test]
fn k_additive_restriction() {
    let cfg = IdentificationConfig { k_additive: Some(1), ..Default::default() };
    let data = four_alternatives();
    let out = identify(&data, &cfg).unwrap();
    // Weights (1, 0, 0) already separate every pair.
    assert_eq!(out.status, LearnStatus::FeasibleExact);
    let m = choquet_core::mobius::mobius(&out.capacity).unwrap();
    assert!(m.is_k_additive(1).unwrap());
}
