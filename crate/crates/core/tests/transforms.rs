//! Set-function algebra against brute-force oracles written from the
//! definitions: permutation Shapley values, inclusion-exclusion Möbius
//! coefficients, level-set Choquet integrals.

use choquet_core::capacity::Capacity;
use choquet_core::choquet::{choquet, choquet_mobius, order_statistic_capacity};
use choquet_core::indices::{index_report, interaction_index, interaction_pair_mobius, shapley, shapley_from_mobius};
use choquet_core::joint::{synth_model, InteractionSpec};
use choquet_core::mobius::{mobius, zeta};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

fn example() -> Capacity<f64> {
    Capacity::from_values(2, vec![0.0, 0.3, 0.5, 1.0]).unwrap()
}

#[test]
fn two_criterion_example() {
    let cap = example();
    let m = mobius(&cap).unwrap();
    assert_eq!(m.coeffs().len(), 4);
    for (a, want) in [(1, 0.3), (2, 0.5), (3, 0.2)] {
        assert!((m.get(a) - want).abs() < 1e-12);
    }
    let back = zeta(&m);
    assert!(cap.values().iter().zip(back.values()).all(|(a, b)| (a - b).abs() < 1e-12));
    let phi = shapley(&cap).unwrap();
    assert!((phi[0] - 0.4).abs() < 1e-12 && (phi[1] - 0.6).abs() < 1e-12);
    assert!((interaction_index(&cap, 0b11).unwrap() - 0.2).abs() < 1e-12);
    assert!((interaction_pair_mobius(&m, 0, 1).unwrap() - 0.2).abs() < 1e-12);
    assert!((choquet(&cap, &[0.2, 0.8]).unwrap() - 0.5).abs() < 1e-12);
    assert!((choquet_mobius(&m, &[0.2, 0.8]).unwrap() - 0.5).abs() < 1e-12);
    assert!(!m.is_k_additive(1).unwrap());
    assert!(m.is_k_additive(2).unwrap());
    let r = index_report(&cap).unwrap();
    assert!((r.interaction(1, 0).unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn shapley_matches_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        for _ in 0..5 {
            let cap = random_capacity(n, &mut rng);
            let want = shapley_oracle(&cap);
            let got = shapley(&cap).unwrap();
            let via_m = shapley_from_mobius(&mobius(&cap).unwrap());
            for i in 0..n {
                assert!((got[i] - want[i]).abs() < 1e-12, "n={n}");
                assert!((via_m[i] - want[i]).abs() < 1e-12, "n={n}");
                assert!((interaction_index(&cap, 1 << i).unwrap() - want[i]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn mobius_matches_inclusion_exclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=7 {
        let cap = random_capacity(n, &mut rng);
        let want = mobius_oracle(&cap);
        let m = mobius(&cap).unwrap();
        assert!(m.coeffs().iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn pair_interactions_match_derivative_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 2..=6 {
        let cap = random_capacity(n, &mut rng);
        let m = mobius(&cap).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                let want = pair_interaction_oracle(&cap, i, j);
                assert!((interaction_index(&cap, 1 << i | 1 << j).unwrap() - want).abs() < 1e-12);
                assert!((interaction_pair_mobius(&m, i, j).unwrap() - want).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn choquet_matches_level_set_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 1..=7 {
        let cap = random_capacity(n, &mut rng);
        let m = mobius(&cap).unwrap();
        for _ in 0..20 {
            let mut p: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
            if n > 2 {
                p[1] = p[0]; // ties must not matter
            }
            let want = choquet_oracle(&cap, &p);
            assert!((choquet(&cap, &p).unwrap() - want).abs() < 1e-12);
            assert!((choquet_mobius(&m, &p).unwrap() - want).abs() < 1e-12);
        }
    }
}

#[test]
fn order_statistics() {
    let os = order_statistic_capacity::<f64>(3, 2).unwrap();
    assert!(os.is_01());
    assert_eq!(choquet(&os, &[3.0, 1.0, 2.0]).unwrap(), 2.0);
}

#[test]
fn convexity_examples() {
    let sq = Capacity::symmetric(3, |t: f64| t * t).unwrap();
    let rt = Capacity::symmetric(3, f64::sqrt).unwrap();
    assert!(sq.is_convex().unwrap() && sq.is_supermodular());
    assert!(!rt.is_convex().unwrap() && !rt.is_supermodular());
}

#[test]
fn synthetic_capacities_are_valid() {
    let m = synth_model(3, &[3, 3, 3], 42, &InteractionSpec::Full).unwrap();
    assert!(m.capacity.validate().is_empty());
    let g = synth_model(3, &[3, 3, 3], 5, &InteractionSpec::parse("groups=0,1;2").unwrap()).unwrap();
    for pair in [0b101, 0b110] {
        assert!(interaction_index(&g.capacity, pair).unwrap().abs() < 1e-12);
    }
    let a = synth_model(3, &[3, 3, 3], 5, &InteractionSpec::Additive).unwrap();
    let r = index_report(&a.capacity).unwrap();
    assert!(r.pairwise_interactions.iter().all(|(_, v)| v.abs() < 1e-12));
    assert!(mobius(&a.capacity).unwrap().is_k_additive(1).unwrap());
}
