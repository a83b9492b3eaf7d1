//! Compiles preference data into linear constraints on the capacity.

use crate::capacity::Capacity;
use crate::choquet::choquet_coefficients;
use crate::indices::xi;
use crate::lp::{LinearProgram, Relation};
use crate::mobius::{self, MobiusRepresentation};
use crate::subset::{self, Mask};
use crate::{Error, Result};

use super::dataset::{ImportanceKind, InteractionKind, PreferenceDataset, PreferenceKind};

/// A linear form `Σ c_A ν(A)` in the capacity values.
pub type Functional = Vec<(Mask, f64)>;

pub fn choquet_functional(profile: &[f64]) -> Functional {
    choquet_coefficients(profile)
}

/// `C(ν, better) - C(ν, worse)`.
pub fn difference_functional(better: &[f64], worse: &[f64]) -> Functional {
    let mut f = choquet_functional(better);
    f.extend(choquet_functional(worse).into_iter().map(|(a, c)| (a, -c)));
    f
}

pub fn shapley_functional(n: usize, i: usize) -> Functional {
    let w: Vec<f64> = (0..n).map(|t| xi(n, t, 1)).collect();
    let mut f = Vec::with_capacity(1 << n);
    for t in subset::subsets_of(subset::full(n) & !(1 << i)) {
        let c = w[subset::card(t)];
        f.push((t | 1 << i, c));
        f.push((t, -c));
    }
    f
}

pub fn interaction_functional(n: usize, i: usize, j: usize) -> Functional {
    let pair = (1 << i) | (1 << j);
    let mut f = Vec::new();
    for t in subset::subsets_of(subset::full(n) & !pair) {
        let c: f64 = xi(n, subset::card(t), 2);
        f.push((t | pair, c));
        f.push((t | 1 << i, -c));
        f.push((t | 1 << j, -c));
        f.push((t, c));
    }
    f
}

fn scaled(f: Functional, s: f64) -> Functional {
    f.into_iter().map(|(a, c)| (a, c * s)).collect()
}

fn sum(mut a: Functional, b: Functional) -> Functional {
    a.extend(b);
    a
}

pub fn evaluate_functional(f: &Functional, cap: &Capacity<f64>) -> f64 {
    f.iter().map(|&(a, c)| c * cap.get(a)).sum()
}

/// How capacity values are expressed through LP variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Parametrization {
    /// One variable per `ν(A)`, `A ∉ {∅, N}`.
    Direct { n: usize },
    /// One variable per Möbius coefficient `m(B)` for `B` in `support`.
    Mobius { n: usize, support: Vec<Mask> },
}

impl Parametrization {
    pub fn n(&self) -> usize {
        match self {
            Parametrization::Direct { n } | Parametrization::Mobius { n, .. } => *n,
        }
    }

    /// Möbius support: nonempty sets of size at most `k` lying inside a block
    /// of `partition` (when given).
    pub fn mobius_support(n: usize, k: usize, partition: Option<&[Vec<usize>]>) -> Vec<Mask> {
        let blocks: Vec<Mask> = match partition {
            Some(p) => p.iter().map(|b| subset::from_members(b)).collect(),
            None => vec![subset::full(n)],
        };
        (1..=subset::full(n))
            .filter(|&b| subset::card(b) <= k && blocks.iter().any(|&blk| subset::is_subset(b, blk)))
            .collect()
    }

    pub fn num_vars(&self) -> usize {
        match self {
            Parametrization::Direct { n } => (1usize << n) - 2,
            Parametrization::Mobius { support, .. } => support.len(),
        }
    }

    pub fn var_name(&self, var: usize) -> String {
        match self {
            Parametrization::Direct { .. } => format!("nu{}", subset::render(var + 1)),
            Parametrization::Mobius { support, .. } => format!("m{}", subset::render(support[var])),
        }
    }

    /// LP variable holding `ν(A)` in the direct parametrization.
    pub fn direct_var(&self, set: Mask) -> Option<usize> {
        match self {
            Parametrization::Direct { n } if set != 0 && set != subset::full(*n) => Some(set - 1),
            _ => None,
        }
    }

    /// Rewrites a functional as `(terms, constant)` over LP variables.
    pub fn linearize(&self, f: &Functional) -> (Vec<(usize, f64)>, f64) {
        match self {
            Parametrization::Direct { n } => {
                let full = subset::full(*n);
                let mut dense = vec![0.0; 1 << n];
                for &(a, c) in f {
                    dense[a] += c;
                }
                let constant = dense[full];
                let terms = (1..full)
                    .filter(|&a| dense[a] != 0.0)
                    .map(|a| (a - 1, dense[a]))
                    .collect();
                (terms, constant)
            }
            Parametrization::Mobius { support, .. } => {
                // Σ_A c_A ν(A) = Σ_B m(B) Σ_{A ⊇ B} c_A
                let terms = support
                    .iter()
                    .enumerate()
                    .filter_map(|(v, &b)| {
                        let c: f64 = f
                            .iter()
                            .filter(|(a, _)| subset::is_subset(b, *a))
                            .map(|(_, c)| c)
                            .sum();
                        (c != 0.0).then_some((v, c))
                    })
                    .collect();
                (terms, 0.0)
            }
        }
    }

    /// Capacity values encoded by an LP point (not repaired or validated).
    pub fn decode(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Parametrization::Direct { n } => {
                let full = subset::full(*n);
                let mut v = vec![0.0; 1 << n];
                v[1..full].copy_from_slice(&x[..full - 1]);
                v[full] = 1.0;
                v
            }
            Parametrization::Mobius { n, support } => {
                let mut coeffs = vec![0.0; 1 << n];
                for (&b, &m) in support.iter().zip(x) {
                    coeffs[b] = m;
                }
                mobius::zeta(&MobiusRepresentation::from_coeffs(*n, coeffs).expect("shape"))
                    .into_values()
            }
        }
    }
}

/// Where a row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOrigin {
    Monotonicity { set: Mask, removed: usize },
    Normalization,
    Veto { criterion: usize, set: Mask },
    Favour { criterion: usize, set: Mask },
    Preference(usize),
    Shapley(usize),
    Interaction(usize),
}

impl RowOrigin {
    /// Rows stated by the decision maker (and so eligible for slack).
    pub fn is_statement(&self) -> bool {
        matches!(
            self,
            RowOrigin::Preference(_) | RowOrigin::Shapley(_) | RowOrigin::Interaction(_)
        )
    }
}

/// The capacity polytope as an LP plus bookkeeping to decode its points.
#[derive(Clone, Debug)]
pub struct CapacityProgram {
    pub lp: LinearProgram<f64>,
    pub param: Parametrization,
    /// Origin of each LP row, aligned with `lp.constraints()`.
    pub origins: Vec<RowOrigin>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Objective {
    /// Any feasible vertex; minimum total slack if none exists.
    #[default]
    Feasibility,
    /// Minimize the L1 sum of per-row slacks.
    MinTotalSlack,
    /// Maximize the smallest margin over statement rows.
    MaxMinSlack,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdentificationConfig {
    /// Restrict to Möbius coefficients of order at most `k`.
    pub k_additive: Option<usize>,
    pub objective: Objective,
    pub deltas: Option<super::dataset::Deltas>,
    /// Restrict Möbius support to sets inside one block of this partition.
    pub support_partition: Option<Vec<Vec<usize>>>,
}

impl IdentificationConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if let Some(k) = self.k_additive {
            if k == 0 || k > n {
                return Err(Error::domain(format!("k-additivity order {k} outside 1..={n}")));
            }
        }
        if let Some(d) = &self.deltas {
            d.validate()?;
        }
        if let Some(p) = &self.support_partition {
            let mut seen = vec![false; n];
            for &i in p.iter().flatten() {
                if i >= n || seen[i] {
                    return Err(Error::domain(format!(
                        "support partition is not a partition of 0..{n}"
                    )));
                }
                seen[i] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::domain("support partition does not cover every criterion"));
            }
        }
        Ok(())
    }

    pub fn parametrization(&self, n: usize) -> Parametrization {
        if self.k_additive.is_none() && self.support_partition.is_none() {
            Parametrization::Direct { n }
        } else {
            let k = self.k_additive.unwrap_or(n);
            Parametrization::Mobius {
                n,
                support: Parametrization::mobius_support(n, k, self.support_partition.as_deref()),
            }
        }
    }
}

/// Error when some veto criterion differs from some favour criterion: the
/// singleton of the favour criterion would need value 0 and 1 at once.
pub fn check_veto_favour(data: &PreferenceDataset) -> Result<()> {
    for &v in &data.veto {
        for &f in &data.favour {
            if v != f {
                return Err(Error::domain(format!(
                    "veto criterion {v} and favour criterion {f} force nu({{{f}}}) to be both 0 and 1"
                )));
            }
        }
    }
    Ok(())
}

/// Builds the capacity polytope for `data`.
pub fn build_constraints(data: &PreferenceDataset, cfg: &IdentificationConfig) -> Result<CapacityProgram> {
    data.validate()?;
    let n = data.n;
    cfg.validate(n)?;
    check_veto_favour(data)?;
    let deltas = cfg.deltas.unwrap_or(data.deltas);
    let param = cfg.parametrization(n);
    let full = subset::full(n);

    let mut lp = LinearProgram::new();
    for v in 0..param.num_vars() {
        let lower = match param {
            Parametrization::Direct { .. } => 0.0,
            Parametrization::Mobius { .. } => f64::NEG_INFINITY,
        };
        lp.add_var(param.var_name(v), lower, f64::INFINITY, 0.0);
    }
    let mut origins = Vec::new();
    let mut push = |lp: &mut LinearProgram<f64>, f: Functional, rel: Relation, rhs: f64, origin: RowOrigin, label: String| {
        let (terms, constant) = param.linearize(&f);
        if terms.is_empty() {
            // Constant row: only emit if it is violated, so infeasibility shows up.
            let ok = match rel {
                Relation::Le => constant <= rhs + 1e-12,
                Relation::Ge => constant >= rhs - 1e-12,
                Relation::Eq => (constant - rhs).abs() <= 1e-12,
            };
            if ok {
                return;
            }
        }
        lp.add_constraint(terms, rel, rhs - constant, label);
        origins.push(origin);
    };

    // Technical rows.
    for a in 1..=full {
        for i in subset::members(a) {
            let f = vec![(a, 1.0), (a & !(1 << i), -1.0)];
            push(
                &mut lp,
                f,
                Relation::Ge,
                0.0,
                RowOrigin::Monotonicity { set: a, removed: i },
                format!("mono{}-{i}", subset::render(a)),
            );
        }
    }
    if matches!(param, Parametrization::Mobius { .. }) {
        push(&mut lp, vec![(full, 1.0)], Relation::Eq, 1.0, RowOrigin::Normalization, "norm".into());
    }
    for &v in &data.veto {
        for a in (1..=full).filter(|a| !subset::contains(*a, v)) {
            push(
                &mut lp,
                vec![(a, 1.0)],
                Relation::Eq,
                0.0,
                RowOrigin::Veto { criterion: v, set: a },
                format!("veto{v}{}", subset::render(a)),
            );
        }
    }
    for &fv in &data.favour {
        for a in (1..=full).filter(|a| subset::contains(*a, fv)) {
            push(
                &mut lp,
                vec![(a, 1.0)],
                Relation::Eq,
                1.0,
                RowOrigin::Favour { criterion: fv, set: a },
                format!("favour{fv}{}", subset::render(a)),
            );
        }
    }

    // Importance statements.
    for (k, s) in data.shapley_comparisons.iter().enumerate() {
        let f = sum(shapley_functional(n, s.i), scaled(shapley_functional(n, s.j), -1.0));
        let origin = RowOrigin::Shapley(k);
        match s.kind {
            ImportanceKind::MoreImportant => {
                push(&mut lp, f, Relation::Ge, deltas.shapley, origin, format!("sh{k}"))
            }
            ImportanceKind::Equal => {
                push(&mut lp, f.clone(), Relation::Le, deltas.shapley, origin, format!("sh{k}+"));
                push(&mut lp, f, Relation::Ge, -deltas.shapley, origin, format!("sh{k}-"));
            }
        }
    }

    // Interaction statements.
    for (k, s) in data.interaction_statements.iter().enumerate() {
        let base = interaction_functional(n, s.pair.0, s.pair.1);
        let origin = RowOrigin::Interaction(k);
        match (s.kind, s.other) {
            (InteractionKind::Complementary, _) => {
                push(&mut lp, base.clone(), Relation::Ge, 0.0, origin, format!("int{k}-"));
                push(&mut lp, base, Relation::Le, 1.0, origin, format!("int{k}+"));
            }
            (InteractionKind::Redundant, _) => {
                push(&mut lp, base.clone(), Relation::Ge, -1.0, origin, format!("int{k}-"));
                push(&mut lp, base, Relation::Le, 0.0, origin, format!("int{k}+"));
            }
            (kind, Some((a, b))) => {
                let f = sum(base, scaled(interaction_functional(n, a, b), -1.0));
                if kind == InteractionKind::Stronger {
                    push(&mut lp, f, Relation::Ge, deltas.interaction, origin, format!("int{k}"));
                } else {
                    push(&mut lp, f.clone(), Relation::Le, deltas.interaction, origin, format!("int{k}+"));
                    push(&mut lp, f, Relation::Ge, -deltas.interaction, origin, format!("int{k}-"));
                }
            }
            (_, None) => unreachable!("validated dataset"),
        }
    }

    // Learning-set statements.
    for (k, p) in data.preferences.iter().enumerate() {
        let f = difference_functional(&data.alternatives[p.better], &data.alternatives[p.worse]);
        let origin = RowOrigin::Preference(k);
        match p.kind {
            PreferenceKind::Strict => {
                push(&mut lp, f, Relation::Ge, deltas.learning_set, origin, format!("pref{k}"))
            }
            PreferenceKind::Indifferent => {
                push(&mut lp, f.clone(), Relation::Le, deltas.learning_set, origin, format!("pref{k}+"));
                push(&mut lp, f, Relation::Ge, -deltas.learning_set, origin, format!("pref{k}-"));
            }
        }
    }

    Ok(CapacityProgram { lp, param, origins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choquet::choquet;
    use crate::lp::probe_bounds;

    #[test]
    fn single_strict_preference_row() {
        let mut data = PreferenceDataset::new(2);
        let a = data.add_alternative(vec![0.2, 0.8]);
        let b = data.add_alternative(vec![0.8, 0.2]);
        data.prefer(a, b, PreferenceKind::Strict);
        data.deltas.learning_set = 0.01;
        let prog = build_constraints(&data, &IdentificationConfig::default()).unwrap();
        let k = prog.origins.iter().position(|o| *o == RowOrigin::Preference(0)).unwrap();
        let row = &prog.lp.constraints()[k];
        // 0.6 ν({1}) - 0.6 ν({0}) ≥ 0.01; ν({0}) is var 0, ν({1}) is var 1.
        let mut terms = row.terms.clone();
        terms.sort_by_key(|x| x.0);
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].0, 0);
        assert!((terms[0].1 + 0.6).abs() < 1e-12);
        assert_eq!(terms[1].0, 1);
        assert!((terms[1].1 - 0.6).abs() < 1e-12);
        assert_eq!(row.relation, Relation::Ge);
        assert!((row.rhs - 0.01).abs() < 1e-12);
        assert_eq!(prog.origins.iter().filter(|o| o.is_statement()).count(), 1);
    }

    #[test]
    fn empty_dataset_leaves_unit_intervals() {
        let data = PreferenceDataset::new(2);
        let prog = build_constraints(&data, &IdentificationConfig::default()).unwrap();
        assert!(prog.origins.iter().all(|o| matches!(o, RowOrigin::Monotonicity { .. })));
        for v in 0..2 {
            let (lo, hi) = probe_bounds(&prog.lp, v).unwrap();
            assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn veto_pins_sets_avoiding_the_criterion() {
        let mut data = PreferenceDataset::new(3);
        data.veto = vec![0];
        let prog = build_constraints(&data, &IdentificationConfig::default()).unwrap();
        let pinned: Vec<Mask> = prog
            .origins
            .iter()
            .filter_map(|o| match o {
                RowOrigin::Veto { set, .. } => Some(*set),
                _ => None,
            })
            .collect();
        assert_eq!(pinned, vec![0b010, 0b100, 0b110]);
    }

    #[test]
    fn conflicting_veto_and_favour() {
        let mut data = PreferenceDataset::new(3);
        data.veto = vec![0];
        data.favour = vec![1];
        assert!(matches!(
            build_constraints(&data, &IdentificationConfig::default()),
            Err(Error::Domain(_))
        ));
        data.favour = vec![0];
        assert!(build_constraints(&data, &IdentificationConfig::default()).is_ok());
    }

    #[test]
    fn functionals_match_direct_evaluation() {
        let cap = Capacity::<f64>::symmetric(3, |t| t.powf(1.5)).unwrap();
        let p = [0.3, 0.9, 0.1];
        let q = [0.5, 0.2, 0.6];
        let f = difference_functional(&p, &q);
        let direct = choquet(&cap, &p).unwrap() - choquet(&cap, &q).unwrap();
        assert!((evaluate_functional(&f, &cap) - direct).abs() < 1e-12);
        let phi = crate::indices::shapley(&cap).unwrap();
        assert!((evaluate_functional(&shapley_functional(3, 1), &cap) - phi[1]).abs() < 1e-12);
        let i01 = crate::indices::interaction_index(&cap, 0b011).unwrap();
        assert!((evaluate_functional(&interaction_functional(3, 0, 1), &cap) - i01).abs() < 1e-12);
    }

    #[test]
    fn mobius_linearization_agrees_with_direct() {
        let cap = Capacity::<f64>::symmetric(3, |t| t * t).unwrap();
        let m = cap.mobius().unwrap();
        let param = Parametrization::Mobius {
            n: 3,
            support: (1..8).collect(),
        };
        let x: Vec<f64> = (1..8).map(|b| m.get(b)).collect();
        let f = difference_functional(&[0.3, 0.9, 0.1], &[0.5, 0.2, 0.6]);
        let (terms, constant) = param.linearize(&f);
        let via_lp: f64 = terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>() + constant;
        assert!((via_lp - evaluate_functional(&f, &cap)).abs() < 1e-12);
        let decoded = param.decode(&x);
        for (a, b) in decoded.iter().zip(cap.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn support_respects_order_and_blocks() {
        let s = Parametrization::mobius_support(4, 2, Some(&[vec![0, 1], vec![2, 3]]));
        assert_eq!(s, vec![0b0001, 0b0010, 0b0011, 0b0100, 0b1000, 0b1100]);
    }
}
