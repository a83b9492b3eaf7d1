//! Capacity identification by LP feasibility, with an L1-slack fallback.

use crate::capacity::Capacity;
use crate::choquet::choquet;
use crate::indices::{index_report, interaction_index, shapley, IndexReport};
use crate::lp::{solve_lazy, LazyRow, LinearProgram, LpStatus, Relation};
use crate::subset;
use crate::{Error, Result};

use super::constraints::{build_constraints, CapacityProgram, Functional, IdentificationConfig, Objective, RowOrigin};
use super::dataset::{ImportanceKind, InteractionKind, PreferenceDataset, PreferenceKind};

/// Tolerance used when checking statements against a capacity.
pub const FIT_TOL: f64 = 1e-7;
/// Largest LP round-off that [`repair`] silently absorbs.
const REPAIR_TOL: f64 = 1e-6;
/// Total slack at or below this counts as an exact fit.
const EXACT_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnStatus {
    FeasibleExact,
    InfeasibleMinSlack,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatementSlack {
    pub origin: RowOrigin,
    pub slack: f64,
}

#[derive(Clone, Debug)]
pub struct LearnOutcome {
    pub status: LearnStatus,
    pub capacity: Capacity<f64>,
    pub total_slack: f64,
    /// Per statement row with positive slack (empty when exact).
    pub slacks: Vec<StatementSlack>,
    pub index_report: IndexReport<f64>,
    /// Smallest statement margin, for the max-min objective.
    pub min_margin: Option<f64>,
}

/// Clamps LP round-off so the decoded values form a capacity.
pub fn repair(n: usize, mut values: Vec<f64>) -> Result<Capacity<f64>> {
    let full = subset::full(n);
    let mut worst: f64 = (values[0]).abs().max((values[full] - 1.0).abs());
    values[0] = 0.0;
    values[full] = 1.0;
    for a in 1..full {
        let floor = subset::members(a)
            .map(|i| values[a & !(1 << i)])
            .fold(0.0, f64::max);
        let v = values[a];
        let fixed = v.max(floor).min(1.0);
        worst = worst.max((fixed - v).abs());
        values[a] = fixed;
    }
    if worst > REPAIR_TOL {
        return Err(Error::Consistency(format!(
            "LP point is {worst} away from a capacity"
        )));
    }
    Capacity::new(n, values)
}

fn finish(
    prog: &CapacityProgram,
    x: &[f64],
    status: LearnStatus,
    total_slack: f64,
    slacks: Vec<StatementSlack>,
    min_margin: Option<f64>,
) -> Result<LearnOutcome> {
    let n = prog.param.n();
    let capacity = repair(n, prog.param.decode(&x[..prog.param.num_vars()]))?;
    let index_report = index_report(&capacity)?;
    Ok(LearnOutcome {
        status,
        capacity,
        total_slack,
        slacks,
        index_report,
        min_margin,
    })
}

/// Technical rows stay in the base program; statement rows become lazy,
/// each shifted by `margin` (if any) and softened when `slack` is set.
fn split(prog: &CapacityProgram, margin: Option<usize>, slack: bool) -> (LinearProgram<f64>, Vec<LazyRow<f64>>, Vec<RowOrigin>) {
    let src = &prog.lp;
    let mut base = LinearProgram::new();
    for v in 0..src.num_vars() {
        let (l, u) = src.bounds(v);
        base.add_var(src.names()[v].clone(), l, u, src.objective()[v]);
    }
    if let Some(t) = margin {
        debug_assert_eq!(t, src.num_vars());
        // Margins below -MARGIN_FLOOR never occur for a capacity; the floor
        // only keeps the working relaxations bounded.
        base.add_var("margin", -MARGIN_FLOOR, 1.0, -1.0);
    }
    let mut lazy = Vec::new();
    let mut origins = Vec::new();
    for (row, origin) in src.constraints().iter().zip(&prog.origins) {
        if !origin.is_statement() {
            base.add_constraint(row.terms.clone(), row.relation, row.rhs, row.label.clone());
            continue;
        }
        let mut constraint = row.clone();
        if let Some(t) = margin {
            let sign = match row.relation {
                Relation::Ge => -1.0,
                Relation::Le => 1.0,
                Relation::Eq => unreachable!("statement rows are inequalities"),
            };
            constraint.terms.push((t, sign));
        }
        lazy.push(LazyRow {
            constraint,
            slack_cost: slack.then_some(1.0),
        });
        origins.push(*origin);
    }
    (base, lazy, origins)
}

const MARGIN_FLOOR: f64 = 1e3;

fn min_slack(prog: &CapacityProgram) -> Result<LearnOutcome> {
    let (base, lazy, origins) = split(prog, None, true);
    let sol = solve_lazy(&base, &lazy)?;
    if sol.solution.status != LpStatus::Optimal {
        // Only technical, veto and favour rows are hard; those are always
        // jointly satisfiable once veto/favour conflicts are rejected.
        return Err(Error::Infeasible(format!(
            "slack program ended {:?}; hard constraints are contradictory",
            sol.solution.status
        )));
    }
    let mut slacks = Vec::new();
    let mut total = 0.0;
    for (&v, &origin) in sol.slacks.iter().zip(&origins) {
        total += v;
        if v > EXACT_SLACK {
            slacks.push(StatementSlack { origin, slack: v });
        }
    }
    let status = if total <= EXACT_SLACK {
        LearnStatus::FeasibleExact
    } else {
        LearnStatus::InfeasibleMinSlack
    };
    finish(prog, &sol.solution.x, status, total, slacks, None)
}

fn max_min(prog: &CapacityProgram) -> Result<Option<LearnOutcome>> {
    let t = prog.lp.num_vars();
    let (base, lazy, _) = split(prog, Some(t), false);
    let sol = solve_lazy(&base, &lazy)?.solution;
    match sol.status {
        LpStatus::Optimal if sol.x[t] >= -EXACT_SLACK => Ok(Some(finish(
            prog,
            &sol.x,
            LearnStatus::FeasibleExact,
            0.0,
            Vec::new(),
            Some(sol.x[t]),
        )?)),
        LpStatus::Unbounded => Err(Error::Consistency("max-min program unbounded".into())),
        _ => Ok(None),
    }
}

/// Finds a capacity compatible with `data`, or the one with least total slack.
pub fn identify(data: &PreferenceDataset, cfg: &IdentificationConfig) -> Result<LearnOutcome> {
    let prog = build_constraints(data, cfg)?;
    identify_program(&prog, cfg.objective)
}

/// Solves a prepared program; statement rows are generated lazily.
pub fn identify_program(prog: &CapacityProgram, objective: Objective) -> Result<LearnOutcome> {
    match objective {
        Objective::Feasibility => {
            let (base, lazy, _) = split(prog, None, false);
            let sol = solve_lazy(&base, &lazy)?.solution;
            match sol.status {
                LpStatus::Optimal => finish(prog, &sol.x, LearnStatus::FeasibleExact, 0.0, Vec::new(), None),
                LpStatus::Unbounded => Err(Error::Consistency("feasibility program unbounded".into())),
                LpStatus::Infeasible => min_slack(prog),
            }
        }
        Objective::MinTotalSlack => min_slack(prog),
        Objective::MaxMinSlack => match max_min(prog)? {
            Some(out) => Ok(out),
            None => min_slack(prog),
        },
    }
}

/// One end of a probed interval and the capacity that attains it.
#[derive(Clone, Debug)]
pub struct ProbeEnd {
    pub value: f64,
    pub capacity: Capacity<f64>,
}

/// Smallest and largest value of the linear functional `f` over the
/// capacity polytope, with the statement rows required to hold exactly.
pub fn probe_functional(prog: &CapacityProgram, f: &Functional) -> Result<(ProbeEnd, ProbeEnd)> {
    let (mut base, lazy, _) = split(prog, None, false);
    let (terms, constant) = prog.param.linearize(f);
    let mut ends = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let mut cost = vec![0.0; base.num_vars()];
        for &(v, c) in &terms {
            cost[v] += sign * c;
        }
        base.set_objective(cost)?;
        let sol = solve_lazy(&base, &lazy)?.solution;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Infeasible("probed polytope is empty".into())),
            LpStatus::Unbounded => return Err(Error::Consistency("capacity polytope is unbounded".into())),
        }
        let capacity = repair(prog.param.n(), prog.param.decode(&sol.x[..prog.param.num_vars()]))?;
        ends.push(ProbeEnd {
            value: terms.iter().map(|&(v, c)| c * sol.x[v]).sum::<f64>() + constant,
            capacity,
        });
    }
    let hi = ends.pop().expect("two ends");
    let lo = ends.pop().expect("two ends");
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitViolation {
    pub preference: usize,
    /// `C(better) - C(worse)`.
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct FitReport {
    pub violations: Vec<FitViolation>,
}

impl FitReport {
    pub fn count(&self) -> usize {
        self.violations.len()
    }
}

/// Preference statements whose Choquet comparison misses its margin.
pub fn check_fit(cap: &Capacity<f64>, data: &PreferenceDataset) -> Result<FitReport> {
    let delta = data.deltas.learning_set;
    let scores = data
        .alternatives
        .iter()
        .map(|p| choquet(cap, p))
        .collect::<Result<Vec<f64>>>()?;
    let violations = data
        .preferences
        .iter()
        .enumerate()
        .filter_map(|(k, p)| {
            let difference = scores[p.better] - scores[p.worse];
            let ok = match p.kind {
                PreferenceKind::Strict => difference >= delta - FIT_TOL,
                PreferenceKind::Indifferent => difference.abs() <= delta + FIT_TOL,
            };
            (!ok).then_some(FitViolation {
                preference: k,
                difference,
            })
        })
        .collect();
    Ok(FitReport { violations })
}

/// Importance, interaction, veto and favour statements that `cap` breaks
/// by more than `tol`, described in words.
pub fn check_statements(cap: &Capacity<f64>, data: &PreferenceDataset, tol: f64) -> Result<Vec<String>> {
    let d = data.deltas;
    let mut out = Vec::new();
    let phi = shapley(cap)?;
    for (k, s) in data.shapley_comparisons.iter().enumerate() {
        let diff = phi[s.i] - phi[s.j];
        let ok = match s.kind {
            ImportanceKind::MoreImportant => diff >= d.shapley - tol,
            ImportanceKind::Equal => diff.abs() <= d.shapley + tol,
        };
        if !ok {
            out.push(format!("shapley_comparisons[{k}]: phi difference {diff}"));
        }
    }
    let pair_index = |(i, j): (usize, usize)| interaction_index(cap, (1 << i) | (1 << j));
    for (k, s) in data.interaction_statements.iter().enumerate() {
        let v = pair_index(s.pair)?;
        let ok = match (s.kind, s.other) {
            (InteractionKind::Complementary, _) => v >= -tol && v <= 1.0 + tol,
            (InteractionKind::Redundant, _) => v >= -1.0 - tol && v <= tol,
            (InteractionKind::Stronger, Some(o)) => v - pair_index(o)? >= d.interaction - tol,
            (InteractionKind::Similar, Some(o)) => (v - pair_index(o)?).abs() <= d.interaction + tol,
            (_, None) => return Err(Error::malformed(format!("interaction_statements[{k}]: missing other"))),
        };
        if !ok {
            out.push(format!("interaction_statements[{k}]: index {v}"));
        }
    }
    let full = cap.full_set();
    for &v in &data.veto {
        if let Some(a) = (1..=full).find(|&a| !subset::contains(a, v) && cap.get(a) > tol) {
            out.push(format!("veto {v}: nu{} = {}", subset::render(a), cap.get(a)));
        }
    }
    for &f in &data.favour {
        if let Some(a) = (1..=full).find(|&a| subset::contains(a, f) && cap.get(a) < 1.0 - tol) {
            out.push(format!("favour {f}: nu{} = {}", subset::render(a), cap.get(a)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::dataset::{Deltas, ShapleyComparison};

    fn cyclic() -> PreferenceDataset {
        let mut d = PreferenceDataset::new(2);
        let a = d.add_alternative(vec![0.2, 0.8]);
        let b = d.add_alternative(vec![0.8, 0.2]);
        let c = d.add_alternative(vec![0.5, 0.5]);
        d.prefer(a, b, PreferenceKind::Strict);
        d.prefer(b, c, PreferenceKind::Strict);
        d.prefer(c, a, PreferenceKind::Strict);
        d
    }

    #[test]
    fn empty_dataset_is_exact() {
        let out = identify(&PreferenceDataset::new(3), &IdentificationConfig::default()).unwrap();
        assert_eq!(out.status, LearnStatus::FeasibleExact);
        assert!(out.capacity.is_valid());
    }

    #[test]
    fn cycle_falls_back_to_min_slack() {
        let data = cyclic();
        let out = identify(&data, &IdentificationConfig::default()).unwrap();
        assert_eq!(out.status, LearnStatus::InfeasibleMinSlack);
        // Summing the three rows gives 0 >= 3δ, so at least 3δ of slack.
        assert!(out.total_slack >= 3.0 * data.deltas.learning_set - 1e-9);
        let fit = check_fit(&out.capacity, &data).unwrap();
        assert!(fit.count() >= 1);
        assert!(fit.count() <= out.slacks.len());
    }

    #[test]
    fn min_capacity_misses_max_like_data() {
        let mut d = PreferenceDataset::new(2);
        let a = d.add_alternative(vec![1.0, 0.0]);
        let b = d.add_alternative(vec![0.0, 0.0]);
        d.prefer(a, b, PreferenceKind::Strict);
        let fit = check_fit(&Capacity::min_capacity(2).unwrap(), &d).unwrap();
        assert_eq!(fit.count(), 1);
        assert_eq!(fit.violations[0].difference, 0.0);
    }

    #[test]
    fn importance_statement_is_honoured() {
        let mut d = PreferenceDataset::new(3);
        d.shapley_comparisons.push(ShapleyComparison { i: 2, j: 0, kind: ImportanceKind::MoreImportant });
        d.deltas = Deltas { shapley: 0.2, ..Deltas::default() };
        let out = identify(&d, &IdentificationConfig::default()).unwrap();
        assert_eq!(out.status, LearnStatus::FeasibleExact);
        assert!(check_statements(&out.capacity, &d, 1e-6).unwrap().is_empty());
        let phi = &out.index_report.shapley;
        assert!(phi[2] - phi[0] >= 0.2 - 1e-9);
    }

    #[test]
    fn max_min_objective_gives_positive_margin() {
        let mut d = PreferenceDataset::new(2);
        let a = d.add_alternative(vec![0.2, 0.8]);
        let b = d.add_alternative(vec![0.8, 0.2]);
        d.prefer(a, b, PreferenceKind::Strict);
        let cfg = IdentificationConfig { objective: Objective::MaxMinSlack, ..Default::default() };
        let out = identify(&d, &cfg).unwrap();
        assert_eq!(out.status, LearnStatus::FeasibleExact);
        // Best margin: ν({1}) = 1, ν({0}) = 0 gives 0.6 - 0.001.
        assert!((out.min_margin.unwrap() - (0.6 - 0.001)).abs() < 1e-9);
    }

    #[test]
    fn max_min_falls_back_on_cycles() {
        let cfg = IdentificationConfig { objective: Objective::MaxMinSlack, ..Default::default() };
        let out = identify(&cyclic(), &cfg).unwrap();
        assert_eq!(out.status, LearnStatus::InfeasibleMinSlack);
    }

    #[test]
    fn repair_rejects_far_points() {
        assert!(repair(2, vec![0.0, 0.5, 0.4, 1.0]).is_ok());
        assert!(repair(2, vec![0.0, 1.5, 0.4, 1.0]).is_err());
        let fixed = repair(2, vec![1e-12, -1e-13, 0.4, 1.0 - 1e-12]).unwrap();
        assert_eq!(fixed.values(), &[0.0, 0.0, 0.4, 1.0]);
    }
}
