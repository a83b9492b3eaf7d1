//! Alternating-LP heuristic for a capacity and value functions together.
//!
//! With every alternative's comonotonic order frozen, the Choquet score is
//! linear in the level values for a fixed capacity and linear in the
//! capacity for fixed values. Each iteration solves the value LP, the
//! capacity LP and a joint LP that linearizes both around the current
//! point inside a trust region. Every LP maximizes the smallest statement
//! margin, so it stays small under row generation.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::capacity::Capacity;
use crate::choquet::choquet;
use crate::learn::identify::{repair, FIT_TOL};
use crate::learn::{check_fit, Deltas, Preference, PreferenceKind};
use crate::lp::{solve_lazy, Constraint, LazyRow, LinearProgram, LpStatus, Relation};
use crate::subset::{self, Mask};
use crate::{Error, Result};

use super::synth::{random_value_functions, CategoricalDataset};
use super::values::ValueFunctionSet;

/// Values closer than this are treated as tied when re-sorting.
const TIE: f64 = 1e-9;
/// Restarts are run in groups of this size; the search stops after the
/// first group that contains an exact fit.
const RESTART_GROUP: usize = 4;
/// Keeps the margin variable bounded in the working relaxations.
const MARGIN_FLOOR: f64 = 10.0;
/// Trust-region radius limits for the joint step.
const RADIUS_START: f64 = 0.05;
const RADIUS_MIN: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct JointConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Iterations without improvement before a restart gives up.
    pub patience: usize,
    pub seed: u64,
}

impl Default for JointConfig {
    fn default() -> Self {
        JointConfig {
            restarts: 10,
            max_iterations: 50,
            patience: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct JointLearnReport {
    pub capacity: Capacity<f64>,
    pub value_functions: ValueFunctionSet,
    /// Training violations of the returned model, as counted by `check_fit`.
    pub violations: usize,
    /// Sum of the amounts by which statements are missed.
    pub total_slack: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub best_restart: usize,
    /// Violations after each accepted step of the best restart.
    pub history: Vec<usize>,
}

/// How well a model fits: violations, total shortfall and smallest margin.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Fit {
    violations: usize,
    slack: f64,
    margin: f64,
}

impl Fit {
    /// Step acceptance: never more violations, otherwise a wider margin.
    fn improves_on(&self, other: &Fit) -> bool {
        self.violations < other.violations
            || (self.violations == other.violations && self.margin > other.margin + 1e-12)
    }
}

/// Which blocks an LP step may move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Values,
    Capacity,
    Joint,
}

/// The data with alternatives resolved to level indices.
struct Problem<'a> {
    n: usize,
    levels: Vec<usize>,
    points: Vec<Vec<usize>>,
    prefs: &'a [Preference],
    deltas: Deltas,
    /// First variable index of each criterion (levels above 0 only).
    offset: Vec<usize>,
}

struct State {
    values: Vec<Vec<f64>>,
    capacity: Capacity<f64>,
    /// Level variables in frozen ascending order.
    order: Vec<usize>,
    fit: Fit,
}

impl Problem<'_> {
    fn num_vars(&self) -> usize {
        self.offset[self.n]
    }

    fn var(&self, i: usize, level: usize) -> usize {
        debug_assert!(level >= 1);
        self.offset[i] + level - 1
    }

    fn item(&self, var: usize) -> (usize, usize) {
        let i = (0..self.n).rfind(|&i| self.offset[i] <= var).expect("var in range");
        (i, var - self.offset[i] + 1)
    }

    fn profile(&self, values: &[Vec<f64>], k: usize) -> Vec<f64> {
        self.points[k].iter().enumerate().map(|(i, &l)| values[i][l]).collect()
    }

    fn fit(&self, cap: &Capacity<f64>, values: &[Vec<f64>]) -> Fit {
        let scores: Vec<f64> = (0..self.points.len())
            .map(|k| choquet(cap, &self.profile(values, k)).expect("matching sizes"))
            .collect();
        let delta = self.deltas.learning_set;
        let mut fit = Fit {
            violations: 0,
            slack: 0.0,
            margin: f64::INFINITY,
        };
        for p in self.prefs {
            let d = scores[p.better] - scores[p.worse];
            let margin = match p.kind {
                PreferenceKind::Strict => d - delta,
                PreferenceKind::Indifferent => delta - d.abs(),
            };
            fit.margin = fit.margin.min(margin);
            fit.slack += (-margin).max(0.0);
            fit.violations += usize::from(margin < -FIT_TOL);
        }
        fit
    }

    /// Level variables of alternative `k` in frozen ascending order; the
    /// criteria at level 0 sit below all of them.
    fn permutation(&self, k: usize, rank: &[usize]) -> Vec<usize> {
        let mut vars: Vec<usize> = self.points[k]
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l > 0)
            .map(|(i, &l)| self.var(i, l))
            .collect();
        vars.sort_by_key(|&v| rank[v]);
        vars
    }

    /// Score of alternative `k` under the frozen order, linearized around
    /// the current point in the blocks `step` frees, as `(terms, constant)`.
    /// Capacity variables follow the level variables, one per proper
    /// nonempty subset.
    fn linear_score(&self, st: &State, rank: &[usize], k: usize, step: Step) -> (Vec<(usize, f64)>, f64) {
        let nv = self.num_vars();
        let full = subset::full(self.n);
        let vars = self.permutation(k, rank);
        let cap = &st.capacity;
        let val = |v: usize| {
            let (i, l) = self.item(v);
            st.values[i][l]
        };
        let mut terms = Vec::new();
        let mut constant = 0.0;
        let mut current = 0.0;
        let mut suffix: Mask = vars.iter().map(|&v| 1usize << self.item(v).0).sum();
        let mut prev = 0.0;
        for &v in &vars {
            let next = suffix & !(1 << self.item(v).0);
            let weight = cap.get(suffix) - cap.get(next);
            current += val(v) * weight;
            if step != Step::Capacity {
                terms.push((v, weight));
            }
            if step != Step::Values {
                let gap = val(v) - prev;
                if suffix == full {
                    constant += gap;
                } else {
                    terms.push((nv + suffix - 1, gap));
                }
            }
            prev = val(v);
            suffix = next;
        }
        if step == Step::Joint {
            constant -= current;
        }
        (terms, constant)
    }

    /// One LP step; `None` when the LP cannot improve the smallest margin.
    fn lp_step(&self, st: &State, step: Step, radius: f64) -> Result<Option<(Vec<Vec<f64>>, Capacity<f64>)>> {
        let nv = self.num_vars();
        let full = subset::full(self.n);
        let nc = full - 1;
        let mut rank = vec![0; nv];
        for (r, &v) in st.order.iter().enumerate() {
            rank[v] = r;
        }
        let top = *st.order.last().expect("level variables exist");

        let mut base = LinearProgram::new();
        for v in 0..nv {
            let (i, l) = self.item(v);
            let cur = st.values[i][l];
            let (lo, hi) = match step {
                Step::Capacity => (cur, cur),
                _ if v == top => (1.0, 1.0),
                Step::Values => (0.0, 1.0),
                Step::Joint => ((cur - radius).max(0.0), (cur + radius).min(1.0)),
            };
            base.add_var(format!("v{i}.{l}"), lo, hi, 0.0);
        }
        for set in 1..full {
            let cur = st.capacity.get(set);
            let (lo, hi) = match step {
                Step::Values => (cur, cur),
                Step::Capacity => (0.0, 1.0),
                Step::Joint => ((cur - radius).max(0.0), (cur + radius).min(1.0)),
            };
            base.add_var(format!("nu{}", subset::render(set)), lo, hi, 0.0);
        }
        debug_assert_eq!(base.num_vars(), nv + nc);
        let t = base.add_var("margin", -MARGIN_FLOOR, 1.0, -1.0);

        if step != Step::Capacity {
            for i in 0..self.n {
                for l in 2..self.levels[i] {
                    base.add_constraint(
                        vec![(self.var(i, l), 1.0), (self.var(i, l - 1), -1.0)],
                        Relation::Ge,
                        0.0,
                        format!("mono{i}.{l}"),
                    );
                }
            }
            let mut pairs = BTreeSet::new();
            for k in 0..self.points.len() {
                let vars = self.permutation(k, &rank);
                pairs.extend(vars.windows(2).map(|w| (w[0], w[1])));
            }
            for (a, b) in pairs {
                base.add_constraint(vec![(b, 1.0), (a, -1.0)], Relation::Ge, 0.0, format!("ord{a}<{b}"));
            }
        }
        if step != Step::Values {
            for set in 1..=full {
                for i in subset::members(set) {
                    let below = set & !(1 << i);
                    let mut terms = Vec::new();
                    let mut rhs = 0.0;
                    if set == full {
                        rhs -= 1.0;
                    } else {
                        terms.push((nv + set - 1, 1.0));
                    }
                    if below != 0 {
                        terms.push((nv + below - 1, -1.0));
                    }
                    if !terms.is_empty() {
                        base.add_constraint(terms, Relation::Ge, rhs, format!("cap{}-{i}", subset::render(set)));
                    }
                }
            }
        }

        let delta = self.deltas.learning_set;
        let scores: Vec<(Vec<(usize, f64)>, f64)> =
            (0..self.points.len()).map(|k| self.linear_score(st, &rank, k, step)).collect();
        let mut rows = Vec::new();
        for (k, p) in self.prefs.iter().enumerate() {
            let mut dense = vec![0.0; nv + nc];
            for &(v, c) in &scores[p.better].0 {
                dense[v] += c;
            }
            for &(v, c) in &scores[p.worse].0 {
                dense[v] -= c;
            }
            let constant = scores[p.better].1 - scores[p.worse].1;
            let mut terms: Vec<(usize, f64)> = dense.into_iter().enumerate().filter(|&(_, c)| c != 0.0).collect();
            let mut push = |sign: f64, rhs: f64, label: String| {
                let mut tt: Vec<(usize, f64)> = terms.iter().map(|&(v, c)| (v, sign * c)).collect();
                tt.push((t, -1.0));
                rows.push(LazyRow {
                    constraint: Constraint { terms: tt, relation: Relation::Ge, rhs, label },
                    slack_cost: None,
                });
            };
            match p.kind {
                // D - t >= delta
                PreferenceKind::Strict => push(1.0, delta - constant, format!("pref{k}")),
                // delta - D >= t and delta + D >= t
                PreferenceKind::Indifferent => {
                    push(-1.0, constant - delta, format!("pref{k}+"));
                    push(1.0, -delta - constant, format!("pref{k}-"));
                }
            }
            terms.clear();
        }
        let sol = solve_lazy(&base, &rows)?.solution;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Consistency(format!("{step:?} step ended {:?}", sol.status)));
        }
        if sol.x[t] <= st.fit.margin + 1e-12 && step != Step::Joint {
            return Ok(None);
        }
        let mut values = st.values.clone();
        if step != Step::Capacity {
            for v in 0..nv {
                let (i, l) = self.item(v);
                values[i][l] = sol.x[v].clamp(0.0, 1.0);
            }
            for row in values.iter_mut() {
                for l in 1..row.len() {
                    row[l] = row[l].max(row[l - 1]);
                }
            }
        }
        let capacity = if step == Step::Values {
            st.capacity.clone()
        } else {
            let mut raw = vec![0.0; full + 1];
            raw[full] = 1.0;
            for set in 1..full {
                raw[set] = sol.x[nv + set - 1];
            }
            repair(self.n, raw)?
        };
        Ok(Some((values, capacity)))
    }

    /// Ascending order of the level variables under `values`. Tied
    /// variables swap their previous relative order, so a step that pushed
    /// two levels together can carry them past each other next time;
    /// levels of one criterion always stay in level order.
    fn resort(&self, values: &[Vec<f64>], previous: Option<&[usize]>) -> Vec<usize> {
        let nv = self.num_vars();
        let val = |v: usize| {
            let (i, l) = self.item(v);
            values[i][l]
        };
        let Some(previous) = previous else {
            // Initial ties: criterion index, then level.
            let mut order: Vec<usize> = (0..nv).collect();
            order.sort_by(|&a, &b| {
                let (va, vb) = (val(a), val(b));
                if (va - vb).abs() <= TIE {
                    self.item(a).cmp(&self.item(b))
                } else {
                    va.partial_cmp(&vb).expect("finite")
                }
            });
            return order;
        };
        let mut order = previous.to_vec();
        order.sort_by(|&a, &b| val(a).partial_cmp(&val(b)).expect("finite"));
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && val(order[end]) - val(order[end - 1]) <= TIE {
                end += 1;
            }
            let group = &mut order[start..end];
            group.reverse();
            for i in 0..self.n {
                let slots: Vec<usize> = (0..group.len()).filter(|&s| self.item(group[s]).0 == i).collect();
                let mut own: Vec<usize> = slots.iter().map(|&s| group[s]).collect();
                own.sort_unstable();
                for (s, v) in slots.into_iter().zip(own) {
                    group[s] = v;
                }
            }
            start = end;
        }
        order
    }

    /// Tries `step`; replaces the state and logs the violations if the
    /// candidate improves the fit.
    fn attempt(&self, st: &mut State, step: Step, radius: f64, history: &mut Vec<usize>) -> Result<bool> {
        let Some((values, capacity)) = self.lp_step(st, step, radius)? else {
            return Ok(false);
        };
        let fit = self.fit(&capacity, &values);
        if !fit.improves_on(&st.fit) {
            return Ok(false);
        }
        st.order = self.resort(&values, Some(&st.order));
        st.values = values;
        st.capacity = capacity;
        st.fit = fit;
        history.push(fit.violations);
        Ok(true)
    }
}

struct RestartResult {
    capacity: Capacity<f64>,
    values: Vec<Vec<f64>>,
    fit: Fit,
    iterations: usize,
    history: Vec<usize>,
}

fn initial_values(pb: &Problem, cfg: &JointConfig, restart: usize) -> Result<Vec<Vec<f64>>> {
    if restart == 0 {
        return Ok(pb
            .levels
            .iter()
            .map(|&l| (0..l).map(|k| if l == 1 { 0.0 } else { k as f64 / (l - 1) as f64 }).collect())
            .collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let vf = random_value_functions(&pb.levels, &mut rng)?;
    Ok(vf.criteria().iter().map(|c| c.values.clone()).collect())
}

fn run_restart(pb: &Problem, cfg: &JointConfig, restart: usize) -> Result<RestartResult> {
    let values = initial_values(pb, cfg, restart)?;
    let uniform = Capacity::uniform(pb.n)?;
    let mut st = State {
        fit: pb.fit(&uniform, &values),
        order: pb.resort(&values, None),
        values,
        capacity: uniform,
    };
    let mut history = vec![st.fit.violations];
    if pb.num_vars() == 0 {
        pb.attempt(&mut st, Step::Capacity, 1.0, &mut history)?;
        return Ok(RestartResult { capacity: st.capacity, values: st.values, fit: st.fit, iterations: 0, history });
    }
    pb.attempt(&mut st, Step::Capacity, 1.0, &mut history)?;
    let mut radius = RADIUS_START;
    let mut stall = 0;
    let mut iterations = 0;
    while st.fit.violations > 0 && iterations < cfg.max_iterations {
        iterations += 1;
        let before = st.fit;
        pb.attempt(&mut st, Step::Values, 1.0, &mut history)?;
        pb.attempt(&mut st, Step::Capacity, 1.0, &mut history)?;
        // Joint steps until the trust region collapses or the fit is exact.
        while st.fit.violations > 0 && radius >= RADIUS_MIN {
            if pb.attempt(&mut st, Step::Joint, radius, &mut history)? {
                radius = (radius * 2.0).min(0.5);
            } else {
                radius /= 4.0;
            }
        }
        radius = RADIUS_START;
        if st.fit.improves_on(&before) {
            stall = 0;
        } else {
            stall += 1;
            if stall >= cfg.patience {
                break;
            }
        }
    }
    Ok(RestartResult {
        capacity: st.capacity,
        values: st.values,
        fit: st.fit,
        iterations,
        history,
    })
}

fn better(a: &RestartResult, b: &RestartResult) -> bool {
    a.fit.violations < b.fit.violations || (a.fit.violations == b.fit.violations && a.fit.slack < b.fit.slack - 1e-12)
}

/// Learns a capacity and per-level values from label-valued alternatives.
pub fn learn_joint(data: &CategoricalDataset, cfg: &JointConfig) -> Result<JointLearnReport> {
    let points = data.resolve()?;
    if cfg.restarts == 0 {
        return Err(Error::domain("at least one restart is required"));
    }
    let n = data.n;
    let levels = data.level_counts();
    let mut offset = vec![0];
    for &l in &levels {
        offset.push(offset.last().expect("nonempty") + l - 1);
    }
    let pb = Problem {
        n,
        levels,
        points,
        prefs: &data.preferences,
        deltas: data.deltas,
        offset,
    };

    let mut best: Option<(usize, RestartResult)> = None;
    let mut used = 0;
    while used < cfg.restarts {
        let group: Vec<usize> = (used..cfg.restarts.min(used + RESTART_GROUP)).collect();
        used += group.len();
        let results: Vec<Result<RestartResult>> = group.par_iter().map(|&r| run_restart(&pb, cfg, r)).collect();
        for (r, res) in group.into_iter().zip(results) {
            let res = res?;
            if best.as_ref().is_none_or(|(_, b)| better(&res, b)) {
                best = Some((r, res));
            }
        }
        if best.as_ref().is_some_and(|(_, b)| b.fit.violations == 0) {
            break;
        }
    }
    let (best_restart, res) = best.expect("at least one restart ran");
    let value_functions = data.value_functions(res.values)?;
    let violations = check_fit(&res.capacity, &data.map(&value_functions)?)?.count();
    if violations != res.fit.violations {
        return Err(Error::Consistency(format!(
            "recomputed {violations} violations, search reported {}",
            res.fit.violations
        )));
    }
    Ok(JointLearnReport {
        capacity: res.capacity,
        value_functions,
        violations,
        total_slack: res.fit.slack,
        iterations: res.iterations,
        restarts_used: used,
        best_restart,
        history: res.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::synth::{sample_categorical, synth_model, InteractionSpec, SampleMode};

    #[test]
    fn recovers_a_zero_violation_model() {
        let m = synth_model(3, &[3, 3, 3], 4, &InteractionSpec::Full).unwrap();
        let data = sample_categorical(&m, SampleMode::AllGridPairs);
        let rep = learn_joint(&data, &JointConfig::default()).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(rep.value_functions.is_anchored());
    }

    #[test]
    fn one_informative_criterion() {
        let data = CategoricalDataset {
            n: 2,
            levels: vec![vec!["lo".into(), "mid".into(), "hi".into()], vec!["only".into()]],
            alternatives: vec![
                vec!["lo".into(), "only".into()],
                vec!["mid".into(), "only".into()],
                vec!["hi".into(), "only".into()],
            ],
            preferences: vec![
                Preference { better: 1, worse: 0, kind: PreferenceKind::Strict },
                Preference { better: 2, worse: 1, kind: PreferenceKind::Strict },
            ],
            deltas: Deltas::default(),
        };
        let rep = learn_joint(&data, &JointConfig::default()).unwrap();
        assert_eq!(rep.violations, 0);
    }

    #[test]
    fn intransitive_data_keeps_violations() {
        let data = CategoricalDataset {
            n: 2,
            levels: vec![vec!["a".into(), "b".into()], vec!["a".into(), "b".into()]],
            alternatives: vec![
                vec!["a".into(), "b".into()],
                vec!["b".into(), "a".into()],
                vec!["b".into(), "b".into()],
            ],
            preferences: vec![
                Preference { better: 0, worse: 1, kind: PreferenceKind::Strict },
                Preference { better: 1, worse: 2, kind: PreferenceKind::Strict },
                Preference { better: 2, worse: 0, kind: PreferenceKind::Strict },
            ],
            deltas: Deltas::default(),
        };
        let rep = learn_joint(&data, &JointConfig::default()).unwrap();
        assert!(rep.violations >= 1);
        assert_eq!(rep.restarts_used, 10);
    }

    #[test]
    fn deterministic() {
        let m = synth_model(2, &[3, 4], 9, &InteractionSpec::Full).unwrap();
        let data = sample_categorical(&m, SampleMode::Random { count: 30, seed: 2 });
        let cfg = JointConfig { seed: 5, ..Default::default() };
        let a = learn_joint(&data, &cfg).unwrap();
        let b = learn_joint(&data, &cfg).unwrap();
        assert_eq!(a.capacity, b.capacity);
        assert_eq!(a.value_functions, b.value_functions);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn missing_level_order_is_a_domain_error() {
        let data = CategoricalDataset {
            n: 2,
            levels: vec![vec!["a".into()]],
            alternatives: vec![],
            preferences: vec![],
            deltas: Deltas::default(),
        };
        assert!(matches!(learn_joint(&data, &JointConfig::default()), Err(Error::Domain(_))));
    }
}
