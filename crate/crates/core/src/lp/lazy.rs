//! Row generation for programs with many more rows than variables.

use super::{Constraint, LinearProgram, LpSolution, LpStatus, Relation};
use crate::scalar::Scalar;
use crate::Result;

/// A row added to the working program only once a solution violates it.
#[derive(Clone, Debug, PartialEq)]
pub struct LazyRow<T> {
    pub constraint: Constraint<T>,
    /// Cost per unit of a nonnegative slack on this row; `None` makes it hard.
    pub slack_cost: Option<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LazySolution<T> {
    /// Status and point over the base program's variables.
    pub solution: LpSolution<T>,
    /// Slack used by each lazy row (zero for soft rows never activated and
    /// for hard rows).
    pub slacks: Vec<T>,
    pub active: Vec<usize>,
    pub rounds: usize,
}

/// Rows added per round, at most.
const BATCH: usize = 64;

/// Solves `base` plus `rows`, activating violated rows until none remains.
///
/// The working program is a relaxation of the full one, so the first
/// working optimum with no violated lazy row is optimal for the full
/// program. If a working program is unbounded, every row is activated.
pub fn solve_lazy<T: Scalar>(base: &LinearProgram<T>, rows: &[LazyRow<T>]) -> Result<LazySolution<T>> {
    let nv = base.num_vars();
    let mut active = vec![false; rows.len()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut lp = base.clone();
        let mut slack_of = Vec::new();
        for (k, row) in rows.iter().enumerate().filter(|(k, _)| active[*k]) {
            let mut terms = row.constraint.terms.clone();
            if let Some(cost) = row.slack_cost {
                let s = lp.add_var(format!("s_{}", row.constraint.label), T::zero(), T::infinity(), cost);
                let sign = match row.constraint.relation {
                    Relation::Ge => T::one(),
                    Relation::Le => -T::one(),
                    Relation::Eq => unreachable!("soft rows are inequalities"),
                };
                terms.push((s, sign));
                slack_of.push((k, s));
            }
            lp.add_constraint(terms, row.constraint.relation, row.constraint.rhs, row.constraint.label.clone());
        }
        let sol = lp.solve()?;
        match sol.status {
            LpStatus::Infeasible => {
                return Ok(LazySolution {
                    solution: sol,
                    slacks: vec![T::zero(); rows.len()],
                    active: indices(&active),
                    rounds,
                })
            }
            LpStatus::Unbounded => {
                if active.iter().all(|&a| a) {
                    return Ok(LazySolution {
                        solution: sol,
                        slacks: vec![T::zero(); rows.len()],
                        active: indices(&active),
                        rounds,
                    });
                }
                active.iter_mut().for_each(|a| *a = true);
                continue;
            }
            LpStatus::Optimal => {}
        }
        let x = &sol.x[..nv];
        let mut violated: Vec<(T, usize)> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| !active[*k])
            .filter_map(|(k, r)| {
                let v = r.constraint.violation(x);
                (v > T::FEAS_EPS).then_some((v, k))
            })
            .collect();
        if violated.is_empty() {
            let mut slacks = vec![T::zero(); rows.len()];
            for &(k, s) in &slack_of {
                slacks[k] = sol.x[s];
            }
            return Ok(LazySolution {
                solution: LpSolution {
                    status: LpStatus::Optimal,
                    x: x.to_vec(),
                    objective: sol.objective,
                    pivots: sol.pivots,
                },
                slacks,
                active: indices(&active),
                rounds,
            });
        }
        // Most violated first, ties by row index.
        violated.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite").then(a.1.cmp(&b.1)));
        for &(_, k) in violated.iter().take(BATCH) {
            active[k] = true;
        }
    }
}

fn indices(active: &[bool]) -> Vec<usize> {
    active.iter().enumerate().filter(|(_, a)| **a).map(|(k, _)| k).collect()
}
