//! Dense linear programs and a two-phase primal simplex solver.
//!
//! Programs minimize `cᵀx` subject to rows `aᵀx {≤,=,≥} b` and per-variable
//! bounds. Bland's rule is always used, so identical programs produce
//! bit-identical solutions.

mod lazy;
mod simplex;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::{Error, Result};

pub use lazy::{solve_lazy, LazyRow, LazySolution};
pub use simplex::MAX_PIVOTS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint<T> {
    /// Sparse row: `(variable, coefficient)`.
    pub terms: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
    pub label: String,
}

impl<T: Scalar> Constraint<T> {
    pub fn lhs(&self, x: &[T]) -> T {
        self.terms.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates this row (zero when satisfied).
    pub fn violation(&self, x: &[T]) -> T {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(T::zero()),
            Relation::Ge => (self.rhs - lhs).max(T::zero()),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
    names: Vec<String>,
    constraints: Vec<Constraint<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Primal point; empty unless `Optimal`.
    pub x: Vec<T>,
    pub objective: T,
    pub pivots: usize,
}

impl<T: Scalar> LpSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl<T: Scalar> Default for LinearProgram<T> {
    fn default() -> Self {
        LinearProgram {
            objective: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            names: Vec::new(),
            constraints: Vec::new(),
        }
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// `num_vars` variables with bounds `[0, +∞)` and zero cost.
    pub fn with_vars(num_vars: usize) -> Self {
        let mut lp = Self::new();
        for j in 0..num_vars {
            lp.add_var(format!("x{j}"), T::zero(), T::infinity(), T::zero());
        }
        lp
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: T, upper: T, cost: T) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.names.push(name.into());
        self.objective.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        terms: Vec<(usize, T)>,
        relation: Relation,
        rhs: T,
        label: impl Into<String>,
    ) {
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
            label: label.into(),
        });
    }

    /// Dense row; its length must equal the number of variables.
    pub fn add_dense_row(&mut self, row: &[T], relation: Relation, rhs: T) -> Result<()> {
        if row.len() != self.num_vars() {
            return Err(Error::domain(format!(
                "row has {} coefficients, program has {} variables",
                row.len(),
                self.num_vars()
            )));
        }
        let terms = row
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, &a)| (j, a))
            .collect();
        let label = format!("r{}", self.constraints.len());
        self.add_constraint(terms, relation, rhs, label);
        Ok(())
    }

    pub fn set_objective(&mut self, objective: Vec<T>) -> Result<()> {
        if objective.len() != self.num_vars() {
            return Err(Error::domain(format!(
                "objective has {} coefficients, program has {} variables",
                objective.len(),
                self.num_vars()
            )));
        }
        self.objective = objective;
        Ok(())
    }

    pub fn set_cost(&mut self, var: usize, cost: T) {
        self.objective[var] = cost;
    }

    pub fn set_bounds(&mut self, var: usize, lower: T, upper: T) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn bounds(&self, var: usize) -> (T, T) {
        (self.lower[var], self.upper[var])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn validate(&self) -> Result<()> {
        let nv = self.num_vars();
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if l.is_nan() || u.is_nan() || l > u || l == T::infinity() || u == T::neg_infinity() {
                return Err(Error::domain(format!(
                    "variable {} has bounds [{l}, {u}]",
                    self.names[j]
                )));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("objective coefficients must be finite"));
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() || c.terms.iter().any(|(j, a)| *j >= nv || !a.is_finite()) {
                return Err(Error::domain(format!(
                    "constraint {} references a missing variable or a non-finite coefficient",
                    c.label
                )));
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[T]) -> T {
        let rows = self
            .constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(T::zero(), T::max);
        let bounds = x
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| (l - v).max(v - u).max(T::zero()))
            .fold(T::zero(), T::max);
        rows.max(bounds)
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        self.objective.iter().zip(x).map(|(&c, &v)| c * v).sum()
    }

    pub fn solve(&self) -> Result<LpSolution<T>> {
        solve(self)
    }
}

/// Two-phase primal simplex: Bland entering rule, Harris ratio test.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
    lp.validate()?;
    let sol = simplex::Solver::new(lp).run()?;
    if sol.status == LpStatus::Optimal {
        let worst = lp.max_violation(&sol.x);
        if worst > T::FEAS_EPS {
            return Err(Error::Consistency(format!(
                "simplex point violates a constraint by {worst}"
            )));
        }
    }
    Ok(sol)
}

/// Feasible range of one variable: minimizes and maximizes it over the
/// feasible region. Unbounded directions come back as infinities.
pub fn probe_bounds<T: Scalar>(lp: &LinearProgram<T>, var: usize) -> Result<(T, T)> {
    if var >= lp.num_vars() {
        return Err(Error::domain(format!(
            "variable {var} out of range ({} variables)",
            lp.num_vars()
        )));
    }
    let mut probe = lp.clone();
    let mut cost = vec![T::zero(); lp.num_vars()];
    cost[var] = T::one();
    probe.set_objective(cost.clone())?;
    let lo = solve(&probe)?;
    let lo = match lo.status {
        LpStatus::Infeasible => return Err(Error::Infeasible("probed program is infeasible".into())),
        LpStatus::Unbounded => T::neg_infinity(),
        LpStatus::Optimal => lo.x[var],
    };
    cost[var] = -T::one();
    probe.set_objective(cost)?;
    let hi = solve(&probe)?;
    let hi = match hi.status {
        LpStatus::Infeasible => return Err(Error::Infeasible("probed program is infeasible".into())),
        LpStatus::Unbounded => T::infinity(),
        LpStatus::Optimal => hi.x[var],
    };
    Ok((lo, hi))
}
