use super::{LinearProgram, LpSolution, LpStatus, Relation};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Pivot cap across both phases.
pub const MAX_PIVOTS: usize = 1_000_000;

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone, Copy, Debug)]
enum VarMap<T> {
    /// `x = offset + y`
    Shift { col: usize, offset: T },
    /// `x = offset - y`
    Mirror { col: usize, offset: T },
    /// `x = y⁺ - y⁻`
    Split { pos: usize, neg: usize },
}

pub(super) struct Solver<'a, T> {
    lp: &'a LinearProgram<T>,
    maps: Vec<VarMap<T>>,
    /// `rows × (cols + 1)`; the last entry of each row is the right-hand side.
    tab: Vec<Vec<T>>,
    /// Reduced costs; last entry is minus the objective value.
    obj: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
    artificial_from: usize,
    pivots: usize,
}

impl<'a, T: Scalar> Solver<'a, T> {
    pub(super) fn new(lp: &'a LinearProgram<T>) -> Self {
        let mut cols = 0;
        let mut maps = Vec::with_capacity(lp.num_vars());
        // (terms over structural columns, relation, rhs)
        let mut rows: Vec<(Vec<(usize, T)>, Relation, T)> = Vec::new();
        for j in 0..lp.num_vars() {
            let (l, u) = lp.bounds(j);
            let map = if l.is_finite() {
                let col = cols;
                cols += 1;
                if u.is_finite() {
                    rows.push((vec![(col, T::one())], Relation::Le, u - l));
                }
                VarMap::Shift { col, offset: l }
            } else if u.is_finite() {
                let col = cols;
                cols += 1;
                VarMap::Mirror { col, offset: u }
            } else {
                cols += 2;
                VarMap::Split {
                    pos: cols - 2,
                    neg: cols - 1,
                }
            };
            maps.push(map);
        }
        let bound_rows = rows;
        let mut rows: Vec<(Vec<(usize, T)>, Relation, T)> = Vec::new();
        for c in lp.constraints() {
            let mut terms = Vec::with_capacity(c.terms.len() + 1);
            let mut rhs = c.rhs;
            for &(j, a) in &c.terms {
                match maps[j] {
                    VarMap::Shift { col, offset } => {
                        terms.push((col, a));
                        rhs -= a * offset;
                    }
                    VarMap::Mirror { col, offset } => {
                        terms.push((col, -a));
                        rhs -= a * offset;
                    }
                    VarMap::Split { pos, neg } => {
                        terms.push((pos, a));
                        terms.push((neg, -a));
                    }
                }
            }
            rows.push((terms, c.relation, rhs));
        }
        rows.extend(bound_rows);

        // Normalize to rhs >= 0 and count slack / artificial columns.
        for row in rows.iter_mut() {
            if row.2 < T::zero() {
                row.2 = -row.2;
                for t in row.0.iter_mut() {
                    t.1 = -t.1;
                }
                row.1 = match row.1 {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let structural = cols;
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let artificial_from = structural + slacks;
        let total = artificial_from + artificials;

        let m = rows.len();
        let mut tab = vec![vec![T::zero(); total + 1]; m];
        let mut basis = vec![0; m];
        let mut next_slack = structural;
        let mut next_art = artificial_from;
        for (i, (terms, rel, rhs)) in rows.into_iter().enumerate() {
            for (col, a) in terms {
                tab[i][col] += a;
            }
            tab[i][total] = rhs;
            match rel {
                Relation::Le => {
                    tab[i][next_slack] = T::one();
                    basis[i] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    tab[i][next_slack] = -T::one();
                    next_slack += 1;
                    tab[i][next_art] = T::one();
                    basis[i] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    tab[i][next_art] = T::one();
                    basis[i] = next_art;
                    next_art += 1;
                }
            }
        }

        Solver {
            lp,
            maps,
            tab,
            obj: vec![T::zero(); total + 1],
            basis,
            cols: total,
            artificial_from,
            pivots: 0,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.cols + 1;
        let p = self.tab[r][c];
        for k in 0..width {
            self.tab[r][k] /= p;
        }
        self.tab[r][c] = T::one();
        let (before, rest) = self.tab.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().expect("pivot row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let f = row[c];
            if f != T::zero() {
                for k in 0..width {
                    row[k] -= f * prow[k];
                }
                row[c] = T::zero();

            }
        }
        let f = self.obj[c];
        if f != T::zero() {
            for k in 0..width {
                self.obj[k] -= f * prow[k];
            }
            self.obj[c] = T::zero();
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Reduced costs for cost vector `cost` (length `cols`) under the current basis.
    fn price(&mut self, cost: &[T]) {
        let width = self.cols + 1;
        self.obj = cost.to_vec();
        self.obj.push(T::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != T::zero() {
                for k in 0..width {
                    self.obj[k] -= cb * self.tab[i][k];
                }
            }
        }
    }

    /// Runs Bland-rule iterations over columns `< limit`. Returns false on unboundedness.
    fn iterate(&mut self, limit: usize) -> Result<bool> {
        let rhs = self.cols;
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(Error::Resource(format!(
                    "simplex exceeded {MAX_PIVOTS} pivots"
                )));
            }
            let Some(enter) = (0..limit).find(|&j| self.obj[j] < -T::PIVOT_EPS) else {
                return Ok(true);
            };
            // Harris ratio test: bound the step with a small feasibility
            // allowance, then take the largest pivot among rows within it.
            let mut bound: Option<T> = None;
            for row in &self.tab {
                let a = row[enter];
                if a > T::PIVOT_EPS {
                    let r = (row[rhs].max(T::zero()) + T::EPS) / a;
                    bound = Some(bound.map_or(r, |b: T| b.min(r)));
                }
            }
            let mut leave: Option<(usize, T)> = None;
            if let Some(bound) = bound {
                for (i, row) in self.tab.iter().enumerate() {
                    let a = row[enter];
                    if a > T::PIVOT_EPS && row[rhs].max(T::zero()) / a <= bound {
                        leave = match leave {
                            Some((bi, ba)) if ba > a || (ba == a && self.basis[bi] < self.basis[i]) => Some((bi, ba)),
                            _ => Some((i, a)),
                        };
                    }
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }

    pub(super) fn run(mut self) -> Result<LpSolution<T>> {
        let rhs = self.cols;
        // Phase 1: minimize the sum of artificials.
        if self.artificial_from < self.cols {
            let mut cost = vec![T::zero(); self.cols];
            for c in cost.iter_mut().skip(self.artificial_from) {
                *c = T::one();
            }
            self.price(&cost);
            self.iterate(self.cols)?;
            let infeasibility = -self.obj[rhs];
            if infeasibility > T::FEAS_EPS {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: Vec::new(),
                    objective: T::nan(),
                    pivots: self.pivots,
                });
            }
            self.expel_artificials();
        }

        // Phase 2 on structural and slack columns.
        let mut cost = vec![T::zero(); self.cols];
        for (j, map) in self.maps.iter().enumerate() {
            let c = self.lp.objective()[j];
            match *map {
                VarMap::Shift { col, .. } => cost[col] = c,
                VarMap::Mirror { col, .. } => cost[col] = -c,
                VarMap::Split { pos, neg } => {
                    cost[pos] = c;
                    cost[neg] = -c;
                }
            }
        }
        self.price(&cost);
        let bounded = self.iterate(self.artificial_from)?;
        if !bounded {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: Vec::new(),
                objective: T::neg_infinity(),
                pivots: self.pivots,
            });
        }

        let mut y = vec![T::zero(); self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = self.tab[i][rhs];
        }
        let x: Vec<T> = self
            .maps
            .iter()
            .map(|map| match *map {
                VarMap::Shift { col, offset } => offset + y[col],
                VarMap::Mirror { col, offset } => offset - y[col],
                VarMap::Split { pos, neg } => y[pos] - y[neg],
            })
            .collect();
        let objective = self.lp.evaluate(&x);
        Ok(LpSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            pivots: self.pivots,
        })
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.basis.len() {
            if self.basis[i] >= self.artificial_from {
                // Largest entry for stability; the residual artificial level
                // is within tolerance and is dropped so that a pivot on a
                // negative entry cannot push other basic values below zero.
                let mut col: Option<(usize, T)> = None;
                for j in 0..self.artificial_from {
                    let a = self.tab[i][j].abs();
                    if a > T::PIVOT_EPS && col.is_none_or(|(_, b)| a > b) {
                        col = Some((j, a));
                    }
                }
                match col {
                    Some((j, _)) => {
                        let rhs = self.cols;
                        self.tab[i][rhs] = T::zero();
                        self.pivot(i, j)
                    }
                    None => {
                        self.tab.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}
