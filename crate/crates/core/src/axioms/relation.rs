//! Weak orders on finite grids, stored as rank functions.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::choquet::choquet;
use crate::joint::ValueFunctionSet;
use crate::{Error, Result};

/// Largest grid (number of points) a relation may live on.
pub const MAX_GRID_POINTS: usize = 1_000_000;
/// Scores closer than this are indifferent in [`FiniteRelation::from_scores`].
pub const SCORE_TOL: f64 = 1e-9;

/// One entry of a comparison matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = ">")]
    Better,
    #[serde(rename = "~")]
    Indifferent,
    #[serde(rename = "<")]
    Worse,
    #[serde(rename = "?")]
    Incomparable,
}

/// A weak order on the product of per-criterion level lists.
///
/// Grid points are addressed by level indices; the point index is the
/// mixed-radix number with the last criterion varying fastest. `grid[i][l]`
/// is the real value of level `l` of criterion `i`, used by conditions that
/// compare criteria positions.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteRelation {
    grid: Vec<Vec<f64>>,
    strides: Vec<usize>,
    ranks: Vec<u32>,
}

fn strides(grid: &[Vec<f64>]) -> Result<Vec<usize>> {
    if grid.is_empty() || grid.iter().any(|g| g.is_empty()) {
        return Err(Error::malformed("grid needs at least one level per criterion"));
    }
    let mut strides = vec![1; grid.len()];
    let mut size: usize = 1;
    for i in (0..grid.len()).rev() {
        strides[i] = size;
        size = size
            .checked_mul(grid[i].len())
            .filter(|&s| s <= MAX_GRID_POINTS)
            .ok_or_else(|| Error::Resource(format!("grid exceeds {MAX_GRID_POINTS} points")))?;
    }
    Ok(strides)
}

impl FiniteRelation {
    /// Uses `ranks[k]` (higher is better) for the `k`-th grid point.
    pub fn from_ranks(grid: Vec<Vec<f64>>, ranks: Vec<u32>) -> Result<Self> {
        let strides = strides(&grid)?;
        let size = strides[0] * grid[0].len();
        if ranks.len() != size {
            return Err(Error::malformed(format!("{} ranks for {size} grid points", ranks.len())));
        }
        Ok(FiniteRelation { grid, strides, ranks })
    }

    /// Ranks points by score; scores within [`SCORE_TOL`] of their sorted
    /// neighbour are tied.
    pub fn from_scores(grid: Vec<Vec<f64>>, scores: &[f64]) -> Result<Self> {
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::malformed("scores must be finite"));
        }
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
        let mut ranks = vec![0u32; scores.len()];
        let mut rank = 0u32;
        for w in 1..order.len() {
            if scores[order[w]] - scores[order[w - 1]] > SCORE_TOL {
                rank += 1;
            }
            ranks[order[w]] = rank;
        }
        Self::from_ranks(grid, ranks)
    }

    /// Relation induced by `f` evaluated on the level values.
    pub fn from_fn(grid: Vec<Vec<f64>>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let size = strides(&grid)?[0] * grid[0].len();
        let mut point = vec![0.0; grid.len()];
        let scores: Vec<f64> = (0..size)
            .map(|k| {
                let mut rest = k;
                for i in (0..grid.len()).rev() {
                    point[i] = grid[i][rest % grid[i].len()];
                    rest /= grid[i].len();
                }
                f(&point)
            })
            .collect();
        Self::from_scores(grid, &scores)
    }

    /// Relation induced by a Choquet model on the value-function levels.
    pub fn from_model(cap: &Capacity<f64>, values: &ValueFunctionSet) -> Result<Self> {
        if cap.n() != values.n() {
            return Err(Error::domain(format!(
                "capacity has {} criteria, value functions {}",
                cap.n(),
                values.n()
            )));
        }
        let grid = values.criteria().iter().map(|c| c.values.clone()).collect();
        Self::from_fn(grid, |p| choquet(cap, p).expect("matching sizes"))
    }

    /// Checks that `matrix[a][b]` (a compared with b) is a complete,
    /// transitive relation and converts it to ranks.
    pub fn from_matrix(grid: Vec<Vec<f64>>, matrix: &[Vec<Comparison>]) -> Result<Self> {
        let size = strides(&grid)?[0] * grid[0].len();
        if matrix.len() != size || matrix.iter().any(|r| r.len() != size) {
            return Err(Error::malformed(format!("comparison matrix must be {size} x {size}")));
        }
        let ge = |a: usize, b: usize| matches!(matrix[a][b], Comparison::Better | Comparison::Indifferent);
        for a in 0..size {
            for b in 0..size {
                let consistent = match (matrix[a][b], matrix[b][a]) {
                    (Comparison::Incomparable, _) | (_, Comparison::Incomparable) => {
                        return Err(Error::domain(format!("points {a} and {b} are incomparable: not a weak order")))
                    }
                    (Comparison::Better, Comparison::Worse)
                    | (Comparison::Worse, Comparison::Better)
                    | (Comparison::Indifferent, Comparison::Indifferent) => true,
                    _ => false,
                };
                if !consistent || (a == b && matrix[a][a] != Comparison::Indifferent) {
                    return Err(Error::domain(format!("entries ({a},{b}) and ({b},{a}) disagree")));
                }
            }
        }
        let below: Vec<u32> = (0..size).map(|a| (0..size).filter(|&b| ge(a, b)).count() as u32).collect();
        for a in 0..size {
            for b in 0..size {
                if ge(a, b) != (below[a] >= below[b]) {
                    return Err(Error::domain(format!("relation is not transitive around points {a} and {b}")));
                }
            }
        }
        Self::from_ranks(grid, below)
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn levels(&self) -> Vec<usize> {
        self.grid.iter().map(Vec::len).collect()
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn index(&self, point: &[usize]) -> usize {
        point.iter().zip(&self.strides).map(|(l, s)| l * s).sum()
    }

    pub fn point(&self, index: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.grid)
            .map(|(s, g)| (index / s) % g.len())
            .collect()
    }

    /// Level `level` of criterion `i` substituted into point `index`.
    pub fn with_level(&self, index: usize, i: usize, level: usize) -> usize {
        let s = self.strides[i];
        let current = (index / s) % self.grid[i].len();
        index - current * s + level * s
    }

    pub fn level_of(&self, index: usize, i: usize) -> usize {
        (index / self.strides[i]) % self.grid[i].len()
    }

    pub fn rank(&self, index: usize) -> u32 {
        self.ranks[index]
    }

    pub fn ge(&self, a: usize, b: usize) -> bool {
        self.ranks[a] >= self.ranks[b]
    }

    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        self.ranks[a].cmp(&self.ranks[b])
    }

    /// Value of criterion `i` at grid point `index`.
    pub fn value(&self, index: usize, i: usize) -> f64 {
        self.grid[i][self.level_of(index, i)]
    }

    /// Indices of all points that agree with `index` outside `free`,
    /// enumerating the criteria in `free` (bitmask) over all their levels.
    pub(crate) fn orbit(&self, index: usize, free: usize) -> Vec<usize> {
        let mut out = vec![index];
        for i in 0..self.n() {
            if free >> i & 1 == 1 {
                out = out
                    .iter()
                    .flat_map(|&p| (0..self.grid[i].len()).map(move |l| (p, l)))
                    .map(|(p, l)| self.with_level(p, i, l))
                    .collect();
            }
        }
        out
    }
}
