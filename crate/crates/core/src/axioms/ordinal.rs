//! MAX, MIN and OS_{n-1} conditions in their pairwise "OR" form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ensure_cost, scan, Axiom, FiniteRelation, ViolationWitness};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrdinalKind {
    Max,
    Min,
    /// Second largest value, OS_{n-1}.
    OrderStatistic,
}

impl fmt::Display for OrdinalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrdinalKind::Max => "max",
            OrdinalKind::Min => "min",
            OrdinalKind::OrderStatistic => "os",
        })
    }
}

/// Whether the condition fails at `(x, y)` for `criteria`.
///
/// - MAX: `x_i y_{-i} ⪰ x` or `y_i x_{-i} ⪰ x`;
/// - MIN: `x ⪰ x_i y_{-i}` or `x ⪰ y_i x_{-i}`;
/// - OS_{n-1}: `y_i x_{-i} ⪰ x` or `y_j x_{-j} ⪰ x` or `x_{ij} y_{-ij} ⪰ x`.
pub(super) fn fails(rel: &FiniteRelation, kind: OrdinalKind, criteria: &[usize], points: &[usize]) -> bool {
    let [x, y] = points else { return false };
    let (x, y) = (*x, *y);
    let swap = |from: usize, into: usize, i: usize| rel.with_level(into, i, rel.level_of(from, i));
    match (kind, criteria) {
        (OrdinalKind::Max, &[i]) => !(rel.ge(swap(x, y, i), x) || rel.ge(swap(y, x, i), x)),
        (OrdinalKind::Min, &[i]) => !(rel.ge(x, swap(x, y, i)) || rel.ge(x, swap(y, x, i))),
        (OrdinalKind::OrderStatistic, &[i, j]) if i != j => {
            let xij = swap(x, swap(x, y, i), j);
            !(rel.ge(swap(y, x, i), x) || rel.ge(swap(y, x, j), x) || rel.ge(xij, x))
        }
        _ => false,
    }
}

/// All `(x, y, i)` (or `(x, y, i < j)`) on which the condition fails.
pub fn check_ordinal_axiom(rel: &FiniteRelation, kind: OrdinalKind) -> Result<Vec<ViolationWitness>> {
    let n = rel.n();
    let size = rel.len();
    let criteria: Vec<Vec<usize>> = match kind {
        OrdinalKind::Max | OrdinalKind::Min => (0..n).map(|i| vec![i]).collect(),
        OrdinalKind::OrderStatistic => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| vec![i, j]))
            .collect(),
    };
    ensure_cost(&kind.to_string(), (size as f64).powi(2) * criteria.len() as f64)?;
    Ok(scan(size, |x, out| {
        for y in 0..size {
            for c in &criteria {
                let points = [x, y];
                if fails(rel, kind, c, &points) {
                    out.push(ViolationWitness {
                        axiom: Axiom::Ordinal(kind),
                        criteria: c.clone(),
                        points: points.to_vec(),
                    });
                }
            }
        }
    }))
}
