//! Exhaustive checks of ordinal, lattice, separability and convexity
//! conditions on weak orders over finite grids.
//!
//! Every scan returns [`ViolationWitness`]es in lexicographic order of the
//! scanned tuple, at most [`MAX_WITNESSES`] of them; a witness can be
//! re-checked against its relation with [`ViolationWitness::verify`].

mod cancellation;
mod convexity;
mod groups;
mod lattice_condition;
mod ordinal;
mod relation;

use std::fmt;

use rayon::prelude::*;

use crate::subset::Mask;
use crate::{Error, Result};

pub use cancellation::{block_additive_holds, triple_cancellation_holds, triple_cancellation_violations};
pub use convexity::{a10_probe_values, check_convexity_axiom, check_convexity_relation};
pub use groups::{components, interaction_groups_mobius, interaction_groups_scan};
pub use lattice_condition::check_lattice_axiom;
pub use ordinal::{check_ordinal_axiom, OrdinalKind};
pub use relation::{Comparison, FiniteRelation, MAX_GRID_POINTS, SCORE_TOL};

/// Witness lists are truncated to this many entries.
pub const MAX_WITNESSES: usize = 100_000;
/// Scans whose unpruned tuple count exceeds this are refused.
pub const MAX_TUPLES: f64 = 1e10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    Ordinal(OrdinalKind),
    /// Families of the lattice polynomial: `cnf` quantifies the first
    /// implication, `dnf` the second.
    Lattice { cnf: Vec<Mask>, dnf: Vec<Mask> },
    TripleCancellation,
    Convexity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Ordinal(k) => write!(f, "{k}"),
            Axiom::Lattice { .. } => f.write_str("lattice"),
            Axiom::TripleCancellation => f.write_str("tc"),
            Axiom::Convexity => f.write_str("a10"),
        }
    }
}

/// A tuple of grid points on which a condition fails.
///
/// Point layout per axiom:
/// - ordinal: `[x, y]`, criteria `[i]` (or `[i, j]` for OS_{n-1});
/// - lattice: `[w, x]`, no criteria;
/// - triple cancellation: `[ap, bq, bs, ar, dq, cp, ds, cr]` (premises
///   `ap ⪰ bq`, `bs ⪰ ar`, `dq ⪰ cp`; failed conclusion `ds ⪰ cr`);
/// - convexity: `[ap, bq, ar, bs, cp, dq, cr, ds]` (premises `ap ~ bq`,
///   `ar ~ bs`, `cp ~ dq`; failed conclusion `cr ⪰ ds`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationWitness {
    pub axiom: Axiom,
    pub criteria: Vec<usize>,
    /// Point indices into the relation's grid.
    pub points: Vec<usize>,
}

impl ViolationWitness {
    /// Re-evaluates the condition on the witness tuple; true when it fails.
    pub fn verify(&self, rel: &FiniteRelation) -> bool {
        if self.points.iter().any(|&p| p >= rel.len()) || self.criteria.iter().any(|&i| i >= rel.n()) {
            return false;
        }
        match &self.axiom {
            Axiom::Ordinal(kind) => ordinal::fails(rel, *kind, &self.criteria, &self.points),
            Axiom::Lattice { cnf, dnf } => lattice_condition::fails(rel, cnf, dnf, &self.points),
            Axiom::TripleCancellation => cancellation::fails(rel, &self.criteria, &self.points),
            Axiom::Convexity => convexity::fails(rel, &self.criteria, &self.points),
        }
    }

    /// One line: axiom, criteria and points as level tuples.
    pub fn render(&self, rel: &FiniteRelation) -> String {
        let points: Vec<String> = self
            .points
            .iter()
            .map(|&p| {
                let levels: Vec<String> = rel.point(p).iter().map(|l| l.to_string()).collect();
                format!("({})", levels.join(","))
            })
            .collect();
        let criteria: Vec<String> = self.criteria.iter().map(|c| c.to_string()).collect();
        format!("{} [{}] {}", self.axiom, criteria.join(","), points.join(" "))
    }
}

fn ensure_cost(what: &str, tuples: f64) -> Result<()> {
    if tuples > MAX_TUPLES {
        return Err(Error::Resource(format!(
            "{what} scan would visit about {tuples:.3e} tuples (cap {MAX_TUPLES:.0e})"
        )));
    }
    Ok(())
}

/// Runs `body` for each outer index in parallel and concatenates the
/// witnesses in outer order.
fn scan<F>(outer: usize, body: F) -> Vec<ViolationWitness>
where
    F: Fn(usize, &mut Vec<ViolationWitness>) + Sync,
{
    let parts: Vec<Vec<ViolationWitness>> = (0..outer)
        .into_par_iter()
        .map(|o| {
            let mut out = Vec::new();
            body(o, &mut out);
            out.truncate(MAX_WITNESSES);
            out
        })
        .collect();
    let mut all: Vec<ViolationWitness> = parts.into_iter().flatten().collect();
    all.truncate(MAX_WITNESSES);
    all
}

/// Pair `(i, j)` check shared by the two-criterion scans.
fn check_pair(rel: &FiniteRelation, i: usize, j: usize) -> Result<()> {
    if i >= rel.n() || j >= rel.n() {
        return Err(Error::domain(format!("criteria ({i}, {j}) out of range for n = {}", rel.n())));
    }
    if i == j {
        return Err(Error::domain("the two criteria must differ"));
    }
    Ok(())
}

/// Base points (level 0 on `i` and `j`) of all `z_{-ij}`, in index order.
fn pair_bases(rel: &FiniteRelation, i: usize, j: usize) -> Vec<usize> {
    (0..rel.len())
        .filter(|&k| rel.level_of(k, i) == 0 && rel.level_of(k, j) == 0)
        .collect()
}

/// The point `z` with levels `li` on `i` and `lj` on `j`.
fn at(rel: &FiniteRelation, z: usize, i: usize, li: usize, j: usize, lj: usize) -> usize {
    rel.with_level(rel.with_level(z, i, li), j, lj)
}
