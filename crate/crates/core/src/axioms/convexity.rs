//! The convexity axiom A10 with its comonotonic-position side conditions.
//!
//! Premises `ap ~ bq`, `ar ~ bs`, `cp ~ dq` (common `z_{-ij}`), `d ⪰_i c`
//! and `r ⪰_j s` imply `cr ⪰ ds`, provided criterion `j` is at or above
//! criterion `i` at the six premise points and at or below it at `cr` and
//! `ds`. Positions use the grid values; ties satisfy both.

use super::{at, ensure_cost, pair_bases, scan, Axiom, FiniteRelation, ViolationWitness};
use crate::capacity::Capacity;
use crate::joint::ValueFunctionSet;
use crate::{Error, Result};

/// Position ties below this count as both orders.
const POSITION_TIE: f64 = 1e-12;

fn j_above(rel: &FiniteRelation, p: usize, i: usize, j: usize) -> bool {
    rel.value(p, j) >= rel.value(p, i) - POSITION_TIE
}

fn points(rel: &FiniteRelation, z: usize, i: usize, j: usize, u: [usize; 4], v: [usize; 4]) -> [usize; 8] {
    let [a, b, c, d] = u;
    let [p, q, r, s] = v;
    let pt = |li, lj| at(rel, z, i, li, j, lj);
    [pt(a, p), pt(b, q), pt(a, r), pt(b, s), pt(c, p), pt(d, q), pt(c, r), pt(d, s)]
}

fn violated(rel: &FiniteRelation, i: usize, j: usize, u: [usize; 4], v: [usize; 4], pts: &[usize; 8]) -> bool {
    let gi = &rel.grid()[i];
    let gj = &rel.grid()[j];
    let same = |a: usize, b: usize| rel.rank(a) == rel.rank(b);
    gi[u[3]] >= gi[u[2]] - POSITION_TIE
        && gj[v[2]] >= gj[v[3]] - POSITION_TIE
        && same(pts[0], pts[1])
        && same(pts[2], pts[3])
        && same(pts[4], pts[5])
        && pts[..6].iter().all(|&p| j_above(rel, p, i, j))
        && pts[6..].iter().all(|&p| j_above(rel, p, j, i))
        && !rel.ge(pts[6], pts[7])
}

pub(super) fn fails(rel: &FiniteRelation, criteria: &[usize], stored: &[usize]) -> bool {
    let (&[i, j], Ok(stored)) = (criteria, <[usize; 8]>::try_from(stored)) else {
        return false;
    };
    if i == j {
        return false;
    }
    let lv = |k: usize, c: usize| rel.level_of(stored[k], c);
    let z = at(rel, stored[0], i, 0, j, 0);
    let u = [lv(0, i), lv(1, i), lv(4, i), lv(5, i)];
    let v = [lv(0, j), lv(1, j), lv(2, j), lv(3, j)];
    let rebuilt = points(rel, z, i, j, u, v);
    rebuilt == stored && violated(rel, i, j, u, v, &rebuilt)
}

fn scan_base(rel: &FiniteRelation, i: usize, j: usize, z: usize, out: &mut Vec<ViolationWitness>) {
    let (li, lj) = (rel.grid()[i].len(), rel.grid()[j].len());
    let pt = |x, y| at(rel, z, i, x, j, y);
    let premise = |x, y, xx, yy| {
        let (a, b) = (pt(x, y), pt(xx, yy));
        rel.rank(a) == rel.rank(b) && j_above(rel, a, i, j) && j_above(rel, b, i, j)
    };
    for a in 0..li {
        for b in 0..li {
            for p in 0..lj {
                for q in 0..lj {
                    if !premise(a, p, b, q) {
                        continue;
                    }
                    for r in 0..lj {
                        for s in 0..lj {
                            if !premise(a, r, b, s) {
                                continue;
                            }
                            for c in 0..li {
                                for d in 0..li {
                                    let (u, v) = ([a, b, c, d], [p, q, r, s]);
                                    let pts = points(rel, z, i, j, u, v);
                                    if violated(rel, i, j, u, v, &pts) {
                                        out.push(ViolationWitness {
                                            axiom: Axiom::Convexity,
                                            criteria: vec![i, j],
                                            points: pts.to_vec(),
                                        });
                                        if out.len() >= super::MAX_WITNESSES {
                                            return;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// A10 scan over all ordered criteria pairs; grid values are taken as the
/// value-function outputs.
pub fn check_convexity_relation(rel: &FiniteRelation) -> Result<Vec<ViolationWitness>> {
    let n = rel.n();
    let mut jobs = Vec::new();
    let mut tuples = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (li, lj) = (rel.grid()[i].len() as f64, rel.grid()[j].len() as f64);
            tuples += rel.len() as f64 * li.powi(3) * lj.powi(3);
            jobs.extend(pair_bases(rel, i, j).into_iter().map(|z| (i, j, z)));
        }
    }
    ensure_cost("a10", tuples)?;
    Ok(scan(jobs.len(), |k, out| {
        let (i, j, z) = jobs[k];
        scan_base(rel, i, j, z, out)
    }))
}

/// A10 scan of the relation induced by a Choquet model on its value grid.
pub fn check_convexity_axiom(cap: &Capacity<f64>, values: &ValueFunctionSet) -> Result<Vec<ViolationWitness>> {
    check_convexity_relation(&FiniteRelation::from_model(cap, values)?)
}

/// Five-level value functions on which the A10 premises for `(i, j)` are
/// attainable exactly; the other criteria sit at their lowest level in
/// the critical tuples.
///
/// With `z_{-ij}` at 0 and `f_j ≥ f_i`, the model is
/// `f_i (ν(ij) − ν(j)) + f_j ν(j)`, so a step `u` on `i` is compensated by
/// a step `ρu` on `j` with `ρ = (ν(ij) − ν(j)) / ν(j)`. Levels are
/// `f_i ∈ {0, .2, .4, .6, .8}` and `f_j ∈ {0, .6 − .2ρ, .6, 1 − .2ρ, 1}`;
/// `ρ` outside `(0, 1]` is replaced by 1.
pub fn a10_probe_values(cap: &Capacity<f64>, i: usize, j: usize) -> Result<ValueFunctionSet> {
    let n = cap.n();
    if i >= n || j >= n || i == j {
        return Err(Error::domain(format!("criteria ({i}, {j}) must be distinct and below {n}")));
    }
    let (ij, vj) = (cap.get((1 << i) | (1 << j)), cap.get(1 << j));
    let rho = if vj > 0.0 { (ij - vj) / vj } else { f64::NAN };
    let rho = if rho > 0.0 && rho <= 1.0 { rho } else { 1.0 };
    let base = vec![0.0, 0.2, 0.4, 0.6, 0.8];
    let top = vec![0.0, 0.6 - 0.2 * rho, 0.6, 1.0 - 0.2 * rho, 1.0];
    ValueFunctionSet::from_values((0..n).map(|k| if k == j { top.clone() } else { base.clone() }).collect())
}
