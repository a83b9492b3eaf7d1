//! Triple cancellation on a two-factor product: `ap ⪰ bq`, `bs ⪰ ar` and
//! `dq ⪰ cp` imply `ds ⪰ cr`, with `a..d` from the first factor and `p..s`
//! from the second. The pairwise form uses criteria `i` and `j` on a common
//! `z_{-ij}`. Block separability of `X_B × X_{N∖B}` is decided exactly by a
//! small feasibility program.

use rayon::prelude::*;

use super::{at, check_pair, ensure_cost, pair_bases, scan, Axiom, FiniteRelation, ViolationWitness};
use crate::lp::{LinearProgram, Relation};
use crate::subset::{self, Mask};
use crate::{Error, Result};

/// Largest grid accepted by the separability program.
const MAX_CHAIN: usize = 4096;
/// Smallest strict gap that counts as a separable representation.
const MIN_GAP: f64 = 1e-9;

/// Levels `[a, b, c, d]` on `i` and `[p, q, r, s]` on `j`.
type Tuple = ([usize; 4], [usize; 4]);

fn points(rel: &FiniteRelation, z: usize, i: usize, j: usize, (u, v): Tuple) -> [usize; 8] {
    let [a, b, c, d] = u;
    let [p, q, r, s] = v;
    let pt = |li, lj| at(rel, z, i, li, j, lj);
    [pt(a, p), pt(b, q), pt(b, s), pt(a, r), pt(d, q), pt(c, p), pt(d, s), pt(c, r)]
}

fn violated(rel: &FiniteRelation, pts: &[usize; 8]) -> bool {
    rel.ge(pts[0], pts[1]) && rel.ge(pts[2], pts[3]) && rel.ge(pts[4], pts[5]) && !rel.ge(pts[6], pts[7])
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
    let tuple = ([lv(0, i), lv(1, i), lv(7, i), lv(4, i)], [lv(0, j), lv(1, j), lv(3, j), lv(2, j)]);
    let rebuilt = points(rel, z, i, j, tuple);
    rebuilt == stored && violated(rel, &rebuilt)
}

/// Scans the two-factor product `left × right` (point index
/// `base + left[x] + right[y]`) for first-factor levels `a` in `outer`,
/// stopping after `limit` witnesses.
#[allow(clippy::too_many_arguments)]
fn scan_product(
    rel: &FiniteRelation,
    base: usize,
    left: &[usize],
    right: &[usize],
    outer: std::ops::Range<usize>,
    criteria: &[usize],
    limit: usize,
    out: &mut Vec<ViolationWitness>,
) {
    let pt = |x: usize, y: usize| base + left[x] + right[y];
    let (nl, nr) = (left.len(), right.len());
    for a in outer {
        for b in 0..nl {
            for p in 0..nr {
                for q in 0..nr {
                    if !rel.ge(pt(a, p), pt(b, q)) {
                        continue;
                    }
                    for r in 0..nr {
                        for s in 0..nr {
                            if !rel.ge(pt(b, s), pt(a, r)) {
                                continue;
                            }
                            for c in 0..nl {
                                for d in 0..nl {
                                    if rel.ge(pt(d, q), pt(c, p)) && !rel.ge(pt(d, s), pt(c, r)) {
                                        out.push(ViolationWitness {
                                            axiom: Axiom::TripleCancellation,
                                            criteria: criteria.to_vec(),
                                            points: vec![
                                                pt(a, p),
                                                pt(b, q),
                                                pt(b, s),
                                                pt(a, r),
                                                pt(d, q),
                                                pt(c, p),
                                                pt(d, s),
                                                pt(c, r),
                                            ],
                                        });
                                        if out.len() >= limit {
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

/// Offsets of the levels of criterion `i` from a point at level 0.
fn offsets(rel: &FiniteRelation, i: usize) -> Vec<usize> {
    (0..rel.grid()[i].len()).map(|l| rel.with_level(0, i, l)).collect()
}

fn cost(rel: &FiniteRelation, i: usize, j: usize) -> Result<()> {
    let (li, lj) = (rel.grid()[i].len() as f64, rel.grid()[j].len() as f64);
    ensure_cost("triple cancellation", rel.len() as f64 * li.powi(3) * lj.powi(3))
}

/// Every failing instance of the pattern for the criteria pair `(i, j)`.
pub fn triple_cancellation_violations(rel: &FiniteRelation, i: usize, j: usize) -> Result<Vec<ViolationWitness>> {
    check_pair(rel, i, j)?;
    cost(rel, i, j)?;
    let bases = pair_bases(rel, i, j);
    let (left, right) = (offsets(rel, i), offsets(rel, j));
    Ok(scan(bases.len(), |k, out| {
        scan_product(rel, bases[k], &left, &right, 0..left.len(), &[i, j], super::MAX_WITNESSES, out)
    }))
}

/// True when no instance fails; stops at the first failure.
pub fn triple_cancellation_holds(rel: &FiniteRelation, i: usize, j: usize) -> Result<bool> {
    check_pair(rel, i, j)?;
    cost(rel, i, j)?;
    let bases = pair_bases(rel, i, j);
    let (left, right) = (offsets(rel, i), offsets(rel, j));
    Ok(!bases.par_iter().any(|&z| {
        let mut out = Vec::new();
        scan_product(rel, z, &left, &right, 0..left.len(), &[i, j], 1, &mut out);
        !out.is_empty()
    }))
}

fn check_block(rel: &FiniteRelation, block: Mask) -> Result<()> {
    let full = subset::full(rel.n());
    if block == 0 || block & !full != 0 || block == full {
        return Err(Error::domain(format!(
            "block {} must be a proper nonempty subset of the criteria",
            subset::render(block)
        )));
    }
    Ok(())
}

/// Whether the relation restricted to `X_B × X_{N∖B}` is representable as
/// `F(x_B) + G(x_{N∖B})`: a feasibility program over the chain of ranks,
/// covering cancellation conditions of every order at once.
pub fn block_additive_holds(rel: &FiniteRelation, block: Mask) -> Result<bool> {
    let full = subset::full(rel.n());
    check_block(rel, block)?;
    let inside = rel.orbit(0, block);
    let outside = rel.orbit(0, full & !block);
    if rel.len() > MAX_CHAIN {
        return Err(Error::Resource(format!(
            "block separability over {} points (cap {MAX_CHAIN})",
            rel.len()
        )));
    }
    let mut cells: Vec<(u32, usize, usize)> = Vec::with_capacity(rel.len());
    for (x, &a) in inside.iter().enumerate() {
        for (y, &b) in outside.iter().enumerate() {
            cells.push((rel.rank(a + b), x, inside.len() + y));
        }
    }
    cells.sort_unstable();
    // Part-worths in [0, 1]; the smallest strict gap `t` is maximized.
    let mut lp = LinearProgram::<f64>::new();
    for k in 0..inside.len() + outside.len() {
        lp.add_var(format!("w{k}"), 0.0, 1.0, 0.0);
    }
    let t = lp.add_var("gap", 0.0, 1.0, -1.0);
    for pair in cells.windows(2) {
        let ((r0, x0, y0), (r1, x1, y1)) = (pair[0], pair[1]);
        let mut terms: Vec<(usize, f64)> = Vec::new();
        for (v, c) in [(x1, 1.0), (y1, 1.0), (x0, -1.0), (y0, -1.0)] {
            match terms.iter_mut().find(|t| t.0 == v) {
                Some(t) => t.1 += c,
                None => terms.push((v, c)),
            }
        }
        terms.retain(|t| t.1 != 0.0);
        let relation = if r1 == r0 {
            Relation::Eq
        } else {
            terms.push((t, -1.0));
            Relation::Ge
        };
        lp.add_constraint(terms, relation, 0.0, "");
    }
    let sol = lp.solve()?;
    if !sol.is_optimal() {
        return Err(Error::Consistency(format!("separability program ended {:?}", sol.status)));
    }
    Ok(sol.x[t] > MIN_GAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;
    use crate::choquet::choquet;

    fn grid(n: usize, levels: &[f64]) -> Vec<Vec<f64>> {
        vec![levels.to_vec(); n]
    }

    #[test]
    fn additive_models_pass() {
        let rel = FiniteRelation::from_fn(grid(3, &[0.0, 0.3, 0.55, 1.0]), |p| 0.2 * p[0] + 0.5 * p[1] + 0.3 * p[2]).unwrap();
        for (i, j) in [(0, 1), (1, 0), (0, 2), (1, 2)] {
            assert!(triple_cancellation_violations(&rel, i, j).unwrap().is_empty());
            assert!(triple_cancellation_holds(&rel, i, j).unwrap());
        }
    }

    #[test]
    fn pair_interaction_is_detected_on_a_rich_grid() {
        // m({0}) = .3, m({1}) = .3, m({2}) = .2, m({0,1}) = .2
        let cap = Capacity::from_values(3, vec![0.0, 0.3, 0.3, 0.8, 0.2, 0.5, 0.5, 1.0]).unwrap();
        let rel = FiniteRelation::from_fn(grid(3, &[0.0, 0.23, 0.61, 1.0]), |p| choquet(&cap, p).unwrap()).unwrap();
        let w = triple_cancellation_violations(&rel, 0, 1).unwrap();
        assert!(!w.is_empty());
        assert!(w.iter().all(|w| w.verify(&rel)));
        assert!(triple_cancellation_holds(&rel, 0, 2).unwrap());
    }

    #[test]
    fn same_criterion_is_a_domain_error() {
        let rel = FiniteRelation::from_fn(grid(2, &[0.0, 1.0]), |p| p[0]).unwrap();
        assert!(matches!(triple_cancellation_violations(&rel, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(triple_cancellation_violations(&rel, 0, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn tampered_witness_does_not_verify() {
        let cap = Capacity::from_values(2, vec![0.0, 0.3, 0.5, 1.0]).unwrap();
        let rel = FiniteRelation::from_fn(grid(2, &[0.0, 0.25, 0.5, 0.75, 1.0]), |p| choquet(&cap, p).unwrap()).unwrap();
        let mut w = triple_cancellation_violations(&rel, 0, 1).unwrap().remove(0);
        assert!(w.verify(&rel));
        w.points.swap(6, 7);
        assert!(!w.verify(&rel));
    }

    #[test]
    fn block_separability() {
        // m({0,1}) ≠ 0 only: {2} separates, {0} does not.
        let cap = Capacity::from_values(3, vec![0.0, 0.3, 0.3, 0.8, 0.2, 0.5, 0.5, 1.0]).unwrap();
        let rel = FiniteRelation::from_fn(grid(3, &[0.0, 0.23, 0.61, 1.0]), |p| choquet(&cap, p).unwrap()).unwrap();
        assert!(block_additive_holds(&rel, 0b100).unwrap());
        assert!(block_additive_holds(&rel, 0b011).unwrap());
        assert!(!block_additive_holds(&rel, 0b001).unwrap());
        assert!(matches!(block_additive_holds(&rel, 0b111), Err(Error::Domain(_))));
        assert!(matches!(block_additive_holds(&rel, 0), Err(Error::Domain(_))));
    }
}
