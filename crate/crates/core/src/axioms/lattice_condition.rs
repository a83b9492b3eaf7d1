//! The lattice-polynomial condition: for every `(w, x)` some `K ∈ 𝒜`,
//! `M ∈ ℬ` with `K ∩ M ≠ ∅` satisfy `w ⪰ x ⇒ w ⪰ a_{-K} x_K` for all `a`
//! and `x ⪰ w ⇒ b_{-M} x_M ⪰ w` for all `b`.

use super::{ensure_cost, scan, Axiom, FiniteRelation, ViolationWitness};
use crate::lattice::is_antichain;
use crate::subset::{self, Mask};
use crate::{Error, Result};

fn check_family(n: usize, family: &[Mask], name: &str) -> Result<()> {
    let full = subset::full(n);
    if family.is_empty() {
        return Err(Error::domain(format!("{name} family is empty")));
    }
    if family.iter().any(|&k| k == 0 || k & !full != 0) {
        return Err(Error::domain(format!("{name} family has an empty set or a criterion outside 0..{n}")));
    }
    if !is_antichain(family) {
        return Err(Error::domain(format!("{name} family is not an antichain")));
    }
    Ok(())
}

/// Highest rank among `a_{-K} x_K`.
fn top(rel: &FiniteRelation, x: usize, keep: Mask) -> u32 {
    let free = subset::full(rel.n()) & !keep;
    rel.orbit(x, free).into_iter().map(|p| rel.rank(p)).max().expect("orbit contains x")
}

/// Lowest rank among `b_{-M} x_M`.
fn bottom(rel: &FiniteRelation, x: usize, keep: Mask) -> u32 {
    let free = subset::full(rel.n()) & !keep;
    rel.orbit(x, free).into_iter().map(|p| rel.rank(p)).min().expect("orbit contains x")
}

fn holds(rw: u32, rx: u32, cnf: &[Mask], dnf: &[Mask], tops: &[u32], bottoms: &[u32]) -> bool {
    cnf.iter().enumerate().any(|(a, &k)| {
        (rw < rx || rw >= tops[a])
            && dnf
                .iter()
                .enumerate()
                .any(|(b, &m)| k & m != 0 && (rx < rw || bottoms[b] >= rw))
    })
}

pub(super) fn fails(rel: &FiniteRelation, cnf: &[Mask], dnf: &[Mask], points: &[usize]) -> bool {
    let [w, x] = points else { return false };
    let tops: Vec<u32> = cnf.iter().map(|&k| top(rel, *x, k)).collect();
    let bottoms: Vec<u32> = dnf.iter().map(|&m| bottom(rel, *x, m)).collect();
    !holds(rel.rank(*w), rel.rank(*x), cnf, dnf, &tops, &bottoms)
}

/// All `(w, x)` for which no admissible `(K, M)` exists.
pub fn check_lattice_axiom(rel: &FiniteRelation, cnf: &[Mask], dnf: &[Mask]) -> Result<Vec<ViolationWitness>> {
    check_family(rel.n(), cnf, "first (𝒜)")?;
    check_family(rel.n(), dnf, "second (ℬ)")?;
    let size = rel.len() as f64;
    let families = (cnf.len() + dnf.len()) as f64;
    ensure_cost("lattice", size * size * families.max(cnf.len() as f64 * dnf.len() as f64))?;
    let tops: Vec<Vec<u32>> = (0..rel.len())
        .map(|x| cnf.iter().map(|&k| top(rel, x, k)).collect())
        .collect();
    let bottoms: Vec<Vec<u32>> = (0..rel.len())
        .map(|x| dnf.iter().map(|&m| bottom(rel, x, m)).collect())
        .collect();
    let axiom = Axiom::Lattice {
        cnf: cnf.to_vec(),
        dnf: dnf.to_vec(),
    };
    Ok(scan(rel.len(), |w, out| {
        for x in 0..rel.len() {
            if !holds(rel.rank(w), rel.rank(x), cnf, dnf, &tops[x], &bottoms[x]) {
                out.push(ViolationWitness {
                    axiom: axiom.clone(),
                    criteria: Vec::new(),
                    points: vec![w, x],
                });
            }
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Form, LatticePolynomial};

    fn grid(n: usize, levels: usize) -> Vec<Vec<f64>> {
        vec![(0..levels).map(|l| l as f64).collect(); n]
    }

    #[test]
    fn polynomial_relation_satisfies_its_families() {
        let poly = LatticePolynomial::from_dnf(3, &[0b001, 0b110]).unwrap();
        let rel = FiniteRelation::from_fn(grid(3, 2), |p| poly.eval(p, Form::Dnf).unwrap()).unwrap();
        let w = check_lattice_axiom(&rel, poly.cnf_family(), poly.dnf_family()).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn additive_relation_fails() {
        let rel = FiniteRelation::from_fn(grid(2, 3), |p| p[0] + 2.0 * p[1]).unwrap();
        for (cnf, dnf) in [(vec![0b01, 0b10], vec![0b11]), (vec![0b11], vec![0b01, 0b10]), (vec![0b01], vec![0b01])] {
            let w = check_lattice_axiom(&rel, &cnf, &dnf).unwrap();
            assert!(!w.is_empty());
            assert!(w.iter().all(|w| w.verify(&rel)));
        }
    }

    #[test]
    fn constant_relation_passes() {
        let rel = FiniteRelation::from_fn(grid(3, 2), |_| 1.0).unwrap();
        assert!(check_lattice_axiom(&rel, &[0b001, 0b010], &[0b011]).unwrap().is_empty());
    }

    #[test]
    fn malformed_families() {
        let rel = FiniteRelation::from_fn(grid(2, 2), |p| p[0]).unwrap();
        for (cnf, dnf) in [
            (vec![], vec![0b01]),
            (vec![0b01, 0b11], vec![0b01]),
            (vec![0b100], vec![0b01]),
            (vec![0b01], vec![0]),
        ] {
            assert!(matches!(check_lattice_axiom(&rel, &cnf, &dnf), Err(Error::Domain(_))));
        }
    }
}
