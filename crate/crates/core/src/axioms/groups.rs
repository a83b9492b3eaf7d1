//! Interaction groups: connected components of the pairwise interaction
//! graph, from Möbius support or from scans of a finite relation.

use super::{block_additive_holds, triple_cancellation_holds, FiniteRelation};
use crate::mobius::MobiusRepresentation;
use crate::subset::{self, Mask};
use crate::{Error, Result};

/// Connected components of the graph on `0..n`, each sorted, ordered by
/// smallest member.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(x);
    }
    groups
}

/// `i ~ j` iff some `A ⊇ {i, j}` has `|m(A)| > tol`.
pub fn interaction_groups_mobius(m: &MobiusRepresentation<f64>, tol: f64) -> Vec<Vec<usize>> {
    let n = m.n();
    let mut edges = Vec::new();
    for set in 1..=subset::full(n) {
        if subset::card(set) < 2 || m.get(set).abs() <= tol {
            continue;
        }
        let members: Vec<usize> = subset::members(set).collect();
        edges.extend(members.windows(2).map(|w| (w[0], w[1])));
    }
    components(n, &edges)
}

/// Most pairwise components the scan route will combine.
pub const MAX_SCAN_COMPONENTS: usize = 12;

/// Groups from the relation alone.
///
/// Pairs whose pairwise triple cancellation fails (in either order) are
/// joined first. Pairwise scans miss most interactions on small grids, so
/// every union `B` of those components is then tested for additive
/// separability of `X_B × X_{N∖B}`. A separable `B` is a union of groups;
/// the result is the finest partition of the components compatible with
/// every separable union.
pub fn interaction_groups_scan(rel: &FiniteRelation) -> Result<Vec<Vec<usize>>> {
    let n = rel.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !triple_cancellation_holds(rel, i, j)? || !triple_cancellation_holds(rel, j, i)? {
                edges.push((i, j));
            }
        }
    }
    let parts: Vec<Mask> = components(n, &edges)
        .iter()
        .map(|g| subset::from_members(g))
        .collect();
    let c = parts.len();
    if c > MAX_SCAN_COMPONENTS {
        return Err(Error::Resource(format!(
            "{c} pairwise components; at most {MAX_SCAN_COMPONENTS} can be combined"
        )));
    }
    // Unions containing the last component cover each complementary pair once.
    let mut signature: Vec<Vec<bool>> = vec![Vec::new(); c];
    for pick in 0..(1usize << c.saturating_sub(1)) {
        let chosen = pick | (1 << (c - 1));
        if chosen == (1 << c) - 1 {
            continue;
        }
        let block = (0..c).filter(|k| chosen >> k & 1 == 1).fold(0, |m, k| m | parts[k]);
        if block_additive_holds(rel, block)? {
            for (k, sig) in signature.iter_mut().enumerate() {
                sig.push(chosen >> k & 1 == 1);
            }
        }
    }
    let mut groups: Vec<(&[bool], Mask)> = Vec::new();
    for (k, sig) in signature.iter().enumerate() {
        match groups.iter_mut().find(|g| g.0 == sig.as_slice()) {
            Some(g) => g.1 |= parts[k],
            None => groups.push((sig, parts[k])),
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().map(|(_, g)| subset::members(g).collect()).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::Capacity;

    fn mobius(n: usize, terms: &[(usize, f64)]) -> MobiusRepresentation<f64> {
        let mut c = vec![0.0; 1 << n];
        for &(s, v) in terms {
            c[s] = v;
        }
        MobiusRepresentation::from_coeffs(n, c).unwrap()
    }

    #[test]
    fn components_are_canonical() {
        assert_eq!(components(5, &[(3, 1), (4, 0)]), vec![vec![0, 4], vec![1, 3], vec![2]]);
        assert_eq!(components(0, &[]), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn mobius_route() {
        let additive = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap().mobius().unwrap();
        assert_eq!(interaction_groups_mobius(&additive, 1e-9), vec![vec![0], vec![1], vec![2]]);
        let blocks = mobius(4, &[(0b0001, 0.2), (0b0010, 0.2), (0b0011, 0.1), (0b0100, 0.2), (0b1000, 0.2), (0b1100, 0.1)]);
        assert_eq!(interaction_groups_mobius(&blocks, 1e-9), vec![vec![0, 1], vec![2, 3]]);
        let triple = mobius(3, &[(0b001, 0.3), (0b010, 0.3), (0b100, 0.3), (0b111, 0.1)]);
        assert_eq!(interaction_groups_mobius(&triple, 1e-9), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn scan_route_matches_on_a_grouped_model() {
        let m = mobius(3, &[(0b001, 0.3), (0b010, 0.3), (0b100, 0.2), (0b011, 0.2)]);
        let cap = m.zeta();
        let grid = vec![vec![0.0, 0.23, 0.61, 1.0], vec![0.0, 0.17, 0.52, 0.9], vec![0.0, 0.31, 0.7, 0.95]];
        let rel = FiniteRelation::from_fn(grid, |p| crate::choquet::choquet(&cap, p).unwrap()).unwrap();
        assert_eq!(interaction_groups_scan(&rel).unwrap(), vec![vec![0, 1], vec![2]]);
    }
}
