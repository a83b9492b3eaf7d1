//! Shapley value and interaction indices, in both the capacity form and the
//! Möbius form.

use crate::capacity::Capacity;
use crate::mobius::{self, MobiusRepresentation};
use crate::scalar::Scalar;
use crate::subset::{self, Mask};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport<T> {
    pub shapley: Vec<T>,
    /// `((i, j), I(ij))` for every `i < j`.
    pub pairwise_interactions: Vec<((usize, usize), T)>,
}

impl<T: Scalar> IndexReport<T> {
    pub fn interaction(&self, i: usize, j: usize) -> Option<T> {
        let key = (i.min(j), i.max(j));
        self.pairwise_interactions
            .iter()
            .find(|(p, _)| *p == key)
            .map(|(_, v)| *v)
    }
}

/// Weight `(n - k - p)! k! / (n - p + 1)!` of a coalition of size `k`
/// outside a target set of size `p`.
pub fn xi<T: Scalar>(n: usize, k: usize, p: usize) -> T {
    let f = subset::factorials(n + 1);
    T::lit(f[n - k - p] * f[k] / f[n - p + 1])
}

pub fn shapley<T: Scalar>(cap: &Capacity<T>) -> Result<Vec<T>> {
    cap.ensure_valid()?;
    let n = cap.n();
    let weights: Vec<T> = (0..n).map(|t| xi(n, t, 1)).collect();
    let full = cap.full_set();
    Ok((0..n)
        .map(|i| {
            let rest = full & !(1 << i);
            subset::subsets_of(rest)
                .map(|t| weights[subset::card(t)] * (cap.get(t | 1 << i) - cap.get(t)))
                .sum()
        })
        .collect())
}

/// `φ(i) = Σ_{T⊆N∖i} m(T∪i) / (|T|+1)`.
pub fn shapley_from_mobius<T: Scalar>(m: &MobiusRepresentation<T>) -> Vec<T> {
    let n = m.n();
    let full = subset::full(n);
    (0..n)
        .map(|i| {
            subset::subsets_of(full & !(1 << i))
                .map(|t| m.get(t | 1 << i) / T::lit((subset::card(t) + 1) as f64))
                .sum()
        })
        .collect()
}

/// Interaction index of a nonempty set `target`.
pub fn interaction_index<T: Scalar>(cap: &Capacity<T>, target: Mask) -> Result<T> {
    cap.ensure_valid()?;
    let n = cap.n();
    let full = cap.full_set();
    if target == 0 {
        return Err(Error::domain("interaction index of the empty set"));
    }
    if target & !full != 0 {
        return Err(Error::domain(format!(
            "set {} is not a subset of N for n = {n}",
            subset::render(target)
        )));
    }
    let p = subset::card(target);
    let weights: Vec<T> = (0..=n - p).map(|k| xi(n, k, p)).collect();
    let outside = full & !target;
    let mut total = T::zero();
    for k in subset::subsets_of(outside) {
        let mut diff = T::zero();
        for l in subset::subsets_of(target) {
            let v = cap.get(l | k);
            if (p - subset::card(l)).is_multiple_of(2) {
                diff += v;
            } else {
                diff -= v;
            }
        }
        total += weights[subset::card(k)] * diff;
    }
    Ok(total)
}

/// `I(ij) = Σ_{T⊆N∖ij} m(T∪ij) / (|T|+1)`.
pub fn interaction_pair_mobius<T: Scalar>(
    m: &MobiusRepresentation<T>,
    i: usize,
    j: usize,
) -> Result<T> {
    let n = m.n();
    if i == j {
        return Err(Error::domain(format!("pair index needs i != j, got {i} twice")));
    }
    if i >= n || j >= n {
        return Err(Error::domain(format!("pair ({i},{j}) out of range for n = {n}")));
    }
    let pair = (1 << i) | (1 << j);
    Ok(subset::subsets_of(subset::full(n) & !pair)
        .map(|t| m.get(t | pair) / T::lit((subset::card(t) + 1) as f64))
        .sum())
}

pub fn index_report<T: Scalar>(cap: &Capacity<T>) -> Result<IndexReport<T>> {
    let m = mobius::mobius(cap)?;
    let n = cap.n();
    let shapley = shapley_from_mobius(&m);
    let mut pairwise_interactions = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairwise_interactions.push(((i, j), interaction_pair_mobius(&m, i, j)?));
        }
    }
    Ok(IndexReport {
        shapley,
        pairwise_interactions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn example() -> Capacity<f64> {
        Capacity::from_values(2, vec![0.0, 0.3, 0.5, 1.0]).unwrap()
    }

    #[test]
    fn shapley_two_criteria() {
        let phi = shapley(&example()).unwrap();
        assert_abs_diff_eq!(phi[0], 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(phi[1], 0.6, epsilon = 1e-12);
        let m = example().mobius().unwrap();
        let phi_m = shapley_from_mobius(&m);
        assert_abs_diff_eq!(phi_m[0], 0.4, epsilon = 1e-12);
    }

    #[test]
    fn pair_interaction_two_criteria() {
        assert_abs_diff_eq!(interaction_index(&example(), 0b11).unwrap(), 0.2, epsilon = 1e-12);
        let m = example().mobius().unwrap();
        assert_abs_diff_eq!(interaction_pair_mobius(&m, 0, 1).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn additive_capacity_has_no_interaction() {
        let w = [0.1, 0.2, 0.3, 0.4];
        let cap = Capacity::additive(&w).unwrap();
        let phi = shapley(&cap).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(phi[i], w[i], epsilon = 1e-12);
        }
        for t in [0b0011usize, 0b0110, 0b1011, 0b1111] {
            assert_abs_diff_eq!(interaction_index(&cap, t).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn singleton_interaction_is_shapley() {
        let cap = Capacity::<f64>::symmetric(4, |t| t * t).unwrap();
        let phi = shapley(&cap).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(interaction_index(&cap, 1 << i).unwrap(), phi[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(interaction_index(&example(), 0), Err(Error::Domain(_))));
        let m = example().mobius().unwrap();
        assert!(matches!(interaction_pair_mobius(&m, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn support_avoiding_the_pair_gives_zero() {
        // n = 3, mass only on {0}, {1}, {2}, {0,2}: pair (0,1) never covered.
        let mut coeffs = vec![0.0; 8];
        coeffs[0b001] = 0.2;
        coeffs[0b010] = 0.3;
        coeffs[0b100] = 0.1;
        coeffs[0b101] = 0.4;
        let m = MobiusRepresentation::from_coeffs(3, coeffs).unwrap();
        assert_eq!(interaction_pair_mobius(&m, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn report_is_consistent() {
        let cap = Capacity::<f64>::symmetric(3, |t| t.sqrt()).unwrap();
        let rep = index_report(&cap).unwrap();
        let s: f64 = rep.shapley.iter().sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-12);
        assert_eq!(rep.pairwise_interactions.len(), 3);
        assert!(rep.interaction(1, 0).unwrap() < 0.0);
    }
}
