//! Choquet integral of a profile of (already value-mapped) criterion scores.

use crate::capacity::Capacity;
use crate::mobius::MobiusRepresentation;
use crate::scalar::Scalar;
use crate::subset::{self, Mask};
use crate::{Error, Result};

fn check_len(n: usize, profile_len: usize) -> Result<()> {
    if n != profile_len {
        return Err(Error::domain(format!(
            "profile has {profile_len} components, capacity has {n} criteria"
        )));
    }
    Ok(())
}

/// Criteria sorted by ascending score; ties broken by criterion index.
pub fn ascending_order<T: Scalar>(profile: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..profile.len()).collect();
    order.sort_by(|&a, &b| {
        profile[a]
            .partial_cmp(&profile[b])
            .expect("finite profile")
            .then(a.cmp(&b))
    });
    order
}

/// The integral as a linear form in the capacity: `C(ν, p) = Σ c_A ν(A)`.
///
/// Entries are `(A, c_A)` for the level sets `A_k = {σ(k), .., σ(n)}` of the
/// sorted profile, starting with `A_1 = N`.
pub fn choquet_coefficients<T: Scalar>(profile: &[T]) -> Vec<(Mask, T)> {
    let order = ascending_order(profile);
    let mut set = subset::full(profile.len());
    let mut prev = T::zero();
    let mut out = Vec::with_capacity(order.len());
    for &i in &order {
        out.push((set, profile[i] - prev));
        prev = profile[i];
        set &= !(1 << i);
    }
    out
}

/// Sort-based Choquet integral `Σ_k (p_(k) - p_(k-1)) ν(A_k)`.
pub fn choquet<T: Scalar>(cap: &Capacity<T>, profile: &[T]) -> Result<T> {
    check_len(cap.n(), profile.len())?;
    Ok(choquet_coefficients(profile)
        .into_iter()
        .map(|(a, c)| c * cap.get(a))
        .sum())
}

/// Möbius form `Σ_{A≠∅} m(A) · min_{i∈A} p_i`.
pub fn choquet_mobius<T: Scalar>(m: &MobiusRepresentation<T>, profile: &[T]) -> Result<T> {
    check_len(m.n(), profile.len())?;
    let len = 1usize << m.n();
    let mut mins = vec![T::infinity(); len];
    let mut total = T::zero();
    for a in 1..len {
        let low = a.trailing_zeros() as usize;
        let rest = a & (a - 1);
        mins[a] = if rest == 0 {
            profile[low]
        } else {
            mins[rest].min(profile[low])
        };
        total += m.get(a) * mins[a];
    }
    Ok(total)
}

/// 0–1 capacity whose integral is the `k`-th smallest profile component:
/// `ν(A) = 1` iff `|A| ≥ n - k + 1`.
pub fn order_statistic_capacity<T: Scalar>(n: usize, k: usize) -> Result<Capacity<T>> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("order statistic k = {k} outside 1..={n}")));
    }
    Capacity::from_fn(n, |a| {
        if subset::card(a) + k > n {
            T::one()
        } else {
            T::zero()
        }
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
    fn two_criteria_example() {
        assert_abs_diff_eq!(choquet(&example(), &[0.2, 0.8]).unwrap(), 0.5, epsilon = 1e-12);
        let m = example().mobius().unwrap();
        assert_abs_diff_eq!(choquet_mobius(&m, &[0.2, 0.8]).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn constant_profile_is_fixed_point() {
        let cap = Capacity::<f64>::symmetric(4, |t| t.powf(1.7)).unwrap();
        assert_abs_diff_eq!(choquet(&cap, &[0.37; 4]).unwrap(), 0.37, epsilon = 1e-12);
    }

    #[test]
    fn additive_is_weighted_sum() {
        let w = [0.1, 0.6, 0.3];
        let cap = Capacity::additive(&w).unwrap();
        let p = [0.9, -0.2, 0.4];
        let expected: f64 = w.iter().zip(&p).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(choquet(&cap, &p).unwrap(), expected, epsilon = 1e-12);
        let m = cap.mobius().unwrap();
        assert_abs_diff_eq!(choquet_mobius(&m, &p).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn top_coefficient_only_is_min() {
        let m = MobiusRepresentation::from_coeffs(3, vec![0., 0., 0., 0., 0., 0., 0., 1.]).unwrap();
        assert_eq!(choquet_mobius(&m, &[0.4, 0.1, 0.7]).unwrap(), 0.1);
    }

    #[test]
    fn order_statistics() {
        let med = order_statistic_capacity::<f64>(3, 2).unwrap();
        assert_eq!(choquet(&med, &[3.0, 1.0, 2.0]).unwrap(), 2.0);
        assert!(med.is_01() && med.is_valid());
        let lo = order_statistic_capacity::<f64>(3, 1).unwrap();
        assert_eq!(lo, Capacity::min_capacity(3).unwrap());
        let hi = order_statistic_capacity::<f64>(3, 3).unwrap();
        assert_eq!(hi, Capacity::max_capacity(3).unwrap());
        assert!(order_statistic_capacity::<f64>(3, 0).is_err());
        assert!(order_statistic_capacity::<f64>(3, 4).is_err());
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(choquet(&example(), &[1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn coefficients_reproduce_integral() {
        let cap = Capacity::<f64>::symmetric(3, |t| t.sqrt()).unwrap();
        let p = [0.5, 0.5, 0.1];
        let lin: f64 = choquet_coefficients(&p).iter().map(|&(a, c)| c * cap.get(a)).sum();
        assert_abs_diff_eq!(lin, choquet(&cap, &p).unwrap(), epsilon = 1e-15);
    }
}
