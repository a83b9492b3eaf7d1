//! Möbius and zeta transforms over the subset lattice.

use crate::capacity::Capacity;
use crate::scalar::Scalar;
use crate::subset::{self, Mask};
use crate::{Error, Result};

/// Coefficients `m(A)` with `ν(A) = Σ_{B⊆A} m(B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusRepresentation<T> {
    n: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> MobiusRepresentation<T> {
    pub fn from_coeffs(n: usize, coeffs: Vec<T>) -> Result<Self> {
        subset::check_n(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::malformed(format!(
                "expected {} Möbius coefficients for n = {}, got {}",
                1usize << n,
                n,
                coeffs.len()
            )));
        }
        Ok(MobiusRepresentation { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    #[inline]
    pub fn get(&self, set: Mask) -> T {
        self.coeffs[set]
    }

    /// Whether `m(A) = 0` for every `|A| > k`.
    pub fn is_k_additive(&self, k: usize) -> Result<bool> {
        if k == 0 || k > self.n {
            return Err(Error::domain(format!("k = {k} outside 1..={}", self.n)));
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(a, &m)| subset::card(a) <= k || m.abs() <= T::EPS))
    }

    /// Largest `|m(A)|` over sets of size above `k`.
    pub fn mass_above(&self, k: usize) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(a, _)| subset::card(*a) > k)
            .fold(T::zero(), |acc, (_, &m)| acc.max(m.abs()))
    }

    pub fn zeta(&self) -> Capacity<T> {
        zeta(self)
    }
}

/// In-place subset-sum (zeta) transform, `n·2^n` additions.
pub fn zeta_in_place<T: Scalar>(xs: &mut [T]) {
    let len = xs.len();
    debug_assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        for a in 0..len {
            if a & bit != 0 {
                let lo = xs[a ^ bit];
                xs[a] += lo;
            }
        }
        bit <<= 1;
    }
}

/// In-place inverse of [`zeta_in_place`].
pub fn mobius_in_place<T: Scalar>(xs: &mut [T]) {
    let len = xs.len();
    debug_assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        for a in 0..len {
            if a & bit != 0 {
                let lo = xs[a ^ bit];
                xs[a] -= lo;
            }
        }
        bit <<= 1;
    }
}

/// In-place superset-sum transform: `out(A) = Σ_{B⊇A} x(B)`.
pub fn superset_sum_in_place<T: Scalar>(xs: &mut [T]) {
    let len = xs.len();
    let mut bit = 1;
    while bit < len {
        for a in 0..len {
            if a & bit == 0 {
                let hi = xs[a | bit];
                xs[a] += hi;
            }
        }
        bit <<= 1;
    }
}

/// Möbius transform of a valid capacity.
pub fn mobius<T: Scalar>(cap: &Capacity<T>) -> Result<MobiusRepresentation<T>> {
    cap.ensure_valid()?;
    Ok(mobius_unchecked(cap))
}

/// Möbius transform of an arbitrary set function.
pub fn mobius_unchecked<T: Scalar>(cap: &Capacity<T>) -> MobiusRepresentation<T> {
    let mut coeffs = cap.values().to_vec();
    mobius_in_place(&mut coeffs);
    MobiusRepresentation { n: cap.n(), coeffs }
}

/// `ν(A) = Σ_{B⊆A} m(B)`. The result is not validated: a Möbius vector
/// need not describe a monotone set function.
pub fn zeta<T: Scalar>(m: &MobiusRepresentation<T>) -> Capacity<T> {
    let mut values = m.coeffs.clone();
    zeta_in_place(&mut values);
    Capacity::from_values(m.n, values).expect("shape preserved by the transform")
}

/// `Σ_{{i,j} ⊆ B ⊆ A} m(B) ≥ 0` for every pair `i ≠ j` and every `A ⊇ {i,j}`.
pub fn mobius_convexity_criterion<T: Scalar>(m: &MobiusRepresentation<T>) -> bool {
    let n = m.n;
    let len = 1usize << n;
    let mut buf = vec![T::zero(); len];
    for i in 0..n {
        for j in i + 1..n {
            let pair = (1 << i) | (1 << j);
            for (b, slot) in buf.iter_mut().enumerate() {
                *slot = if b & pair == pair { m.coeffs[b] } else { T::zero() };
            }
            zeta_in_place(&mut buf);
            if (0..len).any(|a| a & pair == pair && buf[a] < -T::EPS) {
                return false;
            }
        }
    }
    true
}
