//! Capacities (normalized monotone set functions) stored densely by subset bitmask.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mobius::{self, MobiusRepresentation};
use crate::scalar::Scalar;
use crate::subset::{self, Mask};
use crate::{Error, Result};

/// A set function on `2^N`, indexed by bitmask.
///
/// Construction only checks the shape; [`Capacity::validate`] reports
/// normalization and monotonicity problems.
#[derive(Clone, Debug, PartialEq)]
pub struct Capacity<T> {
    n: usize,
    values: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation<T> {
    /// `ν(set)` should equal `expected`.
    Normalization { set: Mask, value: T, expected: T },
    /// `subset ⊂ superset` but `ν(subset) > ν(superset)`.
    Monotonicity {
        subset: Mask,
        superset: Mask,
        lower: T,
        upper: T,
    },
}

impl<T: Scalar> fmt::Display for Violation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Normalization {
                set,
                value,
                expected,
            } => write!(
                f,
                "normalization: nu{} = {} (expected {})",
                subset::render(*set),
                value,
                expected
            ),
            Violation::Monotonicity {
                subset: a,
                superset: b,
                lower,
                upper,
            } => write!(
                f,
                "monotonicity: {} is contained in {} but {} > {}",
                subset::render(*a),
                subset::render(*b),
                lower,
                upper
            ),
        }
    }
}

/// Largest n for which [`Capacity::validate`] lists every violating pair
/// rather than only covering pairs.
const ALL_PAIRS_MAX_N: usize = 14;

impl<T: Scalar> Capacity<T> {
    pub fn from_values(n: usize, values: Vec<T>) -> Result<Self> {
        subset::check_n(n)?;
        if values.len() != 1 << n {
            return Err(Error::malformed(format!(
                "expected {} values for n = {}, got {}",
                1usize << n,
                n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::malformed("capacity values must be finite"));
        }
        Ok(Capacity { n, values })
    }

    /// Builds and validates.
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        let cap = Self::from_values(n, values)?;
        cap.ensure_valid()?;
        Ok(cap)
    }

    pub fn from_fn(n: usize, f: impl Fn(Mask) -> T) -> Result<Self> {
        subset::check_n(n)?;
        Self::from_values(n, (0..1usize << n).map(f).collect())
    }

    /// `ν(A) = Σ_{i∈A} w_i`. Weights must be nonnegative and sum to one.
    pub fn additive(weights: &[T]) -> Result<Self> {
        let n = weights.len();
        Self::new(
            n,
            (0..1usize << n)
                .map(|a| subset::members(a).map(|i| weights[i]).sum())
                .collect(),
        )
    }

    /// Symmetric capacity `ν(A) = g(|A| / n)`.
    pub fn symmetric(n: usize, g: impl Fn(T) -> T) -> Result<Self> {
        let nn = T::lit(n as f64);
        Self::new(
            n,
            (0..1usize << n)
                .map(|a| g(T::lit(subset::card(a) as f64) / nn))
                .collect(),
        )
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::symmetric(n, |t| t)
    }

    /// `ν(A) = 1` iff `A = N`.
    pub fn min_capacity(n: usize) -> Result<Self> {
        let full = subset::full(n);
        Self::from_fn(n, |a| if a == full { T::one() } else { T::zero() })
    }

    /// `ν(A) = 1` iff `A ≠ ∅`.
    pub fn max_capacity(n: usize) -> Result<Self> {
        Self::from_fn(n, |a| if a == 0 { T::zero() } else { T::one() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn get(&self, set: Mask) -> T {
        self.values[set]
    }

    pub fn full_set(&self) -> Mask {
        subset::full(self.n)
    }

    /// Every normalization violation and every monotonicity violation.
    ///
    /// Monotonicity is first scanned on covering pairs `A \ {i} ⊂ A`; if
    /// anything fails and `n` is small enough, all violating pairs are listed.
    pub fn validate(&self) -> Vec<Violation<T>> {
        let mut out = Vec::new();
        let full = self.full_set();
        if self.values[0].abs() > T::MONO_EPS {
            out.push(Violation::Normalization {
                set: 0,
                value: self.values[0],
                expected: T::zero(),
            });
        }
        if (self.values[full] - T::one()).abs() > T::MONO_EPS {
            out.push(Violation::Normalization {
                set: full,
                value: self.values[full],
                expected: T::one(),
            });
        }
        let covering_ok = (1..=full).all(|a| {
            subset::members(a).all(|i| self.values[a ^ (1 << i)] <= self.values[a] + T::MONO_EPS)
        });
        if covering_ok {
            return out;
        }
        if self.n <= ALL_PAIRS_MAX_N {
            for b in 0..=full {
                for a in subset::subsets_of(b) {
                    if a != b && self.values[a] > self.values[b] + T::MONO_EPS {
                        out.push(self.mono_violation(a, b));
                    }
                }
            }
        } else {
            for a in 1..=full {
                for i in subset::members(a) {
                    let sub = a ^ (1 << i);
                    if self.values[sub] > self.values[a] + T::MONO_EPS {
                        out.push(self.mono_violation(sub, a));
                    }
                }
            }
        }
        out
    }

    fn mono_violation(&self, a: Mask, b: Mask) -> Violation<T> {
        Violation::Monotonicity {
            subset: a,
            superset: b,
            lower: self.values[a],
            upper: self.values[b],
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let shown: Vec<String> = v.iter().take(3).map(|x| x.to_string()).collect();
            Err(Error::InvalidCapacity(format!(
                "{} violation(s): {}",
                v.len(),
                shown.join("; ")
            )))
        }
    }

    /// Every value is 0 or 1 within tolerance.
    pub fn is_01(&self) -> bool {
        self.values
            .iter()
            .all(|&v| v.abs() <= T::EPS || (v - T::one()).abs() <= T::EPS)
    }

    /// Supermodularity verdict, cross-checked against the Möbius criterion
    /// `Σ_{{i,j} ⊆ B ⊆ A} m(B) ≥ 0`. A disagreement is a consistency error.
    pub fn is_convex(&self) -> Result<bool> {
        let direct = self.is_supermodular();
        let via_mobius = mobius::mobius_convexity_criterion(&mobius::mobius_unchecked(self));
        if direct != via_mobius {
            return Err(Error::Consistency(format!(
                "supermodularity scan says {direct}, Möbius criterion says {via_mobius}"
            )));
        }
        Ok(direct)
    }

    /// `ν(A∪B) + ν(A∩B) ≥ ν(A) + ν(B)` for all `A, B`.
    ///
    /// Exhaustive over pairs for `n ≤ 10`; above that the equivalent local
    /// second-difference form is scanned.
    pub fn is_supermodular(&self) -> bool {
        let tol = T::EPS;
        let full = self.full_set();
        let v = &self.values;
        if self.n <= 10 {
            (0..=full).all(|a| {
                (0..=full).all(|b| v[a | b] + v[a & b] >= v[a] + v[b] - tol)
            })
        } else {
            (0..=full).all(|a| {
                let outside: Vec<usize> = (0..self.n).filter(|&i| !subset::contains(a, i)).collect();
                outside.iter().enumerate().all(|(k, &i)| {
                    outside[k + 1..].iter().all(|&j| {
                        let (ai, aj) = (a | 1 << i, a | 1 << j);
                        v[ai | aj] + v[a] >= v[ai] + v[aj] - tol
                    })
                })
            })
        }
    }

    pub fn mobius(&self) -> Result<MobiusRepresentation<T>> {
        mobius::mobius(self)
    }
}

/// One record of the capacity file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SubsetValue {
    pub set: Vec<usize>,
    pub value: f64,
}

/// On-disk capacity document: `{"n": .., "nu": [{"set": [..], "value": ..}, ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CapacityFile {
    pub n: usize,
    pub nu: Vec<SubsetValue>,
}

impl CapacityFile {
    pub fn from_capacity(cap: &Capacity<f64>) -> Self {
        let nu = (1..=cap.full_set())
            .map(|a| SubsetValue {
                set: subset::members(a).collect(),
                value: cap.get(a),
            })
            .collect();
        CapacityFile { n: cap.n(), nu }
    }

    /// Parses the records into a set function; does not check monotonicity.
    pub fn to_capacity(&self) -> Result<Capacity<f64>> {
        let n = self.n;
        subset::check_n(n)?;
        let mut values = vec![f64::NAN; 1 << n];
        values[0] = 0.0;
        let mut seen = vec![false; 1 << n];
        for rec in &self.nu {
            let mut mask = 0;
            for (k, &i) in rec.set.iter().enumerate() {
                if i >= n {
                    return Err(Error::malformed(format!("nu: criterion {i} out of range for n = {n}")));
                }
                if k > 0 && rec.set[k - 1] >= i {
                    return Err(Error::malformed(format!(
                        "nu: set {:?} is not sorted and duplicate-free",
                        rec.set
                    )));
                }
                mask |= 1 << i;
            }
            if seen[mask] {
                return Err(Error::malformed(format!("nu: set {:?} appears twice", rec.set)));
            }
            seen[mask] = true;
            values[mask] = rec.value;
        }
        if let Some(missing) = (1..1usize << n).find(|&a| !seen[a]) {
            return Err(Error::malformed(format!(
                "nu: missing value for set {:?}",
                subset::members(missing).collect::<Vec<_>>()
            )));
        }
        Capacity::from_values(n, values)
    }
}

impl Capacity<f64> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CapacityFile::from_capacity(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CapacityFile = serde_json::from_str(text)?;
        file.to_capacity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Capacity<f64> {
        Capacity::from_values(2, vec![0.0, 0.3, 0.5, 1.0]).unwrap()
    }

    #[test]
    fn valid_example_has_no_violations() {
        assert!(example().validate().is_empty());
    }

    #[test]
    fn reports_the_monotonicity_pair_and_the_normalization_failure() {
        let cap = Capacity::from_values(2, vec![0.0, 0.6, 0.5, 0.5]).unwrap();
        let v = cap.validate();
        let mono: Vec<_> = v
            .iter()
            .filter(|x| matches!(x, Violation::Monotonicity { .. }))
            .collect();
        assert_eq!(mono.len(), 1);
        assert_eq!(
            mono[0],
            &Violation::Monotonicity {
                subset: 0b01,
                superset: 0b11,
                lower: 0.6,
                upper: 0.5
            }
        );
        assert!(v.iter().any(|x| matches!(x, Violation::Normalization { set: 3, .. })));
    }

    #[test]
    fn wrong_length_is_malformed() {
        assert!(matches!(
            Capacity::<f64>::from_values(2, vec![0.0, 1.0]),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn non_covering_violations_are_listed() {
        // ν({0}) = 0.9 exceeds ν({0,1}) and, transitively, nothing else.
        let cap = Capacity::from_values(3, vec![0.0, 0.9, 0.1, 0.5, 0.1, 0.95, 0.2, 1.0]).unwrap();
        let v = cap.validate();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn zero_one_detection() {
        assert!(Capacity::<f64>::min_capacity(3).unwrap().is_01());
        assert!(!example().is_01());
    }

    #[test]
    fn convexity_examples() {
        let sq = Capacity::<f64>::symmetric(3, |t| t * t).unwrap();
        assert!(sq.is_convex().unwrap());
        let sqrt = Capacity::<f64>::symmetric(3, |t| t.sqrt()).unwrap();
        assert!(!sqrt.is_convex().unwrap());
        let add = Capacity::additive(&[0.2, 0.3, 0.5]).unwrap();
        assert!(add.is_convex().unwrap());
    }

    #[test]
    fn file_roundtrip_and_errors() {
        let cap = example();
        let back = Capacity::from_json(&cap.to_json()).unwrap();
        assert_eq!(cap, back);

        let missing = r#"{"n": 2, "nu": [{"set": [0], "value": 0.3}, {"set": [0,1], "value": 1}]}"#;
        let err = Capacity::from_json(missing).unwrap_err().to_string();
        assert!(err.contains("[1]"), "{err}");

        let dup = r#"{"n": 1, "nu": [{"set": [0], "value": 1}, {"set": [0], "value": 1}]}"#;
        assert!(Capacity::from_json(dup).is_err());

        let with_empty = r#"{"n": 1, "nu": [{"set": [], "value": 0}, {"set": [0], "value": 1}]}"#;
        assert!(Capacity::from_json(with_empty).unwrap().is_valid());
    }

    #[test]
    fn works_in_single_precision() {
        let cap = Capacity::<f32>::symmetric(4, |t| t * t).unwrap();
        assert!(cap.is_valid());
        assert!(cap.is_convex().unwrap());
    }
}
