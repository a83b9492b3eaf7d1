//! Lattice polynomials (min/max expressions) and their correspondence with
//! 0–1 capacities.

use std::fmt;

use crate::capacity::Capacity;
use crate::scalar::Scalar;
use crate::subset::{self, Mask};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// Min over the CNF family of the max within each member.
    Cnf,
    /// Max over the DNF family of the min within each member.
    Dnf,
}

/// A lattice polynomial given by its two dual antichains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolynomial {
    n: usize,
    cnf: Vec<Mask>,
    dnf: Vec<Mask>,
}

fn check_family(n: usize, family: &[Mask]) -> Result<()> {
    subset::check_n(n)?;
    if family.is_empty() {
        return Err(Error::domain("family must be nonempty"));
    }
    let full = subset::full(n);
    for &m in family {
        if m == 0 {
            return Err(Error::domain("family members must be nonempty"));
        }
        if m & !full != 0 {
            return Err(Error::domain(format!(
                "member {} not a subset of N for n = {n}",
                subset::render(m)
            )));
        }
    }
    Ok(())
}

/// Minimal members of a family, sorted by mask.
pub fn minimal_members(family: &[Mask]) -> Vec<Mask> {
    let mut out: Vec<Mask> = family
        .iter()
        .copied()
        .filter(|&a| !family.iter().any(|&b| b != a && subset::is_subset(b, a)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn is_antichain(family: &[Mask]) -> bool {
    family.iter().enumerate().all(|(k, &a)| {
        family
            .iter()
            .enumerate()
            .all(|(l, &b)| k == l || !subset::is_subset(a, b))
    })
}

/// All minimal sets meeting every member of `family` (the blocker).
///
/// Exhaustive scan over `2^n` candidates.
pub fn dualize(n: usize, family: &[Mask]) -> Result<Vec<Mask>> {
    check_family(n, family)?;
    let hits = |t: Mask| family.iter().all(|&f| f & t != 0);
    let full = subset::full(n);
    Ok((1..=full)
        .filter(|&t| hits(t) && subset::members(t).all(|i| !hits(t & !(1 << i))))
        .collect())
}

/// 0–1 capacity with `ν(A) = 1` iff `A` contains a member of `dnf`.
pub fn capacity_from_dnf<T: Scalar>(n: usize, dnf: &[Mask]) -> Result<Capacity<T>> {
    check_family(n, dnf)?;
    Capacity::from_fn(n, |a| {
        if dnf.iter().any(|&b| subset::is_subset(b, a)) {
            T::one()
        } else {
            T::zero()
        }
    })
}

impl LatticePolynomial {
    /// Builds from a DNF family (reduced to its minimal members); the CNF
    /// family is its dual.
    pub fn from_dnf(n: usize, dnf: &[Mask]) -> Result<Self> {
        check_family(n, dnf)?;
        let dnf = minimal_members(dnf);
        let cnf = dualize(n, &dnf)?;
        Ok(LatticePolynomial { n, cnf, dnf })
    }

    /// Builds from both families; they must be dual antichains.
    pub fn from_families(n: usize, cnf: &[Mask], dnf: &[Mask]) -> Result<Self> {
        check_family(n, cnf)?;
        check_family(n, dnf)?;
        if !is_antichain(cnf) || !is_antichain(dnf) {
            return Err(Error::domain("families must be antichains"));
        }
        let mut cnf = cnf.to_vec();
        cnf.sort_unstable();
        let mut dnf = dnf.to_vec();
        dnf.sort_unstable();
        if dualize(n, &dnf)? != cnf {
            return Err(Error::domain("CNF family is not the dual of the DNF family"));
        }
        Ok(LatticePolynomial { n, cnf, dnf })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cnf_family(&self) -> &[Mask] {
        &self.cnf
    }

    pub fn dnf_family(&self) -> &[Mask] {
        &self.dnf
    }

    pub fn eval<T: Scalar>(&self, profile: &[T], form: Form) -> Result<T> {
        if profile.len() != self.n {
            return Err(Error::domain(format!(
                "profile has {} components, polynomial has {} variables",
                profile.len(),
                self.n
            )));
        }
        let fold = |m: Mask, inner_max: bool| {
            let mut it = subset::members(m).map(|i| profile[i]);
            let first = it.next().expect("nonempty member");
            it.fold(first, |acc, v| if inner_max { acc.max(v) } else { acc.min(v) })
        };
        Ok(match form {
            Form::Cnf => self
                .cnf
                .iter()
                .map(|&k| fold(k, true))
                .fold(T::infinity(), |a, b| a.min(b)),
            Form::Dnf => self
                .dnf
                .iter()
                .map(|&k| fold(k, false))
                .fold(T::neg_infinity(), |a, b| a.max(b)),
        })
    }

    pub fn to_capacity<T: Scalar>(&self) -> Capacity<T> {
        capacity_from_dnf(self.n, &self.dnf).expect("families checked on construction")
    }

    pub fn render(&self, form: Form) -> String {
        let (family, inner, outer) = match form {
            Form::Dnf => (&self.dnf, " & ", " | "),
            Form::Cnf => (&self.cnf, " | ", " & "),
        };
        family
            .iter()
            .map(|&m| {
                let vars: Vec<String> = subset::members(m).map(|i| format!("x{i}")).collect();
                format!("({})", vars.join(inner))
            })
            .collect::<Vec<_>>()
            .join(outer)
    }
}

impl fmt::Display for LatticePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(Form::Dnf))
    }
}

/// Lattice polynomial of a 0–1 capacity: the DNF family is the set of
/// minimal `A` with `ν(A) = 1`.
pub fn extract_dnf<T: Scalar>(cap: &Capacity<T>) -> Result<LatticePolynomial> {
    cap.ensure_valid()?;
    if let Some(a) = (0..=cap.full_set()).find(|&a| {
        let v = cap.get(a);
        v.abs() > T::EPS && (v - T::one()).abs() > T::EPS
    }) {
        return Err(Error::domain(format!(
            "not a 0-1 capacity: nu{} = {}",
            subset::render(a),
            cap.get(a)
        )));
    }
    let one = |a: Mask| cap.get(a) > T::lit(0.5);
    let dnf: Vec<Mask> = (1..=cap.full_set())
        .filter(|&a| one(a) && subset::members(a).all(|i| !one(a & !(1 << i))))
        .collect();
    LatticePolynomial::from_dnf(cap.n(), &dnf)
}
