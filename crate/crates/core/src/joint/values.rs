//! Per-criterion value functions on ordered level sets.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const TOL: f64 = 1e-9;

/// Ordered levels of one criterion and the value of each.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionValues {
    pub levels: Vec<String>,
    pub values: Vec<f64>,
}

impl CriterionValues {
    pub fn level_index(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == label)
    }

    /// Piecewise-linear interpolation when the labels are numeric.
    pub fn interpolate(&self, x: f64) -> Result<f64> {
        let xs = self
            .levels
            .iter()
            .map(|l| l.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| Error::domain("interpolation needs numeric level labels"))?;
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("numeric levels must be strictly increasing"));
        }
        let last = xs.len() - 1;
        if x <= xs[0] {
            return Ok(self.values[0]);
        }
        if x >= xs[last] {
            return Ok(self.values[last]);
        }
        let k = xs.iter().position(|&l| l > x).expect("inside range") - 1;
        let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
        Ok(self.values[k] + t * (self.values[k + 1] - self.values[k]))
    }
}

/// One value function per criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueFunctionSet {
    criteria: Vec<CriterionValues>,
}

impl ValueFunctionSet {
    /// Checks distinct levels, values in `[0, 1]` and nondecreasing.
    pub fn new(criteria: Vec<CriterionValues>) -> Result<Self> {
        if criteria.is_empty() {
            return Err(Error::malformed("value functions: no criteria"));
        }
        for (i, c) in criteria.iter().enumerate() {
            if c.levels.is_empty() || c.levels.len() != c.values.len() {
                return Err(Error::malformed(format!(
                    "value_functions[{i}]: {} levels but {} values",
                    c.levels.len(),
                    c.values.len()
                )));
            }
            for (k, l) in c.levels.iter().enumerate() {
                if c.levels[..k].contains(l) {
                    return Err(Error::malformed(format!("value_functions[{i}]: duplicate level {l:?}")));
                }
            }
            if c.values.iter().any(|v| !v.is_finite() || *v < -TOL || *v > 1.0 + TOL) {
                return Err(Error::malformed(format!("value_functions[{i}]: values must lie in [0, 1]")));
            }
            if c.values.windows(2).any(|w| w[1] < w[0] - TOL) {
                return Err(Error::malformed(format!(
                    "value_functions[{i}]: values must be nondecreasing along the level order"
                )));
            }
        }
        Ok(ValueFunctionSet { criteria })
    }

    /// Levels labelled `0..L_i-1`, values from `values[i]`.
    pub fn from_values(values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(
            values
                .into_iter()
                .map(|v| CriterionValues {
                    levels: (0..v.len()).map(|k| k.to_string()).collect(),
                    values: v,
                })
                .collect(),
        )
    }

    /// Lowest level of every criterion at 0 and the overall top at 1.
    pub fn is_anchored(&self) -> bool {
        let lows_zero = self.criteria.iter().all(|c| c.values[0].abs() <= TOL);
        let top = self
            .criteria
            .iter()
            .map(|c| *c.values.last().expect("nonempty"))
            .fold(f64::NEG_INFINITY, f64::max);
        lows_zero && (top - 1.0).abs() <= TOL
    }

    pub fn n(&self) -> usize {
        self.criteria.len()
    }

    pub fn criterion(&self, i: usize) -> &CriterionValues {
        &self.criteria[i]
    }

    pub fn criteria(&self) -> &[CriterionValues] {
        &self.criteria
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.criteria.iter().map(|c| c.levels.len()).collect()
    }

    pub fn value(&self, i: usize, level: usize) -> f64 {
        self.criteria[i].values[level]
    }

    /// Profile of a grid point given by level indices.
    pub fn map(&self, point: &[usize]) -> Vec<f64> {
        point.iter().enumerate().map(|(i, &l)| self.value(i, l)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ValueFunctionFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ValueFunctionFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// `{"value_functions": [[["level", value], ...], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueFunctionFile {
    pub value_functions: Vec<Vec<(String, f64)>>,
}

impl From<&ValueFunctionSet> for ValueFunctionFile {
    fn from(v: &ValueFunctionSet) -> Self {
        ValueFunctionFile {
            value_functions: v
                .criteria
                .iter()
                .map(|c| c.levels.iter().cloned().zip(c.values.iter().copied()).collect())
                .collect(),
        }
    }
}

impl TryFrom<ValueFunctionFile> for ValueFunctionSet {
    type Error = Error;

    fn try_from(f: ValueFunctionFile) -> Result<Self> {
        ValueFunctionSet::new(
            f.value_functions
                .into_iter()
                .map(|pairs| {
                    let (levels, values) = pairs.into_iter().unzip();
                    CriterionValues { levels, values }
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchoring_and_mapping() {
        let v = ValueFunctionSet::from_values(vec![vec![0.0, 0.4, 1.0], vec![0.0, 0.7]]).unwrap();
        assert!(v.is_anchored());
        assert_eq!(v.map(&[1, 1]), vec![0.4, 0.7]);
        let w = ValueFunctionSet::from_values(vec![vec![0.1, 0.4], vec![0.0, 0.7]]).unwrap();
        assert!(!w.is_anchored());
    }

    #[test]
    fn rejects_decreasing_or_out_of_range() {
        assert!(ValueFunctionSet::from_values(vec![vec![0.0, 0.5, 0.4]]).is_err());
        assert!(ValueFunctionSet::from_values(vec![vec![0.0, 1.5]]).is_err());
        assert!(ValueFunctionSet::from_values(vec![vec![]]).is_err());
    }

    #[test]
    fn interpolates_numeric_levels() {
        let c = CriterionValues {
            levels: vec!["0".into(), "10".into(), "20".into()],
            values: vec![0.0, 0.2, 1.0],
        };
        assert!((c.interpolate(5.0).unwrap() - 0.1).abs() < 1e-12);
        assert!((c.interpolate(15.0).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(c.interpolate(-3.0).unwrap(), 0.0);
        let labels = CriterionValues {
            levels: vec!["low".into(), "high".into()],
            values: vec![0.0, 1.0],
        };
        assert!(labels.interpolate(0.5).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let v = ValueFunctionSet::new(vec![CriterionValues {
            levels: vec!["bad".into(), "good".into()],
            values: vec![0.0, 1.0],
        }])
        .unwrap();
        let back = ValueFunctionSet::from_json(&v.to_json()).unwrap();
        assert_eq!(v, back);
        assert!(v.to_json().contains("\"bad\""));
    }
}
