//! Preference data and its file format.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_DELTA: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreferenceKind {
    Strict,
    Indifferent,
}

/// `better ≻ worse` (or `better ∼ worse`), as indices into the alternatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preference {
    pub better: usize,
    pub worse: usize,
    pub kind: PreferenceKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportanceKind {
    MoreImportant,
    Equal,
}

/// Criterion `i` is more important than (or as important as) `j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapleyComparison {
    pub i: usize,
    pub j: usize,
    pub kind: ImportanceKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Complementary,
    Redundant,
    /// `pair` interacts more than `other`.
    Stronger,
    /// `pair` interacts like `other`.
    Similar,
}

impl InteractionKind {
    pub fn is_comparative(self) -> bool {
        matches!(self, InteractionKind::Stronger | InteractionKind::Similar)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionStatement {
    pub pair: (usize, usize),
    pub kind: InteractionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<(usize, usize)>,
}

/// Margins for importance, interaction and learning-set statements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Deltas {
    #[serde(default = "default_delta")]
    pub shapley: f64,
    #[serde(default = "default_delta")]
    pub interaction: f64,
    #[serde(default = "default_delta")]
    pub learning_set: f64,
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

impl Default for Deltas {
    fn default() -> Self {
        Deltas {
            shapley: DEFAULT_DELTA,
            interaction: DEFAULT_DELTA,
            learning_set: DEFAULT_DELTA,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferenceDataset {
    pub n: usize,
    /// Value-mapped profiles, one per alternative.
    pub alternatives: Vec<Vec<f64>>,
    #[serde(default)]
    pub preferences: Vec<Preference>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shapley_comparisons: Vec<ShapleyComparison>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub interaction_statements: Vec<InteractionStatement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub veto: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub favour: Vec<usize>,
    #[serde(default)]
    pub deltas: Deltas,
}

impl PreferenceDataset {
    pub fn new(n: usize) -> Self {
        PreferenceDataset {
            n,
            alternatives: Vec::new(),
            preferences: Vec::new(),
            shapley_comparisons: Vec::new(),
            interaction_statements: Vec::new(),
            veto: Vec::new(),
            favour: Vec::new(),
            deltas: Deltas::default(),
        }
    }

    pub fn add_alternative(&mut self, profile: Vec<f64>) -> usize {
        self.alternatives.push(profile);
        self.alternatives.len() - 1
    }

    pub fn prefer(&mut self, better: usize, worse: usize, kind: PreferenceKind) {
        self.preferences.push(Preference { better, worse, kind });
    }

    pub fn validate(&self) -> Result<()> {
        crate::subset::check_n(self.n)?;
        let n = self.n;
        for (k, alt) in self.alternatives.iter().enumerate() {
            if alt.len() != n {
                return Err(Error::malformed(format!(
                    "alternatives[{k}]: expected {n} values, got {}",
                    alt.len()
                )));
            }
            if alt.iter().any(|v| !v.is_finite()) {
                return Err(Error::malformed(format!("alternatives[{k}]: non-finite value")));
            }
        }
        let na = self.alternatives.len();
        for (k, p) in self.preferences.iter().enumerate() {
            if p.better >= na || p.worse >= na {
                return Err(Error::malformed(format!(
                    "preferences[{k}]: alternative index out of range ({na} alternatives)"
                )));
            }
        }
        let crit = |field: &str, k: usize, i: usize| -> Result<()> {
            if i >= n {
                Err(Error::malformed(format!("{field}[{k}]: criterion {i} out of range for n = {n}")))
            } else {
                Ok(())
            }
        };
        for (k, s) in self.shapley_comparisons.iter().enumerate() {
            crit("shapley_comparisons", k, s.i)?;
            crit("shapley_comparisons", k, s.j)?;
            if s.i == s.j {
                return Err(Error::malformed(format!("shapley_comparisons[{k}]: i == j")));
            }
        }
        for (k, s) in self.interaction_statements.iter().enumerate() {
            let mut pairs = vec![s.pair];
            match (s.kind.is_comparative(), s.other) {
                (true, Some(o)) => pairs.push(o),
                (true, None) => {
                    return Err(Error::malformed(format!(
                        "interaction_statements[{k}]: comparative statement needs `other`"
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::malformed(format!(
                        "interaction_statements[{k}]: `other` only allowed for stronger/similar"
                    )))
                }
                (false, None) => {}
            }
            for (a, b) in pairs {
                crit("interaction_statements", k, a)?;
                crit("interaction_statements", k, b)?;
                if a == b {
                    return Err(Error::malformed(format!(
                        "interaction_statements[{k}]: pair with equal members"
                    )));
                }
            }
        }
        for (k, &i) in self.veto.iter().enumerate() {
            crit("veto", k, i)?;
        }
        for (k, &i) in self.favour.iter().enumerate() {
            crit("favour", k, i)?;
        }
        self.deltas.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: PreferenceDataset = serde_json::from_str(text)?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl Deltas {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("shapley", self.shapley),
            ("interaction", self.interaction),
            ("learning_set", self.learning_set),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::malformed(format!("deltas.{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document() {
        let text = r#"{
            "n": 2,
            "alternatives": [[0.2, 0.8], [0.8, 0.2]],
            "preferences": [{"better": 0, "worse": 1, "kind": "strict"}]
        }"#;
        let d = PreferenceDataset::from_json(text).unwrap();
        assert_eq!(d.deltas, Deltas::default());
        assert_eq!(d.preferences[0].kind, PreferenceKind::Strict);
        let back = PreferenceDataset::from_json(&d.to_json()).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn parses_statements() {
        let text = r#"{
            "n": 4,
            "alternatives": [],
            "shapley_comparisons": [{"i": 0, "j": 1, "kind": "more_important"}],
            "interaction_statements": [
                {"pair": [0, 1], "kind": "complementary"},
                {"pair": [0, 1], "kind": "stronger", "other": [2, 3]}
            ],
            "veto": [2],
            "deltas": {"shapley": 0.05}
        }"#;
        let d = PreferenceDataset::from_json(text).unwrap();
        assert_eq!(d.deltas.shapley, 0.05);
        assert_eq!(d.deltas.learning_set, DEFAULT_DELTA);
        assert_eq!(d.interaction_statements[1].other, Some((2, 3)));
    }

    #[test]
    fn rejects_bad_documents() {
        let wrong_len = r#"{"n": 2, "alternatives": [[0.1]]}"#;
        assert!(PreferenceDataset::from_json(wrong_len).unwrap_err().to_string().contains("alternatives[0]"));
        let bad_idx = r#"{"n": 2, "alternatives": [[0.1, 0.2]], "preferences": [{"better": 0, "worse": 3, "kind": "strict"}]}"#;
        assert!(PreferenceDataset::from_json(bad_idx).is_err());
        let bad_delta = r#"{"n": 2, "alternatives": [], "deltas": {"learning_set": 0}}"#;
        assert!(PreferenceDataset::from_json(bad_delta).is_err());
        let unknown = r#"{"n": 2, "alternatives": [], "extra": 1}"#;
        assert!(PreferenceDataset::from_json(unknown).is_err());
        let missing_other = r#"{"n": 3, "alternatives": [], "interaction_statements": [{"pair": [0, 1], "kind": "similar"}]}"#;
        assert!(PreferenceDataset::from_json(missing_other).is_err());
    }
}
