//! Synthetic decision makers and preference sampling.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{Capacity, CapacityFile};
use crate::choquet::choquet;
use crate::learn::{Deltas, Preference, PreferenceDataset, PreferenceKind};
use crate::mobius::{self, MobiusRepresentation};
use crate::subset::{self, Mask};
use crate::{Error, Result};

use super::values::{CriterionValues, ValueFunctionFile, ValueFunctionSet};

/// Which Möbius coefficients a synthetic capacity may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteractionSpec {
    /// Singletons only.
    Additive,
    /// Every nonempty subset.
    Full,
    /// Subsets inside one block of the partition.
    Groups(Vec<Vec<usize>>),
}

impl InteractionSpec {
    /// Parses `additive`, `full` or `groups=0,1;2`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "additive" => Ok(InteractionSpec::Additive),
            "full" => Ok(InteractionSpec::Full),
            _ => {
                let body = text
                    .strip_prefix("groups=")
                    .ok_or_else(|| Error::malformed(format!("unknown interaction spec {text:?}")))?;
                let blocks = body
                    .split(';')
                    .map(|blk| {
                        blk.split(',')
                            .map(|s| s.trim().parse::<usize>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::malformed(format!("groups spec {text:?}: {e}")))?;
                Ok(InteractionSpec::Groups(blocks))
            }
        }
    }

    fn blocks(&self, n: usize) -> Result<Vec<Mask>> {
        match self {
            InteractionSpec::Additive => Ok((0..n).map(|i| 1 << i).collect()),
            InteractionSpec::Full => Ok(vec![subset::full(n)]),
            InteractionSpec::Groups(p) => {
                let mut seen = 0usize;
                let mut out = Vec::new();
                for blk in p {
                    if blk.is_empty() {
                        return Err(Error::domain("groups spec has an empty block"));
                    }
                    let mut m = 0;
                    for &i in blk {
                        if i >= n || seen & (1 << i) != 0 {
                            return Err(Error::domain(format!(
                                "groups spec is not a partition of 0..{n}"
                            )));
                        }
                        seen |= 1 << i;
                        m |= 1 << i;
                    }
                    out.push(m);
                }
                if seen != subset::full(n) {
                    return Err(Error::domain(format!("groups spec does not cover 0..{n}")));
                }
                Ok(out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruthModel {
    pub capacity: Capacity<f64>,
    pub value_functions: ValueFunctionSet,
}

impl GroundTruthModel {
    pub fn new(capacity: Capacity<f64>, value_functions: ValueFunctionSet) -> Result<Self> {
        capacity.ensure_valid()?;
        if capacity.n() != value_functions.n() {
            return Err(Error::malformed(format!(
                "capacity has {} criteria, value functions have {}",
                capacity.n(),
                value_functions.n()
            )));
        }
        Ok(GroundTruthModel {
            capacity,
            value_functions,
        })
    }

    pub fn n(&self) -> usize {
        self.capacity.n()
    }

    pub fn levels(&self) -> Vec<usize> {
        self.value_functions.level_counts()
    }

    /// Overall score of a grid point.
    pub fn score(&self, point: &[usize]) -> f64 {
        choquet(&self.capacity, &self.value_functions.map(point)).expect("matching sizes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile {
            capacity: CapacityFile::from_capacity(&self.capacity),
            value_functions: ValueFunctionFile::from(&self.value_functions).value_functions,
        })
        .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ModelFile = serde_json::from_str(text)?;
        let vf = ValueFunctionSet::try_from(ValueFunctionFile {
            value_functions: f.value_functions,
        })?;
        GroundTruthModel::new(f.capacity.to_capacity()?, vf)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    capacity: CapacityFile,
    value_functions: Vec<Vec<(String, f64)>>,
}

/// Random anchored value functions: lowest level 0, strictly increasing,
/// overall top exactly 1.
pub fn random_value_functions(levels: &[usize], rng: &mut impl Rng) -> Result<ValueFunctionSet> {
    if levels.contains(&0) {
        return Err(Error::domain("every criterion needs at least one level"));
    }
    let mut raw: Vec<Vec<f64>> = levels
        .iter()
        .map(|&l| {
            let mut acc = 0.0;
            let mut v = vec![0.0];
            for _ in 1..l {
                acc += rng.gen_range(0.2..1.0);
                v.push(acc);
            }
            let top = rng.gen_range(0.6..1.0);
            if acc > 0.0 {
                v.iter_mut().for_each(|x| *x *= top / acc);
            }
            v
        })
        .collect();
    let top = raw
        .iter()
        .map(|v| *v.last().expect("nonempty"))
        .fold(0.0, f64::max);
    if top > 0.0 {
        for v in raw.iter_mut() {
            v.iter_mut().for_each(|x| *x /= top);
        }
    }
    ValueFunctionSet::from_values(raw)
}

/// Random capacity whose Möbius support lies inside the blocks of `spec`.
pub fn random_capacity(n: usize, spec: &InteractionSpec, rng: &mut impl Rng) -> Result<Capacity<f64>> {
    let blocks = spec.blocks(n)?;
    let support: Vec<Mask> = (1..=subset::full(n))
        .filter(|&a| blocks.iter().any(|&b| subset::is_subset(a, b)))
        .collect();
    // Rejection sampling with some negative higher-order terms; the last
    // attempts use nonnegative masses, which are always monotone.
    for attempt in 0..200 {
        let allow_negative = attempt < 150;
        let mut coeffs = vec![0.0; 1 << n];
        for &a in &support {
            let mag = if subset::card(a) == 1 {
                rng.gen_range(0.2..1.0)
            } else {
                rng.gen_range(0.1..1.0)
            };
            let neg = allow_negative && subset::card(a) > 1 && rng.gen_bool(0.35);
            coeffs[a] = if neg { -mag } else { mag };
        }
        let total: f64 = coeffs.iter().sum();
        if total <= 0.0 {
            continue;
        }
        coeffs.iter_mut().for_each(|c| *c /= total);
        let m = MobiusRepresentation::from_coeffs(n, coeffs)?;
        let mut cap = mobius::zeta(&m);
        let mut values = cap.values().to_vec();
        values[subset::full(n)] = 1.0;
        cap = Capacity::from_values(n, values)?;
        if cap.is_valid() {
            return Ok(cap);
        }
    }
    Err(Error::Resource("could not sample a monotone capacity".into()))
}

/// Deterministic synthetic model for `seed`.
pub fn synth_model(n: usize, levels: &[usize], seed: u64, spec: &InteractionSpec) -> Result<GroundTruthModel> {
    if n < 2 {
        return Err(Error::domain("synthetic models need n >= 2"));
    }
    if levels.len() != n {
        return Err(Error::domain(format!("{} level counts for n = {n}", levels.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let capacity = random_capacity(n, spec, &mut rng)?;
    let value_functions = random_value_functions(levels, &mut rng)?;
    GroundTruthModel::new(capacity, value_functions)
}

/// All level-index tuples, last criterion varying fastest.
pub fn grid_points(levels: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = levels.iter().product();
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut p = vec![0; levels.len()];
        for i in (0..levels.len()).rev() {
            p[i] = code % levels[i];
            code /= levels[i];
        }
        out.push(p);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// Every unordered pair of distinct grid points.
    AllGridPairs,
    /// `count` distinct pairs drawn uniformly.
    Random { count: usize, seed: u64 },
}

/// Preferences over grid points as level-index tuples; the shared core of
/// [`sample_preferences`] and [`sample_categorical`].
fn sample_pairs(model: &GroundTruthModel, mode: SampleMode, deltas: Deltas) -> (Vec<Vec<usize>>, Vec<Preference>) {
    let points = grid_points(&model.levels());
    let scores: Vec<f64> = points.iter().map(|p| model.score(p)).collect();
    let m = points.len();
    let total_pairs = m * m.saturating_sub(1) / 2;
    let pair_at = |mut idx: usize| {
        // idx enumerates (a, b), a < b, row by row.
        let mut a = 0;
        while idx >= m - 1 - a {
            idx -= m - 1 - a;
            a += 1;
        }
        (a, a + 1 + idx)
    };
    let chosen: Vec<usize> = match mode {
        SampleMode::AllGridPairs => (0..total_pairs).collect(),
        SampleMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = sample(&mut rng, total_pairs, count.min(total_pairs)).into_vec();
            idx.sort_unstable();
            idx
        }
    };
    let prefs = chosen
        .into_iter()
        .map(|k| {
            let (a, b) = pair_at(k);
            let diff = scores[a] - scores[b];
            if diff.abs() > deltas.learning_set {
                let (better, worse) = if diff > 0.0 { (a, b) } else { (b, a) };
                Preference { better, worse, kind: PreferenceKind::Strict }
            } else {
                Preference { better: a, worse: b, kind: PreferenceKind::Indifferent }
            }
        })
        .collect();
    (points, prefs)
}

/// Preferences the model expresses over its grid, with profiles already
/// mapped through the model's value functions.
pub fn sample_preferences(model: &GroundTruthModel, mode: SampleMode) -> PreferenceDataset {
    let deltas = Deltas::default();
    let (points, preferences) = sample_pairs(model, mode, deltas);
    let mut data = PreferenceDataset::new(model.n());
    data.alternatives = points.iter().map(|p| model.value_functions.map(p)).collect();
    data.preferences = preferences;
    data.deltas = deltas;
    data
}

/// Same statements with alternatives given by level labels.
pub fn sample_categorical(model: &GroundTruthModel, mode: SampleMode) -> CategoricalDataset {
    let deltas = Deltas::default();
    let (points, preferences) = sample_pairs(model, mode, deltas);
    let vf = &model.value_functions;
    CategoricalDataset {
        n: model.n(),
        levels: vf.criteria().iter().map(|c| c.levels.clone()).collect(),
        alternatives: points
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &l)| vf.criterion(i).levels[l].clone()).collect())
            .collect(),
        preferences,
        deltas,
    }
}

/// Preference data whose alternatives are per-criterion level labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoricalDataset {
    pub n: usize,
    /// Level labels per criterion, worst to best.
    pub levels: Vec<Vec<String>>,
    pub alternatives: Vec<Vec<String>>,
    #[serde(default)]
    pub preferences: Vec<Preference>,
    #[serde(default)]
    pub deltas: Deltas,
}

impl CategoricalDataset {
    /// Alternatives as level indices; errors on unknown labels.
    pub fn resolve(&self) -> Result<Vec<Vec<usize>>> {
        if self.levels.len() != self.n {
            return Err(Error::domain(format!(
                "levels: expected a level order for each of {} criteria, got {}",
                self.n,
                self.levels.len()
            )));
        }
        if let Some(i) = self.levels.iter().position(|l| l.is_empty()) {
            return Err(Error::domain(format!("levels[{i}]: missing level order")));
        }
        let na = self.alternatives.len();
        for (k, p) in self.preferences.iter().enumerate() {
            if p.better >= na || p.worse >= na {
                return Err(Error::malformed(format!("preferences[{k}]: alternative index out of range")));
            }
        }
        self.deltas.validate()?;
        self.alternatives
            .iter()
            .enumerate()
            .map(|(k, alt)| {
                if alt.len() != self.n {
                    return Err(Error::malformed(format!(
                        "alternatives[{k}]: expected {} labels, got {}",
                        self.n,
                        alt.len()
                    )));
                }
                alt.iter()
                    .enumerate()
                    .map(|(i, label)| {
                        self.levels[i].iter().position(|l| l == label).ok_or_else(|| {
                            Error::malformed(format!("alternatives[{k}]: unknown level {label:?} for criterion {i}"))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Maps alternatives through `vf` into a numeric dataset.
    pub fn map(&self, vf: &ValueFunctionSet) -> Result<PreferenceDataset> {
        let points = self.resolve()?;
        let mut data = PreferenceDataset::new(self.n);
        data.alternatives = points.iter().map(|p| vf.map(p)).collect();
        data.preferences = self.preferences.clone();
        data.deltas = self.deltas;
        Ok(data)
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    /// Value functions on this dataset's levels.
    pub fn value_functions(&self, values: Vec<Vec<f64>>) -> Result<ValueFunctionSet> {
        ValueFunctionSet::new(
            self.levels
                .iter()
                .cloned()
                .zip(values)
                .map(|(levels, values)| CriterionValues { levels, values })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: CategoricalDataset = serde_json::from_str(text)?;
        d.resolve()?;
        Ok(d)
    }
}
