//! Identifiability runs: how tightly complete preference data pins down a
//! capacity when the value functions are known.

use serde::Serialize;

use crate::axioms::interaction_groups_mobius;
use crate::indices::interaction_index;
use crate::learn::{build_constraints, identify_program, probe_functional, IdentificationConfig, LearnStatus, Objective};
use crate::subset::{self, Mask};
use crate::Result;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::synth::{random_value_functions, sample_preferences, synth_model, GroundTruthModel, InteractionSpec, SampleMode};

/// Möbius coefficients at or below this count as absent when grouping.
pub const GROUP_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentifiabilitySpec {
    pub n: usize,
    pub levels: Vec<usize>,
    pub interaction: InteractionSpec,
    pub mode: SampleMode,
    pub seed: u64,
}

impl IdentifiabilitySpec {
    /// Complete data on an `n`-criterion grid with `levels` levels each.
    pub fn complete(n: usize, levels: usize, interaction: InteractionSpec, seed: u64) -> Self {
        IdentifiabilitySpec {
            n,
            levels: vec![levels; n],
            interaction,
            mode: SampleMode::AllGridPairs,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientInterval {
    pub set: String,
    #[serde(skip)]
    pub mask: Mask,
    pub truth: f64,
    pub lo: f64,
    pub hi: f64,
}

impl CoefficientInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentifiabilityReport {
    pub spec: String,
    pub n: usize,
    pub levels: Vec<usize>,
    pub seed: u64,
    pub statements: usize,
    pub exact: bool,
    /// One interval per `ν(A)`, `A ∉ {∅, N}`, in mask order.
    pub intervals: Vec<CoefficientInterval>,
    /// Widest interval among two-element sets.
    pub max_pair_width: f64,
    pub max_width: f64,
    pub truth_groups: Vec<Vec<usize>>,
    /// Groups of the capacity found by plain identification.
    pub learned_groups: Vec<Vec<usize>>,
    /// Largest `|I(i, j)|` over pairs split by the truth groups, over every
    /// probed vertex; `None` when the truth has a single group.
    pub max_cross_group_interaction: Option<f64>,
    pub probed_vertices: usize,
}

/// The experiment's truth: the capacity of [`synth_model`] for the spec and
/// seed, with value functions drawn from the seed alone, so runs that share
/// a seed share their grid whatever the spec.
pub fn experiment_model(spec: &IdentifiabilitySpec) -> Result<GroundTruthModel> {
    let capacity = synth_model(spec.n, &spec.levels, spec.seed, &spec.interaction)?.capacity;
    let values = random_value_functions(&spec.levels, &mut ChaCha8Rng::seed_from_u64(spec.seed))?;
    GroundTruthModel::new(capacity, values)
}

/// Synthesizes the truth, samples its preferences, identifies a capacity
/// and probes the feasible interval of every coefficient.
///
/// For grouped truths the program is restricted to Möbius support inside
/// the truth's blocks.
pub fn identifiability_experiment(spec: &IdentifiabilitySpec) -> Result<IdentifiabilityReport> {
    let model = experiment_model(spec)?;
    let partition = match &spec.interaction {
        InteractionSpec::Groups(p) => Some(p.clone()),
        _ => None,
    };
    let mut report = probe_model(&model, spec.mode, partition)?;
    report.spec = spec_name(&spec.interaction);
    report.seed = spec.seed;
    Ok(report)
}

/// The identification and probing stage for a given truth.
pub fn probe_model(
    model: &GroundTruthModel,
    mode: SampleMode,
    support_partition: Option<Vec<Vec<usize>>>,
) -> Result<IdentifiabilityReport> {
    let n = model.n();
    let data = sample_preferences(model, mode);
    let truth_groups = interaction_groups_mobius(&model.capacity.mobius()?, GROUP_TOL);
    let cfg = IdentificationConfig {
        support_partition,
        ..Default::default()
    };
    let prog = build_constraints(&data, &cfg)?;
    let learned = identify_program(&prog, Objective::Feasibility)?;
    let learned_groups = interaction_groups_mobius(&learned.capacity.mobius()?, GROUP_TOL);

    let mut group_of = vec![0; n];
    for (g, members) in truth_groups.iter().enumerate() {
        for &i in members {
            group_of[i] = g;
        }
    }
    let cross: Vec<Mask> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| group_of[i] != group_of[j])
        .map(|(i, j)| (1 << i) | (1 << j))
        .collect();

    let full = subset::full(n);
    let mut intervals = Vec::new();
    let mut worst_cross: f64 = 0.0;
    let mut probed = 0;
    for set in 1..full {
        let (lo, hi) = probe_functional(&prog, &vec![(set, 1.0)])?;
        for end in [&lo, &hi] {
            probed += 1;
            for &pair in &cross {
                worst_cross = worst_cross.max(interaction_index(&end.capacity, pair)?.abs());
            }
        }
        intervals.push(CoefficientInterval {
            set: subset::render(set),
            mask: set,
            truth: model.capacity.get(set),
            lo: lo.value,
            hi: hi.value,
        });
    }
    let widest = |pred: &dyn Fn(Mask) -> bool| {
        intervals
            .iter()
            .filter(|c| pred(c.mask))
            .map(CoefficientInterval::width)
            .fold(0.0, f64::max)
    };
    let max_pair_width = widest(&|m| subset::card(m) == 2);
    let max_width = widest(&|_| true);
    Ok(IdentifiabilityReport {
        spec: "model".into(),
        n,
        levels: model.levels(),
        seed: 0,
        statements: data.preferences.len(),
        exact: learned.status == LearnStatus::FeasibleExact,
        intervals,
        max_pair_width,
        max_width,
        truth_groups,
        learned_groups,
        max_cross_group_interaction: (!cross.is_empty()).then_some(worst_cross),
        probed_vertices: probed,
    })
}

fn spec_name(spec: &InteractionSpec) -> String {
    match spec {
        InteractionSpec::Additive => "additive".into(),
        InteractionSpec::Full => "full".into(),
        InteractionSpec::Groups(p) => {
            let blocks: Vec<String> = p
                .iter()
                .map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            format!("groups={}", blocks.join(";"))
        }
    }
}

impl IdentifiabilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Human-readable summary, one interval per line.
    pub fn render(&self) -> String {
        let mut out = format!(
            "spec {} n={} levels={:?} seed={} statements={} exact={}\n",
            self.spec, self.n, self.levels, self.seed, self.statements, self.exact
        );
        for c in &self.intervals {
            out.push_str(&format!(
                "nu{:<10} truth {:.6}  [{:.6}, {:.6}]  width {:.6}\n",
                c.set,
                c.truth,
                c.lo,
                c.hi,
                c.width()
            ));
        }
        out.push_str(&format!("max pair width {:.6}\nmax width {:.6}\n", self.max_pair_width, self.max_width));
        out.push_str(&format!("truth groups {:?}\nlearned groups {:?}\n", self.truth_groups, self.learned_groups));
        if let Some(x) = self.max_cross_group_interaction {
            out.push_str(&format!("max cross-group |I| {x:.3e} over {} vertices\n", self.probed_vertices));
        }
        out
    }
}
