//! Joint learning of a capacity and per-criterion value functions.

pub mod alternating;
pub mod experiment;
pub mod synth;
pub mod values;

pub use alternating::{learn_joint, JointConfig, JointLearnReport};
pub use experiment::{experiment_model, identifiability_experiment, probe_model, CoefficientInterval, IdentifiabilityReport, IdentifiabilitySpec};
pub use synth::{
    grid_points, sample_categorical, sample_preferences, synth_model, CategoricalDataset, GroundTruthModel,
    InteractionSpec, SampleMode,
};
pub use values::{CriterionValues, ValueFunctionFile, ValueFunctionSet};
