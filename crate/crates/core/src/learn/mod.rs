//! Capacity identification from preference data.

pub mod constraints;
pub mod dataset;
pub mod identify;

pub use constraints::{build_constraints, CapacityProgram, IdentificationConfig, Objective, Parametrization, RowOrigin};
pub use dataset::{
    Deltas, ImportanceKind, InteractionKind, InteractionStatement, Preference, PreferenceDataset, PreferenceKind,
    ShapleyComparison,
};
pub use identify::{check_fit, check_statements, identify, identify_program, probe_functional, FitReport, FitViolation, LearnOutcome, LearnStatus, ProbeEnd};
