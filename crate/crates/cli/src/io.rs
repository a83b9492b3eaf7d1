//! File reading and writing with one-line diagnostics.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use choquet_core::axioms::Comparison;
use choquet_core::joint::{CategoricalDataset, GroundTruthModel, ValueFunctionSet};
use choquet_core::learn::PreferenceDataset;
use choquet_core::{Capacity, Error};

use crate::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn parse<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, Error>) -> Result<T, Failure> {
    let text = read(path)?;
    f(&text).map_err(|e| {
        let mut fail = Failure::from(e);
        fail.message = format!("{}: {}", path.display(), fail.message);
        fail
    })
}

/// A capacity file, or the capacity inside a model file.
pub fn capacity(path: &Path) -> Result<Capacity, Failure> {
    parse(path, |text| {
        Capacity::from_json(text).or_else(|first| GroundTruthModel::from_json(text).map(|m| m.capacity).map_err(|_| first))
    })
}

pub fn values(path: &Path) -> Result<ValueFunctionSet, Failure> {
    parse(path, |text| {
        ValueFunctionSet::from_json(text)
            .or_else(|first| GroundTruthModel::from_json(text).map(|m| m.value_functions).map_err(|_| first))
    })
}

pub fn preferences(path: &Path) -> Result<PreferenceDataset, Failure> {
    parse(path, PreferenceDataset::from_json)
}

pub fn categorical(path: &Path) -> Result<CategoricalDataset, Failure> {
    parse(path, CategoricalDataset::from_json)
}

/// Per-criterion value levels: `[[0, 0.5, 1], [0, 1]]`.
pub fn grid(path: &Path) -> Result<Vec<Vec<f64>>, Failure> {
    parse(path, |text| Ok(serde_json::from_str(text)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub grid: Vec<Vec<f64>>,
    /// Row `a`, column `b`: how point `a` compares with point `b`.
    pub matrix: Vec<Vec<Comparison>>,
}

pub fn relation(path: &Path) -> Result<RelationFile, Failure> {
    parse(path, |text| Ok(serde_json::from_str(text)?))
}

pub fn write(path: &Path, text: &str) -> Result<(), Failure> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    fs::write(path, body).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}
