//! Subcommand arguments and their implementations.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use choquet_core::axioms::{
    a10_probe_values, check_convexity_relation, check_lattice_axiom, check_ordinal_axiom, interaction_groups_mobius,
    interaction_groups_scan, triple_cancellation_violations, FiniteRelation, OrdinalKind, ViolationWitness,
};
use choquet_core::choquet::choquet;
use choquet_core::indices::{index_report, interaction_index};
use choquet_core::joint::{
    identifiability_experiment, learn_joint, sample_categorical, sample_preferences, synth_model, IdentifiabilitySpec,
    InteractionSpec, JointConfig, SampleMode, ValueFunctionSet,
};
use choquet_core::lattice::{extract_dnf, Form};
use choquet_core::learn::{check_fit, check_statements, identify, IdentificationConfig, LearnStatus, Objective};
use choquet_core::subset::{self, Mask};
use choquet_core::Capacity;

use crate::{io, Cli, Failure, Format, Global, Status};

type Outcome = Result<Status, Failure>;

/// Text lines or machine records on stdout.
struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, text: impl FnOnce() -> String, record: impl FnOnce() -> Value) {
        match self.format {
            Format::Text => println!("{}", text()),
            Format::Machine => println!("{}", record()),
        }
    }
}

fn parse_list<T: std::str::FromStr>(what: &str, text: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{what}: cannot parse {s:?} in {text:?}")))
        })
        .collect()
}

/// `0,1;2` as a family of sets.
fn parse_family(what: &str, text: &str) -> Result<Vec<Mask>, Failure> {
    text.split(';')
        .map(|blk| parse_list::<usize>(what, blk).map(|m| subset::from_members(&m)))
        .collect()
}

fn members(mask: Mask) -> Vec<usize> {
    subset::members(mask).collect()
}

fn capacity_values(cap: &Capacity) -> Vec<f64> {
    cap.values().to_vec()
}

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    if !(g.tolerance.is_finite() && g.tolerance >= 0.0) {
        return Err(Failure::usage(format!("--tolerance: expected a nonnegative number, got {}", g.tolerance)));
    }
    let out = Out { format: g.format };
    use crate::Command::*;
    match &cli.command {
        Eval(a) => eval(a, &out),
        Indices(a) => indices(a, &out),
        Check(a) => check(a, g, &out),
        Lattice(a) => lattice(a, &out),
        Learn(a) => learn(a, &out),
        LearnJoint(a) => learn_joint_cmd(a, g, &out),
        Synth(a) => synth(a, g, &out),
        CheckAxiom(a) => check_axiom(a, &out),
        Groups(a) => groups(a, g, &out),
        Experiment(e) => experiment(e, g, &out),
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    capacity: PathBuf,
    /// Comma-separated values, one per criterion; repeatable.
    #[arg(long, required = true)]
    profile: Vec<String>,
}

fn eval(a: &EvalArgs, out: &Out) -> Outcome {
    let cap = io::capacity(&a.capacity)?;
    cap.ensure_valid()?;
    for text in &a.profile {
        let p: Vec<f64> = parse_list("--profile", text)?;
        let v = choquet(&cap, &p)?;
        out.emit(|| format!("C({text}) = {v}"), || json!({"profile": p, "value": v}));
    }
    Ok(Status::Ok)
}

#[derive(Args, Debug)]
pub struct IndicesArgs {
    #[arg(long)]
    capacity: PathBuf,
    /// Also report the interaction index of this set, e.g. `0,1,2`.
    #[arg(long)]
    set: Option<String>,
}

fn indices(a: &IndicesArgs, out: &Out) -> Outcome {
    let cap = io::capacity(&a.capacity)?;
    let report = index_report(&cap)?;
    out.emit(
        || {
            let mut s = String::new();
            for (i, phi) in report.shapley.iter().enumerate() {
                s += &format!("shapley {i}: {phi}\n");
            }
            for ((i, j), v) in &report.pairwise_interactions {
                s += &format!("interaction {i},{j}: {v}\n");
            }
            s.trim_end().to_string()
        },
        || {
            let pairs: Vec<Value> = report
                .pairwise_interactions
                .iter()
                .map(|((i, j), v)| json!({"pair": [i, j], "value": v}))
                .collect();
            json!({"shapley": report.shapley, "interactions": pairs})
        },
    );
    if let Some(text) = &a.set {
        let set: Vec<usize> = parse_list("--set", text)?;
        if set.iter().any(|&i| i >= cap.n()) {
            return Err(Failure::usage(format!("--set: criterion out of range for n = {}", cap.n())));
        }
        let v = interaction_index(&cap, subset::from_members(&set))?;
        out.emit(|| format!("interaction {text}: {v}"), || json!({"set": set, "interaction": v}));
    }
    Ok(Status::Ok)
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    capacity: PathBuf,
    /// Preference dataset to check the capacity against.
    #[arg(long)]
    data: Option<PathBuf>,
}

fn check(a: &CheckArgs, g: &Global, out: &Out) -> Outcome {
    let cap = io::capacity(&a.capacity)?;
    let violations = cap.validate();
    for v in &violations {
        out.emit(|| v.to_string(), || json!({"violation": v.to_string()}));
    }
    if !violations.is_empty() {
        return Ok(Status::Found);
    }
    let m = cap.mobius()?;
    let order = (1..=cap.n()).find(|&k| m.mass_above(k) <= g.tolerance).unwrap_or(cap.n());
    let (zero_one, convex) = (cap.is_01(), cap.is_convex()?);
    out.emit(
        || format!("valid\nzero-one {zero_one}\nconvex {convex}\nk-additive {order}"),
        || json!({"valid": true, "zero_one": zero_one, "convex": convex, "k_additive": order}),
    );
    let Some(path) = &a.data else {
        return Ok(Status::Ok);
    };
    let data = io::preferences(path)?;
    let fit = check_fit(&cap, &data)?;
    let statements = check_statements(&cap, &data, g.tolerance.max(1e-12))?;
    for v in &fit.violations {
        let p = &data.preferences[v.preference];
        out.emit(
            || format!("preference {}: {} vs {} difference {}", v.preference, p.better, p.worse, v.difference),
            || json!({"preference": v.preference, "difference": v.difference}),
        );
    }
    for s in &statements {
        out.emit(|| s.clone(), || json!({"statement": s}));
    }
    out.emit(
        || format!("violations {}", fit.count() + statements.len()),
        || json!({"violations": fit.count() + statements.len()}),
    );
    Ok(if fit.count() + statements.len() == 0 { Status::Ok } else { Status::Found })
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormArg {
    Dnf,
    Cnf,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[arg(long)]
    capacity: PathBuf,
    #[arg(long, value_enum, default_value_t = FormArg::Dnf)]
    form: FormArg,
}

fn lattice(a: &LatticeArgs, out: &Out) -> Outcome {
    let cap = io::capacity(&a.capacity)?;
    let poly = extract_dnf(&cap)?;
    let (form, family, name) = match a.form {
        FormArg::Dnf => (Form::Dnf, poly.dnf_family(), "dnf"),
        FormArg::Cnf => (Form::Cnf, poly.cnf_family(), "cnf"),
    };
    let text = poly.render(form);
    let family: Vec<Vec<usize>> = family.iter().map(|&m| members(m)).collect();
    out.emit(|| text.clone(), || json!({"form": name, "polynomial": text, "family": family}));
    Ok(Status::Ok)
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ObjectiveArg {
    Feasibility,
    MinSlack,
    MaxMin,
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    k_additive: Option<usize>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Feasibility)]
    objective: ObjectiveArg,
    /// Where to write the learned capacity.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn learn(a: &LearnArgs, out: &Out) -> Outcome {
    let data = io::preferences(&a.data)?;
    let cfg = IdentificationConfig {
        k_additive: a.k_additive,
        objective: match a.objective {
            ObjectiveArg::Feasibility => Objective::Feasibility,
            ObjectiveArg::MinSlack => Objective::MinTotalSlack,
            ObjectiveArg::MaxMin => Objective::MaxMinSlack,
        },
        ..Default::default()
    };
    let res = identify(&data, &cfg)?;
    let exact = res.status == LearnStatus::FeasibleExact;
    for s in &res.slacks {
        out.emit(
            || format!("slack {:?}: {}", s.origin, s.slack),
            || json!({"row": format!("{:?}", s.origin), "slack": s.slack}),
        );
    }
    out.emit(
        || {
            let mut t = format!("status {:?}\ntotal slack {}", res.status, res.total_slack);
            if let Some(m) = res.min_margin {
                t += &format!("\nmargin {m}");
            }
            for (i, phi) in res.index_report.shapley.iter().enumerate() {
                t += &format!("\nshapley {i}: {phi}");
            }
            t
        },
        || {
            json!({
                "status": if exact { "feasible_exact" } else { "infeasible_min_slack" },
                "total_slack": res.total_slack,
                "min_margin": res.min_margin,
                "capacity": capacity_values(&res.capacity),
                "shapley": res.index_report.shapley,
            })
        },
    );
    if let Some(path) = &a.out {
        io::write(path, &res.capacity.to_json())?;
    }
    Ok(if exact { Status::Ok } else { Status::Found })
}

#[derive(Args, Debug)]
pub struct LearnJointArgs {
    /// Categorical dataset.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 50)]
    max_iterations: usize,
    #[arg(long)]
    out_capacity: Option<PathBuf>,
    #[arg(long)]
    out_values: Option<PathBuf>,
}

fn learn_joint_cmd(a: &LearnJointArgs, g: &Global, out: &Out) -> Outcome {
    let data = io::categorical(&a.data)?;
    let cfg = JointConfig {
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        seed: g.seed,
        ..Default::default()
    };
    let r = learn_joint(&data, &cfg)?;
    out.emit(
        || {
            format!(
                "violations {}\ntotal slack {}\niterations {}\nrestarts {} (best {})\nhistory {:?}",
                r.violations, r.total_slack, r.iterations, r.restarts_used, r.best_restart, r.history
            )
        },
        || {
            json!({
                "violations": r.violations,
                "total_slack": r.total_slack,
                "iterations": r.iterations,
                "restarts_used": r.restarts_used,
                "best_restart": r.best_restart,
                "history": r.history,
                "capacity": capacity_values(&r.capacity),
            })
        },
    );
    if let Some(path) = &a.out_capacity {
        io::write(path, &r.capacity.to_json())?;
    }
    if let Some(path) = &a.out_values {
        io::write(path, &r.value_functions.to_json())?;
    }
    Ok(if r.violations == 0 { Status::Ok } else { Status::Found })
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long)]
    n: usize,
    /// Levels per criterion: one count for all, or one per criterion.
    #[arg(long, default_value = "4")]
    levels: String,
    /// `additive`, `full` or `groups=0,1;2`.
    #[arg(long, default_value = "full")]
    spec: String,
    /// Model file (capacity and value functions).
    #[arg(long)]
    out: PathBuf,
    /// Also write the categorical preference dataset here.
    #[arg(long)]
    categorical: Option<PathBuf>,
    /// Also write the value-mapped preference dataset here.
    #[arg(long)]
    preferences: Option<PathBuf>,
    /// Sample this many random pairs instead of all grid pairs.
    #[arg(long)]
    pairs: Option<usize>,
}

fn levels_for(n: usize, text: &str) -> Result<Vec<usize>, Failure> {
    let levels: Vec<usize> = parse_list("--levels", text)?;
    match levels.len() {
        1 => Ok(vec![levels[0]; n]),
        k if k == n => Ok(levels),
        k => Err(Failure::usage(format!("--levels: expected 1 or {n} counts, got {k}"))),
    }
}

fn sample_mode(pairs: Option<usize>, seed: u64) -> SampleMode {
    match pairs {
        Some(count) => SampleMode::Random { count, seed },
        None => SampleMode::AllGridPairs,
    }
}

fn synth(a: &SynthArgs, g: &Global, out: &Out) -> Outcome {
    let levels = levels_for(a.n, &a.levels)?;
    let spec = InteractionSpec::parse(&a.spec)?;
    let model = synth_model(a.n, &levels, g.seed, &spec)?;
    io::write(&a.out, &model.to_json())?;
    let mode = sample_mode(a.pairs, g.seed);
    let mut statements = None;
    if let Some(path) = &a.categorical {
        let data = sample_categorical(&model, mode);
        statements = Some(data.preferences.len());
        io::write(path, &data.to_json())?;
    }
    if let Some(path) = &a.preferences {
        let data = sample_preferences(&model, mode);
        statements = Some(data.preferences.len());
        io::write(path, &data.to_json())?;
    }
    out.emit(
        || {
            let mut t = format!("model n={} levels={levels:?} spec={} seed={}", a.n, a.spec, g.seed);
            if let Some(s) = statements {
                t += &format!("\nstatements {s}");
            }
            t
        },
        || json!({"n": a.n, "levels": levels, "spec": a.spec, "seed": g.seed, "statements": statements}),
    );
    Ok(Status::Ok)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AxiomArg {
    Max,
    Min,
    Os,
    Lattice,
    A10,
    Tc,
}

#[derive(Args, Debug)]
pub struct CheckAxiomArgs {
    /// Capacity (or model) file.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Value functions; their values form the grid.
    #[arg(long)]
    values: Option<PathBuf>,
    /// Per-criterion value levels, overriding `--values`.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// A bare relation (grid plus comparison matrix) instead of a model.
    #[arg(long, conflicts_with_all = ["model", "values", "grid"])]
    relation: Option<PathBuf>,
    #[arg(long, value_enum)]
    axiom: AxiomArg,
    /// Criteria pair `i,j`; required for `tc`, selects the probe grid for `a10`.
    #[arg(long)]
    pair: Option<String>,
    /// First family of the lattice condition, e.g. `0,1;2`.
    #[arg(long)]
    cnf: Option<String>,
    /// Second family of the lattice condition.
    #[arg(long)]
    dnf: Option<String>,
}

fn parse_pair(text: &str) -> Result<(usize, usize), Failure> {
    match parse_list::<usize>("--pair", text)?.as_slice() {
        &[i, j] => Ok((i, j)),
        _ => Err(Failure::usage(format!("--pair: expected i,j, got {text:?}"))),
    }
}

/// The relation to scan: a bare relation file, or a capacity evaluated on
/// a value grid.
fn build_relation(a: &CheckAxiomArgs, pair: Option<(usize, usize)>) -> Result<(FiniteRelation, Option<Capacity>), Failure> {
    if let Some(path) = &a.relation {
        let file = io::relation(path)?;
        return Ok((FiniteRelation::from_matrix(file.grid, &file.matrix)?, None));
    }
    let path = a.model.as_ref().ok_or_else(|| Failure::usage("--model or --relation is required"))?;
    let cap = io::capacity(path)?;
    cap.ensure_valid()?;
    let grid: Vec<Vec<f64>> = if let Some(p) = &a.grid {
        io::grid(p)?
    } else if let Some(p) = &a.values {
        grid_of(&io::values(p)?)
    } else if let (AxiomArg::A10, Some((i, j))) = (a.axiom, pair) {
        grid_of(&a10_probe_values(&cap, i, j)?)
    } else {
        return Err(Failure::usage("--values or --grid is required"));
    };
    if grid.len() != cap.n() {
        return Err(Failure::usage(format!("grid has {} criteria, capacity {}", grid.len(), cap.n())));
    }
    let rel = FiniteRelation::from_fn(grid, |p| choquet(&cap, p).expect("sizes checked"))?;
    Ok((rel, Some(cap)))
}

fn grid_of(vf: &ValueFunctionSet) -> Vec<Vec<f64>> {
    vf.criteria().iter().map(|c| c.values.clone()).collect()
}

fn check_axiom(a: &CheckAxiomArgs, out: &Out) -> Outcome {
    let pair = a.pair.as_deref().map(parse_pair).transpose()?;
    let (rel, cap) = build_relation(a, pair)?;
    let witnesses: Vec<ViolationWitness> = match a.axiom {
        AxiomArg::Max => check_ordinal_axiom(&rel, OrdinalKind::Max)?,
        AxiomArg::Min => check_ordinal_axiom(&rel, OrdinalKind::Min)?,
        AxiomArg::Os => check_ordinal_axiom(&rel, OrdinalKind::OrderStatistic)?,
        AxiomArg::Lattice => {
            let (cnf, dnf) = match (&a.cnf, &a.dnf, &cap) {
                (Some(c), Some(d), _) => (parse_family("--cnf", c)?, parse_family("--dnf", d)?),
                (None, None, Some(cap)) => {
                    let poly = extract_dnf(cap)?;
                    (poly.cnf_family().to_vec(), poly.dnf_family().to_vec())
                }
                _ => return Err(Failure::usage("lattice needs both --cnf and --dnf, or a 0-1 capacity")),
            };
            check_lattice_axiom(&rel, &cnf, &dnf)?
        }
        AxiomArg::A10 => {
            let all = check_convexity_relation(&rel)?;
            match pair {
                Some((i, j)) => all.into_iter().filter(|w| w.criteria == [i, j]).collect(),
                None => all,
            }
        }
        AxiomArg::Tc => {
            let (i, j) = pair.ok_or_else(|| Failure::usage("tc needs --pair i,j"))?;
            triple_cancellation_violations(&rel, i, j)?
        }
    };
    for w in &witnesses {
        out.emit(
            || w.render(&rel),
            || {
                let points: Vec<Vec<usize>> = w.points.iter().map(|&p| rel.point(p)).collect();
                json!({"axiom": w.axiom.to_string(), "criteria": w.criteria, "points": points})
            },
        );
    }
    if witnesses.is_empty() {
        out.emit(|| "OK".into(), || json!({"axiom": format!("{:?}", a.axiom).to_lowercase(), "witnesses": 0}));
        Ok(Status::Ok)
    } else {
        out.emit(
            || format!("{} witnesses", witnesses.len()),
            || json!({"axiom": format!("{:?}", a.axiom).to_lowercase(), "witnesses": witnesses.len()}),
        );
        Ok(Status::Found)
    }
}

#[derive(Args, Debug)]
pub struct GroupsArgs {
    /// Capacity (or model) file.
    #[arg(long)]
    model: PathBuf,
    /// Scan the relation the model induces on these value functions
    /// instead of reading the Möbius support.
    #[arg(long)]
    values: Option<PathBuf>,
}

fn groups(a: &GroupsArgs, g: &Global, out: &Out) -> Outcome {
    let cap = io::capacity(&a.model)?;
    cap.ensure_valid()?;
    let (route, groups) = match &a.values {
        None => ("mobius", interaction_groups_mobius(&cap.mobius()?, g.tolerance)),
        Some(p) => {
            let rel = FiniteRelation::from_model(&cap, &io::values(p)?)?;
            ("scan", interaction_groups_scan(&rel)?)
        }
    };
    out.emit(
        || {
            let blocks: Vec<String> = groups
                .iter()
                .map(|b| format!("{{{}}}", b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            blocks.join(" ")
        },
        || json!({"route": route, "groups": groups}),
    );
    Ok(Status::Ok)
}

#[derive(Subcommand, Debug)]
pub enum Experiment {
    /// Interval widths of every capacity coefficient under complete data.
    Identifiability(IdentifiabilityArgs),
}

#[derive(Args, Debug)]
pub struct IdentifiabilityArgs {
    #[arg(long, default_value = "additive")]
    spec: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value = "3")]
    levels: String,
    /// Sample this many random pairs instead of all grid pairs.
    #[arg(long)]
    pairs: Option<usize>,
    /// Full JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn experiment(e: &Experiment, g: &Global, out: &Out) -> Outcome {
    let Experiment::Identifiability(a) = e;
    let spec = IdentifiabilitySpec {
        n: a.n,
        levels: levels_for(a.n, &a.levels)?,
        interaction: InteractionSpec::parse(&a.spec)?,
        mode: sample_mode(a.pairs, g.seed),
        seed: g.seed,
    };
    let r = identifiability_experiment(&spec)?;
    out.emit(
        || r.render().trim_end().to_string(),
        || {
            json!({
                "spec": r.spec,
                "max_pair_width": r.max_pair_width,
                "max_width": r.max_width,
                "truth_groups": r.truth_groups,
                "learned_groups": r.learned_groups,
                "max_cross_group_interaction": r.max_cross_group_interaction,
            })
        },
    );
    if let Some(path) = &a.report {
        io::write(path, &r.to_json())?;
    }
    Ok(Status::Ok)
}
