use std::collections::BTreeMap;
use std::path::PathBuf;

use qsignal_core::nosignal::SweepDims;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::registry::{self, Entry, ParamKind, ParamSpec};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Fully resolved configuration: registry defaults, then the JSON
/// document, then command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub trials: u64,
    pub seed: Option<u64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

/// Values given on the command line. Parameter values are raw strings and
/// are typed against the registry during resolution.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub params: BTreeMap<String, String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

const DOCUMENT_KEYS: &[&str] = &[
    "experiment",
    "params",
    "trials",
    "seed",
    "output_format",
    "output_path",
];

pub fn parse_dims(s: &str) -> Option<SweepDims> {
    let num = |t: &str| t.trim().parse::<usize>().ok().filter(|&d| d >= 1);
    if let Some((a, b)) = s.split_once(['x', 'X']) {
        return Some(SweepDims::Fixed(num(a)?, num(b)?));
    }
    if let Some((lo, hi)) = s.split_once('-') {
        let (lo, hi) = (num(lo)?, num(hi)?);
        return (lo <= hi).then_some(SweepDims::Range(lo, hi));
    }
    num(s).map(|d| SweepDims::Fixed(d, d))
}

/// Type check of one parameter value against its schema entry.
pub fn check_value(spec: &ParamSpec, v: &Value) -> Result<(), String> {
    let ok = match spec.kind {
        ParamKind::Integer => v.as_u64().is_some(),
        ParamKind::Real => v.as_f64().is_some_and(f64::is_finite),
        ParamKind::Bool => v.is_boolean(),
        ParamKind::Choice => v.as_str().is_some_and(|s| spec.choices.contains(&s)),
        ParamKind::Dims => v.as_str().and_then(parse_dims).is_some(),
    };
    if ok {
        return Ok(());
    }
    let want = match spec.kind {
        ParamKind::Integer => "a nonnegative integer".to_string(),
        ParamKind::Real => "a finite number".to_string(),
        ParamKind::Bool => "true or false".to_string(),
        ParamKind::Choice => format!("one of {}", spec.choices.join(", ")),
        ParamKind::Dims => "AxB or lo-hi".to_string(),
    };
    Err(format!("{}: expected {want}, got {v}", spec.key))
}

fn parse_flag(spec: &ParamSpec, raw: &str) -> Result<Value, String> {
    let v = match spec.kind {
        ParamKind::Integer => raw.parse::<u64>().map(Value::from).ok(),
        ParamKind::Real => raw
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Value::from),
        ParamKind::Bool => raw.parse::<bool>().map(Value::from).ok(),
        ParamKind::Choice | ParamKind::Dims => Some(Value::from(raw)),
    };
    let v = v.unwrap_or_else(|| Value::from(raw));
    check_value(spec, &v).map(|_| v)
}

fn as_u64(doc_key: &str, v: &Value, problems: &mut Vec<String>) -> Option<u64> {
    let out = v.as_u64();
    if out.is_none() {
        problems.push(format!(
            "{doc_key}: expected a nonnegative integer, got {v}"
        ));
    }
    out
}

/// Merges defaults, an optional JSON document and flags. Every problem
/// found is reported, not just the first.
pub fn resolve(
    experiment: &str,
    document: Option<&Value>,
    flags: &Overrides,
) -> Result<ExperimentConfig, CliError> {
    let entry: &Entry = registry::lookup(experiment)
        .ok_or_else(|| CliError::Usage(format!("unknown experiment '{experiment}'")))?;
    let mut problems = Vec::new();
    let mut params: BTreeMap<String, Value> = entry
        .params
        .iter()
        .map(|p| {
            (
                p.key.to_string(),
                serde_json::from_str(p.default).expect("registry default"),
            )
        })
        .collect();
    let mut trials = entry.default_trials;
    let mut seed = None;
    let mut output_format = OutputFormat::default();
    let mut output_path = None;

    if let Some(doc) = document {
        match doc.as_object() {
            None => problems.push("config document must be a JSON object".into()),
            Some(obj) => {
                for k in obj.keys().filter(|k| !DOCUMENT_KEYS.contains(&k.as_str())) {
                    problems.push(format!("{k}: unknown top-level key"));
                }
                if let Some(name) = obj.get("experiment") {
                    if name.as_str() != Some(experiment) {
                        problems.push(format!(
                            "experiment: document names {name}, command line names '{experiment}'"
                        ));
                    }
                }
                match obj.get("params") {
                    None => {}
                    Some(Value::Object(map)) => {
                        for (k, v) in map {
                            match entry.param(k) {
                                None => problems
                                    .push(format!("params.{k}: not a parameter of {experiment}")),
                                Some(spec) => match check_value(spec, v) {
                                    Ok(()) => {
                                        params.insert(k.clone(), v.clone());
                                    }
                                    Err(e) => problems.push(format!("params.{e}")),
                                },
                            }
                        }
                    }
                    Some(other) => {
                        problems.push(format!("params: expected an object, got {other}"))
                    }
                }
                if let Some(v) = obj.get("trials") {
                    trials = as_u64("trials", v, &mut problems).unwrap_or(trials);
                }
                if let Some(v) = obj.get("seed").filter(|v| !v.is_null()) {
                    seed = as_u64("seed", v, &mut problems);
                }
                if let Some(v) = obj.get("output_format") {
                    match serde_json::from_value::<OutputFormat>(v.clone()) {
                        Ok(f) => output_format = f,
                        Err(_) => problems.push(format!(
                            "output_format: expected \"json\" or \"csv\", got {v}"
                        )),
                    }
                }
                if let Some(v) = obj.get("output_path").filter(|v| !v.is_null()) {
                    match v.as_str() {
                        Some(s) => output_path = Some(PathBuf::from(s)),
                        None => problems.push(format!("output_path: expected a string, got {v}")),
                    }
                }
            }
        }
    }

    for (k, raw) in &flags.params {
        match entry.param(k) {
            None => problems.push(format!("--{k}: not a parameter of {experiment}")),
            Some(spec) => match parse_flag(spec, raw) {
                Ok(v) => {
                    params.insert(k.clone(), v);
                }
                Err(e) => problems.push(format!("--{e}")),
            },
        }
    }
    trials = flags.trials.unwrap_or(trials);
    seed = flags.seed.or(seed);
    output_format = flags.output_format.unwrap_or(output_format);
    if flags.output_path.is_some() {
        output_path = flags.output_path.clone();
    }

    if trials == 0 {
        problems.push("trials: must be at least 1".into());
    }
    if entry.sampled && seed.is_none() {
        problems.push(format!(
            "seed: {experiment} is sampled and needs an explicit --seed"
        ));
    }
    if !problems.is_empty() {
        return Err(CliError::Validation(problems));
    }
    Ok(ExperimentConfig {
        experiment: experiment.to_string(),
        params,
        trials,
        seed,
        output_format,
        output_path,
    })
}

/// Typed access to resolved parameters; values were checked in [`resolve`].
pub struct Params<'a>(pub &'a BTreeMap<String, Value>);

impl Params<'_> {
    fn get(&self, key: &str) -> &Value {
        self.0.get(key).unwrap_or(&Value::Null)
    }

    pub fn real(&self, key: &str) -> f64 {
        self.get(key).as_f64().expect("validated real")
    }

    pub fn optional_real(&self, key: &str) -> Option<f64> {
        self.get(key).as_f64()
    }

    pub fn integer(&self, key: &str) -> u64 {
        self.get(key).as_u64().expect("validated integer")
    }

    pub fn flag(&self, key: &str) -> bool {
        self.get(key).as_bool().expect("validated bool")
    }

    pub fn text(&self, key: &str) -> &str {
        self.get(key).as_str().expect("validated string")
    }
}
