use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Dense linear algebra on the full state.
    Exact,
    /// Monte Carlo estimate from `trials` samples.
    Sampled,
    ClosedForm,
    Arithmetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Expectation {
    /// `|value − target| ≤ tolerance`.
    Near(f64),
    AtMost(f64),
    AtLeast(f64),
}

impl Expectation {
    pub fn holds(&self, value: f64, tolerance: f64) -> bool {
        match *self {
            Self::Near(t) => (value - t).abs() <= tolerance,
            Self::AtMost(b) => value <= b,
            Self::AtLeast(b) => value >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub trials: u64,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl Metric {
    pub fn near(&mut self, target: f64) -> &mut Self {
        self.expect = Some(Expectation::Near(target));
        self
    }

    pub fn at_most(&mut self, bound: f64) -> &mut Self {
        self.expect = Some(Expectation::AtMost(bound));
        self
    }

    pub fn at_least(&mut self, bound: f64) -> &mut Self {
        self.expect = Some(Expectation::AtLeast(bound));
        self
    }
}

/// Metrics and plot-ready series produced by one experiment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub metrics: Vec<Metric>,
    pub series: BTreeMap<String, Vec<f64>>,
}

impl Outcome {
    pub fn metric(
        &mut self,
        name: impl Into<String>,
        value: f64,
        source: Source,
        trials: u64,
        tolerance: f64,
    ) -> &mut Metric {
        self.metrics.push(Metric {
            name: name.into(),
            value,
            tolerance,
            trials,
            source,
            expect: None,
            passed: None,
        });
        self.metrics.last_mut().expect("just pushed")
    }

    pub fn exact(&mut self, name: impl Into<String>, value: f64) -> &mut Metric {
        self.metric(name, value, Source::Exact, 1, qsignal_core::TOLERANCE)
    }

    pub fn series(&mut self, name: &str, values: Vec<f64>) {
        self.series.insert(name.to_string(), values);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    /// Wall-clock time; the only field that differs between identical runs.
    pub duration_seconds: f64,
    pub metrics: Vec<Metric>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    metric: &'a str,
    value: f64,
    tolerance: f64,
    trials: u64,
    seed: Option<u64>,
}

impl RunManifest {
    pub fn new(
        config: ExperimentConfig,
        outcome: Outcome,
        duration_seconds: f64,
    ) -> Result<Self, CliError> {
        let mut metrics = outcome.metrics;
        for m in &mut metrics {
            if !m.value.is_finite() || !m.tolerance.is_finite() {
                return Err(CliError::Contract(format!(
                    "metric {} is not finite ({})",
                    m.name, m.value
                )));
            }
            m.passed = m.expect.map(|e| e.holds(m.value, m.tolerance));
        }
        for (name, s) in &outcome.series {
            if s.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Contract(format!(
                    "series {name} has non-finite entries"
                )));
            }
        }
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            duration_seconds,
            metrics,
            series: outcome.series,
        })
    }

    pub fn failures(&self) -> impl Iterator<Item = &Metric> {
        self.metrics.iter().filter(|m| m.passed == Some(false))
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn value(&self, name: &str) -> f64 {
        self.metric(name).map_or(f64::NAN, |m| m.value)
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// The manifest without its timing field, for reproducibility checks.
    pub fn payload(&self) -> Result<String, CliError> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("duration_seconds");
        }
        Ok(serde_json::to_string(&v)?)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for m in &self.metrics {
            w.serialize(CsvRow {
                experiment: &self.config.experiment,
                metric: &m.name,
                value: m.value,
                tolerance: m.tolerance,
                trials: m.trials,
                seed: self.config.seed,
            })?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Serialize(e.to_string()))
    }
}
