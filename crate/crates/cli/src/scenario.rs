//! Scenario documents: a metric, named vectors and observers, a command and
//! its parameters.

use std::collections::BTreeMap;
use std::path::Path;

use isolink::{MetricSpace, Observer, Tolerance, Vector};
use serde::Deserialize;

use crate::{CliError, Command};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub dim: Option<usize>,
    /// Row-major; Minkowski `diag(-1, 1, ..., 1)` when absent.
    pub metric: Option<Vec<f64>>,
    #[serde(default)]
    pub vectors: BTreeMap<String, Vec<f64>>,
    #[serde(default)]
    pub observers: BTreeMap<String, Vec<f64>>,
    pub command: Option<Command>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub c: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol_rel: Option<f64>,
    pub tol_abs: Option<f64>,
    pub initial: Option<String>,
    pub target: Option<String>,
    pub preferred: Option<String>,
    pub reference: Option<String>,
    pub observer: Option<String>,
    pub velocity: Option<String>,
    pub second: Option<String>,
    pub acceleration: Option<String>,
    pub event: Option<String>,
    pub objects: Option<Vec<String>>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read scenario {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid scenario {}: {e}", path.display())))
    }

    /// The Minkowski fixture used when no scenario is given: `R` at rest,
    /// `S` moving at `0.6c` along the first axis, `P = R`.
    pub fn fixture() -> Self {
        let v = |c: &[f64]| c.to_vec();
        let vectors = BTreeMap::from([
            ("R".to_string(), v(&[1.0, 0.0, 0.0, 0.0])),
            ("S".to_string(), v(&[1.25, 0.75, 0.0, 0.0])),
            ("P".to_string(), v(&[1.0, 0.0, 0.0, 0.0])),
            ("v".to_string(), v(&[0.0, 0.6, 0.0, 0.0])),
            ("u".to_string(), v(&[0.0, 0.5, 0.0, 0.0])),
            ("a".to_string(), v(&[0.0, 1.0, 0.0, 0.0])),
            ("e".to_string(), v(&[1.0, 1.0, 0.0, 0.0])),
        ]);
        let observers = BTreeMap::from([
            ("p".to_string(), v(&[1.0, 0.0, 0.0, 0.0])),
            ("q".to_string(), v(&[1.25, 0.75, 0.0, 0.0])),
            ("r".to_string(), v(&[1.25, 0.0, 0.75, 0.0])),
        ]);
        Self {
            dim: Some(4),
            metric: None,
            vectors,
            observers,
            command: None,
            params: Params::default(),
        }
    }

    fn dim(&self) -> usize {
        if let Some(d) = self.dim {
            return d;
        }
        if let Some(m) = &self.metric {
            return (m.len() as f64).sqrt().round() as usize;
        }
        self
            .vectors
            .values()
            .chain(self.observers.values())
            .map(Vec::len)
            .next()
            .unwrap_or(4)
    }

    pub fn space(&self, tol: Tolerance) -> Result<MetricSpace, CliError> {
        let dim = self.dim();
        let space = match &self.metric {
            Some(entries) => MetricSpace::from_rows(dim, entries, tol)?,
            None => MetricSpace::minkowski(dim)?.with_tol(tol),
        };
        for (name, comps) in self.vectors.iter().chain(&self.observers) {
            if comps.len() != dim {
                return Err(CliError::Input(format!(
                    "{name} has {} components, expected {dim}",
                    comps.len()
                )));
            }
        }
        Ok(space)
    }

    pub fn vector(&self, space: &MetricSpace, name: &str) -> Result<Vector, CliError> {
        let comps = self
            .vectors
            .get(name)
            .or_else(|| self.observers.get(name))
            .ok_or_else(|| CliError::Input(format!("unknown vector {name:?}")))?;
        Ok(space.vector(comps)?)
    }

    pub fn has(&self, name: &str) -> bool {
        self.vectors.contains_key(name) || self.observers.contains_key(name)
    }

    /// The named observer, or the ambient rest frame when `name` is absent.
    pub fn observer(&self, space: &MetricSpace, name: Option<&str>) -> Result<Observer, CliError> {
        match name {
            Some(n) => Ok(Observer::new(space, self.vector(space, n)?)?),
            None => Ok(Observer::at_rest(space)?),
        }
    }
}
