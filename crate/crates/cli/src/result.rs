//! Result file model and plot-data export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qbsc::MeasurementDistribution;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub kind: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    pub params: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Engine {
    pub backend: String,
    pub qubits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub outcome: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// Everything a run produces. Only `timing` varies between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ConfigEcho,
    pub engine: Engine,
    /// Register whose exact outcome distribution is listed.
    pub register: String,
    pub distribution: Vec<Row>,
    /// Numeric results such as marked mass and predicted versus achieved success.
    pub scalars: BTreeMap<String, f64>,
    /// Kind-specific structured output.
    pub details: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<BTreeMap<u64, usize>>,
    pub notes: Vec<String>,
    pub timing: Timing,
}

pub fn rows(dist: &MeasurementDistribution) -> Vec<Row> {
    dist.entries()
        .iter()
        .map(|(&outcome, &probability)| Row {
            outcome,
            probability,
        })
        .collect()
}

/// `outcome,probability` lines sorted by outcome.
pub fn plot_csv(result: &ExperimentResult) -> Result<String, String> {
    if result.distribution.is_empty() {
        return Err("result has an empty distribution".into());
    }
    let mut rows = result.distribution.clone();
    rows.sort_by_key(|r| r.outcome);
    let mut out = String::from("outcome,probability\n");
    for r in rows {
        writeln!(out, "{},{}", r.outcome, r.probability).expect("writing to a String");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(distribution: Vec<Row>) -> ExperimentResult {
        ExperimentResult {
            config: ConfigEcho {
                kind: "threshold".into(),
                seed: 0,
                shots: None,
                params: Value::Null,
            },
            engine: Engine {
                backend: "dense".into(),
                qubits: 1,
            },
            register: "search".into(),
            distribution,
            scalars: BTreeMap::new(),
            details: Value::Null,
            samples: None,
            notes: Vec::new(),
            timing: Timing { wall_seconds: 0.0 },
        }
    }

    #[test]
    fn point_mass_is_one_row() {
        let csv = plot_csv(&result(vec![Row {
            outcome: 5,
            probability: 1.0,
        }]))
        .unwrap();
        assert_eq!(csv, "outcome,probability\n5,1\n");
    }

    #[test]
    fn rows_are_sorted() {
        let csv = plot_csv(&result(vec![
            Row {
                outcome: 3,
                probability: 0.25,
            },
            Row {
                outcome: 1,
                probability: 0.75,
            },
        ]))
        .unwrap();
        assert_eq!(csv, "outcome,probability\n1,0.75\n3,0.25\n");
    }

    #[test]
    fn empty_distribution_is_rejected() {
        assert!(plot_csv(&result(Vec::new())).is_err());
    }
}
