//! Dispatches a validated config to the library and assembles the result.

use std::collections::{BTreeMap, BTreeSet};

use qbsc::algorithms::{
    conditional_search, factorize, find_minimum, find_preimage, is_prime, minimal_width, threshold_search,
    MinimumConfig, Membership, PrimeConfig, PrimeReport, SearchOutcome, SearchReport,
};
use qbsc::circuit::FunctionTable;
use qbsc::comparator::{build_comparator, compare_classical};
use qbsc::grover::plan_iterations;
use qbsc::{Backend, MeasurementDistribution, QuantumState};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Params, Term};
use crate::result::{rows, ConfigEcho, Engine, ExperimentResult, Timing};

/// Kind-specific part of a result, before the common envelope is added.
struct Outcome {
    register: String,
    distribution: MeasurementDistribution,
    engine: Engine,
    scalars: BTreeMap<String, f64>,
    details: Value,
    notes: Vec<String>,
}

fn engine(qubits: usize) -> Engine {
    Engine {
        backend: Backend::auto(qubits).name().into(),
        qubits,
    }
}

fn scalars<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn run(config: &ExperimentConfig) -> qbsc::Result<ExperimentResult> {
    let outcome = match &config.params {
        Params::Compare { n, a, b } => compare(*n, *a, b)?,
        Params::Threshold {
            n,
            reference,
            relation,
            iterations,
        } => search_outcome(*n, threshold_search(*n, *reference, *relation, *iterations)?)?,
        Params::Minimum {
            n,
            members,
            max_rounds,
            stability_rounds,
        } => minimum(*n, members.as_ref(), config.seed, *max_rounds, *stability_rounds)?,
        Params::Zero {
            n,
            output_width,
            table,
            reference,
        } => {
            let table = FunctionTable::new(*n, *output_width, table.clone())?;
            search_outcome(*n, find_preimage(&table, *reference)?)?
        }
        Params::Prime {
            a,
            mode,
            exclude_one,
            repetitions,
        } => {
            let prime_config = PrimeConfig {
                mode: *mode,
                exclude_one: *exclude_one,
                repetitions: *repetitions,
            };
            prime(&is_prime(*a, config.seed, prime_config)?)
        }
        Params::Factor { a, mode } => factor(*a, config.seed, *mode)?,
        Params::Conditional { n, a, b, s1, s2 } => {
            let c = conditional_search(*a, *b, *s1, *s2, *n)?;
            let mut o = solved(&c.outcome)?;
            if let Value::Object(map) = &mut o.details {
                map.insert("selected".into(), json!(c.selected));
                map.insert(
                    "branch".into(),
                    json!(if a > b { "a > b" } else { "otherwise" }),
                );
            }
            o
        }
    };

    let total = outcome.distribution.total();
    if (total - 1.0).abs() > 1e-10 {
        return Err(qbsc::Error::Circuit(format!(
            "distribution sums to {total}, expected 1"
        )));
    }
    let samples = config.shots.map(|shots| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        outcome.distribution.sample_counts(&mut rng, shots)
    });
    Ok(ExperimentResult {
        config: ConfigEcho {
            kind: config.kind.name().into(),
            seed: config.seed,
            shots: config.shots,
            params: serde_json::to_value(&config.raw_params).expect("TOML values map to JSON"),
        },
        engine: outcome.engine,
        register: outcome.register,
        distribution: rows(&outcome.distribution),
        scalars: outcome.scalars,
        details: outcome.details,
        samples,
        notes: outcome.notes,
        timing: Timing { wall_seconds: 0.0 },
    })
}

fn compare(n: usize, a: u64, b: &[Term]) -> qbsc::Result<Outcome> {
    let (circuit, cmp) = build_comparator(n)?;
    let layout = cmp.layout();
    let total = layout.num_qubits();
    let shift = |reg: &str, v: u64| -> qbsc::Result<u128> {
        let r = layout.register(reg)?;
        Ok((v as u128) << (total - r.start() - r.width()))
    };
    let mut amplitudes = Vec::new();
    for t in b {
        amplitudes.push((shift("a", a)? | shift("b", t.value)?, Complex64::new(t.re, t.im)));
    }
    let state = QuantumState::from_amplitudes(total, amplitudes)?.apply_circuit(&circuit)?;
    let joint = state.marginal_of("o1o2", &[cmp.o1(), cmp.o2()])?;
    let p_o1 = state.marginal_of("o1", &[cmp.o1()])?.probability(1);
    let p_o2 = state.marginal_of("o2", &[cmp.o2()])?.probability(1);
    let mut terms = Vec::new();
    for t in b {
        let outcome = compare_classical(a, t.value, n)?;
        let (o1, o2) = outcome.outputs();
        terms.push(json!({
            "b": t.value,
            "weight": t.re * t.re + t.im * t.im,
            "o1": o1 as u8,
            "o2": o2 as u8,
        }));
    }
    Ok(Outcome {
        register: "o1o2".into(),
        engine: Engine {
            backend: state.backend().name().into(),
            qubits: total,
        },
        distribution: joint,
        scalars: scalars([("p_o1", p_o1), ("p_o2", p_o2)]),
        details: json!({ "a": a, "terms": terms }),
        notes: vec!["o1o2 outcome encodes 2*O1 + O2: 2 means a > b, 1 means a < b, 0 means equal".into()],
    })
}

fn solved(o: &SearchOutcome) -> qbsc::Result<Outcome> {
    let run = &o.run;
    let items = 1u64 << run.search_width;
    let k_opt = plan_iterations(items, o.marked.len() as u64)?.iterations;
    let mut notes = o.notes();
    if run.iterations != k_opt {
        notes.push(format!(
            "ran {} iterations; the planned optimum is {k_opt}",
            run.iterations
        ));
    }
    Ok(Outcome {
        register: run.distribution.register().into(),
        engine: Engine {
            backend: run.state.backend().name().into(),
            qubits: run.state.num_qubits(),
        },
        distribution: run.distribution.clone(),
        scalars: scalars([
            ("marked_mass", run.marked_mass),
            ("predicted_success", run.predicted_success),
            ("achieved_success", run.marked_mass),
            ("iterations", run.iterations as f64),
            ("k_opt", k_opt as f64),
            ("conditional_spread", o.conditional_spread()),
        ]),
        details: json!({
            "solved": true,
            "marked": o.marked,
            "top": o.top,
            "best": o.best,
            "degenerate": o.degenerate,
        }),
        notes,
    })
}

fn search_outcome(n: usize, report: SearchReport) -> qbsc::Result<Outcome> {
    match report {
        SearchReport::Solved(o) => solved(&o),
        SearchReport::NoSolution { reason } => {
            let uniform = QuantumState::uniform_state(n)?;
            let distribution = uniform.marginal_of("search", &(0..n).collect::<Vec<_>>())?;
            Ok(Outcome {
                register: "search".into(),
                engine: engine(n),
                distribution,
                scalars: scalars([("marked_mass", 0.0)]),
                details: json!({ "solved": false, "reason": reason }),
                notes: vec![format!(
                    "no solution: {reason}; the listed distribution is the unamplified uniform state"
                )],
            })
        }
    }
}

fn minimum(
    n: usize,
    members: Option<&BTreeSet<u64>>,
    seed: u64,
    max_rounds: Option<usize>,
    stability_rounds: Option<usize>,
) -> qbsc::Result<Outcome> {
    let defaults = MinimumConfig::default();
    let config = MinimumConfig {
        max_rounds: max_rounds.unwrap_or(defaults.max_rounds),
        stability_rounds: stability_rounds.unwrap_or(defaults.stability_rounds),
        ..defaults
    };
    let membership = members.map_or(Membership::All, |s| Membership::Set(s.clone()));
    let trace = find_minimum(n, &membership, seed, config)?;
    let classical = members.and_then(|s| s.iter().next().copied()).unwrap_or(0);
    let distribution = trace.final_distribution.clone().unwrap_or_else(|| {
        MeasurementDistribution::new("search", [(trace.result, 1.0)].into())
    });
    let mut notes = Vec::new();
    if !trace.converged {
        notes.push(format!(
            "stopped after {} rounds without {} consecutive repeats",
            trace.rounds, config.stability_rounds
        ));
    }
    if trace.result != classical {
        notes.push(format!(
            "result {} differs from the classical minimum {classical}",
            trace.result
        ));
    }
    Ok(Outcome {
        register: "search".into(),
        engine: engine(trace.qubits),
        distribution,
        scalars: scalars([
            ("result", trace.result as f64),
            ("rounds", trace.rounds as f64),
        ]),
        details: json!({
            "result": trace.result,
            "thresholds": trace.thresholds,
            "converged": trace.converged,
            "classical_minimum": classical,
            "stability_rounds": config.stability_rounds,
        }),
        notes,
    })
}

fn pair_distribution(report: &PrimeReport) -> MeasurementDistribution {
    report
        .last_distribution
        .clone()
        .unwrap_or_else(|| MeasurementDistribution::new("pair", [(0, 1.0)].into()))
}

fn prime_details(report: &PrimeReport) -> Value {
    let attempts: Vec<Value> = report
        .attempts
        .iter()
        .map(|t| {
            json!({
                "iterations": t.iterations,
                "measured": [t.measured.0, t.measured.1],
                "success_probability": t.success_probability,
                "verified": t.verified,
            })
        })
        .collect();
    json!({
        "a": report.a,
        "classification": report.classification.name(),
        "witness": report.witness.map(|(p, q)| [p, q]),
        "mode": report.mode.name(),
        "database_size": report.database_size,
        "schedule": report.schedule,
        "attempts": attempts,
    })
}

fn prime(report: &PrimeReport) -> Outcome {
    let mut notes = vec![format!(
        "pair outcome encodes x * 2^n + y with n = {} bits per factor",
        minimal_width(report.a)
    )];
    if report.attempts.is_empty() {
        notes.push("the odd database is empty, so no search was run".into());
    }
    Outcome {
        register: "pair".into(),
        engine: engine(report.qubits),
        distribution: pair_distribution(report),
        scalars: scalars([
            ("miss_probability", report.miss_probability),
            ("database_fidelity", report.database_fidelity),
            ("attempts", report.attempts.len() as f64),
        ]),
        details: prime_details(report),
        notes,
    }
}

fn factor(a: u64, seed: u64, mode: qbsc::algorithms::DatabaseMode) -> qbsc::Result<Outcome> {
    let report = factorize(a, seed, mode)?;
    let first = &report.tests[0];
    let tests: Vec<Value> = report
        .tests
        .iter()
        .map(|t| {
            json!({
                "a": t.a,
                "classification": t.classification.name(),
                "witness": t.witness.map(|(p, q)| [p, q]),
                "miss_probability": t.miss_probability,
            })
        })
        .collect();
    let qubits = report.tests.iter().map(|t| t.qubits).max().unwrap_or(0);
    Ok(Outcome {
        register: "pair".into(),
        engine: engine(qubits),
        distribution: pair_distribution(first),
        scalars: scalars([("tests", report.tests.len() as f64)]),
        details: json!({
            "a": a,
            "factors": report.factors,
            "tests": tests,
        }),
        notes: vec![format!(
            "distribution is the factor-pair search on {a} itself, encoded as x * 2^n + y"
        )],
    })
}
