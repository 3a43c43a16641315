use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{multiplier_circuit, ArithLayout};
use crate::circuit::{Circuit, Layout};
use crate::comparator::{build_predicate_flip, ComparatorLayout, Relation};
use crate::error::{Error, Result};
use crate::grover::{
    build_oracle, plan_iterations, success_after, Amplifier, GroverPlan, Marking, OraclePredicate,
    Reflection,
};
use crate::state::{MeasurementDistribution, QuantumState};

/// Largest candidate accepted by [`is_prime`]; keeps the pipeline within 128 qubits.
pub const MAX_PRIME_CANDIDATE: u64 = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DatabaseMode {
    /// Exact uniform superposition over the odd values.
    #[default]
    Idealized,
    /// Two chained Grover searches starting from the uniform state.
    LiteralGrover,
}

impl DatabaseMode {
    pub fn name(self) -> &'static str {
        match self {
            DatabaseMode::Idealized => "idealized",
            DatabaseMode::LiteralGrover => "literal-grover",
        }
    }
}

/// Smallest `n` with `2^n > a`.
pub fn minimal_width(a: u64) -> usize {
    (u64::BITS - a.leading_zeros()) as usize
}

/// Odd values below `a`, starting at 3 when `exclude_one` is set.
pub fn odd_values(a: u64, exclude_one: bool) -> Vec<u64> {
    let start = if exclude_one { 3 } else { 1 };
    (start..a).step_by(2).collect()
}

pub fn trial_division_is_prime(a: u64) -> bool {
    a >= 2 && (2..).take_while(|d| d * d <= a).all(|d| !a.is_multiple_of(d))
}

fn check_candidate(a: u64) -> Result<()> {
    if a.is_multiple_of(2) {
        return Err(Error::Argument(format!("a must be odd, got {a}")));
    }
    if a < 3 {
        return Err(Error::Argument(format!("a must be at least 3, got {a}")));
    }
    if a > MAX_PRIME_CANDIDATE {
        return Err(Error::Range(format!(
            "a = {a} exceeds the supported maximum {MAX_PRIME_CANDIDATE}"
        )));
    }
    Ok(())
}

/// An odd-number database on an `n`-qubit register.
#[derive(Debug, Clone)]
pub struct OddDatabase {
    pub state: QuantumState,
    pub mode: DatabaseMode,
    /// Values of the ideal database.
    pub values: Vec<u64>,
    /// `|⟨ideal|state⟩|²`.
    pub fidelity: f64,
    /// Closed-form fidelity of the two-stage construction (literal mode only).
    pub analytic_fidelity: Option<f64>,
    /// Grover iterations of each stage (literal mode only).
    pub stage_iterations: Option<(usize, usize)>,
}

/// Uniform superposition over the odd values below `a` on `n` qubits.
pub fn prepare_odd_database(
    a: u64,
    n: usize,
    mode: DatabaseMode,
    exclude_one: bool,
) -> Result<OddDatabase> {
    check_candidate(a)?;
    if n > 20 || a >> n != 0 {
        return Err(Error::Argument(format!("a = {a} does not fit a {n}-bit register")));
    }
    let values = odd_values(a, exclude_one);
    if values.is_empty() {
        return Err(Error::Argument(format!("no odd values in [3, {})", a)));
    }
    let indices: Vec<u128> = values.iter().map(|&v| v as u128).collect();
    let ideal = QuantumState::uniform_over(n, &indices)?;
    match mode {
        DatabaseMode::Idealized => Ok(OddDatabase {
            state: ideal,
            mode,
            values,
            fidelity: 1.0,
            analytic_fidelity: None,
            stage_iterations: None,
        }),
        DatabaseMode::LiteralGrover => literal_database(a, n, exclude_one, ideal, values),
    }
}

fn literal_database(
    a: u64,
    n: usize,
    exclude_one: bool,
    ideal: QuantumState,
    values: Vec<u64>,
) -> Result<OddDatabase> {
    let search: Vec<usize> = (0..n).collect();
    let items = 1u64 << n;

    let below = OraclePredicate::Comparator {
        reference: a,
        relation: Relation::Lt,
    };
    let k1 = plan_iterations(items, a)?.iterations;
    let stage1 = crate::grover::run_grover(
        &GroverPlan::new(n, below)
            .with_iterations(k1)
            .with_marking(Marking::PhaseFlip),
    )?;
    let stage1_state = stage1.state.reduce_to(&search)?;

    let odd = if exclude_one {
        OraclePredicate::All(vec![
            OraclePredicate::Odd,
            OraclePredicate::Comparator {
                reference: 1,
                relation: Relation::Gt,
            },
        ])
    } else {
        OraclePredicate::Odd
    };
    let k2 = plan_iterations(a, values.len() as u64)?.iterations;
    let oracle = build_oracle(&odd, n, Marking::PhaseFlip)?;
    let rest = oracle.layout().num_qubits() - n;
    let initial = stage1_state.tensor(&QuantumState::basis_state(rest, 0)?)?;
    let amplifier = Amplifier::new(initial, oracle.circuit().clone(), Reflection::AboutInitial)?;
    let state = amplifier.run(k2)?.reduce_to(&search)?;
    let fidelity = state.fidelity(&ideal)?;

    let p1 = success_after(plan_iterations(items, a)?.theta, k1);
    let marked_below = values.len() as f64;
    let marked_above = (a..items).filter(|&x| odd.is_marked(x)).count() as f64;
    let q = p1 * marked_below / a as f64 + (1.0 - p1) * marked_above / (items - a).max(1) as f64;
    let analytic = success_after(q.sqrt().asin(), k2) * p1 * marked_below / (a as f64 * q);

    Ok(OddDatabase {
        state,
        mode: DatabaseMode::LiteralGrover,
        values,
        fidelity,
        analytic_fidelity: Some(analytic),
        stage_iterations: Some((k1, k2)),
    })
}

/// Two database copies, their product and the equality oracle against `a`.
///
/// Layout: `x`, `y` (n each), `prod` (2n), `carry` (2n - 2), `ref` (2n),
/// `o1`, `o2`, `anc` (6n - 1), `target`.
#[derive(Debug, Clone)]
pub struct PrimePipeline {
    a: u64,
    width: usize,
    layout: Layout,
    database: OddDatabase,
    product_state: QuantumState,
}

impl PrimePipeline {
    pub fn new(a: u64, mode: DatabaseMode, exclude_one: bool) -> Result<Self> {
        check_candidate(a)?;
        let n = minimal_width(a);
        let database = prepare_odd_database(a, n, mode, exclude_one)?;
        let layout = Layout::new(&[
            ("x", n),
            ("y", n),
            ("prod", 2 * n),
            ("carry", 2 * n - 2),
            ("ref", 2 * n),
            ("o1", 1),
            ("o2", 1),
            ("anc", ComparatorLayout::ancillas_required(2 * n)),
            ("target", 1),
        ])?;
        let arith = ArithLayout::place_multiplier(&layout, "x", "y", "prod", Some("carry"))?;
        let pair = database.state.tensor(&database.state)?;
        let product_state = pair
            .tensor(&QuantumState::basis_state(layout.num_qubits() - 2 * n, 0)?)?
            .apply_circuit(&multiplier_circuit(&arith)?)?;
        Ok(Self {
            a,
            width: n,
            layout,
            database,
            product_state,
        })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn database(&self) -> &OddDatabase {
        &self.database
    }

    /// State after the multiplier, before the target is prepared.
    pub fn product_state(&self) -> &QuantumState {
        &self.product_state
    }

    /// `(x, y, prod)` for every basis state in the support of the product state.
    pub fn product_triples(&self) -> Result<Vec<(u64, u64, u64)>> {
        let field = |name: &str| -> Result<Vec<usize>> {
            Ok(self.layout.register(name)?.qubits().collect())
        };
        let (x, y, p) = (field("x")?, field("y")?, field("prod")?);
        let all: Vec<usize> = x.iter().chain(&y).chain(&p).copied().collect();
        let reduced = self.product_state.reduce_to(&all)?;
        let (n, pw) = (self.width, p.len());
        Ok(reduced
            .entries()
            .into_iter()
            .map(|(idx, _)| {
                let idx = idx as u64;
                (idx >> (n + pw), (idx >> pw) & ((1 << n) - 1), idx & ((1 << pw) - 1))
            })
            .collect())
    }

    /// Flips `target` when `prod == a`.
    pub fn oracle(&self) -> Result<Circuit> {
        let reference = self.layout.register("ref")?.clone();
        let cmp = ComparatorLayout::place(&self.layout, "prod", "ref", "o1", "o2", "anc")?;
        let target = self.layout.register("target")?.start();
        let mut c = Circuit::new(self.layout.clone());
        c.load_value(&reference, self.a)?;
        c.append_circuit(&build_predicate_flip(&cmp, Relation::Eq, target)?)?;
        c.load_value(&reference, self.a)?;
        Ok(c)
    }

    /// Amplification over the pair, reflecting about the post-multiplier state
    /// with the target in `(|0⟩ - |1⟩)/√2`.
    pub fn amplifier(&self) -> Result<Amplifier> {
        let target = self.layout.register("target")?.start();
        let mut prep = Circuit::new(self.layout.clone());
        prep.x(target)?.h(target)?;
        let initial = self.product_state.clone().apply_circuit(&prep)?;
        Amplifier::new(initial, self.oracle()?, Reflection::AboutInitial)
    }

    /// Distribution of the `(x, y)` pair, encoded as `x << n | y`.
    pub fn pair_distribution(&self, state: &QuantumState) -> Result<MeasurementDistribution> {
        let qubits: Vec<usize> = (0..2 * self.width).collect();
        state.marginal_of("pair", &qubits)
    }

    fn split_pair(&self, v: u64) -> (u64, u64) {
        (v >> self.width, v & ((1 << self.width) - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Prime,
    Composite,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Prime => "prime",
            Classification::Composite => "composite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeConfig {
    pub mode: DatabaseMode,
    pub exclude_one: bool,
    /// Amplify-and-measure attempts; defaults to `⌈log₂ a⌉ + 3`.
    pub repetitions: Option<usize>,
}

impl Default for PrimeConfig {
    fn default() -> Self {
        Self {
            mode: DatabaseMode::Idealized,
            exclude_one: false,
            repetitions: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeAttempt {
    pub iterations: usize,
    pub measured: (u64, u64),
    /// Exact probability that this attempt measures a factor pair.
    pub success_probability: f64,
    pub verified: bool,
}

#[derive(Debug, Clone)]
pub struct PrimeReport {
    pub a: u64,
    pub classification: Classification,
    pub witness: Option<(u64, u64)>,
    pub attempts: Vec<PrimeAttempt>,
    /// Probability that every scheduled attempt misses, given the drawn iteration counts.
    pub miss_probability: f64,
    /// Iteration counts drawn for all scheduled attempts.
    pub schedule: Vec<usize>,
    pub database_size: usize,
    pub database_fidelity: f64,
    pub qubits: usize,
    pub mode: DatabaseMode,
    /// Distribution of the pair `x << n | y` behind the last attempt.
    pub last_distribution: Option<MeasurementDistribution>,
}

fn default_repetitions(a: u64) -> usize {
    (a as f64).log2().ceil() as usize + 3
}

/// Searches for odd `x, y < a` with `x·y = a`; composite iff a verified pair is measured.
///
/// Each attempt draws its iteration count uniformly from `[0, |database|]`,
/// since the number of factor pairs is not known in advance.
pub fn is_prime(a: u64, seed: u64, config: PrimeConfig) -> Result<PrimeReport> {
    check_candidate(a)?;
    let repetitions = config.repetitions.unwrap_or_else(|| default_repetitions(a));
    let db_size = odd_values(a, config.exclude_one).len();
    if db_size == 0 {
        return Ok(PrimeReport {
            a,
            classification: Classification::Prime,
            witness: None,
            attempts: Vec::new(),
            miss_probability: 0.0,
            schedule: Vec::new(),
            database_size: 0,
            database_fidelity: 1.0,
            qubits: 0,
            mode: config.mode,
            last_distribution: None,
        });
    }

    let pipeline = PrimePipeline::new(a, config.mode, config.exclude_one)?;
    let amplifier = pipeline.amplifier()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedule: Vec<usize> = (0..repetitions).map(|_| rng.gen_range(0..=db_size)).collect();

    // Both factors below `a` rules out the trivial pair (1, a), which a
    // literal database can still hold.
    let verify = |(x, y): (u64, u64)| x < a && y < a && x * y == a;
    let is_factor_pair = |v: u64| verify(pipeline.split_pair(v));
    let mut distributions: Vec<MeasurementDistribution> = Vec::new();
    let mut state = amplifier.initial().clone();
    let max_k = schedule.iter().copied().max().unwrap_or(0);
    for k in 0..=max_k {
        if k > 0 {
            state = amplifier.step(state)?;
        }
        distributions.push(pipeline.pair_distribution(&state)?);
    }

    let mut attempts = Vec::new();
    let mut witness = None;
    for &k in &schedule {
        let dist = &distributions[k];
        let v = dist.sample_one(&mut rng);
        let (x, y) = pipeline.split_pair(v);
        let verified = verify((x, y));
        attempts.push(PrimeAttempt {
            iterations: k,
            measured: (x, y),
            success_probability: dist.mass_where(is_factor_pair),
            verified,
        });
        if verified {
            witness = Some((x, y));
            break;
        }
    }
    let miss_probability = schedule
        .iter()
        .map(|&k| 1.0 - distributions[k].mass_where(is_factor_pair))
        .product();
    let last_distribution = attempts.last().map(|t| distributions[t.iterations].clone());

    Ok(PrimeReport {
        a,
        classification: if witness.is_some() {
            Classification::Composite
        } else {
            Classification::Prime
        },
        witness,
        attempts,
        miss_probability,
        schedule,
        database_size: db_size,
        database_fidelity: pipeline.database().fidelity,
        qubits: pipeline.layout().num_qubits(),
        mode: config.mode,
        last_distribution,
    })
}

#[derive(Debug, Clone)]
pub struct FactorReport {
    /// Prime factors, ascending.
    pub factors: Vec<u64>,
    /// Primality tests run during the descent.
    pub tests: Vec<PrimeReport>,
}

/// Recursive factoring through [`is_prime`] witnesses, with 1 excluded from the databases.
pub fn factorize(a: u64, seed: u64, mode: DatabaseMode) -> Result<FactorReport> {
    check_candidate(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending = vec![a];
    let mut factors = Vec::new();
    let mut tests = Vec::new();
    let config = PrimeConfig {
        mode,
        exclude_one: true,
        repetitions: None,
    };
    while let Some(m) = pending.pop() {
        let report = is_prime(m, rng.gen(), config)?;
        match report.witness {
            Some((p, q)) => pending.extend([p, q]),
            None => factors.push(m),
        }
        tests.push(report);
    }
    factors.sort_unstable();
    Ok(FactorReport { factors, tests })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(minimal_width(3), 2);
        assert_eq!(minimal_width(17), 5);
        assert_eq!(minimal_width(63), 6);
        assert_eq!(minimal_width(64), 7);
    }

    #[test]
    fn idealized_database_of_seventeen() {
        let db = prepare_odd_database(17, 5, DatabaseMode::Idealized, false).unwrap();
        assert_eq!(db.values, vec![1, 3, 5, 7, 9, 11, 13, 15]);
        for (i, amp) in db.state.entries() {
            assert_eq!(i % 2, 1);
            assert!((amp.norm() - 8f64.sqrt().recip()).abs() < 1e-12);
        }
        assert_eq!(db.state.support_len(), 8);
    }

    #[test]
    fn single_value_database() {
        let db = prepare_odd_database(3, 2, DatabaseMode::Idealized, false).unwrap();
        assert_eq!(db.state.entries().len(), 1);
        assert_eq!(db.state.entries()[0].0, 1);
    }

    #[test]
    fn bad_candidates() {
        assert!(matches!(is_prime(16, 0, PrimeConfig::default()), Err(Error::Argument(_))));
        assert!(matches!(is_prime(1, 0, PrimeConfig::default()), Err(Error::Argument(_))));
        assert!(prepare_odd_database(17, 4, DatabaseMode::Idealized, false).is_err());
    }

    #[test]
    fn literal_fidelity_matches_closed_form() {
        let db = prepare_odd_database(17, 5, DatabaseMode::LiteralGrover, false).unwrap();
        let analytic = db.analytic_fidelity.unwrap();
        assert!((db.fidelity - analytic).abs() < 1e-9, "{} vs {analytic}", db.fidelity);
        assert!(db.fidelity > 0.0 && db.fidelity <= 1.0);
    }

    #[test]
    fn fifteen_and_seventeen() {
        let r = is_prime(15, 3, PrimeConfig::default()).unwrap();
        assert_eq!(r.classification, Classification::Composite);
        let (p, q) = r.witness.unwrap();
        assert_eq!(p * q, 15);
        let r = is_prime(17, 3, PrimeConfig::default()).unwrap();
        assert_eq!(r.classification, Classification::Prime);
        assert_eq!(r.miss_probability, 1.0);
    }

    #[test]
    fn three_without_one_is_prime() {
        let cfg = PrimeConfig {
            exclude_one: true,
            ..PrimeConfig::default()
        };
        assert_eq!(is_prime(3, 0, cfg).unwrap().classification, Classification::Prime);
    }
}
