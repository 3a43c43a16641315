//! Grover iteration machinery.
//!
//! An [`OraclePredicate`] describes which values of the search register are
//! marked. [`build_oracle`] turns it into a reversible circuit that flips a
//! target qubit exactly on marked values and returns every auxiliary qubit to
//! |0⟩. With the target prepared in `(|0⟩ - |1⟩)/√2` the flip becomes a phase
//! flip (kickback); [`Marking::PhaseFlip`] instead brackets a `Z` between two
//! copies of the flip circuit and leaves the target in |0⟩.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{lift_function, Circuit, Control, FunctionTable, Gate, Layout, Register};
use crate::comparator::{build_predicate_flip, comparator_circuit, ComparatorLayout, Relation};
use crate::error::{Error, Result};
use crate::state::{MeasurementDistribution, QuantumState};

/// Name of the search register in every oracle layout.
pub const SEARCH: &str = "search";
/// Name of the oracle's flip target.
pub const TARGET: &str = "target";

/// Widest search register whose marked set is enumerated classically.
const MAX_ENUMERATION_WIDTH: usize = 24;

/// How the oracle's bit flip becomes a phase flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Marking {
    /// Flip a target held in `(|0⟩ - |1⟩)/√2`.
    #[default]
    Kickback,
    /// Compute the predicate into a |0⟩ target, apply `Z`, uncompute.
    PhaseFlip,
}

/// Condition on the search-register value `x` that marks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OraclePredicate {
    /// `x <relation> reference`, evaluated by a comparator against a loaded reference.
    Comparator { reference: u64, relation: Relation },
    /// `x == value`.
    EqualConstant(u64),
    /// `x` is odd.
    Odd,
    /// `x` is one of the listed values.
    Membership(BTreeSet<u64>),
    /// `x == s1` when `a > b`, otherwise `x == s2`; `a` and `b` are loaded
    /// into comparator registers and only `o1` selects the branch.
    BranchSelect { a: u64, b: u64, s1: u64, s2: u64 },
    /// `f(x) == reference` for a truth-table function lifted to a reversible circuit.
    FunctionZero { table: FunctionTable, reference: u64 },
    /// Every sub-predicate holds.
    All(Vec<OraclePredicate>),
}

fn check_fits(value: u64, width: usize, what: &str) -> Result<()> {
    if width < 64 && value >> width != 0 {
        return Err(Error::Range(format!("{what} {value} does not fit {width} bits")));
    }
    Ok(())
}

impl OraclePredicate {
    /// Classical evaluation of the predicate.
    pub fn is_marked(&self, x: u64) -> bool {
        match self {
            OraclePredicate::Comparator {
                reference,
                relation,
            } => relation.holds(x, *reference),
            OraclePredicate::EqualConstant(v) => x == *v,
            OraclePredicate::Odd => x & 1 == 1,
            OraclePredicate::Membership(set) => set.contains(&x),
            OraclePredicate::BranchSelect { a, b, s1, s2 } => {
                x == if a > b { *s1 } else { *s2 }
            }
            OraclePredicate::FunctionZero { table, reference } => {
                (x as usize) < table.values().len() && table.eval(x) == *reference
            }
            OraclePredicate::All(parts) => parts.iter().all(|p| p.is_marked(x)),
        }
    }

    /// Checks that every constant fits a search register of `width` bits.
    pub fn validate(&self, width: usize) -> Result<()> {
        if width == 0 || width > 64 {
            return Err(Error::Argument(format!("search width {width} outside 1..=64")));
        }
        match self {
            OraclePredicate::Comparator { reference, .. } => {
                check_fits(*reference, width, "reference")
            }
            OraclePredicate::EqualConstant(v) => check_fits(*v, width, "constant"),
            OraclePredicate::Odd => Ok(()),
            OraclePredicate::Membership(set) => {
                set.iter().try_for_each(|v| check_fits(*v, width, "member"))
            }
            OraclePredicate::BranchSelect { a, b, s1, s2 } => {
                check_fits(*a, width, "a")?;
                check_fits(*b, width, "b")?;
                check_fits(*s1, width, "s1")?;
                check_fits(*s2, width, "s2")
            }
            OraclePredicate::FunctionZero { table, reference } => {
                if table.input_width() != width {
                    return Err(Error::Layout(format!(
                        "function takes {} input bits, search register has {width}",
                        table.input_width()
                    )));
                }
                check_fits(*reference, table.output_width(), "reference")
            }
            OraclePredicate::All(parts) => parts.iter().try_for_each(|p| p.validate(width)),
        }
    }

    /// All marked values of a `width`-bit register, ascending.
    pub fn marked_values(&self, width: usize) -> Result<Vec<u64>> {
        if width > MAX_ENUMERATION_WIDTH {
            return Err(Error::Argument(format!(
                "cannot enumerate a {width}-bit search space"
            )));
        }
        Ok((0..1u64 << width).filter(|&x| self.is_marked(x)).collect())
    }

    fn declare(&self, width: usize, prefix: &str, regs: &mut Vec<(String, usize)>) {
        let mut comparator = |w: usize, operands: &[&str]| {
            for op in operands {
                regs.push((format!("{prefix}{op}"), w));
            }
            regs.push((format!("{prefix}o1"), 1));
            regs.push((format!("{prefix}o2"), 1));
            regs.push((format!("{prefix}anc"), ComparatorLayout::ancillas_required(w)));
        };
        match self {
            OraclePredicate::Comparator { .. } => comparator(width, &["ref"]),
            OraclePredicate::BranchSelect { .. } => comparator(width, &["a", "b"]),
            OraclePredicate::FunctionZero { table, .. } => {
                comparator(table.output_width(), &["fx", "ref"])
            }
            OraclePredicate::All(parts) if parts.len() > 1 => {
                for (i, p) in parts.iter().enumerate() {
                    let sub = format!("{prefix}p{i}_");
                    regs.push((format!("{sub}flag"), 1));
                    p.declare(width, &sub, regs);
                }
            }
            OraclePredicate::All(parts) => {
                if let Some(p) = parts.first() {
                    p.declare(width, prefix, regs);
                }
            }
            _ => {}
        }
    }

    /// Appends gates flipping `target` exactly when the search register is marked.
    fn emit(&self, c: &mut Circuit, search: &Register, target: usize, prefix: &str) -> Result<()> {
        let layout = c.layout().clone();
        let reg = |name: &str| layout.register(&format!("{prefix}{name}")).cloned();
        let place = |a: &str, b: &str| {
            ComparatorLayout::place(
                &layout,
                a,
                &format!("{prefix}{b}"),
                &format!("{prefix}o1"),
                &format!("{prefix}o2"),
                &format!("{prefix}anc"),
            )
        };
        match self {
            OraclePredicate::Comparator {
                reference,
                relation,
            } => {
                let r = reg("ref")?;
                let cmp = place(search.name(), "ref")?;
                c.load_value(&r, *reference)?;
                c.append_circuit(&build_predicate_flip(&cmp, *relation, target)?)?;
                c.load_value(&r, *reference)?;
            }
            OraclePredicate::EqualConstant(v) => {
                c.mcx(search.controls_for(*v), target)?;
            }
            OraclePredicate::Odd => {
                c.cnot(search.lsb(), target)?;
            }
            OraclePredicate::Membership(set) => {
                for v in set {
                    c.mcx(search.controls_for(*v), target)?;
                }
            }
            OraclePredicate::BranchSelect { a, b, s1, s2 } => {
                let (ra, rb) = (reg("a")?, reg("b")?);
                let cmp = ComparatorLayout::place(
                    &layout,
                    ra.name(),
                    rb.name(),
                    &format!("{prefix}o1"),
                    &format!("{prefix}o2"),
                    &format!("{prefix}anc"),
                )?;
                c.load_value(&ra, *a)?.load_value(&rb, *b)?;
                let compare = comparator_circuit(&cmp)?;
                c.append_circuit(&compare)?;
                let mut on_gt = vec![Control::one(cmp.o1())];
                on_gt.extend(search.controls_for(*s1));
                c.mcx(on_gt, target)?;
                let mut otherwise = vec![Control::zero(cmp.o1())];
                otherwise.extend(search.controls_for(*s2));
                c.mcx(otherwise, target)?;
                c.append_circuit(&compare.inverse())?;
                c.load_value(&ra, *a)?.load_value(&rb, *b)?;
            }
            OraclePredicate::FunctionZero { table, reference } => {
                let fx = reg("fx")?;
                let r = reg("ref")?;
                let lift = lift_function(table, &layout, search.name(), fx.name())?;
                let cmp = place(fx.name(), "ref")?;
                c.append_circuit(&lift)?;
                c.load_value(&r, *reference)?;
                c.append_circuit(&build_predicate_flip(&cmp, Relation::Eq, target)?)?;
                c.load_value(&r, *reference)?;
                c.append_circuit(&lift.inverse())?;
            }
            OraclePredicate::All(parts) => match parts.as_slice() {
                [] => {
                    c.x(target)?;
                }
                [only] => only.emit(c, search, target, prefix)?,
                _ => {
                    let mut flags = Vec::with_capacity(parts.len());
                    let mut compute = c.empty_like();
                    for (i, p) in parts.iter().enumerate() {
                        let sub = format!("{prefix}p{i}_");
                        let flag = layout.register(&format!("{sub}flag"))?.start();
                        p.emit(&mut compute, search, flag, &sub)?;
                        flags.push(Control::one(flag));
                    }
                    c.append_circuit(&compute)?;
                    c.mcx(flags, target)?;
                    c.append_circuit(&compute.inverse())?;
                }
            },
        }
        Ok(())
    }
}

/// Oracle circuit together with its layout roles.
#[derive(Debug, Clone)]
pub struct Oracle {
    circuit: Circuit,
    search: Register,
    target: usize,
    marking: Marking,
}

impl Oracle {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn layout(&self) -> &Layout {
        self.circuit.layout()
    }

    pub fn search(&self) -> &Register {
        &self.search
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn marking(&self) -> Marking {
        self.marking
    }

    /// Gates that put the target into the state the marking mode expects.
    pub fn target_preparation(&self) -> Circuit {
        let mut c = self.circuit.empty_like();
        if self.marking == Marking::Kickback {
            c.x(self.target).and_then(|c| c.h(self.target)).expect("target in layout");
        }
        c
    }
}

/// Builds the phase oracle for `predicate` over a fresh layout:
/// `search` (width), the predicate's auxiliary registers, then `target` (1).
pub fn build_oracle(
    predicate: &OraclePredicate,
    search_width: usize,
    marking: Marking,
) -> Result<Oracle> {
    predicate.validate(search_width)?;
    let mut regs = vec![(SEARCH.to_string(), search_width)];
    predicate.declare(search_width, "", &mut regs);
    regs.push((TARGET.to_string(), 1));
    let layout = Layout::new(&regs)?;
    let search = layout.register(SEARCH)?.clone();
    let target = layout.register(TARGET)?.start();

    let mut flip = Circuit::new(layout);
    predicate.emit(&mut flip, &search, target, "")?;
    let circuit = match marking {
        Marking::Kickback => flip,
        Marking::PhaseFlip => {
            let mut c = flip.clone();
            c.z(target)?;
            c.append_circuit(&flip)?;
            c
        }
    };
    Ok(Oracle {
        circuit,
        search,
        target,
        marking,
    })
}

/// Hadamard on every qubit of `search`.
pub fn uniform_preparation(layout: &Layout, search: &Register) -> Circuit {
    let mut c = Circuit::new(layout.clone());
    for q in search.qubits() {
        c.h(q).expect("search register belongs to layout");
    }
    c
}

/// Reflection `A·S₀·A⁻¹` about `A|0…0⟩`, with `A = prepare` acting on `search` only.
///
/// `S₀` flips the phase of everything except |0…0⟩ on the search register, so
/// for the uniform preparation the result is exactly `2|s⟩⟨s| - I`.
pub fn build_diffusion(search: &Register, prepare: &Circuit) -> Result<Circuit> {
    if let Some(g) = prepare
        .gates()
        .iter()
        .find(|g| g.qubits().any(|q| !search.contains(q)))
    {
        return Err(Error::Argument(format!(
            "preparation gate `{g}` leaves the search register"
        )));
    }
    let mut c = prepare.inverse();
    let qubits: Vec<usize> = search.qubits().collect();
    let (&last, rest) = qubits.split_last().expect("registers are non-empty");
    for &q in &qubits {
        c.x(q)?;
    }
    if rest.is_empty() {
        c.z(last)?;
    } else {
        c.h(last)?;
        c.mcx(rest.iter().map(|&q| Control::one(q)).collect(), last)?;
        c.h(last)?;
    }
    for &q in &qubits {
        c.x(q)?;
    }
    // Z·X·Z·X = -I turns I - 2|0⟩⟨0| into 2|0⟩⟨0| - I.
    c.extend([Gate::x(last), Gate::z(last), Gate::x(last), Gate::z(last)])?;
    c.append_circuit(prepare)?;
    Ok(c)
}

/// Iteration count and its predicted success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationPlan {
    pub iterations: usize,
    pub predicted_success: f64,
    /// Rotation angle with `sin²θ` = initial marked mass.
    pub theta: f64,
}

/// `sin²((2k+1)θ)`.
pub fn success_after(theta: f64, k: usize) -> f64 {
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// Optimal count for a rotation angle: `round(π/(4θ) - 1/2)`, ties toward fewer iterations.
pub fn iterations_for_angle(theta: f64) -> usize {
    let x = PI / (4.0 * theta) - 0.5;
    if x <= 0.0 {
        return 0;
    }
    let floor = x.floor();
    let k = if (x - floor - 0.5).abs() < 1e-9 {
        floor
    } else {
        x.round()
    };
    k as usize
}

/// Plans a search over `items` values of which `marked` are solutions.
pub fn plan_iterations(items: u64, marked: u64) -> Result<IterationPlan> {
    if marked == 0 {
        return Err(Error::Planning("no marked states".into()));
    }
    if marked > items {
        return Err(Error::Planning(format!(
            "{marked} marked states out of only {items}"
        )));
    }
    let theta = (marked as f64 / items as f64).sqrt().asin();
    plan_for_angle(theta)
}

/// Plans a search whose initial marked mass is `sin²θ`.
pub fn plan_for_angle(theta: f64) -> Result<IterationPlan> {
    if theta.is_nan() || theta <= 0.0 {
        return Err(Error::Planning("no marked amplitude to amplify".into()));
    }
    let iterations = iterations_for_angle(theta);
    Ok(IterationPlan {
        iterations,
        predicted_success: success_after(theta, iterations),
        theta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    Fixed(usize),
    /// Chosen by [`plan_iterations`].
    Optimal,
}

/// Everything needed to run one amplitude-amplification search.
#[derive(Debug, Clone)]
pub struct GroverPlan {
    pub search_width: usize,
    pub oracle: OraclePredicate,
    /// Preparation on a layout holding only the search register;
    /// `None` means Hadamards on every search qubit.
    pub prepare: Option<Circuit>,
    pub iterations: Iterations,
    pub marked_count_hint: Option<u64>,
    pub marking: Marking,
}

impl GroverPlan {
    pub fn new(search_width: usize, oracle: OraclePredicate) -> Self {
        Self {
            search_width,
            oracle,
            prepare: None,
            iterations: Iterations::Optimal,
            marked_count_hint: None,
            marking: Marking::Kickback,
        }
    }

    pub fn with_iterations(mut self, k: usize) -> Self {
        self.iterations = Iterations::Fixed(k);
        self
    }

    pub fn with_marking(mut self, marking: Marking) -> Self {
        self.marking = marking;
        self
    }

    pub fn with_prepare(mut self, prepare: Circuit) -> Self {
        self.prepare = Some(prepare);
        self
    }

    pub fn with_marked_count(mut self, m: u64) -> Self {
        self.marked_count_hint = Some(m);
        self
    }

    fn items(&self) -> u64 {
        1u64 << self.search_width
    }

    fn marked_count(&self) -> Result<u64> {
        match self.marked_count_hint {
            Some(m) => {
                if m == 0 || m > self.items() {
                    return Err(Error::Planning(format!(
                        "marked count hint {m} outside 1..={}",
                        self.items()
                    )));
                }
                Ok(m)
            }
            None => Ok(self.oracle.marked_values(self.search_width)?.len() as u64),
        }
    }
}

/// How an [`Amplifier`] reflects about its initial state.
#[derive(Debug, Clone)]
pub enum Reflection {
    /// An explicit diffusion circuit such as [`build_diffusion`].
    Circuit(Circuit),
    /// `2|ψ₀⟩⟨ψ₀| - I` computed directly from the stored initial state.
    AboutInitial,
}

/// Repeated `reflection ∘ oracle` rounds starting from a prepared state.
#[derive(Debug, Clone)]
pub struct Amplifier {
    initial: QuantumState,
    oracle: Circuit,
    reflection: Reflection,
}

impl Amplifier {
    pub fn new(initial: QuantumState, oracle: Circuit, reflection: Reflection) -> Result<Self> {
        let width_ok = |c: &Circuit| c.num_qubits() == initial.num_qubits();
        let reflection_ok = match &reflection {
            Reflection::Circuit(c) => width_ok(c),
            Reflection::AboutInitial => true,
        };
        if !width_ok(&oracle) || !reflection_ok {
            return Err(Error::Circuit(
                "oracle, reflection and initial state differ in width".into(),
            ));
        }
        Ok(Self {
            initial,
            oracle,
            reflection,
        })
    }

    pub fn initial(&self) -> &QuantumState {
        &self.initial
    }

    /// One Grover round: oracle, then reflection.
    pub fn step(&self, state: QuantumState) -> Result<QuantumState> {
        let state = state.apply_circuit(&self.oracle)?;
        match &self.reflection {
            Reflection::Circuit(c) => state.apply_circuit(c),
            Reflection::AboutInitial => state.reflect_about(&self.initial),
        }
    }

    pub fn run(&self, rounds: usize) -> Result<QuantumState> {
        (0..rounds).try_fold(self.initial.clone(), |s, _| self.step(s))
    }
}

/// Assembled search: oracle layout plus an amplifier over it.
#[derive(Debug, Clone)]
pub struct PreparedSearch {
    pub oracle: Oracle,
    pub amplifier: Amplifier,
}

impl PreparedSearch {
    pub fn new(plan: &GroverPlan) -> Result<Self> {
        let oracle = build_oracle(&plan.oracle, plan.search_width, plan.marking)?;
        let layout = oracle.layout().clone();
        let search = oracle.search().clone();
        let prepare = match &plan.prepare {
            None => uniform_preparation(&layout, &search),
            Some(p) => {
                if p.num_qubits() != plan.search_width {
                    return Err(Error::Layout(format!(
                        "preparation acts on {} qubits, search register has {}",
                        p.num_qubits(),
                        plan.search_width
                    )));
                }
                let mut c = Circuit::new(layout.clone());
                c.embed(p, &search.qubits().collect::<Vec<_>>())?;
                c
            }
        };
        let initial = QuantumState::basis_state(layout.num_qubits(), 0)?
            .apply_circuit(&oracle.target_preparation())?
            .apply_circuit(&prepare)?;
        let diffusion = build_diffusion(&search, &prepare)?;
        let amplifier = Amplifier::new(
            initial,
            oracle.circuit().clone(),
            Reflection::Circuit(diffusion),
        )?;
        Ok(Self { oracle, amplifier })
    }

    pub fn search_distribution(&self, state: &QuantumState) -> Result<MeasurementDistribution> {
        state.marginal(self.oracle.search())
    }
}

/// Outcome of [`run_grover`].
#[derive(Debug, Clone)]
pub struct GroverRun {
    pub search_width: usize,
    pub state: QuantumState,
    pub layout: Layout,
    pub distribution: MeasurementDistribution,
    pub iterations: usize,
    /// Exact probability of measuring a marked value.
    pub marked_mass: f64,
    pub predicted_success: f64,
    pub marked_count: u64,
}

pub fn run_grover(plan: &GroverPlan) -> Result<GroverRun> {
    let search = PreparedSearch::new(plan)?;
    let marked_count = plan.marked_count()?;
    let initial_dist = search.search_distribution(search.amplifier.initial())?;
    let initial_mass = initial_dist.mass_where(|x| plan.oracle.is_marked(x));
    let theta = match plan.prepare {
        None if marked_count > 0 => plan_iterations(plan.items(), marked_count)?.theta,
        _ => initial_mass.clamp(0.0, 1.0).sqrt().asin(),
    };
    let iterations = match plan.iterations {
        Iterations::Fixed(k) => k,
        Iterations::Optimal => plan_for_angle(theta)?.iterations,
    };
    let state = search.amplifier.run(iterations)?;
    let distribution = search.search_distribution(&state)?;
    let marked_mass = distribution.mass_where(|x| plan.oracle.is_marked(x));
    Ok(GroverRun {
        search_width: plan.search_width,
        state,
        layout: search.oracle.layout().clone(),
        distribution,
        iterations,
        marked_mass,
        predicted_success: success_after(theta, iterations),
        marked_count,
    })
}

/// Parameters of the randomized schedule for an unknown number of solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbhtConfig {
    pub max_rounds: usize,
    /// Growth factor λ of the iteration-count range.
    pub growth: f64,
}

impl Default for BbhtConfig {
    fn default() -> Self {
        Self {
            max_rounds: 30,
            growth: 6.0 / 5.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BbhtOutcome {
    /// Verified marked value, if any round produced one.
    pub found: Option<u64>,
    pub rounds: usize,
    /// Grover iteration count used in each round.
    pub iterations: Vec<usize>,
    /// Search-register distribution of the final round.
    pub last_distribution: Option<MeasurementDistribution>,
}

/// Range bound for round `round`: `⌈λ^round⌉`, capped at `⌈√N⌉`.
pub fn bbht_range(round: usize, growth: f64, items: u64) -> usize {
    let grown = growth.powi(round as i32).ceil();
    let cap = (items as f64).sqrt().ceil();
    grown.min(cap) as usize
}

/// Randomized search: each round draws `k` uniformly from `[0, bbht_range]`,
/// measures after `k` iterations and verifies classically.
pub fn run_bbht(plan: &GroverPlan, seed: u64, config: BbhtConfig) -> Result<BbhtOutcome> {
    let mut session = BbhtSession::new(plan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    session.run(&mut rng, config)
}

/// A prepared search whose iterated states and distributions are cached
/// across repeated randomized runs.
#[derive(Debug, Clone)]
pub struct BbhtSession {
    search: PreparedSearch,
    predicate: OraclePredicate,
    items: u64,
    states: Vec<QuantumState>,
    distributions: Vec<MeasurementDistribution>,
}

impl BbhtSession {
    pub fn new(plan: &GroverPlan) -> Result<Self> {
        let search = PreparedSearch::new(plan)?;
        let states = vec![search.amplifier.initial().clone()];
        Ok(Self {
            search,
            predicate: plan.oracle.clone(),
            items: plan.items(),
            states,
            distributions: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.search.oracle.layout().num_qubits()
    }

    /// Search-register distribution after `k` Grover iterations.
    pub fn distribution(&mut self, k: usize) -> Result<&MeasurementDistribution> {
        while self.states.len() <= k {
            let last = self.states.last().expect("non-empty").clone();
            self.states.push(self.search.amplifier.step(last)?);
        }
        while self.distributions.len() <= k {
            let d = self.search.search_distribution(&self.states[self.distributions.len()])?;
            self.distributions.push(d);
        }
        Ok(&self.distributions[k])
    }

    pub fn run<R: Rng>(&mut self, rng: &mut R, config: BbhtConfig) -> Result<BbhtOutcome> {
        let mut iterations = Vec::new();
        let mut last = None;
        for round in 0..config.max_rounds {
            let k = rng.gen_range(0..=bbht_range(round, config.growth, self.items));
            iterations.push(k);
            let dist = self.distribution(k)?;
            let x = dist.sample_one(rng);
            last = Some(dist.clone());
            if self.predicate.is_marked(x) {
                return Ok(BbhtOutcome {
                    found: Some(x),
                    rounds: round + 1,
                    iterations,
                    last_distribution: last,
                });
            }
        }
        Ok(BbhtOutcome {
            found: None,
            rounds: config.max_rounds,
            iterations,
            last_distribution: last,
        })
    }
}
