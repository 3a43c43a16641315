//! Exact statevector engine.
//!
//! Amplitudes live either in a dense vector (small widths) or in a sparse map
//! keyed by basis index. Basis index bit `n-1-q` holds qubit `q`, so qubit 0
//! is the most significant bit and a register's value is a contiguous bit
//! field of the index.
//!
//! Runs of X, MCX and Z gates are permutations with signs; they are fused and
//! applied to each stored index in one pass. Hadamards are the only gates that
//! change magnitudes and are applied pairwise, followed by pruning.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::circuit::{Circuit, Gate, GateKind, Polarity, Register, MAX_QUBITS};
use crate::error::{Error, Result};

/// Stored amplitudes below this magnitude are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;
/// Widest state that [`Backend::auto`] stores densely.
pub const DENSE_MAX_QUBITS: usize = 12;
/// Hard cap for explicitly requested dense storage.
const DENSE_HARD_LIMIT: usize = 24;
const RENORMALIZE_DRIFT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Dense,
    Sparse,
}

impl Backend {
    pub fn auto(num_qubits: usize) -> Self {
        if num_qubits <= DENSE_MAX_QUBITS {
            Backend::Dense
        } else {
            Backend::Sparse
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Dense => "dense",
            Backend::Sparse => "sparse",
        }
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<Complex64>),
    Sparse(FxHashMap<u128, Complex64>),
}

#[derive(Debug, Clone)]
pub struct QuantumState {
    num_qubits: usize,
    storage: Storage,
}

#[derive(Debug, Clone, Copy)]
enum Kernel {
    Flip { mask: u128, cmask: u128, cval: u128 },
    Phase { mask: u128 },
    Hadamard { mask: u128 },
}

#[inline]
fn apply_run(run: &[Kernel], mut idx: u128) -> (u128, bool) {
    let mut negate = false;
    for k in run {
        match *k {
            Kernel::Flip { mask, cmask, cval } => {
                if idx & cmask == cval {
                    idx ^= mask;
                }
            }
            Kernel::Phase { mask } => {
                if idx & mask != 0 {
                    negate = !negate;
                }
            }
            Kernel::Hadamard { .. } => unreachable!("hadamard inside permutation run"),
        }
    }
    (idx, negate)
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::Argument(format!(
            "qubit count {num_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn fits(num_qubits: usize, index: u128) -> bool {
    num_qubits >= 128 || index >> num_qubits == 0
}

impl QuantumState {
    /// Computational basis state `|value⟩`.
    pub fn basis_state(num_qubits: usize, value: u128) -> Result<Self> {
        Self::basis_state_on(num_qubits, value, Backend::auto(num_qubits))
    }

    pub fn basis_state_on(num_qubits: usize, value: u128, backend: Backend) -> Result<Self> {
        check_width(num_qubits)?;
        if !fits(num_qubits, value) {
            return Err(Error::Range(format!(
                "basis index {value} needs more than {num_qubits} qubits"
            )));
        }
        Self::from_entries_unchecked(num_qubits, backend, [(value, Complex64::new(1.0, 0.0))])
    }

    /// Equal superposition of all `2^n` basis states.
    pub fn uniform_state(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::Argument("uniform state needs at least one qubit".into()));
        }
        if num_qubits > DENSE_HARD_LIMIT {
            return Err(Error::Argument(format!(
                "uniform state over {num_qubits} qubits is too large to store"
            )));
        }
        let amp = Complex64::new((0.5f64).powf(num_qubits as f64 / 2.0), 0.0);
        Self::from_entries_unchecked(
            num_qubits,
            Backend::auto(num_qubits),
            (0..1u128 << num_qubits).map(|i| (i, amp)),
        )
    }

    /// Builds a state from explicit amplitudes, which must already be normalized.
    pub fn from_amplitudes<I>(num_qubits: usize, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u128, Complex64)>,
    {
        check_width(num_qubits)?;
        let mut map: BTreeMap<u128, Complex64> = BTreeMap::new();
        for (idx, amp) in amplitudes {
            if !fits(num_qubits, idx) {
                return Err(Error::Range(format!(
                    "basis index {idx} needs more than {num_qubits} qubits"
                )));
            }
            if map.insert(idx, amp).is_some() {
                return Err(Error::Argument(format!("basis index {idx} given twice")));
            }
        }
        let norm: f64 = map.values().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Argument(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Self::from_entries_unchecked(num_qubits, Backend::auto(num_qubits), map)
    }

    /// Normalized equal-weight superposition over the listed basis indices.
    pub fn uniform_over(num_qubits: usize, indices: &[u128]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Argument("uniform superposition over an empty set".into()));
        }
        let amp = Complex64::new(1.0 / (indices.len() as f64).sqrt(), 0.0);
        Self::from_amplitudes(num_qubits, indices.iter().map(|&i| (i, amp)))
    }

    fn from_entries_unchecked<I>(num_qubits: usize, backend: Backend, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u128, Complex64)>,
    {
        let storage = match backend {
            Backend::Dense => {
                if num_qubits > DENSE_HARD_LIMIT {
                    return Err(Error::Argument(format!(
                        "dense storage limited to {DENSE_HARD_LIMIT} qubits"
                    )));
                }
                let mut v = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
                for (i, a) in entries {
                    if a.norm() >= PRUNE_THRESHOLD {
                        v[i as usize] = a;
                    }
                }
                Storage::Dense(v)
            }
            Backend::Sparse => Storage::Sparse(
                entries
                    .into_iter()
                    .filter(|(_, a)| a.norm() >= PRUNE_THRESHOLD)
                    .collect(),
            ),
        };
        Ok(Self {
            num_qubits,
            storage,
        })
    }

    /// Copy of the state in the requested storage.
    pub fn to_backend(&self, backend: Backend) -> Result<Self> {
        Self::from_entries_unchecked(self.num_qubits, backend, self.entries())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn backend(&self) -> Backend {
        match self.storage {
            Storage::Dense(_) => Backend::Dense,
            Storage::Sparse(_) => Backend::Sparse,
        }
    }

    pub fn amplitude(&self, index: u128) -> Complex64 {
        match &self.storage {
            Storage::Dense(v) => v.get(index as usize).copied().unwrap_or_default(),
            Storage::Sparse(m) => m.get(&index).copied().unwrap_or_default(),
        }
    }

    /// Number of stored non-zero amplitudes.
    pub fn support_len(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|a| **a != Complex64::default()).count(),
            Storage::Sparse(m) => m.len(),
        }
    }

    /// Non-zero amplitudes in ascending basis order.
    pub fn entries(&self) -> Vec<(u128, Complex64)> {
        match &self.storage {
            Storage::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != Complex64::default())
                .map(|(i, a)| (i as u128, *a))
                .collect(),
            Storage::Sparse(m) => {
                let mut e: Vec<_> = m.iter().map(|(k, v)| (*k, *v)).collect();
                e.sort_unstable_by_key(|(k, _)| *k);
                e
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    fn qubit_mask(&self, qubit: usize) -> u128 {
        1u128 << (self.num_qubits - 1 - qubit)
    }

    fn compile(&self, gate: &Gate) -> Kernel {
        let mask = self.qubit_mask(gate.target());
        match gate.kind() {
            GateKind::H => Kernel::Hadamard { mask },
            GateKind::Z => Kernel::Phase { mask },
            GateKind::X | GateKind::Mcx => {
                let (mut cmask, mut cval) = (0u128, 0u128);
                for c in gate.controls() {
                    let m = self.qubit_mask(c.qubit);
                    cmask |= m;
                    if c.polarity == Polarity::One {
                        cval |= m;
                    }
                }
                Kernel::Flip { mask, cmask, cval }
            }
        }
    }

    pub fn apply_gate(self, gate: &Gate) -> Result<Self> {
        self.apply_gates(std::slice::from_ref(gate))
    }

    pub fn apply_circuit(self, circuit: &Circuit) -> Result<Self> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::Circuit(format!(
                "{}-qubit circuit applied to {}-qubit state",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        self.apply_gates(circuit.gates())
    }

    /// Applies gates in order. Consumes the state and returns the evolved one.
    pub fn apply_gates(mut self, gates: &[Gate]) -> Result<Self> {
        for g in gates {
            g.validate(self.num_qubits)?;
        }
        let kernels: Vec<Kernel> = gates.iter().map(|g| self.compile(g)).collect();
        let mut start = 0;
        while start < kernels.len() {
            if let Kernel::Hadamard { mask } = kernels[start] {
                self.hadamard(mask);
                start += 1;
                continue;
            }
            let end = kernels[start..]
                .iter()
                .position(|k| matches!(k, Kernel::Hadamard { .. }))
                .map_or(kernels.len(), |p| start + p);
            self.permute(&kernels[start..end]);
            start = end;
        }
        self.renormalize_if_drifted();
        Ok(self)
    }

    fn permute(&mut self, run: &[Kernel]) {
        match &mut self.storage {
            Storage::Dense(v) => {
                let mut out = vec![Complex64::default(); v.len()];
                for (i, a) in v.iter().enumerate() {
                    if *a == Complex64::default() {
                        continue;
                    }
                    let (j, neg) = apply_run(run, i as u128);
                    out[j as usize] = if neg { -*a } else { *a };
                }
                *v = out;
            }
            Storage::Sparse(m) => {
                let mut out =
                    FxHashMap::with_capacity_and_hasher(m.len(), Default::default());
                for (i, a) in m.drain() {
                    let (j, neg) = apply_run(run, i);
                    out.insert(j, if neg { -a } else { a });
                }
                *m = out;
            }
        }
    }

    fn hadamard(&mut self, mask: u128) {
        let pair = |a0: Complex64, a1: Complex64| {
            ((a0 + a1) * FRAC_1_SQRT_2, (a0 - a1) * FRAC_1_SQRT_2)
        };
        let prune = |a: Complex64| {
            if a.norm() < PRUNE_THRESHOLD {
                Complex64::default()
            } else {
                a
            }
        };
        match &mut self.storage {
            Storage::Dense(v) => {
                let m = mask as usize;
                for i in 0..v.len() {
                    if i & m != 0 {
                        continue;
                    }
                    let (n0, n1) = pair(v[i], v[i | m]);
                    v[i] = prune(n0);
                    v[i | m] = prune(n1);
                }
            }
            Storage::Sparse(map) => {
                let mut out =
                    FxHashMap::with_capacity_and_hasher(map.len() * 2, Default::default());
                for &k in map.keys() {
                    let base = k & !mask;
                    if k & mask != 0 && map.contains_key(&base) {
                        continue;
                    }
                    let a0 = map.get(&base).copied().unwrap_or_default();
                    let a1 = map.get(&(base | mask)).copied().unwrap_or_default();
                    let (n0, n1) = pair(a0, a1);
                    if n0.norm() >= PRUNE_THRESHOLD {
                        out.insert(base, n0);
                    }
                    if n1.norm() >= PRUNE_THRESHOLD {
                        out.insert(base | mask, n1);
                    }
                }
                *map = out;
            }
        }
    }

    fn renormalize_if_drifted(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || (norm - 1.0).abs() <= RENORMALIZE_DRIFT {
            return;
        }
        let scale = 1.0 / norm;
        match &mut self.storage {
            Storage::Dense(v) => v.iter_mut().for_each(|a| *a *= scale),
            Storage::Sparse(m) => m.values_mut().for_each(|a| *a *= scale),
        }
    }

    /// Value of the listed qubits (first qubit most significant) in basis state `index`.
    fn read_bits(&self, index: u128, qubits: &[usize]) -> u64 {
        qubits.iter().fold(0u64, |acc, &q| {
            (acc << 1) | ((index & self.qubit_mask(q) != 0) as u64)
        })
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        if qubits.len() > 64 {
            return Err(Error::Range(format!(
                "cannot read {} qubits into a 64-bit outcome",
                qubits.len()
            )));
        }
        if let Some(q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::Layout(format!(
                "qubit {q} not present in {}-qubit state",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Exact outcome probabilities of measuring `register`.
    pub fn marginal(&self, register: &Register) -> Result<MeasurementDistribution> {
        let qubits: Vec<usize> = register.qubits().collect();
        self.marginal_of(register.name(), &qubits)
    }

    /// Exact outcome probabilities of measuring an arbitrary qubit list, read MSB-first.
    pub fn marginal_of(&self, label: &str, qubits: &[usize]) -> Result<MeasurementDistribution> {
        self.check_qubits(qubits)?;
        let mut entries = BTreeMap::new();
        for (idx, amp) in self.entries() {
            *entries.entry(self.read_bits(idx, qubits)).or_insert(0.0) += amp.norm_sqr();
        }
        Ok(MeasurementDistribution {
            register: label.to_string(),
            entries,
        })
    }

    /// Seeded shot sampling from the register's marginal.
    pub fn sample(&self, register: &Register, seed: u64, shots: usize) -> Result<BTreeMap<u64, usize>> {
        if shots == 0 {
            return Err(Error::Argument("shots must be at least 1".into()));
        }
        let dist = self.marginal(register)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(dist.sample_counts(&mut rng, shots))
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Argument(format!(
                "inner product of {}- and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .entries()
            .into_iter()
            .map(|(i, a)| a.conj() * other.amplitude(i))
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// `self ⊗ other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &QuantumState) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        check_width(n)?;
        let right = other.entries();
        let shift = other.num_qubits;
        let entries = self.entries().into_iter().flat_map(|(i, a)| {
            right.iter().map(move |&(j, b)| ((i << shift) | j, a * b))
        });
        Self::from_entries_unchecked(n, Backend::auto(n), entries.collect::<Vec<_>>())
    }

    /// Reflection `2|ψ⟩⟨ψ| - I` about `psi`, applied to this state.
    pub fn reflect_about(self, psi: &QuantumState) -> Result<Self> {
        let overlap = psi.inner(&self)?;
        let twice = overlap * 2.0;
        let mut out = self;
        match &mut out.storage {
            Storage::Dense(v) => {
                v.iter_mut().for_each(|a| *a = -*a);
                for (i, p) in psi.entries() {
                    let slot = &mut v[i as usize];
                    *slot += twice * p;
                    if slot.norm() < PRUNE_THRESHOLD {
                        *slot = Complex64::default();
                    }
                }
            }
            Storage::Sparse(m) => {
                m.values_mut().for_each(|a| *a = -*a);
                for (i, p) in psi.entries() {
                    let slot = m.entry(i).or_default();
                    *slot += twice * p;
                    if slot.norm() < PRUNE_THRESHOLD {
                        m.remove(&i);
                    }
                }
            }
        }
        out.renormalize_if_drifted();
        Ok(out)
    }

    /// State of the `keep` qubits (listed MSB-first) when every other qubit is |0⟩.
    ///
    /// Fails if any stored basis state has a discarded qubit set.
    pub fn reduce_to(&self, keep: &[usize]) -> Result<Self> {
        self.check_qubits(keep)?;
        let kept_mask = keep.iter().fold(0u128, |m, &q| m | self.qubit_mask(q));
        let mut out = Vec::new();
        for (idx, amp) in self.entries() {
            if idx & !kept_mask != 0 {
                return Err(Error::Argument(format!(
                    "basis state {idx} has a discarded qubit set"
                )));
            }
            out.push((self.read_bits(idx, keep) as u128, amp));
        }
        Self::from_amplitudes(keep.len(), out)
    }
}

/// Exact outcome probabilities for one measured register.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    register: String,
    entries: BTreeMap<u64, f64>,
}

impl MeasurementDistribution {
    pub fn new(register: impl Into<String>, entries: BTreeMap<u64, f64>) -> Self {
        Self {
            register: register.into(),
            entries,
        }
    }

    pub fn register(&self) -> &str {
        &self.register
    }

    pub fn entries(&self) -> &BTreeMap<u64, f64> {
        &self.entries
    }

    pub fn probability(&self, outcome: u64) -> f64 {
        self.entries.get(&outcome).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Most likely outcome; ties go to the smaller value.
    pub fn top(&self) -> Option<(u64, f64)> {
        self.entries
            .iter()
            .fold(None, |best: Option<(u64, f64)>, (&v, &p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((v, p)),
            })
    }

    /// Total probability of outcomes satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(u64) -> bool) -> f64 {
        self.entries
            .iter()
            .filter(|(v, _)| pred(**v))
            .map(|(_, p)| p)
            .sum()
    }

    /// Draws one outcome.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let total = self.total();
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (&v, &p) in &self.entries {
            acc += p;
            last = v;
            if r < acc {
                return v;
            }
        }
        last
    }

    pub fn sample_counts<R: Rng + ?Sized>(&self, rng: &mut R, shots: usize) -> BTreeMap<u64, usize> {
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(self.sample_one(rng)).or_insert(0) += 1;
        }
        counts
    }
}
