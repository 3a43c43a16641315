//! Quantum bit-string comparator.
//!
//! Two equal-width registers `a` and `b` are compared from the most
//! significant bit down. Output qubit `o1` ends in |1⟩ when `a > b`, `o2`
//! ends in |1⟩ when `a < b`, and both stay |0⟩ when the strings are equal.
//!
//! Per position `i` a unit cell writes two indicator ancillas
//! `g_i = a_i ∧ ¬b_i` and `l_i = ¬a_i ∧ b_i`. An enable chain
//! `e_{i+1} = e_i ∧ ¬g_i ∧ ¬l_i` (an on-zero Toffoli at the first position)
//! hands the decision to position `i+1` only while every higher position was
//! equal; `e_i ∧ g_i` and `e_i ∧ l_i` are then copied onto `o1` / `o2`. The
//! least significant position has no enable successor. After the copy the
//! indicator and enable ancillas are uncomputed, so the comparator on its
//! own only changes `o1` and `o2`.
//!
//! Ancilla budget: `2n` indicators plus `n - 1` enables, i.e. `3n - 1`.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Control, Layout};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComparatorOutcome {
    /// `a > b`: `o1 = 1, o2 = 0`.
    Gt,
    /// `a < b`: `o1 = 0, o2 = 1`.
    Lt,
    /// `a = b`: `o1 = o2 = 0`.
    Eq,
}

impl ComparatorOutcome {
    /// `(o1, o2)` bits for this outcome.
    pub fn outputs(self) -> (bool, bool) {
        match self {
            ComparatorOutcome::Gt => (true, false),
            ComparatorOutcome::Lt => (false, true),
            ComparatorOutcome::Eq => (false, false),
        }
    }
}

/// Relation of register `a` to register `b` that a predicate flip tests for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Gt,
    Lt,
    Eq,
    Leq,
    Geq,
    Neq,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Gt,
        Relation::Lt,
        Relation::Eq,
        Relation::Leq,
        Relation::Geq,
        Relation::Neq,
    ];

    pub fn holds(self, a: u64, b: u64) -> bool {
        match self {
            Relation::Gt => a > b,
            Relation::Lt => a < b,
            Relation::Eq => a == b,
            Relation::Leq => a <= b,
            Relation::Geq => a >= b,
            Relation::Neq => a != b,
        }
    }

    /// Control sets on the comparator outputs; the target is flipped once for
    /// every set that fires. The sets of one relation are mutually exclusive.
    pub fn output_controls(self, o1: usize, o2: usize) -> Vec<Vec<Control>> {
        match self {
            Relation::Gt => vec![vec![Control::one(o1)]],
            Relation::Lt => vec![vec![Control::one(o2)]],
            Relation::Eq => vec![vec![Control::zero(o1), Control::zero(o2)]],
            // o1 = 0 ⟺ a ≤ b
            Relation::Leq => vec![vec![Control::zero(o1)]],
            Relation::Geq => vec![vec![Control::zero(o2)]],
            Relation::Neq => vec![vec![Control::one(o1)], vec![Control::one(o2)]],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::Gt => "gt",
            Relation::Lt => "lt",
            Relation::Eq => "eq",
            Relation::Leq => "leq",
            Relation::Geq => "geq",
            Relation::Neq => "neq",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "gt" | ">" | "greater" => Relation::Gt,
            "lt" | "<" | "less" => Relation::Lt,
            "eq" | "=" | "==" | "equal" => Relation::Eq,
            "leq" | "le" | "<=" => Relation::Leq,
            "geq" | "ge" | ">=" => Relation::Geq,
            "neq" | "ne" | "!=" => Relation::Neq,
            _ => return Err(Error::Argument(format!("unknown relation `{s}`"))),
        })
    }
}

/// Classical reference for the comparator.
pub fn compare_classical(a: u64, b: u64, n: usize) -> Result<ComparatorOutcome> {
    if n == 0 || n > 64 {
        return Err(Error::Argument(format!("width {n} outside 1..=64")));
    }
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if a > limit || b > limit {
        return Err(Error::Argument(format!("operands {a}, {b} exceed {n} bits")));
    }
    Ok(match a.cmp(&b) {
        std::cmp::Ordering::Greater => ComparatorOutcome::Gt,
        std::cmp::Ordering::Less => ComparatorOutcome::Lt,
        std::cmp::Ordering::Equal => ComparatorOutcome::Eq,
    })
}

/// Placement of a comparator inside a circuit layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparatorLayout {
    layout: Layout,
    a_reg: String,
    b_reg: String,
    a: Vec<usize>,
    b: Vec<usize>,
    o1: usize,
    o2: usize,
    ancillas: Vec<usize>,
}

impl ComparatorLayout {
    pub fn ancillas_required(width: usize) -> usize {
        3 * width - 1
    }

    /// Places a comparator on existing registers of `layout`.
    ///
    /// `anc_reg` must provide at least `3n - 1` qubits; only the first
    /// `3n - 1` are used.
    pub fn place(
        layout: &Layout,
        a_reg: &str,
        b_reg: &str,
        o1_reg: &str,
        o2_reg: &str,
        anc_reg: &str,
    ) -> Result<Self> {
        let names = [a_reg, b_reg, o1_reg, o2_reg, anc_reg];
        for (i, x) in names.iter().enumerate() {
            if names[i + 1..].contains(x) {
                return Err(Error::Layout(format!("register `{x}` used twice")));
            }
        }
        let a = layout.register(a_reg)?;
        let b = layout.register(b_reg)?;
        if a.width() != b.width() {
            return Err(Error::Layout(format!(
                "comparator operands `{a_reg}` ({}) and `{b_reg}` ({}) differ in width",
                a.width(),
                b.width()
            )));
        }
        let o1 = layout.register(o1_reg)?;
        let o2 = layout.register(o2_reg)?;
        if o1.width() != 1 || o2.width() != 1 {
            return Err(Error::Layout("comparator outputs must be single qubits".into()));
        }
        let anc = layout.register(anc_reg)?;
        let need = Self::ancillas_required(a.width());
        if anc.width() < need {
            return Err(Error::Layout(format!(
                "comparator of width {} needs {need} ancillas, `{anc_reg}` has {}",
                a.width(),
                anc.width()
            )));
        }
        Ok(Self {
            layout: layout.clone(),
            a_reg: a_reg.to_string(),
            b_reg: b_reg.to_string(),
            a: a.qubits().collect(),
            b: b.qubits().collect(),
            o1: o1.start(),
            o2: o2.start(),
            ancillas: anc.qubits().take(need).collect(),
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn width(&self) -> usize {
        self.a.len()
    }

    pub fn a_reg(&self) -> &str {
        &self.a_reg
    }

    pub fn b_reg(&self) -> &str {
        &self.b_reg
    }

    pub fn o1(&self) -> usize {
        self.o1
    }

    pub fn o2(&self) -> usize {
        self.o2
    }

    pub fn ancillas(&self) -> &[usize] {
        &self.ancillas
    }

    pub fn ancilla_count(&self) -> usize {
        self.ancillas.len()
    }

    /// Every qubit the comparator reads or writes.
    pub fn footprint(&self) -> impl Iterator<Item = usize> + '_ {
        self.a
            .iter()
            .chain(&self.b)
            .chain([&self.o1, &self.o2])
            .chain(&self.ancillas)
            .copied()
    }

    // Position 0 is the most significant bit.
    fn greater(&self, i: usize) -> usize {
        self.ancillas[2 * i]
    }

    fn less(&self, i: usize) -> usize {
        self.ancillas[2 * i + 1]
    }

    fn enable(&self, i: usize) -> Option<usize> {
        (i > 0).then(|| self.ancillas[2 * self.width() + i - 1])
    }
}

fn append_unit_cell(c: &mut Circuit, cmp: &ComparatorLayout, i: usize) -> Result<()> {
    let (a, b) = (cmp.a[i], cmp.b[i]);
    c.toffoli(Control::one(a), Control::zero(b), cmp.greater(i))?;
    c.toffoli(Control::zero(a), Control::one(b), cmp.less(i))?;
    Ok(())
}

/// Unit cell for position `position` (0 = most significant): writes the
/// `a_i > b_i` and `a_i < b_i` indicators onto fresh ancillas.
pub fn build_unit_cell(position: usize, cmp: &ComparatorLayout) -> Result<Circuit> {
    if position >= cmp.width() {
        return Err(Error::Layout(format!(
            "position {position} outside {}-bit comparator",
            cmp.width()
        )));
    }
    let mut c = Circuit::new(cmp.layout.clone());
    append_unit_cell(&mut c, cmp, position)?;
    Ok(c)
}

/// Indicators and enable chain; leaves the ancillas dirty.
fn indicator_stage(cmp: &ComparatorLayout) -> Result<Circuit> {
    let n = cmp.width();
    let mut c = Circuit::new(cmp.layout.clone());
    for i in 0..n {
        append_unit_cell(&mut c, cmp, i)?;
        if i + 1 < n {
            let mut controls = vec![Control::zero(cmp.greater(i)), Control::zero(cmp.less(i))];
            if let Some(e) = cmp.enable(i) {
                controls.insert(0, Control::one(e));
            }
            c.mcx(controls, cmp.enable(i + 1).expect("enable past position 0"))?;
        }
    }
    Ok(c)
}

/// Comparator on a placed layout: `|a⟩|b⟩|0⟩|0⟩|0…⟩ -> |a⟩|b⟩|o1⟩|o2⟩|0…⟩`.
pub fn comparator_circuit(cmp: &ComparatorLayout) -> Result<Circuit> {
    let stage = indicator_stage(cmp)?;
    let mut c = stage.clone();
    for i in 0..cmp.width() {
        match cmp.enable(i) {
            None => {
                c.cnot(cmp.greater(i), cmp.o1)?;
                c.cnot(cmp.less(i), cmp.o2)?;
            }
            Some(e) => {
                c.toffoli(Control::one(e), Control::one(cmp.greater(i)), cmp.o1)?;
                c.toffoli(Control::one(e), Control::one(cmp.less(i)), cmp.o2)?;
            }
        }
    }
    c.append_circuit(&stage.inverse())?;
    Ok(c)
}

/// Standalone `n`-bit comparator over registers `a`, `b`, `o1`, `o2`, `anc`.
pub fn build_comparator(n: usize) -> Result<(Circuit, ComparatorLayout)> {
    if n == 0 {
        return Err(Error::Argument("comparator width must be at least 1".into()));
    }
    let layout = Layout::new(&[
        ("a", n),
        ("b", n),
        ("o1", 1),
        ("o2", 1),
        ("anc", ComparatorLayout::ancillas_required(n)),
    ])?;
    let cmp = ComparatorLayout::place(&layout, "a", "b", "o1", "o2", "anc")?;
    Ok((comparator_circuit(&cmp)?, cmp))
}

/// Compute, flip `flip_target` when `a <relation> b`, uncompute.
pub fn build_predicate_flip(
    cmp: &ComparatorLayout,
    relation: Relation,
    flip_target: usize,
) -> Result<Circuit> {
    if flip_target >= cmp.layout.num_qubits() {
        return Err(Error::Layout(format!("flip target {flip_target} out of range")));
    }
    if cmp.footprint().any(|q| q == flip_target) {
        return Err(Error::Layout(format!(
            "flip target {flip_target} lies inside the comparator footprint"
        )));
    }
    let compute = comparator_circuit(cmp)?;
    let mut c = compute.clone();
    for controls in relation.output_controls(cmp.o1, cmp.o2) {
        c.mcx(controls, flip_target)?;
    }
    c.append_circuit(&compute.inverse())?;
    Ok(c)
}
