//! Reversible ripple-carry arithmetic built from Toffoli and CNOT gates.
//!
//! The adder is the carry/sum ladder of Vedral, Barenco and Ekert: carries
//! ripple up into ancillas, the top carry is XOR-ed into the most significant
//! sum bit, and the ladder is walked back down writing sums and clearing the
//! carries. The sum register may be wider than the addend; missing addend
//! bits are treated as constant zero, which keeps the result exact modulo
//! `2^width(sum)`.
//!
//! The multiplier is shift-and-add: for every bit `j` of `y`, add `x · 2^j`
//! into the product register under control of `y_j`.

use crate::circuit::{Circuit, Control, Gate, Layout};
use crate::error::{Error, Result};

/// Register placement of an adder or multiplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithLayout {
    layout: Layout,
    x: Vec<usize>,
    y: Vec<usize>,
    out: Vec<usize>,
    carries: Vec<usize>,
}

impl ArithLayout {
    /// Places a multiplier on `x_reg`, `y_reg` (width n), `out_reg` (width 2n)
    /// and `carry_reg` (at least 2n - 2 qubits; may be `None` when n = 1).
    pub fn place_multiplier(
        layout: &Layout,
        x_reg: &str,
        y_reg: &str,
        out_reg: &str,
        carry_reg: Option<&str>,
    ) -> Result<Self> {
        let x = layout.register(x_reg)?;
        let y = layout.register(y_reg)?;
        let out = layout.register(out_reg)?;
        let n = x.width();
        if y.width() != n || out.width() != 2 * n {
            return Err(Error::Layout(format!(
                "multiplier needs widths n, n, 2n; got {}, {}, {}",
                n,
                y.width(),
                out.width()
            )));
        }
        let carries = Self::carry_qubits(layout, carry_reg, 2 * n - 2)?;
        let arith = Self {
            layout: layout.clone(),
            x: x.qubits().collect(),
            y: y.qubits().collect(),
            out: out.qubits().collect(),
            carries,
        };
        arith.check_disjoint()?;
        Ok(arith)
    }

    /// Places an adder of an n-bit `x_reg` into an (n+1)-bit `sum_reg`.
    pub fn place_adder(
        layout: &Layout,
        x_reg: &str,
        sum_reg: &str,
        carry_reg: Option<&str>,
    ) -> Result<Self> {
        let x = layout.register(x_reg)?;
        let s = layout.register(sum_reg)?;
        if s.width() != x.width() + 1 {
            return Err(Error::Layout(format!(
                "sum register must be one bit wider than the addend ({} vs {})",
                s.width(),
                x.width()
            )));
        }
        let carries = Self::carry_qubits(layout, carry_reg, x.width() - 1)?;
        let arith = Self {
            layout: layout.clone(),
            x: x.qubits().collect(),
            y: Vec::new(),
            out: s.qubits().collect(),
            carries,
        };
        arith.check_disjoint()?;
        Ok(arith)
    }

    fn carry_qubits(layout: &Layout, carry_reg: Option<&str>, need: usize) -> Result<Vec<usize>> {
        let have: Vec<usize> = match carry_reg {
            Some(name) => layout.register(name)?.qubits().collect(),
            None => Vec::new(),
        };
        if have.len() < need {
            return Err(Error::Layout(format!(
                "{need} carry ancillas required, {} available",
                have.len()
            )));
        }
        Ok(have.into_iter().take(need).collect())
    }

    fn check_disjoint(&self) -> Result<()> {
        let mut all: Vec<usize> = self.footprint().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Layout("arithmetic registers overlap".into()));
        }
        Ok(())
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    /// Sum register for adders, product register for multipliers.
    pub fn out(&self) -> &[usize] {
        &self.out
    }

    pub fn carries(&self) -> &[usize] {
        &self.carries
    }

    pub fn footprint(&self) -> impl Iterator<Item = usize> + '_ {
        self.x
            .iter()
            .chain(&self.y)
            .chain(&self.out)
            .chain(&self.carries)
            .copied()
    }
}

/// Appends `s += x (mod 2^|s|)` with every gate additionally controlled by `controls`.
///
/// `x` and `s` are listed most significant qubit first, `|s| > |x|`, and
/// `carries` must hold at least `|s| - 2` clean ancillas.
pub fn append_adder(
    c: &mut Circuit,
    x: &[usize],
    s: &[usize],
    carries: &[usize],
    controls: &[Control],
) -> Result<()> {
    let n = x.len();
    let w = s.len();
    if n == 0 || w <= n {
        return Err(Error::Argument(format!(
            "adder needs a non-empty addend and a wider sum register ({n} vs {w})"
        )));
    }
    let m = w - 1;
    if carries.len() < m - 1 {
        return Err(Error::Layout(format!(
            "adder into {w} bits needs {} carries, got {}",
            m - 1,
            carries.len()
        )));
    }
    // LSB-indexed views.
    let xb = |i: usize| (i < n).then(|| x[n - 1 - i]);
    let sb = |i: usize| s[w - 1 - i];
    let cb = |i: usize| match i {
        0 => None,
        i if i == m => Some(s[0]),
        i => Some(carries[i - 1]),
    };

    let mut gates = Vec::new();
    let carry = |i: usize, out: &mut Vec<Gate>| {
        let next = cb(i + 1).expect("carry above position 0");
        if let Some(xi) = xb(i) {
            out.push(Gate::toffoli(Control::one(xi), Control::one(sb(i)), next));
            out.push(Gate::cnot(xi, sb(i)));
        }
        if let Some(ci) = cb(i) {
            out.push(Gate::toffoli(Control::one(ci), Control::one(sb(i)), next));
        }
    };
    let sum = |i: usize, out: &mut Vec<Gate>| {
        if let Some(xi) = xb(i) {
            out.push(Gate::cnot(xi, sb(i)));
        }
        if let Some(ci) = cb(i) {
            out.push(Gate::cnot(ci, sb(i)));
        }
    };

    for i in 0..m {
        carry(i, &mut gates);
    }
    if let Some(xi) = xb(m - 1) {
        gates.push(Gate::cnot(xi, sb(m - 1)));
    }
    sum(m - 1, &mut gates);
    for i in (0..m - 1).rev() {
        let mut undo = Vec::new();
        carry(i, &mut undo);
        gates.extend(undo.into_iter().rev());
        sum(i, &mut gates);
    }

    for g in gates {
        c.append(g.controlled_by(controls)?)?;
    }
    Ok(())
}

/// `|x⟩|s⟩ -> |x⟩|s + x mod 2^(n+1)⟩` over registers `x` (n), `s` (n+1), `carry` (n-1).
pub fn build_adder(n: usize) -> Result<(Circuit, ArithLayout)> {
    build_adder_layout(n, false).and_then(|(layout, _)| {
        let arith = ArithLayout::place_adder(&layout, "x", "s", (n > 1).then_some("carry"))?;
        let mut c = Circuit::new(layout);
        append_adder(&mut c, &arith.x, &arith.out, &arith.carries, &[])?;
        Ok((c, arith))
    })
}

fn build_adder_layout(n: usize, controlled: bool) -> Result<(Layout, Option<usize>)> {
    if n == 0 {
        return Err(Error::Argument("adder width must be at least 1".into()));
    }
    let mut regs: Vec<(&str, usize)> = Vec::new();
    if controlled {
        regs.push(("ctl", 1));
    }
    regs.push(("x", n));
    regs.push(("s", n + 1));
    if n > 1 {
        regs.push(("carry", n - 1));
    }
    let layout = Layout::new(&regs)?;
    let ctl = controlled.then(|| layout.register("ctl").map(|r| r.start())).transpose()?;
    Ok((layout, ctl))
}

/// The adder of `arith`, active only when `control` is |1⟩.
pub fn controlled_adder(arith: &ArithLayout, control: usize) -> Result<Circuit> {
    if control >= arith.layout.num_qubits() {
        return Err(Error::Layout(format!("control {control} out of range")));
    }
    if arith.footprint().any(|q| q == control) {
        return Err(Error::Layout(format!(
            "control {control} overlaps the adder registers"
        )));
    }
    let mut c = Circuit::new(arith.layout.clone());
    append_adder(&mut c, &arith.x, &arith.out, &arith.carries, &[Control::one(control)])?;
    Ok(c)
}

/// Controlled adder over registers `ctl` (1), `x` (n), `s` (n+1), `carry` (n-1).
/// Returns the control qubit index alongside.
pub fn build_controlled_adder(n: usize) -> Result<(Circuit, ArithLayout, usize)> {
    let (layout, ctl) = build_adder_layout(n, true)?;
    let ctl = ctl.expect("controlled layout has a control");
    let arith = ArithLayout::place_adder(&layout, "x", "s", (n > 1).then_some("carry"))?;
    Ok((controlled_adder(&arith, ctl)?, arith, ctl))
}

/// Shift-and-add multiplier on a placed layout.
///
/// `|x⟩|y⟩|z⟩ -> |x⟩|y⟩|z + x·y mod 2^(2n)⟩`; with `z = 0` this is the exact product.
pub fn multiplier_circuit(arith: &ArithLayout) -> Result<Circuit> {
    let n = arith.x.len();
    if arith.y.len() != n || arith.out.len() != 2 * n {
        return Err(Error::Layout("layout was not placed as a multiplier".into()));
    }
    let mut c = Circuit::new(arith.layout.clone());
    for j in 0..n {
        let y_j = arith.y[n - 1 - j];
        // product bits j..2n, most significant first
        let window = &arith.out[..2 * n - j];
        append_adder(&mut c, &arith.x, window, &arith.carries, &[Control::one(y_j)])?;
    }
    Ok(c)
}

/// Standalone multiplier over registers `x` (n), `y` (n), `out` (2n), `carry` (2n-2).
pub fn build_multiplier(n: usize) -> Result<(Circuit, ArithLayout)> {
    if n == 0 {
        return Err(Error::Argument("multiplier width must be at least 1".into()));
    }
    let mut regs = vec![("x", n), ("y", n), ("out", 2 * n)];
    if n > 1 {
        regs.push(("carry", 2 * n - 2));
    }
    let layout = Layout::new(&regs)?;
    let arith =
        ArithLayout::place_multiplier(&layout, "x", "y", "out", (n > 1).then_some("carry"))?;
    Ok((multiplier_circuit(&arith)?, arith))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::QuantumState;

    fn index_of(layout: &Layout, values: &[(&str, u64)]) -> u128 {
        let n = layout.num_qubits();
        values.iter().fold(0u128, |acc, (name, v)| {
            let r = layout.register(name).unwrap();
            acc | (*v as u128) << (n - r.start() - r.width())
        })
    }

    fn read(layout: &Layout, idx: u128, name: &str) -> u64 {
        let r = layout.register(name).unwrap();
        let n = layout.num_qubits();
        ((idx >> (n - r.start() - r.width())) & ((1u128 << r.width()) - 1)) as u64
    }

    fn run(c: &Circuit, values: &[(&str, u64)]) -> u128 {
        let idx = index_of(c.layout(), values);
        let out = QuantumState::basis_state(c.num_qubits(), idx)
            .unwrap()
            .apply_circuit(c)
            .unwrap();
        let e = out.entries();
        assert_eq!(e.len(), 1);
        e[0].0
    }

    #[test]
    fn adder_small_cases() {
        let (c, _) = build_adder(3).unwrap();
        let l = c.layout();
        assert_eq!(read(l, run(&c, &[("x", 0), ("s", 6)]), "s"), 6);
        let out = run(&c, &[("x", 3), ("s", 5)]);
        assert_eq!(read(l, out, "s"), 8);
        assert_eq!(read(l, out, "x"), 3);
        assert_eq!(read(l, out, "carry"), 0);
    }

    #[test]
    fn adder_wraps_modulo_sum_width() {
        let (c, _) = build_adder(2).unwrap();
        let out = run(&c, &[("x", 3), ("s", 7)]);
        assert_eq!(read(c.layout(), out, "s"), (7 + 3) % 8);
    }

    #[test]
    fn one_bit_adder_has_no_carries() {
        let (c, arith) = build_adder(1).unwrap();
        assert!(arith.carries().is_empty());
        for x in 0..2 {
            for s in 0..4 {
                let out = run(&c, &[("x", x), ("s", s)]);
                assert_eq!(read(c.layout(), out, "s"), (s + x) % 4);
            }
        }
    }

    #[test]
    fn controlled_adder_respects_control() {
        let (c, _, _) = build_controlled_adder(3).unwrap();
        let l = c.layout();
        for x in 0..8 {
            for s in 0..16 {
                let off = run(&c, &[("ctl", 0), ("x", x), ("s", s)]);
                assert_eq!(off, index_of(l, &[("x", x), ("s", s)]));
                let on = run(&c, &[("ctl", 1), ("x", x), ("s", s)]);
                assert_eq!(read(l, on, "s"), (s + x) % 16);
                assert_eq!(read(l, on, "carry"), 0);
            }
        }
    }

    #[test]
    fn control_overlap_is_rejected() {
        let (_, arith) = build_adder(2).unwrap();
        assert!(matches!(
            controlled_adder(&arith, arith.x()[0]),
            Err(Error::Layout(_))
        ));
    }

    #[test]
    fn multiplier_examples() {
        let (c, _) = build_multiplier(4).unwrap();
        let l = c.layout();
        let out = run(&c, &[("x", 3), ("y", 5)]);
        assert_eq!(read(l, out, "out"), 15);
        let out = run(&c, &[("x", 11), ("y", 0)]);
        assert_eq!(read(l, out, "out"), 0);
    }

    #[test]
    fn multiplier_accumulates_into_dirty_output() {
        let (c, _) = build_multiplier(3).unwrap();
        let l = c.layout();
        for (x, y, z) in [(7, 7, 63), (5, 6, 40), (3, 2, 1)] {
            let out = run(&c, &[("x", x), ("y", y), ("out", z)]);
            assert_eq!(read(l, out, "out"), (z + x * y) % 64, "{x} {y} {z}");
            assert_eq!(read(l, out, "carry"), 0);
        }
    }
}
