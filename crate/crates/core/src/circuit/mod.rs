//! Gate-level circuit representation.
//!
//! Qubits are grouped into named, contiguous registers. Inside a register the
//! first qubit is the most significant bit of the register's value, and the
//! whole circuit follows the same convention: qubit 0 is the most significant
//! bit of a basis-state index.

mod gate;
mod lift;

use std::fmt;
use std::ops::Range;

pub use gate::{Control, Gate, GateKind, Polarity};
pub use lift::{lift_function, FunctionTable};

use crate::error::{Error, Result};

/// Widest state the simulator can index (basis indices are `u128`).
pub const MAX_QUBITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    name: String,
    start: usize,
    width: usize,
}

impl Register {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn qubits(&self) -> Range<usize> {
        self.start..self.start + self.width
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.qubits().contains(&qubit)
    }

    /// Qubit holding bit `k` of the register value, counting from the least significant bit.
    pub fn bit(&self, k: usize) -> usize {
        assert!(k < self.width, "bit {k} outside register `{}`", self.name);
        self.start + self.width - 1 - k
    }

    pub fn lsb(&self) -> usize {
        self.bit(0)
    }

    /// Largest value the register can hold plus one.
    pub fn capacity(&self) -> u128 {
        1u128 << self.width
    }

    pub fn check_value(&self, value: u64) -> Result<()> {
        if (value as u128) < self.capacity() {
            Ok(())
        } else {
            Err(Error::Range(format!(
                "{value} does not fit {}-bit register `{}`",
                self.width, self.name
            )))
        }
    }

    /// Controls that fire exactly when the register holds `value`.
    pub fn controls_for(&self, value: u64) -> Vec<Control> {
        (0..self.width)
            .rev()
            .map(|k| Control {
                qubit: self.bit(k),
                polarity: Polarity::for_bit(value >> k & 1 == 1),
            })
            .collect()
    }
}

/// Register map of a circuit or state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    num_qubits: usize,
    registers: Vec<Register>,
}

impl Layout {
    /// Assigns contiguous qubit ranges in declaration order.
    pub fn new<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        let mut out: Vec<Register> = Vec::with_capacity(registers.len());
        let mut next = 0;
        for (name, width) in registers {
            let name = name.as_ref();
            if *width == 0 {
                return Err(Error::Layout(format!("register `{name}` has zero width")));
            }
            if out.iter().any(|r| r.name == name) {
                return Err(Error::Layout(format!("duplicate register `{name}`")));
            }
            out.push(Register {
                name: name.to_string(),
                start: next,
                width: *width,
            });
            next += width;
        }
        if next == 0 {
            return Err(Error::Layout("layout needs at least one register".into()));
        }
        if next > MAX_QUBITS {
            return Err(Error::Layout(format!(
                "{next} qubits exceed the simulator limit of {MAX_QUBITS}"
            )));
        }
        Ok(Self {
            num_qubits: next,
            registers: out,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Layout(format!("unknown register `{name}`")))
    }
}

/// Ordered gate list over a fixed [`Layout`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    layout: Layout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: Layout) -> Self {
        Self {
            layout,
            gates: Vec::new(),
        }
    }

    /// Empty circuit over freshly declared registers.
    pub fn with_registers<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        Ok(Self::new(Layout::new(registers)?))
    }

    /// Empty circuit sharing this circuit's layout.
    pub fn empty_like(&self) -> Self {
        Self::new(self.layout.clone())
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_qubits
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.layout.register(name)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn append(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.num_qubits())?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<&mut Self> {
        for g in gates {
            self.append(g)?;
        }
        Ok(self)
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.append(Gate::x(q))
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.append(Gate::h(q))
    }

    pub fn z(&mut self, q: usize) -> Result<&mut Self> {
        self.append(Gate::z(q))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.append(Gate::cnot(control, target))
    }

    pub fn toffoli(&mut self, c1: Control, c2: Control, target: usize) -> Result<&mut Self> {
        self.append(Gate::toffoli(c1, c2, target))
    }

    pub fn mcx(&mut self, controls: Vec<Control>, target: usize) -> Result<&mut Self> {
        self.append(Gate::mcx(controls, target))
    }

    /// X on every qubit of `register` whose bit is set in `value`.
    pub fn load_value(&mut self, register: &Register, value: u64) -> Result<&mut Self> {
        register.check_value(value)?;
        for k in 0..register.width() {
            if value >> k & 1 == 1 {
                self.x(register.bit(k))?;
            }
        }
        Ok(self)
    }

    /// Appends another circuit with the same layout.
    pub fn append_circuit(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.layout != self.layout {
            return Err(Error::Layout("cannot append circuit with a different layout".into()));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(self)
    }

    /// Appends `other`, sending its qubit `i` to `qubit_map[i]` of this circuit.
    pub fn embed(&mut self, other: &Circuit, qubit_map: &[usize]) -> Result<&mut Self> {
        if qubit_map.len() != other.num_qubits() {
            return Err(Error::Layout(format!(
                "remap table has {} entries for a {}-qubit circuit",
                qubit_map.len(),
                other.num_qubits()
            )));
        }
        for g in &other.gates {
            self.append(g.remapped(qubit_map)?)?;
        }
        Ok(self)
    }

    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        let mut out = self.clone();
        out.append_circuit(other)?;
        Ok(out)
    }

    /// Reverses the gate list; all primitives are self-inverse.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registers_are_assigned_in_order() {
        let c = Circuit::with_registers(&[("a", 3), ("b", 3), ("anc", 10)]).unwrap();
        assert_eq!(c.num_qubits(), 16);
        assert!(c.is_empty());
        let b = c.register("b").unwrap();
        assert_eq!(b.qubits(), 3..6);
        assert_eq!(b.lsb(), 5);
        assert_eq!(b.bit(2), 3);
        assert_eq!(Circuit::with_registers(&[("q", 1)]).unwrap().num_qubits(), 1);
    }

    #[test]
    fn layout_errors() {
        assert!(matches!(
            Layout::new(&[("a", 2), ("a", 1)]),
            Err(Error::Layout(_))
        ));
        assert!(matches!(Layout::new(&[("a", 0)]), Err(Error::Layout(_))));
        assert!(matches!(Layout::new(&[("a", 129)]), Err(Error::Layout(_))));
        let l = Layout::new(&[("a", 2)]).unwrap();
        assert!(matches!(l.register("zz"), Err(Error::Layout(_))));
    }

    #[test]
    fn append_rejects_clashes() {
        let mut c = Circuit::with_registers(&[("q", 2)]).unwrap();
        assert!(c.cnot(0, 0).is_err());
        assert!(c.x(2).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn compose_and_inverse() {
        let mut c = Circuit::with_registers(&[("q", 3)]).unwrap();
        c.h(0).unwrap().cnot(0, 1).unwrap().x(2).unwrap();
        let empty = c.empty_like();
        assert_eq!(c.compose(&empty).unwrap(), c);
        assert_eq!(c.inverse().inverse(), c);
        assert_eq!(c.compose(&c.inverse()).unwrap().len(), 6);

        let mut single = c.empty_like();
        single.x(1).unwrap();
        assert_eq!(single.inverse(), single);

        let other = Circuit::with_registers(&[("r", 3)]).unwrap();
        assert!(matches!(c.compose(&other), Err(Error::Layout(_))));
    }

    #[test]
    fn controls_for_encodes_value() {
        let c = Circuit::with_registers(&[("pad", 1), ("r", 3)]).unwrap();
        let r = c.register("r").unwrap();
        let ctl = r.controls_for(0b101);
        assert_eq!(
            ctl,
            vec![Control::one(1), Control::zero(2), Control::one(3)]
        );
    }

    #[test]
    fn embed_remaps_qubits() {
        let mut inner = Circuit::with_registers(&[("q", 2)]).unwrap();
        inner.cnot(0, 1).unwrap();
        let mut outer = Circuit::with_registers(&[("w", 4)]).unwrap();
        outer.embed(&inner, &[3, 1]).unwrap();
        assert_eq!(outer.to_string(), "MCX t=1 c=+3\n");
        assert!(outer.embed(&inner, &[0]).is_err());
    }
}
