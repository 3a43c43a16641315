use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which control value activates a controlled gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires when the control qubit is |1⟩.
    One,
    /// Fires when the control qubit is |0⟩ ("activated in zero").
    Zero,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::One => Polarity::Zero,
            Polarity::Zero => Polarity::One,
        }
    }

    /// Polarity that matches the classical bit `bit`.
    pub fn for_bit(bit: bool) -> Self {
        if bit {
            Polarity::One
        } else {
            Polarity::Zero
        }
    }

    pub fn is_satisfied_by(self, bit: bool) -> bool {
        match self {
            Polarity::One => bit,
            Polarity::Zero => !bit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::One,
        }
    }

    pub fn zero(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    H,
    Z,
    /// Multi-controlled X with per-control polarity; covers CNOT and Toffoli.
    Mcx,
}

/// A single primitive. Every primitive in the gate set is its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    target: usize,
    controls: Vec<Control>,
}

impl Gate {
    pub fn x(target: usize) -> Self {
        Self {
            kind: GateKind::X,
            target,
            controls: Vec::new(),
        }
    }

    pub fn h(target: usize) -> Self {
        Self {
            kind: GateKind::H,
            target,
            controls: Vec::new(),
        }
    }

    pub fn z(target: usize) -> Self {
        Self {
            kind: GateKind::Z,
            target,
            controls: Vec::new(),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::mcx(vec![Control::one(control)], target)
    }

    pub fn toffoli(c1: Control, c2: Control, target: usize) -> Self {
        Self::mcx(vec![c1, c2], target)
    }

    /// Multi-controlled X. An empty control list is rejected by [`Gate::validate`].
    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Self {
            kind: GateKind::Mcx,
            target,
            controls,
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Target followed by every control qubit.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(self.target).chain(self.controls.iter().map(|c| c.qubit))
    }

    /// Adds extra controls to the gate. Only X and MCX can be controlled.
    pub fn controlled_by(&self, extra: &[Control]) -> Result<Self> {
        if extra.is_empty() {
            return Ok(self.clone());
        }
        match self.kind {
            GateKind::X | GateKind::Mcx => {
                let mut controls = extra.to_vec();
                controls.extend_from_slice(&self.controls);
                Ok(Self::mcx(controls, self.target))
            }
            kind => Err(Error::Circuit(format!("{kind:?} gates cannot take controls"))),
        }
    }

    /// Same gate with every qubit index sent through `map`.
    pub fn remapped(&self, map: &[usize]) -> Result<Self> {
        let lookup = |q: usize| {
            map.get(q)
                .copied()
                .ok_or_else(|| Error::Circuit(format!("qubit {q} missing from remap table")))
        };
        Ok(Self {
            kind: self.kind,
            target: lookup(self.target)?,
            controls: self
                .controls
                .iter()
                .map(|c| {
                    Ok(Control {
                        qubit: lookup(c.qubit)?,
                        polarity: c.polarity,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        match self.kind {
            GateKind::Mcx if self.controls.is_empty() => {
                return Err(Error::Circuit("MCX needs at least one control".into()))
            }
            GateKind::X | GateKind::H | GateKind::Z if !self.controls.is_empty() => {
                return Err(Error::Circuit(format!(
                    "{:?} gate must not carry controls",
                    self.kind
                )))
            }
            _ => {}
        }
        let mut seen = Vec::with_capacity(self.controls.len() + 1);
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::Circuit(format!(
                    "qubit {q} out of range for {num_qubits}-qubit circuit"
                )));
            }
            if seen.contains(&q) {
                return Err(Error::Circuit(format!("qubit {q} used twice in one gate")));
            }
            seen.push(q);
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Z => "Z",
            GateKind::Mcx => "MCX",
        };
        write!(f, "{name} t={}", self.target)?;
        if !self.controls.is_empty() {
            f.write_str(" c=")?;
            for (i, c) in self.controls.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                let sign = match c.polarity {
                    Polarity::One => '+',
                    Polarity::Zero => '-',
                };
                write!(f, "{sign}{}", c.qubit)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Gate {
    type Err = Error;

    /// Parses the dump format, e.g. `MCX t=5 c=+0,-3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Circuit(format!("cannot parse gate `{s}`"));
        let mut parts = s.split_whitespace();
        let kind = match parts.next().ok_or_else(bad)? {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "Z" => GateKind::Z,
            "MCX" => GateKind::Mcx,
            _ => return Err(bad()),
        };
        let target = parts
            .next()
            .and_then(|t| t.strip_prefix("t="))
            .and_then(|t| t.parse().ok())
            .ok_or_else(bad)?;
        let mut controls = Vec::new();
        if let Some(list) = parts.next() {
            let list = list.strip_prefix("c=").ok_or_else(bad)?;
            for item in list.split(',') {
                let (polarity, rest) = match item.as_bytes().first() {
                    Some(b'+') => (Polarity::One, &item[1..]),
                    Some(b'-') => (Polarity::Zero, &item[1..]),
                    _ => return Err(bad()),
                };
                controls.push(Control {
                    qubit: rest.parse().map_err(|_| bad())?,
                    polarity,
                });
            }
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Gate {
            kind,
            target,
            controls,
        })
    }
}
