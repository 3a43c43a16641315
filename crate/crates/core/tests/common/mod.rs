//! Helpers shared by the integration and acceptance targets.
//!
//! Everything here is an independent reference: plain integer arithmetic and
//! closed-form formulas, never the library code under test.

#![allow(dead_code)]

use qbsc::{Circuit, Control, Gate, Register};
use rand::Rng;

/// Value of `reg` inside basis index `idx` of a `total`-qubit state (qubit 0 = MSB).
pub fn field(idx: u128, total: usize, reg: &Register) -> u64 {
    let shift = total - reg.start() - reg.width();
    ((idx >> shift) & ((1u128 << reg.width()) - 1)) as u64
}

/// Basis index with `values[i]` written into `regs[i]`, every other qubit 0.
pub fn index_of(total: usize, assignments: &[(&Register, u64)]) -> u128 {
    assignments.iter().fold(0u128, |acc, (reg, v)| {
        acc | ((*v as u128) << (total - reg.start() - reg.width()))
    })
}

/// `sin²((2k+1)·asin(√(m/n)))`.
pub fn grover_law(n_items: u64, marked: u64, k: usize) -> f64 {
    let theta = (marked as f64 / n_items as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// `round(π/(4θ) − 1/2)` for a single marked item out of `n_items`.
pub fn optimal_rounds(n_items: u64, marked: u64) -> usize {
    let theta = (marked as f64 / n_items as f64).sqrt().asin();
    (std::f64::consts::PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
}

pub fn is_prime_by_trial(a: u64) -> bool {
    if a < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= a {
        if a.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Random circuit over the full gate set, including mixed-polarity controls.
pub fn random_circuit<R: Rng>(rng: &mut R, num_qubits: usize, len: usize) -> Circuit {
    let mut c = Circuit::with_registers(&[("q", num_qubits)]).unwrap();
    for _ in 0..len {
        let t = rng.gen_range(0..num_qubits);
        let gate = match rng.gen_range(0..4) {
            0 => Gate::x(t),
            1 => Gate::h(t),
            2 => Gate::z(t),
            _ => {
                let mut controls = Vec::new();
                for q in 0..num_qubits {
                    if q != t && controls.len() < 3 && rng.gen_bool(0.3) {
                        controls.push(if rng.gen_bool(0.5) {
                            Control::one(q)
                        } else {
                            Control::zero(q)
                        });
                    }
                }
                if controls.is_empty() {
                    Gate::x(t)
                } else {
                    Gate::mcx(controls, t)
                }
            }
        };
        c.append(gate).unwrap();
    }
    c
}
