mod common;

use proptest::prelude::*;

use qbsc::arith::{build_adder, build_controlled_adder, build_multiplier};
use qbsc::{Circuit, Layout, QuantumState};

use common::{field, index_of};

fn run(circuit: &Circuit, layout: &Layout, inputs: &[(&str, u64)], read: &[&str]) -> Vec<u64> {
    let total = layout.num_qubits();
    let regs: Vec<_> = inputs
        .iter()
        .map(|(r, v)| (layout.register(r).unwrap(), *v))
        .collect();
    let idx = index_of(total, &regs);
    let out = QuantumState::basis_state(total, idx).unwrap().apply_circuit(circuit).unwrap();
    let entries = out.entries();
    assert_eq!(entries.len(), 1);
    read.iter()
        .map(|r| field(entries[0].0, total, layout.register(r).unwrap()))
        .collect()
}

#[test]
fn multiplier_exhaustive_three_bits() {
    let (c, arith) = build_multiplier(3).unwrap();
    for x in 0..8 {
        for y in 0..8 {
            let got = run(&c, arith.layout(), &[("x", x), ("y", y)], &["x", "y", "out", "carry"]);
            assert_eq!(got, [x, y, x * y, 0]);
        }
    }
}

proptest! {
    #[test]
    fn multiplier_five_bits(x in 0u64..32, y in 0u64..32) {
        let (c, arith) = build_multiplier(5).unwrap();
        let got = run(&c, arith.layout(), &[("x", x), ("y", y)], &["x", "y", "out", "carry"]);
        prop_assert_eq!(got, vec![x, y, x * y, 0]);
    }

    #[test]
    fn multiplier_accumulates(x in 0u64..16, y in 0u64..16, z in 0u64..256) {
        let (c, arith) = build_multiplier(4).unwrap();
        let got = run(&c, arith.layout(), &[("x", x), ("y", y), ("out", z)], &["out", "carry"]);
        prop_assert_eq!(got, vec![(z + x * y) % 256, 0]);
    }

    #[test]
    fn adder_is_modular(n in 1usize..=6, x in any::<u64>(), s in any::<u64>()) {
        let (x, s) = (x % (1 << n), s % (1 << (n + 1)));
        let (c, arith) = build_adder(n).unwrap();
        let mut read = vec!["x", "s"];
        if n > 1 {
            read.push("carry");
        }
        let got = run(&c, arith.layout(), &[("x", x), ("s", s)], &read);
        prop_assert_eq!(got[0], x);
        prop_assert_eq!(got[1], (s + x) % (1 << (n + 1)));
        if n > 1 {
            prop_assert_eq!(got[2], 0);
        }
    }

    #[test]
    fn controlled_adder_respects_control(x in 0u64..16, s in 0u64..32, ctl in 0u64..2) {
        let (c, arith, _) = build_controlled_adder(4).unwrap();
        let got = run(&c, arith.layout(), &[("ctl", ctl), ("x", x), ("s", s)], &["s"]);
        prop_assert_eq!(got[0], (s + ctl * x) % 32);
    }

    #[test]
    fn multiplier_inverse_uncomputes(x in 0u64..16, y in 0u64..16) {
        let (c, arith) = build_multiplier(4).unwrap();
        let round = c.compose(&c.inverse()).unwrap();
        let got = run(&round, arith.layout(), &[("x", x), ("y", y)], &["x", "y", "out"]);
        prop_assert_eq!(got, vec![x, y, 0]);
    }
}
