mod common;

use proptest::prelude::*;

use qbsc::comparator::{build_comparator, build_predicate_flip, ComparatorLayout, Relation};
use qbsc::{Layout, QuantumState};

use common::{field, index_of};

fn compare(n: usize, a: u64, b: u64) -> Vec<u64> {
    let (circuit, cmp) = build_comparator(n).unwrap();
    let layout = cmp.layout();
    let total = layout.num_qubits();
    let regs: Vec<_> = ["a", "b", "o1", "o2", "anc"]
        .iter()
        .map(|r| layout.register(r).unwrap().clone())
        .collect();
    let idx = index_of(total, &[(&regs[0], a), (&regs[1], b)]);
    let out = QuantumState::basis_state(total, idx).unwrap().apply_circuit(&circuit).unwrap();
    let entries = out.entries();
    assert_eq!(entries.len(), 1);
    regs.iter().map(|r| field(entries[0].0, total, r)).collect()
}

#[test]
fn exhaustive_up_to_four_bits() {
    for n in 1..=4 {
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                assert_eq!(compare(n, a, b), [a, b, (a > b) as u64, (a < b) as u64, 0]);
            }
        }
    }
}

proptest! {
    #[test]
    fn random_pairs_wider(n in 5usize..=6, a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (a % (1 << n), b % (1 << n));
        prop_assert_eq!(compare(n, a, b), vec![a, b, (a > b) as u64, (a < b) as u64, 0]);
    }
}

#[test]
fn ancilla_count() {
    for n in 1..=6 {
        let (_, cmp) = build_comparator(n).unwrap();
        assert_eq!(cmp.ancilla_count(), 3 * n - 1);
    }
}

/// Every relation flips the target exactly on its truth set and leaves the rest clean.
#[test]
fn predicate_flips_match_relations() {
    let n = 3;
    let layout = Layout::new(&[
        ("a", n),
        ("b", n),
        ("o1", 1),
        ("o2", 1),
        ("anc", 3 * n - 1),
        ("t", 1),
    ])
    .unwrap();
    let cmp = ComparatorLayout::place(&layout, "a", "b", "o1", "o2", "anc").unwrap();
    let total = layout.num_qubits();
    let t = layout.register("t").unwrap();
    let (ra, rb) = (layout.register("a").unwrap(), layout.register("b").unwrap());
    for relation in Relation::ALL {
        let flip = build_predicate_flip(&cmp, relation, t.start()).unwrap();
        for a in 0..8u64 {
            for b in 0..8u64 {
                let idx = index_of(total, &[(ra, a), (rb, b)]);
                let out = QuantumState::basis_state(total, idx).unwrap().apply_circuit(&flip).unwrap();
                let got = out.entries()[0].0;
                let holds = match relation {
                    Relation::Gt => a > b,
                    Relation::Lt => a < b,
                    Relation::Eq => a == b,
                    Relation::Leq => a <= b,
                    Relation::Geq => a >= b,
                    Relation::Neq => a != b,
                };
                assert_eq!(got, idx | (holds as u128), "{relation} a={a} b={b}");
            }
        }
    }
}

#[test]
fn flip_target_inside_comparator_is_rejected() {
    let (_, cmp) = build_comparator(2).unwrap();
    assert!(build_predicate_flip(&cmp, Relation::Gt, cmp.o1()).is_err());
}

#[test]
fn relation_names_parse() {
    for r in Relation::ALL {
        assert_eq!(r.to_string().parse::<Relation>().unwrap(), r);
    }
    assert_eq!("greater".parse::<Relation>().unwrap(), Relation::Gt);
    assert!("sideways".parse::<Relation>().is_err());
}
