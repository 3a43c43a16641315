mod common;

use qbsc::algorithms::{
    factorize, find_minimum, find_preimage, is_prime, prepare_odd_database, threshold_search,
    Classification, DatabaseMode, MinimumConfig, Membership, PrimeConfig,
};
use qbsc::circuit::FunctionTable;
use qbsc::comparator::Relation;

use common::{grover_law, is_prime_by_trial};

#[test]
fn less_than_seven() {
    let report = threshold_search(4, 7, Relation::Lt, None).unwrap();
    let o = report.outcome().unwrap();
    assert_eq!(o.marked, (0..7).collect::<Vec<_>>());
    assert!(!o.degenerate);
    let law = grover_law(16, 7, o.run.iterations);
    assert!((o.run.marked_mass - law).abs() < 1e-9);
}

#[test]
fn identity_preimage_is_equality_search() {
    let table = FunctionTable::from_fn(4, 4, |x| x).unwrap();
    for t in [0, 9, 15] {
        let report = find_preimage(&table, t).unwrap();
        let o = report.outcome().unwrap();
        assert_eq!(o.marked, vec![t]);
        assert_eq!(o.top, t);
        assert!((o.run.marked_mass - grover_law(16, 1, 3)).abs() < 1e-9);
    }
}

#[test]
fn minimum_of_everything_is_zero() {
    // From threshold 1 each round returns 0 or 1 evenly, so roughly 1 run in 64
    // stops early on 1.
    let hits = (0..40)
        .filter(|&seed| {
            let t = find_minimum(4, &Membership::All, seed, MinimumConfig::default()).unwrap();
            assert!(t.thresholds.windows(2).all(|w| w[1] < w[0]));
            t.result == 0
        })
        .count();
    assert!(hits >= 36, "{hits}/40");
}

#[test]
fn idealized_classification_matches_trial_division() {
    for a in (3..=31u64).step_by(2) {
        let r = is_prime(a, a, PrimeConfig::default()).unwrap();
        assert_eq!(r.classification == Classification::Prime, is_prime_by_trial(a), "a={a}");
        assert!(r.witness.is_none_or(|(p, q)| p * q == a));
        if is_prime_by_trial(a) {
            assert_eq!(r.miss_probability, 1.0);
            assert!(r.attempts.iter().all(|t| t.success_probability == 0.0));
        }
    }
}

#[test]
fn literal_databases_are_close_to_ideal() {
    for a in [5u64, 9, 17, 21] {
        let n = 64 - a.leading_zeros() as usize;
        let db = prepare_odd_database(a, n, DatabaseMode::LiteralGrover, false).unwrap();
        let analytic = db.analytic_fidelity.unwrap();
        assert!((db.fidelity - analytic).abs() < 1e-9, "a={a}: {} vs {analytic}", db.fidelity);
    }
}

#[test]
fn literal_pipeline_never_reports_false_composites() {
    let cfg = PrimeConfig {
        mode: DatabaseMode::LiteralGrover,
        ..PrimeConfig::default()
    };
    for a in [7u64, 13, 17] {
        assert_eq!(is_prime(a, 1, cfg).unwrap().classification, Classification::Prime);
    }
    let r = is_prime(15, 1, cfg).unwrap();
    assert!(r.witness.is_none_or(|(p, q)| p * q == 15));
}

#[test]
fn factorization_examples() {
    assert_eq!(factorize(15, 0, DatabaseMode::Idealized).unwrap().factors, vec![3, 5]);
    assert_eq!(factorize(7, 0, DatabaseMode::Idealized).unwrap().factors, vec![7]);
    assert_eq!(factorize(27, 0, DatabaseMode::Idealized).unwrap().factors, vec![3, 3, 3]);
}

#[test]
fn factors_multiply_back() {
    for a in (3..=63u64).step_by(2) {
        let f = factorize(a, a * 31, DatabaseMode::Idealized).unwrap().factors;
        assert_eq!(f.iter().product::<u64>(), a, "a={a}: {f:?}");
        assert!(f.iter().all(|&p| is_prime_by_trial(p)), "a={a}: {f:?}");
    }
}
