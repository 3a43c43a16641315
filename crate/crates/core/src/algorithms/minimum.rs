use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comparator::Relation;
use crate::error::{Error, Result};
use crate::grover::{BbhtConfig, BbhtSession, GroverPlan, OraclePredicate};
use crate::state::MeasurementDistribution;

/// Values the minimum is taken over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Every value of the register.
    All,
    Set(BTreeSet<u64>),
}

impl Membership {
    fn contains(&self, x: u64) -> bool {
        match self {
            Membership::All => true,
            Membership::Set(s) => s.contains(&x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimumConfig {
    /// Upper bound on threshold updates attempted.
    pub max_rounds: usize,
    /// Consecutive rounds returning the current threshold before stopping.
    pub stability_rounds: usize,
    pub bbht: BbhtConfig,
}

impl Default for MinimumConfig {
    fn default() -> Self {
        Self {
            max_rounds: 30,
            stability_rounds: 6,
            bbht: BbhtConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinSearchTrace {
    /// Successive thresholds, strictly decreasing.
    pub thresholds: Vec<u64>,
    /// Number of randomized searches run.
    pub rounds: usize,
    pub result: u64,
    /// The stability criterion was met before `max_rounds`.
    pub converged: bool,
    /// Search-register distribution behind the last measurement.
    pub final_distribution: Option<MeasurementDistribution>,
    /// Widest simulated register file.
    pub qubits: usize,
}

/// Iterated threshold search: each round marks members `<=` the current
/// threshold and replaces the threshold with a verified measurement.
pub fn find_minimum(
    n: usize,
    membership: &Membership,
    seed: u64,
    config: MinimumConfig,
) -> Result<MinSearchTrace> {
    if n == 0 || n > 20 {
        return Err(Error::Argument(format!("width {n} outside 1..=20")));
    }
    if config.stability_rounds == 0 {
        return Err(Error::Argument("stability_rounds must be positive".into()));
    }
    let members: Vec<u64> = match membership {
        Membership::All => Vec::new(),
        Membership::Set(s) => {
            if s.is_empty() {
                return Err(Error::Argument("membership set is empty".into()));
            }
            if let Some(v) = s.iter().find(|&&v| v >> n != 0) {
                return Err(Error::Range(format!("member {v} does not fit {n} bits")));
            }
            s.iter().copied().collect()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut threshold = match membership {
        Membership::All => rng.gen_range(0..1u64 << n),
        Membership::Set(_) => members[rng.gen_range(0..members.len())],
    };
    let mut thresholds = vec![threshold];
    let mut sessions: HashMap<u64, BbhtSession> = HashMap::new();
    let mut repeats = 0;
    let mut rounds = 0;
    let mut final_distribution = None;
    let mut converged = false;
    let mut qubits = 0;

    while rounds < config.max_rounds {
        rounds += 1;
        let session = match sessions.entry(threshold) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                e.insert(BbhtSession::new(&GroverPlan::new(n, predicate(membership, threshold)))?)
            }
        };
        qubits = qubits.max(session.num_qubits());
        let outcome = session.run(&mut rng, config.bbht)?;
        final_distribution = outcome.last_distribution;
        match outcome.found {
            Some(x) if x < threshold => {
                debug_assert!(membership.contains(x));
                threshold = x;
                thresholds.push(x);
                repeats = 0;
            }
            _ => {
                repeats += 1;
                if repeats >= config.stability_rounds {
                    converged = true;
                    break;
                }
            }
        }
    }
    Ok(MinSearchTrace {
        thresholds,
        rounds,
        result: threshold,
        converged,
        final_distribution,
        qubits,
    })
}

fn predicate(membership: &Membership, threshold: u64) -> OraclePredicate {
    let below = OraclePredicate::Comparator {
        reference: threshold,
        relation: Relation::Leq,
    };
    match membership {
        Membership::All => below,
        Membership::Set(s) => {
            OraclePredicate::All(vec![below, OraclePredicate::Membership(s.clone())])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_never_moves() {
        let set = Membership::Set([7].into());
        for seed in 0..5 {
            let t = find_minimum(4, &set, seed, MinimumConfig::default()).unwrap();
            assert_eq!(t.thresholds, vec![7]);
            assert_eq!(t.result, 7);
            assert!(t.converged);
        }
    }

    #[test]
    fn empty_set_is_rejected() {
        let set = Membership::Set(BTreeSet::new());
        assert!(find_minimum(3, &set, 0, MinimumConfig::default()).is_err());
    }

    #[test]
    fn thresholds_decrease() {
        let set = Membership::Set([9, 12, 5, 14].into());
        let t = find_minimum(4, &set, 11, MinimumConfig::default()).unwrap();
        assert!(t.thresholds.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(t.result, *t.thresholds.last().unwrap());
    }
}
