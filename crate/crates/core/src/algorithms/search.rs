use crate::circuit::FunctionTable;
use crate::comparator::Relation;
use crate::error::Result;
use crate::grover::{run_grover, GroverPlan, GroverRun, OraclePredicate};

/// A completed search whose marked set is known classically.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub run: GroverRun,
    /// Marked values, ascending.
    pub marked: Vec<u64>,
    /// Most probable outcome overall.
    pub top: u64,
    /// Most probable marked outcome.
    pub best: u64,
    /// Exactly half the space is marked, so every iteration count leaves the
    /// marked mass at 1/2.
    pub degenerate: bool,
}

impl SearchOutcome {
    fn new(run: GroverRun, marked: Vec<u64>) -> Self {
        let dist = &run.distribution;
        let top = dist.top().map_or(0, |(x, _)| x);
        let best = marked
            .iter()
            .copied()
            .fold(None, |acc: Option<(u64, f64)>, x| {
                let p = dist.probability(x);
                match acc {
                    Some((_, q)) if q >= p => acc,
                    _ => Some((x, p)),
                }
            })
            .map_or(0, |(x, _)| x);
        let degenerate = 2 * marked.len() as u64 == 1u64 << run.search_width;
        Self {
            run,
            marked,
            top,
            best,
            degenerate,
        }
    }

    /// Largest minus smallest conditional probability `p(x) / mass` over marked `x`.
    pub fn conditional_spread(&self) -> f64 {
        let mass = self.run.marked_mass;
        if mass <= 0.0 {
            return 0.0;
        }
        let (lo, hi) = self
            .marked
            .iter()
            .map(|&x| self.run.distribution.probability(x) / mass)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p), hi.max(p))
            });
        hi - lo
    }

    /// Human-readable remarks attached to results.
    pub fn notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.degenerate {
            notes.push(format!(
                "degenerate search: {} of {} values are marked, so the marked mass stays at 1/2 \
                 for every iteration count; only the marked set and its uniform conditional \
                 distribution are reproducible",
                self.marked.len(),
                2 * self.marked.len()
            ));
        }
        notes
    }
}

#[derive(Debug, Clone)]
pub enum SearchReport {
    Solved(SearchOutcome),
    NoSolution { reason: String },
}

impl SearchReport {
    pub fn outcome(&self) -> Option<&SearchOutcome> {
        match self {
            SearchReport::Solved(o) => Some(o),
            SearchReport::NoSolution { .. } => None,
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, SearchReport::Solved(_))
    }
}

fn search(plan: GroverPlan, empty_reason: impl FnOnce() -> String) -> Result<SearchReport> {
    plan.oracle.validate(plan.search_width)?;
    let marked = plan.oracle.marked_values(plan.search_width)?;
    if marked.is_empty() {
        return Ok(SearchReport::NoSolution {
            reason: empty_reason(),
        });
    }
    let run = run_grover(&plan.with_marked_count(marked.len() as u64))?;
    Ok(SearchReport::Solved(SearchOutcome::new(run, marked)))
}

/// Grover search for `x <relation> reference` over an `n`-bit register.
pub fn threshold_search(
    n: usize,
    reference: u64,
    relation: Relation,
    iterations: Option<usize>,
) -> Result<SearchReport> {
    let mut plan = GroverPlan::new(
        n,
        OraclePredicate::Comparator {
            reference,
            relation,
        },
    );
    if let Some(k) = iterations {
        plan = plan.with_iterations(k);
    }
    search(plan, || {
        format!("no {n}-bit value x satisfies x {relation} {reference}")
    })
}

/// Grover search for inputs with `f(x) == target`.
pub fn find_preimage(table: &FunctionTable, target: u64) -> Result<SearchReport> {
    let plan = GroverPlan::new(
        table.input_width(),
        OraclePredicate::FunctionZero {
            table: table.clone(),
            reference: target,
        },
    );
    search(plan, || format!("f(x) = {target} has no solution"))
}

/// Grover search for the zeros of `f`.
pub fn find_zero(table: &FunctionTable) -> Result<SearchReport> {
    find_preimage(table, 0)
}

#[derive(Debug, Clone)]
pub struct ConditionalOutcome {
    /// `s1` when `a > b`, otherwise `s2`.
    pub selected: u64,
    pub outcome: SearchOutcome,
}

/// Searches for `s1` if `a > b` and for `s2` otherwise, with the branch chosen
/// coherently by a comparator on loaded copies of `a` and `b`.
pub fn conditional_search(a: u64, b: u64, s1: u64, s2: u64, n: usize) -> Result<ConditionalOutcome> {
    let predicate = OraclePredicate::BranchSelect { a, b, s1, s2 };
    let SearchReport::Solved(outcome) = search(GroverPlan::new(n, predicate), String::new)? else {
        unreachable!("exactly one value is marked");
    };
    Ok(ConditionalOutcome {
        selected: if a > b { s1 } else { s2 },
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greater_than_seven_is_degenerate() {
        let report = threshold_search(4, 7, Relation::Gt, None).unwrap();
        let o = report.outcome().unwrap();
        assert_eq!(o.marked, (8..16).collect::<Vec<_>>());
        assert!(o.degenerate);
        assert!((o.run.marked_mass - 0.5).abs() < 1e-12);
        assert!(o.conditional_spread() < 1e-9);
        assert_eq!(o.notes().len(), 1);
    }

    #[test]
    fn nothing_below_zero() {
        let report = threshold_search(4, 0, Relation::Lt, None).unwrap();
        assert!(!report.is_solved());
    }

    #[test]
    fn zero_of_shifted_counter() {
        let t = FunctionTable::from_fn(3, 3, |x| (x + 3) % 8).unwrap();
        let o = find_zero(&t).unwrap();
        let o = o.outcome().unwrap();
        assert_eq!(o.marked, vec![5]);
        assert_eq!(o.top, 5);
        assert_eq!(o.run.iterations, 2);
        assert!((o.run.distribution.probability(5) - 0.9453125).abs() < 1e-9);
    }

    #[test]
    fn constant_function_has_no_zero() {
        let t = FunctionTable::from_fn(3, 1, |_| 1).unwrap();
        assert!(!find_zero(&t).unwrap().is_solved());
    }

    #[test]
    fn conditional_branches() {
        let c = conditional_search(5, 2, 3, 12, 4).unwrap();
        assert_eq!(c.selected, 3);
        assert_eq!(c.outcome.top, 3);
        let c = conditional_search(4, 4, 3, 12, 4).unwrap();
        assert_eq!(c.outcome.top, 12);
    }
}
