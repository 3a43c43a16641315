//! End-to-end searches composed from the comparator, arithmetic and Grover modules.

mod minimum;
mod prime;
mod search;

pub use minimum::{find_minimum, MinSearchTrace, MinimumConfig, Membership};
pub use prime::{
    factorize, is_prime, minimal_width, odd_values, prepare_odd_database, trial_division_is_prime,
    Classification, DatabaseMode, FactorReport, OddDatabase, PrimeAttempt, PrimeConfig,
    PrimePipeline, PrimeReport, MAX_PRIME_CANDIDATE,
};
pub use search::{
    conditional_search, find_preimage, find_zero, threshold_search, ConditionalOutcome,
    SearchOutcome, SearchReport,
};
