//! Exhaustive small-electorate searches.

mod enumerate;
mod search;
mod symmetry;

pub use enumerate::{compositions, enumerate_profiles, enumerate_up_to, profile_count, Compositions};
pub use search::{check_criterion, check_monotonic, raises, replay, Counterexample, Criterion, SearchScope, Verdict};
pub use symmetry::{check_decisiveness, check_neutrality, DecisivenessReport, NeutralityViolation};
