//! Built-in methods in stage form, point tallies, tiebreaks and the
//! direct tallies used as non-compliant controls.

mod builtin;
mod direct;
mod scoring;
mod tiebreak;

pub use builtin::{not_dominated, Built, BuiltinMethod};
pub use direct::{tally_irv, DirectKind, DirectTally};
pub use scoring::{
    argmax, fit_point_system, point_difference, point_system_stage, positions_needed,
    tally_points, threshold_vector, thresholded_stage, ScoringWeights,
};
pub use tiebreak::{pairwise_count, pairwise_tiebreak, resolve_ties, PairwiseResult, Tiebreak};
