use std::cmp::Ordering;

use serde::Serialize;

use crate::ballots::Profile;
use crate::rational::Rational;
use crate::stages::Outcome;

/// Rule for settling tie-sets after evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tiebreak {
    /// Two-way ties go to whichever candidate more voters rank above the other.
    Pairwise,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairwiseResult {
    Resolved(usize),
    /// The two candidates are ranked above each other equally often.
    Balanced,
    /// Only two-way ties can be settled; carries the tie size.
    NotAPair(usize),
}

/// Number of voters ranking `a` strictly above `b`.
pub fn pairwise_count(profile: &Profile, a: usize, b: usize) -> Rational {
    let catalog = profile.catalog();
    (0..profile.dimension())
        .filter(|&k| catalog.ranking(k).prefers(a, b))
        .map(|k| profile.count(k))
        .sum()
}

pub fn pairwise_tiebreak(profile: &Profile, tie: &[usize]) -> PairwiseResult {
    let &[a, b] = tie else {
        return PairwiseResult::NotAPair(tie.len());
    };
    match pairwise_count(profile, a, b).cmp(&pairwise_count(profile, b, a)) {
        Ordering::Greater => PairwiseResult::Resolved(a),
        Ordering::Less => PairwiseResult::Resolved(b),
        Ordering::Equal => PairwiseResult::Balanced,
    }
}

/// Applies `tiebreak` to a tie outcome; anything it cannot settle stays tied.
pub fn resolve_ties(tiebreak: Option<Tiebreak>, profile: &Profile, outcome: Outcome) -> Outcome {
    match (tiebreak, &outcome) {
        (Some(Tiebreak::Pairwise), Outcome::Tie(tie)) => match pairwise_tiebreak(profile, tie) {
            PairwiseResult::Resolved(w) => Outcome::Winner(w),
            _ => outcome,
        },
        _ => outcome,
    }
}
