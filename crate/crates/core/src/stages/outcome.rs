use crate::ballots::BallotCatalog;

/// Result of running a method on a profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Winner(usize),
    /// Candidates left tied by a profile on a boundary. May hold a single
    /// candidate when the boundary is a threshold rather than a comparison.
    Tie(Vec<usize>),
}

impl Outcome {
    /// Builds a tie from any collection of candidates, sorted and deduped.
    pub fn tie(mut candidates: Vec<usize>) -> Self {
        candidates.sort_unstable();
        candidates.dedup();
        Outcome::Tie(candidates)
    }

    pub fn winner(&self) -> Option<usize> {
        match self {
            Outcome::Winner(w) => Some(*w),
            Outcome::Tie(_) => None,
        }
    }

    pub fn is_tie(&self) -> bool {
        matches!(self, Outcome::Tie(_))
    }

    /// Every candidate still in contention.
    pub fn candidates(&self) -> &[usize] {
        match self {
            Outcome::Winner(w) => std::slice::from_ref(w),
            Outcome::Tie(t) => t,
        }
    }

    /// The same outcome with candidate `c` renamed to `relabel(c)`.
    pub fn relabeled(&self, relabel: impl Fn(usize) -> usize) -> Outcome {
        match self {
            Outcome::Winner(w) => Outcome::Winner(relabel(*w)),
            Outcome::Tie(t) => Outcome::tie(t.iter().map(|&c| relabel(c)).collect()),
        }
    }

    /// `B` or `tie {A, B}`.
    pub fn describe(&self, catalog: &BallotCatalog) -> String {
        match self {
            Outcome::Winner(w) => catalog.label(*w).to_string(),
            Outcome::Tie(t) => format!("tie {}", describe_set(catalog, t)),
        }
    }
}

pub(crate) fn describe_set(catalog: &BallotCatalog, set: &[usize]) -> String {
    let labels: Vec<&str> = set.iter().map(|&c| catalog.label(c)).collect();
    format!("{{{}}}", labels.join(", "))
}
