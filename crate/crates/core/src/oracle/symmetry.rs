use crate::ballots::Profile;
use crate::error::{Error, Result};
use crate::stages::{ElectionMethod, Outcome};

use super::enumerate::enumerate_up_to;

/// A profile whose outcome does not follow a candidate swap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeutralityViolation {
    pub profile: Profile,
    pub swap: (usize, usize),
    pub before: std::result::Result<Outcome, String>,
    pub after: std::result::Result<Outcome, String>,
}

fn kind(e: &Error) -> String {
    // errors carry stage numbers and candidate lists that legitimately move
    // under a swap, so only the variant is compared
    format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

/// Checks that swapping two candidates on every ballot swaps them in the
/// outcome, for every profile of up to `max_voters` ballots.
pub fn check_neutrality(method: &dyn ElectionMethod, max_voters: usize) -> Option<NeutralityViolation> {
    let catalog = method.catalog();
    let n = catalog.n_candidates();
    let swaps: Vec<(usize, usize, Vec<usize>)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, catalog.swap_permutation(i, j)))
        .collect();
    for profile in enumerate_up_to(catalog, max_voters) {
        let before = method.evaluate(&profile);
        for (i, j, perm) in &swaps {
            let after = method.evaluate(&profile.permuted(perm));
            let expected = before.as_ref().map(|o| {
                o.relabeled(|c| match c {
                    c if c == *i => *j,
                    c if c == *j => *i,
                    c => c,
                })
            });
            let agrees = match (&expected, &after) {
                (Ok(a), Ok(b)) => a == b,
                (Err(a), Err(b)) => kind(a) == kind(b),
                _ => false,
            };
            if !agrees {
                return Some(NeutralityViolation {
                    profile,
                    swap: (*i, *j),
                    before: before.map_err(|e| e.to_string()),
                    after: after.map_err(|e| e.to_string()),
                });
            }
        }
    }
    None
}

/// Tally of how a method's raw outcomes fall over a sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecisivenessReport {
    pub profiles: u64,
    pub winners: u64,
    pub ties: u64,
    /// Profiles where two candidates' conditions held at once.
    pub conflicts: Vec<Profile>,
    /// Profiles where no stage produced a winner or a tie.
    pub exhausted: Vec<Profile>,
}

impl DecisivenessReport {
    pub fn sound(&self) -> bool {
        self.conflicts.is_empty() && self.exhausted.is_empty()
    }
}

/// Evaluates every profile of up to `max_voters` ballots and records
/// exclusivity and exhaustion failures instead of stopping at them.
pub fn check_decisiveness(method: &dyn ElectionMethod, max_voters: usize) -> Result<DecisivenessReport> {
    let mut report = DecisivenessReport::default();
    for profile in enumerate_up_to(method.catalog(), max_voters) {
        report.profiles += 1;
        match method.evaluate(&profile) {
            Ok(Outcome::Winner(_)) => report.winners += 1,
            Ok(Outcome::Tie(_)) => report.ties += 1,
            Err(Error::MutualExclusivity { .. }) => report.conflicts.push(profile),
            Err(Error::Exhausted) => report.exhausted.push(profile),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
