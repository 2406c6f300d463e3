use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::ballots::{BallotCatalog, Profile};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::stages::{ElectionMethod, Outcome};

use super::scoring::{argmax, tally_points, ScoringWeights};
use super::tiebreak::Tiebreak;

/// Methods tallied directly instead of through stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectKind {
    Plurality,
    Irv,
}

#[derive(Clone, Debug)]
pub struct DirectTally {
    kind: DirectKind,
    catalog: Arc<BallotCatalog>,
    tiebreak: Option<Tiebreak>,
}

impl DirectTally {
    pub fn new(kind: DirectKind, catalog: Arc<BallotCatalog>, tiebreak: Option<Tiebreak>) -> Result<Self> {
        if kind == DirectKind::Irv && (catalog.space().allow_ties || catalog.space().graded) {
            return Err(Error::InvalidParameter(
                "instant runoff needs ballots without equal rankings".into(),
            ));
        }
        Ok(DirectTally {
            kind,
            catalog,
            tiebreak,
        })
    }

    pub fn kind(&self) -> DirectKind {
        self.kind
    }
}

impl ElectionMethod for DirectTally {
    fn name(&self) -> &str {
        match self.kind {
            DirectKind::Plurality => "plurality",
            DirectKind::Irv => "irv",
        }
    }

    fn catalog(&self) -> &Arc<BallotCatalog> {
        &self.catalog
    }

    fn evaluate(&self, profile: &Profile) -> Result<Outcome> {
        if **profile.catalog() != *self.catalog {
            return Err(Error::SpaceMismatch);
        }
        if profile.is_empty() {
            return Err(Error::EmptyElectorate);
        }
        match self.kind {
            DirectKind::Plurality => {
                let n = super::scoring::positions_needed(&self.catalog);
                Ok(argmax(&tally_points(profile, &ScoringWeights::plurality(n))?))
            }
            DirectKind::Irv => Ok(tally_irv(profile)),
        }
    }

    fn tiebreak(&self) -> Option<Tiebreak> {
        self.tiebreak
    }
}

/// Instant runoff: drop the candidate with the fewest current first
/// preferences until two remain, then take the majority between them.
///
/// A tied elimination is explored both ways. If every branch elects the
/// same candidate that candidate wins; otherwise the outcome is a tie among
/// every candidate some branch elects. A ballot whose remaining candidates
/// all share its bottom tier is exhausted.
pub fn tally_irv(profile: &Profile) -> Outcome {
    let n = profile.catalog().n_candidates();
    let active: Vec<(usize, Rational)> = (0..profile.dimension())
        .map(|k| (k, profile.count(k)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let remaining: BTreeSet<usize> = (0..n).collect();
    let winners = irv_round(profile, &active, remaining);
    let winners: Vec<usize> = winners.into_iter().collect();
    match winners[..] {
        [w] => Outcome::Winner(w),
        _ => Outcome::Tie(winners),
    }
}

fn current_choice(profile: &Profile, k: usize, remaining: &BTreeSet<usize>) -> Option<usize> {
    let ranking = profile.catalog().ranking(k);
    let best = remaining.iter().map(|&c| ranking.level(c)).min()?;
    let mut top = remaining.iter().filter(|&&c| ranking.level(c) == best);
    let first = *top.next()?;
    top.next().is_none().then_some(first)
}

fn irv_round(
    profile: &Profile,
    active: &[(usize, Rational)],
    remaining: BTreeSet<usize>,
) -> BTreeSet<usize> {
    let mut tally = vec![Rational::zero(); profile.catalog().n_candidates()];
    for (k, count) in active {
        if let Some(c) = current_choice(profile, *k, &remaining) {
            tally[c] += count;
        }
    }
    if remaining.len() <= 2 {
        let best = remaining.iter().map(|&c| &tally[c]).max().expect("candidates remain");
        return remaining.iter().copied().filter(|&c| &tally[c] == best).collect();
    }
    let fewest = remaining.iter().map(|&c| &tally[c]).min().expect("candidates remain");
    let mut winners = BTreeSet::new();
    for &loser in remaining.iter().filter(|&&c| &tally[c] == fewest) {
        let mut rest = remaining.clone();
        rest.remove(&loser);
        winners.extend(irv_round(profile, active, rest));
    }
    winners
}
