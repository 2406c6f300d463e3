use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::ranking::Ranking;
use crate::error::{Error, Result};

/// Largest candidate count the enumerations are allowed to touch.
pub const MAX_CANDIDATES: usize = 8;

/// Which rankings a voter may cast.
///
/// Ordinal spaces hold weak orders, where only the relative order of tiers
/// matters. Graded spaces assign every candidate one of `max_ranks` fixed
/// grade slots (slot 0 is the best grade) and keep empty slots meaningful;
/// they model score-like ballots such as approval, range and MCA.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BallotSpace {
    pub n_candidates: usize,
    pub allow_ties: bool,
    pub allow_truncation: bool,
    pub max_ranks: Option<usize>,
    pub graded: bool,
}

impl BallotSpace {
    /// Complete strict rankings.
    pub fn strict(n_candidates: usize) -> Self {
        BallotSpace {
            n_candidates,
            allow_ties: false,
            allow_truncation: false,
            max_ranks: None,
            graded: false,
        }
    }

    /// Strict rankings that may leave a tail of candidates unranked.
    pub fn truncated(n_candidates: usize) -> Self {
        BallotSpace {
            allow_truncation: true,
            ..BallotSpace::strict(n_candidates)
        }
    }

    /// Any weak order: equal rankings and truncation both allowed.
    pub fn weak(n_candidates: usize) -> Self {
        BallotSpace {
            allow_ties: true,
            allow_truncation: true,
            ..BallotSpace::strict(n_candidates)
        }
    }

    /// Every candidate independently receives one of `levels` grades.
    pub fn graded(n_candidates: usize, levels: usize) -> Self {
        BallotSpace {
            n_candidates,
            allow_ties: true,
            allow_truncation: true,
            max_ranks: Some(levels),
            graded: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_candidates < 2 {
            return Err(Error::InvalidSpace("at least two candidates are required".into()));
        }
        if self.n_candidates > MAX_CANDIDATES {
            return Err(Error::InvalidSpace(format!(
                "at most {MAX_CANDIDATES} candidates are supported"
            )));
        }
        if self.graded {
            match self.max_ranks {
                Some(l) if (2..=16).contains(&l) => {}
                _ => {
                    return Err(Error::InvalidSpace(
                        "graded ballots need between 2 and 16 grade levels".into(),
                    ))
                }
            }
            if !self.allow_ties {
                return Err(Error::InvalidSpace("graded ballots always allow equal grades".into()));
            }
            if self.slots().checked_pow(self.n_candidates as u32).is_none_or(|d| d > 1 << 20) {
                return Err(Error::InvalidSpace("too many graded ballot types".into()));
            }
        } else if self.max_ranks == Some(0) || self.max_ranks == Some(1) {
            return Err(Error::InvalidSpace("at least two ranks are required".into()));
        }
        Ok(())
    }

    /// Number of grade slots a ranking can use.
    pub fn slots(&self) -> usize {
        if self.graded {
            self.max_ranks.unwrap_or(2)
        } else {
            self.max_ranks
                .map_or(self.n_candidates, |m| m.min(self.n_candidates))
        }
    }

    fn is_table_one(&self) -> bool {
        self.n_candidates == 3
            && !self.graded
            && !self.allow_ties
            && !self.allow_truncation
            && self.max_ranks.is_none_or(|m| m >= 3)
    }

    pub fn admits(&self, ranking: &Ranking) -> bool {
        if ranking.n_candidates() != self.n_candidates {
            return false;
        }
        if self.graded {
            return ranking.levels().iter().all(|&l| (l as usize) < self.slots());
        }
        if ranking.densified() != *ranking {
            return false;
        }
        let tiers = ranking.tiers();
        if let Some(m) = self.max_ranks {
            if tiers.len() > m {
                return false;
            }
        }
        if self.allow_ties {
            return true;
        }
        let explicit = if self.allow_truncation {
            &tiers[..tiers.len() - 1]
        } else {
            &tiers[..]
        };
        explicit.iter().all(|t| t.len() == 1)
    }

    /// Every admissible ranking, once each, in canonical order.
    pub fn enumerate(&self) -> Result<Vec<Ranking>> {
        self.validate()?;
        let n = self.n_candidates;
        let mut out = Vec::new();
        if self.graded {
            let slots = self.slots();
            for code in 0..slots.pow(n as u32) {
                let levels: Vec<u8> = (0..n)
                    .map(|c| (code / slots.pow((n - 1 - c) as u32) % slots) as u8)
                    .collect();
                out.push(Ranking::from_levels(levels));
            }
        } else {
            let mut tiers = Vec::new();
            ordered_partitions(&(0..n).collect::<Vec<_>>(), &mut tiers, &mut out, n);
            out.retain(|r| self.admits(r));
        }
        if self.is_table_one() {
            out = TABLE_ONE_ORDER.iter().map(|o| Ranking::strict(o)).collect();
        } else {
            out.sort_by_cached_key(canonical_key);
        }
        Ok(out)
    }
}

impl fmt::Display for BallotSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.graded {
            return write!(f, "{} candidates, {} grades", self.n_candidates, self.slots());
        }
        write!(
            f,
            "{} candidates, ties {}, truncation {}",
            self.n_candidates,
            if self.allow_ties { "allowed" } else { "forbidden" },
            if self.allow_truncation { "allowed" } else { "forbidden" },
        )?;
        if let Some(m) = self.max_ranks {
            write!(f, ", at most {m} ranks")?;
        }
        Ok(())
    }
}

/// Saari's basis for three candidates: each row differs from the next by
/// one adjacent transposition.
const TABLE_ONE_ORDER: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [2, 0, 1],
    [2, 1, 0],
    [1, 2, 0],
    [1, 0, 2],
];

/// Tier sizes slot by slot, then the candidates tier by tier.
fn canonical_key(r: &Ranking) -> (Vec<usize>, Vec<usize>) {
    let bottom = r.bottom_level();
    let sizes = (0..=bottom).map(|l| r.members_at(l).len()).collect();
    let flat = (0..=bottom).flat_map(|l| r.members_at(l)).collect();
    (sizes, flat)
}

fn ordered_partitions(
    remaining: &[usize],
    tiers: &mut Vec<Vec<usize>>,
    out: &mut Vec<Ranking>,
    n: usize,
) {
    if remaining.is_empty() {
        out.push(Ranking::from_tiers(n, tiers));
        return;
    }
    let k = remaining.len();
    for mask in 1u32..(1 << k) {
        let (tier, rest): (Vec<_>, Vec<_>) = (0..k)
            .map(|b| (mask >> b & 1 == 1, remaining[b]))
            .partition(|(taken, _)| *taken);
        tiers.push(tier.into_iter().map(|(_, c)| c).collect());
        let rest: Vec<usize> = rest.into_iter().map(|(_, c)| c).collect();
        ordered_partitions(&rest, tiers, out, n);
        tiers.pop();
    }
}

/// A candidate within an election context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub index: usize,
    pub label: String,
}

/// An enumerated ballot space together with candidate labels.
///
/// The position of a ranking in [`BallotCatalog::rankings`] is its ballot
/// type index; profiles and normal vectors are indexed the same way.
#[derive(Debug)]
pub struct BallotCatalog {
    space: BallotSpace,
    labels: Vec<String>,
    rankings: Vec<Ranking>,
    lookup: HashMap<Ranking, usize>,
}

impl PartialEq for BallotCatalog {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.labels == other.labels
    }
}

impl BallotCatalog {
    /// Catalog with the default labels `A`, `B`, `C`, ...
    pub fn new(space: BallotSpace) -> Result<Arc<Self>> {
        space.validate()?;
        let labels = (0..space.n_candidates)
            .map(|c| ((b'A' + c as u8) as char).to_string())
            .collect();
        Self::with_labels(space, labels)
    }

    pub fn with_labels(space: BallotSpace, labels: Vec<String>) -> Result<Arc<Self>> {
        space.validate()?;
        if labels.len() != space.n_candidates {
            return Err(Error::InvalidSpace(format!(
                "{} labels for {} candidates",
                labels.len(),
                space.n_candidates
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || !l.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                return Err(Error::InvalidSpace(format!("bad candidate label `{l}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::DuplicateCandidate(l.clone()));
            }
        }
        let rankings = space.enumerate()?;
        let lookup = rankings
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        Ok(Arc::new(BallotCatalog {
            space,
            labels,
            rankings,
            lookup,
        }))
    }

    pub fn space(&self) -> &BallotSpace {
        &self.space
    }

    pub fn n_candidates(&self) -> usize {
        self.space.n_candidates
    }

    /// Number of ballot types, the dimension of profile space.
    pub fn len(&self) -> usize {
        self.rankings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rankings.is_empty()
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn ranking(&self, k: usize) -> &Ranking {
        &self.rankings[k]
    }

    pub fn index_of(&self, ranking: &Ranking) -> Option<usize> {
        self.lookup.get(ranking).copied()
    }

    pub fn require_index(&self, ranking: &Ranking) -> Result<usize> {
        self.index_of(ranking)
            .ok_or_else(|| Error::Inadmissible(self.format_ranking(ranking)))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, candidate: usize) -> &str {
        &self.labels[candidate]
    }

    pub fn candidates(&self) -> Vec<Candidate> {
        self.labels
            .iter()
            .enumerate()
            .map(|(index, label)| Candidate {
                index,
                label: label.clone(),
            })
            .collect()
    }

    pub fn candidate(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownCandidate(label.to_string()))
    }

    /// Parses `A>B=C`; unlisted candidates land in the implicit last tier
    /// (the bottom grade, in graded spaces). Graded spaces accept empty
    /// tiers, written `A>>B`, to skip a grade.
    pub fn parse_ranking(&self, text: &str) -> Result<Ranking> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::EmptyTier(text.to_string()));
        }
        let n = self.n_candidates();
        let mut levels = vec![u8::MAX; n];
        let mut tier_count = 0usize;
        for (t, tier) in compact.split('>').enumerate() {
            tier_count = t + 1;
            if tier.is_empty() {
                if self.space.graded {
                    continue;
                }
                return Err(Error::EmptyTier(text.to_string()));
            }
            for label in tier.split('=') {
                if label.is_empty() {
                    return Err(Error::EmptyTier(text.to_string()));
                }
                let c = self.candidate(label)?;
                if levels[c] != u8::MAX {
                    return Err(Error::DuplicateCandidate(label.to_string()));
                }
                levels[c] = t as u8;
            }
        }
        let implicit = if self.space.graded {
            if tier_count > self.space.slots() {
                return Err(Error::Inadmissible(text.to_string()));
            }
            (self.space.slots() - 1) as u8
        } else {
            tier_count as u8
        };
        for l in levels.iter_mut().filter(|l| **l == u8::MAX) {
            *l = implicit;
        }
        let ranking = Ranking::from_levels(levels);
        Ok(if self.space.graded {
            ranking
        } else {
            ranking.densified()
        })
    }

    /// Canonical text with every tier written out.
    pub fn format_ranking(&self, ranking: &Ranking) -> String {
        let bottom = ranking.bottom_level();
        let levels: Vec<u8> = if self.space.graded {
            (0..=bottom).collect()
        } else {
            let mut used = ranking.levels().to_vec();
            used.sort_unstable();
            used.dedup();
            used
        };
        levels
            .iter()
            .map(|&l| {
                ranking
                    .members_at(l)
                    .iter()
                    .map(|&c| self.label(c))
                    .collect::<Vec<_>>()
                    .join("=")
            })
            .collect::<Vec<_>>()
            .join(">")
    }

    /// Ballot type reached by exchanging candidates `i` and `j`.
    pub fn swap_permutation(&self, i: usize, j: usize) -> Vec<usize> {
        self.rankings
            .iter()
            .map(|r| self.lookup[&r.swapped(i, j)])
            .collect()
    }

    /// Ballot type permutation induced by an arbitrary relabelling.
    pub fn relabel_permutation(&self, relabel: &[usize]) -> Vec<usize> {
        self.rankings
            .iter()
            .map(|r| self.lookup[&r.relabeled(relabel)])
            .collect()
    }

    /// Positional index used by point systems: non-bottom tiers count from
    /// the top, the bottom tier always takes the last position. In graded
    /// spaces the grade slot is the position.
    pub fn position(&self, ranking: &Ranking, candidate: usize, positions: usize) -> Option<usize> {
        let level = ranking.level(candidate);
        if self.space.graded {
            return ((level as usize) < positions).then_some(level as usize);
        }
        if level == ranking.bottom_level() {
            return positions.checked_sub(1);
        }
        ((level as usize) + 1 < positions).then_some(level as usize)
    }
}
