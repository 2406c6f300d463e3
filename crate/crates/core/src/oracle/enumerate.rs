use std::sync::Arc;

use crate::ballots::{BallotCatalog, Profile};

/// Number of multisets of `n_voters` ballots over `d` types:
/// `C(n_voters + d - 1, d - 1)`.
pub fn profile_count(d: usize, n_voters: usize) -> u128 {
    let k = (d.saturating_sub(1)) as u128;
    let n = n_voters as u128 + k;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Every way of writing `n` as an ordered sum of `d` non-negative parts,
/// in descending lexicographic order (all voters on the first type first).
pub fn compositions(n: u64, d: usize) -> Compositions {
    let mut first = vec![0; d];
    if d > 0 {
        first[0] = n;
    }
    Compositions {
        next: (d > 0).then_some(first),
    }
}

pub struct Compositions {
    next: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let d = current.len();
        // move one unit from the rightmost non-zero part (excluding the
        // last) one place right, and gather everything after it there
        let mut succ = current.clone();
        if let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| succ[i] > 0) {
            let tail: u64 = succ[i + 1..].iter().sum();
            succ[i] -= 1;
            for x in &mut succ[i + 1..] {
                *x = 0;
            }
            succ[i + 1] = tail + 1;
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Every profile of exactly `n_voters` ballots, each once.
pub fn enumerate_profiles(
    catalog: &Arc<BallotCatalog>,
    n_voters: usize,
) -> impl Iterator<Item = Profile> + '_ {
    compositions(n_voters as u64, catalog.len())
        .map(move |counts| Profile::from_counts(catalog.clone(), counts).expect("matching length"))
}

/// Every profile with between 1 and `max_voters` ballots, smallest
/// electorates first.
pub fn enumerate_up_to(
    catalog: &Arc<BallotCatalog>,
    max_voters: usize,
) -> impl Iterator<Item = Profile> + '_ {
    (1..=max_voters).flat_map(move |n| enumerate_profiles(catalog, n))
}
