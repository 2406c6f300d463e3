use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::ballots::{BallotSpace, Ranking};

use super::vector::NormalVector;

/// What "ranked in first place" means when checking boundary conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FirstPlace {
    /// Sole occupant of the first slot. The reading for SFBC, which rules
    /// out ranking anyone equal to the favorite.
    Sole,
    /// Any occupant of the first slot. The reading for FBC.
    Shared,
}

impl FirstPlace {
    /// `Shared` for spaces with equal rankings, `Sole` otherwise. On strict
    /// ballots the two readings coincide.
    pub fn default_for(space: &BallotSpace) -> Self {
        if space.allow_ties {
            FirstPlace::Shared
        } else {
            FirstPlace::Sole
        }
    }

    fn firsts(self, ranking: &Ranking) -> Vec<usize> {
        match self {
            FirstPlace::Sole => ranking.sole_first().into_iter().collect(),
            FirstPlace::Shared => (0..ranking.n_candidates())
                .filter(|&c| ranking.is_first(c))
                .collect(),
        }
    }
}

/// Whether a category 2 vector bounds its candidate's region from inside
/// (`N_ix` for all x) or from outside (`N_xi` for all x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    Source,
    Sink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VectorCategory {
    /// Meets the requirements of exactly one boundary.
    Category1 { pair: (usize, usize) },
    /// Meets the requirements of every boundary of one candidate's region.
    Category2 { candidate: usize, role: Role },
    /// Meets the requirements of every boundary.
    Category3,
    /// Meets no boundary's requirements.
    NonCompliant,
}

impl VectorCategory {
    pub fn number(&self) -> Option<u8> {
        match self {
            VectorCategory::Category1 { .. } => Some(1),
            VectorCategory::Category2 { .. } => Some(2),
            VectorCategory::Category3 => Some(3),
            VectorCategory::NonCompliant => None,
        }
    }
}

impl fmt::Display for VectorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VectorCategory::Category1 { pair: (i, j) } => {
                write!(f, "Category1 (boundary {}-{})", i + 1, j + 1)
            }
            VectorCategory::Category2 { candidate, role } => {
                write!(f, "Category2 ({:?} of candidate {})", role, candidate + 1)
            }
            VectorCategory::Category3 => write!(f, "Category3"),
            VectorCategory::NonCompliant => write!(f, "NonCompliant"),
        }
    }
}

/// Candidates covered by the maximal and by the minimal components.
struct Extremes {
    max_count: usize,
    min_count: usize,
    max_firsts: BTreeSet<usize>,
    min_firsts: BTreeSet<usize>,
}

fn extremes(v: &NormalVector, reading: FirstPlace) -> Extremes {
    let comps = v.components();
    let max = comps.iter().max().expect("non-empty vector");
    let min = comps.iter().min().expect("non-empty vector");
    let catalog = v.catalog();
    let mut e = Extremes {
        max_count: 0,
        min_count: 0,
        max_firsts: BTreeSet::new(),
        min_firsts: BTreeSet::new(),
    };
    for (k, c) in comps.iter().enumerate() {
        let firsts = reading.firsts(catalog.ranking(k));
        if c == max {
            e.max_count += 1;
            e.max_firsts.extend(firsts.iter().copied());
        }
        if c == min {
            e.min_count += 1;
            e.min_firsts.extend(firsts);
        }
    }
    e
}

impl Extremes {
    fn passes(&self, n: usize, i: usize, j: usize) -> bool {
        self.max_count + 1 >= n
            && self.min_count + 1 >= n
            && (0..n).all(|c| c == j || self.max_firsts.contains(&c))
            && (0..n).all(|c| c == i || self.min_firsts.contains(&c))
    }
}

/// The necessary conditions on a normal to the i-j boundary of a method
/// that never punishes ranking the favorite alone in first place:
/// at least n_c - 1 components share the maximum and, among them, every
/// candidate other than `j` is first somewhere; likewise for the minimum
/// and every candidate other than `i`.
pub fn check_boundary_conditions(
    v: &NormalVector,
    pair: (usize, usize),
    reading: FirstPlace,
) -> bool {
    let (i, j) = pair;
    if i == j {
        return false;
    }
    extremes(v, reading).passes(v.catalog().n_candidates(), i, j)
}

/// Ordered pairs whose boundary conditions the vector meets.
pub fn passing_pairs(v: &NormalVector, reading: FirstPlace) -> Vec<(usize, usize)> {
    let n = v.catalog().n_candidates();
    let e = extremes(v, reading);
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && e.passes(n, i, j))
        .collect()
}

/// Assigns the category from the set of passing boundaries.
///
/// Only four shapes can occur: nothing, a single pair, all pairs out of (or
/// into) one candidate, or every pair. Anything else is a bug and panics.
pub fn classify_vector(v: &NormalVector, reading: FirstPlace) -> VectorCategory {
    let n = v.catalog().n_candidates();
    let passing = passing_pairs(v, reading);
    if passing.is_empty() {
        return VectorCategory::NonCompliant;
    }
    if passing.len() == n * (n - 1) {
        return VectorCategory::Category3;
    }
    if let [pair] = passing[..] {
        return VectorCategory::Category1 { pair };
    }
    if passing.len() == n - 1 {
        let (i, j) = passing[0];
        if passing.iter().all(|&(a, _)| a == i) {
            return VectorCategory::Category2 {
                candidate: i,
                role: Role::Source,
            };
        }
        if passing.iter().all(|&(_, b)| b == j) {
            return VectorCategory::Category2 {
                candidate: j,
                role: Role::Sink,
            };
        }
    }
    panic!("impossible passing set {passing:?} for {}", v.to_tuple());
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ballots::{BallotCatalog, BallotSpace};
    use crate::rational::int;

    fn strict3() -> Arc<BallotCatalog> {
        BallotCatalog::new(BallotSpace::strict(3)).unwrap()
    }

    fn vector(cat: &Arc<BallotCatalog>, xs: &[i64]) -> NormalVector {
        NormalVector::new(cat.clone(), xs.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn antiplurality_normal() {
        let cat = strict3();
        let n12 = vector(&cat, &[0, 1, 1, -1, -1, 0]);
        assert!(check_boundary_conditions(&n12, (0, 1), FirstPlace::Sole));
        assert!(!check_boundary_conditions(&n12, (0, 2), FirstPlace::Sole));
        assert_eq!(
            classify_vector(&n12, FirstPlace::Sole),
            VectorCategory::Category1 { pair: (0, 1) }
        );
        assert_eq!(
            classify_vector(&-&n12, FirstPlace::Sole),
            VectorCategory::Category1 { pair: (1, 0) }
        );
    }

    #[test]
    fn monotone_type_two_form() {
        let v1 = vector(&strict3(), &[1, 1, 1, -2, -2, 1]);
        assert!(check_boundary_conditions(&v1, (0, 1), FirstPlace::Sole));
        assert!(check_boundary_conditions(&v1, (0, 2), FirstPlace::Sole));
        assert_eq!(
            classify_vector(&v1, FirstPlace::Sole),
            VectorCategory::Category2 {
                candidate: 0,
                role: Role::Source
            }
        );
    }

    #[test]
    fn alternating_vector_is_category_three() {
        let v = vector(&strict3(), &[1, -1, 1, -1, 1, -1]);
        assert_eq!(classify_vector(&v, FirstPlace::Sole), VectorCategory::Category3);
    }

    #[test]
    fn plurality_first_count_difference_fails() {
        // first(A) - first(B)
        let v = vector(&strict3(), &[1, 1, 0, 0, -1, -1]);
        assert_eq!(classify_vector(&v, FirstPlace::Sole), VectorCategory::NonCompliant);
    }

    #[test]
    fn degenerate_pair() {
        let v = vector(&strict3(), &[1, 1, 1, -2, -2, 1]);
        assert!(!check_boundary_conditions(&v, (1, 1), FirstPlace::Sole));
    }
}
