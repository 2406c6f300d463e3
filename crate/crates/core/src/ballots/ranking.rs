use std::cmp::Ordering;

/// A voter's weak order over the candidates.
///
/// Each candidate carries a level, `0` being the top. In ordinal ballot
/// spaces levels are dense tier indices; in graded spaces they are absolute
/// grade slots and intermediate slots may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    levels: Box<[u8]>,
}

impl Ranking {
    pub fn from_levels(levels: impl Into<Box<[u8]>>) -> Self {
        Ranking {
            levels: levels.into(),
        }
    }

    /// Builds a dense ranking from explicit tiers; unlisted candidates form
    /// an implicit last tier.
    pub fn from_tiers(n_candidates: usize, tiers: &[Vec<usize>]) -> Self {
        let mut levels = vec![u8::MAX; n_candidates];
        for (t, tier) in tiers.iter().enumerate() {
            for &c in tier {
                levels[c] = t as u8;
            }
        }
        let implicit = tiers.len() as u8;
        for l in levels.iter_mut().filter(|l| **l == u8::MAX) {
            *l = implicit;
        }
        Ranking::from_levels(levels)
    }

    /// The strict ranking listing candidates in the given order.
    pub fn strict(order: &[usize]) -> Self {
        let mut levels = vec![0u8; order.len()];
        for (pos, &c) in order.iter().enumerate() {
            levels[c] = pos as u8;
        }
        Ranking::from_levels(levels)
    }

    pub fn n_candidates(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn level(&self, candidate: usize) -> u8 {
        self.levels[candidate]
    }

    pub fn top_level(&self) -> u8 {
        self.levels.iter().copied().min().unwrap_or(0)
    }

    pub fn bottom_level(&self) -> u8 {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Non-empty tiers, highest first, members in index order.
    pub fn tiers(&self) -> Vec<Vec<usize>> {
        let mut used: Vec<u8> = self.levels.to_vec();
        used.sort_unstable();
        used.dedup();
        used.iter().map(|&l| self.members_at(l)).collect()
    }

    pub fn members_at(&self, level: u8) -> Vec<usize> {
        (0..self.levels.len())
            .filter(|&c| self.levels[c] == level)
            .collect()
    }

    pub fn tier_count(&self) -> usize {
        let mut used: Vec<u8> = self.levels.to_vec();
        used.sort_unstable();
        used.dedup();
        used.len()
    }

    /// True when `a` sits strictly above `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.levels[a] < self.levels[b]
    }

    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        self.levels[b].cmp(&self.levels[a])
    }

    /// All candidates on distinct levels.
    pub fn is_strict(&self) -> bool {
        let mut seen = [false; 256];
        self.levels.iter().all(|&l| !std::mem::replace(&mut seen[l as usize], true))
    }

    pub fn is_all_tied(&self) -> bool {
        self.levels.windows(2).all(|w| w[0] == w[1])
    }

    /// Occupies the first slot (level 0), possibly shared.
    pub fn is_first(&self, candidate: usize) -> bool {
        self.levels[candidate] == 0
    }

    /// The unique occupant of the first slot.
    pub fn sole_first(&self) -> Option<usize> {
        let mut firsts = (0..self.levels.len()).filter(|&c| self.levels[c] == 0);
        match (firsts.next(), firsts.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }

    /// No candidate is strictly above `candidate`.
    pub fn is_weakly_top(&self, candidate: usize) -> bool {
        self.levels[candidate] == self.top_level()
    }

    /// Every other candidate is strictly below `candidate`.
    pub fn is_strictly_top(&self, candidate: usize) -> bool {
        let l = self.levels[candidate];
        self.levels
            .iter()
            .enumerate()
            .all(|(c, &other)| c == candidate || other > l)
    }

    /// Every other candidate is strictly above `candidate`.
    pub fn is_strictly_bottom(&self, candidate: usize) -> bool {
        let l = self.levels[candidate];
        self.levels
            .iter()
            .enumerate()
            .all(|(c, &other)| c == candidate || other < l)
    }

    /// Candidates from most to least preferred; ties keep index order.
    pub fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.levels.len()).collect();
        order.sort_by_key(|&c| (self.levels[c], c));
        order
    }

    /// Position of `candidate` in a strict preference order (0 = favorite).
    pub fn position(&self, candidate: usize) -> usize {
        self.levels
            .iter()
            .filter(|&&l| l < self.levels[candidate])
            .count()
    }

    /// Exchanges the levels of two candidates.
    pub fn swapped(&self, i: usize, j: usize) -> Ranking {
        let mut levels = self.levels.clone();
        levels.swap(i, j);
        Ranking { levels }
    }

    /// Applies a candidate relabelling: candidate `c` becomes `relabel[c]`.
    pub fn relabeled(&self, relabel: &[usize]) -> Ranking {
        let mut levels = vec![0u8; self.levels.len()];
        for (c, &l) in self.levels.iter().enumerate() {
            levels[relabel[c]] = l;
        }
        Ranking::from_levels(levels)
    }

    /// Renumbers used levels densely from 0, keeping their order.
    pub fn densified(&self) -> Ranking {
        let mut used: Vec<u8> = self.levels.to_vec();
        used.sort_unstable();
        used.dedup();
        let levels: Vec<u8> = self
            .levels
            .iter()
            .map(|l| used.binary_search(l).unwrap() as u8)
            .collect();
        Ranking::from_levels(levels)
    }
}
