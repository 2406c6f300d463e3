use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crate::ballots::{BallotCatalog, Profile};
use crate::error::{Error, Result};

use super::vector::NormalVector;

/// The symmetry operator S_{i,j}: exchange two candidates on every ballot.
#[derive(Clone, Debug)]
pub struct SwapOperator {
    pair: (usize, usize),
    perm: Vec<usize>,
    catalog: Arc<BallotCatalog>,
}

impl SwapOperator {
    pub fn new(catalog: &Arc<BallotCatalog>, i: usize, j: usize) -> Result<Self> {
        let n = catalog.n_candidates();
        for c in [i, j] {
            if c >= n {
                return Err(Error::CandidateOutOfRange(c));
            }
        }
        if i == j {
            return Err(Error::DegenerateSwap(i));
        }
        Ok(SwapOperator {
            pair: (i, j),
            perm: catalog.swap_permutation(i, j),
            catalog: catalog.clone(),
        })
    }

    /// Every transposition of the catalog's candidates.
    pub fn all(catalog: &Arc<BallotCatalog>) -> Vec<SwapOperator> {
        let n = catalog.n_candidates();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| SwapOperator::new(catalog, i, j).expect("distinct in-range pair"))
            .collect()
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    /// The induced permutation of ballot type indices.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Image of a candidate under the exchange.
    pub fn candidate(&self, c: usize) -> usize {
        match self.pair {
            (i, j) if c == i => j,
            (i, j) if c == j => i,
            _ => c,
        }
    }

    pub fn apply<T: Swappable>(&self, x: &T) -> Result<T> {
        x.swapped(self)
    }
}

/// Objects indexed by ballot type that a swap operator acts on.
pub trait Swappable: Sized {
    fn swapped(&self, op: &SwapOperator) -> Result<Self>;
}

impl Swappable for Profile {
    fn swapped(&self, op: &SwapOperator) -> Result<Self> {
        if **self.catalog() != *op.catalog {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.permuted(&op.perm))
    }
}

impl Swappable for NormalVector {
    fn swapped(&self, op: &SwapOperator) -> Result<Self> {
        if **self.catalog() != *op.catalog {
            return Err(Error::SpaceMismatch);
        }
        let orientation = self
            .orientation()
            .map(|(i, j)| (op.candidate(i), op.candidate(j)));
        Ok(self.permuted(&op.perm, orientation))
    }
}

/// Closure of `{v}` under all swap operators, in canonical order.
pub fn orbit(v: &NormalVector) -> Vec<NormalVector> {
    let ops = SwapOperator::all(v.catalog());
    let mut seen: BTreeSet<NormalVector> = BTreeSet::new();
    let mut queue = VecDeque::from([v.clone()]);
    seen.insert(v.clone());
    while let Some(u) = queue.pop_front() {
        for op in &ops {
            let w = u.swapped(op).expect("same catalog");
            if !seen.contains(&w) {
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}
