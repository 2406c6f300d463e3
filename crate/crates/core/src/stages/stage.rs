use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::ballots::{BallotCatalog, Profile};
use crate::error::{Error, Result};
use crate::geometry::{classify_vector, orbit, FirstPlace, NormalVector, SwapOperator, Swappable, VectorCategory};

/// "Candidate `winner` wins if every `(p, v) > 0`."
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    winner: usize,
    inequalities: Vec<NormalVector>,
}

impl Condition {
    pub fn new(winner: usize, mut inequalities: Vec<NormalVector>) -> Result<Self> {
        let first = inequalities.first().ok_or(Error::EmptyCondition)?;
        let catalog = first.catalog().clone();
        if winner >= catalog.n_candidates() {
            return Err(Error::CandidateOutOfRange(winner));
        }
        if inequalities.iter().any(|v| **v.catalog() != *catalog) {
            return Err(Error::SpaceMismatch);
        }
        inequalities.sort();
        inequalities.dedup();
        Ok(Condition {
            winner,
            inequalities,
        })
    }

    pub fn winner(&self) -> usize {
        self.winner
    }

    pub fn inequalities(&self) -> &[NormalVector] {
        &self.inequalities
    }

    pub fn catalog(&self) -> &Arc<BallotCatalog> {
        self.inequalities[0].catalog()
    }

    /// Swaps every vector and relabels the winner.
    pub fn swapped(&self, op: &SwapOperator) -> Result<Condition> {
        let inequalities = self
            .inequalities
            .iter()
            .map(|v| v.swapped(op))
            .collect::<Result<Vec<_>>>()?;
        Condition::new(op.candidate(self.winner), inequalities)
    }
}

/// How a stage's conditions fare on one profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageResult {
    Winner(usize),
    /// No condition holds strictly, but these winners' conditions hold with
    /// at least one inner product exactly zero.
    Tie(Vec<usize>),
    NoWinner,
    /// Conditions for several winners hold strictly at once.
    Conflict(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StageType {
    Type1,
    Type1b,
    Type2,
    Type3,
    NonCompliant,
}

impl fmt::Display for StageType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A swap-closed set of conditions.
#[derive(Clone, Debug)]
pub struct Stage {
    catalog: Arc<BallotCatalog>,
    seeds: Vec<Condition>,
    conditions: Vec<Condition>,
    vectors: Vec<NormalVector>,
    /// Per condition: winner and indices into `vectors`.
    compiled: Vec<(usize, Vec<usize>)>,
}

impl Stage {
    /// Closure of a single seed condition.
    pub fn generate(seed: Condition) -> Stage {
        Stage::from_seeds(vec![seed]).expect("one seed")
    }

    /// Closure of several seed conditions under every swap operator.
    pub fn from_seeds(seeds: Vec<Condition>) -> Result<Stage> {
        let catalog = seeds
            .first()
            .ok_or_else(|| Error::InvalidParameter("a stage needs at least one condition".into()))?
            .catalog()
            .clone();
        if seeds.iter().any(|s| **s.catalog() != *catalog) {
            return Err(Error::SpaceMismatch);
        }
        let ops = SwapOperator::all(&catalog);
        let mut seen: BTreeSet<Condition> = seeds.iter().cloned().collect();
        let mut queue: VecDeque<Condition> = seen.iter().cloned().collect();
        while let Some(c) = queue.pop_front() {
            for op in &ops {
                let d = c.swapped(op)?;
                if !seen.contains(&d) {
                    seen.insert(d.clone());
                    queue.push_back(d);
                }
            }
        }
        let conditions: Vec<Condition> = seen.into_iter().collect();
        let vectors: Vec<NormalVector> = conditions
            .iter()
            .flat_map(|c| c.inequalities.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let compiled = conditions
            .iter()
            .map(|c| {
                let idx = c
                    .inequalities
                    .iter()
                    .map(|v| vectors.binary_search(v).expect("collected above"))
                    .collect();
                (c.winner, idx)
            })
            .collect();
        Ok(Stage {
            catalog,
            seeds,
            conditions,
            vectors,
            compiled,
        })
    }

    pub fn catalog(&self) -> &Arc<BallotCatalog> {
        &self.catalog
    }

    pub fn seeds(&self) -> &[Condition] {
        &self.seeds
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    /// Distinct inequality vectors, in canonical order.
    pub fn vectors(&self) -> &[NormalVector] {
        &self.vectors
    }

    /// Sign of `(p, v)` for every distinct vector, aligned with `vectors()`.
    pub fn signs(&self, profile: &Profile) -> Result<Vec<Ordering>> {
        self.vectors.iter().map(|v| v.sign_at(profile)).collect()
    }

    pub fn decide(&self, profile: &Profile) -> Result<StageResult> {
        let signs = self.signs(profile)?;
        Ok(self.decide_with(&signs))
    }

    pub(crate) fn decide_with(&self, signs: &[Ordering]) -> StageResult {
        let mut strict = BTreeSet::new();
        let mut weak = BTreeSet::new();
        for (winner, idx) in &self.compiled {
            let mut all_positive = true;
            let mut none_negative = true;
            for &k in idx {
                match signs[k] {
                    Ordering::Greater => {}
                    Ordering::Equal => all_positive = false,
                    Ordering::Less => {
                        all_positive = false;
                        none_negative = false;
                        break;
                    }
                }
            }
            if all_positive {
                strict.insert(*winner);
            } else if none_negative {
                weak.insert(*winner);
            }
        }
        match strict.len() {
            1 => StageResult::Winner(*strict.iter().next().unwrap()),
            0 if weak.is_empty() => StageResult::NoWinner,
            0 => StageResult::Tie(weak.into_iter().collect()),
            _ => StageResult::Conflict(strict.into_iter().collect()),
        }
    }

    /// One representative of each swap orbit met by the stage's vectors.
    pub fn minimal_generators(&self) -> Vec<NormalVector> {
        let mut covered: BTreeSet<NormalVector> = BTreeSet::new();
        let mut generators = Vec::new();
        for v in &self.vectors {
            if covered.contains(v) {
                continue;
            }
            covered.extend(orbit(v));
            generators.push(v.clone());
        }
        generators
    }

    /// Category of every distinct vector, aligned with `vectors()`.
    pub fn vector_categories(&self, reading: FirstPlace) -> Vec<VectorCategory> {
        self.vectors
            .iter()
            .map(|v| classify_vector(v, reading))
            .collect()
    }

    pub fn classify(&self, reading: FirstPlace) -> StageType {
        stage_type(&self.vector_categories(reading))
    }
}

/// Stage type from the categories of its vectors.
pub fn stage_type(categories: &[VectorCategory]) -> StageType {
    let has = |n: Option<u8>| categories.iter().any(|c| c.number() == n);
    if has(None) {
        StageType::NonCompliant
    } else if has(Some(3)) {
        StageType::Type3
    } else {
        match (has(Some(1)), has(Some(2))) {
            (true, true) => StageType::Type1b,
            (false, true) => StageType::Type2,
            _ => StageType::Type1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::BallotSpace;
    use crate::rational::int;

    fn strict3() -> Arc<BallotCatalog> {
        BallotCatalog::new(BallotSpace::strict(3)).unwrap()
    }

    fn vector(cat: &Arc<BallotCatalog>, xs: &[i64]) -> NormalVector {
        NormalVector::new(cat.clone(), xs.iter().map(|&x| int(x)).collect()).unwrap()
    }

    /// A wins if it is ranked last by fewer voters than B and than C.
    fn antiplurality_seed(cat: &Arc<BallotCatalog>) -> Condition {
        let last = |c: usize| -> Vec<i64> {
            cat.rankings()
                .iter()
                .map(|r| r.is_strictly_bottom(c) as i64)
                .collect()
        };
        let diff = |a: usize, b: usize| -> NormalVector {
            let (la, lb) = (last(a), last(b));
            vector(cat, &la.iter().zip(&lb).map(|(x, y)| y - x).collect::<Vec<_>>())
        };
        Condition::new(0, vec![diff(0, 1), diff(0, 2)]).unwrap()
    }

    #[test]
    fn antiplurality_stage_shape() {
        let cat = strict3();
        let stage = Stage::generate(antiplurality_seed(&cat));
        assert_eq!(stage.conditions().len(), 3);
        assert_eq!(stage.vectors().len(), 6);
        assert_eq!(stage.minimal_generators().len(), 1);
        assert_eq!(stage.classify(FirstPlace::Sole), StageType::Type1);
    }

    #[test]
    fn antiplurality_stage_decides() {
        let cat = strict3();
        let stage = Stage::generate(antiplurality_seed(&cat));
        let p = Profile::from_ballots(cat.clone(), &[(2, "A>B>C"), (1, "B>C>A")]).unwrap();
        assert_eq!(stage.decide(&p).unwrap(), StageResult::Winner(1));
        let centre = Profile::from_counts(cat.clone(), vec![1; 6]).unwrap();
        assert_eq!(stage.decide(&centre).unwrap(), StageResult::Tie(vec![0, 1, 2]));
    }

    #[test]
    fn asymmetric_seed_yields_multiple_of_n() {
        let cat = strict3();
        let seed = Condition::new(0, vec![vector(&cat, &[3, 1, 0, -1, -2, 0])]).unwrap();
        let stage = Stage::generate(seed);
        let n = stage.conditions().len();
        assert!(n > 3 && n.is_multiple_of(3), "{n}");
    }

    #[test]
    fn type_two_threshold_conflict() {
        let cat = strict3();
        let v1 = vector(&cat, &[1, 1, 1, -2, -2, 1]);
        let stage = Stage::generate(Condition::new(0, vec![v1]).unwrap());
        assert_eq!(stage.conditions().len(), 3);
        assert_eq!(stage.classify(FirstPlace::Sole), StageType::Type2);
        let p = Profile::from_ballots(cat, &[(2, "A>B>C"), (2, "B>A>C")]).unwrap();
        assert_eq!(stage.decide(&p).unwrap(), StageResult::Conflict(vec![0, 1]));
    }

    #[test]
    fn empty_condition_rejected() {
        assert_eq!(Condition::new(0, vec![]).unwrap_err(), Error::EmptyCondition);
        let cat = strict3();
        assert_eq!(
            Condition::new(3, vec![vector(&cat, &[1; 6])]).unwrap_err(),
            Error::CandidateOutOfRange(3)
        );
    }

    #[test]
    fn type_from_categories() {
        use VectorCategory::*;
        let c1 = Category1 { pair: (0, 1) };
        let c2 = Category2 {
            candidate: 0,
            role: crate::geometry::Role::Source,
        };
        assert_eq!(stage_type(&[c1, c1]), StageType::Type1);
        assert_eq!(stage_type(&[c1, c2]), StageType::Type1b);
        assert_eq!(stage_type(&[c2]), StageType::Type2);
        assert_eq!(stage_type(&[c1, Category3]), StageType::Type3);
        assert_eq!(stage_type(&[Category3, NonCompliant]), StageType::NonCompliant);
    }
}
