use std::cmp::Ordering;
use std::sync::Arc;

use crate::ballots::{BallotCatalog, Profile};
use crate::error::{Error, Result};
use crate::geometry::FirstPlace;
use crate::methods::{resolve_ties, Tiebreak};

use super::outcome::Outcome;
use super::stage::{Stage, StageResult, StageType};

/// Anything that maps a profile to an outcome: staged methods and direct
/// tallies alike.
pub trait ElectionMethod: Send + Sync {
    fn name(&self) -> &str;

    fn catalog(&self) -> &Arc<BallotCatalog>;

    /// The outcome before any tiebreak.
    fn evaluate(&self, profile: &Profile) -> Result<Outcome>;

    fn tiebreak(&self) -> Option<Tiebreak> {
        None
    }

    /// `evaluate` followed by the method's tiebreak, if any.
    fn decide(&self, profile: &Profile) -> Result<Outcome> {
        let outcome = self.evaluate(profile)?;
        Ok(resolve_ties(self.tiebreak(), profile, outcome))
    }
}

/// An ordered sequence of stages sharing one ballot space.
#[derive(Clone, Debug)]
pub struct Method {
    name: String,
    catalog: Arc<BallotCatalog>,
    stages: Vec<Stage>,
    tiebreak: Option<Tiebreak>,
}

/// Signs observed in one stage while tracing an evaluation.
#[derive(Clone, Debug)]
pub struct StageTrace {
    /// 1-based stage number.
    pub stage: usize,
    pub result: StageResult,
    /// Per condition: its winner and the sign of each of its inner products.
    pub conditions: Vec<(usize, Vec<Ordering>)>,
}

impl Method {
    /// Rejects a Type 1 stage anywhere but last: such a stage always
    /// produces a winner or a tie, so later stages could never run.
    pub fn new(
        name: impl Into<String>,
        stages: Vec<Stage>,
        tiebreak: Option<Tiebreak>,
    ) -> Result<Method> {
        let catalog = stages
            .first()
            .ok_or_else(|| Error::InvalidParameter("a method needs at least one stage".into()))?
            .catalog()
            .clone();
        if stages.iter().any(|s| **s.catalog() != *catalog) {
            return Err(Error::SpaceMismatch);
        }
        let reading = FirstPlace::default_for(catalog.space());
        for (k, stage) in stages.iter().enumerate() {
            if k + 1 < stages.len() && stage.classify(reading) == StageType::Type1 {
                return Err(Error::Type1NotFinal { stage: k + 1 });
            }
        }
        Ok(Method {
            name: name.into(),
            catalog,
            stages,
            tiebreak,
        })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn with_tiebreak(mut self, tiebreak: Option<Tiebreak>) -> Self {
        self.tiebreak = tiebreak;
        self
    }

    fn interpret(&self, k: usize, result: StageResult) -> Option<Result<Outcome>> {
        match result {
            StageResult::Winner(w) => Some(Ok(Outcome::Winner(w))),
            StageResult::Tie(t) => Some(Ok(Outcome::tie(t))),
            StageResult::Conflict(winners) => Some(Err(Error::MutualExclusivity {
                stage: k + 1,
                winners,
            })),
            StageResult::NoWinner => None,
        }
    }

    /// Every stage consulted, with the signs that drove its result.
    pub fn trace(&self, profile: &Profile) -> Result<Vec<StageTrace>> {
        let mut traces = Vec::new();
        for (k, stage) in self.stages.iter().enumerate() {
            let signs = stage.signs(profile)?;
            let result = stage.decide_with(&signs);
            let conditions = stage
                .conditions()
                .iter()
                .map(|c| {
                    let s = c
                        .inequalities()
                        .iter()
                        .map(|v| signs[stage.vectors().binary_search(v).expect("stage vector")])
                        .collect();
                    (c.winner(), s)
                })
                .collect();
            let done = result != StageResult::NoWinner;
            traces.push(StageTrace {
                stage: k + 1,
                result,
                conditions,
            });
            if done {
                break;
            }
        }
        Ok(traces)
    }
}

impl ElectionMethod for Method {
    fn name(&self) -> &str {
        &self.name
    }

    fn catalog(&self) -> &Arc<BallotCatalog> {
        &self.catalog
    }

    fn evaluate(&self, profile: &Profile) -> Result<Outcome> {
        if profile.is_empty() {
            return Err(Error::EmptyElectorate);
        }
        for (k, stage) in self.stages.iter().enumerate() {
            if let Some(outcome) = self.interpret(k, stage.decide(profile)?) {
                return outcome;
            }
        }
        Err(Error::Exhausted)
    }

    fn tiebreak(&self) -> Option<Tiebreak> {
        self.tiebreak
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::BallotSpace;
    use crate::geometry::{NormalVector, SwapOperator};
    use crate::rational::int;
    use crate::stages::Condition;

    fn strict3() -> Arc<BallotCatalog> {
        BallotCatalog::new(BallotSpace::strict(3)).unwrap()
    }

    fn vector(cat: &Arc<BallotCatalog>, xs: &[i64]) -> NormalVector {
        NormalVector::new(cat.clone(), xs.iter().map(|&x| int(x)).collect()).unwrap()
    }

    fn antiplurality(cat: &Arc<BallotCatalog>) -> Stage {
        // last(B) - last(A) and its image under S_23, last(C) - last(A)
        let n12 = vector(cat, &[0, 1, 1, -1, -1, 0]);
        let s23 = SwapOperator::new(cat, 1, 2).unwrap();
        let n13 = s23.apply(&n12).unwrap();
        Stage::generate(Condition::new(0, vec![n12, n13]).unwrap())
    }

    #[test]
    fn type_one_stage_must_be_last() {
        let cat = strict3();
        let err = Method::new("x", vec![antiplurality(&cat), antiplurality(&cat)], None).unwrap_err();
        assert_eq!(err, Error::Type1NotFinal { stage: 1 });
        assert!(Method::new("x", vec![antiplurality(&cat)], None).is_ok());
        assert!(Method::new("x", vec![], None).is_err());
    }

    #[test]
    fn evaluation_and_trace() {
        let cat = strict3();
        let m = Method::new("antiplurality", vec![antiplurality(&cat)], None).unwrap();
        let p = Profile::from_ballots(cat.clone(), &[(2, "A>B>C"), (1, "B>C>A")]).unwrap();
        assert_eq!(m.evaluate(&p).unwrap(), Outcome::Winner(1));
        let trace = m.trace(&p).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].result, StageResult::Winner(1));
        assert_eq!(trace[0].conditions.len(), 3);
    }

    #[test]
    fn tiebreak_applies_in_decide() {
        let cat = strict3();
        let m = Method::new("ap", vec![antiplurality(&cat)], Some(Tiebreak::Pairwise)).unwrap();
        // last places: A 1, B 1, C 2 -> tie {A, B}; A beats B 3-1
        let p = Profile::from_ballots(cat, &[(1, "A>C>B"), (1, "B>C>A"), (2, "A>B>C")]).unwrap();
        assert_eq!(m.evaluate(&p).unwrap(), Outcome::Tie(vec![0, 1]));
        assert_eq!(m.decide(&p).unwrap(), Outcome::Winner(0));
    }
}
