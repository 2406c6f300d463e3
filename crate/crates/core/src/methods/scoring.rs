use std::sync::Arc;

use num_traits::{One, Zero};

use crate::ballots::{BallotCatalog, Profile, Ranking};
use crate::error::{Error, Result};
use crate::geometry::{classify_vector, FirstPlace, NormalVector, VectorCategory};
use crate::rational::{format_rational, int, Rational};
use crate::stages::{Condition, Outcome, Stage};

/// Points per ballot position, best position first.
///
/// In ordinal spaces a candidate in the bottom tier always takes the last
/// weight, so `(1, 1, 0)` is antiplurality whether or not ballots are
/// truncated. In graded spaces the position is the grade slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoringWeights(Vec<Rational>);

impl ScoringWeights {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(
                "scoring weights must be non-increasing".into(),
            ));
        }
        Ok(ScoringWeights(weights))
    }

    pub fn from_integers(weights: &[i64]) -> Result<Self> {
        ScoringWeights::new(weights.iter().map(|&w| int(w)).collect())
    }

    /// `(1, ..., 1, 0)` of length `n`.
    pub fn antiplurality(n: usize) -> Self {
        ScoringWeights((0..n).map(|k| int((k + 1 < n) as i64)).collect())
    }

    /// `(1, 0, ..., 0)` of length `n`.
    pub fn plurality(n: usize) -> Self {
        ScoringWeights((0..n).map(|k| int((k == 0) as i64)).collect())
    }

    /// One point for each of the first `d` positions out of `n`.
    pub fn top(d: usize, n: usize) -> Self {
        ScoringWeights((0..n).map(|k| int((k < d) as i64)).collect())
    }

    /// Parses a comma-separated list such as `2,2,1,0`.
    pub fn parse(text: &str) -> Result<Self> {
        let weights = text
            .split(',')
            .map(|w| {
                crate::rational::parse_rational(w)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad weight `{}`", w.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        ScoringWeights::new(weights)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Points `ranking` gives `candidate`.
    pub fn score(&self, catalog: &BallotCatalog, ranking: &Ranking, candidate: usize) -> Result<&Rational> {
        catalog
            .position(ranking, candidate, self.len())
            .map(|p| &self.0[p])
            .ok_or(Error::WeightsTooShort {
                needed: positions_needed(catalog),
                available: self.len(),
            })
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        format!("({})", parts.join(", "))
    }
}

/// Weight vector length needed to score every ballot of the catalog.
pub fn positions_needed(catalog: &BallotCatalog) -> usize {
    if catalog.space().graded {
        return catalog.space().slots();
    }
    catalog
        .rankings()
        .iter()
        .map(|r| r.bottom_level() as usize + 1)
        .max()
        .unwrap_or(1)
}

/// Point totals `T_i`, exact.
pub fn tally_points(profile: &Profile, weights: &ScoringWeights) -> Result<Vec<Rational>> {
    let catalog = profile.catalog();
    let mut totals = vec![Rational::zero(); catalog.n_candidates()];
    for k in 0..profile.dimension() {
        let n = profile.count(k);
        if n.is_zero() {
            continue;
        }
        let ranking = catalog.ranking(k);
        for (c, total) in totals.iter_mut().enumerate() {
            *total += weights.score(catalog, ranking, c)? * &n;
        }
    }
    Ok(totals)
}

/// The unique maximum, or a tie among all maxima.
pub fn argmax(totals: &[Rational]) -> Outcome {
    let best = totals.iter().max().expect("at least two candidates");
    let top: Vec<usize> = (0..totals.len()).filter(|&c| &totals[c] == best).collect();
    match top[..] {
        [w] => Outcome::Winner(w),
        _ => Outcome::Tie(top),
    }
}

/// `T_a - T_b` as a vector over ballot types.
pub fn point_difference(
    catalog: &Arc<BallotCatalog>,
    weights: &ScoringWeights,
    a: usize,
    b: usize,
) -> Result<NormalVector> {
    let components = catalog
        .rankings()
        .iter()
        .map(|r| Ok(weights.score(catalog, r, a)? - weights.score(catalog, r, b)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalVector::new(catalog.clone(), components)?.with_orientation(a, b))
}

/// `T_a / n_V - quota`: positive when `a`'s points exceed the quota share
/// of the electorate.
pub fn threshold_vector(
    catalog: &Arc<BallotCatalog>,
    weights: &ScoringWeights,
    a: usize,
    quota: &Rational,
) -> Result<NormalVector> {
    let components = catalog
        .rankings()
        .iter()
        .map(|r| Ok(weights.score(catalog, r, a)? - quota))
        .collect::<Result<Vec<_>>>()?;
    NormalVector::new(catalog.clone(), components)
}

/// The comparisons "T_0 > T_b for every b".
pub fn point_comparisons(catalog: &Arc<BallotCatalog>, weights: &ScoringWeights) -> Result<Vec<NormalVector>> {
    (1..catalog.n_candidates())
        .map(|b| point_difference(catalog, weights, 0, b))
        .collect()
}

/// The stage "most points wins".
pub fn point_system_stage(catalog: &Arc<BallotCatalog>, weights: &ScoringWeights) -> Result<Stage> {
    Ok(Stage::generate(Condition::new(0, point_comparisons(catalog, weights)?)?))
}

/// The stage "most points wins, provided the points exceed `quota` times
/// the number of voters".
pub fn thresholded_stage(
    catalog: &Arc<BallotCatalog>,
    weights: &ScoringWeights,
    quota: &Rational,
) -> Result<Stage> {
    let mut vectors = point_comparisons(catalog, weights)?;
    vectors.push(threshold_vector(catalog, weights, 0, quota)?);
    Ok(Stage::generate(Condition::new(0, vectors)?))
}

/// Recovers the scoring weights of a stage built from a single orbit of
/// Category 1 vectors.
///
/// Solves `w[pos_a(k)] - w[pos_b(k)] + alpha = g[k]` exactly for the
/// generator `g` of boundary `(a, b)`, with the last weight pinned to 0
/// and `alpha` absorbing any multiple of the identity direction. Fails if
/// the stage is not of that shape or the system is inconsistent.
pub fn fit_point_system(stage: &Stage, reading: FirstPlace) -> Result<ScoringWeights> {
    let generators = stage.minimal_generators();
    let [g] = &generators[..] else {
        return Err(Error::NotAPointSystem(format!(
            "{} generators, expected 1",
            generators.len()
        )));
    };
    let (a, b) = match classify_vector(g, reading) {
        VectorCategory::Category1 { pair } => pair,
        other => return Err(Error::NotAPointSystem(format!("generator is {other}"))),
    };
    let catalog = stage.catalog();
    let m = positions_needed(catalog);
    // unknowns: w_0 .. w_{m-2}, then alpha
    let cols = m;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (k, r) in catalog.rankings().iter().enumerate() {
        let mut row = vec![Rational::zero(); cols + 1];
        let pa = catalog.position(r, a, m).expect("m positions suffice");
        let pb = catalog.position(r, b, m).expect("m positions suffice");
        if pa + 1 < m {
            row[pa] += Rational::one();
        }
        if pb + 1 < m {
            row[pb] -= Rational::one();
        }
        row[cols - 1] = Rational::one();
        row[cols] = g.component(k).clone();
        rows.push(row);
    }
    let solution = solve(rows, cols)
        .ok_or_else(|| Error::NotAPointSystem("generator is not a point difference".into()))?;
    let mut weights: Vec<Rational> = solution[..cols - 1].to_vec();
    weights.push(Rational::zero());
    let fitted = ScoringWeights::new(weights)
        .map_err(|_| Error::NotAPointSystem("fitted weights increase".into()))?;
    Ok(fitted)
}

/// Gauss-Jordan elimination over the rationals; free variables are set to
/// zero. `None` when inconsistent.
fn solve(mut rows: Vec<Vec<Rational>>, cols: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=cols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::BallotSpace;
    use crate::geometry::SwapOperator;
    use crate::rational::ratio;
    use crate::stages::StageType;

    fn strict3() -> Arc<BallotCatalog> {
        BallotCatalog::new(BallotSpace::strict(3)).unwrap()
    }

    #[test]
    fn hand_tallies() {
        let cat = strict3();
        let p = Profile::from_ballots(cat, &[(2, "A>B>C"), (1, "B>C>A")]).unwrap();
        let anti = tally_points(&p, &ScoringWeights::antiplurality(3)).unwrap();
        assert_eq!(anti, vec![int(2), int(3), int(1)]);
        assert_eq!(argmax(&anti), Outcome::Winner(1));
        let plur = tally_points(&p, &ScoringWeights::plurality(3)).unwrap();
        assert_eq!(argmax(&plur), Outcome::Winner(0));
        let flat = tally_points(&p, &ScoringWeights::from_integers(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(argmax(&flat), Outcome::Tie(vec![0, 1, 2]));
    }

    #[test]
    fn short_weights() {
        let cat = strict3();
        let p = Profile::from_ballots(cat, &[(1, "A>B>C")]).unwrap();
        assert_eq!(
            tally_points(&p, &ScoringWeights::from_integers(&[1, 0]).unwrap()).unwrap_err(),
            Error::WeightsTooShort {
                needed: 3,
                available: 2
            }
        );
    }

    #[test]
    fn increasing_weights_rejected() {
        assert!(ScoringWeights::from_integers(&[0, 1]).is_err());
        assert!(ScoringWeights::parse("2, 2, 1/2, 0").is_ok());
        assert!(ScoringWeights::parse("2,x").is_err());
    }

    #[test]
    fn antiplurality_difference_is_the_table_vector() {
        let cat = strict3();
        let v = point_difference(&cat, &ScoringWeights::antiplurality(3), 0, 1).unwrap();
        let expected: Vec<Rational> = [0, 1, 1, -1, -1, 0].iter().map(|&x| int(x)).collect();
        assert_eq!(v.components(), &expected[..]);
    }

    #[test]
    fn quota_stage() {
        let cat = strict3();
        let stage =
            thresholded_stage(&cat, &ScoringWeights::antiplurality(3), &ratio(3, 4)).unwrap();
        assert_eq!(stage.classify(FirstPlace::Sole), StageType::Type1b);
        assert_eq!(stage.minimal_generators().len(), 2);
        assert_eq!(stage.conditions().len(), 3);
    }

    #[test]
    fn fit_recovers_antiplurality() {
        let cat = strict3();
        let stage = point_system_stage(&cat, &ScoringWeights::antiplurality(3)).unwrap();
        let w = fit_point_system(&stage, FirstPlace::Sole).unwrap();
        assert_eq!(w, ScoringWeights::antiplurality(3));
    }

    #[test]
    fn fit_absorbs_identity_shift() {
        let cat = strict3();
        let n12 = point_difference(&cat, &ScoringWeights::antiplurality(3), 0, 1).unwrap();
        let shifted = n12.shifted(&ratio(1, 2)).unwrap();
        let s23 = SwapOperator::new(&cat, 1, 2).unwrap();
        let n13 = s23.apply(&shifted).unwrap();
        let stage = Stage::generate(Condition::new(0, vec![shifted, n13]).unwrap());
        let w = fit_point_system(&stage, FirstPlace::Sole).unwrap();
        assert_eq!(w, ScoringWeights::antiplurality(3));
    }

    #[test]
    fn borda_is_not_a_fit() {
        let cat = strict3();
        let stage = point_system_stage(&cat, &ScoringWeights::from_integers(&[2, 1, 0]).unwrap()).unwrap();
        assert!(fit_point_system(&stage, FirstPlace::Sole).is_err());
    }
}
