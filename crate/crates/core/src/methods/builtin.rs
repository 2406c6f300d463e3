use std::fmt;
use std::sync::Arc;

use crate::ballots::{BallotCatalog, BallotSpace, Profile};
use crate::error::{Error, Result};
use crate::geometry::NormalVector;
use crate::rational::{format_rational, int, parse_rational, ratio, Rational};
use crate::stages::{Condition, ElectionMethod, Method, Outcome, Stage};

use super::direct::{DirectKind, DirectTally};
use super::scoring::{
    point_difference, point_system_stage, positions_needed, thresholded_stage, ScoringWeights,
};
use super::tiebreak::Tiebreak;

/// The catalog of ready-made methods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinMethod {
    /// One point for every position except last.
    Antiplurality,
    /// A positional system whose first two positions score alike.
    /// `None` means `(1, 1, 0, ..., 0)`.
    EqualTopTwo { weights: Option<ScoringWeights> },
    /// Most first-or-second placements wins if that count exceeds `quota`
    /// of the voters; otherwise `fallback` points decide (antiplurality by
    /// default).
    QuotaPoints {
        quota: Rational,
        fallback: Option<ScoringWeights>,
    },
    /// Majority Choice Approval on Preferred / Approved / Disapproved grades.
    Mca,
    /// Majority Defeat Disqualification Approval.
    Mdda,
    Approval,
    /// Range voting with `levels` scores, modeled as grade slots.
    Range { levels: usize },
    Plurality,
    Irv,
    /// Majority threshold on successively deeper top-d counts, then the
    /// most candidates ranked anywhere but last.
    Bucklin,
}

impl BuiltinMethod {
    /// Every builtin with default parameters.
    pub fn all() -> Vec<BuiltinMethod> {
        vec![
            BuiltinMethod::Antiplurality,
            BuiltinMethod::EqualTopTwo { weights: None },
            BuiltinMethod::QuotaPoints {
                quota: ratio(3, 4),
                fallback: None,
            },
            BuiltinMethod::Mca,
            BuiltinMethod::Mdda,
            BuiltinMethod::Approval,
            BuiltinMethod::Range { levels: 6 },
            BuiltinMethod::Plurality,
            BuiltinMethod::Irv,
            BuiltinMethod::Bucklin,
        ]
    }

    /// Parses `name key=value ...`, e.g. `quota-points q=3/4` or
    /// `equal-top-two weights=2,2,1,0`.
    pub fn parse(text: &str) -> Result<BuiltinMethod> {
        let mut words = text.split_whitespace();
        let name = words
            .next()
            .ok_or_else(|| Error::InvalidParameter("missing method name".into()))?;
        let mut params = Vec::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{w}`")))?;
            params.push((k, v));
        }
        let mut take = |key: &str, aliases: &[&str]| -> Option<&str> {
            let pos = params
                .iter()
                .position(|(k, _)| *k == key || aliases.contains(k))?;
            Some(params.remove(pos).1)
        };
        let method = match name {
            "antiplurality" => BuiltinMethod::Antiplurality,
            "equal-top-two" => BuiltinMethod::EqualTopTwo {
                weights: take("weights", &["w"]).map(ScoringWeights::parse).transpose()?,
            },
            "quota-points" => BuiltinMethod::QuotaPoints {
                quota: match take("q", &["quota"]) {
                    Some(q) => parse_rational(q)
                        .ok_or_else(|| Error::InvalidParameter(format!("bad quota `{q}`")))?,
                    None => ratio(3, 4),
                },
                fallback: take("fallback", &[]).map(ScoringWeights::parse).transpose()?,
            },
            "mca" => BuiltinMethod::Mca,
            "mdda" => BuiltinMethod::Mdda,
            "approval" => BuiltinMethod::Approval,
            "range" => BuiltinMethod::Range {
                levels: match take("levels", &["l"]) {
                    Some(l) => l
                        .parse()
                        .map_err(|_| Error::InvalidParameter(format!("bad level count `{l}`")))?,
                    None => 6,
                },
            },
            "plurality" => BuiltinMethod::Plurality,
            "irv" => BuiltinMethod::Irv,
            "bucklin" => BuiltinMethod::Bucklin,
            other => return Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::InvalidParameter(format!("unknown parameter `{k}` for {name}")));
        }
        method.validate()?;
        Ok(method)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinMethod::Antiplurality => "antiplurality",
            BuiltinMethod::EqualTopTwo { .. } => "equal-top-two",
            BuiltinMethod::QuotaPoints { .. } => "quota-points",
            BuiltinMethod::Mca => "mca",
            BuiltinMethod::Mdda => "mdda",
            BuiltinMethod::Approval => "approval",
            BuiltinMethod::Range { .. } => "range",
            BuiltinMethod::Plurality => "plurality",
            BuiltinMethod::Irv => "irv",
            BuiltinMethod::Bucklin => "bucklin",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            BuiltinMethod::QuotaPoints { quota, .. }
                if !(*quota > ratio(1, 2) && *quota <= int(1)) =>
            {
                Err(Error::InvalidParameter(format!(
                    "quota must lie in (1/2, 1], got {}",
                    format_rational(quota)
                )))
            }
            BuiltinMethod::Range { levels } if *levels < 2 => Err(Error::InvalidParameter(
                "range voting needs at least 2 levels".into(),
            )),
            BuiltinMethod::EqualTopTwo { weights: Some(w) }
                if w.len() < 2 || w.weights()[0] != w.weights()[1] =>
            {
                Err(Error::InvalidParameter(
                    "the first two weights must be equal".into(),
                ))
            }
            _ => Ok(()),
        }
    }

    /// The ballot space the method is designed for.
    pub fn default_space(&self, n_candidates: usize) -> BallotSpace {
        match self {
            BuiltinMethod::Mca => BallotSpace::graded(n_candidates, 3),
            BuiltinMethod::Approval => BallotSpace::graded(n_candidates, 2),
            BuiltinMethod::Range { levels } => BallotSpace::graded(n_candidates, *levels),
            BuiltinMethod::Mdda => BallotSpace::weak(n_candidates),
            BuiltinMethod::Bucklin => BallotSpace::truncated(n_candidates),
            _ => BallotSpace::strict(n_candidates),
        }
    }

    pub fn build(&self, catalog: &Arc<BallotCatalog>, tiebreak: Option<Tiebreak>) -> Result<Built> {
        self.validate()?;
        let m = positions_needed(catalog);
        let n = catalog.n_candidates();
        let stages = match self {
            BuiltinMethod::Plurality => {
                return Ok(Built::Direct(DirectTally::new(
                    DirectKind::Plurality,
                    catalog.clone(),
                    tiebreak,
                )?))
            }
            BuiltinMethod::Irv => {
                return Ok(Built::Direct(DirectTally::new(
                    DirectKind::Irv,
                    catalog.clone(),
                    tiebreak,
                )?))
            }
            BuiltinMethod::Antiplurality => {
                vec![point_system_stage(catalog, &ScoringWeights::antiplurality(m))?]
            }
            BuiltinMethod::EqualTopTwo { weights } => {
                let w = weights.clone().unwrap_or_else(|| ScoringWeights::top(2, m));
                vec![point_system_stage(catalog, &w)?]
            }
            BuiltinMethod::QuotaPoints { quota, fallback } => {
                let fallback = fallback
                    .clone()
                    .unwrap_or_else(|| ScoringWeights::antiplurality(m));
                vec![
                    thresholded_stage(catalog, &ScoringWeights::top(2, m), quota)?,
                    point_system_stage(catalog, &fallback)?,
                ]
            }
            BuiltinMethod::Mca => vec![
                thresholded_stage(catalog, &ScoringWeights::top(1, m), &ratio(1, 2))?,
                point_system_stage(catalog, &ScoringWeights::top(2, m))?,
            ],
            BuiltinMethod::Mdda => mdda_stages(catalog)?,
            BuiltinMethod::Approval => {
                vec![point_system_stage(catalog, &ScoringWeights::top(1, m))?]
            }
            BuiltinMethod::Range { levels } => {
                let w = (0..*levels).rev().map(|s| int(s as i64)).collect();
                vec![point_system_stage(catalog, &ScoringWeights::new(w)?)?]
            }
            BuiltinMethod::Bucklin => {
                let last = (n - 1).max(1);
                // a first-round majority stage is Type 1 and would have to
                // be last, so rounds start at depth two
                let depths: Vec<usize> = match last {
                    1 => vec![],
                    2 => vec![2],
                    _ => (2..last).collect(),
                };
                let mut stages = depths
                    .into_iter()
                    .map(|d| thresholded_stage(catalog, &ScoringWeights::top(d, m), &ratio(1, 2)))
                    .collect::<Result<Vec<_>>>()?;
                stages.push(point_system_stage(catalog, &ScoringWeights::top(last, m))?);
                stages
            }
        };
        Ok(Built::Staged(Method::new(self.name(), stages, tiebreak)?))
    }
}

impl fmt::Display for BuiltinMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            BuiltinMethod::EqualTopTwo { weights: Some(w) } => write!(f, " weights={}", csv(w)),
            BuiltinMethod::QuotaPoints { quota, fallback } => {
                write!(f, " q={}", format_rational(quota))?;
                match fallback {
                    Some(w) => write!(f, " fallback={}", csv(w)),
                    None => Ok(()),
                }
            }
            BuiltinMethod::Range { levels } => write!(f, " levels={levels}"),
            _ => Ok(()),
        }
    }
}

fn csv(w: &ScoringWeights) -> String {
    let parts: Vec<String> = w.weights().iter().map(format_rational).collect();
    parts.join(",")
}

/// `d_xy`: positive on a profile exactly when `x` is not dominated by `y`.
///
/// +1 for ballots that do not rank `y` above `x`, -1 for ballots that do,
/// and 0 for a ballot ranking everyone equal.
pub fn not_dominated(catalog: &Arc<BallotCatalog>, x: usize, y: usize) -> Result<NormalVector> {
    Ok(NormalVector::from_fn(catalog.clone(), |r| {
        if r.is_all_tied() {
            int(0)
        } else if r.prefers(y, x) {
            int(-1)
        } else {
            int(1)
        }
    })?
    .with_orientation(x, y))
}

/// Domination stage, then the undominated candidate ranked last by the
/// fewest voters, then plain antiplurality if every candidate is
/// dominated.
fn mdda_stages(catalog: &Arc<BallotCatalog>) -> Result<Vec<Stage>> {
    let n = catalog.n_candidates();
    let m = positions_needed(catalog);
    let others: Vec<usize> = (1..n).collect();

    // 0 dominates y  <=>  (p, -d_y0) > 0
    let dominates = others
        .iter()
        .map(|&y| not_dominated(catalog, y, 0).map(|d| -&d))
        .collect::<Result<Vec<_>>>()?;
    let domination = Stage::generate(Condition::new(0, dominates)?);

    // each other candidate is either ranked last more often than 0 or
    // dominated by someone
    let undominated = others
        .iter()
        .map(|&y| not_dominated(catalog, 0, y))
        .collect::<Result<Vec<_>>>()?;
    let anti = ScoringWeights::antiplurality(m);
    let mut options: Vec<Vec<NormalVector>> = Vec::new();
    for &y in &others {
        let mut opts = vec![point_difference(catalog, &anti, 0, y)?];
        for z in (0..n).filter(|&z| z != y) {
            opts.push(-&not_dominated(catalog, y, z)?);
        }
        options.push(opts);
    }
    let mut seeds = Vec::new();
    for choice in cartesian(&options) {
        let mut vectors = undominated.clone();
        vectors.extend(choice);
        seeds.push(Condition::new(0, vectors)?);
    }
    let fewest_last = Stage::from_seeds(seeds)?;

    Ok(vec![domination, fewest_last, point_system_stage(catalog, &anti)?])
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    options.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect()
    })
}

/// A built method: stages, or a direct tally.
#[derive(Clone, Debug)]
pub enum Built {
    Staged(Method),
    Direct(DirectTally),
}

impl Built {
    pub fn as_method(&self) -> Option<&Method> {
        match self {
            Built::Staged(m) => Some(m),
            Built::Direct(_) => None,
        }
    }
}

impl ElectionMethod for Built {
    fn name(&self) -> &str {
        match self {
            Built::Staged(m) => m.name(),
            Built::Direct(d) => d.name(),
        }
    }

    fn catalog(&self) -> &Arc<BallotCatalog> {
        match self {
            Built::Staged(m) => m.catalog(),
            Built::Direct(d) => d.catalog(),
        }
    }

    fn evaluate(&self, profile: &Profile) -> Result<Outcome> {
        match self {
            Built::Staged(m) => m.evaluate(profile),
            Built::Direct(d) => d.evaluate(profile),
        }
    }

    fn tiebreak(&self) -> Option<Tiebreak> {
        match self {
            Built::Staged(m) => m.tiebreak(),
            Built::Direct(d) => d.tiebreak(),
        }
    }
}
