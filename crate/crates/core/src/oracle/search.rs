use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::ballots::{BallotCatalog, BallotSpace, Profile, Ranking};
use crate::error::{Error, Result};
use crate::stages::{ElectionMethod, Outcome};

use super::enumerate::compositions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    /// Never need to rank another candidate above the favorite.
    Fbc,
    /// Never need to rank another candidate above or equal to the favorite.
    Sfbc,
    /// Never need to lift the least favorite off the bottom.
    Lfp,
    /// Raising the winner on one ballot never unseats it.
    Monotonicity,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Fbc => "fbc",
            Criterion::Sfbc => "sfbc",
            Criterion::Lfp => "lfp",
            Criterion::Monotonicity => "monotonicity",
        })
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fbc" => Ok(Criterion::Fbc),
            "sfbc" => Ok(Criterion::Sfbc),
            "lfp" => Ok(Criterion::Lfp),
            "monotonicity" | "monotonic" => Ok(Criterion::Monotonicity),
            other => Err(Error::InvalidParameter(format!("unknown criterion `{other}`"))),
        }
    }
}

/// What to search and how.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchScope {
    pub space: BallotSpace,
    pub criterion: Criterion,
    pub max_voters: usize,
    /// Skip any voter instance that meets a tie instead of resolving it.
    pub skip_on_tie: bool,
    /// Threads for the sweep; `None` uses the available parallelism.
    pub workers: Option<usize>,
}

impl SearchScope {
    pub fn new(space: BallotSpace, criterion: Criterion, max_voters: usize) -> Self {
        SearchScope {
            space,
            criterion,
            max_voters,
            skip_on_tie: true,
            workers: None,
        }
    }

    pub fn skip_on_tie(mut self, skip: bool) -> Self {
        self.skip_on_tie = skip;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn validate(&self, method: &dyn ElectionMethod) -> Result<()> {
        if self.max_voters == 0 {
            return Err(Error::InvalidParameter("max_voters must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParameter("workers must be at least 1".into()));
        }
        if *method.catalog().space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

/// A witnessed violation, replayable through the method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub criterion: Criterion,
    /// Electorate including the pivotal voter's sincere ballot.
    pub profile: Profile,
    /// Ballot type of the pivotal voter, read as their sincere ranking.
    pub sincere: usize,
    /// Ballot type the voter switches to.
    pub manipulation: usize,
    pub sincere_outcome: Outcome,
    pub manipulated_outcome: Outcome,
    /// Best protected ballot and its outcome (absent for monotonicity).
    pub best_protected: Option<(usize, Outcome)>,
    /// Whether outcomes were taken after the method's tiebreak.
    pub tiebroken: bool,
}

impl Counterexample {
    pub fn catalog(&self) -> &Arc<BallotCatalog> {
        self.profile.catalog()
    }

    pub fn sincere_ranking(&self) -> &Ranking {
        self.catalog().ranking(self.sincere)
    }

    pub fn manipulated_profile(&self) -> Profile {
        self.profile.with_recast(self.sincere, self.manipulation)
    }
}

/// Outcome of a search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub scope: SearchScope,
    pub method: String,
    pub profiles_examined: u64,
    pub instances_examined: u64,
    pub instances_skipped: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Default)]
struct Partial {
    instances: u64,
    skipped: u64,
    found: Vec<Counterexample>,
}

/// Runs `f` over every profile in scope, possibly in parallel, merging
/// results in enumeration order.
fn sweep<F>(method: &dyn ElectionMethod, scope: &SearchScope, f: F) -> Result<Verdict>
where
    F: Fn(&Profile) -> Result<Partial> + Sync,
{
    scope.validate(method)?;
    let catalog = method.catalog();
    let run = || -> Result<Verdict> {
        let mut verdict = Verdict {
            scope: scope.clone(),
            method: method.name().to_string(),
            profiles_examined: 0,
            instances_examined: 0,
            instances_skipped: 0,
            counterexamples: Vec::new(),
        };
        for n in 1..=scope.max_voters {
            let all: Vec<Vec<u64>> = compositions(n as u64, catalog.len()).collect();
            let parts = all
                .into_par_iter()
                .map(|counts| {
                    let profile = Profile::from_counts(catalog.clone(), counts)?;
                    f(&profile)
                })
                .collect::<Result<Vec<Partial>>>()?;
            for part in parts {
                verdict.profiles_examined += 1;
                verdict.instances_examined += part.instances;
                verdict.instances_skipped += part.skipped;
                verdict.counterexamples.extend(part.found);
            }
        }
        Ok(verdict)
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = scope.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::Io(e.to_string()))?;
    pool.install(run)
}

/// Either the raw outcome or the tiebroken one; `None` means "skip".
fn outcome_for(method: &dyn ElectionMethod, profile: &Profile, skip_on_tie: bool) -> Result<Option<Outcome>> {
    let outcome = if skip_on_tie {
        method.evaluate(profile)?
    } else {
        let raw = method.evaluate(profile)?;
        if raw.is_tie() && method.tiebreak().is_none() {
            return Err(Error::Indecisive);
        }
        crate::methods::resolve_ties(method.tiebreak(), profile, raw)
    };
    Ok((!outcome.is_tie()).then_some(outcome))
}

fn protects(criterion: Criterion, sincere: &Ranking, ballot: &Ranking) -> bool {
    let order = sincere.order();
    match criterion {
        Criterion::Sfbc => ballot.is_strictly_top(order[0]),
        Criterion::Fbc => ballot.is_weakly_top(order[0]),
        Criterion::Lfp => ballot.is_strictly_bottom(*order.last().expect("candidates")),
        Criterion::Monotonicity => true,
    }
}

/// How far `ballot` moves the protected candidate: places lost by the
/// favorite, or places gained by the least favorite.
fn departure(criterion: Criterion, sincere: &Ranking, ballot: &Ranking) -> usize {
    let order = sincere.order();
    match criterion {
        Criterion::Lfp => {
            let least = *order.last().expect("candidates");
            sincere.n_candidates() - 1 - ballot.position(least)
        }
        _ => ballot.position(order[0]) + usize::from(!ballot.is_strictly_top(order[0])),
    }
}

/// Searches for voters who do strictly better by casting an unprotected
/// ballot than by any protected one.
///
/// Pivotal voters are those whose cast ballot is a strict ranking; every
/// admissible ballot is an alternative. With `skip_on_tie` ties stay
/// unresolved, otherwise the method's tiebreak applies first. A voter
/// instance is skipped when a protected ballot still ends in a tie; an
/// exposed ballot that ties is simply never a witness.
pub fn check_criterion(method: &dyn ElectionMethod, scope: &SearchScope) -> Result<Verdict> {
    if scope.criterion == Criterion::Monotonicity {
        return check_monotonic(method, scope);
    }
    let catalog = method.catalog().clone();
    sweep(method, scope, |profile| {
        let mut part = Partial::default();
        let counts = profile.whole_counts().expect("enumerated counts");
        for k in (0..catalog.len()).filter(|&k| counts[k] > 0) {
            let sincere = catalog.ranking(k);
            if !sincere.is_strict() {
                continue;
            }
            part.instances += 1;
            let mut outcomes = Vec::with_capacity(catalog.len());
            for b in 0..catalog.len() {
                outcomes.push(outcome_for(method, &profile.with_recast(k, b), scope.skip_on_tie)?);
            }
            let is_protected = |b: usize| protects(scope.criterion, sincere, catalog.ranking(b));
            // protected outcomes set the bar, so a tie there leaves the
            // comparison undefined; an exposed tie just witnesses nothing
            if (0..catalog.len()).any(|b| is_protected(b) && outcomes[b].is_none()) {
                part.skipped += 1;
                continue;
            }
            // decided alternatives only, keyed by how the voter ranks the
            // winner and then by how far the ballot strays, so witnesses
            // are the mildest manipulation that does the job
            let keyed: Vec<(bool, (usize, usize, usize))> = outcomes
                .iter()
                .enumerate()
                .filter_map(|(b, o)| {
                    let winner = sincere.position(o.as_ref()?.winner().expect("decided"));
                    let ballot = catalog.ranking(b);
                    Some((is_protected(b), (winner, departure(scope.criterion, sincere, ballot), b)))
                })
                .collect();
            let decided = |protected: bool| {
                keyed.iter().filter(move |(p, _)| *p == protected).map(|(_, key)| *key)
            };
            let (bar, _, protected) = decided(true).min().expect("the sincere ballot is protected");
            let Some((reach, _, exposed)) = decided(false).min() else {
                continue;
            };
            if reach < bar {
                let outcome = |b: usize| outcomes[b].clone().expect("decided");
                part.found.push(Counterexample {
                    criterion: scope.criterion,
                    profile: profile.clone(),
                    sincere: k,
                    manipulation: exposed,
                    sincere_outcome: outcome(k),
                    manipulated_outcome: outcome(exposed),
                    best_protected: Some((protected, outcome(protected))),
                    tiebroken: !scope.skip_on_tie,
                });
            }
        }
        Ok(part)
    })
}

/// Single-step raises of `candidate` that keep everyone else's relative
/// order, restricted to admissible ballots.
pub fn raises(catalog: &BallotCatalog, ranking: &Ranking, candidate: usize) -> Vec<usize> {
    let level = ranking.level(candidate);
    let mut out = Vec::new();
    let mut push = |r: Ranking| {
        if let Some(k) = catalog.index_of(&r) {
            if !out.contains(&k) {
                out.push(k);
            }
        }
    };
    if catalog.space().graded {
        if level > 0 {
            let mut levels = ranking.levels().to_vec();
            levels[candidate] -= 1;
            push(Ranking::from_levels(levels));
        }
        return out;
    }
    let shared = ranking.members_at(level).len() > 1;
    let n = ranking.n_candidates();
    if shared {
        // split it out just above its old tier-mates
        let levels: Vec<u8> = (0..n)
            .map(|c| match ranking.level(c) {
                _ if c == candidate => level,
                l if l >= level => l + 1,
                l => l,
            })
            .collect();
        push(Ranking::from_levels(levels).densified());
    } else if level > 0 {
        // join the tier above
        let mut levels = ranking.levels().to_vec();
        levels[candidate] = level - 1;
        push(Ranking::from_levels(levels).densified());
        // or jump over it
        let levels: Vec<u8> = (0..n)
            .map(|c| match ranking.level(c) {
                _ if c == candidate => level - 1,
                l if l == level - 1 => level,
                l => l,
            })
            .collect();
        push(Ranking::from_levels(levels).densified());
    }
    out
}

/// Searches for profiles where raising the winner on one ballot unseats it.
pub fn check_monotonic(method: &dyn ElectionMethod, scope: &SearchScope) -> Result<Verdict> {
    let catalog = method.catalog().clone();
    sweep(method, scope, |profile| {
        let mut part = Partial::default();
        let Some(base) = outcome_for(method, profile, scope.skip_on_tie)? else {
            return Ok(part);
        };
        let w = base.winner().expect("decided");
        let counts = profile.whole_counts().expect("enumerated counts");
        for k in (0..catalog.len()).filter(|&k| counts[k] > 0) {
            for r in raises(&catalog, catalog.ranking(k), w) {
                part.instances += 1;
                let Some(after) = outcome_for(method, &profile.with_recast(k, r), scope.skip_on_tie)? else {
                    part.skipped += 1;
                    continue;
                };
                if after != base {
                    part.found.push(Counterexample {
                        criterion: Criterion::Monotonicity,
                        profile: profile.clone(),
                        sincere: k,
                        manipulation: r,
                        sincere_outcome: base.clone(),
                        manipulated_outcome: after,
                        best_protected: None,
                        tiebroken: !scope.skip_on_tie,
                    });
                }
            }
        }
        Ok(part)
    })
}

/// Re-evaluates a counterexample and reports whether every recorded
/// outcome is reproduced and the violation still holds.
pub fn replay(counterexample: &Counterexample, method: &dyn ElectionMethod) -> bool {
    let cx = counterexample;
    if **method.catalog() != **cx.catalog() {
        return false;
    }
    let eval = |p: &Profile| -> Option<Outcome> {
        let raw = method.evaluate(p).ok()?;
        Some(if cx.tiebroken {
            crate::methods::resolve_ties(method.tiebreak(), p, raw)
        } else {
            raw
        })
    };
    let count_ok = cx
        .profile
        .whole_counts()
        .is_none_or(|c| c.get(cx.sincere).is_some_and(|&n| n > 0));
    if !count_ok {
        return false;
    }
    if eval(&cx.profile).as_ref() != Some(&cx.sincere_outcome) {
        return false;
    }
    if eval(&cx.manipulated_profile()).as_ref() != Some(&cx.manipulated_outcome) {
        return false;
    }
    let sincere = cx.sincere_ranking();
    match (&cx.best_protected, cx.criterion) {
        (None, Criterion::Monotonicity) => {
            cx.manipulated_outcome != cx.sincere_outcome
                && raises(cx.catalog(), sincere, cx.sincere_outcome.winner().unwrap_or(usize::MAX))
                    .contains(&cx.manipulation)
        }
        (Some((b, outcome)), criterion) if criterion != Criterion::Monotonicity => {
            let catalog = cx.catalog();
            let recast = cx.profile.with_recast(cx.sincere, *b);
            let better = match (cx.manipulated_outcome.winner(), outcome.winner()) {
                (Some(m), Some(p)) => sincere.position(m) < sincere.position(p),
                _ => false,
            };
            eval(&recast).as_ref() == Some(outcome)
                && protects(criterion, sincere, catalog.ranking(*b))
                && !protects(criterion, sincere, catalog.ranking(cx.manipulation))
                && better
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::BuiltinMethod;

    fn built(b: BuiltinMethod, n: usize) -> crate::methods::Built {
        let cat = BallotCatalog::new(b.default_space(n)).unwrap();
        b.build(&cat, None).unwrap()
    }

    #[test]
    fn raises_in_strict_and_weak_spaces() {
        let strict = BallotCatalog::new(BallotSpace::strict(3)).unwrap();
        let r = strict.parse_ranking("A>B>C").unwrap();
        let up: Vec<String> = raises(&strict, &r, 2)
            .into_iter()
            .map(|k| strict.format_ranking(strict.ranking(k)))
            .collect();
        assert_eq!(up, vec!["A>C>B"]);
        assert!(raises(&strict, &r, 0).is_empty());

        let weak = BallotCatalog::new(BallotSpace::weak(3)).unwrap();
        let r = weak.parse_ranking("A>B=C").unwrap();
        let up: Vec<String> = raises(&weak, &r, 2)
            .into_iter()
            .map(|k| weak.format_ranking(weak.ranking(k)))
            .collect();
        assert_eq!(up, vec!["A>C>B"]);
        let r = weak.parse_ranking("A>B>C").unwrap();
        let up: Vec<String> = raises(&weak, &r, 1)
            .into_iter()
            .map(|k| weak.format_ranking(weak.ranking(k)))
            .collect();
        assert_eq!(up, vec!["A=B>C", "B>A>C"]);
    }

    #[test]
    fn antiplurality_small_scope_is_clean() {
        let m = built(BuiltinMethod::Antiplurality, 3);
        let scope = SearchScope::new(BallotSpace::strict(3), Criterion::Sfbc, 3).workers(1);
        let v = check_criterion(&m, &scope).unwrap();
        assert!(v.passed());
        assert_eq!(v.profiles_examined, 6 + 21 + 56);
        assert!(v.instances_examined > 0);
    }

    #[test]
    fn indecisive_without_tiebreak() {
        let m = built(BuiltinMethod::Antiplurality, 3);
        let scope = SearchScope::new(BallotSpace::strict(3), Criterion::Sfbc, 2).skip_on_tie(false);
        assert_eq!(check_criterion(&m, &scope).unwrap_err(), Error::Indecisive);
    }

    #[test]
    fn scope_must_match_the_method() {
        let m = built(BuiltinMethod::Antiplurality, 3);
        let scope = SearchScope::new(BallotSpace::weak(3), Criterion::Sfbc, 2);
        assert_eq!(check_criterion(&m, &scope).unwrap_err(), Error::SpaceMismatch);
        let scope = SearchScope::new(BallotSpace::strict(3), Criterion::Sfbc, 0);
        assert!(check_criterion(&m, &scope).is_err());
    }

    #[test]
    fn plurality_is_monotone() {
        let m = built(BuiltinMethod::Plurality, 3);
        let scope = SearchScope::new(BallotSpace::strict(3), Criterion::Monotonicity, 5);
        assert!(check_criterion(&m, &scope).unwrap().passed());
    }
}
