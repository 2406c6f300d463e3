use std::collections::HashSet;
use std::sync::Arc;

use sfbc_core::ballots::{BallotCatalog, BallotSpace, Profile};
use sfbc_core::geometry::SwapOperator;
use sfbc_core::methods::{BuiltinMethod, Built, Tiebreak};
use sfbc_core::oracle::{check_criterion, replay, Counterexample, Criterion, SearchScope, Verdict};
use sfbc_core::stages::{ElectionMethod, Outcome};
use sfbc_core::Error;

fn built(b: &BuiltinMethod, space: BallotSpace, tiebreak: Option<Tiebreak>) -> Built {
    let cat = BallotCatalog::new(space).unwrap();
    b.build(&cat, tiebreak).unwrap()
}

fn run(m: &dyn ElectionMethod, scope: SearchScope) -> Verdict {
    check_criterion(m, &scope).unwrap()
}

fn assert_replays(v: &Verdict, m: &dyn ElectionMethod) {
    for cx in &v.counterexamples {
        assert!(replay(cx, m), "{} / {}", cx.profile.to_text(), cx.sincere);
    }
}

#[test]
fn antiplurality_resists_burial_up_to_six() {
    let m = built(&BuiltinMethod::Antiplurality, BallotSpace::strict(3), None);
    let v = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Sfbc, 6));
    assert!(v.passed());
    assert_eq!(v.profiles_examined, 6 + 21 + 56 + 126 + 252 + 462);
}

#[test]
fn irv_betrays_favorites_within_nine_voters() {
    let m = built(&BuiltinMethod::Irv, BallotSpace::strict(3), None);
    let v = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Fbc, 9));
    assert!(!v.passed());
    assert_replays(&v, &m);
    for cx in &v.counterexamples {
        let fav = cx.sincere_ranking().sole_first().unwrap();
        assert!(!cx.catalog().ranking(cx.manipulation).is_first(fav));
    }
}

#[test]
fn mdda_splits_the_two_readings() {
    let m = built(&BuiltinMethod::Mdda, BallotSpace::weak(3), None);
    let fbc = run(&m, SearchScope::new(BallotSpace::weak(3), Criterion::Fbc, 5));
    let sfbc = run(&m, SearchScope::new(BallotSpace::weak(3), Criterion::Sfbc, 5));
    assert!(fbc.passed());
    assert!(!sfbc.passed());
    assert_replays(&sfbc, &m);
}

#[test]
fn plurality_is_monotone_up_to_five() {
    let m = built(&BuiltinMethod::Plurality, BallotSpace::strict(3), None);
    assert!(run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Monotonicity, 5)).passed());
}

#[test]
fn irv_monotonicity_fails_once_ties_are_broken() {
    let m = built(&BuiltinMethod::Irv, BallotSpace::strict(3), Some(Tiebreak::Pairwise));
    let skipping = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Monotonicity, 9));
    assert!(skipping.passed());
    let v = run(
        &m,
        SearchScope::new(BallotSpace::strict(3), Criterion::Monotonicity, 15).skip_on_tie(false),
    );
    assert!(!v.passed());
    assert_replays(&v, &m);
    assert!(v.counterexamples.iter().all(|cx| cx.tiebroken));
}

struct AlwaysTied(Arc<BallotCatalog>);

impl ElectionMethod for AlwaysTied {
    fn name(&self) -> &str {
        "always-tied"
    }

    fn catalog(&self) -> &Arc<BallotCatalog> {
        &self.0
    }

    fn evaluate(&self, _: &Profile) -> sfbc_core::Result<Outcome> {
        Ok(Outcome::tie((0..self.0.n_candidates()).collect()))
    }
}

#[test]
fn a_method_that_never_decides_is_vacuously_clean() {
    let m = AlwaysTied(BallotCatalog::new(BallotSpace::strict(3)).unwrap());
    for criterion in [Criterion::Fbc, Criterion::Sfbc, Criterion::Lfp, Criterion::Monotonicity] {
        let v = run(&m, SearchScope::new(BallotSpace::strict(3), criterion, 4));
        assert!(v.passed(), "{criterion}");
        assert_eq!(v.instances_examined, v.instances_skipped, "{criterion}");
    }
    let strict = SearchScope::new(BallotSpace::strict(3), Criterion::Sfbc, 2).skip_on_tie(false);
    assert_eq!(check_criterion(&m, &strict).unwrap_err(), Error::Indecisive);
}

fn one_counterexample() -> (Built, Counterexample) {
    let m = built(&BuiltinMethod::Irv, BallotSpace::strict(3), None);
    let v = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Fbc, 9).workers(1));
    let cx = v.counterexamples.into_iter().next().unwrap();
    (m, cx)
}

#[test]
fn replay_rejects_tampering() {
    let (m, cx) = one_counterexample();
    assert!(replay(&cx, &m));

    let mut moved = cx.clone();
    moved.manipulation = moved.sincere;
    assert!(!replay(&moved, &m));

    let mut padded = cx.clone();
    let mut counts = padded.profile.whole_counts().unwrap().to_vec();
    counts.iter_mut().for_each(|c| *c *= 7);
    counts[0] += 1;
    padded.profile = Profile::from_counts(cx.catalog().clone(), counts).unwrap();
    assert!(!replay(&padded, &m));

    let other = built(&BuiltinMethod::Plurality, BallotSpace::strict(3), None);
    assert!(!replay(&cx, &other));

    let weak = built(&BuiltinMethod::Mdda, BallotSpace::weak(3), None);
    assert!(!replay(&cx, &weak));
}

#[test]
fn every_counterexample_replays() {
    let cases = [
        (BuiltinMethod::Irv, BallotSpace::strict(3), Criterion::Fbc, 7),
        (BuiltinMethod::Irv, BallotSpace::strict(3), Criterion::Lfp, 7),
        (BuiltinMethod::Plurality, BallotSpace::strict(3), Criterion::Lfp, 7),
        (BuiltinMethod::Mdda, BallotSpace::weak(3), Criterion::Sfbc, 4),
        (BuiltinMethod::Approval, BallotSpace::weak(3), Criterion::Sfbc, 4),
    ];
    for (b, space, criterion, n) in cases {
        let m = built(&b, space, None);
        let v = run(&m, SearchScope::new(space, criterion, n));
        assert_replays(&v, &m);
    }
}

#[test]
fn both_favorite_readings_agree_without_ties() {
    for b in [BuiltinMethod::Antiplurality, BuiltinMethod::Irv, BuiltinMethod::Plurality] {
        let m = built(&b, BallotSpace::strict(3), None);
        let fbc = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Fbc, 6));
        let sfbc = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Sfbc, 6));
        assert_eq!(fbc.counterexamples.len(), sfbc.counterexamples.len(), "{b}");
        assert_eq!(fbc.instances_skipped, sfbc.instances_skipped, "{b}");
    }
}

#[test]
fn relabeling_candidates_permutes_the_findings() {
    let m = built(&BuiltinMethod::Irv, BallotSpace::strict(3), None);
    let v = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Fbc, 8));
    let found: HashSet<(Vec<u64>, usize)> = v
        .counterexamples
        .iter()
        .map(|cx| (cx.profile.whole_counts().unwrap().to_vec(), cx.sincere))
        .collect();
    assert!(!found.is_empty());
    for s in SwapOperator::all(m.catalog()) {
        let perm = s.permutation();
        let image: HashSet<(Vec<u64>, usize)> = found
            .iter()
            .map(|(counts, k)| {
                let p = Profile::from_counts(m.catalog().clone(), counts.clone()).unwrap();
                (p.permuted(perm).whole_counts().unwrap().to_vec(), perm[*k])
            })
            .collect();
        assert_eq!(image, found, "{:?}", s.pair());
    }
}

#[test]
fn worker_count_does_not_change_the_verdict() {
    let m = built(&BuiltinMethod::Irv, BallotSpace::strict(3), None);
    let one = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Fbc, 8).workers(1));
    let four = run(&m, SearchScope::new(BallotSpace::strict(3), Criterion::Fbc, 8).workers(4));
    assert_eq!(one.counterexamples, four.counterexamples);
    assert_eq!(one.instances_examined, four.instances_examined);
    assert_eq!(one.instances_skipped, four.instances_skipped);
    assert_eq!(one.profiles_examined, four.profiles_examined);
}
