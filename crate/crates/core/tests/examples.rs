//! Worked examples for ballots, geometry, stages and methods.

use std::sync::Arc;

use sfbc_core::ballots::{BallotCatalog, BallotSpace, Profile, Ranking};
use sfbc_core::geometry::{
    check_boundary_conditions, classify_vector, inner, orbit, FirstPlace, NormalVector, SwapOperator, VectorCategory,
};
use sfbc_core::methods::{
    argmax, not_dominated, pairwise_tiebreak, tally_irv, tally_points, BuiltinMethod, PairwiseResult, ScoringWeights,
};
use sfbc_core::rational::{int, ratio, Rational};
use sfbc_core::stages::{Condition, ElectionMethod, Method, Outcome, Stage, StageType};
use sfbc_core::Error;

fn strict3() -> Arc<BallotCatalog> {
    BallotCatalog::new(BallotSpace::strict(3)).unwrap()
}

fn vector(cat: &Arc<BallotCatalog>, xs: &[i64]) -> NormalVector {
    NormalVector::new(cat.clone(), xs.iter().map(|&x| int(x)).collect()).unwrap()
}

fn n12(cat: &Arc<BallotCatalog>) -> NormalVector {
    vector(cat, &[0, 1, 1, -1, -1, 0])
}

fn profile(cat: &Arc<BallotCatalog>, ballots: &[(u64, &str)]) -> Profile {
    Profile::from_ballots(cat.clone(), ballots).unwrap()
}

// ---- ballots --------------------------------------------------------------

#[test]
fn strict_three_follows_the_basis_table() {
    let cat = strict3();
    let order: Vec<String> = cat.rankings().iter().map(|r| cat.format_ranking(r)).collect();
    assert_eq!(order, ["A>B>C", "A>C>B", "C>A>B", "C>B>A", "B>C>A", "B>A>C"]);
}

#[test]
fn ballot_counts() {
    assert_eq!(BallotCatalog::new(BallotSpace::strict(2)).unwrap().len(), 2);
    let ties_only = BallotSpace {
        allow_ties: true,
        ..BallotSpace::strict(3)
    };
    let cat = BallotCatalog::new(ties_only).unwrap();
    // ordered set partitions of three items: 6 strict, 6 with one pair, 1 all tied
    assert_eq!(cat.len(), 6 + 6 + 1);
    assert_eq!(BallotCatalog::new(BallotSpace::weak(3)).unwrap().len(), 13);
}

#[test]
fn normalizing() {
    let cat = strict3();
    let p = Profile::from_counts(cat.clone(), vec![2, 1, 0, 0, 0, 0]).unwrap();
    let n = p.normalize().unwrap();
    assert_eq!(n.counts()[..2], [ratio(2, 3), ratio(1, 3)]);
    assert_eq!(n.normalize().unwrap(), n);
    let centre = Profile::from_counts(cat.clone(), vec![1; 6]).unwrap().normalize().unwrap();
    assert!(centre.counts().iter().all(|c| *c == ratio(1, 6)));
    let empty = Profile::from_counts(cat, vec![0; 6]).unwrap();
    assert_eq!(empty.normalize().unwrap_err(), Error::EmptyElectorate);
}

#[test]
fn ranking_text() {
    let cat = strict3();
    assert_eq!(cat.parse_ranking("A>B>C").unwrap().tiers(), vec![vec![0], vec![1], vec![2]]);
    let weak = BallotCatalog::new(BallotSpace::weak(3)).unwrap();
    assert_eq!(weak.parse_ranking("A=B>C").unwrap().tiers(), vec![vec![0, 1], vec![2]]);
    assert_eq!(weak.parse_ranking(" A ").unwrap().tiers(), vec![vec![0], vec![1, 2]]);
    assert!(matches!(cat.parse_ranking("A>D>C"), Err(Error::UnknownCandidate(_))));
    assert!(matches!(cat.parse_ranking("A>A>C"), Err(Error::DuplicateCandidate(_))));
    assert!(matches!(cat.parse_ranking("A>>C"), Err(Error::EmptyTier(_))));
}

// ---- geometry -------------------------------------------------------------

#[test]
fn inner_products() {
    let cat = strict3();
    let centre = Profile::from_counts(cat.clone(), vec![1; 6]).unwrap();
    assert_eq!(inner(&centre, &vector(&cat, &[1, -1, 2, -2, 3, -3])).unwrap(), int(0));
    let p = profile(&cat, &[(2, "A>B>C"), (1, "B>C>A")]);
    assert_eq!(inner(&p, &vector(&cat, &[1; 6])).unwrap(), int(1));
    assert_eq!(inner(&p, &n12(&cat)).unwrap(), ratio(-1, 3));
}

#[test]
fn swapping_a_basis_profile() {
    let cat = strict3();
    let s12 = SwapOperator::new(&cat, 0, 1).unwrap();
    let p = profile(&cat, &[(1, "A>B>C")]);
    assert_eq!(s12.apply(&p).unwrap(), profile(&cat, &[(1, "B>A>C")]));
    assert_eq!(SwapOperator::new(&cat, 1, 1).unwrap_err(), Error::DegenerateSwap(1));
}

#[test]
fn orbit_sizes() {
    let cat = strict3();
    assert_eq!(orbit(&vector(&cat, &[1; 6])).len(), 1);
    assert_eq!(orbit(&n12(&cat)).len(), 6);
    assert_eq!(orbit(&vector(&cat, &[1, 1, 1, -2, -2, 1])).len(), 3);
}

#[test]
fn boundary_conditions_by_hand() {
    let cat = strict3();
    let sole = FirstPlace::Sole;
    assert!(check_boundary_conditions(&n12(&cat), (0, 1), sole));
    assert!(!check_boundary_conditions(&n12(&cat), (0, 2), sole));
    let v1 = vector(&cat, &[1, 1, 1, -2, -2, 1]);
    assert!(check_boundary_conditions(&v1, (0, 1), sole));
    assert!(check_boundary_conditions(&v1, (0, 2), sole));
}

#[test]
fn vector_categories() {
    let cat = strict3();
    let sole = FirstPlace::Sole;
    assert_eq!(classify_vector(&n12(&cat), sole), VectorCategory::Category1 { pair: (0, 1) });
    assert_eq!(classify_vector(&-&n12(&cat), sole), VectorCategory::Category1 { pair: (1, 0) });
    assert_eq!(classify_vector(&vector(&cat, &[1, -1, 1, -1, 1, -1]), sole), VectorCategory::Category3);
    let weak = BallotCatalog::new(BallotSpace::weak(3)).unwrap();
    let d12 = not_dominated(&weak, 0, 1).unwrap();
    assert_eq!(classify_vector(&d12, FirstPlace::Shared).number(), Some(2));
}

// ---- stages ---------------------------------------------------------------

fn antiplurality_stage(cat: &Arc<BallotCatalog>) -> Stage {
    // A wins if it is last on fewer ballots than B and than C
    let n13 = vector(cat, &[1, 0, 0, -1, -1, 1]);
    Stage::generate(Condition::new(0, vec![n12(cat), n13]).unwrap())
}

#[test]
fn generated_stages() {
    let cat = strict3();
    let stage = antiplurality_stage(&cat);
    assert_eq!(stage.conditions().len(), 3);
    assert_eq!(stage.minimal_generators().len(), 1);
    assert_eq!(stage.classify(FirstPlace::Sole), StageType::Type1);

    // only A vs B: not symmetric in the two losers
    let lopsided = Stage::generate(Condition::new(0, vec![n12(&cat)]).unwrap());
    let n = lopsided.conditions().len();
    assert!(n > 3 && n.is_multiple_of(3));

    let single = Stage::generate(Condition::new(0, vec![vector(&cat, &[1, 1, 1, -2, -2, 1])]).unwrap());
    assert_eq!(single.minimal_generators().len(), 1);
}

#[test]
fn quota_stage_has_two_generators() {
    let b = BuiltinMethod::parse("quota-points q=3/4").unwrap();
    let built = b.build(&strict3(), None).unwrap();
    let m = built.as_method().unwrap();
    assert_eq!(m.stages().len(), 2);
    assert_eq!(m.stages()[0].classify(FirstPlace::Sole), StageType::Type1b);
    assert_eq!(m.stages()[0].minimal_generators().len(), 2);
}

#[test]
fn mdda_domination_stage_is_type_two() {
    let weak = BallotCatalog::new(BallotSpace::weak(3)).unwrap();
    let built = BuiltinMethod::Mdda.build(&weak, None).unwrap();
    let stages = built.as_method().unwrap().stages();
    assert_eq!(stages[0].classify(FirstPlace::Shared), StageType::Type2);
    assert_eq!(stages[1].classify(FirstPlace::Shared), StageType::Type1b);
}

#[test]
fn evaluating_methods() {
    let cat = strict3();
    let m = Method::new("antiplurality", vec![antiplurality_stage(&cat)], None).unwrap();
    assert_eq!(m.evaluate(&profile(&cat, &[(2, "A>B>C"), (1, "B>C>A")])).unwrap(), Outcome::Winner(1));
    let centre = Profile::from_counts(cat.clone(), vec![1; 6]).unwrap();
    for b in BuiltinMethod::all() {
        let c = BallotCatalog::new(b.default_space(3)).unwrap();
        let built = b.build(&c, None).unwrap();
        let uniform = Profile::from_counts(c.clone(), vec![1; c.len()]).unwrap();
        assert_eq!(built.evaluate(&uniform).unwrap(), Outcome::Tie(vec![0, 1, 2]), "{b}");
    }
    assert_eq!(m.evaluate(&centre).unwrap(), Outcome::Tie(vec![0, 1, 2]));

    let v1 = Stage::generate(Condition::new(0, vec![vector(&cat, &[1, 1, 1, -2, -2, 1])]).unwrap());
    let m = Method::new("v1", vec![v1], None).unwrap();
    let err = m.evaluate(&profile(&cat, &[(2, "A>B>C"), (2, "B>A>C")])).unwrap_err();
    assert_eq!(err, Error::MutualExclusivity { stage: 1, winners: vec![0, 1] });
}

#[test]
fn type_one_stage_must_come_last() {
    let cat = strict3();
    let err = Method::new("bad", vec![antiplurality_stage(&cat), antiplurality_stage(&cat)], None).unwrap_err();
    assert_eq!(err, Error::Type1NotFinal { stage: 1 });
}

// ---- methods --------------------------------------------------------------

#[test]
fn point_tallies() {
    let cat = strict3();
    let p = profile(&cat, &[(2, "A>B>C"), (1, "B>C>A")]);
    let anti = tally_points(&p, &ScoringWeights::antiplurality(3)).unwrap();
    assert_eq!(anti, vec![int(2), int(3), int(1)]);
    assert_eq!(argmax(&anti), Outcome::Winner(1));
    let flat = tally_points(&p, &ScoringWeights::from_integers(&[1, 1, 1]).unwrap()).unwrap();
    assert_eq!(argmax(&flat), Outcome::Tie(vec![0, 1, 2]));
    let plur = tally_points(&p, &ScoringWeights::plurality(3)).unwrap();
    assert_eq!(argmax(&plur), Outcome::Winner(0));
    let short = ScoringWeights::from_integers(&[1, 0]).unwrap();
    assert_eq!(
        tally_points(&p, &short).unwrap_err(),
        Error::WeightsTooShort { needed: 3, available: 2 }
    );
}

#[test]
fn build_rejects_bad_parameters() {
    assert!(BuiltinMethod::parse("quota-points q=1/2").is_err());
    assert!(BuiltinMethod::parse("quota-points q=3/2").is_err());
    assert!(BuiltinMethod::parse("range levels=1").is_err());
    assert!(BuiltinMethod::parse("equal-top-two weights=2,1,0").is_err());
}

#[test]
fn builtin_shapes() {
    let cat = strict3();
    let anti = BuiltinMethod::Antiplurality.build(&cat, None).unwrap();
    let stages = anti.as_method().unwrap().stages();
    assert_eq!(stages.len(), 1);
    assert_eq!(stages[0].minimal_generators().len(), 1);
    assert_eq!(stages[0].classify(FirstPlace::Sole), StageType::Type1);
    assert!(BuiltinMethod::Irv.build(&cat, None).unwrap().as_method().is_none());
}

#[test]
fn mdda_table_rows() {
    let weak = BallotCatalog::new(BallotSpace::weak(3)).unwrap();
    let d12 = not_dominated(&weak, 0, 1).unwrap();
    let value = |text: &str| d12.component(weak.index_of(&weak.parse_ranking(text).unwrap()).unwrap()).clone();
    for row in ["A>B>C", "A>C>B", "C>A>B", "A>B=C", "A=C>B", "A=B>C", "C>A=B"] {
        assert_eq!(value(row), int(1), "{row}");
    }
    for row in ["B>A>C", "B>C>A", "C>B>A", "B>A=C", "B=C>A"] {
        assert_eq!(value(row), int(-1), "{row}");
    }
    assert_eq!(value("A=B=C"), Rational::from_integer(0.into()));
}

#[test]
fn pairwise_tiebreaks() {
    let cat = strict3();
    let p = profile(&cat, &[(2, "A>B>C"), (1, "B>A>C")]);
    assert_eq!(pairwise_tiebreak(&p, &[0, 1]), PairwiseResult::Resolved(0));
    let q = profile(&cat, &[(1, "A>B>C"), (1, "B>A>C")]);
    assert_eq!(pairwise_tiebreak(&q, &[0, 1]), PairwiseResult::Balanced);
    assert_eq!(pairwise_tiebreak(&p, &[0, 1, 2]), PairwiseResult::NotAPair(3));
}

#[test]
fn instant_runoff() {
    let cat = strict3();
    let p = profile(&cat, &[(4, "A>B>C"), (3, "C>B>A"), (2, "B>C>A")]);
    assert_eq!(tally_irv(&p), Outcome::Winner(2));
    let two = BallotCatalog::new(BallotSpace::strict(2)).unwrap();
    assert_eq!(tally_irv(&profile(&two, &[(2, "A>B"), (1, "B>A")])), Outcome::Winner(0));
    let cycle = profile(&cat, &[(1, "A>B>C"), (1, "B>C>A"), (1, "C>A>B")]);
    assert_eq!(tally_irv(&cycle), Outcome::Tie(vec![0, 1, 2]));
}

#[test]
fn mca_falls_through_without_a_majority() {
    let mca = BuiltinMethod::Mca;
    let cat = BallotCatalog::new(mca.default_space(3)).unwrap();
    let built = mca.build(&cat, None).unwrap();
    let first = &built.as_method().unwrap().stages()[0];
    for p in sfbc_core::oracle::enumerate_up_to(&cat, 3) {
        let half = p.total() / int(2);
        let preferred: Vec<Rational> = (0..3)
            .map(|c| {
                (0..cat.len())
                    .filter(|&k| cat.ranking(k).level(c) == 0)
                    .map(|k| p.count(k))
                    .sum()
            })
            .collect();
        let best = preferred.iter().max().unwrap();
        let leaders: Vec<usize> = (0..3).filter(|&c| &preferred[c] == best).collect();
        let result = first.decide(&p).unwrap();
        use sfbc_core::stages::StageResult;
        match result {
            StageResult::Winner(w) => {
                assert!(preferred[w] > half && leaders == vec![w], "{}", p.to_text())
            }
            StageResult::NoWinner => assert!(*best < half, "{}", p.to_text()),
            StageResult::Tie(_) => {}
            StageResult::Conflict(_) => panic!("conflict at {}", p.to_text()),
        }
    }
}

#[test]
fn candidate_labels_reach_rankings() {
    let cat = BallotCatalog::with_labels(BallotSpace::strict(3), vec!["x".into(), "y".into(), "z".into()]).unwrap();
    let r = cat.parse_ranking("z>x>y").unwrap();
    assert_eq!(r, Ranking::strict(&[2, 0, 1]));
    assert_eq!(cat.format_ranking(&r), "z>x>y");
}
