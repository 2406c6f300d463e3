//! The `sfbc` command line.
//!
//! Exit status: 0 on success (for `check`, no counterexample), 1 when
//! `check` finds a counterexample, 2 on any error.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::builder::BoolishValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ballots::{BallotCatalog, BallotSpace, Profile};
use crate::error::{Error, Result};
use crate::geometry::{classify_vector, orbit, passing_pairs, FirstPlace, NormalVector, Role, VectorCategory};
use crate::methods::{resolve_ties, Built, Tiebreak};
use crate::oracle::{check_criterion, enumerate_profiles, profile_count, replay, Counterexample, Criterion, SearchScope};
use crate::stages::{parse_method, ElectionMethod, MethodSpec, Outcome, StageResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sfbc", version, about = "Election methods as linear inequalities, with exhaustive favorite-betrayal checks")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Elect a winner from a profile file, with a stage-by-stage trace.
    Tally {
        #[command(flatten)]
        method: MethodArgs,
        /// Profile file (`COUNT: RANKING` per line).
        #[arg(long)]
        profile: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Categorize a vector, or every stage of a method.
    Classify {
        #[arg(long, required_unless_present = "vector", conflicts_with = "vector")]
        method: Option<String>,
        /// Vector literal file (`RANKING : VALUE` per line).
        #[arg(long)]
        vector: Option<PathBuf>,
        /// Whether a shared first place counts as first.
        #[arg(long, value_enum)]
        reading: Option<Reading>,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Search every small electorate for a criterion violation.
    Check {
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_voters: u32,
        /// Threads for the sweep; defaults to the available parallelism.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        workers: Option<u32>,
        /// Break ties with the method's tiebreak instead of skipping them.
        #[arg(long)]
        no_skip_ties: bool,
        /// Most counterexamples to print.
        #[arg(long, default_value_t = 5)]
        limit: usize,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// List the images of a vector under every relabeling.
    Orbit {
        #[arg(long)]
        vector: PathBuf,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Count, and optionally print, every profile of a given size.
    Enumerate {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        max_voters: u32,
        /// Print the profiles themselves, not only their number.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        space: SpaceArgs,
    },
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    /// Builtin name with parameters (e.g. `quota-points q=3/4`) or a method file.
    #[arg(long)]
    pub method: String,
    /// Override the method's tiebreak.
    #[arg(long, value_enum)]
    pub tiebreak: Option<TiebreakArg>,
}

/// Ballot space overrides; unset fields come from the method.
#[derive(Debug, Args, Default)]
pub struct SpaceArgs {
    /// Number of candidates, labelled A, B, C, ...
    #[arg(long)]
    pub candidates: Option<usize>,
    /// Allow candidates to be ranked equal.
    #[arg(long, value_parser = BoolishValueParser::new())]
    pub ties: Option<bool>,
    /// Allow unranked candidates, tied in last place.
    #[arg(long, value_parser = BoolishValueParser::new())]
    pub truncation: Option<bool>,
    /// Most tiers a ballot may use.
    #[arg(long)]
    pub ranks: Option<usize>,
    /// Graded ballots with this many grade slots.
    #[arg(long)]
    pub grades: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Reading {
    Sole,
    Shared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TiebreakArg {
    Pairwise,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Fbc,
    Sfbc,
    Lfp,
    Monotonicity,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Fbc => Criterion::Fbc,
            CriterionArg::Sfbc => Criterion::Sfbc,
            CriterionArg::Lfp => Criterion::Lfp,
            CriterionArg::Monotonicity => Criterion::Monotonicity,
        }
    }
}

impl From<Reading> for FirstPlace {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Sole => FirstPlace::Sole,
            Reading::Shared => FirstPlace::Shared,
        }
    }
}

impl SpaceArgs {
    fn apply(&self, mut space: BallotSpace) -> BallotSpace {
        if let Some(n) = self.candidates {
            space.n_candidates = n;
        }
        if let Some(levels) = self.grades {
            space = BallotSpace::graded(space.n_candidates, levels);
        }
        if let Some(t) = self.ties {
            space.allow_ties = t;
        }
        if let Some(t) = self.truncation {
            space.allow_truncation = t;
        }
        if self.ranks.is_some() {
            space.max_ranks = self.ranks;
        }
        space
    }

    /// A plain catalog for commands without a method.
    fn catalog(&self) -> Result<Arc<BallotCatalog>> {
        BallotCatalog::new(self.apply(BallotSpace::strict(3)))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_spec(source: &str) -> Result<MethodSpec> {
    let path = Path::new(source);
    if path.is_file() {
        parse_method(&read(path)?, path.parent())
    } else {
        parse_method(&format!("builtin {source}"), None)
    }
}

struct Loaded {
    catalog: Arc<BallotCatalog>,
    method: Built,
}

fn load_method(args: &MethodArgs, space: &SpaceArgs) -> Result<Loaded> {
    let spec = load_spec(&args.method)?;
    let n = space
        .candidates
        .or(spec.space.map(|s| s.n_candidates))
        .or(spec.labels.as_ref().map(Vec::len))
        .unwrap_or(3);
    let space = space.apply(spec.space_or(n));
    let catalog = match &spec.labels {
        Some(labels) => BallotCatalog::with_labels(space, labels.clone())?,
        None => BallotCatalog::new(space)?,
    };
    let mut method = spec.build(&catalog, None)?;
    match args.tiebreak {
        Some(TiebreakArg::Pairwise) => method = spec.build(&catalog, Some(Tiebreak::Pairwise))?,
        Some(TiebreakArg::None) => {
            method = match method {
                Built::Staged(m) => Built::Staged(m.with_tiebreak(None)),
                Built::Direct(_) => match spec.builtin() {
                    Some(b) => b.build(&catalog, None)?,
                    None => unreachable!("file methods are staged"),
                },
            }
        }
        None => {}
    }
    Ok(Loaded { catalog, method })
}

// ---- reports ------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct SpaceReport {
    candidates: Vec<String>,
    ties: bool,
    truncation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranks: Option<usize>,
    graded: bool,
    ballot_types: usize,
}

impl SpaceReport {
    fn new(catalog: &BallotCatalog) -> Self {
        let s = catalog.space();
        SpaceReport {
            candidates: catalog.labels().to_vec(),
            ties: s.allow_ties,
            truncation: s.allow_truncation,
            ranks: s.max_ranks,
            graded: s.graded,
            ballot_types: catalog.len(),
        }
    }

    fn describe(&self) -> String {
        let kind = if self.graded {
            format!("graded, {} slots", self.ranks.unwrap_or(0))
        } else {
            let mut parts = vec![if self.ties { "ties" } else { "no ties" }];
            parts.push(if self.truncation { "truncation" } else { "no truncation" });
            parts.join(", ")
        };
        format!(
            "{} candidates ({}), {kind}, {} ballot types",
            self.candidates.len(),
            self.candidates.join(" "),
            self.ballot_types
        )
    }
}

#[derive(Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OutcomeReport {
    Winner { candidate: String },
    Tie { candidates: Vec<String> },
}

impl OutcomeReport {
    fn new(catalog: &BallotCatalog, outcome: &Outcome) -> Self {
        match outcome {
            Outcome::Winner(w) => OutcomeReport::Winner {
                candidate: catalog.label(*w).to_string(),
            },
            Outcome::Tie(t) => OutcomeReport::Tie {
                candidates: t.iter().map(|&c| catalog.label(c).to_string()).collect(),
            },
        }
    }

    fn describe(&self) -> String {
        match self {
            OutcomeReport::Winner { candidate } => format!("winner {candidate}"),
            OutcomeReport::Tie { candidates } => format!("tie {{{}}}", candidates.join(", ")),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConditionTrace {
    winner: String,
    /// One of `+`, `0`, `-` per inequality.
    signs: String,
}

#[derive(Debug, Serialize)]
pub struct StageTraceReport {
    stage: usize,
    result: String,
    conditions: Vec<ConditionTrace>,
}

#[derive(Debug, Serialize)]
pub struct TallyReport {
    method: String,
    space: SpaceReport,
    outcome: OutcomeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    tiebroken: Option<OutcomeReport>,
    stages: Vec<StageTraceReport>,
}

fn sign_char(o: &Ordering) -> char {
    match o {
        Ordering::Greater => '+',
        Ordering::Equal => '0',
        Ordering::Less => '-',
    }
}

fn labels(catalog: &BallotCatalog, set: &[usize]) -> String {
    set.iter().map(|&c| catalog.label(c)).collect::<Vec<_>>().join(", ")
}

fn stage_result(catalog: &BallotCatalog, r: &StageResult) -> String {
    match r {
        StageResult::Winner(w) => format!("winner {}", catalog.label(*w)),
        StageResult::Tie(t) => format!("tie {{{}}}", labels(catalog, t)),
        StageResult::NoWinner => "no winner".into(),
        StageResult::Conflict(t) => format!("conflict {{{}}}", labels(catalog, t)),
    }
}

fn tally(method: &Built, catalog: &Arc<BallotCatalog>, profile: &Profile) -> Result<TallyReport> {
    let mut stages = Vec::new();
    if let Some(m) = method.as_method() {
        for t in m.trace(profile)? {
            stages.push(StageTraceReport {
                stage: t.stage,
                result: stage_result(catalog, &t.result),
                conditions: t
                    .conditions
                    .iter()
                    .map(|(w, signs)| ConditionTrace {
                        winner: catalog.label(*w).to_string(),
                        signs: signs.iter().map(sign_char).collect(),
                    })
                    .collect(),
            });
        }
    }
    let raw = method.evaluate(profile)?;
    let tiebroken = match (&raw, method.tiebreak()) {
        (Outcome::Tie(_), Some(t)) => Some(OutcomeReport::new(catalog, &resolve_ties(Some(t), profile, raw.clone()))),
        _ => None,
    };
    Ok(TallyReport {
        method: method.name().to_string(),
        space: SpaceReport::new(catalog),
        outcome: OutcomeReport::new(catalog, &raw),
        tiebroken,
        stages,
    })
}

impl TallyReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(out, "ballots: {}", self.space.describe());
        for s in &self.stages {
            let _ = writeln!(out, "stage {}: {}", s.stage, s.result);
            for c in &s.conditions {
                let _ = writeln!(out, "  {} [{}]", c.winner, c.signs);
            }
        }
        let _ = writeln!(out, "outcome: {}", self.outcome.describe());
        if let Some(t) = &self.tiebroken {
            let _ = writeln!(out, "after tiebreak: {}", t.describe());
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct VectorReport {
    vector: String,
    category: String,
    passing_pairs: Vec<(String, String)>,
    orbit_size: usize,
}

fn category_text(catalog: &BallotCatalog, c: &VectorCategory) -> String {
    match c {
        VectorCategory::Category1 { pair: (i, j) } => {
            format!("Category1 ({} vs {})", catalog.label(*i), catalog.label(*j))
        }
        VectorCategory::Category2 { candidate, role } => {
            let role = match role {
                Role::Source => "source",
                Role::Sink => "sink",
            };
            format!("Category2 ({role} {})", catalog.label(*candidate))
        }
        VectorCategory::Category3 => "Category3".into(),
        VectorCategory::NonCompliant => "NonCompliant".into(),
    }
}

fn vector_report(v: &NormalVector, reading: FirstPlace) -> VectorReport {
    let catalog = v.catalog();
    VectorReport {
        vector: v.to_tuple(),
        category: category_text(catalog, &classify_vector(v, reading)),
        passing_pairs: passing_pairs(v, reading)
            .into_iter()
            .map(|(i, j)| (catalog.label(i).to_string(), catalog.label(j).to_string()))
            .collect(),
        orbit_size: orbit(v).len(),
    }
}

#[derive(Debug, Serialize)]
pub struct StageReport {
    stage: usize,
    #[serde(rename = "type")]
    stage_type: String,
    conditions: usize,
    vectors: usize,
    generators: Vec<VectorReport>,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    space: SpaceReport,
    reading: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    stages: Vec<StageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<VectorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl ClassifyReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if let Some(m) = &self.method {
            let _ = writeln!(out, "method: {m}");
        }
        let _ = writeln!(out, "ballots: {}", self.space.describe());
        let _ = writeln!(out, "first place: {}", self.reading);
        let vector_lines = |out: &mut String, v: &VectorReport, indent: &str| {
            let _ = writeln!(out, "{indent}{} -> {} (orbit {})", v.vector, v.category, v.orbit_size);
        };
        for s in &self.stages {
            let _ = writeln!(
                out,
                "stage {}: {}, {} generator{}, {} conditions, {} vectors",
                s.stage,
                s.stage_type,
                s.generators.len(),
                if s.generators.len() == 1 { "" } else { "s" },
                s.conditions,
                s.vectors
            );
            for g in &s.generators {
                vector_lines(&mut out, g, "  ");
            }
        }
        if let Some(v) = &self.vector {
            vector_lines(&mut out, v, "");
            let pairs: Vec<String> = v.passing_pairs.iter().map(|(i, j)| format!("{i}-{j}")).collect();
            let _ = writeln!(out, "passing pairs: {}", if pairs.is_empty() { "none".into() } else { pairs.join(" ") });
        }
        if let Some(n) = &self.note {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn reading_name(r: FirstPlace) -> String {
    match r {
        FirstPlace::Sole => "sole".into(),
        FirstPlace::Shared => "shared".into(),
    }
}

#[derive(Debug, Serialize)]
pub struct CounterexampleReport {
    voter: String,
    switches_to: String,
    sincere_outcome: OutcomeReport,
    manipulated_outcome: OutcomeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_protected: Option<(String, OutcomeReport)>,
    replayed: bool,
    /// Base profile in the profile file grammar.
    profile: String,
    manipulated_profile: String,
}

impl CounterexampleReport {
    fn new(cx: &Counterexample, method: &dyn ElectionMethod) -> Self {
        let cat = cx.catalog();
        CounterexampleReport {
            voter: cat.format_ranking(cx.sincere_ranking()),
            switches_to: cat.format_ranking(cat.ranking(cx.manipulation)),
            sincere_outcome: OutcomeReport::new(cat, &cx.sincere_outcome),
            manipulated_outcome: OutcomeReport::new(cat, &cx.manipulated_outcome),
            best_protected: cx
                .best_protected
                .as_ref()
                .map(|(b, o)| (cat.format_ranking(cat.ranking(*b)), OutcomeReport::new(cat, o))),
            replayed: replay(cx, method),
            profile: cx.profile.to_text(),
            manipulated_profile: cx.manipulated_profile().to_text(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    method: String,
    criterion: Criterion,
    space: SpaceReport,
    max_voters: usize,
    skip_on_tie: bool,
    profiles_examined: u64,
    instances_examined: u64,
    instances_skipped: u64,
    counterexamples_found: usize,
    counterexamples: Vec<CounterexampleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl CheckReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(out, "criterion: {}", self.criterion);
        let _ = writeln!(out, "ballots: {}", self.space.describe());
        let _ = writeln!(
            out,
            "scope: 1..={} voters, ties {}",
            self.max_voters,
            if self.skip_on_tie { "skipped" } else { "broken by the tiebreak" }
        );
        let _ = writeln!(out, "profiles examined: {}", self.profiles_examined);
        let _ = writeln!(out, "voter instances examined: {}", self.instances_examined);
        let _ = writeln!(out, "voter instances skipped: {}", self.instances_skipped);
        if let Some(n) = &self.note {
            let _ = writeln!(out, "note: {n}");
        }
        if self.counterexamples_found == 0 {
            let _ = writeln!(out, "verdict: no counterexample");
            return out;
        }
        let _ = writeln!(
            out,
            "verdict: {} counterexample{} (showing {})",
            self.counterexamples_found,
            if self.counterexamples_found == 1 { "" } else { "s" },
            self.counterexamples.len()
        );
        for (i, cx) in self.counterexamples.iter().enumerate() {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "# counterexample {}: a voter with {} switches to {}",
                i + 1,
                cx.voter,
                cx.switches_to
            );
            let _ = writeln!(
                out,
                "# sincere: {}, manipulated: {}",
                cx.sincere_outcome.describe(),
                cx.manipulated_outcome.describe()
            );
            if let Some((b, o)) = &cx.best_protected {
                let _ = writeln!(out, "# best protected ballot {b}: {}", o.describe());
            }
            let _ = writeln!(out, "# replayed: {}", if cx.replayed { "yes" } else { "NO" });
            out.push_str(&cx.profile);
            let _ = writeln!(out, "# after the switch");
            for line in cx.manipulated_profile.lines() {
                let _ = writeln!(out, "#   {line}");
            }
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitReport {
    vector: String,
    size: usize,
    orbit: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct EnumerateReport {
    space: SpaceReport,
    /// `(voters, profiles)` per electorate size.
    counts: Vec<(usize, String)>,
    total: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    profiles: Option<Vec<String>>,
}

// ---- commands -----------------------------------------------------------

/// What a command produced: the rendered report and its exit status.
pub struct Rendered {
    pub output: String,
    pub status: i32,
}

fn render<T: Serialize>(format: Format, report: &T, text: impl FnOnce(&T) -> String) -> Result<String> {
    Ok(match format {
        Format::Text => text(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s
        }
    })
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Rendered> {
    let format = cli.format;
    let ok = |output| Ok(Rendered { output, status: EXIT_OK });
    match &cli.command {
        Command::Tally { method, profile, space } => {
            let loaded = load_method(method, space)?;
            let profile = Profile::parse(loaded.catalog.clone(), &read(profile)?)?;
            let report = tally(&loaded.method, &loaded.catalog, &profile)?;
            ok(render(format, &report, TallyReport::text)?)
        }
        Command::Classify {
            method,
            vector,
            reading,
            space,
        } => {
            let report = match (method, vector) {
                (Some(source), _) => {
                    let loaded = load_method(
                        &MethodArgs {
                            method: source.clone(),
                            tiebreak: None,
                        },
                        space,
                    )?;
                    let reading = reading
                        .map(FirstPlace::from)
                        .unwrap_or_else(|| FirstPlace::default_for(loaded.catalog.space()));
                    let stages = match loaded.method.as_method() {
                        Some(m) => m
                            .stages()
                            .iter()
                            .enumerate()
                            .map(|(i, s)| StageReport {
                                stage: i + 1,
                                stage_type: s.classify(reading).to_string(),
                                conditions: s.conditions().len(),
                                vectors: s.vectors().len(),
                                generators: s
                                    .minimal_generators()
                                    .iter()
                                    .map(|g| vector_report(g, reading))
                                    .collect(),
                            })
                            .collect(),
                        None => Vec::new(),
                    };
                    let note = stages
                        .is_empty()
                        .then(|| "tallied directly; it has no stage form".to_string());
                    ClassifyReport {
                        method: Some(loaded.method.name().to_string()),
                        space: SpaceReport::new(&loaded.catalog),
                        reading: reading_name(reading),
                        stages,
                        vector: None,
                        note,
                    }
                }
                (None, Some(path)) => {
                    let catalog = space.catalog()?;
                    let v = NormalVector::parse(catalog.clone(), &read(path)?)?;
                    let reading = reading
                        .map(FirstPlace::from)
                        .unwrap_or_else(|| FirstPlace::default_for(catalog.space()));
                    ClassifyReport {
                        method: None,
                        space: SpaceReport::new(&catalog),
                        reading: reading_name(reading),
                        stages: Vec::new(),
                        vector: Some(vector_report(&v, reading)),
                        note: None,
                    }
                }
                (None, None) => return Err(Error::InvalidParameter("give --method or --vector".into())),
            };
            ok(render(format, &report, ClassifyReport::text)?)
        }
        Command::Check {
            method,
            criterion,
            max_voters,
            workers,
            no_skip_ties,
            limit,
            space,
        } => {
            let loaded = load_method(method, space)?;
            let criterion = Criterion::from(*criterion);
            let mut scope = SearchScope::new(*loaded.catalog.space(), criterion, *max_voters as usize)
                .skip_on_tie(!no_skip_ties);
            if let Some(w) = workers {
                scope = scope.workers(*w as usize);
            }
            let verdict = check_criterion(&loaded.method, &scope)?;
            let note = (criterion == Criterion::Fbc && loaded.catalog.space().allow_ties).then(|| {
                "ballots tying the favorite for first place count as protected".to_string()
            });
            let report = CheckReport {
                method: loaded.method.name().to_string(),
                criterion,
                space: SpaceReport::new(&loaded.catalog),
                max_voters: scope.max_voters,
                skip_on_tie: scope.skip_on_tie,
                profiles_examined: verdict.profiles_examined,
                instances_examined: verdict.instances_examined,
                instances_skipped: verdict.instances_skipped,
                counterexamples_found: verdict.counterexamples.len(),
                counterexamples: verdict
                    .counterexamples
                    .iter()
                    .take(*limit)
                    .map(|cx| CounterexampleReport::new(cx, &loaded.method))
                    .collect(),
                note,
            };
            let status = if verdict.passed() { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
            Ok(Rendered {
                output: render(format, &report, CheckReport::text)?,
                status,
            })
        }
        Command::Orbit { vector, space } => {
            let catalog = space.catalog()?;
            let v = NormalVector::parse(catalog, &read(vector)?)?;
            let images = orbit(&v);
            let report = OrbitReport {
                vector: v.to_tuple(),
                size: images.len(),
                orbit: images.iter().map(NormalVector::to_tuple).collect(),
            };
            ok(render(format, &report, |r| {
                let mut out = format!("orbit of {} ({} vectors)\n", r.vector, r.size);
                for line in &r.orbit {
                    let _ = writeln!(out, "  {line}");
                }
                out
            })?)
        }
        Command::Enumerate { max_voters, list, space } => {
            let catalog = space.catalog()?;
            let max = *max_voters as usize;
            let counts: Vec<(usize, u128)> = (1..=max).map(|n| (n, profile_count(catalog.len(), n))).collect();
            let total: u128 = counts.iter().map(|(_, c)| c).sum();
            let profiles = list.then(|| {
                (1..=max)
                    .flat_map(|n| enumerate_profiles(&catalog, n).map(|p| p.to_text()).collect::<Vec<_>>())
                    .collect()
            });
            let report = EnumerateReport {
                space: SpaceReport::new(&catalog),
                counts: counts.into_iter().map(|(n, c)| (n, c.to_string())).collect(),
                total: total.to_string(),
                profiles,
            };
            ok(render(format, &report, |r| {
                let mut out = format!("ballots: {}\n", r.space.describe());
                for (n, c) in &r.counts {
                    let _ = writeln!(out, "{n} voters: {c} profiles");
                }
                let _ = writeln!(out, "total: {}", r.total);
                for p in r.profiles.iter().flatten() {
                    let _ = writeln!(out);
                    out.push_str(p);
                }
                out
            })?)
        }
    }
}

/// Parses `args`, runs the command and writes its report; returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return status;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let _ = out.write_all(r.output.as_bytes());
            r.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let status = run(std::iter::once("sfbc").chain(args.iter().copied()), &mut out, &mut err);
        (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_builtin_antiplurality() {
        let (status, out, _) = run_args(&["classify", "--method", "antiplurality"]);
        assert_eq!(status, EXIT_OK);
        assert!(out.contains("stage 1: Type1, 1 generator"), "{out}");
    }

    #[test]
    fn json_is_stable() {
        let a = run_args(&["--format", "json", "classify", "--method", "mdda"]);
        let b = run_args(&["--format", "json", "classify", "--method", "mdda"]);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
        assert_eq!(v["stages"][0]["type"], "Type2");
        assert_eq!(v["stages"][1]["type"], "Type1b");
    }

    #[test]
    fn bad_arguments_exit_two() {
        let (status, _, err) = run_args(&["check", "--method", "antiplurality"]);
        assert_eq!(status, EXIT_ERROR);
        assert!(err.contains("--criterion"));
        let (status, _, err) = run_args(&["classify", "--method", "no-such-method"]);
        assert_eq!(status, EXIT_ERROR);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn enumerate_counts() {
        let (status, out, _) = run_args(&["enumerate", "--max-voters", "2"]);
        assert_eq!(status, EXIT_OK);
        assert!(out.contains("2 voters: 21 profiles"));
        assert!(out.contains("total: 27"));
    }
}
