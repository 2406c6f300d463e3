//! The method definition file.
//!
//! ```text
//! # comments run to the end of the line
//! name "my method"
//! ballots { candidates=3 ties=no truncation=no }
//! tiebreak pairwise
//! stage {
//!   condition winner=A {
//!     vector "n12.txt"                      # vector literal file
//!     vector [A>C>B: 1, C>A>B: 1, C>B>A: -1, B>C>A: -1]
//!     vector (0, 1, 1, -1, -1, 0)           # every component, ballot order
//!   }
//! }
//! ```
//!
//! Instead of `stage` blocks a file may hold a single `builtin` line such
//! as `builtin quota-points q=3/4`. `ballots` settings: `candidates`,
//! `ties`, `truncation` (`yes`/`no`), `ranks`, `grades` (graded ballots
//! with that many grade slots) and `labels=A,B,C`. Each stage block lists
//! seed conditions; the stage is their closure under candidate swaps.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::ballots::{BallotCatalog, BallotSpace};
use crate::error::{Error, Result};
use crate::geometry::NormalVector;
use crate::methods::{Built, BuiltinMethod, Tiebreak};
use crate::rational::{parse_rational, Rational};

use super::method::Method;
use super::stage::{Condition, Stage};

#[derive(Clone, Debug, PartialEq)]
enum VectorSource {
    File(PathBuf),
    Literal(String),
    Tuple(String),
}

#[derive(Clone, Debug, PartialEq)]
struct ConditionSpec {
    line: usize,
    winner: String,
    vectors: Vec<(usize, VectorSource)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Body {
    Builtin(BuiltinMethod),
    Stages(Vec<Vec<ConditionSpec>>),
}

/// A parsed method file, not yet bound to a ballot catalog.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodSpec {
    pub name: Option<String>,
    pub space: Option<BallotSpace>,
    pub labels: Option<Vec<String>>,
    pub tiebreak: Option<Tiebreak>,
    body: Body,
}

/// Parses a method file; relative vector paths resolve against `base_dir`.
pub fn parse_method(text: &str, base_dir: Option<&Path>) -> Result<MethodSpec> {
    Parser::new(text, base_dir).file()
}

impl MethodSpec {
    pub fn builtin(&self) -> Option<&BuiltinMethod> {
        match &self.body {
            Body::Builtin(b) => Some(b),
            Body::Stages(_) => None,
        }
    }

    /// The declared space, else the builtin's default for `n_candidates`.
    pub fn space_or(&self, n_candidates: usize) -> BallotSpace {
        match (&self.space, &self.body) {
            (Some(s), _) => *s,
            (None, Body::Builtin(b)) => b.default_space(n_candidates),
            (None, Body::Stages(_)) => BallotSpace::strict(n_candidates),
        }
    }

    /// A catalog for the declared space and labels.
    pub fn catalog(&self, n_candidates: usize) -> Result<Arc<BallotCatalog>> {
        let space = self.space_or(n_candidates);
        match &self.labels {
            Some(labels) => BallotCatalog::with_labels(space, labels.clone()),
            None => BallotCatalog::new(space),
        }
    }

    /// Binds the method to `catalog`; `tiebreak` overrides the file's.
    pub fn build(&self, catalog: &Arc<BallotCatalog>, tiebreak: Option<Tiebreak>) -> Result<Built> {
        let tiebreak = tiebreak.or(self.tiebreak);
        let stages = match &self.body {
            Body::Builtin(b) => return b.build(catalog, tiebreak),
            Body::Stages(stages) => stages,
        };
        let stages = stages
            .iter()
            .map(|conds| {
                let seeds = conds
                    .iter()
                    .map(|c| build_condition(catalog, c))
                    .collect::<Result<Vec<_>>>()?;
                Stage::from_seeds(seeds)
            })
            .collect::<Result<Vec<_>>>()?;
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        Ok(Built::Staged(Method::new(name, stages, tiebreak)?))
    }
}

fn build_condition(catalog: &Arc<BallotCatalog>, spec: &ConditionSpec) -> Result<Condition> {
    let winner = catalog
        .candidate(&spec.winner)
        .map_err(|e| Error::parse(spec.line, e))?;
    let vectors = spec
        .vectors
        .iter()
        .map(|(line, src)| build_vector(catalog, *line, src))
        .collect::<Result<Vec<_>>>()?;
    Condition::new(winner, vectors).map_err(|e| Error::parse(spec.line, e))
}

fn build_vector(catalog: &Arc<BallotCatalog>, line: usize, src: &VectorSource) -> Result<NormalVector> {
    let at = |e: Error| match e {
        Error::Parse { line: inner, message } => {
            Error::parse(line, format!("vector line {inner}: {message}"))
        }
        other => Error::parse(line, other),
    };
    match src {
        VectorSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::parse(line, format!("{}: {e}", path.display())))?;
            NormalVector::parse(catalog.clone(), &text).map_err(at)
        }
        VectorSource::Literal(body) => {
            NormalVector::parse(catalog.clone(), &body.replace(',', "\n")).map_err(at)
        }
        VectorSource::Tuple(body) => {
            let components = body
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    parse_rational(s)
                        .ok_or_else(|| Error::parse(line, format!("bad component `{}`", s.trim())))
                })
                .collect::<Result<Vec<Rational>>>()?;
            NormalVector::new(catalog.clone(), components).map_err(at)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Word(String),
    Str(String),
    Open,
    Close,
    Equals,
    Bracket(String),
    Paren(String),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    base_dir: Option<&'a Path>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, base_dir: Option<&'a Path>) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            base_dir,
        }
    }

    fn err(&self, message: impl std::fmt::Display) -> Error {
        Error::parse(self.line, message)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.get(self.pos) {
            if c == '#' {
                while self.chars.get(self.pos).is_some_and(|&c| c != '\n') {
                    self.pos += 1;
                }
            } else if c.is_whitespace() || c == ',' {
                if c == '\n' {
                    self.line += 1;
                }
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Text up to `close`. Newlines become commas, or end a string early
    /// when `multiline` is false.
    fn delimited(&mut self, close: char, multiline: bool) -> Result<String> {
        let start_line = self.line;
        let mut out = String::new();
        loop {
            match self.chars.get(self.pos) {
                None => return Err(Error::parse(start_line, format!("missing `{close}`"))),
                Some(&c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some('\n') if !multiline => return Err(Error::parse(start_line, format!("missing `{close}`"))),
                Some(&c) => {
                    if c == '\n' {
                        self.line += 1;
                        out.push(',');
                    } else {
                        out.push(c);
                    }
                    self.pos += 1;
                }
            }
        }
    }

    fn next(&mut self) -> Result<Option<Token>> {
        self.skip_blank();
        let Some(&c) = self.chars.get(self.pos) else {
            return Ok(None);
        };
        self.pos += 1;
        let token = match c {
            '{' => Token::Open,
            '}' => Token::Close,
            '=' => Token::Equals,
            '[' => Token::Bracket(self.delimited(']', true)?),
            '(' => Token::Paren(self.delimited(')', true)?),
            '"' => Token::Str(self.delimited('"', false)?),
            _ => {
                let start = self.pos - 1;
                while self.chars.get(self.pos).is_some_and(|&c| {
                    !c.is_whitespace() && !"{}=[]()\"#".contains(c)
                }) {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                Token::Word(word.trim_end_matches(',').to_string())
            }
        };
        Ok(Some(token))
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next()? {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(self.err(format!("expected {want:?}, found {t:?}"))),
            None => Err(self.err(format!("expected {want:?}, found end of file"))),
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.next()? {
            Some(Token::Word(w)) => Ok(w),
            other => Err(self.err(format!("expected a word, found {other:?}"))),
        }
    }

    fn rest_of_line(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| c != '\n' && c != '#') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect::<String>().trim().to_string()
    }

    fn file(mut self) -> Result<MethodSpec> {
        let mut name = None;
        let mut space = None;
        let mut labels = None;
        let mut tiebreak = None;
        let mut builtin = None;
        let mut stages = Vec::new();
        while let Some(token) = self.next()? {
            let Token::Word(keyword) = token else {
                return Err(self.err(format!("unexpected {token:?}")));
            };
            match keyword.as_str() {
                "name" => match self.next()? {
                    Some(Token::Str(s)) | Some(Token::Word(s)) => name = Some(s),
                    other => return Err(self.err(format!("expected a name, found {other:?}"))),
                },
                "ballots" => {
                    let (s, l) = self.ballots()?;
                    space = Some(s);
                    labels = l;
                }
                "tiebreak" => {
                    tiebreak = match self.word()?.as_str() {
                        "pairwise" => Some(Tiebreak::Pairwise),
                        "none" => None,
                        other => return Err(self.err(format!("unknown tiebreak `{other}`"))),
                    }
                }
                "builtin" => {
                    let line = self.line;
                    let text = self.rest_of_line();
                    builtin = Some(BuiltinMethod::parse(&text).map_err(|e| Error::parse(line, e))?);
                }
                "stage" => stages.push(self.stage()?),
                other => return Err(self.err(format!("unknown keyword `{other}`"))),
            }
        }
        let body = match (builtin, stages.is_empty()) {
            (Some(b), true) => Body::Builtin(b),
            (None, false) => Body::Stages(stages),
            (Some(_), false) => return Err(self.err("a method file holds either `builtin` or `stage` blocks, not both")),
            (None, true) => return Err(self.err("no `builtin` line and no `stage` blocks")),
        };
        if matches!(body, Body::Stages(_)) && space.is_none() {
            return Err(self.err("stage blocks need a `ballots { ... }` declaration"));
        }
        Ok(MethodSpec {
            name,
            space,
            labels,
            tiebreak,
            body,
        })
    }

    fn ballots(&mut self) -> Result<(BallotSpace, Option<Vec<String>>)> {
        self.expect(Token::Open)?;
        let mut space = BallotSpace::strict(3);
        let mut grades = None;
        let mut labels: Option<Vec<String>> = None;
        loop {
            let key = match self.next()? {
                Some(Token::Close) => break,
                Some(Token::Word(w)) => w,
                other => return Err(self.err(format!("expected a setting, found {other:?}"))),
            };
            self.expect(Token::Equals)?;
            let value = self.word()?;
            let number = |v: &str| -> Result<usize> {
                v.parse()
                    .map_err(|_| self.err(format!("`{key}` needs a number, got `{v}`")))
            };
            let flag = |v: &str| -> Result<bool> {
                match v {
                    "yes" | "true" => Ok(true),
                    "no" | "false" => Ok(false),
                    _ => Err(self.err(format!("`{key}` needs yes or no, got `{v}`"))),
                }
            };
            match key.as_str() {
                "candidates" | "n_c" => space.n_candidates = number(&value)?,
                "ties" => space.allow_ties = flag(&value)?,
                "truncation" => space.allow_truncation = flag(&value)?,
                "ranks" => space.max_ranks = Some(number(&value)?),
                "grades" => grades = Some(number(&value)?),
                "labels" => labels = Some(value.split(',').map(|s| s.trim().to_string()).collect()),
                other => return Err(self.err(format!("unknown ballots setting `{other}`"))),
            }
        }
        if let Some(l) = &labels {
            space.n_candidates = l.len();
        }
        if let Some(g) = grades {
            space = BallotSpace::graded(space.n_candidates, g);
        }
        space.validate().map_err(|e| self.err(e))?;
        Ok((space, labels))
    }

    fn stage(&mut self) -> Result<Vec<ConditionSpec>> {
        self.expect(Token::Open)?;
        let mut conditions = Vec::new();
        loop {
            match self.next()? {
                Some(Token::Close) => break,
                Some(Token::Word(w)) if w == "condition" => conditions.push(self.condition()?),
                other => return Err(self.err(format!("expected `condition`, found {other:?}"))),
            }
        }
        if conditions.is_empty() {
            return Err(self.err("empty stage"));
        }
        Ok(conditions)
    }

    fn condition(&mut self) -> Result<ConditionSpec> {
        let line = self.line;
        let key = self.word()?;
        if key != "winner" {
            return Err(self.err(format!("expected `winner=`, found `{key}`")));
        }
        self.expect(Token::Equals)?;
        let winner = self.word()?;
        self.expect(Token::Open)?;
        let mut vectors = Vec::new();
        loop {
            match self.next()? {
                Some(Token::Close) => break,
                Some(Token::Word(w)) if w == "vector" => {
                    let line = self.line;
                    let src = match self.next()? {
                        Some(Token::Str(path)) => {
                            let path = PathBuf::from(path);
                            VectorSource::File(match self.base_dir {
                                Some(dir) if path.is_relative() => dir.join(path),
                                _ => path,
                            })
                        }
                        Some(Token::Bracket(body)) => VectorSource::Literal(body),
                        Some(Token::Paren(body)) => VectorSource::Tuple(body),
                        other => {
                            return Err(self.err(format!("expected a vector, found {other:?}")))
                        }
                    };
                    vectors.push((line, src));
                }
                other => return Err(self.err(format!("expected `vector`, found {other:?}"))),
            }
        }
        if vectors.is_empty() {
            return Err(Error::parse(line, Error::EmptyCondition));
        }
        Ok(ConditionSpec {
            line,
            winner,
            vectors,
        })
    }
}
