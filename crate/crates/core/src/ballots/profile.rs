use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};

use super::space::BallotCatalog;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug)]
enum Counts {
    Whole(Vec<u64>),
    Exact(Vec<Rational>),
}

/// Anonymous electorate: a non-negative count for every ballot type.
///
/// Integer counts are stored as machine integers so the exhaustive searches
/// can take an exact integer fast path; anything else is a `BigRational`.
#[derive(Clone, Debug)]
pub struct Profile {
    catalog: Arc<BallotCatalog>,
    counts: Counts,
}

impl Profile {
    pub fn from_counts(catalog: Arc<BallotCatalog>, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != catalog.len() {
            return Err(Error::DimensionMismatch {
                expected: catalog.len(),
                found: counts.len(),
            });
        }
        Ok(Profile {
            catalog,
            counts: Counts::Whole(counts),
        })
    }

    pub fn from_rationals(catalog: Arc<BallotCatalog>, counts: Vec<Rational>) -> Result<Self> {
        if counts.len() != catalog.len() {
            return Err(Error::DimensionMismatch {
                expected: catalog.len(),
                found: counts.len(),
            });
        }
        if counts.iter().any(|c| c.is_negative()) {
            return Err(Error::NegativeCount);
        }
        let whole: Option<Vec<u64>> = counts
            .iter()
            .map(|c| if c.is_integer() { c.numer().to_u64() } else { None })
            .collect();
        Ok(Profile {
            catalog,
            counts: match whole {
                Some(w) => Counts::Whole(w),
                None => Counts::Exact(counts),
            },
        })
    }

    /// Builds a profile from `(count, ranking text)` pairs.
    pub fn from_ballots(catalog: Arc<BallotCatalog>, ballots: &[(u64, &str)]) -> Result<Self> {
        let mut counts = vec![0u64; catalog.len()];
        for (n, text) in ballots {
            let r = catalog.parse_ranking(text)?;
            counts[catalog.require_index(&r)?] += n;
        }
        Profile::from_counts(catalog, counts)
    }

    pub fn catalog(&self) -> &Arc<BallotCatalog> {
        &self.catalog
    }

    pub fn dimension(&self) -> usize {
        self.catalog.len()
    }

    /// Integer counts, when every count is a whole number.
    pub fn whole_counts(&self) -> Option<&[u64]> {
        match &self.counts {
            Counts::Whole(w) => Some(w),
            Counts::Exact(_) => None,
        }
    }

    pub fn count(&self, k: usize) -> Rational {
        match &self.counts {
            Counts::Whole(w) => Rational::from_integer(w[k].into()),
            Counts::Exact(e) => e[k].clone(),
        }
    }

    pub fn counts(&self) -> Vec<Rational> {
        (0..self.dimension()).map(|k| self.count(k)).collect()
    }

    /// n_V, the total weight of the electorate.
    pub fn total(&self) -> Rational {
        match &self.counts {
            Counts::Whole(w) => Rational::from_integer(w.iter().sum::<u64>().into()),
            Counts::Exact(e) => e.iter().sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total().is_zero()
    }

    /// The point of the unit simplex: p_k = n_k / n_V.
    pub fn normalize(&self) -> Result<Profile> {
        let total = self.total();
        if total.is_zero() {
            return Err(Error::EmptyElectorate);
        }
        let p = self.counts().into_iter().map(|c| c / &total).collect();
        Ok(Profile {
            catalog: self.catalog.clone(),
            counts: Counts::Exact(p),
        })
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Profile> {
        if factor.is_negative() {
            return Err(Error::NegativeCount);
        }
        let counts = self.counts().into_iter().map(|c| c * factor).collect();
        Profile::from_rationals(self.catalog.clone(), counts)
    }

    /// Same electorate with one ballot of type `from` recast as `to`.
    pub fn with_recast(&self, from: usize, to: usize) -> Profile {
        let counts = match &self.counts {
            Counts::Whole(w) => {
                let mut w = w.clone();
                w[from] -= 1;
                w[to] += 1;
                Counts::Whole(w)
            }
            Counts::Exact(e) => {
                let mut e = e.clone();
                e[from] -= Rational::from_integer(1.into());
                e[to] += Rational::from_integer(1.into());
                Counts::Exact(e)
            }
        };
        Profile {
            catalog: self.catalog.clone(),
            counts,
        }
    }

    /// Rebuilds the profile after permuting ballot types: type `k` moves to
    /// `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Profile {
        let counts = match &self.counts {
            Counts::Whole(w) => {
                let mut out = vec![0; w.len()];
                for (k, &c) in w.iter().enumerate() {
                    out[perm[k]] = c;
                }
                Counts::Whole(out)
            }
            Counts::Exact(e) => {
                let mut out = vec![Rational::zero(); e.len()];
                for (k, c) in e.iter().enumerate() {
                    out[perm[k]] = c.clone();
                }
                Counts::Exact(out)
            }
        };
        Profile {
            catalog: self.catalog.clone(),
            counts,
        }
    }

    /// Parses the profile file grammar: `COUNT: RANKING` lines, `#` comments.
    pub fn parse(catalog: Arc<BallotCatalog>, text: &str) -> Result<Profile> {
        let mut counts = vec![Rational::zero(); catalog.len()];
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (count, ranking) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, "expected `COUNT: RANKING`"))?;
            let count = parse_rational(count)
                .filter(|c| !c.is_negative())
                .ok_or_else(|| Error::parse(line_no, format!("bad count `{}`", count.trim())))?;
            let ranking = catalog
                .parse_ranking(ranking)
                .map_err(|e| Error::parse(line_no, e))?;
            let k = catalog
                .require_index(&ranking)
                .map_err(|e| Error::parse(line_no, e))?;
            counts[k] += count;
        }
        let profile = Profile::from_rationals(catalog, counts)?;
        if profile.is_empty() {
            return Err(Error::EmptyElectorate);
        }
        Ok(profile)
    }

    /// Writes the non-zero counts in the profile file grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in 0..self.dimension() {
            let c = self.count(k);
            if !c.is_zero() {
                let _ = writeln!(
                    out,
                    "{}: {}",
                    format_rational(&c),
                    self.catalog.format_ranking(self.catalog.ranking(k))
                );
            }
        }
        out
    }
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        if self.catalog != other.catalog {
            return false;
        }
        match (&self.counts, &other.counts) {
            (Counts::Whole(a), Counts::Whole(b)) => a == b,
            _ => self.counts() == other.counts(),
        }
    }
}

impl Eq for Profile {}
