use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::ops::Neg;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::ballots::{BallotCatalog, Profile, Ranking};
use crate::error::{Error, Result};
use crate::rational::{format_rational, integer_scaling, parse_rational, Rational};

/// Coefficients over ballot types defining one linear victory inequality
/// `(p, v) > 0`.
///
/// Equality, ordering and hashing look at the components only; the
/// optional orientation `(i, j)` records which boundary the vector was
/// built for ("points into candidate i's region").
#[derive(Clone, Debug)]
pub struct NormalVector {
    catalog: Arc<BallotCatalog>,
    components: Vec<Rational>,
    orientation: Option<(usize, usize)>,
    scaled: Option<Arc<[i64]>>,
}

impl NormalVector {
    pub fn new(catalog: Arc<BallotCatalog>, components: Vec<Rational>) -> Result<Self> {
        if components.len() != catalog.len() {
            return Err(Error::DimensionMismatch {
                expected: catalog.len(),
                found: components.len(),
            });
        }
        if components.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        let scaled = integer_scaling(&components).map(Into::into);
        Ok(NormalVector {
            catalog,
            components,
            orientation: None,
            scaled,
        })
    }

    /// Evaluates `f` on every ballot type.
    pub fn from_fn(
        catalog: Arc<BallotCatalog>,
        f: impl Fn(&Ranking) -> Rational,
    ) -> Result<Self> {
        let components = catalog.rankings().iter().map(f).collect();
        NormalVector::new(catalog, components)
    }

    pub fn with_orientation(mut self, i: usize, j: usize) -> Self {
        self.orientation = Some((i, j));
        self
    }

    pub fn catalog(&self) -> &Arc<BallotCatalog> {
        &self.catalog
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Rational {
        &self.components[k]
    }

    pub fn orientation(&self) -> Option<(usize, usize)> {
        self.orientation
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    /// `v + alpha * I`. Errors only if the result is the zero vector.
    pub fn shifted(&self, alpha: &Rational) -> Result<Self> {
        let components = self.components.iter().map(|c| c + alpha).collect();
        let mut v = NormalVector::new(self.catalog.clone(), components)?;
        v.orientation = self.orientation;
        Ok(v)
    }

    /// Components permuted so that ballot type `k` moves to `perm[k]`.
    pub(crate) fn permuted(&self, perm: &[usize], orientation: Option<(usize, usize)>) -> Self {
        let mut components = vec![Rational::zero(); self.components.len()];
        for (k, c) in self.components.iter().enumerate() {
            components[perm[k]] = c.clone();
        }
        let scaled = self.scaled.as_ref().map(|s| {
            let mut out = vec![0i64; s.len()];
            for (k, &c) in s.iter().enumerate() {
                out[perm[k]] = c;
            }
            out.into()
        });
        NormalVector {
            catalog: self.catalog.clone(),
            components,
            orientation,
            scaled,
        }
    }

    /// Sign of `(p, v)`, exact. Positive rescaling of either side leaves it
    /// unchanged, so integer profiles skip normalization entirely.
    pub fn sign_at(&self, profile: &Profile) -> Result<Ordering> {
        self.check_space(profile)?;
        if let (Some(counts), Some(scaled)) = (profile.whole_counts(), self.scaled.as_deref()) {
            let dot: i128 = counts
                .iter()
                .zip(scaled)
                .map(|(&n, &u)| n as i128 * u as i128)
                .sum();
            return Ok(dot.cmp(&0));
        }
        let dot: Rational = (0..self.dimension())
            .map(|k| profile.count(k) * &self.components[k])
            .sum();
        Ok(if dot.is_positive() {
            Ordering::Greater
        } else if dot.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }

    fn check_space(&self, profile: &Profile) -> Result<()> {
        if profile.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: profile.dimension(),
            });
        }
        if !Arc::ptr_eq(profile.catalog(), &self.catalog) && **profile.catalog() != *self.catalog {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// Parses the vector literal format: `RANKING : VALUE` per line,
    /// omitted ballot types default to 0.
    pub fn parse(catalog: Arc<BallotCatalog>, text: &str) -> Result<Self> {
        let mut components = vec![Rational::zero(); catalog.len()];
        let mut seen = vec![false; catalog.len()];
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (ranking, value) = line
                .rsplit_once(':')
                .ok_or_else(|| Error::parse(line_no, "expected `RANKING : VALUE`"))?;
            let value = parse_rational(value)
                .ok_or_else(|| Error::parse(line_no, format!("bad value `{}`", value.trim())))?;
            let ranking = catalog
                .parse_ranking(ranking)
                .map_err(|e| Error::parse(line_no, e))?;
            let k = catalog
                .require_index(&ranking)
                .map_err(|e| Error::parse(line_no, e))?;
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::parse(line_no, "ballot type listed twice"));
            }
            components[k] = value;
        }
        NormalVector::new(catalog, components)
    }

    /// Non-zero components in the vector literal format.
    pub fn to_text(&self) -> String {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                format!(
                    "{} : {}\n",
                    self.catalog.format_ranking(self.catalog.ranking(k)),
                    format_rational(c)
                )
            })
            .collect()
    }

    /// Compact `(c1, c2, ...)` rendering in ballot order.
    pub fn to_tuple(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(format_rational).collect();
        format!("({})", parts.join(", "))
    }
}

/// Inner product of the normalized profile with `v`.
pub fn inner(profile: &Profile, v: &NormalVector) -> Result<Rational> {
    v.check_space(profile)?;
    let p = profile.normalize()?;
    Ok((0..v.dimension())
        .map(|k| p.count(k) * v.component(k))
        .sum())
}

impl Neg for &NormalVector {
    type Output = NormalVector;

    fn neg(self) -> NormalVector {
        NormalVector {
            catalog: self.catalog.clone(),
            components: self.components.iter().map(|c| -c).collect(),
            orientation: self.orientation.map(|(i, j)| (j, i)),
            scaled: self
                .scaled
                .as_ref()
                .map(|s| s.iter().map(|c| -c).collect::<Vec<_>>().into()),
        }
    }
}

impl PartialEq for NormalVector {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for NormalVector {}

impl Hash for NormalVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.components.hash(state);
    }
}

impl PartialOrd for NormalVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormalVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.components.cmp(&other.components)
    }
}
