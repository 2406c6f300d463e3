use std::path::Path;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sfbc_core::ballots::{BallotCatalog, BallotSpace, Profile as CoreProfile};
use sfbc_core::geometry::{classify_vector as classify, FirstPlace, NormalVector};
use sfbc_core::methods::{Built, Tiebreak};
use sfbc_core::oracle::{self, Criterion, SearchScope};
use sfbc_core::rational::format_rational;
use sfbc_core::stages::{parse_method, ElectionMethod, Outcome};

create_exception!(sfbc, SfbcError, PyValueError);

fn err(e: sfbc_core::Error) -> PyErr {
    SfbcError::new_err(e.to_string())
}

fn labels(catalog: &BallotCatalog, outcome: &Outcome) -> Vec<String> {
    outcome.candidates().iter().map(|&c| catalog.label(c).to_owned()).collect()
}

fn reading(text: Option<&str>, space: &BallotSpace) -> PyResult<FirstPlace> {
    match text {
        None => Ok(FirstPlace::default_for(space)),
        Some("sole") => Ok(FirstPlace::Sole),
        Some("shared") => Ok(FirstPlace::Shared),
        Some(other) => Err(PyValueError::new_err(format!("reading must be 'sole' or 'shared', not {other:?}"))),
    }
}

/// A ballot space together with its enumerated ballot types.
#[pyclass(frozen, skip_from_py_object, module = "sfbc")]
#[derive(Clone)]
struct Space {
    catalog: Arc<BallotCatalog>,
}

#[pymethods]
impl Space {
    #[new]
    #[pyo3(signature = (candidates=3, ties=false, truncation=false, ranks=None, grades=None))]
    fn new(candidates: usize, ties: bool, truncation: bool, ranks: Option<usize>, grades: Option<usize>) -> PyResult<Self> {
        let space = match grades {
            Some(levels) => BallotSpace::graded(candidates, levels),
            None => BallotSpace {
                allow_ties: ties,
                allow_truncation: truncation,
                max_ranks: ranks,
                ..BallotSpace::strict(candidates)
            },
        };
        Ok(Space {
            catalog: BallotCatalog::new(space).map_err(err)?,
        })
    }

    #[getter]
    fn candidates(&self) -> Vec<String> {
        self.catalog.labels().to_vec()
    }

    /// Ballot types in catalog order.
    fn rankings(&self) -> Vec<String> {
        self.catalog.rankings().iter().map(|r| self.catalog.format_ranking(r)).collect()
    }

    fn __len__(&self) -> usize {
        self.catalog.len()
    }

    fn __repr__(&self) -> String {
        format!("Space({})", self.catalog.space())
    }
}

/// Ballot counts over a space.
#[pyclass(frozen, skip_from_py_object, module = "sfbc")]
#[derive(Clone)]
struct Profile {
    inner: CoreProfile,
}

#[pymethods]
impl Profile {
    /// Parses `COUNT: RANKING` lines.
    #[new]
    fn new(space: &Space, text: &str) -> PyResult<Self> {
        let inner = CoreProfile::parse(space.catalog.clone(), text).map_err(err)?;
        Ok(Profile { inner })
    }

    #[staticmethod]
    fn from_counts(space: &Space, counts: Vec<u64>) -> PyResult<Self> {
        let inner = CoreProfile::from_counts(space.catalog.clone(), counts).map_err(err)?;
        Ok(Profile { inner })
    }

    /// Counts per ballot type, as exact fractions in text.
    #[getter]
    fn counts(&self) -> Vec<String> {
        self.inner.counts().iter().map(format_rational).collect()
    }

    #[getter]
    fn total(&self) -> String {
        format_rational(&self.inner.total())
    }

    #[getter]
    fn space(&self) -> Space {
        Space {
            catalog: self.inner.catalog().clone(),
        }
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Profile({:?})", self.inner.to_text())
    }
}

/// A builtin method by name, or a method file.
#[pyclass(frozen, module = "sfbc")]
struct Method {
    catalog: Arc<BallotCatalog>,
    built: Built,
}

#[pymethods]
impl Method {
    /// `tiebreak` is `"pairwise"`, `"none"`, or omitted for the method's own.
    #[new]
    #[pyo3(signature = (source, candidates=None, tiebreak=None))]
    fn new(source: &str, candidates: Option<usize>, tiebreak: Option<&str>) -> PyResult<Self> {
        let path = Path::new(source);
        let spec = if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| SfbcError::new_err(format!("{source}: {e}")))?;
            parse_method(&text, path.parent())
        } else {
            parse_method(&format!("builtin {source}"), None)
        }
        .map_err(err)?;
        let n = candidates
            .or(spec.space.map(|s| s.n_candidates))
            .or(spec.labels.as_ref().map(Vec::len))
            .unwrap_or(3);
        let catalog = spec.catalog(n).map_err(err)?;
        let built = match tiebreak {
            None => spec.build(&catalog, None),
            Some("pairwise") => spec.build(&catalog, Some(Tiebreak::Pairwise)),
            Some("none") => match spec.build(&catalog, None).map_err(err)? {
                Built::Staged(m) => Ok(Built::Staged(m.with_tiebreak(None))),
                Built::Direct(_) => spec.builtin().expect("direct tallies are builtins").build(&catalog, None),
            },
            Some(other) => {
                return Err(PyValueError::new_err(format!("tiebreak must be 'pairwise' or 'none', not {other:?}")))
            }
        }
        .map_err(err)?;
        Ok(Method { catalog, built })
    }

    #[getter]
    fn name(&self) -> String {
        self.built.name().to_owned()
    }

    #[getter]
    fn space(&self) -> Space {
        Space {
            catalog: self.catalog.clone(),
        }
    }

    /// Winner labels before any tiebreak; more than one means a tie.
    fn evaluate(&self, profile: &Profile) -> PyResult<Vec<String>> {
        let outcome = self.built.evaluate(&profile.inner).map_err(err)?;
        Ok(labels(&self.catalog, &outcome))
    }

    /// Like `evaluate`, with the tiebreak applied.
    fn decide(&self, profile: &Profile) -> PyResult<Vec<String>> {
        let outcome = self.built.decide(&profile.inner).map_err(err)?;
        Ok(labels(&self.catalog, &outcome))
    }

    /// Stage types in order; empty for direct tallies.
    #[pyo3(signature = (reading=None))]
    fn stage_types(&self, reading: Option<&str>) -> PyResult<Vec<String>> {
        let reading = self::reading(reading, self.catalog.space())?;
        Ok(match self.built.as_method() {
            Some(m) => m.stages().iter().map(|s| s.classify(reading).to_string()).collect(),
            None => Vec::new(),
        })
    }

    fn __repr__(&self) -> String {
        format!("Method({:?})", self.built.name())
    }
}

#[pyclass(frozen, module = "sfbc")]
struct Counterexample {
    inner: oracle::Counterexample,
}

#[pymethods]
impl Counterexample {
    #[getter]
    fn criterion(&self) -> String {
        self.inner.criterion.to_string()
    }

    #[getter]
    fn profile(&self) -> Profile {
        Profile {
            inner: self.inner.profile.clone(),
        }
    }

    #[getter]
    fn manipulated_profile(&self) -> Profile {
        Profile {
            inner: self.inner.manipulated_profile(),
        }
    }

    #[getter]
    fn sincere(&self) -> String {
        let cat = self.inner.catalog();
        cat.format_ranking(cat.ranking(self.inner.sincere))
    }

    #[getter]
    fn manipulation(&self) -> String {
        let cat = self.inner.catalog();
        cat.format_ranking(cat.ranking(self.inner.manipulation))
    }

    #[getter]
    fn sincere_outcome(&self) -> Vec<String> {
        labels(self.inner.catalog(), &self.inner.sincere_outcome)
    }

    #[getter]
    fn manipulated_outcome(&self) -> Vec<String> {
        labels(self.inner.catalog(), &self.inner.manipulated_outcome)
    }

    /// Re-runs the method and confirms the violation.
    fn replay(&self, method: &Method) -> bool {
        oracle::replay(&self.inner, &method.built)
    }

    fn __repr__(&self) -> String {
        format!("Counterexample({} -> {})", self.sincere(), self.manipulation())
    }
}

#[pyclass(frozen, module = "sfbc")]
struct Verdict {
    #[pyo3(get)]
    method: String,
    #[pyo3(get)]
    criterion: String,
    #[pyo3(get)]
    profiles_examined: u64,
    #[pyo3(get)]
    instances_examined: u64,
    #[pyo3(get)]
    instances_skipped: u64,
    counterexamples: Vec<oracle::Counterexample>,
}

#[pymethods]
impl Verdict {
    #[getter]
    fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    #[getter]
    fn counterexamples(&self) -> Vec<Counterexample> {
        self.counterexamples
            .iter()
            .map(|c| Counterexample { inner: c.clone() })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.counterexamples.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict({} {}: {} counterexamples over {} profiles)",
            self.method,
            self.criterion,
            self.counterexamples.len(),
            self.profiles_examined
        )
    }
}

/// Category of one normal vector given as `RANKING : VALUE` lines.
#[pyfunction]
#[pyo3(signature = (space, text, reading=None))]
fn classify_vector(space: &Space, text: &str, reading: Option<&str>) -> PyResult<String> {
    let v = NormalVector::parse(space.catalog.clone(), text).map_err(err)?;
    let reading = self::reading(reading, space.catalog.space())?;
    Ok(classify(&v, reading).to_string())
}

/// Exhaustive search for violations of `criterion`
/// (`fbc`, `sfbc`, `lfp` or `monotonicity`).
#[pyfunction]
#[pyo3(signature = (method, criterion, max_voters=6, skip_ties=true, workers=None))]
fn check(
    py: Python<'_>,
    method: &Method,
    criterion: &str,
    max_voters: usize,
    skip_ties: bool,
    workers: Option<usize>,
) -> PyResult<Verdict> {
    let criterion: Criterion = criterion.parse().map_err(err)?;
    let mut scope = SearchScope::new(*method.catalog.space(), criterion, max_voters).skip_on_tie(skip_ties);
    if let Some(w) = workers {
        scope = scope.workers(w);
    }
    let built = &method.built;
    let v = py.detach(|| oracle::check_criterion(built, &scope)).map_err(err)?;
    Ok(Verdict {
        method: v.method,
        criterion: criterion.to_string(),
        profiles_examined: v.profiles_examined,
        instances_examined: v.instances_examined,
        instances_skipped: v.instances_skipped,
        counterexamples: v.counterexamples,
    })
}

#[pymodule]
fn sfbc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SfbcError", m.py().get_type::<SfbcError>())?;
    m.add_class::<Space>()?;
    m.add_class::<Profile>()?;
    m.add_class::<Method>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<Counterexample>()?;
    m.add_function(wrap_pyfunction!(classify_vector, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
