//! Probe-based descriptions of finite sets and the distances between them.
//!
//! Elements carry feature tables filled in by named probes; the
//! description of a set is the set of its elements' feature tuples in
//! R^n, duplicates collapsed. The descriptive distance between two
//! described sets is the smallest pairwise distance between their feature
//! tuples, and two sets are descriptively near when that distance is
//! zero (up to a declared tolerance). A nested chain of probe subsets
//! turns "distance under a growing collection of characteristics" into a
//! computable convergence check: the restricted distances can only grow
//! as probes are added, so a flat tail that stays under the convergence
//! tolerance is the witness that the limit is zero.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by description construction and distance queries.
#[derive(Debug, Error)]
pub enum DescriptionError {
    #[error("element set is empty")]
    EmptySet,
    #[error("probe `{probe}` is not defined on element `{element}`")]
    ProbeFailure { probe: String, element: String },
    #[error("probe `{probe}` yields a non-finite value on element `{element}`")]
    NonFiniteFeature { probe: String, element: String },
    #[error("probe suites differ: {0}")]
    SuiteMismatch(String),
    #[error("invalid feature chain: {0}")]
    InvalidChain(String),
    #[error("invalid probe suite: {0}")]
    InvalidSuite(String),
    #[error("described-set document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, DescriptionError>;

/// Norm applied to differences of feature tuples. Euclidean is the
/// default everywhere; the max and L1 readings are kept selectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Euclidean,
    Max,
    L1,
}

impl Norm {
    /// Distance between two equal-length tuples.
    pub fn between(self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), v.len());
        match self {
            Norm::Euclidean => u
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Norm::Max => u
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
            Norm::L1 => u.iter().zip(v).map(|(a, b)| (a - b).abs()).sum(),
        }
    }

    /// Distance using only the coordinates named by `idx`.
    pub fn between_restricted(self, u: &[f64], v: &[f64], idx: &[usize]) -> f64 {
        match self {
            Norm::Euclidean => idx
                .iter()
                .map(|&i| (u[i] - v[i]) * (u[i] - v[i]))
                .sum::<f64>()
                .sqrt(),
            Norm::Max => idx.iter().map(|&i| (u[i] - v[i]).abs()).fold(0.0, f64::max),
            Norm::L1 => idx.iter().map(|&i| (u[i] - v[i]).abs()).sum(),
        }
    }
}

/// A single named real-valued feature extractor, with its unit of measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub name: String,
    #[serde(default)]
    pub unit: String,
}

/// An ordered suite of probes; its length is the description dimension n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeSuite {
    probes: Vec<Probe>,
}

impl ProbeSuite {
    /// Builds a suite, requiring at least one probe and unique names.
    pub fn new(probes: Vec<Probe>) -> Result<Self> {
        if probes.is_empty() {
            return Err(DescriptionError::InvalidSuite(
                "a suite needs at least one probe".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for p in &probes {
            if !seen.insert(p.name.as_str()) {
                return Err(DescriptionError::InvalidSuite(format!(
                    "duplicate probe name `{}`",
                    p.name
                )));
            }
        }
        Ok(Self { probes })
    }

    /// Convenience constructor from bare names (empty units).
    pub fn from_names<S: Into<String>>(names: Vec<S>) -> Result<Self> {
        Self::new(
            names
                .into_iter()
                .map(|n| Probe {
                    name: n.into(),
                    unit: String::new(),
                })
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.probes.len()
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    pub fn probe_index(&self, name: &str) -> Option<usize> {
        self.probes.iter().position(|p| p.name == name)
    }

    /// Checks that two suites agree on probe names and order.
    pub fn require_same(&self, other: &ProbeSuite) -> Result<()> {
        if self.probes.len() != other.probes.len()
            || self
                .probes
                .iter()
                .zip(&other.probes)
                .any(|(a, b)| a.name != b.name)
        {
            return Err(DescriptionError::SuiteMismatch(format!(
                "[{}] vs [{}]",
                self.probes
                    .iter()
                    .map(|p| p.name.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
                other
                    .probes
                    .iter()
                    .map(|p| p.name.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            )));
        }
        Ok(())
    }
}

/// An opaque element together with its precomputed feature table.
///
/// Probes arrive as precomputed per-element values keyed by probe name;
/// applying probe φ to element a is a table lookup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub handle: String,
    pub features: BTreeMap<String, f64>,
}

impl Element {
    pub fn new<S: Into<String>>(handle: S, features: &[(&str, f64)]) -> Self {
        Self {
            handle: handle.into(),
            features: features.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// A finite set of feature tuples in R^n, kept sorted lexicographically
/// so that set equality is plain slice equality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Description {
    vectors: Vec<Vec<f64>>,
    dimension: usize,
}

impl Description {
    /// Builds a description from raw tuples, collapsing duplicates.
    ///
    /// Two tuples are duplicates when every coordinate differs by at most
    /// `tau_eq`; with `tau_eq = 0` this is exact equality.
    pub fn from_vectors(vectors: Vec<Vec<f64>>, dimension: usize, tau_eq: f64) -> Result<Self> {
        for v in &vectors {
            if v.len() != dimension {
                return Err(DescriptionError::Parse(format!(
                    "feature tuple of length {} in a dimension-{} description",
                    v.len(),
                    dimension
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(DescriptionError::Parse(
                    "non-finite coordinate in feature tuple".into(),
                ));
            }
        }
        let mut sorted = vectors;
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates are ordered"));
        sorted.dedup_by(|a, b| tuples_close(a, b, tau_eq));
        Ok(Self {
            vectors: sorted,
            dimension,
        })
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Cardinality of the description (number of distinct feature tuples).
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Set equality up to `tau_eq`: symmetric containment of tuples.
    pub fn approx_eq(&self, other: &Description, tau_eq: f64) -> bool {
        self.dimension == other.dimension
            && self.contains_all(other, tau_eq)
            && other.contains_all(self, tau_eq)
    }

    fn contains_all(&self, other: &Description, tau_eq: f64) -> bool {
        other
            .vectors
            .iter()
            .all(|v| self.vectors.iter().any(|u| tuples_close(u, v, tau_eq)))
    }

    /// True when the two descriptions share at least one tuple (up to
    /// `tau_eq`).
    pub fn intersects(&self, other: &Description, tau_eq: f64) -> bool {
        self.vectors
            .iter()
            .any(|u| other.vectors.iter().any(|v| tuples_close(u, v, tau_eq)))
    }
}

fn tuples_close(a: &[f64], b: &[f64], tau_eq: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tau_eq)
}

/// A named finite set of elements paired with its probe suite and the
/// derived description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescribedSet {
    id: String,
    elements: Vec<Element>,
    suite: ProbeSuite,
    description: Description,
}

impl DescribedSet {
    /// Builds a described set, deriving the description with the default
    /// duplicate-collapse tolerance (see [`default_tau_eq`]).
    pub fn new<S: Into<String>>(id: S, elements: Vec<Element>, suite: ProbeSuite) -> Result<Self> {
        let tau = default_tau_eq(&elements);
        Self::with_tau_eq(id, elements, suite, tau)
    }

    /// Same as [`DescribedSet::new`] with an explicit collapse tolerance.
    pub fn with_tau_eq<S: Into<String>>(
        id: S,
        elements: Vec<Element>,
        suite: ProbeSuite,
        tau_eq: f64,
    ) -> Result<Self> {
        let description = describe(&elements, &suite, tau_eq)?;
        Ok(Self {
            id: id.into(),
            elements,
            suite,
            description,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn suite(&self) -> &ProbeSuite {
        &self.suite
    }

    pub fn description(&self) -> &Description {
        &self.description
    }
}

/// Default duplicate-collapse tolerance: exact (0) when every feature
/// value in sight is an integer, 1e-12 otherwise.
pub fn default_tau_eq(elements: &[Element]) -> f64 {
    let all_integer = elements
        .iter()
        .flat_map(|e| e.features.values())
        .all(|v| v.fract() == 0.0);
    if all_integer {
        0.0
    } else {
        1e-12
    }
}

/// Computes the description of `elements` under `suite`: the set of
/// per-element feature tuples, duplicates collapsed.
pub fn describe(elements: &[Element], suite: &ProbeSuite, tau_eq: f64) -> Result<Description> {
    if elements.is_empty() {
        return Err(DescriptionError::EmptySet);
    }
    let mut vectors = Vec::with_capacity(elements.len());
    for e in elements {
        let mut tuple = Vec::with_capacity(suite.dimension());
        for p in suite.probes() {
            let value =
                e.features
                    .get(&p.name)
                    .copied()
                    .ok_or_else(|| DescriptionError::ProbeFailure {
                        probe: p.name.clone(),
                        element: e.handle.clone(),
                    })?;
            if !value.is_finite() {
                return Err(DescriptionError::NonFiniteFeature {
                    probe: p.name.clone(),
                    element: e.handle.clone(),
                });
            }
            tuple.push(value);
        }
        vectors.push(tuple);
    }
    Description::from_vectors(vectors, suite.dimension(), tau_eq)
}

/// Smallest pairwise Euclidean distance between the feature tuples of two
/// described sets. Finite sets make the infimum an exact minimum.
pub fn descriptive_distance(a: &DescribedSet, b: &DescribedSet) -> Result<f64> {
    descriptive_distance_with(a, b, Norm::Euclidean)
}

/// [`descriptive_distance`] under a selectable norm.
pub fn descriptive_distance_with(a: &DescribedSet, b: &DescribedSet, norm: Norm) -> Result<f64> {
    a.suite.require_same(&b.suite)?;
    Ok(min_pair_distance(
        a.description.vectors(),
        b.description.vectors(),
        norm,
        None,
    ))
}

fn min_pair_distance(
    us: &[Vec<f64>],
    vs: &[Vec<f64>],
    norm: Norm,
    subset: Option<&[usize]>,
) -> f64 {
    let mut best = f64::INFINITY;
    for u in us {
        for v in vs {
            let d = match subset {
                Some(idx) => norm.between_restricted(u, v, idx),
                None => norm.between(u, v),
            };
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// True when the descriptive distance is zero up to `tau_eq`.
pub fn descriptively_near(a: &DescribedSet, b: &DescribedSet, tau_eq: f64) -> Result<bool> {
    Ok(descriptive_distance(a, b)? <= tau_eq)
}

/// Absolute difference of description cardinalities. Exposed as its own
/// query, separate from the pairwise distance.
pub fn description_size_difference(a: &DescribedSet, b: &DescribedSet) -> u64 {
    (a.description.len() as i64 - b.description.len() as i64).unsigned_abs()
}

/// A strictly nested chain of probe-index subsets S_1 ⊂ S_2 ⊂ … ⊂ S_K.
///
/// Indices are zero-based positions into the probe suite. The chain
/// stands in for a growing collection of known characteristics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureChain {
    subsets: Vec<Vec<usize>>,
}

impl FeatureChain {
    /// Validates strict nesting, a nonempty first subset, and bounds.
    pub fn new(subsets: Vec<BTreeSet<usize>>, dimension: usize) -> Result<Self> {
        if subsets.is_empty() {
            return Err(DescriptionError::InvalidChain("chain is empty".into()));
        }
        if subsets[0].is_empty() {
            return Err(DescriptionError::InvalidChain(
                "first subset is empty".into(),
            ));
        }
        for (k, s) in subsets.iter().enumerate() {
            if let Some(&max) = s.iter().max() {
                if max >= dimension {
                    return Err(DescriptionError::InvalidChain(format!(
                        "subset {} mentions probe index {} but the suite has {} probes",
                        k + 1,
                        max,
                        dimension
                    )));
                }
            }
            if k > 0 {
                let prev = &subsets[k - 1];
                if !prev.is_subset(s) || prev.len() >= s.len() {
                    return Err(DescriptionError::InvalidChain(format!(
                        "subset {} does not strictly contain subset {}",
                        k + 1,
                        k
                    )));
                }
            }
        }
        Ok(Self {
            subsets: subsets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        })
    }

    /// Chain over probe names resolved against a suite.
    pub fn from_names(chain: &[Vec<String>], suite: &ProbeSuite) -> Result<Self> {
        let mut subsets = Vec::with_capacity(chain.len());
        for names in chain {
            let mut s = BTreeSet::new();
            for n in names {
                let idx = suite.probe_index(n).ok_or_else(|| {
                    DescriptionError::InvalidChain(format!("unknown probe name `{n}`"))
                })?;
                s.insert(idx);
            }
            subsets.push(s);
        }
        Self::new(subsets, suite.dimension())
    }

    /// The canonical one-probe-at-a-time chain {0} ⊂ {0,1} ⊂ … ⊂ {0..n}.
    pub fn full(dimension: usize) -> Result<Self> {
        Self::new(
            (1..=dimension).map(|k| (0..k).collect()).collect(),
            dimension,
        )
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }
}

/// Outcome of evaluating the descriptive distance along a feature chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Restricted distance per chain step, in chain order.
    pub distances: Vec<f64>,
    /// Size of each probe subset, parallel to `distances`.
    pub subset_sizes: Vec<usize>,
    /// Number of trailing entries inspected for monotonicity.
    pub tail_len: usize,
    /// Whether the inspected tail is monotonically nonincreasing.
    pub tail_nonincreasing: bool,
    /// Last restricted distance (the full-chain value).
    pub final_distance: f64,
    /// Convergence tolerance used for the verdict.
    pub tau_conv: f64,
    /// The limit-is-zero verdict: flat-or-falling tail and final value
    /// under `tau_conv`.
    pub converged: bool,
}

/// Evaluates the descriptive distance restricted to each subset of a
/// feature chain and reports whether the sequence witnesses a zero limit.
///
/// Restricted distances can only grow as probes are added, so the tail —
/// the last `max(2, ⌈K/4⌉)` entries, clamped to the chain length — being
/// nonincreasing means the distance has stopped growing; together with a
/// final value below `tau_conv` that is the reproducible verdict that the
/// limiting distance is zero.
pub fn indefinite_descriptive_distance(
    a: &DescribedSet,
    b: &DescribedSet,
    chain: &FeatureChain,
    tau_conv: f64,
) -> Result<ConvergenceReport> {
    a.suite.require_same(&b.suite)?;
    if let Some(max) = chain.subsets().iter().flatten().max() {
        if *max >= a.suite.dimension() {
            return Err(DescriptionError::InvalidChain(format!(
                "chain mentions probe index {} but the suite has {} probes",
                max,
                a.suite.dimension()
            )));
        }
    }
    let distances: Vec<f64> = chain
        .subsets()
        .iter()
        .map(|s| {
            min_pair_distance(
                a.description.vectors(),
                b.description.vectors(),
                Norm::Euclidean,
                Some(s),
            )
        })
        .collect();
    let k = distances.len();
    let tail_len = (k.div_ceil(4)).max(2).min(k);
    let tail = &distances[k - tail_len..];
    let tail_nonincreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let final_distance = distances[k - 1];
    Ok(ConvergenceReport {
        subset_sizes: chain.subsets().iter().map(|s| s.len()).collect(),
        tail_len,
        tail_nonincreasing,
        final_distance,
        tau_conv,
        converged: tail_nonincreasing && final_distance < tau_conv,
        distances,
    })
}

// ---------------------------------------------------------------------------
// JSON ingestion
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct SetDocument {
    id: String,
    elements: Vec<Element>,
    probes: Vec<Probe>,
}

/// Loads described sets from a JSON document: either one object or an
/// array of objects of the shape
/// `{ "id", "elements": [{"handle", "features": {probe: value}}], "probes": [{"name","unit"}] }`.
///
/// Feature values must be finite; JSON itself cannot carry NaN/Inf and
/// the derived description re-checks finiteness.
pub fn described_sets_from_json(text: &str, tau_eq: Option<f64>) -> Result<Vec<DescribedSet>> {
    let docs: Vec<SetDocument> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| DescriptionError::Parse(e.to_string()))?
    } else {
        vec![serde_json::from_str(text).map_err(|e| DescriptionError::Parse(e.to_string()))?]
    };
    docs.into_iter()
        .map(|doc| {
            let suite = ProbeSuite::new(doc.probes)?;
            match tau_eq {
                Some(t) => DescribedSet::with_tau_eq(doc.id, doc.elements, suite, t),
                None => DescribedSet::new(doc.id, doc.elements, suite),
            }
        })
        .collect()
}
