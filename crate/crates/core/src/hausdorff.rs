//! Hausdorff distance on finite point sets, its lift to set descriptions,
//! metric balls over collections of described sets, and open-set-algebra
//! checks at desk scale.
//!
//! Finiteness stands in for compactness throughout: finite sets are
//! compact, and sup/min over them are exact loops. The descriptive
//! Hausdorff distance between two described sets is the Hausdorff
//! distance between their descriptions, which makes every collection of
//! described sets sharing a suite a finite metric space (after
//! identifying sets with equal descriptions). Open balls in that space
//! generate a finite algebra of member subsets whose topology axioms are
//! decidable by enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::description::{descriptive_distance, DescribedSet, DescriptionError};

#[derive(Debug, Error)]
pub enum HausdorffError {
    #[error("point sets have different dimensions: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("unknown set id `{0}`")]
    UnknownId(String),
    #[error("collection: {0}")]
    BadCollection(String),
    #[error(transparent)]
    Description(#[from] DescriptionError),
}

pub type Result<T> = std::result::Result<T, HausdorffError>;

/// A nonempty finite set of points in R^m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    dimension: usize,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dimension = points.first().ok_or(HausdorffError::EmptyPointSet)?.len();
        for p in &points {
            if p.len() != dimension {
                return Err(HausdorffError::DimensionMismatch {
                    left: dimension,
                    right: p.len(),
                });
            }
        }
        Ok(Self { points, dimension })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
}

fn euclidean(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Largest distance from a point of `from` to its nearest point of `to`.
fn directed_sup_min(from: &[Vec<f64>], to: &[Vec<f64>]) -> f64 {
    from.iter()
        .map(|q| {
            to.iter()
                .map(|s| euclidean(q, s))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Exact Hausdorff distance between two finite point sets: the larger of
/// the two directed sup-min distances. O(|Q|·|S|) by contract.
pub fn hausdorff_distance(q: &PointSet, s: &PointSet) -> Result<f64> {
    if q.dimension != s.dimension {
        return Err(HausdorffError::DimensionMismatch {
            left: q.dimension,
            right: s.dimension,
        });
    }
    Ok(hausdorff_on_vectors(&q.points, &s.points))
}

fn hausdorff_on_vectors(q: &[Vec<f64>], s: &[Vec<f64>]) -> f64 {
    directed_sup_min(q, s).max(directed_sup_min(s, q))
}

/// Hausdorff distance between the descriptions of two described sets.
pub fn descriptive_hausdorff_distance(a: &DescribedSet, b: &DescribedSet) -> Result<f64> {
    a.suite().require_same(b.suite())?;
    Ok(hausdorff_on_vectors(
        a.description().vectors(),
        b.description().vectors(),
    ))
}

/// Hausdorff distance between two bare descriptions of equal dimension.
pub fn hausdorff_on_descriptions(
    a: &crate::description::Description,
    b: &crate::description::Description,
) -> f64 {
    hausdorff_on_vectors(a.vectors(), b.vectors())
}

/// A finite list of described sets sharing one probe suite, with unique
/// ids. Every member has a finite (hence compact) description, so the
/// whole collection carries the descriptive Hausdorff metric.
#[derive(Debug, Clone)]
pub struct DescribedCollection {
    members: Vec<DescribedSet>,
}

impl DescribedCollection {
    pub fn new(members: Vec<DescribedSet>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| HausdorffError::BadCollection("no members".into()))?;
        let mut ids = BTreeSet::new();
        for m in &members {
            first.suite().require_same(m.suite())?;
            if !ids.insert(m.id().to_string()) {
                return Err(HausdorffError::BadCollection(format!(
                    "duplicate member id `{}`",
                    m.id()
                )));
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[DescribedSet] {
        &self.members
    }

    pub fn ids(&self) -> Vec<String> {
        self.members.iter().map(|m| m.id().to_string()).collect()
    }

    pub fn member(&self, id: &str) -> Result<&DescribedSet> {
        self.members
            .iter()
            .find(|m| m.id() == id)
            .ok_or_else(|| HausdorffError::UnknownId(id.to_string()))
    }
}

/// An open metric ball over a collection: the members strictly within
/// `radius` of the center under the descriptive Hausdorff distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallCover {
    pub center: String,
    pub radius: f64,
    /// Ids of members with distance < radius; always contains the center.
    pub members: Vec<String>,
}

/// Builds the open ball of `radius` around `center_id`. Membership uses
/// strict inequality, the open-ball convention.
pub fn ball(collection: &DescribedCollection, center_id: &str, radius: f64) -> Result<BallCover> {
    let center = collection.member(center_id)?;
    let mut members = Vec::new();
    for m in collection.members() {
        if descriptive_hausdorff_distance(center, m)? < radius {
            members.push(m.id().to_string());
        }
    }
    Ok(BallCover {
        center: center_id.to_string(),
        radius,
        members,
    })
}

/// Pairwise distance matrix over a collection, in member order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    /// Builds a matrix with an arbitrary symmetric distance.
    #[allow(clippy::needless_range_loop)]
    pub fn build<F>(collection: &DescribedCollection, mut dist: F) -> Result<Self>
    where
        F: FnMut(&DescribedSet, &DescribedSet) -> Result<f64>,
    {
        let n = collection.members().len();
        let mut values = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let d = dist(&collection.members()[i], &collection.members()[j])?;
                values[i][j] = d;
                values[j][i] = d;
            }
        }
        Ok(Self {
            ids: collection.ids(),
            values,
        })
    }

    pub fn descriptive_hausdorff(collection: &DescribedCollection) -> Result<Self> {
        Self::build(collection, descriptive_hausdorff_distance)
    }

    pub fn descriptive(collection: &DescribedCollection) -> Result<Self> {
        Self::build(collection, |a, b| Ok(descriptive_distance(a, b)?))
    }

    /// CSV rendering with id headers; cells carry 6 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id");
        for id in &self.ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for (i, id) in self.ids.iter().enumerate() {
            out.push_str(id);
            for v in &self.values[i] {
                out.push(',');
                out.push_str(&format_sig(*v, 6));
            }
            out.push('\n');
        }
        out
    }
}

/// Formats with the given number of significant digits, plain decimal.
pub(crate) fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Result of checking the open-set axioms over the finite algebra
/// generated by a family of balls.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Number of distinct member-subsets in the generated algebra.
    pub family_size: usize,
    pub contains_empty: bool,
    pub contains_whole: bool,
    pub union_closed: bool,
    pub intersection_closed: bool,
    /// Offending pairs of subsets (as sorted id lists), if any.
    pub counterexamples: Vec<(Vec<String>, Vec<String>)>,
    pub all_hold: bool,
}

/// Generates the finite set algebra spanned by the given balls (seeded
/// with the empty set and the whole collection, closed under union and
/// intersection) and re-verifies the axioms on it by enumeration.
///
/// Over a finite family, closure under pairwise union implies closure
/// under arbitrary unions, so the pairwise check is complete.
pub fn verify_topology_axioms(
    collection: &DescribedCollection,
    balls: &[BallCover],
) -> AxiomReport {
    let whole: BTreeSet<String> = collection.ids().into_iter().collect();
    let mut family: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    family.insert(BTreeSet::new());
    family.insert(whole.clone());
    for b in balls {
        family.insert(b.members.iter().cloned().collect());
    }
    // close under union and intersection to a fixpoint
    loop {
        let snapshot: Vec<BTreeSet<String>> = family.iter().cloned().collect();
        let before = family.len();
        for (i, a) in snapshot.iter().enumerate() {
            for b in &snapshot[i + 1..] {
                family.insert(a.union(b).cloned().collect());
                family.insert(a.intersection(b).cloned().collect());
            }
        }
        if family.len() == before {
            break;
        }
    }

    let contains_empty = family.contains(&BTreeSet::new());
    let contains_whole = family.contains(&whole);
    let mut union_closed = true;
    let mut intersection_closed = true;
    let mut counterexamples = Vec::new();
    let sets: Vec<BTreeSet<String>> = family.iter().cloned().collect();
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i..] {
            let u: BTreeSet<String> = a.union(b).cloned().collect();
            let n: BTreeSet<String> = a.intersection(b).cloned().collect();
            if !family.contains(&u) {
                union_closed = false;
                counterexamples.push((to_vec(a), to_vec(b)));
            }
            if !family.contains(&n) {
                intersection_closed = false;
                counterexamples.push((to_vec(a), to_vec(b)));
            }
        }
    }
    let all_hold = contains_empty && contains_whole && union_closed && intersection_closed;
    AxiomReport {
        family_size: family.len(),
        contains_empty,
        contains_whole,
        union_closed,
        intersection_closed,
        counterexamples,
        all_hold,
    }
}

fn to_vec(s: &BTreeSet<String>) -> Vec<String> {
    s.iter().cloned().collect()
}
