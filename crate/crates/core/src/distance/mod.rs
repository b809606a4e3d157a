//! Erdős-type distance sets in `GF(q)^d` under a quadratic form and in the
//! finite upper half plane under the Poincaré distance, with the claimed
//! lower bounds on their sizes.

mod experiment;
mod lemmas;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::CombinatError;
use crate::ffield::{ExtCtx, FieldElem, FieldError};
use crate::graphs::{check_ceiling, decode_vector, halfplane_points, poincare_distance, GraphError, HalfPlanePoint, DEFAULT_VERTEX_CEILING};
use crate::qforms::{FormError, FormKind, QuadraticForm};
use crate::spectral::SpectralError;

pub use experiment::{
    exhaustive_csv, exhaustive_table, run_experiment, sample_points, ExhaustiveRow, ExperimentConfig, ExperimentReport,
    SamplingMode, SizeSummary, SpaceSpec, TrialRow, CSV_HEADER,
};
pub use lemmas::{verify_lemma_mechanisms, InequalityAudit, LemmaInstance, LemmaReport};

/// The `ε` used wherever a hypothesis reads "for some `ε > 0`".
pub const EPSILON: f64 = 0.01;

/// Universes up to this size cache every pairwise distance.
const TABLE_LIMIT: usize = 1024;

/// Slack when comparing an integer count with a real threshold.
const THRESHOLD_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("point set lives in {got}, expected {expected}")]
    SpaceMismatch { expected: String, got: String },
    #[error("{op} needs a {expected} space")]
    WrongGeometry { op: &'static str, expected: &'static str },
    #[error("point {index} is outside a universe of {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("point {0} appears twice")]
    Duplicate(usize),
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
}

/// Identifies a space; point sets carry it so that mixing spaces is caught.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceKey {
    Euclidean { q: u32, d: usize, form: FormKind },
    Halfplane { q: u32, sigma: u32 },
}

impl SpaceKey {
    pub fn q(self) -> u32 {
        match self {
            SpaceKey::Euclidean { q, .. } | SpaceKey::Halfplane { q, .. } => q,
        }
    }

    /// Dimension of the ambient plane or space; the half plane counts as 2.
    pub fn d(self) -> usize {
        match self {
            SpaceKey::Euclidean { d, .. } => d,
            SpaceKey::Halfplane { .. } => 2,
        }
    }

    pub fn is_halfplane(self) -> bool {
        matches!(self, SpaceKey::Halfplane { .. })
    }
}

impl fmt::Display for SpaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKey::Euclidean { form, .. } => write!(f, "euclidean:{form}"),
            SpaceKey::Halfplane { sigma, .. } => write!(f, "halfplane:sigma={sigma}"),
        }
    }
}

#[derive(Clone, Debug)]
enum Geometry {
    Euclidean { form: QuadraticForm, points: Vec<Vec<FieldElem>> },
    Halfplane { ext: ExtCtx, points: Vec<HalfPlanePoint> },
}

/// A point universe with its distance function. Point indices agree with
/// the vertex indices of the matching graph builders.
#[derive(Clone, Debug)]
pub struct Space {
    key: SpaceKey,
    geometry: Geometry,
    /// `table[u * n + v]`, present when `n <= TABLE_LIMIT`.
    table: Option<Arc<Vec<u32>>>,
}

impl Space {
    pub fn euclidean(form: &QuadraticForm) -> Result<Space, DistanceError> {
        let kind = form.kind().ok_or_else(|| DistanceError::Config("distance sets need a catalogued form".into()))?;
        let q = form.ctx().q();
        let d = form.dim();
        let n = check_ceiling((q as u128).pow(d as u32), DEFAULT_VERTEX_CEILING)?;
        let points = (0..n).map(|i| decode_vector(i, q, d)).collect();
        Ok(Space { key: SpaceKey::Euclidean { q, d, form: kind }, geometry: Geometry::Euclidean { form: form.clone(), points }, table: None }
            .with_table())
    }

    pub fn halfplane(ext: &ExtCtx) -> Result<Space, DistanceError> {
        let q = ext.base().q();
        check_ceiling(q as u128 * (q as u128 - 1), DEFAULT_VERTEX_CEILING)?;
        Ok(Space {
            key: SpaceKey::Halfplane { q, sigma: ext.sigma().0 },
            geometry: Geometry::Halfplane { ext: ext.clone(), points: halfplane_points(ext) },
            table: None,
        }
        .with_table())
    }

    fn with_table(mut self) -> Space {
        let n = self.size();
        if n <= TABLE_LIMIT {
            let table = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| self.compute(u, v).0).collect();
            self.table = Some(Arc::new(table));
        }
        self
    }

    pub fn key(&self) -> SpaceKey {
        self.key
    }

    pub fn size(&self) -> usize {
        match &self.geometry {
            Geometry::Euclidean { points, .. } => points.len(),
            Geometry::Halfplane { points, .. } => points.len(),
        }
    }

    pub fn form(&self) -> Option<&QuadraticForm> {
        match &self.geometry {
            Geometry::Euclidean { form, .. } => Some(form),
            Geometry::Halfplane { .. } => None,
        }
    }

    pub fn ext(&self) -> Option<&ExtCtx> {
        match &self.geometry {
            Geometry::Halfplane { ext, .. } => Some(ext),
            Geometry::Euclidean { .. } => None,
        }
    }

    /// `Q(x − y)` or `d(z, w)`.
    pub fn distance(&self, u: usize, v: usize) -> FieldElem {
        match &self.table {
            Some(t) => FieldElem(t[u * self.size() + v]),
            None => self.compute(u, v),
        }
    }

    fn compute(&self, u: usize, v: usize) -> FieldElem {
        match &self.geometry {
            Geometry::Euclidean { form, points } => {
                let f = form.ctx();
                let diff: Vec<FieldElem> = points[u].iter().zip(&points[v]).map(|(&a, &b)| f.sub(a, b)).collect();
                form.eval_unchecked(&diff)
            }
            Geometry::Halfplane { ext, points } => poincare_distance(ext, points[u], points[v]),
        }
    }

    /// The value `B(x, y)` of the associated bilinear form.
    pub fn bilinear(&self, u: usize, v: usize) -> Option<FieldElem> {
        match &self.geometry {
            Geometry::Euclidean { form, points } => Some(form.bilinear_unchecked(&points[u], &points[v])),
            Geometry::Halfplane { .. } => None,
        }
    }

    /// The exceptional value `4σ` of the half plane.
    pub fn four_sigma(&self) -> Option<FieldElem> {
        self.ext().map(|ext| {
            let f = ext.base();
            f.mul(f.from_int(4), ext.sigma())
        })
    }
}

/// A set of points of one space: sorted, distinct, in range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    space: SpaceKey,
    members: Vec<usize>,
}

impl PointSet {
    pub fn new(space: &Space, mut members: Vec<usize>) -> Result<PointSet, DistanceError> {
        members.sort_unstable();
        if let Some(&index) = members.iter().find(|&&i| i >= space.size()) {
            return Err(DistanceError::OutOfRange { index, size: space.size() });
        }
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(DistanceError::Duplicate(w[0]));
        }
        Ok(PointSet { space: space.key(), members })
    }

    pub fn all(space: &Space) -> PointSet {
        PointSet { space: space.key(), members: (0..space.size()).collect() }
    }

    pub fn space(&self) -> SpaceKey {
        self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The four lower bounds on distance-set sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    EuclideanSingle,
    HalfplaneSingle,
    EuclideanPair,
    HalfplanePair,
}

impl BoundKind {
    pub fn for_space(key: SpaceKey, pair: bool) -> BoundKind {
        match (key.is_halfplane(), pair) {
            (false, false) => BoundKind::EuclideanSingle,
            (true, false) => BoundKind::HalfplaneSingle,
            (false, true) => BoundKind::EuclideanPair,
            (true, true) => BoundKind::HalfplanePair,
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(self, BoundKind::EuclideanPair | BoundKind::HalfplanePair)
    }

    pub fn statement(self) -> &'static str {
        match self {
            BoundKind::EuclideanSingle => "|E| >= 3q^{d/2+eps} implies |Δ_Q(E)| >= min{|E|/3q^{(d-1)/2}, q}",
            BoundKind::HalfplaneSingle => "|E| >= 3q^{1/2+eps} implies |Δ_H(E)| >= min{|E|/3q^{1/2}, q-1}",
            BoundKind::EuclideanPair => "|E||F| >= 9q^{(d-1)+eps} implies |Δ_Q(E,F)| >= min{sqrt(|E||F|)/3q^{(d-1)/2}, q}",
            BoundKind::HalfplanePair => "|E||F| >= 9q^{1+2eps} implies |Δ_H(E,F)| >= min{sqrt(|E||F|)/3q^{1/2}, q-1}",
        }
    }

    /// Least `|E|` (single) or `|E||F|` (pair) the hypothesis accepts.
    pub fn hypothesis_minimum(self, q: u32, d: usize, eps: f64) -> f64 {
        let q = q as f64;
        let d = d as f64;
        match self {
            BoundKind::EuclideanSingle => 3.0 * q.powf(d / 2.0 + eps),
            BoundKind::HalfplaneSingle => 3.0 * q.powf(0.5 + eps),
            BoundKind::EuclideanPair => 9.0 * q.powf(d - 1.0 + eps),
            BoundKind::HalfplanePair => 9.0 * q.powf(1.0 + 2.0 * eps),
        }
    }

    pub fn hypothesis_met(self, q: u32, d: usize, eps: f64, e: usize, f: usize) -> bool {
        let measure = if self.is_pair() { (e * f) as f64 } else { e as f64 };
        measure >= self.hypothesis_minimum(q, d, eps)
    }

    /// True when no set in a universe of `n` points can meet the hypothesis.
    pub fn vacuous(self, q: u32, d: usize, eps: f64, n: usize) -> bool {
        let most = if self.is_pair() { (n * n) as f64 } else { n as f64 };
        most < self.hypothesis_minimum(q, d, eps)
    }

    /// The claimed lower bound on `|Δ|` for sets of the given sizes.
    pub fn claimed(self, q: u32, d: usize, e: usize, f: usize) -> f64 {
        let qf = q as f64;
        let scale = 3.0 * qf.powf((d as f64 - 1.0) / 2.0);
        match self {
            BoundKind::EuclideanSingle => (e as f64 / scale).min(qf),
            BoundKind::HalfplaneSingle => (e as f64 / scale).min(qf - 1.0),
            BoundKind::EuclideanPair => (((e * f) as f64).sqrt() / scale).min(qf),
            BoundKind::HalfplanePair => (((e * f) as f64).sqrt() / scale).min(qf - 1.0),
        }
    }
}

/// Which value a pair `(x, y)` contributes to a two-set distance set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairValue {
    /// `Q(x − y)`, the distance.
    #[default]
    Difference,
    /// `B(x, y)`, the bilinear value; reported for comparison only.
    Bilinear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub space: SpaceKey,
    pub bound: BoundKind,
    pub value: PairValue,
    pub e_size: usize,
    /// Absent for single-set reports.
    pub f_size: Option<usize>,
    /// Sorted field-element indices.
    pub distance_set: Vec<u32>,
    pub delta_size: usize,
    /// Half plane only: `|Δ − {0, 4σ}|`.
    pub generic_size: Option<usize>,
    pub hypothesis_met: bool,
    pub threshold: f64,
    pub satisfied: bool,
}

fn value_set(q: u32, values: impl Iterator<Item = FieldElem>) -> Vec<u32> {
    let mut seen = vec![false; q as usize];
    for v in values {
        seen[v.index()] = true;
    }
    (0..q).filter(|&i| seen[i as usize]).collect()
}

fn check_space(space: &Space, set: &PointSet) -> Result<(), DistanceError> {
    if set.space != space.key {
        return Err(DistanceError::SpaceMismatch { expected: space.key.to_string(), got: set.space.to_string() });
    }
    Ok(())
}

fn report(space: &Space, bound: BoundKind, value: PairValue, e: usize, f: Option<usize>, set: Vec<u32>) -> DistanceReport {
    let key = space.key;
    let (q, d) = (key.q(), key.d());
    let f_count = f.unwrap_or(e);
    let threshold = bound.claimed(q, d, e, f_count);
    let delta_size = set.len();
    let generic_size = space.four_sigma().map(|fs| set.iter().filter(|&&v| v != 0 && v != fs.0).count());
    DistanceReport {
        space: key,
        bound,
        value,
        e_size: e,
        f_size: f,
        distance_set: set,
        delta_size,
        generic_size,
        hypothesis_met: value == PairValue::Difference && bound.hypothesis_met(q, d, EPSILON, e, f_count),
        threshold,
        satisfied: delta_size as f64 + THRESHOLD_SLACK >= threshold,
    }
}

fn single(space: &Space, e: &PointSet) -> DistanceReport {
    let m = e.members();
    let values = m.iter().enumerate().flat_map(|(i, &u)| m[i..].iter().map(move |&v| space.distance(u, v)));
    let set = value_set(space.key.q(), values);
    report(space, BoundKind::for_space(space.key, false), PairValue::Difference, e.len(), None, set)
}

/// `Δ_Q(E) = {Q(x − y) : x, y ∈ E}`, pairs with `x = y` included.
pub fn distance_set(space: &Space, e: &PointSet) -> Result<DistanceReport, DistanceError> {
    if space.key.is_halfplane() {
        return Err(DistanceError::WrongGeometry { op: "distance_set", expected: "Euclidean" });
    }
    check_space(space, e)?;
    Ok(single(space, e))
}

/// `Δ_H(E) = {d(z, w) : z, w ∈ E}`.
pub fn distance_set_halfplane(space: &Space, e: &PointSet) -> Result<DistanceReport, DistanceError> {
    if !space.key.is_halfplane() {
        return Err(DistanceError::WrongGeometry { op: "distance_set_halfplane", expected: "half-plane" });
    }
    check_space(space, e)?;
    Ok(single(space, e))
}

/// Either single-set distance set, chosen by the space.
pub fn distance_set_any(space: &Space, e: &PointSet) -> Result<DistanceReport, DistanceError> {
    check_space(space, e)?;
    Ok(single(space, e))
}

/// `{dist(x, y) : x ∈ E, y ∈ F}`, or the bilinear values on request.
pub fn distance_set_pair(space: &Space, e: &PointSet, f: &PointSet, value: PairValue) -> Result<DistanceReport, DistanceError> {
    check_space(space, e)?;
    check_space(space, f)?;
    let q = space.key.q();
    let pairs = e.members().iter().flat_map(|&u| f.members().iter().map(move |&v| (u, v)));
    let set = match value {
        PairValue::Difference => value_set(q, pairs.map(|(u, v)| space.distance(u, v))),
        PairValue::Bilinear => {
            if space.key.is_halfplane() {
                return Err(DistanceError::WrongGeometry { op: "bilinear pair values", expected: "Euclidean" });
            }
            value_set(q, pairs.filter_map(|(u, v)| space.bilinear(u, v)))
        }
    };
    Ok(report(space, BoundKind::for_space(space.key, true), value, e.len(), Some(f.len()), set))
}

/// One endpoint of every edge of `V_q(σ, 4σ)`: `(q² − q)/2` points whose
/// distance set avoids `4σ`.
pub fn matching_extremal_set(space: &Space) -> Result<PointSet, DistanceError> {
    let four_sigma = space
        .four_sigma()
        .ok_or(DistanceError::WrongGeometry { op: "matching_extremal_set", expected: "half-plane" })?;
    let n = space.size();
    let mut taken = vec![false; n];
    let mut members = Vec::new();
    for u in 0..n {
        if taken[u] {
            continue;
        }
        members.push(u);
        taken[u] = true;
        if let Some(v) = (u + 1..n).find(|&v| space.distance(u, v) == four_sigma) {
            taken[v] = true;
        }
    }
    PointSet::new(space, members)
}
