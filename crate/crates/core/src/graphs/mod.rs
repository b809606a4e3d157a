//! Graph values and the builders for every family.
//!
//! A [`Graph`] is immutable once built: a dense bitset adjacency matrix, one
//! canonical label per vertex and a [`FamilyTag`] recording the construction.
//! Vertex order is the canonical order of the labels, so rebuilding with the
//! same parameters is bit-identical.

mod code;
mod euclidean;
mod halfplane;
mod io;
mod orthogonal;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::FieldError;
use crate::qforms::{FormError, FormKind};

pub use code::{alon_split, build_alon_graph, build_code_graph, AlonSplit};
pub use euclidean::{build_euclidean, build_euclidean_with_ceiling, connection_set, decode_vector, encode_vector};
pub use halfplane::{
    build_halfplane, build_halfplane_with_ceiling, halfplane_points, poincare_distance, HalfPlanePoint,
};
pub use io::{AdjacencyText, GraphEnvelope};
pub use orthogonal::{
    build_orthogonal, build_orthogonal_with, class_count, nonisotropic_points, NonIsotropicClasses,
    OrthoFamily, OrthoOptions, OrthoReport, ProjPoint,
};

/// Default bound on vertex counts for every builder.
pub const DEFAULT_VERTEX_CEILING: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph would have {n} vertices, above the ceiling {ceiling}")]
    CeilingExceeded { n: u128, ceiling: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("{0}")]
    Parameter(String),
    #[error("regularity check failed for {family}: {detail}")]
    Regularity { family: String, detail: String },
    #[error("class sizes disagree with the cardinality formula ({detail}); the square-type convention is wrong")]
    ConventionMismatch { detail: String },
    #[error("the vertex class for {0} is empty")]
    EmptyClass(String),
    #[error("edge ({0}, {1}) is out of range or a loop")]
    BadEdge(usize, usize),
}

/// Per-vertex canonical label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    /// A field vector, a projective representative or a half-plane point
    /// `[x, y]`, as element indices.
    Vector(Vec<u32>),
    /// A binary vector written as a string of `0`/`1`.
    Bits(String),
    /// Plain vertex number for graphs without geometric labels.
    Index(usize),
}

/// Which construction produced a graph, with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyTag {
    Euclidean {
        q: u32,
        dim: usize,
        form: FormKind,
        a: u32,
    },
    Halfplane {
        q: u32,
        sigma: u32,
        a: u32,
        /// `4σ`, the distance whose graph is a perfect matching.
        four_sigma: u32,
    },
    Orthogonal(OrthoReport),
    DualBch {
        k: u32,
    },
    Alon {
        k: u32,
        w0: usize,
        w1: usize,
    },
    Custom {
        name: String,
    },
}

impl FamilyTag {
    pub fn name(&self) -> String {
        match self {
            FamilyTag::Euclidean { q, dim, form, a } => format!("E_{q}({dim},{form},{a})"),
            FamilyTag::Halfplane { q, sigma, a, .. } => format!("V_{q}({sigma},{a})"),
            FamilyTag::Orthogonal(r) => format!("H_{}({},m={},i={})", r.q, r.family.name(), r.m, r.i),
            FamilyTag::DualBch { k } => format!("G_{k}"),
            FamilyTag::Alon { k, .. } => format!("Alon_{k}"),
            FamilyTag::Custom { name } => name.clone(),
        }
    }

    /// The eigenvalue bound the construction is claimed to satisfy, if any.
    pub fn paper_bound(&self) -> Option<f64> {
        match *self {
            FamilyTag::Euclidean { q, dim, a, .. } => {
                (a != 0).then(|| 2.0 * (q as f64).powf((dim as f64 - 1.0) / 2.0))
            }
            FamilyTag::Halfplane { q, a, four_sigma, .. } => {
                (a != 0 && a != four_sigma).then(|| 2.0 * (q as f64).sqrt())
            }
            FamilyTag::Orthogonal(ref r) => Some(r.family.lambda_bound(r.q, r.m)),
            _ => None,
        }
    }
}

/// Dense symmetric adjacency with bitset rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    labels: Vec<Label>,
    family: FamilyTag,
}

impl Graph {
    pub(crate) fn empty(labels: Vec<Label>, family: FamilyTag) -> Graph {
        let n = labels.len();
        let words = n.div_ceil(64);
        Graph { n, words, bits: vec![0; n * words], labels, family }
    }

    /// Graph on `n` plainly numbered vertices from an undirected edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], family: FamilyTag) -> Result<Graph, GraphError> {
        let labels = (0..n).map(Label::Index).collect();
        let mut g = Graph::empty(labels, family);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(GraphError::BadEdge(u, v));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub fn custom(n: usize, edges: &[(usize, usize)], name: &str) -> Result<Graph, GraphError> {
        Graph::from_edges(n, edges, FamilyTag::Custom { name: name.to_string() })
    }

    #[inline]
    pub(crate) fn set_arc(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        self.set_arc(u, v);
        self.set_arc(v, u);
    }

    /// Toggles the single arc `u → v`, leaving `v → u` alone. This breaks
    /// symmetry on purpose and only exists to exercise invariant checks.
    pub fn inject_arc_flip(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] ^= 1u64 << (v % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn family(&self) -> &FamilyTag {
        &self.family
    }

    pub(crate) fn set_family(&mut self, family: FamilyTag) {
        self.family = family;
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        bits_to_indices(self.row(v))
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Undirected edges `(u, v)`, `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.neighbors(u).into_iter().all(|v| self.has_edge(v, u)))
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_edge(v, v))
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Checks symmetry, loops and label uniqueness.
    pub fn validate(&self) -> Result<(), GraphError> {
        if !self.is_symmetric() {
            return Err(GraphError::Regularity {
                family: self.family.name(),
                detail: "adjacency is not symmetric".into(),
            });
        }
        if self.has_loops() {
            return Err(GraphError::Regularity { family: self.family.name(), detail: "self-loop".into() });
        }
        let mut sorted = self.labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.labels.len() {
            return Err(GraphError::Parameter("duplicate vertex labels".into()));
        }
        Ok(())
    }
}

pub(crate) fn bits_to_indices(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            out.push(wi * 64 + b);
            w &= w - 1;
        }
    }
    out
}

pub(crate) fn check_ceiling(n: u128, ceiling: usize) -> Result<usize, GraphError> {
    if n > ceiling as u128 {
        Err(GraphError::CeilingExceeded { n, ceiling })
    } else {
        Ok(n as usize)
    }
}
