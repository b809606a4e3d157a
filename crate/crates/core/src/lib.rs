//! Finite Euclidean and non-Euclidean graphs over GF(q).
//!
//! The crate builds the graph families (Euclidean graphs `E_q(n, Q, a)`, the
//! finite upper half-plane graphs, the orthogonal-group graphs on
//! non-isotropic points and two binary code graphs), certifies their
//! `(n, d, λ)` parameters with two independent spectral routes, checks the
//! combinatorial consequences (triangle counts, independence, chromatic
//! number, toughness, Ramsey witnesses) and runs seeded distance-set
//! experiments over GF(q)^d and the half-plane.

pub mod combinat;
pub mod distance;
pub mod ffield;
pub mod graphs;
pub mod qforms;
pub mod seeding;
pub mod spectral;
pub mod suite;

pub use ffield::{ext_field, field_of_order, make_field, ArithOp, ExtCtx, ExtElem, FieldCtx, FieldElem};
pub use qforms::{make_form, FormKind, GramMatrix, QuadraticForm};
pub use graphs::{FamilyTag, Graph, GraphError, Label};
pub use spectral::{certify, spectrum_charsum, spectrum_dense, NdlCertificate, Spectrum};
pub use combinat::{count_triangles, independence_exact, chromatic_exact, toughness_exact, spectral_bounds, ramsey_witness, BoundsReport, RamseyWitness, SearchBudget, SearchOutcome};
pub use distance::{distance_set, distance_set_halfplane, distance_set_pair, run_experiment, verify_lemma_mechanisms, DistanceReport, ExperimentConfig, ExperimentReport, PointSet, Space};
