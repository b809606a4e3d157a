//! Triangles, independence, colouring, toughness, the spectral bounds on
//! them, and Ramsey witnesses from triangle-free Euclidean graphs.

pub mod brute;
mod search;
mod toughness;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{is_prime, make_field, FieldElem};
use crate::graphs::{build_euclidean, Graph, GraphError};
use crate::qforms::{make_form, FormError, FormKind};
use crate::spectral::{certify, NdlCertificate, SpectralError};

pub use search::{chromatic_exact, greedy_clique, independence_exact, ChromaticResult, IndependenceResult};
pub use toughness::{toughness_exact, Ratio, ToughnessResult, TOUGHNESS_EXACT_LIMIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombinatError {
    #[error("λ = {lambda} is not below d = {d}; the spectral bounds are void")]
    Degenerate { d: usize, lambda: f64 },
    #[error("{n} vertices exceed the exact-mode limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Limits for exact searches; whichever runs out first ends the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub node_limit: u64,
    #[serde(with = "duration_secs")]
    pub wall_limit: Duration,
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { node_limit: 100_000_000, wall_limit: Duration::from_secs(300) }
    }
}

impl SearchBudget {
    pub fn new(node_limit: u64, wall_limit: Duration) -> Self {
        SearchBudget { node_limit, wall_limit }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    /// The search finished; the value is exact.
    Exact,
    /// A limit was hit; only the reported bounds are proven.
    Timeout,
}

/// Exact triangle count: each edge contributes its common neighbours, and
/// every triangle is seen from its three edges.
pub fn count_triangles(g: &Graph) -> u64 {
    let mut t = 0u64;
    for u in 0..g.n() {
        for v in g.neighbors(u).into_iter().filter(|&v| v > u) {
            t += g.row(u).iter().zip(g.row(v)).map(|(a, b)| (a & b).count_ones() as u64).sum::<u64>();
        }
    }
    t / 3
}

/// The four bounds implied by an `(n, d, λ)` certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    /// `α(G) ≤ nλ/d`
    pub alpha_bound: f64,
    /// `α₂(G) ≤ λ²n²/d²`
    pub alpha2_bound: f64,
    /// `χ(G) ≥ d/λ`
    pub chi_bound: f64,
    /// `t(G) > (d²/(λd + λ²) − 1)/3`
    pub toughness_bound: f64,
}

pub fn spectral_bounds(cert: &NdlCertificate) -> Result<BoundsReport, CombinatError> {
    if !cert.is_meaningful() || cert.lambda <= 0.0 {
        return Err(CombinatError::Degenerate { d: cert.d, lambda: cert.lambda });
    }
    let (n, d, l) = (cert.n as f64, cert.d as f64, cert.lambda);
    Ok(BoundsReport {
        n: cert.n,
        d: cert.d,
        lambda: l,
        alpha_bound: n * l / d,
        alpha2_bound: l * l * n * n / (d * d),
        chi_bound: d / l,
        toughness_bound: (d * d / (l * d + l * l) - 1.0) / 3.0,
    })
}

/// The constants the explicit-bounds theorem leaves as `4 + o(1)` and
/// `12 + o(1)`, solved for on one instance with `|V| ≈ c·q^exponent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitConstants {
    pub exponent: u32,
    /// `alpha_bound / |V|^{(k+1)/2k}`
    pub alpha_constant: f64,
    /// `|V|^{(k−1)/2k} / chi_bound`
    pub chi_constant: f64,
    /// `|V|^{(k−1)/2k} / toughness_bound`; infinite when the bound is not positive.
    pub toughness_constant: f64,
}

pub fn explicit_constants(bounds: &BoundsReport, exponent: u32) -> ExplicitConstants {
    let v = bounds.n as f64;
    let k = exponent as f64;
    let small = v.powf((k - 1.0) / (2.0 * k));
    ExplicitConstants {
        exponent,
        alpha_constant: bounds.alpha_bound / v.powf((k + 1.0) / (2.0 * k)),
        chi_constant: small / bounds.chi_bound,
        toughness_constant: if bounds.toughness_bound > 0.0 { small / bounds.toughness_bound } else { f64::INFINITY },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaKind {
    /// Exact value from the search.
    Exact,
    /// Upper bound from a budget-limited search.
    SearchUpperBound,
    /// `⌊nλ/d⌋` from the certificate.
    SpectralUpperBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamseyWitness {
    pub q: u32,
    pub a: u32,
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub triangle_count: u64,
    pub alpha_kind: AlphaKind,
    /// An upper bound on `α`, exact when `alpha_kind` says so.
    pub alpha_value: usize,
    /// `nλ/d` before rounding.
    pub alpha_spectral_bound: f64,
    /// `d/λ`
    pub chi_lower: f64,
    pub chi_exact: Option<usize>,
    /// `0.5·n^{1/4}`, the claimed lower bound on `χ`.
    pub chi_claim: f64,
    /// `R(3, α + 1) > n`; absent when the graph has triangles.
    pub ramsey_statement: Option<String>,
}

impl RamseyWitness {
    pub fn is_valid(&self) -> bool {
        self.triangle_count == 0 && self.ramsey_statement.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamseyOptions {
    pub exact_alpha: bool,
    pub exact_chi: bool,
    pub budget: SearchBudget,
}

impl Default for RamseyOptions {
    fn default() -> Self {
        RamseyOptions { exact_alpha: false, exact_chi: false, budget: SearchBudget::default() }
    }
}

/// Witness from `E_q(2, Q⁺, a)` for a prime `q ≡ 5, 7 (mod 12)`.
pub fn ramsey_witness(q: u64, a: u32, opts: RamseyOptions) -> Result<RamseyWitness, CombinatError> {
    if !is_prime(q) {
        return Err(CombinatError::Precondition(format!("q = {q} is not prime")));
    }
    if q % 12 != 5 && q % 12 != 7 {
        return Err(CombinatError::Precondition(format!("q = {q} is {} mod 12, not 5 or 7", q % 12)));
    }
    if a == 0 || a as u64 >= q {
        return Err(CombinatError::Precondition(format!("a = {a} must be a nonzero element of GF({q})")));
    }
    let form = make_form(make_field(q, 1).map_err(GraphError::from)?, FormKind::PlusEven, 2)?;
    let g = build_euclidean(&form, FieldElem(a))?;
    let cert = certify(&g)?;
    let bounds = spectral_bounds(&cert)?;
    let triangle_count = count_triangles(&g);
    let spectral_alpha = (bounds.alpha_bound + 1e-9).floor() as usize;
    let (alpha_kind, alpha_value) = if opts.exact_alpha {
        let r = independence_exact(&g, opts.budget);
        match r.outcome {
            SearchOutcome::Exact => (AlphaKind::Exact, r.value),
            SearchOutcome::Timeout if r.upper_bound < spectral_alpha => (AlphaKind::SearchUpperBound, r.upper_bound),
            SearchOutcome::Timeout => (AlphaKind::SpectralUpperBound, spectral_alpha),
        }
    } else {
        (AlphaKind::SpectralUpperBound, spectral_alpha)
    };
    let chi_exact = opts.exact_chi.then(|| chromatic_exact(&g, opts.budget)).filter(|r| r.outcome == SearchOutcome::Exact).map(|r| r.value);
    Ok(RamseyWitness {
        q: q as u32,
        a,
        n: cert.n,
        d: cert.d,
        lambda: cert.lambda,
        triangle_count,
        alpha_kind,
        alpha_value,
        alpha_spectral_bound: bounds.alpha_bound,
        chi_lower: bounds.chi_bound,
        chi_exact,
        chi_claim: 0.5 * (cert.n as f64).powf(0.25),
        ramsey_statement: (triangle_count == 0).then(|| format!("R(3, {}) > {}", alpha_value + 1, cert.n)),
    })
}
