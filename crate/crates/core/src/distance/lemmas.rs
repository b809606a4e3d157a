//! The graph-theoretic mechanisms behind the distance bounds: independence
//! numbers of the distance graphs, and the induced-edge inequalities, each
//! measured against the bound the argument relies on.

use serde::{Deserialize, Serialize};

use crate::combinat::{independence_exact, spectral_bounds, AlphaKind, SearchBudget, SearchOutcome};
use crate::ffield::FieldElem;
use crate::graphs::{build_euclidean, build_halfplane, Graph};
use crate::seeding::task_rng;
use crate::spectral::{certify, certify_cayley, ordered_pair_count, random_subset, NdlCertificate};

use super::{DistanceError, Space, SpaceKey};

/// Random-set checks of one inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityAudit {
    pub inequality: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest `lhs / rhs` seen.
    pub worst_ratio: f64,
}

impl InequalityAudit {
    fn new(inequality: &str, trials: usize) -> Self {
        InequalityAudit { inequality: inequality.into(), trials, failures: 0, worst_ratio: 0.0 }
    }

    fn record(&mut self, lhs: f64, rhs: f64) {
        self.failures += usize::from(lhs > rhs + 1e-9);
        self.worst_ratio = self.worst_ratio.max(lhs / rhs);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Measurements on the distance graph of one nonzero distance `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaInstance {
    pub a: u32,
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub alpha: usize,
    pub alpha_kind: AlphaKind,
    /// `nλ/d`
    pub alpha_spectral: f64,
    /// The independence bound the single-set argument needs.
    pub alpha_lemma_bound: f64,
    pub alpha_holds: bool,
    /// The bound is at least `n`, so it holds for every graph.
    pub alpha_vacuous: bool,
    /// `λ²n²/d²`
    pub alpha2_spectral: f64,
    /// The independent-pair bound the two-set argument needs.
    pub alpha2_lemma_bound: f64,
    pub alpha2_holds: bool,
    pub alpha2_vacuous: bool,
    pub edge_audit: InequalityAudit,
    pub pair_audit: InequalityAudit,
}

impl LemmaInstance {
    pub fn passed(&self) -> bool {
        self.alpha_holds && self.alpha2_holds && self.edge_audit.passed() && self.pair_audit.passed()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub space: SpaceKey,
    pub seed: u64,
    pub trials: usize,
    pub instances: Vec<LemmaInstance>,
    /// Distances without a regular distance graph: `0`, and `4σ` in the half plane.
    pub skipped: Vec<u32>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.instances.iter().all(LemmaInstance::passed)
    }
}

struct Coefficients {
    /// `e(E) ≤ quad·|E|² + lin·|E|`
    quad: f64,
    lin: f64,
    alpha: f64,
    alpha2: f64,
    edge_label: &'static str,
    pair_label: &'static str,
}

fn coefficients(key: SpaceKey) -> Coefficients {
    let q = key.q() as f64;
    match key {
        SpaceKey::Euclidean { d, .. } => {
            let d = d as f64;
            let h = q.powf((d - 1.0) / 2.0);
            Coefficients {
                quad: (q.powf(d - 1.0) + h) / (2.0 * q.powf(d)),
                lin: h,
                alpha: 3.0 * q.powf((d + 1.0) / 2.0),
                alpha2: 9.0 * q.powf(d + 1.0),
                edge_label: "e(E) <= (q^{d-1}+q^{(d-1)/2})/(2q^d)|E|^2 + q^{(d-1)/2}|E|",
                pair_label: "e(E,F) <= (q^{d-1}+q^{(d-1)/2})/q^d |E||F| + 2q^{(d-1)/2} sqrt(|E||F|)",
            }
        }
        SpaceKey::Halfplane { .. } => Coefficients {
            quad: (q + 1.0) / (2.0 * (q * q - q)),
            lin: q.sqrt(),
            alpha: 2.0 * q.powf(1.5),
            alpha2: 9.0 * q.powi(3),
            edge_label: "e(E) <= (q+1)/(2(q^2-q))|E|^2 + q^{1/2}|E|",
            pair_label: "e(E,F) <= (q+1)/(q^2-q)|E||F| + 2q^{1/2} sqrt(|E||F|)",
        },
    }
}

fn instance(
    g: &Graph,
    cert: &NdlCertificate,
    a: u32,
    c: &Coefficients,
    trials: usize,
    seed: u64,
    budget: SearchBudget,
) -> Result<LemmaInstance, DistanceError> {
    let n = g.n();
    let (alpha_spectral, alpha2_spectral) = match spectral_bounds(cert) {
        Ok(b) => (b.alpha_bound, b.alpha2_bound),
        Err(_) => (n as f64, (n * n) as f64),
    };
    let search = independence_exact(g, budget);
    let (alpha, alpha_kind) = match search.outcome {
        SearchOutcome::Exact => (search.value, AlphaKind::Exact),
        SearchOutcome::Timeout => {
            let spectral = (alpha_spectral + 1e-9).floor() as usize;
            if search.upper_bound <= spectral {
                (search.upper_bound, AlphaKind::SearchUpperBound)
            } else {
                (spectral, AlphaKind::SpectralUpperBound)
            }
        }
    };
    let mut edge_audit = InequalityAudit::new(c.edge_label, trials);
    let mut pair_audit = InequalityAudit::new(c.pair_label, trials);
    for t in 0..trials as u64 {
        let mut rng = task_rng(seed, &[a as u64, t, 0]);
        let e = random_subset(&mut rng, n);
        let inside = ordered_pair_count(g, &e, &e)? as f64 / 2.0;
        let s = e.len() as f64;
        edge_audit.record(inside, c.quad * s * s + c.lin * s);

        let mut rng = task_rng(seed, &[a as u64, t, 1]);
        let e = random_subset(&mut rng, n);
        let f = random_subset(&mut rng, n);
        let across = ordered_pair_count(g, &e, &f)? as f64;
        let prod = (e.len() * f.len()) as f64;
        pair_audit.record(across, 2.0 * c.quad * prod + 2.0 * c.lin * prod.sqrt());
    }
    Ok(LemmaInstance {
        a,
        n,
        d: cert.d,
        lambda: cert.lambda,
        alpha,
        alpha_kind,
        alpha_spectral,
        alpha_lemma_bound: c.alpha,
        alpha_holds: alpha as f64 <= c.alpha,
        alpha_vacuous: c.alpha >= n as f64,
        alpha2_spectral,
        alpha2_lemma_bound: c.alpha2,
        alpha2_holds: alpha2_spectral <= c.alpha2 + 1e-9,
        alpha2_vacuous: c.alpha2 >= (n * n) as f64,
        edge_audit,
        pair_audit,
    })
}

/// For every nonzero distance with a regular distance graph: the measured
/// independence number against the bound the argument needs, the spectral
/// independent-pair bound against its target, and `trials` random sets
/// (and pairs) against the induced-edge inequalities.
pub fn verify_lemma_mechanisms(space: &Space, trials: usize, seed: u64, budget: SearchBudget) -> Result<LemmaReport, DistanceError> {
    let key = space.key();
    let c = coefficients(key);
    let mut instances = Vec::new();
    let mut skipped = vec![0];
    for a in 1..key.q() {
        let elem = FieldElem(a);
        let (g, cert) = match (space.form(), space.ext()) {
            (Some(form), _) => (build_euclidean(form, elem)?, certify_cayley(form, elem)?),
            (None, Some(ext)) => {
                if Some(elem) == space.four_sigma() {
                    skipped.push(a);
                    continue;
                }
                let g = build_halfplane(ext, elem)?;
                let cert = certify(&g)?;
                (g, cert)
            }
            (None, None) => unreachable!("a space is Euclidean or a half plane"),
        };
        instances.push(instance(&g, &cert, a, &c, trials, seed, budget)?);
    }
    Ok(LemmaReport { space: key, seed, trials, instances, skipped })
}
