//! Spectra of graphs, `(n, d, λ)` certificates and expander-mixing audits.

mod eigen;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::FieldElem;
use crate::graphs::{connection_set, Graph};
use crate::qforms::{next_vector, QuadraticForm};
use crate::seeding::task_rng;

pub use eigen::{symmetric_eigenvalues, EigenMethod, JACOBI_AUTO_LIMIT, JACOBI_TOLERANCE};

pub const DEFAULT_DENSE_CEILING: usize = 4096;
pub const CHARSUM_CEILING: u64 = 1 << 20;
/// Two eigenvalues closer than this are treated as equal.
pub const COMPARE_TOLERANCE: f64 = 1e-6;
/// Slack added to every stated bound.
pub const CERTIFY_SLACK: f64 = 1e-6;
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph has {n} vertices, above the dense ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("q^n = {0} is above the character-sum ceiling")]
    CharsumTooLarge(u64),
    #[error("adjacency matrix is not symmetric")]
    Asymmetric,
    #[error("graph is not regular")]
    NotRegular,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("character sum has imaginary part {0:e}")]
    ImaginaryResidue(f64),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    Dense,
    Charsum,
}

/// Real eigenvalues with multiplicity, sorted descending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub source: SpectrumSource,
}

impl Spectrum {
    fn new(mut eigenvalues: Vec<f64>, source: SpectrumSource) -> Spectrum {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Spectrum { eigenvalues, source }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Distinct values with multiplicities; a run of values within `tol` of
    /// its first member is one group.
    pub fn grouped(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut anchor = f64::NAN;
        for &x in &self.eigenvalues {
            match out.last_mut() {
                Some((_, c)) if (anchor - x).abs() <= tol => *c += 1,
                _ => {
                    anchor = x;
                    out.push((x, 1));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn trace_of_square(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x).sum()
    }

    /// Largest elementwise gap between the two sorted multisets; `None` when
    /// the sizes differ.
    pub fn max_deviation(&self, other: &Spectrum) -> Option<f64> {
        (self.len() == other.len())
            .then(|| self.eigenvalues.iter().zip(&other.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn multiplicity_near(&self, value: f64) -> usize {
        self.eigenvalues.iter().filter(|x| (*x - value).abs() <= COMPARE_TOLERANCE).count()
    }

    /// `max |μ|` after removing one eigenvalue within tolerance of `d`, the
    /// largest; equals `d` when `d` is repeated.
    pub fn lambda_nonprincipal(&self, d: f64) -> f64 {
        let skip = self.eigenvalues.iter().position(|x| (*x - d).abs() <= COMPARE_TOLERANCE);
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != skip)
            .map(|(_, x)| x.abs())
            .fold(0.0, f64::max)
    }

    /// `max |μ|` over the eigenvalues `μ` not within tolerance of `d`.
    pub fn lambda_excluding(&self, d: f64) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|x| (*x - d).abs() > COMPARE_TOLERANCE)
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }
}

pub fn spectrum_dense(g: &Graph) -> Result<Spectrum, SpectralError> {
    spectrum_dense_with(g, EigenMethod::Auto, DEFAULT_DENSE_CEILING)
}

pub fn spectrum_dense_with(g: &Graph, method: EigenMethod, ceiling: usize) -> Result<Spectrum, SpectralError> {
    let n = g.n();
    if n > ceiling {
        return Err(SpectralError::CeilingExceeded { n, ceiling });
    }
    if !g.is_symmetric() {
        return Err(SpectralError::Asymmetric);
    }
    let mut a = vec![0.0; n * n];
    for u in 0..n {
        for v in g.neighbors(u) {
            a[u * n + v] = 1.0;
        }
    }
    Ok(Spectrum::new(symmetric_eigenvalues(a, n, method)?, SpectrumSource::Dense))
}

/// Eigenvalues of the Cayley graph `E_q(n, Q, a)` as additive character
/// sums `λ_m = Σ_{s ≠ 0, Q(s) = a} exp(2πi·Tr(m·s)/p)`, one per `m`, in
/// vertex order of `m` before sorting.
pub fn charsum_values(form: &QuadraticForm, a: FieldElem) -> Result<Vec<f64>, SpectralError> {
    let f = form.ctx();
    let q = f.q() as u64;
    let dim = form.dim();
    let size = q.checked_pow(dim as u32).unwrap_or(u64::MAX);
    if size > CHARSUM_CEILING {
        return Err(SpectralError::CharsumTooLarge(size));
    }
    let qs = q as usize;
    let p = f.p() as usize;
    let conn: Vec<Vec<usize>> = connection_set(form, a).iter().map(|s| s.iter().map(|c| c.index()).collect()).collect();
    let mul: Vec<usize> = (0..qs * qs).map(|i| f.mul(FieldElem((i / qs) as u32), FieldElem((i % qs) as u32)).index()).collect();
    let add: Vec<usize> = (0..qs * qs).map(|i| f.add(FieldElem((i / qs) as u32), FieldElem((i % qs) as u32)).index()).collect();
    let trace: Vec<usize> = f.elements().map(|x| f.trace(x) as usize).collect();
    let (cos, sin): (Vec<f64>, Vec<f64>) =
        (0..p).map(|k| std::f64::consts::TAU * k as f64 / p as f64).map(|t| (t.cos(), t.sin())).unzip();

    let mut out = Vec::with_capacity(size as usize);
    let mut m = vec![FieldElem::ZERO; dim];
    loop {
        let (mut re, mut im) = (0.0, 0.0);
        for s in &conn {
            let mut dot = 0usize;
            for (mi, &si) in m.iter().zip(s) {
                dot = add[dot * qs + mul[mi.index() * qs + si]];
            }
            let t = trace[dot];
            re += cos[t];
            im += sin[t];
        }
        if im.abs() > IMAGINARY_TOLERANCE {
            return Err(SpectralError::ImaginaryResidue(im));
        }
        out.push(re);
        if !next_vector(&mut m, f.q()) {
            break;
        }
    }
    Ok(out)
}

pub fn spectrum_charsum(form: &QuadraticForm, a: FieldElem) -> Result<Spectrum, SpectralError> {
    Ok(Spectrum::new(charsum_values(form, a)?, SpectrumSource::Charsum))
}

/// Measured `(n, d, λ)` with the family's stated bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NdlCertificate {
    pub family: String,
    pub n: usize,
    pub d: usize,
    /// Largest `|μ|` once the principal eigenvalue is removed.
    pub lambda: f64,
    /// Largest `|μ|` over eigenvalues other than `d`; below `lambda` only
    /// for disconnected graphs.
    pub lambda_nontrivial: f64,
    pub bound: Option<f64>,
    /// `λ ≤ bound + slack`; absent when no bound is stated.
    pub pass: Option<bool>,
    pub connected: bool,
    pub d_multiplicity: usize,
    pub source: SpectrumSource,
}

impl NdlCertificate {
    /// `λ < d`, so the spectral bounds say something.
    pub fn is_meaningful(&self) -> bool {
        self.lambda < self.d as f64 - COMPARE_TOLERANCE
    }
}

pub fn certify(g: &Graph) -> Result<NdlCertificate, SpectralError> {
    let spectrum = spectrum_dense(g)?;
    certify_with(g, &spectrum)
}

pub fn certify_with(g: &Graph, spectrum: &Spectrum) -> Result<NdlCertificate, SpectralError> {
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let bound = g.family().paper_bound();
    Ok(make_certificate(g.family().name(), g.n(), d, bound, spectrum, Some(g.is_connected())))
}

fn make_certificate(
    family: String,
    n: usize,
    d: usize,
    bound: Option<f64>,
    spectrum: &Spectrum,
    connected: Option<bool>,
) -> NdlCertificate {
    let lambda = spectrum.lambda_nonprincipal(d as f64);
    let lambda_nontrivial = spectrum.lambda_excluding(d as f64);
    let d_multiplicity = spectrum.multiplicity_near(d as f64);
    NdlCertificate {
        family,
        n,
        d,
        lambda,
        lambda_nontrivial,
        bound,
        pass: bound.map(|b| lambda <= b + CERTIFY_SLACK),
        connected: connected.unwrap_or(d_multiplicity == 1),
        d_multiplicity,
        source: spectrum.source,
    }
}

/// Certificate for `E_q(n, Q, a)` from character sums alone, without
/// building the graph; connectivity is read off the multiplicity of `d`.
pub fn certify_cayley(form: &QuadraticForm, a: FieldElem) -> Result<NdlCertificate, SpectralError> {
    let spectrum = spectrum_charsum(form, a)?;
    let d = connection_set(form, a).len();
    let q = form.ctx().q();
    let dim = form.dim();
    let bound = (!a.is_zero()).then(|| 2.0 * (q as f64).powf((dim as f64 - 1.0) / 2.0));
    let name = format!("E_{q}({dim},{},{})", form.kind().map_or("custom", |k| k.name()), a.0);
    Ok(make_certificate(name, spectrum.len(), d, bound, &spectrum, None))
}

/// One instance of `|e − expected| ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingReport {
    pub b_size: usize,
    pub c_size: usize,
    pub edges: u64,
    pub expected: f64,
    pub bound: f64,
    pub deviation: f64,
    pub holds: bool,
}

fn vertex_bits(g: &Graph, set: &[usize]) -> Result<Vec<u64>, SpectralError> {
    let mut bits = vec![0u64; g.words()];
    for &v in set {
        if v >= g.n() {
            return Err(SpectralError::VertexOutOfRange(v));
        }
        bits[v / 64] |= 1 << (v % 64);
    }
    Ok(bits)
}

fn distinct(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}

/// Ordered pairs `(u, v)`, `u ∈ B`, `v ∈ C`, `uv` an edge.
pub fn ordered_pair_count(g: &Graph, b: &[usize], c: &[usize]) -> Result<u64, SpectralError> {
    let cbits = vertex_bits(g, c)?;
    let b = distinct(b);
    if let Some(&v) = b.iter().find(|&&v| v >= g.n()) {
        return Err(SpectralError::VertexOutOfRange(v));
    }
    Ok(b.iter().map(|&u| g.row(u).iter().zip(&cbits).map(|(x, y)| (x & y).count_ones() as u64).sum::<u64>()).sum())
}

/// `|e(B, C) − d|B||C|/n| ≤ λ√(|B||C|)`.
pub fn mixing_check(g: &Graph, b: &[usize], c: &[usize], cert: &NdlCertificate) -> Result<MixingReport, SpectralError> {
    let edges = ordered_pair_count(g, b, c)?;
    let (bs, cs) = (distinct(b).len(), distinct(c).len());
    let expected = cert.d as f64 * bs as f64 * cs as f64 / cert.n as f64;
    let bound = cert.lambda * ((bs * cs) as f64).sqrt();
    Ok(finish(bs, cs, edges, expected, bound))
}

/// `|e(B) − d|B|²/2n| ≤ λ|B|/2` with `e(B)` the induced edge count.
pub fn edge_bound_check(g: &Graph, b: &[usize], cert: &NdlCertificate) -> Result<MixingReport, SpectralError> {
    let edges = ordered_pair_count(g, b, b)? / 2;
    let bs = distinct(b).len();
    let expected = cert.d as f64 * (bs * bs) as f64 / (2.0 * cert.n as f64);
    let bound = cert.lambda * bs as f64 / 2.0;
    Ok(finish(bs, bs, edges, expected, bound))
}

fn finish(b_size: usize, c_size: usize, edges: u64, expected: f64, bound: f64) -> MixingReport {
    let deviation = (edges as f64 - expected).abs();
    MixingReport { b_size, c_size, edges, expected, bound, deviation, holds: deviation <= bound + CERTIFY_SLACK * (1.0 + bound) }
}

/// Results of seeded random mixing checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingAudit {
    pub family: String,
    pub seed: u64,
    pub trials: usize,
    pub pair_failures: usize,
    pub set_failures: usize,
    /// Largest `deviation / bound` seen (0 when every bound is 0).
    pub worst_pair_ratio: f64,
    pub worst_set_ratio: f64,
}

impl MixingAudit {
    pub fn passed(&self) -> bool {
        self.pair_failures == 0 && self.set_failures == 0
    }
}

/// A random nonempty subset: size uniform in `1..=n`, members uniform.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let size = rng.gen_range(1..=n);
    let mut s = sample(rng, n, size).into_vec();
    s.sort_unstable();
    s
}

/// `trials` random pairs `(B, C)` for the pair inequality and `trials`
/// random sets `B` for the induced-edge inequality. Trial `t` draws from the
/// stream keyed by `(t, 0)` or `(t, 1)`.
pub fn mixing_audit(g: &Graph, cert: &NdlCertificate, trials: usize, seed: u64) -> Result<MixingAudit, SpectralError> {
    let mut audit = MixingAudit {
        family: cert.family.clone(),
        seed,
        trials,
        pair_failures: 0,
        set_failures: 0,
        worst_pair_ratio: 0.0,
        worst_set_ratio: 0.0,
    };
    let ratio = |r: &MixingReport| if r.bound > 0.0 { r.deviation / r.bound } else { 0.0 };
    for t in 0..trials as u64 {
        let mut rng = task_rng(seed, &[t, 0]);
        let b = random_subset(&mut rng, g.n());
        let c = random_subset(&mut rng, g.n());
        let r = mixing_check(g, &b, &c, cert)?;
        audit.pair_failures += usize::from(!r.holds);
        audit.worst_pair_ratio = audit.worst_pair_ratio.max(ratio(&r));

        let mut rng = task_rng(seed, &[t, 1]);
        let b = random_subset(&mut rng, g.n());
        let r = edge_bound_check(g, &b, cert)?;
        audit.set_failures += usize::from(!r.holds);
        audit.worst_set_ratio = audit.worst_set_ratio.max(ratio(&r));
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{ext_field, make_field};
    use crate::graphs::{build_code_graph, build_euclidean, build_halfplane};
    use crate::qforms::{make_form, FormKind};

    fn euclid(q: u64, kind: FormKind, dim: usize, a: u32) -> (QuadraticForm, Graph) {
        let form = make_form(make_field(q, 1).unwrap(), kind, dim).unwrap();
        let g = build_euclidean(&form, FieldElem(a)).unwrap();
        (form, g)
    }

    #[test]
    fn cycle_and_triangle_spectra() {
        let k3 = Graph::custom(3, &[(0, 1), (1, 2), (0, 2)], "K3").unwrap();
        let s = spectrum_dense(&k3).unwrap();
        assert_eq!(s.grouped(1e-6).iter().map(|g| g.1).collect::<Vec<_>>(), vec![1, 2]);
        let c4 = Graph::custom(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], "C4").unwrap();
        let s = spectrum_dense(&c4).unwrap();
        assert!(s.max_deviation(&Spectrum::new(vec![2.0, 0.0, 0.0, -2.0], SpectrumSource::Dense)).unwrap() < 1e-9);
    }

    #[test]
    fn dense_matches_charsum_on_planar_graphs() {
        for q in [3, 5, 7] {
            for kind in [FormKind::PlusEven, FormKind::MinusEven] {
                for a in 1..q as u32 {
                    let (form, g) = euclid(q, kind, 2, a);
                    let dense = spectrum_dense(&g).unwrap();
                    let chars = spectrum_charsum(&form, FieldElem(a)).unwrap();
                    assert!(dense.max_deviation(&chars).unwrap() < 1e-6, "q={q} {kind} a={a}");
                }
            }
        }
    }

    #[test]
    fn charsum_over_extension_field() {
        let form = make_form(make_field(3, 2).unwrap(), FormKind::MinusEven, 2).unwrap();
        let g = build_euclidean(&form, FieldElem(2)).unwrap();
        let dev = spectrum_dense(&g).unwrap().max_deviation(&spectrum_charsum(&form, FieldElem(2)).unwrap()).unwrap();
        assert!(dev < 1e-6);
    }

    #[test]
    fn trace_identities() {
        let (_, g) = euclid(5, FormKind::OddStd, 3, 2);
        let s = spectrum_dense(&g).unwrap();
        let d = g.regular_degree().unwrap() as f64;
        let n = g.n() as f64;
        assert!(s.trace().abs() < 1e-6 * n);
        assert!((s.trace_of_square() - d * n).abs() < 1e-6 * n);
    }

    #[test]
    fn certificates() {
        let (_, g) = euclid(3, FormKind::MinusEven, 2, 1);
        let c = certify(&g).unwrap();
        assert_eq!((c.n, c.d), (9, 4));
        assert!(c.lambda <= 2.0 * 3f64.sqrt() + 1e-6);
        assert_eq!(c.pass, Some(true));

        let (_, g) = euclid(3, FormKind::PlusEven, 2, 1);
        let c = certify(&g).unwrap();
        assert!(!c.connected);
        assert_eq!(c.d_multiplicity, 3);
        // Three triangles: spectrum {2, 2, 2, -1 ×6}.
        assert!((c.lambda - 2.0).abs() < 1e-9 && (c.lambda_nontrivial - 1.0).abs() < 1e-9);
        assert!(!c.is_meaningful());

        let f = make_field(5, 1).unwrap();
        let ext = ext_field(f.clone(), f.primitive_element()).unwrap();
        let c = certify(&build_halfplane(&ext, FieldElem(1)).unwrap()).unwrap();
        assert_eq!((c.n, c.d), (20, 6));
        assert!(c.lambda <= 2.0 * 5f64.sqrt() + 1e-6);

        let c = certify(&build_code_graph(2).unwrap()).unwrap();
        assert_eq!((c.d, c.bound, c.pass), (3, None, None));

        let irregular = Graph::custom(3, &[(0, 1)], "P2").unwrap();
        assert_eq!(certify(&irregular).unwrap_err(), SpectralError::NotRegular);
    }

    #[test]
    fn cayley_certificate_agrees_with_dense() {
        let (form, g) = euclid(5, FormKind::PlusEven, 2, 1);
        let a = certify(&g).unwrap();
        let b = certify_cayley(&form, FieldElem(1)).unwrap();
        assert_eq!((a.n, a.d, a.connected, a.d_multiplicity), (b.n, b.d, b.connected, b.d_multiplicity));
        assert!((a.lambda - b.lambda).abs() < 1e-6);
        assert!(b.lambda <= 2.0 * 5f64.sqrt());
    }

    #[test]
    fn mixing_equality_and_specialisations() {
        let f = make_field(7, 1).unwrap();
        let ext = ext_field(f.clone(), f.primitive_element()).unwrap();
        let g = build_halfplane(&ext, FieldElem(1)).unwrap();
        let cert = certify(&g).unwrap();
        let all: Vec<usize> = (0..g.n()).collect();
        let r = mixing_check(&g, &all, &all, &cert).unwrap();
        assert_eq!(r.edges, (cert.d * cert.n) as u64);
        assert!(r.deviation < 1e-9);
        let r = edge_bound_check(&g, &all, &cert).unwrap();
        assert_eq!(r.edges, (cert.d * cert.n / 2) as u64);
        let r = mixing_check(&g, &[0], &[5], &cert).unwrap();
        assert!(r.holds && r.bound == cert.lambda);
        assert!(mixing_check(&g, &[0], &[g.n()], &cert).is_err());

        let audit = mixing_audit(&g, &cert, 1000, 42).unwrap();
        assert!(audit.passed(), "{audit:?}");
        assert_eq!(audit, mixing_audit(&g, &cert, 1000, 42).unwrap());
    }

    #[test]
    fn independent_sets_respect_the_edge_bound() {
        let (_, g) = euclid(5, FormKind::MinusEven, 2, 1);
        let cert = certify(&g).unwrap();
        // Greedy independent set.
        let mut set: Vec<usize> = Vec::new();
        for v in 0..g.n() {
            if set.iter().all(|&u| !g.has_edge(u, v)) {
                set.push(v);
            }
        }
        let r = edge_bound_check(&g, &set, &cert).unwrap();
        assert_eq!(r.edges, 0);
        assert!(r.holds);
        assert!(set.len() as f64 <= g.n() as f64 * cert.lambda / cert.d as f64 + 1e-9);
    }
}
