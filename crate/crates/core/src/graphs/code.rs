//! Binary Cayley graphs from dual BCH codes.
//!
//! A vector `(z₀, z₁, …)` of GF(2^k) elements is packed into one integer with
//! block `j` in bits `jk..(j+1)k`; inside a block, bit `b` is the coefficient
//! of `t^b` in the canonical polynomial basis. Labels spell these bits from
//! bit 0 upward.

use serde::{Deserialize, Serialize};

use crate::ffield::{make_field, FieldCtx, FieldElem};

use super::{check_ceiling, FamilyTag, Graph, GraphError, Label, DEFAULT_VERTEX_CEILING};

fn bit_label(v: usize, len: usize) -> Label {
    Label::Bits((0..len).map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect())
}

/// Cayley graph on `len`-bit vectors with XOR connection set `conn`.
fn xor_cayley(len: usize, conn: &[usize], family: FamilyTag) -> Graph {
    let n = 1usize << len;
    let mut g = Graph::empty((0..n).map(|v| bit_label(v, len)).collect(), family);
    for u in 0..n {
        for &s in conn {
            g.set_arc(u, u ^ s);
        }
    }
    g
}

fn field_for(k: u32) -> Result<std::sync::Arc<FieldCtx>, GraphError> {
    if k < 2 {
        return Err(GraphError::Parameter(format!("k must be at least 2, got {k}")));
    }
    Ok(make_field(2, k)?)
}

/// `G_k`: `u ~ v` iff `u + v = (z, z³)` for some `z ≠ 0`; degree `2^k − 1`.
pub fn build_code_graph(k: u32) -> Result<Graph, GraphError> {
    check_ceiling(1u128 << (2 * k as u128).min(127), DEFAULT_VERTEX_CEILING)?;
    let f = field_for(k)?;
    let conn: Vec<usize> = f.nonzero().map(|z| z.index() | f.pow(z, 3).index() << k).collect();
    let g = xor_cayley(2 * k as usize, &conn, FamilyTag::DualBch { k });
    let expected = (1usize << k) - 1;
    if g.regular_degree() != Some(expected) {
        return Err(GraphError::Regularity { family: g.family().name(), detail: format!("expected degree {expected}") });
    }
    Ok(g)
}

/// The split of `GF(2^k)*` by the top basis coefficient of `α⁷`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlonSplit {
    pub k: u32,
    /// Top coefficient of `α⁷` is 0.
    pub w0: Vec<FieldElem>,
    /// Top coefficient of `α⁷` is 1.
    pub w1: Vec<FieldElem>,
}

pub fn alon_split(k: u32) -> Result<AlonSplit, GraphError> {
    if k % 3 == 0 {
        return Err(GraphError::Parameter(format!("k = {k} is divisible by 3")));
    }
    let f = field_for(k)?;
    let (w1, w0): (Vec<FieldElem>, Vec<FieldElem>) = f.nonzero().partition(|&a| f.pow(a, 7).index() >> (k - 1) & 1 == 1);
    let half = 1usize << (k - 1);
    if w0.len() != half - 1 || w1.len() != half {
        return Err(GraphError::Parameter(format!(
            "split sizes |W0| = {}, |W1| = {} differ from {} and {half}",
            w0.len(),
            w1.len(),
            half - 1
        )));
    }
    Ok(AlonSplit { k, w0, w1 })
}

/// 3k-bit graph: `u ~ v` iff `u + v = (w₀, w₀³, w₀⁵) + (w₁, w₁³, w₁⁵)` with
/// `w₀ ∈ W₀`, `w₁ ∈ W₁`. The sums are checked to be distinct and nonzero,
/// so the degree is `|W₀|·|W₁|`.
pub fn build_alon_graph(k: u32) -> Result<Graph, GraphError> {
    check_ceiling(1u128 << (3 * k as u128).min(127), DEFAULT_VERTEX_CEILING)?;
    let split = alon_split(k)?;
    let f = field_for(k)?;
    let pack = |w: FieldElem| w.index() | f.pow(w, 3).index() << k | f.pow(w, 5).index() << (2 * k);
    let mut conn: Vec<usize> =
        split.w0.iter().flat_map(|&a| split.w1.iter().map(move |&b| (a, b))).map(|(a, b)| pack(a) ^ pack(b)).collect();
    conn.sort_unstable();
    let expected = split.w0.len() * split.w1.len();
    conn.dedup();
    if conn.len() != expected || conn.first() == Some(&0) {
        return Err(GraphError::Regularity {
            family: format!("Alon_{k}"),
            detail: format!("{} distinct nonzero generators, expected {expected}", conn.len()),
        });
    }
    let tag = FamilyTag::Alon { k, w0: split.w0.len(), w1: split.w1.len() };
    Ok(xor_cayley(3 * k as usize, &conn, tag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles(g: &Graph) -> usize {
        let mut t = 0;
        for u in 0..g.n() {
            for v in g.neighbors(u).into_iter().filter(|&v| v > u) {
                t += g.neighbors(v).into_iter().filter(|&w| w > v && g.has_edge(u, w)).count();
            }
        }
        t
    }

    #[test]
    fn dual_bch_graphs() {
        for (k, n, d) in [(2, 16, 3), (3, 64, 7), (4, 256, 15)] {
            let g = build_code_graph(k).unwrap();
            assert_eq!(g.n(), n);
            assert_eq!(g.regular_degree(), Some(d));
            assert_eq!(triangles(&g), 0);
            assert!(g.validate().is_ok());
        }
        assert!(build_code_graph(1).is_err());
        assert!(build_code_graph(9).is_err());
    }

    #[test]
    fn alon_split_sizes() {
        for k in [2, 4, 5] {
            let s = alon_split(k).unwrap();
            assert_eq!(s.w0.len(), (1 << (k - 1)) - 1);
            assert_eq!(s.w1.len(), 1 << (k - 1));
        }
        assert!(alon_split(3).is_err());
    }

    #[test]
    fn alon_graphs() {
        let g = build_alon_graph(2).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (64, Some(2)));
        let g = build_alon_graph(4).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (4096, Some(56)));
        assert_eq!(triangles(&g), 0);
    }

    #[test]
    fn labels_are_low_bit_first() {
        let g = build_code_graph(2).unwrap();
        assert_eq!(g.labels()[1], Label::Bits("1000".into()));
        assert_eq!(g.labels()[12], Label::Bits("0011".into()));
    }
}
