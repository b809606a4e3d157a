use crate::ffield::FieldElem;
use crate::qforms::{next_vector, QuadraticForm};

use super::{check_ceiling, FamilyTag, Graph, GraphError, Label, DEFAULT_VERTEX_CEILING};

/// Vertex index of a vector: coordinates read as base-q digits, first
/// coordinate most significant.
pub fn encode_vector(x: &[FieldElem], q: u32) -> usize {
    x.iter().fold(0usize, |acc, c| acc * q as usize + c.index())
}

pub fn decode_vector(mut index: usize, q: u32, dim: usize) -> Vec<FieldElem> {
    let mut out = vec![FieldElem::ZERO; dim];
    for c in out.iter_mut().rev() {
        *c = FieldElem((index % q as usize) as u32);
        index /= q as usize;
    }
    out
}

/// `{s ≠ 0 : Q(s) = a}` in lexicographic order.
pub fn connection_set(form: &QuadraticForm, a: FieldElem) -> Vec<Vec<FieldElem>> {
    let q = form.ctx().q();
    let mut x = vec![FieldElem::ZERO; form.dim()];
    let mut out = Vec::new();
    while next_vector(&mut x, q) {
        if form.eval_unchecked(&x) == a {
            out.push(x.clone());
        }
    }
    out
}

pub fn build_euclidean(form: &QuadraticForm, a: FieldElem) -> Result<Graph, GraphError> {
    build_euclidean_with_ceiling(form, a, DEFAULT_VERTEX_CEILING)
}

/// `E_q(dim, Q, a)`: `x ~ y` iff `x ≠ y` and `Q(x − y) = a`.
pub fn build_euclidean_with_ceiling(
    form: &QuadraticForm,
    a: FieldElem,
    ceiling: usize,
) -> Result<Graph, GraphError> {
    let f = form.ctx();
    let q = f.q();
    let dim = form.dim();
    if a.index() >= q as usize {
        return Err(GraphError::Parameter(format!("a = {} is not an element of GF({q})", a.0)));
    }
    let n = check_ceiling((q as u128).pow(dim as u32), ceiling)?;
    let conn = connection_set(form, a);
    let labels = (0..n).map(|v| Label::Vector(decode_vector(v, q, dim).iter().map(|c| c.0).collect())).collect();
    let family = FamilyTag::Euclidean {
        q,
        dim,
        form: form.kind().ok_or_else(|| GraphError::Parameter("Euclidean graphs need a catalogued form".into()))?,
        a: a.0,
    };
    let mut g = Graph::empty(labels, family);

    // Digit-wise addition table keeps the inner loop free of field calls.
    let qs = q as usize;
    let add: Vec<usize> = (0..qs * qs).map(|ab| f.add(FieldElem((ab / qs) as u32), FieldElem((ab % qs) as u32)).index()).collect();
    let mut u_vec = vec![0usize; dim];
    for u in 0..n {
        for s in &conn {
            let mut v = 0usize;
            for (i, c) in s.iter().enumerate() {
                v = v * qs + add[u_vec[i] * qs + c.index()];
            }
            g.set_arc(u, v);
        }
        for c in u_vec.iter_mut().rev() {
            *c += 1;
            if *c < qs {
                break;
            }
            *c = 0;
        }
    }

    let expected = conn.len();
    if let Some(v) = (0..n).find(|&v| g.degree(v) != expected) {
        return Err(GraphError::Regularity {
            family: g.family().name(),
            detail: format!("vertex {v} has degree {}, connection set has {expected} elements", g.degree(v)),
        });
    }
    Ok(g)
}
