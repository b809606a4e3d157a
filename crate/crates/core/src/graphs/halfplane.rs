use serde::{Deserialize, Serialize};

use crate::ffield::{ExtCtx, ExtElem, FieldElem};

use super::{check_ceiling, FamilyTag, Graph, GraphError, Label, DEFAULT_VERTEX_CEILING};

/// `x + y√σ` with `y ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: FieldElem,
    pub y: FieldElem,
}

impl HalfPlanePoint {
    pub fn as_ext(self) -> ExtElem {
        ExtElem::new(self.x, self.y)
    }
}

/// All `q(q − 1)` points in lexicographic `(x, y)` order; the position in
/// this list is the vertex index.
pub fn halfplane_points(ext: &ExtCtx) -> Vec<HalfPlanePoint> {
    let f = ext.base();
    f.elements().flat_map(|x| f.nonzero().map(move |y| HalfPlanePoint { x, y })).collect()
}

/// `N(z − w) / (Im z · Im w)`.
pub fn poincare_distance(ext: &ExtCtx, z: HalfPlanePoint, w: HalfPlanePoint) -> FieldElem {
    let f = ext.base();
    let num = ext.norm(ext.sub(z.as_ext(), w.as_ext()));
    f.div(num, f.mul(z.y, w.y)).expect("half-plane points have nonzero imaginary part")
}

pub fn build_halfplane(ext: &ExtCtx, a: FieldElem) -> Result<Graph, GraphError> {
    build_halfplane_with_ceiling(ext, a, DEFAULT_VERTEX_CEILING)
}

/// `V_q(σ, a)`: `z ~ w` iff `z ≠ w` and `d(z, w) = a`. Degrees are audited:
/// `q + 1` in general, 1 at `a = 4σ`, 0 at `a = 0`.
pub fn build_halfplane_with_ceiling(ext: &ExtCtx, a: FieldElem, ceiling: usize) -> Result<Graph, GraphError> {
    let f = ext.base();
    let q = f.q();
    if a.index() >= q as usize {
        return Err(GraphError::Parameter(format!("a = {} is not an element of GF({q})", a.0)));
    }
    check_ceiling(q as u128 * (q as u128 - 1), ceiling)?;
    let pts = halfplane_points(ext);
    let four_sigma = f.mul(f.from_int(4), ext.sigma());
    let labels = pts.iter().map(|p| Label::Vector(vec![p.x.0, p.y.0])).collect();
    let family = FamilyTag::Halfplane { q, sigma: ext.sigma().0, a: a.0, four_sigma: four_sigma.0 };
    let mut g = Graph::empty(labels, family);
    for (u, &z) in pts.iter().enumerate() {
        for (v, &w) in pts.iter().enumerate().skip(u + 1) {
            if poincare_distance(ext, z, w) == a {
                g.set_edge(u, v);
            }
        }
    }

    let expected = if a.is_zero() {
        0
    } else if a == four_sigma {
        1
    } else {
        q as usize + 1
    };
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != expected) {
        return Err(GraphError::Regularity {
            family: g.family().name(),
            detail: format!("vertex {v} has degree {}, expected {expected}", g.degree(v)),
        });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{ext_field, make_field};

    fn ext(p: u64, r: u32) -> ExtCtx {
        let f = make_field(p, r).unwrap();
        let sigma = f.primitive_element();
        ext_field(f, sigma).unwrap()
    }

    #[test]
    fn gf3_distance_one_is_four_regular() {
        let e = ext(3, 1);
        assert_eq!(e.sigma(), FieldElem(2));
        let g = build_halfplane(&e, FieldElem(1)).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.regular_degree(), Some(4));
    }

    #[test]
    fn generic_distances_give_q_plus_one_regular_graphs() {
        for (p, r) in [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)] {
            let e = ext(p, r);
            let f = e.base().clone();
            let four_sigma = f.mul(f.from_int(4), e.sigma());
            for a in f.nonzero().filter(|&a| a != four_sigma) {
                let g = build_halfplane(&e, a).unwrap();
                assert_eq!(g.regular_degree(), Some(f.q() as usize + 1), "q={} a={a}", f.q());
            }
        }
    }

    #[test]
    fn four_sigma_is_a_perfect_matching() {
        for p in [3, 5, 7] {
            let e = ext(p, 1);
            let f = e.base().clone();
            let g = build_halfplane(&e, f.mul(f.from_int(4), e.sigma())).unwrap();
            let q = p as usize;
            assert_eq!(g.edge_count(), (q * q - q) / 2);
            assert_eq!(g.regular_degree(), Some(1));
        }
    }

    #[test]
    fn distance_is_invariant_under_translation_and_square_dilation() {
        let e = ext(7, 1);
        let f = e.base().clone();
        let pts = halfplane_points(&e);
        for c in f.elements() {
            for t in f.nonzero() {
                let t2 = f.mul(t, t);
                let map = |p: HalfPlanePoint| HalfPlanePoint { x: f.add(f.mul(t2, p.x), c), y: f.mul(t2, p.y) };
                for &z in pts.iter().step_by(5) {
                    for &w in pts.iter().step_by(3) {
                        assert_eq!(poincare_distance(&e, map(z), map(w)), poincare_distance(&e, z, w));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_distance_gives_the_empty_graph() {
        let g = build_halfplane(&ext(5, 1), FieldElem::ZERO).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.n(), 20);
    }
}
