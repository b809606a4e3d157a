//! Graphs on non-isotropic projective points of an orthogonal geometry.
//!
//! Edge relations are stated on representatives. A pair of points `[x], [y]`
//! is joined when some rescaling `x' = t·x`, `y' = s·y` meets the stated
//! values of `Q(x')`, `Q(y')` and the bilinear value. Writing `h = x S yᵗ`
//! (with `x S xᵗ = Q(x)`), every such condition depends only on the
//! scaling-invariant ratio `h² / (Q(x) Q(y))`, plus the requirement that the
//! stated `Q(x')` lies in the square class of `Q(x)`. The builder evaluates
//! exactly that; the unit tests compare it with a literal scan over `t, s`.

use serde::{Deserialize, Serialize};

use crate::ffield::{FieldCtx, FieldElem};
use crate::qforms::{next_vector, FormKind, QuadraticForm};

use super::{check_ceiling, FamilyTag, Graph, GraphError, Label, DEFAULT_VERTEX_CEILING};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthoFamily {
    /// `H_q(O_{2m+1}, Θ, i)`: Gram-matrix relations, vertices of non-square type.
    OddTheta,
    /// `H_q(O_{2m+1}, Ω, i)`: `Q(x + y)` relations with `Q(x) = 1`.
    OddOmega,
    /// `H_q(O⁺_{2m}, Ω₁, i)`: bilinear relations with `Q(x) = 1`.
    EvenPlus,
    /// `H_q(O⁻_{2m}, Θ₁, i)`: bilinear relations with `Q(x) = 1`.
    EvenMinus,
}

impl OrthoFamily {
    pub const ALL: [OrthoFamily; 4] =
        [OrthoFamily::OddTheta, OrthoFamily::OddOmega, OrthoFamily::EvenPlus, OrthoFamily::EvenMinus];

    pub fn name(self) -> &'static str {
        match self {
            OrthoFamily::OddTheta => "odd_theta",
            OrthoFamily::OddOmega => "odd_omega",
            OrthoFamily::EvenPlus => "even_plus",
            OrthoFamily::EvenMinus => "even_minus",
        }
    }

    pub fn form_kind(self) -> FormKind {
        match self {
            OrthoFamily::OddTheta | OrthoFamily::OddOmega => FormKind::OddStd,
            OrthoFamily::EvenPlus => FormKind::PlusEven,
            OrthoFamily::EvenMinus => FormKind::MinusEven,
        }
    }

    pub fn is_odd_dim(self) -> bool {
        matches!(self, OrthoFamily::OddTheta | OrthoFamily::OddOmega)
    }

    pub fn dim(self, m: usize) -> usize {
        if self.is_odd_dim() {
            2 * m + 1
        } else {
            2 * m
        }
    }

    /// Whether the vertex class is the square-type class.
    pub fn uses_square_class(self) -> bool {
        self != OrthoFamily::OddTheta
    }

    /// Relations are indexed `1..=(q + 1) / 2`.
    pub fn relation_count(q: u32) -> u32 {
        q.div_ceil(2)
    }

    pub fn lambda_bound(self, q: u32, m: usize) -> f64 {
        let e = if self.is_odd_dim() { 2.0 * m as f64 - 1.0 } else { 2.0 * m as f64 - 2.0 };
        2.0 * (q as f64).powf(e / 2.0)
    }

    /// The valencies the theorem allows for relation `i`.
    pub fn expected_valencies(self, q: u32, m: usize, i: u32) -> Vec<u64> {
        let q = q as u64;
        let m = m as u32;
        let top = if self.is_odd_dim() { q.pow(2 * m - 1) } else { q.pow(2 * m - 2) };
        let low = q.pow(m - 1);
        let mut v = vec![top.saturating_sub(low), top + low];
        if i == OrthoFamily::relation_count(q as u32) {
            v.iter_mut().for_each(|x| *x /= 2);
        }
        v.dedup();
        v
    }
}

impl std::str::FromStr for OrthoFamily {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OrthoFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GraphError::Parameter(format!("unknown orthogonal family '{s}'")))
    }
}

/// Expected size of the vertex class of `family`.
pub fn class_count(family: OrthoFamily, q: u32, m: usize) -> u64 {
    let q = q as u64;
    let m = m as u32;
    match family {
        OrthoFamily::OddTheta => (q.pow(2 * m) - q.pow(m)) / 2,
        OrthoFamily::OddOmega => (q.pow(2 * m) + q.pow(m)) / 2,
        OrthoFamily::EvenPlus => (q.pow(2 * m - 1) - q.pow(m - 1)) / 2,
        OrthoFamily::EvenMinus => (q.pow(2 * m - 1) + q.pow(m - 1)) / 2,
    }
}

/// A 1-dimensional subspace, represented with first nonzero coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjPoint {
    pub rep: Vec<FieldElem>,
    /// `Q(rep)`, never zero.
    pub value: FieldElem,
    pub square: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonIsotropicClasses {
    pub square: Vec<ProjPoint>,
    pub nonsquare: Vec<ProjPoint>,
}

/// Non-isotropic points split by the quadratic character of `Q`, each class
/// in lexicographic order of representatives.
pub fn nonisotropic_points(form: &QuadraticForm, ceiling: usize) -> Result<NonIsotropicClasses, GraphError> {
    let f = form.ctx();
    if !f.is_odd() {
        return Err(GraphError::Parameter("square types need odd q".into()));
    }
    let q = f.q();
    let dim = form.dim();
    check_ceiling(((q as u128).pow(dim as u32) - 1) / (q as u128 - 1), ceiling)?;
    let mut classes = NonIsotropicClasses { square: Vec::new(), nonsquare: Vec::new() };
    // Representatives: a 1 in position `lead`, zeros before, anything after.
    for lead in 0..dim {
        let mut tail = vec![FieldElem::ZERO; dim - lead - 1];
        loop {
            let mut rep = vec![FieldElem::ZERO; lead];
            rep.push(FieldElem::ONE);
            rep.extend_from_slice(&tail);
            let value = form.eval_unchecked(&rep);
            if !value.is_zero() {
                let square = f.is_square(value);
                let p = ProjPoint { rep, value, square };
                if square {
                    classes.square.push(p);
                } else {
                    classes.nonsquare.push(p);
                }
            }
            if !next_vector(&mut tail, q) {
                break;
            }
        }
    }
    classes.square.sort_by(|a, b| a.rep.cmp(&b.rep));
    classes.nonsquare.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok(classes)
}

/// Build-time audit attached to an orthogonal graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthoReport {
    pub q: u32,
    pub m: usize,
    pub family: OrthoFamily,
    pub i: u32,
    /// `"square"` or `"nonsquare"`.
    pub vertex_class: String,
    pub class_size: usize,
    pub expected_class_size: u64,
    /// Target value of `h² / (Q(x) Q(y))` for this relation.
    pub invariant: u32,
    /// True when the relation joins points spanning a degenerate plane.
    pub tangent: bool,
    pub expected_valencies: Vec<u64>,
    pub observed_valency: Option<usize>,
    pub regular: bool,
    /// The relation's stated `Q` values share the class's quadratic character.
    pub admissible: bool,
    /// Admissible and regular with a valency from the stated set.
    pub convention_ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrthoOptions {
    pub ceiling: usize,
    /// Place the family on the opposite square class. Negative control for
    /// the convention audit.
    pub swap_classes: bool,
}

impl Default for OrthoOptions {
    fn default() -> Self {
        OrthoOptions { ceiling: DEFAULT_VERTEX_CEILING, swap_classes: false }
    }
}

pub fn build_orthogonal(form: &QuadraticForm, family: OrthoFamily, i: u32) -> Result<Graph, GraphError> {
    build_orthogonal_with(form, family, i, OrthoOptions::default())
}

/// Stated values `(Q(x'), Q(y'), h')` for relation `i`, with `h' = x' S y'ᵗ`.
fn relation_targets(f: &FieldCtx, family: OrthoFamily, i: u32) -> (FieldElem, FieldElem, FieldElem) {
    let last = OrthoFamily::relation_count(f.q());
    let nu = f.primitive_element();
    let one = FieldElem::ONE;
    let half = f.inv(f.from_int(2)).expect("q is odd");
    match family {
        OrthoFamily::OddTheta => {
            if i == last {
                (nu, nu, FieldElem::ZERO)
            } else if i == 1 {
                (nu, f.primitive_pow(-1), one)
            } else {
                (nu, f.primitive_pow(2 * i as i64 - 3), one)
            }
        }
        OrthoFamily::OddOmega => {
            // Q(x' + y') = 2 + 2h' when Q(x') = Q(y') = 1.
            let sum = if i == 1 {
                FieldElem::ZERO
            } else if i == last {
                f.from_int(2)
            } else {
                f.add(f.from_int(2), f.mul(f.from_int(2), f.primitive_pow(-(i as i64 - 1))))
            };
            (one, one, f.mul(f.sub(sum, f.from_int(2)), half))
        }
        OrthoFamily::EvenPlus | OrthoFamily::EvenMinus => {
            // ⟨x', y'⟩ = 2h'.
            let b = if i == last { FieldElem::ZERO } else { f.mul(half, f.primitive_pow(i as i64)) };
            (one, one, f.mul(b, half))
        }
    }
}

pub fn build_orthogonal_with(
    form: &QuadraticForm,
    family: OrthoFamily,
    i: u32,
    opts: OrthoOptions,
) -> Result<Graph, GraphError> {
    let f = form.ctx().clone();
    let q = f.q();
    if !f.is_odd() {
        return Err(GraphError::Parameter("orthogonal families need odd q".into()));
    }
    if form.kind() != Some(family.form_kind()) {
        return Err(GraphError::Parameter(format!(
            "{} is defined on the {} form",
            family.name(),
            family.form_kind()
        )));
    }
    let dim = form.dim();
    let m = if family.is_odd_dim() { (dim - 1) / 2 } else { dim / 2 };
    if m == 0 {
        return Err(GraphError::Parameter("m must be at least 1".into()));
    }
    let last = OrthoFamily::relation_count(q);
    if i == 0 || i > last {
        return Err(GraphError::Parameter(format!("relation index {i} outside 1..={last}")));
    }

    let classes = nonisotropic_points(form, opts.ceiling)?;
    let use_square = family.uses_square_class() != opts.swap_classes;
    let vertices = if use_square { classes.square } else { classes.nonsquare };
    let expected_class_size = class_count(family, q, m);
    if vertices.len() as u64 != expected_class_size {
        return Err(GraphError::ConventionMismatch {
            detail: format!(
                "{} on the {} class has {} points, expected {expected_class_size}",
                family.name(),
                if use_square { "square" } else { "nonsquare" },
                vertices.len()
            ),
        });
    }
    if vertices.is_empty() {
        return Err(GraphError::EmptyClass(family.name().into()));
    }

    let (tx, ty, th) = relation_targets(&f, family, i);
    // Invariant of the stated configuration; defined because tx, ty ≠ 0.
    let invariant = f.div(f.mul(th, th), f.mul(tx, ty))?;
    // The rescaling exists only if the stated Q values share the class's character.
    let class_char = f.is_square(vertices[0].value);
    let admissible = f.is_square(tx) == class_char && f.is_square(ty) == class_char;

    let gram = form.gram_matrix()?;
    let labels = vertices.iter().map(|p| Label::Vector(p.rep.iter().map(|c| c.0).collect())).collect();
    let mut g = Graph::empty(labels, FamilyTag::Custom { name: String::new() });
    if admissible {
        let n = vertices.len();
        let s_rows: Vec<Vec<FieldElem>> = vertices
            .iter()
            .map(|p| (0..dim).map(|c| gram.entries().iter().zip(&p.rep).fold(FieldElem::ZERO, |acc, (row, &x)| f.add(acc, f.mul(x, row[c])))).collect())
            .collect();
        let inv_values: Vec<FieldElem> = vertices.iter().map(|p| f.inv(p.value).expect("non-isotropic")).collect();
        for u in 0..n {
            for v in u + 1..n {
                let h = s_rows[u].iter().zip(&vertices[v].rep).fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                let ratio = f.mul(f.mul(h, h), f.mul(inv_values[u], inv_values[v]));
                if ratio == invariant {
                    g.set_edge(u, v);
                }
            }
        }
    }

    let observed = g.regular_degree();
    let expected_valencies = family.expected_valencies(q, m, i);
    let report = OrthoReport {
        q,
        m,
        family,
        i,
        vertex_class: if use_square { "square" } else { "nonsquare" }.into(),
        class_size: vertices.len(),
        expected_class_size,
        invariant: invariant.0,
        tangent: invariant == FieldElem::ONE,
        admissible,
        convention_ok: admissible && observed.is_some_and(|d| expected_valencies.contains(&(d as u64))),
        expected_valencies,
        observed_valency: observed,
        regular: observed.is_some(),
    };
    g.set_family(FamilyTag::Orthogonal(report));
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use crate::qforms::make_form;

    fn form_for(q: u64, family: OrthoFamily, m: usize) -> QuadraticForm {
        make_form(make_field(q, 1).unwrap(), family.form_kind(), family.dim(m)).unwrap()
    }

    fn report(g: &Graph) -> &OrthoReport {
        match g.family() {
            FamilyTag::Orthogonal(r) => r,
            other => panic!("unexpected tag {other:?}"),
        }
    }

    #[test]
    fn class_sizes_match_the_formulas() {
        for q in [3, 5, 7] {
            for family in OrthoFamily::ALL {
                for m in 1..=2 {
                    if q == 7 && m == 2 && family.is_odd_dim() {
                        continue;
                    }
                    let form = form_for(q, family, m);
                    let c = nonisotropic_points(&form, 1 << 16).unwrap();
                    let (mine, other) = if family.uses_square_class() { (&c.square, &c.nonsquare) } else { (&c.nonsquare, &c.square) };
                    assert_eq!(mine.len() as u64, class_count(family, q as u32, m), "{family:?} q={q} m={m}");
                    let points = ((q as usize).pow(family.dim(m) as u32) - 1) / (q as usize - 1);
                    assert!(mine.len() + other.len() <= points);
                    assert!(mine.iter().all(|p| !p.value.is_zero() && p.rep.iter().find(|c| !c.is_zero()) == Some(&FieldElem::ONE)));
                }
            }
        }
        let c = nonisotropic_points(&form_for(3, OrthoFamily::OddOmega, 1), 1 << 16).unwrap();
        assert_eq!((c.nonsquare.len(), c.square.len()), (3, 6));
        let c = nonisotropic_points(&form_for(3, OrthoFamily::EvenPlus, 2), 1 << 16).unwrap();
        assert_eq!((c.nonsquare.len(), c.square.len()), (12, 12));
    }

    /// Literal existential check: scan all `t, s` for the stated triple.
    fn scaled_relation_holds(form: &QuadraticForm, family: OrthoFamily, i: u32, x: &[FieldElem], y: &[FieldElem]) -> bool {
        let f = form.ctx();
        let gram = form.gram_matrix().unwrap();
        let (tx, ty, th) = relation_targets(f, family, i);
        f.nonzero().any(|t| {
            let xs: Vec<_> = x.iter().map(|&c| f.mul(t, c)).collect();
            f.nonzero().any(|s| {
                let ys: Vec<_> = y.iter().map(|&c| f.mul(s, c)).collect();
                let sum: Vec<_> = xs.iter().zip(&ys).map(|(&a, &b)| f.add(a, b)).collect();
                let (qx, qy) = (form.eval_unchecked(&xs), form.eval_unchecked(&ys));
                if qx != tx || qy != ty {
                    return false;
                }
                match family {
                    OrthoFamily::OddTheta => gram.apply(&xs, &ys) == th,
                    OrthoFamily::OddOmega => form.eval_unchecked(&sum) == f.add(f.from_int(2), f.mul(f.from_int(2), th)),
                    _ => form.bilinear_unchecked(&xs, &ys) == f.mul(f.from_int(2), th),
                }
            })
        })
    }

    #[test]
    fn invariant_edges_match_literal_scaling_scan() {
        for (q, m) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            for family in OrthoFamily::ALL {
                let form = form_for(q, family, m);
                for i in 1..=OrthoFamily::relation_count(q as u32) {
                    let g = build_orthogonal(&form, family, i).unwrap();
                    let reps: Vec<Vec<FieldElem>> = g
                        .labels()
                        .iter()
                        .map(|l| match l {
                            Label::Vector(v) => v.iter().map(|&c| FieldElem(c)).collect(),
                            _ => unreachable!(),
                        })
                        .collect();
                    for u in 0..g.n() {
                        for v in 0..g.n() {
                            if u != v {
                                assert_eq!(
                                    g.has_edge(u, v),
                                    scaled_relation_holds(&form, family, i, &reps[u], &reps[v]),
                                    "{family:?} q={q} m={m} i={i} ({u},{v})"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relations_partition_all_pairs() {
        let q = 5;
        for family in OrthoFamily::ALL {
            let form = form_for(q, family, 1);
            let graphs: Vec<Graph> =
                (1..=3).map(|i| build_orthogonal(&form, family, i).unwrap()).collect();
            let n = graphs[0].n();
            for u in 0..n {
                for v in u + 1..n {
                    assert!(graphs.iter().filter(|g| g.has_edge(u, v)).count() <= 1);
                }
            }
            let total: usize = graphs.iter().map(Graph::edge_count).sum();
            assert_eq!(total, n * (n - 1) / 2, "{family:?}");
        }
    }

    #[test]
    fn observed_valencies_at_q5() {
        let expect = [
            (OrthoFamily::OddTheta, [0, 6, 3]),
            (OrthoFamily::OddOmega, [8, 4, 2]),
        ];
        for (family, degrees) in expect {
            let form = form_for(5, family, 1);
            for (i, &d) in (1..=3).zip(degrees.iter()) {
                let g = build_orthogonal(&form, family, i).unwrap();
                assert_eq!(g.regular_degree(), Some(d), "{family:?} i={i}");
            }
        }
    }

    #[test]
    fn tangent_relation_is_flagged() {
        let form = form_for(5, OrthoFamily::OddTheta, 1);
        let g = build_orthogonal(&form, OrthoFamily::OddTheta, 1).unwrap();
        let r = report(&g);
        assert!(r.tangent);
        assert!(!r.convention_ok);
        let g = build_orthogonal(&form, OrthoFamily::OddTheta, 2).unwrap();
        assert!(report(&g).convention_ok);
    }

    #[test]
    fn swapped_classes_are_rejected_or_flagged() {
        let form = form_for(5, OrthoFamily::OddTheta, 1);
        let opts = OrthoOptions { swap_classes: true, ..OrthoOptions::default() };
        let err = build_orthogonal_with(&form, OrthoFamily::OddTheta, 2, opts).unwrap_err();
        assert!(matches!(err, GraphError::ConventionMismatch { .. }));

        let form = form_for(5, OrthoFamily::EvenMinus, 2);
        let g = build_orthogonal_with(&form, OrthoFamily::EvenMinus, 3, opts).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(!report(&g).convention_ok);

        // At m = 1 the stated valency set contains 0, so only the character
        // test can see the swap.
        for family in [OrthoFamily::EvenPlus, OrthoFamily::EvenMinus] {
            let form = form_for(7, family, 1);
            for i in 1..=4 {
                let g = build_orthogonal_with(&form, family, i, opts).unwrap();
                let r = report(&g);
                assert!(r.expected_valencies.contains(&0) && !r.admissible && !r.convention_ok);
                assert!(report(&build_orthogonal(&form, family, i).unwrap()).admissible);
            }
        }
    }

    #[test]
    fn parameter_errors() {
        let form = form_for(5, OrthoFamily::EvenPlus, 1);
        assert!(build_orthogonal(&form, OrthoFamily::OddTheta, 1).is_err());
        assert!(build_orthogonal(&form, OrthoFamily::EvenPlus, 4).is_err());
        assert!(build_orthogonal(&form, OrthoFamily::EvenPlus, 0).is_err());
    }
}
