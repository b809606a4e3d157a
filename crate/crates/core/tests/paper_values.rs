//! Finite statements quoted from the source text, checked on the smallest
//! instances that exercise them.

use fqgraph::combinat::{count_triangles, explicit_constants, ramsey_witness, spectral_bounds, RamseyOptions};
use fqgraph::ffield::FieldElem;
use fqgraph::graphs::{
    alon_split, build_alon_graph, build_code_graph, build_euclidean, build_halfplane, class_count, nonisotropic_points,
    OrthoFamily,
};
use fqgraph::spectral::{certify, certify_cayley};
use fqgraph::{ext_field, field_of_order, make_form, FormKind};

fn all_vectors(q: u32, dim: usize) -> Vec<Vec<u32>> {
    (0..q.pow(dim as u32))
        .map(|mut i| {
            (0..dim)
                .map(|_| {
                    let c = i % q;
                    i /= q;
                    c
                })
                .collect()
        })
        .collect()
}

#[test]
fn catalogue_forms_have_the_stated_shapes() {
    // "2x₁x₂ + …", "x_{2m−1}² − αx_{2m}²", "2x₁x₂ + … + x_{2m+1}²".
    let cases: [(u64, FormKind, usize, fn(&[i64]) -> i64); 3] = [
        (3, FormKind::PlusEven, 2, |x| 2 * x[0] * x[1]),
        (3, FormKind::MinusEven, 2, |x| x[0] * x[0] - 2 * x[1] * x[1]),
        (5, FormKind::OddStd, 3, |x| 2 * x[0] * x[1] + x[2] * x[2]),
    ];
    for (q, kind, dim, expected) in cases {
        let form = make_form(field_of_order(q).unwrap(), kind, dim).unwrap();
        for v in all_vectors(q as u32, dim) {
            let x: Vec<FieldElem> = v.iter().map(|&c| FieldElem(c)).collect();
            let ints: Vec<i64> = v.iter().map(|&c| c as i64).collect();
            assert_eq!(form.eval_unchecked(&x).0 as i64, expected(&ints).rem_euclid(q as i64), "{kind} at {v:?}");
        }
    }
}

#[test]
fn nonisotropic_class_sizes() {
    let sizes = |q: u64, family: OrthoFamily, m: usize| {
        let form = make_form(field_of_order(q).unwrap(), family.form_kind(), family.dim(m)).unwrap();
        let c = nonisotropic_points(&form, 1 << 16).unwrap();
        let mut s = [c.square.len() as u64, c.nonsquare.len() as u64];
        s.sort_unstable();
        s
    };
    // (q^{2m} ∓ q^m)/2 in odd dimension, (q^{2m−1} ∓ q^{m−1})/2 in even dimension.
    assert_eq!(sizes(3, OrthoFamily::OddTheta, 1), [3, 6]);
    assert_eq!(sizes(5, OrthoFamily::OddTheta, 1), [10, 15]);
    assert_eq!(sizes(3, OrthoFamily::EvenPlus, 2), [12, 12]);
    assert_eq!(class_count(OrthoFamily::OddTheta, 5, 1), 10);
    assert_eq!(class_count(OrthoFamily::OddOmega, 5, 1), 15);
    assert_eq!(class_count(OrthoFamily::EvenPlus, 3, 2), 12);
}

#[test]
fn four_sigma_gives_disjoint_edges() {
    for q in [3u64, 5, 7] {
        let f = field_of_order(q).unwrap();
        let sigma = f.primitive_element();
        let ext = ext_field(f.clone(), sigma).unwrap();
        let g = build_halfplane(&ext, f.mul(f.from_int(4), sigma)).unwrap();
        assert_eq!(g.n() as u64, q * q - q);
        assert_eq!(g.edge_count() as u64, (q * q - q) / 2);
        assert_eq!(g.regular_degree(), Some(1));
    }
}

#[test]
fn halfplane_triple_at_five() {
    // "(q²−q, q+1, 2q^{1/2})-regular"
    let f = field_of_order(5).unwrap();
    let ext = ext_field(f.clone(), f.primitive_element()).unwrap();
    let c = certify(&build_halfplane(&ext, FieldElem(1)).unwrap()).unwrap();
    assert_eq!((c.n, c.d), (20, 6));
    assert!(c.lambda <= 2.0 * 5f64.sqrt() + 1e-6);
}

#[test]
fn code_graph_parameters() {
    // "d_k = 2^k − 1 … on n_k = 2^{2k}", "G_k is triangle-free".
    for k in 2..=4u32 {
        let g = build_code_graph(k).unwrap();
        assert_eq!(g.n(), 1 << (2 * k));
        assert_eq!(g.regular_degree(), Some((1 << k) - 1));
        assert_eq!(count_triangles(&g), 0);
    }
}

#[test]
fn alon_graph_parameters() {
    // "|W₀| = 2^{k−1} − 1 and |W₁| = 2^{k−1}", "d_n = 2^{k−1}(2^{k−1}−1)".
    let s = alon_split(2).unwrap();
    assert_eq!((s.w0.len(), s.w1.len()), (1, 2));
    let g = build_alon_graph(2).unwrap();
    assert_eq!((g.n(), g.regular_degree()), (64, Some(2)));
    let s = alon_split(4).unwrap();
    assert_eq!((s.w0.len(), s.w1.len()), (7, 8));
    let g = build_alon_graph(4).unwrap();
    assert_eq!((g.n(), g.regular_degree()), (4096, Some(56)));
    assert_eq!(count_triangles(&g), 0);
}

#[test]
fn planar_triangle_counts() {
    // Measured: the plus plane is triangle-free exactly when −3 is a
    // non-square, the minus plane exactly when −3 is a square. The literal
    // statement keys on 3 instead and disagrees at q = 7 and q = 11.
    let expected = [(5u64, 0u64, 50u64), (7, 98, 0), (11, 0, 484), (13, 676, 0)];
    for (q, plus, minus) in expected {
        let f = field_of_order(q).unwrap();
        for (kind, count) in [(FormKind::PlusEven, plus), (FormKind::MinusEven, minus)] {
            let form = make_form(f.clone(), kind, 2).unwrap();
            for a in f.nonzero() {
                assert_eq!(count_triangles(&build_euclidean(&form, a).unwrap()), count, "q={q} {kind} a={}", a.0);
            }
        }
    }
}

#[test]
fn explicit_bound_constants_stay_below_four() {
    // "α(G) ≤ (4+o(1))|V(G)|^{(n+1)/2n}", "χ(G) ≥ |V(G)|^{(n−1)/2n}/(4+o(1))"
    for q in [5u64, 7, 9, 11, 13] {
        for dim in 2..=3usize {
            let form = make_form(field_of_order(q).unwrap(), FormKind::classified(true, dim)[0], dim).unwrap();
            let cert = certify_cayley(&form, FieldElem(1)).unwrap();
            let c = explicit_constants(&spectral_bounds(&cert).unwrap(), dim as u32);
            assert!(c.alpha_constant <= 4.0 && c.chi_constant <= 4.0, "q={q} dim={dim}: {c:?}");
        }
    }
}

#[test]
fn chromatic_number_exceeds_the_quarter_power_at_five() {
    // "chromatic number exceeds 0.5n_q^{1/4}"
    let w = ramsey_witness(5, 1, RamseyOptions { exact_alpha: true, exact_chi: true, ..RamseyOptions::default() }).unwrap();
    assert!(w.is_valid());
    assert_eq!(w.n, 25);
    assert!(w.chi_exact.unwrap() as f64 > w.chi_claim);
    assert!(w.chi_exact.unwrap() as f64 >= w.chi_lower);
}
