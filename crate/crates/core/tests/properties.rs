//! Property tests for the invariants every module promises.

use std::collections::BTreeSet;
use std::time::Duration;

use proptest::prelude::*;

use fqgraph::combinat::{chromatic_exact, count_triangles, independence_exact, spectral_bounds, SearchBudget, SearchOutcome};
use fqgraph::distance::{distance_set_any, PointSet, SpaceSpec};
use fqgraph::ffield::{ExtElem, FieldElem};
use fqgraph::graphs::{build_euclidean, build_halfplane, Graph};
use fqgraph::spectral::{certify, edge_bound_check, mixing_check, spectrum_charsum, spectrum_dense};
use fqgraph::{ext_field, field_of_order, make_form, FormKind};

const ORDERS: [u64; 10] = [3, 4, 5, 7, 8, 9, 13, 25, 27, 49];
const ODD_ORDERS: [u64; 6] = [3, 5, 7, 9, 11, 13];

fn budget() -> SearchBudget {
    SearchBudget::new(5_000_000, Duration::from_secs(30))
}

fn vector(q: u64, dim: usize, seed: &[u64]) -> Vec<FieldElem> {
    (0..dim).map(|i| FieldElem((seed[i % seed.len()].wrapping_mul(i as u64 + 7) % q) as u32)).collect()
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (1usize..=11).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::custom(n, &edges, "random").unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(qi in 0usize..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = ORDERS[qi];
        let f = field_of_order(q).unwrap();
        let [a, b, c] = [a, b, c].map(|x| FieldElem(x % q as u32));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
        }
    }

    #[test]
    fn squares_match_enumeration(qi in 0usize..ORDERS.len(), a in any::<u32>()) {
        let q = ORDERS[qi];
        let f = field_of_order(q).unwrap();
        let a = FieldElem(a % q as u32);
        let by_search = f.elements().any(|x| f.mul(x, x) == a);
        prop_assert_eq!(f.is_square(a), by_search);
    }

    #[test]
    fn primitive_element_has_full_order(qi in 0usize..ORDERS.len()) {
        let f = field_of_order(ORDERS[qi]).unwrap();
        let g = f.primitive_element();
        let mut x = g;
        let mut order = 1u64;
        while x != FieldElem::ONE {
            x = f.mul(x, g);
            order += 1;
        }
        prop_assert_eq!(order, f.q() as u64 - 1);
    }

    #[test]
    fn norm_is_multiplicative(qi in 0usize..ODD_ORDERS.len(), z in any::<[u32; 4]>()) {
        let f = field_of_order(ODD_ORDERS[qi]).unwrap();
        let q = f.q();
        let ext = ext_field(f.clone(), f.primitive_element()).unwrap();
        let z1 = ExtElem { re: FieldElem(z[0] % q), im: FieldElem(z[1] % q) };
        let z2 = ExtElem { re: FieldElem(z[2] % q), im: FieldElem(z[3] % q) };
        prop_assert_eq!(ext.norm(ext.mul(z1, z2)), f.mul(ext.norm(z1), ext.norm(z2)));
        prop_assert_eq!(ext.norm(z1).is_zero(), z1.re.is_zero() && z1.im.is_zero());
        let direct = f.sub(f.mul(z1.re, z1.re), f.mul(ext.sigma(), f.mul(z1.im, z1.im)));
        prop_assert_eq!(ext.norm(z1), direct);
        prop_assert_eq!(ext.mul(z1, ext.conj(z1)), ExtElem { re: direct, im: FieldElem::ZERO });
    }

    #[test]
    fn forms_are_quadratic(qi in 0usize..ODD_ORDERS.len(), dim in 2usize..=4, ki in 0usize..2, t in any::<u32>(), seed in any::<[u64; 3]>()) {
        let q = ODD_ORDERS[qi];
        let f = field_of_order(q).unwrap();
        let kinds = FormKind::classified(true, dim);
        let form = make_form(f.clone(), kinds[ki % kinds.len()], dim).unwrap();
        let gram = form.gram_matrix().unwrap();
        let x = vector(q, dim, &seed);
        let y = vector(q, dim, &[seed[2], seed[0], seed[1]]);
        let t = FieldElem(t % q as u32);
        let tx: Vec<_> = x.iter().map(|&c| f.mul(t, c)).collect();
        prop_assert_eq!(form.eval_unchecked(&tx), f.mul(f.mul(t, t), form.eval_unchecked(&x)));
        prop_assert_eq!(gram.apply(&x, &x), form.eval_unchecked(&x));
        prop_assert_eq!(gram.apply(&x, &y), gram.apply(&y, &x));
        prop_assert_eq!(gram.rank(), dim);
        let sum: Vec<_> = x.iter().zip(&y).map(|(&a, &b)| f.add(a, b)).collect();
        let polar = f.sub(f.sub(form.eval_unchecked(&sum), form.eval_unchecked(&x)), form.eval_unchecked(&y));
        prop_assert_eq!(polar, f.add(gram.apply(&x, &y), gram.apply(&x, &y)));
    }

    #[test]
    fn euclidean_graphs_are_regular_cayley_graphs(qi in 0usize..4, dim in 2usize..=3, ki in 0usize..2, a in 1u32..13) {
        let q = ODD_ORDERS[qi];
        let f = field_of_order(q).unwrap();
        let kinds = FormKind::classified(true, dim);
        let form = make_form(f, kinds[ki % kinds.len()], dim).unwrap();
        let a = FieldElem(1 + (a - 1) % (q as u32 - 1));
        let g = build_euclidean(&form, a).unwrap();
        let k = g.regular_degree();
        prop_assert!(g.is_symmetric() && !g.has_loops() && k.is_some());
        prop_assert_eq!(g.edge_count(), g.n() * k.unwrap() / 2);
        prop_assert_eq!(k.unwrap() as u64, form.sphere_size(a).unwrap());
        prop_assert_eq!(build_euclidean(&form, a).unwrap(), g);
    }

    #[test]
    fn trace_identities(qi in 0usize..4, ki in 0usize..2, a in 1u32..9) {
        let q = ODD_ORDERS[qi];
        let form = make_form(field_of_order(q).unwrap(), FormKind::classified(true, 2)[ki], 2).unwrap();
        let a = FieldElem(1 + (a - 1) % (q as u32 - 1));
        let g = build_euclidean(&form, a).unwrap();
        let d = g.regular_degree().unwrap() as f64;
        let n = g.n() as f64;
        for s in [spectrum_dense(&g).unwrap(), spectrum_charsum(&form, a).unwrap()] {
            let sum: f64 = s.eigenvalues.iter().sum();
            let squares: f64 = s.eigenvalues.iter().map(|x| x * x).sum();
            prop_assert!(sum.abs() <= 1e-6 * n);
            prop_assert!((squares - d * n).abs() <= 1e-6 * n);
            prop_assert!((s.eigenvalues[0] - d).abs() <= 1e-6);
        }
    }

    #[test]
    fn mixing_inequalities_hold(qi in 0usize..3, a in 1u32..7, b in proptest::collection::btree_set(0usize..42, 1..30), c in proptest::collection::btree_set(0usize..42, 1..30)) {
        let q = [3u64, 5, 7][qi];
        let f = field_of_order(q).unwrap();
        let ext = ext_field(f.clone(), f.primitive_element()).unwrap();
        let a = FieldElem(1 + (a - 1) % (q as u32 - 1));
        let g = build_halfplane(&ext, a).unwrap();
        let cert = certify(&g).unwrap();
        let b: Vec<usize> = b.into_iter().filter(|&v| v < g.n()).collect();
        let c: Vec<usize> = c.into_iter().filter(|&v| v < g.n()).collect();
        prop_assume!(!b.is_empty() && !c.is_empty());
        prop_assert!(mixing_check(&g, &b, &c, &cert).unwrap().holds);
        prop_assert!(edge_bound_check(&g, &b, &cert).unwrap().holds);
    }

    #[test]
    fn triangle_counts_match_triple_loop(g in small_graph()) {
        let n = g.n();
        let mut brute = 0u64;
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    brute += u64::from(g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(x, z));
                }
            }
        }
        prop_assert_eq!(count_triangles(&g), brute);
    }

    #[test]
    fn colouring_needs_n_over_alpha_classes(g in small_graph()) {
        let alpha = independence_exact(&g, budget());
        let chi = chromatic_exact(&g, budget());
        prop_assert_eq!(alpha.outcome, SearchOutcome::Exact);
        prop_assert_eq!(chi.outcome, SearchOutcome::Exact);
        prop_assert!(chi.value * alpha.value >= g.n());
    }

    #[test]
    fn independence_respects_the_spectral_bound(qi in 0usize..3, ki in 0usize..2, a in 1u32..7) {
        let q = [5u64, 7, 9][qi];
        let form = make_form(field_of_order(q).unwrap(), FormKind::classified(true, 2)[ki], 2).unwrap();
        let a = FieldElem(1 + (a - 1) % (q as u32 - 1));
        let g = build_euclidean(&form, a).unwrap();
        let cert = certify(&g).unwrap();
        prop_assume!(cert.is_meaningful());
        let alpha = independence_exact(&g, budget());
        prop_assume!(alpha.outcome == SearchOutcome::Exact);
        prop_assert!(alpha.value as f64 <= spectral_bounds(&cert).unwrap().alpha_bound + 1e-9);
    }

    #[test]
    fn distance_sets_are_bounded(qi in 0usize..3, half in any::<bool>(), pts in proptest::collection::btree_set(0usize..400, 1..12)) {
        let q = [3u64, 5, 7][qi];
        let spec = if half { SpaceSpec::Halfplane { q, sigma: None } } else { SpaceSpec::Euclidean { q, d: 2, form: FormKind::PlusEven } };
        let space = spec.build().unwrap();
        let members: Vec<usize> = pts.into_iter().map(|p| p % space.size()).collect::<BTreeSet<_>>().into_iter().collect();
        let e = PointSet::new(&space, members.clone()).unwrap();
        let r = distance_set_any(&space, &e).unwrap();
        prop_assert!(r.distance_set.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(r.distance_set.len() as u64 <= q.min((members.len() * members.len()) as u64));
        prop_assert_eq!(r.distance_set.first(), Some(&0));
    }
}
