//! Distance tables recomputed with plain modular arithmetic, independent of
//! the field, form and space machinery.

use std::collections::BTreeSet;

use itertools::Itertools;

use fqgraph::distance::{exhaustive_csv, exhaustive_table, SpaceSpec};
use fqgraph::suite::{exhaustive_golden_csv, GOLDEN_EXHAUSTIVE};

#[derive(Debug, PartialEq)]
struct Row {
    size: usize,
    subsets: u64,
    min_delta: usize,
    max_delta: usize,
    argmin_count: u64,
    threshold: String,
    hypothesis_met: bool,
}

fn inv_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|x| (a * x).rem_euclid(p) == 1).expect("unit")
}

/// Sizes `1..=max` over `points`, with `dist` giving a distance in `0..p`.
fn enumerate<P: Copy>(points: &[P], max: usize, dist: impl Fn(P, P) -> i64, threshold: impl Fn(usize) -> f64) -> Vec<Row> {
    (1..=max)
        .map(|size| {
            let mut counts = Vec::new();
            for subset in points.iter().copied().combinations(size) {
                let delta: BTreeSet<i64> = subset.iter().cartesian_product(&subset).map(|(&a, &b)| dist(a, b)).collect();
                counts.push(delta.len());
            }
            let min = *counts.iter().min().unwrap();
            Row {
                size,
                subsets: counts.len() as u64,
                min_delta: min,
                max_delta: *counts.iter().max().unwrap(),
                argmin_count: counts.iter().filter(|&&c| c == min).count() as u64,
                threshold: format!("{:.6}", threshold(size)),
                hypothesis_met: false,
            }
        })
        .collect()
}

fn parse(csv: &str, space: &str) -> Vec<Row> {
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    reader
        .records()
        .map(|r| r.unwrap())
        .filter(|r| &r[0] == space)
        .map(|r| Row {
            size: r[3].parse().unwrap(),
            subsets: r[4].parse().unwrap(),
            min_delta: r[5].parse().unwrap(),
            max_delta: r[6].parse().unwrap(),
            argmin_count: r[7].parse().unwrap(),
            threshold: r[8].to_string(),
            hypothesis_met: r[9].parse().unwrap(),
        })
        .collect()
}

#[test]
fn golden_table_matches_modular_enumeration() {
    let points: Vec<(i64, i64)> = (0..3).cartesian_product(0..3).collect();
    let threshold = |s: usize| (s as f64 / (3.0 * 3f64.sqrt())).min(3.0);
    let plus = |a: (i64, i64), b: (i64, i64)| (2 * (a.0 - b.0) * (a.1 - b.1)).rem_euclid(3);
    // x² − 2y², the smallest non-square of GF(3) being 2.
    let minus = |a: (i64, i64), b: (i64, i64)| ((a.0 - b.0).pow(2) - 2 * (a.1 - b.1).pow(2)).rem_euclid(3);
    assert_eq!(parse(GOLDEN_EXHAUSTIVE, "euclidean:plus_even"), enumerate(&points, 5, plus, threshold));
    assert_eq!(parse(GOLDEN_EXHAUSTIVE, "euclidean:minus_even"), enumerate(&points, 5, minus, threshold));
    assert_eq!(GOLDEN_EXHAUSTIVE.lines().count(), 11);
}

#[test]
fn golden_table_is_reproducible() {
    let a = exhaustive_golden_csv().unwrap();
    assert_eq!(a, exhaustive_golden_csv().unwrap());
    assert_eq!(a, GOLDEN_EXHAUSTIVE);
}

#[test]
fn halfplane_table_matches_poincare_enumeration() {
    let p = 5i64;
    let sigma = 2; // smallest primitive root mod 5
    let points: Vec<(i64, i64)> = (0..p).cartesian_product(1..p).collect();
    let dist = |a: (i64, i64), b: (i64, i64)| {
        let norm = (a.0 - b.0).pow(2) - sigma * (a.1 - b.1).pow(2);
        (norm * inv_mod(a.1 * b.1 % p, p)).rem_euclid(p)
    };
    let threshold = |s: usize| (s as f64 / (3.0 * 5f64.sqrt())).min(4.0);
    let space = SpaceSpec::Halfplane { q: 5, sigma: None }.build().unwrap();
    let csv = exhaustive_csv(&exhaustive_table(&space, 4).unwrap());
    assert_eq!(parse(&csv, "halfplane:sigma=2"), enumerate(&points, 4, dist, threshold));
}
