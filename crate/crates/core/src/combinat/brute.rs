//! Exhaustive reference computations for tiny graphs. They share no code
//! with the searches they check: adjacency is read through `has_edge` only.

use crate::graphs::Graph;

use super::Ratio;

/// Largest vertex count accepted by the subset enumerations here.
pub const BRUTE_LIMIT: usize = 16;

fn check(g: &Graph) {
    assert!(g.n() <= BRUTE_LIMIT, "brute-force oracles take at most {BRUTE_LIMIT} vertices");
}

fn is_independent(g: &Graph, set: u32) -> bool {
    let members: Vec<usize> = (0..g.n()).filter(|&v| set >> v & 1 == 1).collect();
    members.iter().enumerate().all(|(i, &u)| members[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
}

pub fn triangles(g: &Graph) -> u64 {
    let n = g.n();
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    t += 1;
                }
            }
        }
    }
    t
}

pub fn independence(g: &Graph) -> usize {
    check(g);
    (0u32..1 << g.n()).filter(|&s| is_independent(g, s)).map(|s| s.count_ones() as usize).max().unwrap_or(0)
}

/// Fewest independent sets covering all vertices, by dynamic programming
/// over subsets.
pub fn chromatic(g: &Graph) -> usize {
    check(g);
    let n = g.n();
    let full = (1usize << n) - 1;
    let indep: Vec<bool> = (0..=full).map(|s| is_independent(g, s as u32)).collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        // Fix the lowest vertex in the class that contains it.
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let class = sub | low;
            if indep[class] && best[s ^ class] != usize::MAX {
                best[s] = best[s].min(best[s ^ class] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

fn components_without(g: &Graph, removed: u32) -> usize {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for u in 0..n {
        for v in u + 1..n {
            if removed >> u & 1 == 0 && removed >> v & 1 == 0 && g.has_edge(u, v) {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).filter(|&v| removed >> v & 1 == 0).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// `None` when no vertex set separates the graph.
pub fn toughness(g: &Graph) -> Option<Ratio> {
    check(g);
    let mut best: Option<(u64, u64)> = None;
    for s in 0u32..1 << g.n() {
        let c = components_without(g, s) as u64;
        if c >= 2 {
            let k = s.count_ones() as u64;
            if best.map_or(true, |(bn, bd)| k * bd < bn * c) {
                best = Some((k, c));
            }
        }
    }
    best.map(|(a, b)| Ratio::new(a, b))
}
