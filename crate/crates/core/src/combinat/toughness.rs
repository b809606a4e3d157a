use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graphs::Graph;

use super::{CombinatError, SearchBudget, SearchOutcome};

/// Largest vertex count for exact toughness.
pub const TOUGHNESS_EXACT_LIMIT: usize = 24;

/// Non-negative fraction in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(num, den).max(1);
        Ratio { num: num / g, den: den / g }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn less_than(self, other: Ratio) -> bool {
        (self.num as u128) * (other.den as u128) < (other.num as u128) * (self.den as u128)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToughnessResult {
    /// `min |S| / c(G − S)` over `S` leaving at least two components;
    /// `None` for complete graphs, which have no such `S`.
    pub value: Option<Ratio>,
    /// A minimising set.
    pub cut: Vec<usize>,
    pub outcome: SearchOutcome,
    pub subsets_checked: u64,
}

/// Components of the subgraph induced by `mask`.
pub(crate) fn component_count(adj: &[u32], mask: u32) -> u32 {
    let mut left = mask;
    let mut count = 0;
    while left != 0 {
        let mut frontier = left & left.wrapping_neg();
        let mut comp = frontier;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        left &= !comp;
        count += 1;
    }
    count
}

/// Exact toughness by enumerating every vertex subset.
pub fn toughness_exact(g: &Graph, budget: SearchBudget) -> Result<ToughnessResult, CombinatError> {
    let n = g.n();
    if n > TOUGHNESS_EXACT_LIMIT {
        return Err(CombinatError::TooLarge { n, limit: TOUGHNESS_EXACT_LIMIT });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u)).collect();
    let full: u32 = (1u32 << n) - 1;
    let start = Instant::now();
    let mut best: Option<(Ratio, u32)> = None;
    let mut checked = 0u64;
    let mut exhausted = false;
    for s in 0..=full {
        checked += 1;
        if checked > budget.node_limit || (checked % 4096 == 0 && start.elapsed() > budget.wall_limit) {
            exhausted = true;
            break;
        }
        let comps = component_count(&adj, full & !s);
        if comps >= 2 {
            let r = Ratio::new(s.count_ones() as u64, comps as u64);
            if best.map_or(true, |(b, _)| r.less_than(b)) {
                best = Some((r, s));
                if r.num == 0 {
                    break;
                }
            }
        }
    }
    Ok(ToughnessResult {
        value: best.map(|(r, _)| r),
        cut: best.map_or(Vec::new(), |(_, s)| (0..n).filter(|&v| s >> v & 1 == 1).collect()),
        outcome: if exhausted { SearchOutcome::Timeout } else { SearchOutcome::Exact },
        subsets_checked: checked,
    })
}
