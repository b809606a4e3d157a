//! Exact independence number and chromatic number by branch and bound.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graphs::{bits_to_indices, Graph};

use super::{SearchBudget, SearchOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceResult {
    /// Size of the best independent set found.
    pub value: usize,
    /// Proven upper bound; equals `value` when exact.
    pub upper_bound: usize,
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub witness: Vec<usize>,
}

struct Ticker {
    budget: SearchBudget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Ticker {
    fn new(budget: SearchBudget) -> Ticker {
        Ticker { budget, start: Instant::now(), nodes: 0, exhausted: false }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.node_limit
            || (self.nodes % 1024 == 0 && self.start.elapsed() > self.budget.wall_limit)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn has(bits: &[u64], v: usize) -> bool {
    bits[v / 64] >> (v % 64) & 1 == 1
}

struct MisSearch<'a> {
    g: &'a Graph,
    ticker: Ticker,
    current: Vec<usize>,
    best: Vec<usize>,
}

impl MisSearch<'_> {
    /// Greedy clique cover of `G[P]` in index order; its size bounds `α(G[P])`.
    fn cover_size(&self, p: &[u64]) -> usize {
        let mut commons: Vec<Vec<u64>> = Vec::new();
        for v in bits_to_indices(p) {
            match commons.iter_mut().find(|c| has(c, v)) {
                Some(c) => c.iter_mut().zip(self.g.row(v)).for_each(|(x, y)| *x &= y),
                None => commons.push(self.g.row(v).iter().zip(p).map(|(x, y)| x & y).collect()),
            }
        }
        commons.len()
    }

    /// Returns an upper bound on the best total reachable in this subtree.
    fn recurse(&mut self, p: Vec<u64>) -> usize {
        let cur = self.current.len();
        let size = popcount(&p);
        if size == 0 {
            if cur > self.best.len() {
                self.best = self.current.clone();
            }
            return cur;
        }
        let cover = self.cover_size(&p);
        if self.ticker.exhausted || !self.ticker.tick() || cur + cover <= self.best.len() {
            return cur + cover;
        }
        // Branch vertex: largest degree inside P, smallest index on ties.
        let mut pick = (0usize, 0usize);
        let mut first = true;
        for v in bits_to_indices(&p) {
            let d: usize = self.g.row(v).iter().zip(&p).map(|(x, y)| (x & y).count_ones() as usize).sum();
            if first || d > pick.1 {
                pick = (v, d);
                first = false;
            }
        }
        let (v, dv) = pick;
        if dv == 0 {
            let mut all = self.current.clone();
            all.extend(bits_to_indices(&p));
            if all.len() > self.best.len() {
                all.sort_unstable();
                self.best = all;
            }
            return cur + size;
        }
        let mut with_v = p.clone();
        with_v.iter_mut().zip(self.g.row(v)).for_each(|(x, y)| *x &= !y);
        with_v[v / 64] &= !(1u64 << (v % 64));
        self.current.push(v);
        let ub_in = self.recurse(with_v);
        self.current.pop();
        let mut without = p;
        without[v / 64] &= !(1u64 << (v % 64));
        let ub_out = self.recurse(without);
        ub_in.max(ub_out).min(cur + cover)
    }
}

/// Maximum independent set by branch and bound. On budget exhaustion the
/// result holds the best set found and a proven upper bound.
pub fn independence_exact(g: &Graph, budget: SearchBudget) -> IndependenceResult {
    let mut s = MisSearch { g, ticker: Ticker::new(budget), current: Vec::new(), best: Vec::new() };
    let mut all = vec![0u64; g.words()];
    for v in 0..g.n() {
        all[v / 64] |= 1 << (v % 64);
    }
    let root = s.recurse(all);
    let mut witness = s.best.clone();
    witness.sort_unstable();
    let value = witness.len();
    let exhausted = s.ticker.exhausted;
    IndependenceResult {
        value,
        upper_bound: if exhausted { root.max(value) } else { value },
        outcome: if exhausted { SearchOutcome::Timeout } else { SearchOutcome::Exact },
        nodes: s.ticker.nodes,
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    /// Colours in the best proper colouring found.
    pub value: usize,
    /// Proven lower bound; equals `value` when exact.
    pub lower_bound: usize,
    pub outcome: SearchOutcome,
    pub nodes: u64,
    /// Colour of each vertex, from 0.
    pub colouring: Vec<usize>,
}

/// A clique found greedily from every start vertex; a lower bound on `χ`.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for s in 0..g.n() {
        let mut clique = vec![s];
        let mut cand: Vec<u64> = g.row(s).to_vec();
        while let Some(v) = bits_to_indices(&cand)
            .into_iter()
            .max_by_key(|&v| (g.row(v).iter().zip(&cand).map(|(x, y)| (x & y).count_ones()).sum::<u32>(), usize::MAX - v))
        {
            clique.push(v);
            cand.iter_mut().zip(g.row(v)).for_each(|(x, y)| *x &= y);
        }
        if clique.len() > best.len() {
            clique.sort_unstable();
            best = clique;
        }
    }
    best
}

struct Dsatur<'a> {
    g: &'a Graph,
    adj: Vec<Vec<usize>>,
    degree: Vec<usize>,
    colour: Vec<usize>,
    /// `nbr_count[v * width + c]`: neighbours of `v` with colour `c`.
    nbr_count: Vec<u32>,
    saturation: Vec<usize>,
    width: usize,
    best: Vec<usize>,
    best_k: usize,
    lower: usize,
    ticker: Ticker,
}

const UNCOLOURED: usize = usize::MAX;

impl Dsatur<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colour[v] = c;
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i];
            let slot = &mut self.nbr_count[u * self.width + c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colour[v];
        self.colour[v] = UNCOLOURED;
        for i in 0..self.adj[v].len() {
            let u = self.adj[v][i];
            let slot = &mut self.nbr_count[u * self.width + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    /// Uncoloured vertex with largest saturation, then degree, then smallest index.
    fn next_vertex(&self) -> Option<usize> {
        (0..self.g.n())
            .filter(|&v| self.colour[v] == UNCOLOURED)
            .max_by_key(|&v| (self.saturation[v], self.degree[v], usize::MAX - v))
    }

    fn recurse(&mut self, used: usize) {
        if self.best_k <= self.lower || self.ticker.exhausted {
            return;
        }
        let Some(v) = self.next_vertex() else {
            if used < self.best_k {
                self.best_k = used;
                self.best = self.colour.clone();
            }
            return;
        };
        if !self.ticker.tick() {
            return;
        }
        let limit = (used + 1).min(self.best_k - 1);
        for c in 0..limit {
            if self.nbr_count[v * self.width + c] == 0 {
                self.assign(v, c);
                self.recurse(used.max(c + 1));
                self.unassign(v);
                if self.best_k <= self.lower || self.ticker.exhausted {
                    return;
                }
            }
        }
    }
}

/// Exact chromatic number by DSATUR branch and bound.
pub fn chromatic_exact(g: &Graph, budget: SearchBudget) -> ChromaticResult {
    let n = g.n();
    if n == 0 {
        return ChromaticResult { value: 0, lower_bound: 0, outcome: SearchOutcome::Exact, nodes: 0, colouring: Vec::new() };
    }
    let lower = greedy_clique(g).len();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let degree = adj.iter().map(Vec::len).collect();
    // A greedy colouring in index order gives the first incumbent.
    let mut first = vec![UNCOLOURED; n];
    for v in 0..n {
        let taken: Vec<usize> = adj[v].iter().map(|&u| first[u]).filter(|&c| c != UNCOLOURED).collect();
        first[v] = (0..).find(|c| !taken.contains(c)).expect("a free colour exists");
    }
    let best_k = first.iter().max().map_or(0, |m| m + 1);
    let width = best_k + 1;
    let mut s = Dsatur {
        g,
        adj,
        degree,
        colour: vec![UNCOLOURED; n],
        nbr_count: vec![0; n * width],
        saturation: vec![0; n],
        width,
        best: first,
        best_k,
        lower,
        ticker: Ticker::new(budget),
    };
    s.recurse(0);
    let exact = !s.ticker.exhausted;
    ChromaticResult {
        value: s.best_k,
        lower_bound: if exact { s.best_k } else { s.lower },
        outcome: if exact { SearchOutcome::Exact } else { SearchOutcome::Timeout },
        nodes: s.ticker.nodes,
        colouring: s.best,
    }
}
