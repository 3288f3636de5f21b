//! Exact desk-scale oracles: brute-force `alpha_k` by branch-and-bound on
//! the power graph, exact `chi_k` by backtracking, and matrix rank over a
//! prime field. These are the ground truth every bound is validated against,
//! and they deliberately share no code with the bounds module.

use crate::graph::{power_graph, Graph, GraphError};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Hard vertex limit for the bitset-based independence oracle.
pub const MAX_ALPHA_ORDER: usize = 64;
/// Default vertex limit for the coloring oracle.
pub const MAX_CHI_ORDER: usize = 32;
/// A node budget comfortably above anything the test corpus needs.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    TooLarge { order: usize, limit: usize },
    NotPrime { modulus: u64 },
    Graph(GraphError),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::TooLarge { order, limit } => {
                write!(f, "graph order {order} exceeds oracle limit {limit}")
            }
            ExactError::NotPrime { modulus } => write!(f, "{modulus} is not prime"),
            ExactError::Graph(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ExactError {}

impl From<GraphError> for ExactError {
    fn from(e: GraphError) -> Self {
        ExactError::Graph(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    AlphaK,
    ChiK,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Set(Vec<usize>),
    Coloring(Vec<Vec<usize>>),
}

/// Result of an exact search. `exhausted` results carry the best value
/// found and must never be treated as ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub quantity: Quantity,
    pub value: usize,
    pub witness: Witness,
    pub explored: u64,
    pub exhausted: bool,
}

struct MisSearch<'a> {
    adj: &'a [u64],
    budget: u64,
    explored: u64,
    exhausted: bool,
    best: u64,
    best_size: u32,
}

impl MisSearch<'_> {
    /// Greedy clique cover of the candidate set; its size bounds the
    /// independence number of the induced subgraph from above.
    fn clique_cover_bound(&self, mut p: u64) -> u32 {
        let mut cliques = 0;
        while p != 0 {
            let u = p.trailing_zeros() as usize;
            p &= !(1u64 << u);
            let mut cands = p & self.adj[u];
            while cands != 0 {
                let w = cands.trailing_zeros() as usize;
                p &= !(1u64 << w);
                cands &= self.adj[w];
            }
            cliques += 1;
        }
        cliques
    }

    fn run(&mut self, current: u64, size: u32, cand: u64) {
        self.explored += 1;
        if self.explored > self.budget {
            self.exhausted = true;
            return;
        }
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = current;
            }
            return;
        }
        if size + self.clique_cover_bound(cand) <= self.best_size {
            return;
        }
        // Branch on the candidate of largest residual degree.
        let mut pick = 0;
        let mut pick_deg = u32::MAX;
        let mut scan = cand;
        while scan != 0 {
            let v = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let deg = (self.adj[v] & cand).count_ones();
            if pick_deg == u32::MAX || deg > pick_deg {
                pick = v;
                pick_deg = deg;
            }
        }
        let bit = 1u64 << pick;
        self.run(current | bit, size + 1, cand & !(self.adj[pick] | bit));
        if self.exhausted {
            return;
        }
        self.run(current, size, cand & !bit);
    }
}

fn bitset_adjacency(g: &Graph) -> Vec<u64> {
    let n = g.order();
    let mut adj = vec![0u64; n];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Maximum independent set of a graph with at most 64 vertices.
/// Branch-and-bound with a greedy clique-cover bound.
fn max_independent_set(g: &Graph, budget: u64) -> (Vec<usize>, u64, bool) {
    let n = g.order();
    let adj = bitset_adjacency(g);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    // Greedy warm start by ascending degree.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut greedy = 0u64;
    for &v in &order {
        if greedy & adj[v] == 0 {
            greedy |= 1 << v;
        }
    }

    let mut search = MisSearch {
        adj: &adj,
        budget,
        explored: 0,
        exhausted: false,
        best: greedy,
        best_size: greedy.count_ones(),
    };
    search.run(0, 0, all);
    let set: Vec<usize> = (0..n).filter(|&v| search.best & (1 << v) != 0).collect();
    (set, search.explored, search.exhausted)
}

/// Exact k-independence number: the independence number of `G^k`, found by
/// branch-and-bound. Budget exhaustion returns the best set found, flagged.
pub fn exact_alpha_k(g: &Graph, k: usize, budget: u64) -> Result<ExactResult, ExactError> {
    assert!(k >= 1, "exact_alpha_k requires k >= 1");
    if g.order() > MAX_ALPHA_ORDER {
        return Err(ExactError::TooLarge {
            order: g.order(),
            limit: MAX_ALPHA_ORDER,
        });
    }
    let power = power_graph(g, k);
    let (set, explored, exhausted) = max_independent_set(&power, budget);
    Ok(ExactResult {
        quantity: Quantity::AlphaK,
        value: set.len(),
        witness: Witness::Set(set),
        explored,
        exhausted,
    })
}

/// Greedy first-fit coloring along a fixed order; returns color classes.
fn greedy_coloring(adj: &[u64], order: &[usize]) -> Vec<Vec<usize>> {
    let mut classes: Vec<(u64, Vec<usize>)> = Vec::new();
    for &v in order {
        match classes.iter_mut().find(|(mask, _)| mask & adj[v] == 0) {
            Some((mask, class)) => {
                *mask |= 1 << v;
                class.push(v);
            }
            None => classes.push((1 << v, vec![v])),
        }
    }
    classes.into_iter().map(|(_, c)| c).collect()
}

/// Greedy clique from a seed vertex: a valid lower bound for chi.
fn greedy_clique(adj: &[u64], n: usize) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    for seed in 0..n {
        let mut clique = vec![seed];
        let mut cands = adj[seed];
        while cands != 0 {
            // Extend by the candidate with the most remaining candidates.
            let mut pick = usize::MAX;
            let mut pick_deg = 0;
            let mut scan = cands;
            while scan != 0 {
                let v = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                let deg = (adj[v] & cands).count_ones();
                if pick == usize::MAX || deg > pick_deg {
                    pick = v;
                    pick_deg = deg;
                }
            }
            clique.push(pick);
            cands &= adj[pick];
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

struct ColorSearch<'a> {
    adj: &'a [u64],
    order: &'a [usize],
    colors: Vec<usize>,
    budget: u64,
    explored: u64,
    exhausted: bool,
}

impl ColorSearch<'_> {
    /// Tries to color `order[pos..]` with at most `t` colors; `used` colors
    /// appear among earlier vertices. New colors are tried only once
    /// (symmetry breaking).
    fn run(&mut self, pos: usize, used: usize, t: usize) -> bool {
        self.explored += 1;
        if self.explored > self.budget {
            self.exhausted = true;
            return false;
        }
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        let mut forbidden = 0u64;
        let mut scan = self.adj[v];
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            if self.colors[u] != usize::MAX {
                forbidden |= 1 << self.colors[u];
            }
        }
        let limit = t.min(used + 1);
        for c in 0..limit {
            if forbidden & (1 << c) != 0 {
                continue;
            }
            self.colors[v] = c;
            if self.run(pos + 1, used.max(c + 1), t) {
                return true;
            }
            if self.exhausted {
                break;
            }
        }
        self.colors[v] = usize::MAX;
        false
    }
}

/// Exact distance-k chromatic number: the chromatic number of `G^k`, by
/// iterative deepening over the color count with a clique lower bound.
pub fn exact_chi_k(g: &Graph, k: usize, budget: u64) -> Result<ExactResult, ExactError> {
    assert!(k >= 1, "exact_chi_k requires k >= 1");
    let n = g.order();
    if n > MAX_CHI_ORDER {
        return Err(ExactError::TooLarge {
            order: n,
            limit: MAX_CHI_ORDER,
        });
    }
    let power = power_graph(g, k);
    let adj = bitset_adjacency(&power);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| power.degree(b).cmp(&power.degree(a)).then(a.cmp(&b)));
    let greedy = greedy_coloring(&adj, &order);
    let upper = greedy.len();
    let mut witness = greedy;

    let clique = greedy_clique(&adj, n);
    let lower = clique.len().max(1);

    // Clique vertices first: they are forced onto distinct colors.
    let mut search_order = clique.clone();
    for &v in &order {
        if !clique.contains(&v) {
            search_order.push(v);
        }
    }

    let mut explored = 0;
    let mut exhausted = false;
    let mut best = upper;
    for t in lower..upper {
        let mut search = ColorSearch {
            adj: &adj,
            order: &search_order,
            colors: vec![usize::MAX; n],
            budget: budget.saturating_sub(explored),
            explored: 0,
            exhausted: false,
        };
        let found = search.run(0, 0, t);
        explored += search.explored;
        if search.exhausted {
            exhausted = true;
            break;
        }
        if found {
            best = t;
            let mut classes = vec![Vec::new(); t];
            for v in 0..n {
                classes[search.colors[v]].push(v);
            }
            classes.retain(|c| !c.is_empty());
            witness = classes;
            break;
        }
    }

    Ok(ExactResult {
        quantity: Quantity::ChiK,
        value: best,
        witness: Witness::Coloring(witness),
        explored,
        exhausted,
    })
}

/// Deterministic primality check by trial division; moduli must fit 31 bits.
pub fn is_prime(p: u64) -> bool {
    if p < 2 || p >= (1 << 31) {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Rank of an integer matrix over GF(p) by Gaussian elimination in exact
/// modular arithmetic. Rows may have any rectangular shape.
pub fn gfp_rank(rows: &[Vec<i64>], p: u64) -> Result<usize, ExactError> {
    if !is_prime(p) {
        return Err(ExactError::NotPrime { modulus: p });
    }
    let reduced: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    Ok(rank_mod(reduced, p))
}

/// Elimination over already-reduced residues.
pub(crate) fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_pow(m[rank][col] % p, p - 2, p);
        for c in col..cols {
            m[rank][c] = (m[rank][c] % p) * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][col] % p != 0 {
                let f = m[r][col] % p;
                for c in col..cols {
                    let sub = f * m[rank][c] % p;
                    m[r][c] = (m[r][c] % p + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}
