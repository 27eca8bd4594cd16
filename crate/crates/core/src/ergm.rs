//! Metropolis chain over simple graphs with `n` vertices and exactly `E`
//! edges, targeting `μ(G) ∝ exp(-β Σ d_i²)`.
//!
//! A move removes a uniformly chosen present edge and adds a uniformly chosen
//! absent pair. Both counts stay fixed along the chain, so the proposal is
//! symmetric and a move is accepted with probability `min(1, e^{-βΔ})`.

use std::collections::HashMap;

use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::rng::{mix64, seeded};

/// Largest number of labelled graphs [`enumerate_exact`] will visit.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of `(u, v)`, `u < v`, in the lexicographic list of vertex pairs.
pub fn pair_index(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(k: usize, n: usize) -> (usize, usize) {
    let row_start = |u: usize| u * n - u * (u + 1) / 2;
    let b = 2.0 * n as f64 - 1.0;
    let mut u = ((b - (b * b - 8.0 * k as f64).max(0.0).sqrt()) / 2.0).floor() as usize;
    u = u.min(n.saturating_sub(2));
    while u > 0 && row_start(u) > k {
        u -= 1;
    }
    while row_start(u + 1) <= k {
        u += 1;
    }
    (u, u + 1 + k - row_start(u))
}

/// Uniformly random simple graph with exactly `edges` edges: a uniform
/// `edges`-subset of the vertex pairs.
pub fn uniform_graph<R: Rng + ?Sized>(n: usize, edges: usize, rng: &mut R) -> Result<Graph> {
    let m = pair_count(n);
    if edges > m {
        return input(format!("{edges} edges do not fit in a simple graph on {n} vertices"));
    }
    let mut g = Graph::empty(n);
    for k in index::sample(rng, m, edges) {
        let (u, v) = pair_from_index(k, n);
        g.insert_edge(u, v);
    }
    Ok(g)
}

/// `20 E ⌈ln(E+1)⌉` proposals.
pub fn default_burn_in(edges: usize) -> u64 {
    20 * edges as u64 * ((edges as f64 + 1.0).ln().ceil() as u64)
}

pub fn default_thinning(edges: usize) -> u64 {
    (2 * edges as u64).max(1)
}

/// Seed of replica `index` derived from a base seed.
pub fn replica_seed(seed: u64, index: u64) -> u64 {
    mix64(seed, index)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainConfig {
    pub beta: f64,
    pub n: usize,
    pub target_edges: usize,
    /// Total proposals after the initial state.
    pub steps: u64,
    pub burn_in: u64,
    pub thinning: u64,
    pub seed: u64,
}

impl ChainConfig {
    /// Config with the default burn-in and thinning, and
    /// `steps = burn_in + samples * thinning`.
    pub fn with_defaults(beta: f64, n: usize, target_edges: usize, samples: u64, seed: u64) -> Self {
        let burn_in = default_burn_in(target_edges);
        let thinning = default_thinning(target_edges);
        ChainConfig {
            beta,
            n,
            target_edges,
            steps: burn_in + samples * thinning,
            burn_in,
            thinning,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return input(format!("beta must be finite and >= 0, got {}", self.beta));
        }
        let m = pair_count(self.n);
        if self.target_edges == 0 || self.target_edges >= m {
            return input(format!(
                "need 0 < E < n(n-1)/2 = {m} for a chain to move, got E = {}",
                self.target_edges
            ));
        }
        if self.thinning == 0 {
            return input("thinning must be >= 1");
        }
        if self.burn_in > self.steps {
            return input(format!("burn_in {} exceeds steps {}", self.burn_in, self.steps));
        }
        Ok(())
    }

    /// Number of snapshots `run_chain` emits.
    pub fn sample_count(&self) -> u64 {
        (self.steps - self.burn_in) / self.thinning
    }
}

/// One proposal: drop `remove`, insert `add`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub remove: (usize, usize),
    pub add: (usize, usize),
    slot: usize,
}

impl Move {
    /// A move between explicit pairs, for use with [`delta_energy`].
    pub fn new(remove: (usize, usize), add: (usize, usize)) -> Self {
        Move { remove, add, slot: usize::MAX }
    }
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_proposable(g: &Graph) -> Result<()> {
    let e = g.edge_count();
    if e == 0 || e >= pair_count(g.n()) {
        return input(format!(
            "no valid move: E = {e} with {} vertex pairs",
            pair_count(g.n())
        ));
    }
    Ok(())
}

fn random_absent_pair<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> (usize, usize) {
    let n = g.n();
    loop {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n - 1);
        let v = if v >= u { v + 1 } else { v };
        if !g.has_edge(u, v) {
            return ordered(u, v);
        }
    }
}

/// Draws a move on `g`: a uniform present edge out and a uniform absent pair
/// in. Picks the edge by walking the edge list, so this is `O(E)`; chains use
/// [`ErgmChain`] instead.
pub fn propose<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Move> {
    check_proposable(g)?;
    let slot = rng.gen_range(0..g.edge_count());
    let remove = g.edges().nth(slot).unwrap();
    let add = random_absent_pair(g, rng);
    Ok(Move { remove, add, slot })
}

/// `Σd_i²(G') - Σd_i²(G)` for the move, computed from the four endpoint degrees.
pub fn delta_energy(g: &Graph, m: &Move) -> Result<i64> {
    let (u, v) = m.remove;
    let (x, y) = m.add;
    let n = g.n();
    if u.max(v).max(x).max(y) >= n {
        return input("move endpoint out of range");
    }
    if x == y {
        return input("move adds a self-loop");
    }
    if !g.has_edge(u, v) {
        return input(format!("move removes absent edge ({u}, {v})"));
    }
    if g.has_edge(x, y) {
        return input(format!("move adds present edge ({x}, {y})"));
    }
    Ok(delta_unchecked(g, m))
}

#[inline]
fn delta_unchecked(g: &Graph, m: &Move) -> i64 {
    let (u, v) = m.remove;
    let (x, y) = m.add;
    let du = g.degree(u) as i64;
    let dv = g.degree(v) as i64;
    let removed = -(2 * du - 1) - (2 * dv - 1);
    let after = |w: usize| g.degree(w) as i64 - i64::from(w == u || w == v);
    removed + (2 * after(x) + 1) + (2 * after(y) + 1)
}

/// `min(1, e^{-βΔ})`.
pub fn acceptance_probability(beta: f64, delta: i64) -> f64 {
    if delta <= 0 {
        1.0
    } else {
        (-beta * delta as f64).exp()
    }
}

/// Chain state: the current graph plus an indexable edge list for O(1)
/// uniform edge selection.
#[derive(Debug, Clone)]
pub struct ErgmChain {
    graph: Graph,
    edges: Vec<(usize, usize)>,
    beta: f64,
    energy: u64,
    accepted: u64,
    proposed: u64,
}

impl ErgmChain {
    pub fn new(graph: Graph, beta: f64) -> Result<Self> {
        check_proposable(&graph)?;
        if !(beta >= 0.0) || !beta.is_finite() {
            return input(format!("beta must be finite and >= 0, got {beta}"));
        }
        Ok(ErgmChain {
            edges: graph.edges().collect(),
            energy: graph.energy(),
            graph,
            beta,
            accepted: 0,
            proposed: 0,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    /// Current `Σ d_i²`, tracked incrementally.
    pub fn energy(&self) -> u64 {
        self.energy
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Move {
        let slot = rng.gen_range(0..self.edges.len());
        Move {
            remove: self.edges[slot],
            add: random_absent_pair(&self.graph, rng),
            slot,
        }
    }

    /// One Metropolis step; returns whether the proposal was accepted.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let m = self.propose(rng);
        let delta = delta_unchecked(&self.graph, &m);
        self.proposed += 1;
        let accept = delta <= 0 || rng.gen::<f64>() < acceptance_probability(self.beta, delta);
        if accept {
            self.apply(&m, delta);
        }
        accept
    }

    fn apply(&mut self, m: &Move, delta: i64) {
        self.graph.remove_edge(m.remove.0, m.remove.1);
        self.graph.insert_edge(m.add.0, m.add.1);
        self.edges[m.slot] = m.add;
        self.energy = (self.energy as i64 + delta) as u64;
        self.accepted += 1;
    }

    pub fn run<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }
}

/// Output of [`run_chain`].
#[derive(Debug, Clone)]
pub struct ChainRun {
    pub snapshots: Vec<Graph>,
    /// Energy of the initial state followed by the energy after each step.
    pub energy_trace: Vec<u64>,
    pub acceptance_rate: f64,
}

/// Runs the chain from a uniform random graph with `target_edges` edges,
/// emitting a snapshot every `thinning` steps once `burn_in` steps have passed.
pub fn run_chain(cfg: &ChainConfig) -> Result<ChainRun> {
    cfg.validate()?;
    let mut rng = seeded(cfg.seed);
    let start = uniform_graph(cfg.n, cfg.target_edges, &mut rng)?;
    let mut chain = ErgmChain::new(start, cfg.beta)?;
    let mut snapshots = Vec::with_capacity(cfg.sample_count() as usize);
    let mut energy_trace = Vec::with_capacity(cfg.steps as usize + 1);
    energy_trace.push(chain.energy());
    for t in 1..=cfg.steps {
        chain.step(&mut rng);
        energy_trace.push(chain.energy());
        if t > cfg.burn_in && (t - cfg.burn_in) % cfg.thinning == 0 {
            debug_assert_eq!(chain.graph().edge_count(), cfg.target_edges);
            snapshots.push(chain.graph().clone());
        }
    }
    Ok(ChainRun {
        snapshots,
        energy_trace,
        acceptance_rate: chain.acceptance_rate(),
    })
}

/// Runs the chain for `burn_in` steps and returns the final graph only.
pub fn equilibrate(beta: f64, n: usize, edges: usize, burn_in: u64, seed: u64) -> Result<Graph> {
    let mut rng = seeded(seed);
    let start = uniform_graph(n, edges, &mut rng)?;
    let mut chain = ErgmChain::new(start, beta)?;
    chain.run(burn_in, &mut rng);
    Ok(chain.into_graph())
}

/// Exact law over all labelled simple graphs with `n` vertices and `E`
/// edges. Graphs are keyed by the bitmask of their pair indices.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    pub n: usize,
    pub edges: usize,
    pub beta: f64,
    /// `(mask, energy, probability)`, ascending by mask.
    pub states: Vec<(u128, u64, f64)>,
}

impl ExactLaw {
    pub fn key(&self, g: &Graph) -> u128 {
        graph_key(g)
    }

    pub fn probability(&self, key: u128) -> f64 {
        self.states
            .binary_search_by_key(&key, |s| s.0)
            .map(|i| self.states[i].2)
            .unwrap_or(0.0)
    }

    pub fn graph(&self, key: u128) -> Graph {
        let mut g = Graph::empty(self.n);
        for k in (0..128).filter(|k| key >> k & 1 == 1) {
            let (u, v) = pair_from_index(k, self.n);
            g.insert_edge(u, v);
        }
        g
    }

    /// Total-variation distance to an empirical histogram of graph keys.
    pub fn tv_distance(&self, counts: &HashMap<u128, u64>) -> f64 {
        let total: u64 = counts.values().sum();
        let total = total.max(1) as f64;
        let mut tv: f64 = self
            .states
            .iter()
            .map(|&(k, _, p)| (p - counts.get(&k).copied().unwrap_or(0) as f64 / total).abs())
            .sum();
        // mass on keys outside the state space
        tv += counts
            .iter()
            .filter(|(k, _)| !self.contains(**k))
            .map(|(_, &c)| c as f64 / total)
            .sum::<f64>();
        tv / 2.0
    }

    fn contains(&self, key: u128) -> bool {
        self.states.binary_search_by_key(&key, |s| s.0).is_ok()
    }
}

/// Bitmask of pair indices; needs `n(n-1)/2 <= 128`.
pub fn graph_key(g: &Graph) -> u128 {
    g.edges().fold(0u128, |m, (u, v)| m | 1u128 << pair_index(u, v, g.n()))
}

fn binomial(m: u128, k: u128) -> u128 {
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) / (i + 1);
        if acc > ENUMERATION_LIMIT * 1000 {
            return acc;
        }
    }
    acc
}

/// Enumerates every labelled simple graph with `edges` edges and computes
/// `μ(G) = exp(-β Σd_i²) / Z` exactly.
pub fn enumerate_exact(n: usize, edges: usize, beta: f64) -> Result<ExactLaw> {
    let m = pair_count(n);
    if edges > m {
        return input(format!("{edges} edges do not fit on {n} vertices"));
    }
    if m > 128 {
        return Err(Error::Capacity(format!("{m} vertex pairs exceed the 128-bit key")));
    }
    let count = binomial(m as u128, edges as u128);
    if count > ENUMERATION_LIMIT {
        return Err(Error::Capacity(format!(
            "C({m}, {edges}) = {count} graphs exceeds the limit {ENUMERATION_LIMIT}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..m).map(|k| pair_from_index(k, n)).collect();
    let mut states = Vec::with_capacity(count as usize);
    let mut degrees = vec![0u64; n];
    let mut visit = |mask: u128| {
        degrees.iter_mut().for_each(|d| *d = 0);
        for (k, &(u, v)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                degrees[u] += 1;
                degrees[v] += 1;
            }
        }
        states.push((mask, degrees.iter().map(|d| d * d).sum::<u64>(), 0.0));
    };
    if edges == 0 {
        visit(0);
    } else {
        // Gosper's hack over all m-bit masks with `edges` bits set
        let limit: u128 = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
        let mut mask: u128 = (1u128 << edges) - 1;
        loop {
            visit(mask);
            let c = mask & mask.wrapping_neg();
            let r = match mask.checked_add(c) {
                Some(r) => r,
                None => break,
            };
            if r == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask > limit {
                break;
            }
        }
    }
    let min_energy = states.iter().map(|s| s.1).min().unwrap_or(0);
    let weights: Vec<f64> = states
        .iter()
        .map(|s| (-beta * (s.1 - min_energy) as f64).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    for (s, w) in states.iter_mut().zip(weights) {
        s.2 = w / z;
    }
    states.sort_by_key(|s| s.0);
    Ok(ExactLaw { n, edges, beta, states })
}
