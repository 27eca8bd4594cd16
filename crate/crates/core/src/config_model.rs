//! Configuration model: uniform pairing of half-edges ("stubs"), the erased
//! simple graph, rejection sampling of uniform simple graphs with a given
//! degree sequence, and the `e^{-λ-λ²}` estimate of the simple fraction.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::degree_law::DegreeLaw;
use crate::error::{input, Error, Result};
use crate::graph::{DegreeSequence, Graph};
use crate::scalar::Scalar;
use crate::stats::wilson_interval;

/// Multigraph produced by stub pairing. Loops and repeated pairs allowed;
/// a loop at `i` adds 2 to the degree of `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    /// Unordered pairs stored as `(min, max)`.
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    /// True when there are no loops and no repeated pairs.
    pub fn is_simple(&self) -> bool {
        if self.edges.iter().any(|(u, v)| u == v) {
            return false;
        }
        let mut sorted = self.edges.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Drops loops and merges repeated pairs.
    pub fn erase(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.edges {
            if u != v {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// Conversion for pairings that are already simple.
    pub fn to_simple(&self) -> Option<Graph> {
        self.is_simple().then(|| self.erase())
    }
}

fn check_even(d: &DegreeSequence) -> Result<()> {
    if d.total % 2 != 0 {
        return input(format!("degree sum {} is odd", d.total));
    }
    Ok(())
}

fn stubs(d: &DegreeSequence) -> Vec<usize> {
    d.degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat(i).take(k))
        .collect()
}

fn pair_shuffled<R: Rng + ?Sized>(n: usize, stubs: &mut [usize], rng: &mut R) -> Multigraph {
    // a uniform permutation paired off consecutively is a uniform matching
    stubs.shuffle(rng);
    let edges = stubs
        .chunks_exact(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    Multigraph { n, edges }
}

/// Uniform perfect matching of the `Σ d_i` stubs.
pub fn pair_stubs<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Result<Multigraph> {
    check_even(d)?;
    Ok(pair_shuffled(d.len(), &mut stubs(d), rng))
}

/// Default try budget `⌈100 e^{λ+λ²}⌉`, capped at `10⁷`.
pub fn default_max_tries(d: &DegreeSequence) -> u64 {
    let lambda = lambda_stat(d).unwrap_or(0.0);
    (100.0 * (lambda + lambda * lambda).exp()).ceil().min(1e7) as u64
}

/// Pairs stubs until the result is simple. Conditioned on success the graph
/// is uniform among simple graphs with degree sequence `d`, since each one
/// arises from the same number of matchings.
pub fn sample_simple<R: Rng + ?Sized>(
    d: &DegreeSequence,
    rng: &mut R,
    max_tries: Option<u64>,
) -> Result<Graph> {
    sample_simple_counted(d, rng, max_tries).map(|(g, _)| g)
}

/// [`sample_simple`] that also reports how many pairings were drawn.
pub fn sample_simple_counted<R: Rng + ?Sized>(
    d: &DegreeSequence,
    rng: &mut R,
    max_tries: Option<u64>,
) -> Result<(Graph, u64)> {
    check_even(d)?;
    let limit = max_tries.unwrap_or(u64::MAX);
    let mut s = stubs(d);
    let mut tries = 0u64;
    while tries < limit {
        tries += 1;
        if let Some(g) = pair_shuffled(d.len(), &mut s, rng).to_simple() {
            return Ok((g, tries));
        }
    }
    Err(Error::Rejection { tries, simple_fraction: 0.0 })
}

/// `λ = Σ d_i (d_i - 1) / (4E)` with `2E = Σ d_i`.
pub fn lambda_stat(d: &DegreeSequence) -> Result<f64> {
    if d.total == 0 {
        return input("lambda needs at least one edge");
    }
    let num: u64 = d.degrees.iter().map(|&k| (k as u64) * (k as u64).saturating_sub(1)).sum();
    Ok(num as f64 / (2.0 * d.total as f64))
}

/// Monte-Carlo simple fraction of the configuration model next to the
/// predicted `e^{-λ-λ²}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigStats {
    pub lambda: f64,
    pub predicted_simple: f64,
    pub empirical_simple: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub simple_count: u64,
    pub trials: u64,
    /// Mean fraction of edge slots lost when erasing (loops plus merged copies).
    pub erased_loss: f64,
}

pub fn simple_fraction<R: Rng + ?Sized>(
    d: &DegreeSequence,
    trials: u64,
    rng: &mut R,
) -> Result<ConfigStats> {
    check_even(d)?;
    if trials == 0 {
        return input("trials must be >= 1");
    }
    let lambda = if d.total == 0 { 0.0 } else { lambda_stat(d)? };
    let slots = (d.total / 2) as f64;
    let mut s = stubs(d);
    let mut simple = 0u64;
    let mut lost = 0.0;
    for _ in 0..trials {
        let m = pair_shuffled(d.len(), &mut s, rng);
        if m.is_simple() {
            simple += 1;
        } else {
            lost += (m.edges.len() - m.erase().edge_count()) as f64 / slots;
        }
    }
    let (ci_low, ci_high) = wilson_interval(simple, trials);
    Ok(ConfigStats {
        lambda,
        predicted_simple: (-lambda - lambda * lambda).exp(),
        empirical_simple: simple as f64 / trials as f64,
        ci_low,
        ci_high,
        simple_count: simple,
        trials,
        erased_loss: lost / trials as f64,
    })
}

/// A graph drawn by the degree-law route: conditioned degrees, then a uniform
/// simple realization.
#[derive(Debug, Clone)]
pub struct LawSample {
    pub graph: Graph,
    pub degrees: DegreeSequence,
    /// `e^{-λ-λ²}`: approximate weight that corrects the sequence law toward
    /// the graph law at fixed energy.
    pub importance_weight: f64,
    pub pairing_tries: u64,
}

/// Draws degrees from the law conditioned on `target_total`, then a uniform
/// simple graph with those degrees. Retries with fresh degrees whenever the
/// pairing budget runs out.
///
/// Without `importance_weight` this samples degree sequences proportionally to
/// `Π 1/d_i! · e^{-βd_i²}`, omitting the simple-pairing probability.
pub fn sample_from_degree_law<T: Scalar, R: Rng + ?Sized>(
    law: &DegreeLaw<T>,
    target_total: u64,
    rng: &mut R,
    max_rounds: u32,
) -> Result<LawSample> {
    let sampler = law.sampler();
    let mut last = None;
    for _ in 0..max_rounds.max(1) {
        let degrees = sampler.sample_conditioned(target_total, rng)?.degrees;
        let tries = default_max_tries(&degrees);
        match sample_simple_counted(&degrees, rng, Some(tries)) {
            Ok((graph, pairing_tries)) => {
                let lambda = lambda_stat(&degrees).unwrap_or(0.0);
                return Ok(LawSample {
                    graph,
                    degrees,
                    importance_weight: (-lambda - lambda * lambda).exp(),
                    pairing_tries,
                });
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(Error::Rejection { tries: 0, simple_fraction: 0.0 }))
}
