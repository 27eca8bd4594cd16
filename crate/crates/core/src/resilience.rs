//! Independent edge failures: disconnection probability, the union bound on
//! isolated vertices, failure thresholds, and the G(n, m) baseline.

use rand::Rng;
use serde::Serialize;

use crate::error::{input, Result};
use crate::ergm::uniform_graph;
use crate::graph::{DegreeSequence, Graph};
use crate::report::format_sig9;
use crate::scalar::Scalar;
use crate::stats::wilson_interval;
use crate::union_find::UnionFind;

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return input(format!("failure probability {p} outside [0, 1]"));
    }
    Ok(())
}

/// Removes each edge independently with probability `p`.
pub fn fail_edges<R: Rng + ?Sized>(g: &Graph, p: f64, rng: &mut R) -> Result<Graph> {
    check_probability(p)?;
    let kept: Vec<_> = g.edges().filter(|_| rng.gen::<f64>() >= p).collect();
    Graph::from_edges(g.n(), &kept)
}

/// `(min(1, Σ p^{d_i}), Σ p^{d_i})`.
pub fn isolation_bound(d: &DegreeSequence, p: f64) -> Result<(f64, f64)> {
    check_probability(p)?;
    let raw: f64 = d.degrees.iter().map(|&k| p.powi(k as i32)).sum();
    Ok((raw.min(1.0), raw))
}

/// Failure thresholds for mean degree `c ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds<T> {
    /// `e^{-1/(c(1-δ̃))}`
    pub proved: T,
    /// `e^{-1/c}`: where isolated vertices start to appear.
    pub isolated_node: T,
    /// `(c-1)/c`, clamped at 0: the G(n, p) connectivity threshold.
    pub er: T,
}

pub fn thresholds<T: Scalar>(c: T, delta_tilde: T) -> Result<Thresholds<T>> {
    if !(c > T::zero()) {
        return input("c must be positive");
    }
    if !(delta_tilde >= T::zero() && delta_tilde < T::one()) {
        return input(format!("delta_tilde {delta_tilde} outside [0, 1)"));
    }
    Ok(Thresholds {
        proved: (-(c * (T::one() - delta_tilde)).recip()).exp(),
        isolated_node: (-c.recip()).exp(),
        er: ((c - T::one()) / c).max(T::zero()),
    })
}

/// Uniform simple graph with exactly `e` edges.
pub fn er_sample<R: Rng + ?Sized>(n: usize, e: usize, rng: &mut R) -> Result<Graph> {
    uniform_graph(n, e, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResilienceReport {
    pub p_grid: Vec<f64>,
    pub disconnect_prob: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    /// `Σ p^{d_i}` capped at 1.
    pub isolation_bound: Vec<f64>,
    pub isolation_bound_raw: Vec<f64>,
    /// Fraction of trials with at least one isolated vertex.
    pub isolated_freq: Vec<f64>,
    pub disconnected_count: Vec<u64>,
    pub isolated_count: Vec<u64>,
    pub trials: u64,
    pub coupled: bool,
    pub thresholds: Option<Thresholds<f64>>,
}

impl ResilienceReport {
    pub fn with_thresholds(mut self, t: Thresholds<f64>) -> Self {
        self.thresholds = Some(t);
        self
    }

    pub fn is_monotone(&self) -> bool {
        self.disconnected_count.windows(2).all(|w| w[0] <= w[1])
    }

    /// Binomial standard error of the isolated-vertex frequency at each `p`.
    pub fn isolated_sigma(&self) -> Vec<f64> {
        let t = self.trials as f64;
        self.isolated_freq.iter().map(|&f| (f * (1.0 - f) / t).sqrt()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,estimate,ci_low,ci_high,isolation_bound\n");
        for i in 0..self.p_grid.len() {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                format_sig9(self.p_grid[i]),
                format_sig9(self.disconnect_prob[i]),
                format_sig9(self.ci_low[i]),
                format_sig9(self.ci_high[i]),
                format_sig9(self.isolation_bound[i]),
            ));
        }
        s
    }
}

/// Outcome of one failure pattern: `(disconnected, some vertex isolated)`.
fn survive(n: usize, kept: impl Iterator<Item = (usize, usize)>) -> (bool, bool) {
    let mut uf = UnionFind::new(n);
    let mut deg = vec![0u32; n];
    let mut merged = 0;
    for (u, v) in kept {
        deg[u] += 1;
        deg[v] += 1;
        if uf.union(u, v) {
            merged += 1;
        }
    }
    let disconnected = n >= 2 && merged + 1 < n;
    (disconnected, n >= 2 && deg.contains(&0))
}

/// Monte-Carlo estimate of the probability that the graph is disconnected
/// after independent edge failures, for every `p` in `p_grid`.
///
/// With `coupled`, each trial draws one uniform per edge and an edge fails at
/// `p` iff its uniform is below `p`, so failure sets are nested along `p` and
/// every trial's disconnection indicator is non-decreasing in `p`.
pub fn disconnect_probability<R: Rng + ?Sized>(
    g: &Graph,
    p_grid: &[f64],
    trials: u64,
    rng: &mut R,
    coupled: bool,
) -> Result<ResilienceReport> {
    if trials == 0 {
        return input("trials must be >= 1");
    }
    for &p in p_grid {
        check_probability(p)?;
    }
    let n = g.n();
    let edges: Vec<_> = g.edges().collect();
    let mut disconnected = vec![0u64; p_grid.len()];
    let mut isolated = vec![0u64; p_grid.len()];
    let mut uniforms = vec![0.0f64; edges.len()];
    for _ in 0..trials {
        if coupled {
            uniforms.iter_mut().for_each(|u| *u = rng.gen());
        }
        for (i, &p) in p_grid.iter().enumerate() {
            if !coupled {
                uniforms.iter_mut().for_each(|u| *u = rng.gen());
            }
            let kept = edges.iter().zip(&uniforms).filter(|(_, &u)| u >= p).map(|(&e, _)| e);
            let (disc, iso) = survive(n, kept);
            disconnected[i] += disc as u64;
            isolated[i] += iso as u64;
        }
    }
    let d = DegreeSequence::new(g.degrees());
    let mut report = ResilienceReport {
        p_grid: p_grid.to_vec(),
        disconnect_prob: Vec::new(),
        ci_low: Vec::new(),
        ci_high: Vec::new(),
        isolation_bound: Vec::new(),
        isolation_bound_raw: Vec::new(),
        isolated_freq: Vec::new(),
        disconnected_count: disconnected.clone(),
        isolated_count: isolated.clone(),
        trials,
        coupled,
        thresholds: None,
    };
    for (i, &p) in p_grid.iter().enumerate() {
        let (lo, hi) = wilson_interval(disconnected[i], trials);
        let (capped, raw) = isolation_bound(&d, p)?;
        report.disconnect_prob.push(disconnected[i] as f64 / trials as f64);
        report.ci_low.push(lo);
        report.ci_high.push(hi);
        report.isolation_bound.push(capped);
        report.isolation_bound_raw.push(raw);
        report.isolated_freq.push(isolated[i] as f64 / trials as f64);
    }
    Ok(report)
}
