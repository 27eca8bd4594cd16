//! Simple undirected graphs, degree statistics, cut arithmetic and the
//! edge-list text format.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{input, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Neighbor lists are kept sorted so membership is a binary search.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, out-of-range
    /// endpoints and repeated pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            if !g.insert_edge(u, v) {
                return input(format!("duplicate edge ({u}, {v})"));
            }
        }
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but silently merges repeated pairs.
    pub fn from_edges_dedup(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return input(format!("edge ({u}, {v}) out of range for n = {n}"));
        }
        if u == v {
            return input(format!("self-loop at vertex {u}"));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Inserts `{u, v}`; returns false if already present. No loop check.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                self.edge_count += 1;
                true
            }
        }
    }

    /// Removes `{u, v}`; returns false if it was absent.
    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Err(_) => false,
            Ok(i) => {
                self.adj[u].remove(i);
                let j = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(j);
                self.edge_count -= 1;
                true
            }
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Σ d_i², the unscaled energy.
    pub fn energy(&self) -> u64 {
        self.adj.iter().map(|nb| (nb.len() as u64).pow(2)).sum()
    }

    pub fn degree_stats(&self) -> DegreeSequence {
        DegreeSequence::new(self.degrees())
    }

    /// True iff a traversal from vertex 0 reaches every vertex. The graph on
    /// zero vertices counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Counts for the cut `(U, Uᶜ)`. Repeated vertices in `subset` are ignored.
    pub fn cut_stats(&self, subset: &[usize]) -> Result<CutStats> {
        let n = self.n();
        let mut member = vec![false; n];
        for &v in subset {
            if v >= n {
                return input(format!("vertex {v} out of range for n = {n}"));
            }
            member[v] = true;
        }
        let mut stats = CutStats::default();
        for (u, nb) in self.adj.iter().enumerate().filter(|(u, _)| member[*u]) {
            stats.subset_size += 1;
            stats.volume += nb.len() as u64;
            for &v in nb {
                if member[v] {
                    // each internal edge is seen from both endpoints
                    if u < v {
                        stats.internal += 1;
                    }
                } else {
                    stats.crossing += 1;
                }
            }
        }
        Ok(stats)
    }

    /// Adjacency rows as bitmasks, for exhaustive subset enumeration.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(crate::Error::Capacity(format!(
                "bitmask adjacency needs n <= 64, got {}",
                self.n()
            )));
        }
        Ok(self
            .adj
            .iter()
            .map(|nb| nb.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect())
    }

    /// Serializes to the edge-list format: a header line `n E` followed by one
    /// `u v` line per edge with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::with_capacity(16 + 12 * self.edge_count);
        writeln!(s, "{} {}", self.n(), self.edge_count).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Parses the edge-list format. Rejects malformed lines, `u >= v`,
    /// out-of-range vertices, duplicates and a mismatched edge count.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = match lines.next() {
            Some(h) => h,
            None => return input("edge list is empty"),
        };
        let [n, e] = parse_pair(header, 1)?;
        let mut g = Graph::empty(n);
        let mut count = 0usize;
        for (idx, line) in lines {
            let [u, v] = parse_pair(line, idx + 1)?;
            if u >= v {
                return input(format!("line {}: expected u < v, got {u} {v}", idx + 1));
            }
            g.check_pair(u, v)?;
            if !g.insert_edge(u, v) {
                return input(format!("line {}: duplicate edge {u} {v}", idx + 1));
            }
            count += 1;
        }
        if count != e {
            return input(format!("header declares {e} edges, found {count}"));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2]> {
    let mut it = line.split(' ');
    let parse = |tok: Option<&str>| -> Result<usize> {
        tok.and_then(|t| t.trim_end_matches('\r').parse().ok())
            .ok_or_else(|| crate::Error::Input(format!("line {lineno}: expected two integers, got {line:?}")))
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return input(format!("line {lineno}: trailing tokens in {line:?}"));
    }
    Ok([a, b])
}

/// Degree vector with its summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
    pub mean: f64,
    /// Population variance `(1/n) Σ (d_i - mean)²`.
    pub variance: f64,
    pub d_min: usize,
    pub d_max: usize,
    /// Σ d_i, i.e. twice the edge count of any realization.
    pub total: u64,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        let n = degrees.len();
        let total: u64 = degrees.iter().map(|&d| d as u64).sum();
        let sum_sq: u128 = degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
        let (mean, variance) = if n == 0 {
            (0.0, 0.0)
        } else {
            // n Σd² - (Σd)² is exact in integers
            let num = n as u128 * sum_sq - (total as u128) * (total as u128);
            (total as f64 / n as f64, num as f64 / (n as f64 * n as f64))
        };
        DegreeSequence {
            d_min: degrees.iter().copied().min().unwrap_or(0),
            d_max: degrees.iter().copied().max().unwrap_or(0),
            degrees,
            mean,
            variance,
            total,
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.degrees.iter().map(|&d| (d as u64).pow(2)).sum()
    }

    /// Largest `|d_i - mean|`.
    pub fn max_abs_deviation(&self) -> f64 {
        (self.d_max as f64 - self.mean).max(self.mean - self.d_min as f64).max(0.0)
    }
}

/// Counts describing a vertex subset `U` and its cut.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CutStats {
    pub subset_size: usize,
    /// Edges with both endpoints in `U`.
    pub internal: u64,
    /// Edges with exactly one endpoint in `U`.
    pub crossing: u64,
    /// Σ_{i∈U} d_i.
    pub volume: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, cycle};

    #[test]
    fn construction() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert!(tri.has_edge(2, 0));
        let empty = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        let g = Graph::from_edges_dedup(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(Graph::from_edges_dedup(3, &[(1, 1)]).is_err());
    }

    #[test]
    fn energy_values() {
        assert_eq!(complete(3).energy(), 12);
        assert_eq!(complete(4).energy(), 36);
        assert_eq!(Graph::empty(5).energy(), 0);
    }

    #[test]
    fn cut_examples() {
        let c6 = cycle(6);
        let s = c6.cut_stats(&[0, 1, 2]).unwrap();
        assert_eq!((s.internal, s.crossing, s.volume), (2, 2, 6));
        assert_eq!(c6.cut_stats(&[]).unwrap(), CutStats::default());
        let s = complete(4).cut_stats(&[0]).unwrap();
        assert_eq!((s.internal, s.crossing, s.volume), (0, 3, 3));
        assert!(c6.cut_stats(&[6]).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(cycle(6).is_connected());
        assert!(!Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(Graph::empty(1).is_connected());
        assert!(Graph::empty(0).is_connected());
        assert!(!Graph::empty(2).is_connected());
    }

    #[test]
    fn degree_statistics() {
        let k4 = complete(4).degree_stats();
        assert_eq!((k4.mean, k4.variance, k4.d_min, k4.d_max), (3.0, 0.0, 3, 3));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap().degree_stats();
        assert_eq!(star.degrees, vec![3, 1, 1, 1]);
        assert_eq!((star.mean, star.variance), (1.5, 0.75));
        let e = Graph::empty(3).degree_stats();
        assert_eq!((e.mean, e.variance), (0.0, 0.0));
    }

    #[test]
    fn edge_list_round_trip_and_rejections() {
        let g = cycle(5);
        let text = g.to_edge_list();
        assert!(text.starts_with("5 5\n0 1\n0 4\n1 2\n"));
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        for bad in [
            "",
            "3 1\n1 0\n",
            "3 1\n0 3\n",
            "3 2\n0 1\n0 1\n",
            "3 2\n0 1\n",
            "3 1\n0 1 2\n",
            "3 1\n0 x\n",
            "3 1\n1 1\n",
        ] {
            assert!(Graph::parse_edge_list(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn mutation_keeps_symmetry() {
        let mut g = Graph::empty(4);
        assert!(g.insert_edge(0, 3));
        assert!(!g.insert_edge(3, 0));
        assert!(g.insert_edge(1, 3));
        assert_eq!(g.neighbors(3), &[0, 1]);
        assert!(g.remove_edge(3, 0));
        assert!(!g.remove_edge(0, 3));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.neighbors(0), &[] as &[usize]);
    }
}
