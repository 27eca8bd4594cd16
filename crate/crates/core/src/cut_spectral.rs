//! Expansion and conductance by exhaustive subset enumeration, second
//! eigenvalues of the Laplacian and the random-walk matrix, Cheeger checks,
//! and sampled cut profiles.
//!
//! Definitions used throughout:
//!
//! * expansion `φ = min_{1 <= |U| <= n/2} e(U, Uᶜ) / |U|`
//! * conductance `Φ = min_{0 < Vol(U) <= E} e(U, Uᶜ) / Vol(U)`
//! * `λ₂(L)`: second-smallest eigenvalue of `L = D - A`
//! * `λ₂(P)`: second-largest eigenvalue of `P = D⁻¹A`, computed through the
//!   similar symmetric matrix `D^{-1/2} A D^{-1/2}`

use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::linalg::{lanczos_extreme, DenseSymmetric, Extreme, SymmetricEigen};
use crate::scalar::Scalar;

/// Largest `n` accepted by the exhaustive routines.
pub const BRUTE_FORCE_MAX_N: usize = 24;
/// Above this size the eigenvalue routines switch from dense to Lanczos.
pub const DENSE_MAX_N: usize = 2048;
pub const DENSE_TOLERANCE: f64 = 1e-9;
pub const ITERATIVE_TOLERANCE: f64 = 1e-6;
/// Slack used when checking the Cheeger inequalities in floating point.
pub const BOUND_SLACK: f64 = 1e-9;

/// Exact ratio `numerator / denominator` of two counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CutRatio {
    pub numerator: u64,
    pub denominator: u64,
}

impl CutRatio {
    pub fn value<T: Scalar>(&self) -> T {
        T::from_u64(self.numerator).unwrap() / T::from_u64(self.denominator).unwrap()
    }

    fn less_than(&self, other: &CutRatio) -> bool {
        (self.numerator as u128) * (other.denominator as u128)
            < (other.numerator as u128) * (self.denominator as u128)
    }

    fn equals(&self, other: &CutRatio) -> bool {
        (self.numerator as u128) * (other.denominator as u128)
            == (other.numerator as u128) * (self.denominator as u128)
    }
}

/// Minimizing ratio and the subset attaining it (sorted vertex list).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutMinimum {
    pub ratio: CutRatio,
    pub witness: Vec<usize>,
}

fn mask_to_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn check_brute_size(g: &Graph) -> Result<()> {
    if g.n() > BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity(format!(
            "exhaustive cut search limited to n <= {BRUTE_FORCE_MAX_N}, got {}",
            g.n()
        )));
    }
    Ok(())
}

/// Visits every subset in Gray-code order with `(mask, |U|, Vol(U), e(U,Uᶜ))`,
/// updating the cut in O(1) per step.
fn for_each_cut(g: &Graph, mut visit: impl FnMut(u64, usize, u64, u64)) -> Result<()> {
    let adj = g.adjacency_masks()?;
    let n = g.n();
    let (mut mask, mut size, mut vol, mut crossing) = (0u64, 0usize, 0u64, 0i64);
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u64 << v;
        let d = adj[v].count_ones() as i64;
        let inside = (adj[v] & mask & !bit).count_ones() as i64;
        if mask & bit == 0 {
            mask |= bit;
            size += 1;
            vol += d as u64;
            crossing += d - 2 * inside;
        } else {
            mask &= !bit;
            size -= 1;
            vol -= d as u64;
            crossing -= d - 2 * inside;
        }
        visit(mask, size, vol, crossing as u64);
    }
    Ok(())
}

fn keep_min(best: &mut Option<(CutRatio, u64)>, r: CutRatio, mask: u64) {
    let better = match best {
        None => true,
        Some((b, m)) => r.less_than(b) || (r.equals(b) && mask < *m),
    };
    if better {
        *best = Some((r, mask));
    }
}

/// Exact expansion by enumerating all subsets with `1 <= |U| <= ⌊n/2⌋`.
/// Ties go to the smallest bitmask.
pub fn brute_expansion(g: &Graph) -> Result<CutMinimum> {
    check_brute_size(g)?;
    if g.n() < 2 {
        return input("expansion needs n >= 2");
    }
    let half = g.n() / 2;
    let mut best = None;
    for_each_cut(g, |mask, size, _, crossing| {
        if size >= 1 && size <= half {
            keep_min(&mut best, CutRatio { numerator: crossing, denominator: size as u64 }, mask);
        }
    })?;
    let (ratio, mask) = best.expect("n >= 2 has a singleton subset");
    Ok(CutMinimum { ratio, witness: mask_to_vertices(mask) })
}

/// Exact conductance by enumerating all subsets with `0 < Vol(U) <= E`.
pub fn brute_conductance(g: &Graph) -> Result<CutMinimum> {
    check_brute_size(g)?;
    let e = g.edge_count() as u64;
    if e == 0 {
        return input("conductance needs at least one edge");
    }
    let mut best = None;
    for_each_cut(g, |mask, _, vol, crossing| {
        if vol >= 1 && vol <= e {
            keep_min(&mut best, CutRatio { numerator: crossing, denominator: vol }, mask);
        }
    })?;
    let (ratio, mask) = best.expect("an endpoint of any edge has 0 < Vol <= E");
    Ok(CutMinimum { ratio, witness: mask_to_vertices(mask) })
}

/// Dense path for `n <= DENSE_MAX_N`, Lanczos beyond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

impl EigenMethod {
    fn use_dense(self, n: usize) -> bool {
        match self {
            EigenMethod::Auto => n <= DENSE_MAX_N,
            EigenMethod::Dense => true,
            EigenMethod::Lanczos => false,
        }
    }
}

const LANCZOS_MAX_ITER: usize = 600;

pub fn lambda2_laplacian<T: Scalar>(g: &Graph) -> Result<T> {
    lambda2_laplacian_with(g, EigenMethod::Auto)
}

pub fn lambda2_laplacian_with<T: Scalar>(g: &Graph, method: EigenMethod) -> Result<T> {
    let n = g.n();
    if n < 2 {
        return input("lambda2 needs n >= 2");
    }
    if method.use_dense(n) {
        let mut m = DenseSymmetric::<T>::zeros(n);
        for v in 0..n {
            m.set(v, v, T::from_count(g.degree(v)));
        }
        for (u, v) in g.edges() {
            m.set(u, v, -T::one());
        }
        Ok(SymmetricEigen::new(m)?.values[1])
    } else {
        let ones = vec![T::one() / T::from_count(n).sqrt(); n];
        let matvec = |x: &[T], y: &mut [T]| {
            for v in 0..n {
                let nb: T = g.neighbors(v).iter().map(|&w| x[w]).sum();
                y[v] = T::from_count(g.degree(v)) * x[v] - nb;
            }
        };
        let val = lanczos_extreme(
            n,
            matvec,
            &ones,
            Extreme::Smallest,
            T::lit(ITERATIVE_TOLERANCE * 1e-3),
            LANCZOS_MAX_ITER,
        )?;
        Ok(val.max(T::zero()))
    }
}

pub fn lambda2_walk<T: Scalar>(g: &Graph) -> Result<T> {
    lambda2_walk_with(g, EigenMethod::Auto)
}

pub fn lambda2_walk_with<T: Scalar>(g: &Graph, method: EigenMethod) -> Result<T> {
    let n = g.n();
    if n < 2 {
        return input("lambda2 needs n >= 2");
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return input(format!("vertex {v} is isolated; the walk matrix is undefined"));
    }
    let inv_sqrt: Vec<T> = (0..n).map(|v| T::from_count(g.degree(v)).sqrt().recip()).collect();
    if method.use_dense(n) {
        let mut m = DenseSymmetric::<T>::zeros(n);
        for (u, v) in g.edges() {
            m.set(u, v, inv_sqrt[u] * inv_sqrt[v]);
        }
        let vals = SymmetricEigen::new(m)?.values;
        Ok(vals[n - 2])
    } else {
        // top eigenvector of D^{-1/2} A D^{-1/2} is proportional to √d
        let vol = T::from_count(2 * g.edge_count()).sqrt();
        let top: Vec<T> = (0..n).map(|v| T::from_count(g.degree(v)).sqrt() / vol).collect();
        let matvec = |x: &[T], y: &mut [T]| {
            for v in 0..n {
                let s: T = g.neighbors(v).iter().map(|&w| x[w] * inv_sqrt[w]).sum();
                y[v] = s * inv_sqrt[v];
            }
        };
        lanczos_extreme(
            n,
            matvec,
            &top,
            Extreme::Largest,
            T::lit(ITERATIVE_TOLERANCE * 1e-3),
            LANCZOS_MAX_ITER,
        )
    }
}

/// Expansion, conductance and second eigenvalues with both Cheeger
/// sandwiches evaluated:
///
/// * `φ²/(2 d_max) <= λ₂(L) <= 2φ`
/// * `Φ²/8 <= 1 - λ₂(P) <= 2Φ`
///
/// The tighter upper form `1 - λ₂(P) <= Φ` is evaluated and reported too; it
/// does not hold in general (the 6-cycle violates it).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport<T> {
    pub n: usize,
    pub edges: usize,
    pub phi: T,
    pub phi_witness: Vec<usize>,
    #[serde(rename = "Phi")]
    pub conductance: T,
    #[serde(rename = "Phi_witness")]
    pub conductance_witness: Vec<usize>,
    #[serde(rename = "lambda2_L")]
    pub lambda2_laplacian: T,
    #[serde(rename = "lambda2_P")]
    pub lambda2_walk: T,
    pub d_max: usize,
    pub laplacian_lower: T,
    pub laplacian_upper: T,
    pub walk_gap: T,
    pub walk_lower: T,
    pub walk_upper: T,
    pub laplacian_sandwich_holds: bool,
    pub walk_sandwich_holds: bool,
    /// Whether `1 - λ₂(P) <= Φ` holds for this graph.
    pub walk_unit_upper_holds: bool,
    pub eigen_tolerance: f64,
}

impl<T: Scalar> SpectralReport<T> {
    /// Descriptions of every failed inequality among the two sandwiches.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.laplacian_sandwich_holds {
            out.push(format!(
                "Laplacian sandwich {} <= {} <= {} fails",
                self.laplacian_lower, self.lambda2_laplacian, self.laplacian_upper
            ));
        }
        if !self.walk_sandwich_holds {
            out.push(format!(
                "walk sandwich {} <= {} <= {} fails",
                self.walk_lower, self.walk_gap, self.walk_upper
            ));
        }
        out
    }
}

pub fn cheeger_report<T: Scalar>(g: &Graph) -> Result<SpectralReport<T>> {
    check_brute_size(g)?;
    if g.n() < 2 || !g.is_connected() {
        return input("Cheeger report needs a connected graph with n >= 2");
    }
    let phi_min = brute_expansion(g)?;
    let cond_min = brute_conductance(g)?;
    let phi: T = phi_min.ratio.value();
    let conductance: T = cond_min.ratio.value();
    let l2: T = lambda2_laplacian(g)?;
    let p2: T = lambda2_walk(g)?;
    let d_max = g.degrees().into_iter().max().unwrap_or(0);
    let two = T::lit(2.0);
    let slack = T::lit(BOUND_SLACK);
    let laplacian_lower = phi * phi / (two * T::from_count(d_max));
    let laplacian_upper = two * phi;
    let walk_gap = T::one() - p2;
    let walk_lower = conductance * conductance / T::lit(8.0);
    let walk_upper = two * conductance;
    Ok(SpectralReport {
        n: g.n(),
        edges: g.edge_count(),
        phi,
        phi_witness: phi_min.witness,
        conductance,
        conductance_witness: cond_min.witness,
        lambda2_laplacian: l2,
        lambda2_walk: p2,
        d_max,
        laplacian_lower,
        laplacian_upper,
        walk_gap,
        walk_lower,
        walk_upper,
        laplacian_sandwich_holds: laplacian_lower <= l2 + slack && l2 <= laplacian_upper + slack,
        walk_sandwich_holds: walk_lower <= walk_gap + slack && walk_gap <= walk_upper + slack,
        walk_unit_upper_holds: walk_gap <= conductance + slack,
        eigen_tolerance: DENSE_TOLERANCE,
    })
}

/// Minimum normalized cut ratio `e(U,Uᶜ) / (u c ln n)` seen for one subset size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutBucket {
    pub u: usize,
    pub min_ratio: f64,
    /// Random subsets evaluated (exhaustive passes are not counted).
    pub samples: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutProfile {
    pub n: usize,
    pub c: f64,
    pub buckets: Vec<CutBucket>,
    /// `1 - min` over all buckets.
    pub empirical_delta: f64,
}

impl CutProfile {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("u,min_ratio,samples\n");
        for b in &self.buckets {
            s.push_str(&format!(
                "{},{},{}\n",
                b.u,
                crate::report::format_sig9(b.min_ratio),
                b.samples
            ));
        }
        s
    }
}

/// Subset sizes `1, 2, 4, …` up to `⌊n/2⌋`, with `⌊n/2⌋` itself appended.
pub fn bucket_sizes(n: usize) -> Vec<usize> {
    let half = n / 2;
    let mut sizes: Vec<usize> = std::iter::successors(Some(1usize), |&u| Some(u * 2))
        .take_while(|&u| u <= half)
        .collect();
    if half >= 1 && sizes.last() != Some(&half) {
        sizes.push(half);
    }
    sizes
}

fn crossing_of(g: &Graph, members: &[usize], member: &mut [bool]) -> u64 {
    members.iter().for_each(|&v| member[v] = true);
    let crossing = members
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&w| !member[w]).count() as u64)
        .sum();
    members.iter().for_each(|&v| member[v] = false);
    crossing
}

/// Exhaustive minimum crossing over all `u`-subsets (bitmask enumeration).
fn min_crossing_exhaustive(adj: &[u64], u: usize) -> u64 {
    let n = adj.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut mask = (1u64 << u) - 1;
    let mut best = u64::MAX;
    loop {
        let mut crossing = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            crossing += (adj[v] & !mask & full).count_ones() as u64;
        }
        best = best.min(crossing);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
        if mask > full {
            break;
        }
    }
    best
}

/// Cut profile: for each bucket size `u`, the smallest
/// `e(U,Uᶜ) / (u c ln n)` over `trials` uniform random `u`-subsets.
///
/// Singletons are always scanned exhaustively, and so is every bucket with
/// `u <= 12` when `n <= 24`.
pub fn cut_profile<R: Rng + ?Sized>(
    g: &Graph,
    c: f64,
    trials: u64,
    rng: &mut R,
) -> Result<CutProfile> {
    let n = g.n();
    if n < 4 {
        return input(format!("cut profile needs n >= 4, got {n}"));
    }
    if !(c > 0.0) {
        return input("c must be positive");
    }
    let scale = c * (n as f64).ln();
    let adj = if n <= BRUTE_FORCE_MAX_N { Some(g.adjacency_masks()?) } else { None };
    let mut member = vec![false; n];
    let mut buckets = Vec::new();
    for u in bucket_sizes(n) {
        let mut best = u64::MAX;
        for _ in 0..trials {
            let subset = index::sample(rng, n, u).into_vec();
            best = best.min(crossing_of(g, &subset, &mut member));
        }
        let mut exhaustive = false;
        if u == 1 {
            best = best.min((0..n).map(|v| g.degree(v) as u64).min().unwrap());
            exhaustive = true;
        } else if let (Some(adj), true) = (&adj, u <= 12) {
            best = best.min(min_crossing_exhaustive(adj, u));
            exhaustive = true;
        }
        buckets.push(CutBucket {
            u,
            min_ratio: best as f64 / (u as f64 * scale),
            samples: trials,
            exhaustive,
        });
    }
    let global = buckets.iter().map(|b| b.min_ratio).fold(f64::INFINITY, f64::min);
    Ok(CutProfile { n, c, buckets, empirical_delta: 1.0 - global })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, cycle, path, star};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < DENSE_TOLERANCE
    }

    #[test]
    fn expansion_examples() {
        let k4 = brute_expansion(&complete(4)).unwrap();
        assert_eq!(k4.ratio.value::<f64>(), 2.0);
        let c6 = brute_expansion(&cycle(6)).unwrap();
        assert_eq!(c6.ratio, CutRatio { numerator: 2, denominator: 3 });
        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(brute_expansion(&split).unwrap().ratio.numerator, 0);
        assert!(matches!(brute_expansion(&cycle(25)), Err(Error::Capacity(_))));
    }

    #[test]
    fn expansion_tie_break_is_smallest_mask() {
        // every singleton of K4 ties at 3/1 > 2; every pair ties at 4/2
        let k4 = brute_expansion(&complete(4)).unwrap();
        assert_eq!(k4.witness, vec![0, 1]);
    }

    #[test]
    fn conductance_examples() {
        assert_eq!(brute_conductance(&complete(4)).unwrap().ratio.value::<f64>(), 4.0 / 6.0);
        assert_eq!(brute_conductance(&cycle(6)).unwrap().ratio.value::<f64>(), 1.0 / 3.0);
        assert_eq!(brute_conductance(&path(2)).unwrap().ratio.value::<f64>(), 1.0);
        assert!(brute_conductance(&Graph::empty(3)).is_err());
    }

    #[test]
    fn laplacian_examples() {
        assert!(close(lambda2_laplacian::<f64>(&complete(4)).unwrap(), 4.0));
        assert!(close(lambda2_laplacian::<f64>(&cycle(6)).unwrap(), 1.0));
        assert!(close(lambda2_laplacian::<f64>(&star(3)).unwrap(), 1.0));
        let f32_val: f32 = lambda2_laplacian(&complete(4)).unwrap();
        assert!((f32_val - 4.0).abs() < 1e-5);
    }

    #[test]
    fn walk_examples() {
        assert!(close(lambda2_walk::<f64>(&cycle(6)).unwrap(), 0.5));
        assert!(close(lambda2_walk::<f64>(&complete(4)).unwrap(), -1.0 / 3.0));
        assert!(close(lambda2_walk::<f64>(&path(2)).unwrap(), -1.0));
        assert!(lambda2_walk::<f64>(&Graph::empty(3)).is_err());
    }

    #[test]
    fn cheeger_fixtures() {
        let k4: SpectralReport<f64> = cheeger_report(&complete(4)).unwrap();
        assert!(close(k4.laplacian_lower, 4.0 / 6.0));
        assert!(close(k4.laplacian_upper, 4.0));
        assert!(k4.laplacian_sandwich_holds && k4.walk_sandwich_holds);

        let c6: SpectralReport<f64> = cheeger_report(&cycle(6)).unwrap();
        assert!(close(c6.laplacian_lower, 1.0 / 9.0));
        assert!(close(c6.laplacian_upper, 4.0 / 3.0));
        assert!(close(c6.walk_lower, 1.0 / 72.0));
        assert!(close(c6.walk_upper, 2.0 / 3.0));
        assert!(c6.violations().is_empty());
        assert!(!c6.walk_unit_upper_holds);

        let split = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(cheeger_report::<f64>(&split).is_err());
    }

    #[test]
    fn buckets() {
        assert_eq!(bucket_sizes(20), vec![1, 2, 4, 8, 10]);
        assert_eq!(bucket_sizes(16), vec![1, 2, 4, 8]);
        assert_eq!(bucket_sizes(5), vec![1, 2]);
    }

    #[test]
    fn complete_graph_singleton_ratio() {
        let n = 10;
        let g = complete(n);
        let c = (n as f64 - 1.0) / (n as f64).ln();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = cut_profile(&g, c, 20, &mut rng).unwrap();
        assert!((p.buckets[0].min_ratio - 1.0).abs() < 1e-12);
        assert!(p.buckets.iter().all(|b| b.u <= n / 2));
        // u = 5: 25 crossing edges over 5 * 9
        let last = p.buckets.last().unwrap();
        assert!((last.min_ratio - 25.0 / 45.0).abs() < 1e-12);
        assert!(p.to_csv().starts_with("u,min_ratio,samples\n1,1.00000000,20\n"));
    }

    #[test]
    fn exhaustive_min_matches_brute_force() {
        let g = cycle(10);
        let adj = g.adjacency_masks().unwrap();
        assert_eq!(min_crossing_exhaustive(&adj, 3), 2);
        assert_eq!(min_crossing_exhaustive(&adj, 1), 2);
    }
}
