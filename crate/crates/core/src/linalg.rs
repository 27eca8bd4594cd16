//! Symmetric eigenvalue routines: dense Householder tridiagonalization with
//! implicit QL, and a Lanczos iteration with full reorthogonalization for
//! extreme eigenvalues of large sparse operators.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const QL_MAX_SWEEPS: usize = 60;

/// Dense symmetric matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseSymmetric<T> {
    pub fn zeros(n: usize) -> Self {
        DenseSymmetric { n, data: vec![T::zero(); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Reduces to tridiagonal form, returning `(diagonal, off_diagonal)`
    /// with `off_diagonal[k]` coupling rows `k` and `k+1`.
    pub fn tridiagonalize(mut self) -> (Vec<T>, Vec<T>) {
        let n = self.n;
        let mut diag = vec![T::zero(); n];
        let mut off = vec![T::zero(); n.saturating_sub(1)];
        let two = T::lit(2.0);
        let mut v = vec![T::zero(); n];
        let mut p = vec![T::zero(); n];
        for k in 0..n.saturating_sub(2) {
            diag[k] = self.get(k, k);
            let norm = (k + 1..n).map(|i| self.get(i, k).powi(2)).sum::<T>().sqrt();
            if norm == T::zero() {
                off[k] = T::zero();
                continue;
            }
            let x0 = self.get(k + 1, k);
            let alpha = if x0 > T::zero() { -norm } else { norm };
            for i in k + 1..n {
                v[i] = self.get(i, k);
            }
            v[k + 1] = v[k + 1] - alpha;
            let vnorm = (k + 1..n).map(|i| v[i] * v[i]).sum::<T>().sqrt();
            if vnorm == T::zero() {
                off[k] = x0;
                continue;
            }
            for i in k + 1..n {
                v[i] = v[i] / vnorm;
            }
            // trailing block B <- H B H with H = I - 2 v vᵀ
            for i in k + 1..n {
                let row = &self.data[i * n + k + 1..i * n + n];
                p[i] = row.iter().zip(&v[k + 1..n]).map(|(&a, &b)| a * b).sum();
            }
            let kappa: T = (k + 1..n).map(|i| v[i] * p[i]).sum();
            for i in k + 1..n {
                p[i] = p[i] - kappa * v[i];
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let cur = self.data[i * n + j];
                    self.data[i * n + j] = cur - two * (v[i] * p[j] + p[i] * v[j]);
                }
            }
            off[k] = alpha;
        }
        if n >= 2 {
            diag[n - 2] = self.get(n - 2, n - 2);
            off[n - 2] = self.get(n - 1, n - 2);
        }
        if n >= 1 {
            diag[n - 1] = self.get(n - 1, n - 1);
        }
        (diag, off)
    }
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. Returned in ascending order.
pub fn tridiagonal_eigenvalues<T: Scalar>(diag: &[T], off: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..off.len().min(n)].copy_from_slice(&off[..off.len().min(n)]);
    let two = T::lit(2.0);
    let eps = T::epsilon();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(Error::Numeric("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Full spectrum of a dense symmetric matrix, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
}

impl<T: Scalar> SymmetricEigen<T> {
    pub fn new(matrix: DenseSymmetric<T>) -> Result<Self> {
        let (d, e) = matrix.tridiagonalize();
        Ok(SymmetricEigen { values: tridiagonal_eigenvalues(&d, &e)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Smallest,
    Largest,
}

/// Extreme eigenvalue of a symmetric operator restricted to the orthogonal
/// complement of the unit vector `deflate`.
///
/// Lanczos with full reorthogonalization against both the Krylov basis and
/// `deflate`. Stops when the target Ritz value changes by less than
/// `rel_tol` (relative to the spectral scale seen so far) between checks, or
/// on breakdown.
pub fn lanczos_extreme<T, F>(
    n: usize,
    matvec: F,
    deflate: &[T],
    which: Extreme,
    rel_tol: T,
    max_iter: usize,
) -> Result<T>
where
    T: Scalar,
    F: Fn(&[T], &mut [T]),
{
    if n < 2 {
        return Err(Error::Input("Lanczos needs n >= 2".into()));
    }
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
    let project_out = |x: &mut [T], u: &[T]| {
        let c = dot(x, u);
        x.iter_mut().zip(u).for_each(|(a, &b)| *a = *a - c * b);
    };
    // deterministic start vector with no special structure
    let mut q: Vec<T> = (0..n)
        .map(|i| {
            let h = crate::rng::mix64(0x5eed, i as u64);
            T::lit((h >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        })
        .collect();
    project_out(&mut q, deflate);
    let norm = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x = *x / norm);

    let max_iter = max_iter.min(n - 1).max(1);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(max_iter);
    let mut alphas = Vec::with_capacity(max_iter);
    let mut betas: Vec<T> = Vec::with_capacity(max_iter);
    let mut w = vec![T::zero(); n];
    let mut previous: Option<T> = None;
    let pick = |vals: &[T]| match which {
        Extreme::Smallest => vals[0],
        Extreme::Largest => vals[vals.len() - 1],
    };
    for k in 0..max_iter {
        matvec(&q, &mut w);
        let a = dot(&w, &q);
        alphas.push(a);
        basis.push(q.clone());
        // two passes of classical Gram-Schmidt against everything seen
        for _ in 0..2 {
            project_out(&mut w, deflate);
            for b in &basis {
                project_out(&mut w, b);
            }
        }
        let beta = dot(&w, &w).sqrt();
        let check = k % 5 == 4 || k + 1 == max_iter || beta <= T::epsilon() * a.abs().max(T::one());
        if check {
            let vals = tridiagonal_eigenvalues(&alphas, &betas)?;
            let current = pick(&vals);
            let scale = vals[0].abs().max(vals[vals.len() - 1].abs()).max(T::epsilon());
            let converged = previous.is_some_and(|p| (current - p).abs() <= rel_tol * scale);
            if converged || beta <= T::epsilon() * scale || k + 1 == max_iter {
                return Ok(current);
            }
            previous = Some(current);
        }
        betas.push(beta);
        q.iter_mut().zip(&w).for_each(|(x, &y)| *x = y / beta);
    }
    unreachable!("loop returns on its last iteration")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[f64]]) -> DenseSymmetric<f64> {
        let n = rows.len();
        let mut m = DenseSymmetric::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = rows[i][j];
            }
        }
        m
    }

    #[test]
    fn two_by_two() {
        let e = SymmetricEigen::new(from_rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_and_trivial_sizes() {
        let e = SymmetricEigen::new(from_rows(&[&[3.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 2.0]]))
            .unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
        let one = SymmetricEigen::new(from_rows(&[&[5.0]])).unwrap();
        assert_eq!(one.values, vec![5.0]);
        assert!(SymmetricEigen::<f64>::new(DenseSymmetric::zeros(0)).unwrap().values.is_empty());
    }

    #[test]
    fn path_laplacian_closed_form() {
        // Laplacian of P_n has eigenvalues 2 - 2cos(πk/n)
        let n = 9;
        let mut m = DenseSymmetric::<f64>::zeros(n);
        for i in 0..n {
            let deg = if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
            m.set(i, i, deg);
            if i + 1 < n {
                m.set(i, i + 1, -1.0);
            }
        }
        let vals = SymmetricEigen::new(m).unwrap().values;
        for (k, v) in vals.iter().enumerate() {
            let expect = 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos();
            assert!((v - expect).abs() < 1e-12, "k={k}: {v} vs {expect}");
        }
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let n = 12;
        let mut m = DenseSymmetric::<f64>::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, ((i * 7 + j * 13) % 11) as f64 - 5.0);
            }
        }
        let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
        let frob: f64 = m.data.iter().map(|x| x * x).sum();
        let vals = SymmetricEigen::new(m).unwrap().values;
        assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-10);
        assert!((vals.iter().map(|x| x * x).sum::<f64>() - frob).abs() < 1e-9);
    }

    #[test]
    fn f32_two_by_two() {
        let mut m = DenseSymmetric::<f32>::zeros(2);
        m.set(0, 0, 2.0);
        m.set(1, 1, 2.0);
        m.set(0, 1, 1.0);
        let v = SymmetricEigen::new(m).unwrap().values;
        assert!((v[0] - 1.0).abs() < 1e-6 && (v[1] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn lanczos_matches_dense_on_cycle() {
        // cycle Laplacian, deflating the constant vector
        let n = 40;
        let matvec = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                y[i] = 2.0 * x[i] - x[(i + 1) % n] - x[(i + n - 1) % n];
            }
        };
        let ones = vec![1.0 / (n as f64).sqrt(); n];
        let l2 = lanczos_extreme(n, matvec, &ones, Extreme::Smallest, 1e-12, 200).unwrap();
        let expect = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
        assert!((l2 - expect).abs() < 1e-8 * expect.max(1.0), "{l2} vs {expect}");
        let top = lanczos_extreme(n, matvec, &ones, Extreme::Largest, 1e-12, 200).unwrap();
        assert!((top - 4.0).abs() < 1e-8);
    }
}
