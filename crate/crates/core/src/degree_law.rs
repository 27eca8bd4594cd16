//! The tilted degree law
//!
//! ```text
//! P(D = j) = f(j, γ) / F(γ),   f(j, γ) = exp(-β j² + γ j ln n) / j!
//! ```
//!
//! with its normalizer, moments, mode, γ-calibration to a target mean
//! `c ln n`, sampling conditioned on an exact degree sum, and the degree
//! concentration report.
//!
//! All weights are handled in log space; `F(γ)` itself overflows `f64` for
//! moderate `c ln n`, so it is exposed as `ln F`.

use rand::Rng;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::graph::DegreeSequence;
use crate::scalar::{log_sum_exp, Scalar};

const MOMENT_REL_CUTOFF: f64 = 1e-16;
const MOMENT_MAX_TERMS: usize = 10_000_000;
const ROOT_ITERATIONS: usize = 400;

/// The even degree total used for a regime `d̄ = c ln n`:
/// `2 · round(c n ln n / 2)`.
pub fn target_total(c: f64, n: usize) -> u64 {
    let nf = n as f64;
    2 * (c * nf * nf.ln() / 2.0).round() as u64
}

/// `h(x) = -ln(x+1) - (2x+1)β + γ ln n`. Decreasing in `x`; its root locates
/// the mode of the law.
pub fn mode_equation<T: Scalar>(x: T, beta: T, gamma: T, n: usize) -> T {
    let ln_n = T::from_count(n).ln();
    -(x + T::one()).ln() - (x + x + T::one()) * beta + gamma * ln_n
}

/// Closed-form asymptotic location of the mode,
/// `(1/2β)(γ ln n + ln ln n + γ/2β)`.
pub fn x_gamma_closed_form<T: Scalar>(beta: T, gamma: T, n: usize) -> Result<T> {
    if n < 2 {
        return input(format!("x_gamma needs n >= 2 (ln ln n), got {n}"));
    }
    if !(beta > T::zero()) {
        return input("beta must be positive");
    }
    let two_beta = beta + beta;
    let ln_n = T::from_count(n).ln();
    Ok((gamma * ln_n + ln_n.ln() + gamma / two_beta) / two_beta)
}

/// Root of [`mode_equation`] on `(-1, ∞)`, by bisection.
pub fn mode_root<T: Scalar>(beta: T, gamma: T, n: usize) -> Result<T> {
    if n < 2 || !(beta > T::zero()) {
        return input("mode_root needs beta > 0 and n >= 2");
    }
    let h = |x: T| mode_equation(x, beta, gamma, n);
    let mut lo = -T::one();
    let mut hi = T::one();
    let mut guard = 0;
    while h(hi) > T::zero() {
        lo = hi;
        hi = hi + hi;
        guard += 1;
        if guard > 200 {
            return Err(Error::Numeric("mode root bracket diverged".into()));
        }
    }
    for _ in 0..ROOT_ITERATIONS {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

/// `ψ(θ) = Σ_j e^{θj - βj²} / Σ_j e^{-βj²}` over all integers `j`.
///
/// Both sums run over a symmetric window around their peak wide enough that
/// the omitted tail is below `1e-14` of the total.
pub fn psi<T: Scalar>(theta: T, beta: T) -> Result<T> {
    if !(beta > T::zero()) {
        return input("psi needs beta > 0");
    }
    Ok((log_theta_sum(theta, beta) - log_theta_sum(T::zero(), beta)).exp())
}

fn log_theta_sum<T: Scalar>(theta: T, beta: T) -> T {
    // terms are e^{-β (j - j*)² + const}; half-width w gives tail ≲ e^{-β w²}
    let center = (theta / (beta + beta)).round();
    let half = (T::lit(36.0) / beta).sqrt().ceil() + T::lit(2.0);
    let (lo, hi) = (
        (center - half).to_i64().unwrap(),
        (center + half).to_i64().unwrap(),
    );
    let logs: Vec<T> = (lo..=hi)
        .map(|j| {
            let jf = T::from_i64(j).unwrap();
            theta * jf - beta * jf * jf
        })
        .collect();
    log_sum_exp(&logs)
}

/// Normalizer and first two moments of the law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments<T> {
    pub log_normalizer: T,
    pub mean: T,
    pub variance: T,
}

/// The degree law for fixed `(β, γ, n)` with its derived quantities.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeLaw<T> {
    pub beta: T,
    pub gamma: T,
    pub n: usize,
    /// Mean-degree coefficient when the law was calibrated to `c ln n`.
    pub c: Option<T>,
    /// `ln F(γ)` over the truncation window.
    pub log_normalizer: T,
    /// Exact root of the mode equation.
    pub x_gamma: T,
    /// Mode: smallest `j` with `f(j+1)/f(j) <= 1`.
    pub k_gamma: usize,
    /// `2β(x_γ - k_γ + 1/2)`, always in `[-β, β]`.
    pub alpha: T,
    /// Largest degree with nonzero mass after truncation.
    pub window: usize,
    #[serde(skip)]
    log_fact: Vec<T>,
}

impl<T: Scalar> DegreeLaw<T> {
    pub fn new(beta: T, gamma: T, n: usize) -> Result<Self> {
        if !(beta > T::zero()) || !beta.is_finite() {
            return input("beta must be positive and finite");
        }
        if !gamma.is_finite() {
            return input("gamma must be finite");
        }
        if n < 2 {
            return input(format!("degree law needs n >= 2, got {n}"));
        }
        let x_gamma = mode_root(beta, gamma, n)?;
        let ln_n = T::from_count(n).ln();
        let log_ratio = |j: usize| {
            let jf = T::from_count(j);
            -(jf + jf + T::one()) * beta + gamma * ln_n - (jf + T::one()).ln()
        };
        let start = x_gamma.floor().to_i64().unwrap_or(0).saturating_sub(2).max(0) as usize;
        let mut k = start;
        while log_ratio(k) > T::zero() {
            k += 1;
        }
        // the scan must not have started past the first crossing
        while k > 0 && log_ratio(k - 1) <= T::zero() {
            k -= 1;
        }
        let window = k + (40.0 / beta.as_f64()).sqrt().ceil() as usize + 10;
        let mut log_fact = Vec::with_capacity(window + 1);
        let mut acc = T::zero();
        log_fact.push(acc);
        for j in 1..=window {
            acc = acc + T::from_count(j).ln();
            log_fact.push(acc);
        }
        let mut law = DegreeLaw {
            beta,
            gamma,
            n,
            c: None,
            log_normalizer: T::zero(),
            x_gamma,
            k_gamma: k,
            alpha: (beta + beta) * (x_gamma - T::from_count(k) + T::lit(0.5)),
            window,
            log_fact,
        };
        let logs: Vec<T> = (0..=window).map(|j| law.log_weight(j)).collect();
        law.log_normalizer = log_sum_exp(&logs);
        Ok(law)
    }

    fn log_factorial(&self, j: usize) -> T {
        match self.log_fact.get(j) {
            Some(&v) => v,
            None => {
                let last = self.log_fact.len() - 1;
                (last + 1..=j).fold(self.log_fact[last], |a, i| a + T::from_count(i).ln())
            }
        }
    }

    /// `ln f(j, γ)`.
    pub fn log_weight(&self, j: usize) -> T {
        let jf = T::from_count(j);
        let ln_n = T::from_count(self.n).ln();
        -self.beta * jf * jf + self.gamma * jf * ln_n - self.log_factorial(j)
    }

    pub fn log_pmf(&self, j: usize) -> T {
        self.log_weight(j) - self.log_normalizer
    }

    pub fn pmf(&self, j: usize) -> T {
        self.log_pmf(j).exp()
    }

    /// Normalizer, mean and variance from an adaptively truncated series:
    /// summation stops past the mode once a term drops below `1e-16` of the
    /// running sum.
    pub fn moments(&self) -> Result<Moments<T>> {
        let reference = self.log_weight(self.k_gamma);
        let k = T::from_count(self.k_gamma);
        let cutoff = T::lit(MOMENT_REL_CUTOFF);
        let (mut s0, mut s1, mut s2) = (T::zero(), T::zero(), T::zero());
        for j in 0..MOMENT_MAX_TERMS {
            let w = (self.log_weight(j) - reference).exp();
            let offset = T::from_count(j) - k;
            s0 = s0 + w;
            s1 = s1 + offset * w;
            s2 = s2 + offset * offset * w;
            if j > self.k_gamma && w < cutoff * s0 {
                let shift = s1 / s0;
                return Ok(Moments {
                    log_normalizer: reference + s0.ln(),
                    mean: k + shift,
                    variance: (s2 / s0 - shift * shift).max(T::zero()),
                });
            }
        }
        Err(Error::Numeric(format!(
            "moment series did not converge within {MOMENT_MAX_TERMS} terms"
        )))
    }

    /// `E[e^{θD}]` summed over the truncation window.
    pub fn mgf(&self, theta: T) -> T {
        let logs: Vec<T> = (0..=self.window)
            .map(|j| self.log_pmf(j) + theta * T::from_count(j))
            .collect();
        log_sum_exp(&logs).exp()
    }

    /// Large-`n` form of the MGF, `e^{θk_γ} ψ(θ+α) / ψ(α)`.
    pub fn mgf_asymptotic(&self, theta: T) -> Result<T> {
        Ok((theta * T::from_count(self.k_gamma)).exp() * psi(theta + self.alpha, self.beta)?
            / psi(self.alpha, self.beta)?)
    }

    /// Cumulative table for inverse-transform sampling.
    pub fn sampler(&self) -> DegreeSampler {
        let log_pmf: Vec<f64> = (0..=self.window).map(|j| self.log_pmf(j).as_f64()).collect();
        let mut cdf = Vec::with_capacity(log_pmf.len());
        let mut acc = 0.0;
        for lp in &log_pmf {
            acc += lp.exp();
            cdf.push(acc);
        }
        let total = acc;
        cdf.iter_mut().for_each(|v| *v /= total);
        *cdf.last_mut().unwrap() = 1.0;
        DegreeSampler { n: self.n, cdf, log_pmf }
    }
}

/// Calibrates γ so the law's mean equals `c ln n`, within `1e-6`.
///
/// The mean is continuous and increasing in γ. Starting from the γ that puts
/// the closed-form mode location at `c ln n`, a bracket is widened
/// geometrically and then bisected.
pub fn calibrate_gamma<T: Scalar>(beta: T, c: T, n: usize) -> Result<DegreeLaw<T>> {
    if !(beta > T::zero()) || !(c > T::zero()) {
        return input("calibration needs beta > 0 and c > 0");
    }
    if n < 3 {
        return input(format!("calibration needs n >= 3, got {n}"));
    }
    let ln_n = T::from_count(n).ln();
    let target = c * ln_n;
    let two_beta = beta + beta;
    let gamma0 = (two_beta * target - ln_n.ln()) / (ln_n + T::one() / two_beta);
    let mean_at = |g: T| -> Result<T> { Ok(DegreeLaw::new(beta, g, n)?.moments()?.mean) };

    let mut step = T::lit(0.5);
    let (mut lo, mut hi) = (gamma0 - step, gamma0 + step);
    let mut expansions = 0;
    while mean_at(lo)? > target {
        step = step + step;
        lo = gamma0 - step;
        expansions += 1;
        if expansions > 60 {
            return Err(Error::Numeric("gamma bracket expansion failed (low side)".into()));
        }
    }
    step = T::lit(0.5);
    while mean_at(hi)? < target {
        step = step + step;
        hi = gamma0 + step;
        expansions += 1;
        if expansions > 120 {
            return Err(Error::Numeric("gamma bracket expansion failed (high side)".into()));
        }
    }
    let tol = T::lit(1e-12) * target.max(T::one());
    let mut best = (T::infinity(), gamma0);
    for _ in 0..ROOT_ITERATIONS {
        let mid = (lo + hi) / T::lit(2.0);
        let diff = mean_at(mid)? - target;
        if diff.abs() < best.0 {
            best = (diff.abs(), mid);
        }
        if diff.abs() <= tol || mid <= lo || mid >= hi {
            break;
        }
        if diff < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let limit = T::lit(1e-6).max(T::lit(100.0) * T::epsilon() * target);
    if best.0 > limit {
        return Err(Error::Numeric(format!(
            "calibration residual {} exceeds {}",
            best.0, limit
        )));
    }
    let mut law = DegreeLaw::new(beta, best.1, n)?;
    law.c = Some(c);
    Ok(law)
}

/// Inverse-CDF sampler for a single degree.
#[derive(Debug, Clone)]
pub struct DegreeSampler {
    n: usize,
    cdf: Vec<f64>,
    log_pmf: Vec<f64>,
}

/// How a conditioned degree sequence was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditioningMethod {
    Rejection,
    Exchange,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionedDegrees {
    pub degrees: DegreeSequence,
    /// Full i.i.d. draws made, including the accepted one.
    pub attempts: u64,
    pub method: ConditioningMethod,
}

impl DegreeSampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }

    pub fn max_degree(&self) -> usize {
        self.cdf.len() - 1
    }

    /// `n` i.i.d. degrees conditioned on summing to `target_total`.
    ///
    /// Plain rejection first. After `⌈100√n⌉` failures the last draw is
    /// repaired to the right sum by single-coordinate ±1 moves and then mixed
    /// by `10n` pairwise exchange moves, which leave the conditional law
    /// invariant.
    pub fn sample_conditioned<R: Rng + ?Sized>(
        &self,
        target_total: u64,
        rng: &mut R,
    ) -> Result<ConditionedDegrees> {
        if target_total % 2 != 0 {
            return input(format!("target total {target_total} is odd"));
        }
        if target_total > (self.n * self.max_degree()) as u64 {
            return input(format!(
                "target total {target_total} exceeds n * max degree = {}",
                self.n * self.max_degree()
            ));
        }
        let max_failures = (100.0 * (self.n as f64).sqrt()).ceil() as u64;
        let mut degrees = vec![0usize; self.n];
        for attempt in 1..=max_failures + 1 {
            let mut sum = 0u64;
            for d in degrees.iter_mut() {
                *d = self.draw(rng);
                sum += *d as u64;
            }
            if sum == target_total {
                return Ok(ConditionedDegrees {
                    degrees: DegreeSequence::new(degrees),
                    attempts: attempt,
                    method: ConditioningMethod::Rejection,
                });
            }
        }
        self.exchange_repair(&mut degrees, target_total, rng);
        Ok(ConditionedDegrees {
            degrees: DegreeSequence::new(degrees),
            attempts: max_failures + 1,
            method: ConditioningMethod::Exchange,
        })
    }

    fn exchange_repair<R: Rng + ?Sized>(&self, d: &mut [usize], target: u64, rng: &mut R) {
        let n = d.len();
        let top = self.max_degree();
        let lp = |j: usize| self.log_pmf[j];
        let mut sum: u64 = d.iter().map(|&x| x as u64).sum();
        while sum != target {
            let i = rng.gen_range(0..n);
            let up = sum < target;
            let next = match (up, d[i]) {
                (true, x) if x < top => x + 1,
                (false, x) if x > 0 => x - 1,
                _ => continue,
            };
            if rng.gen::<f64>().ln() < lp(next) - lp(d[i]) {
                d[i] = next;
                if up {
                    sum += 1;
                } else {
                    sum -= 1;
                }
            }
        }
        if n < 2 {
            return;
        }
        for _ in 0..10 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n - 1);
            let j = if j >= i { j + 1 } else { j };
            if d[j] == 0 || d[i] == top {
                continue;
            }
            let log_ratio = lp(d[i] + 1) + lp(d[j] - 1) - lp(d[i]) - lp(d[j]);
            if rng.gen::<f64>().ln() < log_ratio {
                d[i] += 1;
                d[j] -= 1;
            }
        }
    }
}

/// Convenience wrapper: builds the sampler and draws one conditioned sequence.
pub fn sample_conditioned_degrees<T: Scalar, R: Rng + ?Sized>(
    law: &DegreeLaw<T>,
    target_total: u64,
    rng: &mut R,
) -> Result<ConditionedDegrees> {
    law.sampler().sample_conditioned(target_total, rng)
}

/// Classification of a degree sequence against the concentration sets:
/// `A` (total equals the rounded `c n ln n`), `A1(α₁, α₂)` (every degree
/// within `[-√(α₁ ln n), +√(α₂ ln n)]` of the mean) and `A2` (every degree
/// at most `n^{1/4}`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub alpha1: f64,
    pub alpha2: f64,
    pub in_a: bool,
    pub in_a1: bool,
    pub in_a2: bool,
    /// `max_i (d_i - d̄) / √(ln n)`, clamped at 0.
    pub max_pos_dev: f64,
    /// `max_i (d̄ - d_i) / √(ln n)`, clamped at 0.
    pub max_neg_dev: f64,
    pub mean: f64,
    pub variance: f64,
    pub target_total: u64,
}

/// Default window constant `4/β` for both sides.
pub fn default_alpha(beta: f64) -> f64 {
    4.0 / beta
}

pub fn concentration_report(
    d: &DegreeSequence,
    c: f64,
    alpha1: f64,
    alpha2: f64,
) -> ConcentrationReport {
    let n = d.len();
    let ln_n = (n.max(1) as f64).ln();
    let scale = ln_n.sqrt();
    let (max_pos_dev, max_neg_dev) = if n < 2 {
        (0.0, 0.0)
    } else {
        (
            ((d.d_max as f64 - d.mean) / scale).max(0.0),
            ((d.mean - d.d_min as f64) / scale).max(0.0),
        )
    };
    let quarter = (n as f64).powf(0.25);
    let target = target_total(c, n);
    ConcentrationReport {
        alpha1,
        alpha2,
        in_a: d.total == target,
        in_a1: max_pos_dev <= alpha2.sqrt() && max_neg_dev <= alpha1.sqrt(),
        in_a2: d.degrees.iter().all(|&x| x as f64 <= quarter),
        max_pos_dev,
        max_neg_dev,
        mean: d.mean,
        variance: d.variance,
        target_total: target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn target_total_is_even_and_rounded() {
        // 2 * 1000 * ln 1000 / 2 = 6907.755...
        assert_eq!(target_total(2.0, 1000), 13816);
        assert_eq!(target_total(3.0, 800) % 2, 0);
    }

    #[test]
    fn closed_form_value() {
        let n = 10f64.exp().round() as usize; // 22026
        let x = x_gamma_closed_form(1.0, 1.0, n).unwrap();
        let ln_n = (n as f64).ln();
        let expect = 0.5 * (ln_n + ln_n.ln() + 0.5);
        assert!((x - expect).abs() < 1e-12);
        // with ln n = 10 exactly the value is 6.40129...
        assert!((0.5 * (10.0 + 10f64.ln() + 0.5) - 6.401_292_546_497_023).abs() < 1e-12);
        assert!(x_gamma_closed_form(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn closed_form_increasing_in_gamma() {
        let a = x_gamma_closed_form(1.0, 0.5, 1000).unwrap();
        let b = x_gamma_closed_form(1.0, 1.0, 1000).unwrap();
        assert!(b > a);
    }

    #[test]
    fn root_solves_mode_equation() {
        for &(beta, gamma, n) in &[(1.0f64, 1.0, 1_000_000usize), (0.5, 1.0, 100), (2.0, 3.0, 1000)] {
            let x = mode_root(beta, gamma, n).unwrap();
            assert!(mode_equation(x, beta, gamma, n).abs() < 1e-9);
        }
        // h(0) < 0: root lies in (-1, 0)
        let x = mode_root(5.0, 0.1, 10).unwrap();
        assert!(x > -1.0 && x < 0.0);
    }

    #[test]
    fn mode_is_k_gamma_and_alpha_in_range() {
        for &(beta, gamma) in &[(0.5, 1.0), (1.0, 2.0), (2.0, 3.0), (5.0, 0.1)] {
            let law = DegreeLaw::<f64>::new(beta, gamma, 100).unwrap();
            let argmax = (0..=law.window)
                .max_by(|&a, &b| law.pmf(a).partial_cmp(&law.pmf(b)).unwrap())
                .unwrap();
            assert_eq!(argmax, law.k_gamma);
            assert!(law.alpha.abs() <= beta + 1e-12);
            if law.x_gamma >= 0.0 {
                assert_eq!(law.k_gamma, law.x_gamma.floor() as usize + 1);
            }
        }
    }

    #[test]
    fn pmf_normalizes() {
        let law = DegreeLaw::<f64>::new(0.5, 1.0, 100).unwrap();
        let total: f64 = (0..=law.window).map(|j| law.pmf(j)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_bound_holds_across_window() {
        let law = DegreeLaw::<f64>::new(1.0, 2.0, 1000).unwrap();
        let k = law.k_gamma as i64;
        let lk = law.log_weight(law.k_gamma);
        for j in 0..=law.window {
            let off = (j as i64 - k).abs() as f64;
            let log_ratio = law.log_weight(j) - lk;
            assert!(log_ratio <= -off * (off - 1.0) + 1e-12, "j = {j}");
            // the squared form only bounds off-mode terms; at the mode it reads 1 <= e^{-β}
            if off >= 1.0 {
                assert!(log_ratio <= -(off - 1.0).powi(2) + 1e-12, "j = {j}");
            }
        }
    }

    #[test]
    fn psi_basic_identities() {
        assert!((psi(0.0f64, 0.7).unwrap() - 1.0).abs() < 1e-15);
        let a = psi(1.3f64, 0.7).unwrap();
        let b = psi(-1.3, 0.7).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(psi(1.0, 0.0).is_err());
    }

    #[test]
    fn f32_law_normalizes() {
        let law = DegreeLaw::<f32>::new(1.0, 1.5, 500).unwrap();
        let total: f32 = (0..=law.window).map(|j| law.pmf(j)).sum();
        assert!((total - 1.0).abs() < 1e-5);
        let m = law.moments().unwrap();
        let m64 = DegreeLaw::<f64>::new(1.0, 1.5, 500).unwrap().moments().unwrap();
        assert!((m.mean as f64 - m64.mean).abs() < 1e-3);
    }

    #[test]
    fn calibration_hits_target() {
        let law = calibrate_gamma(1.0, 2.0, 1000).unwrap();
        let m = law.moments().unwrap();
        assert!((m.mean - 2.0 * 1000f64.ln()).abs() <= 1e-6);
        assert_eq!(law.c, Some(2.0));
        let again = calibrate_gamma(1.0, 2.0, 1000).unwrap();
        assert_eq!(again.gamma, law.gamma);
        let higher = calibrate_gamma(1.0, 3.0, 1000).unwrap();
        assert!(higher.gamma > law.gamma);
        assert!(calibrate_gamma(1.0, 2.0, 2).is_err());
        assert!(calibrate_gamma(0.0, 2.0, 100).is_err());
    }

    #[test]
    fn conditioned_sum_is_exact() {
        let law = calibrate_gamma(1.0, 2.0, 200).unwrap();
        let target = target_total(2.0, 200);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let s = sample_conditioned_degrees(&law, target, &mut rng).unwrap();
            assert_eq!(s.degrees.total, target);
            assert_eq!(s.degrees.len(), 200);
        }
        assert!(sample_conditioned_degrees(&law, target + 1, &mut rng).is_err());
    }

    #[test]
    fn exchange_fallback_reaches_target() {
        // far-off target forces the exchange path
        let law = calibrate_gamma(1.0, 2.0, 50).unwrap();
        let target = 2 * (law.k_gamma as u64 + 1) * 25;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = sample_conditioned_degrees(&law, target, &mut rng).unwrap();
        assert_eq!(s.method, ConditioningMethod::Exchange);
        assert_eq!(s.degrees.total, target);
    }

    #[test]
    fn concentration_examples() {
        let n = 1000;
        let c = 2.0;
        let d = (c * (n as f64).ln()).round() as usize;
        let flat = DegreeSequence::new(vec![d; n]);
        let r = concentration_report(&flat, c, 0.1, 0.1);
        assert!(r.in_a1);
        assert_eq!((r.max_pos_dev, r.max_neg_dev), (0.0, 0.0));

        // one vertex 4 above the mean, one 4 below; 4 / sqrt(ln 55) = 1.998
        let n = 55;
        let mut v = vec![10usize; n];
        v[0] = 14;
        v[1] = 6;
        let r = concentration_report(&DegreeSequence::new(v), 1.0, 1.0, 1.0);
        assert!(!r.in_a1);
        assert!((r.max_pos_dev - 2.0).abs() < 0.01);

        let mut v = vec![1usize; 16];
        v[0] = 16;
        let r = concentration_report(&DegreeSequence::new(v), 1.0, 1.0, 1.0);
        assert!(!r.in_a2);
    }
}
