//! Discrete power-law fitting by maximum likelihood with KS-minimizing
//! choice of the tail cutoff.
//!
//! For a candidate x_min the exponent estimate is the standard discrete
//! approximation
//!
//! ```text
//! alpha_hat = 1 + n_tail / sum ln(x_i / (x_min - 0.5))       (x_i >= x_min)
//! ```
//!
//! and the model tail CDF uses the Hurwitz zeta function,
//! P(X >= x) = zeta(alpha, x) / zeta(alpha, x_min). Among candidates with at
//! least MIN_TAIL points the fit with the smallest Kolmogorov-Smirnov
//! distance wins; if no candidate qualifies the fit is marked unreliable.

use serde::{Deserialize, Serialize};

use crate::metrics::MetricsError;

/// Minimum tail size for a candidate x_min to be considered reliable.
pub const MIN_TAIL: usize = 10;
/// Minimum number of samples the fitter accepts at all.
pub const MIN_SAMPLES: usize = 50;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub x_min: u64,
    pub ks_distance: f64,
    pub n_tail: usize,
    pub reliable: bool,
}

/// Hurwitz zeta  sum_{k>=0} (k + q)^(-s)  for s > 1, q > 0, via direct
/// summation plus an Euler-Maclaurin tail correction.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    const CUT: usize = 32;
    let mut sum = 0.0;
    for k in 0..CUT {
        sum += (k as f64 + q).powf(-s);
    }
    let a = CUT as f64 + q;
    // integral term, half-term, and the first Bernoulli correction
    sum += a.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * a.powf(-s);
    sum += s / 12.0 * a.powf(-s - 1.0);
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * a.powf(-s - 3.0);
    sum
}

fn ml_alpha(tail: &[u64], x_min: u64) -> f64 {
    let shift = x_min as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&x| (x as f64 / shift).ln()).sum();
    1.0 + tail.len() as f64 / log_sum
}

/// KS distance between the empirical tail CDF and the fitted discrete model.
fn ks_distance(tail_sorted: &[u64], x_min: u64, alpha: f64) -> f64 {
    let n = tail_sorted.len() as f64;
    let z_min = hurwitz_zeta(alpha, x_min as f64);
    let mut worst: f64 = 0.0;
    let mut i = 0usize;
    while i < tail_sorted.len() {
        let x = tail_sorted[i];
        let mut j = i;
        while j < tail_sorted.len() && tail_sorted[j] == x {
            j += 1;
        }
        // empirical CDF just below x and at x
        let below = i as f64 / n;
        let at = j as f64 / n;
        // model CDF at x: P(X <= x) = 1 - zeta(alpha, x+1)/zeta(alpha, x_min)
        let model = 1.0 - hurwitz_zeta(alpha, x as f64 + 1.0) / z_min;
        worst = worst.max((model - below).abs()).max((model - at).abs());
        i = j;
    }
    worst
}

/// Fit a discrete power law to a sample of values >= 1.
pub fn fit_powerlaw(samples: &[u64]) -> Result<PowerLawFit, MetricsError> {
    if samples.len() < MIN_SAMPLES {
        return Err(MetricsError::TooFewSamples {
            got: samples.len(),
            need: MIN_SAMPLES,
        });
    }
    if samples.iter().any(|&x| x < 1) {
        return Err(MetricsError::NonPositiveSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let mut candidates: Vec<u64> = sorted.clone();
    candidates.dedup();
    // x_min = max value leaves a constant tail with no exponent information
    if candidates.len() > 1 {
        candidates.pop();
    }

    let mut best: Option<PowerLawFit> = None;
    for &x_min in &candidates {
        let start = sorted.partition_point(|&x| x < x_min);
        let tail = &sorted[start..];
        if tail.len() < MIN_TAIL {
            continue;
        }
        let distinct = tail.windows(2).any(|w| w[0] != w[1]);
        if !distinct {
            continue;
        }
        let alpha = ml_alpha(tail, x_min);
        if !(alpha > 1.0) || !alpha.is_finite() {
            continue;
        }
        let ks = ks_distance(tail, x_min, alpha);
        let better = match &best {
            None => true,
            Some(b) => ks < b.ks_distance,
        };
        if better {
            best = Some(PowerLawFit {
                alpha,
                x_min,
                ks_distance: ks,
                n_tail: tail.len(),
                reliable: true,
            });
        }
    }

    match best {
        Some(fit) => Ok(fit),
        None => {
            // degenerate input (e.g. constant sequence): report a fit over
            // the whole sample, flagged unreliable
            let x_min = sorted[0];
            let tail = &sorted[..];
            let alpha = {
                let a = ml_alpha(tail, x_min);
                if a.is_finite() && a > 1.0 {
                    a
                } else {
                    f64::INFINITY
                }
            };
            let ks = if alpha.is_finite() {
                ks_distance(tail, x_min, alpha)
            } else {
                1.0
            };
            Ok(PowerLawFit {
                alpha,
                x_min,
                ks_distance: ks,
                n_tail: tail.len(),
                reliable: false,
            })
        }
    }
}

/// Exact inverse-CDF sampler for the discrete power law with the given
/// exponent and x_min; the independent generator used to validate the fitter.
pub struct PowerLawSampler {
    x_min: u64,
    /// survival S(x) = P(X >= x) for x = x_min .. x_min + table.len() - 1
    table: Vec<f64>,
    alpha: f64,
    z_min: f64,
}

impl PowerLawSampler {
    pub fn new(alpha: f64, x_min: u64) -> Self {
        let z_min = hurwitz_zeta(alpha, x_min as f64);
        let table_len = 4096usize;
        let mut table = Vec::with_capacity(table_len);
        for i in 0..table_len {
            let x = x_min + i as u64;
            table.push(hurwitz_zeta(alpha, x as f64) / z_min);
        }
        PowerLawSampler { x_min, table, alpha, z_min }
    }

    fn survival(&self, x: u64) -> f64 {
        debug_assert!(x >= self.x_min);
        let idx = (x - self.x_min) as usize;
        if idx < self.table.len() {
            self.table[idx]
        } else {
            hurwitz_zeta(self.alpha, x as f64) / self.z_min
        }
    }

    /// Largest x with S(x) >= u, i.e. P(sample = k) = S(k) - S(k+1).
    pub fn sample(&self, u: f64) -> u64 {
        debug_assert!(u > 0.0 && u <= 1.0);
        // binary search the precomputed table first
        let idx = self.table.partition_point(|&s| s >= u);
        if idx < self.table.len() {
            return self.x_min + idx as u64 - 1;
        }
        // rare deep tail: doubling + bisection on the zeta survival
        let mut lo = self.x_min + self.table.len() as u64 - 1;
        let mut hi = lo * 2;
        while self.survival(hi) >= u {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid) >= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hurwitz_zeta_matches_riemann_values() {
        // zeta(2) = pi^2 / 6
        let z2 = hurwitz_zeta(2.0, 1.0);
        assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        // zeta(4) = pi^4 / 90
        let z4 = hurwitz_zeta(4.0, 1.0);
        assert!((z4 - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-10);
        // shift identity: zeta(s, q+1) = zeta(s, q) - q^-s
        let s = 2.5;
        let q = 3.0;
        assert!((hurwitz_zeta(s, q + 1.0) - (hurwitz_zeta(s, q) - q.powf(-s))).abs() < 1e-12);
    }

    #[test]
    fn recovers_synthetic_exponent() {
        let sampler = PowerLawSampler::new(2.5, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let samples: Vec<u64> = (0..10_000)
            .map(|_| sampler.sample(rng.random_range(f64::MIN_POSITIVE..=1.0)))
            .collect();
        let fit = fit_powerlaw(&samples).unwrap();
        assert!(fit.reliable);
        assert!(
            fit.alpha > 2.3 && fit.alpha < 2.7,
            "alpha_hat = {}",
            fit.alpha
        );
    }

    #[test]
    fn constant_sequence_is_unreliable() {
        let samples = vec![7u64; 100];
        let fit = fit_powerlaw(&samples).unwrap();
        assert!(!fit.reliable);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let samples = vec![1u64; 10];
        assert!(matches!(
            fit_powerlaw(&samples),
            Err(MetricsError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn zero_sample_is_an_error() {
        let mut samples = vec![1u64; 60];
        samples[0] = 0;
        assert!(fit_powerlaw(&samples).is_err());
    }

    #[test]
    fn sampler_survival_is_monotone() {
        let sampler = PowerLawSampler::new(2.5, 1);
        assert!((sampler.survival(1) - 1.0).abs() < 1e-12);
        assert!(sampler.survival(2) < 1.0);
        assert!(sampler.survival(10) < sampler.survival(2));
    }

    #[test]
    fn x_min_in_observed_support_and_tail_count() {
        let sampler = PowerLawSampler::new(2.2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples: Vec<u64> = (0..5_000)
            .map(|_| sampler.sample(rng.random_range(f64::MIN_POSITIVE..=1.0)))
            .collect();
        let fit = fit_powerlaw(&samples).unwrap();
        assert!(samples.contains(&fit.x_min));
        let expected = samples.iter().filter(|&&x| x >= fit.x_min).count();
        assert_eq!(fit.n_tail, expected);
    }
}
