use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::path_rng;
use crate::{Error, Result};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl MeanEstimate {
    pub fn from_samples(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = if x.len() > 1 {
            x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / n).sqrt(),
        }
    }

    /// `|mean - target| ≤ k·std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

/// A ratio of means with a bootstrap standard error; `ci` is `value ± 3σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    pub value: f64,
    pub std_error: f64,
    pub ci: (f64, f64),
}

impl RatioEstimate {
    fn new(value: f64, resampled: &[f64]) -> Self {
        let spread = MeanEstimate::from_samples(resampled);
        let std_error = spread.std_error * (resampled.len() as f64).sqrt();
        Self {
            value,
            std_error,
            ci: (value - 3.0 * std_error, value + 3.0 * std_error),
        }
    }
}

/// `mean(num)/mean(den)` and the same ratio over `resamples` bootstrap
/// draws of paired rows. The bootstrap uses its own stream of `seed`.
pub(crate) fn bootstrap_ratios(num: &[f64], den: &[f64], resamples: usize, seed: u64) -> Result<(f64, Vec<f64>)> {
    if num.len() != den.len() || num.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: num.len(),
            found: den.len(),
        });
    }
    let n = num.len();
    let d: f64 = den.iter().sum();
    if d == 0.0 {
        return Err(Error::Degenerate("denominator mean is zero".into()));
    }
    let point = num.iter().sum::<f64>() / d;
    let mut rng = path_rng(seed, u64::MAX);
    let mut out = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let (mut a, mut b) = (0.0, 0.0);
        for _ in 0..n {
            let i = rng.random_range(0..n);
            a += num[i];
            b += den[i];
        }
        out.push(if b == 0.0 { point } else { a / b });
    }
    Ok((point, out))
}

/// Bootstrap estimate of `g(mean(num)/mean(den))`.
pub(crate) fn ratio_estimate(point: f64, resampled: &[f64], g: impl Fn(f64) -> f64) -> RatioEstimate {
    let mapped: Vec<f64> = resampled.iter().map(|r| g(*r)).collect();
    RatioEstimate::new(g(point), &mapped)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of `counts` against cell probabilities.
pub fn chi_square(counts: &[usize], probabilities: &[f64]) -> Result<ChiSquare> {
    if counts.len() != probabilities.len() || counts.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: probabilities.len(),
            found: counts.len(),
        });
    }
    let n: usize = counts.iter().sum();
    let total: f64 = probabilities.iter().sum();
    if n == 0 || probabilities.iter().any(|p| !(*p > 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("cell probabilities must be positive and sum to one".into()));
    }
    let statistic = counts
        .iter()
        .zip(probabilities)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_error() {
        let m = MeanEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.std_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(m.within(2.0, 1.0));
        assert!(!m.within(0.0, 3.0));
    }

    #[test]
    fn bootstrap_of_a_constant_ratio_has_no_spread() {
        let num = vec![2.0; 50];
        let den = vec![1.0; 50];
        let (p, r) = bootstrap_ratios(&num, &den, 100, 3).unwrap();
        let e = ratio_estimate(p, &r, |x| x);
        assert_eq!(e.value, 2.0);
        assert_eq!(e.std_error, 0.0);
        assert!(bootstrap_ratios(&num, &[0.0; 50], 10, 3).is_err());
    }

    #[test]
    fn bootstrap_error_matches_the_delta_method() {
        // independent uniform numerators over a constant denominator: σ/√n
        let mut rng = path_rng(11, 0);
        let num: Vec<f64> = (0..4000).map(|_| rng.random::<f64>()).collect();
        let den = vec![1.0; 4000];
        let (p, r) = bootstrap_ratios(&num, &den, 400, 5).unwrap();
        let e = ratio_estimate(p, &r, |x| x);
        let delta = (1.0f64 / 12.0 / 4000.0).sqrt();
        assert!((e.std_error / delta - 1.0).abs() < 0.2, "{} vs {delta}", e.std_error);
    }

    #[test]
    fn chi_square_examples() {
        let c = chi_square(&[25, 25, 25, 25], &[0.25; 4]).unwrap();
        assert_eq!(c.statistic, 0.0);
        assert!((c.p_value - 1.0).abs() < 1e-12);
        let skew = chi_square(&[100, 0, 0, 0], &[0.25; 4]).unwrap();
        assert!((skew.statistic - 300.0).abs() < 1e-9 && skew.p_value < 1e-12);
        assert!(chi_square(&[1, 2], &[0.5, 0.4]).is_err());
    }
}
