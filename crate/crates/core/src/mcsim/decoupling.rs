use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stats::{bootstrap_ratios, ratio_estimate, RatioEstimate};
use super::{path_rng, SimConfig, BOOTSTRAP_RESAMPLES};
use crate::{Error, Result};

/// A scalar elementary predictable integrand: constant on each cell of a
/// deterministic time grid, with the value on cell `k` a function of
/// `W(t_0), …, W(t_k)`.
pub trait Predictable: Sync {
    /// Cell lengths.
    fn cells(&self) -> Vec<f64>;

    /// Value on cell `k`; `w` holds `W` at the left endpoints `t_0..=t_k`.
    fn coefficient(&self, k: usize, w: &[f64]) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicIntegrand {
    pub durations: Vec<f64>,
    pub values: Vec<f64>,
}

impl DeterministicIntegrand {
    pub fn new(durations: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if durations.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: durations.len(),
                found: values.len(),
            });
        }
        if durations.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::InvalidParameter("cell lengths must be positive".into()));
        }
        Ok(Self { durations, values })
    }
}

impl Predictable for DeterministicIntegrand {
    fn cells(&self) -> Vec<f64> {
        self.durations.clone()
    }

    fn coefficient(&self, k: usize, _: &[f64]) -> f64 {
        self.values[k]
    }
}

/// `1{|W(t_k)| < level}` on a uniform grid of step `dt` up to `horizon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsideBand {
    pub dt: f64,
    pub horizon: f64,
    pub level: f64,
}

impl Predictable for InsideBand {
    fn cells(&self) -> Vec<f64> {
        vec![self.dt; (self.horizon / self.dt).round() as usize]
    }

    fn coefficient(&self, k: usize, w: &[f64]) -> f64 {
        if w[k].abs() < self.level {
            1.0
        } else {
            0.0
        }
    }
}

/// Lower-bound samples for the decoupling constants:
/// `β⁺ ≥ (E|∫φ dW̃|^p / E|∫φ dW|^p)^{1/p}` and `β⁻` with the roles swapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecouplingEstimate {
    pub beta_plus_lb: RatioEstimate,
    pub beta_minus_lb: RatioEstimate,
}

impl DecouplingEstimate {
    pub fn max(&self) -> RatioEstimate {
        if self.beta_plus_lb.value >= self.beta_minus_lb.value {
            self.beta_plus_lb
        } else {
            self.beta_minus_lb
        }
    }
}

/// Riemann–Itô sums of `φ` against `W` and an independent `W̃`, exact for
/// elementary integrands. `config.dt` is not used: the integrand carries
/// its own grid.
pub fn estimate_decoupling_gamma(phi: &dyn Predictable, p: f64, config: &SimConfig) -> Result<DecouplingEstimate> {
    config.validate()?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("moment order must be at least 1, got {p}")));
    }
    let cells = phi.cells();
    if cells.is_empty() {
        return Err(Error::Degenerate("integrand has no cells".into()));
    }
    let rows: Vec<(f64, f64)> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(config.seed, i);
            let mut w = Vec::with_capacity(cells.len() + 1);
            w.push(0.0);
            let (mut int, mut dec) = (0.0, 0.0);
            for (k, dt) in cells.iter().enumerate() {
                let c = phi.coefficient(k, &w);
                let sd = dt.sqrt();
                let dw = sd * rng.sample::<f64, _>(StandardNormal);
                let dv = sd * rng.sample::<f64, _>(StandardNormal);
                int += c * dw;
                dec += c * dv;
                w.push(w[k] + dw);
            }
            (int.abs().powf(p), dec.abs().powf(p))
        })
        .collect();
    let own: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let indep: Vec<f64> = rows.iter().map(|r| r.1).collect();
    if own.iter().all(|v| *v == 0.0) || indep.iter().all(|v| *v == 0.0) {
        return Err(Error::Degenerate("both stochastic integrals vanish; the ratio is undefined".into()));
    }
    let root = |x: f64| x.powf(p.recip());
    let (plus, boot_plus) = bootstrap_ratios(&indep, &own, BOOTSTRAP_RESAMPLES, config.seed)?;
    let (minus, boot_minus) = bootstrap_ratios(&own, &indep, BOOTSTRAP_RESAMPLES, config.seed ^ 0x9e37_79b9)?;
    Ok(DecouplingEstimate {
        beta_plus_lb: ratio_estimate(plus, &boot_plus, root),
        beta_minus_lb: ratio_estimate(minus, &boot_minus, root),
    })
}
