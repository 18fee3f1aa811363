use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::stats::{chi_square, ChiSquare, MeanEstimate};
use super::{path_rng, SimConfig};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitDomain {
    /// The unit disc.
    Disc,
    /// The square `[-1, 1]²`.
    Square,
}

/// Euler walk from `start` until `gap` (distance to the stopping set,
/// positive inside) is no longer positive, or until a Brownian bridge
/// between consecutive points crosses it. The bridge crossing probability
/// `exp(-2 g₀ g₁ / dt)` treats the boundary as locally flat.
fn walk<const D: usize>(
    rng: &mut ChaCha8Rng,
    dt: f64,
    start: [f64; D],
    gap: impl Fn(&[f64; D]) -> f64,
    mut visit: impl FnMut(f64, &[f64; D]),
) -> (f64, [f64; D]) {
    let sd = dt.sqrt();
    let mut w = start;
    let mut g0 = gap(&w);
    let mut steps = 0u64;
    visit(0.0, &w);
    loop {
        for c in w.iter_mut() {
            *c += sd * rng.sample::<f64, _>(StandardNormal);
        }
        steps += 1;
        let t = steps as f64 * dt;
        let g1 = gap(&w);
        let exponent = 2.0 * g0 * g1 / dt;
        if g1 <= 0.0 || (exponent < 40.0 && rng.random::<f64>() < (-exponent).exp()) {
            return (t, w);
        }
        visit(t, &w);
        g0 = g1;
    }
}

/// One disc path: the sampled points (the last one projected onto the
/// circle), their times, the exit angle and the exit time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscExit {
    pub times: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub exit_angle: f64,
    pub tau: f64,
}

fn disc_gap(tol: f64) -> impl Fn(&[f64; 2]) -> f64 {
    move |w| 1.0 - tol - w[0].hypot(w[1])
}

/// Planar Brownian motion from the origin, stopped once `|W| ≥ 1 - tol`
/// and projected radially onto the circle.
pub fn sample_exit_disc(config: &SimConfig, path: u64) -> Result<DiscExit> {
    config.validate()?;
    let mut rng = path_rng(config.seed, path);
    let mut times = Vec::new();
    let mut points = Vec::new();
    let (tau, w) = walk(&mut rng, config.dt, [0.0, 0.0], disc_gap(config.boundary_tol), |t, p| {
        times.push(t);
        points.push(*p);
    });
    let r = w[0].hypot(w[1]);
    times.push(tau);
    points.push([w[0] / r, w[1] / r]);
    Ok(DiscExit {
        times,
        points,
        exit_angle: w[1].atan2(w[0]),
        tau,
    })
}

/// Exit angle and time without storing the path.
pub(crate) fn disc_exit(config: &SimConfig, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (tau, w) = walk(rng, config.dt, [0.0, 0.0], disc_gap(config.boundary_tol), |_, _| {});
    (w[1].atan2(w[0]), tau)
}

/// Exit point on `∂[-1, 1]²`, scaled out from the stopping square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareExit {
    pub point: [f64; 2],
    pub tau: f64,
    /// `0: x = 1`, `1: y = 1`, `2: x = -1`, `3: y = -1`.
    pub side: usize,
    /// Position along the side, in `[-1, 1]`.
    pub coordinate: f64,
}

pub(crate) fn square_exit(config: &SimConfig, rng: &mut ChaCha8Rng) -> SquareExit {
    let tol = config.boundary_tol;
    let (tau, w) = walk(rng, config.dt, [0.0, 0.0], |w| 1.0 - tol - w[0].abs().max(w[1].abs()), |_, _| {});
    // scale back from the square of half-width 1 - tol
    let m = w[0].abs().max(w[1].abs());
    let (x, y) = (w[0] / m, w[1] / m);
    let (point, side, coordinate) = if x.abs() >= y.abs() {
        ([x.signum(), y], if x > 0.0 { 0 } else { 2 }, y)
    } else {
        ([x, y.signum()], if y > 0.0 { 1 } else { 3 }, x)
    };
    SquareExit {
        point,
        tau,
        side,
        coordinate,
    }
}

/// Same stopping rule as the disc, with `1 - max(|x|, |y|)` as the gap; the
/// stopped point is scaled by `1/max(|x|, |y|)`.
pub fn sample_exit_square(config: &SimConfig, path: u64) -> Result<SquareExit> {
    config.validate()?;
    Ok(square_exit(config, &mut path_rng(config.seed, path)))
}

/// Probability that Brownian motion from the centre of `[-1, 1]²` leaves
/// through one given side at a position in `[c, d]`, from the sine series
/// of the Poisson kernel of the square.
pub fn square_exit_probability(c: f64, d: f64) -> f64 {
    let (c, d) = (c.clamp(-1.0, 1.0), d.clamp(-1.0, 1.0));
    let mut total = 0.0;
    for n in (1..200).step_by(2) {
        let nf = n as f64;
        let w = (nf * FRAC_PI_2).sin() / (nf * PI * (nf * FRAC_PI_2).cosh());
        let term = w * ((nf * FRAC_PI_2 * (c + 1.0)).cos() - (nf * FRAC_PI_2 * (d + 1.0)).cos());
        total += term;
        if term.abs() < 1e-18 && n > 5 {
            break;
        }
    }
    total
}

/// One-dimensional Brownian motion from 0 until `|W| = 1`, with the bridge
/// correction but no stopping slack. Returns the exit time.
pub fn sample_exit_interval(config: &SimConfig, path: u64) -> Result<f64> {
    config.validate()?;
    Ok(interval_exit(config.dt, &mut path_rng(config.seed, path)))
}

fn interval_exit(dt: f64, rng: &mut ChaCha8Rng) -> f64 {
    walk(rng, dt, [0.0], |w| 1.0 - w[0].abs(), |_, _| {}).0
}

/// Chi-square of disc exit angles against the uniform law, 32 bins.
pub fn disc_exit_uniformity(config: &SimConfig) -> Result<ChiSquare> {
    config.validate()?;
    let angles: Vec<f64> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| disc_exit(config, &mut path_rng(config.seed, i)).0)
        .collect();
    chi_square(&angle_histogram(&angles, 32), &[1.0 / 32.0; 32])
}

pub(crate) fn angle_histogram(angles: &[f64], bins: usize) -> Vec<usize> {
    let mut counts = vec![0; bins];
    for a in angles {
        let k = (((a + PI) / (2.0 * PI)) * bins as f64).floor() as isize;
        counts[k.clamp(0, bins as isize - 1) as usize] += 1;
    }
    counts
}

/// Chi-square of square exits against [`square_exit_probability`]:
/// 8 bins per side.
pub(crate) fn square_exit_fit(exits: &[SquareExit]) -> Result<ChiSquare> {
    let per_side = 8;
    let mut counts = vec![0; 4 * per_side];
    for e in exits {
        let k = (((e.coordinate + 1.0) / 2.0) * per_side as f64).floor() as usize;
        counts[e.side * per_side + k.min(per_side - 1)] += 1;
    }
    let cell: Vec<f64> = (0..per_side)
        .map(|k| {
            let c = -1.0 + 2.0 * k as f64 / per_side as f64;
            square_exit_probability(c, c + 2.0 / per_side as f64)
        })
        .collect();
    let mut probs: Vec<f64> = (0..4).flat_map(|_| cell.iter().copied()).collect();
    // series truncation leaves a rounding-level gap from 1
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    chi_square(&counts, &probs)
}

/// Moments of the exit time of `[-1, 1]` and the constant `E|γ|·E√τ` with
/// `γ` an independent standard normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauMoments {
    pub e_tau: MeanEstimate,
    pub e_tau_sq: MeanEstimate,
    pub e_sqrt_tau: MeanEstimate,
    pub e_abs_gamma: MeanEstimate,
    /// `E|γ|·E√τ` and its delta-method standard error.
    pub c_lower: MeanEstimate,
    /// `E|γ|·(E τ)^{3/2}/(E τ²)^{1/2}` from the sampled moments.
    pub holder_bound: f64,
}

pub fn tau_moment_check(config: &SimConfig) -> Result<TauMoments> {
    config.validate()?;
    let samples: Vec<(f64, f64)> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(config.seed, i);
            let gamma: f64 = rng.sample(StandardNormal);
            (interval_exit(config.dt, &mut rng), gamma.abs())
        })
        .collect();
    let tau: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let e_tau = MeanEstimate::from_samples(&tau);
    let e_tau_sq = MeanEstimate::from_samples(&tau.iter().map(|t| t * t).collect::<Vec<_>>());
    let e_sqrt_tau = MeanEstimate::from_samples(&tau.iter().map(|t| t.sqrt()).collect::<Vec<_>>());
    let e_abs_gamma = MeanEstimate::from_samples(&samples.iter().map(|s| s.1).collect::<Vec<_>>());
    let c_lower = MeanEstimate {
        mean: e_abs_gamma.mean * e_sqrt_tau.mean,
        std_error: (e_sqrt_tau.mean.powi(2) * e_abs_gamma.std_error.powi(2)
            + e_abs_gamma.mean.powi(2) * e_sqrt_tau.std_error.powi(2))
        .sqrt(),
    };
    Ok(TauMoments {
        e_tau,
        e_tau_sq,
        e_sqrt_tau,
        e_abs_gamma,
        c_lower,
        holder_bound: e_abs_gamma.mean * e_tau.mean.powf(1.5) / e_tau_sq.mean.sqrt(),
    })
}
