use rayon::prelude::*;

use super::exit::{angle_histogram, disc_exit, sample_exit_disc, square_exit, square_exit_fit, ExitDomain};
use super::harmonic::{boundary_ratio, HarmonicData};
use super::stats::{bootstrap_ratios, chi_square, ratio_estimate, ChiSquare, RatioEstimate};
use super::{path_rng, SimConfig, BOOTSTRAP_RESAMPLES, BREAKPOINT_GUARD};
use crate::gauge::GaugePair;
use crate::piecewise::angular_distance;
use crate::{Error, Result};

/// `M = u(W)` and `N = ũ(W)` along one disc path. Values are stored row by
/// row, `dim` entries per time.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPair {
    pub times: Vec<f64>,
    pub dim: usize,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub exit_angle: f64,
    /// The exit landed within [`BREAKPOINT_GUARD`] of a jump of the data;
    /// the terminal conjugate value is unreliable and the path should be
    /// redrawn.
    pub resample: bool,
}

impl PathPair {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn m_at(&self, k: usize) -> &[f64] {
        &self.m[k * self.dim..(k + 1) * self.dim]
    }

    pub fn n_at(&self, k: usize) -> &[f64] {
        &self.n[k * self.dim..(k + 1) * self.dim]
    }
}

fn near_breakpoint(data: &dyn HarmonicData, theta: f64) -> bool {
    data.breakpoints().into_iter().any(|b| angular_distance(theta, b) < BREAKPOINT_GUARD)
}

/// Runs path `path` of `config` through the extensions of `f`; the terminal
/// row holds the boundary values at the exit angle.
pub fn simulate_pair(f: &dyn HarmonicData, config: &SimConfig, path: u64) -> Result<PathPair> {
    let exit = sample_exit_disc(config, path)?;
    let dim = f.space().dim();
    let last = exit.points.len() - 1;
    let mut m = Vec::with_capacity(exit.points.len() * dim);
    let mut n = Vec::with_capacity(exit.points.len() * dim);
    for z in &exit.points[..last] {
        m.extend(f.extension(*z)?);
        n.extend(f.conjugate(*z)?);
    }
    let resample = near_breakpoint(f, exit.exit_angle);
    m.extend(f.boundary(exit.exit_angle));
    match f.conjugate_boundary(exit.exit_angle) {
        Ok(v) => n.extend(v),
        Err(Error::SingularPoint { .. }) => n.extend(std::iter::repeat_n(f64::NAN, dim)),
        Err(e) => return Err(e),
    }
    Ok(PathPair {
        times: exit.times,
        dim,
        m,
        n,
        exit_angle: exit.exit_angle,
        resample,
    })
}

/// Paths `0..n_paths`, in order.
pub fn simulate_pairs(f: &dyn HarmonicData, config: &SimConfig) -> Result<Vec<PathPair>> {
    (0..config.n_paths as u64).into_par_iter().map(|i| simulate_pair(f, config, i)).collect()
}

fn check_functionals(pair: &PathPair, functionals: &[Vec<f64>]) -> Result<()> {
    if pair.len() < 2 {
        return Err(Error::InvalidParameter("a path needs at least two points".into()));
    }
    if let Some(x) = functionals.iter().find(|x| x.len() != pair.dim) {
        return Err(Error::DimensionMismatch {
            expected: pair.dim,
            found: x.len(),
        });
    }
    Ok(())
}

fn pairing(x: &[f64], v: &[f64]) -> f64 {
    x.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Largest `|Σ_k Δ⟨M, x*⟩_k Δ⟨N, x*⟩_k|` over the functionals.
pub fn check_orthogonality(pair: &PathPair, functionals: &[Vec<f64>]) -> Result<f64> {
    check_functionals(pair, functionals)?;
    let mut worst: f64 = 0.0;
    for x in functionals {
        let mut cov = 0.0;
        for k in 1..pair.len() {
            let dm = pairing(x, pair.m_at(k)) - pairing(x, pair.m_at(k - 1));
            let dn = pairing(x, pair.n_at(k)) - pairing(x, pair.n_at(k - 1));
            cov += dm * dn;
        }
        worst = worst.max(cov.abs());
    }
    Ok(worst)
}

/// The discrete difference process
/// `D_k = |⟨M_0, x*⟩|² + Σ_{j ≤ k} (Δ⟨M, x*⟩_j² - Δ⟨N, x*⟩_j²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationReport {
    /// Most negative increment of `D` over steps and functionals.
    pub min_increment: f64,
    /// Smallest value reached by `D`.
    pub min_level: f64,
    /// Increments counted (steps times functionals).
    pub increments: usize,
    /// Increments below `-10·Δt`.
    pub below_noise_floor: usize,
}

pub fn check_subordination(pair: &PathPair, functionals: &[Vec<f64>]) -> Result<SubordinationReport> {
    check_functionals(pair, functionals)?;
    let mut report = SubordinationReport {
        min_increment: f64::INFINITY,
        min_level: f64::INFINITY,
        increments: 0,
        below_noise_floor: 0,
    };
    for x in functionals {
        let mut level = pairing(x, pair.m_at(0)).powi(2);
        report.min_level = report.min_level.min(level);
        for k in 1..pair.len() {
            let dm = pairing(x, pair.m_at(k)) - pairing(x, pair.m_at(k - 1));
            let dn = pairing(x, pair.n_at(k)) - pairing(x, pair.n_at(k - 1));
            let inc = dm * dm - dn * dn;
            level += inc;
            report.min_increment = report.min_increment.min(inc);
            report.min_level = report.min_level.min(level);
            report.increments += 1;
            if inc < -10.0 * (pair.times[k] - pair.times[k - 1]) {
                report.below_noise_floor += 1;
            }
        }
    }
    Ok(report)
}

/// The second boundary function in [`harmonic_inequality_check`].
#[derive(Clone, Copy)]
pub enum Companion<'a> {
    /// The conjugate function of `f`.
    Conjugate,
    Given(&'a dyn HarmonicData),
}

struct Terminal {
    phi: Vec<f64>,
    psi: Vec<f64>,
    exits: Vec<Exit>,
    redrawn: usize,
}

enum Exit {
    Angle(f64),
    Square(super::exit::SquareExit),
}

/// `Φ(f)` and `Ψ(g)` at the exit point of each path. Disc exits within
/// the breakpoint guard of either function are redrawn from fresh streams.
fn terminal_samples(
    domain: ExitDomain,
    f: &dyn HarmonicData,
    g: Companion<'_>,
    gauges: GaugePair<f64>,
    config: &SimConfig,
) -> Result<Terminal> {
    config.validate()?;
    let (fs, gs) = (f.space(), match g {
        Companion::Conjugate => f.space(),
        Companion::Given(h) => h.space(),
    });
    let n = config.n_paths as u64;
    let rows: Vec<Result<(f64, f64, Exit, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut attempt = 0u64;
            loop {
                let mut rng = path_rng(config.seed, i + attempt * n);
                let (theta, exit) = match domain {
                    ExitDomain::Disc => {
                        let (theta, _) = disc_exit(config, &mut rng);
                        (theta, Exit::Angle(theta))
                    }
                    ExitDomain::Square => {
                        let e = square_exit(config, &mut rng);
                        (e.point[1].atan2(e.point[0]), Exit::Square(e))
                    }
                };
                let guarded = near_breakpoint(f, theta) || matches!(g, Companion::Given(h) if near_breakpoint(h, theta));
                if guarded {
                    attempt += 1;
                    continue;
                }
                let gv = match g {
                    Companion::Conjugate => f.conjugate_boundary(theta)?,
                    Companion::Given(h) => h.boundary(theta),
                };
                let phi = gauges.phi.profile(fs.norm(&f.boundary(theta)));
                let psi = gauges.psi.profile(gs.norm(&gv));
                return Ok((phi, psi, exit, attempt as usize));
            }
        })
        .collect();
    let mut t = Terminal {
        phi: Vec::with_capacity(rows.len()),
        psi: Vec::with_capacity(rows.len()),
        exits: Vec::with_capacity(rows.len()),
        redrawn: 0,
    };
    for r in rows {
        let (phi, psi, e, a) = r?;
        t.phi.push(phi);
        t.psi.push(psi);
        t.exits.push(e);
        t.redrawn += a;
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McInequality {
    /// Mean of `Ψ(N_τ)`.
    pub lhs: f64,
    /// Mean of `Φ(M_τ)`.
    pub rhs: f64,
    pub ratio: RatioEstimate,
    /// `∫Ψ(ũ)/∫Φ(u)` on the circle, the infinite-path limit of `ratio`.
    pub boundary_ratio: f64,
    pub redrawn: usize,
}

/// `E Ψ(N_τ) / E Φ(M_τ)` for the conjugate pair of `f` stopped at the
/// circle.
pub fn mc_inequality(f: &dyn HarmonicData, gauges: GaugePair<f64>, config: &SimConfig) -> Result<McInequality> {
    let t = terminal_samples(ExitDomain::Disc, f, Companion::Conjugate, gauges, config)?;
    let n = t.phi.len() as f64;
    let rhs = t.phi.iter().sum::<f64>() / n;
    if rhs == 0.0 {
        return Err(Error::Degenerate("E Φ(M) vanishes".into()));
    }
    let lhs = t.psi.iter().sum::<f64>() / n;
    let (point, boot) = bootstrap_ratios(&t.psi, &t.phi, BOOTSTRAP_RESAMPLES, config.seed)?;
    Ok(McInequality {
        lhs,
        rhs,
        ratio: ratio_estimate(point, &boot, |x| x),
        boundary_ratio: boundary_ratio(f, gauges)?,
        redrawn: t.redrawn,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: RatioEstimate,
    /// Fit of the exit points to the harmonic measure of the domain.
    pub exit_fit: ChiSquare,
    /// True only for the disc with the conjugate companion, where the pair
    /// is orthogonal and subordinate by construction.
    pub verified: bool,
    pub redrawn: usize,
}

/// Boundary integrals of `Φ(f)` and `Ψ(g)` against the exit distribution
/// of Brownian motion from the origin. On the square the data are read at
/// the polar angle of the exit point.
pub fn harmonic_inequality_check(
    domain: ExitDomain,
    f: &dyn HarmonicData,
    g: Companion<'_>,
    gauges: GaugePair<f64>,
    config: &SimConfig,
) -> Result<HarmonicReport> {
    let t = terminal_samples(domain, f, g, gauges, config)?;
    let n = t.phi.len() as f64;
    let rhs = t.phi.iter().sum::<f64>() / n;
    if rhs == 0.0 {
        return Err(Error::Degenerate("boundary integral of Φ(f) vanishes".into()));
    }
    let lhs = t.psi.iter().sum::<f64>() / n;
    let (point, boot) = bootstrap_ratios(&t.psi, &t.phi, BOOTSTRAP_RESAMPLES, config.seed)?;
    let exit_fit = match domain {
        ExitDomain::Disc => {
            let angles: Vec<f64> = t
                .exits
                .iter()
                .map(|e| match e {
                    Exit::Angle(a) => *a,
                    Exit::Square(s) => s.point[1].atan2(s.point[0]),
                })
                .collect();
            chi_square(&angle_histogram(&angles, 32), &[1.0 / 32.0; 32])?
        }
        ExitDomain::Square => {
            let exits: Vec<_> = t
                .exits
                .iter()
                .filter_map(|e| match e {
                    Exit::Square(s) => Some(*s),
                    Exit::Angle(_) => None,
                })
                .collect();
            square_exit_fit(&exits)?
        }
    };
    Ok(HarmonicReport {
        lhs,
        rhs,
        ratio: ratio_estimate(point, &boot, |x| x),
        exit_fit,
        verified: domain == ExitDomain::Disc && matches!(g, Companion::Conjugate),
        redrawn: t.redrawn,
    })
}
