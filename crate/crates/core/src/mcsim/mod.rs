//! Monte Carlo experiments with Brownian motion: exits from the disc, the
//! square and `[-1, 1]`, martingale pairs `(u_f(W), ũ_f(W))` built from
//! harmonic and conjugate extensions, and decoupling ratios.
//!
//! Every path draws from its own ChaCha8 stream keyed by `(seed, path)`, so a
//! path set does not depend on the rayon worker count. Per-path results are
//! collected in path order and reduced sequentially.

mod decoupling;
mod exit;
mod harmonic;
mod pair;
mod stats;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub use decoupling::{estimate_decoupling_gamma, DecouplingEstimate, DeterministicIntegrand, InsideBand, Predictable};
pub use exit::{
    disc_exit_uniformity, sample_exit_disc, sample_exit_interval, sample_exit_square, square_exit_probability,
    tau_moment_check, DiscExit, ExitDomain, SquareExit, TauMoments,
};
pub use harmonic::{boundary_ratio, conjugate_extension, poisson_extension, HarmonicData, TrigPolynomial};
pub use pair::{
    check_orthogonality, check_subordination, harmonic_inequality_check, mc_inequality, simulate_pair,
    simulate_pairs, Companion, HarmonicReport, McInequality, PathPair, SubordinationReport,
};
pub use stats::{chi_square, ChiSquare, MeanEstimate, RatioEstimate};

/// Default number of bootstrap resamples for ratio intervals.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Exits closer than this to a breakpoint are redrawn.
pub const BREAKPOINT_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Euler step.
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    /// Planar walks stop once they come this close to the boundary.
    pub boundary_tol: f64,
}

impl SimConfig {
    /// `boundary_tol` defaults to its smallest admissible value `4√dt`.
    pub fn new(dt: f64, n_paths: usize, seed: u64) -> Result<Self> {
        let c = Self {
            dt,
            n_paths,
            seed,
            boundary_tol: 4.0 * dt.sqrt(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_boundary_tol(mut self, tol: f64) -> Result<Self> {
        self.boundary_tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParameter("need at least one path".into()));
        }
        // tiny slack so the default 4√dt passes after rounding
        if !(self.boundary_tol >= 4.0 * self.dt.sqrt() * (1.0 - 1e-12)) || !(self.boundary_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "boundary_tol must lie in [4√dt, 1), got {} at dt = {}",
                self.boundary_tol, self.dt
            )));
        }
        Ok(())
    }
}

/// The generator for path `path` under `seed`.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn config_validation() {
        let c = SimConfig::new(1e-4, 10, 1).unwrap();
        assert!((c.boundary_tol - 0.04).abs() < 1e-15);
        assert!(c.with_boundary_tol(0.01).is_err());
        assert!(c.with_boundary_tol(0.1).is_ok());
        assert!(SimConfig::new(0.0, 10, 1).is_err());
        assert!(SimConfig::new(1e-4, 0, 1).is_err());
        assert!(SimConfig::new(0.1, 1, 1).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| path_rng(7, 3).random()).collect();
        let mut r = path_rng(7, 3);
        let b: Vec<u64> = (0..4).map(|_| r.random()).collect();
        assert_eq!(a[0], b[0]);
        assert_ne!(path_rng(7, 3).random::<u64>(), path_rng(7, 4).random::<u64>());
        assert_ne!(path_rng(7, 3).random::<u64>(), path_rng(8, 3).random::<u64>());
    }
}
