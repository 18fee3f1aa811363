//! Hilbert-type singular integral operators.
//!
//! Step-function inputs go through exact antiderivative formulas (the
//! principal value cancels analytically); grid inputs go through Fourier
//! multipliers. The two routes are kept independent so each can serve as the
//! other's oracle.

mod directional;
mod discrete;
mod periodic;
mod real_line;
mod riesz;

pub use directional::{directional_hilbert, DirectionalField, SmoothField};
pub use discrete::{discrete_hilbert, discrete_hilbert_sum};
pub use periodic::{periodic_hilbert_fft, periodic_hilbert_step, PeriodicHilbertPlan};
pub use real_line::{hilbert_operator_t, hilbert_operator_tj, real_hilbert_step, semidiscrete_hilbert};
pub use riesz::{
    riesz_kernel_weight, riesz_multiplier, riesz_power_constant, riesz_rotations, PeriodicField, RieszEstimate,
    SphereRule,
};

use crate::{Error, Real, Result};

/// Every operator the crate knows how to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind<T> {
    /// `H^T`, kernel `(1/2π) cot((t-s)/2)` on `[-π, π)`.
    PeriodicHilbert,
    /// `H^R`, kernel `1/(π(t-s))`.
    RealHilbert,
    /// `H^dis`, `(1/π) Σ_{s≠t} f(s)/(t-s)` on the integers.
    DiscreteHilbert,
    /// `(1/π) Σ_{k≠0} f(t - εk)/k` on the line.
    SemidiscreteHilbert { eps: T },
    /// `H_θ f(x) = (1/π) p.v.∫ f(x - tθ) dt/t`.
    DirectionalHilbert { theta: Vec<T> },
    /// Half-space Hilbert operator `T_j` on `R^d_{j+}`.
    HilbertOperatorTj { d: usize, j: usize },
    /// Riesz transform `R_j` as a rotation average of directional transforms.
    RieszRotations { d: usize, j: usize, nodes: usize },
    /// Riesz transform `R_j` as the Fourier multiplier `-i ξ_j/|ξ|`.
    RieszMultiplier { d: usize, j: usize },
}

impl<T: Real> OperatorKind<T> {
    pub fn validate(&self) -> Result<()> {
        let check_index = |d: usize, j: usize| {
            if d == 0 || j == 0 || j > d {
                Err(Error::InvalidParameter(format!("index j = {j} outside 1..={d}")))
            } else {
                Ok(())
            }
        };
        match self {
            OperatorKind::SemidiscreteHilbert { eps } if !(*eps > T::zero()) => {
                Err(Error::InvalidParameter(format!("semidiscrete step must be positive, got {eps}")))
            }
            OperatorKind::DirectionalHilbert { theta } => check_unit(theta),
            OperatorKind::HilbertOperatorTj { d, j }
            | OperatorKind::RieszMultiplier { d, j }
            | OperatorKind::RieszRotations { d, j, .. } => check_index(*d, *j),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::PeriodicHilbert => "ht",
            OperatorKind::RealHilbert => "hr",
            OperatorKind::DiscreteHilbert => "hdis",
            OperatorKind::SemidiscreteHilbert { .. } => "hsemi",
            OperatorKind::DirectionalHilbert { .. } => "dir",
            OperatorKind::HilbertOperatorTj { .. } => "tj",
            OperatorKind::RieszRotations { .. } => "riesz",
            OperatorKind::RieszMultiplier { .. } => "riesz-multiplier",
        }
    }
}

/// `θ` must be a unit vector to within `1e-12` (or a few hundred ulps for
/// low-precision scalars).
pub(crate) fn check_unit<T: Real>(theta: &[T]) -> Result<()> {
    if theta.is_empty() {
        return Err(Error::InvalidParameter("direction vector is empty".into()));
    }
    let norm = theta.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(256.0));
    if (norm - T::one()).abs() > tol {
        return Err(Error::InvalidParameter(format!("direction has norm {norm}, expected 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(OperatorKind::<f64>::SemidiscreteHilbert { eps: 0.0 }.validate().is_err());
        assert!(OperatorKind::DirectionalHilbert { theta: vec![0.6, 0.8] }.validate().is_ok());
        assert!(OperatorKind::DirectionalHilbert { theta: vec![0.6, 0.81] }.validate().is_err());
        assert!(OperatorKind::<f64>::HilbertOperatorTj { d: 2, j: 3 }.validate().is_err());
        assert!(OperatorKind::<f64>::RieszRotations { d: 3, j: 3, nodes: 8 }.validate().is_ok());
    }
}
