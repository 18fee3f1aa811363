use crate::transforms::OperatorKind;
use crate::{Error, Real, Result};

use super::constants::pichorides_constant;
use super::power::{norm_ladder, LadderOptions};

/// Estimates for one operator at increasing truncation sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSequence<T> {
    pub operator: &'static str,
    pub sizes: Vec<usize>,
    pub estimates: Vec<T>,
    pub converged: Vec<bool>,
    pub nondecreasing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport<T> {
    pub p: T,
    pub ceiling: T,
    pub band: T,
    /// `H^T` on the torus grid, `H^dis`, and `H^R` on a window.
    pub sequences: Vec<EstimateSequence<T>>,
    /// Largest relative gap between final estimates.
    pub spread: T,
    pub within_band: bool,
    /// Largest final estimate over the ceiling minus one (negative when below).
    pub excess: T,
}

/// Runs the power iteration for `H^T`, `H^dis` and `H^R` at every size and
/// compares the final values. A band violation is reported, not raised.
pub fn cross_domain_consistency<T: Real>(
    p: T,
    sizes: &[usize],
    band: T,
    options: LadderOptions<T>,
) -> Result<ConsistencyReport<T>> {
    let ceiling = pichorides_constant(p)?;
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no truncation sizes".into()));
    }
    let kinds = [
        OperatorKind::PeriodicHilbert,
        OperatorKind::DiscreteHilbert,
        OperatorKind::RealHilbert,
    ];
    let mut sequences = Vec::new();
    for kind in &kinds {
        let ladder = norm_ladder(kind, p, sizes, options)?;
        let estimates: Vec<T> = ladder.iter().map(|e| e.lower_bound).collect();
        let converged = ladder.iter().map(|e| e.converged).collect();
        // relative slack for rounding once a sequence has saturated
        let slack = T::one() - T::lit(1e-12);
        let nondecreasing = estimates.windows(2).all(|w| w[1] >= w[0] * slack);
        sequences.push(EstimateSequence {
            operator: kind.name(),
            sizes: sizes.to_vec(),
            estimates,
            converged,
            nondecreasing,
        });
    }
    let finals: Vec<T> = sequences.iter().map(|s| *s.estimates.last().expect("nonempty")).collect();
    let hi = finals.iter().copied().fold(T::neg_infinity(), T::max);
    let lo = finals.iter().copied().fold(T::infinity(), T::min);
    let spread = (hi - lo) / hi;
    Ok(ConsistencyReport {
        p,
        ceiling,
        band,
        sequences,
        spread,
        within_band: spread <= band,
        excess: hi / ceiling - T::one(),
    })
}
