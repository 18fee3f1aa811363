use crate::{Error, Real, Result};

fn check_p<T: Real>(p: T) -> Result<()> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent must satisfy 1 < p < ∞, got {p}")));
    }
    Ok(())
}

/// `p* = max{p, p/(p-1)}`.
pub fn conjugate_max<T: Real>(p: T) -> Result<T> {
    check_p(p)?;
    Ok(p.max(p / (p - T::one())))
}

/// `cot(π/(2p*))`, the norm of the Hilbert transform on `L^p`.
pub fn pichorides_constant<T: Real>(p: T) -> Result<T> {
    let ps = conjugate_max(p)?;
    Ok((T::PI() / (ps + ps)).tan().recip())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceConstants<T> {
    pub p_star: T,
    /// `p* - 1`, the UMD constant of a Hilbert space.
    pub beta_hilbert: T,
    pub pichorides: T,
    /// `(p* - 1) + cot(π/(2p*))`.
    pub wds_bound_hilbert: T,
}

/// The closed-form constants at `p`, after checking
/// `(2/π)(p*-1) ≤ cot(π/(2p*)) ≤ p*-1`.
pub fn reference_constants<T: Real>(p: T) -> Result<ReferenceConstants<T>> {
    let p_star = conjugate_max(p)?;
    let beta = p_star - T::one();
    let cot = pichorides_constant(p)?;
    let slack = T::epsilon() * T::lit(64.0) * p_star;
    let lower = beta * T::lit(2.0) / T::PI();
    if cot < lower - slack || cot > beta + slack {
        return Err(Error::Degenerate(format!(
            "sandwich (2/π)(p*-1) ≤ cot ≤ p*-1 fails at p = {p}: {lower} ≤ {cot} ≤ {beta}"
        )));
    }
    Ok(ReferenceConstants {
        p_star,
        beta_hilbert: beta,
        pichorides: cot,
        wds_bound_hilbert: beta + cot,
    })
}

/// `(δ^{-p} β^p / (1 - β^p·2δC/(β-1)))^{1/p}` with `β = 1 + 1/p` and
/// `δ = 1/(10Cp)`.
pub fn extrapolation_constant<T: Real>(p: T, c: T) -> Result<T> {
    check_p(p)?;
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("constant must be positive, got {c}")));
    }
    let beta = T::one() + p.recip();
    let delta = (T::lit(10.0) * c * p).recip();
    let bp = beta.powf(p);
    let denom = T::one() - bp * T::lit(2.0) * delta * c / (beta - T::one());
    if !(denom > T::zero()) {
        return Err(Error::Degenerate(format!("nonpositive denominator {denom}")));
    }
    Ok((delta.powf(-p) * bp / denom).powf(p.recip()))
}
