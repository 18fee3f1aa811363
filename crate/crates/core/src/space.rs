//! Finite-dimensional value spaces `ℓ_q^n`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Real, Result};

/// Norm exponent `q ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl<T: Real> FromStr for Exponent<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let q: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad norm exponent `{s}`")))?;
        if q.is_infinite() && q > 0.0 {
            return Ok(Exponent::Infinite);
        }
        Ok(Exponent::Finite(T::lit(q)))
    }
}

/// `R^n` equipped with the `ℓ_q` norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormedSpace<T> {
    dim: usize,
    exponent: Exponent<T>,
}

impl<T: Real> NormedSpace<T> {
    pub fn new(dim: usize, exponent: Exponent<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if let Exponent::Finite(q) = exponent {
            if !(q >= T::one()) || !q.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "norm exponent must lie in [1, inf], got {q}"
                )));
            }
        }
        Ok(Self { dim, exponent })
    }

    /// The real line with the absolute value.
    pub fn scalar() -> Self {
        Self {
            dim: 1,
            exponent: Exponent::Finite(T::lit(2.0)),
        }
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::new(dim, Exponent::Finite(T::lit(2.0)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self) -> Exponent<T> {
        self.exponent
    }

    pub fn is_hilbert(&self) -> bool {
        self.dim == 1 || matches!(self.exponent, Exponent::Finite(q) if q == T::lit(2.0))
    }

    pub fn check(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `‖x‖_q`. The caller guarantees `x.len() == dim`.
    pub fn norm(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.dim);
        if x.len() == 1 {
            return x[0].abs();
        }
        match self.exponent {
            Exponent::Infinite => x.iter().fold(T::zero(), |m, v| m.max(v.abs())),
            Exponent::Finite(q) if q == T::one() => x.iter().map(|v| v.abs()).sum(),
            Exponent::Finite(q) => {
                // scale by the largest entry so large q does not overflow
                let m = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                if m == T::zero() {
                    return T::zero();
                }
                let s: T = x.iter().map(|v| (v.abs() / m).powf(q)).sum();
                m * s.powf(q.recip())
            }
        }
    }

    /// Canonical element of the subdifferential of `‖·‖_q` at `x`: a dual
    /// vector `x*` with `‖x*‖_{q'} = 1` and `⟨x*, x⟩ = ‖x‖` (zero at `x = 0`).
    ///
    /// At kinks the choice is fixed: `ℓ_1` uses `sgn` with `sgn(0) = 0`, `ℓ_∞`
    /// picks the first coordinate of maximal modulus.
    pub fn dual_element(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.dim);
        let mut out = vec![T::zero(); x.len()];
        let nrm = self.norm(x);
        if nrm == T::zero() {
            return out;
        }
        if x.len() == 1 {
            out[0] = x[0].sign0();
            return out;
        }
        match self.exponent {
            Exponent::Infinite => {
                let (idx, _) = x
                    .iter()
                    .enumerate()
                    .fold((0, T::zero()), |(bi, bv), (i, v)| {
                        if v.abs() > bv {
                            (i, v.abs())
                        } else {
                            (bi, bv)
                        }
                    });
                out[idx] = x[idx].sign0();
            }
            Exponent::Finite(q) if q == T::one() => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = v.sign0();
                }
            }
            Exponent::Finite(q) => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = v.sign0() * (v.abs() / nrm).powf(q - T::one());
                }
            }
        }
        out
    }
}
