use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::grid::GridDomain;
use crate::transforms::{OperatorKind, PeriodicHilbertPlan};
use crate::{Error, Real, Result};

/// A square matrix acting on scalar grid samples.
pub trait LinearOperator<T: Real>: Send + Sync {
    fn size(&self) -> usize;

    /// Grid the samples live on (used for witnesses).
    fn domain(&self) -> GridDomain<T>;

    fn apply(&self, x: &[T]) -> Vec<T>;

    fn apply_adjoint(&self, x: &[T]) -> Vec<T>;
}

pub struct IdentityOperator<T> {
    domain: GridDomain<T>,
    size: usize,
}

impl<T: Real> IdentityOperator<T> {
    pub fn new(domain: GridDomain<T>, size: usize) -> Self {
        Self { domain, size }
    }
}

impl<T: Real> LinearOperator<T> for IdentityOperator<T> {
    fn size(&self) -> usize {
        self.size
    }

    fn domain(&self) -> GridDomain<T> {
        self.domain
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        x.to_vec()
    }

    fn apply_adjoint(&self, x: &[T]) -> Vec<T> {
        x.to_vec()
    }
}

/// Row-major dense matrix; only for small problems and tests.
pub struct DenseOperator<T> {
    domain: GridDomain<T>,
    size: usize,
    entries: Vec<T>,
}

impl<T: Real> DenseOperator<T> {
    pub fn new(domain: GridDomain<T>, size: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::DimensionMismatch {
                expected: size * size,
                found: entries.len(),
            });
        }
        Ok(Self { domain, size, entries })
    }
}

impl<T: Real> LinearOperator<T> for DenseOperator<T> {
    fn size(&self) -> usize {
        self.size
    }

    fn domain(&self) -> GridDomain<T> {
        self.domain
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        self.entries
            .chunks(self.size)
            .map(|row| row.iter().zip(x).map(|(a, b)| *a * *b).sum())
            .collect()
    }

    fn apply_adjoint(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.size];
        for (row, xi) in self.entries.chunks(self.size).zip(x) {
            for (o, a) in out.iter_mut().zip(row) {
                *o = *o + *a * *xi;
            }
        }
        out
    }
}

/// `A_{ij} = c_{i-j}` for `0 ≤ i, j < n`, applied by circulant embedding.
pub struct ToeplitzOperator<T: Real> {
    domain: GridDomain<T>,
    size: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    symbol: Vec<Complex<T>>,
    adjoint_symbol: Vec<Complex<T>>,
}

impl<T: Real> ToeplitzOperator<T> {
    /// `kernel(m)` is queried for `|m| < size`.
    pub fn new(domain: GridDomain<T>, size: usize, kernel: impl Fn(i64) -> T) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter("truncation needs at least two points".into()));
        }
        let m = (2 * size).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let embed = |sign: i64| {
            let mut col = vec![Complex::new(T::zero(), T::zero()); m];
            for k in 0..size {
                col[k] = Complex::new(kernel(sign * k as i64), T::zero());
                if k > 0 {
                    col[m - k] = Complex::new(kernel(-sign * k as i64), T::zero());
                }
            }
            forward.process(&mut col);
            col
        };
        let symbol = embed(1);
        let adjoint_symbol = embed(-1);
        Ok(Self {
            domain,
            size,
            forward,
            inverse,
            symbol,
            adjoint_symbol,
        })
    }

    fn convolve(&self, x: &[T], symbol: &[Complex<T>]) -> Vec<T> {
        assert_eq!(x.len(), self.size);
        let m = symbol.len();
        let mut buf = vec![Complex::new(T::zero(), T::zero()); m];
        for (b, v) in buf.iter_mut().zip(x) {
            *b = Complex::new(*v, T::zero());
        }
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(symbol) {
            *b = *b * *s;
        }
        self.inverse.process(&mut buf);
        let scale = T::one() / T::from_usize_lossy(m);
        buf[..self.size].iter().map(|c| c.re * scale).collect()
    }
}

impl<T: Real> LinearOperator<T> for ToeplitzOperator<T> {
    fn size(&self) -> usize {
        self.size
    }

    fn domain(&self) -> GridDomain<T> {
        self.domain
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        self.convolve(x, &self.symbol)
    }

    fn apply_adjoint(&self, x: &[T]) -> Vec<T> {
        self.convolve(x, &self.adjoint_symbol)
    }
}

/// `H^T` on a torus grid; its adjoint is `-H^T`.
pub struct PeriodicGridOperator<T: Real> {
    plan: PeriodicHilbertPlan<T>,
}

impl<T: Real> PeriodicGridOperator<T> {
    pub fn new(size: usize) -> Result<Self> {
        Ok(Self {
            plan: PeriodicHilbertPlan::new(size)?,
        })
    }
}

impl<T: Real> LinearOperator<T> for PeriodicGridOperator<T> {
    fn size(&self) -> usize {
        self.plan.len()
    }

    fn domain(&self) -> GridDomain<T> {
        GridDomain::Torus
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); x.len()];
        self.plan.apply(x, &mut y);
        y
    }

    fn apply_adjoint(&self, x: &[T]) -> Vec<T> {
        self.apply(x).into_iter().map(|v| -v).collect()
    }
}

/// `(1/π)/m` off the diagonal.
pub fn discrete_kernel<T: Real>(m: i64) -> T {
    if m == 0 {
        T::zero()
    } else {
        (T::PI() * T::from_i64(m).expect("integer converts")).recip()
    }
}

/// `H^R` compressed to unit cells: the average over cell `i` of `H^R`
/// applied to the indicator of cell `j`,
/// `(1/π)(g(m+1) - 2g(m) + g(m-1))` with `g(u) = u ln|u|`, `m = i - j`.
pub fn cell_average_kernel<T: Real>(m: i64) -> T {
    if m == 0 {
        return T::zero();
    }
    let a = T::from_i64(m.abs()).expect("integer converts");
    let r = a.recip();
    // expanded to avoid cancelling the large u ln u terms
    let second = if m.abs() == 1 {
        T::lit(2.0) * T::LN_2()
    } else {
        a * (-r * r).ln_1p() + r.ln_1p() - (-r).ln_1p()
    };
    second * T::from_i64(m.signum()).expect("sign converts") / T::PI()
}

impl<T: Real> OperatorKind<T> {
    /// Finite section of size `size`: a torus grid of `size` nodes
    /// (power of two), the integer window `[-size/2, size/2]`, or `size` unit
    /// cells on the line.
    pub fn truncate(&self, size: usize) -> Result<Box<dyn LinearOperator<T>>> {
        self.validate()?;
        match self {
            OperatorKind::PeriodicHilbert => Ok(Box::new(PeriodicGridOperator::new(size)?)),
            OperatorKind::DiscreteHilbert => {
                let half = (size / 2) as i64;
                let domain = GridDomain::Integers { half_len: half };
                Ok(Box::new(ToeplitzOperator::new(domain, 2 * half as usize + 1, discrete_kernel)?))
            }
            OperatorKind::RealHilbert => {
                let domain = GridDomain::RealLine {
                    half_width: T::from_usize_lossy(size) / T::lit(2.0),
                };
                Ok(Box::new(ToeplitzOperator::new(domain, size, cell_average_kernel)?))
            }
            other => Err(Error::Unsupported(format!("no finite section for `{}`", other.name()))),
        }
    }
}
