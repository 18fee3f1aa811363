//! Uniformly sampled vector-valued functions: the substrate of the FFT oracles
//! and the norm estimators.

use crate::gauge::Gauge;
use crate::piecewise::{Domain, PiecewiseFunction, Support};
use crate::space::NormedSpace;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridDomain<T> {
    /// Nodes `-π + i·2π/len`.
    Torus,
    /// Cell midpoints of a uniform partition of `[-half_width, half_width]`.
    RealLine { half_width: T },
    /// The integers `-half_len..=half_len`.
    Integers { half_len: i64 },
}

/// Samples stored row-major: sample `i`, coordinate `c` at `i * dim + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    domain: GridDomain<T>,
    dim: usize,
    samples: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(domain: GridDomain<T>, dim: usize, samples: Vec<T>) -> Result<Self> {
        if dim == 0 || !samples.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} samples do not split into vectors of length {dim}",
                samples.len()
            )));
        }
        let len = samples.len() / dim;
        if len < 2 {
            return Err(Error::InvalidParameter("a grid needs at least two samples".into()));
        }
        match domain {
            GridDomain::RealLine { half_width } if !(half_width > T::zero()) => {
                return Err(Error::InvalidParameter("window half-width must be positive".into()))
            }
            GridDomain::Integers { half_len } if (2 * half_len + 1) as usize != len => {
                return Err(Error::InvalidParameter(format!(
                    "integer truncation [-{half_len}, {half_len}] needs {} samples, got {len}",
                    2 * half_len + 1
                )))
            }
            _ => {}
        }
        Ok(Self { domain, dim, samples })
    }

    /// Scalar grid from one sample per node.
    pub fn scalar(domain: GridDomain<T>, samples: Vec<T>) -> Result<Self> {
        Self::new(domain, 1, samples)
    }

    pub fn torus_from_fn(len: usize, dim: usize, f: impl Fn(T) -> Vec<T>) -> Result<Self> {
        let h = torus_spacing::<T>(len);
        let mut samples = Vec::with_capacity(len * dim);
        for i in 0..len {
            let v = f(-T::PI() + h * T::from_usize_lossy(i));
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            samples.extend(v);
        }
        Self::new(GridDomain::Torus, dim, samples)
    }

    pub fn scalar_torus_from_fn(len: usize, f: impl Fn(T) -> T) -> Result<Self> {
        Self::torus_from_fn(len, 1, |t| vec![f(t)])
    }

    /// Builds a grid from per-coordinate sample vectors.
    pub fn from_coordinates(domain: GridDomain<T>, coords: &[Vec<T>]) -> Result<Self> {
        let dim = coords.len();
        let len = coords.first().map_or(0, Vec::len);
        if coords.iter().any(|c| c.len() != len) {
            return Err(Error::InvalidParameter("coordinate vectors differ in length".into()));
        }
        let mut samples = Vec::with_capacity(len * dim);
        for i in 0..len {
            samples.extend(coords.iter().map(|c| c[i]));
        }
        Self::new(domain, dim, samples)
    }

    /// Point samples at the grid nodes (right-limit convention at breakpoints).
    pub fn sample_points(f: &PiecewiseFunction<T>, domain: GridDomain<T>, len: usize) -> Result<Self> {
        check_domain(f, &domain)?;
        let nodes = node_positions(&domain, len)?;
        let mut samples = Vec::with_capacity(len * f.dim());
        for t in nodes {
            samples.extend(f.evaluate(t));
        }
        Self::new(domain, f.dim(), samples)
    }

    /// Cell averages over `[node - h/2, node + h/2)` (wrapping on the torus).
    /// Integrating the result recovers `∫ f` exactly on the window.
    pub fn sample_cell_average(f: &PiecewiseFunction<T>, domain: GridDomain<T>, len: usize) -> Result<Self> {
        check_domain(f, &domain)?;
        if let GridDomain::Integers { .. } = domain {
            return Self::sample_points(f, domain, len);
        }
        let nodes = node_positions(&domain, len)?;
        let h = spacing_of(&domain, len);
        let half = h / T::lit(2.0);
        let two_pi = T::PI() + T::PI();
        let shifts: &[T] = match domain {
            GridDomain::Torus => &[-two_pi, T::zero(), two_pi],
            _ => &[T::zero()],
        };
        let dim = f.dim();
        let mut samples = vec![T::zero(); len * dim];
        for (i, t) in nodes.into_iter().enumerate() {
            let (lo, hi) = (t - half, t + half);
            for p in f.pieces() {
                if let Support::Interval { start, end } = p.support {
                    for &s in shifts {
                        let w = (hi.min(end + s) - lo.max(start + s)).max(T::zero());
                        if w > T::zero() {
                            for (c, v) in p.value.iter().enumerate() {
                                samples[i * dim + c] = samples[i * dim + c] + *v * w / h;
                            }
                        }
                    }
                }
            }
        }
        Self::new(domain, dim, samples)
    }

    pub fn domain(&self) -> GridDomain<T> {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn value(&self, i: usize) -> &[T] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coordinate(&self, c: usize) -> Vec<T> {
        self.samples.iter().skip(c).step_by(self.dim).copied().collect()
    }

    pub fn spacing(&self) -> T {
        spacing_of(&self.domain, self.len())
    }

    pub fn nodes(&self) -> Vec<T> {
        node_positions(&self.domain, self.len()).expect("validated grid")
    }

    /// Riemann sum `h Σ Φ(samples)`.
    pub fn integrate_gauge(&self, gauge: &Gauge<T>, space: &NormedSpace<T>) -> Result<T> {
        if space.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: self.dim,
            });
        }
        let s: T = (0..self.len()).map(|i| gauge.profile(space.norm(self.value(i)))).sum();
        Ok(s * self.spacing())
    }

    /// `h Σ samples` per coordinate.
    pub fn integral(&self) -> Vec<T> {
        let h = self.spacing();
        (0..self.dim)
            .map(|c| self.samples.iter().skip(c).step_by(self.dim).copied().sum::<T>() * h)
            .collect()
    }
}

pub(crate) fn torus_spacing<T: Real>(len: usize) -> T {
    (T::PI() + T::PI()) / T::from_usize_lossy(len.max(1))
}

fn spacing_of<T: Real>(domain: &GridDomain<T>, len: usize) -> T {
    match *domain {
        GridDomain::Torus => torus_spacing(len),
        GridDomain::RealLine { half_width } => (half_width + half_width) / T::from_usize_lossy(len),
        GridDomain::Integers { .. } => T::one(),
    }
}

fn node_positions<T: Real>(domain: &GridDomain<T>, len: usize) -> Result<Vec<T>> {
    if len < 2 {
        return Err(Error::InvalidParameter("a grid needs at least two samples".into()));
    }
    let h = spacing_of(domain, len);
    Ok(match *domain {
        GridDomain::Torus => (0..len).map(|i| -T::PI() + h * T::from_usize_lossy(i)).collect(),
        GridDomain::RealLine { half_width } => (0..len)
            .map(|i| -half_width + h * (T::from_usize_lossy(i) + T::lit(0.5)))
            .collect(),
        GridDomain::Integers { half_len } => {
            if (2 * half_len + 1) as usize != len {
                return Err(Error::InvalidParameter("integer grid length mismatch".into()));
            }
            (-half_len..=half_len)
                .map(|k| T::from_i64(k).expect("i64 converts"))
                .collect()
        }
    })
}

fn check_domain<T: Real>(f: &PiecewiseFunction<T>, domain: &GridDomain<T>) -> Result<()> {
    let want = match domain {
        GridDomain::Torus => Domain::Torus,
        GridDomain::RealLine { .. } => Domain::RealLine,
        GridDomain::Integers { .. } => Domain::Integers,
    };
    f.expect_domain(want)
}
