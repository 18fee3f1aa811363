use crate::boxes::BoxStepFunction;
use crate::quadrature::{integrate, Tolerance};
use crate::{Error, Real, Result};

use super::check_unit;

/// A function on `R^d` whose directional Hilbert transforms can be computed.
pub trait DirectionalField<T: Real> {
    fn ambient_dim(&self) -> usize;

    fn value_dim(&self) -> usize;

    /// `H_θ f(x)` for an already validated unit `θ`.
    fn directional(&self, theta: &[T], x: &[T]) -> Result<Vec<T>>;
}

impl<T: Real> DirectionalField<T> for BoxStepFunction<T> {
    fn ambient_dim(&self) -> usize {
        BoxStepFunction::ambient_dim(self)
    }

    fn value_dim(&self) -> usize {
        BoxStepFunction::value_dim(self)
    }

    /// The line restriction is a 1-D step function in `t`, and
    /// `p.v.∫_{t_lo}^{t_hi} dt/t = ln|t_hi| - ln|t_lo|`.
    fn directional(&self, theta: &[T], x: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.value_dim()];
        for (lo, hi, v) in self.line_restriction(x, theta)? {
            if lo == T::zero() || hi == T::zero() {
                return Err(Error::SingularPoint {
                    point: x.first().map_or(f64::NAN, |v| v.as_f64()),
                });
            }
            let w = (hi.abs().ln() - lo.abs().ln()) / T::PI();
            for (o, c) in out.iter_mut().zip(&v) {
                *o = *o + *c * w;
            }
        }
        Ok(out)
    }
}

/// A smooth function given by a closure, negligible outside the ball of
/// radius `radius` about the origin.
///
/// `H_θ f(x)` is computed from the odd part of the line restriction,
/// `(1/π) ∫_0^R (g(t) - g(-t))/t dt`, which has no singularity at `t = 0`.
pub struct SmoothField<T, F> {
    d: usize,
    n: usize,
    radius: T,
    tolerance: T,
    f: F,
}

impl<T: Real, F: Fn(&[T]) -> Vec<T>> SmoothField<T, F> {
    pub fn new(d: usize, n: usize, radius: T, f: F) -> Result<Self> {
        if d == 0 || n == 0 || !(radius > T::zero()) {
            return Err(Error::InvalidParameter("smooth field needs d, n ≥ 1 and a positive radius".into()));
        }
        Ok(Self {
            d,
            n,
            radius,
            tolerance: T::lit(1e-11).max(T::epsilon() * T::lit(64.0)),
            f,
        })
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn evaluate(&self, x: &[T]) -> Vec<T> {
        (self.f)(x)
    }
}

impl<T: Real, F: Fn(&[T]) -> Vec<T>> DirectionalField<T> for SmoothField<T, F> {
    fn ambient_dim(&self) -> usize {
        self.d
    }

    fn value_dim(&self) -> usize {
        self.n
    }

    fn directional(&self, theta: &[T], x: &[T]) -> Result<Vec<T>> {
        let reach = x.iter().map(|v| *v * *v).sum::<T>().sqrt() + self.radius;
        let mut point = vec![T::zero(); self.d];
        let mut out = Vec::with_capacity(self.n);
        for c in 0..self.n {
            let mut g = |t: T| {
                for i in 0..self.d {
                    point[i] = x[i] - t * theta[i];
                }
                let plus = (self.f)(&point)[c];
                for i in 0..self.d {
                    point[i] = x[i] + t * theta[i];
                }
                let minus = (self.f)(&point)[c];
                (plus - minus) / t
            };
            let r = integrate(&mut g, T::zero(), reach, Tolerance::absolute(self.tolerance))?;
            out.push(r.value / T::PI());
        }
        Ok(out)
    }
}

/// `H_θ f(x) = (1/π) p.v.∫ f(x - tθ) dt/t`.
pub fn directional_hilbert<T: Real, F: DirectionalField<T> + ?Sized>(f: &F, theta: &[T], x: &[T]) -> Result<Vec<T>> {
    check_unit(theta)?;
    let d = f.ambient_dim();
    if theta.len() != d || x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if theta.len() != d { theta.len() } else { x.len() },
        });
    }
    f.directional(theta, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::PiecewiseFunction;
    use crate::transforms::real_hilbert_step;
    use std::f64::consts::{LN_2, PI};

    fn square() -> BoxStepFunction<f64> {
        BoxStepFunction::scalar(2, vec![(vec![(0.0, 1.0), (0.0, 1.0)], 1.0)]).unwrap()
    }

    #[test]
    fn unit_square_example() {
        let v = directional_hilbert(&square(), &[1.0, 0.0], &[2.0, 0.5]).unwrap()[0];
        assert!((v - LN_2 / PI).abs() < 1e-15);
        assert!(matches!(
            directional_hilbert(&square(), &[1.0, 0.0], &[2.0, 1.0]),
            Err(Error::SingularConfiguration(_))
        ));
        assert!(directional_hilbert(&square(), &[1.0, 0.1], &[2.0, 0.5]).is_err());
    }

    #[test]
    fn one_dimension_matches_real_line() {
        let pieces = [(-1.2, 0.3, 2.0f64), (0.3, 0.9, -0.5), (2.0, 4.0, 1.0)];
        let f = PiecewiseFunction::scalar_real_line(&pieces).unwrap();
        let b = BoxStepFunction::scalar(1, pieces.iter().map(|&(a, b, v)| (vec![(a, b)], v)).collect()).unwrap();
        for t in [-3.0, -0.1, 0.5, 1.7, 4.5, 10.0] {
            let want = real_hilbert_step(&f, t).unwrap()[0];
            let got = directional_hilbert(&b, &[1.0], &[t]).unwrap()[0];
            assert!((want - got).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn odd_in_direction() {
        let f = BoxStepFunction::scalar(
            2,
            vec![
                (vec![(0.0, 1.0), (0.0, 1.0)], 1.0),
                (vec![(-2.0, -0.5), (0.3, 0.8)], -2.5),
            ],
        )
        .unwrap();
        for k in 0..16 {
            let a = 0.1 + k as f64 * 0.39;
            let th = [a.cos(), a.sin()];
            let neg = [-th[0], -th[1]];
            let x = [0.37, 0.61];
            let p = directional_hilbert(&f, &th, &x).unwrap()[0];
            let m = directional_hilbert(&f, &neg, &x).unwrap()[0];
            assert!((p + m).abs() < 1e-13);
        }
    }

    #[test]
    fn rotation_equivariance() {
        // quarter turn: boxes map to boxes, so both sides are exact
        let f = BoxStepFunction::scalar(2, vec![(vec![(0.0, 2.0), (0.5, 1.0)], 1.0)]).unwrap();
        let g = BoxStepFunction::scalar(2, vec![(vec![(-1.0, -0.5), (0.0, 2.0)], 1.0)]).unwrap();
        let rot = |v: [f64; 2]| [-v[1], v[0]];
        for k in 0..10 {
            let a = 0.3 + 0.61 * k as f64;
            let th = [a.cos(), a.sin()];
            let x = [0.7, -0.2];
            let lhs = directional_hilbert(&f, &th, &x).unwrap()[0];
            let rhs = directional_hilbert(&g, &rot(th), &rot(x)).unwrap()[0];
            assert!((lhs - rhs).abs() < 1e-13);
        }
    }

    #[test]
    fn smooth_gaussian_uses_dawson() {
        // H e^{-t²} = (2/√π) D(t), Dawson's integral D(1) = 0.538079506912768...
        let f = SmoothField::new(1, 1, 12.0, |x: &[f64]| vec![(-x[0] * x[0]).exp()]).unwrap();
        let v = directional_hilbert(&f, &[1.0], &[1.0]).unwrap()[0];
        let want = 2.0 / PI.sqrt() * 0.538_079_506_912_768_4;
        assert!((v - want).abs() < 1e-10, "{v} vs {want}");
    }
}
