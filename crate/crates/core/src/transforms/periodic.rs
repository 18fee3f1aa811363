use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::grid::{GridDomain, GridFunction};
use crate::piecewise::{wrap_angle, Domain, PiecewiseFunction, Support};
use crate::{Error, Real, Result};

/// `H^T f(t)` for a step function on the torus, from the antiderivative
/// `ln|sin((t-s)/2)|` of the cotangent kernel.
pub fn periodic_hilbert_step<T: Real>(f: &PiecewiseFunction<T>, t: T) -> Result<Vec<T>> {
    f.expect_domain(Domain::Torus)?;
    let t = wrap_angle(t);
    if f.breakpoint_distance(t) == Some(T::zero()) {
        return Err(Error::SingularPoint { point: t.as_f64() });
    }
    let half = T::lit(0.5);
    let mut out = vec![T::zero(); f.dim()];
    for p in f.pieces() {
        let Support::Interval { start, end } = p.support else {
            continue;
        };
        let sa = ((t - start) * half).sin().abs();
        let sb = ((t - end) * half).sin().abs();
        if sa == T::zero() || sb == T::zero() {
            return Err(Error::SingularPoint { point: t.as_f64() });
        }
        let w = (sa.ln() - sb.ln()) / T::PI();
        for (o, v) in out.iter_mut().zip(&p.value) {
            *o = *o + *v * w;
        }
    }
    Ok(out)
}

/// Cached forward/inverse plans for the conjugate-function multiplier
/// `-i·sgn(k)` at one length.
#[derive(Clone)]
pub struct PeriodicHilbertPlan<T: Real> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> PeriodicHilbertPlan<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Applies the multiplier to one scalar sequence. Mode 0 and the Nyquist
    /// mode are zeroed.
    pub fn apply(&self, input: &[T], output: &mut [T]) {
        assert_eq!(input.len(), self.len);
        assert_eq!(output.len(), self.len);
        let mut buf: Vec<Complex<T>> = input.iter().map(|&x| Complex::new(x, T::zero())).collect();
        self.forward.process(&mut buf);
        let n = self.len;
        buf[0] = Complex::new(T::zero(), T::zero());
        buf[n / 2] = Complex::new(T::zero(), T::zero());
        for (k, c) in buf.iter_mut().enumerate() {
            if k == 0 || k == n / 2 {
                continue;
            }
            *c = if k < n / 2 {
                Complex::new(c.im, -c.re)
            } else {
                Complex::new(-c.im, c.re)
            };
        }
        self.inverse.process(&mut buf);
        let scale = T::one() / T::from_usize_lossy(n);
        for (o, c) in output.iter_mut().zip(&buf) {
            *o = c.re * scale;
        }
    }
}

/// Grid route for `H^T`: the multiplier applied coordinatewise.
pub fn periodic_hilbert_fft<T: Real>(f: &GridFunction<T>) -> Result<GridFunction<T>> {
    if f.domain() != GridDomain::Torus {
        return Err(Error::WrongDomain {
            expected: "torus",
            found: match f.domain() {
                GridDomain::RealLine { .. } => "real",
                _ => "integers",
            },
        });
    }
    let plan = PeriodicHilbertPlan::new(f.len())?;
    let coords: Vec<Vec<T>> = (0..f.dim())
        .map(|c| {
            let x = f.coordinate(c);
            let mut y = vec![T::zero(); x.len()];
            plan.apply(&x, &mut y);
            y
        })
        .collect();
    GridFunction::from_coordinates(GridDomain::Torus, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn step_examples() {
        let f = PiecewiseFunction::scalar_torus(&[(0.0, PI, 1.0)]).unwrap();
        assert!(periodic_hilbert_step(&f, -PI / 2.0).unwrap()[0].abs() < 1e-15);
        let one = PiecewiseFunction::scalar_torus(&[(-PI, PI, 1.0)]).unwrap();
        for t in [-3.0, -0.2, 1.0, 2.9] {
            assert!(periodic_hilbert_step(&one, t).unwrap()[0].abs() < 1e-14);
        }
        let q = PiecewiseFunction::scalar_torus(&[(0.0, PI / 2.0, 1.0)]).unwrap();
        let v = periodic_hilbert_step(&q, PI).unwrap()[0];
        assert!((v - 2f64.sqrt().ln() / PI).abs() < 1e-15);
        assert!(matches!(
            periodic_hilbert_step(&q, PI / 2.0),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn fft_conjugates_trig_polynomials() {
        let c = GridFunction::<f64>::scalar_torus_from_fn(256, f64::cos).unwrap();
        let h = periodic_hilbert_fft(&c).unwrap();
        for (t, v) in h.nodes().iter().zip(h.samples()) {
            assert!((v - t.sin()).abs() < 1e-12);
        }
        let s = GridFunction::<f64>::scalar_torus_from_fn(256, |t| (3.0 * t).sin()).unwrap();
        let h = periodic_hilbert_fft(&s).unwrap();
        for (t, v) in h.nodes().iter().zip(h.samples()) {
            assert!((v + (3.0 * t).cos()).abs() < 1e-12);
        }
        let k = GridFunction::<f64>::scalar_torus_from_fn(64, |_| 2.5).unwrap();
        assert!(periodic_hilbert_fft(&k).unwrap().samples().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn rejects_bad_lengths() {
        let g = GridFunction::<f64>::scalar_torus_from_fn(100, f64::cos).unwrap();
        assert_eq!(periodic_hilbert_fft(&g).unwrap_err(), Error::NotPowerOfTwo(100));
    }

    #[test]
    fn double_transform_and_parseval() {
        let g = GridFunction::<f64>::scalar_torus_from_fn(512, |t| (t.sin() * 2.0).exp() + 0.3 * (5.0 * t).cos()).unwrap();
        let mean = g.samples().iter().sum::<f64>() / 512.0;
        let h = periodic_hilbert_fft(&g).unwrap();
        let hh = periodic_hilbert_fft(&h).unwrap();
        // the function is smooth, so its Nyquist coefficient is negligible
        for (a, b) in g.samples().iter().zip(hh.samples()) {
            assert!((-(a - mean) - b).abs() < 1e-10);
        }
        let n2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let centred: Vec<f64> = g.samples().iter().map(|v| v - mean).collect();
        assert!((n2(h.samples()) - n2(&centred)).abs() < 1e-10);
    }

    #[test]
    fn vector_valued_and_f32() {
        let g = GridFunction::<f32>::torus_from_fn(64, 2, |t| vec![t.cos(), (2.0 * t).sin()]).unwrap();
        let h = periodic_hilbert_fft(&g).unwrap();
        for (i, t) in h.nodes().iter().enumerate() {
            assert!((h.value(i)[0] - t.sin()).abs() < 1e-5);
            assert!((h.value(i)[1] + (2.0 * t).cos()).abs() < 1e-5);
        }
    }
}
