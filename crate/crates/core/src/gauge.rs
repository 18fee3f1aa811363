//! Convex gauges `Φ, Ψ : X → R_+` and their integrals against step functions.
//!
//! Every gauge here is radial, `Φ(x) = φ(‖x‖)`, with `φ` convex,
//! nondecreasing and `φ(0) = 0`.

use std::fmt;
use std::str::FromStr;

use crate::piecewise::{Domain, PiecewiseFunction, Support};
use crate::space::NormedSpace;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gauge<T> {
    /// `x ↦ ‖x‖^p`, `p > 1`.
    Power(T),
    /// `x ↦ (‖x‖ + 1) log(‖x‖ + 1)`.
    LLogL,
    /// `x ↦ ‖x‖`.
    Norm,
}

impl<T: Real> Gauge<T> {
    pub fn power(p: T) -> Result<Self> {
        if !(p > T::one()) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("power gauge needs p > 1, got {p}")));
        }
        Ok(Gauge::Power(p))
    }

    /// Radial profile `φ(r)`.
    pub fn profile(&self, r: T) -> T {
        match *self {
            Gauge::Power(p) => r.powf(p),
            Gauge::LLogL => (r + T::one()) * r.ln_1p(),
            Gauge::Norm => r,
        }
    }

    /// `φ'(r)` (right derivative at 0).
    pub fn profile_derivative(&self, r: T) -> T {
        match *self {
            Gauge::Power(p) => {
                if r == T::zero() {
                    T::zero()
                } else {
                    p * r.powf(p - T::one())
                }
            }
            Gauge::LLogL => r.ln_1p() + T::one(),
            Gauge::Norm => T::one(),
        }
    }

    /// Degree of homogeneity, when the gauge has one.
    pub fn homogeneity(&self) -> Option<T> {
        match *self {
            Gauge::Power(p) => Some(p),
            Gauge::Norm => Some(T::one()),
            Gauge::LLogL => None,
        }
    }

    /// `Φ(x)` in the given space.
    pub fn evaluate(&self, x: &[T], space: &NormedSpace<T>) -> Result<T> {
        space.check(x)?;
        Ok(self.profile(space.norm(x)))
    }

    /// A subgradient of `Φ` at `x`: `φ'(‖x‖)` times the canonical dual element.
    pub fn gradient(&self, x: &[T], space: &NormedSpace<T>) -> Vec<T> {
        let r = space.norm(x);
        let d = self.profile_derivative(r);
        space.dual_element(x).into_iter().map(|v| v * d).collect()
    }

    /// `∫ Φ(f)`: exact sum over pieces; on the torus the complement contributes
    /// `Φ(0)` times its measure.
    pub fn integrate(&self, f: &PiecewiseFunction<T>) -> Result<T> {
        let space = f.space();
        let at_zero = self.profile(T::zero());
        let mut total = T::zero();
        for p in f.pieces() {
            let w = match p.support {
                Support::Interval { start, end } => end - start,
                Support::Point(_) => T::one(),
            };
            total = total + w * self.evaluate(&p.value, space)?;
        }
        if at_zero != T::zero() {
            match f.domain() {
                Domain::Torus => {
                    let rest = T::PI() + T::PI() - f.support_measure();
                    total = total + at_zero * rest;
                }
                d => {
                    return Err(Error::InfiniteIntegral(format!(
                        "gauge does not vanish at 0 on the unbounded domain `{}`",
                        d.name()
                    )))
                }
            }
        }
        Ok(total)
    }
}

impl<T: Real> fmt::Display for Gauge<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gauge::Power(p) => write!(f, "power:{p}"),
            Gauge::LLogL => f.write_str("llogl"),
            Gauge::Norm => f.write_str("norm"),
        }
    }
}

impl<T: Real> FromStr for Gauge<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "llogl" => return Ok(Gauge::LLogL),
            "norm" => return Ok(Gauge::Norm),
            _ => {}
        }
        let p = s
            .strip_prefix("power:")
            .or_else(|| s.strip_prefix("pow:"))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown gauge `{s}`")))?;
        let p: f64 = p
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad power `{p}`")))?;
        Gauge::power(T::lit(p))
    }
}

/// `(Φ, Ψ)`: `Φ` weighs the input, `Ψ` the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugePair<T> {
    pub phi: Gauge<T>,
    pub psi: Gauge<T>,
}

impl<T: Real> GaugePair<T> {
    pub fn new(phi: Gauge<T>, psi: Gauge<T>) -> Self {
        Self { phi, psi }
    }

    /// `(‖·‖^p, ‖·‖^p)`.
    pub fn power(p: T) -> Result<Self> {
        let g = Gauge::power(p)?;
        Ok(Self { phi: g, psi: g })
    }

    /// Both gauges homogeneous of the same degree, so `∫Ψ(Hf)/∫Φ(f)` is
    /// invariant under scaling `f`.
    pub fn is_jointly_homogeneous(&self) -> bool {
        match (self.phi.homogeneity(), self.psi.homogeneity()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl<T: Real> fmt::Display for GaugePair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.phi, self.psi)
    }
}

impl<T: Real> FromStr for GaugePair<T> {
    type Err = Error;

    /// `phi/psi`, e.g. `power:3/power:3` or `llogl/norm`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidParameter(format!("gauge pair `{s}` must be `phi/psi`")))?;
        Ok(Self::new(a.parse()?, b.parse()?))
    }
}

/// `Φ(x)` for a gauge descriptor.
pub fn evaluate_gauge<T: Real>(gauge: &Gauge<T>, x: &[T], space: &NormedSpace<T>) -> Result<T> {
    gauge.evaluate(x, space)
}

/// `∫ Φ(f)` for a step function.
pub fn integrate_gauge<T: Real>(f: &PiecewiseFunction<T>, gauge: &Gauge<T>) -> Result<T> {
    gauge.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Exponent;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn evaluate_examples() {
        let e2 = NormedSpace::<f64>::euclidean(2).unwrap();
        assert_eq!(Gauge::Power(2.0).evaluate(&[3.0, 4.0], &e2).unwrap(), 25.0);
        assert_eq!(Gauge::Power(3.5).evaluate(&[0.0, 0.0], &e2).unwrap(), 0.0);
        let s = NormedSpace::scalar();
        let v = Gauge::LLogL.evaluate(&[E - 1.0], &s).unwrap();
        assert!((v - E).abs() < 1e-14);
        assert!(matches!(
            Gauge::Norm.evaluate(&[1.0], &e2),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn integrate_examples() {
        let f = PiecewiseFunction::scalar_torus(&[(0.0, PI, 1.0)]).unwrap();
        assert!((Gauge::Power(2.0).integrate(&f).unwrap() - PI).abs() < 1e-15);
        let z = PiecewiseFunction::<f64>::zero(Domain::RealLine, NormedSpace::scalar());
        assert_eq!(Gauge::LLogL.integrate(&z).unwrap(), 0.0);
        let g = PiecewiseFunction::scalar_real_line(&[(0.0, 1.0, 2.0)]).unwrap();
        assert!((Gauge::Power(3.0f64).integrate(&g).unwrap() - 8.0).abs() < 1e-14);
        let d = PiecewiseFunction::scalar_integers(&[(0, 2.0), (5, -1.0)]).unwrap();
        assert_eq!(Gauge::Power(2.0).integrate(&d).unwrap(), 5.0);
    }

    #[test]
    fn parse_pairs() {
        let g: GaugePair<f64> = "power:3/power:3".parse().unwrap();
        assert_eq!(g, GaugePair::power(3.0).unwrap());
        assert!(g.is_jointly_homogeneous());
        let h: GaugePair<f64> = "llogl/norm".parse().unwrap();
        assert!(!h.is_jointly_homogeneous());
        assert!("power:1/norm".parse::<GaugePair<f64>>().is_err());
        assert!("power:2".parse::<GaugePair<f64>>().is_err());
        assert_eq!(g.to_string().parse::<GaugePair<f64>>().unwrap(), g);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let sp = NormedSpace::new(3, Exponent::Finite(3.0)).unwrap();
        let x = [0.4, -1.1, 0.7];
        for g in [Gauge::Power(2.5f64), Gauge::LLogL, Gauge::Norm] {
            let grad = g.gradient(&x, &sp);
            for i in 0..3 {
                let h = 1e-6;
                let mut xp = x;
                let mut xm = x;
                xp[i] += h;
                xm[i] -= h;
                let fd = (g.evaluate(&xp, &sp).unwrap() - g.evaluate(&xm, &sp).unwrap()) / (2.0 * h);
                assert!((fd - grad[i]).abs() < 1e-7, "{g} coordinate {i}");
            }
        }
    }

    proptest! {
        #[test]
        fn power_gauge_is_homogeneous(
            x in prop::collection::vec(-10.0f64..10.0, 3),
            alpha in 0.01f64..20.0,
            p in 1.01f64..6.0,
        ) {
            let sp = NormedSpace::new(3, Exponent::Finite(2.0)).unwrap();
            let g = Gauge::Power(p);
            let ax: Vec<f64> = x.iter().map(|v| alpha * v).collect();
            let lhs = g.evaluate(&ax, &sp).unwrap();
            let rhs = alpha.powf(p) * g.evaluate(&x, &sp).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }

        #[test]
        fn gauges_are_nonnegative_and_convex(a in -5.0f64..5.0, b in -5.0f64..5.0, t in 0.0f64..1.0) {
            let s = NormedSpace::scalar();
            for g in [Gauge::Power(1.7), Gauge::LLogL, Gauge::Norm] {
                let ga = g.evaluate(&[a], &s).unwrap();
                let gb = g.evaluate(&[b], &s).unwrap();
                let gm = g.evaluate(&[t * a + (1.0 - t) * b], &s).unwrap();
                prop_assert!(ga >= 0.0 && gb >= 0.0);
                prop_assert!(gm <= t * ga + (1.0 - t) * gb + 1e-12);
            }
        }
    }
}
