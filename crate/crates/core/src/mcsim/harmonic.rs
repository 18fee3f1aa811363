use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gauge::GaugePair;
use crate::piecewise::{Domain, PiecewiseFunction, Support};
use crate::quadrature::{integrate, Tolerance};
use crate::space::NormedSpace;
use crate::transforms::periodic_hilbert_step;
use crate::{Error, Result};

/// Boundary data on the unit circle together with its harmonic extension
/// `u` and the conjugate extension `ũ`, normalised by `ũ(0) = 0`.
pub trait HarmonicData: Sync {
    fn space(&self) -> NormedSpace<f64>;

    /// `u(z)` for `|z| < 1`.
    fn extension(&self, z: [f64; 2]) -> Result<Vec<f64>>;

    /// `ũ(z)` for `|z| < 1`.
    fn conjugate(&self, z: [f64; 2]) -> Result<Vec<f64>>;

    /// Boundary value at angle `theta`.
    fn boundary(&self, theta: f64) -> Vec<f64>;

    /// Boundary value of `ũ`, i.e. the conjugate function at `theta`.
    fn conjugate_boundary(&self, theta: f64) -> Result<Vec<f64>>;

    /// Angles where the boundary data jump, sorted in `[-π, π)`.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

fn check_disc(z: [f64; 2]) -> Result<()> {
    let r = z[0].hypot(z[1]);
    if r < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDomain(format!("|z| = {r} is not inside the unit disc")))
    }
}

/// Harmonic measure of the arc `[a, b)` seen from `z`.
fn arc_measure(a: f64, b: f64, z: Complex64) -> f64 {
    if b - a >= 2.0 * PI * (1.0 - 1e-15) {
        return 1.0;
    }
    let c = (Complex64::from_polar(1.0, b) - z) * (Complex64::from_polar(1.0, a) - z).conj();
    let mut arg = c.im.atan2(c.re);
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    arg / PI - (b - a) / (2.0 * PI)
}

/// Conjugate harmonic measure of `[a, b)`, zero at the origin.
fn arc_conjugate(a: f64, b: f64, z: Complex64) -> f64 {
    if b - a >= 2.0 * PI * (1.0 - 1e-15) {
        return 0.0;
    }
    let da = (Complex64::from_polar(1.0, a) - z).norm();
    let db = (Complex64::from_polar(1.0, b) - z).norm();
    (da.ln() - db.ln()) / PI
}

fn piecewise_sum(f: &PiecewiseFunction<f64>, z: [f64; 2], kernel: fn(f64, f64, Complex64) -> f64) -> Result<Vec<f64>> {
    f.expect_domain(Domain::Torus)?;
    check_disc(z)?;
    let z = Complex64::new(z[0], z[1]);
    let mut out = vec![0.0; f.dim()];
    for p in f.pieces() {
        let Support::Interval { start, end } = p.support else {
            continue;
        };
        let w = kernel(start, end, z);
        for (o, v) in out.iter_mut().zip(&p.value) {
            *o += v * w;
        }
    }
    Ok(out)
}

/// Poisson integral of a torus step function, summed piece by piece in
/// closed form.
pub fn poisson_extension(f: &PiecewiseFunction<f64>, z: [f64; 2]) -> Result<Vec<f64>> {
    piecewise_sum(f, z, arc_measure)
}

/// Conjugate Poisson integral of a torus step function; vanishes at `0`.
pub fn conjugate_extension(f: &PiecewiseFunction<f64>, z: [f64; 2]) -> Result<Vec<f64>> {
    piecewise_sum(f, z, arc_conjugate)
}

impl HarmonicData for PiecewiseFunction<f64> {
    fn space(&self) -> NormedSpace<f64> {
        *PiecewiseFunction::space(self)
    }

    fn extension(&self, z: [f64; 2]) -> Result<Vec<f64>> {
        poisson_extension(self, z)
    }

    fn conjugate(&self, z: [f64; 2]) -> Result<Vec<f64>> {
        conjugate_extension(self, z)
    }

    fn boundary(&self, theta: f64) -> Vec<f64> {
        self.evaluate(theta)
    }

    fn conjugate_boundary(&self, theta: f64) -> Result<Vec<f64>> {
        periodic_hilbert_step(self, theta)
    }

    fn breakpoints(&self) -> Vec<f64> {
        PiecewiseFunction::breakpoints(self)
    }
}

/// Scalar trigonometric polynomial `a_0 + Σ_k (a_k cos kθ + b_k sin kθ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigPolynomial {
    /// `cos[k]` is `a_k` (`cos[0]` the constant term); `sin[k]` is `b_k`
    /// and `sin[0]` is ignored.
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { cos, sin }
    }

    fn coefficients(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let n = self.cos.len().max(self.sin.len());
        (0..n).map(|k| {
            let a = self.cos.get(k).copied().unwrap_or(0.0);
            let b = if k == 0 { 0.0 } else { self.sin.get(k).copied().unwrap_or(0.0) };
            (k, Complex64::new(a, -b))
        })
    }

    /// `Σ (a_k - i b_k) z^k`; its real part is `u`, its imaginary part `ũ`.
    fn analytic(&self, z: Complex64) -> Complex64 {
        let mut zk = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (_, c) in self.coefficients() {
            acc += c * zk;
            zk *= z;
        }
        acc
    }
}

impl HarmonicData for TrigPolynomial {
    fn space(&self) -> NormedSpace<f64> {
        NormedSpace::scalar()
    }

    fn extension(&self, z: [f64; 2]) -> Result<Vec<f64>> {
        check_disc(z)?;
        Ok(vec![self.analytic(Complex64::new(z[0], z[1])).re])
    }

    fn conjugate(&self, z: [f64; 2]) -> Result<Vec<f64>> {
        check_disc(z)?;
        Ok(vec![self.analytic(Complex64::new(z[0], z[1])).im])
    }

    fn boundary(&self, theta: f64) -> Vec<f64> {
        vec![self.analytic(Complex64::from_polar(1.0, theta)).re]
    }

    fn conjugate_boundary(&self, theta: f64) -> Result<Vec<f64>> {
        Ok(vec![self.analytic(Complex64::from_polar(1.0, theta)).im])
    }
}

/// `∫_T Ψ(ũ) / ∫_T Φ(u)` on the boundary, by adaptive quadrature between
/// breakpoints (the conjugate of a step function has integrable logarithmic
/// singularities there).
pub fn boundary_ratio(data: &dyn HarmonicData, gauges: GaugePair<f64>) -> Result<f64> {
    let space = data.space();
    let mut cuts = vec![-PI];
    cuts.extend(data.breakpoints().into_iter().filter(|b| *b > -PI && *b < PI));
    cuts.push(PI);
    let tol = Tolerance {
        absolute: 1e-11,
        relative: 1e-11,
        max_intervals: 4000,
    };
    let (mut num, mut den) = (0.0, 0.0);
    for w in cuts.windows(2) {
        let mut failure = None;
        let a = integrate(
            |t| match data.conjugate_boundary(t) {
                Ok(v) => gauges.psi.profile(space.norm(&v)),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            },
            w[0],
            w[1],
            tol,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        num += a.value;
        den += integrate(|t| gauges.phi.profile(space.norm(&data.boundary(t))), w[0], w[1], tol)?.value;
    }
    if den == 0.0 {
        return Err(Error::Degenerate("∫Φ(f) vanishes".into()));
    }
    Ok(num / den)
}
