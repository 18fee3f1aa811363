//! Globally adaptive Gauss–Kronrod (7/15) quadrature, generic over [`Real`].
//!
//! Used where no closed form exists: the `d > 1` Hilbert operators, the
//! directional transform of smooth fields, and boundary integrals of
//! transforms with logarithmic endpoint singularities. The 15-point rule
//! never evaluates the endpoints, so integrable endpoint singularities are
//! handled by subdivision.

use crate::{Error, Real, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error: T,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub absolute: T,
    pub relative: T,
    pub max_intervals: usize,
}

impl<T: Real> Tolerance<T> {
    pub fn absolute(absolute: T) -> Self {
        Self {
            absolute,
            relative: T::zero(),
            max_intervals: 4000,
        }
    }
}

struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let center = (a + b) / T::lit(2.0);
    let half = (b - a) / T::lit(2.0);
    let fc = f(center);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * T::lit(x);
        let s = f(center - dx) + f(center + dx);
        kron = kron + T::lit(w) * s;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// `∫_a^b f`, subdividing the worst segment until the summed error estimate
/// meets `max(absolute, relative·|I|)`.
pub fn integrate<T: Real>(mut f: impl FnMut(T) -> T, a: T, b: T, tol: Tolerance<T>) -> Result<QuadratureResult<T>> {
    if a == b {
        return Ok(QuadratureResult {
            value: T::zero(),
            error: T::zero(),
            evaluations: 0,
        });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("quadrature bounds must be finite".into()));
    }
    let (value, error) = kronrod(&mut f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];
    let mut evaluations = 15;
    loop {
        let total: T = segments.iter().map(|s| s.value).sum();
        let err: T = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NonFinite("integrand produced a non-finite value".into()));
        }
        let target = tol.absolute.max(tol.relative * total.abs());
        if err <= target || segments.len() >= tol.max_intervals {
            return Ok(QuadratureResult {
                value: total,
                error: err,
                evaluations,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, s)| if s.error > be { (i, s.error) } else { (bi, be) });
        let s = segments.swap_remove(worst);
        let mid = (s.a + s.b) / T::lit(2.0);
        if !(mid > s.a && mid < s.b) {
            // segment can no longer be split in this precision
            segments.push(Segment { error: T::zero(), ..s });
            continue;
        }
        let (lv, le) = kronrod(&mut f, s.a, mid);
        let (rv, re) = kronrod(&mut f, mid, s.b);
        evaluations += 30;
        segments.push(Segment { a: s.a, b: mid, value: lv, error: le });
        segments.push(Segment { a: mid, b: s.b, value: rv, error: re });
    }
}

/// Nested adaptive quadrature over a box `Π [lo_i, hi_i]` (intended for
/// `d ≤ 3`). The tolerance is applied to the outer integral; inner integrals
/// run at a tenth of it.
pub fn integrate_box<T: Real>(f: &dyn Fn(&[T]) -> T, extent: &[(T, T)], tol: Tolerance<T>) -> Result<T> {
    let mut point = vec![T::zero(); extent.len()];
    nested(f, extent, 0, &mut point, tol)
}

fn nested<T: Real>(f: &dyn Fn(&[T]) -> T, extent: &[(T, T)], axis: usize, point: &mut Vec<T>, tol: Tolerance<T>) -> Result<T> {
    if axis == extent.len() {
        return Ok(f(point));
    }
    let (lo, hi) = extent[axis];
    let inner_tol = Tolerance {
        absolute: tol.absolute / T::lit(10.0) / (hi - lo).max(T::one()),
        ..tol
    };
    let mut failure = None;
    let r = integrate(
        |x| {
            point[axis] = x;
            match nested(f, extent, axis + 1, point, inner_tol) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    T::zero()
                }
            }
        },
        lo,
        hi,
        tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n` from the Chebyshev initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::absolute(1e-14)).unwrap();
        assert!((r.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn endpoint_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, Tolerance::absolute(1e-11)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-10, "{}", r.value);
        // ∫_0^1 ln^2 x dx = 2
        let r = integrate(|x: f64| x.ln().powi(2), 0.0, 1.0, Tolerance::absolute(1e-11)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn oscillatory() {
        let r = integrate(|x: f64| (20.0 * x).sin() * x, 0.0, 3.0, Tolerance::absolute(1e-12)).unwrap();
        let exact = (60f64.sin() - 60.0 * 60f64.cos()) / 400.0;
        assert!((r.value - exact).abs() < 1e-11);
    }

    #[test]
    fn box_integral() {
        let f = |x: &[f64]| x[0] * x[1] * x[1];
        let v = integrate_box(&f, &[(0.0, 1.0), (0.0, 2.0)], Tolerance::absolute(1e-12)).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_rules() {
        for n in [1usize, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // exact for degree 2n - 1
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn generic_over_f32() {
        let r = integrate(|x: f32| x.exp(), 0.0f32, 1.0, Tolerance::absolute(1e-5)).unwrap();
        assert!((r.value - (std::f32::consts::E - 1.0)).abs() < 1e-5);
    }
}
