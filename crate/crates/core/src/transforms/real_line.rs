use crate::boxes::BoxStepFunction;
use crate::piecewise::{Domain, PiecewiseFunction, Support};
use crate::quadrature::{integrate_box, Tolerance};
use crate::{Error, Real, Result};

/// Semidiscrete sums touching more lattice points than this are refused.
const MAX_LATTICE_TERMS: f64 = 5.0e8;

fn intervals<T: Real>(f: &PiecewiseFunction<T>) -> impl Iterator<Item = (T, T, &[T])> {
    f.pieces().iter().filter_map(|p| match p.support {
        Support::Interval { start, end } => Some((start, end, p.value.as_slice())),
        Support::Point(_) => None,
    })
}

/// `H^R f(t) = (1/π) Σ x_k ln|(t-a_k)/(t-b_k)|`.
pub fn real_hilbert_step<T: Real>(f: &PiecewiseFunction<T>, t: T) -> Result<Vec<T>> {
    f.expect_domain(Domain::RealLine)?;
    let mut out = vec![T::zero(); f.dim()];
    for (a, b, v) in intervals(f) {
        if t == a || t == b {
            return Err(Error::SingularPoint { point: t.as_f64() });
        }
        let w = ((t - a).abs().ln() - (t - b).abs().ln()) / T::PI();
        for (o, x) in out.iter_mut().zip(v) {
            *o = *o + *x * w;
        }
    }
    Ok(out)
}

/// `(1/π) Σ_{k≠0} f(t-εk)/k`.
///
/// Only the finitely many `k` with `t - εk` in the support contribute, so the
/// sum is enumerated exactly and has no truncation tail.
pub fn semidiscrete_hilbert<T: Real>(f: &PiecewiseFunction<T>, eps: T, t: T) -> Result<Vec<T>> {
    f.expect_domain(Domain::RealLine)?;
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("step must be positive, got {eps}")));
    }
    let mut out = vec![T::zero(); f.dim()];
    for (a, b, v) in intervals(f) {
        // t - εk ∈ [a, b)  ⇔  k ∈ ((t-b)/ε, (t-a)/ε]
        let lo = ((t - b) / eps).floor();
        let hi = ((t - a) / eps).ceil();
        if (hi - lo).as_f64() > MAX_LATTICE_TERMS {
            return Err(Error::InvalidParameter(format!(
                "step {eps} puts too many lattice points in a piece"
            )));
        }
        let (lo, hi) = (lo.to_i64().unwrap_or(i64::MIN), hi.to_i64().unwrap_or(i64::MAX));
        let mut s = T::zero();
        for k in lo..=hi {
            if k == 0 {
                continue;
            }
            let kt = T::from_i64(k).expect("i64 converts");
            let y = t - eps * kt;
            if a <= y && y < b {
                s = s + T::one() / kt;
            }
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = *o + *x * s / T::PI();
        }
    }
    Ok(out)
}

/// The one-dimensional Hilbert operator `T f(x) = (1/π) ∫_0^∞ f(y)/(x+y) dy`
/// for step functions supported in `[0, ∞)`.
pub fn hilbert_operator_t<T: Real>(f: &PiecewiseFunction<T>, x: T) -> Result<Vec<T>> {
    f.expect_domain(Domain::RealLine)?;
    if !(x > T::zero()) {
        return Err(Error::OutsideDomain(format!("T is defined for x > 0, got {x}")));
    }
    let mut out = vec![T::zero(); f.dim()];
    for (a, b, v) in intervals(f) {
        if a < T::zero() {
            return Err(Error::OutsideDomain(format!("piece [{a}, {b}) leaves the half-line")));
        }
        let w = ((x + b) / (x + a)).ln() / T::PI();
        for (o, c) in out.iter_mut().zip(v) {
            *o = *o + *c * w;
        }
    }
    Ok(out)
}

/// `Γ((d+1)/2) / π^{(d+1)/2}`.
pub(crate) fn half_space_constant(d: usize) -> f64 {
    let s = (d as f64 + 1.0) / 2.0;
    (statrs::function::gamma::ln_gamma(s) - s * std::f64::consts::PI.ln()).exp()
}

/// `T_j f(x)` on the half-space `{y_j > 0}` of `R^d` (`j` is 1-based), by
/// nested adaptive quadrature over each box at absolute tolerance `1e-8`.
/// For `d = 1` the log closed form is used.
pub fn hilbert_operator_tj<T: Real>(f: &BoxStepFunction<T>, x: &[T], j: usize) -> Result<Vec<T>> {
    let d = f.ambient_dim();
    if j == 0 || j > d {
        return Err(Error::InvalidParameter(format!("index j = {j} outside 1..={d}")));
    }
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    let jj = j - 1;
    if !(x[jj] > T::zero()) {
        return Err(Error::OutsideDomain(format!("x_{j} must be positive, got {}", x[jj])));
    }
    for b in f.boxes() {
        if b.extent[jj].0 < T::zero() {
            return Err(Error::OutsideDomain(format!("a box leaves the half-space y_{j} > 0")));
        }
    }
    let mut out = vec![T::zero(); f.value_dim()];
    if d == 1 {
        for b in f.boxes() {
            let (lo, hi) = b.extent[0];
            let w = ((x[0] + hi) / (x[0] + lo)).ln() / T::PI();
            for (o, c) in out.iter_mut().zip(&b.value) {
                *o = *o + *c * w;
            }
        }
        return Ok(out);
    }
    let c = T::lit(half_space_constant(d));
    let power = T::from_usize_lossy(d + 1);
    let kernel = |y: &[T]| {
        let r2: T = x.iter().zip(y).map(|(a, b)| (*a + *b) * (*a + *b)).sum();
        (x[jj] + y[jj]) / r2.sqrt().powf(power)
    };
    let n = f.boxes().len().max(1);
    let tol = Tolerance::absolute(T::lit(1e-8) / T::from_usize_lossy(n) / c);
    for b in f.boxes() {
        let v = integrate_box(&kernel, &b.extent, tol)? * c;
        for (o, val) in out.iter_mut().zip(&b.value) {
            *o = *o + *val * v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxPiece;
    use crate::space::NormedSpace;
    use std::f64::consts::{LN_2, PI};

    fn ind(a: f64, b: f64) -> PiecewiseFunction<f64> {
        PiecewiseFunction::scalar_real_line(&[(a, b, 1.0)]).unwrap()
    }

    #[test]
    fn real_line_examples() {
        assert!((real_hilbert_step(&ind(0.0, 1.0), 2.0).unwrap()[0] - LN_2 / PI).abs() < 1e-15);
        assert!(real_hilbert_step(&ind(-1.0, 1.0), 0.0).unwrap()[0].abs() < 1e-15);
        let f = PiecewiseFunction::scalar_real_line(&[(-1.0, 0.0, -1.0), (0.0, 1.0, 1.0)]).unwrap();
        let want = (LN_2 - 1.5f64.ln()) / PI;
        assert!((real_hilbert_step(&f, 2.0).unwrap()[0] - want).abs() < 1e-15);
        assert!(matches!(real_hilbert_step(&f, 1.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn dilation_covariance() {
        let f = PiecewiseFunction::scalar_real_line(&[(-0.7, 0.2, 1.3f64), (0.5, 2.0, -0.4)]).unwrap();
        for eps in [0.1, 0.5, 3.0] {
            // f(ε·) has pieces [a/ε, b/ε)
            let fe = f.dilate(eps).unwrap();
            for t in [-3.3, 0.77, 5.1] {
                let lhs = real_hilbert_step(&fe, t).unwrap()[0];
                let rhs = real_hilbert_step(&f, eps * t).unwrap()[0];
                assert!((lhs - rhs).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn semidiscrete_lattice_enumeration() {
        // only k = 2 puts 2.5 - k in [0, 1)
        let v = semidiscrete_hilbert(&ind(0.0, 1.0), 1.0, 2.5).unwrap()[0];
        assert!((v - 0.5 / PI).abs() < 1e-15);
        let w = semidiscrete_hilbert(&ind(0.0, 1.0), 1e-3, 2.0).unwrap()[0];
        assert!((w - LN_2 / PI).abs() <= 0.01);
        assert!((w - LN_2 / PI).abs() <= 1e-3);
        let g = PiecewiseFunction::scalar_real_line(&[(-1.0, 0.3, 2.0)]).unwrap();
        let sum = ind(0.5, 1.5).add(&g).unwrap();
        let a = semidiscrete_hilbert(&ind(0.5, 1.5), 0.37, 0.9).unwrap()[0];
        let b = semidiscrete_hilbert(&g, 0.37, 0.9).unwrap()[0];
        let c = semidiscrete_hilbert(&sum, 0.37, 0.9).unwrap()[0];
        assert!((a + b - c).abs() < 1e-14);
    }

    #[test]
    fn hilbert_operator_examples() {
        assert!((hilbert_operator_t(&ind(0.0, 1.0), 1.0).unwrap()[0] - LN_2 / PI).abs() < 1e-15);
        assert!((hilbert_operator_t(&ind(1.0, 2.0), 2.0).unwrap()[0] - (4.0f64 / 3.0).ln() / PI).abs() < 1e-15);
        let zero = PiecewiseFunction::<f64>::zero(Domain::RealLine, NormedSpace::scalar());
        assert_eq!(hilbert_operator_t(&zero, 1.0).unwrap(), vec![0.0]);
        assert!(matches!(hilbert_operator_t(&ind(0.0, 1.0), 0.0), Err(Error::OutsideDomain(_))));
        assert!(hilbert_operator_t(&ind(-1.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn tj_reduces_to_t_in_one_dimension() {
        let b = BoxStepFunction::scalar(1, vec![(vec![(1.0, 2.0)], 1.0)]).unwrap();
        let v = hilbert_operator_tj(&b, &[2.0], 1).unwrap()[0];
        assert!((v - (4.0f64 / 3.0).ln() / PI).abs() < 1e-15);
    }

    #[test]
    fn tj_constant_and_wide_slab() {
        assert!((half_space_constant(1) - 1.0 / PI).abs() < 1e-15);
        assert!((half_space_constant(2) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        // Integrating the d = 2 kernel over y_1 ∈ R gives 1/(π(x_2 + y_2)),
        // so a very wide slab approaches the d = 1 operator in y_2.
        let w = 1.0e4;
        let f = BoxStepFunction::scalar(2, vec![(vec![(-w, w), (0.0, 1.0)], 1.0)]).unwrap();
        let v = hilbert_operator_tj(&f, &[0.3, 1.0], 2).unwrap()[0];
        // the part of the line outside |y_1| < w carries O(1/w²)
        assert!((v - LN_2 / PI).abs() < 1e-6, "{v}");
    }

    #[test]
    fn tj_matches_inner_closed_form() {
        // inner y_1 integral: ∫ s/(u² + s²)^{3/2} du = u/(s √(u² + s²))
        let f = BoxStepFunction::scalar(2, vec![(vec![(0.0, 1.0), (0.5, 1.5)], 1.0)]).unwrap();
        let x = [0.2, 0.4];
        let inner = |y2: f64| {
            let s = x[1] + y2;
            let g = |u: f64| u / (s * (u * u + s * s).sqrt());
            g(x[0] + 1.0) - g(x[0])
        };
        let r = crate::quadrature::integrate(inner, 0.5, 1.5, Tolerance::absolute(1e-13)).unwrap();
        let want = r.value / (2.0 * PI);
        let v = hilbert_operator_tj(&f, &x, 2).unwrap()[0];
        assert!((v - want).abs() < 1e-8);
    }

    #[test]
    fn tj_validates() {
        let f = BoxStepFunction::new(
            2,
            NormedSpace::scalar(),
            vec![BoxPiece {
                extent: vec![(-1.0, 1.0), (-0.5, 1.0)],
                value: vec![1.0],
            }],
        )
        .unwrap();
        assert!(hilbert_operator_tj(&f, &[1.0, 1.0], 2).is_err());
        assert!(hilbert_operator_tj(&f, &[1.0, 1.0], 3).is_err());
        assert!(hilbert_operator_tj(&f, &[-1.0, 1.0], 1).is_err());
    }
}
