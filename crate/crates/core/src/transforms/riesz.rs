use num_complex::Complex;
use rustfft::FftPlanner;
use statrs::function::gamma::ln_gamma;

use crate::quadrature::gauss_legendre;
use crate::{Error, Real, Result};

use super::directional::{directional_hilbert, DirectionalField};
use super::real_line::half_space_constant;

/// `πΓ((d+1)/2) / (2π^{(d+1)/2})`, so that `Ω_{j,d}(θ) = c_d θ_j`.
pub fn riesz_kernel_weight<T: Real>(d: usize) -> T {
    T::lit(std::f64::consts::FRAC_PI_2 * half_space_constant(d))
}

/// `2Γ((m+d)/2) / (Γ(d/2)Γ(m/2))` for odd `m`.
pub fn riesz_power_constant<T: Real>(m: u32, d: u32) -> Result<T> {
    if m == 0 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("power m = {m} must be odd and positive")));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let (m, d) = (f64::from(m), f64::from(d));
    let ln = std::f64::consts::LN_2 + ln_gamma((m + d) / 2.0) - ln_gamma(d / 2.0) - ln_gamma(m / 2.0);
    Ok(T::lit(ln.exp()))
}

/// Quadrature on the unit sphere `S^{d-1}`; weights sum to its area.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule<T> {
    d: usize,
    count: usize,
    nodes: Vec<Vec<T>>,
    weights: Vec<T>,
}

impl<T: Real> SphereRule<T> {
    /// `d = 2`: `n` equispaced angles, offset by half a step. `d = 3`: `n`
    /// Gauss–Legendre nodes in `cos` of the polar angle times `2n` offset
    /// azimuths.
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("sphere rule needs at least one node".into()));
        }
        let two_pi = std::f64::consts::TAU;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        match d {
            2 => {
                for k in 0..n {
                    let a = two_pi * (k as f64 + 0.5) / n as f64;
                    nodes.push(vec![T::lit(a.cos()), T::lit(a.sin())]);
                    weights.push(T::lit(two_pi / n as f64));
                }
            }
            3 => {
                let (z, w) = gauss_legendre(n);
                let m = 2 * n;
                for (zi, wi) in z.iter().zip(&w) {
                    let s = (1.0 - zi * zi).sqrt();
                    for k in 0..m {
                        let a = two_pi * (k as f64 + 0.5) / m as f64;
                        nodes.push(vec![T::lit(s * a.cos()), T::lit(s * a.sin()), T::lit(*zi)]);
                        weights.push(T::lit(wi * two_pi / m as f64));
                    }
                }
            }
            _ => return Err(Error::Unsupported(format!("rotation quadrature in dimension {d}"))),
        }
        Ok(Self {
            d,
            count: n,
            nodes,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// The caller-supplied node parameter `n`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// The same family with twice the node parameter.
    pub fn doubled(&self) -> Result<Self> {
        Self::new(self.d, 2 * self.count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RieszEstimate<T> {
    /// Value from the doubled rule.
    pub value: Vec<T>,
    /// Max-coordinate change between the supplied and the doubled rule.
    pub error: T,
    pub nodes: usize,
}

fn rotation_sum<T: Real, F: DirectionalField<T> + ?Sized>(
    f: &F,
    j: usize,
    x: &[T],
    rule: &SphereRule<T>,
) -> Result<Vec<T>> {
    let c = riesz_kernel_weight::<T>(rule.dim());
    let mut out = vec![T::zero(); f.value_dim()];
    for (theta, w) in rule.nodes().iter().zip(rule.weights()) {
        let h = directional_hilbert(f, theta, x)?;
        let scale = *w * c * theta[j - 1];
        for (o, v) in out.iter_mut().zip(&h) {
            *o = *o + *v * scale;
        }
    }
    Ok(out)
}

/// `R_j f(x) = ∫_{S^{d-1}} Ω_{j,d}(θ) H_θ f(x) dθ` by the given rule and its
/// doubling.
pub fn riesz_rotations<T: Real, F: DirectionalField<T> + ?Sized>(
    f: &F,
    j: usize,
    x: &[T],
    rule: &SphereRule<T>,
) -> Result<RieszEstimate<T>> {
    let d = f.ambient_dim();
    if rule.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rule.dim(),
        });
    }
    if j == 0 || j > d {
        return Err(Error::InvalidParameter(format!("index j = {j} outside 1..={d}")));
    }
    let coarse = rotation_sum(f, j, x, rule)?;
    let fine_rule = rule.doubled()?;
    let fine = rotation_sum(f, j, x, &fine_rule)?;
    let error = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max);
    Ok(RieszEstimate {
        value: fine,
        error,
        nodes: fine_rule.len(),
    })
}

/// Scalar samples on a periodic box `Π [-L_i/2, L_i/2)`, row-major with the
/// last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField<T> {
    shape: Vec<usize>,
    periods: Vec<T>,
    data: Vec<T>,
}

impl<T: Real> PeriodicField<T> {
    pub fn new(shape: Vec<usize>, periods: Vec<T>, data: Vec<T>) -> Result<Self> {
        if shape.is_empty() || shape.len() != periods.len() {
            return Err(Error::InvalidParameter("shape and periods must have equal, nonzero length".into()));
        }
        if let Some(&n) = shape.iter().find(|n| **n < 2 || !n.is_power_of_two()) {
            return Err(Error::NotPowerOfTwo(n));
        }
        if periods.iter().any(|l| !(*l > T::zero())) {
            return Err(Error::InvalidParameter("periods must be positive".into()));
        }
        let total: usize = shape.iter().product();
        if data.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: data.len(),
            });
        }
        Ok(Self { shape, periods, data })
    }

    pub fn from_fn(shape: Vec<usize>, periods: Vec<T>, f: impl Fn(&[T]) -> T) -> Result<Self> {
        let total: usize = shape.iter().product();
        let probe = Self::new(shape, periods, vec![T::zero(); total])?;
        let data = (0..total).map(|i| f(&probe.point(i))).collect();
        Ok(Self { data, ..probe })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn periods(&self) -> &[T] {
        &self.periods
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for a in (0..self.shape.len()).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (i, n)| acc * n + i)
    }

    /// Coordinates of node `flat`: `-L_i/2 + i·L_i/n_i`.
    pub fn point(&self, flat: usize) -> Vec<T> {
        self.multi_index(flat)
            .iter()
            .zip(&self.shape)
            .zip(&self.periods)
            .map(|((i, n), l)| -*l / T::lit(2.0) + *l * T::from_usize_lossy(*i) / T::from_usize_lossy(*n))
            .collect()
    }

    pub fn l2_norm(&self) -> T {
        self.data.iter().map(|v| *v * *v).sum::<T>().sqrt()
    }
}

fn fft_axes<T: Real>(data: &mut [Complex<T>], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let total = data.len();
    for (a, &n) in shape.iter().enumerate() {
        let fft = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let stride: usize = shape[a + 1..].iter().product();
        let outer = total / (n * stride);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = data[base + k * stride];
                }
                fft.process(&mut buf);
                for (k, b) in buf.iter().enumerate() {
                    data[base + k * stride] = *b;
                }
            }
        }
    }
}

/// `R_j` as the multiplier `-i ξ_j/|ξ|` (`j` is 1-based). The zero mode and
/// every mode with a Nyquist index are set to zero.
pub fn riesz_multiplier<T: Real>(f: &PeriodicField<T>, j: usize) -> Result<PeriodicField<T>> {
    let d = f.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported(format!("multiplier oracle in dimension {d}")));
    }
    if j == 0 || j > d {
        return Err(Error::InvalidParameter(format!("index j = {j} outside 1..={d}")));
    }
    let mut buf: Vec<Complex<T>> = f.data.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft_axes(&mut buf, &f.shape, false);
    let two_pi = T::PI() + T::PI();
    for (flat, c) in buf.iter_mut().enumerate() {
        let idx = f.multi_index(flat);
        let mut nyquist = false;
        let xi: Vec<T> = idx
            .iter()
            .zip(&f.shape)
            .zip(&f.periods)
            .map(|((&i, &n), &l)| {
                nyquist |= 2 * i == n;
                let k = if 2 * i < n { i as f64 } else { i as f64 - n as f64 };
                two_pi * T::lit(k) / l
            })
            .collect();
        let r = xi.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if nyquist || r == T::zero() {
            *c = Complex::new(T::zero(), T::zero());
            continue;
        }
        let m = xi[j - 1] / r;
        *c = Complex::new(m * c.im, -m * c.re);
    }
    fft_axes(&mut buf, &f.shape, true);
    let scale = T::one() / T::from_usize_lossy(buf.len());
    Ok(PeriodicField {
        shape: f.shape.clone(),
        periods: f.periods.clone(),
        data: buf.iter().map(|c| c.re * scale).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::BoxStepFunction;
    use crate::transforms::SmoothField;
    use std::f64::consts::PI;

    #[test]
    fn power_constant_examples() {
        assert!((riesz_power_constant::<f64>(1, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!((riesz_power_constant::<f64>(1, 1).unwrap() - 2.0 / PI).abs() < 1e-12);
        assert!(riesz_power_constant::<f64>(2, 2).is_err());
        // m = 3, d = 2: 2Γ(5/2)/(Γ(1)Γ(3/2)) = 3
        assert!((riesz_power_constant::<f64>(3, 2).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn power_constant_grows_like_m_to_half_d() {
        for d in [1u32, 2, 3, 5] {
            let limit = 2.0 / (statrs::function::gamma::gamma(d as f64 / 2.0) * 2f64.powf(d as f64 / 2.0));
            let m = 100_001u32;
            let c: f64 = riesz_power_constant(m, d).unwrap();
            let ratio = c / (m as f64).powf(d as f64 / 2.0);
            assert!((ratio / limit - 1.0).abs() < 1e-3, "d = {d}");
        }
    }

    #[test]
    fn kernel_weight_in_the_plane() {
        assert!((riesz_kernel_weight::<f64>(2) - 0.25).abs() < 1e-15);
        assert!((riesz_kernel_weight::<f64>(1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sphere_rules_integrate_polynomials() {
        let r2 = SphereRule::<f64>::new(2, 64).unwrap();
        assert!((r2.weights().iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        let r3 = SphereRule::<f64>::new(3, 12).unwrap();
        assert!((r3.weights().iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);
        // ∫_{S²} z² = 4π/3, ∫_{S²} x² y² = 4π/15
        let z2: f64 = r3.nodes().iter().zip(r3.weights()).map(|(n, w)| w * n[2] * n[2]).sum();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 1e-12);
        let xy: f64 = r3.nodes().iter().zip(r3.weights()).map(|(n, w)| w * n[0] * n[0] * n[1] * n[1]).sum();
        assert!((xy - 4.0 * PI / 15.0).abs() < 1e-12);
        assert!(SphereRule::<f64>::new(4, 8).is_err());
    }

    #[test]
    fn rotations_vanish_for_even_data() {
        // symmetric about x in coordinate 1
        let f = BoxStepFunction::scalar(
            2,
            vec![
                (vec![(-1.3, 1.3), (0.2, 0.9)], 1.0f64),
                (vec![(-0.4, 0.4), (-2.0, -1.0)], -2.0),
            ],
        )
        .unwrap();
        let r = riesz_rotations(&f, 1, &[0.0, 0.0], &SphereRule::new(2, 64).unwrap()).unwrap();
        assert!(r.value[0].abs() < 1e-13);
        let g = BoxStepFunction::scalar(
            3,
            vec![(vec![(-1.0, 1.0), (0.5, 1.5), (-0.3, 0.2)], 1.0f64)],
        )
        .unwrap();
        let r = riesz_rotations(&g, 1, &[0.0, 0.0, 0.0], &SphereRule::new(3, 8).unwrap()).unwrap();
        assert!(r.value[0].abs() < 1e-13);
    }

    #[test]
    fn one_dimensional_rotation_is_the_hilbert_transform() {
        let f = BoxStepFunction::scalar(1, vec![(vec![(0.0, 1.0)], 1.0)]).unwrap();
        let h = directional_hilbert(&f, &[1.0], &[2.0]).unwrap()[0];
        let c = riesz_kernel_weight::<f64>(1);
        let m = directional_hilbert(&f, &[-1.0], &[2.0]).unwrap()[0];
        assert!((c * (h - m) - h).abs() < 1e-15);
    }

    #[test]
    fn multiplier_single_mode() {
        let n = 32;
        let f = PeriodicField::from_fn(vec![n, n], vec![2.0 * PI, 2.0 * PI], |x: &[f64]| (3.0 * x[0]).cos()).unwrap();
        let r1 = riesz_multiplier(&f, 1).unwrap();
        let r2 = riesz_multiplier(&f, 2).unwrap();
        for i in 0..n * n {
            let x = f.point(i);
            assert!((r1.data()[i] - (3.0 * x[0]).sin()).abs() < 1e-12);
            assert!(r2.data()[i].abs() < 1e-12);
        }
    }

    #[test]
    fn multiplier_is_non_expansive() {
        let f = PeriodicField::from_fn(vec![16, 32], vec![3.0, 5.0], |x: &[f64]| {
            (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp() + if x[0] > 0.2 { 1.0 } else { 0.0 }
        })
        .unwrap();
        let n0 = f.l2_norm();
        let a = riesz_multiplier(&f, 1).unwrap();
        let b = riesz_multiplier(&f, 2).unwrap();
        assert!(a.l2_norm() <= n0 && b.l2_norm() <= n0);
        let sum: Vec<f64> = a.data().iter().zip(b.data()).map(|(x, y)| x + y).collect();
        let ns = sum.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(ns <= 2f64.sqrt() * n0);
        // Σ_j R_j² = -1 off the zero and Nyquist modes
        let aa = riesz_multiplier(&a, 1).unwrap();
        let bb = riesz_multiplier(&b, 2).unwrap();
        let sq: f64 = aa.data().iter().zip(bb.data()).map(|(x, y)| (x + y).powi(2)).sum();
        assert!(sq.sqrt() <= n0);
    }

    #[test]
    fn rotations_match_multiplier_on_a_bump() {
        let bump = |x: &[f64]| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            (1.0 - r2) * (-r2).exp()
        };
        let n = 128;
        let grid = PeriodicField::from_fn(vec![n, n], vec![16.0, 16.0], bump).unwrap();
        let oracle = riesz_multiplier(&grid, 2).unwrap();
        let field = SmoothField::new(2, 1, 7.0, |x: &[f64]| vec![bump(x)]).unwrap();
        let idx = grid.flat_index(&[n / 2 + 4, n / 2 + 8]);
        let x = grid.point(idx);
        let r = riesz_rotations(&field, 2, &x, &SphereRule::new(2, 64).unwrap()).unwrap();
        assert!((r.value[0] - oracle.data()[idx]).abs() < 1e-3, "{} vs {}", r.value[0], oracle.data()[idx]);
        assert!(r.error < 1e-6);
    }
}
