use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{GridDomain, GridFunction};
use crate::{Error, Real, Result};

use super::operators::LinearOperator;

/// A certified lower bound for an operator norm at one truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate<T> {
    pub lower_bound: T,
    pub iterations: usize,
    /// Relative change of the ratio over the last iteration.
    pub residual: T,
    /// The input attaining `lower_bound`.
    pub witness: GridFunction<T>,
    pub truncation: usize,
    pub converged: bool,
    /// Ratio after each iteration (nondecreasing).
    pub history: Vec<T>,
}

/// Starting vector for the iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    /// Uniform entries in `[-1, 1]` from a ChaCha stream.
    Random(u64),
    /// `sgn(t)|t|^{-1/p}` about the centre of the grid; close to the
    /// extremal profile of antisymmetric kernels.
    OddSymmetric,
}

impl Default for Seed {
    fn default() -> Self {
        Seed::Random(0x5eed)
    }
}

pub fn seed_vector<T: Real>(domain: GridDomain<T>, size: usize, p: T, seed: Seed) -> Vec<T> {
    match seed {
        Seed::Random(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..size).map(|_| T::lit(rng.random_range(-1.0..=1.0))).collect()
        }
        Seed::OddSymmetric => {
            // offsets from the centre; on the torus the node -π plays 0's antipode
            let centre = match domain {
                GridDomain::Torus => T::from_usize_lossy(size / 2),
                _ => T::from_usize_lossy(size - 1) / T::lit(2.0),
            };
            (0..size)
                .map(|i| {
                    let t = T::from_usize_lossy(i) - centre;
                    if t == T::zero() {
                        T::zero()
                    } else {
                        t.sign0() * t.abs().powf(-p.recip())
                    }
                })
                .collect()
        }
    }
}

pub(crate) fn lp_norm<T: Real>(x: &[T], p: T) -> T {
    let m = x.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    if m == T::zero() {
        return T::zero();
    }
    x.iter().map(|v| (v.abs() / m).powf(p)).sum::<T>().powf(p.recip()) * m
}

/// `|v|^e sgn(v)` elementwise, with `sgn(0) = 0`.
fn signed_power<T: Real>(v: &[T], e: T) -> Vec<T> {
    v.iter().map(|x| x.sign0() * x.abs().powf(e)).collect()
}

fn normalized<T: Real>(x: Vec<T>, p: T) -> Vec<T> {
    let n = lp_norm(&x, p);
    x.into_iter().map(|v| v / n).collect()
}

/// `‖Ax‖_p / ‖x‖_p`.
pub fn rayleigh_ratio<T: Real>(op: &dyn LinearOperator<T>, x: &[T], p: T) -> T {
    lp_norm(&op.apply(x), p) / lp_norm(x, p)
}

/// Nonlinear power iteration for the `p → p` norm of a square matrix.
///
/// With `ψ = |Ax|^{p-1} sgn(Ax)` and `z = Aᵀψ`, the update is
/// `x ← |z|^{1/(p-1)} sgn(z)`, normalized. The ratio `‖Ax‖_p/‖x‖_p` cannot
/// decrease; a decrease beyond rounding aborts with
/// [`Error::MonotonicityViolated`].
pub fn p_norm_power_iteration<T: Real>(
    op: &dyn LinearOperator<T>,
    p: T,
    seed: &[T],
    tol: T,
    max_iter: usize,
) -> Result<NormEstimate<T>> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent must satisfy 1 < p < ∞, got {p}")));
    }
    let n = op.size();
    if n < 2 {
        return Err(Error::InvalidParameter("truncation needs at least two points".into()));
    }
    if seed.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: seed.len(),
        });
    }
    if lp_norm(seed, p) == T::zero() {
        return Err(Error::Degenerate("seed vector is zero".into()));
    }
    let slack = T::lit(1e-12).max(T::epsilon() * T::lit(64.0) * T::from_usize_lossy(n).ln());
    let dual = (p - T::one()).recip();
    let mut x = normalized(seed.to_vec(), p);
    let mut y = op.apply(&x);
    let mut ratio = lp_norm(&y, p);
    let mut history = vec![ratio];
    let mut residual = T::infinity();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let psi = signed_power(&y, p - T::one());
        let z = op.apply_adjoint(&psi);
        if lp_norm(&z, p) == T::zero() {
            // Aᵀψ vanishes: x is already a fixed point
            residual = T::zero();
            converged = true;
            break;
        }
        let next = normalized(signed_power(&z, dual), p);
        let next_y = op.apply(&next);
        let next_ratio = lp_norm(&next_y, p);
        if !next_ratio.is_finite() {
            return Err(Error::NonFinite(format!("ratio at iteration {iterations}")));
        }
        if next_ratio < ratio * (T::one() - slack) {
            return Err(Error::MonotonicityViolated {
                iteration: iterations,
                previous: ratio.as_f64(),
                current: next_ratio.as_f64(),
            });
        }
        residual = (next_ratio - ratio).abs() / next_ratio;
        if next_ratio >= ratio {
            x = next;
            y = next_y;
            ratio = next_ratio;
        }
        history.push(ratio);
        if residual <= tol {
            converged = true;
            break;
        }
    }
    let witness = GridFunction::scalar(op.domain(), x)?;
    let lower_bound = rayleigh_ratio(op, witness.samples(), p);
    Ok(NormEstimate {
        lower_bound,
        iterations,
        residual,
        witness,
        truncation: n,
        converged,
        history,
    })
}

/// Carries a witness to a larger (or smaller) truncation of the same kind:
/// torus samples are repeated onto the finer grid, window samples are
/// zero-padded about the centre.
pub fn embed_witness<T: Real>(witness: &GridFunction<T>, domain: GridDomain<T>, size: usize) -> Vec<T> {
    let src = witness.samples();
    let len = src.len();
    match domain {
        GridDomain::Torus => (0..size).map(|i| src[i * len / size]).collect(),
        _ => {
            let mut out = vec![T::zero(); size];
            if size >= len {
                let off = (size - len) / 2;
                out[off..off + len].copy_from_slice(src);
            } else {
                let off = (len - size) / 2;
                out.copy_from_slice(&src[off..off + size]);
            }
            out
        }
    }
}

/// Power iteration from several starting vectors; the best run is returned
/// with the total iteration count.
pub fn p_norm_best_of<T: Real>(
    op: &dyn LinearOperator<T>,
    p: T,
    starts: &[Vec<T>],
    tol: T,
    max_iter: usize,
) -> Result<NormEstimate<T>> {
    let mut best: Option<NormEstimate<T>> = None;
    let mut total = 0;
    for s in starts {
        if lp_norm(s, p) == T::zero() {
            continue;
        }
        let est = p_norm_power_iteration(op, p, s, tol, max_iter)?;
        total += est.iterations;
        if best.as_ref().is_none_or(|b| est.lower_bound > b.lower_bound) {
            best = Some(est);
        }
    }
    let mut best = best.ok_or_else(|| Error::Degenerate("every starting vector is zero".into()))?;
    best.iterations = total;
    Ok(best)
}

/// Starting vectors and stopping rule for [`norm_ladder`].
#[derive(Debug, Clone, Copy)]
pub struct LadderOptions<T> {
    pub tol: T,
    pub max_iter: usize,
    /// Random starts in addition to the odd-symmetric one.
    pub random_starts: usize,
    pub base_seed: u64,
}

impl<T: Real> Default for LadderOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-10),
            max_iter: 3_000,
            random_starts: 2,
            base_seed: 1,
        }
    }
}

/// Estimates at increasing sizes. Each size also starts from the previous
/// witness, so for nested truncations the sequence is nondecreasing.
pub fn norm_ladder<T: Real>(
    kind: &crate::transforms::OperatorKind<T>,
    p: T,
    sizes: &[usize],
    options: LadderOptions<T>,
) -> Result<Vec<NormEstimate<T>>> {
    let mut out: Vec<NormEstimate<T>> = Vec::new();
    for &n in sizes {
        let op = kind.truncate(n)?;
        let (domain, size) = (op.domain(), op.size());
        let mut starts = vec![seed_vector(domain, size, p, Seed::OddSymmetric)];
        for k in 0..options.random_starts {
            starts.push(seed_vector(domain, size, p, Seed::Random(options.base_seed + k as u64)));
        }
        if let Some(prev) = out.last() {
            starts.push(embed_witness(&prev.witness, domain, size));
        }
        out.push(p_norm_best_of(op.as_ref(), p, &starts, options.tol, options.max_iter)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::operators::{DenseOperator, IdentityOperator};
    use crate::transforms::OperatorKind;

    #[test]
    fn identity_converges_immediately() {
        let op = IdentityOperator::new(GridDomain::Torus, 16);
        for p in [1.5f64, 2.0, 4.0] {
            let seed = seed_vector(GridDomain::Torus, 16, p, Seed::Random(3));
            let est = p_norm_power_iteration(&op, p, &seed, 1e-12, 50).unwrap();
            assert!((est.lower_bound - 1.0).abs() < 1e-14);
            assert_eq!(est.iterations, 1);
            assert!(est.converged);
        }
    }

    #[test]
    fn diagonal_matrix_norm() {
        let d = GridDomain::Integers { half_len: 1 };
        let op = DenseOperator::new(d, 3, vec![2.0f64, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let est = p_norm_power_iteration(&op, 3.0, &[1.0, 1.0, 1.0], 1e-14, 200).unwrap();
        assert!((est.lower_bound - 5.0).abs() < 1e-9);
    }

    #[test]
    fn two_by_two_against_brute_force() {
        // ‖A‖_{p→p} for a 2×2 matrix by scanning the unit circle of ℓ^p
        let a = [1.0, 2.0, -0.5, 1.5];
        let p = 3.0;
        let op = DenseOperator::new(GridDomain::Torus, 2, a.to_vec()).unwrap();
        let mut best: f64 = 0.0;
        for k in 0..200_000 {
            let t = std::f64::consts::TAU * k as f64 / 200_000.0;
            let x = [t.cos(), t.sin()];
            best = best.max(rayleigh_ratio(&op, &x, p));
        }
        let est = p_norm_power_iteration(&op, p, &[1.0, 0.3], 1e-15, 1000).unwrap();
        assert!(est.lower_bound <= best + 1e-9);
        assert!((est.lower_bound - best).abs() < 1e-6);
    }

    #[test]
    fn witness_reproduces_bound_and_history_is_monotone() {
        let op = OperatorKind::<f64>::DiscreteHilbert.truncate(256).unwrap();
        let seed = seed_vector(op.domain(), op.size(), 3.0, Seed::Random(11));
        let est = p_norm_power_iteration(op.as_ref(), 3.0, &seed, 1e-10, 300).unwrap();
        let again = rayleigh_ratio(op.as_ref(), est.witness.samples(), 3.0);
        assert!((again - est.lower_bound).abs() <= 1e-9);
        assert!(est.history.windows(2).all(|w| w[1] >= w[0]));
        assert!(est.lower_bound <= 3f64.sqrt() + 1e-6);
    }

    #[test]
    fn zero_seed_rejected() {
        let op = IdentityOperator::new(GridDomain::Torus, 4);
        assert!(p_norm_power_iteration(&op, 2.0, &[0.0; 4], 1e-9, 10).is_err());
        assert!(p_norm_power_iteration(&op, 1.0, &[1.0; 4], 1e-9, 10).is_err());
    }

    #[test]
    fn ladder_is_nondecreasing_for_nested_sections() {
        let kind = OperatorKind::<f64>::DiscreteHilbert;
        let ests = norm_ladder(&kind, 4.0, &[32, 64, 128, 256], LadderOptions::default()).unwrap();
        assert!(ests.windows(2).all(|w| w[1].lower_bound >= w[0].lower_bound));
        let w = embed_witness(&ests[0].witness, GridDomain::Integers { half_len: 32 }, 65);
        assert_eq!(w.iter().filter(|v| **v != 0.0).count(), ests[0].witness.samples().iter().filter(|v| **v != 0.0).count());
    }

    #[test]
    fn odd_seed_is_antisymmetric() {
        let s = seed_vector::<f64>(GridDomain::RealLine { half_width: 2.0 }, 4, 2.0, Seed::OddSymmetric);
        assert!((s[0] + s[3]).abs() < 1e-15 && (s[1] + s[2]).abs() < 1e-15);
    }
}
