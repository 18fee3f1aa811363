use num_traits::{FromPrimitive, Num};

use crate::piecewise::{Domain, PiecewiseFunction, Support};
use crate::{Real, Result};

/// `Σ_{s≠t} f(s)/(t-s)` over a finitely supported sequence, without the `1/π`.
///
/// Generic over any field with integer embedding, so exact rational
/// arithmetic can be used as an oracle.
pub fn discrete_hilbert_sum<T>(points: &[(i64, T)], t: i64) -> T
where
    T: Num + Clone + FromPrimitive,
{
    points
        .iter()
        .filter(|(s, _)| *s != t)
        .fold(T::zero(), |acc, (s, v)| {
            acc + v.clone() / T::from_i64(t - s).expect("integer embeds")
        })
}

/// `H^dis f(t) = (1/π) Σ_{s≠t} f(s)/(t-s)`.
pub fn discrete_hilbert<T: Real>(f: &PiecewiseFunction<T>, t: i64) -> Result<Vec<T>> {
    f.expect_domain(Domain::Integers)?;
    let mut out = vec![T::zero(); f.dim()];
    for p in f.pieces() {
        let Support::Point(s) = p.support else {
            continue;
        };
        if s == t {
            continue;
        }
        let w = T::one() / (T::from_i64(t - s).expect("integer converts") * T::PI());
        for (o, v) in out.iter_mut().zip(&p.value) {
            *o = *o + *v * w;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let d0 = PiecewiseFunction::scalar_integers(&[(0, 1.0)]).unwrap();
        assert!((discrete_hilbert(&d0, 3).unwrap()[0] - 1.0 / (3.0 * PI)).abs() < 1e-16);
        assert_eq!(discrete_hilbert(&d0, 0).unwrap()[0], 0.0);
        let two = PiecewiseFunction::scalar_integers(&[(0, 1.0), (1, 1.0)]).unwrap();
        assert!((discrete_hilbert(&two, 2).unwrap()[0] - 1.5 / PI).abs() < 1e-15);
    }

    #[test]
    fn exact_rational_sum() {
        let one = Ratio::from_integer(1i64);
        let s = discrete_hilbert_sum(&[(0, one), (1, one)], 2);
        assert_eq!(s, Ratio::new(3, 2));
        let s = discrete_hilbert_sum(&[(-2, Ratio::new(1, 3)), (4, Ratio::from_integer(2))], 1);
        assert_eq!(s, Ratio::new(1, 9) - Ratio::new(2, 3));
    }

    #[test]
    fn float_path_matches_rational_oracle() {
        let pts: Vec<(i64, i64)> = vec![(-7, 3), (-1, -2), (0, 5), (4, 1), (9, -4)];
        let f = PiecewiseFunction::scalar_integers(&pts.iter().map(|&(k, v)| (k, v as f64)).collect::<Vec<_>>()).unwrap();
        let rat: Vec<(i64, Ratio<i64>)> = pts.iter().map(|&(k, v)| (k, Ratio::from_integer(v))).collect();
        for t in -10..12 {
            let exact = discrete_hilbert_sum(&rat, t);
            let want = *exact.numer() as f64 / *exact.denom() as f64 / PI;
            assert!((discrete_hilbert(&f, t).unwrap()[0] - want).abs() < 1e-14, "t = {t}");
        }
    }
}
