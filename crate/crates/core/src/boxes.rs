//! Step functions on `R^d`: finite sums of vector values times indicators of
//! disjoint half-open boxes `Π [lo_i, hi_i)`.
//!
//! Text format (header `boxes; q; n; d;`, then one box per line):
//!
//! ```text
//! boxes; 2; 1; 2;
//! 0 1 0 1 1.0
//! ```
//!
//! with `lo_1 hi_1 ... lo_d hi_d v_1 ... v_n` per line.

use std::fmt;
use std::str::FromStr;

use crate::piecewise::parse_number;
use crate::space::{Exponent, NormedSpace};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BoxPiece<T> {
    /// `(lo, hi)` per axis.
    pub extent: Vec<(T, T)>,
    pub value: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxStepFunction<T> {
    d: usize,
    space: NormedSpace<T>,
    boxes: Vec<BoxPiece<T>>,
}

impl<T: Real> BoxStepFunction<T> {
    pub fn new(d: usize, space: NormedSpace<T>, boxes: Vec<BoxPiece<T>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("ambient dimension must be positive".into()));
        }
        for b in &boxes {
            if b.extent.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: b.extent.len(),
                });
            }
            space.check(&b.value)?;
            for &(lo, hi) in &b.extent {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::InvalidPiece(format!("empty or unbounded side [{lo}, {hi})")));
                }
            }
        }
        for (i, a) in boxes.iter().enumerate() {
            for b in &boxes[i + 1..] {
                let overlap = a
                    .extent
                    .iter()
                    .zip(&b.extent)
                    .all(|(&(alo, ahi), &(blo, bhi))| alo < bhi && blo < ahi);
                if overlap {
                    return Err(Error::InvalidPiece("boxes overlap".into()));
                }
            }
        }
        Ok(Self { d, space, boxes })
    }

    /// Scalar function from `(extent, value)` pairs.
    pub fn scalar(d: usize, boxes: Vec<(Vec<(T, T)>, T)>) -> Result<Self> {
        Self::new(
            d,
            NormedSpace::scalar(),
            boxes
                .into_iter()
                .map(|(extent, v)| BoxPiece { extent, value: vec![v] })
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn space(&self) -> &NormedSpace<T> {
        &self.space
    }

    pub fn value_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn boxes(&self) -> &[BoxPiece<T>] {
        &self.boxes
    }

    pub fn evaluate(&self, x: &[T]) -> Vec<T> {
        self.boxes
            .iter()
            .find(|b| b.extent.iter().zip(x).all(|(&(lo, hi), &xi)| lo <= xi && xi < hi))
            .map(|b| b.value.clone())
            .unwrap_or_else(|| vec![T::zero(); self.value_dim()])
    }

    /// Restriction to the line `t ↦ x - tθ`: the `t`-intervals each box
    /// occupies, with its value.
    ///
    /// A line parallel to a face and lying in that face's hyperplane has no
    /// well-defined restriction and is reported as singular.
    pub fn line_restriction(&self, x: &[T], theta: &[T]) -> Result<Vec<(T, T, Vec<T>)>> {
        if x.len() != self.d || theta.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: x.len().min(theta.len()),
            });
        }
        let mut out = Vec::new();
        'boxes: for b in &self.boxes {
            let mut t_lo = T::neg_infinity();
            let mut t_hi = T::infinity();
            for (i, &(lo, hi)) in b.extent.iter().enumerate() {
                let (xi, ti) = (x[i], theta[i]);
                if ti == T::zero() {
                    if xi == lo || xi == hi {
                        return Err(Error::SingularConfiguration(format!(
                            "line lies in the face x_{} = {xi}",
                            i + 1
                        )));
                    }
                    if xi < lo || xi > hi {
                        continue 'boxes;
                    }
                } else {
                    let a = (xi - hi) / ti;
                    let c = (xi - lo) / ti;
                    t_lo = t_lo.max(a.min(c));
                    t_hi = t_hi.min(a.max(c));
                }
            }
            if t_lo < t_hi {
                out.push((t_lo, t_hi, b.value.clone()));
            }
        }
        Ok(out)
    }
}

impl<T: Real> FromStr for BoxStepFunction<T> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty input".into(),
        })?;
        let fields: Vec<&str> = header.split(';').map(str::trim).filter(|f| !f.is_empty()).collect();
        if fields.len() != 4 || !fields[0].eq_ignore_ascii_case("boxes") {
            return Err(Error::Parse {
                line: hline,
                message: "header must be `boxes; q; n; d;`".into(),
            });
        }
        let bad = |m: String| Error::Parse { line: hline, message: m };
        let q: Exponent<T> = fields[1].parse().map_err(|e: Error| bad(e.to_string()))?;
        let n: usize = fields[2].parse().map_err(|_| bad(format!("bad n `{}`", fields[2])))?;
        let d: usize = fields[3].parse().map_err(|_| bad(format!("bad d `{}`", fields[3])))?;
        let space = NormedSpace::new(n, q).map_err(|e| bad(e.to_string()))?;
        let mut boxes = Vec::new();
        for (line, body) in lines {
            let nums = body
                .split_whitespace()
                .map(|s| {
                    parse_number::<T>(s).ok_or_else(|| Error::Parse {
                        line,
                        message: format!("bad number `{s}`"),
                    })
                })
                .collect::<Result<Vec<T>>>()?;
            if nums.len() != 2 * d + n {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} fields, found {}", 2 * d + n, nums.len()),
                });
            }
            boxes.push(BoxPiece {
                extent: nums[..2 * d].chunks(2).map(|c| (c[0], c[1])).collect(),
                value: nums[2 * d..].to_vec(),
            });
        }
        Self::new(d, space, boxes).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}

impl<T: Real> fmt::Display for BoxStepFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "boxes; {}; {}; {};", self.space.exponent(), self.value_dim(), self.d)?;
        for b in &self.boxes {
            let mut first = true;
            for (lo, hi) in &b.extent {
                if !first {
                    f.write_str(" ")?;
                }
                write!(f, "{lo} {hi}")?;
                first = false;
            }
            for v in &b.value {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> BoxStepFunction<f64> {
        BoxStepFunction::scalar(2, vec![(vec![(0.0, 1.0), (0.0, 1.0)], 1.0)]).unwrap()
    }

    #[test]
    fn overlap_rejected() {
        let r = BoxStepFunction::scalar(
            2,
            vec![
                (vec![(0.0, 1.0), (0.0, 1.0)], 1.0),
                (vec![(0.5, 2.0), (0.5, 2.0)], 1.0),
            ],
        );
        assert!(r.is_err());
        let ok = BoxStepFunction::scalar(
            2,
            vec![
                (vec![(0.0, 1.0), (0.0, 1.0)], 1.0),
                (vec![(1.0, 2.0), (0.0, 1.0)], 1.0),
            ],
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn line_restriction_of_square() {
        let f = unit_square();
        let r = f.line_restriction(&[2.0, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(r, vec![(1.0, 2.0, vec![1.0])]);
        let miss = f.line_restriction(&[2.0, 1.5], &[1.0, 0.0]).unwrap();
        assert!(miss.is_empty());
        assert!(matches!(
            f.line_restriction(&[2.0, 1.0], &[1.0, 0.0]),
            Err(Error::SingularConfiguration(_))
        ));
        let diag = f.line_restriction(&[2.0, 2.0], &[0.6, 0.8]).unwrap();
        assert_eq!(diag.len(), 1);
        let (a, b, _) = diag[0];
        assert!((a - 5.0 / 3.0).abs() < 1e-12 && (b - 2.5).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip() {
        let f: BoxStepFunction<f64> = "boxes; 2; 1; 2;\n0 1 0 1 1.5\n1 2 0 1 -1\n".parse().unwrap();
        assert_eq!(f.evaluate(&[1.5, 0.5]), vec![-1.0]);
        let g: BoxStepFunction<f64> = f.to_string().parse().unwrap();
        assert_eq!(f, g);
        assert!("boxes; 2; 1; 2;\n0 1 0 1\n".parse::<BoxStepFunction<f64>>().is_err());
    }
}
