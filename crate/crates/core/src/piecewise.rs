//! Vector-valued step functions on the torus `[-π, π)`, the real line and the
//! integers, with the line-oriented text format used by the CLI.
//!
//! Pieces are closed on the left and open on the right; the value at a
//! breakpoint is the right limit. Outside the listed pieces the function is
//! zero.
//!
//! Text format:
//!
//! ```text
//! # comment
//! torus; 2; 1;
//! 0 pi 1
//! -pi 0 -1
//! ```
//!
//! The header is `domain; q; n;` with domain one of `torus`, `real`,
//! `integers`. Interval pieces are `a b v1 ... vn`, integer pieces
//! `k v1 ... vn`. Numbers accept `pi`, `-pi/2`, `3pi/4`, `2*pi` forms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::space::{Exponent, NormedSpace};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Torus,
    RealLine,
    Integers,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Torus => "torus",
            Domain::RealLine => "real",
            Domain::Integers => "integers",
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "torus" | "t" => Ok(Domain::Torus),
            "real" | "realline" | "r" => Ok(Domain::RealLine),
            "integers" | "z" => Ok(Domain::Integers),
            other => Err(Error::InvalidParameter(format!("unknown domain `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support<T> {
    /// `[start, end)`
    Interval { start: T, end: T },
    Point(i64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece<T> {
    pub support: Support<T>,
    pub value: Vec<T>,
}

impl<T: Real> Piece<T> {
    pub fn interval(start: T, end: T, value: Vec<T>) -> Self {
        Self {
            support: Support::Interval { start, end },
            value,
        }
    }

    pub fn point(k: i64, value: Vec<T>) -> Self {
        Self {
            support: Support::Point(k),
            value,
        }
    }

    /// `(start, end)` for interval pieces.
    pub fn bounds(&self) -> Option<(T, T)> {
        match self.support {
            Support::Interval { start, end } => Some((start, end)),
            Support::Point(_) => None,
        }
    }

    fn sort_key(&self) -> T {
        match self.support {
            Support::Interval { start, .. } => start,
            Support::Point(k) => T::from_i64(k).unwrap_or_else(T::zero),
        }
    }
}

/// Representative of `t` modulo `2π` in `[-π, π)`.
pub fn wrap_angle<T: Real>(t: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = (t + T::PI()) % two_pi;
    if r < T::zero() {
        r = r + two_pi;
    }
    let w = r - T::PI();
    if w >= T::PI() {
        -T::PI()
    } else {
        w
    }
}

/// Distance on the circle between two angles.
pub fn angular_distance<T: Real>(a: T, b: T) -> T {
    wrap_angle(a - b).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFunction<T> {
    domain: Domain,
    space: NormedSpace<T>,
    pieces: Vec<Piece<T>>,
}

impl<T: Real> PiecewiseFunction<T> {
    /// Validates and sorts the pieces.
    pub fn new(domain: Domain, space: NormedSpace<T>, mut pieces: Vec<Piece<T>>) -> Result<Self> {
        for p in &pieces {
            space.check(&p.value)?;
            if p.value.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidPiece("non-finite value".into()));
            }
            match (domain, p.support) {
                (Domain::Integers, Support::Point(_)) => {}
                (Domain::Integers, Support::Interval { .. }) => {
                    return Err(Error::InvalidPiece("interval piece on the integers".into()))
                }
                (_, Support::Point(_)) => {
                    return Err(Error::InvalidPiece("point piece on a continuous domain".into()))
                }
                (d, Support::Interval { start, end }) => {
                    if !(start.is_finite() && end.is_finite() && start < end) {
                        return Err(Error::InvalidPiece(format!(
                            "interval [{start}, {end}) is empty or unbounded"
                        )));
                    }
                    if d == Domain::Torus && (start < -T::PI() || end > T::PI()) {
                        return Err(Error::InvalidPiece(format!(
                            "torus interval [{start}, {end}) leaves [-pi, pi)"
                        )));
                    }
                }
            }
        }
        pieces.sort_by(|a, b| a.sort_key().partial_cmp(&b.sort_key()).expect("finite keys"));
        for w in pieces.windows(2) {
            match (w[0].support, w[1].support) {
                (Support::Interval { end, .. }, Support::Interval { start, .. }) if end > start => {
                    return Err(Error::InvalidPiece(format!(
                        "pieces overlap at [{start}, {end})"
                    )))
                }
                (Support::Point(a), Support::Point(b)) if a == b => {
                    return Err(Error::InvalidPiece(format!("integer point {a} listed twice")))
                }
                _ => {}
            }
        }
        Ok(Self {
            domain,
            space,
            pieces,
        })
    }

    pub fn zero(domain: Domain, space: NormedSpace<T>) -> Self {
        Self {
            domain,
            space,
            pieces: Vec::new(),
        }
    }

    pub fn torus(space: NormedSpace<T>, pieces: Vec<(T, T, Vec<T>)>) -> Result<Self> {
        Self::new(
            Domain::Torus,
            space,
            pieces.into_iter().map(|(a, b, v)| Piece::interval(a, b, v)).collect(),
        )
    }

    pub fn real_line(space: NormedSpace<T>, pieces: Vec<(T, T, Vec<T>)>) -> Result<Self> {
        Self::new(
            Domain::RealLine,
            space,
            pieces.into_iter().map(|(a, b, v)| Piece::interval(a, b, v)).collect(),
        )
    }

    pub fn integers(space: NormedSpace<T>, pieces: Vec<(i64, Vec<T>)>) -> Result<Self> {
        Self::new(
            Domain::Integers,
            space,
            pieces.into_iter().map(|(k, v)| Piece::point(k, v)).collect(),
        )
    }

    pub fn scalar_torus(pieces: &[(T, T, T)]) -> Result<Self> {
        Self::torus(
            NormedSpace::scalar(),
            pieces.iter().map(|&(a, b, v)| (a, b, vec![v])).collect(),
        )
    }

    pub fn scalar_real_line(pieces: &[(T, T, T)]) -> Result<Self> {
        Self::real_line(
            NormedSpace::scalar(),
            pieces.iter().map(|&(a, b, v)| (a, b, vec![v])).collect(),
        )
    }

    pub fn scalar_integers(pieces: &[(i64, T)]) -> Result<Self> {
        Self::integers(
            NormedSpace::scalar(),
            pieces.iter().map(|&(k, v)| (k, vec![v])).collect(),
        )
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn space(&self) -> &NormedSpace<T> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(Error::WrongDomain {
                expected: expected.name(),
                found: self.domain.name(),
            });
        }
        Ok(())
    }

    /// Value at `t` on the torus (taken modulo `2π`) or the line.
    pub fn evaluate(&self, t: T) -> Vec<T> {
        let t = match self.domain {
            Domain::Torus => wrap_angle(t),
            Domain::RealLine => t,
            Domain::Integers => {
                return match t.round().to_i64() {
                    Some(k) if T::from_i64(k) == Some(t) => self.evaluate_at(k),
                    _ => vec![T::zero(); self.dim()],
                }
            }
        };
        self.pieces
            .iter()
            .find(|p| matches!(p.support, Support::Interval { start, end } if start <= t && t < end))
            .map(|p| p.value.clone())
            .unwrap_or_else(|| vec![T::zero(); self.dim()])
    }

    /// Value at an integer point (zero on continuous domains).
    pub fn evaluate_at(&self, k: i64) -> Vec<T> {
        self.pieces
            .iter()
            .find(|p| p.support == Support::Point(k))
            .map(|p| p.value.clone())
            .unwrap_or_else(|| vec![T::zero(); self.dim()])
    }

    /// Sorted, deduplicated interval endpoints (torus endpoints are wrapped,
    /// so `π` appears as `-π`).
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            if let Some((a, b)) = p.bounds() {
                match self.domain {
                    Domain::Torus => {
                        out.push(wrap_angle(a));
                        out.push(wrap_angle(b));
                    }
                    _ => {
                        out.push(a);
                        out.push(b);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        out.dedup();
        out
    }

    /// Distance from `t` to the nearest breakpoint (circular on the torus);
    /// `None` when there are no breakpoints.
    pub fn breakpoint_distance(&self, t: T) -> Option<T> {
        self.breakpoints()
            .into_iter()
            .map(|b| match self.domain {
                Domain::Torus => angular_distance(t, b),
                _ => (t - b).abs(),
            })
            .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |m| m.min(d))))
    }

    /// Lebesgue (or counting) measure of the union of the pieces.
    pub fn support_measure(&self) -> T {
        self.pieces
            .iter()
            .map(|p| match p.support {
                Support::Interval { start, end } => end - start,
                Support::Point(_) => T::one(),
            })
            .sum()
    }

    /// Smallest and largest support coordinate.
    pub fn support_bounds(&self) -> Option<(T, T)> {
        let first = self.pieces.first()?;
        let last = self.pieces.last()?;
        match (first.support, last.support) {
            (Support::Interval { start, .. }, Support::Interval { end, .. }) => Some((start, end)),
            (Support::Point(a), Support::Point(b)) => Some((T::from_i64(a)?, T::from_i64(b)?)),
            _ => None,
        }
    }

    /// `∫ f` per coordinate (sum over points on the integers).
    pub fn integral(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.dim()];
        for p in &self.pieces {
            let w = match p.support {
                Support::Interval { start, end } => end - start,
                Support::Point(_) => T::one(),
            };
            for (a, v) in acc.iter_mut().zip(&p.value) {
                *a = *a + w * *v;
            }
        }
        acc
    }

    /// `(1/2π) ∫_T f` per coordinate.
    pub fn mean(&self) -> Result<Vec<T>> {
        self.expect_domain(Domain::Torus)?;
        let two_pi = T::PI() + T::PI();
        Ok(self.integral().into_iter().map(|v| v / two_pi).collect())
    }

    pub fn scaled(&self, alpha: T) -> Self {
        let mut out = self.clone();
        for p in &mut out.pieces {
            for v in &mut p.value {
                *v = *v * alpha;
            }
        }
        out
    }

    /// Pointwise sum, refining onto the union of both breakpoint sets.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::WrongDomain {
                expected: self.domain.name(),
                found: other.domain.name(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.domain == Domain::Integers {
            let mut acc: BTreeMap<i64, Vec<T>> = BTreeMap::new();
            for p in self.pieces.iter().chain(&other.pieces) {
                if let Support::Point(k) = p.support {
                    let e = acc.entry(k).or_insert_with(|| vec![T::zero(); self.dim()]);
                    for (a, v) in e.iter_mut().zip(&p.value) {
                        *a = *a + *v;
                    }
                }
            }
            let pieces = acc
                .into_iter()
                .filter(|(_, v)| v.iter().any(|x| *x != T::zero()))
                .map(|(k, v)| Piece::point(k, v))
                .collect();
            return Self::new(self.domain, self.space, pieces);
        }
        let mut cuts: Vec<T> = Vec::new();
        for p in self.pieces.iter().chain(&other.pieces) {
            if let Some((a, b)) = p.bounds() {
                cuts.push(a);
                cuts.push(b);
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        cuts.dedup();
        let mut pieces: Vec<Piece<T>> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = (a + b) / T::lit(2.0);
            let value: Vec<T> = self
                .evaluate(mid)
                .into_iter()
                .zip(other.evaluate(mid))
                .map(|(x, y)| x + y)
                .collect();
            push_coalesced(&mut pieces, a, b, value);
        }
        Self::new(self.domain, self.space, pieces)
    }

    /// `f(ε ·)` on the line: pieces `[a/ε, b/ε)`.
    pub fn dilate(&self, eps: T) -> Result<Self> {
        self.expect_domain(Domain::RealLine)?;
        if !(eps > T::zero()) {
            return Err(Error::InvalidParameter("dilation factor must be positive".into()));
        }
        let pieces = self
            .pieces
            .iter()
            .filter_map(|p| p.bounds().map(|(a, b)| Piece::interval(a / eps, b / eps, p.value.clone())))
            .collect();
        Self::new(self.domain, self.space, pieces)
    }

    /// `f(· - shift)` on the line or the integers.
    pub fn translate(&self, shift: T) -> Result<Self> {
        let pieces = match self.domain {
            Domain::RealLine => self
                .pieces
                .iter()
                .filter_map(|p| {
                    p.bounds()
                        .map(|(a, b)| Piece::interval(a + shift, b + shift, p.value.clone()))
                })
                .collect(),
            Domain::Integers => {
                let s = shift
                    .to_i64()
                    .filter(|s| T::from_i64(*s) == Some(shift))
                    .ok_or_else(|| Error::InvalidParameter("integer shift required".into()))?;
                self.pieces
                    .iter()
                    .map(|p| match p.support {
                        Support::Point(k) => Piece::point(k + s, p.value.clone()),
                        Support::Interval { .. } => unreachable!("validated"),
                    })
                    .collect()
            }
            Domain::Torus => {
                return Err(Error::Unsupported("translation on the torus".into()));
            }
        };
        Self::new(self.domain, self.space, pieces)
    }

    /// Subtracts the mean on the torus. The complement of the support becomes
    /// an explicit piece; pieces whose value becomes exactly zero are dropped.
    pub fn project_zero_mean(&self) -> Result<Self> {
        let mean = self.mean()?;
        let mut pieces: Vec<Piece<T>> = Vec::new();
        let mut cursor = -T::PI();
        let shifted = |v: &[T]| -> Vec<T> { v.iter().zip(&mean).map(|(x, m)| *x - *m).collect() };
        let zero = vec![T::zero(); self.dim()];
        for p in &self.pieces {
            let (a, b) = p.bounds().expect("torus pieces are intervals");
            if a > cursor {
                push_coalesced(&mut pieces, cursor, a, shifted(&zero));
            }
            push_coalesced(&mut pieces, a, b, shifted(&p.value));
            cursor = b;
        }
        if cursor < T::PI() {
            push_coalesced(&mut pieces, cursor, T::PI(), shifted(&zero));
        }
        Self::new(self.domain, self.space, pieces)
    }

    /// Applies `op` to every piece value.
    pub fn map_values(&self, mut op: impl FnMut(&[T]) -> Vec<T>) -> Result<Self> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                support: p.support,
                value: op(&p.value),
            })
            .collect();
        Self::new(self.domain, self.space, pieces)
    }
}

/// Appends `[a, b) ↦ value`, merging with the previous piece when contiguous
/// and equal, and skipping zero values.
fn push_coalesced<T: Real>(pieces: &mut Vec<Piece<T>>, a: T, b: T, value: Vec<T>) {
    if value.iter().all(|v| *v == T::zero()) {
        return;
    }
    if let Some(last) = pieces.last_mut() {
        if let Support::Interval { start, end } = last.support {
            if end == a && last.value == value {
                last.support = Support::Interval { start, end: b };
                return;
            }
        }
    }
    pieces.push(Piece::interval(a, b, value));
}

/// Parses a real number, accepting multiples and fractions of `pi`.
pub fn parse_number<T: Real>(token: &str) -> Option<T> {
    let s = token.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(T::lit(v));
    }
    let lower = s.to_ascii_lowercase();
    let idx = lower.find("pi")?;
    let (head, tail) = (&lower[..idx], &lower[idx + 2..]);
    let head = head.trim_end_matches('*');
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().ok()?,
    };
    let divisor = match tail {
        "" => 1.0,
        t => t.strip_prefix('/')?.parse::<f64>().ok()?,
    };
    if divisor == 0.0 {
        return None;
    }
    // keep ±pi exact so torus endpoints validate
    let pi = T::PI();
    Some(pi * T::lit(factor) / T::lit(divisor))
}

impl<T: Real> FromStr for PiecewiseFunction<T> {
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
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: hline,
                message: "header must be `domain; q; n;`".into(),
            });
        }
        let perr = |line: usize, e: Error| Error::Parse {
            line,
            message: e.to_string(),
        };
        let domain: Domain = fields[0].parse().map_err(|e| perr(hline, e))?;
        let q: Exponent<T> = fields[1].parse().map_err(|e| perr(hline, e))?;
        let n: usize = fields[2].parse().map_err(|_| Error::Parse {
            line: hline,
            message: format!("bad dimension `{}`", fields[2]),
        })?;
        let space = NormedSpace::new(n, q).map_err(|e| perr(hline, e))?;
        let mut pieces = Vec::new();
        for (line, body) in lines {
            let toks: Vec<&str> = body.split_whitespace().collect();
            let lead = if domain == Domain::Integers { 1 } else { 2 };
            if toks.len() != lead + n {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} fields, found {}", lead + n, toks.len()),
                });
            }
            let num = |s: &str| -> Result<T> {
                parse_number(s).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("bad number `{s}`"),
                })
            };
            let value = toks[lead..].iter().map(|s| num(s)).collect::<Result<Vec<T>>>()?;
            let piece = if domain == Domain::Integers {
                let k: i64 = toks[0].parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad integer `{}`", toks[0]),
                })?;
                Piece::point(k, value)
            } else {
                Piece::interval(num(toks[0])?, num(toks[1])?, value)
            };
            pieces.push(piece);
        }
        Self::new(domain, space, pieces).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })
    }
}

impl<T: Real> fmt::Display for PiecewiseFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}; {}; {};", self.domain.name(), self.space.exponent(), self.dim())?;
        for p in &self.pieces {
            match p.support {
                Support::Interval { start, end } => write!(f, "{start} {end}")?,
                Support::Point(k) => write!(f, "{k}")?,
            }
            for v in &p.value {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
