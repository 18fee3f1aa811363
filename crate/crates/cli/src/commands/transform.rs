use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hilbertlab_core::piecewise::parse_number;
use hilbertlab_core::transforms::{
    directional_hilbert, discrete_hilbert, hilbert_operator_t, hilbert_operator_tj, periodic_hilbert_step,
    real_hilbert_step, riesz_rotations, semidiscrete_hilbert, SphereRule,
};
use hilbertlab_core::{BoxStepFunction64, PiecewiseFunction64};

use crate::args::{TransformArgs, TransformOp};
use crate::output::{num, RunRecord, Table};

fn number(s: &str) -> Result<f64> {
    parse_number::<f64>(s.trim()).with_context(|| format!("bad number `{s}`"))
}

fn row(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(number)
        .collect()
}

/// A file with one point per line, `lo:hi:n`, or an inline list. Without
/// `;` a list holds scalar points when `dim` is 1 and one point otherwise.
pub fn parse_points(arg: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    let path = Path::new(arg);
    let points: Vec<Vec<f64>> = if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {arg}"))?;
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(row)
            .collect::<Result<_>>()?
    } else if let [lo, hi, n] = arg.split(':').collect::<Vec<_>>()[..] {
        let (lo, hi) = (number(lo)?, number(hi)?);
        let n: usize = n.trim().parse().with_context(|| format!("bad point count `{n}`"))?;
        if n == 0 {
            bail!("grid `{arg}` has no points");
        }
        (0..n)
            .map(|k| vec![if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }])
            .collect()
    } else if arg.contains(';') {
        arg.split(';').filter(|p| !p.trim().is_empty()).map(row).collect::<Result<_>>()?
    } else if dim > 1 {
        vec![row(arg)?]
    } else {
        row(arg)?.into_iter().map(|x| vec![x]).collect()
    };
    if points.is_empty() {
        bail!("no evaluation points in `{arg}`");
    }
    if points.iter().any(|p| p.len() != dim) {
        bail!("evaluation points must have {dim} coordinates");
    }
    Ok(points)
}

pub fn run(a: &TransformArgs) -> Result<RunRecord> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("cannot read {}", a.input.display()))?;
    let boxes = matches!(a.op, TransformOp::Dir | TransformOp::Tj | TransformOp::Riesz);

    let points;
    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut errors: Vec<f64> = Vec::new();
    if boxes {
        let f: BoxStepFunction64 = text.parse()?;
        points = parse_points(&a.points, f.ambient_dim())?;
        match a.op {
            TransformOp::Dir => {
                let theta = row(a.theta.as_deref().context("`dir` needs --theta")?)?;
                for x in &points {
                    values.push(directional_hilbert(&f, &theta, x)?);
                }
            }
            TransformOp::Tj => {
                for x in &points {
                    values.push(hilbert_operator_tj(&f, x, a.j)?);
                }
            }
            _ => {
                let rule = SphereRule::new(f.ambient_dim(), a.nodes)?;
                for x in &points {
                    let r = riesz_rotations(&f, a.j, x, &rule)?;
                    values.push(r.value);
                    errors.push(r.error);
                }
            }
        }
    } else {
        let f: PiecewiseFunction64 = text.parse()?;
        points = parse_points(&a.points, 1)?;
        for t in points.iter().map(|p| p[0]) {
            values.push(match a.op {
                TransformOp::Ht => periodic_hilbert_step(&f, t)?,
                TransformOp::Hr => real_hilbert_step(&f, t)?,
                TransformOp::Hsemi => semidiscrete_hilbert(&f, a.eps.context("`hsemi` needs --eps")?, t)?,
                TransformOp::T => hilbert_operator_t(&f, t)?,
                _ => {
                    if t.fract() != 0.0 || t.abs() > i64::MAX as f64 {
                        bail!("`hdis` takes integer points, got {t}");
                    }
                    discrete_hilbert(&f, t as i64)?
                }
            });
        }
    }

    let d = points[0].len();
    let n = values.first().map_or(0, Vec::len);
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.extend((1..=n).map(|i| format!("v{i}")));
    if !errors.is_empty() {
        header.push("error".into());
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (k, (x, v)) in points.iter().zip(&values).enumerate() {
        let mut r: Vec<String> = x.iter().chain(v).map(|z| num(*z)).collect();
        if let Some(e) = errors.get(k) {
            r.push(num(*e));
        }
        table.push(r);
    }

    let mut rec = RunRecord::new("transform", table);
    rec.inputs.push(a.input.clone());
    rec.set("op", format!("{:?}", a.op).to_lowercase());
    rec.set("points", &a.points);
    if let Some(e) = a.eps {
        rec.set("eps", e);
    }
    if let Some(t) = &a.theta {
        rec.set("theta", t);
    }
    rec.set("j", a.j);
    rec.set("nodes", a.nodes);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_forms() {
        assert_eq!(parse_points("2", 1).unwrap(), vec![vec![2.0]]);
        assert_eq!(parse_points("0.5,-1", 1).unwrap(), vec![vec![0.5], vec![-1.0]]);
        assert_eq!(parse_points("0.5,-1", 2).unwrap(), vec![vec![0.5, -1.0]]);
        assert_eq!(parse_points("0.5,1;2,2", 2).unwrap(), vec![vec![0.5, 1.0], vec![2.0, 2.0]]);
        assert_eq!(parse_points("0:1:3", 1).unwrap(), vec![vec![0.0], vec![0.5], vec![1.0]]);
        assert_eq!(parse_points("pi/2", 1).unwrap()[0][0], std::f64::consts::FRAC_PI_2);
        assert!(parse_points("1,2;3", 2).is_err());
        assert!(parse_points("0.5,1;2,2", 1).is_err());
        assert!(parse_points("0:1:0", 1).is_err());
    }
}
