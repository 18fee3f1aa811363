use anyhow::{bail, Context, Result};
use hilbertlab_core::norms::{
    norm_ladder, phi_psi_ratio_ascent, pichorides_constant, seed_vector, AscentOptions, Constraint, LadderOptions,
    NormEstimate, Seed,
};
use hilbertlab_core::{Gauge, GaugePair64, GridFunction, NormedSpace64, OperatorKind64};

use crate::args::{ConstraintArg, Format, NormArgs, NormOp};
use crate::output::{num, opt_bool, opt_num, short, RunRecord, Table};
use crate::svg::{convergence_plot, Ceiling, Series};

pub const HEADER: [&str; 12] = [
    "operator",
    "p",
    "gauges",
    "constraint",
    "size",
    "estimate",
    "pichorides",
    "ceiling",
    "iterations",
    "residual",
    "converged",
    "pass",
];

pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let sizes: Vec<usize> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().with_context(|| format!("bad size `{t}`")))
        .collect::<Result<_>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        bail!("sizes must be a nonempty list of positive integers");
    }
    Ok(sizes)
}

fn op_name(op: NormOp) -> &'static str {
    match op {
        NormOp::Ht => "ht",
        NormOp::Hr => "hr",
        NormOp::Hdis => "hdis",
    }
}

/// The exponent `q` when both gauges are `‖·‖^q` with the same `q`.
fn common_power(g: &GaugePair64) -> Option<f64> {
    match (g.phi, g.psi) {
        (Gauge::Power(a), Gauge::Power(b)) if a == b => Some(a),
        _ => None,
    }
}

fn ascent(kind: &OperatorKind64, gauges: GaugePair64, constraint: Constraint, size: usize, a: &NormArgs) -> Result<NormEstimate<f64>> {
    let op = kind.truncate(size)?;
    let start = seed_vector(op.domain(), op.size(), a.p, Seed::Random(a.seed));
    let start = GridFunction::scalar(op.domain(), start)?;
    let options = AscentOptions {
        tol: a.tol,
        max_iter: a.max_iter,
        ..Default::default()
    };
    Ok(phi_psi_ratio_ascent(op.as_ref(), gauges, &NormedSpace64::scalar(), constraint, &start, options)?)
}

pub fn run(a: &NormArgs) -> Result<RunRecord> {
    let sizes = parse_sizes(&a.size)?;
    let kind = match a.op {
        NormOp::Ht => OperatorKind64::PeriodicHilbert,
        NormOp::Hr => OperatorKind64::RealHilbert,
        NormOp::Hdis => OperatorKind64::DiscreteHilbert,
    };
    let constraint = match a.constraint {
        ConstraintArg::None => Constraint::None,
        ConstraintArg::ZeroMean => Constraint::ZeroMean,
    };
    let cot = pichorides_constant(a.p)?;
    let gauges: Option<GaugePair64> = a.gauges.as_deref().map(str::parse).transpose()?;

    // (estimate on its own scale, ceiling on that scale, raw estimate)
    let mut results: Vec<(f64, Option<f64>, NormEstimate<f64>)> = Vec::new();
    match gauges {
        Some(g) => {
            let ceiling = common_power(&g).and_then(|q| pichorides_constant(q).ok().map(|c| c.powf(q)));
            for &n in &sizes {
                let e = ascent(&kind, g, constraint, n, a)?;
                results.push((e.lower_bound, ceiling, e));
            }
        }
        None if constraint == Constraint::ZeroMean => {
            let g = GaugePair64::power(a.p)?;
            for &n in &sizes {
                let e = ascent(&kind, g, constraint, n, a)?;
                results.push((e.lower_bound.powf(a.p.recip()), Some(cot), e));
            }
        }
        None => {
            let options = LadderOptions {
                tol: a.tol,
                max_iter: a.max_iter,
                random_starts: a.random_starts,
                base_seed: a.seed,
            };
            for e in norm_ladder(&kind, a.p, &sizes, options)? {
                results.push((e.lower_bound, Some(cot), e));
            }
        }
    }

    let gauge_label = a.gauges.clone().unwrap_or_else(|| "norm".into());
    let constraint_label = match a.constraint {
        ConstraintArg::None => "none",
        ConstraintArg::ZeroMean => "zero-mean",
    };
    let mut table = Table::new(&HEADER);
    let mut ok = true;
    for (&n, (est, ceiling, e)) in sizes.iter().zip(&results) {
        let pass = ceiling.map(|c| *est <= c * (1.0 + 1e-9) + 1e-12);
        ok &= pass != Some(false);
        table.push(vec![
            op_name(a.op).into(),
            num(a.p),
            gauge_label.clone(),
            constraint_label.into(),
            n.to_string(),
            num(*est),
            num(cot),
            opt_num(*ceiling),
            e.iterations.to_string(),
            num(e.residual),
            e.converged.to_string(),
            opt_bool(pass),
        ]);
    }

    let mut rec = RunRecord::new("norm-estimate", table);
    rec.gates_ok = ok;
    if a.format == Format::CsvSvg {
        let series = Series {
            label: format!("{} {}", op_name(a.op), gauge_label),
            points: sizes.iter().zip(&results).map(|(n, r)| (*n as f64, r.0)).collect(),
        };
        let ceilings: Vec<Ceiling> = results
            .first()
            .and_then(|r| r.1)
            .map(|c| Ceiling {
                label: format!("cot(π/2p*) scale = {}", short(c)),
                value: c,
            })
            .into_iter()
            .collect();
        rec.svg = Some(convergence_plot(&format!("{} at p = {}", op_name(a.op), a.p), &[series], &ceilings));
    }
    rec.set("op", op_name(a.op));
    rec.set("p", a.p);
    rec.set("size", &a.size);
    rec.set("gauges", &gauge_label);
    rec.set("constraint", constraint_label);
    rec.set("random_starts", a.random_starts);
    rec.set("tol", a.tol);
    rec.set("max_iter", a.max_iter);
    rec.set("seed", a.seed);
    Ok(rec)
}
