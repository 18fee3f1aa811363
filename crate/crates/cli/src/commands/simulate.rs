use std::f64::consts::PI;
use std::fs;

use anyhow::{bail, Context, Result};
use hilbertlab_core::mcsim::{
    check_orthogonality, check_subordination, estimate_decoupling_gamma, harmonic_inequality_check, mc_inequality,
    simulate_pair, tau_moment_check, Companion, DeterministicIntegrand, ExitDomain, HarmonicData, InsideBand,
    SimConfig, TrigPolynomial,
};
use hilbertlab_core::norms::pichorides_constant;
use hilbertlab_core::{Domain, Gauge, GaugePair64, PiecewiseFunction64};
use rayon::prelude::*;

use crate::args::{DomainArg, Experiment, SimulateArgs};
use crate::output::{num, opt_bool, opt_num, RunRecord, Table};

pub const HEADER: [&str; 8] = ["experiment", "quantity", "estimate", "std_error", "ci_low", "ci_high", "target", "pass"];

/// Gate width in standard errors.
const SIGMAS: f64 = 3.0;

struct Rows {
    experiment: &'static str,
    table: Table,
    ok: bool,
}

impl Rows {
    fn push(&mut self, quantity: &str, estimate: f64, se: Option<f64>, target: Option<f64>, pass: Option<bool>) {
        self.ok &= pass != Some(false);
        self.table.push(vec![
            self.experiment.into(),
            quantity.into(),
            num(estimate),
            opt_num(se),
            opt_num(se.map(|s| estimate - SIGMAS * s)),
            opt_num(se.map(|s| estimate + SIGMAS * s)),
            opt_num(target),
            opt_bool(pass),
        ]);
    }
}

fn experiment_name(e: Experiment) -> &'static str {
    match e {
        Experiment::Inequality => "inequality",
        Experiment::Orthogonality => "orthogonality",
        Experiment::Decoupling => "decoupling",
        Experiment::Tau => "tau",
        Experiment::Harmonic => "harmonic",
    }
}

fn read_step(path: &std::path::Path) -> Result<PiecewiseFunction64> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(text.parse()?)
}

fn sign_step() -> PiecewiseFunction64 {
    PiecewiseFunction64::scalar_torus(&[(-PI, 0.0, -1.0), (0.0, PI, 1.0)]).expect("sign step is valid")
}

/// `(Φ, Ψ)` and the ceiling of `E Ψ(N)/E Φ(M)` when both are `‖·‖^q`.
fn gauges_and_ceiling(a: &SimulateArgs) -> Result<(GaugePair64, Option<f64>)> {
    let g: GaugePair64 = match &a.gauges {
        Some(s) => s.parse()?,
        None => GaugePair64::power(a.p)?,
    };
    let ceiling = match (g.phi, g.psi) {
        (Gauge::Power(x), Gauge::Power(y)) if x == y => pichorides_constant(x).ok().map(|c| c.powf(x)),
        _ => None,
    };
    Ok((g, ceiling))
}

fn within(x: f64, se: f64, target: f64) -> bool {
    (x - target).abs() <= SIGMAS * se
}

fn inequality(a: &SimulateArgs, config: &SimConfig, rows: &mut Rows) -> Result<()> {
    let f = match &a.input {
        Some(p) => read_step(p)?,
        None => sign_step(),
    };
    let (g, ceiling) = gauges_and_ceiling(a)?;
    let r = mc_inequality(&f, g, config)?;
    let s = r.ratio.std_error;
    rows.push("ratio_vs_boundary", r.ratio.value, Some(s), Some(r.boundary_ratio), Some(within(r.ratio.value, s, r.boundary_ratio)));
    if let Some(c) = ceiling {
        rows.push("ratio_vs_ceiling", r.ratio.value, Some(s), Some(c), Some(r.ratio.value <= c + SIGMAS * s));
    }
    rows.push("lhs", r.lhs, None, None, None);
    rows.push("rhs", r.rhs, None, None, None);
    rows.push("redrawn_paths", r.redrawn as f64, None, None, None);
    Ok(())
}

fn orthogonality(a: &SimulateArgs, config: &SimConfig, rows: &mut Rows) -> Result<()> {
    let step;
    let trig = TrigPolynomial::new(vec![0.2, 1.0], vec![0.0, 0.0, 0.1]);
    let f: &dyn HarmonicData = match &a.input {
        Some(p) => {
            step = read_step(p)?;
            &step
        }
        None => &trig,
    };
    let dim = f.space().dim();
    let functionals: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let per_path: Vec<(f64, usize, usize, f64)> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| -> hilbertlab_core::Result<_> {
            let pair = simulate_pair(f, config, i)?;
            let cov = check_orthogonality(&pair, &functionals)?;
            let sub = check_subordination(&pair, &functionals)?;
            Ok((cov * cov, sub.below_noise_floor, sub.increments, sub.min_increment))
        })
        .collect::<hilbertlab_core::Result<_>>()?;
    let n = per_path.len() as f64;
    let rms = (per_path.iter().map(|r| r.0).sum::<f64>() / n).sqrt();
    let below: usize = per_path.iter().map(|r| r.1).sum();
    let steps: usize = per_path.iter().map(|r| r.2).sum();
    let min_inc = per_path.iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
    let frac = below as f64 / steps.max(1) as f64;
    rows.push("rms_covariation", rms, None, None, None);
    rows.push("rms_covariation_over_sqrt_dt", rms / config.dt.sqrt(), None, None, None);
    rows.push("subordination_violation_fraction", frac, None, Some(0.01), Some(frac <= 0.01));
    rows.push("min_subordination_increment", min_inc, None, None, None);
    Ok(())
}

fn integrand_from(f: &PiecewiseFunction64) -> Result<DeterministicIntegrand> {
    if f.domain() != Domain::RealLine || f.dim() != 1 {
        bail!("the decoupling integrand must be a scalar real-line step function");
    }
    let (mut durations, mut values) = (Vec::new(), Vec::new());
    for p in f.pieces() {
        if let Some((a, b)) = p.bounds() {
            durations.push(b - a);
            values.push(p.value[0]);
        }
    }
    Ok(DeterministicIntegrand::new(durations, values)?)
}

fn decoupling(a: &SimulateArgs, config: &SimConfig, rows: &mut Rows) -> Result<()> {
    let det = match &a.input {
        Some(p) => integrand_from(&read_step(p)?)?,
        None => DeterministicIntegrand::new(vec![0.25; 4], vec![1.0, -2.0, 0.5, 3.0])?,
    };
    let iso = estimate_decoupling_gamma(&det, a.p, config)?;
    for (q, r) in [("deterministic_beta_plus", iso.beta_plus_lb), ("deterministic_beta_minus", iso.beta_minus_lb)] {
        rows.push(q, r.value, Some(r.std_error), Some(1.0), Some(within(r.value, r.std_error, 1.0)));
    }
    let band = InsideBand {
        dt: config.dt,
        horizon: 1.0,
        level: 1.0,
    };
    let adapted = estimate_decoupling_gamma(&band, a.p, config)?.max();
    let cot = pichorides_constant(a.p)?;
    rows.push(
        "adapted_beta_max",
        adapted.value,
        Some(adapted.std_error),
        Some(cot),
        Some(adapted.value <= cot + SIGMAS * adapted.std_error),
    );
    Ok(())
}

fn tau(config: &SimConfig, rows: &mut Rows) -> Result<()> {
    let m = tau_moment_check(config)?;
    rows.push("e_tau", m.e_tau.mean, Some(m.e_tau.std_error), Some(1.0), Some(m.e_tau.within(1.0, SIGMAS)));
    rows.push("e_tau_sq", m.e_tau_sq.mean, Some(m.e_tau_sq.std_error), Some(5.0 / 3.0), Some(m.e_tau_sq.within(5.0 / 3.0, SIGMAS)));
    rows.push("e_sqrt_tau", m.e_sqrt_tau.mean, Some(m.e_sqrt_tau.std_error), None, None);
    let g = m.e_abs_gamma;
    let eg = (2.0 / PI).sqrt();
    rows.push("e_abs_gamma", g.mean, Some(g.std_error), Some(eg), Some(g.within(eg, SIGMAS)));
    let c = m.c_lower;
    rows.push("c_lower", c.mean, Some(c.std_error), Some(0.618), Some(c.mean >= 0.618 - SIGMAS * c.std_error));
    rows.push("holder_bound", m.holder_bound, None, None, None);
    Ok(())
}

fn harmonic(a: &SimulateArgs, config: &SimConfig, rows: &mut Rows) -> Result<()> {
    let f = match &a.input {
        Some(p) => read_step(p)?,
        None => sign_step(),
    };
    let companion = a.companion.as_deref().map(read_step).transpose()?;
    let g = match &companion {
        Some(c) => Companion::Given(c),
        None => Companion::Conjugate,
    };
    let domain = match a.domain {
        DomainArg::Disc => ExitDomain::Disc,
        DomainArg::Square => ExitDomain::Square,
    };
    let (gauges, ceiling) = gauges_and_ceiling(a)?;
    let r = harmonic_inequality_check(domain, &f, g, gauges, config)?;
    let s = r.ratio.std_error;
    let target = ceiling.filter(|_| r.verified);
    rows.push("ratio", r.ratio.value, Some(s), target, target.map(|c| r.ratio.value <= c + SIGMAS * s));
    rows.push("exit_fit_p_value", r.exit_fit.p_value, None, Some(1e-3), Some(r.exit_fit.p_value >= 1e-3));
    rows.push("lhs", r.lhs, None, None, None);
    rows.push("rhs", r.rhs, None, None, None);
    rows.push("verified", if r.verified { 1.0 } else { 0.0 }, None, None, None);
    rows.push("redrawn_paths", r.redrawn as f64, None, None, None);
    Ok(())
}

pub fn run(a: &SimulateArgs) -> Result<RunRecord> {
    let mut config = SimConfig::new(a.dt, a.paths, a.seed)?;
    if let Some(t) = a.boundary_tol {
        config = config.with_boundary_tol(t)?;
    }
    let name = experiment_name(a.experiment);
    let mut rows = Rows {
        experiment: name,
        table: Table::new(&HEADER),
        ok: true,
    };
    match a.experiment {
        Experiment::Inequality => inequality(a, &config, &mut rows)?,
        Experiment::Orthogonality => orthogonality(a, &config, &mut rows)?,
        Experiment::Decoupling => decoupling(a, &config, &mut rows)?,
        Experiment::Tau => tau(&config, &mut rows)?,
        Experiment::Harmonic => harmonic(a, &config, &mut rows)?,
    }

    let mut rec = RunRecord::new("simulate", rows.table);
    rec.gates_ok = rows.ok;
    rec.inputs.extend(a.input.iter().cloned());
    rec.inputs.extend(a.companion.iter().cloned());
    rec.set("experiment", name);
    rec.set("p", a.p);
    if let Some(g) = &a.gauges {
        rec.set("gauges", g);
    }
    rec.set("dt", a.dt);
    rec.set("paths", a.paths);
    rec.set("seed", a.seed);
    rec.set("boundary_tol", config.boundary_tol);
    if a.experiment == Experiment::Harmonic {
        rec.set("domain", format!("{:?}", a.domain).to_lowercase());
    }
    Ok(rec)
}
