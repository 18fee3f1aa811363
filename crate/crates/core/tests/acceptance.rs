//! Acceptance criteria 1 to 11. Each test prints one `criterion N: PASS` or
//! `criterion N: FAIL` line with the measured quantities, then asserts.

use std::f64::consts::PI;
use std::time::Instant;

use hilbertlab_core::mcsim::{
    check_orthogonality, check_subordination, estimate_decoupling_gamma, mc_inequality, simulate_pair,
    tau_moment_check, DeterministicIntegrand, InsideBand, SimConfig, TrigPolynomial,
};
use hilbertlab_core::norms::{
    cross_domain_consistency, norm_ladder, p_norm_power_iteration, phi_psi_ratio_ascent, pichorides_constant,
    seed_vector, AscentOptions, Constraint, LadderOptions, PeriodicGridOperator, Seed,
};
use hilbertlab_core::transforms::{
    periodic_hilbert_fft, periodic_hilbert_step, riesz_multiplier, riesz_power_constant, riesz_rotations,
    PeriodicField, SmoothField, SphereRule,
};
use hilbertlab_core::{GaugePair, GridDomain, GridFunction, NormedSpace, OperatorKind64, PiecewiseFunction};
use rayon::prelude::*;

fn report(n: usize, pass: bool, detail: String, start: Instant) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} ({detail}; {:.2} s)", start.elapsed().as_secs_f64());
}

#[test]
fn criterion_01_conjugate_function_exactness() {
    let start = Instant::now();
    let n = 512;
    let mut worst: f64 = 0.0;
    for k in 0..=64 {
        let kf = k as f64;
        let c = GridFunction::scalar_torus_from_fn(n, |t: f64| (kf * t).cos()).unwrap();
        let s = GridFunction::scalar_torus_from_fn(n, |t: f64| (kf * t).sin()).unwrap();
        let hc = periodic_hilbert_fft(&c).unwrap();
        let hs = periodic_hilbert_fft(&s).unwrap();
        for (i, t) in c.nodes().into_iter().enumerate() {
            worst = worst.max((hc.samples()[i] - (kf * t).sin()).abs());
            // sin(0 t) is the zero function, whose conjugate is zero.
            if k > 0 {
                worst = worst.max((hs.samples()[i] + (kf * t).cos()).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-10 && secs < 1.0;
    report(1, pass, format!("max error {worst:.3e}"), start);
    assert!(pass);
}

/// Largest gap between the closed form and the FFT of cell averages at
/// nodes more than four cells from every breakpoint.
fn step_vs_fft(f: &PiecewiseFunction<f64>, n: usize) -> f64 {
    let grid = GridFunction::sample_cell_average(f, GridDomain::Torus, n).unwrap();
    let fft = periodic_hilbert_fft(&grid).unwrap();
    let h = grid.spacing();
    let mut worst: f64 = 0.0;
    for (i, t) in grid.nodes().into_iter().enumerate() {
        if f.breakpoint_distance(t).unwrap() > 4.0 * h {
            let exact = periodic_hilbert_step(f, t).unwrap()[0];
            worst = worst.max((exact - fft.samples()[i]).abs());
        }
    }
    worst
}

#[test]
fn criterion_02_closed_form_vs_fft() {
    let start = Instant::now();
    let f = PiecewiseFunction::scalar_torus(&[(-2.0, 0.5, 1.0), (1.0, 2.5, -0.7)]).unwrap();
    let coarse = step_vs_fft(&f, 1024);
    let fine = step_vs_fft(&f, 2048);
    let pass = coarse <= 5e-2 && fine < coarse && start.elapsed().as_secs_f64() < 5.0;
    report(2, pass, format!("max gap {coarse:.3e} at 1024, {fine:.3e} at 2048"), start);
    assert!(pass);
}

#[test]
fn criterion_03_pichorides_ceiling_at_two() {
    let start = Instant::now();
    let op = OperatorKind64::DiscreteHilbert.truncate(1024).unwrap();
    let seed = seed_vector(op.domain(), op.size(), 2.0, Seed::OddSymmetric);
    let est = p_norm_power_iteration(op.as_ref(), 2.0, &seed, 1e-12, 20_000).unwrap();
    let v = est.lower_bound;
    let pass = (0.995..=1.0 + 1e-9).contains(&v) && start.elapsed().as_secs_f64() < 30.0;
    report(3, pass, format!("estimate {v:.9} after {} iterations", est.iterations), start);
    assert!(pass);
}

#[test]
fn criterion_04_pichorides_approach_at_four() {
    let start = Instant::now();
    let ceiling = pichorides_constant(4.0).unwrap();
    let sizes = [512, 1024, 2048, 4096];
    let ests = norm_ladder(&OperatorKind64::DiscreteHilbert, 4.0, &sizes, LadderOptions::default()).unwrap();
    let values: Vec<f64> = ests.iter().map(|e| e.lower_bound).collect();
    let last = *values.last().unwrap();
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    let pass = last >= 0.95 * ceiling && last <= ceiling + 1e-6 && monotone && start.elapsed().as_secs_f64() < 300.0;
    report(
        4,
        pass,
        format!("estimates {values:.6?} against [{:.6}, {:.6}], nondecreasing: {monotone}", 0.95 * ceiling, ceiling),
        start,
    );
    assert!(pass);
}

#[test]
fn criterion_05_cross_domain_consistency() {
    let start = Instant::now();
    let r = cross_domain_consistency(3.0, &[512, 1024, 2048, 4096], 0.03, LadderOptions::default()).unwrap();
    let finals: Vec<(String, f64)> =
        r.sequences.iter().map(|s| (s.operator.to_string(), *s.estimates.last().unwrap())).collect();
    let hi = finals.iter().map(|f| f.1).fold(f64::MIN, f64::max);
    let lo = finals.iter().map(|f| f.1).fold(f64::MAX, f64::min);
    let mutual = (hi - lo) / hi <= 0.02;
    let pass = r.within_band && mutual && start.elapsed().as_secs_f64() < 300.0;
    report(
        5,
        pass,
        format!("final estimates {finals:.6?}, ceiling {:.6}, spread {:.4}", r.ceiling, (hi - lo) / hi),
        start,
    );
    assert!(pass);
}

#[test]
fn criterion_06_zero_mean_equality() {
    let start = Instant::now();
    let n = 512;
    let op = PeriodicGridOperator::new(n).unwrap();
    let seed = GridFunction::scalar(GridDomain::Torus, seed_vector(GridDomain::Torus, n, 3.0, Seed::Random(6))).unwrap();
    let run = |c| -> f64 {
        phi_psi_ratio_ascent(&op, GaugePair::power(3.0).unwrap(), &NormedSpace::scalar(), c, &seed, AscentOptions::default())
            .unwrap()
            .lower_bound
    };
    let free = run(Constraint::None);
    let centred = run(Constraint::ZeroMean);
    let gap = (free - centred).abs() / free.max(centred);
    let pass = gap <= 0.02 && start.elapsed().as_secs_f64() < 120.0;
    report(6, pass, format!("ratio {free:.6} unconstrained, {centred:.6} zero mean, gap {gap:.4}"), start);
    assert!(pass);
}

#[test]
fn criterion_07_exit_time_moments() {
    let start = Instant::now();
    let config = SimConfig::new(1e-4, 100_000, 7).unwrap();
    let m = tau_moment_check(&config).unwrap();
    let c_ok = m.c_lower.mean >= 0.618 - 3.0 * m.c_lower.std_error;
    let pass = m.e_tau.within(1.0, 3.0) && m.e_tau_sq.within(5.0 / 3.0, 3.0) && c_ok && start.elapsed().as_secs_f64() < 120.0;
    report(
        7,
        pass,
        format!(
            "E τ = {:.5} ± {:.5}, E τ² = {:.5} ± {:.5}, E|γ|·E√τ = {:.5} ± {:.5}",
            m.e_tau.mean, m.e_tau.std_error, m.e_tau_sq.mean, m.e_tau_sq.std_error, m.c_lower.mean, m.c_lower.std_error
        ),
        start,
    );
    assert!(pass);
}

#[test]
fn criterion_08_main_inequality() {
    let start = Instant::now();
    let f = PiecewiseFunction::scalar_torus(&[(-PI, 0.0, -1.0), (0.0, PI, 1.0)]).unwrap();
    let config = SimConfig::new(1e-4, 10_000, 8).unwrap();
    let two = mc_inequality(&f, GaugePair::power(2.0).unwrap(), &config).unwrap();
    let three = mc_inequality(&f, GaugePair::power(3.0).unwrap(), &config).unwrap();
    let s2 = two.ratio.std_error;
    let s3 = three.ratio.std_error;
    let ok2 = (two.ratio.value - two.boundary_ratio).abs() <= 3.0 * s2 && two.ratio.value <= 1.0 + 3.0 * s2;
    let ok3 = three.ratio.value <= 3f64.sqrt().powi(3) + 3.0 * s3;
    let pass = ok2 && ok3 && start.elapsed().as_secs_f64() < 180.0;
    report(
        8,
        pass,
        format!(
            "p = 2: {:.5} ± {:.5} vs boundary {:.5}; p = 3: {:.5} ± {:.5} vs ceiling {:.5}",
            two.ratio.value,
            s2,
            two.boundary_ratio,
            three.ratio.value,
            s3,
            3f64.sqrt().powi(3)
        ),
        start,
    );
    assert!(pass);
}

/// RMS covariation over paths, and the counts of subordination increments
/// below the noise floor.
fn diagnostics(f: &TrigPolynomial, dt: f64, paths: usize, seed: u64) -> (f64, usize, usize) {
    let config = SimConfig::new(dt, paths, seed).unwrap();
    let rows: Vec<(f64, usize, usize)> = (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let pair = simulate_pair(f, &config, i).unwrap();
            let cov = check_orthogonality(&pair, &[vec![1.0]]).unwrap();
            let sub = check_subordination(&pair, &[vec![1.0]]).unwrap();
            (cov * cov, sub.below_noise_floor, sub.increments)
        })
        .collect();
    let ms = rows.iter().map(|r| r.0).sum::<f64>() / paths as f64;
    (ms.sqrt(), rows.iter().map(|r| r.1).sum(), rows.iter().map(|r| r.2).sum())
}

#[test]
fn criterion_09_orthogonality_and_subordination() {
    let start = Instant::now();
    let f = TrigPolynomial::new(vec![0.2, 1.0], vec![0.0, 0.0, 0.1]);
    let (coarse, below_c, steps_c) = diagnostics(&f, 1e-4, 1000, 9);
    let (fine, below_f, steps_f) = diagnostics(&f, 2.5e-5, 1000, 9);
    let halving = coarse / fine;
    let frac = (below_c + below_f) as f64 / (steps_c + steps_f) as f64;
    let pass = (1.4..=2.6).contains(&halving) && frac <= 0.01 && start.elapsed().as_secs_f64() < 180.0;
    report(
        9,
        pass,
        format!("RMS covariation {coarse:.3e} -> {fine:.3e} (factor {halving:.3}); increments below -10dt: {frac:.2e}"),
        start,
    );
    assert!(pass);
}

#[test]
fn criterion_10_decoupling() {
    let start = Instant::now();
    let config = SimConfig::new(1e-3, 100_000, 10).unwrap();
    let det = DeterministicIntegrand::new(vec![0.25; 4], vec![1.0, -2.0, 0.5, 3.0]).unwrap();
    let iso = estimate_decoupling_gamma(&det, 2.0, &config).unwrap();
    let band = InsideBand {
        dt: 1e-3,
        horizon: 1.0,
        level: 1.0,
    };
    let adapted = estimate_decoupling_gamma(&band, 3.0, &config).unwrap().max();
    let ok_iso = (iso.beta_plus_lb.value - 1.0).abs() <= 0.02 && (iso.beta_minus_lb.value - 1.0).abs() <= 0.02;
    let ok_adapted = adapted.value <= 3f64.sqrt() + 3.0 * adapted.std_error;
    let pass = ok_iso && ok_adapted && start.elapsed().as_secs_f64() < 120.0;
    report(
        10,
        pass,
        format!(
            "p = 2 deterministic: {:.5}, {:.5}; p = 3 adapted max: {:.5} ± {:.5}",
            iso.beta_plus_lb.value, iso.beta_minus_lb.value, adapted.value, adapted.std_error
        ),
        start,
    );
    assert!(pass);
}

#[test]
fn criterion_11_riesz_constant_and_rotations() {
    let start = Instant::now();
    let c = riesz_power_constant::<f64>(1, 2).unwrap();
    let bump = |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        (1.0 - r2) * (-r2).exp()
    };
    let n = 128;
    let grid = PeriodicField::from_fn(vec![n, n], vec![16.0, 16.0], bump).unwrap();
    let field = SmoothField::new(2, 1, 7.0, |x: &[f64]| vec![bump(x)]).unwrap();
    let rule = SphereRule::new(2, 256).unwrap();
    let mut worst: f64 = 0.0;
    let mut expansive = false;
    for j in 1..=2 {
        let oracle = riesz_multiplier(&grid, j).unwrap();
        expansive |= oracle.l2_norm() > grid.l2_norm();
        for idx in [[n / 2 + 4, n / 2 + 8], [n / 2 - 6, n / 2 + 1], [n / 2 + 10, n / 2 - 10]] {
            let flat = grid.flat_index(&idx);
            let r = riesz_rotations(&field, j, &grid.point(flat), &rule).unwrap();
            worst = worst.max((r.value[0] - oracle.data()[flat]).abs());
        }
    }
    let pass = (c - 1.0).abs() <= 1e-12 && worst <= 1e-3 && !expansive && start.elapsed().as_secs_f64() < 30.0;
    report(
        11,
        pass,
        format!("constant {c:.15}, rotations vs multiplier {worst:.3e}, non-expansive: {}", !expansive),
        start,
    );
    assert!(pass);
}
