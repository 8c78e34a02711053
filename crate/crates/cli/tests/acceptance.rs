// Copyright 2026 The deco Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance driver: runs every exit criterion in sequence at its pinned
//! tolerance and runtime budget, printing one PASS/FAIL line each.
//!
//! Criteria run serially so that the runtime budgets measure each check alone.

use std::path::Path;
use std::time::{Duration, Instant};

use deco_cli::{load_scenario, run_command, Command, Request};
use deco_core::dissipator::{
    algebraic_dissipator, dissipator_order, jump_coefficients, lindblad_decompose, traceless_projection, Coupling,
    SystemModel, DEFAULT_N_TAU,
};
use deco_core::evolution::{
    choi_matrix, exact_bath_evolve, magnus_generator, magnus_map, magnus_propagate, magnus_trajectory,
    master_equation_evolve, trace_distance, DensityMatrix,
};
use deco_core::grid::FrequencyGrid;
use deco_core::linalg::{c, eig_extremes, hermitize, max_abs, trace, CMatrix, ONE, ZERO};
use deco_core::ordering::{compare_environments, fdr_fit, lutz_compare, OrderTolerances, Verdict};
use deco_core::spectral::{
    composite_correlation, correlation_freq, damping_kernel, CorrelationKernel, CutoffFamily, DiscreteBathSpec,
    StationaryKernel, ThermalReservoirSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn family(rng: &mut ChaCha8Rng) -> CutoffFamily {
    if rng.random_bool(0.5) {
        CutoffFamily::Drude
    } else {
        CutoffFamily::ExponentialCutoff
    }
}

fn thermal_spec(rng: &mut ChaCha8Rng) -> ThermalReservoirSpec {
    ThermalReservoirSpec::new(
        family(rng),
        rng.random_range(0.05..1.0),
        rng.random_range(0.5..8.0),
        rng.random_range(0.0..3.0),
    )
    .unwrap()
}

fn kernel(spec: &ThermalReservoirSpec) -> CorrelationKernel {
    StationaryKernel::thermal(spec, 1).unwrap().into()
}

fn thermal_kernel(rng: &mut ChaCha8Rng, channels: usize) -> CorrelationKernel {
    let parts: Vec<CorrelationKernel> = (0..channels).map(|_| kernel(&thermal_spec(rng))).collect();
    let map: Vec<Vec<usize>> = (0..channels).map(|n| vec![n]).collect();
    composite_correlation(&parts, &map).unwrap()
}

fn hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    hermitize(&CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
}

fn system(rng: &mut ChaCha8Rng, d: usize, channels: usize) -> SystemModel {
    let h = hermitian(rng, d);
    let couplings = (0..channels)
        .map(|channel| Coupling {
            matrix: hermitian(rng, d),
            channel,
        })
        .collect();
    SystemModel::new(h, couplings).unwrap()
}

fn state(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &a * a.adjoint();
    let tr = trace(&m).re;
    DensityMatrix::new(hermitize(&m.unscale(tr))).unwrap()
}

fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Closed-form Drude thermal spectrum γ0Λ²/(ω²+Λ²)·(ω coth(ω/2T) − ω), written
/// independently of the library's cancellation-free evaluation.
fn drude_oracle(omega: f64, gamma0: f64, cutoff: f64, temperature: f64) -> f64 {
    let damping = gamma0 * cutoff * cutoff / (omega * omega + cutoff * cutoff);
    let x = omega / (2.0 * temperature);
    let kappa = if omega == 0.0 { 2.0 * temperature } else { omega * x.cosh() / x.sinh() };
    damping * (kappa - omega)
}

fn zero_frequency_limit() -> Outcome {
    let mut rng = rng(101);
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for _ in 0..50 {
        let spec = ThermalReservoirSpec::new(
            family(&mut rng),
            rng.random_range(0.05..1.0),
            rng.random_range(0.5..8.0),
            rng.random_range(0.01..3.0),
        )
        .unwrap();
        let local = 2.0 * damping_kernel(0.0, &spec) * spec.temperature;
        for k in 0..=20 {
            let omega = 1e-3 * spec.temperature * (k as f64 / 10.0 - 1.0);
            let rel = (correlation_freq(omega, &spec) - local).abs() / local;
            if rel > worst {
                worst = rel;
                worst_case = format!("omega = {omega:.3e}, T = {:.3}", spec.temperature);
            }
        }
    }
    Outcome::new(
        worst < 1e-6,
        format!("max relative deviation {worst:.3e} (bound 1e-6) at {worst_case}"),
    )
}

/// (strong-hot, weak-cold) pairs shared by the thermal and dissipator ordering checks.
fn ordered_pairs() -> Vec<(ThermalReservoirSpec, ThermalReservoirSpec)> {
    let mut rng = rng(102);
    (0..200)
        .map(|_| {
            let fam = family(&mut rng);
            let weak = ThermalReservoirSpec::new(
                fam,
                rng.random_range(0.05..1.0),
                rng.random_range(0.5..5.0),
                rng.random_range(0.0..2.0),
            )
            .unwrap();
            let strong = ThermalReservoirSpec::new(
                fam,
                weak.gamma0 * rng.random_range(1.1..3.0),
                weak.cutoff * rng.random_range(1.1..3.0),
                weak.temperature + rng.random_range(0.1..2.0),
            )
            .unwrap();
            (strong, weak)
        })
        .collect()
}

fn thermal_ordering() -> Outcome {
    let tol = OrderTolerances::default();
    let mut strict = [0usize; 2];
    for (g, count) in [400, 800].into_iter().enumerate() {
        let grid = FrequencyGrid::symmetric(50.0, count).unwrap();
        for (strong, weak) in ordered_pairs() {
            let r = compare_environments(&kernel(&strong), &kernel(&weak), &grid, &tol).unwrap();
            if r.verdict == Verdict::StrictlyGreater {
                strict[g] += 1;
            }
        }
    }
    Outcome::new(
        strict == [200, 200],
        format!("StrictlyGreater in {}/200 (N = 400) and {}/200 (N = 800)", strict[0], strict[1]),
    )
}

fn cutoff_temperature_exchange() -> Outcome {
    let mut rng = rng(103);
    let tol = OrderTolerances::default();
    let grid = FrequencyGrid::symmetric(60.0, 601).unwrap();
    let mut strict = 0;
    let mut equivalent = 0;
    let mut families = [0usize; 2];
    for k in 0..200 {
        let fam = if k % 2 == 0 { CutoffFamily::Drude } else { CutoffFamily::ExponentialCutoff };
        families[k % 2] += 1;
        let gamma0 = rng.random_range(0.1..2.0);
        let low = rng.random_range(0.5..5.0);
        let high = low * rng.random_range(1.2..4.0);
        let cold = rng.random_range(0.0..2.0);
        let hot = cold + rng.random_range(0.2..3.0);
        let r = lutz_compare(gamma0, high, low, hot, cold, fam, &grid, &tol).unwrap();
        if r.verdict == Verdict::StrictlyGreater {
            strict += 1;
        }
        let same_t = lutz_compare(gamma0, high, low, hot, hot, fam, &grid, &tol).unwrap();
        let same_cutoff = lutz_compare(gamma0, low, low, hot, cold, fam, &grid, &tol).unwrap();
        if same_t.verdict == Verdict::Equivalent && same_cutoff.verdict == Verdict::Equivalent {
            equivalent += 1;
        }
    }
    Outcome::new(
        strict == 200 && equivalent == 200 && families == [100, 100],
        format!("StrictlyGreater {strict}/200; degenerate tuples Equivalent {equivalent}/200"),
    )
}

fn incomparability_witness() -> Outcome {
    let a = load_scenario(&fixture("weak_hot.json")).unwrap();
    let b = load_scenario(&fixture("strong_cold.json")).unwrap();
    let mut request = Request::new(Command::Compare, a);
    request.scenario_b = Some(b);
    let report = run_command(&request).unwrap();
    let out = &report.outputs;
    let verdict = out["verdict"].as_str().unwrap().to_string();
    let forward = out["min_eig_forward"].as_f64().unwrap();
    let backward = out["min_eig_backward"].as_f64().unwrap();
    let omega_at = |side: &str| out["worst_point"][side]["omega"].as_f64().unwrap();
    let (w_fwd, w_bwd) = (omega_at("forward"), omega_at("backward"));
    // weak-hot: γ0 = 0.2, Λ = 1, T = 5; strong-cold: γ0 = 1, Λ = 10, T = 0.1
    let gap = |w: f64| drude_oracle(w, 0.2, 1.0, 5.0) - drude_oracle(w, 1.0, 10.0, 0.1);
    let passed = verdict == "Incomparable" && forward < 0.0 && backward < 0.0 && gap(w_fwd) < 0.0 && gap(w_bwd) > 0.0;
    Outcome::new(
        passed,
        format!(
            "{verdict}; a - b = {:.4} at omega = {w_fwd}, b - a = {:.4} at omega = {w_bwd}",
            gap(w_fwd),
            -gap(w_bwd)
        ),
    )
}

fn dissipator_positivity() -> Outcome {
    let mut rng = rng(105);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    let mut cases = 0;
    for k in 0..100 {
        let d = 2 + k % 3;
        let channels = 1 + rng.random_range(0..2usize);
        let s = system(&mut rng, d, channels);
        let kern = thermal_kernel(&mut rng, channels);
        for t in [0.1, 1.0, 5.0] {
            let delta = algebraic_dissipator(&s, &kern, t, DEFAULT_N_TAU).unwrap();
            let (lo, hi) = delta.eig_extremes();
            worst = worst.min(lo / hi);
            if lo < -1e-9 * hi {
                failures += 1;
            }
            cases += 1;
        }
    }
    Outcome::new(
        failures == 0,
        format!("{failures}/{cases} dissipators below -1e-9 max eig; worst min/max {worst:.3e}"),
    )
}

fn dissipator_ordering() -> Outcome {
    let mut rng = rng(106);
    let tol = OrderTolerances::default();
    let mut bad = 0;
    let (mut strict, mut equivalent) = (0, 0);
    for (strong, weak) in ordered_pairs() {
        let s = system(&mut rng, 2, 1);
        let r = dissipator_order(&s, &kernel(&strong), &kernel(&weak), 1.0, DEFAULT_N_TAU, &tol).unwrap();
        match r.verdict {
            Verdict::StrictlyGreater => strict += 1,
            Verdict::Equivalent => equivalent += 1,
            _ => bad += 1,
        }
    }
    Outcome::new(
        bad == 0,
        format!("StrictlyGreater {strict}, Equivalent {equivalent}, StrictlyLess/Incomparable {bad} of 200"),
    )
}

fn complete_positivity() -> Outcome {
    let mut rng = rng(107);
    let mut worst_choi = f64::INFINITY;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut failures = 0;
    for k in 0..50 {
        let d = 2 + k % 2;
        let channels = 1 + rng.random_range(0..2usize);
        let s = system(&mut rng, d, channels);
        let kern = thermal_kernel(&mut rng, channels);
        let t = rng.random_range(0.2..3.0);
        let map = magnus_map(&s, &kern, t, DEFAULT_N_TAU).unwrap();
        let (lo, hi) = eig_extremes(&choi_matrix(&map));
        worst_choi = worst_choi.min(lo / hi);
        if lo < -1e-9 * hi {
            failures += 1;
        }
        for _ in 0..100 {
            let (r1, r2) = (state(&mut rng, d), state(&mut rng, d));
            let p1 = DensityMatrix::new(hermitize(&map.apply(r1.matrix()))).unwrap();
            let p2 = DensityMatrix::new(hermitize(&map.apply(r2.matrix()))).unwrap();
            let excess = trace_distance(&p1, &p2) - trace_distance(&r1, &r2);
            worst_excess = worst_excess.max(excess);
            if excess > 1e-10 {
                failures += 1;
            }
        }
    }
    Outcome::new(
        failures == 0,
        format!("worst Choi min/max {worst_choi:.3e}; largest distance increase {worst_excess:.3e}"),
    )
}

fn white_noise_dephasing() -> Outcome {
    let s = SystemModel::new(CMatrix::zeros(2, 2), vec![Coupling { matrix: sigma_z(), channel: 0 }]).unwrap();
    let plus = DensityMatrix::pure(&[ONE, ONE]).unwrap();
    let mut worst = 0.0f64;
    for strength in [0.25, 0.5, 1.0] {
        let kern: CorrelationKernel = StationaryKernel::white_noise(strength, 0, 1).unwrap().into();
        let t_span = 2.0 / strength;
        let dt = t_span / 100.0;
        let master = master_equation_evolve(&s, &kern, t_span, dt, &plus).unwrap();
        let magnus = magnus_trajectory(&s, &kern, t_span, dt, 9, &plus).unwrap();
        for traj in [&master, &magnus] {
            for (t, rho) in traj.times.iter().zip(&traj.states) {
                let expected = 0.5 * (-2.0 * strength * t).exp();
                worst = worst.max((rho.matrix()[(0, 1)] - c(expected, 0.0)).norm() / expected);
            }
        }
    }
    Outcome::new(worst <= 1e-3, format!("max relative coherence error {worst:.3e} (bound 1e-3)"))
}

fn exact_bath_convergence() -> Outcome {
    let h = sigma_z().scale(0.4) + sigma_x().scale(0.1);
    let s = SystemModel::new(h, vec![Coupling { matrix: sigma_x(), channel: 0 }]).unwrap();
    let rho0 = DensityMatrix::pure(&[ONE, c(0.3, 0.5)]).unwrap();
    let omega0 = 1.0;
    let t = 1.0 / omega0;
    let mut deviations = Vec::new();
    for g in [0.04, 0.02] {
        let bath = DiscreteBathSpec::single_mode(omega0, g, 0.0, 6).unwrap();
        let exact = exact_bath_evolve(&s, &bath, t, t / 10.0, &rho0).unwrap();
        let kern: CorrelationKernel = StationaryKernel::discrete_bath(&bath, 1).unwrap().into();
        let magnus = magnus_propagate(&s, &kern, t, DEFAULT_N_TAU, &rho0).unwrap();
        deviations.push(trace_distance(&exact, &magnus));
    }
    let ratio = deviations[0] / deviations[1];
    Outcome::new(
        ratio >= 4.0 && deviations[1] <= 1e-3,
        format!(
            "distance {:.3e} (g = 0.04), {:.3e} (g = 0.02), ratio {ratio:.2}",
            deviations[0], deviations[1]
        ),
    )
}

fn effective_temperature() -> Outcome {
    let mut rng = rng(110);
    let grid = FrequencyGrid::symmetric(20.0, 401).unwrap();
    let reservoir = |rng: &mut ChaCha8Rng, temperature: f64| {
        ThermalReservoirSpec::new(family(rng), rng.random_range(0.05..1.0), rng.random_range(1.0..8.0), temperature).unwrap()
    };
    let mut worst_thermal = 0.0f64;
    for k in 0..20 {
        let temperature = if k == 0 { 0.0 } else { rng.random_range(0.05..3.0) };
        let spec = reservoir(&mut rng, temperature);
        let fit = fdr_fit(&StationaryKernel::thermal(&spec, 1).unwrap(), |w| spec.damping(w), &grid).unwrap();
        worst_thermal = worst_thermal.max(fit.residual);
    }
    for k in 0..20 {
        let temperature = if k == 0 { 0.0 } else { rng.random_range(0.05..3.0) };
        let (a, b) = (reservoir(&mut rng, temperature), reservoir(&mut rng, temperature));
        let composite = StationaryKernel::thermal(&a, 1).unwrap().add(&StationaryKernel::thermal(&b, 1).unwrap()).unwrap();
        let fit = fdr_fit(&composite, |w| a.damping(w) + b.damping(w), &grid).unwrap();
        worst_thermal = worst_thermal.max(fit.residual);
    }
    let report = run_command(&Request::new(Command::FdrCheck, load_scenario(&fixture("two_bath_optomech.json")).unwrap())).unwrap();
    let optomech = report.outputs["residual"].as_f64().unwrap();
    Outcome::new(
        worst_thermal < 1e-6 && optomech > 0.05,
        format!("worst equilibrium residual {worst_thermal:.3e} (< 1e-6); two-temperature residual {optomech:.4} (> 0.05)"),
    )
}

fn cross_path_consistency() -> Outcome {
    let mut rng = rng(111);
    let mut worst = 0.0f64;
    let mut worst_residual = 0.0f64;
    let mut failures = 0;
    for k in 0..20 {
        let d = 2 + k % 2;
        let channels = 1 + rng.random_range(0..2usize);
        let s = system(&mut rng, d, channels);
        let kern = thermal_kernel(&mut rng, channels);
        let t = rng.random_range(0.3..3.0);
        let phi = magnus_generator(&s, &kern, t, DEFAULT_N_TAU).unwrap();
        let delta = algebraic_dissipator(&s, &kern, t, DEFAULT_N_TAU).unwrap();
        match lindblad_decompose(&phi, &delta) {
            Ok(dec) => worst_residual = worst_residual.max(dec.residual),
            Err(_) => failures += 1,
        }
        let from_generator = traceless_projection(&jump_coefficients(&phi), d);
        let algebraic = traceless_projection(&delta.matrix, d);
        let rel = max_abs(&(from_generator - &algebraic)) / max_abs(&algebraic);
        worst = worst.max(rel);
        if rel > 1e-8 {
            failures += 1;
        }
    }
    Outcome::new(
        failures == 0,
        format!("max relative dissipator mismatch {worst:.3e}; max decomposition residual {worst_residual:.3e} (bounds 1e-8)"),
    )
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Duration, Check); 11] = [
        ("zero-frequency limit of thermal correlation", Duration::from_secs(1), zero_frequency_limit),
        ("thermal ordering of strong-hot over weak-cold", Duration::from_secs(60), thermal_ordering),
        ("cutoff/temperature exchange inequality", Duration::from_secs(60), cutoff_temperature_exchange),
        ("incomparability witness", Duration::from_secs(1), incomparability_witness),
        ("dissipator positivity", Duration::from_secs(300), dissipator_positivity),
        ("ordered kernels give ordered dissipators", Duration::from_secs(300), dissipator_ordering),
        ("complete positivity of Magnus maps", Duration::from_secs(120), complete_positivity),
        ("white-noise dephasing", Duration::from_secs(10), white_noise_dephasing),
        ("exact-bath convergence", Duration::from_secs(60), exact_bath_convergence),
        ("effective-temperature fit", Duration::from_secs(5), effective_temperature),
        ("generator and algebraic dissipator agree", Duration::from_secs(120), cross_path_consistency),
    ];
    let mut failed = Vec::new();
    for (k, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = outcome.passed && in_time;
        println!(
            "[{}] criterion {:>2}: {name}: {}; {:.2}s (budget {}s{})",
            if passed { "PASS" } else { "FAIL" },
            k + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
        if !passed {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
