//! Acceptance suite: one PASS/FAIL line per criterion, written straight to
//! stdout so it shows up in `cargo test` logs.
//!
//! Every oracle here is computed independently of the code under test
//! (hand-built polynomials, closed forms, RK4 on a companion realization).

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dobkit::analysis::{critical_gain, log_grid, root_locus, sensitivity_peak};
use dobkit::cli::parse_scenario;
use dobkit::dob_design::{check_position_stability, design_report, detect_rhp_zero};
use dobkit::loop_models::{build_l_dob, build_rtob_loop, inner_second_order, sensitivity_pair};
use dobkit::params::{
    Environment, IdentifiedModel, MotorParams, NominalModel, ObserverBandwidths, OuterLoopGains, VelocityBandwidth,
};
use dobkit::poly_tf::{poly_roots, Polynomial, RationalTF};
use dobkit::scenario::{Mode, Scenario, Signal, SimConfig};
use dobkit::timesim::{simulate, LowPass};

const XI_TOL: f64 = 1e-6;
const NO_RESONANCE_PEAK: f64 = 1.001;
const ORDERING_MARGIN: f64 = 1e-3;
// The search band starts at 1 rad/s, where a unit-supremum low-pass reads 1 - O(1/(alpha g)^2).
const UNIT_PEAK_TOL: f64 = 1e-5;
const ROUTH_DRAWS: usize = 1000;
const MARGIN_FLOOR: f64 = 1e-6;
const ALPHA_MIN_REL_TOL: f64 = 1e-6;
const COEFF_REL_TOL: f64 = 1e-12;
const RHP_ZERO_REL_TOL: f64 = 1e-6;
const FORCE_SS_TOL: f64 = 1e-3;
const FORCE_RUNTIME_S: f64 = 5.0;
const DISTURBANCE_RMS_TOL: f64 = 0.02;
const TF_RMS_TOL: f64 = 0.01;
const CONVERGENCE_RATIO: f64 = 1.8;

/// Criteria that cannot hold as stated; they must still be reported as
/// FAIL, and the suite checks that they fail for the documented reason.
const UNATTAINABLE: &[u32] = &[2];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn outcome(id: u32, pass: bool, detail: String) -> Outcome {
    Outcome { id, pass, detail }
}

fn table1_nominal() -> NominalModel {
    NominalModel::new(0.1, 5.0)
}

fn plant_for_alpha(alpha: f64) -> MotorParams {
    MotorParams::new(0.1 / alpha, 5.0)
}

fn rms(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for x in xs {
        s += x * x;
        n += 1;
    }
    (s / n as f64).sqrt()
}

fn inner_cosens_peak(alpha: f64, g_dob: f64, g_v: VelocityBandwidth) -> f64 {
    let bw = ObserverBandwidths::new(g_dob, g_v, 2.0 * g_dob);
    let (_, cosens) = sensitivity_pair(&build_l_dob(&plant_for_alpha(alpha), &table1_nominal(), &bw));
    sensitivity_peak(&cosens, (1.0, 1e5)).unwrap().peak
}

fn criterion_1() -> Outcome {
    let (alpha, g) = (2.0, 500.0);
    let xi = inner_second_order(alpha, 4.0, g).xi;
    let peak = inner_cosens_peak(alpha, g, VelocityBandwidth::Finite(4.0 * g));
    // 0.70711 is 1/sqrt(2) to five places; the tolerance applies to the exact value.
    let pass = (xi - FRAC_1_SQRT_2).abs() <= XI_TOL && format!("{xi:.5}") == "0.70711" && peak <= NO_RESONANCE_PEAK;
    outcome(1, pass, format!("xi = {xi:.8} (want 1/sqrt(2) = 0.70711 ± {XI_TOL}), co-sensitivity peak = {peak:.9} (≤ {NO_RESONANCE_PEAK})"))
}

fn criterion_2() -> Outcome {
    let g = 500.0;
    let alphas = [1.0, 2.0, 4.0, 8.0];
    let finite: Vec<f64> = alphas.iter().map(|&a| inner_cosens_peak(a, g, VelocityBandwidth::Finite(4.0 * g))).collect();
    let ideal: Vec<f64> = alphas.iter().map(|&a| inner_cosens_peak(a, g, VelocityBandwidth::Infinite)).collect();
    let steps: Vec<f64> = finite.windows(2).map(|w| w[1] - w[0]).collect();
    let strictly = steps.iter().all(|&d| d > ORDERING_MARGIN);
    let ideal_unit = ideal.iter().all(|p| (p - 1.0).abs() <= UNIT_PEAK_TOL);

    // With kappa = 4 the co-sensitivity is exactly second order with
    // xi = 0.5 sqrt(4 / alpha): xi >= 1/sqrt(2) for alpha <= 2, where the
    // peak is 1 (at low frequency). The first step cannot exceed 1e-3.
    let explained = steps[0].abs() < ORDERING_MARGIN
        && steps[1..].iter().all(|&d| d > ORDERING_MARGIN)
        && ideal_unit;
    let mut o = outcome(
        2,
        strictly && ideal_unit,
        format!(
            "finite g_v peaks {:?}, steps {:?} (need > {ORDERING_MARGIN}); ideal peaks all 1: {ideal_unit}",
            finite.iter().map(|p| format!("{p:.6}")).collect::<Vec<_>>(),
            steps.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>(),
        ),
    );
    if !o.pass && explained {
        o.detail.push_str(
            "; alpha = 1 and 2 both give xi >= 1/sqrt(2) and a unit peak, so strict ordering is unattainable; \
             alpha 2 -> 4 -> 8 is strictly increasing",
        );
    }
    o
}

fn criterion_3() -> Outcome {
    let nominal = table1_nominal();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let (mut agree, mut counted, mut stable_draws) = (0usize, 0usize, 0usize);
    for _ in 0..ROUTH_DRAWS {
        let g: f64 = 10f64.powf(rng.gen_range(1.0..3.5));
        let k_p: f64 = 10f64.powf(rng.gen_range(0.0..4.0));
        let k_d: f64 = 10f64.powf(rng.gen_range(-1.0..2.7));
        let rhs = 1.0 + g * k_d / k_p + k_d / g + k_d * k_d / k_p;
        // Straddle the threshold so both outcomes are exercised.
        let alpha = 10f64.powf(rng.gen_range(-1.0..1.0)) / rhs;
        let plant = plant_for_alpha(alpha);
        let bw = ObserverBandwidths::new(g, VelocityBandwidth::Infinite, g);
        let v = check_position_stability(&plant, &nominal, &bw, &OuterLoopGains::new(k_p, k_d, 0.0)).unwrap();
        if v.margin.abs() <= MARGIN_FLOOR {
            continue;
        }
        // s^2 (s + alpha g) + alpha (s + g)(K_D s + K_P)
        let den = Polynomial::new(vec![
            alpha * g * k_p,
            alpha * (k_p + g * k_d),
            alpha * g + alpha * k_d,
            1.0,
        ]);
        let stable = poly_roots(&den).unwrap().iter().all(|z| z.re < 0.0);
        counted += 1;
        stable_draws += usize::from(stable);
        agree += usize::from(stable == v.pass);
    }

    let (g, k_p, k_d) = (500.0, 900.0, 100.0);
    let expected = 1.0 / (1.0 + 500.0 * 100.0 / 900.0 + 100.0 / 500.0 + 100.0f64.powi(2) / 900.0);
    let alpha_min = 1.0 / dobkit::dob_design::position_stability_bound(g, k_p, k_d);
    let rel = (alpha_min - expected).abs() / expected;
    let pass = agree == counted && counted > 0 && rel <= ALPHA_MIN_REL_TOL && (expected - 0.014735).abs() < 5e-7;
    outcome(
        3,
        pass,
        format!(
            "{agree}/{counted} draws agree ({stable_draws} stable); alpha_min = {alpha_min:.7} vs {expected:.7} (rel {rel:.1e})"
        ),
    )
}

/// Poles whose magnitude keeps growing with the gain, i.e. branches on
/// asymptotes rather than approaching finite zeros.
fn asymptote_count(l: &RationalTF) -> usize {
    let rl = root_locus(l, &[1e7, 1e9]).unwrap();
    (0..rl.branch_count())
        .filter(|&k| rl.branches[1][k].norm() > 2.0 * rl.branches[0][k].norm())
        .count()
}

fn criterion_4() -> Outcome {
    let (g, c_f) = (500.0, 1.0);
    let (d, k) = (10.0, 1000.0);
    let plant = MotorParams::new(0.1, 5.0);
    let nominal = table1_nominal();
    let env = Environment::bilateral(d, k);
    let bw = ObserverBandwidths::new(g, VelocityBandwidth::Infinite, g);
    let alpha = 1.0;
    let ours = build_rtob_loop(&plant, &nominal, &IdentifiedModel::perfect(&plant), &bw, &env, c_f).open;

    // C_f g J_m alpha (D s + K) / (s (J_m s (s + alpha g) + D s + K)),
    // carried with the common (s + g) factor.
    let j = plant.j_m;
    let num19 = Polynomial::new(vec![c_f * g * j * alpha * k * g, c_f * g * j * alpha * (k + d * g), c_f * g * j * alpha * d]);
    let den19 = Polynomial::new(vec![0.0, k * g, k + d * g + j * alpha * g * g, d + 2.0 * j * alpha * g, j]);
    let coeff_ok = |a: &Polynomial, b: &Polynomial| {
        a.coeffs().len() == b.coeffs().len()
            && a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| (x - y).abs() <= COEFF_REL_TOL * y.abs())
    };
    let reduces = coeff_ok(ours.num(), &num19) && coeff_ok(ours.den(), &den19);

    let imperfect = build_rtob_loop(&plant, &nominal, &IdentifiedModel::new(0.05, 5.0), &bw, &env, c_f).open;
    let (r_perfect, r_imperfect) = (ours.relative_degree(), imperfect.relative_degree());
    let (a_perfect, a_imperfect) = (asymptote_count(&ours), asymptote_count(&imperfect));
    let pass = reduces && r_perfect == 2 && r_imperfect == 1 && a_perfect == 2 && a_imperfect == 1;
    outcome(
        4,
        pass,
        format!(
            "coefficient-wise reduction: {reduces}; relative degree {r_perfect} / {r_imperfect}, \
             asymptotic branches {a_perfect} / {a_imperfect} (perfect / J_hat = 0.5 J_m)"
        ),
    )
}

fn criterion_5() -> Outcome {
    let plant = MotorParams::new(0.1, 5.0);
    let nominal = table1_nominal();
    let env = Environment::bilateral(10.0, 1000.0);
    let bw = ObserverBandwidths::new(500.0, VelocityBandwidth::Infinite, 1000.0);
    let grid = log_grid(1e-2, 1e4, 60).unwrap();

    // (a) over-estimated inertia.
    let over = IdentifiedModel::new(1.5 * plant.j_m, plant.k_tau);
    let c2 = plant.j_m * over.k_tau_hat - over.j_hat * plant.k_tau;
    let (c1, c0) = (over.k_tau_hat * env.d_env, over.k_tau_hat * env.k_env);
    let z_expected = (-c1 - (c1 * c1 - 4.0 * c2 * c0).sqrt()) / (2.0 * c2);
    let z = detect_rhp_zero(&plant, &over, &env);
    let zero_ok = z.is_some_and(|z| (z - z_expected).abs() <= RHP_ZERO_REL_TOL * z_expected);
    let l_over = build_rtob_loop(&plant, &nominal, &over, &bw, &env, 1.0).open;
    let k_star = critical_gain(&l_over, grid[0], *grid.last().unwrap());
    let crossing_ok = match &k_star {
        Ok(k) => {
            // Oracle: dense sweep on either side of the reported gain.
            let stable = |c: f64| poly_roots(&l_over.characteristic(c)).unwrap().iter().all(|p| p.re < 0.0);
            stable(0.99 * k) && !stable(1.01 * k)
        }
        Err(_) => false,
    };

    // (b) under-estimated inertia.
    let under = IdentifiedModel::new(0.5 * plant.j_m, plant.k_tau);
    let no_zero = detect_rhp_zero(&plant, &under, &env).is_none();
    let l_under = build_rtob_loop(&plant, &nominal, &under, &bw, &env, 1.0).open;
    let rl = root_locus(&l_under, &grid).unwrap();
    let all_stable = rl.stable_mask.iter().all(|&s| s);

    outcome(
        5,
        zero_ok && crossing_ok && no_zero && all_stable,
        format!(
            "(a) RHP zero {:?} vs {z_expected:.6}, critical C_f = {}; (b) no zero: {no_zero}, stable on {} gains up to 1e4: {all_stable}",
            z.map(|z| format!("{z:.6}")),
            k_star.as_ref().map_or_else(|e| e.to_string(), |k| format!("{k:.4}")),
            grid.len()
        ),
    )
}

fn force_scenario(g_dob: f64, g_v: VelocityBandwidth, g_rtob: f64, c_f: f64, t_s: f64, duration: f64) -> Scenario {
    let mut sc = Scenario::new(
        Mode::Force,
        MotorParams::new(0.1, 5.0),
        table1_nominal(),
        ObserverBandwidths::new(g_dob, g_v, g_rtob),
        OuterLoopGains::new(0.0, 0.0, c_f),
        SimConfig::new(t_s, duration),
    );
    sc.env = Some(Environment::bilateral(10.0, 1000.0));
    sc.force_ref = Signal::Step { at: 0.0, from: 0.0, to: 1.0 };
    sc
}

fn criterion_6() -> Outcome {
    let sc = force_scenario(500.0, VelocityBandwidth::Finite(2000.0), 1000.0, 5.0, 1e-4, 3.0);
    let start = Instant::now();
    let tr = simulate(&sc).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = tr
        .t
        .iter()
        .zip(&tr.tau_load_hat)
        .filter(|(t, _)| **t > 2.0)
        .map(|(_, f)| (f - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        6,
        worst < FORCE_SS_TOL && elapsed < FORCE_RUNTIME_S,
        format!("max |tau_load_hat - 1| for t > 2 s = {worst:.2e} (< {FORCE_SS_TOL}), runtime {elapsed:.3} s"),
    )
}

fn criterion_7() -> Outcome {
    let g_dob = 500.0;
    let omega = g_dob / 10.0;
    let mut sc = Scenario::new(
        Mode::Position,
        MotorParams::new(0.1, 5.0),
        table1_nominal(),
        ObserverBandwidths::new(g_dob, VelocityBandwidth::Infinite, g_dob),
        OuterLoopGains::new(900.0, 100.0, 0.0),
        SimConfig::new(1e-4, 1.0),
    );
    let disturbance = Signal::Sine { amplitude: 1.0, omega, phase: 0.0, offset: 0.0, start: 0.0 };
    sc.ext_disturbance = disturbance.clone();
    let tr = simulate(&sc).unwrap();

    // Alpha = 1 and no friction or contact: the lumped disturbance is
    // exactly the external torque. Filter it offline with the same map.
    let mut lpf = LowPass::new(g_dob, sc.sim.t_s);
    let reference: Vec<f64> = tr.t.iter().map(|&t| lpf.step(disturbance.value(t))).collect();
    let err = rms(tr.tau_dis_hat.iter().zip(&reference).map(|(a, b)| a - b));
    let rel = err / rms(reference.iter().copied());
    outcome(7, rel <= DISTURBANCE_RMS_TOL, format!("RMS(tau_dis_hat - filtered disturbance) / RMS = {rel:.4} (≤ {DISTURBANCE_RMS_TOL})"))
}

/// Unit-step response of `num/den` sampled every `t_s`, by RK4 on the
/// controllable companion realization with `sub` substeps per sample.
fn rk4_step_response(num: &Polynomial, den: &Polynomial, t_s: f64, n: usize, sub: usize) -> Vec<f64> {
    let order = den.degree().unwrap();
    let lead = den.leading();
    let a: Vec<f64> = (0..order).map(|i| den.coeff(i) / lead).collect();
    let b: Vec<f64> = (0..order).map(|i| num.coeff(i) / lead).collect();
    let f = |x: &[f64]| -> Vec<f64> {
        let mut dx: Vec<f64> = x[1..].to_vec();
        dx.push(1.0 - a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>());
        dx
    };
    let axpy = |x: &[f64], k: &[f64], h: f64| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + h * ki).collect() };
    let h = t_s / sub as f64;
    let mut x = vec![0.0; order];
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        y.push(b.iter().zip(&x).map(|(bi, xi)| bi * xi).sum());
        for _ in 0..sub {
            let k1 = f(&x);
            let k2 = f(&axpy(&x, &k1, h / 2.0));
            let k3 = f(&axpy(&x, &k2, h / 2.0));
            let k4 = f(&axpy(&x, &k3, h));
            for i in 0..order {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    y
}

fn criterion_8() -> Outcome {
    let deviation = |t_s: f64| -> f64 {
        let sc = force_scenario(200.0, VelocityBandwidth::Infinite, 200.0, 5.0, t_s, 0.5);
        let tr = simulate(&sc).unwrap();
        let env = sc.env.unwrap();
        let closed = build_rtob_loop(&sc.plant, &sc.nominal, &sc.identified(), &sc.bandwidths, &env, sc.gains.c_f).closed;
        let y = rk4_step_response(closed.num(), closed.den(), t_s, tr.len(), 50);
        let err = rms((10..tr.len()).map(|k| tr.tau_load_hat[k] - y[k]));
        err / rms(y[10..].iter().copied())
    };
    let (coarse, fine) = (deviation(1e-4), deviation(5e-5));
    let ratio = coarse / fine;
    outcome(
        8,
        coarse <= TF_RMS_TOL && ratio >= CONVERGENCE_RATIO,
        format!("relative RMS deviation {coarse:.2e} at T_s = 1e-4, {fine:.2e} at 5e-5, improvement {ratio:.3}x (≥ {CONVERGENCE_RATIO})"),
    )
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dobkit");
    let dir = tempfile::tempdir().unwrap();
    let scenarios = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut notes = Vec::new();
    let mut pass = true;

    let mut files = vec![scenarios.join("tableI.json"), scenarios.join("tableII.json")];
    // A variant that breaks the robustness rule, to exercise exit code 1.
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    doc["plant"]["J_m"] = 0.025.into();
    let fragile = dir.path().join("fragile.json");
    std::fs::write(&fragile, doc.to_string()).unwrap();
    files.push(fragile);

    for file in &files {
        let name = file.file_name().unwrap().to_string_lossy().into_owned();
        let sc = match parse_scenario(&std::fs::read_to_string(file).unwrap()) {
            Ok(sc) if sc.validate().is_ok() => sc,
            _ => {
                pass = false;
                notes.push(format!("{name}: schema validation failed"));
                continue;
            }
        };

        let report = design_report(&sc).unwrap();
        let check = Command::new(bin).args(["check", file.to_str().unwrap()]).output().unwrap();
        let want = if report.all_hard_pass() { 0 } else { 1 };
        let got = check.status.code().unwrap();
        let fails_listed = String::from_utf8_lossy(&check.stdout).lines().filter(|l| l.contains(" FAIL ")).count();
        pass &= got == want && fails_listed == report.hard_failures().count();

        let csv = dir.path().join(format!("{name}.csv"));
        let sim = Command::new(bin).args(["simulate", file.to_str().unwrap(), "-o", csv.to_str().unwrap()]).output().unwrap();
        let text = std::fs::read_to_string(&csv).unwrap_or_default();
        let mut lines = text.lines();
        let header_ok = lines.next()
            == Some("t,q_ref,q_m,qdot_m,qdot_meas,i_m,tau_dis_hat,tau_load_true,tau_load_hat,tau_ref");
        let rows = lines.count();
        let expected_rows = (sc.sim.duration / sc.sim.t_s).round() as usize + 1;
        pass &= sim.status.success() && header_ok && rows == expected_rows;
        notes.push(format!("{name}: check exit {got} (want {want}), {rows}/{expected_rows} rows, header ok {header_ok}"));
    }
    outcome(9, pass, notes.join("; "))
}

#[test]
fn acceptance_criteria() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {} {status}: {}", o.id, o.detail).unwrap();
    }
    out.flush().unwrap();

    for o in &outcomes {
        if UNATTAINABLE.contains(&o.id) {
            assert!(
                !o.pass && o.detail.contains("unattainable"),
                "criterion {} no longer fails for the documented reason: {}",
                o.id,
                o.detail
            );
        } else {
            assert!(o.pass, "criterion {} failed: {}", o.id, o.detail);
        }
    }
}
