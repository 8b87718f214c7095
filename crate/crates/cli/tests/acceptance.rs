//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see every line.

use std::process::Command;
use std::time::Instant;

use resonance_core::analysis::{detect_crossover, local_loglog_slope};
use resonance_core::constants::{mol_per_l_to_cm3, AMU, C0, HBAR, K_B};
use resonance_core::curve::{log_grid, EnergyCurve, PointFlag, Provenance, RegimeLabel};
use resonance_core::media::{debye_kappa, ElectrolyteParams, MediumModel};
use resonance_core::polarizability::OscillatorPolarizability;
use resonance_core::quadrature::{
    integrate_semi_infinite, MatsubaraGrid, QuadratureSpec, Transform,
};
use resonance_core::resonance::{
    finite_t_energy, large_rho_asymptote, resonance_modes, retarded_zero_t_energy, Axis,
    EnergyOrder,
};
use resonance_core::susceptibility::{
    t_imag_axis_eps, t_real_axis_free_space, t_static_electrolyte,
};

fn verdict(criterion: &str, pass: bool) {
    println!(
        "acceptance {}: {criterion}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion failed: {criterion}");
}

/// Deterministic xorshift for randomized-parameter criteria.
struct Rng(u64);
impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    /// log-uniform in [lo, hi]
    fn log_range(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + self.next_f64() * (hi / lo).ln()).exp()
    }
}

fn spec(rel_tol: f64) -> QuadratureSpec {
    QuadratureSpec::new(rel_tol, 0.0, 200_000, Transform::None).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resonance"))
}

fn config_path(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn criterion_01_trace_identities() {
    let start = Instant::now();
    let mut rng = Rng(0x9e3779b97f4a7c15);
    let mut ok = true;
    for _ in 0..1000 {
        let rho = rng.log_range(1e-8, 1e-2);
        let eps = 1.0 + 99.0 * rng.next_f64();
        let kappa = rng.log_range(1e2, 300.0 / rho);

        // free-space zero frequency, both element sets
        let real0 = t_real_axis_free_space(rho, 0.0).unwrap();
        let scale = real0.t_par.norm();
        ok &= real0.trace().norm() <= 1e-12 * scale;
        let imag0 = t_imag_axis_eps(rho, 0.0, 1.0).unwrap();
        ok &= imag0.trace().abs() <= 1e-12 * imag0.t_par.abs();

        // screened static trace
        let t0 = t_static_electrolyte(rho, kappa, eps).unwrap();
        let expected = -kappa * kappa * (-kappa * rho).exp() / (rho * eps);
        let scale = t0.t_par.abs().max(expected.abs());
        ok &= (t0.trace() - expected).abs() <= 1e-12 * scale;
    }
    ok &= start.elapsed().as_secs_f64() < 1.0;
    verdict("1 trace identities (free-space zero trace, screened -k^2 e^{-kr}/(r eps), < 1 s)", ok);
}

#[test]
fn criterion_02_radiation_damping_limit() {
    let omega = 3.2e15;
    let rho = 1e-4 * C0 / omega;
    let t = t_real_axis_free_space(rho, omega).unwrap();
    let expected = 2.0 / 3.0 * (omega / C0).powi(3);
    let rel = (t.t_perp.im / expected - 1.0).abs();
    verdict(
        &format!("2 radiation damping Im T_xx -> (2/3) w^3/c^3 (rel {rel:.2e} < 1e-6)"),
        rel < 1e-6,
    );
}

#[test]
fn criterion_03_closed_form_kernels() {
    let start = Instant::now();
    let g3 = integrate_semi_infinite(|x| x * x * (-x).exp(), &spec(1e-10)).unwrap();
    let g6 = integrate_semi_infinite(|x| x.powi(5) * (-x).exp(), &spec(1e-10)).unwrap();
    let ok = (g3.value - 2.0).abs() / 2.0 < 1e-10
        && (g6.value - 120.0).abs() / 120.0 < 1e-10
        && start.elapsed().as_secs_f64() < 0.1;
    verdict("3 quadrature kernels Gamma(3) = 2 and Gamma(6) = 120 at 1e-10, < 0.1 s", ok);
}

#[test]
fn criterion_04_rho4_regime() {
    let start = Instant::now();
    let alpha0 = 3e-24;
    let p = OscillatorPolarizability::static_excess(alpha0, 2e16).unwrap();
    let grid = log_grid(1e-7, 1e-5, 100).unwrap(); // 2 decades, 201 points
    let q = spec(1e-10);
    let u: Vec<f64> = grid
        .iter()
        .map(|&rho| retarded_zero_t_energy(rho, &p, &MediumModel::Vacuum, &q).unwrap())
        .collect();
    let n = grid.len();
    let curve = EnergyCurve::new(
        grid.clone(),
        u.clone(),
        vec![RegimeLabel::Rho4; n],
        vec![PointFlag::Ok; n],
        Provenance::default(),
    )
    .unwrap();
    let profile = local_loglog_slope(&curve, 5).unwrap();
    let slopes_ok = profile.local_slope.iter().all(|s| (s + 4.0).abs() <= 0.02);
    let closed_ok = grid.iter().zip(&u).all(|(&rho, &u)| {
        let expected = -2.0 * HBAR * C0 * alpha0 / (std::f64::consts::PI * rho.powi(4));
        (u / expected - 1.0).abs() < 5e-3
    });
    let fast = start.elapsed().as_secs_f64() < 10.0;
    verdict(
        "4 free-space slope -4.00 +/- 0.02 over 2 decades, closed form within 0.5%, < 10 s",
        slopes_ok && closed_ok && fast,
    );
}

/// Shared Davies-Ninham setup for the crossover criteria: eps0 = 1,
/// omega_p = 2e12 rad/s, eta = 1e13 rad/s -> crossover near 0.42 cm.
fn crossover_medium() -> MediumModel {
    MediumModel::davies_ninham(1.0, 78.5, 2e12, 1e13).unwrap()
}

fn crossover_curve() -> (Vec<f64>, Vec<f64>) {
    let p = OscillatorPolarizability::static_excess(3e-24, 2e16).unwrap();
    let medium = crossover_medium();
    let q = spec(1e-9);
    let grid = log_grid(1e-4, 1e2, 12).unwrap(); // 6 decades
    let u = grid
        .iter()
        .map(|&rho| retarded_zero_t_energy(rho, &p, &medium, &q).unwrap())
        .collect();
    (grid, u)
}

fn detected_crossover(grid: &[f64], u: &[f64]) -> resonance_core::analysis::Crossover {
    let n = grid.len();
    let curve = EnergyCurve::new(
        grid.to_vec(),
        u.to_vec(),
        vec![RegimeLabel::Unlabeled; n],
        vec![PointFlag::Ok; n],
        Provenance::default(),
    )
    .unwrap();
    let profile = local_loglog_slope(&curve, 5).unwrap();
    detect_crossover(&profile, -4.0, -7.0, 0.3).unwrap()
}

#[test]
fn criterion_05_rho7_regime() {
    let start = Instant::now();
    let (grid, u) = crossover_curve();
    let n = grid.len();
    let curve = EnergyCurve::new(
        grid.clone(),
        u.clone(),
        vec![RegimeLabel::Unlabeled; n],
        vec![PointFlag::Ok; n],
        Provenance::default(),
    )
    .unwrap();
    let profile = local_loglog_slope(&curve, 5).unwrap();
    let slope_ok = profile
        .local_slope
        .iter()
        .any(|s| (s + 7.0).abs() <= 0.1);
    let x = detected_crossover(&grid, &u);

    // direct quadrature vs closed form at exactly 10x the crossover
    let p = OscillatorPolarizability::static_excess(3e-24, 2e16).unwrap();
    let medium = crossover_medium();
    let rho10 = 10.0 * x.rho_star;
    let full = retarded_zero_t_energy(rho10, &p, &medium, &spec(1e-9)).unwrap();
    let asym = large_rho_asymptote(rho10, 3e-24, &medium).unwrap();
    let dev = (full / asym - 1.0).abs();
    let fast = start.elapsed().as_secs_f64() < 60.0;
    verdict(
        &format!("5 slope reaches -7.0 +/- 0.1; asymptote within 5% at 10x crossover (dev {dev:.3})"),
        slope_ok && dev < 0.05 && fast,
    );
}

#[test]
fn criterion_06_crossover_pinned() {
    let (grid, u) = crossover_curve();
    let x = detected_crossover(&grid, &u);
    // regression constant pinned on the first verified run
    const RHO_STAR_PINNED: f64 = 4.248_065_899_817_981e-1;
    let rel = (x.rho_star / RHO_STAR_PINNED - 1.0).abs();
    verdict(
        &format!("6 exactly one -4/-7 crossover on 6 decades; rho* = {:.6e} cm pinned (rel {rel:.1e})", x.rho_star),
        rel < 1e-9,
    );
}

#[test]
fn criterion_07_screened_classical_term() {
    let mut rng = Rng(0x51a3b7);
    let mut ok = true;
    for _ in 0..50 {
        let conc = rng.log_range(1e-4, 1.0);
        let temp = 250.0 + 150.0 * rng.next_f64();
        let eps0 = 10.0 + 90.0 * rng.next_f64();
        let alpha_static = rng.log_range(1e-25, 1e-22);
        let params =
            ElectrolyteParams::new(mol_per_l_to_cm3(conc), temp, eps0, 22.99 * AMU).unwrap();
        let kappa = debye_kappa(&params).unwrap();
        let rho = rng.log_range(0.3 / kappa, 10.0 / kappa);
        let medium = MediumModel::davies_ninham(1.0, eps0, 2e12, 1e13).unwrap();
        let p = OscillatorPolarizability::new(
            alpha_static * 4e32,
            2e16,
            resonance_core::polarizability::DampingMode::None,
            resonance_core::polarizability::AlphaProfile::Lorentz,
        )
        .unwrap();
        let grid = MatsubaraGrid::for_separation(temp, rho, C0).unwrap();
        let ft = finite_t_energy(rho, &p, &medium, &params, &grid, EnergyOrder::First, &spec(1e-9))
            .unwrap();
        let expected =
            -K_B * temp * p.alpha_static() * kappa * kappa * (-kappa * rho).exp() / (rho * eps0);
        ok &= (ft.n0_part / expected - 1.0).abs() < 1e-10;
    }
    // vanishes identically at kappa = 0
    let params = ElectrolyteParams::new(0.0, 298.0, 78.5, 22.99 * AMU).unwrap();
    let medium = MediumModel::davies_ninham(1.0, 78.5, 2e12, 1e13).unwrap();
    let p = OscillatorPolarizability::lorentz(1.6e9, 2e16).unwrap();
    let grid = MatsubaraGrid::for_separation(298.0, 1e-6, C0).unwrap();
    let ft = finite_t_energy(1e-6, &p, &medium, &params, &grid, EnergyOrder::First, &spec(1e-9))
        .unwrap();
    ok &= ft.n0_part == 0.0;
    verdict("7 n = 0 part = -kT a(0) k^2 e^{-kr}/(r eps) at 1e-10; zero at kappa = 0", ok);
}

#[test]
fn criterion_08_matsubara_integral_limit() {
    let p = OscillatorPolarizability::lorentz(1.6e9, 2e16).unwrap();
    let medium = MediumModel::Vacuum;
    let q = spec(1e-10);
    let mut ok = true;
    let mut worst_1k: f64 = 0.0;
    for &rho in &[1e-7, 1e-6, 1e-5] {
        let zt = retarded_zero_t_energy(rho, &p, &medium, &q).unwrap();
        let err_at = |temp: f64| {
            let params = ElectrolyteParams::new(0.0, temp, 1.0, 22.99 * AMU).unwrap();
            let grid = MatsubaraGrid::for_separation(temp, rho, C0).unwrap();
            let ft =
                finite_t_energy(rho, &p, &medium, &params, &grid, EnergyOrder::First, &q).unwrap();
            (ft.total / zt - 1.0).abs()
        };
        let e1 = err_at(1.0);
        worst_1k = worst_1k.max(e1);
        ok &= e1 < 5e-3;
        ok &= err_at(0.5) < e1 || e1 < 1e-12;
    }
    verdict(
        &format!("8 T = 1 K sum matches zero-T quadrature (worst rel {worst_1k:.1e} < 0.5%), halving T improves"),
        ok,
    );
}

#[test]
fn criterion_09_frequency_scale_report() {
    let out = bin()
        .args(["media-report", "--config", &config_path("electrolyte_finite_t.conf")])
        .output()
        .expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let grab = |key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .and_then(|l| l.split('=').nth(1))
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(f64::NAN)
    };
    let xi_1 = grab("xi_1_rad_s");
    let omega_p = grab("omega_plasma_ionic_rad_s");
    let ok = out.status.success()
        && (xi_1 / 2.47e14 - 1.0).abs() < 0.02
        && omega_p > 1e12
        && omega_p < 1e13;
    verdict(
        &format!("9 media-report: xi_1(300 K) = {xi_1:.3e} ~ 2.47e14, ionic omega_p = {omega_p:.3e} ~ 1e12"),
        ok,
    );
}

#[test]
fn criterion_10_mode_solver() {
    let rho = 5e-6;
    let omega0 = 2e16;
    // first-order defect of the exact root shrinks 4x under alpha -> alpha/2
    let defect = |alpha0: f64| {
        let p = OscillatorPolarizability::lorentz(alpha0, omega0).unwrap();
        let m = resonance_modes(rho, &p, &MediumModel::Vacuum).unwrap();
        // first-order shift alpha0 T / (2 w0) from the T element at w0
        let t = t_real_axis_free_space(rho, omega0).unwrap().t_par.re;
        let first = alpha0 * t / (2.0 * omega0);
        (m.par.omega_minus - omega0, first)
    };
    let (exact1, first1) = defect(1.6e9);
    let (exact2, first2) = defect(0.8e9);
    let close = (exact1 / first1 - 1.0).abs() < 1e-2;
    let richardson = ((exact1 - first1) / (exact2 - first2) / 4.0 - 1.0).abs() < 0.15;
    verdict(
        "10 exact mode roots reproduce first-order shift; defect is second order in alpha",
        close && richardson,
    );
}

#[test]
fn criterion_11_debye_length() {
    let params =
        ElectrolyteParams::new(mol_per_l_to_cm3(0.1), 298.0, 78.5, 22.99 * AMU).unwrap();
    let lambda_nm = resonance_core::constants::cm_to_nm(1.0 / debye_kappa(&params).unwrap());
    let rel = (lambda_nm / 0.96 - 1.0).abs();
    verdict(
        &format!("11 Debye length lambda_D(0.1 M, 298 K, 78.5) = {lambda_nm:.3} nm within 2% of 0.96 nm"),
        rel < 0.02,
    );
}

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for out in [&out1, &out2] {
        let status = bin()
            .args([
                "scan",
                "--config",
                &config_path("electrolyte_zero_t.conf"),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary runs");
        assert!(status.success());
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    verdict("12 two runs of the same config produce byte-identical CSV", !a.is_empty() && a == b);
}
