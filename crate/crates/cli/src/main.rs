//! `resonance`: config-driven scans of screened resonance dipole-dipole
//! interaction energies, with mode tables, media reports and asymptote
//! comparisons. Exit codes: 0 success, 2 config error, 3 numerical
//! non-convergence, 4 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use resonance_core::analysis::{asymptote_deviation, detect_crossover, local_loglog_slope};
use resonance_core::config::{load_run_config, RunConfig, Scenario};
use resonance_core::constants::{cm_to_nm, C0};
use resonance_core::curve::{
    emit_csv, emit_json, fmt_g17, log_grid, EnergyCurve, PointFlag, Provenance, RegimeLabel,
};
use resonance_core::media::{debye_kappa, frequency_scale_report};
use resonance_core::quadrature::{MatsubaraGrid, QuadratureSpec, Transform};
use resonance_core::resonance::{
    energy_from_shift, finite_t_energy, large_rho_asymptote, qed_transfer_rate_shape,
    resonance_modes, retarded_zero_t_energy, small_rho_asymptote, Branch, EnergyOrder, ModePair,
};
use resonance_core::CoreError;

#[derive(Parser)]
#[command(
    name = "resonance",
    about = "Screened resonance dipole-dipole interaction energy scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan U(rho) over the configured grid; writes curve, slopes and summary
    Scan(RunArgs),
    /// Coupled-dipole mode frequencies over the configured grid
    Modes(RunArgs),
    /// Frequency scales and Debye screening report for the electrolyte
    MediaReport(RunArgs),
    /// Full quadrature vs small/large-separation closed forms
    CompareAsymptotes(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output path (stdout when omitted; scans also write <out>.slopes.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override the config's relative quadrature tolerance
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Worker threads for grid evaluation (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::Config { .. } | CoreError::Usage(_) | CoreError::Domain(_) => 2,
        CoreError::Io(_) => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.command {
        Command::Scan(a) | Command::Modes(a) | Command::MediaReport(a)
        | Command::CompareAsymptotes(a) => a,
    };
    if let Some(n) = args.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("resonance: could not configure {n} worker threads");
            return ExitCode::from(2);
        }
    }
    let mut cfg = match load_run_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("resonance: {}: {e}", args.config.display());
            return ExitCode::from(exit_code_for(&e));
        }
    };
    if let Some(tol) = args.rel_tol {
        if !(tol > 0.0 && tol <= 1e-2) {
            eprintln!("resonance: --rel-tol must lie in (0, 1e-2], got {tol:e}");
            return ExitCode::from(2);
        }
        cfg.rel_tol = tol;
    }
    let result = match &cli.command {
        Command::Scan(a) => run_scan(&cfg, a),
        Command::Modes(a) => run_modes(&cfg, a),
        Command::MediaReport(a) => run_media_report(&cfg, a),
        Command::CompareAsymptotes(a) => run_compare(&cfg, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("resonance: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn quad_spec(cfg: &RunConfig) -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: cfg.rel_tol,
        abs_floor: 0.0,
        max_evals: cfg.max_evals,
        transform: Transform::None,
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), CoreError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(CoreError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn provenance(cfg: &RunConfig, operation: &str) -> Provenance {
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("scenario".to_string(), cfg.scenario.to_string());
    parameters.insert("rho_min_cm".to_string(), fmt_g17(cfg.rho_min));
    parameters.insert("rho_max_cm".to_string(), fmt_g17(cfg.rho_max));
    parameters.insert(
        "points_per_decade".to_string(),
        cfg.points_per_decade.to_string(),
    );
    parameters.insert("rel_tol".to_string(), fmt_g17(cfg.rel_tol));
    Provenance {
        operation: operation.to_string(),
        parameters,
        config_hash: cfg.config_hash.clone(),
    }
}

/// One scan point: energy plus status. Failures that leave the rest of the
/// grid computable are folded into the point flag.
fn scan_point(cfg: &RunConfig, rho: f64, spec: &QuadratureSpec) -> (f64, PointFlag) {
    let computed: Result<f64, CoreError> = match cfg.scenario {
        Scenario::VacuumZeroT | Scenario::ElectrolyteZeroT => {
            retarded_zero_t_energy(rho, &cfg.atom, &cfg.medium, spec)
        }
        Scenario::ElectrolyteFiniteT => {
            let params = cfg.electrolyte.as_ref().expect("validated by config");
            MatsubaraGrid::for_separation(params.temperature, rho, C0).and_then(|mut grid| {
                grid.n_max = grid.n_max.min(cfg.n_max_cap.max(1));
                finite_t_energy(
                    rho,
                    &cfg.atom,
                    &cfg.medium,
                    params,
                    &grid,
                    EnergyOrder::First,
                    spec,
                )
                .map(|ft| ft.total)
            })
        }
        Scenario::QedComparison => qed_transfer_rate_shape(rho, cfg.atom.omega0),
        Scenario::Modes => resonance_modes(rho, &cfg.atom, &cfg.medium).map(|m| {
            let at_inf = ModePair {
                omega_plus: cfg.atom.omega0,
                omega_minus: cfg.atom.omega0,
                rho: f64::INFINITY,
            };
            energy_from_shift(&m.par, &at_inf, Branch::Antisymmetric)
        }),
    };
    match computed {
        Ok(u) if u == 0.0 => (0.0, PointFlag::Underflow),
        Ok(u) => (u, PointFlag::Ok),
        Err(_) => (0.0, PointFlag::NotConverged),
    }
}

fn run_scan(cfg: &RunConfig, args: &RunArgs) -> Result<ExitCode, CoreError> {
    let grid = log_grid(cfg.rho_min, cfg.rho_max, cfg.points_per_decade)?;
    let spec = quad_spec(cfg);
    let points: Vec<(f64, PointFlag)> = grid
        .par_iter()
        .map(|&rho| scan_point(cfg, rho, &spec))
        .collect();
    let (u_values, flags): (Vec<f64>, Vec<PointFlag>) = points.into_iter().unzip();

    // regime labels from the measured slopes where a crossover is resolvable
    let mut labels = vec![default_label(cfg.scenario); grid.len()];
    let mut curve = EnergyCurve::new(
        grid,
        u_values,
        labels.clone(),
        flags.clone(),
        provenance(cfg, "scan"),
    )?;
    let window = if curve.len() >= 5 { 5 } else { 3 };
    let profile = (curve.len() >= window)
        .then(|| local_loglog_slope(&curve, window))
        .transpose()?;
    let crossover = profile.as_ref().and_then(|p| {
        (cfg.scenario == Scenario::ElectrolyteZeroT)
            .then(|| detect_crossover(p, -4.0, -7.0, 0.3).ok())
            .flatten()
    });
    if let Some(x) = &crossover {
        for (i, &rho) in curve.rho_grid.iter().enumerate() {
            labels[i] = if rho < 0.5 * x.rho_star {
                RegimeLabel::Rho4
            } else if rho > 2.0 * x.rho_star {
                RegimeLabel::Rho7
            } else {
                RegimeLabel::Crossover
            };
        }
        curve.regime_labels = labels;
    }

    let text = match args.format {
        Format::Csv => emit_csv(&curve)?,
        Format::Json => emit_json(&curve)?,
    };
    write_or_print(args.out.as_deref(), &text)?;

    if let (Some(out), Some(p)) = (&args.out, &profile) {
        let mut s = String::from("rho_cm,dlnU_dlnrho\n");
        for (rho, slope) in p.rho.iter().zip(&p.local_slope) {
            s.push_str(&format!("{},{}\n", fmt_g17(*rho), fmt_g17(*slope)));
        }
        std::fs::write(out.with_extension("slopes.csv"), s)?;
    }

    // summary: recomputable from the emitted files
    let mut summary = String::new();
    if let Some(p) = &profile {
        if let (Some(first), Some(last)) = (p.local_slope.first(), p.local_slope.last()) {
            summary.push_str(&format!(
                "slope_small_rho = {first:.3}\nslope_large_rho = {last:.3}\n"
            ));
        }
    }
    if let Some(x) = &crossover {
        summary.push_str(&format!("crossover_rho_cm = {}\n", fmt_g17(x.rho_star)));
    }
    if let Some(params) = &cfg.electrolyte {
        let kappa = debye_kappa(params)?;
        if kappa > 0.0 {
            summary.push_str(&format!("debye_length_nm = {:.6}\n", cm_to_nm(1.0 / kappa)));
        }
        let report = frequency_scale_report(params)?;
        summary.push_str(&format!(
            "xi_1_rad_s = {:.6e}\nomega_plasma_ionic_rad_s = {:.6e}\n",
            report.xi_1, report.omega_plasma_ionic
        ));
    }
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }

    let any_failed = flags.iter().any(|f| *f == PointFlag::NotConverged);
    Ok(if any_failed {
        eprintln!("resonance: some points did not converge (flagged not-converged)");
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn default_label(scenario: Scenario) -> RegimeLabel {
    match scenario {
        Scenario::VacuumZeroT => RegimeLabel::Rho4,
        Scenario::QedComparison => RegimeLabel::QedComparison,
        _ => RegimeLabel::Unlabeled,
    }
}

fn run_modes(cfg: &RunConfig, args: &RunArgs) -> Result<ExitCode, CoreError> {
    let grid = log_grid(cfg.rho_min, cfg.rho_max, cfg.points_per_decade)?;
    let rows: Vec<_> = grid
        .par_iter()
        .map(|&rho| (rho, resonance_modes(rho, &cfg.atom, &cfg.medium)))
        .collect();
    let mut failed = false;
    let text = match args.format {
        Format::Csv => {
            let mut s = String::from(
                "rho_cm,omega_plus_perp,omega_minus_perp,omega_plus_par,omega_minus_par\n",
            );
            for (rho, m) in &rows {
                match m {
                    Ok(m) => s.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt_g17(*rho),
                        fmt_g17(m.perp.omega_plus),
                        fmt_g17(m.perp.omega_minus),
                        fmt_g17(m.par.omega_plus),
                        fmt_g17(m.par.omega_minus)
                    )),
                    Err(_) => {
                        failed = true;
                        s.push_str(&format!("{},nan,nan,nan,nan\n", fmt_g17(*rho)));
                    }
                }
            }
            s
        }
        Format::Json => {
            let ok: Vec<_> = rows
                .iter()
                .filter_map(|(_, m)| m.as_ref().ok())
                .collect();
            failed = ok.len() != rows.len();
            let mut s = serde_json::to_string_pretty(&ok)
                .map_err(|e| CoreError::Usage(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    write_or_print(args.out.as_deref(), &text)?;
    Ok(if failed {
        eprintln!("resonance: some separations have no weak-coupling mode solution");
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_media_report(cfg: &RunConfig, args: &RunArgs) -> Result<ExitCode, CoreError> {
    let params = cfg.electrolyte.as_ref().ok_or_else(|| {
        CoreError::config(0, "media-report needs an [electrolyte] section".to_string())
    })?;
    let report = frequency_scale_report(params)?;
    let kappa = debye_kappa(params)?;
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "xi_1_rad_s": report.xi_1,
                "omega_plasma_ionic_rad_s": report.omega_plasma_ionic,
                "ratio_xi1_over_omega_p": report.ratio,
                "debye_kappa_cm_inv": kappa,
                "debye_length_nm": if kappa > 0.0 { cm_to_nm(1.0 / kappa) } else { f64::INFINITY },
            }))
            .map_err(|e| CoreError::Usage(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = format!(
                "xi_1_rad_s = {:.6e}\nomega_plasma_ionic_rad_s = {:.6e}\nratio_xi1_over_omega_p = {:.6e}\n",
                report.xi_1, report.omega_plasma_ionic, report.ratio
            );
            if kappa > 0.0 {
                s.push_str(&format!(
                    "debye_kappa_cm_inv = {:.6e}\ndebye_length_nm = {:.6}\n",
                    kappa,
                    cm_to_nm(1.0 / kappa)
                ));
            } else {
                s.push_str("debye_kappa_cm_inv = 0\ndebye_length_nm = inf\n");
            }
            s
        }
    };
    write_or_print(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run_compare(cfg: &RunConfig, args: &RunArgs) -> Result<ExitCode, CoreError> {
    let grid = log_grid(cfg.rho_min, cfg.rho_max, cfg.points_per_decade)?;
    let spec = quad_spec(cfg);
    let alpha0_static = cfg.atom.alpha_static();
    let omega_p = match &cfg.medium {
        resonance_core::media::MediumModel::DaviesNinham { omega_p, .. } => Some(*omega_p),
        _ => None,
    };
    let rows: Vec<(f64, PointFlag, f64, f64)> = grid
        .par_iter()
        .map(|&rho| {
            let (u, flag) = scan_point(cfg, rho, &spec);
            let small = small_rho_asymptote(
                rho,
                &cfg.atom,
                cfg.medium.eps_background(),
                &spec,
                omega_p,
            )
            .map(|a| a.u)
            .unwrap_or(f64::NAN);
            let large = large_rho_asymptote(rho, alpha0_static, &cfg.medium).unwrap_or(f64::NAN);
            (u, flag, small, large)
        })
        .collect();

    let n = grid.len();
    let full = EnergyCurve::new(
        grid.clone(),
        rows.iter().map(|r| r.0).collect(),
        vec![RegimeLabel::Unlabeled; n],
        rows.iter().map(|r| r.1).collect(),
        provenance(cfg, "compare-asymptotes"),
    )?;

    let mut text = String::from("rho_cm,U_full_erg,U_small_asym_erg,U_large_asym_erg\n");
    for (rho, row) in grid.iter().zip(&rows) {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_g17(*rho),
            fmt_g17(row.0),
            fmt_g17(row.2),
            fmt_g17(row.3)
        ));
    }
    write_or_print(args.out.as_deref(), &text)?;

    let mut summary = String::new();
    for (name, values) in [
        ("small_rho", rows.iter().map(|r| r.2).collect::<Vec<_>>()),
        ("large_rho", rows.iter().map(|r| r.3).collect::<Vec<_>>()),
    ] {
        if values.iter().any(|v| v.is_nan()) {
            continue;
        }
        let asym = EnergyCurve::new(
            grid.clone(),
            values,
            vec![RegimeLabel::Unlabeled; n],
            vec![PointFlag::Ok; n],
            Provenance::default(),
        )?;
        let dev = asymptote_deviation(&full, &asym)?;
        if let Some((lo, hi)) = dev.within_5pct {
            summary.push_str(&format!(
                "{name}_within_5pct_cm = [{}, {}]\n",
                fmt_g17(lo),
                fmt_g17(hi)
            ));
        } else {
            summary.push_str(&format!("{name}_within_5pct_cm = none\n"));
        }
    }
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    let any_failed = rows.iter().any(|r| r.1 == PointFlag::NotConverged);
    Ok(if any_failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}
