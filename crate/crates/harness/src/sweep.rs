//! Epsilon sweeps: run the kinetic solver to steady state along the
//! ladder, compare moments to the regime's fluid reference, fit a
//! log-log convergence order, and emit CSV + JSON reports.
//!
//! Determinism contract: report.csv is a pure function of the
//! configuration (fixed schema, fixed float formatting, no timing data).
//! Wall times appear only in report.json.

use std::path::{Path, PathBuf};
use std::time::Instant;

use kinlim_core::fluid::{euler_residual, solve_heat_diffusion, solve_stationary_nsf, solve_stationary_stokes};
use kinlim_core::kinetic_model::transport_coefficients;
use kinlim_core::moment_algebra::rational_to_f64;
use kinlim_core::quadrature::VelocityGrid;
use kinlim_core::solver::{KineticSolver, MomentFields, SolverConfig, SourceSpec};
use kinlim_core::spectral::{divergence, gradient, SpatialGrid, SpectralField};
use kinlim_core::{BgkOperator, Rational, RegimeClass};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;

pub const CSV_SCHEMA: &str = "kinlim-sweep-csv v1";

/// One ladder point. `u_error` / `theta_error` are relative errors
/// against the regime's reference state and are absent in the Euler
/// regime, where no reference state exists and the Euler residuals carry
/// the convergence signal instead.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub steps: usize,
    pub final_residual: f64,
    pub u_error: Option<f64>,
    pub theta_error: Option<f64>,
    pub boussinesq_residual: f64,
    pub div_u_residual: f64,
    pub euler_momentum_residual: f64,
    pub euler_heat_residual: f64,
    /// JSON only; never written to CSV.
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub regime: String,
    pub r: f64,
    pub q: f64,
    pub nu0: f64,
    pub kappa: f64,
    pub nu: f64,
    pub spatial_modes: usize,
    pub velocity_nodes: usize,
    pub amplitude: f64,
    pub dt_safety: f64,
    pub steady_tol: f64,
    pub include_gamma: bool,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of log(error) vs log(epsilon) for the primary
    /// metric (u_error, or the Euler momentum residual). Positive means
    /// the error shrinks with epsilon. Reported, not gated.
    pub fitted_order: Option<f64>,
    pub fitted_order_theta: Option<f64>,
}

fn regime_name(class: RegimeClass) -> &'static str {
    match class {
        RegimeClass::NavierStokesFourier => "navier-stokes-fourier",
        RegimeClass::Stokes => "stokes",
        RegimeClass::Euler => "euler",
        RegimeClass::OutOfScope => "out-of-scope",
    }
}

/// The reference fields a regime is compared against.
enum Reference {
    State {
        u: [SpectralField<f64>; 2],
        theta: SpectralField<f64>,
    },
    /// Euler: residual decay only.
    ResidualOnly,
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport, HarnessError> {
    let regime = cfg.validate(true)?;
    let grid = SpatialGrid::new(cfg.spatial_modes);
    let source = SourceSpec::single_mode(grid, cfg.amplitude);

    // Exact transport coefficients for this nu0.
    let nu0_rat = Rational::from_float(cfg.nu0)
        .ok_or_else(|| HarnessError::Config(format!("nu0 = {} is not finite", cfg.nu0)))?;
    let coeffs = transport_coefficients(&BgkOperator::new(nu0_rat)?.solve_hats())?;
    let kappa = rational_to_f64(&coeffs.kappa);
    let nu = rational_to_f64(&coeffs.nu);

    // Limit forcings: momentum a f as sampled; the heat balance carries
    // the factor 2/5 from the energy-flux moment chain.
    let f_ref = [
        SpectralField::from_physical(grid, &source.momentum()[0]),
        SpectralField::from_physical(grid, &source.momentum()[1]),
    ];
    let h_ref = SpectralField::from_physical(grid, source.heat()).scaled(2.0 / 5.0);

    let reference = match regime.class {
        RegimeClass::NavierStokesFourier => {
            let state = solve_stationary_nsf(&f_ref, &h_ref, nu, kappa, 1e-12)?;
            Reference::State {
                u: state.u,
                theta: state.theta,
            }
        }
        RegimeClass::Stokes => {
            let state = solve_stationary_stokes(&f_ref, nu)?;
            let theta = solve_heat_diffusion(&h_ref, kappa);
            Reference::State { u: state.u, theta }
        }
        RegimeClass::Euler => Reference::ResidualOnly,
        RegimeClass::OutOfScope => unreachable!("validated above"),
    };
    let floor = 1e-14;
    let (u_ref_norm, theta_ref_norm) = match &reference {
        Reference::State { u, theta } => (
            (u[0].l2_norm().powi(2) + u[1].l2_norm().powi(2)).sqrt(),
            theta.l2_norm(),
        ),
        Reference::ResidualOnly => (0.0, 0.0),
    };
    let zero_f = [SpectralField::zeros(grid), SpectralField::zeros(grid)];
    let zero_h = SpectralField::zeros(grid);

    let mut rows = Vec::with_capacity(cfg.epsilons.len());
    for &epsilon in &cfg.epsilons {
        let at = |source| HarnessError::SweepPoint { epsilon, source };
        let started = Instant::now();
        let velocity = VelocityGrid::build(cfg.velocity_nodes).map_err(at)?;
        let solver_cfg = SolverConfig {
            epsilon,
            regime,
            nu0: cfg.nu0,
            dt_safety: cfg.dt_safety,
            steady_tol: cfg.steady_tol,
            max_steps: cfg.max_steps,
            include_gamma: cfg.include_gamma,
        };
        let solver =
            KineticSolver::new(grid, velocity, solver_cfg, source.clone()).map_err(at)?;
        let mut g = solver.zero_field();
        let outcome = solver.run_to_steady(&mut g).map_err(at)?;
        let moments = solver.extract_moments(&g);
        let wall_time_s = started.elapsed().as_secs_f64();

        let fields = moment_fields_spectral(grid, &moments);
        let (div_u_residual, boussinesq_residual) = constraint_residuals(&fields);
        let (em, eh) = euler_residual(&fields.u, &fields.theta, &zero_f, &zero_h);

        let (u_error, theta_error) = match &reference {
            Reference::State { u, theta } => {
                let du = (fields.u[0].sub(&u[0]).l2_norm().powi(2)
                    + fields.u[1].sub(&u[1]).l2_norm().powi(2))
                .sqrt();
                let dtheta = fields.theta.sub(theta).l2_norm();
                (
                    Some(du / u_ref_norm.max(floor)),
                    Some(dtheta / theta_ref_norm.max(floor)),
                )
            }
            Reference::ResidualOnly => (None, None),
        };

        rows.push(SweepRow {
            epsilon,
            steps: outcome.steps,
            final_residual: outcome.residual,
            u_error,
            theta_error,
            boussinesq_residual,
            div_u_residual,
            euler_momentum_residual: em,
            euler_heat_residual: eh,
            wall_time_s,
        });
    }

    let primary: Vec<(f64, f64)> = rows
        .iter()
        .map(|row| {
            (
                row.epsilon,
                row.u_error.unwrap_or(row.euler_momentum_residual),
            )
        })
        .collect();
    let secondary: Vec<(f64, f64)> = rows
        .iter()
        .map(|row| {
            (
                row.epsilon,
                row.theta_error.unwrap_or(row.euler_heat_residual),
            )
        })
        .collect();

    Ok(SweepReport {
        schema_version: 1,
        regime: regime_name(regime.class).to_string(),
        r: cfg.r,
        q: cfg.q,
        nu0: cfg.nu0,
        kappa,
        nu,
        spatial_modes: cfg.spatial_modes,
        velocity_nodes: cfg.velocity_nodes,
        amplitude: cfg.amplitude,
        dt_safety: cfg.dt_safety,
        steady_tol: cfg.steady_tol,
        include_gamma: cfg.include_gamma,
        rows,
        fitted_order: fit_order(&primary),
        fitted_order_theta: fit_order(&secondary),
    })
}

/// Spectral views of the extracted moment fields.
pub struct MomentSpectral {
    pub rho: SpectralField<f64>,
    pub u: [SpectralField<f64>; 2],
    pub theta: SpectralField<f64>,
}

pub fn moment_fields_spectral(grid: SpatialGrid, m: &MomentFields<f64>) -> MomentSpectral {
    MomentSpectral {
        rho: SpectralField::from_physical(grid, &m.rho),
        u: [
            SpectralField::from_physical(grid, &m.u[0]),
            SpectralField::from_physical(grid, &m.u[1]),
        ],
        theta: SpectralField::from_physical(grid, &m.theta),
    }
}

/// (|div u|_2, |grad(rho + theta)|_2): the incompressibility and
/// Boussinesq constraints that must emerge as epsilon shrinks.
pub fn constraint_residuals(fields: &MomentSpectral) -> (f64, f64) {
    let div = divergence(&fields.u).l2_norm();
    let grad = gradient(&fields.rho.add(&fields.theta));
    let bous = (grad[0].l2_norm().powi(2) + grad[1].l2_norm().powi(2)).sqrt();
    (div, bous)
}

/// Least-squares slope of ln(err) vs ln(eps); None if any error is
/// non-positive or fewer than two points.
fn fit_order(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(_, e)| e <= 0.0) {
        return None;
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(eps, err) in points {
        let x = eps.ln();
        let y = err.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

/// Deterministic CSV rendering: schema comment, header row, one row per
/// ladder point. No timing data.
pub fn csv_string(report: &SweepReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {CSV_SCHEMA}\n"));
    out.push_str(&format!(
        "# regime={} r={} q={} nu0={} kappa={} nu={} M={} N={} amplitude={} dt_safety={} steady_tol={} include_gamma={}\n",
        report.regime,
        report.r,
        report.q,
        report.nu0,
        report.kappa,
        report.nu,
        report.spatial_modes,
        report.velocity_nodes,
        report.amplitude,
        report.dt_safety,
        report.steady_tol,
        report.include_gamma,
    ));
    out.push_str(
        "epsilon,steps,final_residual,u_error,theta_error,boussinesq_residual,div_u_residual,euler_momentum_residual,euler_heat_residual\n",
    );
    for row in &report.rows {
        out.push_str(&format!(
            "{:.12e},{},{:.12e},{},{},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            row.epsilon,
            row.steps,
            row.final_residual,
            fmt_opt(row.u_error),
            fmt_opt(row.theta_error),
            row.boussinesq_residual,
            row.div_u_residual,
            row.euler_momentum_residual,
            row.euler_heat_residual,
        ));
    }
    out
}

/// Write report.csv and report.json under `dir`.
pub fn write_reports(report: &SweepReport, dir: &Path) -> Result<(PathBuf, PathBuf), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::File {
        path: dir.to_path_buf(),
        source,
    })?;
    let csv_path = dir.join("report.csv");
    let json_path = dir.join("report.json");
    std::fs::write(&csv_path, csv_string(report)).map_err(|source| HarnessError::File {
        path: csv_path.clone(),
        source,
    })?;
    let json = serde_json::to_string_pretty(report)?;
    std::fs::write(&json_path, json + "\n").map_err(|source| HarnessError::File {
        path: json_path.clone(),
        source,
    })?;
    Ok((csv_path, json_path))
}

pub fn render_summary(report: &SweepReport) -> String {
    let mut out = format!(
        "sweep: regime = {} (r = {}, q = {}), kappa = {}, nu = {}\n",
        report.regime, report.r, report.q, report.kappa, report.nu
    );
    for row in &report.rows {
        out.push_str(&format!(
            "eps = {:<7} steps = {:<7} u_err = {:<12} theta_err = {:<12} div = {:.3e} bous = {:.3e} euler = ({:.3e}, {:.3e})\n",
            row.epsilon,
            row.steps,
            fmt_short(row.u_error),
            fmt_short(row.theta_error),
            row.div_u_residual,
            row.boussinesq_residual,
            row.euler_momentum_residual,
            row.euler_heat_residual,
        ));
    }
    if let Some(order) = report.fitted_order {
        out.push_str(&format!("fitted order (primary metric): {order:.3}\n"));
    }
    if let Some(order) = report.fitted_order_theta {
        out.push_str(&format!("fitted order (heat metric): {order:.3}\n"));
    }
    out
}

fn fmt_short(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into())
}
