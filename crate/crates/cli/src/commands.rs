use std::f64::consts::PI;

use rayon::prelude::*;

use photonparity::channel::{
    classify_regime, classify_regime_with, diagonal_origin_value, ecs_origin_value, ets_origin_value,
    initial_parity_roots, origin_trajectory, origin_zero_crossings, origin_zero_crossings_with,
    propagate_wigner_fd, propagate_wigner_gaussian, threshold_tc, threshold_tc1, Backend, ChannelParams,
    LindbladSolver, OriginTrajectory, TrajectoryOptions, ZeroCrossings,
};
use photonparity::fock::{build_state_with, BuildOptions, DensityMatrix, Dim, StateSpec};
use photonparity::rabi::{fresnel_reconstruct, jc_trace, uniform_taus, FresnelOptions, RabiTrace};
use photonparity::wigner::{wigner_cross_section, wigner_grid, wigner_point, GridWindow, PhasePoint};

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::output::{num, read_trace, Report, Table};

fn build_options(s: &Settings) -> BuildOptions {
    BuildOptions { dim_cap: s.dim_cap, ..Default::default() }
}

fn trajectory_options(s: &Settings) -> TrajectoryOptions {
    TrajectoryOptions { build: build_options(s), ..Default::default() }
}

fn build(s: &Settings, spec: &StateSpec) -> Result<DensityMatrix> {
    Ok(build_state_with(spec, Dim::Auto, build_options(s))?)
}

/// Exact `W(0,0,γt)` as a function, for bisection.
pub fn analytic_origin_fn(spec: &StateSpec, n: f64, opts: BuildOptions) -> Result<Box<dyn Fn(f64) -> f64 + Sync>> {
    if let StateSpec::PhotonAdded { k: 1, base } = spec {
        match **base {
            StateSpec::Coherent { alpha } => {
                let a = alpha.norm();
                return Ok(Box::new(move |t| ecs_origin_value(a, n, t)));
            }
            StateSpec::Thermal { nbar } => return Ok(Box::new(move |t| ets_origin_value(nbar, n, t))),
            _ => {}
        }
    }
    let pops = build_state_with(spec, Dim::Auto, opts)?.populations();
    Ok(Box::new(move |t| diagonal_origin_value(&pops, n, t)))
}

fn list(values: impl IntoIterator<Item = f64>) -> String {
    let v: Vec<String> = values.into_iter().map(num).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

pub fn cmd_state(s: &Settings) -> Result<Report> {
    let spec = s.require_state()?;
    let rho = build(s, spec)?;
    let mut r = Report::default();
    r.push("state", spec);
    r.push("dimension", rho.dim());
    r.push("populations", list(rho.populations()));
    r.push("mean_photon_number", num(rho.mean_photon_number()));
    r.push("mean_parity", num(rho.mean_parity()));
    r.push("w00", num(wigner_point(&rho, PhasePoint::ORIGIN)?));
    Ok(r)
}

/// Crossings, touches and regime of one trajectory.
pub struct Classification {
    pub crossings: ZeroCrossings,
    pub regime: String,
}

pub fn classify(spec: &StateSpec, s: &Settings, traj: &OriginTrajectory) -> Result<Classification> {
    let tc = threshold_tc(s.n);
    let covers = traj.times.first() == Some(&0.0) && traj.times.last().is_some_and(|t| *t >= tc);
    if traj.backend.is_analytic() {
        let f = analytic_origin_fn(spec, s.n, build_options(s))?;
        let crossings = origin_zero_crossings_with(traj, &f);
        let regime = if covers { classify_regime_with(&f, &crossings, tc, 1e-6).label() } else { "undetermined".into() };
        Ok(Classification { crossings, regime })
    } else {
        let crossings = origin_zero_crossings(traj);
        let regime = if covers { classify_regime(traj, &crossings, tc, 5e-3).label() } else { "undetermined".into() };
        Ok(Classification { crossings, regime })
    }
}

fn fd_involved(a: Backend, b: Backend) -> bool {
    a == Backend::Fd || b == Backend::Fd
}

pub struct EvolveOutput {
    pub table: Table,
    /// Set when cross-check mode exceeded its tolerance; the table is still
    /// written.
    pub failure: Option<CliError>,
}

pub fn cmd_parity_evolve(s: &Settings) -> Result<EvolveOutput> {
    let spec = s.require_state()?;
    let opts = trajectory_options(s);
    let traj = origin_trajectory(spec, s.n, &s.times, s.backend, &opts)?;
    let check = match s.cross_check {
        Some(b) => Some(origin_trajectory(spec, s.n, &s.times, b, &opts)?),
        None => None,
    };
    let mut header = vec!["gamma_t", "w00", "backend"];
    if check.is_some() {
        header.extend(["w00_check", "backend_check"]);
    }
    let mut table = Table::new("parity-evolve", &s.raw, &header);
    let c = classify(spec, s, &traj)?;
    table.note("threshold_tc", num(threshold_tc(s.n)));
    table.note("crossings", list(c.crossings.crossings.iter().copied()));
    table.note("touches", list(c.crossings.touches.iter().copied()));
    table.note("regime", &c.regime);
    let mut failure = None;
    if let (Some(other), Some(b)) = (&check, s.cross_check) {
        let dev = traj.max_deviation(other)?;
        let tol = s.tolerance.unwrap_or(if fd_involved(s.backend, b) { 1e-3 } else { 1e-6 });
        table.note("max_deviation", num(dev));
        table.note("tolerance", num(tol));
        if !(dev <= tol) {
            failure = Some(CliError::CrossCheck {
                a: s.backend.to_string(),
                b: b.to_string(),
                deviation: dev,
                tolerance: tol,
            });
        }
    }
    for i in 0..traj.len() {
        let mut row = vec![num(traj.times[i]), num(traj.w00[i]), s.backend.to_string()];
        if let (Some(other), Some(b)) = (&check, s.cross_check) {
            row.push(num(other.w00[i]));
            row.push(b.to_string());
        }
        table.rows.push(row);
    }
    Ok(EvolveOutput { table, failure })
}

pub fn cmd_surface(s: &Settings) -> Result<Table> {
    let opts = trajectory_options(s);
    let trajectories: Vec<OriginTrajectory> = s
        .etas
        .par_iter()
        .map(|&eta| origin_trajectory(&StateSpec::ebs(s.k, eta, s.m), s.n, &s.times, s.backend, &opts))
        .collect::<photonparity::Result<_>>()?;
    let mut table = Table::new("surface", &s.raw, &["eta", "gamma_t", "w00"]);
    table.note("family", format!("ebs k={} M={}", s.k, s.m));
    table.note("threshold_tc", num(threshold_tc(s.n)));
    for (eta, traj) in s.etas.iter().zip(&trajectories) {
        for (t, w) in traj.times.iter().zip(&traj.w00) {
            table.rows.push(vec![num(*eta), num(*t), num(*w)]);
        }
    }
    Ok(table)
}

pub fn cmd_wigner_slice(s: &Settings) -> Result<Table> {
    let spec = s.require_state()?;
    let rho = build(s, spec)?;
    let mut table = Table::new("wigner-slice", &s.raw, &["gamma_t", "q", "w"]);
    let t_max = s.times.last().copied().unwrap_or(0.0);
    match s.backend {
        Backend::Analytic | Backend::Lindblad => {
            // The state is evolved in the Fock basis and the line evaluated
            // exactly from it.
            let qs: Vec<f64> = (0..s.q_points)
                .map(|i| -s.q_max + 2.0 * s.q_max * i as f64 / (s.q_points.max(2) - 1) as f64)
                .collect();
            let mut solver = LindbladSolver::new(&rho, s.n, t_max, Default::default())?;
            for &t in &s.times {
                solver.advance_to(t)?;
                let ws = wigner_cross_section(solver.state(), &qs)?;
                for (q, w) in qs.iter().zip(ws) {
                    table.rows.push(vec![num(t), num(*q), num(w)]);
                }
            }
        }
        Backend::Gaussian | Backend::Fd => {
            let opts = TrajectoryOptions::default();
            let spacing = if s.backend == Backend::Fd { opts.fd_spacing } else { opts.gaussian_spacing };
            let grid0 = wigner_grid(&rho, GridWindow::support(&rho, s.n, spacing))?;
            for &t in &s.times {
                let g = if t == 0.0 {
                    grid0.clone()
                } else {
                    let p = ChannelParams::new(s.n, t)?;
                    if s.backend == Backend::Fd {
                        propagate_wigner_fd(&grid0, p, opts.fd)?
                    } else {
                        propagate_wigner_gaussian(&grid0, p)?
                    }
                };
                for (q, w) in g.cross_section_p0() {
                    if q.abs() <= s.q_max + 1e-12 {
                        table.rows.push(vec![num(t), num(q), num(w)]);
                    }
                }
            }
        }
    }
    Ok(table)
}

pub fn cmd_thresholds(s: &Settings) -> Result<Report> {
    let spec = s.require_state()?;
    let tc = threshold_tc(s.n);
    let mut r = Report::default();
    r.push("state", spec);
    r.push("n", num(s.n));
    r.push("threshold_tc", num(tc));
    if let StateSpec::PhotonAdded { k: 1, base } = spec {
        if let StateSpec::Coherent { alpha } = **base {
            match threshold_tc1(alpha.norm(), s.n) {
                Ok(t) => r.push("threshold_tc1", num(t)),
                Err(_) => r.push("threshold_tc1", "none (|alpha| < 1)"),
            }
        }
    }
    let times: Vec<f64> = (0..=2000).map(|i| 2.0 * tc * i as f64 / 2000.0).collect();
    let traj = origin_trajectory(spec, s.n, &times, s.backend, &trajectory_options(s))?;
    let c = classify(spec, s, &traj)?;
    r.push("crossings", list(c.crossings.crossings.iter().copied()));
    r.push("touches", list(c.crossings.touches.iter().copied()));
    r.push("last_crossing", c.crossings.last_crossing().map_or("none".into(), num));
    r.push("regime", c.regime);
    if let StateSpec::PhotonAdded { k, base } = spec {
        if let StateSpec::Binomial { m, .. } = **base {
            let roots = initial_parity_roots(*k, m)?;
            let text: Vec<String> = roots
                .iter()
                .map(|root| format!("{} ({}, multiplicity {})", num(root.eta), root.kind.name(), root.multiplicity))
                .collect();
            r.push("initial_parity_roots_eta", if text.is_empty() { "none".into() } else { text.join("; ") });
        }
    }
    Ok(r)
}

pub fn cmd_rabi(s: &Settings) -> Result<Table> {
    let rho = match &s.state {
        Some(spec) => Some(build(s, spec)?),
        None => None,
    };
    let trace: RabiTrace = match (&s.raw.trace_in, &rho) {
        (Some(path), _) => read_trace(path)?,
        (None, Some(rho)) => jc_trace(rho, &uniform_taus(s.tau_max, s.dtau)),
        (None, None) => return Err(CliError::Config("rabi needs --state or --trace-in".into())),
    };
    let opts = FresnelOptions {
        tau_max: s.tau_max,
        dtau: s.dtau,
        taper: s.taper,
        prefactor: s.prefactor,
        ..Default::default()
    };
    let rec = fresnel_reconstruct(&trace, &opts)?;
    let mut table = Table::new("rabi", &s.raw, &["tau", "p_ground", "p_excited"]);
    table.note("reconstructed_parity", num(rec.parity));
    table.note("imag_residue", num(rec.imag_residue));
    table.note("reconstructed_w00", num(2.0 / PI * rec.parity));
    if let Some(rho) = &rho {
        let exact = rho.mean_parity();
        table.note("oracle_parity", num(exact));
        table.note("error", num((rec.parity - exact).abs()));
    }
    for i in 0..trace.len() {
        table.rows.push(vec![num(trace.taus[i]), num(trace.p_ground[i]), num(trace.p_excited[i])]);
    }
    Ok(table)
}
