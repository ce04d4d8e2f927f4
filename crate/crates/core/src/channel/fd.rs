//! Explicit finite differences for the Fokker-Planck equation
//!
//! `∂W/∂γt = ½(∂_q q + ∂_p p) W + (2n+1)/8 (∂²_q + ∂²_p) W`
//!
//! Heun's method in time, so the step error is `O(dt²) = O(h⁴)` and the
//! `h²` spatial error dominates cleanly. In space each axis uses the flux form
//! `∂_x [D M ∂_x (W / M)]` with `M = exp(-x² / 4D)` the thermal Gaussian and
//! `M` at half points taken as a geometric mean, so the discrete thermal
//! state is exactly stationary. Expanding the exponential weights to first
//! order gives centered drift plus the five-point Laplacian. Boundaries are
//! held at zero.

use rayon::prelude::*;

use super::{check_times, Backend, ChannelParams, OriginTrajectory};
use crate::error::{Error, Result};
use crate::wigner::WignerGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Time step as a fraction of `2 / c`, with `c` the largest diagonal
    /// coefficient of the spatial operator (`h² / (2 D)` without drift);
    /// explicit stability requires at most 0.5.
    pub dt_fraction: f64,
    /// Largest boundary magnitude accepted in the initial grid.
    pub boundary_tol: f64,
    /// Largest probability mass allowed to leave through the boundary.
    pub outflow_tol: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self { dt_fraction: 0.4, boundary_tol: 1e-10, outflow_tol: 1e-6 }
    }
}

/// Finite-difference state for one run.
pub struct FokkerPlanckFd {
    grid: WignerGrid,
    scratch: Vec<f64>,
    start: Vec<f64>,
    /// `(e^{a}, e^{-a})` at half points `i + ½` along q and p.
    q_weights: Vec<(f64, f64)>,
    p_weights: Vec<(f64, f64)>,
    diffusion: f64,
    dt: f64,
    time: f64,
    mass0: f64,
    outflow_tol: f64,
}

impl FokkerPlanckFd {
    pub fn new(grid0: &WignerGrid, n: f64, opts: FdOptions) -> Result<Self> {
        ChannelParams::new(n, 0.0)?;
        let w = grid0.window;
        w.validate()?;
        if w.nq < 3 || w.np < 3 {
            return Err(Error::Configuration("finite differences need at least 3 points per axis".into()));
        }
        let edge = grid0.boundary_values().fold(0.0f64, |m, v| m.max(v.abs()));
        if edge > opts.boundary_tol {
            return Err(Error::Window(format!(
                "initial grid reaches {edge:e} on its boundary (limit {:e})",
                opts.boundary_tol
            )));
        }
        if !(opts.dt_fraction > 0.0 && opts.dt_fraction <= 0.5) {
            return Err(Error::Configuration(format!(
                "time-step fraction {} violates the explicit stability limit 0.5",
                opts.dt_fraction
            )));
        }
        let diffusion = (2.0 * n + 1.0) / 8.0;
        let (dq, dp) = (w.dq(), w.dp());
        let weights = |count: usize, x: &dyn Fn(usize) -> f64, step: f64| -> Vec<(f64, f64)> {
            (0..count - 1)
                .map(|i| {
                    let a = 0.5 * (x(i) + x(i + 1)) * step / (4.0 * diffusion);
                    (a.exp(), (-a).exp())
                })
                .collect()
        };
        let q_weights = weights(w.nq, &|i| w.q(i), dq);
        let p_weights = weights(w.np, &|j| w.p(j), dp);
        // Largest diagonal coefficient; without drift it is 4D/h² and the
        // step reduces to `dt_fraction * h² / (2D)`.
        let worst = |ws: &[(f64, f64)]| ws.windows(2).map(|p| p[1].1 + p[0].0).fold(0.0, f64::max);
        let diag = diffusion * (worst(&q_weights) / (dq * dq) + worst(&p_weights) / (dp * dp));
        let dt = opts.dt_fraction * 2.0 / diag;
        let mut grid = grid0.clone();
        let (nq, np) = (w.nq, w.np);
        for i in 0..nq {
            for j in 0..np {
                if i == 0 || j == 0 || i == nq - 1 || j == np - 1 {
                    grid.values[i * np + j] = 0.0;
                }
            }
        }
        let mass0 = grid.riemann_sum();
        Ok(Self {
            scratch: vec![0.0; grid.values.len()],
            start: vec![0.0; grid.values.len()],
            grid,
            q_weights,
            p_weights,
            diffusion,
            dt,
            time: 0.0,
            mass0,
            outflow_tol: opts.outflow_tol,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn time_step(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &WignerGrid {
        &self.grid
    }

    fn euler(&mut self, dt: f64) {
        let w = self.grid.window;
        let (nq, np) = (w.nq, w.np);
        let cq = dt * self.diffusion / (w.dq() * w.dq());
        let cp = dt * self.diffusion / (w.dp() * w.dp());
        let (qw, pw) = (&self.q_weights, &self.p_weights);
        let v = &self.grid.values;
        self.scratch
            .par_chunks_mut(np)
            .enumerate()
            .for_each(|(i, out)| {
                if i == 0 || i == nq - 1 {
                    out.fill(0.0);
                    return;
                }
                out[0] = 0.0;
                out[np - 1] = 0.0;
                let (up, mid, down) = (&v[(i - 1) * np..i * np], &v[i * np..(i + 1) * np], &v[(i + 1) * np..(i + 2) * np]);
                let ((qa, qb), (qc, qd)) = (qw[i - 1], qw[i]);
                for j in 1..np - 1 {
                    let c = mid[j];
                    let ((pa, pb), (pc, pd)) = (pw[j - 1], pw[j]);
                    let flux_q = (down[j] * qc - c * qd) - (c * qa - up[j] * qb);
                    let flux_p = (mid[j + 1] * pc - c * pd) - (c * pa - mid[j - 1] * pb);
                    out[j] = c + cq * flux_q + cp * flux_p;
                }
            });
        std::mem::swap(&mut self.grid.values, &mut self.scratch);
    }

    /// Heun step as the average of the start and two chained Euler steps.
    fn step(&mut self, dt: f64) {
        self.start.copy_from_slice(&self.grid.values);
        self.euler(dt);
        self.euler(dt);
        self.grid
            .values
            .par_iter_mut()
            .zip(self.start.par_iter())
            .for_each(|(w, s)| *w = 0.5 * (*w + s));
    }

    /// Steps forward to `gamma_t`; the last step is shortened to land on it.
    pub fn advance_to(&mut self, gamma_t: f64) -> Result<()> {
        if gamma_t < self.time {
            return Err(Error::Input(format!("cannot step backwards from {} to {gamma_t}", self.time)));
        }
        while gamma_t - self.time > 1e-14 {
            let dt = self.dt.min(gamma_t - self.time);
            self.step(dt);
            self.time += dt;
        }
        self.time = gamma_t;
        let lost = (self.grid.riemann_sum() - self.mass0).abs();
        if lost > self.outflow_tol {
            return Err(Error::Window(format!(
                "{lost:e} of probability mass left through the boundary by γt = {gamma_t}"
            )));
        }
        Ok(())
    }
}

pub fn propagate_wigner_fd(grid0: &WignerGrid, params: ChannelParams, opts: FdOptions) -> Result<WignerGrid> {
    params.validate()?;
    if !params.gamma_t.is_finite() {
        return Err(Error::Configuration("finite differences need a finite decay time".into()));
    }
    let mut fd = FokkerPlanckFd::new(grid0, params.n, opts)?;
    fd.advance_to(params.gamma_t)?;
    Ok(fd.grid)
}

pub fn fd_origin_trajectory(grid0: &WignerGrid, n: f64, times: &[f64], opts: FdOptions) -> Result<OriginTrajectory> {
    check_times(times)?;
    if grid0.window.origin_index().is_none() {
        return Err(Error::Window("grid does not contain the origin".into()));
    }
    let mut fd = FokkerPlanckFd::new(grid0, n, opts)?;
    let mut w00 = Vec::with_capacity(times.len());
    for &t in times {
        fd.advance_to(t)?;
        w00.push(fd.grid.origin_value().expect("origin checked above"));
    }
    Ok(OriginTrajectory { times: times.to_vec(), w00, backend: Backend::Fd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockState;
    use crate::wigner::{wigner_grid, GridWindow};
    use std::f64::consts::PI;

    #[test]
    fn zero_temperature_vacuum_is_fixed() {
        let rho = FockState::fock(0, 1).unwrap().to_density();
        let g0 = wigner_grid(&rho, GridWindow::support(&rho, 0.0, 0.05)).unwrap();
        let g = propagate_wigner_fd(&g0, ChannelParams::new(0.0, 1.0).unwrap(), FdOptions::default()).unwrap();
        let dev = g.values.iter().zip(&g0.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-6, "{dev}");
    }

    #[test]
    fn single_photon_origin_vanishes_at_ln2() {
        let rho = FockState::fock(1, 2).unwrap().to_density();
        let g0 = wigner_grid(&rho, GridWindow::support(&rho, 0.0, 0.05)).unwrap();
        let g = propagate_wigner_fd(&g0, ChannelParams::new(0.0, 2f64.ln()).unwrap(), FdOptions::default()).unwrap();
        assert!(g.origin_value().unwrap().abs() < 2e-3);
        assert!((g.riemann_sum() - 1.0).abs() < 1e-6);
        assert!(g.min() >= -2.0 / PI - 1e-9);
    }

    #[test]
    fn cfl_violation_is_a_configuration_error() {
        let rho = FockState::fock(0, 1).unwrap().to_density();
        let g0 = wigner_grid(&rho, GridWindow::support(&rho, 0.0, 0.05)).unwrap();
        let opts = FdOptions { dt_fraction: 0.6, ..Default::default() };
        assert!(matches!(FokkerPlanckFd::new(&g0, 0.0, opts), Err(Error::Configuration(_))));
    }

    #[test]
    fn narrow_window_is_a_window_error() {
        let rho = FockState::fock(0, 1).unwrap().to_density();
        let g0 = wigner_grid(&rho, GridWindow::square(2.0, 41)).unwrap();
        assert!(matches!(FokkerPlanckFd::new(&g0, 0.0, FdOptions::default()), Err(Error::Window(_))));
        // Starts inside tolerance, but heating pushes mass past the edge.
        let g0 = wigner_grid(&rho, GridWindow::square(3.6, 73)).unwrap();
        let opts = FdOptions { boundary_tol: 1e-9, ..Default::default() };
        let mut fd = FokkerPlanckFd::new(&g0, 3.0, opts).unwrap();
        assert!(matches!(fd.advance_to(2.0), Err(Error::Window(_))));
    }
}
