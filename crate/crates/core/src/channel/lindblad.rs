//! Fixed-step RK4 integration of the thermal master equation
//!
//! `dρ/dγt = (n+1)/2 (2aρa† - a†aρ - ρa†a) + n/2 (2a†ρa - aa†ρ - ρaa†)`
//!
//! in a truncated Fock basis. The truncated `aa†` has a zero in its last
//! diagonal entry, which keeps the trace exact; the price is that population
//! cannot climb past the top level, so the top population is monitored.

use log::trace;
use num_complex::Complex64;

use super::{check_times, Backend, ChannelParams, OriginTrajectory};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladOptions {
    /// Largest step in `γt`.
    pub step: f64,
    /// Largest population allowed on the top basis state.
    pub tail_tol: f64,
    /// Largest allowed `|Tr ρ - 1|`.
    pub trace_tol: f64,
}

impl Default for LindbladOptions {
    fn default() -> Self {
        Self { step: 1e-3, tail_tol: 1e-7, trace_tol: 1e-8 }
    }
}

/// Basis size for heated evolution: `D + ceil(8 n γt_max) + 16`.
pub fn headroom_dim(dim: usize, n: f64, gamma_t_max: f64) -> usize {
    dim + (8.0 * n * gamma_t_max).ceil() as usize + 16
}

struct Liouvillian {
    dim: usize,
    n: f64,
    /// sqrt(m)
    root: Vec<f64>,
    /// Diagonal of the truncated `aa†`.
    aad: Vec<f64>,
}

impl Liouvillian {
    fn new(dim: usize, n: f64) -> Self {
        let root = (0..=dim).map(|m| (m as f64).sqrt()).collect();
        let aad = (0..dim)
            .map(|m| if m + 1 < dim { (m + 1) as f64 } else { 0.0 })
            .collect();
        Self { dim, n, root, aad }
    }

    fn apply(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        let down = 0.5 * (self.n + 1.0);
        let up = 0.5 * self.n;
        for m in 0..d {
            for k in 0..d {
                let r = rho[m * d + k];
                let mut v = -(down * (m + k) as f64 + up * (self.aad[m] + self.aad[k])) * r;
                if m + 1 < d && k + 1 < d {
                    v += 2.0 * down * self.root[m + 1] * self.root[k + 1] * rho[(m + 1) * d + k + 1];
                }
                if m > 0 && k > 0 {
                    v += 2.0 * up * self.root[m] * self.root[k] * rho[(m - 1) * d + k - 1];
                }
                out[m * d + k] = v;
            }
        }
    }

    /// Rough bound on the largest decay rate, used for the RK4 stability check.
    fn stiffness(&self) -> f64 {
        (2.0 * self.n + 1.0) * self.dim as f64
    }
}

/// Integrator state for one master-equation run.
pub struct LindbladSolver {
    rho: DensityMatrix,
    liouvillian: Liouvillian,
    time: f64,
    opts: LindbladOptions,
    buf: [Vec<Complex64>; 5],
}

impl LindbladSolver {
    /// Pads `rho0` with [`headroom_dim`] for a run up to `gamma_t_max`.
    pub fn new(rho0: &DensityMatrix, n: f64, gamma_t_max: f64, opts: LindbladOptions) -> Result<Self> {
        ChannelParams::new(n, gamma_t_max)?;
        if !(opts.step > 0.0) {
            return Err(Error::StepSize(format!("step must be positive, got {}", opts.step)));
        }
        let dim = headroom_dim(rho0.dim(), n, gamma_t_max);
        let liouvillian = Liouvillian::new(dim, n);
        if opts.step * liouvillian.stiffness() > 2.5 {
            return Err(Error::StepSize(format!(
                "step {} is unstable for dimension {dim} at n = {n}",
                opts.step
            )));
        }
        let zero = vec![Complex64::new(0.0, 0.0); dim * dim];
        Ok(Self {
            rho: rho0.padded(dim)?,
            liouvillian,
            time: 0.0,
            opts,
            buf: [zero.clone(), zero.clone(), zero.clone(), zero.clone(), zero],
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.rho
    }

    fn rk4_step(&mut self, h: f64) {
        let [k1, k2, k3, k4, tmp] = &mut self.buf;
        let y = self.rho.entries_mut();
        let l = &self.liouvillian;
        l.apply(y, k1);
        for i in 0..y.len() {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        l.apply(tmp, k2);
        for i in 0..y.len() {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        l.apply(tmp, k3);
        for i in 0..y.len() {
            tmp[i] = y[i] + h * k3[i];
        }
        l.apply(tmp, k4);
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    /// Integrates forward to `gamma_t` with equal steps no longer than the
    /// configured step.
    pub fn advance_to(&mut self, gamma_t: f64) -> Result<()> {
        if gamma_t < self.time {
            return Err(Error::Input(format!(
                "cannot integrate backwards from {} to {gamma_t}",
                self.time
            )));
        }
        let span = gamma_t - self.time;
        if span == 0.0 {
            return Ok(());
        }
        let steps = (span / self.opts.step - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let mut worst = 0.0f64;
        for _ in 0..steps {
            self.rk4_step(h);
            worst = worst.max(self.rho.symmetrize());
        }
        self.time = gamma_t;
        trace!("lindblad: γt={gamma_t:.6} steps={steps} max hermiticity correction {worst:e}");

        let drift = (self.rho.trace() - 1.0).abs();
        if drift > self.opts.trace_tol {
            return Err(Error::StepSize(format!(
                "trace drifted by {drift:e} at γt = {gamma_t}"
            )));
        }
        let top = self.rho.tail_population(1);
        if top > self.opts.tail_tol {
            return Err(Error::Truncation(format!(
                "population {top:e} reached the top of a {}-level basis at γt = {gamma_t}",
                self.rho.dim()
            )));
        }
        Ok(())
    }
}

/// `ρ(γt)` using `steps` equal RK4 steps, in the head-room basis.
pub fn evolve_lindblad(rho0: &DensityMatrix, params: ChannelParams, steps: usize) -> Result<DensityMatrix> {
    params.validate()?;
    if params.gamma_t == 0.0 {
        return rho0.padded(headroom_dim(rho0.dim(), params.n, 0.0));
    }
    if steps == 0 {
        return Err(Error::StepSize("at least one step is needed".into()));
    }
    let opts = LindbladOptions { step: params.gamma_t / steps as f64, ..Default::default() };
    let mut solver = LindbladSolver::new(rho0, params.n, params.gamma_t, opts)?;
    solver.advance_to(params.gamma_t)?;
    Ok(solver.rho)
}

pub fn lindblad_origin_trajectory(
    rho0: &DensityMatrix,
    n: f64,
    times: &[f64],
    opts: LindbladOptions,
) -> Result<OriginTrajectory> {
    check_times(times)?;
    let t_max = *times.last().expect("non-empty");
    let mut solver = LindbladSolver::new(rho0, n, t_max, opts)?;
    let mut w00 = Vec::with_capacity(times.len());
    for &t in times {
        solver.advance_to(t)?;
        w00.push(std::f64::consts::FRAC_2_PI * solver.state().mean_parity());
    }
    Ok(OriginTrajectory { times: times.to_vec(), w00, backend: Backend::Lindblad })
}
