//! Evolution in a thermal environment with mean occupation `n`.
//!
//! Four backends produce the origin value `W(0,0,γt)`:
//!
//! * [`Backend::Analytic`]: closed forms for the single-photon excited
//!   coherent and thermal states, and for any other state the exact
//!   diagonal propagator ([`diagonal_origin_value`]).
//! * [`Backend::Lindblad`]: fourth-order integration of the master
//!   equation in a truncated Fock basis.
//! * [`Backend::Gaussian`]: the Ornstein-Uhlenbeck kernel of the
//!   Fokker-Planck equation applied to a sampled Wigner grid.
//! * [`Backend::Fd`]: explicit finite differences for the same equation.
//!
//! Time is always the dimensionless decay time `γt`.

mod analytic;
mod crossings;
mod fd;
mod gaussian;
mod lindblad;
mod roots;

use std::fmt;
use std::str::FromStr;

pub use analytic::{
    diagonal_origin_trajectory, diagonal_origin_value, ecs_origin_trajectory, ecs_origin_value,
    ets_origin_trajectory, ets_origin_value, threshold_tc, threshold_tc1,
};
pub use crossings::{
    classify_regime, classify_regime_with, origin_zero_crossings, origin_zero_crossings_with,
    Regime, Sign, ZeroCrossings, TOUCH_LIMIT, ZERO_TOL,
};
pub use fd::{fd_origin_trajectory, propagate_wigner_fd, FdOptions, FokkerPlanckFd};
pub use gaussian::{gaussian_origin_trajectory, gaussian_origin_value, propagate_wigner_gaussian};
pub use lindblad::{
    evolve_lindblad, headroom_dim, lindblad_origin_trajectory, LindbladOptions, LindbladSolver,
};
pub use roots::{
    initial_parity_norm_polynomial, initial_parity_polynomial, initial_parity_roots, ParityRoot,
    RootKind,
};

use crate::error::{Error, Result};
use crate::fock::{build_state_with, BuildOptions, Dim, StateSpec};
use crate::wigner::{wigner_grid, GridWindow};

/// Environment occupation `n` and decay time `γt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub n: f64,
    pub gamma_t: f64,
}

impl ChannelParams {
    pub fn new(n: f64, gamma_t: f64) -> Result<Self> {
        let p = Self { n, gamma_t };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n.is_finite() && self.n >= 0.0) {
            return Err(Error::Domain(format!("thermal occupation must be finite and >= 0, got {}", self.n)));
        }
        if !(self.gamma_t >= 0.0) {
            return Err(Error::Domain(format!("decay time must be >= 0, got {}", self.gamma_t)));
        }
        Ok(())
    }

    /// `exp(-γt)`, the squared contraction of phase space.
    pub fn contraction(&self) -> f64 {
        (-self.gamma_t).exp()
    }

    /// Variance parameter `(1 + 2n)(1 - exp(-γt))` of the propagator.
    pub fn spread(&self) -> f64 {
        (1.0 + 2.0 * self.n) * (-(-self.gamma_t).exp_m1())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Analytic,
    Lindblad,
    Gaussian,
    Fd,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Analytic, Backend::Lindblad, Backend::Gaussian, Backend::Fd];

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Lindblad => "lindblad",
            Backend::Gaussian => "gaussian",
            Backend::Fd => "fd",
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, Backend::Analytic)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Configuration(format!("unknown backend '{s}' (expected analytic, lindblad, gaussian or fd)")))
    }
}

/// `W(0,0)` sampled along a decay-time sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginTrajectory {
    pub times: Vec<f64>,
    pub w00: Vec<f64>,
    pub backend: Backend,
}

impl OriginTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Mean parity, `(pi/2) W(0,0)`.
    pub fn parity(&self) -> Vec<f64> {
        self.w00.iter().map(|w| w * std::f64::consts::FRAC_PI_2).collect()
    }

    pub fn max_deviation(&self, other: &OriginTrajectory) -> Result<f64> {
        if self.times.len() != other.times.len()
            || self.times.iter().zip(&other.times).any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(Error::Input("trajectories are sampled at different times".into()));
        }
        Ok(self
            .w00
            .iter()
            .zip(&other.w00)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Checks that decay times are finite, non-negative and strictly increasing.
pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::Input("empty decay-time sweep".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Input("decay times must be finite and >= 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("decay times must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` evenly spaced decay times on `[0, t_max]`.
pub fn linspace(t_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| t_max * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Knobs shared by [`origin_trajectory`] backends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOptions {
    pub build: BuildOptions,
    pub lindblad: LindbladOptions,
    pub fd: FdOptions,
    /// Largest grid spacing for the Gaussian-propagator backend.
    pub gaussian_spacing: f64,
    /// Largest grid spacing for the finite-difference backend.
    pub fd_spacing: f64,
    /// Combine finite-difference runs at `h` and `h/√2` to cancel the
    /// leading `h²` error.
    pub fd_extrapolate: bool,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            build: BuildOptions::default(),
            lindblad: LindbladOptions::default(),
            fd: FdOptions::default(),
            gaussian_spacing: 0.025,
            fd_spacing: 0.05,
            fd_extrapolate: true,
        }
    }
}

/// Origin trajectory of the state described by `spec` with the chosen
/// backend.
pub fn origin_trajectory(
    spec: &StateSpec,
    n: f64,
    times: &[f64],
    backend: Backend,
    opts: &TrajectoryOptions,
) -> Result<OriginTrajectory> {
    ChannelParams::new(n, 0.0)?;
    check_times(times)?;
    if let (Backend::Analytic, StateSpec::PhotonAdded { k: 1, base }) = (backend, spec) {
        match **base {
            StateSpec::Coherent { alpha } => return ecs_origin_trajectory(alpha, n, times),
            StateSpec::Thermal { nbar } => return ets_origin_trajectory(nbar, n, times),
            _ => {}
        }
    }
    let rho = build_state_with(spec, Dim::Auto, opts.build)?;
    match backend {
        Backend::Analytic => diagonal_origin_trajectory(&rho, n, times),
        Backend::Lindblad => lindblad_origin_trajectory(&rho, n, times, opts.lindblad),
        Backend::Gaussian => {
            let grid = wigner_grid(&rho, GridWindow::support(&rho, n, opts.gaussian_spacing))?;
            gaussian_origin_trajectory(&grid, n, times)
        }
        Backend::Fd => {
            let run = |spacing: f64| -> Result<(f64, OriginTrajectory)> {
                let grid = wigner_grid(&rho, GridWindow::support(&rho, n, spacing))?;
                let h = grid.window.dq();
                Ok((h, fd_origin_trajectory(&grid, n, times, opts.fd)?))
            };
            let (h1, coarse) = run(opts.fd_spacing)?;
            if !opts.fd_extrapolate {
                return Ok(coarse);
            }
            let (h2, mut fine) = run(opts.fd_spacing / std::f64::consts::SQRT_2)?;
            let (a, b) = (h1 * h1, h2 * h2);
            for (w, c) in fine.w00.iter_mut().zip(&coarse.w00) {
                *w = (a * *w - b * c) / (a - b);
            }
            Ok(fine)
        }
    }
}
