//! Resonant Jaynes-Cummings probing of a field and Fresnel reconstruction of
//! its mean parity from the atomic ground-state probability.
//!
//! The atom starts excited. After interaction time `tau` the ground-state
//! probability is `P_g(tau) = Σ_l ρ_ll sin²(tau √(l+1))`, so the trace only
//! sees the photon-number distribution. The reconstruction is
//!
//! `<Π> = 4/(π √i) ∫_0^∞ e^{i tau²/π} [P_g(tau) - 1/2] d tau`
//!
//! with `√i = e^{iπ/4}`. The constant usually quoted for this identity,
//! `4/√i`, returns `π <Π>`; [`Prefactor::AsPrinted`] keeps it available
//! for comparison.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct RabiTrace {
    pub taus: Vec<f64>,
    pub p_ground: Vec<f64>,
    pub p_excited: Vec<f64>,
}

impl RabiTrace {
    /// Builds a trace from measured or imported columns; `p_excited` is
    /// taken as given.
    pub fn from_columns(taus: Vec<f64>, p_ground: Vec<f64>, p_excited: Vec<f64>) -> Result<Self> {
        if taus.len() != p_ground.len() || taus.len() != p_excited.len() {
            return Err(Error::Input(format!(
                "trace columns have different lengths: {}, {}, {}",
                taus.len(),
                p_ground.len(),
                p_excited.len()
            )));
        }
        if taus.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("trace times must be strictly increasing".into()));
        }
        Ok(RabiTrace { taus, p_ground, p_excited })
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// `P_g - P_e`, the inversion seen as the mean parity of the atom.
    pub fn atomic_parity(&self) -> Vec<f64> {
        self.p_ground.iter().zip(&self.p_excited).map(|(g, e)| g - e).collect()
    }
}

/// Uniform times from `0` to exactly `tau_max`, spaced by at most `dtau`.
pub fn uniform_taus(tau_max: f64, dtau: f64) -> Vec<f64> {
    let steps = ((tau_max / dtau) - 1e-9).ceil().max(1.0) as usize;
    let h = tau_max / steps as f64;
    (0..=steps).map(|i| i as f64 * h).collect()
}

fn active_populations(rho: &DensityMatrix) -> Vec<(f64, f64)> {
    rho.populations()
        .into_iter()
        .enumerate()
        .filter(|(_, p)| *p != 0.0)
        .map(|(l, p)| (((l + 1) as f64).sqrt(), p))
        .collect()
}

pub fn jc_trace(rho: &DensityMatrix, taus: &[f64]) -> RabiTrace {
    let pops = active_populations(rho);
    let p_ground: Vec<f64> = taus
        .par_iter()
        .map(|&tau| {
            let s: f64 = pops.iter().map(|(w, p)| p * (tau * w).sin().powi(2)).sum();
            s.clamp(0.0, 1.0)
        })
        .collect();
    let p_excited = p_ground.iter().map(|g| 1.0 - g).collect();
    RabiTrace { taus: taus.to_vec(), p_ground, p_excited }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefactor {
    /// `4/(π √i)`, which returns the mean parity.
    Corrected,
    /// `4/√i`, which returns `π` times the mean parity.
    AsPrinted,
}

impl Prefactor {
    pub fn value(&self) -> Complex64 {
        let inv_sqrt_i = Complex64::from_polar(1.0, -FRAC_PI_4);
        match self {
            Prefactor::Corrected => inv_sqrt_i * (4.0 / PI),
            Prefactor::AsPrinted => inv_sqrt_i * 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelOptions {
    pub tau_max: f64,
    pub dtau: f64,
    /// Width of an optional Gaussian taper `exp(-(tau/width)²)`.
    pub taper: Option<f64>,
    pub imag_tol: f64,
    pub prefactor: Prefactor,
}

impl Default for FresnelOptions {
    fn default() -> Self {
        FresnelOptions {
            tau_max: 60.0 * PI,
            dtau: 0.002,
            taper: None,
            imag_tol: 1e-2,
            prefactor: Prefactor::Corrected,
        }
    }
}

impl FresnelOptions {
    pub fn taus(&self) -> Vec<f64> {
        uniform_taus(self.tau_max, self.dtau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub parity: f64,
    pub imag_residue: f64,
}

/// Trapezoid estimate of the complex Fresnel integral for a uniformly
/// sampled trace starting at zero.
pub fn fresnel_integral(trace: &RabiTrace, taper: Option<f64>) -> Result<Complex64> {
    let t = &trace.taus;
    if t.len() < 3 {
        return Err(Error::Input("trace needs at least three samples".into()));
    }
    if t[0].abs() > 1e-12 {
        return Err(Error::Input(format!("trace must start at tau = 0, starts at {}", t[0])));
    }
    let h = t[1] - t[0];
    if h <= 0.0 {
        return Err(Error::Input("trace times must increase".into()));
    }
    if let Some(i) = t.windows(2).position(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0)) {
        return Err(Error::Input(format!("trace sampling is not uniform near tau = {}", t[i])));
    }
    if let Some(w) = taper {
        if !(w > 0.0) {
            return Err(Error::Input(format!("taper width must be positive, got {w}")));
        }
    }
    let last = t.len() - 1;
    let sum: Complex64 = (0..t.len())
        .into_par_iter()
        .map(|i| {
            let tau = t[i];
            let mut f = Complex64::from_polar(trace.p_ground[i] - 0.5, tau * tau / PI);
            if let Some(w) = taper {
                f *= (-(tau / w).powi(2)).exp();
            }
            if i == 0 || i == last {
                f * 0.5
            } else {
                f
            }
        })
        .sum();
    Ok(sum * h)
}

/// Mean parity recovered from a Rabi trace.
pub fn fresnel_reconstruct(trace: &RabiTrace, opts: &FresnelOptions) -> Result<Reconstruction> {
    let value = opts.prefactor.value() * fresnel_integral(trace, opts.taper)?;
    let scale = match opts.prefactor {
        Prefactor::Corrected => 1.0,
        Prefactor::AsPrinted => PI,
    };
    if value.im.abs() > opts.imag_tol * scale {
        return Err(Error::Convergence(format!(
            "imaginary residue {:.3e} exceeds {:.1e}; increase tau_max (currently {})",
            value.im,
            opts.imag_tol * scale,
            trace.taus.last().copied().unwrap_or(0.0)
        )));
    }
    Ok(Reconstruction { parity: value.re, imag_residue: value.im })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub tau_max: f64,
    pub reconstructed: f64,
    pub imag_residue: f64,
    pub error: f64,
}

/// Reconstruction error against the direct parity for each `tau_max`; the
/// imaginary residue is reported rather than checked.
pub fn reconstruction_error_scan(rho: &DensityMatrix, tau_maxes: &[f64], dtau: f64) -> Result<Vec<ScanRow>> {
    let exact = rho.mean_parity();
    tau_maxes
        .iter()
        .map(|&tau_max| {
            let trace = jc_trace(rho, &uniform_taus(tau_max, dtau));
            let value = Prefactor::Corrected.value() * fresnel_integral(&trace, None)?;
            Ok(ScanRow { tau_max, reconstructed: value.re, imag_residue: value.im, error: (value.re - exact).abs() })
        })
        .collect()
}
