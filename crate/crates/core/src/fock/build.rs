use num_complex::Complex64;

use super::{DensityMatrix, FockState, StateSpec};
use crate::error::{Error, Result};
use crate::special::{factorial, hypergeom_2f1_terminating, rising_from};

/// Default bound on the population a constructor may neglect.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Default largest basis a constructor may auto-size to.
pub const DEFAULT_DIM_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub tail_tol: f64,
    pub dim_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { tail_tol: DEFAULT_TAIL_TOL, dim_cap: DEFAULT_DIM_CAP }
    }
}

/// Unnormalized state content on `0..len` before truncation.
enum Raw {
    Pure(Vec<Complex64>),
    Mixed(Vec<f64>),
}

impl Raw {
    fn weights(&self) -> Vec<f64> {
        match self {
            Raw::Pure(a) => a.iter().map(|c| c.norm_sqr()).collect(),
            Raw::Mixed(p) => p.clone(),
        }
    }
}

/// Exact support size when the state has finitely many Fock components.
fn finite_support(spec: &StateSpec) -> Option<usize> {
    match spec {
        StateSpec::Fock { l } => Some(l + 1),
        StateSpec::Binomial { m, .. } => Some(m + 1),
        StateSpec::Coherent { alpha } if alpha.norm_sqr() == 0.0 => Some(1),
        StateSpec::Thermal { nbar } if *nbar == 0.0 => Some(1),
        StateSpec::PhotonAdded { k, base } => finite_support(base).map(|s| s + k),
        _ => None,
    }
}

fn raw_base(spec: &StateSpec, len: usize) -> Result<Raw> {
    let zero = Complex64::new(0.0, 0.0);
    Ok(match spec {
        StateSpec::Fock { l } => {
            let mut a = vec![zero; len.max(l + 1)];
            a[*l] = Complex64::new(1.0, 0.0);
            Raw::Pure(a)
        }
        StateSpec::Coherent { alpha } => {
            // Log-space magnitudes: exp(-|alpha|^2/2) alone underflows for
            // large amplitudes.
            let (r, theta) = alpha.to_polar();
            let mut log_mag = -r * r / 2.0;
            let mut a = Vec::with_capacity(len);
            for l in 0..len {
                if l > 0 {
                    log_mag += r.ln() - 0.5 * (l as f64).ln();
                }
                let mag = if r == 0.0 && l > 0 { 0.0 } else { log_mag.exp() };
                a.push(Complex64::from_polar(mag, theta * l as f64));
            }
            Raw::Pure(a)
        }
        StateSpec::Thermal { nbar } => {
            let ratio = nbar / (1.0 + nbar);
            let p0 = 1.0 / (1.0 + nbar);
            Raw::Mixed((0..len).map(|l| p0 * ratio.powi(l as i32)).collect())
        }
        StateSpec::Binomial { eta, m } => {
            Raw::Pure(super::build_binomial(*eta, *m, len.max(m + 1))?.amplitudes().to_vec())
        }
        StateSpec::PhotonAdded { k, base } => {
            let inner = raw_base(base, len.saturating_sub(*k).max(1))?;
            match inner {
                Raw::Pure(a) => {
                    let mut out = vec![zero; a.len() + k];
                    for (l, c) in a.iter().enumerate() {
                        out[l + k] = c * rising_from(l, *k).sqrt();
                    }
                    Raw::Pure(out)
                }
                Raw::Mixed(p) => {
                    let mut out = vec![0.0; p.len() + k];
                    for (l, w) in p.iter().enumerate() {
                        out[l + k] = w * rising_from(l, *k);
                    }
                    Raw::Mixed(out)
                }
            }
        }
    })
}

/// Smallest dimension whose neglected population stays below `tol`.
fn choose_dim(weights: &[f64], tol: f64) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let mut tail = 0.0;
    for d in (1..=weights.len()).rev() {
        tail += weights[d - 1];
        if tail > tol * total {
            return if d == weights.len() { None } else { Some(d + 1) };
        }
    }
    Some(1)
}

fn finish(raw: Raw, dim: usize) -> Result<DensityMatrix> {
    match raw {
        Raw::Pure(mut a) => {
            a.resize(dim, Complex64::new(0.0, 0.0));
            Ok(FockState::from_amplitudes(a)?.to_density())
        }
        Raw::Mixed(mut p) => {
            p.resize(dim, 0.0);
            DensityMatrix::from_populations(&p)
        }
    }
}

/// Builds a normalized density matrix with default truncation settings.
pub fn build_state(spec: &StateSpec, dim: Dim) -> Result<DensityMatrix> {
    build_state_with(spec, dim, BuildOptions::default())
}

pub fn build_state_with(spec: &StateSpec, dim: Dim, opts: BuildOptions) -> Result<DensityMatrix> {
    spec.validate()?;
    if let Some(support) = finite_support(spec) {
        let d = match dim {
            Dim::Auto => support,
            Dim::Fixed(d) if d >= support => d,
            Dim::Fixed(d) => {
                return Err(Error::Truncation(format!(
                    "{spec} has support {support} but dimension {d} was requested"
                )))
            }
        };
        if d > opts.dim_cap {
            return Err(Error::Truncation(format!(
                "{spec} needs dimension {d}, above the cap {}",
                opts.dim_cap
            )));
        }
        return finish(raw_base(spec, d)?, d);
    }

    let raw = raw_base(spec, opts.dim_cap + 1)?;
    let weights = raw.weights();
    let needed = choose_dim(&weights, opts.tail_tol).filter(|d| *d <= opts.dim_cap);
    let Some(needed) = needed else {
        return Err(Error::Truncation(format!(
            "{spec} does not fit in dimension cap {} with tail tolerance {:e}",
            opts.dim_cap, opts.tail_tol
        )));
    };
    let d = match dim {
        Dim::Auto => needed,
        Dim::Fixed(d) if d >= needed.saturating_sub(1) && d <= opts.dim_cap => d,
        Dim::Fixed(d) => {
            return Err(Error::Truncation(format!(
                "{spec} neglects more than {:e} of its population in dimension {d}",
                opts.tail_tol
            )))
        }
    };
    finish(raw, d)
}

/// Pure-state counterpart of [`build_state`]; fails for mixed families.
pub fn build_pure(spec: &StateSpec, dim: Dim) -> Result<FockState> {
    let (base, _) = spec.split();
    if matches!(base, StateSpec::Thermal { nbar } if *nbar > 0.0) {
        return Err(Error::Domain(format!("{spec} is not a pure state")));
    }
    let rho = build_state(spec, dim)?;
    // Rank one: recover amplitudes from the column of the largest population.
    let pops = rho.populations();
    let (pivot, &pmax) = pops
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let scale = pmax.sqrt();
    let amps = (0..rho.dim()).map(|m| rho.get(m, pivot) / scale).collect();
    FockState::from_amplitudes(amps)
}

/// Normalization constant `N(k, eta, M)` of the excited binomial state,
/// evaluated through the terminating `2F1(-M, -M; -M-k; (eta^2-1)/eta^2)`.
///
/// At `eta = 0` the hypergeometric argument diverges; the state there is
/// `a†^k |0>` and the limit `1/sqrt(k!)` is returned instead.
pub fn ebs_normalization(k: usize, eta: f64, m: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")));
    }
    if eta == 0.0 {
        return Ok(factorial(k).sqrt().recip());
    }
    let eta2 = eta * eta;
    let x = (eta2 - 1.0) / eta2;
    let mi = m as i64;
    let f = hypergeom_2f1_terminating(-mi, -mi, -(mi as f64) - k as f64, x)?;
    let ratio = ((m + 1)..=(m + k)).fold(1.0, |acc, i| acc * i as f64);
    let norm_sqr = eta2.powi(m as i32) * ratio * f;
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::NumericalConsistency(format!(
            "hypergeometric norm evaluated to {norm_sqr} for k={k}, eta={eta}, M={m}"
        )));
    }
    Ok(norm_sqr.sqrt().recip())
}
