use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_times, Backend, ChannelParams, OriginTrajectory};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Decay time `ln((2 + 2n) / (1 + 2n))` at which photon-added states lose
/// every negative region of their Wigner function.
pub fn threshold_tc(n: f64) -> f64 {
    ((2.0 + 2.0 * n) / (1.0 + 2.0 * n)).ln()
}

/// Earlier sign change of the single-photon excited coherent state,
/// `ln[(2|alpha|²(1+n) + 2n) / ((1+2n)(1+|alpha|²))]`, defined for
/// `|alpha| >= 1`.
pub fn threshold_tc1(alpha_abs: f64, n: f64) -> Result<f64> {
    if !(alpha_abs >= 1.0) {
        return Err(Error::Regime(format!(
            "the intermediate sign change exists only for |alpha| >= 1, got {alpha_abs}"
        )));
    }
    let x = alpha_abs * alpha_abs;
    Ok(((2.0 * x * (1.0 + n) + 2.0 * n) / ((1.0 + 2.0 * n) * (1.0 + x))).ln())
}

/// `W(0,0,γt)` of the normalized `a†|alpha>` in the thermal channel.
pub fn ecs_origin_value(alpha_abs: f64, n: f64, gamma_t: f64) -> f64 {
    let x = alpha_abs * alpha_abs;
    let growth = gamma_t.exp();
    let c2 = gamma_t.exp_m1() * (1.0 + 2.0 * n);
    let one_minus = 1.0 - c2;
    let bracket = x * one_minus * one_minus + c2 * c2 - 1.0;
    2.0 * growth * bracket * (-2.0 * x / (1.0 + c2)).exp()
        / (PI * (1.0 + x) * (1.0 + c2).powi(3))
}

/// `W(0,0,γt)` of the single-photon excited thermal state whose base has
/// mean photon number `nbar`.
pub fn ets_origin_value(nbar: f64, n: f64, gamma_t: f64) -> f64 {
    let e = gamma_t.exp();
    let s = 1.0 + 2.0 * n;
    let xi = 2.0 * (nbar - n) + s * e;
    let kappa = -8.0 * (nbar - n) * (1.0 + n) + 2.0 * s * s * e * e + 4.0 * (nbar * s - s * s) * e;
    kappa * e / (PI * xi.powi(3))
}

/// Exact `W(0,0,γt)` of an arbitrary state from its photon-number
/// distribution.
///
/// The channel maps the origin value to a Gaussian average that is
/// diagonal in the Fock basis; `|l>` contributes
/// `(2/pi) r^l / (σ + e^{-γt})` with `σ = (1+2n)(1-e^{-γt})` and
/// `r = (σ - e^{-γt}) / (σ + e^{-γt})`. Since `r` runs monotonically from
/// `-1` to `+1` and vanishes exactly at [`threshold_tc`], every state with
/// no vacuum population has `W(0,0) = 0` there.
pub fn diagonal_origin_value(populations: &[f64], n: f64, gamma_t: f64) -> f64 {
    let params = ChannelParams { n, gamma_t };
    let s2 = params.contraction();
    let sigma = params.spread();
    let denom = sigma + s2;
    let r = (sigma - s2) / denom;
    let poly = populations.iter().rev().fold(0.0, |acc, p| acc * r + p);
    2.0 / PI * poly / denom
}

pub fn ecs_origin_trajectory(alpha: Complex64, n: f64, times: &[f64]) -> Result<OriginTrajectory> {
    check_times(times)?;
    let a = alpha.norm();
    Ok(OriginTrajectory {
        times: times.to_vec(),
        w00: times.iter().map(|t| ecs_origin_value(a, n, *t)).collect(),
        backend: Backend::Analytic,
    })
}

pub fn ets_origin_trajectory(nbar: f64, n: f64, times: &[f64]) -> Result<OriginTrajectory> {
    check_times(times)?;
    if !(nbar >= 0.0) {
        return Err(Error::Domain(format!("nbar must be >= 0, got {nbar}")));
    }
    Ok(OriginTrajectory {
        times: times.to_vec(),
        w00: times.iter().map(|t| ets_origin_value(nbar, n, *t)).collect(),
        backend: Backend::Analytic,
    })
}

pub fn diagonal_origin_trajectory(rho: &DensityMatrix, n: f64, times: &[f64]) -> Result<OriginTrajectory> {
    check_times(times)?;
    let pops = rho.populations();
    Ok(OriginTrajectory {
        times: times.to_vec(),
        w00: times.iter().map(|t| diagonal_origin_value(&pops, n, *t)).collect(),
        backend: Backend::Analytic,
    })
}
