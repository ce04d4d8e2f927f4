//! Exact Fokker-Planck propagation by the Ornstein-Uhlenbeck kernel
//!
//! `W(β, γt) = (2/(πσ)) ∫ W(β₀, 0) exp(-2|β - β₀ e^{-γt/2}|² / σ) d²β₀`,
//! `σ = (1 + 2n)(1 - e^{-γt})`.
//!
//! The kernel factorizes over `q` and `p`, so the quadrature is two
//! one-dimensional matrix products.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{check_times, Backend, ChannelParams, OriginTrajectory};
use crate::error::{Error, Result};
use crate::wigner::{GridWindow, WignerGrid};

/// Boundary magnitude above which the grid is taken not to cover the state.
const SUPPORT_TOL: f64 = 1e-6;

struct Kernel {
    /// Contraction factor `e^{-γt/2}`.
    shrink: f64,
    sigma: f64,
    norm: f64,
}

impl Kernel {
    fn new(params: ChannelParams, window: &GridWindow) -> Result<Option<Self>> {
        params.validate()?;
        if params.gamma_t == 0.0 {
            return Ok(None);
        }
        let sigma = params.spread();
        let width = sigma.sqrt() / 2.0;
        let h = window.dq().max(window.dp());
        if width < h {
            return Err(Error::Resolution(format!(
                "kernel width {width:.3e} at γt = {} is below grid spacing {h:.3e}; \
                 refine the grid or evaluate the state directly",
                params.gamma_t
            )));
        }
        Ok(Some(Self {
            shrink: (-0.5 * params.gamma_t).exp(),
            sigma,
            norm: (2.0 / (PI * sigma)).sqrt(),
        }))
    }

    fn weight(&self, x: f64, x0: f64) -> f64 {
        let d = x - x0 * self.shrink;
        self.norm * (-2.0 * d * d / self.sigma).exp()
    }
}

fn check_support(grid: &WignerGrid) -> Result<()> {
    let edge = grid.boundary_values().fold(0.0f64, |m, v| m.max(v.abs()));
    if edge > SUPPORT_TOL {
        return Err(Error::Window(format!(
            "initial grid reaches {edge:e} on its boundary; widen the window"
        )));
    }
    Ok(())
}

/// Propagated grid on the same window as `grid0`.
pub fn propagate_wigner_gaussian(grid0: &WignerGrid, params: ChannelParams) -> Result<WignerGrid> {
    check_support(grid0)?;
    let w = grid0.window;
    let Some(kernel) = Kernel::new(params, &w)? else {
        return Ok(grid0.clone());
    };
    let (nq, np) = (w.nq, w.np);
    let (dq, dp) = (w.dq(), w.dp());

    // partial[a][j] = Σ_b W0[a][b] K(p_j, p_b) dp
    let kp: Vec<f64> = (0..np * np)
        .map(|idx| kernel.weight(w.p(idx / np), w.p(idx % np)) * dp)
        .collect();
    let partial: Vec<f64> = (0..nq)
        .into_par_iter()
        .flat_map_iter(|a| {
            let row = &grid0.values[a * np..(a + 1) * np];
            let kp = &kp;
            (0..np).map(move |j| {
                let kr = &kp[j * np..(j + 1) * np];
                row.iter().zip(kr).map(|(x, y)| x * y).sum::<f64>()
            })
        })
        .collect();

    let kq: Vec<f64> = (0..nq * nq)
        .map(|idx| kernel.weight(w.q(idx / nq), w.q(idx % nq)) * dq)
        .collect();
    let values: Vec<f64> = (0..nq)
        .into_par_iter()
        .flat_map_iter(|i| {
            let kr = &kq[i * nq..(i + 1) * nq];
            let partial = &partial;
            (0..np).map(move |j| (0..nq).map(|a| kr[a] * partial[a * np + j]).sum::<f64>())
        })
        .collect();
    Ok(WignerGrid { window: w, values, convention: grid0.convention })
}

/// Propagated value at the origin only; `O(nq·np)` instead of a full grid.
pub fn gaussian_origin_value(grid0: &WignerGrid, params: ChannelParams) -> Result<f64> {
    check_support(grid0)?;
    let w = grid0.window;
    let Some(kernel) = Kernel::new(params, &w)? else {
        return grid0
            .origin_value()
            .ok_or_else(|| Error::Window("grid does not contain the origin".into()));
    };
    let kq: Vec<f64> = (0..w.nq).map(|a| kernel.weight(0.0, w.q(a)) * w.dq()).collect();
    let kp: Vec<f64> = (0..w.np).map(|b| kernel.weight(0.0, w.p(b)) * w.dp()).collect();
    Ok((0..w.nq)
        .map(|a| {
            let row = &grid0.values[a * w.np..(a + 1) * w.np];
            kq[a] * row.iter().zip(&kp).map(|(x, y)| x * y).sum::<f64>()
        })
        .sum())
}

pub fn gaussian_origin_trajectory(grid0: &WignerGrid, n: f64, times: &[f64]) -> Result<OriginTrajectory> {
    check_times(times)?;
    let w00 = times
        .par_iter()
        .map(|&t| gaussian_origin_value(grid0, ChannelParams::new(n, t)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(OriginTrajectory { times: times.to_vec(), w00, backend: Backend::Gaussian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_state, Dim, FockState, StateSpec};
    use crate::wigner::wigner_grid;

    fn vacuum_grid() -> WignerGrid {
        let rho = FockState::fock(0, 1).unwrap().to_density();
        wigner_grid(&rho, GridWindow::square(5.0, 161)).unwrap()
    }

    #[test]
    fn zero_temperature_vacuum_is_fixed() {
        let g0 = vacuum_grid();
        for t in [0.3, 1.0, 4.0] {
            let g = propagate_wigner_gaussian(&g0, ChannelParams::new(0.0, t).unwrap()).unwrap();
            let dev = g.values.iter().zip(&g0.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-10, "t={t}: {dev}");
        }
    }

    #[test]
    fn long_times_approach_thermal_state() {
        let rho = build_state(&StateSpec::ebs(1, 0.5, 2), Dim::Auto).unwrap();
        let g0 = wigner_grid(&rho, GridWindow::square(6.0, 161)).unwrap();
        let n = 0.5;
        let g = propagate_wigner_gaussian(&g0, ChannelParams::new(n, 30.0).unwrap()).unwrap();
        let w00 = g.origin_value().unwrap();
        assert!((w00 - 2.0 / PI / (1.0 + 2.0 * n)).abs() < 1e-9);
        assert!((g.riemann_sum() - 1.0).abs() < 1e-3);
        let inf = gaussian_origin_value(&g0, ChannelParams::new(n, f64::INFINITY).unwrap()).unwrap();
        assert!((inf - 2.0 / PI / (1.0 + 2.0 * n)).abs() < 1e-9);
    }

    #[test]
    fn origin_shortcut_matches_full_grid() {
        let rho = FockState::fock(1, 2).unwrap().to_density();
        let g0 = wigner_grid(&rho, GridWindow::square(6.0, 121)).unwrap();
        let params = ChannelParams::new(0.5, 0.3).unwrap();
        let full = propagate_wigner_gaussian(&g0, params).unwrap().origin_value().unwrap();
        let fast = gaussian_origin_value(&g0, params).unwrap();
        assert!((full - fast).abs() < 1e-14);
    }

    #[test]
    fn small_times_need_finer_grids() {
        let g0 = vacuum_grid();
        let err = gaussian_origin_value(&g0, ChannelParams::new(0.0, 1e-4).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
        assert_eq!(
            gaussian_origin_value(&g0, ChannelParams::new(0.0, 0.0).unwrap()).unwrap(),
            g0.origin_value().unwrap()
        );
    }

    #[test]
    fn truncated_support_is_rejected() {
        let rho = FockState::fock(3, 4).unwrap().to_density();
        let g0 = wigner_grid(&rho, GridWindow::square(1.5, 41)).unwrap();
        assert!(matches!(
            propagate_wigner_gaussian(&g0, ChannelParams::new(0.0, 1.0).unwrap()),
            Err(Error::Window(_))
        ));
    }
}
