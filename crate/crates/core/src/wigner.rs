//! Wigner functions of truncated Fock-basis states.
//!
//! Normalization: `∫ W dq dp = 1` with `alpha = q + i p`, so the vacuum is
//! `(2/pi) exp(-2(q² + p²))` and `W(0,0) = (2/pi) <parity>`. These are the
//! scalings under which the thermal state with occupation `n` is the
//! stationary solution of the Fokker-Planck equation with drift `γ/2` and
//! diffusion `γ(2n+1)/8`.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Tag written next to every exported grid or trajectory.
pub const CONVENTION: &str = "int(W)=1; alpha=q+ip; W(0,0)=(2/pi)*parity";

/// Imaginary residue above which a Wigner value is rejected.
const IMAG_RESIDUE_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.q, self.p)
    }
}

/// Rectangular sampling window; both end points are included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridWindow {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

impl GridWindow {
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            q_min: -half_width,
            q_max: half_width,
            p_min: -half_width,
            p_max: half_width,
            nq: points,
            np: points,
        }
    }

    /// Plotting window: `±max(3, 3 sqrt((1 + 2 n_eff) / 2))` with 161
    /// points per axis, where `n_eff` is the larger of the state's mean
    /// photon number and the environment occupation.
    pub fn display(rho: &DensityMatrix, n_env: f64) -> Self {
        let n_eff = rho.mean_photon_number().max(n_env);
        let half = 3.0f64.max(3.0 * ((1.0 + 2.0 * n_eff) / 2.0).sqrt());
        Self::square(half, 161)
    }

    /// Window wide enough that the state stays below ~1e-10 on its
    /// boundary for any evolution in an environment with occupation
    /// `n_env`, sampled with spacing at most `max_spacing` and an odd
    /// number of points so that the origin is a node.
    pub fn support(rho: &DensityMatrix, n_env: f64, max_spacing: f64) -> Self {
        let pops = rho.populations();
        let mut tail = 0.0;
        let mut l_max = 0;
        for (l, p) in pops.iter().enumerate().rev() {
            tail += p;
            if tail > 1e-12 {
                l_max = l;
                break;
            }
        }
        let half = (l_max as f64 + 0.5).sqrt() + 3.6 * (1.0 + 2.0 * n_env).sqrt();
        let mut points = (2.0 * half / max_spacing).ceil() as usize + 1;
        if points.is_multiple_of(2) {
            points += 1;
        }
        Self::square(half, points)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.q_min, self.q_max, self.p_min, self.p_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.q_max <= self.q_min || self.p_max <= self.p_min {
            return Err(Error::Configuration(format!("degenerate grid window {self:?}")));
        }
        if self.nq < 2 || self.np < 2 {
            return Err(Error::Configuration("grids need at least two points per axis".into()));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    /// Index of the node closest to `(0, 0)`, if the window contains it.
    pub fn origin_index(&self) -> Option<(usize, usize)> {
        let i = (-self.q_min / self.dq()).round();
        let j = (-self.p_min / self.dp()).round();
        let ok = |v: f64, n: usize| v >= 0.0 && (v as usize) < n;
        (ok(i, self.nq) && ok(j, self.np)).then_some((i as usize, j as usize))
    }
}

/// `W(q, p)` sampled on a window, stored with `q` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub window: GridWindow,
    pub values: Vec<f64>,
    pub convention: &'static str,
}

impl WignerGrid {
    pub fn from_fn(window: GridWindow, f: impl Fn(f64, f64) -> f64 + Sync) -> Result<Self> {
        window.validate()?;
        let values = (0..window.nq * window.np)
            .into_par_iter()
            .map(|idx| f(window.q(idx / window.np), window.p(idx % window.np)))
            .collect();
        Ok(Self { window, values, convention: CONVENTION })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.window.np + j]
    }

    pub fn cell_area(&self) -> f64 {
        self.window.dq() * self.window.dp()
    }

    /// `Σ W Δq Δp`.
    pub fn riemann_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn origin_value(&self) -> Option<f64> {
        self.window.origin_index().map(|(i, j)| self.value(i, j))
    }

    /// Values along the row closest to `p = 0`, as `(q, W)` pairs.
    pub fn cross_section_p0(&self) -> Vec<(f64, f64)> {
        let j = ((-self.window.p_min / self.window.dp()).round() as usize).min(self.window.np - 1);
        (0..self.window.nq)
            .map(|i| (self.window.q(i), self.value(i, j)))
            .collect()
    }

    pub fn boundary_values(&self) -> impl Iterator<Item = f64> + '_ {
        let (nq, np) = (self.window.nq, self.window.np);
        (0..nq * np)
            .filter(move |idx| {
                let (i, j) = (idx / np, idx % np);
                i == 0 || j == 0 || i == nq - 1 || j == np - 1
            })
            .map(move |idx| self.values[idx])
    }
}

/// `Tr[rho D(alpha) Π D†(alpha)]` as a complex number, before the `2/pi`
/// factor.
///
/// With `G = D Π D†` the identities `a G = G (2 alpha - a)` and
/// `G a† = (2 alpha* - a†) G` give
/// `G[0][n+1] = 2 alpha* G[0][n] / sqrt(n+1)` from `G[0][0] = exp(-2|alpha|²)`
/// and `G[m+1][n] = (2 alpha G[m][n] - sqrt(n) G[m][n-1]) / sqrt(m+1)`.
/// `G` is Hermitian, so only `n >= m` is generated, one row at a time.
fn displaced_parity_expectation(rho: &DensityMatrix, alpha: Complex64) -> Complex64 {
    let d = rho.dim();
    let two_alpha = 2.0 * alpha;
    let two_alpha_c = two_alpha.conj();
    let sqrt: Vec<f64> = (0..=d).map(|i| (i as f64).sqrt()).collect();

    let mut row = vec![Complex64::new(0.0, 0.0); d];
    row[0] = Complex64::new((-2.0 * alpha.norm_sqr()).exp(), 0.0);
    for n in 1..d {
        row[n] = two_alpha_c * row[n - 1] / sqrt[n];
    }
    let mut next = vec![Complex64::new(0.0, 0.0); d];
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..d {
        acc += rho.get(m, m) * row[m];
        for n in (m + 1)..d {
            acc += rho.get(n, m) * row[n] + rho.get(m, n) * row[n].conj();
        }
        if m + 1 < d {
            for n in (m + 1)..d {
                next[n] = (two_alpha * row[n] - sqrt[n] * row[n - 1]) / sqrt[m + 1];
            }
            std::mem::swap(&mut row, &mut next);
        }
    }
    acc
}

/// `W(q, p) = (2/pi) Tr[rho D(alpha) Π D†(alpha)]` with `alpha = q + i p`.
pub fn wigner_point(rho: &DensityMatrix, pt: PhasePoint) -> Result<f64> {
    if !(pt.q.is_finite() && pt.p.is_finite()) {
        return Err(Error::Domain(format!("non-finite phase-space point {pt:?}")));
    }
    let w = displaced_parity_expectation(rho, pt.alpha()) * FRAC_2_PI;
    if w.im.abs() > IMAG_RESIDUE_LIMIT {
        return Err(Error::NumericalConsistency(format!(
            "Wigner value at ({}, {}) has imaginary residue {:e}",
            pt.q, pt.p, w.im
        )));
    }
    Ok(w.re)
}

pub fn wigner_grid(rho: &DensityMatrix, window: GridWindow) -> Result<WignerGrid> {
    window.validate()?;
    let values: Result<Vec<f64>> = (0..window.nq * window.np)
        .into_par_iter()
        .map(|idx| {
            let pt = PhasePoint::new(window.q(idx / window.np), window.p(idx % window.np));
            wigner_point(rho, pt)
        })
        .collect();
    Ok(WignerGrid { window, values: values?, convention: CONVENTION })
}

/// `W(q, 0)` along a line, one value per `q`.
pub fn wigner_cross_section(rho: &DensityMatrix, qs: &[f64]) -> Result<Vec<f64>> {
    qs.par_iter()
        .map(|&q| wigner_point(rho, PhasePoint::new(q, 0.0)))
        .collect()
}

/// Tolerance for calling a boundary value negative.
const BOUNDARY_NEGATIVE_TOL: f64 = 1e-12;

/// `Σ max(0, -W) Δq Δp`. The window must enclose every negative region,
/// so negative boundary values are an error.
pub fn negativity_volume(grid: &WignerGrid) -> Result<f64> {
    if let Some(v) = grid.boundary_values().find(|v| *v < -BOUNDARY_NEGATIVE_TOL) {
        return Err(Error::Window(format!(
            "grid boundary carries negative value {v:e}; widen the window"
        )));
    }
    Ok(grid.values.iter().map(|w| (-w).max(0.0)).sum::<f64>() * grid.cell_area())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_state, build_state_with, BuildOptions, Dim, FockState, StateSpec};
    use std::f64::consts::PI;

    fn fock(l: usize) -> DensityMatrix {
        FockState::fock(l, l + 1).unwrap().to_density()
    }

    #[test]
    fn origin_values() {
        let w0 = wigner_point(&fock(0), PhasePoint::ORIGIN).unwrap();
        assert!((w0 - 2.0 / PI).abs() < 1e-15);
        let w1 = wigner_point(&fock(1), PhasePoint::ORIGIN).unwrap();
        assert!((w1 + 2.0 / PI).abs() < 1e-15);
        let coh = build_state(&StateSpec::Coherent { alpha: 1.0.into() }, Dim::Auto).unwrap();
        let wc = wigner_point(&coh, PhasePoint::ORIGIN).unwrap();
        assert!((wc - 2.0 / PI * (-2.0f64).exp()).abs() < 1e-10);
        assert!((wc - 0.08615).abs() < 1e-5);
    }

    #[test]
    fn single_photon_cross_section() {
        let rho = fock(1);
        for i in 0..=60 {
            let q = -3.0 + 0.1 * i as f64;
            let w = wigner_point(&rho, PhasePoint::new(q, 0.0)).unwrap();
            let exact = 2.0 / PI * (4.0 * q * q - 1.0) * (-2.0 * q * q).exp();
            assert!((w - exact).abs() < 1e-14);
        }
        let at_half = wigner_point(&rho, PhasePoint::new(0.5, 0.0)).unwrap();
        assert!(at_half.abs() < 1e-15);
    }

    #[test]
    fn coherent_state_is_displaced_gaussian() {
        let beta = Complex64::new(0.8, -0.6);
        // Off-diagonal terms see the tail amplitude, not its population.
        let opts = BuildOptions { tail_tol: 1e-24, ..Default::default() };
        let rho = build_state_with(&StateSpec::Coherent { alpha: beta }, Dim::Auto, opts).unwrap();
        for (q, p) in [(0.0, 0.0), (0.8, -0.6), (1.0, 0.2), (-0.5, 0.7), (0.3, -1.1)] {
            let w = wigner_point(&rho, PhasePoint::new(q, p)).unwrap();
            let d2 = (q - beta.re).powi(2) + (p - beta.im).powi(2);
            let exact = 2.0 / PI * (-2.0 * d2).exp();
            assert!((w - exact).abs() < 1e-9, "({q},{p}): {w} vs {exact}");
        }
    }

    #[test]
    fn vacuum_grid_is_symmetric() {
        let g = wigner_grid(&fock(0), GridWindow::square(3.0, 121)).unwrap();
        let (i0, j0) = g.window.origin_index().unwrap();
        assert_eq!((i0, j0), (60, 60));
        assert!((g.max() - 2.0 / PI).abs() < 1e-15);
        assert_eq!(g.origin_value().unwrap(), g.max());
        for i in 0..121 {
            for j in 0..121 {
                let v = g.value(i, j);
                assert!((v - g.value(j, i)).abs() < 1e-10);
                assert!((v - g.value(120 - i, j)).abs() < 1e-10);
            }
        }
        assert!((g.riemann_sum() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn negativity_volume_cases() {
        let vac = wigner_grid(&fock(0), GridWindow::square(3.0, 61)).unwrap();
        assert_eq!(negativity_volume(&vac).unwrap(), 0.0);

        let coarse = negativity_volume(&wigner_grid(&fock(1), GridWindow::square(3.0, 121)).unwrap()).unwrap();
        let fine = negativity_volume(&wigner_grid(&fock(1), GridWindow::square(3.0, 241)).unwrap()).unwrap();
        assert!(coarse > 0.0);
        assert!(((coarse - fine) / fine).abs() < 0.01, "{coarse} vs {fine}");
    }

    #[test]
    fn narrow_window_is_rejected() {
        let g = wigner_grid(&fock(1), GridWindow::square(0.3, 11)).unwrap();
        assert!(matches!(negativity_volume(&g), Err(Error::Window(_))));
    }

    #[test]
    fn window_validation() {
        assert!(GridWindow::square(1.0, 1).validate().is_err());
        let mut w = GridWindow::square(1.0, 5);
        w.q_max = -2.0;
        assert!(w.validate().is_err());
        assert!(wigner_point(&fock(0), PhasePoint::new(f64::NAN, 0.0)).is_err());
    }
}
