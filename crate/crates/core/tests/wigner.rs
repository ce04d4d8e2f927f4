use std::f64::consts::PI;

use photonparity::fock::{build_state, Dim};
use photonparity::wigner::*;

fn state(s: &str) -> photonparity::fock::DensityMatrix {
    build_state(&s.parse().unwrap(), Dim::Auto).unwrap()
}

#[test]
fn grid_normalization() {
    for (s, n_eff) in [
        ("vacuum", 0.0),
        ("fock l=3", 3.0),
        ("thermal nbar=1", 1.0),
        ("ebs k=1 eta=0.5 M=2", 1.0),
        ("ets k=1 nbar=0.5", 2.0),
        ("ecs k=1 alpha=0.8", 1.6),
    ] {
        let rho = state(s);
        let g = wigner_grid(&rho, GridWindow::display(&rho, n_eff)).unwrap();
        assert!((g.riemann_sum() - 1.0).abs() <= 1e-3, "{s}: {}", g.riemann_sum());
        assert!(g.min() >= -2.0 / PI - 1e-9 && g.max() <= 2.0 / PI + 1e-9);
        assert_eq!(g.convention, CONVENTION);
    }
}

#[test]
fn single_photon_marginal_is_the_position_density() {
    // ∫ W(q, p) dp = |<q|1>|² = sqrt(2/π) 4 q² e^{-2q²} in this convention.
    let rho = state("fock l=1");
    let ps: Vec<f64> = (0..=400).map(|j| -5.0 + 0.025 * j as f64).collect();
    for q in [0.0, 0.3, 0.5, 1.0, 1.7] {
        let marginal: f64 = ps
            .iter()
            .map(|&p| wigner_point(&rho, PhasePoint::new(q, p)).unwrap() * 0.025)
            .sum();
        let exact = (2.0 / PI).sqrt() * 4.0 * q * q * (-2.0 * q * q).exp();
        assert!((marginal - exact).abs() < 1e-9, "q={q}: {marginal} vs {exact}");
    }
}

fn sign_changes(values: &[f64]) -> usize {
    let signs: Vec<bool> = values.iter().filter(|v| v.abs() > 1e-12).map(|v| *v > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[test]
fn binomial_preset_cross_sections() {
    let qs: Vec<f64> = (0..=600).map(|i| 0.005 * i as f64).collect();
    let full: Vec<f64> = (-600..=600).map(|i| 0.005 * i as f64).collect();

    let low = wigner_cross_section(&state("ebs k=1 eta=0 M=2"), &qs).unwrap();
    assert!((low[0] + 2.0 / PI).abs() < 1e-15);

    let high = wigner_cross_section(&state("ebs k=1 eta=1 M=2"), &qs).unwrap();
    assert_eq!(sign_changes(&high), 3);

    // Middle preset: one pronounced negative dip on the line, starting at the
    // origin where W vanishes. A shallow ripple near q = -0.5 stays above
    // -0.05.
    let mid = wigner_cross_section(&state("ebs k=1 eta=0.5 M=2"), &full).unwrap();
    let deep: Vec<usize> = (0..full.len()).filter(|&i| mid[i] < -0.05).collect();
    assert!(deep.windows(2).all(|w| w[1] == w[0] + 1), "deep negative region is not contiguous");
    let (lo, hi) = (full[deep[0]], full[*deep.last().unwrap()]);
    assert!(lo > 0.0 && hi < 1.0, "{lo}..{hi}");
    let min = mid.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(min < -0.3);
    assert!(mid[600].abs() < 1e-15);
}

#[test]
fn negativity_volume_of_single_photon_converges() {
    let rho = state("fock l=1");
    let a = negativity_volume(&wigner_grid(&rho, GridWindow::square(3.0, 121)).unwrap()).unwrap();
    let b = negativity_volume(&wigner_grid(&rho, GridWindow::square(3.0, 241)).unwrap()).unwrap();
    assert!(a > 0.0 && ((a - b) / b).abs() < 0.01, "{a} {b}");
    assert_eq!(negativity_volume(&wigner_grid(&state("vacuum"), GridWindow::square(3.0, 121)).unwrap()).unwrap(), 0.0);
}

#[test]
fn hermitian_states_give_real_values() {
    for s in ["ecs k=2 alpha=0.4+1.1i", "coherent alpha=-1.2+0.3i", "ebs k=3 eta=0.7 M=5"] {
        let rho = state(s);
        for i in 0..20 {
            let pt = PhasePoint::new(-2.0 + 0.21 * i as f64, 1.5 - 0.17 * i as f64);
            assert!(wigner_point(&rho, pt).is_ok());
        }
    }
    assert!(wigner_point(&state("vacuum"), PhasePoint::new(f64::NAN, 0.0)).is_err());
}
