use num_complex::Complex64;
use std::f64::consts::PI;

use photonparity::fock::{build_state, DensityMatrix, Dim, FockState, StateSpec};
use photonparity::rabi::*;

fn state(s: &str) -> DensityMatrix {
    build_state(&s.parse().unwrap(), Dim::Auto).unwrap()
}

/// `P_g(τ)` from direct RK4 integration of `i dψ/dτ = (a σ+ + a† σ-) ψ` on
/// the joint space, starting from `|e> ⊗ |field>`. Index `2l` is `|g,l>`,
/// `2l + 1` is `|e,l>`.
fn joint_ground_probability(field: &[Complex64], taus: &[f64], h: f64) -> Vec<f64> {
    let d = field.len() + 1;
    let mut psi = vec![Complex64::new(0.0, 0.0); 2 * d];
    for (l, a) in field.iter().enumerate() {
        psi[2 * l + 1] = *a;
    }
    let rhs = |v: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for l in 0..d {
            // a† σ- takes |e,l> to √(l+1) |g,l+1>, and a σ+ does the reverse.
            if l + 1 < d {
                let c = ((l + 1) as f64).sqrt();
                out[2 * (l + 1)] += v[2 * l + 1] * c;
                out[2 * l + 1] += v[2 * (l + 1)] * c;
            }
        }
        out.into_iter().map(|z| z * Complex64::new(0.0, -1.0)).collect()
    };
    let mut t = 0.0;
    let mut out = Vec::new();
    for &target in taus {
        while target - t > 1e-12 {
            let dt = h.min(target - t);
            let k1 = rhs(&psi);
            let y: Vec<_> = psi.iter().zip(&k1).map(|(p, k)| p + k * (dt / 2.0)).collect();
            let k2 = rhs(&y);
            let y: Vec<_> = psi.iter().zip(&k2).map(|(p, k)| p + k * (dt / 2.0)).collect();
            let k3 = rhs(&y);
            let y: Vec<_> = psi.iter().zip(&k3).map(|(p, k)| p + k * dt).collect();
            let k4 = rhs(&y);
            for i in 0..psi.len() {
                psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
            }
            t += dt;
        }
        out.push((0..d).map(|l| psi[2 * l].norm_sqr()).sum());
    }
    out
}

#[test]
fn coherent_trace_matches_joint_evolution() {
    let spec: StateSpec = "coherent alpha=1.5".parse().unwrap();
    let pure = photonparity::fock::build_pure(&spec, Dim::Auto).unwrap();
    let taus = uniform_taus(12.0, 0.25);
    let direct = joint_ground_probability(pure.amplitudes(), &taus, 1e-3);
    let trace = jc_trace(&pure.to_density(), &taus);
    for (a, b) in direct.iter().zip(&trace.p_ground) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn thermal_trace_matches_joint_evolution_of_fock_mixture() {
    let rho = state("thermal nbar=1");
    let taus = uniform_taus(10.0, 0.5);
    let pops = rho.populations();
    let mut mixed = vec![0.0; taus.len()];
    for (l, p) in pops.iter().enumerate() {
        let fock = FockState::fock(l, l + 1).unwrap();
        for (m, v) in joint_ground_probability(fock.amplitudes(), &taus, 2e-3).iter().enumerate() {
            mixed[m] += p * v;
        }
    }
    let trace = jc_trace(&rho, &taus);
    for (a, b) in mixed.iter().zip(&trace.p_ground) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn round_trip_for_every_family() {
    let opts = FresnelOptions::default();
    let taus = opts.taus();
    for s in [
        "vacuum",
        "fock l=1",
        "fock l=4",
        "coherent alpha=1",
        "coherent alpha=0.6-0.8i",
        "thermal nbar=0.5",
        "binomial eta=0.6 M=3",
        "ecs k=1 alpha=0.5",
        "ebs k=1 eta=0.5 M=2",
        "ebs k=2 eta=0.55 M=2",
        "ets k=1 nbar=1",
    ] {
        let rho = state(s);
        let r = fresnel_reconstruct(&jc_trace(&rho, &taus), &opts).unwrap();
        assert!((r.parity - rho.mean_parity()).abs() <= 0.02, "{s}: {} vs {}", r.parity, rho.mean_parity());
    }
}

#[test]
fn printed_constant_is_pi_times_too_large() {
    let opts = FresnelOptions { prefactor: Prefactor::AsPrinted, ..Default::default() };
    let corrected = FresnelOptions::default();
    let trace = jc_trace(&state("vacuum"), &opts.taus());
    let printed = fresnel_reconstruct(&trace, &opts).unwrap().parity;
    let fixed = fresnel_reconstruct(&trace, &corrected).unwrap().parity;
    assert!((printed / fixed - PI).abs() < 1e-12);
    assert!((printed - PI).abs() < 0.02 * PI);
}

#[test]
fn vacuum_error_decreases_with_window() {
    let rows = reconstruction_error_scan(&state("vacuum"), &[10.0 * PI, 30.0 * PI, 60.0 * PI], 0.002).unwrap();
    assert!(rows[0].error > rows[1].error && rows[1].error > rows[2].error, "{rows:?}");
    let rows = reconstruction_error_scan(&state("thermal nbar=0.5"), &[60.0 * PI], 0.002).unwrap();
    assert!(rows[0].error < 0.02);
}

#[test]
fn halving_the_step_shrinks_the_quadrature_error() {
    // Truncation at tau_max is common to all steps, so the quadrature error
    // is measured against a much finer rule on the same window.
    let tau_max = 60.0 * PI;
    for l in [0, 1, 3] {
        let rho = FockState::fock(l, l + 1).unwrap().to_density();
        let value = |dtau: f64| fresnel_integral(&jc_trace(&rho, &uniform_taus(tau_max, dtau)), None).unwrap();
        let reference = value(0.0005);
        let e1 = (value(0.004) - reference).norm();
        let e2 = (value(0.002) - reference).norm();
        assert!(e1 >= 2.0 * e2, "l={l}: {e1:e} {e2:e}");
    }
}

#[test]
fn taper_stays_within_tolerance() {
    let opts = FresnelOptions { taper: Some(150.0), ..Default::default() };
    for s in ["vacuum", "fock l=1", "coherent alpha=1"] {
        let rho = state(s);
        let r = fresnel_reconstruct(&jc_trace(&rho, &opts.taus()), &opts).unwrap();
        assert!((r.parity - rho.mean_parity()).abs() <= 0.02, "{s}: {}", r.parity);
    }
}

#[test]
fn imported_columns_are_validated() {
    assert!(RabiTrace::from_columns(vec![0.0, 1.0], vec![0.0], vec![1.0, 0.0]).is_err());
    assert!(RabiTrace::from_columns(vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    let t = RabiTrace::from_columns(vec![0.0, 0.5, 1.0], vec![0.0, 0.2, 0.7], vec![1.0, 0.8, 0.3]).unwrap();
    assert_eq!(t.len(), 3);
}
