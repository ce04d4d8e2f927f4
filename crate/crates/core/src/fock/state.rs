use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::special::{binomial, rising_from};

/// A normalized pure state in a truncated Fock basis `|0>, ..., |D-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: Vec<Complex64>,
}

impl FockState {
    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("empty amplitude vector".into()));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain(format!("cannot normalize state of norm {norm}")));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Takes amplitudes that are already normalized (binomial theorem,
    /// exact constructions) without rescaling them.
    pub(crate) fn from_normalized(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// The number state `|l>` in a basis of dimension `dim`.
    pub fn fock(l: usize, dim: usize) -> Result<Self> {
        if dim <= l {
            return Err(Error::Dimension(format!(
                "|{l}> needs dimension at least {}, got {dim}",
                l + 1
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[l] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(l, a)| l as f64 * a.norm_sqr())
            .sum()
    }

    pub fn mean_parity(&self) -> f64 {
        parity_of_populations(&self.populations())
    }

    /// Highest index carrying non-negligible amplitude, plus one.
    pub fn support(&self) -> usize {
        self.amplitudes
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .map_or(0, |i| i + 1)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

pub(crate) fn parity_of_populations(populations: &[f64]) -> f64 {
    populations
        .iter()
        .enumerate()
        .map(|(l, p)| if l % 2 == 0 { *p } else { -*p })
        .sum()
}

/// The binomial state `|eta, M>` with amplitudes
/// `sqrt(C(M,l)) eta^l (1-eta^2)^((M-l)/2)` on `l = 0..=M`.
///
/// The amplitudes are normalized by the binomial theorem and are not
/// rescaled.
pub fn build_binomial(eta: f64, m: usize, dim: usize) -> Result<FockState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")));
    }
    if dim < m + 1 {
        return Err(Error::Dimension(format!(
            "binomial state with M = {m} needs dimension at least {}, got {dim}",
            m + 1
        )));
    }
    let comp = (1.0 - eta * eta).max(0.0).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for (l, amp) in amplitudes.iter_mut().take(m + 1).enumerate() {
        let v = binomial(m, l).sqrt() * eta.powi(l as i32) * comp.powi((m - l) as i32);
        *amp = Complex64::new(v, 0.0);
    }
    Ok(FockState::from_normalized(amplitudes))
}

/// Normalized `a†^k |psi>`. The result lives in dimension `dim + k`, so
/// nothing is cut off.
pub fn photon_add(state: &FockState, k: usize) -> Result<FockState> {
    if k == 0 {
        return Err(Error::Domain("photon addition needs k >= 1".into()));
    }
    let dim = state.dim() + k;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for (l, a) in state.amplitudes().iter().enumerate() {
        amplitudes[l + k] = a * rising_from(l, k).sqrt();
    }
    FockState::from_amplitudes(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn binomial_endpoints_collapse_to_fock() {
        let vac = build_binomial(0.0, 2, 3).unwrap();
        assert_eq!(vac.populations(), vec![1.0, 0.0, 0.0]);
        let top = build_binomial(1.0, 2, 3).unwrap();
        assert_eq!(top.populations(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn binomial_half() {
        let s = build_binomial(0.5, 2, 3).unwrap();
        let a: Vec<f64> = s.amplitudes().iter().map(|c| c.re).collect();
        assert_close(a[0], 0.75, 1e-15);
        assert_close(a[1], (2.0f64).sqrt() * 0.5 * 0.75f64.sqrt(), 1e-15);
        assert_close(a[1], 0.6124, 1e-4);
        assert_close(a[2], 0.25, 1e-15);
        assert_close(s.norm_sqr(), 1.0, 1e-15);
    }

    #[test]
    fn binomial_errors() {
        assert!(matches!(build_binomial(0.5, 3, 3), Err(Error::Dimension(_))));
        assert!(matches!(build_binomial(1.5, 3, 4), Err(Error::Domain(_))));
        assert!(matches!(build_binomial(-0.1, 3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn add_to_vacuum() {
        let s = photon_add(&FockState::fock(0, 1).unwrap(), 1).unwrap();
        assert_eq!(s.populations(), vec![0.0, 1.0]);
    }

    #[test]
    fn add_to_binomial() {
        let b = build_binomial(0.0, 2, 3).unwrap();
        let s = photon_add(&b, 1).unwrap();
        assert_close(s.populations()[1], 1.0, 1e-15);

        let b = build_binomial(0.5, 2, 3).unwrap();
        let p = photon_add(&b, 1).unwrap().populations();
        assert_close(p[0], 0.0, 0.0);
        assert_close(p[1], 0.375, 1e-15);
        assert_close(p[2], 0.5, 1e-15);
        assert_close(p[3], 0.125, 1e-15);
    }

    #[test]
    fn add_zero_photons_is_rejected() {
        let b = build_binomial(0.5, 2, 3).unwrap();
        assert!(photon_add(&b, 0).is_err());
    }

    #[test]
    fn parity_of_single_photon_ebs_vanishes() {
        let s = photon_add(&build_binomial(0.5, 2, 3).unwrap(), 1).unwrap();
        assert_close(s.mean_parity(), 0.0, 1e-15);
    }
}
