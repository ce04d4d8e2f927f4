use num_complex::Complex64;

use super::state::parity_of_populations;
use super::FockState;
use crate::error::{Error, Result};
use crate::special::rising_from;

/// A density matrix in a truncated Fock basis, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &FockState) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in amps {
            for b in amps {
                entries.push(a * b.conj());
            }
        }
        Self { dim, entries }
    }

    /// A diagonal (phase-averaged) state. Populations are renormalized.
    pub fn from_populations(populations: &[f64]) -> Result<Self> {
        if populations.is_empty() {
            return Err(Error::Dimension("empty population vector".into()));
        }
        if populations.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Domain("populations must be non-negative".into()));
        }
        let total: f64 = populations.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("populations sum to zero".into()));
        }
        let dim = populations.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (l, p) in populations.iter().enumerate() {
            entries[l * dim + l] = Complex64::new(p / total, 0.0);
        }
        Ok(Self { dim, entries })
    }

    /// Wraps raw entries. The matrix must be square, Hermitian to `1e-12`
    /// and of unit trace to `1e-10`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {dim}x{dim} entries, got {}",
                entries.len()
            )));
        }
        let rho = Self { dim, entries };
        let herm = rho.hermiticity_deviation();
        if herm > 1e-12 {
            return Err(Error::Domain(format!("matrix is not Hermitian (deviation {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("trace is {tr}, expected 1")));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.dim + n]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|l| self.get(l, l).re).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|l| self.get(l, l).re).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.populations()
            .iter()
            .enumerate()
            .map(|(l, p)| l as f64 * p)
            .sum()
    }

    pub fn mean_parity(&self) -> f64 {
        parity_of_populations(&self.populations())
    }

    /// Largest `|rho - rho†|` entry.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for m in 0..d {
            for n in m..d {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    /// Replaces `rho` by `(rho + rho†) / 2` and returns the deviation that
    /// was removed.
    pub fn symmetrize(&mut self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for m in 0..d {
            for n in m..d {
                let a = self.entries[m * d + n];
                let b = self.entries[n * d + m];
                worst = worst.max((a - b.conj()).norm());
                let avg = (a + b.conj()) * 0.5;
                self.entries[m * d + n] = avg;
                self.entries[n * d + m] = avg.conj();
            }
        }
        worst
    }

    /// Population held by the top `count` basis states.
    pub fn tail_population(&self, count: usize) -> f64 {
        let d = self.dim;
        (d.saturating_sub(count)..d).map(|l| self.get(l, l).re).sum()
    }

    /// Embeds the state in a larger basis with zero padding.
    pub fn padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::Dimension(format!(
                "cannot pad dimension {} down to {dim}",
                self.dim
            )));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for m in 0..self.dim {
            for n in 0..self.dim {
                entries[m * dim + n] = self.get(m, n);
            }
        }
        Ok(Self { dim, entries })
    }

    /// Normalized `a†^k rho a^k`, in dimension `dim + k`.
    pub fn photon_add(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("photon addition needs k >= 1".into()));
        }
        let old = self.dim;
        let dim = old + k;
        let weights: Vec<f64> = (0..old).map(|l| rising_from(l, k).sqrt()).collect();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for m in 0..old {
            for n in 0..old {
                entries[(m + k) * dim + n + k] = self.get(m, n) * weights[m] * weights[n];
            }
        }
        let tr: f64 = (0..dim).map(|l| entries[l * dim + l].re).sum();
        if !(tr > 0.0) {
            return Err(Error::Domain("photon-added state has zero norm".into()));
        }
        entries.iter_mut().for_each(|e| *e /= tr);
        Ok(Self { dim, entries })
    }
}

/// `Tr[(O_even - O_odd) rho]`. The Wigner function at the origin is
/// `2/pi` times this value.
pub fn mean_parity(rho: &DensityMatrix) -> f64 {
    rho.mean_parity()
}
