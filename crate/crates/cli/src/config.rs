//! Run configuration: defaults, then the TOML config file, then flags.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use photonparity::channel::Backend;
use photonparity::fock::{StateSpec, DEFAULT_DIM_CAP};
use photonparity::rabi::Prefactor;

use crate::error::{CliError, Result};

/// Every key accepted by the config file; each has a flag of the same name.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// State specification, e.g. "ebs k=1 eta=0.5 M=2".
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Mean thermal photon number of the environment.
    #[arg(long, global = true)]
    pub n: Option<f64>,
    /// analytic | lindblad | gaussian | fd
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Largest Fock dimension for auto-sized states.
    #[arg(long, global = true)]
    pub dim_cap: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest decay time γt (default 1.5).
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Number of decay-time samples on [0, t-max].
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Explicit decay times, comma separated; overrides t-max and points.
    #[arg(long, global = true, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Second backend for parity-evolve cross-check mode.
    #[arg(long, global = true)]
    pub cross_check: Option<String>,
    /// Largest accepted cross-check deviation.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Surface preset (fig2 | fig3 | fig4) or slice preset (low | mid | high).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Added photons for surface sweeps.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Binomial M for surface sweeps.
    #[arg(long = "M", visible_alias = "m", global = true)]
    #[serde(rename = "M", alias = "m")]
    pub m: Option<usize>,
    /// Lower end of the surface η range.
    #[arg(long, global = true)]
    pub eta_min: Option<f64>,
    /// Upper end of the surface η range.
    #[arg(long, global = true)]
    pub eta_max: Option<f64>,
    /// Number of η samples.
    #[arg(long, global = true)]
    pub eta_points: Option<usize>,
    /// Cross-section half width in q.
    #[arg(long, global = true)]
    pub q_max: Option<f64>,
    /// Number of q samples.
    #[arg(long, global = true)]
    pub q_points: Option<usize>,
    /// Largest interaction time of the Rabi trace (default 60π).
    #[arg(long, global = true)]
    pub tau_max: Option<f64>,
    /// Rabi trace spacing.
    #[arg(long, global = true)]
    pub dtau: Option<f64>,
    /// Width of an optional Gaussian taper on the Fresnel integrand.
    #[arg(long, global = true)]
    pub taper: Option<f64>,
    /// corrected | as-printed
    #[arg(long, global = true)]
    pub prefactor: Option<String>,
    /// Trace CSV to reconstruct from instead of simulating.
    #[arg(long, global = true)]
    pub trace_in: Option<PathBuf>,
    /// Reserved; every run is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

macro_rules! layer {
    ($base:expr, $top:expr, $($field:ident),*) => {
        RunConfig { $($field: $top.$field.or($base.$field),)* }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Values in `top` win over values in `self`.
    pub fn layered(self, top: RunConfig) -> RunConfig {
        layer!(
            self, top, state, n, backend, dim_cap, out, t_max, points, times, cross_check, tolerance,
            preset, k, m, eta_min, eta_max, eta_points, q_max, q_points, tau_max, dtau, taper,
            prefactor, trace_in, seed
        )
    }

    pub fn to_comment(&self) -> String {
        let text = toml::to_string(self).expect("config serializes");
        text.lines().map(|l| format!("# {l}\n")).collect()
    }
}

/// Config with defaults filled in and values parsed.
#[derive(Debug, Clone)]
pub struct Settings {
    pub raw: RunConfig,
    pub state: Option<StateSpec>,
    pub n: f64,
    pub backend: Backend,
    pub dim_cap: usize,
    pub times: Vec<f64>,
    pub cross_check: Option<Backend>,
    pub tolerance: Option<f64>,
    pub k: usize,
    pub m: usize,
    pub etas: Vec<f64>,
    pub q_max: f64,
    pub q_points: usize,
    pub tau_max: f64,
    pub dtau: f64,
    pub taper: Option<f64>,
    pub prefactor: Prefactor,
}

fn parse_backend(text: &str) -> Result<Backend> {
    text.parse().map_err(|e: photonparity::Error| CliError::Config(e.to_string()))
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Surface presets: `(k, M, n)`.
pub fn surface_preset(name: &str) -> Result<(usize, usize, f64)> {
    match name {
        "fig2" => Ok((1, 3, 0.5)),
        "fig3" => Ok((1, 4, 0.5)),
        "fig4" => Ok((2, 2, 0.0)),
        other => Err(CliError::Config(format!("unknown surface preset '{other}' (fig2 | fig3 | fig4)"))),
    }
}

/// Cross-section presets: the binomial states with one added photon and
/// `M = 2` at `eta = 0, 0.5, 1`.
pub fn slice_preset(name: &str) -> Result<StateSpec> {
    let eta = match name {
        "low" => 0.0,
        "mid" => 0.5,
        "high" => 1.0,
        other => return Err(CliError::Config(format!("unknown slice preset '{other}' (low | mid | high)"))),
    };
    Ok(StateSpec::ebs(1, eta, 2))
}

impl Settings {
    /// Fills defaults into `raw` and validates. `preset_kind` selects how a
    /// preset is interpreted.
    pub fn resolve(mut raw: RunConfig, preset_kind: PresetKind) -> Result<Self> {
        if let Some(p) = raw.preset.clone() {
            match preset_kind {
                PresetKind::Surface => {
                    let (k, m, n) = surface_preset(&p)?;
                    raw.k = raw.k.or(Some(k));
                    raw.m = raw.m.or(Some(m));
                    raw.n = raw.n.or(Some(n));
                }
                PresetKind::Slice => {
                    if raw.state.is_none() {
                        raw.state = Some(slice_preset(&p)?.to_string());
                    }
                }
                PresetKind::None => {
                    return Err(CliError::Config("this command takes no preset".into()));
                }
            }
        }
        let n = *raw.n.get_or_insert(0.5);
        if !(n.is_finite() && n >= 0.0) {
            return Err(CliError::Config(format!("n must be finite and non-negative, got {n}")));
        }
        let backend = parse_backend(raw.backend.get_or_insert_with(|| "analytic".into()))?;
        let dim_cap = *raw.dim_cap.get_or_insert(DEFAULT_DIM_CAP);
        let state = match &raw.state {
            Some(text) => Some(text.parse::<StateSpec>()?),
            None => None,
        };
        if let Some(s) = &state {
            raw.state = Some(s.to_string());
        }
        let times = match &raw.times {
            Some(t) => {
                if t.iter().any(|v| !v.is_finite() || *v < 0.0) || t.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(CliError::Config("times must be non-negative and strictly increasing".into()));
                }
                raw.t_max = None;
                raw.points = None;
                t.clone()
            }
            None => {
                let t_max = positive("t-max", *raw.t_max.get_or_insert(1.5))?;
                let points = *raw.points.get_or_insert(151);
                if points < 2 {
                    return Err(CliError::Config("points must be at least 2".into()));
                }
                grid(0.0, t_max, points)
            }
        };
        let cross_check = raw.cross_check.as_deref().map(parse_backend).transpose()?;
        let eta_min = *raw.eta_min.get_or_insert(0.0);
        let eta_max = *raw.eta_max.get_or_insert(1.0);
        let eta_points = *raw.eta_points.get_or_insert(51);
        if !(0.0..=1.0).contains(&eta_min) || !(0.0..=1.0).contains(&eta_max) || eta_max < eta_min {
            return Err(CliError::Config(format!("eta range [{eta_min}, {eta_max}] is not inside [0, 1]")));
        }
        let q_max = positive("q-max", *raw.q_max.get_or_insert(3.0))?;
        let q_points = *raw.q_points.get_or_insert(121);
        let tau_max = positive("tau-max", *raw.tau_max.get_or_insert(60.0 * PI))?;
        let dtau = positive("dtau", *raw.dtau.get_or_insert(0.002))?;
        let taper = raw.taper.map(|w| positive("taper", w)).transpose()?;
        let prefactor = match raw.prefactor.get_or_insert_with(|| "corrected".into()).as_str() {
            "corrected" => Prefactor::Corrected,
            "as-printed" => Prefactor::AsPrinted,
            other => return Err(CliError::Config(format!("unknown prefactor '{other}' (corrected | as-printed)"))),
        };
        Ok(Settings {
            state,
            n,
            backend,
            dim_cap,
            times,
            cross_check,
            tolerance: raw.tolerance,
            k: *raw.k.get_or_insert(1),
            m: *raw.m.get_or_insert(3),
            etas: grid(eta_min, eta_max, eta_points),
            q_max,
            q_points,
            tau_max,
            dtau,
            taper,
            prefactor,
            raw,
        })
    }

    pub fn require_state(&self) -> Result<&StateSpec> {
        self.state.as_ref().ok_or_else(|| CliError::Config("missing --state".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetKind {
    None,
    Surface,
    Slice,
}
