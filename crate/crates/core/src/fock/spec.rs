use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Declarative recipe for a field state.
///
/// The text form is a family token followed by `key=value` pairs:
///
/// ```text
/// fock l=3
/// coherent alpha=0.5+0.2i
/// thermal nbar=1
/// binomial eta=0.5 M=2
/// ecs alpha=0.5            # photon-added coherent, k defaults to 1
/// ebs k=1 eta=0.5 M=2      # photon-added binomial
/// ets nbar=1               # photon-added thermal
/// coherent alpha=1 k=2     # any base family accepts k
/// ```
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock { l: usize },
    Coherent { alpha: Complex64 },
    Thermal { nbar: f64 },
    Binomial { eta: f64, m: usize },
    PhotonAdded { k: usize, base: Box<StateSpec> },
}

impl StateSpec {
    pub fn ecs(alpha: impl Into<Complex64>) -> Self {
        Self::added(1, Self::Coherent { alpha: alpha.into() })
    }

    pub fn ebs(k: usize, eta: f64, m: usize) -> Self {
        Self::added(k, Self::Binomial { eta, m })
    }

    pub fn ets(nbar: f64) -> Self {
        Self::added(1, Self::Thermal { nbar })
    }

    pub fn added(k: usize, base: StateSpec) -> Self {
        Self::PhotonAdded { k, base: Box::new(base) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StateSpec::Fock { .. } => Ok(()),
            StateSpec::Coherent { alpha } => {
                if alpha.re.is_finite() && alpha.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("alpha must be finite, got {alpha}")))
                }
            }
            StateSpec::Thermal { nbar } => {
                if nbar.is_finite() && *nbar >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("nbar must be finite and >= 0, got {nbar}")))
                }
            }
            StateSpec::Binomial { eta, .. } => {
                if (0.0..=1.0).contains(eta) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")))
                }
            }
            StateSpec::PhotonAdded { k, base } => {
                if *k == 0 {
                    return Err(Error::Domain("photon addition needs k >= 1".into()));
                }
                if matches!(**base, StateSpec::PhotonAdded { .. }) {
                    return Err(Error::Domain("photon addition cannot be nested".into()));
                }
                base.validate()
            }
        }
    }

    /// The non-added state underneath and the number of added photons.
    pub fn split(&self) -> (&StateSpec, usize) {
        match self {
            StateSpec::PhotonAdded { k, base } => (base, *k),
            other => (other, 0),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn alpha_text(a: &Complex64) -> String {
            if a.im == 0.0 {
                format!("{}", a.re)
            } else {
                format!("{}{:+}i", a.re, a.im)
            }
        }
        match self {
            StateSpec::Fock { l } => write!(f, "fock l={l}"),
            StateSpec::Coherent { alpha } => write!(f, "coherent alpha={}", alpha_text(alpha)),
            StateSpec::Thermal { nbar } => write!(f, "thermal nbar={nbar}"),
            StateSpec::Binomial { eta, m } => write!(f, "binomial eta={eta} M={m}"),
            StateSpec::PhotonAdded { k, base } => match &**base {
                StateSpec::Coherent { alpha } => write!(f, "ecs k={k} alpha={}", alpha_text(alpha)),
                StateSpec::Thermal { nbar } => write!(f, "ets k={k} nbar={nbar}"),
                StateSpec::Binomial { eta, m } => write!(f, "ebs k={k} eta={eta} M={m}"),
                other => write!(f, "{other} k={k}"),
            },
        }
    }
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

struct Field<'a> {
    pos: usize,
    value_pos: usize,
    value: &'a str,
    used: bool,
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.split('#').next().unwrap_or("");
        let toks = tokens(s);
        let Some(&(fam_pos, family)) = toks.first() else {
            return Err(parse_err(0, "empty state specification"));
        };
        let mut fields: Vec<(&str, Field)> = Vec::new();
        for &(pos, tok) in &toks[1..] {
            let Some(eq) = tok.find('=') else {
                return Err(parse_err(pos, format!("expected key=value, got '{tok}'")));
            };
            let key = &tok[..eq];
            if key.is_empty() {
                return Err(parse_err(pos, "missing key before '='"));
            }
            if fields.iter().any(|(k, _)| *k == key) {
                return Err(parse_err(pos, format!("duplicate key '{key}'")));
            }
            fields.push((
                key,
                Field { pos, value_pos: pos + eq + 1, value: &tok[eq + 1..], used: false },
            ));
        }

        let mut take = |names: &[&str]| -> Option<(usize, String)> {
            fields.iter_mut().find(|(k, _)| names.contains(k)).map(|(_, f)| {
                f.used = true;
                (f.value_pos, f.value.to_string())
            })
        };
        fn real(v: Option<(usize, String)>, key: &str, fam_pos: usize) -> Result<f64> {
            let (pos, text) = v.ok_or_else(|| parse_err(fam_pos, format!("missing key '{key}'")))?;
            text.parse::<f64>()
                .map_err(|_| parse_err(pos, format!("'{text}' is not a number")))
        }
        fn integer(v: Option<(usize, String)>, key: &str, fam_pos: usize) -> Result<usize> {
            let (pos, text) = v.ok_or_else(|| parse_err(fam_pos, format!("missing key '{key}'")))?;
            text.parse::<usize>()
                .map_err(|_| parse_err(pos, format!("'{text}' is not a non-negative integer")))
        }

        let (base, default_k) = match family.to_ascii_lowercase().as_str() {
            "fock" => (StateSpec::Fock { l: integer(take(&["l"]), "l", fam_pos)? }, 0),
            "vacuum" => (StateSpec::Fock { l: 0 }, 0),
            fam @ ("coherent" | "ecs") => {
                let (pos, text) = take(&["alpha"])
                    .ok_or_else(|| parse_err(fam_pos, "missing key 'alpha'"))?;
                let alpha = Complex64::from_str(&text)
                    .map_err(|_| parse_err(pos, format!("'{text}' is not a complex number")))?;
                (StateSpec::Coherent { alpha }, usize::from(fam == "ecs"))
            }
            fam @ ("thermal" | "ets") => (
                StateSpec::Thermal { nbar: real(take(&["nbar"]), "nbar", fam_pos)? },
                usize::from(fam == "ets"),
            ),
            fam @ ("binomial" | "ebs") => {
                let eta = real(take(&["eta"]), "eta", fam_pos)?;
                let m = integer(take(&["M", "m"]), "M", fam_pos)?;
                (StateSpec::Binomial { eta, m }, usize::from(fam == "ebs"))
            }
            other => {
                return Err(parse_err(fam_pos, format!("unknown state family '{other}'")));
            }
        };
        let k = match take(&["k"]) {
            Some(v) => integer(Some(v), "k", fam_pos)?,
            None => default_k,
        };
        if let Some((key, f)) = fields.iter().find(|(_, f)| !f.used) {
            return Err(parse_err(f.pos, format!("unknown key '{key}' for family '{family}'")));
        }
        let spec = if k == 0 {
            if default_k == 1 {
                return Err(parse_err(fam_pos, format!("'{family}' requires k >= 1")));
            }
            base
        } else {
            StateSpec::added(k, base)
        };
        spec.validate().map_err(|e| match e {
            Error::Domain(msg) => parse_err(fam_pos, msg),
            other => other,
        })?;
        Ok(spec)
    }
}
