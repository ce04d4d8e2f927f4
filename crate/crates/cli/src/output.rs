//! CSV tables with a leading `#` comment block.

use std::io::Write;
use std::path::Path;

use photonparity::wigner::CONVENTION;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// Numbers are written with 17 significant digits so they read back
/// bit-identically.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub config: RunConfig,
    /// `(key, value)` lines written after the config block.
    pub summary: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(command: &'static str, config: &RunConfig, header: &[&str]) -> Self {
        Table {
            command,
            config: config.clone(),
            summary: Vec::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_to(&self, out: &mut dyn Write) -> Result<()> {
        let mut head = format!(
            "# photonparity {}\n# command: {}\n# convention: {}\n",
            photonparity::VERSION,
            self.command,
            CONVENTION
        );
        head.push_str(&self.config.to_comment());
        for (k, v) in &self.summary {
            head.push_str(&format!("# {k}: {v}\n"));
        }
        out.write_all(head.as_bytes()).map_err(|source| CliError::Io { path: "<output>".into(), source })?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush().map_err(|source| CliError::Io { path: "<output>".into(), source })?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Plain `key: value` report.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Reads `tau, p_ground, p_excited` columns, skipping `#` comments.
pub fn read_trace(path: &Path) -> Result<photonparity::rabi::RabiTrace> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::Config(format!("{}: missing column '{name}'", path.display())))
    };
    let (ci, cg, ce) = (col("tau")?, col("p_ground")?, col("p_excited")?);
    let (mut taus, mut pg, mut pe) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let get = |i: usize| -> Result<f64> {
            let text = rec.get(i).unwrap_or("").trim();
            text.parse()
                .map_err(|_| CliError::Config(format!("{}: row {}: '{text}' is not a number", path.display(), line + 1)))
        };
        taus.push(get(ci)?);
        pg.push(get(cg)?);
        pe.push(get(ce)?);
    }
    Ok(photonparity::rabi::RabiTrace::from_columns(taus, pg, pe)?)
}
