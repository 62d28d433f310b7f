//! CSV tables with a provenance comment line.

use crate::config::Config;
use irsnet_core::bounds::KL_EXPONENT_NOTE;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io;
use std::path::Path;

/// `git describe` of the source tree at build time, or "unknown".
pub const GIT_DESCRIBE: &str = env!("IRSNET_GIT_DESCRIBE");

/// Fields that determine the numbers in an output file. Threads and the
/// output directory are left out so the hash is stable across runs.
#[derive(Serialize)]
struct Fingerprint<'a> {
    params: &'a irsnet_core::SystemParams,
    bound_params: &'a irsnet_core::BoundParams,
    name: &'a str,
    grid: &'a [f64],
    trials: usize,
    seed: u64,
    alpha_grid: Vec<f64>,
}

/// SHA-256 over the canonical JSON of everything that affects results.
pub fn param_hash(cfg: &Config) -> String {
    let fp = Fingerprint {
        params: &cfg.params,
        bound_params: &cfg.bound_params,
        name: cfg.experiment.name.as_str(),
        grid: &cfg.experiment.grid,
        trials: cfg.experiment.trials,
        seed: cfg.experiment.seed,
        alpha_grid: cfg.alphas(),
    };
    let bytes = serde_json::to_vec(&fp).expect("fingerprint serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The `#` line opening every CSV.
pub fn header_comment(cfg: &Config) -> String {
    let bp = &cfg.bound_params;
    let s = bp.lens_area_s(&cfg.params).map_or_else(|e| format!("error({e})"), fmt_f);
    format!(
        "# irsnet {}; params_sha256={}; git={}; {}; S=lens_area_formula(b={},r_co={})={}",
        cfg.experiment.name,
        param_hash(cfg),
        GIT_DESCRIBE,
        KL_EXPONENT_NOTE,
        fmt_f(bp.b),
        fmt_f(cfg.params.r_co),
        s
    )
}

/// Shortest round-trip scientific form, '.' decimal separator.
pub fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comment: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\r', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

impl Table {
    /// RFC-4180 text with CRLF line ends.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.comment);
        out.push_str("\r\n");
        out.push_str(&self.columns.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
        out.push_str("\r\n");
        for r in &self.rows {
            debug_assert_eq!(r.len(), self.columns.len());
            out.push_str(&r.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
            out.push_str("\r\n");
        }
        out
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.render())
    }

    /// Values of one column parsed as numbers.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].parse().unwrap_or(f64::NAN)).collect())
    }
}
