//! Flat `key = value` parameter files.
//!
//! Keys are the [`PhysicalParams`] field names. Frequencies and rates are
//! ordinary frequencies in Hz, angles are radians. Complex amplitudes are
//! written `re` or `re, im`. Lines starting with `#` are comments, and so is
//! anything after a `#` on a line. Missing keys keep the reference values
//! (κ = 2π × 0.8 kHz); `kappa_b` follows `kappa_h / 2000` unless given.
//!
//! ```text
//! # cavity
//! kappa   = 6.4e3
//! delta1  = -120e6
//! omega1  = 10e6, 0
//! theta_L = 0
//! ```

use std::path::Path;

use crate::{hz, Error, PhysicalParams, Result, C64};

pub const KEYS: [&str; 14] = [
    "gamma",
    "kappa",
    "kappa_b",
    "kappa_h",
    "nu",
    "eta",
    "g_c",
    "omega1",
    "omega2",
    "delta1",
    "delta2_override",
    "theta_L",
    "theta_c",
    "phi_c",
];

/// Accumulates assignments; `kappa_b` is resolved at the end.
#[derive(Clone, Debug)]
pub struct ConfigBuilder {
    params: PhysicalParams,
    kappa_b_set: bool,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        Self { params: PhysicalParams::reference(hz(0.8e3)), kappa_b_set: false }
    }
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{}` is not a number", s.trim()))?;
    if !v.is_finite() {
        return Err(format!("`{}` is not finite", s.trim()));
    }
    Ok(v)
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(C64::new(parse_real(re)?, 0.0)),
        [re, im] => Ok(C64::new(parse_real(re)?, parse_real(im)?)),
        _ => Err(format!("`{}` is not `re` or `re, im`", s.trim())),
    }
}

impl ConfigBuilder {
    pub fn from_params(params: PhysicalParams) -> Self {
        Self { params, kappa_b_set: true }
    }

    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let p = &mut self.params;
        match key {
            "gamma" => p.gamma = hz(parse_real(value)?),
            "kappa" => p.kappa = hz(parse_real(value)?),
            "kappa_b" => {
                p.kappa_b = hz(parse_real(value)?);
                self.kappa_b_set = true;
            }
            "kappa_h" => p.kappa_h = hz(parse_real(value)?),
            "nu" => p.nu = hz(parse_real(value)?),
            "eta" => p.eta = parse_real(value)?,
            "g_c" => p.g_c = parse_complex(value)? * hz(1.0),
            "omega1" => p.omega1 = parse_complex(value)? * hz(1.0),
            "omega2" => p.omega2 = parse_complex(value)? * hz(1.0),
            "delta1" => p.delta1 = hz(parse_real(value)?),
            "delta2_override" => {
                p.delta2_override = match value.trim() {
                    "" | "none" => None,
                    v => Some(hz(parse_real(v)?)),
                }
            }
            "theta_L" => p.theta_l = parse_real(value)?,
            "theta_c" => p.theta_c = parse_real(value)?,
            "phi_c" => p.phi_c = parse_real(value)?,
            other => return Err(format!("unknown key `{other}` (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    pub fn build(mut self) -> Result<PhysicalParams> {
        if !self.kappa_b_set {
            self.params.kappa_b = self.params.kappa_h / 2000.0;
        }
        self.params.validate()?;
        Ok(self.params)
    }
}

/// Parses one assignment line of the form `key = value`.
pub fn split_assignment(line: &str) -> Option<std::result::Result<(&str, &str), String>> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return None;
    }
    Some(match body.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(format!("expected `key = value`, got `{body}`")),
    })
}

pub fn parse_config_into(text: &str, builder: &mut ConfigBuilder) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let Some(kv) = split_assignment(line) else { continue };
        let (key, value) = kv.map_err(|message| Error::Config { line: line_no, message })?;
        if !seen.insert(key.to_string()) {
            return Err(Error::Config { line: line_no, message: format!("duplicate key `{key}`") });
        }
        builder.set(key, value).map_err(|message| Error::Config { line: line_no, message })?;
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<PhysicalParams> {
    let mut b = ConfigBuilder::default();
    parse_config_into(text, &mut b)?;
    b.build()
}

pub fn load_config(path: &Path) -> Result<PhysicalParams> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Renders parameters back into the file format, Hz and radians.
pub fn to_config_text(p: &PhysicalParams) -> String {
    let f = |x: f64| format!("{:.12e}", x / hz(1.0));
    let z = |x: C64| format!("{:.12e}, {:.12e}", x.re / hz(1.0), x.im / hz(1.0));
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
    line("gamma", f(p.gamma));
    line("kappa", f(p.kappa));
    line("kappa_b", f(p.kappa_b));
    line("kappa_h", f(p.kappa_h));
    line("nu", f(p.nu));
    line("eta", format!("{:.12e}", p.eta));
    line("g_c", z(p.g_c));
    line("omega1", z(p.omega1));
    line("omega2", z(p.omega2));
    line("delta1", f(p.delta1));
    line("delta2_override", p.delta2_override.map(f).unwrap_or_else(|| "none".into()));
    line("theta_L", format!("{:.12e}", p.theta_l));
    line("theta_c", format!("{:.12e}", p.theta_c));
    line("phi_c", format!("{:.12e}", p.phi_c));
    s
}
