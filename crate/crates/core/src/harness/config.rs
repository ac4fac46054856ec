use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spatial::BetaPolicy;

/// A parameter grid. Every combination of `snr_db x W x N x K x m1` is one
/// result row; `N = 1` rows do not depend on `W` and are evaluated once per
/// `(K, m1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub snr_db: Vec<f64>,
    pub w_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub m1_list: Vec<f64>,
    pub m2: f64,
    pub r_th: f64,
    pub delta_sq: f64,
    /// Noise floor in dBm; the transmit power follows from the SNR grid.
    pub sigma_sq_dbm: f64,
    pub policy: BetaPolicy,
    pub trials: u64,
    pub seed: u64,
    pub mc_enabled: bool,
}

pub const DEFAULT_P_DBM: f64 = 30.0;
pub const DEFAULT_SIGMA_SQ_DBM: f64 = -80.0;

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            snr_db: vec![DEFAULT_P_DBM - DEFAULT_SIGMA_SQ_DBM],
            w_list: vec![0.5],
            n_list: vec![2],
            k_list: vec![4],
            m1_list: vec![2.0],
            m2: 4.0,
            r_th: 1.0,
            delta_sq: 1.0,
            sigma_sq_dbm: DEFAULT_SIGMA_SQ_DBM,
            policy: BetaPolicy::MeanEta,
            trials: 1_000_000,
            seed: 1,
            mc_enabled: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        for (name, empty) in [
            ("snr_db", self.snr_db.is_empty()),
            ("W_list", self.w_list.is_empty()),
            ("N_list", self.n_list.is_empty()),
            ("K_list", self.k_list.is_empty()),
            ("m1_list", self.m1_list.is_empty()),
        ] {
            if empty {
                return bad(format!("{name} must not be empty"));
            }
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return bad(format!("snr_db: {s} is not finite"));
        }
        if let Some(w) = self.w_list.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return bad(format!("W_list: {w} must be positive"));
        }
        if self.n_list.contains(&0) {
            return bad("N_list: port counts must be at least 1".into());
        }
        if self.k_list.contains(&0) {
            return bad("K_list: user counts must be at least 1".into());
        }
        if let Some(m) = self.m1_list.iter().find(|&&m| !(m > 0.0 && m.is_finite())) {
            return bad(format!("m1_list: {m} must be positive"));
        }
        if !(self.m2 > 0.0 && self.m2.is_finite()) {
            return bad(format!("m2: {} must be positive", self.m2));
        }
        if !(self.r_th > 0.0 && self.r_th.is_finite()) {
            return bad(format!("R_th: {} must be positive", self.r_th));
        }
        if !(self.delta_sq > 0.0 && self.delta_sq < 1.5) {
            return bad(format!("delta_sq: {} must lie in (0, 1.5)", self.delta_sq));
        }
        if !self.sigma_sq_dbm.is_finite() {
            return bad("sigma_sq must be finite".into());
        }
        if self.mc_enabled && self.trials == 0 {
            return bad("trials must be at least 1 when mc_enabled".into());
        }
        Ok(())
    }

    fn set(
        &mut self,
        key: &str,
        value: &str,
        explicit_snr: &mut bool,
        p_dbm: &mut f64,
    ) -> Result<()> {
        match key {
            "snr_db" => {
                self.snr_db = parse_grid(value)?;
                *explicit_snr = true;
            }
            "W_list" => self.w_list = parse_list(value)?,
            "N_list" => self.n_list = parse_list(value)?,
            "K_list" => self.k_list = parse_list(value)?,
            "m1_list" => self.m1_list = parse_list(value)?,
            "m2" => self.m2 = parse_one(value)?,
            "R_th" => self.r_th = parse_one(value)?,
            "delta_sq" => self.delta_sq = parse_one(value)?,
            "P" => *p_dbm = parse_one(value)?,
            "sigma_sq" => self.sigma_sq_dbm = parse_one(value)?,
            "policy" => self.policy = value.parse()?,
            "trials" => self.trials = parse_count(value)?,
            "seed" => self.seed = parse_one(value)?,
            "mc_enabled" => self.mc_enabled = parse_bool(value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }
}

/// Parses a flat `key = value` document, then applies `overrides` in order.
///
/// Blank lines and lines starting with `#` are ignored. Lists are comma
/// separated; `snr_db` also accepts `start:step:stop`. Omitted keys keep
/// their defaults (P = 30 dBm, sigma^2 = -80 dBm, R_th = 1, delta^2 = 1,
/// (m1, m2) = (2, 4)). Unless `snr_db` is given, the SNR grid is the single
/// point `P - sigma^2`.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<SweepSpec> {
    let mut spec = SweepSpec::default();
    let mut explicit_snr = false;
    let mut p_dbm = DEFAULT_P_DBM;

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        spec.set(key.trim(), value.trim(), &mut explicit_snr, &mut p_dbm)
            .map_err(|e| Error::Config(format!("line {}: {}", i + 1, strip(e))))?;
    }
    for (key, value) in overrides {
        spec.set(key.trim(), value.trim(), &mut explicit_snr, &mut p_dbm)
            .map_err(|e| Error::Config(format!("override {key}: {}", strip(e))))?;
    }
    if !explicit_snr {
        spec.snr_db = vec![p_dbm - spec.sigma_sq_dbm];
    }
    spec.validate()?;
    Ok(spec)
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(msg) => msg,
        other => other.to_string(),
    }
}

fn parse_one<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse '{}'", s.trim())))
}

fn parse_count(s: &str) -> Result<u64> {
    // accept 1e6-style counts
    if let Ok(n) = s.trim().parse::<u64>() {
        return Ok(n);
    }
    let v: f64 = parse_one(s)?;
    if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 {
        Ok(v as u64)
    } else {
        Err(Error::Config(format!(
            "'{}' is not a non-negative integer",
            s.trim()
        )))
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Config(format!("'{other}' is not a boolean"))),
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_one)
        .collect()
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return parse_list(s);
    }
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "range '{s}' must be start:step:stop"
        )));
    }
    let start: f64 = parse_one(parts[0])?;
    let step: f64 = parse_one(parts[1])?;
    let stop: f64 = parse_one(parts[2])?;
    if !(step > 0.0) || stop < start {
        return Err(Error::Config(format!(
            "range '{s}' needs step > 0 and stop >= start"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}
