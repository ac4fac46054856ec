//! Port geometry of a linear fluid antenna, Jakes spatial correlation between
//! ports, and the rank-correlation bridge to a Clayton dependence parameter.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::bessel_j0;

/// `N` ports spread evenly over an aperture of `W` wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortGeometry {
    ports: usize,
    aperture: f64,
}

impl PortGeometry {
    pub fn new(ports: usize, aperture: f64) -> Result<Self> {
        if ports == 0 {
            return Err(Error::Config("port count must be at least 1".into()));
        }
        if !(aperture > 0.0 && aperture.is_finite()) {
            return Err(Error::domain("W", aperture, "(0, inf)"));
        }
        Ok(Self { ports, aperture })
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    /// Aperture length in wavelengths.
    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.ports {
            return Err(Error::PortIndex {
                index: n,
                ports: self.ports,
            });
        }
        Ok(())
    }
}

/// Distance of port `n` (1-based) from port 1, in wavelengths.
pub fn port_distance(n: usize, g: &PortGeometry) -> Result<f64> {
    g.check_index(n)?;
    if g.ports == 1 {
        return Ok(0.0);
    }
    Ok((n - 1) as f64 / (g.ports - 1) as f64 * g.aperture)
}

/// Jakes correlation between port 1 and port `n`: `delta_sq * J0(2 pi d_n)`.
pub fn jakes_eta(n: usize, g: &PortGeometry, delta_sq: f64) -> Result<f64> {
    let d = port_distance(n, g)?;
    Ok(delta_sq * bessel_j0(2.0 * PI * d))
}

/// Clayton parameter whose approximate Spearman rho equals `eta`:
/// `beta = 4 eta / (3 - 2 eta)`.
///
/// Negative correlation is clamped to independence since Clayton only
/// models positive dependence.
pub fn beta_from_eta(eta: f64) -> Result<f64> {
    if !(eta < 1.5) || !eta.is_finite() {
        return Err(Error::domain("eta", eta, "(-inf, 1.5)"));
    }
    let e = eta.max(0.0);
    Ok(4.0 * e / (3.0 - 2.0 * e))
}

/// Approximate Spearman rho of a bivariate Clayton copula,
/// `3 beta / (2 (beta + 2))`.
pub fn spearman_approx(beta: f64) -> f64 {
    3.0 * beta / (2.0 * (beta + 2.0))
}

/// How a per-port correlation profile collapses into the Clayton
/// parameter used by the copula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BetaPolicy {
    /// Per-port `beta_n` inside the sum, the mean of `beta_2..beta_N` in the
    /// outer exponent.
    LiteralPerTerm,
    /// One `beta` from the mean of `eta_2..eta_N`.
    #[default]
    MeanEta,
    /// One `beta` from the adjacent-port coefficient `eta_2`.
    AdjacentEta,
}

impl BetaPolicy {
    pub fn is_single_beta(self) -> bool {
        !matches!(self, BetaPolicy::LiteralPerTerm)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BetaPolicy::LiteralPerTerm => "literal",
            BetaPolicy::MeanEta => "mean",
            BetaPolicy::AdjacentEta => "adjacent",
        }
    }
}

impl fmt::Display for BetaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BetaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "literal" | "literal-per-term" => Ok(BetaPolicy::LiteralPerTerm),
            "mean" | "mean-eta" => Ok(BetaPolicy::MeanEta),
            "adjacent" | "adjacent-eta" => Ok(BetaPolicy::AdjacentEta),
            other => Err(Error::Config(format!(
                "unknown policy '{other}' (expected literal, mean or adjacent)"
            ))),
        }
    }
}

/// Per-port Jakes coefficients and the Clayton parameters derived from them.
///
/// Vectors are indexed from zero: `eta[0]` is port 1 and equals `delta_sq`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationProfile {
    pub eta: Vec<f64>,
    pub delta_sq: f64,
    pub beta: Vec<f64>,
    pub beta_effective: f64,
    pub policy: BetaPolicy,
}

pub fn build_profile(
    g: &PortGeometry,
    delta_sq: f64,
    policy: BetaPolicy,
) -> Result<CorrelationProfile> {
    if !(delta_sq > 0.0 && delta_sq < 1.5) {
        return Err(Error::domain("delta_sq", delta_sq, "(0, 1.5)"));
    }
    let eta = (1..=g.ports)
        .map(|n| jakes_eta(n, g, delta_sq))
        .collect::<Result<Vec<_>>>()?;
    let beta = eta
        .iter()
        .map(|&e| beta_from_eta(e))
        .collect::<Result<Vec<_>>>()?;

    let beta_effective = if g.ports == 1 {
        0.0
    } else {
        let others = (g.ports - 1) as f64;
        match policy {
            BetaPolicy::MeanEta => beta_from_eta(eta[1..].iter().sum::<f64>() / others)?,
            BetaPolicy::AdjacentEta => beta[1],
            BetaPolicy::LiteralPerTerm => beta[1..].iter().sum::<f64>() / others,
        }
    };

    Ok(CorrelationProfile {
        eta,
        delta_sq,
        beta,
        beta_effective,
        policy,
    })
}
