//! Best-port gain of a fluid antenna with Clayton-coupled F-distributed ports.
//!
//! All gains are squared amplitudes `|h|^2`; taking the max of `|h|` or of
//! `|h|^2` selects the same port.

use rand::Rng;

use crate::copula::{archimedean_sum_cdf, ClaytonParam, ClaytonSampler, INDEPENDENCE_BETA};
use crate::error::{Error, Result};
use crate::fading::{marginal_cdf, marginal_quantile, FMarginal};
use crate::spatial::{build_profile, BetaPolicy, CorrelationProfile, PortGeometry};

#[derive(Debug, Clone, PartialEq)]
pub struct FasChannel {
    pub geometry: PortGeometry,
    pub marginal: FMarginal,
    pub profile: CorrelationProfile,
}

impl FasChannel {
    pub fn new(
        geometry: PortGeometry,
        marginal: FMarginal,
        delta_sq: f64,
        policy: BetaPolicy,
    ) -> Result<Self> {
        let profile = build_profile(&geometry, delta_sq, policy)?;
        Ok(Self {
            geometry,
            marginal,
            profile,
        })
    }

    pub fn ports(&self) -> usize {
        self.geometry.ports()
    }

    /// Clayton parameter realized by the sampler (always the scalar one).
    pub fn sampling_param(&self) -> ClaytonParam {
        ClaytonParam::new(self.profile.beta_effective).expect("profile beta is non-negative")
    }

    pub fn cdf(&self, r: f64) -> Result<f64> {
        fas_cdf(r, self)
    }
}

/// CDF of the best-port squared gain, `P(max_n |h_n|^2 <= r)`.
///
/// Single-beta policies evaluate the Clayton copula at `N` copies of the
/// marginal CDF. The literal-per-term policy evaluates
/// `[sum_n (u^-beta_n - 1) + 1]^(-1/beta_bar)`, which tends to zero for any
/// `u < 1` when `beta_bar` vanishes.
pub fn fas_cdf(r: f64, ch: &FasChannel) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain("r", r, "[0, inf)"));
    }
    let u = marginal_cdf(r, &ch.marginal)?;
    let n = ch.ports();
    if n == 1 || u == 0.0 || u == 1.0 {
        return Ok(u);
    }
    let p = &ch.profile;
    if p.policy.is_single_beta() {
        if p.beta_effective <= INDEPENDENCE_BETA {
            return Ok(u.powi(n as i32));
        }
        return Ok(archimedean_sum_cdf(
            std::iter::repeat_n((u, p.beta_effective), n),
            p.beta_effective,
        ));
    }
    if p.beta_effective <= INDEPENDENCE_BETA {
        return Ok(if p.beta.iter().all(|&b| b <= INDEPENDENCE_BETA) {
            u.powi(n as i32)
        } else {
            0.0
        });
    }
    Ok(archimedean_sum_cdf(
        p.beta.iter().map(|&b| (u, b)),
        p.beta_effective,
    ))
}

/// One draw of the `N` port gains: Clayton uniforms with the scalar
/// `beta_effective`, each mapped through the F quantile.
///
/// A uniform that rounds to exactly 1 becomes an infinite gain.
pub fn sample_port_gains<R: Rng + ?Sized>(rng: &mut R, ch: &FasChannel) -> Vec<f64> {
    let mut u = vec![0.0; ch.ports()];
    ClaytonSampler::new(ch.sampling_param()).fill(rng, &mut u);
    u.iter()
        .map(|&ui| match marginal_quantile(ui, &ch.marginal) {
            Ok(v) => v,
            Err(Error::InfiniteGain) => f64::INFINITY,
            Err(e) => panic!("quantile of a copula sample failed: {e}"),
        })
        .collect()
}

pub fn best_port_gain(gains: &[f64]) -> Result<f64> {
    if gains.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok(gains.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}
