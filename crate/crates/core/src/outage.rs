//! Outage probability of the K-user dirty multiple access channel.
//!
//! Outage happens when the sum-rate bound
//! `0.5 log2(1 + gbar * min_k g_k)` falls below `R_th`, where `g_k` is the
//! best-port squared gain of user `k`. Equivalently the weakest user's gain
//! is below `gamma_th = (2^(2 R_th) - 1) / gbar`. Users fade independently,
//! so `P_out = 1 - (1 - F_fas(gamma_th))^K`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::copula::ClaytonSampler;
use crate::error::{Error, Result};
use crate::fading::marginal_quantile;
use crate::fas::{fas_cdf, FasChannel};
use crate::spatial::BetaPolicy;

/// Trials per random stream. Fixed so that results do not depend on the
/// number of worker threads.
pub const MC_BATCH: u64 = 16_384;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// One operating point. All users share the same channel statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Transmit power, dBm.
    pub p_dbm: f64,
    /// Noise power, dBm.
    pub sigma_sq_dbm: f64,
    /// Sum-rate threshold, bit/s/Hz.
    pub rate_threshold: f64,
    pub users: usize,
    pub channel: FasChannel,
}

impl SystemConfig {
    pub fn new(
        p_dbm: f64,
        sigma_sq_dbm: f64,
        rate_threshold: f64,
        users: usize,
        channel: FasChannel,
    ) -> Result<Self> {
        if users == 0 {
            return Err(Error::Config("user count K must be at least 1".into()));
        }
        if !(rate_threshold > 0.0 && rate_threshold.is_finite()) {
            return Err(Error::domain("R_th", rate_threshold, "(0, inf)"));
        }
        if !(p_dbm.is_finite() && sigma_sq_dbm.is_finite()) {
            return Err(Error::Config("powers must be finite".into()));
        }
        Ok(Self {
            p_dbm,
            sigma_sq_dbm,
            rate_threshold,
            users,
            channel,
        })
    }

    /// Builds a config at a given average SNR, keeping the noise floor at
    /// `sigma_sq_dbm` and setting the transmit power accordingly.
    pub fn at_snr_db(
        snr_db: f64,
        sigma_sq_dbm: f64,
        rate_threshold: f64,
        users: usize,
        channel: FasChannel,
    ) -> Result<Self> {
        Self::new(
            snr_db + sigma_sq_dbm,
            sigma_sq_dbm,
            rate_threshold,
            users,
            channel,
        )
    }

    pub fn delta_sq(&self) -> f64 {
        self.channel.profile.delta_sq
    }

    /// Average SNR in dB.
    pub fn avg_snr_db(&self) -> f64 {
        self.p_dbm - self.sigma_sq_dbm
    }

    /// Average SNR `P / sigma^2`, linear.
    pub fn avg_snr(&self) -> f64 {
        db_to_linear(self.p_dbm) / db_to_linear(self.sigma_sq_dbm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageResult {
    pub op_closed: f64,
    pub op_mc: f64,
    pub mc_stderr: f64,
    pub outages: u64,
    pub trials: u64,
    pub seed: u64,
    pub policy: BetaPolicy,
}

pub fn gamma_threshold(cfg: &SystemConfig) -> f64 {
    (2.0 * cfg.rate_threshold * std::f64::consts::LN_2).exp_m1() / cfg.avg_snr()
}

/// Sum-rate bound of the capacity region for the weakest user's gain.
pub fn sum_rate(min_gain_sq: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(min_gain_sq >= 0.0) {
        return Err(Error::domain("min_gain_sq", min_gain_sq, "[0, inf)"));
    }
    Ok(0.5 * (cfg.avg_snr() * min_gain_sq).ln_1p() / std::f64::consts::LN_2)
}

pub fn outage_closed(cfg: &SystemConfig) -> Result<f64> {
    let f = fas_cdf(gamma_threshold(cfg), &cfg.channel)?;
    Ok(users_outage(f, cfg.users))
}

/// `1 - (1 - f)^k` without cancellation for small `f`.
pub(crate) fn users_outage(f: f64, k: usize) -> f64 {
    if f >= 1.0 {
        return 1.0;
    }
    if k == 1 {
        return f;
    }
    (-(k as f64 * (-f).ln_1p()).exp_m1()).clamp(0.0, 1.0)
}

/// Monte Carlo estimate of the outage probability, alongside the closed
/// form.
///
/// Trials are split into batches of [`MC_BATCH`]; batch `i` draws from the
/// ChaCha8 stream `i` of `seed`. Each trial samples `K` independent
/// Clayton port vectors (parameter `beta_effective`, whatever the analysis
/// policy), takes the best port per user and the worst user, and counts
/// an outage when that gain is below `gamma_th`.
pub fn outage_mc(cfg: &SystemConfig, trials: u64, seed: u64) -> Result<OutageResult> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let threshold = gamma_threshold(cfg);
    let sampler = ClaytonSampler::new(cfg.channel.sampling_param());
    let batches = trials.div_ceil(MC_BATCH);

    let outages = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = MC_BATCH.min(trials - b * MC_BATCH);
            let mut ports = vec![0.0; cfg.channel.ports()];
            let mut count = 0u64;
            for _ in 0..n {
                if trial_is_outage(&mut rng, cfg, &sampler, &mut ports, threshold)? {
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum::<u64>();

    let op_mc = outages as f64 / trials as f64;
    Ok(OutageResult {
        op_closed: outage_closed(cfg)?,
        op_mc,
        mc_stderr: (op_mc * (1.0 - op_mc) / trials as f64).sqrt(),
        outages,
        trials,
        seed,
        policy: cfg.channel.profile.policy,
    })
}

/// The F quantile is increasing, so the worst user's best port is found on
/// the copula uniforms and mapped to a gain once.
fn trial_is_outage<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SystemConfig,
    sampler: &ClaytonSampler,
    ports: &mut [f64],
    threshold: f64,
) -> Result<bool> {
    let mut worst = f64::INFINITY;
    for _ in 0..cfg.users {
        sampler.fill(rng, ports);
        let best = ports.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst = worst.min(best);
    }
    match marginal_quantile(worst, &cfg.channel.marginal) {
        Ok(gain) => Ok(gain < threshold),
        Err(Error::InfiniteGain) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{marginal_cdf, FMarginal};
    use crate::fas::{best_port_gain, sample_port_gains};
    use crate::spatial::PortGeometry;

    fn channel(n: usize, w: f64) -> FasChannel {
        FasChannel::new(
            PortGeometry::new(n, w).unwrap(),
            FMarginal::new(2.0, 4.0).unwrap(),
            1.0,
            BetaPolicy::MeanEta,
        )
        .unwrap()
    }

    fn cfg(snr_db: f64, r_th: f64, k: usize, ch: FasChannel) -> SystemConfig {
        SystemConfig::at_snr_db(snr_db, -80.0, r_th, k, ch).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let c = cfg(0.0, 1.0, 1, channel(1, 1.0));
        assert!((gamma_threshold(&c) - 3.0).abs() < 1e-12);
        let c = SystemConfig::new(30.0, -80.0, 1.0, 1, channel(1, 1.0)).unwrap();
        assert!((c.avg_snr() - 1e11).abs() < 1e-3);
        assert!(((gamma_threshold(&c) - 3e-11) / 3e-11).abs() < 1e-12);
        let c = cfg(0.0, 1e-12, 1, channel(1, 1.0));
        assert!(gamma_threshold(&c) < 1e-11);
    }

    #[test]
    fn sum_rate_examples() {
        let c = cfg(0.0, 1.0, 1, channel(1, 1.0));
        assert_eq!(sum_rate(0.0, &c).unwrap(), 0.0);
        assert!((sum_rate(3.0, &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((sum_rate(15.0, &c).unwrap() - 2.0).abs() < 1e-15);
        assert!(sum_rate(-1.0, &c).is_err());
    }

    #[test]
    fn rate_at_threshold_is_r_th() {
        let c = cfg(17.0, 1.3, 2, channel(4, 1.0));
        let g = gamma_threshold(&c);
        assert!((sum_rate(g, &c).unwrap() - 1.3).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::new(30.0, -80.0, 1.0, 0, channel(1, 1.0)).is_err());
        assert!(SystemConfig::new(30.0, -80.0, 0.0, 1, channel(1, 1.0)).is_err());
        let c = cfg(0.0, 1.0, 1, channel(1, 1.0));
        assert!(outage_mc(&c, 0, 1).is_err());
    }

    #[test]
    fn closed_form_reductions() {
        let c = cfg(10.0, 1.0, 1, channel(1, 1.0));
        let u = marginal_cdf(gamma_threshold(&c), &c.channel.marginal).unwrap();
        assert_eq!(outage_closed(&c).unwrap(), u);
        assert!((users_outage(0.6255, 2) - (1.0 - 0.3745f64 * 0.3745)).abs() < 1e-12);
        assert!((users_outage(0.6255, 2) - 0.8598).abs() < 1e-4);
        assert_eq!(users_outage(0.0, 7), 0.0);
        assert_eq!(users_outage(1.0, 7), 1.0);
        assert!(((users_outage(1e-12, 3) - 3e-12) / 3e-12).abs() < 1e-10);
    }

    #[test]
    fn mc_is_deterministic_and_consistent() {
        let c = cfg(5.0, 1.0, 3, channel(5, 1.0));
        let a = outage_mc(&c, 40_000, 17).unwrap();
        let b = outage_mc(&c, 40_000, 17).unwrap();
        assert_eq!(a.op_mc.to_bits(), b.op_mc.to_bits());
        assert_eq!(a.trials, 40_000);
        assert!((a.mc_stderr - (a.op_mc * (1.0 - a.op_mc) / 4e4).sqrt()).abs() < 1e-18);
        assert!((a.op_mc - a.op_closed).abs() <= 3.0 * a.mc_stderr.max(1e-3));
    }

    #[test]
    fn shortcut_matches_full_gain_path() {
        // Same stream, same draws: mapping every port through the quantile
        // and taking max/min must give the same outage decisions.
        let c = cfg(3.0, 1.0, 3, channel(4, 0.7));
        let th = gamma_threshold(&c);
        let sampler = ClaytonSampler::new(c.channel.sampling_param());
        let mut rng_a = ChaCha8Rng::seed_from_u64(9);
        let mut rng_b = ChaCha8Rng::seed_from_u64(9);
        let mut ports = vec![0.0; 4];
        let mut hits = 0;
        for _ in 0..5000 {
            let fast = trial_is_outage(&mut rng_a, &c, &sampler, &mut ports, th).unwrap();
            let worst = (0..c.users)
                .map(|_| best_port_gain(&sample_port_gains(&mut rng_b, &c.channel)).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(fast, worst < th);
            hits += fast as usize;
        }
        assert!(hits > 100 && hits < 4900);
    }
}
