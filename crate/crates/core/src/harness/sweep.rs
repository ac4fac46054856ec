use rayon::prelude::*;

use super::config::SweepSpec;
use crate::error::{Error, Result};
use crate::fading::FMarginal;
use crate::fas::FasChannel;
use crate::outage::{outage_closed, outage_mc, SystemConfig};
use crate::spatial::{BetaPolicy, PortGeometry};

/// Average-SNR axis of the built-in figure specs, in dB.
pub const FIGURE_SNR_DB: [f64; 9] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub snr_db: f64,
    pub w: f64,
    pub n: usize,
    pub k: usize,
    pub m1: f64,
    pub m2: f64,
    pub policy: BetaPolicy,
    pub op_closed: f64,
    pub op_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    /// Monte Carlo trials behind `op_mc`; zero when Monte Carlo is off.
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    snr_db: f64,
    w: f64,
    n: usize,
    k: usize,
    m1: f64,
}

/// Grid order: K, then m1, then the (W, N) configurations (a single-port
/// configuration first, reported with the first W), then SNR.
fn grid(spec: &SweepSpec) -> Vec<GridPoint> {
    let mut configs: Vec<(f64, usize)> = Vec::new();
    if spec.n_list.contains(&1) {
        configs.push((spec.w_list[0], 1));
    }
    for &w in &spec.w_list {
        for &n in spec.n_list.iter().filter(|&&n| n != 1) {
            if !configs.contains(&(w, n)) {
                configs.push((w, n));
            }
        }
    }
    let mut points = Vec::new();
    for &k in &spec.k_list {
        for &m1 in &spec.m1_list {
            for &(w, n) in &configs {
                for &snr_db in &spec.snr_db {
                    points.push(GridPoint {
                        snr_db,
                        w,
                        n,
                        k,
                        m1,
                    });
                }
            }
        }
    }
    points
}

/// Evaluates every grid point. The closed form is always computed, Monte
/// Carlo only when enabled. Rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    grid(spec)
        .into_par_iter()
        .map(|pt| {
            evaluate(spec, pt).map_err(|e| {
                Error::Config(format!(
                    "grid point snr_db={} W={} N={} K={} m1={}: {e}",
                    pt.snr_db, pt.w, pt.n, pt.k, pt.m1
                ))
            })
        })
        .collect()
}

fn evaluate(spec: &SweepSpec, pt: GridPoint) -> Result<ResultRow> {
    let channel = FasChannel::new(
        PortGeometry::new(pt.n, pt.w)?,
        FMarginal::new(pt.m1, spec.m2)?,
        spec.delta_sq,
        spec.policy,
    )?;
    let cfg = SystemConfig::at_snr_db(pt.snr_db, spec.sigma_sq_dbm, spec.r_th, pt.k, channel)?;
    let (op_closed, op_mc, mc_stderr, trials) = if spec.mc_enabled {
        let r = outage_mc(&cfg, spec.trials, spec.seed)?;
        (r.op_closed, Some(r.op_mc), Some(r.mc_stderr), r.trials)
    } else {
        (outage_closed(&cfg)?, None, None, 0)
    };
    Ok(ResultRow {
        snr_db: pt.snr_db,
        w: pt.w,
        n: pt.n,
        k: pt.k,
        m1: pt.m1,
        m2: spec.m2,
        policy: spec.policy,
        op_closed,
        op_mc,
        mc_stderr,
        trials,
        seed: spec.seed,
    })
}

/// Outage versus SNR for W in {0.5, 4}, N in {2, 10, 40} plus a single-port
/// reference, at (m1, m2) = (2, 4). `users` picks one K, otherwise all of
/// {4, 16, 32}.
pub fn fig1_spec(users: Option<usize>) -> SweepSpec {
    SweepSpec {
        snr_db: FIGURE_SNR_DB.to_vec(),
        w_list: vec![0.5, 4.0],
        n_list: vec![1, 2, 10, 40],
        k_list: users.map_or_else(|| vec![4, 16, 32], |k| vec![k]),
        m1_list: vec![2.0],
        mc_enabled: false,
        ..SweepSpec::default()
    }
}

/// As [`fig1_spec`] with the fading parameter m1 in {2, 4}.
pub fn fig2_spec(users: Option<usize>) -> SweepSpec {
    SweepSpec {
        m1_list: vec![2.0, 4.0],
        ..fig1_spec(users)
    }
}
