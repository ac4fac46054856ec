//! Statistical self-checks of the samplers behind the Monte Carlo estimator.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::copula::{
    clayton_cdf, empirical_spearman, spearman_exact, ClaytonParam, ClaytonSampler,
};
use crate::error::Result;
use crate::fading::FMarginal;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<40} {}", self.name, self.detail)
    }
}

/// 99% critical value of the one-sample Kolmogorov-Smirnov statistic.
pub fn ks_critical(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Kolmogorov-Smirnov distance between the sample and `cdf`. Sorts in place.
pub fn ks_distance(xs: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

pub const VALIDATION_BETAS: [f64; 3] = [0.5, 2.0, 4.0];
pub const JOINT_POINTS: [f64; 3] = [0.1, 0.5, 0.9];
pub const SPEARMAN_TOL: f64 = 0.01;

/// Runs the marginal and copula checks with `samples` draws each.
pub fn run_checks(samples: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let crit = ks_critical(samples);

    let m = FMarginal::new(2.0, 4.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<f64> = (0..samples).map(|_| m.sample(&mut rng)).collect();
    let ks = ks_distance(&mut xs, |v| m.cdf(v).unwrap_or(1.0));
    out.push(CheckOutcome {
        name: "F(2,4) marginal KS".into(),
        passed: ks <= crit,
        detail: format!("D = {ks:.5} (limit {crit:.5})"),
    });

    for (bi, &beta) in VALIDATION_BETAS.iter().enumerate() {
        let c = ClaytonParam::new(beta)?;
        let sampler = ClaytonSampler::new(c);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1 + bi as u64);

        let mut u1 = Vec::with_capacity(samples);
        let mut u2 = Vec::with_capacity(samples);
        let mut pair = [0.0; 2];
        for _ in 0..samples {
            sampler.fill(&mut rng, &mut pair);
            u1.push(pair[0]);
            u2.push(pair[1]);
        }
        let rho = empirical_spearman(&u1, &u2)?;
        let exact = spearman_exact(c);
        out.push(CheckOutcome {
            name: format!("Clayton beta={beta} Spearman rho"),
            passed: (rho - exact).abs() <= SPEARMAN_TOL,
            detail: format!("empirical {rho:.4} vs quadrature {exact:.4}"),
        });
        for (label, col) in [("U1", &mut u1), ("U2", &mut u2)] {
            let ks = ks_distance(col, |u| u.clamp(0.0, 1.0));
            out.push(CheckOutcome {
                name: format!("Clayton beta={beta} {label} uniform"),
                passed: ks <= crit,
                detail: format!("D = {ks:.5} (limit {crit:.5})"),
            });
        }

        for d in [2usize, 5] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(100 + 10 * bi as u64 + d as u64);
            let mut v = vec![0.0; d];
            let mut hits = [0u64; JOINT_POINTS.len()];
            for _ in 0..samples {
                sampler.fill(&mut rng, &mut v);
                let top = v.iter().copied().fold(0.0, f64::max);
                for (h, &t) in hits.iter_mut().zip(&JOINT_POINTS) {
                    *h += (top <= t) as u64;
                }
            }
            for (&t, &h) in JOINT_POINTS.iter().zip(&hits) {
                let want = clayton_cdf(&vec![t; d], c)?;
                let got = h as f64 / samples as f64;
                let se = (want * (1.0 - want) / samples as f64).sqrt();
                out.push(CheckOutcome {
                    name: format!("Clayton beta={beta} d={d} C(t..t) t={t}"),
                    passed: (got - want).abs() <= 3.0 * se,
                    detail: format!("empirical {got:.5} vs {want:.5} (3se {:.5})", 3.0 * se),
                });
            }
        }
    }
    Ok(out)
}
