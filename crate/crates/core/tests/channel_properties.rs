use fas_outage::fading::{marginal_cdf, FMarginal};
use fas_outage::fas::{best_port_gain, fas_cdf, sample_port_gains, FasChannel};
use fas_outage::outage::{outage_closed, SystemConfig};
use fas_outage::spatial::{
    beta_from_eta, build_profile, jakes_eta, spearman_approx, BetaPolicy, PortGeometry,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn channel(n: usize, w: f64, m1: f64) -> FasChannel {
    FasChannel::new(
        PortGeometry::new(n, w).unwrap(),
        FMarginal::new(m1, 4.0).unwrap(),
        1.0,
        BetaPolicy::MeanEta,
    )
    .unwrap()
}

fn with_beta(n: usize, beta: f64) -> FasChannel {
    let mut ch = channel(n, 1.0, 2.0);
    ch.profile.beta_effective = beta;
    ch
}

fn op(snr_db: f64, r_th: f64, k: usize, ch: FasChannel) -> f64 {
    outage_closed(&SystemConfig::at_snr_db(snr_db, -80.0, r_th, k, ch).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eta_beta_maps_are_inverse(eta in 0.0f64..=1.0, beta in 0.0f64..50.0) {
        prop_assert!((spearman_approx(beta_from_eta(eta).unwrap()) - eta).abs() <= 1e-12);
        let back = beta_from_eta(spearman_approx(beta)).unwrap();
        prop_assert!((back - beta).abs() <= 1e-12 * beta.max(1.0));
    }

    #[test]
    fn beta_from_eta_monotone(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(beta_from_eta(lo).unwrap() <= beta_from_eta(hi).unwrap());
    }

    #[test]
    fn jakes_bounded_by_delta(n in 2usize..64, w in 0.01f64..20.0, d in 0.01f64..1.49, idx in 0usize..64) {
        let g = PortGeometry::new(n, w).unwrap();
        let eta = jakes_eta(1 + idx % n, &g, d).unwrap();
        prop_assert!(eta.abs() <= d);
    }

    #[test]
    fn best_port_cdf_below_marginal(n in 1usize..50, w in 0.1f64..8.0, r in 0.0f64..100.0) {
        let ch = channel(n, w, 2.0);
        prop_assert!(fas_cdf(r, &ch).unwrap() <= marginal_cdf(r, &ch.marginal).unwrap() + 1e-15);
    }

    #[test]
    fn best_port_cdf_decreasing_in_ports(n in 1usize..40, beta in 0.0f64..6.0, r in 0.01f64..100.0) {
        let small = fas_cdf(r, &with_beta(n, beta)).unwrap();
        let large = fas_cdf(r, &with_beta(n + 1, beta)).unwrap();
        prop_assert!(large <= small + 1e-15);
    }

    #[test]
    fn comonotone_ports(n in 2usize..40, r in 0.0f64..100.0) {
        let f = marginal_cdf(r, &FMarginal::new(2.0, 4.0).unwrap()).unwrap();
        let near = fas_cdf(r, &with_beta(n, 100.0)).unwrap();
        prop_assert!(f - near <= f * (1.0 - (n as f64).powf(-0.01)) + 1e-12);
        let far = fas_cdf(r, &with_beta(n, 1e4)).unwrap();
        prop_assert!((f - far).abs() <= 2e-3);
    }

    #[test]
    fn outage_monotone_in_snr(s in 0.0f64..80.0, ds in 0.0f64..20.0, n in 1usize..20, w in 0.1f64..5.0, k in 1usize..33) {
        prop_assert!(op(s + ds, 1.0, k, channel(n, w, 2.0)) <= op(s, 1.0, k, channel(n, w, 2.0)));
    }

    #[test]
    fn outage_monotone_in_users(s in 0.0f64..80.0, n in 1usize..20, w in 0.1f64..5.0, k in 1usize..33) {
        prop_assert!(op(s, 1.0, k, channel(n, w, 2.0)) <= op(s, 1.0, k + 1, channel(n, w, 2.0)));
    }

    #[test]
    fn outage_monotone_in_ports(s in 0.0f64..80.0, n in 1usize..40, beta in 0.0f64..6.0, k in 1usize..33) {
        prop_assert!(op(s, 1.0, k, with_beta(n + 1, beta)) <= op(s, 1.0, k, with_beta(n, beta)));
    }

    #[test]
    fn outage_monotone_in_rate(s in 0.0f64..80.0, r in 0.1f64..4.0, dr in 0.0f64..4.0, n in 1usize..20, k in 1usize..33) {
        prop_assert!(op(s, r, k, channel(n, 1.0, 2.0)) <= op(s, r + dr, k, channel(n, 1.0, 2.0)));
    }

    #[test]
    fn outage_is_probability(s in -20.0f64..150.0, n in 1usize..50, w in 0.1f64..8.0, k in 1usize..64, m1 in 0.5f64..8.0) {
        let p = op(s, 1.0, k, channel(n, w, m1));
        prop_assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn far_port_decorrelates_with_aperture() {
    let eta = |w| jakes_eta(2, &PortGeometry::new(2, w).unwrap(), 1.0).unwrap();
    assert!(eta(4.0) < eta(0.1));
}

#[test]
fn single_beta_policies_sample_the_analysed_model() {
    for policy in [BetaPolicy::MeanEta, BetaPolicy::AdjacentEta] {
        let p = build_profile(&PortGeometry::new(10, 0.5).unwrap(), 1.0, policy).unwrap();
        assert!(p.policy.is_single_beta() && p.beta_effective >= 0.0);
    }
}

#[test]
fn sampled_best_port_matches_closed_form() {
    let ch = with_beta(4, 2.0);
    let n = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let best: Vec<f64> = (0..n)
        .map(|_| best_port_gain(&sample_port_gains(&mut rng, &ch)).unwrap())
        .collect();
    for r in [0.5, 2.0, 8.0] {
        let want = fas_cdf(r, &ch).unwrap();
        let got = best.iter().filter(|&&g| g <= r).count() as f64 / n as f64;
        let se = (want * (1.0 - want) / n as f64).sqrt();
        assert!((got - want).abs() <= 3.0 * se, "r={r}: {got} vs {want}");
    }
}
