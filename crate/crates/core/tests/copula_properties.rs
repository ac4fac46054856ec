use fas_outage::copula::{clayton_cdf, clayton_sample, generator, inv_generator, ClaytonParam};
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn param() -> impl Strategy<Value = ClaytonParam> {
    (0.0f64..8.0).prop_map(|b| ClaytonParam::new(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn grounded(c in param(), mut u in vec(0.0f64..=1.0, 2..6), j in 0usize..6) {
        let j = j % u.len();
        u[j] = 0.0;
        prop_assert_eq!(clayton_cdf(&u, c).unwrap(), 0.0);
    }

    #[test]
    fn uniform_margins(c in param(), d in 2usize..6, t in 0.0f64..=1.0, j in 0usize..6) {
        let mut u = vec![1.0; d];
        u[j % d] = t;
        prop_assert!((clayton_cdf(&u, c).unwrap() - t).abs() <= 1e-12);
    }

    #[test]
    fn two_increasing(c in param(), a in vec(0.0f64..=1.0, 2), b in vec(0.0f64..=1.0, 2)) {
        let (x1, x2) = (a[0].min(b[0]), a[0].max(b[0]));
        let (y1, y2) = (a[1].min(b[1]), a[1].max(b[1]));
        let f = |x: f64, y: f64| clayton_cdf(&[x, y], c).unwrap();
        let volume = f(x2, y2) - f(x1, y2) - f(x2, y1) + f(x1, y1);
        prop_assert!(volume >= -1e-12, "volume {volume}");
    }

    #[test]
    fn frechet_bounds(c in param(), u in vec(0.0f64..=1.0, 2..8)) {
        let v = clayton_cdf(&u, c).unwrap();
        let lower = (u.iter().sum::<f64>() - (u.len() - 1) as f64).max(0.0);
        let upper = u.iter().copied().fold(1.0, f64::min);
        prop_assert!(lower - 1e-12 <= v && v <= upper + 1e-12, "{lower} <= {v} <= {upper}");
    }

    #[test]
    fn increasing_in_beta(b1 in 0.0f64..20.0, db in 0.0f64..20.0, t in 0.0f64..=1.0, d in 2usize..8) {
        let u = vec![t; d];
        let lo = clayton_cdf(&u, ClaytonParam::new(b1).unwrap()).unwrap();
        let hi = clayton_cdf(&u, ClaytonParam::new(b1 + db).unwrap()).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }

    #[test]
    fn comonotone_limit(t in 0.0f64..=1.0, d in 2usize..8) {
        let u = vec![t; d];
        // exact for equal arguments: t * (d - (d - 1) t^beta)^(-1/beta) >= t d^(-1/beta)
        let at100 = clayton_cdf(&u, ClaytonParam::new(100.0).unwrap()).unwrap();
        prop_assert!(t - at100 <= t * (1.0 - (d as f64).powf(-0.01)) + 1e-12);
        let far = clayton_cdf(&u, ClaytonParam::new(1e4).unwrap()).unwrap();
        prop_assert!((t - far).abs() <= 1e-3);
    }
}

#[test]
fn comonotone_gap_at_beta_100() {
    // the gap at beta = 100 is t (1 - 2^(-1/100)) away from the boundary
    let c = ClaytonParam::new(100.0).unwrap();
    for t in [0.05, 0.1, 0.5, 0.9] {
        let v = clayton_cdf(&[t, t], c).unwrap();
        let exact = t * (2.0 - t.powf(100.0)).powf(-0.01);
        assert!((v - exact).abs() <= 1e-14, "t={t}");
    }
    assert!(0.5 - clayton_cdf(&[0.5, 0.5], c).unwrap() > 3e-3);
}

#[test]
fn generator_round_trip() {
    for beta in [1e-6, 0.1, 0.5, 1.0, 2.0, 4.0, 10.0] {
        let c = ClaytonParam::new(beta).unwrap();
        for k in 0..=60 {
            let t = 10f64.powf(-6.0 + 0.1 * k as f64);
            let back = inv_generator(generator(t, c).unwrap(), c).unwrap();
            assert!((back - t).abs() <= 1e-12, "beta={beta} t={t} back={back}");
        }
    }
}

#[test]
fn sampler_matches_cdf_on_diagonal() {
    let n = 200_000;
    for beta in [0.5, 2.0, 4.0] {
        let c = ClaytonParam::new(beta).unwrap();
        for d in [2usize, 5] {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + d as u64);
            let draws: Vec<f64> = (0..n)
                .map(|_| {
                    clayton_sample(&mut rng, d, c)
                        .into_iter()
                        .fold(0.0, f64::max)
                })
                .collect();
            for t in [0.1, 0.5, 0.9] {
                let want = clayton_cdf(&vec![t; d], c).unwrap();
                let got = draws.iter().filter(|&&m| m <= t).count() as f64 / n as f64;
                let se = (want * (1.0 - want) / n as f64).sqrt();
                assert!(
                    (got - want).abs() <= 3.0 * se,
                    "beta={beta} d={d} t={t}: {got} vs {want}"
                );
            }
        }
    }
}
