//! Fisher-Snedecor F distribution of the squared channel gain `|h|^2`.
//!
//! CDF: `F(v) = I_{m1 v / (m1 v + m2)}(m1/2, m2/2)`, unit scale.

use rand::Rng;

use crate::error::{Error, Result};
use crate::specfun::{inc_beta_pair, inv_reg_inc_beta, BetaParams};

/// F-distributed squared gain with degrees of freedom `(m1, m2)`.
///
/// `m1` controls multipath severity, `m2` shadowing. The mean is finite
/// only for `m2 > 2`; see [`FMarginal::has_finite_mean`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FMarginal {
    m1: f64,
    m2: f64,
    shapes: BetaParams,
}

impl FMarginal {
    pub fn new(m1: f64, m2: f64) -> Result<Self> {
        if !(m1 > 0.0 && m1.is_finite()) {
            return Err(Error::domain("m1", m1, "(0, inf)"));
        }
        if !(m2 > 0.0 && m2.is_finite()) {
            return Err(Error::domain("m2", m2, "(0, inf)"));
        }
        Ok(Self {
            m1,
            m2,
            shapes: BetaParams::new(0.5 * m1, 0.5 * m2)?,
        })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn has_finite_mean(&self) -> bool {
        self.m2 > 2.0
    }

    /// `m2 / (m2 - 2)` when `m2 > 2`.
    pub fn mean(&self) -> Option<f64> {
        self.has_finite_mean().then(|| self.m2 / (self.m2 - 2.0))
    }

    pub fn cdf(&self, v: f64) -> Result<f64> {
        marginal_cdf(v, self)
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        marginal_quantile(u, self)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        marginal_sample(rng, self)
    }
}

pub fn marginal_cdf(v: f64, m: &FMarginal) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::domain("v", v, "[0, inf)"));
    }
    if v == f64::INFINITY {
        return Ok(1.0);
    }
    let t = m.m1 * v;
    let x = t / (t + m.m2);
    Ok(inc_beta_pair(x, m.shapes)?.0)
}

/// Inverse of [`marginal_cdf`].
///
/// Solves on whichever side of the beta variable keeps full precision: for
/// `u > 1/2` the complement `y = 1 - x` is found from `I_y(b, a) = 1 - u`, so
/// that `v = m2 (1 - y) / (m1 y)` never divides by a rounded `1 - x`.
pub fn marginal_quantile(u: f64, m: &FMarginal) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain("u", u, "[0, 1)"));
    }
    if u == 1.0 {
        return Err(Error::InfiniteGain);
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let (x, y) = if u <= 0.5 {
        let x = inv_reg_inc_beta(u, m.shapes)?;
        (x, 1.0 - x)
    } else {
        let y = inv_reg_inc_beta(1.0 - u, m.shapes.swapped())?;
        (1.0 - y, y)
    };
    if y == 0.0 {
        return Err(Error::InfiniteGain);
    }
    Ok(m.m2 * x / (m.m1 * y))
}

/// One inverse-transform draw.
pub fn marginal_sample<R: Rng + ?Sized>(rng: &mut R, m: &FMarginal) -> f64 {
    loop {
        // open interval (0, 1): u = 0 maps to zero gain, u = 1 has no finite quantile
        let u: f64 = rng.random();
        if u > 0.0 {
            if let Ok(v) = marginal_quantile(u, m) {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Closed form for (m1, m2) = (2, 4): I_x(1, 2) = 1 - (1-x)^2 with
    /// x = v / (v + 2), hence F(v) = 1 - 4 / (v + 2)^2.
    fn cdf_2_4(v: f64) -> f64 {
        1.0 - 4.0 / ((v + 2.0) * (v + 2.0))
    }

    fn f24() -> FMarginal {
        FMarginal::new(2.0, 4.0).unwrap()
    }

    #[test]
    fn cdf_examples() {
        let m = f24();
        assert_eq!(marginal_cdf(0.0, &m).unwrap(), 0.0);
        assert!((marginal_cdf(2.0, &m).unwrap() - 0.75).abs() < 1e-12);
        assert!((marginal_cdf(1e12, &m).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(marginal_cdf(f64::INFINITY, &m).unwrap(), 1.0);
        for &v in &[1e-11, 3e-3, 0.4, 7.0, 150.0] {
            let got = marginal_cdf(v, &m).unwrap();
            assert!((got - cdf_2_4(v)).abs() < 1e-12, "v={v}");
        }
        assert!(marginal_cdf(-1.0, &m).is_err());
        assert!(marginal_cdf(f64::NAN, &m).is_err());
    }

    #[test]
    fn quantile_examples() {
        let m = f24();
        assert_eq!(marginal_quantile(0.0, &m).unwrap(), 0.0);
        assert!((marginal_quantile(0.75, &m).unwrap() - 2.0).abs() < 1e-9);
        let v = marginal_quantile(0.3, &m).unwrap();
        assert!((marginal_cdf(v, &m).unwrap() - 0.3).abs() < 1e-8);
        assert!(matches!(
            marginal_quantile(1.0, &m),
            Err(Error::InfiniteGain)
        ));
        assert!(marginal_quantile(-0.1, &m).is_err());
    }

    #[test]
    fn quantile_upper_tail() {
        let m = f24();
        // F(v) = 1 - 4/(v+2)^2  =>  v = 2/sqrt(1-u) - 2
        for u in [0.9f64, 0.999, 1.0 - 1e-9] {
            let want = 2.0 / (1.0 - u).sqrt() - 2.0;
            let got = marginal_quantile(u, &m).unwrap();
            assert!(((got - want) / want).abs() < 1e-9, "u={u}");
        }
    }

    #[test]
    fn constructor_rejects_bad_dof() {
        assert!(FMarginal::new(0.0, 4.0).is_err());
        assert!(FMarginal::new(2.0, -1.0).is_err());
        assert!(!FMarginal::new(2.0, 1.5).unwrap().has_finite_mean());
        assert_eq!(f24().mean(), Some(2.0));
    }

    #[test]
    fn sampling_is_deterministic_and_nonnegative() {
        let m = f24();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..1000).map(|_| m.sample(&mut rng)).collect::<Vec<_>>()
        };
        let a = draw(7);
        assert_eq!(a, draw(7));
        assert!(a.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn empirical_cdf_matches() {
        let m = f24();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut xs: Vec<f64> = (0..100_000).map(|_| m.sample(&mut rng)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = xs.len() as f64;
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let f = marginal_cdf(v, &m).unwrap();
                (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks <= 0.01, "ks = {ks}");
    }
}
