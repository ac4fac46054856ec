//! The d-dimensional Clayton copula.
//!
//! `C(u) = [sum_j (u_j^-beta - 1) + 1]^(-1/beta)` with generator
//! `phi(t) = (t^-beta - 1) / beta` and inverse generator (the Laplace
//! transform of a Gamma(1/beta, scale beta) variable)
//! `psi(s) = (1 + beta s)^(-1/beta)`.
//!
//! Evaluation goes through `exp`/`ln` so that `u` near zero with a large
//! `beta` does not overflow `u^-beta`. Below [`INDEPENDENCE_BETA`] every
//! routine switches to the product-copula limit.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{Error, Result};

/// Parameters at or below this are treated as the independence limit.
pub const INDEPENDENCE_BETA: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaytonParam {
    beta: f64,
}

impl ClaytonParam {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::domain("beta", beta, "[0, inf)"));
        }
        Ok(Self { beta })
    }

    pub fn independence() -> Self {
        Self { beta: 0.0 }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_independent(&self) -> bool {
        self.beta <= INDEPENDENCE_BETA
    }

    /// Lower-tail dependence coefficient `2^(-1/beta)`.
    pub fn lower_tail_dependence(&self) -> f64 {
        if self.is_independent() {
            0.0
        } else {
            (-std::f64::consts::LN_2 / self.beta).exp()
        }
    }
}

/// `phi(t) = (t^-beta - 1) / beta`, or `-ln t` in the independence limit.
pub fn generator(t: f64, c: ClaytonParam) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain("t", t, "(0, 1]"));
    }
    if t == 0.0 {
        return Err(Error::Overflow("Clayton generator at t = 0"));
    }
    if c.is_independent() {
        return Ok(-t.ln());
    }
    let v = (-c.beta * t.ln()).exp_m1() / c.beta;
    if v.is_infinite() {
        return Err(Error::Overflow("Clayton generator"));
    }
    Ok(v)
}

/// `psi(s) = (1 + beta s)^(-1/beta)`, or `exp(-s)` in the independence limit.
pub fn inv_generator(s: f64, c: ClaytonParam) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain("s", s, "[0, inf)"));
    }
    Ok(psi(s, c.beta))
}

#[inline]
fn psi(s: f64, beta: f64) -> f64 {
    if beta <= INDEPENDENCE_BETA {
        (-s).exp()
    } else {
        (-(beta * s).ln_1p() / beta).exp()
    }
}

/// Clayton copula CDF at `u`.
pub fn clayton_cdf(u: &[f64], c: ClaytonParam) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    for &uj in u {
        if !(0.0..=1.0).contains(&uj) {
            return Err(Error::domain("u", uj, "[0, 1]"));
        }
    }
    if u.contains(&0.0) {
        return Ok(0.0);
    }
    if c.is_independent() {
        return Ok(u.iter().product());
    }
    Ok(archimedean_sum_cdf(
        u.iter().map(|&uj| (uj, c.beta)),
        c.beta,
    ))
}

/// `[sum_j (u_j^-beta_j - 1) + 1]^(-1/outer)` for strictly positive `u_j`
/// and `outer > 0`.
///
/// With every `beta_j` equal to `outer` this is the Clayton CDF; the
/// per-term form is what the literal-per-term fluid-antenna CDF evaluates.
pub(crate) fn archimedean_sum_cdf<I>(terms: I, outer: f64) -> f64
where
    I: IntoIterator<Item = (f64, f64)>,
{
    // ln(u^-b - 1) per term; terms with b -> 0 vanish for fixed u > 0
    let logs: Vec<f64> = terms
        .into_iter()
        .filter(|&(_, beta)| beta > INDEPENDENCE_BETA)
        .map(|(u, beta)| {
            let a = -beta * u.ln();
            a + (-(-a).exp()).ln_1p()
        })
        .collect();
    let sum: f64 = logs.iter().map(|l| l.exp()).sum();
    let ln_total = if sum.is_finite() {
        sum.ln_1p()
    } else {
        let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        m + (logs.iter().map(|l| (l - m).exp()).sum::<f64>() + (-m).exp()).ln()
    };
    (-ln_total / outer).exp()
}

/// One exchangeable Clayton vector of dimension `d` by the Marshall-Olkin
/// construction: `J ~ Gamma(1/beta, beta)`, `E_i ~ Exp(1)`, `U_i = psi(E_i / J)`.
pub fn clayton_sample<R: Rng + ?Sized>(rng: &mut R, d: usize, c: ClaytonParam) -> Vec<f64> {
    let mut out = vec![0.0; d];
    ClaytonSampler::new(c).fill(rng, &mut out);
    out
}

/// Reusable sampler; holds the mixing Gamma distribution.
#[derive(Debug, Clone, Copy)]
pub struct ClaytonSampler {
    beta: f64,
    mixing: Option<Gamma<f64>>,
}

impl ClaytonSampler {
    pub fn new(c: ClaytonParam) -> Self {
        let mixing = if c.is_independent() {
            None
        } else {
            // shape 1/beta > 0 and scale beta > 0, both finite
            Some(Gamma::new(1.0 / c.beta, c.beta).expect("valid gamma parameters"))
        };
        Self {
            beta: c.beta,
            mixing,
        }
    }

    /// Overwrites `out` with one Clayton vector of dimension `out.len()`.
    pub fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self.mixing {
            None => {
                for u in out.iter_mut() {
                    *u = rng.random();
                }
            }
            Some(gamma) => {
                let j = gamma.sample(rng);
                for u in out.iter_mut() {
                    // E = -ln S with S uniform on (0, 1)
                    let e: f64 = Exp1.sample(rng);
                    *u = psi(e / j, self.beta);
                }
            }
        }
    }
}

/// Spearman's rho of the bivariate Clayton copula,
/// `12 * integral C(u, v) du dv - 3`, by tensor Gauss-Legendre quadrature.
pub fn spearman_exact(c: ClaytonParam) -> f64 {
    if c.is_independent() {
        return 0.0;
    }
    let (nodes, weights) = composite_gauss_legendre(32, 16);
    let mut total = 0.0;
    for (&u, &wu) in nodes.iter().zip(&weights) {
        let mut row = 0.0;
        for (&v, &wv) in nodes.iter().zip(&weights) {
            row += wv * archimedean_sum_cdf([(u, c.beta), (v, c.beta)], c.beta);
        }
        total += wu * row;
    }
    12.0 * total - 3.0
}

/// Nodes and weights on [0, 1] from `panels` equal sub-intervals, each with an
/// `order`-point Gauss-Legendre rule.
fn composite_gauss_legendre(panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (&xi, &wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// Gauss-Legendre nodes and weights on [-1, 1], roots by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Spearman rank correlation: Pearson correlation of the ranks, with tied
/// values sharing their average rank.
pub fn empirical_spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let rx = average_ranks(x)?;
    let ry = average_ranks(y)?;
    pearson(&rx, &ry)
}

fn average_ranks(v: &[f64]) -> Result<Vec<f64>> {
    if let Some(&bad) = v.iter().find(|a| a.is_nan()) {
        return Err(Error::domain("value", bad, "non-NaN reals"));
    }
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && v[idx[j]] == v[idx[i]] {
            j += 1;
        }
        // ranks are 1-based; positions i..j share the mean of (i+1)..=j
        let r = 0.5 * ((i + 1) + j) as f64;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    Ok(ranks)
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
