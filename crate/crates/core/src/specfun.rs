//! Special functions used by the fading and spatial-correlation models.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;

const CF_MAX_ITER: usize = 10_000;
const INV_MAX_ITER: usize = 200;

/// |x| below which J0 is summed from its power series.
const J0_SERIES_LIMIT: f64 = 12.0;

/// Shape pair `(a, b)` of a beta distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain("a", a, "(0, inf)"));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain("b", b, "(0, inf)"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The pair with the shapes exchanged, as in `I_x(a,b) = 1 - I_{1-x}(b,a)`.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    fn ln_beta(&self) -> f64 {
        ln_gamma_unchecked(self.a) + ln_gamma_unchecked(self.b)
            - ln_gamma_unchecked(self.a + self.b)
    }
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Lanczos approximation (g = 7, nine terms) with the reflection formula
/// below one half.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("x", x, "(0, inf)"));
    }
    Ok(ln_gamma_unchecked(x))
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_unchecked(x: f64) -> f64 {
    // Exact at the integers where ln Γ vanishes, so ln B(1, b) etc. carry no
    // spurious offset.
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx); x > 0 here so sin(πx) > 0.
        return (PI / (PI * x).sin()).ln() - ln_gamma_unchecked(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Regularized incomplete beta function `I_x(a, b)`.
///
/// Evaluated with the modified Lentz continued fraction, switching to the
/// complementary form `1 - I_{1-x}(b, a)` when `x >= (a+1)/(a+b+2)`.
pub fn reg_inc_beta(x: f64, p: BetaParams) -> Result<f64> {
    Ok(inc_beta_pair(x, p)?.0)
}

/// Returns `(I_x(a,b), 1 - I_x(a,b))`, each computed without cancellation on
/// the side where it is small.
pub(crate) fn inc_beta_pair(x: f64, p: BetaParams) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("x", x, "[0, 1]"));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == 1.0 {
        return Ok((1.0, 0.0));
    }
    let (a, b) = (p.a, p.b);
    let ln_front = a * x.ln() + b * (-x).ln_1p() - p.ln_beta();
    if x < (a + 1.0) / (a + b + 2.0) {
        let lower = (ln_front.exp() * beta_cf(a, b, x)? / a).clamp(0.0, 1.0);
        Ok((lower, 1.0 - lower))
    } else {
        let upper = (ln_front.exp() * beta_cf(b, a, 1.0 - x)? / b).clamp(0.0, 1.0);
        Ok((1.0 - upper, upper))
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let guard = |v: f64| if v.abs() < TINY { TINY } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        routine: "incomplete beta continued fraction",
        iterations: CF_MAX_ITER,
    })
}

/// Inverse of [`reg_inc_beta`] in `x`: finds `x` with `I_x(a,b) = u`.
///
/// Newton iteration on a shrinking bracket, falling back to bisection
/// whenever the Newton step leaves the bracket.
pub fn inv_reg_inc_beta(u: f64, p: BetaParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain("u", u, "[0, 1]"));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    let (a, b) = (p.a, p.b);
    let ln_beta = p.ln_beta();

    // Leading-order tail inversions: I_x ~ x^a / (a B) near 0 and
    // 1 - I_x ~ (1-x)^b / (b B) near 1.
    let guess_lo = ((u.ln() + a.ln() + ln_beta) / a).exp();
    let guess_hi = 1.0 - (((1.0 - u).ln() + b.ln() + ln_beta) / b).exp();
    let mut x = if u < 0.5 { guess_lo } else { guess_hi };
    if !(x > 0.0 && x < 1.0) {
        x = 0.5;
    }

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut best = (f64::INFINITY, x);
    for _ in 0..INV_MAX_ITER {
        let f = reg_inc_beta(x, p)? - u;
        if f.abs() < best.0 {
            best = (f.abs(), x);
        }
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let ln_pdf = (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta;
        let mut next = x - f / ln_pdf.exp();
        if !(next > lo && next < hi) || !next.is_finite() {
            // Bisect geometrically while the bracket spans many decades.
            next = if lo > 0.0 && hi / lo > 1e3 {
                (lo * hi).sqrt()
            } else if lo == 0.0 && hi < 1e-3 {
                hi * 1e-3
            } else {
                0.5 * (lo + hi)
            };
        }
        if (next - x).abs() <= 4.0 * EPS * x.max(TINY) || hi - lo <= 4.0 * EPS * hi {
            let x = if (reg_inc_beta(next, p)? - u).abs() < best.0 {
                next
            } else {
                best.1
            };
            return Ok(x);
        }
        x = next;
    }
    if best.0 <= 1e-10 * u.clamp(1e-300, 1.0) {
        return Ok(best.1);
    }
    Err(Error::NoConvergence {
        routine: "inverse incomplete beta",
        iterations: INV_MAX_ITER,
    })
}

/// Bessel function of the first kind of order zero.
///
/// Power series for `|x| < 12`, Hankel asymptotic expansion (truncated at
/// its smallest term) beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < J0_SERIES_LIMIT {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * k);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-3) && k > q.sqrt() {
            return sum;
        }
    }
}

fn j0_asymptotic(x: f64) -> f64 {
    // a_k = prod_{j<=k} (2j-1)^2 / (k! 8^k);
    // P = sum (-1)^k a_{2k} x^{-2k},  Q = -sum (-1)^k a_{2k+1} x^{-(2k+1)}.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * x);
        if next >= prev || next < 1e-17 {
            break;
        }
        prev = next;
        term = next;
        let signed = match k % 4 {
            0 => term,
            1 => -term,
            2 => -term,
            _ => term,
        };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
