//! Special functions: log-Gamma, Beta, binomial coefficients and generalized
//! Laguerre polynomials.
//!
//! Everything that involves Gamma-function ratios elsewhere in the crate goes
//! through [`log_gamma`] and is exponentiated last; `Γ(2k+n)` overflows a
//! double near `n ≈ 170`.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Godfrey's Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Number of `ζ(k) − 1` terms kept in the small-argument series.
const ZETA_TERMS: usize = 40;

/// `ζ(k) − 1` for `k = 2..ZETA_TERMS+2`, by direct summation plus an
/// Euler–Maclaurin tail. Subtracting the leading 1 analytically keeps the
/// small values accurate.
fn zeta_minus_one() -> &'static [f64; ZETA_TERMS] {
    static TABLE: OnceLock<[f64; ZETA_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_2, B_4, ..., B_12
        const BERNOULLI: [f64; 6] = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
        ];
        const CUT: usize = 20;
        let mut out = [0.0; ZETA_TERMS];
        for (slot, k) in out.iter_mut().zip(2..) {
            let s = k as f64;
            let n = CUT as f64;
            // tail Σ_{m ≥ CUT} m^{-s}
            let mut tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
            let mut rising = s; // s (s+1) ... (s+2j-2)
            let mut factorial = 2.0; // (2j)!
            for (j, b) in BERNOULLI.iter().enumerate() {
                let j = j + 1;
                tail += b / factorial * rising * n.powf(-s - 2.0 * j as f64 + 1.0);
                rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
                factorial *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
            }
            let head: f64 = (2..CUT).rev().map(|m| (m as f64).powf(-s)).sum();
            *slot = head + tail;
        }
        out
    })
}

/// `Σ_{k≥2} (ζ(k) − 1)(−ε)^k / k`, valid for `|ε| ≤ 1/2`.
fn zeta_series(eps: f64) -> f64 {
    let table = zeta_minus_one();
    let mut power = eps * eps;
    let mut acc = 0.0;
    for (i, z) in table.iter().enumerate() {
        let k = (i + 2) as f64;
        acc += z * power / k;
        power *= -eps;
    }
    acc
}

fn lanczos_ln_gamma(x: f64) -> f64 {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (x + 0.5) * t.ln() - t + a.ln()
}

/// Natural logarithm of the Gamma function for positive arguments.
///
/// Near the zeros of `ln Γ` at 1 and 2 the Taylor series in `ζ(k) − 1` is
/// used so that relative accuracy survives; elsewhere a Lanczos sum.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("log_gamma", format!("x = {x} must be positive")));
    }
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        ln_gamma_pos(x + 1.0) - x.ln()
    } else if x < 1.5 {
        let eps = x - 1.0;
        -eps.ln_1p() + eps * (1.0 - EULER_GAMMA) + zeta_series(eps)
    } else if x < 2.5 {
        let eps = x - 2.0;
        eps * (1.0 - EULER_GAMMA) + zeta_series(eps)
    } else {
        lanczos_ln_gamma(x)
    }
}

/// `ln B(a, b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("beta", format!("a = {a}, b = {b} must be positive")));
    }
    Ok(ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b))
}

/// The Euler Beta function `Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    log_beta(a, b).map(f64::exp)
}

/// Exact binomial coefficient `C(p, j)`.
pub fn binomial(p: u32, j: u32) -> Result<u64> {
    if j > p {
        return Err(domain("binomial", format!("j = {j} exceeds p = {p}")));
    }
    let j = j.min(p - j) as u128;
    let mut acc: u128 = 1;
    for i in 0..j {
        acc = acc * (p as u128 - i) / (i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow {
        op: "binomial",
        index: j as usize,
    })
}

/// `L_0^α(x) ..= L_{n_max}^α(x)` evaluated by the forward three-term recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreTable {
    pub alpha: f64,
    pub x: f64,
    pub values: Vec<f64>,
}

impl LaguerreTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `L_n^α(x)`, with the convention that negative degrees vanish.
    pub fn get(&self, n: i64) -> f64 {
        if n < 0 {
            0.0
        } else {
            self.values[n as usize]
        }
    }

    /// Largest scaled residual of `(n+1)L_{n+1} − (2n+1+α−x)L_n + (n+α)L_{n−1}`.
    pub fn recurrence_residual(&self) -> f64 {
        let (a, x) = (self.alpha, self.x);
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .map(|n| {
                let nf = n as f64;
                let r = (nf + 1.0) * v[n + 1] - (2.0 * nf + 1.0 + a - x) * v[n]
                    + (nf + a) * v[n - 1];
                r.abs() / v[n + 1].abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// Tabulates the generalized Laguerre polynomials up to `n_max`.
///
/// Works for either sign of `x`; callers evaluate at `−x²/2` as well as
/// `x²/2`. The forward recurrence is fine up to a few hundred terms in the
/// regimes used here. A non-finite entry is reported as an overflow.
pub fn laguerre_all(n_max: usize, alpha: f64, x: f64) -> Result<LaguerreTable> {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    if n_max >= 1 {
        values.push(1.0 + alpha - x);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next =
            ((2.0 * nf + 1.0 + alpha - x) * values[n] - (nf + alpha) * values[n - 1]) / (nf + 1.0);
        if !next.is_finite() {
            return Err(Error::Overflow {
                op: "laguerre_all",
                index: n + 1,
            });
        }
        values.push(next);
    }
    Ok(LaguerreTable { alpha, x, values })
}

/// Single value `L_n^α(x)`; negative `n` gives 0.
pub(crate) fn laguerre(n: i64, alpha: f64, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for m in 0..n {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 + alpha - x) * cur - (mf + alpha) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
