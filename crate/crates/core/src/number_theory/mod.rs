//! PTM-weighted infinite products, the PTM constant, and the Dirichlet
//! series whose combination gives the Riemann zeta function.

mod fixed;

pub use fixed::Fixed;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::hilbert::C64;
use crate::ptm_seq::ptm_digit_sum;

/// Default binary precision for products and the constant.
pub const DEFAULT_BITS: u32 = 128;
pub const MAX_CONSTANT_BITS: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEstimate<T> {
    pub value: T,
    pub terms: u64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductFamily {
    /// `prod_{n>=0} ((2n+1)/(2n+2))^{2(1-t_n)} (2n+3)/(2n+2) = sqrt(2)/pi`
    P1,
    /// `prod_{n>=0} ((2n+1)/(2n+2))^{2 t_n} (2n+3)/(2n+2) = 2 sqrt(2)/pi`
    P2,
    /// `prod_{n>=0} ((2n+1)/(2n+2))^{(-1)^{t_n}} = sqrt(2)/2`
    P3,
    /// `prod_{n>=1} (2n/(2n+1))^{(-1)^{t_n}} = 1.6281...`
    P4,
}

impl ProductFamily {
    pub const ALL: [ProductFamily; 4] = [Self::P1, Self::P2, Self::P3, Self::P4];

    /// Known closed-form limit, where there is one.
    pub fn limit(self) -> Option<f64> {
        let s2 = std::f64::consts::SQRT_2;
        let pi = std::f64::consts::PI;
        match self {
            Self::P1 => Some(s2 / pi),
            Self::P2 => Some(2.0 * s2 / pi),
            Self::P3 => Some(s2 / 2.0),
            Self::P4 => None,
        }
    }

    /// Factor `m` of the partial product as `(num, den)` pairs to multiply in.
    fn factors(self, m: u64) -> [(u64, u64); 2] {
        let t = ptm_digit_sum(m);
        let (a, b) = (2 * m + 1, 2 * m + 2);
        match self {
            Self::P1 if t == 0 => [(a * a, b * b), (2 * m + 3, b)],
            Self::P2 if t == 1 => [(a * a, b * b), (2 * m + 3, b)],
            Self::P1 | Self::P2 => [(1, 1), (2 * m + 3, b)],
            Self::P3 if t == 0 => [(a, b), (1, 1)],
            Self::P3 => [(b, a), (1, 1)],
            Self::P4 => {
                let (c, d) = (2 * m, 2 * m + 1);
                if t == 0 {
                    [(c, d), (1, 1)]
                } else {
                    [(d, c), (1, 1)]
                }
            }
        }
    }

    fn first_index(self) -> u64 {
        match self {
            Self::P4 => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for ProductFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::P1 => "p1",
            Self::P2 => "p2",
            Self::P3 => "p3",
            Self::P4 => "p4",
        };
        f.write_str(s)
    }
}

impl FromStr for ProductFamily {
    type Err = PtmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(Self::P1),
            "p2" => Ok(Self::P2),
            "p3" => Ok(Self::P3),
            "p4" => Ok(Self::P4),
            other => Err(PtmError::invalid(format!("unknown product {other:?}"))),
        }
    }
}

/// Partial product with `terms` factors at [`DEFAULT_BITS`] precision.
pub fn product_family(which: ProductFamily, terms: u64) -> Result<SeriesEstimate<Fixed>> {
    product_family_with_bits(which, terms, DEFAULT_BITS)
}

/// The error bound is a heuristic: the last factor's distance from 1 times
/// the value, plus the accumulated truncation.
pub fn product_family_with_bits(
    which: ProductFamily,
    terms: u64,
    bits: u32,
) -> Result<SeriesEstimate<Fixed>> {
    if terms == 0 {
        return Err(PtmError::invalid("product needs at least one factor"));
    }
    if !(32..=MAX_CONSTANT_BITS).contains(&bits) {
        return Err(PtmError::invalid(format!(
            "precision must be between 32 and {MAX_CONSTANT_BITS} bits"
        )));
    }
    if terms > (u32::MAX as u64) {
        return Err(PtmError::Capacity {
            what: "product factors",
            requested: terms as usize,
            limit: u32::MAX as usize,
        });
    }
    let start = which.first_index();
    let mut value = Fixed::one(bits);
    let mut last = 1.0f64;
    for m in start..start + terms {
        let mut factor = 1.0;
        for (num, den) in which.factors(m) {
            if num != den {
                value.mul_ratio(num, den);
                factor *= num as f64 / den as f64;
            }
        }
        last = factor;
    }
    let v = value.to_f64();
    let truncation = 3.0 * terms as f64 * 2f64.powi(-(bits as i32)) * v.max(1.0);
    Ok(SeriesEstimate {
        value,
        terms,
        error_bound: (last - 1.0).abs() * v + truncation,
    })
}

/// `tau = sum_i t_i 2^{-(i+1)}` truncated to `bits` binary places; the
/// neglected tail is below `2^{-bits}`.
pub fn ptm_constant(bits: u32) -> Result<SeriesEstimate<Fixed>> {
    if bits == 0 || bits > MAX_CONSTANT_BITS {
        return Err(PtmError::invalid(format!(
            "precision must be between 1 and {MAX_CONSTANT_BITS} bits"
        )));
    }
    let mut mantissa = BigUint::default();
    for i in 0..bits {
        if ptm_digit_sum(u64::from(i)) == 1 {
            mantissa.set_bit(u64::from(bits - 1 - i), true);
        }
    }
    Ok(SeriesEstimate {
        value: Fixed::from_parts(mantissa, bits),
        terms: u64::from(bits),
        error_bound: 2f64.powi(-(bits as i32)),
    })
}

fn check_sigma(sigma: f64, terms: u64) -> Result<()> {
    if !sigma.is_finite() {
        return Err(PtmError::NonFinite("Re(s)"));
    }
    if sigma <= 1.0 {
        return Err(PtmError::invalid(format!("Re(s) = {sigma} must exceed 1")));
    }
    if terms < 2 {
        return Err(PtmError::invalid("Dirichlet series needs at least two terms"));
    }
    Ok(())
}

/// `sum_{n>M} n^{-sigma} <= M^{1-sigma} / (sigma - 1)`.
pub fn dirichlet_tail_bound(sigma: f64, terms: u64) -> f64 {
    (terms as f64).powf(1.0 - sigma) / (sigma - 1.0)
}

/// Tail bound plus a floating-point allowance for summing `M` terms whose
/// moduli add up to at most `zeta(sigma) <= sigma / (sigma - 1)`.
pub fn dirichlet_error_bound(sigma: f64, terms: u64) -> f64 {
    let rounding = (terms as f64 + 8.0) * f64::EPSILON * sigma / (sigma - 1.0);
    dirichlet_tail_bound(sigma, terms) + rounding
}

/// `n^{-sigma/2}`: amplitude of level `n - 1`.
#[inline]
fn level_weight(n: u64, sigma: f64) -> f64 {
    (n as f64).powf(-0.5 * sigma)
}

/// `n^{-i tau}`: phase picked up by level `n - 1`.
#[inline]
fn level_phase(n: u64, tau: f64) -> C64 {
    C64::from_polar(1.0, -tau * (n as f64).ln())
}

/// `A = sum_{n=1}^M t_{n-1} n^{-s}` and `B = sum_{n=1}^M t_n n^{-s}`.
/// Each term is evaluated as `w (w e^{-i tau ln n})` with `w = n^{-sigma/2}`.
pub fn dirichlet_pair(s: C64, terms: u64) -> Result<(SeriesEstimate<C64>, SeriesEstimate<C64>)> {
    check_sigma(s.re, terms)?;
    if !s.im.is_finite() {
        return Err(PtmError::NonFinite("Im(s)"));
    }
    let (mut a, mut b) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for n in 1..=terms {
        let w = level_weight(n, s.re);
        let term = w * (w * level_phase(n, s.im));
        if ptm_digit_sum(n - 1) == 1 {
            a += term;
        }
        if ptm_digit_sum(n) == 1 {
            b += term;
        }
    }
    let bound = dirichlet_error_bound(s.re, terms);
    Ok((
        SeriesEstimate {
            value: a,
            terms,
            error_bound: bound,
        },
        SeriesEstimate {
            value: b,
            terms,
            error_bound: bound,
        },
    ))
}

/// `2^{-s}`.
fn two_pow_minus(s: C64) -> C64 {
    C64::from_polar(2f64.powf(-s.re), -s.im * std::f64::consts::LN_2)
}

fn combine_zeta(s: C64, a: &SeriesEstimate<C64>, b: &SeriesEstimate<C64>) -> SeriesEstimate<C64> {
    let q = two_pow_minus(s);
    let one = C64::new(1.0, 0.0);
    let (ca, cb) = (one + q, one - q);
    SeriesEstimate {
        value: ca * a.value + cb * b.value,
        terms: a.terms.min(b.terms),
        error_bound: ca.norm() * a.error_bound + cb.norm() * b.error_bound,
    }
}

/// `(1 + 2^{-s}) A + (1 - 2^{-s}) B`, which converges to `zeta(s)`.
pub fn zeta_ptm(s: C64, terms: u64) -> Result<SeriesEstimate<C64>> {
    let (a, b) = dirichlet_pair(s, terms)?;
    Ok(combine_zeta(s, &a, &b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeilerReport {
    pub sigma: f64,
    pub tau: f64,
    pub terms: u64,
    /// `sum_n c1_n^2 (n+1)^{-i tau}`, proportional to `A`.
    pub psi1_corr: C64,
    /// Same for `c2`, proportional to `B`.
    pub psi2_corr: C64,
    /// Combination of the two correlations without the normalization.
    pub zeta_estimate: SeriesEstimate<C64>,
    /// Normalization of the truncated initial state.
    pub normalization: f64,
}

/// Conjugate autocorrelations `<psi*|psi(t)>` of the two truncated
/// amplitude vectors `c1_n = t_n (n+1)^{-sigma/2}` and
/// `c2_n = t_{n+1} (n+1)^{-sigma/2}` after the logarithmic-spectrum
/// evolution that multiplies level `n` by `(n+1)^{-i tau}`.
pub fn feiler_autocorrelation(sigma: f64, tau: f64, terms: u64) -> Result<FeilerReport> {
    check_sigma(sigma, terms)?;
    if !tau.is_finite() {
        return Err(PtmError::NonFinite("tau"));
    }
    if terms > (1u64 << 28) {
        return Err(PtmError::Capacity {
            what: "amplitude vector length",
            requested: terms as usize,
            limit: 1 << 28,
        });
    }
    let len = terms as usize;
    let weights: Vec<f64> = (1..=terms).map(|n| level_weight(n, sigma)).collect();
    let c1: Vec<f64> = (0..len)
        .map(|n| if ptm_digit_sum(n as u64) == 1 { weights[n] } else { 0.0 })
        .collect();
    let c2: Vec<f64> = (0..len)
        .map(|n| if ptm_digit_sum(n as u64 + 1) == 1 { weights[n] } else { 0.0 })
        .collect();
    let phases: Vec<C64> = (1..=terms).map(|n| level_phase(n, tau)).collect();
    let evolve = |c: &[f64]| -> Vec<C64> { c.iter().zip(&phases).map(|(x, p)| x * p).collect() };
    let correlate = |c: &[f64], evolved: &[C64]| -> C64 {
        c.iter()
            .zip(evolved)
            .filter(|(x, _)| **x != 0.0)
            .fold(C64::new(0.0, 0.0), |acc, (x, e)| acc + x * e)
    };
    let psi1_corr = correlate(&c1, &evolve(&c1));
    let psi2_corr = correlate(&c2, &evolve(&c2));

    let s = C64::new(sigma, tau);
    let bound = dirichlet_error_bound(sigma, terms);
    let a = SeriesEstimate {
        value: psi1_corr,
        terms,
        error_bound: bound,
    };
    let b = SeriesEstimate {
        value: psi2_corr,
        terms,
        error_bound: bound,
    };
    let zeta_estimate = combine_zeta(s, &a, &b);

    let q = two_pow_minus(s);
    let one = C64::new(1.0, 0.0);
    let norm_sqr: f64 = c1
        .iter()
        .zip(&c2)
        .map(|(x, y)| ((one + q) * *x + (one - q) * *y).norm_sqr())
        .sum();
    Ok(FeilerReport {
        sigma,
        tau,
        terms,
        psi1_corr,
        psi2_corr,
        zeta_estimate,
        normalization: norm_sqr.sqrt().recip(),
    })
}
