//! Fourier spectrum of PTM logical states.
//!
//! For `|phi> = a|0_TM> + b|1_TM>` the coefficients `F_j = <j|QFT(N)|phi>`
//! obey `|F_j|^2 = |a - b|^2 / 2 * prod_k sin^2(pi j 2^{k-N})` for `j >= 1`
//! and `F_0 = (a + b) / sqrt(2)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use crate::circuits::apply_qft;
use crate::error::{PtmError, Result};
use crate::hilbert::{C64, NORM_TOL};
use crate::limits::Limits;
use crate::ptm_seq::ptm_digit_sum;
use crate::ptm_states::dyadic_sqrt_amplitude;

/// Floor applied before taking logarithms of intensities.
pub const LOG_FLOOR: f64 = 1e-300;
/// Largest number of bins used when coarse-graining for [`self_similarity`].
pub const MAX_BINS: usize = 1024;
/// Largest order accepted by the closed form (indices must fit in `u64`).
pub const MAX_CLOSED_ORDER: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries {
    pub n: u32,
    /// Complex coefficients; absent when only intensities were computed.
    pub coefficients: Option<Vec<C64>>,
    pub intensities: Vec<f64>,
}

impl SpectrumSeries {
    pub fn len(&self) -> usize {
        self.intensities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intensities.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.intensities.iter().sum()
    }

    pub fn log_intensities(&self) -> Vec<f64> {
        self.intensities
            .iter()
            .map(|p| p.max(LOG_FLOOR).log10())
            .collect()
    }
}

fn check_pair(alpha: C64, beta: C64) -> Result<()> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if !norm_sqr.is_finite() {
        return Err(PtmError::NonFinite("logical amplitudes"));
    }
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(PtmError::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// QFT applied to the encoded state via the radix-2 transform.
pub fn ftm_direct(n: u32, alpha: C64, beta: C64) -> Result<SpectrumSeries> {
    check_pair(alpha, beta)?;
    if n == 0 {
        return Err(PtmError::invalid("spectrum needs at least one qubit"));
    }
    Limits::check("FFT spectrum order", n, Limits::from_env().fft_qubits)?;
    let scale = dyadic_sqrt_amplitude(n - 1);
    let (a, b) = (alpha * scale, beta * scale);
    let mut amps: Vec<C64> = (0..1u64 << n)
        .map(|k| if ptm_digit_sum(k) == 0 { a } else { b })
        .collect();
    apply_qft(&mut amps)?;
    Ok(SpectrumSeries {
        n,
        intensities: amps.iter().map(|a| a.norm_sqr()).collect(),
        coefficients: Some(amps),
    })
}

fn check_index(n: u32, j: u64) -> Result<()> {
    if n == 0 || n > MAX_CLOSED_ORDER {
        return Err(PtmError::invalid(format!(
            "closed form needs 1 <= N <= {MAX_CLOSED_ORDER}, got {n}"
        )));
    }
    if j >> n != 0 {
        return Err(PtmError::invalid(format!("index {j} outside 0..2^{n}")));
    }
    Ok(())
}

/// `sin^2(pi r / 2^n)` for the dyadic residue `r = j 2^k mod 2^n`, which is
/// exactly zero when the residue vanishes.
fn dyadic_sin_sqr(j: u64, k: u32, n: u32) -> f64 {
    let modulus = 1u128 << n;
    let r = ((j as u128) << k) % modulus;
    if r == 0 {
        return 0.0;
    }
    let r = r.min(modulus - r);
    let s = (PI * r as f64 / modulus as f64).sin();
    s * s
}

/// Closed-form `|F_j|^2`.
pub fn ftm_closed(n: u32, j: u64, alpha: C64, beta: C64) -> Result<f64> {
    check_pair(alpha, beta)?;
    check_index(n, j)?;
    if j == 0 {
        return Ok((alpha + beta).norm_sqr() / 2.0);
    }
    let prefactor = (alpha - beta).norm_sqr() / 2.0;
    Ok((0..n).fold(prefactor, |acc, k| acc * dyadic_sin_sqr(j, k, n)))
}

/// `F_0 = (a + b) / sqrt(2)`.
pub fn ftm_zero(alpha: C64, beta: C64) -> C64 {
    (alpha + beta) * FRAC_1_SQRT_2
}

/// Every intensity from the closed form.
pub fn closed_series(n: u32, alpha: C64, beta: C64) -> Result<SpectrumSeries> {
    check_pair(alpha, beta)?;
    check_index(n, 0)?;
    Limits::check("spectrum order", n, Limits::from_env().block_order)?;
    let intensities = (0..1u64 << n)
        .map(|j| ftm_closed(n, j, alpha, beta))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumSeries {
        n,
        coefficients: None,
        intensities,
    })
}

/// `sum_k (-1)^{t_k} e^{2 pi i j k / 2^N}` by direct summation.
pub fn ptm_character_sum(n: u32, j: u64) -> Result<C64> {
    check_index(n, j)?;
    Limits::check("character sum order", n, Limits::from_env().state_qubits)?;
    let modulus = 1u64 << n;
    Ok((0..modulus)
        .map(|k| {
            let phase = (j.wrapping_mul(k) & (modulus - 1)) as f64 / modulus as f64;
            let z = C64::from_polar(1.0, 2.0 * PI * phase);
            if ptm_digit_sum(k) == 0 {
                z
            } else {
                -z
            }
        })
        .sum())
}

/// `prod_{k<N} (1 - e^{2 pi i j / 2^{N-k}})`.
pub fn ptm_character_product(n: u32, j: u64) -> Result<C64> {
    check_index(n, j)?;
    let modulus = 1u128 << n;
    Ok((0..n).fold(C64::new(1.0, 0.0), |acc, k| {
        let r = ((j as u128) << k) % modulus;
        let z = C64::from_polar(1.0, 2.0 * PI * r as f64 / modulus as f64);
        acc * (C64::new(1.0, 0.0) - z)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfSimilarity {
    pub center: f64,
    pub zoom: f64,
    pub window_start: usize,
    pub window_len: usize,
    pub bins: usize,
    /// Pearson correlation; `None` when either profile has zero variance.
    pub score: Option<f64>,
}

/// Index window `[start, start + width)` with `width = len / zoom`, aligned
/// to a multiple of `width` and containing `center * len`. The spectrum is a
/// product over dyadic periods, so only aligned windows repeat the whole
/// curve; a window straddling a period boundary sees it cyclically shifted.
pub fn zoom_window(len: usize, center: f64, zoom: f64) -> Result<(usize, usize)> {
    if !center.is_finite() || !zoom.is_finite() {
        return Err(PtmError::NonFinite("zoom window"));
    }
    if zoom < 1.0 {
        return Err(PtmError::invalid(format!("zoom factor {zoom} below 1")));
    }
    if !(0.0..1.0).contains(&center) {
        return Err(PtmError::invalid(format!("window center {center} outside [0, 1)")));
    }
    let width = (len as f64 / zoom).round() as usize;
    if width == 0 {
        return Err(PtmError::invalid("zoom window is empty"));
    }
    let point = ((center * len as f64).floor() as usize).min(len - 1);
    let start = (point / width * width).min(len - width);
    Ok((start, width))
}

fn coarse_grain(values: &[f64], bins: usize) -> Vec<f64> {
    let len = values.len();
    (0..bins)
        .map(|b| {
            let lo = b * len / bins;
            let hi = ((b + 1) * len / bins).max(lo + 1);
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}

/// Correlation between the coarse-grained log-intensity profile of the
/// whole series and that of a zoom window, both box-averaged into the same
/// number of bins. Every bin averages at least two samples: single samples
/// would expose the exact zeros at even indices to the log floor.
pub fn self_similarity(series: &SpectrumSeries, center: f64, zoom: f64) -> Result<SelfSimilarity> {
    if series.is_empty() {
        return Err(PtmError::invalid("empty spectrum"));
    }
    let (start, width) = zoom_window(series.len(), center, zoom)?;
    let bins = (width / 2).clamp(1, MAX_BINS);
    let full = coarse_grain(&series.intensities, bins);
    let window = coarse_grain(&series.intensities[start..start + width], bins);
    let log = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|p| p.max(LOG_FLOOR).log10()).collect() };
    Ok(SelfSimilarity {
        center,
        zoom,
        window_start: start,
        window_len: width,
        bins,
        score: pearson(&log(full), &log(window)),
    })
}
