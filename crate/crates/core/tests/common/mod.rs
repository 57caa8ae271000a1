//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use ptm_core::C64;

/// `zeta(s)` by Euler-Maclaurin summation cut at 30 with eight Bernoulli
/// corrections.
pub fn zeta_reference(s: C64) -> C64 {
    const BERNOULLI: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let cut = 30.0f64;
    let pow = |x: f64, e: C64| (e * x.ln()).exp();
    let mut sum = C64::new(0.0, 0.0);
    for n in 1..30 {
        sum += pow(n as f64, -s);
    }
    sum += pow(cut, C64::new(1.0, 0.0) - s) / (s - 1.0);
    sum += pow(cut, -s) * 0.5;
    // rising factorial s (s+1) .. (s+2k-2) / (2k)!
    let mut rising = s;
    let mut factorial = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k as f64 + 1.0;
        sum += rising * (*b / factorial) * pow(cut, -s - (2.0 * k - 1.0));
        rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    sum
}

/// Dense `e^{2 pi i jk / M} / sqrt(M)` straight from the definition.
pub fn dft_matrix(n: u32) -> DMatrix<C64> {
    let m = (1usize << n) as f64;
    DMatrix::from_fn(1 << n, 1 << n, |j, k| {
        let theta = 2.0 * PI * (j as f64) * (k as f64) / m;
        C64::new(theta.cos(), theta.sin()) / m.sqrt()
    })
}

/// Kronecker product by explicit index arithmetic.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (br, bc) = b.shape();
    DMatrix::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Bit `i` of the sequence from the word-doubling rule `0 -> 01, 1 -> 10`.
pub fn morphism_bits(order: u32) -> Vec<u8> {
    let mut word = vec![0u8];
    for _ in 0..order {
        word = word.iter().flat_map(|&b| [b, 1 - b]).collect();
    }
    word
}

pub fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Normalized pair from four raw reals; `None` when too close to zero.
pub fn normalized_pair(v: [f64; 4]) -> Option<(C64, C64)> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-3 {
        return None;
    }
    Some((C64::new(v[0] / norm, v[1] / norm), C64::new(v[2] / norm, v[3] / norm)))
}
