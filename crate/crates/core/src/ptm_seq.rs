//! The Prouhet-Thue-Morse sequence `t_n = popcount(n) mod 2`.
//!
//! Three independent constructions are provided (digit sum, the
//! `t_{2n} = t_n`, `t_{2n+1} = 1 - t_n` recursion, and block doubling with
//! complement) together with the index partition into `E(N)` / `O(N)` and the
//! exact power-sum identity over that partition.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{PtmError, Result};
use crate::limits::Limits;

/// The first `2^order` terms of the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BitBlock {
    order: u32,
    bits: Vec<u8>,
}

impl BitBlock {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

/// Split of `{0, .., 2^N - 1}` by the value of `t_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexPartition {
    pub order: u32,
    pub evens: Vec<usize>,
    pub odds: Vec<usize>,
}

impl IndexPartition {
    pub fn contains_even(&self, n: usize) -> bool {
        n < (1usize << self.order) && ptm_digit_sum(n as u64) == 0
    }
}

#[inline]
pub fn ptm_digit_sum(n: u64) -> u8 {
    (n.count_ones() & 1) as u8
}

/// Recursive definition, unrolled over the binary digits of `n`.
pub fn ptm_recursive(n: u64) -> u8 {
    // t_0 = 0; t_{2m} = t_m; t_{2m+1} = 1 - t_m
    let mut m = n;
    let mut flips = 0u8;
    while m > 0 {
        if m & 1 == 1 {
            flips ^= 1;
        }
        m >>= 1;
    }
    flips
}

/// Block `T_N` built by repeatedly appending the binary complement.
pub fn ptm_block(order: u32) -> Result<BitBlock> {
    ptm_block_with_limit(order, Limits::from_env().block_order)
}

pub fn ptm_block_with_limit(order: u32, max_order: u32) -> Result<BitBlock> {
    Limits::check("sequence block order", order, max_order)?;
    let len = 1usize
        .checked_shl(order)
        .ok_or(PtmError::Capacity {
            what: "sequence block order",
            requested: order as usize,
            limit: max_order as usize,
        })?;
    let mut bits = Vec::with_capacity(len);
    bits.push(0u8);
    while bits.len() < len {
        let half = bits.len();
        for i in 0..half {
            let b = bits[i];
            bits.push(1 - b);
        }
    }
    Ok(BitBlock { order, bits })
}

pub fn partition_sets(order: u32) -> Result<IndexPartition> {
    if order == 0 {
        return Err(PtmError::invalid("partition order must be at least 1"));
    }
    let block = ptm_block(order)?;
    let mut evens = Vec::with_capacity(block.len() / 2);
    let mut odds = Vec::with_capacity(block.len() / 2);
    for (i, &b) in block.bits().iter().enumerate() {
        if b == 0 {
            evens.push(i);
        } else {
            odds.push(i);
        }
    }
    Ok(IndexPartition { order, evens, odds })
}

/// Exact `(sum_{e in E(N)} e^k, sum_{o in O(N)} o^k)`.
pub fn multigrade_sums(order: u32, k: u32) -> Result<(BigUint, BigUint)> {
    let part = partition_sets(order)?;
    let power_sum = |set: &[usize]| -> BigUint {
        set.iter()
            .map(|&e| {
                if k == 0 {
                    BigUint::one()
                } else {
                    BigUint::from(e).pow(k)
                }
            })
            .fold(BigUint::zero(), |acc, v| acc + v)
    };
    Ok((power_sum(&part.evens), power_sum(&part.odds)))
}

/// Both sides of the finite product generating function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyIdentity {
    pub lhs: f64,
    pub rhs: f64,
    /// Largest magnitude among terms and partial sums/products seen.
    pub scale: f64,
}

impl PolyIdentity {
    pub fn agrees(&self, rel_tol: f64) -> bool {
        (self.lhs - self.rhs).abs() <= rel_tol * self.scale
    }
}

/// `prod_{i=0}^{N} (1 - x^{2^i})` against `sum_{j < 2^{N+1}} (-1)^{t_j} x^j`.
pub fn poly_identity(x: f64, order: u32) -> Result<PolyIdentity> {
    if !x.is_finite() {
        return Err(PtmError::NonFinite("poly_identity input"));
    }
    if order == 0 {
        return Err(PtmError::invalid("poly_identity order must be at least 1"));
    }
    Limits::check("poly_identity terms", order + 1, Limits::from_env().block_order)?;

    let mut scale = 1.0f64;
    let mut lhs = 1.0f64;
    let mut x_pow = x;
    for _ in 0..=order {
        lhs *= 1.0 - x_pow;
        scale = scale.max(x_pow.abs()).max(lhs.abs());
        x_pow *= x_pow;
    }

    let terms = 1u64 << (order + 1);
    let mut rhs = 0.0f64;
    let mut x_j = 1.0f64;
    for j in 0..terms {
        if ptm_digit_sum(j) == 0 {
            rhs += x_j;
        } else {
            rhs -= x_j;
        }
        scale = scale.max(x_j.abs()).max(rhs.abs());
        x_j *= x;
    }

    if !lhs.is_finite() || !rhs.is_finite() || !scale.is_finite() {
        return Err(PtmError::NonFinite("poly_identity terms"));
    }
    Ok(PolyIdentity { lhs, rhs, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_sum_examples() {
        assert_eq!(ptm_digit_sum(0), 0);
        assert_eq!(ptm_digit_sum(3), 0);
        assert_eq!(ptm_digit_sum(4), 1);
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(ptm_recursive(2), 1);
        for n in 0..1000u64 {
            assert_eq!(ptm_recursive(2 * n), ptm_recursive(n));
            assert_eq!(ptm_recursive(2 * n + 1), 1 - ptm_recursive(n));
        }
        assert_eq!(ptm_recursive(1_000_003), ptm_digit_sum(1_000_003));
    }

    #[test]
    fn block_examples() {
        assert_eq!(ptm_block(0).unwrap().bits(), &[0]);
        assert_eq!(ptm_block(2).unwrap().bits(), &[0, 1, 1, 0]);
        assert_eq!(ptm_block(3).unwrap().bits(), &[0, 1, 1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn block_capacity() {
        let err = ptm_block_with_limit(12, 10).unwrap_err();
        assert!(matches!(err, PtmError::Capacity { requested: 12, limit: 10, .. }));
    }

    #[test]
    fn upper_half_is_complement() {
        let small = ptm_block(9).unwrap();
        let big = ptm_block(10).unwrap();
        for (i, &b) in small.bits().iter().enumerate() {
            assert_eq!(big.bits()[i], b);
            assert_eq!(big.bits()[i + small.len()], 1 - b);
        }
    }

    #[test]
    fn partition_examples() {
        let p3 = partition_sets(3).unwrap();
        assert_eq!(p3.evens, vec![0, 3, 5, 6]);
        assert_eq!(p3.odds, vec![1, 2, 4, 7]);
        let p4 = partition_sets(4).unwrap();
        assert_eq!(p4.evens, vec![0, 3, 5, 6, 9, 10, 12, 15]);
        let p1 = partition_sets(1).unwrap();
        assert_eq!((p1.evens, p1.odds), (vec![0], vec![1]));
        assert!(partition_sets(0).is_err());
    }

    #[test]
    fn multigrade_examples() {
        let (e, o) = multigrade_sums(3, 2).unwrap();
        assert_eq!((e, o), (BigUint::from(70u32), BigUint::from(70u32)));
        let (e, o) = multigrade_sums(3, 3).unwrap();
        assert_eq!((e, o), (BigUint::from(368u32), BigUint::from(416u32)));
        let (e, o) = multigrade_sums(4, 3).unwrap();
        assert_eq!((e, o), (BigUint::from(7200u32), BigUint::from(7200u32)));
    }

    #[test]
    fn poly_identity_examples() {
        let zero = poly_identity(0.0, 5).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (1.0, 1.0));
        let one = poly_identity(1.0, 5).unwrap();
        assert_eq!((one.lhs, one.rhs), (0.0, 0.0));
        let half = poly_identity(0.5, 4).unwrap();
        assert!(half.agrees(1e-12), "{half:?}");
        assert!(poly_identity(f64::NAN, 3).is_err());
        assert!(matches!(
            poly_identity(1e10, 12),
            Err(PtmError::NonFinite(_))
        ));
    }
}
