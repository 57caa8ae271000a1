//! Unsigned binary fixed point on top of `BigUint`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// `mantissa / 2^frac_bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    mantissa: BigUint,
    frac_bits: u32,
}

impl Fixed {
    pub fn from_parts(mantissa: BigUint, frac_bits: u32) -> Self {
        Fixed { mantissa, frac_bits }
    }

    pub fn one(frac_bits: u32) -> Self {
        Fixed {
            mantissa: BigUint::one() << frac_bits,
            frac_bits,
        }
    }

    pub fn zero(frac_bits: u32) -> Self {
        Fixed {
            mantissa: BigUint::zero(),
            frac_bits,
        }
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// Multiply by `num / den`, truncating the result.
    pub fn mul_ratio(&mut self, num: u64, den: u64) {
        assert!(den != 0, "zero denominator");
        self.mantissa = (&self.mantissa * num) / den;
    }

    /// Bit `i` after the binary point (`i = 0` is the `1/2` place).
    pub fn fraction_bit(&self, i: u32) -> bool {
        i < self.frac_bits && self.mantissa.bit(u64::from(self.frac_bits - 1 - i))
    }

    /// Decimal expansion truncated to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let int_part = &self.mantissa >> self.frac_bits;
        let mask = (BigUint::one() << self.frac_bits) - 1u32;
        let frac = &self.mantissa & mask;
        if digits == 0 {
            return int_part.to_string();
        }
        let scaled = (frac * BigUint::from(10u32).pow(digits as u32)) >> self.frac_bits;
        format!("{int_part}.{scaled:0>digits$}")
    }

    pub fn to_f64(&self) -> f64 {
        let excess = self.mantissa.bits().saturating_sub(64);
        let top = (&self.mantissa >> excess).to_u64().unwrap_or(u64::MAX) as f64;
        let mut exp = excess as i64 - i64::from(self.frac_bits);
        let mut v = top;
        // scale in chunks so large exponents do not overflow powi
        while exp < -1000 {
            v *= 2f64.powi(-1000);
            exp += 1000;
        }
        v * 2f64.powi(exp as i32)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // enough decimal places to cover the binary precision
        let digits = (f64::from(self.frac_bits) * std::f64::consts::LOG10_2).ceil() as usize;
        f.write_str(&self.to_decimal(f.precision().unwrap_or(digits)))
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_and_float() {
        let x = Fixed::from_parts(BigUint::from(3u32) << 126, 128);
        assert_eq!(x.to_decimal(4), "0.7500");
        assert_eq!(x.to_f64(), 0.75);
        let mut y = Fixed::one(64);
        y.mul_ratio(5, 2);
        assert_eq!(y.to_decimal(2), "2.50");
        assert_eq!(format!("{y:.3}"), "2.500");
        assert!(!y.fraction_bit(1) && y.fraction_bit(0));
    }

    #[test]
    fn truncation_of_thirds() {
        let mut x = Fixed::one(128);
        x.mul_ratio(1, 3);
        assert_eq!(x.to_decimal(10), "0.3333333333");
        assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }
}
