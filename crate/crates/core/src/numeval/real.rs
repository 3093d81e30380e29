//! Binary fixed-point reals: value = `m / 2^bits`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

fn round_shift(x: BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x;
    }
    let half = BigInt::one() << (k - 1);
    if x.is_negative() {
        -((-x + half) >> k)
    } else {
        (x + half) >> k
    }
}

fn round_div(n: BigInt, d: &BigInt) -> BigInt {
    // d > 0
    let two_n = n << 1;
    let q: BigInt = &two_n / d;
    let r: BigInt = &two_n % d;
    let mut q2 = q;
    if r.is_negative() {
        q2 -= 1;
    }
    // floor(2n/d) -> round(n/d) = floor((floor(2n/d)+1)/2)
    (q2 + 1) >> 1
}

impl Real {
    pub fn zero(bits: u32) -> Real {
        Real {
            m: BigInt::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Real {
        Real {
            m: BigInt::one() << bits,
            bits,
        }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Real {
        Real {
            m: n.into() << bits,
            bits,
        }
    }

    pub fn from_ratio(r: &BigRational, bits: u32) -> Real {
        let n = r.numer().clone() << bits;
        Real {
            m: round_div(n, r.denom()),
            bits,
        }
    }

    /// `1/d` for a positive integer `d`.
    pub fn recip_int(d: &BigInt, bits: u32) -> Real {
        Real {
            m: round_div(BigInt::one() << bits, d),
            bits,
        }
    }

    pub fn from_mantissa(m: BigInt, bits: u32) -> Real {
        Real { m, bits }
    }

    /// Re-round to a different number of fractional bits.
    pub fn with_bits(&self, bits: u32) -> Real {
        let m = if bits >= self.bits {
            self.m.clone() << (bits - self.bits)
        } else {
            round_shift(self.m.clone(), self.bits - bits)
        };
        Real { m, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn abs(&self) -> Real {
        Real {
            m: self.m.abs(),
            bits: self.bits,
        }
    }

    fn check(&self, other: &Real) {
        assert_eq!(self.bits, other.bits, "mixed fixed-point precisions");
    }

    pub fn mul_int(&self, k: &BigInt) -> Real {
        Real {
            m: &self.m * k,
            bits: self.bits,
        }
    }

    pub fn div_int(&self, k: &BigInt) -> Real {
        if k.is_negative() {
            return Real {
                m: round_div(-self.m.clone(), &-k),
                bits: self.bits,
            };
        }
        Real {
            m: round_div(self.m.clone(), k),
            bits: self.bits,
        }
    }

    pub fn div_u64(&self, k: u64) -> Real {
        self.div_int(&BigInt::from(k))
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Real {
        Real {
            m: round_div(&self.m * r.numer(), r.denom()),
            bits: self.bits,
        }
    }

    pub fn div(&self, other: &Real) -> Real {
        self.check(other);
        let mut d = other.m.clone();
        let mut n = self.m.clone() << self.bits;
        if d.is_negative() {
            d = -d;
            n = -n;
        }
        Real {
            m: round_div(n, &d),
            bits: self.bits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep ~60 significant bits before converting.
        let len = self.m.bits() as i64;
        let drop = (len - 60).max(0) as u32;
        let top = (&self.m >> drop).to_f64().unwrap_or(0.0);
        top * 2f64.powi(drop as i32 - self.bits as i32)
    }

    /// Decimal expansion rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10u32), digits);
        let scaled = round_shift(&self.m * &scale, self.bits);
        let neg = scaled.sign() == Sign::Minus;
        let s = scaled.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }

    /// `2^-bits`, one unit in the last place.
    pub fn ulp(&self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.check(other);
        Some(self.m.cmp(&other.m))
    }
}

impl std::ops::Add for &Real {
    type Output = Real;
    fn add(self, other: &Real) -> Real {
        self.check(other);
        Real {
            m: &self.m + &other.m,
            bits: self.bits,
        }
    }
}

impl std::ops::Sub for &Real {
    type Output = Real;
    fn sub(self, other: &Real) -> Real {
        self.check(other);
        Real {
            m: &self.m - &other.m,
            bits: self.bits,
        }
    }
}

impl std::ops::Mul for &Real {
    type Output = Real;
    fn mul(self, other: &Real) -> Real {
        self.check(other);
        Real {
            m: round_shift(&self.m * &other.m, self.bits),
            bits: self.bits,
        }
    }
}

impl std::ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            m: -self.m.clone(),
            bits: self.bits,
        }
    }
}

impl std::ops::AddAssign<&Real> for Real {
    fn add_assign(&mut self, other: &Real) {
        self.check(other);
        self.m += &other.m;
    }
}

impl std::ops::SubAssign<&Real> for Real {
    fn sub_assign(&mut self, other: &Real) {
        self.check(other);
        self.m -= &other.m;
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits as f64) * std::f64::consts::LOG10_2).floor() as usize;
        write!(f, "{}", self.to_decimal(digits.saturating_sub(2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::rat;

    #[test]
    fn arithmetic() {
        let b = 128;
        let third = Real::from_ratio(&rat(1, 3), b);
        let three = Real::from_int(3, b);
        let one = &third * &three;
        assert!((&one - &Real::one(b)).abs().to_f64() < 1e-35);
        assert!((three.div(&Real::from_int(-6, b)).to_f64() + 0.5).abs() < 1e-30);
        assert_eq!(third.to_decimal(5), "0.33333");
        assert_eq!((-&third).to_decimal(3), "-0.333");
        assert_eq!(Real::from_ratio(&rat(5, 2), b).to_decimal(0), "3");
        assert_eq!(Real::from_ratio(&rat(1, 50), b).to_decimal(3), "0.020");
        assert!((third.div_u64(7).to_f64() - 1.0 / 21.0).abs() < 1e-16);
    }
}
