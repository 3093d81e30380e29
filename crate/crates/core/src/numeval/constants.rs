//! Closed-form constants computed by classical fast series, independent of
//! the iterated-integral evaluator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::real::Real;

// Σ_k (sign)^k / ((2k+1) x^{2k+1}); alternating gives atan, plain gives atanh.
fn arc_series(x: u64, alternating: bool, bits: u32) -> Real {
    let guard = bits + 16;
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = BigInt::one() << guard;
    power /= &x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if alternating && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power /= &x2;
        k += 1;
    }
    from_guarded(sum, guard, bits)
}

fn from_guarded(m: BigInt, guard: u32, bits: u32) -> Real {
    let shift = guard - bits;
    let half = BigInt::one() << (shift - 1);
    Real::from_mantissa((m + half) >> shift, bits)
}

/// π by Machin's formula.
pub fn pi(bits: u32) -> Real {
    let a = arc_series(5, true, bits + 8);
    let b = arc_series(239, true, bits + 8);
    let v = &a.mul_int(&BigInt::from(16)) - &b.mul_int(&BigInt::from(4));
    v.with_bits(bits)
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(bits: u32) -> Real {
    arc_series(3, false, bits + 8)
        .mul_int(&BigInt::from(2))
        .with_bits(bits)
}

/// ζ(3) = (5/2) Σ_{k≥1} (-1)^{k+1} / (k³ C(2k,k)).
pub fn zeta3(bits: u32) -> Real {
    let guard = bits + 16;
    let one = BigInt::one() << guard;
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    let mut k: u64 = 1;
    loop {
        // C(2k,k) = C(2k-2,k-1) * (2k)(2k-1) / k²
        binom = binom * BigInt::from(2 * k) * BigInt::from(2 * k - 1) / BigInt::from(k * k);
        let den = &binom * BigInt::from(k) * BigInt::from(k) * BigInt::from(k);
        let term = &one / den;
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    let v = from_guarded(sum * BigInt::from(5), guard, bits);
    v.div_u64(2)
}
