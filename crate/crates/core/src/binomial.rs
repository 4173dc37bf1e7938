//! Exact binomial coefficients and integer base-2 logarithms.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` as a `u128`, or `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1); divide the gcd out first to delay overflow
        let num = n as u128 - i;
        let den = i + 1;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        acc = a.checked_mul(num / d)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `⌈log₂ m⌉` with the convention `⌈log₂ 0⌉ = ⌈log₂ 1⌉ = 0`.
pub fn ceil_log2(m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        usize::BITS - (m - 1).leading_zeros()
    }
}

/// `⌈log₂ p⌉` of an exact integer, via the bit length of `p - 1`.
pub fn ceil_log2_big(p: &BigUint) -> u64 {
    if p <= &BigUint::one() {
        0
    } else {
        (p - 1u32).bits()
    }
}
