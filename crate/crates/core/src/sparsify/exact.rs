//! Exact integer ceilings of powers `n^(p / 2^i)`. No floating point.

use num_bigint::BigUint;

fn pow2_power(x: u64, i: u32) -> BigUint {
    let mut acc = BigUint::from(x);
    for _ in 0..i {
        acc = &acc * &acc;
    }
    acc
}

/// Smallest `x` with `x^(2^i) >= n^p`, i.e. `ceil(n^(p / 2^i))`.
pub fn ceil_pow(n: u64, p: u32, i: u32) -> u64 {
    if n <= 1 || p == 0 {
        return if p == 0 { 1 } else { n };
    }
    let target = BigUint::from(n).pow(p);
    // n^(p/2^i) <= n^ceil(p/2^i), and callers keep p <= 2^(i+1)
    let whole = p.div_ceil(1 << i.min(31));
    let mut hi = n.checked_pow(whole).expect("power fits in u64");
    let mut lo = 1u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pow2_power(mid, i) >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// `ceil(n^eps)` with `eps = 1/2^i`.
pub fn ceil_n_eps(n: u64, i: u32) -> u64 {
    ceil_pow(n, 1, i)
}

/// `ceil(n^(1 - eps))` with `eps = 1/2^i`.
pub fn ceil_n_one_minus_eps(n: u64, i: u32) -> u64 {
    ceil_pow(n, (1 << i) - 1, i)
}

/// `ceil(n^(1 + eps))` with `eps = 1/2^i`.
pub fn ceil_n_one_plus_eps(n: u64, i: u32) -> u64 {
    ceil_pow(n, (1 << i) + 1, i)
}

/// True when `n^(1/2^i)` is an integer, so every power of `n` with
/// denominator dividing `2^i` is exact.
pub fn is_exact_root(n: u64, i: u32) -> bool {
    pow2_power(ceil_n_eps(n, i), i) == BigUint::from(n)
}

/// `ceil(log2(log2(n)))` for `n > 2`, and 0 for `n <= 2`: the smallest `k`
/// with `n <= 2^(2^k)`.
pub fn ceil_log2_log2(n: u64) -> u32 {
    // 2^(2^6) exceeds u64, so k = 6 covers every n
    let mut k = 0;
    while k < 6 && n > 1u64 << (1u64 << k) {
        k += 1;
    }
    k
}
