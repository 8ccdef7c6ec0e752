//! Exact integer counts used by the bound formulas.
//!
//! All counts are `u128`. The desk-scale parameter ranges handled by this
//! crate stay far below overflow; overflow panics instead of wrapping.

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul(u128::from(n - i))
            .expect("binomial coefficient overflows u128")
            / u128::from(i + 1);
    }
    acc
}

/// Binomial with signed arguments; zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Multinomial coefficient `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u64]) -> u128 {
    let mut total = 0u64;
    let mut acc: u128 = 1;
    for &p in parts {
        total += p;
        acc = acc
            .checked_mul(binomial(total, p))
            .expect("multinomial coefficient overflows u128");
    }
    acc
}

pub fn pow(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).expect("power overflows u128")
}

/// `|Q(n, r)|`: number of vectors in `{0..q}^n` with entry sum `r`.
///
/// Out-of-range ranks (`r < 0` or `r > qn`) give zero, so sums over
/// shifted ranks need no special casing.
pub fn slice_count(n: i64, q: u32, r: i64) -> u128 {
    if n < 0 || r < 0 || r > i64::from(q) * n {
        return 0;
    }
    // inclusion-exclusion over coordinates forced above q
    let q1 = i64::from(q) + 1;
    let mut pos: u128 = 0;
    let mut neg: u128 = 0;
    let mut j = 0i64;
    while j <= n && j * q1 <= r {
        let term = binomial_i(n, j) * binomial_i(r - j * q1 + n - 1, n - 1);
        if j % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
        j += 1;
    }
    if n == 0 {
        return u128::from(r == 0);
    }
    pos - neg
}

/// Number of vectors in `{0..q}^n` with support size exactly `r`.
pub fn support_count(n: u64, q: u32, r: u64) -> u128 {
    binomial(n, r) * pow(u128::from(q), r as u32)
}

pub fn ceil_half(x: u128) -> u128 {
    x.div_ceil(2)
}
