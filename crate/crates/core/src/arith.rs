//! Small modular-arithmetic helpers on machine words. All routines are
//! branch-light and use 128-bit intermediates, so they are exact for any
//! 64-bit inputs.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m != 0);
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= m;
    while exp != 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `x` mod `m` via extended Euclid.
/// Returns `None` when gcd(x, m) != 1. By convention `inv_mod(x, 1) = Some(0)`.
pub fn inv_mod(x: u64, m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// 2-adic valuation of a nonzero integer.
pub fn v2(n: u64) -> u32 {
    debug_assert!(n != 0);
    n.trailing_zeros()
}

/// Euclidean division of `a` by positive `b`: returns (quotient, remainder)
/// with 0 <= remainder < b.
pub fn div_rem_euclid(a: i64, b: i64) -> (i64, i64) {
    debug_assert!(b > 0);
    (a.div_euclid(b), a.rem_euclid(b))
}

/// Ceiling of a/b for a possibly negative numerator and positive denominator.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}
