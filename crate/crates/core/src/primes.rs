//! Prime generation, deterministic 64-bit primality, factorization, and
//! prime search in arithmetic progressions.
//!
//! Primality uses the fixed Miller-Rabin witness set
//! {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}, which is known to be
//! deterministic for every input below 2^64 (Sorenson-Webster). There is
//! no probabilistic failure surface anywhere in the crate.

use serde::Serialize;

use crate::arith::{gcd, mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::rat::Rational;

/// Default candidate budget for prime searches in arithmetic progressions.
pub const DEFAULT_AP_SEARCH_BUDGET: u64 = 100_000_000;

/// Ascending list of all primes <= limit.
pub fn sieve(limit: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::input("sieve", "limit must be >= 2"));
    }
    // one bit per odd number; 2^32 candidates is far past desk scale
    if limit > (1u64 << 32) {
        return Err(Error::input(
            "sieve",
            format!("limit {limit} beyond memory budget"),
        ));
    }
    let n = limit as usize;
    let mut composite = vec![false; n / 2 + 1]; // index i <-> odd 2i+1
    let mut primes = vec![2u64];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j <= n / 2 {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let top = (n.saturating_sub(1)) / 2;
    primes.extend(
        composite[1..=top]
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (2 * (i + 1) + 1) as u64),
    );
    Ok(primes)
}

fn miller_rabin_witness(n: u64, a: u64) -> bool {
    // returns true when `a` proves n composite
    let a = a % n;
    if a == 0 {
        return false;
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..(n - 1).trailing_zeros() {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for any 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    !MR_WITNESSES.iter().any(|&a| miller_rabin_witness(n, a))
}

/// Prime-power decomposition of a 64-bit modulus, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for &(q, e) in &self.factors {
            for _ in 0..e {
                acc = acc.checked_mul(q)?;
            }
        }
        Some(acc)
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_LIMIT).expect("static sieve"))
}

// Brent's variant of Pollard rho with a deterministic restart schedule.
fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    let mut c: u64 = 1;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x: u64 = c;
        let (mut y, mut q, mut g) = (x, 1u64, 1u64);
        let (mut r, mut ys) = (1u64, x);
        let m = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            g = 1;
            while g == 1 {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
            }
        }
        if g != n {
            return g;
        }
        c += 1; // deterministic restart with the next increment
    }
}

/// Full factorization of n >= 1; n = 1 yields the empty list.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::input("factorize", "n must be >= 1"));
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    // whatever remains has no factor <= 10^6
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            large.push(m);
        } else {
            let d = pollard_brent(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    large.sort_unstable();
    for q in large {
        match factors.last_mut() {
            Some((p, e)) if *p == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    factors.sort_unstable();
    Ok(Factorization { factors })
}

/// Euler's totient of a 64-bit integer.
pub fn totient(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    let mut phi = n;
    for &(q, _) in &f.factors {
        phi = phi / q * (q - 1);
    }
    Ok(phi)
}

/// Smallest prime q > lower with q = residue (mod modulus).
///
/// The residue class must be coprime to the modulus; the search never loops
/// silently, it stops with a structured error after `budget` candidates.
pub fn next_prime_in_ap(modulus: u64, residue: u64, lower: u64, budget: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::input("next_prime_in_ap", "modulus must be >= 1"));
    }
    let r = residue % modulus;
    if gcd(modulus, r) != 1 {
        return Err(Error::input(
            "next_prime_in_ap",
            format!("gcd({modulus}, {r}) != 1"),
        ));
    }
    // first candidate > lower in the class r (mod modulus)
    let mut q = lower - (lower % modulus) + r;
    if q <= lower {
        q += modulus;
    }
    for _ in 0..budget {
        if is_prime(q) {
            return Ok(q);
        }
        q = q.checked_add(modulus).ok_or(Error::Overflow {
            field: "ap candidate",
        })?;
    }
    Err(Error::SearchBudget {
        what: "next_prime_in_ap",
        budget,
    })
}

/// Empirical threshold for "every window (x, (1+eps)x) up to x_max holds at
/// least `count` primes = -1 (mod p)".
///
/// This is a desk-scale observation, never a bound; the `heuristic` flag in
/// the output is always true.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirichletEstimate {
    pub p: u64,
    pub epsilon: Rational,
    pub count: u32,
    pub x_max: u64,
    /// least x0 such that every integer x in [x0, x_max] qualifies; None when
    /// even x_max fails
    pub x0: Option<u64>,
    pub heuristic: bool,
}

fn window_progression_primes(p: u64, epsilon: &Rational, x_max: u64) -> Result<Vec<u64>> {
    if p < 2 || !is_prime(p) {
        return Err(Error::input("dirichlet_threshold", "p must be prime"));
    }
    if epsilon.numer() <= 0 {
        return Err(Error::input("dirichlet_threshold", "epsilon must be > 0"));
    }
    if x_max < 4 {
        return Err(Error::input("dirichlet_threshold", "x_max must be >= 4"));
    }
    let num = epsilon.numer() as u64;
    let den = epsilon.denom() as u64;
    let hi = x_max
        .checked_mul(num + den)
        .map(|v| v / den + 1)
        .ok_or(Error::Overflow {
            field: "window ceiling",
        })?;
    if hi > (1u64 << 32) {
        return Err(Error::input(
            "dirichlet_threshold",
            format!("window ceiling {hi} beyond sieve budget"),
        ));
    }
    Ok(sieve(hi)?.into_iter().filter(|&q| q % p == p - 1).collect())
}

fn window_holds(progression: &[u64], epsilon: &Rational, count: u32, x: u64) -> bool {
    // primes q with x < q and q*den < x*(den+num): strict open interval
    let num = epsilon.numer() as u128;
    let den = epsilon.denom() as u128;
    let lo = progression.partition_point(|&q| q <= x);
    let mut found = 0u32;
    for &q in &progression[lo..] {
        if (q as u128) * den < (x as u128) * (den + num) {
            found += 1;
            if found >= count {
                return true;
            }
        } else {
            break;
        }
    }
    false
}

fn dirichlet_from_failure(
    p: u64,
    epsilon: Rational,
    count: u32,
    x_max: u64,
    worst_failure: Option<u64>,
) -> DirichletEstimate {
    let x0 = match worst_failure {
        None => Some(2),
        Some(x) if x >= x_max => None,
        Some(x) => Some(x + 1),
    };
    DirichletEstimate {
        p,
        epsilon,
        count,
        x_max,
        x0,
        heuristic: true,
    }
}

/// Sequential scan; the reference implementation for the parallel one.
pub fn dirichlet_threshold_seq(
    p: u64,
    epsilon: Rational,
    count: u32,
    x_max: u64,
) -> Result<DirichletEstimate> {
    let progression = window_progression_primes(p, &epsilon, x_max)?;
    let worst = (2..=x_max)
        .rev()
        .find(|&x| !window_holds(&progression, &epsilon, count, x));
    Ok(dirichlet_from_failure(p, epsilon, count, x_max, worst))
}

#[cfg(feature = "parallel")]
pub fn dirichlet_threshold(
    p: u64,
    epsilon: Rational,
    count: u32,
    x_max: u64,
) -> Result<DirichletEstimate> {
    use rayon::prelude::*;
    let progression = window_progression_primes(p, &epsilon, x_max)?;
    let worst = (2..=x_max)
        .into_par_iter()
        .filter(|&x| !window_holds(&progression, &epsilon, count, x))
        .max();
    Ok(dirichlet_from_failure(p, epsilon, count, x_max, worst))
}

#[cfg(not(feature = "parallel"))]
pub fn dirichlet_threshold(
    p: u64,
    epsilon: Rational,
    count: u32,
    x_max: u64,
) -> Result<DirichletEstimate> {
    dirichlet_threshold_seq(p, epsilon, count, x_max)
}
