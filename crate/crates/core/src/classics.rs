//! Checkers for the classical binomial congruences: Babbage (mod p^2),
//! Wolstenholme (mod p^3), Ljunggren's C(np,mp) = C(n,m) (mod p^3) and
//! Jacobsthal's sharpening modulo p^q with q = v_p(p^3 m n (n-m)).
//!
//! Every check is an exact desk-scale instance verification through the
//! exact binomial oracle, not a proof. `claimed` records whether the
//! classical statement actually covers the parameters, so a report with
//! `holds == false` outside the claimed range (Wolstenholme at p = 3) is an
//! observation, not a discrepancy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::valuation::{binom_mod, kummer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CongruenceKind {
    Babbage,
    Wolstenholme,
    Ljunggren,
    Jacobsthal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub kind: CongruenceKind,
    pub p: u64,
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub modulus: u64,
    pub lhs: u64,
    pub rhs: u64,
    /// Jacobsthal exponent q with modulus p^q, where applicable.
    pub q: Option<u32>,
    pub holds: bool,
    pub claimed: bool,
}

impl CongruenceReport {
    /// A discrepancy is a failed congruence inside the claimed range.
    pub fn is_discrepancy(&self) -> bool {
        self.claimed && !self.holds
    }
}

fn require_odd_prime(p: u64, op: &'static str) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::input(op, format!("p={p} must be an odd prime")));
    }
    Ok(())
}

/// v_p of a positive 64-bit integer.
fn vp(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Babbage: C(2p-1, p-1) = 1 (mod p^2) for every odd prime.
pub fn babbage_check(p: u64) -> Result<CongruenceReport> {
    require_odd_prime(p, "babbage")?;
    let modulus = p * p;
    let lhs = binom_mod(2 * p - 1, p - 1, modulus)?;
    Ok(CongruenceReport {
        kind: CongruenceKind::Babbage,
        p,
        n: None,
        m: None,
        modulus,
        lhs,
        rhs: 1,
        q: None,
        holds: lhs == 1,
        claimed: true,
    })
}

/// Wolstenholme: the Babbage congruence modulo p^3, claimed for p >= 5.
/// p = 3 is checked too and reports holds = false, showing the hypothesis
/// is sharp.
pub fn wolstenholme_check(p: u64) -> Result<CongruenceReport> {
    require_odd_prime(p, "wolstenholme")?;
    let modulus = p * p * p;
    let lhs = binom_mod(2 * p - 1, p - 1, modulus)?;
    Ok(CongruenceReport {
        kind: CongruenceKind::Wolstenholme,
        p,
        n: None,
        m: None,
        modulus,
        lhs,
        rhs: 1,
        q: None,
        holds: lhs == 1,
        claimed: p >= 5,
    })
}

fn require_ljunggren_range(p: u64, n: u64, m: u64, op: &'static str) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::input(op, format!("p={p} must be a prime >= 5")));
    }
    if !(0 < m && m < n) {
        return Err(Error::input(op, "need 0 < m < n"));
    }
    if n * p > crate::valuation::BINOM_EXACT_CAP {
        return Err(Error::input(
            op,
            format!("np={} exceeds the exact cap", n * p),
        ));
    }
    Ok(())
}

/// Ljunggren: C(np, mp) = C(n, m) (mod p^3).
pub fn ljunggren_check(p: u64, n: u64, m: u64) -> Result<CongruenceReport> {
    require_ljunggren_range(p, n, m, "ljunggren")?;
    let modulus = p * p * p;
    let lhs = binom_mod(n * p, m * p, modulus)?;
    let rhs = binom_mod(n, m, modulus)?;
    Ok(CongruenceReport {
        kind: CongruenceKind::Ljunggren,
        p,
        n: Some(n),
        m: Some(m),
        modulus,
        lhs,
        rhs,
        q: None,
        holds: lhs == rhs,
        claimed: true,
    })
}

/// Jacobsthal: C(np, mp) / C(n, m) = 1 (mod p^q) with p^q the full power of
/// p dividing p^3 m n (n-m). The ratio need not be an integer (already
/// C(20,10)/C(4,2) is not), but it is always a p-adic unit because both
/// binomials carry the same p-valuation; the congruence is therefore
/// checked in the equivalent integral form
///     p^(q + v_p(C(n,m)))  |  C(np, mp) - C(n, m),
/// which needs no division at all.
pub fn jacobsthal_check(p: u64, n: u64, m: u64) -> Result<CongruenceReport> {
    require_ljunggren_range(p, n, m, "jacobsthal")?;
    let q = 3 + vp(m, p) + vp(n, p) + vp(n - m, p);
    let v = kummer(m, n - m, p) as u32;
    let mut modulus: u64 = 1;
    for _ in 0..q + v {
        modulus = modulus
            .checked_mul(p)
            .ok_or(Error::Overflow { field: "p^q" })?;
    }
    let lhs = binom_mod(n * p, m * p, modulus)?;
    let rhs = binom_mod(n, m, modulus)?;
    Ok(CongruenceReport {
        kind: CongruenceKind::Jacobsthal,
        p,
        n: Some(n),
        m: Some(m),
        modulus,
        lhs,
        rhs,
        q: Some(q),
        holds: lhs == rhs,
        claimed: true,
    })
}

/// Single-instance entry point used by the CLI.
pub fn classic_check(
    kind: CongruenceKind,
    p: u64,
    n: Option<u64>,
    m: Option<u64>,
) -> Result<CongruenceReport> {
    match kind {
        CongruenceKind::Babbage => babbage_check(p),
        CongruenceKind::Wolstenholme => wolstenholme_check(p),
        CongruenceKind::Ljunggren | CongruenceKind::Jacobsthal => {
            let n = n.ok_or_else(|| Error::input("classics", "n required for this kind"))?;
            let m = m.ok_or_else(|| Error::input("classics", "m required for this kind"))?;
            if kind == CongruenceKind::Ljunggren {
                ljunggren_check(p, n, m)
            } else {
                jacobsthal_check(p, n, m)
            }
        }
    }
}

fn odd_primes_to(p_max: u64) -> Vec<u64> {
    crate::primes::sieve(p_max.max(3))
        .map(|v| v.into_iter().filter(|&p| p >= 3 && p <= p_max).collect())
        .unwrap_or_default()
}

fn run_over<T, F>(items: Vec<T>, f: F) -> Result<Vec<CongruenceReport>>
where
    T: Send,
    F: Fn(T) -> Result<CongruenceReport> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Babbage over every odd prime p <= p_max.
pub fn babbage_sweep(p_max: u64) -> Result<Vec<CongruenceReport>> {
    run_over(odd_primes_to(p_max), babbage_check)
}

/// Wolstenholme over every odd prime p <= p_max (p = 3 included as the
/// sharpness witness; it carries claimed = false).
pub fn wolstenholme_sweep(p_max: u64) -> Result<Vec<CongruenceReport>> {
    run_over(odd_primes_to(p_max), wolstenholme_check)
}

/// Ljunggren or Jacobsthal over all 0 < m < n <= n_max for each listed prime.
pub fn ratio_sweep(
    kind: CongruenceKind,
    primes: &[u64],
    n_max: u64,
) -> Result<Vec<CongruenceReport>> {
    let mut grid = Vec::new();
    for &p in primes {
        for n in 2..=n_max {
            for m in 1..n {
                grid.push((p, n, m));
            }
        }
    }
    run_over(grid, move |(p, n, m)| match kind {
        CongruenceKind::Ljunggren => ljunggren_check(p, n, m),
        CongruenceKind::Jacobsthal => jacobsthal_check(p, n, m),
        _ => Err(Error::input(
            "ratio_sweep",
            "kind must be ljunggren or jacobsthal",
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn babbage_examples() {
        let r = babbage_check(3).unwrap();
        assert!(r.holds && r.lhs == 1 && r.modulus == 9);
        assert!(babbage_check(2).is_err());
    }

    #[test]
    fn wolstenholme_examples() {
        let r = wolstenholme_check(5).unwrap();
        assert!(r.holds && r.modulus == 125);
        // sharpness: C(5,2) = 10 is not 1 mod 27
        let r3 = wolstenholme_check(3).unwrap();
        assert!(!r3.holds);
        assert_eq!(r3.lhs, 10);
        assert!(!r3.claimed);
        assert!(!r3.is_discrepancy());
    }

    #[test]
    fn ljunggren_example() {
        let r = ljunggren_check(5, 2, 1).unwrap();
        assert!(r.holds);
        assert_eq!((r.lhs, r.rhs), (2, 2)); // 252 = 2 (mod 125)
    }

    #[test]
    fn jacobsthal_example() {
        let r = jacobsthal_check(5, 3, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.q, Some(3));
        assert_eq!(r.modulus, 125); // 3003/3 = 1001 = 1 (mod 125)
    }

    #[test]
    fn jacobsthal_exponent_grows_with_p_divisibility() {
        // n = 10, m = 5, p = 5: q = 3 + 1 + 1 + 1
        let r = jacobsthal_check(5, 10, 5).unwrap();
        assert_eq!(r.q, Some(6));
        assert!(r.holds);
    }

    #[test]
    fn claimed_ranges_hold() {
        for r in babbage_sweep(200).unwrap() {
            assert!(r.holds, "Babbage failed at p={}", r.p);
        }
        for r in wolstenholme_sweep(200).unwrap() {
            assert_eq!(r.holds, r.p >= 5, "Wolstenholme at p={}", r.p);
        }
        for r in ratio_sweep(CongruenceKind::Ljunggren, &[5, 7], 8).unwrap() {
            assert!(
                r.holds,
                "Ljunggren failed at p={} n={:?} m={:?}",
                r.p, r.n, r.m
            );
        }
        for r in ratio_sweep(CongruenceKind::Jacobsthal, &[5, 7], 8).unwrap() {
            assert!(
                r.holds,
                "Jacobsthal failed at p={} n={:?} m={:?}",
                r.p, r.n, r.m
            );
        }
    }
}
