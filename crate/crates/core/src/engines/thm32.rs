//! Tester for the mod (an - a) variant: b = a * p_3 ... p_t and the claim
//! that a(n-1) divides C(amn, bn) for every n >= 2. The claim is treated
//! as something to test, not an axiom: every failing n becomes a
//! discrepancy record that the CLI surfaces with exit code 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::sieve;
use crate::valuation::{divides_binomial, DivisibilityReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm32Check {
    pub n: u64,
    pub modulus: u64,
    /// bn > amn makes the binomial 0, so divisibility is vacuous
    pub trivial: bool,
    pub report: Option<DivisibilityReport>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm32Report {
    pub a: u64,
    pub t_index: u64,
    pub m: u64,
    pub b: u64,
    pub checks: Vec<Thm32Check>,
    /// n values where the claimed divisibility fails
    pub failing_n: Vec<u64>,
}

fn thm32_check_one(a: u64, b: u64, m: u64, n: u64) -> Result<Thm32Check> {
    let modulus = a
        .checked_mul(n - 1)
        .ok_or(Error::Overflow { field: "an-a" })?;
    let top = a
        .checked_mul(m)
        .and_then(|am| am.checked_mul(n))
        .ok_or(Error::Overflow { field: "amn" })?;
    let bottom = b.checked_mul(n).ok_or(Error::Overflow { field: "bn" })?;
    if bottom > top {
        // C(amn, bn) = 0, divisible by anything
        return Ok(Thm32Check {
            n,
            modulus,
            trivial: true,
            report: None,
            holds: true,
        });
    }
    let report = divides_binomial(modulus, top, bottom)?;
    let holds = report.divides;
    Ok(Thm32Check {
        n,
        modulus,
        trivial: false,
        report: Some(report),
        holds,
    })
}

/// Checks n in [max(2, n_from), n_to]. `t_index` is the 1-based prime index
/// bounding the tail product p_3..p_t in b.
pub fn thm32_verify(a: u64, t_index: u64, m: u64, n_from: u64, n_to: u64) -> Result<Thm32Report> {
    if a == 0 || m == 0 {
        return Err(Error::input("thm32_verify", "need a >= 1 and m >= 1"));
    }
    if t_index < 3 {
        return Err(Error::input("thm32_verify", "t must be >= 3"));
    }
    let primes = sieve_for_index(t_index)?;
    let mut b = a;
    for &p in &primes[2..t_index as usize] {
        b = b.checked_mul(p).ok_or(Error::Overflow { field: "b" })?;
    }
    let from = n_from.max(2);
    let checks = run_range(a, b, m, from, n_to)?;
    let failing_n = checks.iter().filter(|c| !c.holds).map(|c| c.n).collect();
    Ok(Thm32Report {
        a,
        t_index,
        m,
        b,
        checks,
        failing_n,
    })
}

fn sieve_for_index(t_index: u64) -> Result<Vec<u64>> {
    // p_t < t (ln t + ln ln t) for t >= 6; a loose doubling bound is fine here
    let mut limit = 32u64;
    loop {
        let primes = sieve(limit)?;
        if primes.len() as u64 >= t_index {
            return Ok(primes);
        }
        limit *= 2;
    }
}

fn run_range(a: u64, b: u64, m: u64, from: u64, to: u64) -> Result<Vec<Thm32Check>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (from..=to)
            .into_par_iter()
            .map(|n| thm32_check_one(a, b, m, n))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (from..=to).map(|n| thm32_check_one(a, b, m, n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::binom_mod;

    #[test]
    fn candidate_counterexample_settled_by_exact_oracle() {
        // a=1, t=3, m=6: b = 5; at n=5 the modulus is 4 and C(30,25) = 142506
        let report = thm32_verify(1, 3, 6, 2, 10).unwrap();
        assert_eq!(report.b, 5);
        for check in &report.checks {
            if check.trivial {
                continue;
            }
            let exact = binom_mod(6 * check.n, 5 * check.n, check.modulus).unwrap() == 0;
            assert_eq!(check.holds, exact, "n={}", check.n);
        }
        // the verdict at n=5 comes from the oracle, whichever way it falls
        let n5 = report.checks.iter().find(|c| c.n == 5).unwrap();
        let exact5 = binom_mod(30, 25, 4).unwrap() == 0;
        assert_eq!(n5.holds, exact5);
        assert_eq!(report.failing_n.contains(&5), !exact5);
    }

    #[test]
    fn trivial_when_am_below_b() {
        // a=1, m=1: b = 5 > am = 1, so every binomial is zero
        let report = thm32_verify(1, 3, 1, 2, 6).unwrap();
        assert!(report.checks.iter().all(|c| c.trivial && c.holds));
        assert!(report.failing_n.is_empty());
    }

    #[test]
    fn exploratory_scan_records_verdicts() {
        let report = thm32_verify(6, 3, 6, 2, 50).unwrap();
        assert_eq!(report.b, 30);
        assert_eq!(report.checks.len(), 49);
        for check in &report.checks {
            assert_eq!(check.holds, !report.failing_n.contains(&check.n));
        }
    }
}
