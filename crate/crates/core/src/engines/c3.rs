//! The a = 6*5*7*...*p_t, b = 4*5*7*...*p_t construction: an-1 divides
//! C(amn, bn) for every n. Verification works purely through factorization
//! and Kummer carries, so no giant binomial is ever materialized. Each check
//! also records the digit bound r0 > q/3 > m that powers the argument.

use serde::Serialize;

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::primes::sieve;
use crate::valuation::{divides_binomial, DivisibilityReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C3Construction {
    pub m: u64,
    /// 1-based index t of the first prime above 3m
    pub t_index: usize,
    pub p_t: u64,
    pub a: u64,
    pub b: u64,
}

/// Product of the primes p_3..p_t (5 * 7 * ... * p_t).
fn odd_prime_tail(primes: &[u64], t_index: usize) -> Result<u64> {
    let mut acc: u64 = 1;
    for &p in &primes[2..t_index] {
        acc = acc.checked_mul(p).ok_or(Error::Overflow {
            field: "prime product",
        })?;
    }
    Ok(acc)
}

pub fn c3_build(m: u64) -> Result<C3Construction> {
    if m == 0 {
        return Err(Error::input("c3_build", "m must be >= 1"));
    }
    // Bertrand: a prime lives in (3m, 6m]; sieve a little past that
    let primes = sieve(6 * m + 12)?;
    let t_index = primes
        .iter()
        .position(|&p| p > 3 * m)
        .expect("sieve reaches past 3m")
        + 1;
    let p_t = primes[t_index - 1];
    let tail = odd_prime_tail(&primes, t_index)?;
    let a = tail.checked_mul(6).ok_or(Error::Overflow { field: "a" })?;
    let b = tail.checked_mul(4).ok_or(Error::Overflow { field: "b" })?;
    debug_assert!(a.checked_mul(m).is_some_and(|am| am > b));
    Ok(C3Construction {
        m,
        t_index,
        p_t,
        a,
        b,
    })
}

/// Digit-bound record for one prime factor q of an-1: the units digit
/// r0 of bn in base q, its predicted value 2 * inv(3) when b/a = 2/3,
/// and the bounds r0 > q/3 > m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitBound {
    pub q: u64,
    pub r0: u64,
    pub predicted: Option<u64>,
    pub matches_prediction: Option<bool>,
    pub above_q_third: bool,
    pub above_m: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C3Check {
    pub n: u64,
    pub modulus: u64,
    pub report: DivisibilityReport,
    pub digit_bounds: Vec<DigitBound>,
}

impl C3Check {
    pub fn divides(&self) -> bool {
        self.report.divides
    }
}

fn c3_check_one(a: u64, b: u64, m: u64, n: u64) -> Result<C3Check> {
    let modulus = a
        .checked_mul(n)
        .and_then(|an| an.checked_sub(1))
        .ok_or(Error::Overflow { field: "an-1" })?;
    let top = a
        .checked_mul(m)
        .and_then(|am| am.checked_mul(n))
        .ok_or(Error::Overflow { field: "amn" })?;
    let bottom = b.checked_mul(n).ok_or(Error::Overflow { field: "bn" })?;
    if bottom > top {
        return Err(Error::input("c3_verify", "need am >= b"));
    }
    let report = divides_binomial(modulus, top, bottom)?;
    let recipe_shape = 3 * b == 2 * a;
    let digit_bounds = report
        .factorization
        .factors
        .iter()
        .map(|&(q, _)| {
            let r0 = bottom % q;
            let predicted = (recipe_shape && q % 3 != 0)
                .then(|| mul_mod(2, inv_mod(3, q).expect("3 is a unit"), q));
            DigitBound {
                q,
                r0,
                predicted,
                matches_prediction: predicted.map(|e| e == r0),
                above_q_third: 3 * (r0 as u128) > q as u128,
                above_m: r0 > m,
            }
        })
        .collect();
    Ok(C3Check {
        n,
        modulus,
        report,
        digit_bounds,
    })
}

pub fn c3_verify_seq(a: u64, b: u64, m: u64, n_from: u64, n_to: u64) -> Result<Vec<C3Check>> {
    (n_from.max(1)..=n_to)
        .map(|n| c3_check_one(a, b, m, n))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn c3_verify(a: u64, b: u64, m: u64, n_from: u64, n_to: u64) -> Result<Vec<C3Check>> {
    use rayon::prelude::*;
    (n_from.max(1)..=n_to)
        .into_par_iter()
        .map(|n| c3_check_one(a, b, m, n))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn c3_verify(a: u64, b: u64, m: u64, n_from: u64, n_to: u64) -> Result<Vec<C3Check>> {
    c3_verify_seq(a, b, m, n_from, n_to)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let c = c3_build(1).unwrap();
        assert_eq!((c.t_index, c.p_t, c.a, c.b), (3, 5, 30, 20));
        let c = c3_build(2).unwrap();
        assert_eq!((c.t_index, c.p_t, c.a, c.b), (4, 7, 210, 140));
        assert!(c.a * c.m > c.b);
    }

    #[test]
    fn verify_first_instances() {
        // 29 | C(30, 20)
        let checks = c3_verify_seq(30, 20, 1, 1, 1).unwrap();
        assert!(checks[0].divides());
        assert_eq!(checks[0].modulus, 29);

        // 209 = 11 * 19 with v11 >= 1 and v19 >= 1
        let checks = c3_verify_seq(210, 140, 2, 1, 1).unwrap();
        assert!(checks[0].divides());
        let per = &checks[0].report.per_prime;
        assert_eq!(per.len(), 2);
        assert!(per.iter().all(|c| c.achieved >= c.required as u64));
    }

    #[test]
    fn digit_bounds_hold_on_recipe() {
        for check in c3_verify_seq(30, 20, 1, 1, 200).unwrap() {
            assert!(check.divides(), "n={}", check.n);
            for db in &check.digit_bounds {
                assert_eq!(
                    db.matches_prediction,
                    Some(true),
                    "n={} q={}",
                    check.n,
                    db.q
                );
                assert!(db.above_q_third && db.above_m, "n={} q={}", check.n, db.q);
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let seq = c3_verify_seq(30, 20, 1, 1, 300).unwrap();
        let par = c3_verify(30, 20, 1, 1, 300).unwrap();
        assert_eq!(seq, par);
    }
}
