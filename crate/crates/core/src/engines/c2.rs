//! Counterexample machinery for the "pn-1 never divides C(an,bn)" family:
//! a brute scan and the two-digit construction that factors pK-1 as
//! (pn+t)(p+s) with pn+t prime, so that Lucas' theorem exhibits a nonzero
//! residue and refutes divisibility at index K.

use serde::Serialize;

use crate::arith::inv_mod;
use crate::error::{Error, Result};
use crate::primes::{is_prime, next_prime_in_ap, DEFAULT_AP_SEARCH_BUDGET};
use crate::valuation::{digits_u64, divides_binomial, LucasEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum C2Case {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C2Construction {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub case: C2Case,
    /// multiplier with s*b = 1 (mod p) in case I; s = a mod p in case II,
    /// where the source text leaves it undefined
    pub s: u64,
    pub q_quot: u64,
    pub r: u64,
    pub q_quot_b: u64,
    pub t: u64,
    pub k: u64,
    pub n: u64,
    /// the prime pn + t
    pub prime: u64,
    pub k_index: u64,
    pub modulus: u64,
    /// base-(pn+t) digits of aK and bK: (low, high)
    pub digits_a: (u64, u64),
    pub digits_b: (u64, u64),
    pub factor_high: u64,
    pub factor_low: u64,
    pub lucas_product: u64,
    /// set when the analog construction could not be completed and the
    /// witness came from exhaustive search instead
    pub fallback: Option<String>,
}

fn checked_mul(a: u64, b: u64, field: &'static str) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow { field })
}

fn checked_add(a: u64, b: u64, field: &'static str) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow { field })
}

/// Smallest n <= n_max with (pn-1) not dividing C(an, bn), or None.
pub fn c2_search_seq(a: u64, b: u64, p: u64, n_max: u64) -> Result<Option<u64>> {
    if a <= b || b == 0 {
        return Err(Error::input("c2_search", "need a > b >= 1"));
    }
    if p < 3 || !is_prime(p) {
        return Err(Error::input("c2_search", "p must be an odd prime"));
    }
    for n in 1..=n_max {
        if !check_divides(a, b, p, n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

fn check_divides(a: u64, b: u64, p: u64, n: u64) -> Result<bool> {
    let modulus = checked_mul(p, n, "pn")? - 1;
    let top = checked_mul(a, n, "an")?;
    let bottom = checked_mul(b, n, "bn")?;
    Ok(divides_binomial(modulus, top, bottom)?.divides)
}

#[cfg(feature = "parallel")]
pub fn c2_search(a: u64, b: u64, p: u64, n_max: u64) -> Result<Option<u64>> {
    use rayon::prelude::*;
    if a <= b || b == 0 {
        return Err(Error::input("c2_search", "need a > b >= 1"));
    }
    if p < 3 || !is_prime(p) {
        return Err(Error::input("c2_search", "p must be an odd prime"));
    }
    let hit = (1..=n_max)
        .into_par_iter()
        .map(|n| check_divides(a, b, p, n).map(|divides| (n, divides)))
        .find_first(|res| match res {
            Ok((_, divides)) => !divides,
            Err(_) => true,
        })
        .transpose()?;
    Ok(hit.map(|(n, _)| n))
}

#[cfg(not(feature = "parallel"))]
pub fn c2_search(a: u64, b: u64, p: u64, n_max: u64) -> Result<Option<u64>> {
    c2_search_seq(a, b, p, n_max)
}

const C2_FALLBACK_SCAN: u64 = 100_000;

/// Runs the construction: derives (s, Q, r, Q', t, k), finds the least
/// n >= n_seed making pn+t prime with all digit bounds satisfied, and
/// verifies that the Lucas factor product is nonzero, hence
/// pK-1 does not divide C(aK, bK).
pub fn c2_construct(a: u64, b: u64, p: u64, n_seed: u64) -> Result<C2Construction> {
    if a <= b || b == 0 {
        return Err(Error::input("c2_construct", "need a > b >= 1"));
    }
    if p < 3 || !is_prime(p) {
        return Err(Error::input("c2_construct", "p must be an odd prime"));
    }
    if a.is_multiple_of(p) {
        return Err(Error::input(
            "c2_construct",
            "construction needs gcd(a, p) = 1",
        ));
    }
    let case = if b.is_multiple_of(p) {
        C2Case::II
    } else {
        C2Case::I
    };
    let s = match case {
        C2Case::I => inv_mod(b % p, p).expect("b is a unit mod p"),
        // undefined in the source; the analog choice s = a mod p makes
        // t satisfy a*t = -1 (mod p)
        C2Case::II => a % p,
    };
    let sa = checked_mul(s, a, "s*a")?;
    let r = sa % p;
    debug_assert!(r >= 1);
    let q_quot = sa / p;
    let sb = checked_mul(s, b, "s*b")?;
    let q_quot_b = sb / p;
    match case {
        C2Case::I => debug_assert_eq!(sb % p, 1),
        C2Case::II => debug_assert_eq!(sb % p, 0),
    }
    let t = p - inv_mod(s, p).expect("s is a unit mod p");
    debug_assert_eq!((s * t) % p, p - 1);
    let st = checked_mul(s, t, "s*t")?;
    let k = (st + 1) / p;
    debug_assert_eq!((st + 1) % p, 0);

    match construct_at(a, b, p, case, s, q_quot, r, q_quot_b, t, k, n_seed) {
        Ok(c) => Ok(c),
        Err(e) if !e.is_usage() => {
            // the analog construction failed; fall back to the scan
            let witness = c2_search(a, b, p, C2_FALLBACK_SCAN)?.ok_or(Error::SearchBudget {
                what: "c2 fallback scan",
                budget: C2_FALLBACK_SCAN,
            })?;
            let modulus = p * witness - 1;
            let report = divides_binomial(modulus, a * witness, b * witness)?;
            debug_assert!(!report.divides);
            Ok(C2Construction {
                a,
                b,
                p,
                case,
                s,
                q_quot,
                r,
                q_quot_b,
                t,
                k,
                n: witness,
                prime: 0,
                k_index: witness,
                modulus,
                digits_a: (0, 0),
                digits_b: (0, 0),
                factor_high: 0,
                factor_low: 0,
                lucas_product: 0,
                fallback: Some(format!(
                    "construction incomplete ({e}); witness n={witness} from scan"
                )),
            })
        }
        Err(e) => Err(e),
    }
}

#[allow(clippy::too_many_arguments)]
fn construct_at(
    a: u64,
    b: u64,
    p: u64,
    case: C2Case,
    s: u64,
    q_quot: u64,
    r: u64,
    q_quot_b: u64,
    t: u64,
    k: u64,
    n_seed: u64,
) -> Result<C2Construction> {
    let mut lower = checked_mul(p, n_seed.max(1), "p*n")? + t - 1;
    for _ in 0..10_000u32 {
        let prime = next_prime_in_ap(p, t, lower, DEFAULT_AP_SEARCH_BUDGET)?;
        lower = prime;
        let n = (prime - t) / p;

        // low digits of aK and bK in base pn+t (exact identities):
        //   aK = (a+Q)(pn+t) + rn + ak - Qt
        //   bK = (b+Q')(pn+t) + [n +] bk - Q't
        let x = r as i128 * n as i128 + (a * k) as i128 - (q_quot * t) as i128;
        let mut y = (b * k) as i128 - (q_quot_b * t) as i128;
        if case == C2Case::I {
            y += n as i128;
        }
        let top_a = a + q_quot;
        let top_b = b + q_quot_b;
        let ok =
            x >= 0 && y >= 0 && y <= x && (x as u64) < prime && top_b <= top_a && top_a < prime;
        if !ok {
            continue;
        }
        let (x, y) = (x as u64, y as u64);

        let k_index = checked_add(
            checked_add(checked_mul(p, n, "pn")?, checked_mul(n, s, "ns")?, "pn+ns")?,
            t + k,
            "K",
        )?;
        let modulus = checked_mul(p, k_index, "pK")? - 1;
        // the factorization identity behind the whole construction
        if (prime as u128) * ((p + s) as u128) != modulus as u128 {
            return Err(Error::invariant(
                "c2-identity",
                format!("(pn+t)(p+s) != pK-1 at n={n}"),
            ));
        }

        let top = checked_mul(a, k_index, "aK")?;
        let bottom = checked_mul(b, k_index, "bK")?;
        if digits_u64(top, prime) != vec![x, top_a] || digits_u64(bottom, prime) != vec![y, top_b] {
            return Err(Error::invariant(
                "c2-digits",
                format!("digit decomposition mismatch at n={n}"),
            ));
        }

        let ev = LucasEvaluator::new(prime)?;
        let factor_high = ev.binom_digit(top_a, top_b);
        let factor_low = ev.binom_digit(x, y);
        let lucas_product = crate::arith::mul_mod(factor_high, factor_low, prime);
        if lucas_product == 0 {
            return Err(Error::invariant(
                "c2-nonzero",
                format!("Lucas product vanished at n={n}"),
            ));
        }
        // independent evaluation on the raw numbers
        let direct = ev.binom_mod(top, bottom);
        if direct != lucas_product {
            return Err(Error::invariant(
                "c2-cross-check",
                format!("direct Lucas {direct} != factored {lucas_product}"),
            ));
        }
        return Ok(C2Construction {
            a,
            b,
            p,
            case,
            s,
            q_quot,
            r,
            q_quot_b,
            t,
            k,
            n,
            prime,
            k_index,
            modulus,
            digits_a: (x, top_a),
            digits_b: (y, top_b),
            factor_high,
            factor_low,
            lucas_product,
            fallback: None,
        });
    }
    Err(Error::SearchBudget {
        what: "c2_construct digit window",
        budget: 10_000,
    })
}
