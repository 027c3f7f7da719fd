//! Non-divisibility witnesses for the a = cp, b = pk+r family: both the
//! one-prime window (part i) and the two-prime window (part ii), with the
//! exact-rational hypothesis bounds and the floor-identity side check.

use serde::Serialize;

use crate::engines::beta::beta_window;
use crate::error::{Error, Result};
use crate::primes::{is_prime, next_prime_in_ap};
use crate::rat::{rational, Rational};
use crate::valuation::{digits_u64, divides_binomial, LucasEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Thm22Part {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm22Params {
    pub p: u64,
    pub r: u64,
    pub c: u64,
    pub k: u64,
    pub b: u64,
    /// b >= c(p-r) is normalized through b -> pc - b, which swaps
    /// (k, r) for (c-k-1, p-r)
    pub reflected: bool,
    pub original: Option<(u64, u64, u64)>,
    pub gamma: Rational,
    pub alpha: Rational,
    /// b <= c p (1 - gamma)
    pub part_i_hypothesis: bool,
    /// c p (1 - gamma) < b < c(p - r) and r <= (p-3)/2
    pub part_ii_hypothesis: bool,
}

pub fn thm22_params(p: u64, r: u64, c: u64, k: u64) -> Result<Thm22Params> {
    if p < 3 || !is_prime(p) {
        return Err(Error::input("thm22_params", "p must be an odd prime"));
    }
    if !(1..=p - 1).contains(&r) {
        return Err(Error::input("thm22_params", "need 1 <= r <= p-1"));
    }
    if c == 0 {
        return Err(Error::input("thm22_params", "need c >= 1"));
    }
    let b = p
        .checked_mul(k)
        .and_then(|pk| pk.checked_add(r))
        .ok_or(Error::Overflow { field: "b" })?;
    if b >= p * c {
        return Err(Error::input("thm22_params", "need b = pk+r < pc"));
    }

    let (mut r, mut k, mut b) = (r, k, b);
    let mut reflected = false;
    let mut original = None;
    if b > c * (p - r) {
        original = Some((b, k, r));
        reflected = true;
        b = p * c - b;
        k = c - k - 1;
        r = p - r;
        debug_assert_eq!(p * k + r, b);
    }

    let (p_i, r_i, c_i, b_i) = (p as i128, r as i128, c as i128, b as i128);
    let gamma = rational(
        p_i * p_i * r_i + p_i * p_i + r_i * r_i - p_i * r_i,
        p_i * p_i * (p_i + 1),
    );
    let alpha = rational(p_i + 1, 2 * (p_i - r_i));
    // b <= c p (1-gamma)  <=>  b p (p+1) <= c (p-r)(p^2+r)
    let lhs = b_i * p_i * (p_i + 1);
    let rhs = c_i * (p_i - r_i) * (p_i * p_i + r_i);
    let part_i_hypothesis = lhs <= rhs;
    let part_ii_hypothesis = lhs > rhs && b < c * (p - r) && 2 * r + 3 <= p;

    Ok(Thm22Params {
        p,
        r,
        c,
        k,
        b,
        reflected,
        original,
        gamma,
        alpha,
        part_i_hypothesis,
        part_ii_hypothesis,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FloorIdentity {
    pub theta: Rational,
    pub j: u64,
    /// theta landed strictly inside the feasibility window and floor(c/q) = j
    pub applicable: bool,
    pub lhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm22Verification {
    pub params: Thm22Params,
    pub part: Thm22Part,
    pub n: u64,
    /// the window prime q = pn - 1
    pub prime_n: u64,
    pub m: Option<u64>,
    pub prime_m: Option<u64>,
    pub digits_top: Vec<u64>,
    pub digits_bottom: Vec<u64>,
    pub r_upper: Option<u64>,
    pub r_lower: Option<u64>,
    pub floor_count: Option<i64>,
    pub lucas_product: u64,
    /// cross-check: divides_binomial agreed the modulus does NOT divide
    pub non_divisibility_confirmed: bool,
    pub floor_identity: Option<FloorIdentity>,
}

const WINDOW_SEARCH_BUDGET: u64 = 1_000_000;

fn verify_part_i(params: &Thm22Params) -> Result<Thm22Verification> {
    let Thm22Params { p, r, c, k, b, .. } = *params;
    if !params.part_i_hypothesis {
        return Err(Error::input(
            "thm22_verify",
            "part i hypothesis does not hold",
        ));
    }
    // prime q = pn-1 with c < q < p(c-k)/r - 1, i.e. r(q+1) < p(c-k)
    let q = next_prime_in_ap(p, p - 1, c, WINDOW_SEARCH_BUDGET)?;
    if (r as u128) * (q as u128 + 1) >= (p as u128) * ((c - k) as u128) {
        return Err(Error::MissingWindowPrime {
            modulus: p,
            residue: p - 1,
            lower: c,
            upper: (p * (c - k) - r) / r,
        });
    }
    let n = (q + 1) / p;
    let rnk = r * n + k;
    if !(k <= rnk && rnk <= c && c < q) {
        return Err(Error::invariant(
            "thm22-i-chain",
            format!("k={k} rn+k={rnk} c={c} q={q}"),
        ));
    }
    let top = p * c * n;
    let bottom = b * n;
    let digits_top = digits_u64(top, q);
    let digits_bottom = digits_u64(bottom, q);
    if digits_top != vec![c, c] {
        return Err(Error::invariant(
            "thm22-i-digits",
            format!("top digits {digits_top:?}"),
        ));
    }
    let expected_bottom = if k == 0 { vec![rnk] } else { vec![rnk, k] };
    if digits_bottom != expected_bottom {
        return Err(Error::invariant(
            "thm22-i-digits",
            format!("bottom digits {digits_bottom:?}"),
        ));
    }
    let ev = LucasEvaluator::new(q)?;
    let product = crate::arith::mul_mod(ev.binom_digit(c, k), ev.binom_digit(c, rnk), q);
    if product == 0 {
        return Err(Error::invariant(
            "thm22-i-nonzero",
            "Lucas product vanished",
        ));
    }
    if ev.binom_mod(top, bottom) != product {
        return Err(Error::invariant(
            "thm22-i-cross-check",
            "direct Lucas disagrees",
        ));
    }
    let report = divides_binomial(q, top, bottom)?;
    if report.divides {
        return Err(Error::invariant(
            "thm22-i-cross-check",
            "valuation engine claims divisibility",
        ));
    }
    Ok(Thm22Verification {
        params: params.clone(),
        part: Thm22Part::I,
        n,
        prime_n: q,
        m: None,
        prime_m: None,
        digits_top,
        digits_bottom,
        r_upper: None,
        r_lower: None,
        floor_count: None,
        lucas_product: product,
        non_divisibility_confirmed: true,
        floor_identity: None,
    })
}

fn verify_part_ii(params: &Thm22Params) -> Result<Thm22Verification> {
    let Thm22Params { p, r, c, k, b, .. } = *params;
    if !params.part_ii_hypothesis {
        return Err(Error::input(
            "thm22_verify",
            "part ii hypothesis does not hold",
        ));
    }
    // two primes q_m < q_n in the open interval (alpha k, k),
    // alpha = (p+1)/(2(p-r)): q > alpha k <=> 2 q (p-r) > k (p+1)
    let above_alpha_k =
        |q: u64| 2 * (q as u128) * ((p - r) as u128) > (k as u128) * ((p + 1) as u128);
    let alpha_k_floor = ((k as u128 * (p as u128 + 1)) / (2 * (p as u128 - r as u128))) as u64;
    let mut q_m = next_prime_in_ap(
        p,
        p - 1,
        alpha_k_floor.saturating_sub(1),
        WINDOW_SEARCH_BUDGET,
    )?;
    while !above_alpha_k(q_m) {
        q_m = next_prime_in_ap(p, p - 1, q_m, WINDOW_SEARCH_BUDGET)?;
    }
    let q_n = next_prime_in_ap(p, p - 1, q_m, WINDOW_SEARCH_BUDGET)?;
    if q_n >= k {
        return Err(Error::MissingWindowPrime {
            modulus: p,
            residue: p - 1,
            lower: alpha_k_floor,
            upper: k,
        });
    }
    let m = (q_m + 1) / p;
    let n = (q_n + 1) / p;

    // the inequality chain behind the two-level digit split
    let chain_ok = q_n < k
        && k < c
        && (c as u128) * ((p - r) as u128) < (k as u128) * ((p + 1) as u128) // c < 2 alpha k
        && c < 2 * q_m;
    if !chain_ok {
        return Err(Error::invariant(
            "thm22-ii-chain",
            format!("q_m={q_m} q_n={q_n} k={k} c={c}"),
        ));
    }
    let rr = c - q_n; // R
    let rnk = r * n + k;
    let rr_low = rnk - q_n; // R'
    if !(q_n > rr && rr > rr_low) {
        return Err(Error::invariant(
            "thm22-ii-chain",
            format!("need q={q_n} > R={rr} > R'={rr_low}"),
        ));
    }
    let floor_count =
        (c + 1) as i64 / q_n as i64 - (k + 1) as i64 / q_n as i64 - (c - k) as i64 / q_n as i64;
    if floor_count > 0 {
        return Err(Error::invariant(
            "thm22-ii-floors",
            format!("floor count {floor_count}"),
        ));
    }

    let ev = LucasEvaluator::new(q_n)?;
    let factor_top = ev.binom_mod(c + 1, k + 1);
    let factor_low = ev.binom_digit(rr, rr_low);
    let product = crate::arith::mul_mod(factor_top, factor_low, q_n);
    if product == 0 {
        return Err(Error::invariant(
            "thm22-ii-nonzero",
            "Lucas product vanished",
        ));
    }
    let top = p * c * n;
    let bottom = b * n;
    if ev.binom_mod(top, bottom) != product {
        return Err(Error::invariant(
            "thm22-ii-cross-check",
            "direct Lucas disagrees",
        ));
    }
    let report = divides_binomial(q_n, top, bottom)?;
    if report.divides {
        return Err(Error::invariant(
            "thm22-ii-cross-check",
            "valuation engine claims divisibility",
        ));
    }

    // floor-identity side check for theta = q/k inside the beta window
    let bw = beta_window(p, r)?;
    let theta = rational(q_n as i128, k as i128);
    let in_window = bw.alpha < theta && theta < bw.upper;
    let applicable = in_window && c / q_n == bw.j && q_n <= rnk && rnk < 2 * q_n;
    let lhs = (c / q_n) as i64 - (rnk / q_n) as i64 - ((c - rnk) / q_n) as i64;
    let holds = lhs == 0;
    if applicable && !holds {
        return Err(Error::invariant(
            "thm22-floor-identity",
            format!("lhs {lhs}"),
        ));
    }
    Ok(Thm22Verification {
        params: params.clone(),
        part: Thm22Part::II,
        n,
        prime_n: q_n,
        m: Some(m),
        prime_m: Some(q_m),
        digits_top: digits_u64(top, q_n),
        digits_bottom: digits_u64(bottom, q_n),
        r_upper: Some(rr),
        r_lower: Some(rr_low),
        floor_count: Some(floor_count),
        lucas_product: product,
        non_divisibility_confirmed: true,
        floor_identity: Some(FloorIdentity {
            theta,
            j: bw.j,
            applicable,
            lhs,
            holds,
        }),
    })
}

pub fn thm22_verify(params: &Thm22Params, part: Thm22Part) -> Result<Thm22Verification> {
    match part {
        Thm22Part::I => verify_part_i(params),
        Thm22Part::II => verify_part_ii(params),
    }
}

/// Searches the smallest (c, k) instance for the requested part that fully
/// verifies, scanning c (part i) or k (part ii) up to `limit`.
pub fn thm22_find_instance(
    p: u64,
    r: u64,
    part: Thm22Part,
    limit: u64,
) -> Result<Thm22Verification> {
    match part {
        Thm22Part::I => {
            for c in 2..=limit {
                for k in 0..c {
                    let params = match thm22_params(p, r, c, k) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    if params.reflected || !params.part_i_hypothesis {
                        continue;
                    }
                    if let Ok(v) = verify_part_i(&params) {
                        return Ok(v);
                    }
                }
            }
        }
        Thm22Part::II => {
            for k in 1..=limit {
                let b = p * k + r;
                // c window from c p (1-gamma) < b < c (p-r)
                let denom = (p - r) as u128 * (p as u128 * p as u128 + r as u128);
                let c_hi = ((b as u128 * p as u128 * (p as u128 + 1) - 1) / denom) as u64;
                let c_lo = b / (p - r) + 1;
                if c_lo > c_hi {
                    continue;
                }
                for c in c_lo..=c_hi {
                    let params = match thm22_params(p, r, c, k) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    if !params.part_ii_hypothesis {
                        continue;
                    }
                    match verify_part_ii(&params) {
                        Ok(v) => return Ok(v),
                        Err(Error::MissingWindowPrime { .. }) => break, // primes depend on k only
                        Err(_) => continue,
                    }
                }
            }
        }
    }
    Err(Error::SearchBudget {
        what: "thm22_find_instance",
        budget: limit,
    })
}
