//! Feasibility window for the ratio theta = (pn-1)/k used by the floor
//! identity in the two-prime argument: for j = floor(p/(p-r)) the window
//! (p/((p-r)(j+1)), (r/(p-r))/(j-1+r/p)) is nonempty exactly when
//! r != p-1, and an explicit epsilon certifies it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::is_prime;
use crate::rat::{rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaWindow {
    pub p: u64,
    pub r: u64,
    pub j: u64,
    pub alpha: Rational,
    pub upper: Rational,
    /// epsilon in (0,1) with alpha < (p+epsilon)/((p-r)(j+1)) < upper,
    /// chosen as the midpoint of the feasible interval; None iff r = p-1
    pub epsilon: Option<Rational>,
}

pub fn beta_window(p: u64, r: u64) -> Result<BetaWindow> {
    if p < 3 || !is_prime(p) {
        return Err(Error::input(
            "beta_window",
            format!("p={p} must be an odd prime"),
        ));
    }
    if !(1..=p - 1).contains(&r) {
        return Err(Error::input("beta_window", "need 1 <= r <= p-1"));
    }
    let (p_i, r_i) = (p as i128, r as i128);
    let j = p / (p - r);
    let j_i = j as i128;
    let alpha = rational(p_i, (p_i - r_i) * (j_i + 1));
    // (r/(p-r)) / (j - 1 + r/p)
    let upper = rational(r_i, p_i - r_i) / (rational(j_i - 1, 1) + rational(r_i, p_i));
    // feasible epsilon: 0 < eps < upper * (p-r)(j+1) - p, clipped to (0,1)
    let eps_max = upper * rational((p_i - r_i) * (j_i + 1), 1) - rational(p_i, 1);
    let epsilon = eps_max.is_positive().then(|| {
        let cap = eps_max.min(Rational::one());
        cap / rational(2, 1)
    });
    debug_assert_eq!(alpha < upper, r != p - 1);
    Ok(BetaWindow {
        p,
        r,
        j,
        alpha,
        upper,
        epsilon,
    })
}
