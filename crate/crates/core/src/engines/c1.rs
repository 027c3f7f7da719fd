//! Residue witness machine: for a > b >= 1, p > a+2b prime and a target
//! residue r, builds an explicit n (as a base-p digit vector for an+alpha)
//! with C(an+alpha, bn+beta) = r (mod p), then re-verifies the claim from
//! scratch by exact digit arithmetic.
//!
//! The witness has a two-level shape. A seed n0 is located with
//! C(a n0 + alpha, b n0 + beta) = r digitwise and, for r != 0, a
//! non-vanishing digit product at (a n0, b n0). The seed block is then
//! replicated p times through n = n0 * (1 + p^u + ... + p^(u(J-1))) with
//! J = p: the J-1 upper copies contribute the same nonzero digit product
//! raised to the (p-1)-th power, which Fermat collapses to 1, so the whole
//! Lucas product reduces to the seed residue r. Replication widths u are
//! multiples of phi(a), and any J = 1 (mod p-1) works, which is where the
//! infinitude of witnesses comes from.
//!
//! Alongside the witness the plan derives the classification quantities
//! (d, c, e), the division c-t-alpha = mu*e + rho, the eps flag, the
//! coefficient K (three variants keyed on how gcd(p-1, a) and the 2-adic
//! valuations fall), M, and the index progressions I1/I2, and checks the
//! two congruences
//!     K(p-1)(1+eps) = c-t-alpha-rho        (mod a)
//!     mb(K(p-1)(a+1+eps) - (c-t-alpha-rho)) = beta-1  (mod p)
//! exactly.

use serde::Serialize;

use crate::arith::{div_rem_euclid, gcd, inv_mod, mul_mod, v2};
use crate::error::{Error, Result};
use crate::primes::{is_prime, totient};
use crate::radix::DigitVector;
use crate::valuation::{digits_u64, kummer_digits, LucasEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum C1Case {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
}

/// Which residues the parameter family admits, and the excluded set for
/// case ii (reduced into [0, p)). Whether excluded residues are truly
/// unattainable is not claimed anywhere; scans report them as observations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueClassification {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub alpha: i64,
    pub d: u64,
    pub c: u64,
    pub e: u64,
    pub v2_a: u32,
    pub v2_p_minus_1: u32,
    pub case: C1Case,
    pub excluded: Vec<u64>,
}

pub fn c1_classify(a: u64, b: u64, p: u64, alpha: i64) -> Result<ResidueClassification> {
    if b == 0 || a <= b {
        return Err(Error::input("c1_classify", "need a > b >= 1"));
    }
    if !is_prime(p) {
        return Err(Error::input("c1_classify", format!("{p} is not prime")));
    }
    if p <= a + 2 * b {
        return Err(Error::input(
            "c1_classify",
            format!("need p > a + 2b = {}", a + 2 * b),
        ));
    }
    let d = gcd(a, b);
    let c = a / d;
    let e = gcd(p - 1, a);
    let v2_a = v2(a);
    let v2_p_minus_1 = v2(p - 1);
    let case = if e < c || v2_a <= v2_p_minus_1 {
        C1Case::I
    } else {
        C1Case::II
    };
    let mut excluded = Vec::new();
    if case == C1Case::II {
        let (e_i, c_i, p_i) = (e as i64, c as i64, p as i64);
        let mu_lo = crate::arith::ceil_div(e_i + 2 - p_i - alpha, 2 * e_i);
        let mu_hi = crate::arith::ceil_div(c_i + 1 - alpha, 2 * e_i);
        for mu in mu_lo..=mu_hi {
            for rp in 0..=(e_i - c_i) {
                let val = (2 * mu - 1) * e_i + p_i + alpha - 2 + rp;
                excluded.push(val.rem_euclid(p_i) as u64);
            }
        }
        excluded.sort_unstable();
        excluded.dedup();
    }
    Ok(ResidueClassification {
        a,
        b,
        p,
        alpha,
        d,
        c,
        e,
        v2_a,
        v2_p_minus_1,
        case,
        excluded,
    })
}

/// Arithmetic progression start, start-step, ..., over `count` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub start: u64,
    pub step: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessPlan {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub alpha: i64,
    pub beta: i64,
    pub r: u64,
    pub case: C1Case,
    pub d: u64,
    pub c: u64,
    pub e: u64,
    /// replica block width in digits; a multiple of phi(a)
    pub u: u64,
    pub n_factor: u64,
    /// (p^u - 1) / a
    pub m: u64,
    pub t: u64,
    pub rho: u64,
    pub mu: i64,
    pub eps: u8,
    pub k_variant: u8,
    pub l: u64,
    pub k: u64,
    /// M = K(p-1)(d(c-1)+1) - (c-1) + rho
    pub m_cap: u64,
    pub i2: Progression,
    pub i2_min: i64,
    pub i1_count: u64,
    pub congruence_mod_a: bool,
    pub congruence_mod_p: bool,
    /// seed index n0 and the replica count J (= p)
    pub seed: u64,
    pub replicas: u64,
    /// true when the seed search could stay in the class with unit bottom
    /// digit, i.e. b*n0 + beta = 1 (mod p)
    pub seed_class_constrained: bool,
    pub a0: u64,
    pub b0: u64,
    /// an + alpha as base-p digits, built twice (digit pattern vs. radix
    /// arithmetic) and asserted identical
    pub x: DigitVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct C1Verification {
    pub r: u64,
    pub residue: u64,
    pub digit_count: usize,
    pub b0: u64,
    pub b0_is_one: bool,
    /// the zero-residue test agreed with the carry count of y + (x - y)
    pub carry_check: bool,
}

const SEED_CLASS_BUDGET: u64 = 400_000;
const SEED_SCAN_BUDGET: u64 = 5_000_000;

fn seed_ok(
    ev: &LucasEvaluator,
    a: u64,
    b: u64,
    alpha: i64,
    beta: i64,
    r: u64,
    n: u64,
) -> Result<bool> {
    let top = a as i128 * n as i128 + alpha as i128;
    let bottom = b as i128 * n as i128 + beta as i128;
    if bottom < 0 || top < bottom {
        return Ok(false);
    }
    let top = u64::try_from(top).map_err(|_| Error::Overflow {
        field: "a*n0+alpha",
    })?;
    let bottom = u64::try_from(bottom).expect("bounded by top");
    if ev.binom_mod(top, bottom) != r {
        return Ok(false);
    }
    if r != 0 {
        let at = a.checked_mul(n).ok_or(Error::Overflow { field: "a*n0" })?;
        let bt = b * n;
        if ev.binom_mod(at, bt) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn find_seed(
    ev: &LucasEvaluator,
    a: u64,
    b: u64,
    p: u64,
    alpha: i64,
    beta: i64,
    r: u64,
) -> Result<(u64, bool)> {
    // preferred class: b*n + beta = 1 (mod p), the unit bottom digit
    let inv_b = inv_mod(b % p, p).expect("0 < b < p");
    let target = (1 - beta).rem_euclid(p as i64) as u64;
    let class = mul_mod(inv_b, target, p);
    let class_a0 = ((a as i128 * class as i128 + alpha as i128).rem_euclid(p as i128)) as u64;
    // for r != 0 the class is hopeless when its bottom digit pair vanishes
    if !(r != 0 && ev.binom_digit(class_a0, 1 % p) == 0) {
        let mut n = if class == 0 { p } else { class };
        for _ in 0..SEED_CLASS_BUDGET {
            if seed_ok(ev, a, b, alpha, beta, r, n)? {
                return Ok((n, true));
            }
            n = n.checked_add(p).ok_or(Error::Overflow {
                field: "seed candidate",
            })?;
        }
    }
    for n in 1..=SEED_SCAN_BUDGET {
        if seed_ok(ev, a, b, alpha, beta, r, n)? {
            return Ok((n, false));
        }
    }
    Err(Error::SearchBudget {
        what: "witness seed",
        budget: SEED_SCAN_BUDGET,
    })
}

/// Adds a small signed constant, decomposed into base digits so deltas stay
/// below the radix bound.
fn add_signed(x: &DigitVector, v: i64) -> Result<DigitVector> {
    if v == 0 {
        return Ok(x.clone());
    }
    let p = x.base() as u64;
    let mut out = x.clone();
    for (i, d) in digits_u64(v.unsigned_abs(), p).into_iter().enumerate() {
        out = if v > 0 {
            out.add_at(d, i)?
        } else {
            out.sub_at(d, i)?
        };
    }
    Ok(out)
}

struct KChoice {
    variant: u8,
    k: u64,
    l: u64,
}

#[allow(clippy::too_many_arguments)]
fn choose_k(
    class: &ResidueClassification,
    chat: i128,
    mu: i64,
    eps: u8,
    m: u64,
    beta: i64,
    l_req: Option<u64>,
    r: u64,
) -> Result<KChoice> {
    let (a, p, c, e) = (class.a, class.p, class.c, class.e);
    let (a_i, p_i, e_i) = (a as i128, p as i128, e as i128);
    let eps_i = eps as i128;
    let variant: u8 = if e < c {
        1
    } else if class.v2_a <= class.v2_p_minus_1 {
        2
    } else {
        3
    };
    // leading term: solves the congruence modulo a
    let (lead, inv_modulus, inv_arg) = match variant {
        1 => (mu as i128, a_i / e_i, p_i * (p_i - 1) / e_i),
        2 => (mu as i128, a_i / e_i, p_i * (p_i - 1) * (1 + eps_i) / e_i),
        _ => {
            if eps == 1 && mu % 2 != 0 {
                // the even-mu requirement is exactly what the excluded set
                // encodes; reaching here means r slipped past it
                return Err(Error::ExcludedResidue { r });
            }
            (
                mu as i128 / (1 + eps_i),
                a_i / ((1 + eps_i) * e_i),
                p_i * (p_i - 1) / e_i,
            )
        }
    };
    let inv1 = inv_mod((inv_arg.rem_euclid(inv_modulus)) as u64, inv_modulus as u64)
        .ok_or_else(|| Error::invariant("k-leading-inverse", format!("variant {variant}")))?;
    let term1 = lead * p_i * inv1 as i128;
    // trailing terms: solve the congruence modulo p
    let unit = (a_i + 1 + eps_i).rem_euclid(p_i) as u64;
    let ia = inv_mod(unit, p).expect("a+1+eps < p");
    let iba = inv_mod(mul_mod(class.b % p, unit, p), p).expect("b(a+1+eps) unit");
    let m_i = m as i128;
    let term2 = chat * a_i * m_i * ia as i128;
    let term3 = -(beta as i128 - 1) * a_i * a_i * m_i * iba as i128;
    let base = term1 + term2 + term3;
    let pa = p_i * a_i;
    let l = match l_req {
        Some(l) => l as i128,
        None => {
            if base >= 2 {
                0
            } else {
                (2 - base).div_euclid(pa) + i128::from((2 - base).rem_euclid(pa) != 0)
            }
        }
    };
    let k = base + l * pa;
    if k < 2 {
        return Err(Error::input(
            "c1_construct",
            format!("L={l} leaves K={k} < 2"),
        ));
    }
    let k = u64::try_from(k).map_err(|_| Error::Overflow { field: "K" })?;
    let l = u64::try_from(l).map_err(|_| Error::Overflow { field: "L" })?;
    Ok(KChoice { variant, k, l })
}

#[allow(clippy::too_many_arguments)]
pub fn c1_construct(
    a: u64,
    b: u64,
    p: u64,
    alpha: i64,
    beta: i64,
    r: u64,
    n_factor: u64,
    l_req: Option<u64>,
) -> Result<WitnessPlan> {
    let class = c1_classify(a, b, p, alpha)?;
    if r >= p {
        return Err(Error::input("c1_construct", "need 0 <= r < p"));
    }
    if alpha.unsigned_abs() > p * p || beta.unsigned_abs() > p * p {
        return Err(Error::input("c1_construct", "offsets must stay below p^2"));
    }
    if class.case == C1Case::II && class.excluded.contains(&r) {
        return Err(Error::ExcludedResidue { r });
    }
    let (d, c, e) = (class.d, class.c, class.e);
    let t = p - 1 - r;
    let (mu, rho) = div_rem_euclid(c as i64 - t as i64 - alpha, e as i64);
    let eps: u8 = u8::from(rho > c as i64 - 2);
    let chat = (mu as i128) * (e as i128); // c - t - alpha - rho

    // seed and replica geometry
    let ev = LucasEvaluator::new(p)?;
    let (seed, seed_class_constrained) = find_seed(&ev, a, b, p, alpha, beta, r)?;
    let an0 = a
        .checked_mul(seed)
        .ok_or(Error::Overflow { field: "a*n0" })?;
    let x0 = u64::try_from(an0 as i128 + alpha as i128).expect("checked in seed");
    let y0 = u64::try_from(b as i128 * seed as i128 + beta as i128).expect("checked in seed");
    let phi = totient(a)?;
    let mut u = phi
        .checked_mul(n_factor.max(1))
        .ok_or(Error::Overflow { field: "u" })?;
    let need = an0.max(x0) as u128;
    let mut pu: u128 = 1;
    for _ in 0..u {
        pu = pu
            .checked_mul(p as u128)
            .ok_or(Error::Overflow { field: "p^u" })?;
    }
    while pu <= need {
        for _ in 0..phi {
            pu = pu
                .checked_mul(p as u128)
                .ok_or(Error::Overflow { field: "p^u" })?;
        }
        u += phi;
    }
    let m = u64::try_from((pu - 1) / a as u128).map_err(|_| Error::Overflow { field: "m" })?;

    let kc = choose_k(&class, chat, mu, eps, m, beta, l_req, r)?;

    // congruence checks, exact
    let (a_i, p_i) = (a as i128, p as i128);
    let k_i = kc.k as i128;
    let congruence_mod_a = (k_i * (p_i - 1) * (1 + eps as i128) - chat).rem_euclid(a_i) == 0;
    let congruence_mod_p = {
        let inner = k_i * (p_i - 1) * (a_i + 1 + eps as i128) - chat;
        (m as i128 * b as i128 * inner - (beta as i128 - 1)).rem_euclid(p_i) == 0
    };
    if !congruence_mod_a {
        return Err(Error::invariant(
            "k-congruence-mod-a",
            format!("K={}", kc.k),
        ));
    }
    if !congruence_mod_p {
        return Err(Error::invariant(
            "k-congruence-mod-p",
            format!("K={}", kc.k),
        ));
    }

    // index bookkeeping
    let m_cap_i =
        k_i * (p_i - 1) * (d as i128 * (c as i128 - 1) + 1) - (c as i128 - 1) + rho as i128;
    let m_cap = u64::try_from(m_cap_i).map_err(|_| Error::Overflow { field: "M" })?;
    let i2_count_i = k_i * (p_i - 1) * (d as i128 + eps as i128);
    let i2_count = u64::try_from(i2_count_i).map_err(|_| Error::Overflow { field: "I2" })?;
    let step = c - 1;
    let i2 = Progression {
        start: m_cap,
        step,
        count: i2_count,
    };
    let i2_min_i = m_cap_i - (i2_count_i - 1) * step as i128;
    let i2_min = i64::try_from(i2_min_i).map_err(|_| Error::Overflow { field: "I2 min" })?;
    let in_range = if i2_min >= 1 {
        i2_count
    } else {
        ((m_cap - 1) / step + 1).min(i2_count)
    };
    let i1_count = m_cap - in_range;

    // dual construction of x = an + alpha in base p
    let replicas = p; // J = p, so J-1 = p-1 collapses by Fermat
    let block = digits_u64(an0, p);
    let bottom = digits_u64(x0, p);
    let u_us = usize::try_from(u).map_err(|_| Error::Overflow { field: "u" })?;
    let pattern = {
        let mut digits = vec![0u32; u_us * (replicas as usize - 1) + block.len()];
        for (i, &dd) in bottom.iter().enumerate() {
            digits[i] = dd as u32;
        }
        for l in 1..replicas as usize {
            for (i, &dd) in block.iter().enumerate() {
                digits[l * u_us + i] = dd as u32;
            }
        }
        DigitVector::from_digits(p as u32, digits)?
    };
    let x = {
        let mut x = DigitVector::zero(p as u32)?;
        for l in 0..replicas as usize {
            for (i, &dd) in block.iter().enumerate() {
                x = x.add_at(dd, l * u_us + i)?;
            }
        }
        add_signed(&x, alpha)?
    };
    if x != pattern {
        return Err(Error::invariant(
            "dual-digit-construction",
            "pattern and arithmetic routes disagree",
        ));
    }

    Ok(WitnessPlan {
        a,
        b,
        p,
        alpha,
        beta,
        r,
        case: class.case,
        d,
        c,
        e,
        u,
        n_factor: u / phi,
        m,
        t,
        rho: rho as u64,
        mu,
        eps,
        k_variant: kc.variant,
        l: kc.l,
        k: kc.k,
        m_cap,
        i2,
        i2_min,
        i1_count,
        congruence_mod_a,
        congruence_mod_p,
        seed,
        replicas,
        seed_class_constrained,
        a0: x.digit(0) as u64,
        b0: y0 % p,
        x,
    })
}

/// Recomputes everything from the plan's digit vector: extracts
/// n = (x - alpha)/a by exact division, forms y = bn + beta, checks the
/// predicted bottom digit, evaluates the Lucas product, and cross-checks
/// zero-ness against the carry count of y + (x - y).
pub fn c1_verify(plan: &WitnessPlan) -> Result<C1Verification> {
    let p = plan.p;
    if plan.x.base() as u64 != p {
        return Err(Error::input("c1_verify", "plan digits are not in base p"));
    }
    let x_shifted = add_signed(&plan.x, -plan.alpha)
        .map_err(|_| Error::invariant("witness-integrality", "x - alpha underflowed"))?;
    let (n, rem) = x_shifted.divmod_small(plan.a)?;
    if rem != 0 {
        return Err(Error::invariant(
            "witness-integrality",
            format!("a does not divide x - alpha (remainder {rem})"),
        ));
    }
    if n.is_zero() {
        return Err(Error::invariant("witness-positive", "n = 0"));
    }
    let y = add_signed(&n.mul_small(plan.b)?, plan.beta)?;
    let b0 = y.digit(0) as u64;
    if b0 != plan.b0 {
        return Err(Error::invariant(
            "b0-prediction",
            format!("predicted {} found {b0}", plan.b0),
        ));
    }
    let ev = LucasEvaluator::new(p)?;
    let residue = ev.binom_mod_digits(&plan.x, &y)?;
    // x - y = (a-b)n + (alpha-beta), rebuilt independently of x
    let x_minus_y = add_signed(&n.mul_small(plan.a - plan.b)?, plan.alpha - plan.beta)?;
    let carries = kummer_digits(&y, &x_minus_y)?;
    let carry_check = (residue == 0) == (carries >= 1);
    if !carry_check {
        return Err(Error::invariant(
            "carry-consistency",
            format!("residue {residue} vs {carries} carries"),
        ));
    }
    if residue != plan.r {
        return Err(Error::invariant(
            "target-residue",
            format!("wanted {} computed {residue}", plan.r),
        ));
    }
    Ok(C1Verification {
        r: plan.r,
        residue,
        digit_count: plan.x.len(),
        b0,
        b0_is_one: b0 == 1,
        carry_check,
    })
}
