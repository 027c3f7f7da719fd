//! Arbitrary-precision naturals as little-endian digit vectors in a
//! configurable radix.
//!
//! The arithmetic is deliberately restricted to "big op small": adding or
//! subtracting `delta * base^pos`, multiplying or dividing by a single
//! machine word. That is all the digit-pattern constructions in this crate
//! ever need, and it keeps every operation linear in the digit count.
//!
//! Conventions:
//! * zero is the empty digit vector;
//! * canonical form never has a most-significant zero digit;
//! * the radix travels with the value, and mixing radices is an error.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub const MIN_BASE: u32 = 2;
pub const MAX_BASE: u32 = 1 << 31;
pub const DEFAULT_DIGIT_BUDGET: usize = 10_000_000;

static DIGIT_BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_DIGIT_BUDGET);

/// Global cap on the digit count of any constructed value. Guards against
/// runaway constructions; exceeding it is a structured error, not an abort.
pub fn digit_budget() -> usize {
    DIGIT_BUDGET.load(AtomicOrdering::Relaxed)
}

pub fn set_digit_budget(budget: usize) {
    DIGIT_BUDGET.store(budget, AtomicOrdering::Relaxed);
}

fn check_budget(needed: usize) -> Result<()> {
    let budget = digit_budget();
    if needed > budget {
        return Err(Error::DigitBudget { needed, budget });
    }
    Ok(())
}

fn check_base(base: u32) -> Result<()> {
    if !(MIN_BASE..=MAX_BASE).contains(&base) {
        return Err(Error::input("radix", format!("base {base} out of range")));
    }
    Ok(())
}

/// A natural number stored as little-endian digits in a fixed radix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    base: u32,
    digits: Vec<u32>,
}

impl DigitVector {
    pub fn zero(base: u32) -> Result<Self> {
        check_base(base)?;
        Ok(DigitVector {
            base,
            digits: Vec::new(),
        })
    }

    pub fn from_u64(v: u64, base: u32) -> Result<Self> {
        check_base(base)?;
        let mut digits = Vec::new();
        let b = base as u64;
        let mut v = v;
        while v > 0 {
            digits.push((v % b) as u32);
            v /= b;
        }
        Ok(DigitVector { base, digits })
    }

    /// Builds a value from an explicit digit list (little-endian). Trailing
    /// zeros are trimmed; any digit >= base is rejected.
    pub fn from_digits(base: u32, mut digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        check_budget(digits.len())?;
        if digits.iter().any(|&d| d >= base) {
            return Err(Error::input("from_digits", "digit out of range"));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitVector { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at position `pos` (0 beyond the stored length).
    pub fn digit(&self, pos: usize) -> u32 {
        self.digits.get(pos).copied().unwrap_or(0)
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Positional evaluation in 128-bit arithmetic; `None` on overflow.
    pub fn value_u128(&self) -> Option<u128> {
        let mut acc: u128 = 0;
        for &d in self.digits.iter().rev() {
            acc = acc.checked_mul(self.base as u128)?.checked_add(d as u128)?;
        }
        Some(acc)
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value_u128().and_then(|v| u64::try_from(v).ok())
    }

    fn canonicalize(&mut self) {
        while self.digits.last() == Some(&0) {
            self.digits.pop();
        }
    }

    /// value + delta * base^pos, with delta < base^2.
    pub fn add_at(&self, delta: u64, pos: usize) -> Result<Self> {
        let b = self.base as u64;
        if delta >= b.saturating_mul(b) {
            return Err(Error::input("add_at", format!("delta {delta} >= base^2")));
        }
        if delta == 0 {
            return Ok(self.clone());
        }
        let needed = self.digits.len().max(pos + 3) + 1;
        check_budget(needed)?;
        let mut out = self.digits.clone();
        if out.len() < pos {
            out.resize(pos, 0);
        }
        let mut carry = delta;
        let mut i = pos;
        while carry > 0 {
            if i == out.len() {
                out.push(0);
            }
            let cur = out[i] as u64 + carry % b;
            out[i] = (cur % b) as u32;
            carry = carry / b + cur / b;
            i += 1;
        }
        let mut res = DigitVector {
            base: self.base,
            digits: out,
        };
        res.canonicalize();
        Ok(res)
    }

    /// value - delta * base^pos; errors on underflow.
    pub fn sub_at(&self, delta: u64, pos: usize) -> Result<Self> {
        let b = self.base as u64;
        if delta >= b.saturating_mul(b) {
            return Err(Error::input("sub_at", format!("delta {delta} >= base^2")));
        }
        if delta == 0 {
            return Ok(self.clone());
        }
        let underflow = Error::Underflow {
            base: self.base,
            delta,
            pos,
        };
        let mut out = self.digits.clone();
        // borrow: the amount still owed at position i
        let mut borrow = delta;
        let mut i = pos;
        while borrow > 0 {
            if i >= out.len() {
                return Err(underflow);
            }
            let owe = borrow % b;
            let mut next = borrow / b;
            let cur = out[i] as u64;
            if cur >= owe {
                out[i] = (cur - owe) as u32;
            } else {
                out[i] = (cur + b - owe) as u32;
                next += 1;
            }
            borrow = next;
            i += 1;
        }
        let mut res = DigitVector {
            base: self.base,
            digits: out,
        };
        res.canonicalize();
        Ok(res)
    }

    /// value * f, with f < base.
    pub fn mul_small(&self, f: u64) -> Result<Self> {
        let b = self.base as u64;
        if f >= b {
            return Err(Error::input("mul_small", format!("factor {f} >= base")));
        }
        if f == 0 {
            return DigitVector::zero(self.base);
        }
        check_budget(self.digits.len() + 2)?;
        let mut out = Vec::with_capacity(self.digits.len() + 1);
        let mut carry: u64 = 0;
        for &d in &self.digits {
            let cur = d as u64 * f + carry;
            out.push((cur % b) as u32);
            carry = cur / b;
        }
        while carry > 0 {
            out.push((carry % b) as u32);
            carry /= b;
        }
        let mut res = DigitVector {
            base: self.base,
            digits: out,
        };
        res.canonicalize();
        Ok(res)
    }

    /// (value / d, value % d) with 1 <= d < base. The quotient is canonical.
    pub fn divmod_small(&self, d: u64) -> Result<(Self, u64)> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        let b = self.base as u64;
        if d >= b {
            return Err(Error::input("divmod_small", format!("divisor {d} >= base")));
        }
        let mut out = vec![0u32; self.digits.len()];
        let mut rem: u64 = 0;
        for (i, &digit) in self.digits.iter().enumerate().rev() {
            let cur = rem * b + digit as u64;
            out[i] = (cur / d) as u32;
            rem = cur % d;
        }
        let mut q = DigitVector {
            base: self.base,
            digits: out,
        };
        q.canonicalize();
        Ok((q, rem))
    }

    /// Value reduced modulo `m` (any 64-bit m >= 1), by Horner evaluation.
    pub fn value_mod(&self, m: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut acc: u64 = 0;
        for &d in self.digits.iter().rev() {
            acc = (((acc as u128) * (self.base as u128) + d as u128) % (m as u128)) as u64;
        }
        Ok(acc)
    }

    /// Same value expressed in `new_base`, via repeated division.
    pub fn rebase(&self, new_base: u32) -> Result<Self> {
        check_base(new_base)?;
        if new_base == self.base {
            return Ok(self.clone());
        }
        // worst case: rebasing to base 2 multiplies the digit count by log2(base)
        let factor = (self.base as f64).log2() / (new_base as f64).log2();
        check_budget((self.digits.len() as f64 * factor) as usize + 2)?;
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            // new_base can exceed the old base, so divide via value chunks:
            // use divmod in the old radix when the divisor fits, else split.
            if (new_base as u64) < self.base as u64 {
                let (q, r) = cur.divmod_small(new_base as u64)?;
                digits.push(r as u32);
                cur = q;
            } else {
                // divisor >= base: do schoolbook division with u128 window
                let (q, r) = cur.divmod_wide(new_base as u64);
                digits.push(r as u32);
                cur = q;
            }
        }
        DigitVector::from_digits(new_base, digits)
    }

    // division by an arbitrary 64-bit divisor (not bounded by the radix);
    // internal helper for rebase only.
    fn divmod_wide(&self, d: u64) -> (Self, u64) {
        let b = self.base as u128;
        let mut out = vec![0u32; self.digits.len()];
        let mut rem: u128 = 0;
        for (i, &digit) in self.digits.iter().enumerate().rev() {
            let cur = rem * b + digit as u128;
            out[i] = (cur / d as u128) as u32;
            rem = cur % d as u128;
        }
        let mut q = DigitVector {
            base: self.base,
            digits: out,
        };
        q.canonicalize();
        (q, rem as u64)
    }

    /// Ordering of values; requires equal radices.
    pub fn cmp_values(&self, other: &Self) -> Result<Ordering> {
        if self.base != other.base {
            return Err(Error::MixedRadix {
                left: self.base,
                right: other.base,
            });
        }
        if self.digits.len() != other.digits.len() {
            return Ok(self.digits.len().cmp(&other.digits.len()));
        }
        for (a, b) in self.digits.iter().rev().zip(other.digits.iter().rev()) {
            if a != b {
                return Ok(a.cmp(b));
            }
        }
        Ok(Ordering::Equal)
    }

    /// Exact decimal rendering. Cost grows quadratically with size, so the
    /// serializer only calls this for values it knows are short.
    pub fn to_decimal_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let dec = self
            .rebase(10)
            .expect("rebase to 10 of a short value cannot fail");
        dec.digits
            .iter()
            .rev()
            .map(|d| char::from(b'0' + *d as u8))
            .collect()
    }

    /// Upper bound on the number of decimal digits of the value.
    fn decimal_len_estimate(&self) -> usize {
        (self.digits.len() as f64 * (self.base as f64).log10()).ceil() as usize + 1
    }

    /// Little-endian run-length encoding of the digits: (digit, run) pairs.
    pub fn run_length_encoding(&self) -> Vec<(u32, u64)> {
        let mut runs: Vec<(u32, u64)> = Vec::new();
        for &d in &self.digits {
            match runs.last_mut() {
                Some((v, n)) if *v == d => *n += 1,
                _ => runs.push((d, 1)),
            }
        }
        runs
    }
}

const DECIMAL_RENDER_LIMIT: usize = 64;

/// CLI serialization: a plain decimal string when it stays short, otherwise
/// `{base, digit_count, rle}` with little-endian (digit, run) pairs.
impl Serialize for DigitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.decimal_len_estimate() <= DECIMAL_RENDER_LIMIT + 1 {
            let dec = self.to_decimal_string();
            if dec.len() <= DECIMAL_RENDER_LIMIT {
                return serializer.serialize_str(&dec);
            }
        }
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("DigitVector", 3)?;
        s.serialize_field("base", &self.base)?;
        s.serialize_field("digit_count", &self.digits.len())?;
        s.serialize_field("rle", &RleView(self))?;
        s.end()
    }
}

struct RleView<'a>(&'a DigitVector);

impl Serialize for RleView<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let runs = self.0.run_length_encoding();
        let mut seq = serializer.serialize_seq(Some(runs.len()))?;
        for run in runs {
            seq.serialize_element(&run)?;
        }
        seq.end()
    }
}
