//! Residue scan: which residues does C(an+alpha, bn+beta) mod p attain,
//! and at which first n?

use serde::Serialize;

use crate::error::{Error, Result};
use crate::valuation::LucasEvaluator;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueScan {
    pub a: u64,
    pub b: u64,
    pub p: u64,
    pub alpha: i64,
    pub beta: i64,
    pub n_max: u64,
    /// first_attained[r] = smallest n <= n_max with residue r, if any
    pub first_attained: Vec<Option<u64>>,
    /// count of n skipped because an+alpha >= bn+beta >= 0 failed
    pub skipped: u64,
}

impl ResidueScan {
    pub fn attained_set(&self) -> Vec<u64> {
        self.first_attained
            .iter()
            .enumerate()
            .filter_map(|(r, n)| n.map(|_| r as u64))
            .collect()
    }
}

const SCAN_P_LIMIT: u64 = 10_000_000;

fn scan_args_check(a: u64, p: u64, n_max: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::input("residue_scan", "a must be >= 1"));
    }
    if p > SCAN_P_LIMIT {
        return Err(Error::input(
            "residue_scan",
            format!("p={p} beyond the residue-table limit"),
        ));
    }
    if n_max == 0 {
        return Err(Error::input("residue_scan", "n_max must be >= 1"));
    }
    Ok(())
}

// returns Some((an+alpha, bn+beta)) when the pair is a valid binomial index
fn scan_pair(a: u64, b: u64, alpha: i64, beta: i64, n: u64) -> Result<Option<(u64, u64)>> {
    let top = (a as i128) * (n as i128) + alpha as i128;
    let bottom = (b as i128) * (n as i128) + beta as i128;
    if bottom < 0 || top < bottom {
        return Ok(None);
    }
    let top = u64::try_from(top).map_err(|_| Error::Overflow { field: "an+alpha" })?;
    let bottom = u64::try_from(bottom).expect("bounded by top");
    Ok(Some((top, bottom)))
}

struct ChunkState {
    first: Vec<Option<u64>>,
    skipped: u64,
}

fn scan_chunk(
    ev: &LucasEvaluator,
    a: u64,
    b: u64,
    alpha: i64,
    beta: i64,
    from: u64,
    to: u64,
) -> Result<ChunkState> {
    let p = ev.p();
    let mut first = vec![None; p as usize];
    let mut skipped = 0u64;
    for n in from..=to {
        match scan_pair(a, b, alpha, beta, n)? {
            None => skipped += 1,
            Some((top, bottom)) => {
                let r = ev.binom_mod(top, bottom) as usize;
                if first[r].is_none() {
                    first[r] = Some(n);
                }
            }
        }
    }
    Ok(ChunkState { first, skipped })
}

fn merge(mut acc: ChunkState, other: ChunkState) -> ChunkState {
    for (a, b) in acc.first.iter_mut().zip(other.first) {
        *a = match (*a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
    }
    acc.skipped += other.skipped;
    acc
}

pub fn residue_scan_seq(
    a: u64,
    b: u64,
    p: u64,
    alpha: i64,
    beta: i64,
    n_max: u64,
) -> Result<ResidueScan> {
    scan_args_check(a, p, n_max)?;
    let ev = LucasEvaluator::new(p)?;
    let state = scan_chunk(&ev, a, b, alpha, beta, 1, n_max)?;
    Ok(ResidueScan {
        a,
        b,
        p,
        alpha,
        beta,
        n_max,
        first_attained: state.first,
        skipped: state.skipped,
    })
}

/// Parallel scan over [1, n_max]; chunk results merge by minimum first-n,
/// so the outcome is identical to the sequential scan.
#[cfg(feature = "parallel")]
pub fn residue_scan(
    a: u64,
    b: u64,
    p: u64,
    alpha: i64,
    beta: i64,
    n_max: u64,
) -> Result<ResidueScan> {
    use rayon::prelude::*;
    scan_args_check(a, p, n_max)?;
    let ev = LucasEvaluator::new(p)?;
    let chunk: u64 = 16_384;
    let chunks: Vec<(u64, u64)> = (1..=n_max)
        .step_by(chunk as usize)
        .map(|from| (from, (from + chunk - 1).min(n_max)))
        .collect();
    let state = chunks
        .into_par_iter()
        .map(|(from, to)| scan_chunk(&ev, a, b, alpha, beta, from, to))
        .try_reduce_with(|x, y| Ok(merge(x, y)))
        .transpose()?
        .expect("at least one chunk");
    Ok(ResidueScan {
        a,
        b,
        p,
        alpha,
        beta,
        n_max,
        first_attained: state.first,
        skipped: state.skipped,
    })
}

#[cfg(not(feature = "parallel"))]
pub fn residue_scan(
    a: u64,
    b: u64,
    p: u64,
    alpha: i64,
    beta: i64,
    n_max: u64,
) -> Result<ResidueScan> {
    residue_scan_seq(a, b, p, alpha, beta, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vsemirnov_small_example() {
        let scan = residue_scan_seq(4, 2, 5, 0, 0, 3).unwrap();
        assert_eq!(scan.first_attained[1], Some(1)); // C(4,2) = 6
        assert_eq!(scan.first_attained[0], Some(2)); // C(8,4) = 70
        assert_eq!(scan.first_attained[4], Some(3)); // C(12,6) = 924
        assert_eq!(scan.first_attained[2], None);
        assert_eq!(scan.first_attained[3], None);
    }

    #[test]
    fn single_evaluation() {
        let scan = residue_scan_seq(2, 1, 3, 0, 0, 1).unwrap();
        assert_eq!(scan.attained_set(), vec![2]); // C(2,1) = 2 mod 3
    }

    #[test]
    fn negative_offsets_skip_invalid_pairs() {
        // bn+beta < 0 at n = 1, valid afterwards
        let scan = residue_scan_seq(3, 1, 5, 0, -2, 3).unwrap();
        assert_eq!(scan.skipped, 1);
        assert_eq!(scan.first_attained[1], Some(2)); // C(6,0) = 1
        assert_eq!(scan.first_attained[4], Some(3)); // C(9,1) = 9
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        for &(a, b, p, alpha, beta) in &[
            (4u64, 2u64, 5u64, 0i64, 0i64),
            (2, 1, 7, 1, -1),
            (3, 1, 11, -5, 2),
        ] {
            let seq = residue_scan_seq(a, b, p, alpha, beta, 50_000).unwrap();
            let par = residue_scan(a, b, p, alpha, beta, 50_000).unwrap();
            assert_eq!(seq, par);
        }
    }
}
