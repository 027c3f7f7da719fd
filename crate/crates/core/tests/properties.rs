//! Property suites for the module invariants, driven by proptest against
//! independent oracles (positional evaluation, exact reconstruction,
//! Legendre differences, the exact binomial oracle).

use proptest::prelude::*;

use bindiv_core::engines::{residue_scan_seq, ResidueScan};
use bindiv_core::primes::{factorize, is_prime};
use bindiv_core::radix::DigitVector;
use bindiv_core::valuation::{
    binom_exact, binom_mod, divides_binomial, kummer, kummer_digits, legendre, lucas_mod_p,
    LucasEvaluator,
};

const BASES: [u32; 6] = [2, 3, 5, 7, 10, 1 << 30];

fn base_strategy() -> impl Strategy<Value = u32> {
    prop::sample::select(&BASES[..])
}

fn assert_canonical(x: &DigitVector) {
    assert!(x.digits().iter().all(|&d| d < x.base()));
    assert_ne!(x.digits().last(), Some(&0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn radix_round_trip(v in any::<u64>(), base in base_strategy()) {
        let x = DigitVector::from_u64(v, base).unwrap();
        assert_canonical(&x);
        prop_assert_eq!(x.value_u128(), Some(v as u128));
    }

    #[test]
    fn radix_mul_add_divmod_inverse(
        v in any::<u64>(),
        base in base_strategy(),
        f in 1u64..1000,
        r in 0u64..1000,
    ) {
        let f = 1 + f % (base as u64 - 1); // 1 <= f < base
        let r = r % f;
        let x = DigitVector::from_u64(v, base).unwrap();
        let scaled = x.mul_small(f).unwrap().add_at(r, 0).unwrap();
        assert_canonical(&scaled);
        let (q, rem) = scaled.divmod_small(f).unwrap();
        prop_assert_eq!(&q, &x);
        prop_assert_eq!(rem, r);
    }

    #[test]
    fn radix_rebase_preserves_value(
        v in any::<u64>(),
        b1 in base_strategy(),
        b2 in base_strategy(),
    ) {
        let x = DigitVector::from_u64(v, b1).unwrap();
        let y = x.rebase(b2).unwrap();
        assert_canonical(&y);
        prop_assert_eq!(y.value_u128(), Some(v as u128));
        prop_assert_eq!(y.rebase(b1).unwrap(), x);
    }

    #[test]
    fn radix_add_then_sub_is_identity(
        v in any::<u64>(),
        base in base_strategy(),
        delta in 0u64..u64::MAX / 4,
        pos in 0usize..40,
    ) {
        let delta = delta % ((base as u64).saturating_mul(base as u64));
        let x = DigitVector::from_u64(v, base).unwrap();
        let there = x.add_at(delta, pos).unwrap();
        assert_canonical(&there);
        let back = there.sub_at(delta, pos).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn factorize_reconstructs(n in 1u64..u64::MAX / 2) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.value(), Some(n));
        for &(q, e) in &f.factors {
            prop_assert!(is_prime(q));
            prop_assert!(e >= 1);
        }
    }

    #[test]
    fn kummer_is_legendre_difference(
        m in 0u64..1_000_000_000,
        k in 0u64..1_000_000_000,
        p in prop::sample::select(&[2u64, 3, 5, 7, 11, 13, 997][..]),
    ) {
        prop_assert_eq!(
            kummer(m, k, p),
            legendre(m + k, p) - legendre(m, p) - legendre(k, p)
        );
    }

    #[test]
    fn lucas_matches_exact_binomial(
        n in 0u64..=2000,
        frac in 0.0f64..=1.0,
        p in prop::sample::select(&[2u64, 3, 5, 7, 11, 13][..]),
    ) {
        let m = (n as f64 * frac) as u64;
        prop_assert_eq!(
            lucas_mod_p(n, m, p).unwrap(),
            binom_mod(n, m, p).unwrap()
        );
    }

    #[test]
    fn lucas_zero_iff_carry_on_digit_vectors(
        n in 0u64..10_000_000,
        frac in 0.0f64..=1.0,
        p in prop::sample::select(&[3u64, 7, 11, 31][..]),
    ) {
        let m = (n as f64 * frac) as u64;
        let x = DigitVector::from_u64(n, p as u32).unwrap();
        let y = DigitVector::from_u64(m, p as u32).unwrap();
        let z = DigitVector::from_u64(n - m, p as u32).unwrap();
        let ev = LucasEvaluator::new(p).unwrap();
        let residue = ev.binom_mod_digits(&x, &y).unwrap();
        let carries = kummer_digits(&y, &z).unwrap();
        prop_assert_eq!(residue == 0, carries >= 1);
        prop_assert_eq!(residue, ev.binom_mod(n, m));
    }

    #[test]
    fn divisibility_verdict_matches_exact(
        n in 1u64..=1500,
        frac in 0.0f64..=1.0,
        modulus in 1u64..=1_000_000,
    ) {
        let m = (n as f64 * frac) as u64;
        let verdict = divides_binomial(modulus, n, m).unwrap().divides;
        let exact = binom_mod(n, m, modulus).unwrap() == 0;
        prop_assert_eq!(verdict, exact);
    }

    #[test]
    fn scan_first_occurrences_reevaluate(
        a in 1u64..6,
        b_off in 0u64..3,
        p in prop::sample::select(&[3u64, 5, 7][..]),
        alpha in -3i64..=3,
        beta in -3i64..=3,
    ) {
        let b = 1 + b_off % a; // 1 <= b <= a keeps pairs mostly valid
        let scan: ResidueScan = residue_scan_seq(a, b, p, alpha, beta, 300).unwrap();
        for (r, first) in scan.first_attained.iter().enumerate() {
            if let Some(n) = first {
                let top = (a as i128 * *n as i128 + alpha as i128) as u64;
                let bottom = (b as i128 * *n as i128 + beta as i128) as u64;
                prop_assert_eq!(lucas_mod_p(top, bottom, p).unwrap(), r as u64);
            }
        }
    }
}

#[test]
fn binom_exact_against_pascal_rows() {
    // additive Pascal recurrence as an independent oracle for the
    // multiplicative exact binomial
    let max_n = 60usize;
    let mut row: Vec<u128> = vec![1];
    for n in 1..=max_n {
        let mut next = vec![1u128; n + 1];
        for m in 1..n {
            next[m] = row[m - 1] + row[m];
        }
        row = next;
        for (m, &expect) in row.iter().enumerate() {
            let got = binom_exact(n as u64, m as u64).unwrap();
            assert_eq!(got.value_u128(), Some(expect), "n={n} m={m}");
        }
    }
}
