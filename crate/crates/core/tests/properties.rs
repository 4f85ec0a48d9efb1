//! Desk-scale invariants checked against a plain trial-division oracle that
//! lives here, independent of the library's own factorizer.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use quadfermat::arith::{self, isqrt, nat, Natural};
use quadfermat::audit::oracle_factorize;
use quadfermat::fermat_generic::{fermat_factor, GenericVerdict};
use quadfermat::fermat_numbers::*;
use quadfermat::quadform::*;

const N_MAX: u64 = 2000;

/// Proper divisor pairs `(a, b)`, `1 < a ≤ b`, by trial division.
fn pairs(x: u64) -> Vec<(u64, u64)> {
    (2..)
        .take_while(|d| d * d <= x)
        .filter(|d| x.is_multiple_of(*d))
        .map(|d| (d, x / d))
        .collect()
}

fn value(n: u64) -> u64 {
    4 * n * n + 1
}

#[test]
fn proper_factors_are_one_mod_four() {
    for n in 1..=N_MAX {
        for (a, b) in pairs(value(n)) {
            assert_eq!((a % 4, b % 4), (1, 1), "n={n} pair ({a},{b})");
        }
    }
}

#[test]
fn derived_u_lies_in_interval() {
    for n in 1..=N_MAX {
        let t = make_target(n).unwrap();
        let interval = u_interval(&t);
        for (a, b) in pairs(value(n)) {
            // derive_u also asserts agreement with the divisor-form identity
            let u = derive_u(&t, &nat(a), &nat(b)).unwrap();
            assert_eq!(u, derive_u_divisor_form(&t, &nat(a), &nat(b)));
            assert!(
                interval.contains(&u),
                "n={n} ({a},{b}) u={u} not in {interval}"
            );
            let c = try_candidate(&t, &u);
            assert_eq!(c.root, Some(nat((b - a) / 2)));
        }
    }
}

#[test]
fn filter_sets_agree() {
    let primes = arith::odd_primes_up_to(199);
    for n in 1..=500u64 {
        let t = make_target(n).unwrap();
        for &p in &primes {
            if value(n).is_multiple_of(p) {
                assert!(admissible_residues_qr(&t, p).is_err());
                assert!(admissible_residues_parametric(&t, p).is_err());
                continue;
            }
            assert_eq!(
                admissible_residues_parametric(&t, p).unwrap(),
                admissible_residues_qr(&t, p).unwrap(),
                "n={n} p={p}"
            );
        }
    }
}

fn pair_set(out: &SieveOutcome) -> BTreeSet<(u64, u64)> {
    out.pairs()
        .iter()
        .map(|p| (p.a.to_u64().unwrap(), p.b.to_u64().unwrap()))
        .collect()
}

#[test]
fn qr_filters_are_sound() {
    let all_qr = SieveOptions {
        want_all: true,
        ..SieveOptions::default()
    };
    let all_plain = SieveOptions {
        want_all: true,
        ..SieveOptions::unfiltered()
    };
    for n in 1..=N_MAX {
        let t = make_target(n).unwrap();
        let truth: BTreeSet<_> = pairs(value(n)).into_iter().collect();

        let first = sieve_enumerate(&t, &SieveOptions::default()).unwrap();
        match &first.verdict {
            Verdict::Prime => assert!(truth.is_empty(), "n={n}: Prime on composite"),
            Verdict::Composite(found) => {
                assert_eq!(found.len(), 1);
                let p = &found[0];
                assert!(
                    truth.contains(&(p.a.to_u64().unwrap(), p.b.to_u64().unwrap())),
                    "n={n}"
                );
                assert_eq!(&p.center - &p.d, p.a);
                assert_eq!(&p.center + &p.d, p.b);
                assert_eq!(&p.center * &p.center - &p.d * &p.d, *t.value());
            }
        }

        let qr = sieve_enumerate(&t, &all_qr).unwrap();
        let plain = sieve_enumerate(&t, &all_plain).unwrap();
        assert_eq!(pair_set(&qr), truth, "n={n} qr");
        assert_eq!(pair_set(&plain), truth, "n={n} plain");
        assert_eq!(qr.pairs(), plain.pairs(), "n={n}");
        assert!(qr.examined <= plain.examined);
    }
}

#[test]
fn witnesses_grow_with_u() {
    let options = SieveOptions {
        want_all: true,
        ..SieveOptions::unfiltered()
    };
    for n in 1..=N_MAX {
        let t = make_target(n).unwrap();
        let out = sieve_enumerate(&t, &options).unwrap();
        for w in out.pairs().windows(2) {
            assert!(w[0].witness_u < w[1].witness_u, "n={n}");
            assert!(w[0].center < w[1].center, "n={n}");
            assert!(w[0].d < w[1].d, "n={n}");
        }
        let form = t.form();
        let (u1, u2) = (nat(n), nat(n + 1));
        assert!(form.center(&u1) < form.center(&u2));
    }
}

#[test]
fn witness_exists_exactly_for_composites() {
    for n in 1..=N_MAX {
        let t = make_target(n).unwrap();
        let composite = !pairs(value(n)).is_empty();
        assert_eq!(compositeness_witness(&t).is_some(), composite, "n={n}");
        assert_eq!(arith::is_prime(t.value()), !composite, "n={n}");
    }
}

#[test]
fn generic_fermat_to_one_hundred_thousand() {
    for x in (9..=100_000u64).step_by(2) {
        let truth = pairs(x);
        let out = fermat_factor(&nat(x), u64::MAX).unwrap();
        match out.verdict {
            GenericVerdict::Prime => assert!(truth.is_empty(), "{x}"),
            GenericVerdict::Split(s) => {
                // the most balanced divisor pair has the smallest center
                let best = *truth.last().expect("split of a prime");
                let got = (s.a.to_u64().unwrap(), s.b.to_u64().unwrap());
                assert_eq!(got, best, "{x}");
                assert_eq!(s.c.to_u64().unwrap(), (best.0 + best.1) / 2);
                assert_eq!(&s.c * &s.c - &s.d * &s.d, nat(x));
            }
            GenericVerdict::BudgetExhausted => unreachable!(),
        }
    }
}

#[test]
fn oracle_factorizes_to_twenty_million() {
    const LIMIT: usize = 20_000_000;
    // smallest prime factor sieve
    let mut spf = vec![0u32; LIMIT + 1];
    for i in 2..=LIMIT {
        if spf[i] == 0 {
            let mut j = i;
            while j <= LIMIT {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut expected = Vec::new();
    for x in 1..=LIMIT {
        expected.clear();
        let mut y = x;
        while y > 1 {
            expected.push(spf[y] as u64);
            y /= spf[y] as usize;
        }
        let got = oracle_factorize(&nat(x as u64));
        assert_eq!(got.len(), expected.len(), "{x}");
        assert!(got.iter().zip(&expected).all(|(g, &e)| *g == nat(e)), "{x}");
    }
}

#[test]
fn oracle_handles_big_inputs() {
    let f5 = make_fermat(5).unwrap();
    assert_eq!(oracle_factorize(f5.value()), vec![nat(641), nat(6700417)]);
    let big = nat(1_000_003) * nat(1_000_033) * nat(4_294_967_311);
    assert_eq!(
        oracle_factorize(&big),
        vec![nat(1_000_003), nat(1_000_033), nat(4_294_967_311)]
    );
}

#[test]
fn lucas_residue_matches_division_on_f5() {
    let t = make_fermat(5).unwrap();
    for s in 1..=1000u64 {
        let c = lemma31_check(&t, &nat(s)).unwrap();
        let divisor = nat(128 * s + 1);
        assert_eq!(c.divisor, divisor);
        let divides = (t.value() % &divisor) == Natural::from(0u32);
        assert_eq!(c.divides(), divides, "s={s}");
        if divides {
            assert_eq!(&divisor * (t.value() / &divisor), *t.value());
        }
    }
}

#[test]
fn lambda_paths_agree_on_f5() {
    let t = make_fermat(5).unwrap();
    let derived = lambda_of_pair(&t, &nat(641), &nat(6_700_417)).unwrap();
    assert_eq!(derived, nat(409));
    assert!(lambda_interval(&t).unwrap().contains(&derived));
    for filters in [LambdaFilters::none(), LambdaFilters::all(97)] {
        let search = lambda_search(&t, 10_000, &filters).unwrap();
        let found: Vec<_> = search.hits.iter().map(|h| h.lambda.clone()).collect();
        assert_eq!(found, vec![derived.clone()]);
        let (p, q) = search.hits[0].factors().unwrap();
        assert_eq!(&p * &q, *t.value());
    }
}

#[test]
fn lambda_interval_holds_known_pairs() {
    for index in [5u32, 6, 7] {
        let t = make_fermat(index).unwrap();
        let primes = known_factorization(index).unwrap();
        assert_eq!(primes.iter().product::<Natural>(), *t.value());
        let p = primes[0].clone();
        let q = t.value() / &p;
        let lambda = lambda_of_pair(&t, &p, &q).unwrap();
        assert!(lambda_interval(&t).unwrap().contains(&lambda), "F{index}");
        assert!(try_lambda(&t, &lambda).root.is_some());
    }
}

proptest! {
    #[test]
    fn isqrt_matches_reference(bytes in prop::collection::vec(any::<u8>(), 1..64)) {
        let x = BigUint::from_bytes_le(&bytes);
        let r = isqrt(&x);
        prop_assert_eq!(&r, &x.sqrt());
        prop_assert!(&r * &r <= x);
        let r1 = &r + 1u32;
        prop_assert!(&r1 * &r1 > x);
    }

    #[test]
    fn inverse_times_value_is_one(a in 1u64..1_000_000, pi in 0usize..168) {
        let p = arith::primes_up_to(1000)[pi];
        if a % p != 0 {
            let inv = arith::mod_inv(&nat(a), p).unwrap();
            prop_assert_eq!(arith::mul_mod(inv, a % p, p), 1);
        } else {
            prop_assert!(arith::mod_inv(&nat(a), p).is_err());
        }
    }

    #[test]
    fn target_round_trips(n in 1u64..u64::MAX / 4) {
        let t = make_target(n).unwrap();
        let back = QuadTarget::from_value(t.value()).unwrap();
        prop_assert_eq!(back.n(), t.n());
        let off = t.value() + Natural::one();
        prop_assert!(QuadTarget::from_value(&off).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_pairs_reconstruct(n in 1u64..20_000) {
        let t = make_target(n).unwrap();
        let out = sieve_enumerate(&t, &SieveOptions::default()).unwrap();
        for p in out.pairs() {
            prop_assert_eq!(&p.a * &p.b, t.value().clone());
            prop_assert_eq!(&p.center * &p.center - &p.d * &p.d, t.value().clone());
            prop_assert_eq!(t.form().center(&p.witness_u), p.center.clone());
        }
        prop_assert_eq!(out.verdict == Verdict::Prime, arith::is_prime(t.value()));
    }
}
