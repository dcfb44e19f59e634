use proptest::prelude::*;

use rmcodes::bounds::{condition_star, condition_star_full, generic_bounds};
use rmcodes::code::{build_code, build_code_with, BuildOptions, CodeSpec, Variant};
use rmcodes::cyclotomy::{self, fold_exponent, QadicParams};
use rmcodes::distance::{exhaustive_distance, DistanceError, low_weight_distance, SearchBudget};
use rmcodes::gf::{FieldCtx, FieldElem, FieldOptions, Poly};
use rmcodes::nt;

fn small_field_order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81, 125, 243, 256, 1024])
}

fn field_and_three() -> impl Strategy<Value = (u64, u64, u64, u64)> {
    small_field_order().prop_flat_map(|q| (Just(q), 0..q, 0..q, 0..q))
}

fn small_spec() -> impl Strategy<Value = CodeSpec> {
    (prop::sample::select(vec![2u64, 3, 4]), 2u32..=5)
        .prop_flat_map(|(q, m)| (Just(q), Just(m), 1..m, any::<bool>()))
        .prop_filter("n small", |&(q, m, _, _)| q.pow(m) <= 1024)
        .prop_map(|(q, m, h, bar)| {
            let variant = if bar { Variant::OmegaBar } else { Variant::Omega };
            CodeSpec::new(q, m, h, variant).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms((q, a, b, c) in field_and_three()) {
        let f = FieldCtx::of_order(q).unwrap();
        let (a, b, c) = (FieldElem(a), FieldElem(b), FieldElem(c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        prop_assert_eq!(f.mul(a, FieldElem::ONE), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
        }
    }

    #[test]
    fn odd_order_test_matches_order_parity(b in -1_000_000i128..1_000_000, e in 2u128..1_000_000) {
        // Strip the primes e shares with b.
        let mut e = e;
        loop {
            let g = num_integer::Integer::gcd(&nt::reduce_signed(b, e), &e);
            if g == 1 {
                break;
            }
            e /= g;
        }
        prop_assume!(e >= 2);
        let trace = nt::odd_order_test(b, e).unwrap();
        prop_assert_eq!(trace.odd, nt::mult_order(b, e).unwrap() % 2 == 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weight_is_constant_on_classes(q in 2u128..10, m in 2u32..8, a in 1u128..1_000_000) {
        let p = QadicParams::new(q, m).unwrap();
        let a = a % p.n();
        prop_assume!(a != 0);
        let class = p.class_of(a);
        prop_assert!(class.len() as u32 <= m && m % class.len() as u32 == 0);
        let w = p.wt_q(a as i128);
        for &b in &class {
            prop_assert_eq!(p.wt_q(b as i128), w);
            prop_assert_eq!(p.times_q(b), b * q % p.n());
        }
    }

    #[test]
    fn representatives_cover_index_set(q in 2u128..6, m in 2u32..6, h in 1u32..5) {
        prop_assume!(h < m);
        let p = QadicParams::new(q, m).unwrap();
        let part = cyclotomy::coset_partition(&p, h).unwrap();
        let mut all: Vec<u128> = part.classes.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, cyclotomy::index_set_i(&p, h).unwrap());
        for (cls, &r) in part.classes.iter().zip(&part.representatives) {
            prop_assert_eq!(cls[0], r);
        }
        for &a in &part.maximal {
            prop_assert!(part.representatives.iter().all(|&b| b == a || b % a != 0));
        }
    }

    #[test]
    fn condition_via_maximal_equals_via_index_set(q in 2u64..6, m in 2u32..7, h in 1u32..6, pick in any::<prop::sample::Index>()) {
        prop_assume!(h < m && (q != 4 || m <= 5) && rmcodes::gf::PrimePower::is_prime_power(q));
        let n = (q as u128).pow(m) - 1;
        let divisors: Vec<u128> = nt::factorize(n).unwrap().divisors().into_iter().filter(|&e| e >= 2 && e < n).collect();
        prop_assume!(!divisors.is_empty());
        let e = *pick.get(&divisors);
        prop_assert_eq!(condition_star(q, m, h, e).unwrap(), condition_star_full(q, m, h, e).unwrap());
    }

    #[test]
    fn fold_keeps_residue_and_lowers_weight(q in 2u128..6, m in 2u32..5, l in 2u32..4, a in 1u128..u64::MAX as u128) {
        let p = QadicParams::new(q, m).unwrap();
        let big = QadicParams::new(q, m * l).unwrap();
        let a = a % big.n();
        prop_assume!(a != 0);
        let f = fold_exponent(a, &p);
        prop_assert_eq!(f % p.n(), a % p.n());
        prop_assert!(f <= p.n());
        prop_assert!(big.wt_q(f as i128) <= big.wt_q(a as i128));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generator_divides_and_shifts_stay_in_code(spec in small_spec(), seed in any::<u64>(), shift in 0usize..1024) {
        let inst = build_code(&spec).unwrap();
        let f = inst.small_field();
        prop_assert!(Poly::x_pow_minus_one(inst.n(), f).rem(inst.gen_poly(), f).unwrap().is_zero());
        prop_assume!(inst.k() > 0);
        let mut state = seed;
        let msg: Vec<FieldElem> = (0..inst.k())
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                FieldElem((state >> 33) % f.order())
            })
            .collect();
        let word = inst.encode(&msg).unwrap();
        prop_assert!(inst.is_member(word.coeffs()).unwrap());
        let shifted = word.cyclic_shift(shift % inst.n());
        prop_assert_eq!(shifted.weight(), word.weight());
        prop_assert!(inst.is_member(shifted.coeffs()).unwrap());
        prop_assert!(inst.is_member_by_division(shifted.coeffs()).unwrap());
    }
}

/// Every small instance: both exact routes agree, and the value respects the
/// bounds wherever they are stated.
#[test]
fn distance_routes_agree_and_respect_bounds() {
    let budget = SearchBudget {
        max_messages: 1 << 20,
        max_weight_target: None,
        max_low_weight_words: 1 << 22,
    };
    for q in [2u64, 3, 4] {
        for m in 2..=5u32 {
            for h in 1..m {
                for variant in [Variant::Omega, Variant::OmegaBar] {
                    let spec = CodeSpec::new(q, m, h, variant).unwrap();
                    let inst = build_code(&spec).unwrap();
                    if inst.k() == 0 {
                        continue;
                    }
                    let Ok(by_messages) = exhaustive_distance(&inst, &budget) else {
                        continue;
                    };
                    match low_weight_distance(&inst, &budget) {
                        Ok(by_weight) => assert_eq!(by_messages.value, by_weight.value, "{spec}"),
                        Err(DistanceError::LowWeightBudgetExceeded { .. }) => {}
                        Err(e) => panic!("{spec}: {e}"),
                    }
                    let r = generic_bounds(&spec);
                    let d = by_messages.value as u128;
                    if variant == Variant::Omega || h <= (m + 1) / 2 {
                        assert!(r.lower.value <= d, "{spec}: lower {} > {d}", r.lower.value);
                    }
                    if let Some(u) = &r.upper {
                        assert!(d <= u.value, "{spec}: {d} > upper {}", u.value);
                    }
                    if let Some(x) = &r.exact {
                        assert_eq!(x.value, d, "{spec}: exact rule {:?}", x.source);
                    }
                }
            }
        }
    }
}

#[test]
fn distance_does_not_depend_on_primitive_element() {
    let spec = CodeSpec::omega(3, 2, 1).unwrap();
    let reference = build_code(&spec).unwrap();
    let d0 = exhaustive_distance(&reference, &SearchBudget::default()).unwrap().value;
    for rank in 1..4 {
        let opts = BuildOptions {
            field: FieldOptions {
                primitive_rank: rank,
                ..FieldOptions::default()
            },
            ..BuildOptions::default()
        };
        let inst = build_code_with(&spec, &opts).unwrap();
        assert_ne!(inst.big_field().primitive(), reference.big_field().primitive());
        assert_eq!(inst.k(), reference.k());
        assert_eq!(exhaustive_distance(&inst, &SearchBudget::default()).unwrap().value, d0);
    }
}

#[test]
fn quadratic_residues_have_odd_order_for_p_3_mod_4() {
    for p in (3..500u64).filter(|&p| p % 4 == 3 && nt::is_prime_trial(p)) {
        for b in 2..p {
            let square = (1..p).any(|x| x * x % p == b);
            assert_eq!(nt::odd_order_test(b as i128, p as u128).unwrap().odd, square, "p={p} b={b}");
        }
    }
}
