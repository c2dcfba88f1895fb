use dft_core::classify::symbol_prime;
use dft_core::{
    build_form, contains_isotropic_elementary, enumerate_symbols, image_rank,
    max_isotropic_elementary_rank, max_isotropic_rank, no_cube_catalog_check, parse_symbol,
    small_type, Bounds, Error, GenusSymbol, Sign,
};
use proptest::prelude::*;

fn sym(s: &str) -> GenusSymbol {
    parse_symbol(s).unwrap()
}

fn small(s: &str) -> bool {
    small_type(&sym(s)).unwrap().small
}

#[test]
fn verdict_examples() {
    let v = small_type(&sym("3^-1")).unwrap();
    assert!(v.small);
    assert!(v.rule.starts_with("(i)"));
    assert!(!small("3^+6"));
    assert!(!small("2_II^-6"));
    let v = small_type(&sym("2_2^+6")).unwrap();
    assert!(v.small);
    assert_eq!(v.rule, "D3:2_t^±6,t≡2(4)");
    assert!(small("8_1^+1.2_1^+1"));
    let v = small_type(&sym("2_1^+1.3^-1")).unwrap();
    assert!(v.small);
    assert_eq!(v.per_prime.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
    assert!(small("1"));
}

#[test]
fn two_adic_lists() {
    // D1 applies when B has rank 2
    assert!(small("2_II^-2.8_2^+2"));
    assert!(!small("2_II^+2.8_2^+2"));
    assert!(small("2_3^+3.8_2^+2"));
    assert!(!small("2_3^-3.8_2^+2"));
    // D2 with B of rank 1
    assert!(small("2_II^+2.8_1^+1"));
    assert!(!small("2_II^+4.8_1^+1"));
    assert!(small("2_6^+4.8_1^+1"));
    assert!(!small("2_0^+4.8_1^+1"));
    // D3 with empty B
    assert!(small("2_II^+4"));
    assert!(!small("2_II^+6"));
    assert!(small("2_5^+5"));
    assert!(small("4_1^+1.2_II^+4"));
    assert!(!small("4_2^+2.2_II^+4"));
    assert!(!small("8_3^+3"));
}

#[test]
fn catalog_examples() {
    assert!(no_cube_catalog_check(&sym("3^+6")).unwrap());
    assert!(!no_cube_catalog_check(&sym("3^-6")).unwrap());
    assert!(no_cube_catalog_check(&sym("2_II^-6")).unwrap());
    assert!(matches!(
        no_cube_catalog_check(&sym("2_1^+1.3^-1")),
        Err(Error::Validity(_))
    ));
}

#[test]
fn classifier_matches_the_lift_span() {
    let b = Bounds::default();
    for (k, p) in [(243u64, 3u64), (125, 5), (128, 2)] {
        for s in enumerate_symbols(k, &[p]) {
            let (rank, _) = image_rank(&build_form(&s).unwrap(), &b).unwrap();
            assert_eq!(small_type(&s).unwrap().small, rank < s.order() as usize, "{s}");
        }
    }
}

#[test]
fn composite_verdict_is_the_conjunction() {
    for s in enumerate_symbols(300, &[2, 3, 5]) {
        let v = small_type(&s).unwrap();
        let parts: Vec<bool> = s
            .primes()
            .iter()
            .map(|&p| small_type(&s.p_part(p)).unwrap().small)
            .collect();
        assert_eq!(v.small, parts.iter().all(|&x| x), "{s}");
        assert_eq!(v.per_prime.len(), parts.len());
    }
}

#[test]
fn catalog_matches_search() {
    let b = Bounds::default();
    for (k, p) in [(729u64, 3u64), (625, 5), (256, 2)] {
        for s in enumerate_symbols(k, &[p]) {
            let d = build_form(&s).unwrap();
            assert_eq!(symbol_prime(&s).unwrap_or(p), p);
            assert_eq!(
                no_cube_catalog_check(&s).unwrap(),
                !contains_isotropic_elementary(&d, p, 3, &b).unwrap(),
                "{s}"
            );
        }
    }
}

#[test]
fn maximal_isotropic_rank_matches_search() {
    let b = Bounds::default();
    for n in 1..=5u32 {
        for sign in [Sign::Plus, Sign::Minus] {
            let c = if sign == Sign::Plus { '+' } else { '-' };
            let d = build_form(&sym(&format!("3^{c}{n}"))).unwrap();
            assert_eq!(
                max_isotropic_rank(3, n, sign),
                max_isotropic_elementary_rank(&d, 3, &b).unwrap(),
                "3^{c}{n}"
            );
        }
    }
    for (s, sign) in [("3^+6", Sign::Plus), ("3^-6", Sign::Minus)] {
        let d = build_form(&sym(s)).unwrap();
        assert_eq!(max_isotropic_rank(3, 6, sign), max_isotropic_elementary_rank(&d, 3, &b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_seven_is_never_small(
        extra in proptest::sample::select(enumerate_symbols(64, &[2, 3, 5])),
        p in prop_oneof![Just(3u64), Just(5), Just(7)],
        n in 7u32..12,
        plus in any::<bool>(),
    ) {
        let c = if plus { '+' } else { '-' };
        let big = sym(&format!("{}^{c}{n}", p.pow(2)));
        let s = big.direct_sum(&extra);
        prop_assume!(s.is_ok());
        prop_assert!(!small_type(&s.unwrap()).unwrap().small);
    }

    #[test]
    fn verdict_is_invariant_under_oddity_normalization(s in proptest::sample::select(enumerate_symbols(512, &[2]))) {
        prop_assert_eq!(
            small_type(&s).unwrap().small,
            small_type(&s.normalize_oddity()).unwrap().small
        );
    }
}
