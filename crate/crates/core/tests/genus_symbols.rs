use std::collections::HashSet;

use dft_core::genus::{unit_decomposition, MAX_COMPONENT_RANK};
use dft_core::{build_form, enumerate_symbols, parse_symbol, Error, GenusSymbol, Parity, Sign};
use proptest::prelude::*;

fn sym(s: &str) -> GenusSymbol {
    parse_symbol(s).unwrap()
}

#[test]
fn parse_examples() {
    let s = sym("2_1^+1");
    let c = &s.components()[0];
    assert_eq!(
        (c.prime, c.scale_exp, c.rank, c.sign, c.parity, c.oddity),
        (2, 1, 1, Sign::Plus, Parity::Odd, Some(1))
    );

    let s = sym("2_II^-2.3^-1");
    let c = s.components();
    assert_eq!(
        (c[0].prime, c[0].scale_exp, c[0].rank, c[0].sign, c[0].parity),
        (2, 1, 2, Sign::Minus, Parity::Even)
    );
    assert_eq!(
        (c[1].prime, c[1].scale_exp, c[1].rank, c[1].sign),
        (3, 1, 1, Sign::Minus)
    );

    assert!(matches!(parse_symbol("2^+1"), Err(Error::Validity(_))));
    assert!(matches!(parse_symbol("2_2^+1"), Err(Error::Validity(_))));
}

#[test]
fn invalid_symbols() {
    for bad in [
        "3^-2.3^+1",
        "2_II^+2.2_II^+2",
        "3_1^+1",
        "6^+1",
        "3^+0",
        "2_3^+2",
        "2_0^+1",
        "2_II^+3",
    ] {
        assert!(matches!(parse_symbol(bad), Err(Error::Validity(_))), "{bad}");
    }
    for bad in ["", "3", "3^1", "3^+", "^+1", "3^+1.", "3^+1..5^+1", "x^+1", "2_^+1"] {
        assert!(matches!(parse_symbol(bad), Err(Error::Syntax { .. })), "{bad}");
    }
}

#[test]
fn format_examples() {
    assert_eq!(sym("3^-2").to_string(), "3^-2");
    assert_eq!(GenusSymbol::trivial().to_string(), "1");
    assert_eq!(sym("1"), GenusSymbol::trivial());
    assert_eq!(sym("4_1^+1.2_1^+1").to_string(), "2_1^+1.4_1^+1");
    assert_eq!(sym("2_9^+1").to_string(), "2_1^+1");
}

#[test]
fn normalize_examples() {
    assert_eq!(sym("2_5^-1").normalize_oddity(), sym("2_1^+1"));
    assert_eq!(sym("2_1^+1").normalize_oddity(), sym("2_1^+1"));
    assert_eq!(sym("2_7^+1").normalize_oddity(), sym("2_7^+1"));
}

#[test]
fn enumerate_examples() {
    let texts = |k, ps: &[u64]| -> Vec<String> {
        enumerate_symbols(k, ps).iter().map(|s| s.to_string()).collect()
    };
    assert_eq!(texts(3, &[3]), ["1", "3^+1", "3^-1"]);
    assert_eq!(texts(1, &[2, 3]), ["1"]);
    let four = texts(4, &[2]);
    for s in ["2_II^+2", "2_II^-2", "4_1^+1", "2_2^+2"] {
        assert!(four.contains(&s.to_string()), "{s}");
    }
}

#[test]
fn unit_decompositions() {
    assert_eq!(unit_decomposition(1, 2, Sign::Plus), None);
    let u = unit_decomposition(3, 3, Sign::Minus).unwrap();
    assert_eq!(u.iter().map(|&a| a as u32).sum::<u32>() % 8, 3);
    assert!(parse_symbol(&format!("3^+{}", MAX_COMPONENT_RANK + 1)).is_err());
}

fn corpus() -> Vec<GenusSymbol> {
    let mut v = enumerate_symbols(256, &[2]);
    v.extend(enumerate_symbols(243, &[3]));
    v.extend(enumerate_symbols(125, &[5]));
    v.extend(enumerate_symbols(120, &[2, 3, 5]));
    v
}

#[test]
fn enumeration_is_duplicate_free_and_valid() {
    for (k, ps) in [(256u64, vec![2u64]), (729, vec![3]), (200, vec![2, 3, 5, 7])] {
        let all = enumerate_symbols(k, &ps);
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            assert!(s.order() <= k);
            assert_eq!(&parse_symbol(&s.to_string()).unwrap(), s);
            for c in s.components() {
                c.validate().unwrap();
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip(s in proptest::sample::select(corpus())) {
        let text = s.to_string();
        let again = parse_symbol(&text).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(again.to_string(), text);
    }

    #[test]
    fn random_text_round_trips_when_valid(
        parts in proptest::collection::vec(
            (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 1u32..4, 1u32..5, any::<bool>(),
             proptest::option::of(0u8..8)),
            1..4,
        )
    ) {
        let text: Vec<String> = parts
            .iter()
            .map(|&(p, k, n, plus, t)| {
                let q = p.pow(k);
                let s = if plus { '+' } else { '-' };
                match (p, t) {
                    (2, Some(t)) => format!("{q}_{t}^{s}{n}"),
                    (2, None) => format!("{q}_II^{s}{n}"),
                    _ => format!("{q}^{s}{n}"),
                }
            })
            .collect();
        let text = text.join(".");
        match parse_symbol(&text) {
            Ok(s) => prop_assert_eq!(parse_symbol(&s.to_string()).unwrap(), s),
            Err(e) => prop_assert!(matches!(e, Error::Validity(_)), "{text}: {e}"),
        }
    }

    #[test]
    fn normalize_preserves_the_form(s in proptest::sample::select(enumerate_symbols(256, &[2]))) {
        let n = s.normalize_oddity();
        let (d, e) = (build_form(&s).unwrap(), build_form(&n).unwrap());
        prop_assert_eq!(d.order(), e.order());
        prop_assert_eq!(d.level(), e.level());
        prop_assert_eq!(d.signature().unwrap(), e.signature().unwrap());
        prop_assert_eq!(d.q_histogram(), e.q_histogram());
    }
}
