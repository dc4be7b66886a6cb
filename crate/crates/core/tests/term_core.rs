use std::collections::HashMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treearith::bridge::{nat, term, term_u64};
use treearith::gcons::*;
use treearith::random::TermGen;
use treearith::{Term, TermError};

// Independent denotation: nat(T) = 0, nat(C(x,y)) = 2^nat(x) * (2 nat(y) + 1).
fn denote(t: &Term) -> BigUint {
    match t.node() {
        None => BigUint::from(0u8),
        Some((x, y)) => {
            let shift = u32::try_from(denote(x)).expect("small exponent");
            (denote(y) * 2u8 + 1u8) << shift
        }
    }
}

fn samples(seed: u64, n: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen = TermGen::default();
    (0..n).map(|_| gen.term(&mut rng)).collect()
}

#[test]
fn spec_examples() {
    let t = |s: &str| s.parse::<Term>().unwrap();
    assert_eq!(Term::T.succ(), t("C(T,T)"));
    assert_eq!(t("C(T,T)").succ(), t("C(C(T,T),T)"));
    assert_eq!(t("C(C(T,T),T)").succ(), t("C(T,C(T,T))"));
    assert_eq!(t("C(T,T)").pred(), Ok(Term::T));
    assert_eq!(t("C(T,C(T,T))").pred(), Ok(t("C(C(T,T),T)")));
    assert_eq!(Term::T.pred(), Err(TermError::PredOfZero));
    assert_eq!(t("C(T,T)").double(), Ok(t("C(C(T,T),T)")));
    assert_eq!(t("C(C(T,T),T)").double(), Ok(t("C(C(C(T,T),T),T)")));
    assert_eq!(denote(&t("C(C(C(T,T),T),T)")), BigUint::from(4u8));
    assert_eq!(t("C(C(T,T),T)").half(), Ok(t("C(T,T)")));
    assert_eq!(t("C(T,T)").half(), Err(TermError::HalfOfOddOrZero));
    assert_eq!(Term::T.double(), Err(TermError::DoubleOfZero));
    assert_eq!(view_d(&t("C(C(T,T),T)")), Some(t("C(T,T)")));
    assert_eq!(make_i(&Term::T), t("C(C(T,T),T)"));
}

#[test]
fn bijection_on_small_naturals() {
    let mut x = Term::T;
    for n in 0u64..10_000 {
        assert_eq!(nat(&x).unwrap(), BigUint::from(n));
        assert_eq!(term_u64(n), x);
        x = x.succ();
    }
}

#[test]
fn distinct_terms_denote_distinct_naturals() {
    let mut seen: HashMap<BigUint, Term> = HashMap::new();
    for t in samples(1, 10_000) {
        let n = denote(&t);
        assert_eq!(nat(&t).unwrap(), n);
        if let Some(prev) = seen.insert(n, t.clone()) {
            assert_eq!(prev, t);
        }
    }
}

#[test]
fn homomorphisms_against_oracle() {
    for t in samples(2, 10_000) {
        let n = denote(&t);
        assert_eq!(denote(&t.succ()), &n + 1u8);
        assert_eq!(denote(&make_o(&t)), &n * 2u8 + 1u8);
        assert_eq!(denote(&make_i(&t)), &n * 2u8 + 2u8);
        if !t.is_t() {
            assert_eq!(denote(&t.double().unwrap()), &n * 2u8);
            assert_eq!(denote(&t.pred().unwrap()), &n - 1u8);
        }
    }
}

#[test]
fn inverse_laws() {
    for t in samples(3, 2_000) {
        assert_eq!(t.succ().pred().unwrap(), t);
        if !t.is_t() {
            assert_eq!(t.pred().unwrap().succ(), t);
            assert_eq!(t.double().unwrap().half().unwrap(), t);
        }
    }
}

#[test]
fn views_partition_terms() {
    for t in samples(4, 5_000) {
        let hits = [t.is_t(), view_o(&t).is_some(), view_i(&t).is_some()];
        assert_eq!(hits.iter().filter(|&&h| h).count(), 1, "{t}");
        assert_eq!(view_d(&t).is_some(), t.is_even_positive());
        assert_eq!(view_s(&t).is_some(), !t.is_t());
    }
}

#[test]
fn view_make_coherence() {
    for x in samples(5, 3_000) {
        assert_eq!(view_s(&make_s(&x)), Some(x.clone()));
        assert_eq!(view_o(&make_o(&x)), Some(x.clone()));
        assert_eq!(view_i(&make_i(&x)), Some(x.clone()));
        if !x.is_t() {
            assert_eq!(view_d(&make_d(&x).unwrap()), Some(x.clone()));
        }
        // the other direction: whatever a view yields rebuilds the input
        if let Some(y) = view_s(&x) {
            assert_eq!(make_s(&y), x);
        }
        if let Some(y) = view_d(&x) {
            assert_eq!(make_d(&y).unwrap(), x);
        }
        if let Some(y) = view_o(&x) {
            assert_eq!(make_o(&y), x);
        }
        if let Some(y) = view_i(&x) {
            assert_eq!(make_i(&y), x);
        }
    }
}

#[test]
fn text_format_round_trips() {
    for t in samples(6, 2_000) {
        let s = t.to_string();
        assert_eq!(s.parse::<Term>().unwrap(), t);
        assert_eq!(s.replace(',', ", ").parse::<Term>().unwrap(), t);
    }
    assert_eq!(term(&BigUint::from(5u8)).to_string(), "C(T,C(C(T,T),T))");
}

#[test]
fn terms_cross_threads() {
    let t = term_u64(123_456_789);
    let handle = {
        let t = t.clone();
        std::thread::spawn(move || t.succ())
    };
    assert_eq!(handle.join().unwrap(), term_u64(123_456_790));
}

#[test]
fn long_spines_stay_off_the_native_stack() {
    let ones = (BigUint::from(1u8) << 100_000u32) - 1u8;
    let x = term(&ones);
    assert_eq!(x.depth(), 100_000);
    let up = x.succ();
    assert_eq!(nat(&up).unwrap(), &ones + 1u8);
    assert_eq!(up.pred().unwrap(), x);
    assert_eq!(x.to_string().parse::<Term>().unwrap(), x);
}

fn seeded_term() -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(|seed| TermGen::new(40).term(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #[test]
    fn succ_pred_agree_with_denotation(t in seeded_term()) {
        let n = denote(&t);
        prop_assert_eq!(denote(&t.succ()), &n + 1u8);
        match t.pred() {
            Ok(p) => prop_assert_eq!(denote(&p) + 1u8, n),
            Err(e) => {
                prop_assert!(t.is_t());
                prop_assert_eq!(e, TermError::PredOfZero);
            }
        }
    }

    #[test]
    fn half_is_defined_exactly_on_even_positive(t in seeded_term()) {
        let n = denote(&t);
        match t.half() {
            Ok(h) => prop_assert_eq!(denote(&h) * 2u8, n),
            Err(_) => prop_assert!(t.is_t() || t.is_odd()),
        }
    }
}
