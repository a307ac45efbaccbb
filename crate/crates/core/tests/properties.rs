use proptest::prelude::*;
use qcanon::canonical::precedes;
use qcanon::crystal::{crystal_e, crystal_f, depth_of};
use qcanon::pbw::{pl_bijection, transport};
use qcanon::{DynkinDiagram, LusztigData, ReducedWord};

fn setup(t: &str) -> (DynkinDiagram, Vec<ReducedWord>) {
    let d = DynkinDiagram::parse(t).unwrap();
    let words = d.all_reduced_words(&d.default_word(), 4096).unwrap();
    (d, words)
}

fn data_strategy(t: &'static str) -> impl Strategy<Value = (DynkinDiagram, LusztigData, ReducedWord)> {
    let (d, words) = setup(t);
    let n = words[0].len();
    let k = words.len();
    (prop::collection::vec(0u32..4, n), 0..k, 0..k).prop_map(move |(a, i, j)| {
        (d.clone(), LusztigData::new(words[i].clone(), a).unwrap(), words[j].clone())
    })
}

fn types() -> impl Strategy<Value = (DynkinDiagram, LusztigData, ReducedWord)> {
    prop_oneof![data_strategy("A2"), data_strategy("A3"), data_strategy("D4")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn braid_moves_are_involutive((d, x, _w) in types()) {
        for m in d.legal_moves(&x.word) {
            let y = pl_bijection(&d, m, &x).unwrap();
            prop_assert_eq!(pl_bijection(&d, m, &y).unwrap(), x.clone());
        }
    }

    #[test]
    fn transport_round_trip_keeps_weight((d, x, w) in types()) {
        let y = transport(&d, &x, &w).unwrap();
        prop_assert_eq!(&y.word, &w);
        prop_assert_eq!(y.weight(&d).unwrap(), x.weight(&d).unwrap());
        prop_assert_eq!(transport(&d, &y, &x.word).unwrap(), x);
    }

    #[test]
    fn crystal_operators_are_inverse((d, x, w) in types(), i in 0usize..4) {
        let i = i % d.rank();
        let fx = crystal_f(&d, i, &x).unwrap();
        prop_assert_eq!(crystal_e(&d, i, &fx).unwrap(), Some(x.clone()));
        prop_assert_eq!(depth_of(&d, &fx).unwrap(), depth_of(&d, &x).unwrap() + 1);
        let mut nu = x.weight(&d).unwrap();
        nu[i] += 1;
        prop_assert_eq!(fx.weight(&d).unwrap(), nu);
        // f does not depend on the word the data is written in
        let fy = crystal_f(&d, i, &transport(&d, &x, &w).unwrap()).unwrap();
        prop_assert_eq!(transport(&d, &fy, &fx.word).unwrap(), fx);
    }

    #[test]
    fn precedes_is_a_strict_partial_order(
        a in prop::collection::vec(0u32..3, 6),
        b in prop::collection::vec(0u32..3, 6),
        c in prop::collection::vec(0u32..3, 6),
    ) {
        prop_assert!(!precedes(&a, &a));
        prop_assert!(!(precedes(&a, &b) && precedes(&b, &a)));
        if precedes(&a, &b) && precedes(&b, &c) {
            prop_assert!(precedes(&a, &c));
        }
    }
}
