use std::sync::Arc;

use qcanon::canonical::CanonicalBasis;
use qcanon::crystal::{
    crystal_e, crystal_f, crystal_f_all_choices, descent_report, ideal_membership, verify_kashiwara_agreement,
    HighestWeight,
};
use qcanon::pbw::{pl_bijection, LusztigData, PbwBasis};
use qcanon::rootsystem::{BraidMove, MoveKind};
use qcanon::rootsystem::DynkinDiagram;
use qcanon::uqfull::QuantumGroup;

fn canonical(t: &str, w: &str, h: u32) -> CanonicalBasis {
    let qg = Arc::new(QuantumGroup::new(DynkinDiagram::parse(t).unwrap(), h));
    let word = qg.diagram().parse_word(w).unwrap();
    CanonicalBasis::new(Arc::new(PbwBasis::new(qg, word).unwrap()))
}

#[test]
fn f3_chain_in_a3() {
    let d = DynkinDiagram::parse("A3").unwrap();
    let w = d.parse_word("1,2,3,1,2,1").unwrap();
    let x = LusztigData::new(w.clone(), vec![2, 3, 1, 2, 4, 2]).unwrap();
    let before_x = LusztigData::new(w.clone(), vec![2, 3, 1, 3, 3, 2]).unwrap();
    // f_3 of the predecessor lands on x.
    assert_eq!(crystal_f(&d, 2, &before_x).unwrap(), x);
    assert_eq!(crystal_f(&d, 2, &x).unwrap().a, vec![2, 3, 1, 2, 4, 3]);
    for y in [&x, &before_x] {
        assert_eq!(crystal_f_all_choices(&d, 2, y, 100).unwrap().len(), 1);
    }
    assert_eq!(crystal_f(&d, 0, &x).unwrap().a, vec![3, 3, 1, 2, 4, 2]);

    // Intermediate steps when the data is carried to a word starting with 3.
    let three = |pos| BraidMove { pos, kind: MoveKind::Three };
    let l2 = pl_bijection(&d, three(3), &before_x).unwrap();
    assert_eq!(l2.word.one_based(), vec![1, 2, 3, 2, 1, 2]);
    assert_eq!(l2.a, vec![2, 3, 1, 3, 2, 4]);
    let l3 = pl_bijection(&d, three(1), &l2).unwrap();
    assert_eq!(l3.a, vec![2, 1, 3, 1, 2, 4]);
    let l4 = pl_bijection(&d, BraidMove { pos: 0, kind: MoveKind::Two }, &l3).unwrap();
    assert_eq!(l4.word.one_based(), vec![3, 1, 2, 3, 1, 2]);
    assert_eq!(l4.a, vec![1, 2, 3, 1, 2, 4]);
}

#[test]
fn f_is_independent_of_the_starting_word() {
    let d = DynkinDiagram::parse("A3").unwrap();
    let w = d.parse_word("1,3,2,1,3,2").unwrap();
    for a in [[2, 3, 3, 2, 3, 2], [0, 1, 0, 2, 0, 1], [1, 0, 0, 0, 0, 0]] {
        let x = LusztigData::new(w.clone(), a.to_vec()).unwrap();
        for i in 0..3 {
            assert_eq!(crystal_f_all_choices(&d, i, &x, 100).unwrap().len(), 1);
            assert_eq!(crystal_e(&d, i, &crystal_f(&d, i, &x).unwrap()).unwrap().unwrap(), x);
        }
    }
}

#[test]
fn kashiwara_agreement_sl2_and_a2() {
    let cb = canonical("A1", "1", 9);
    for n in 0..=8 {
        assert!(verify_kashiwara_agreement(cb.pbw(), 0, &[n]).unwrap().passed());
    }
    let cb = canonical("A2", "1,2,1", 5);
    let d = cb.pbw().group().diagram().clone();
    for h in 0..=4 {
        for nu in d.weights_of_height(h) {
            for a in cb.pbw().space(&nu).unwrap().data() {
                for i in 0..2 {
                    let r = verify_kashiwara_agreement(cb.pbw(), i, a).unwrap();
                    assert!(r.passed(), "{r:?}");
                }
            }
        }
    }
}

#[test]
fn ideal_membership_examples() {
    let cb = canonical("A1", "1", 6);
    let qg = cb.pbw().group().clone();
    let d = qg.diagram().clone();
    let lam = HighestWeight::new(&d, vec![2]).unwrap();
    for m in 0..6 {
        let b = cb.element(&[m]).unwrap();
        assert_eq!(ideal_membership(&qg, &b, &lam).unwrap(), m >= 3);
    }
    let cb = canonical("A2", "1,2,1", 4);
    let qg = cb.pbw().group().clone();
    let lam = HighestWeight::new(qg.diagram(), vec![0, 0]).unwrap();
    for nu in [vec![1, 0], vec![1, 1], vec![2, 1]] {
        for b in cb.elements(&nu).unwrap().iter() {
            assert!(ideal_membership(&qg, b, &lam).unwrap());
        }
    }
}

#[test]
fn descent_examples() {
    for (t, w, c, n) in [
        ("A1", "1", vec![2], 3),
        ("A2", "1,2,1", vec![1, 0], 3),
        ("A2", "1,2,1", vec![1, 1], 8),
        ("A3", "1,2,3,1,2,1", vec![0, 1, 0], 6),
    ] {
        let cb = canonical(t, w, 6);
        let lam = HighestWeight::new(cb.pbw().group().diagram(), c).unwrap();
        let r = descent_report(&cb, &lam).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.total, n);
    }
}
