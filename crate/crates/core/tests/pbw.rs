use std::sync::Arc;

use qcanon::pbw::{pl_bijection, transport, verify_lattice_move, LusztigData, PbwBasis};
use qcanon::rootsystem::{BraidMove, DynkinDiagram, MoveKind};
use qcanon::uqfull::QuantumGroup;
use qcanon::uqminus::UMinusElement;
use qcanon::RatFunc;

fn group(t: &str, h: u32) -> Arc<QuantumGroup> {
    Arc::new(QuantumGroup::new(DynkinDiagram::parse(t).unwrap(), h))
}

#[test]
fn lattice_moves_a3_every_move_of_reference_word() {
    let qg = group("A3", 6);
    let d = qg.diagram().clone();
    let w = d.default_word();
    let b1 = PbwBasis::new(qg.clone(), w.clone()).unwrap();
    for m in d.legal_moves(&w) {
        let b2 = PbwBasis::new(qg.clone(), d.apply_braid_move(&w, m).unwrap()).unwrap();
        for nu in d.weights_of_height(4) {
            let r = verify_lattice_move(&b1, &b2, m, &nu).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn lattice_moves_d4() {
    let qg = group("D4", 5);
    let d = qg.diagram().clone();
    let w = d.default_word();
    let b1 = PbwBasis::new(qg.clone(), w.clone()).unwrap();
    let moves: Vec<_> = d.legal_moves(&w).into_iter().filter(|m| m.kind == MoveKind::Three).take(2).collect();
    assert!(!moves.is_empty());
    for m in moves {
        let b2 = PbwBasis::new(qg.clone(), d.apply_braid_move(&w, m).unwrap()).unwrap();
        for nu in [vec![1, 1, 1, 0], vec![1, 2, 1, 0], vec![1, 1, 1, 1]] {
            let r = verify_lattice_move(&b1, &b2, m, &nu).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn root_vectors_are_pbw_monomials_and_span() {
    let qg = group("A3", 5);
    let d = qg.diagram().clone();
    let b = PbwBasis::new(qg.clone(), d.parse_word("3,1,2,1,3,2").unwrap()).unwrap();
    for (k, beta) in b.betas().iter().enumerate() {
        let mut a = vec![0; b.betas().len()];
        a[k] = 1;
        let m = b.monomial(&a).unwrap();
        assert!(qg.minus().equal(&m, &b.root_vectors().element(k)).unwrap());
        assert_eq!(m.weight(3).unwrap(), beta.0);
    }
    // Every word at weight (1,2,1) is a combination of PBW monomials.
    for w in qg.weight_space(&[1, 2, 1]).unwrap().words() {
        let x = UMinusElement::word(w.clone());
        let c = b.expand(&x).unwrap();
        let mut y = UMinusElement::zero();
        for (a, v) in &c {
            y = &y + &b.monomial(a).unwrap().scale(v);
        }
        assert!(qg.minus().equal(&x, &y).unwrap());
    }
}

#[test]
fn divided_powers_of_simple_roots() {
    let qg = group("A2", 6);
    let d = qg.diagram().clone();
    let b = PbwBasis::new(qg.clone(), d.parse_word("1,2,1").unwrap()).unwrap();
    for n in 1..4 {
        let x = UMinusElement::divided_power(0, n);
        let c = b.expand(&x).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&vec![n, 0, 0]], RatFunc::one());
    }
}

#[test]
fn transport_round_trip_a3() {
    let d = DynkinDiagram::parse("A3").unwrap();
    let w1 = d.default_word();
    let w2 = d.parse_word("3,1,2,1,3,2").unwrap();
    for a in [[1, 0, 2, 0, 1, 3], [0, 0, 0, 0, 0, 4], [2, 1, 1, 0, 3, 1]] {
        let x = LusztigData::new(w1.clone(), a.to_vec()).unwrap();
        let y = transport(&d, &x, &w2).unwrap();
        assert_eq!(y.weight(&d).unwrap(), x.weight(&d).unwrap());
        assert_eq!(transport(&d, &y, &w1).unwrap(), x);
    }
    let m = BraidMove { pos: 0, kind: MoveKind::Two };
    let x = LusztigData::new(w2.clone(), vec![4, 5, 0, 0, 0, 0]).unwrap();
    assert_eq!(pl_bijection(&d, m, &x).unwrap().a, vec![5, 4, 0, 0, 0, 0]);
}
