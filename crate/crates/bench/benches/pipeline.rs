use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qcanon::canonical::canonical_basis;
use qcanon::crystal::crystal_graph;
use qcanon::pbw::{verify_lattice_move, PbwBasis};
use qcanon::uqfull::UqElement;
use qcanon_bench::basis;

fn weight_spaces(c: &mut Criterion) {
    c.bench_function("A3 weight space (1,2,1) from scratch", |b| {
        b.iter(|| {
            let pbw = basis("A3", 5);
            black_box(pbw.space(&[1, 2, 1]).unwrap().len())
        })
    });
}

fn canonical(c: &mut Criterion) {
    c.bench_function("A3 canonical basis (1,2,1)", |b| {
        b.iter(|| {
            let pbw = basis("A3", 5);
            black_box(canonical_basis(&pbw, &[1, 2, 1]).unwrap().len())
        })
    });
    c.bench_function("A2 canonical basis (3,3)", |b| {
        b.iter(|| {
            let pbw = basis("A2", 6);
            black_box(canonical_basis(&pbw, &[3, 3]).unwrap().len())
        })
    });
}

fn lattice(c: &mut Criterion) {
    let pbw = basis("A3", 5);
    let d = pbw.group().diagram().clone();
    let mv = d.legal_moves(pbw.word())[0];
    let other = PbwBasis::new(pbw.group().clone(), d.apply_braid_move(pbw.word(), mv).unwrap()).unwrap();
    c.bench_function("A3 lattice move at (1,2,1)", |b| {
        b.iter(|| black_box(verify_lattice_move(&pbw, &other, mv, &[1, 2, 1]).unwrap().passed()))
    });
}

fn braid(c: &mut Criterion) {
    let pbw = basis("D4", 5);
    let qg = pbw.group().clone();
    c.bench_function("D4 T1 T2 T1 (E3)", |b| {
        b.iter(|| {
            let x = UqElement::e(4, 2);
            let y = qg.braid_t(0, &qg.braid_t(1, &qg.braid_t(0, &x)));
            black_box(y.terms().len())
        })
    });
}

fn crystal(c: &mut Criterion) {
    let d = qcanon::DynkinDiagram::parse("A3").unwrap();
    let w = d.default_word();
    c.bench_function("A3 crystal graph depth 6", |b| b.iter(|| black_box(crystal_graph(&d, &w, 6).unwrap().vertices.len())));
}

criterion_group!(benches, weight_spaces, canonical, lattice, braid, crystal);
criterion_main!(benches);
