//! Batch verification suites bundling the invariants of every module.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canonical::{
    bar_in_pbw, bar_triangular_under, canonical_basis_along, is_bar_invariant, positivity_check,
    verify_word_independence, CanonicalBasis, PrecOrder, SecondOrder,
};
use crate::crystal::{crystal_e, descent_report, verify_kashiwara_agreement, HighestWeight};
use crate::exactla::QMatrix;
use crate::pbw::{verify_lattice_move, PbwBasis};
use crate::qscalar::{quantum_integer, LaurentPoly, RatFunc};
use crate::rootsystem::{DynkinDiagram, MoveKind, ReducedWord};
use crate::uqfull::{QuantumGroup, UqElement};
use crate::uqminus::{LaurentElement, UMinusElement};
use crate::{Error, Result};

pub const SUITES: &[&str] = &[
    "root-vectors",
    "braid-relations",
    "is-a-basis",
    "lattice",
    "thm-ut",
    "canonical",
    "word-independence",
    "crystal",
    "descent",
    "positivity",
    "random-relations",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub diagram: DynkinDiagram,
    /// Reference word; the default word of the diagram when absent.
    pub word: Option<ReducedWord>,
    pub max_height: u32,
    pub seed: u64,
    pub samples: usize,
    /// Maximum number of reduced words visited by multi-word suites.
    pub word_cap: usize,
    pub full_rank_limit: usize,
    pub verbose: bool,
}

impl SuiteConfig {
    pub fn new(diagram: DynkinDiagram) -> Self {
        Self {
            diagram,
            word: None,
            max_height: 4,
            seed: 0,
            samples: 20,
            word_cap: 16,
            full_rank_limit: crate::pbw::DEFAULT_FULL_RANK_LIMIT,
            verbose: false,
        }
    }

    pub fn reference_word(&self) -> ReducedWord {
        self.word.clone().unwrap_or_else(|| self.diagram.default_word())
    }

    fn group(&self, extra: u32) -> Arc<QuantumGroup> {
        let top = self.diagram.positive_roots().iter().map(|r| r.height() as u32).max().unwrap_or(1);
        Arc::new(QuantumGroup::new(self.diagram.clone(), (self.max_height + extra).max(top)))
    }

    fn pbw(&self, qg: &Arc<QuantumGroup>, w: ReducedWord) -> Result<Arc<PbwBasis>> {
        Ok(Arc::new(PbwBasis::with_rank_limit(qg.clone(), w, self.full_rank_limit)?))
    }

    fn words(&self) -> Result<Vec<ReducedWord>> {
        let r = self.reference_word();
        let mut all = self.diagram.all_reduced_words(&r, self.word_cap)?;
        all.retain(|w| *w != r);
        all.insert(0, r);
        all.truncate(self.word_cap.max(1));
        Ok(all)
    }

    fn weights(&self, from: u32) -> Vec<Vec<i32>> {
        (from..=self.max_height).flat_map(|h| self.diagram.weights_of_height(h)).collect()
    }

    fn status(&self, msg: &str) {
        if self.verbose {
            eprintln!("[{}] {msg}", self.diagram);
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub diagram: String,
    pub max_height: u32,
    pub checks: usize,
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, cfg: &SuiteConfig) -> Self {
        Self { suite: name.into(), diagram: cfg.diagram.to_string(), max_height: cfg.max_height, ..Self::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    cfg.status(&format!("suite {name}"));
    let r = match name {
        "root-vectors" => root_vectors(cfg),
        "braid-relations" => braid_relations(cfg),
        "is-a-basis" => is_a_basis(cfg),
        "lattice" => lattice(cfg),
        "thm-ut" => thm_ut(cfg),
        "canonical" => canonical(cfg),
        "word-independence" => word_independence(cfg),
        "crystal" => crystal(cfg),
        "descent" => descent(cfg),
        "positivity" => positivity(cfg),
        "random-relations" => random_relations(cfg),
        _ => return Err(Error::Domain(format!("unknown suite {name}; known: {}", SUITES.join(", ")))),
    }?;
    cfg.status(&format!(
        "suite {name}: {} checks, {} failures, {:.2?}",
        r.checks,
        r.failures.len(),
        start.elapsed()
    ));
    Ok(r)
}

fn neg_q() -> LaurentPoly {
    LaurentPoly::from_i64_terms(&[(1, -1)])
}

fn root_vectors(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("root-vectors", cfg);
    let qg = cfg.group(0);
    let d = qg.diagram().clone();
    let m = qg.minus();
    let w = cfg.reference_word();
    let base = cfg.pbw(&qg, w.clone())?;
    let table = base.root_vectors();
    for (k, beta) in table.betas.iter().enumerate() {
        let v = table.element(k);
        rep.check(v.weight(d.rank()).as_deref() == Some(&beta.0[..]), || format!("F_beta{} has the wrong weight", k + 1));
        if let Some(i) = beta.is_simple() {
            rep.check(v == UMinusElement::generator(i), || format!("F_beta{} is not F_{}", k + 1, i + 1));
        }
    }
    for mv in d.legal_moves(&w) {
        let moved = cfg.pbw(&qg, d.apply_braid_move(&w, mv)?)?;
        let t2 = moved.root_vectors();
        let k = mv.pos;
        let perm = |p: usize| match mv.kind {
            MoveKind::Two if p == k => k + 1,
            MoveKind::Two if p == k + 1 => k,
            MoveKind::Three if p == k => k + 2,
            MoveKind::Three if p == k + 2 => k,
            _ => p,
        };
        for p in 0..w.len() {
            if mv.kind == MoveKind::Three && p == k + 1 {
                continue;
            }
            let same = m.equal(&table.element(p), &t2.element(perm(p)))?;
            rep.check(same, || format!("{mv}: root vector at {} changed", p + 1));
        }
        if mv.kind == MoveKind::Three {
            let (a, b) = (&table.vectors[k], &table.vectors[k + 2]);
            let x = b.mul(a).add(&a.mul(b).scale(&neg_q()));
            let ok = m.equal(&x.to_element(&LaurentPoly::one()), &table.element(k + 1))?;
            rep.check(ok, || format!("{mv}: three-term identity fails"));
        }
    }
    // Convexity: F_{beta_k} F_{beta_j} expands on data supported in [j, k].
    for j in 0..w.len() {
        for k in j + 1..w.len() {
            let nu: Vec<i32> = table.betas[j].0.iter().zip(&table.betas[k].0).map(|(x, y)| x + y).collect();
            if nu.iter().sum::<i32>() as u32 > cfg.max_height {
                continue;
            }
            let x = &table.element(k) * &table.element(j);
            let c = base.expand(&x)?;
            let ok = c.keys().all(|a| a.iter().enumerate().all(|(p, &e)| e == 0 || (j..=k).contains(&p)));
            rep.check(ok, || format!("F_beta{} F_beta{} leaves the interval", k + 1, j + 1));
        }
    }
    Ok(rep)
}

fn braid_relations(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("braid-relations", cfg);
    let qg = cfg.group(0);
    let d = qg.diagram().clone();
    let n = d.rank();
    let gens: Vec<UqElement> = (0..n)
        .flat_map(|k| [UqElement::e(n, k), UqElement::f(n, k), UqElement::k(n, k, 1)])
        .collect();
    let apply = |word: &[usize], g: &UqElement| word.iter().rev().fold(g.clone(), |x, &i| qg.braid_t(i, &x));
    for i in 0..n {
        for j in i + 1..n {
            let (lhs, rhs) = if d.adjacent(i, j) { (vec![i, j, i], vec![j, i, j]) } else { (vec![i, j], vec![j, i]) };
            for g in &gens {
                let x = &apply(&lhs, g) - &apply(&rhs, g);
                let h = x.e_height() as u32 + 1;
                let ok = qg.equals_zero_generic_verma(&x, h)?;
                rep.check(ok, || format!("T{}T{}.. != T{}T{}.. on {g}", i + 1, j + 1, j + 1, i + 1));
            }
        }
    }
    for i in 0..n {
        for g in &gens {
            let x = &qg.braid_t(i, &qg.braid_t_inv(i, g)) - g;
            rep.check(qg.is_zero(&x)?, || format!("T{0} T{0}^-1 != id on {g}", i + 1));
        }
    }
    Ok(rep)
}

fn is_a_basis(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("is-a-basis", cfg);
    let qg = cfg.group(0);
    let pbw = cfg.pbw(&qg, cfg.reference_word())?;
    let d = qg.diagram().clone();
    for nu in cfg.weights(1) {
        let k = d.kostant_partition(&nu) as usize;
        let dim = qg.weight_space(&nu)?.dim();
        rep.check(dim == k, || format!("{nu:?}: word space rank {dim}, Kostant {k}"));
        // Construction fails unless the count matches and the matrix is nonsingular.
        let ok = match pbw.space(&nu) {
            Ok(sp) => sp.len() == k,
            Err(e) => {
                rep.notes.push(e.to_string());
                false
            }
        };
        rep.check(ok, || format!("{nu:?}: PBW monomials are not a basis"));
    }
    Ok(rep)
}

fn lattice(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("lattice", cfg);
    let qg = cfg.group(0);
    let d = qg.diagram().clone();
    let mut bases: HashMap<ReducedWord, Arc<PbwBasis>> = HashMap::new();
    let mut get = |w: &ReducedWord| -> Result<Arc<PbwBasis>> {
        if let Some(b) = bases.get(w) {
            return Ok(b.clone());
        }
        let b = cfg.pbw(&qg, w.clone())?;
        bases.insert(w.clone(), b.clone());
        Ok(b)
    };
    let weights = cfg.weights(1);
    for w in cfg.words()? {
        cfg.status(&format!("lattice moves from {w}"));
        let b1 = get(&w)?;
        for mv in d.legal_moves(&w) {
            let b2 = get(&d.apply_braid_move(&w, mv)?)?;
            for nu in &weights {
                let r = verify_lattice_move(&b1, &b2, mv, nu)?;
                rep.check(r.passed(), || format!("{w} {mv} at {nu:?}: {r:?}"));
            }
            // Span of the monomials other than F_beta^(n) is unchanged when F_beta is fixed.
            for (p, beta) in b1.betas().iter().enumerate() {
                if mv.kind == MoveKind::Three && p == mv.pos + 1 {
                    continue;
                }
                for n in 1.. {
                    let nu: Vec<i32> = beta.0.iter().map(|x| x * n).collect();
                    if nu.iter().sum::<i32>() as u32 > cfg.max_height {
                        break;
                    }
                    let ok = complement_span_fixed(&b1, &b2, &nu, p, n as u32)?;
                    rep.check(ok, || format!("{w} {mv}: span without F_beta{}^({n}) changed", p + 1));
                }
            }
        }
    }
    Ok(rep)
}

fn complement_span_fixed(b1: &PbwBasis, b2: &PbwBasis, nu: &[i32], p: usize, n: u32) -> Result<bool> {
    let sp1 = b1.space(nu)?;
    let sp2 = b2.space(nu)?;
    let power = sp1
        .data()
        .iter()
        .position(|a| a.iter().enumerate().all(|(k, &x)| if k == p { x == n } else { x == 0 }))
        .unwrap();
    // F_beta is the same element in both words, so exclude its power by value.
    let psi_power = sp1.psi_of(power);
    let col = |sp: &crate::pbw::PbwSpace, k: usize| -> Vec<RatFunc> {
        sp.psi_of(k).num.into_iter().map(RatFunc::from).collect()
    };
    let c1: Vec<Vec<RatFunc>> = (0..sp1.len()).filter(|&k| k != power).map(|k| col(&sp1, k)).collect();
    let c2: Vec<Vec<RatFunc>> = (0..sp2.len())
        .filter(|&k| !crate::canonical::psi_equal(&sp2.psi_of(k), &psi_power))
        .map(|k| col(&sp2, k))
        .collect();
    if c1.len() != c2.len() {
        return Ok(false);
    }
    if c1.is_empty() {
        return Ok(true);
    }
    let rows = b1.group().weight_space(nu)?.dim();
    let r1 = QMatrix::from_columns(rows, &c1)?.rank();
    let mut all = c1.clone();
    all.extend(c2);
    Ok(r1 == c1.len() && QMatrix::from_columns(rows, &all)?.rank() == r1)
}

fn thm_ut(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("thm-ut", cfg);
    let qg = cfg.group(0);
    let pbw = cfg.pbw(&qg, cfg.reference_word())?;
    let mut other_orientation_failures = 0;
    for nu in cfg.weights(1) {
        let order = PrecOrder::new(&pbw, &nu)?;
        for a in &order.data {
            let r = bar_in_pbw(&pbw, a);
            rep.check(r.is_ok(), || format!("{a:?}: {}", r.as_ref().unwrap_err()));
            if !bar_triangular_under(&pbw, a, SecondOrder::LargerIsLarger)? {
                other_orientation_failures += 1;
            }
        }
        // Minimal elements are the data supported on simple roots.
        let simple: Vec<Vec<u32>> = order
            .data
            .iter()
            .filter(|a| a.iter().zip(pbw.betas()).all(|(&x, b)| x == 0 || b.is_simple().is_some()))
            .cloned()
            .collect();
        let mut minimal = order.minimal();
        minimal.sort();
        let mut simple_sorted = simple.clone();
        simple_sorted.sort();
        rep.check(minimal == simple_sorted, || format!("{nu:?}: minimal data {minimal:?} vs {simple:?}"));
        let maximal = order.maximal();
        for a in &order.data {
            if a.iter().filter(|&&x| x > 0).count() == 1 {
                rep.check(maximal.contains(a), || format!("{a:?} is not maximal"));
            }
        }
    }
    rep.notes.push(format!(
        "with the second order reversed (larger a_N is larger), {other_orientation_failures} bar expansions are not triangular"
    ));
    Ok(rep)
}

fn canonical(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("canonical", cfg);
    let qg = cfg.group(0);
    let pbw = cfg.pbw(&qg, cfg.reference_word())?;
    for nu in cfg.weights(1) {
        let order = PrecOrder::new(&pbw, &nu)?;
        let basis = canonical_basis_along(&pbw, &nu, &order.linear_extension(false))?;
        let alt = canonical_basis_along(&pbw, &nu, &order.linear_extension(true))?;
        rep.check(basis.len() == order.data.len(), || format!("{nu:?}: wrong size"));
        for (b, c) in basis.iter().zip(&alt) {
            rep.check(is_bar_invariant(&pbw, b)?, || format!("{} is not bar-invariant", b.data));
            rep.check(b.congruent_mod_q(), || format!("{} is not congruent to F^a mod qL", b.data));
            rep.check(b.coords == c.coords, || format!("{} depends on the linear extension", b.data));
            let lower = b.coords.keys().all(|a| *a == b.data.a || crate::canonical::precedes(a, &b.data.a));
            rep.check(lower, || format!("{} is not unit-triangular", b.data));
        }
    }
    Ok(rep)
}

fn word_independence(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("word-independence", cfg);
    let qg = cfg.group(0);
    let words = cfg.words()?;
    let reference = CanonicalBasis::new(cfg.pbw(&qg, words[0].clone())?);
    rep.notes.push(format!("{} reduced words", words.len()));
    let weights = cfg.weights(1);
    for w in &words[1..] {
        cfg.status(&format!("canonical basis of {w}"));
        let other = CanonicalBasis::new(cfg.pbw(&qg, w.clone())?);
        for nu in &weights {
            let r = verify_word_independence(&reference, &other, nu)?;
            rep.check(r.passed(), || format!("{r:?}"));
        }
    }
    Ok(rep)
}

fn crystal(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("crystal", cfg);
    let qg = cfg.group(1);
    let d = qg.diagram().clone();
    let n = d.rank();
    let pbw = cfg.pbw(&qg, cfg.reference_word())?;
    for nu in cfg.weights(0) {
        let data = if nu.iter().all(|&x| x == 0) {
            vec![vec![0; pbw.betas().len()]]
        } else {
            pbw.space(&nu)?.data().to_vec()
        };
        for i in 0..n {
            let mut images = std::collections::HashSet::new();
            for a in &data {
                let r = verify_kashiwara_agreement(&pbw, i, a)?;
                rep.check(r.passed(), || format!("f_{} on {:?}: {:?}", i + 1, a, r.residue));
                let back = crystal_e(&d, i, &r.image)?;
                rep.check(back.as_ref() == Some(&r.data), || format!("e_{} f_{} {:?} != id", i + 1, i + 1, a));
                rep.check(images.insert(r.image.a.clone()), || format!("f_{} not injective at {nu:?}", i + 1));
            }
        }
    }
    // For a word starting with i, monomials with a_1 = 0 span ker e'_i.
    for i in 0..n {
        let w = d.first_letter_word(i);
        let b = cfg.pbw(&qg, w)?;
        for nu in cfg.weights(1) {
            let sp = b.space(&nu)?;
            let mut count = 0;
            for (k, a) in sp.data().iter().enumerate() {
                if a[0] != 0 {
                    continue;
                }
                count += 1;
                let (m, den) = sp.undivided(k);
                let e = m.to_element(den).eprime(&d, i);
                rep.check(qg.minus().is_zero(&e)?, || format!("{a:?} is not killed by e'_{}", i + 1));
            }
            let kernel = qg.eprime_kernel(i, &nu)?.len();
            rep.check(kernel == count, || format!("{nu:?}: ker e'_{} has dim {kernel}, found {count}", i + 1));
        }
        // E_i F_beta_k - F_beta_k E_i lies in U^- K_i.
        let tab = b.root_vectors();
        for k in 1..tab.vectors.len() {
            let f = UqElement::from_minus(n, &tab.element(k));
            let ei = UqElement::e(n, i);
            let c = &qg.multiply(&ei, &f) - &qg.multiply(&f, &ei);
            let mut ki = vec![0; n];
            ki[i] = 1;
            let mut rest = c.clone();
            for ((fw, kv, ew), v) in c.terms() {
                if *kv == ki && ew.is_empty() {
                    rest.add_term((fw.clone(), kv.clone(), ew.clone()), &-v);
                }
            }
            rep.check(qg.is_zero(&rest)?, || format!("[E_{}, F_beta{}] leaves U^- K_{}", i + 1, k + 1, i + 1));
        }
    }
    Ok(rep)
}

fn descent(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("descent", cfg);
    let qg = cfg.group(1);
    let d = qg.diagram().clone();
    let n = d.rank();
    let cb = CanonicalBasis::new(cfg.pbw(&qg, cfg.reference_word())?);
    let mut lambdas: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u32).collect()).collect();
    lambdas.push(vec![1; n]);
    for c in lambdas {
        let top = d.freudenthal(&c).keys().map(|nu| nu.iter().sum::<i32>() as u32).max().unwrap_or(0);
        if top + 1 > qg.height_bound() {
            rep.notes.push(format!("lambda {c:?} skipped: needs height {}", top + 1));
            continue;
        }
        let lam = HighestWeight::new(&d, c.clone())?;
        let r = descent_report(&cb, &lam)?;
        rep.check(r.passed(), || format!("lambda {c:?}: {r:?}"));
        rep.notes.push(format!("lambda {c:?}: {} survivors, dim {}", r.total, r.weyl_dimension));
    }
    Ok(rep)
}

fn positivity(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("positivity", cfg);
    let qg = cfg.group(0);
    let d = qg.diagram().clone();
    let cb = CanonicalBasis::new(cfg.pbw(&qg, cfg.reference_word())?);
    let limit = cfg.max_height.min(4);
    for h1 in 1..limit {
        for h2 in 1..=limit - h1 {
            for nu1 in d.weights_of_height(h1) {
                for nu2 in d.weights_of_height(h2) {
                    let (count, warnings) = positivity_check(&cb, &nu1, &nu2)?;
                    rep.checks += count;
                    rep.warnings.extend(warnings.into_iter().map(|w| format!("{}: {}", w.reproducer, w.coeff)));
                }
            }
        }
    }
    Ok(rep)
}

/// Random combinations of Serre relators must vanish; adding a word must not.
fn random_relations(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("random-relations", cfg);
    let qg = cfg.group(0);
    let d = qg.diagram().clone();
    let n = d.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let two = quantum_integer(2)?;
    for _ in 0..cfg.samples {
        let (i, j) = pairs[rng.random_range(0..pairs.len())];
        let relator = if d.adjacent(i, j) {
            let mut r = LaurentElement::zero();
            r.add_term(vec![i, i, j], &LaurentPoly::one());
            r.add_term(vec![i, j, i], &-&two);
            r.add_term(vec![j, i, i], &LaurentPoly::one());
            r
        } else {
            let mut r = LaurentElement::zero();
            r.add_term(vec![i, j], &LaurentPoly::one());
            r.add_term(vec![j, i], &-&LaurentPoly::one());
            r
        };
        let rel_height = if d.adjacent(i, j) { 3 } else { 2 };
        let extra_len = rng.random_range(0..=(cfg.max_height.saturating_sub(rel_height)).min(2)) as usize;
        let letters: Vec<usize> = (0..extra_len).map(|_| rng.random_range(0..n)).collect();
        let mut x = LaurentElement::zero();
        for _ in 0..3 {
            let mut perm = letters.clone();
            for k in (1..perm.len()).rev() {
                perm.swap(k, rng.random_range(0..=k));
            }
            let cut = rng.random_range(0..=perm.len());
            let u = LaurentElement::word(perm[..cut].to_vec());
            let v = LaurentElement::word(perm[cut..].to_vec());
            let c = LaurentPoly::from_i64_terms(&[(rng.random_range(-2..=2), rng.random_range(-3..=3))]);
            x = x.add(&u.mul(&relator).mul(&v).scale(&c));
        }
        let xe = x.to_element(&LaurentPoly::one());
        rep.check(qg.minus().is_zero(&xe)?, || format!("relator combination {xe} is not zero"));
        let mut nu = crate::uqminus::weight_of(n, &letters);
        nu[i] += if d.adjacent(i, j) { 2 } else { 1 };
        nu[j] += 1;
        let phi = qg.phi_coordinates(&nu, &xe)?;
        rep.check(phi.values().all(|c| c.is_zero()), || format!("{xe} has nonzero coordinates"));
        let ws = qg.weight_space(&nu)?;
        let w = ws.words()[rng.random_range(0..ws.words().len())].clone();
        let y = &xe + &UMinusElement::word(w.clone());
        rep.check(!qg.minus().is_zero(&y)?, || format!("{xe} + F_{w:?} tested zero"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_domain_error() {
        let cfg = SuiteConfig::new(DynkinDiagram::parse("A2").unwrap());
        assert!(matches!(run_suite("nope", &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn small_suites_pass_on_a2() {
        let mut cfg = SuiteConfig::new(DynkinDiagram::parse("A2").unwrap());
        cfg.max_height = 3;
        for s in SUITES {
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.checks > 0, "{s}");
        }
    }
}
