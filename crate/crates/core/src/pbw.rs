//! Root vectors, PBW monomials and expansions, and the piecewise-linear
//! bijections between Lusztig data of different reduced words.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactla::LaurentSolver;
use crate::qscalar::{laurent_gcd, quantum_factorial, LaurentPoly, RatFunc};
use crate::rootsystem::{data_weight, BraidMove, DynkinDiagram, MoveKind, ReducedWord, Root};
use crate::uqfull::QuantumGroup;
use crate::uqminus::{transpose, LaurentElement, Psi, UMinusElement};
use crate::{Error, Result};

/// Full reduced words are only accepted up to this rank unless overridden.
pub const DEFAULT_FULL_RANK_LIMIT: usize = 5;

/// A reduced word of `w0` with an exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LusztigData {
    pub word: ReducedWord,
    pub a: Vec<u32>,
}

impl LusztigData {
    pub fn new(word: ReducedWord, a: Vec<u32>) -> Result<Self> {
        if word.len() != a.len() {
            return Err(Error::Domain(format!("{} exponents for a word of length {}", a.len(), word.len())));
        }
        Ok(Self { word, a })
    }

    pub fn zero(word: ReducedWord) -> Self {
        let n = word.len();
        Self { word, a: vec![0; n] }
    }

    pub fn weight(&self, d: &DynkinDiagram) -> Result<Vec<i32>> {
        let betas = d.beta_sequence(&self.word)?;
        Ok(data_weight(&betas, &self.a))
    }
}

impl fmt::Display for LusztigData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct DataJson {
    word: Vec<usize>,
    a: Vec<u32>,
}

impl Serialize for LusztigData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DataJson { word: self.word.one_based(), a: self.a.clone() }.serialize(s)
    }
}

/// Root vectors `F_{beta_k}` of a reduced word.
#[derive(Clone, Debug)]
pub struct RootVectorTable {
    pub word: ReducedWord,
    pub betas: Vec<Root>,
    pub vectors: Vec<LaurentElement>,
}

impl RootVectorTable {
    pub fn element(&self, k: usize) -> UMinusElement {
        self.vectors[k].to_element(&LaurentPoly::one())
    }
}

/// Root vectors from the local three-term recursion: for non-simple `beta`,
/// move (without ever making `beta` the middle of a three-term move) to a word
/// where it is the middle of one, then
/// `F_beta = F_{beta_{m+1}} F_{beta_{m-1}} - q F_{beta_{m-1}} F_{beta_{m+1}}`.
pub fn root_vectors_local(d: &DynkinDiagram, w: &ReducedWord) -> Result<Vec<LaurentElement>> {
    let betas = d.beta_sequence(w)?;
    let mut memo: HashMap<(ReducedWord, usize), LaurentElement> = HashMap::new();
    (0..w.len()).map(|k| local_vector(d, w, k, &betas[k], &mut memo)).collect()
}

fn local_vector(
    d: &DynkinDiagram,
    w: &ReducedWord,
    k: usize,
    beta: &Root,
    memo: &mut HashMap<(ReducedWord, usize), LaurentElement>,
) -> Result<LaurentElement> {
    if let Some(i) = beta.is_simple() {
        return Ok(LaurentElement::word(vec![i]));
    }
    if let Some(x) = memo.get(&(w.clone(), k)) {
        return Ok(x.clone());
    }
    let mut seen = HashSet::from([(w.clone(), k)]);
    let mut queue = VecDeque::from([(w.clone(), k)]);
    while let Some((x, p)) = queue.pop_front() {
        if p >= 1 && d.move_is_legal(&x, BraidMove { pos: p - 1, kind: MoveKind::Three }) {
            let b = d.beta_sequence(&x)?;
            let left = local_vector(d, &x, p - 1, &b[p - 1], memo)?;
            let right = local_vector(d, &x, p + 1, &b[p + 1], memo)?;
            let v = right.mul(&left).add(&left.mul(&right).scale(&LaurentPoly::from_i64_terms(&[(1, -1)])));
            memo.insert((w.clone(), k), v.clone());
            return Ok(v);
        }
        for m in d.legal_moves(&x) {
            let np = match m.kind {
                MoveKind::Two if p == m.pos => m.pos + 1,
                MoveKind::Two if p == m.pos + 1 => m.pos,
                MoveKind::Three if p == m.pos + 1 => continue,
                MoveKind::Three if p == m.pos => m.pos + 2,
                MoveKind::Three if p == m.pos + 2 => m.pos,
                _ => p,
            };
            let y = d.apply_braid_move(&x, m)?;
            if seen.insert((y.clone(), np)) {
                queue.push_back((y, np));
            }
        }
    }
    Err(Error::Internal(format!("no three-term move exposes beta_{} of {w}", k + 1)))
}

/// Root vectors by the definition `T_{i_1} ... T_{i_{k-1}} F_{i_k}`.
pub fn root_vectors_braid(qg: &QuantumGroup, w: &ReducedWord) -> Result<Vec<UMinusElement>> {
    let l = w.letters();
    (0..l.len()).map(|k| qg.t_composite_f(&l[..k], l[k])).collect()
}

/// Root vectors computed both ways; disagreement is an internal error.
pub fn root_vectors(qg: &QuantumGroup, w: &ReducedWord) -> Result<RootVectorTable> {
    let d = qg.diagram();
    let betas = d.beta_sequence(w)?;
    let local = root_vectors_local(d, w)?;
    let braid = root_vectors_braid(qg, w)?;
    for (k, (a, b)) in local.iter().zip(&braid).enumerate() {
        let diff = &a.to_element(&LaurentPoly::one()) - b;
        if !qg.minus().is_zero(&diff)? {
            return Err(Error::Internal(format!("root vector {} of {w} differs between constructions", k + 1)));
        }
    }
    Ok(RootVectorTable { word: w.clone(), betas, vectors: local })
}

/// PBW monomials of one weight for a fixed word.
pub struct PbwSpace {
    pub nu: Vec<i32>,
    data: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    undivided: Vec<LaurentElement>,
    psi_cols: Vec<Vec<LaurentPoly>>,
    dens: Vec<LaurentPoly>,
    solver: LaurentSolver,
}

impl PbwSpace {
    pub fn data(&self) -> &[Vec<u32>] {
        &self.data
    }

    pub fn index_of(&self, a: &[u32]) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `psi` of the monomial with index `k`.
    pub fn psi_of(&self, k: usize) -> Psi {
        Psi { nu: self.nu.clone(), num: self.psi_cols[k].clone(), den: self.dens[k].clone() }
    }

    /// The monomial as `undivided / [a]!`.
    pub fn undivided(&self, k: usize) -> (&LaurentElement, &LaurentPoly) {
        (&self.undivided[k], &self.dens[k])
    }

    /// A common multiple of the monomial denominators.
    pub fn dens_lcm(&self) -> LaurentPoly {
        self.dens.iter().fold(LaurentPoly::one(), |acc, d| {
            let g = laurent_gcd(&acc, d);
            (&acc * d).div_exact(&g).unwrap()
        })
    }

    /// PBW coordinates of the element with the given `psi`.
    pub fn expand_psi(&self, psi: &Psi) -> Vec<RatFunc> {
        let x = self.solver.apply_scaled(&psi.num);
        let base = &self.solver.det().clone() * &psi.den;
        x.into_iter()
            .zip(&self.dens)
            .map(|(v, dk)| if v.is_zero() { RatFunc::zero() } else { RatFunc::new(&v * dk, base.clone()).unwrap() })
            .collect()
    }
}

/// The PBW basis attached to a reduced word of `w0`.
pub struct PbwBasis {
    qg: Arc<QuantumGroup>,
    word: ReducedWord,
    betas: Vec<Root>,
    roots: RootVectorTable,
    spaces: RwLock<HashMap<Vec<i32>, Arc<PbwSpace>>>,
}

impl PbwBasis {
    pub fn new(qg: Arc<QuantumGroup>, word: ReducedWord) -> Result<Self> {
        Self::with_rank_limit(qg, word, DEFAULT_FULL_RANK_LIMIT)
    }

    pub fn with_rank_limit(qg: Arc<QuantumGroup>, word: ReducedWord, limit: usize) -> Result<Self> {
        let d = qg.diagram();
        if d.rank() > limit {
            return Err(Error::Domain(format!("rank {} exceeds the full-word limit {limit}", d.rank())));
        }
        let word = d.full_word(word.letters().to_vec())?;
        let roots = root_vectors(&qg, &word)?;
        let betas = roots.betas.clone();
        Ok(Self { qg, word, betas, roots, spaces: RwLock::default() })
    }

    pub fn group(&self) -> &Arc<QuantumGroup> {
        &self.qg
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn betas(&self) -> &[Root] {
        &self.betas
    }

    pub fn root_vectors(&self) -> &RootVectorTable {
        &self.roots
    }

    pub fn data(&self, a: Vec<u32>) -> Result<LusztigData> {
        LusztigData::new(self.word.clone(), a)
    }

    pub fn space(&self, nu: &[i32]) -> Result<Arc<PbwSpace>> {
        self.qg.check_weight(nu)?;
        if let Some(x) = self.spaces.read().unwrap().get(nu) {
            return Ok(x.clone());
        }
        let d = self.qg.diagram();
        let data = d.partitions_along(&self.betas, nu);
        let dim = self.qg.weight_space(nu)?.dim();
        if data.len() != dim {
            return Err(Error::Internal(format!("{} PBW monomials at {nu:?}, expected {dim}", data.len())));
        }
        let mut undivided = Vec::with_capacity(data.len());
        let mut dens = Vec::with_capacity(data.len());
        for a in &data {
            let mut m = LaurentElement::one();
            let mut den = LaurentPoly::one();
            for (k, &x) in a.iter().enumerate() {
                if x > 0 {
                    m = m.mul(&self.roots.vectors[k].pow(x));
                    den = &den * &quantum_factorial(x);
                }
            }
            undivided.push(m);
            dens.push(den);
        }
        let psi_cols: Vec<Vec<LaurentPoly>> =
            undivided.iter().map(|m| self.qg.psi_laurent(nu, m)).collect::<Result<_>>()?;
        let solver = LaurentSolver::new(&transpose(&psi_cols))
            .ok_or_else(|| Error::Internal(format!("PBW monomials of {} at {nu:?} are dependent", self.word)))?;
        let index = data.iter().enumerate().map(|(k, a)| (a.clone(), k)).collect();
        let sp = Arc::new(PbwSpace { nu: nu.to_vec(), data, index, undivided, psi_cols, dens, solver });
        Ok(self.spaces.write().unwrap().entry(nu.to_vec()).or_insert(sp).clone())
    }

    fn weight_of_data(&self, a: &[u32]) -> Result<Vec<i32>> {
        if a.len() != self.betas.len() {
            return Err(Error::Domain(format!("{} exponents for a word of length {}", a.len(), self.betas.len())));
        }
        Ok(data_weight(&self.betas, a))
    }

    /// The ordered product of divided powers of root vectors.
    pub fn monomial(&self, a: &[u32]) -> Result<UMinusElement> {
        let nu = self.weight_of_data(a)?;
        if nu.iter().all(|&x| x == 0) {
            return Ok(UMinusElement::one());
        }
        let sp = self.space(&nu)?;
        let k = sp.index_of(a).unwrap();
        let (m, den) = sp.undivided(k);
        Ok(m.to_element(den))
    }

    /// `psi` of a PBW monomial.
    pub fn monomial_psi(&self, a: &[u32]) -> Result<Psi> {
        let nu = self.weight_of_data(a)?;
        let sp = self.space(&nu)?;
        Ok(sp.psi_of(sp.index_of(a).unwrap()))
    }

    /// Coordinates of a homogeneous element; only nonzero entries are kept.
    pub fn expand(&self, x: &UMinusElement) -> Result<BTreeMap<Vec<u32>, RatFunc>> {
        let n = self.qg.rank();
        let mut out = BTreeMap::new();
        for (nu, part) in x.components(n) {
            let sp = self.space(&nu)?;
            let psi = self.qg.psi(&nu, &part)?;
            for (a, c) in sp.data.iter().zip(sp.expand_psi(&psi)) {
                if !c.is_zero() {
                    out.insert(a.clone(), c);
                }
            }
        }
        Ok(out)
    }

    /// PBW coordinates of `bar(F^a)` in the order of the weight space.
    pub fn bar_coordinates(&self, a: &[u32]) -> Result<Vec<RatFunc>> {
        let nu = self.weight_of_data(a)?;
        let sp = self.space(&nu)?;
        let k = sp.index_of(a).unwrap();
        let (m, den) = sp.undivided(k);
        let mut barred = LaurentElement::zero();
        for (w, c) in m.terms() {
            barred.add_term(w.clone(), &c.bar());
        }
        // [n]! is bar-invariant, so the denominator is unchanged.
        let psi = Psi { nu: nu.clone(), num: self.qg.psi_laurent(&nu, &barred)?, den: den.clone() };
        Ok(sp.expand_psi(&psi))
    }
}

/// Lusztig's piecewise-linear change of data across one braid move.
pub fn pl_bijection(d: &DynkinDiagram, m: BraidMove, data: &LusztigData) -> Result<LusztigData> {
    let word = d.apply_braid_move(&data.word, m)?;
    let mut a = data.a.clone();
    let k = m.pos;
    match m.kind {
        MoveKind::Two => a.swap(k, k + 1),
        MoveKind::Three => {
            let (x, y, z) = (data.a[k] as i64, data.a[k + 1] as i64, data.a[k + 2] as i64);
            a[k] = y.max(y + z - x) as u32;
            a[k + 1] = x.min(z) as u32;
            a[k + 2] = y.max(y + x - z) as u32;
        }
    }
    let out = LusztigData { word, a };
    if out.weight(d)? != data.weight(d)? {
        return Err(Error::Internal(format!("move {m} changed the weight of {data}")));
    }
    Ok(out)
}

/// Carries data to another reduced word along a Matsumoto path.
pub fn transport(d: &DynkinDiagram, data: &LusztigData, w2: &ReducedWord) -> Result<LusztigData> {
    let path = d.matsumoto_path(&data.word, w2)?;
    transport_along(d, data, &path)
}

pub fn transport_along(d: &DynkinDiagram, data: &LusztigData, path: &[BraidMove]) -> Result<LusztigData> {
    let mut cur = data.clone();
    for &m in path {
        cur = pl_bijection(d, m, &cur)?;
    }
    Ok(cur)
}

/// Outcome of comparing two PBW bases across one braid move in one weight.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub word: Vec<usize>,
    pub moved: Vec<usize>,
    pub nu: Vec<i32>,
    pub size: usize,
    /// All transition coefficients (both directions) lie in `Z[q]`.
    pub integral: bool,
    /// The transition matrix is a permutation matrix modulo `q`.
    pub permutation_mod_q: bool,
    /// That permutation is the piecewise-linear bijection.
    pub matches_pl: bool,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.integral && self.permutation_mod_q && self.matches_pl
    }
}

fn in_zq(c: &RatFunc) -> bool {
    c.as_laurent().is_some_and(|p| p.is_polynomial())
}

/// Expands `B_{w'}` in `B_w` (and back) at weight `nu`, where `w' = m(w)`.
pub fn verify_lattice_move(b1: &PbwBasis, b2: &PbwBasis, m: BraidMove, nu: &[i32]) -> Result<LatticeReport> {
    let d = b1.group().diagram();
    if d.apply_braid_move(b1.word(), m)? != *b2.word() {
        return Err(Error::Domain(format!("{m} does not carry {} to {}", b1.word(), b2.word())));
    }
    let s1 = b1.space(nu)?;
    let s2 = b2.space(nu)?;
    let mut integral = true;
    let mut perm = true;
    let mut matches = true;
    // Columns: monomials of one basis expanded in the other.
    for (src, dst, forward) in [(&s2, &s1, true), (&s1, &s2, false)] {
        let mut hit = vec![0usize; dst.len()];
        for k in 0..src.len() {
            let coords = dst.expand_psi(&src.psi_of(k));
            integral &= coords.iter().all(in_zq);
            let ones: Vec<usize> = coords
                .iter()
                .enumerate()
                .filter(|(_, c)| c.regular_at_zero() && !c.value_at_zero().unwrap().is_zero())
                .map(|(j, _)| j)
                .collect();
            let unit = ones.len() == 1 && coords[ones[0]].value_at_zero().unwrap().is_one();
            perm &= unit;
            if unit {
                hit[ones[0]] += 1;
                // forward: F^{a'}_{w'} = F^{a}_w mod q, and pl(a) should be a'.
                let (a_src, a_dst) = (&src.data[k], &dst.data[ones[0]]);
                let expected = if forward {
                    pl_bijection(d, m, &LusztigData { word: b1.word().clone(), a: a_dst.clone() })?.a == *a_src
                } else {
                    pl_bijection(d, m, &LusztigData { word: b1.word().clone(), a: a_src.clone() })?.a == *a_dst
                };
                matches &= expected;
            }
        }
        perm &= hit.iter().all(|&h| h == 1);
    }
    Ok(LatticeReport {
        word: b1.word().one_based(),
        moved: b2.word().one_based(),
        nu: nu.to_vec(),
        size: s1.len(),
        integral,
        permutation_mod_q: perm,
        matches_pl: matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(t: &str, w: &str) -> (Arc<QuantumGroup>, PbwBasis) {
        let qg = Arc::new(QuantumGroup::new(DynkinDiagram::parse(t).unwrap(), 6));
        let word = qg.diagram().parse_word(w).unwrap();
        let b = PbwBasis::new(qg.clone(), word).unwrap();
        (qg, b)
    }

    fn el(terms: &[(&[usize], i32, i64)]) -> UMinusElement {
        UMinusElement::from_terms(
            terms.iter().map(|(w, e, c)| (w.to_vec(), RatFunc::from(LaurentPoly::from_i64_terms(&[(*e, *c)])))),
        )
    }

    #[test]
    fn root_vector_examples() {
        let (qg, b) = setup("A2", "1,2,1");
        let r = b.root_vectors();
        assert_eq!(r.element(0), UMinusElement::generator(0));
        assert_eq!(r.element(1), el(&[(&[1, 0], 0, 1), (&[0, 1], 1, -1)]));
        assert_eq!(r.element(2), UMinusElement::generator(1));
        let (qg3, b3) = setup("A3", "3,1,2,1,3,2");
        let r = b3.root_vectors();
        let f4 = el(&[(&[1, 2], 0, 1), (&[2, 1], 1, -1)]);
        assert!(qg3.minus().equal(&r.element(3), &f4).unwrap());
        let f1 = UMinusElement::generator(0);
        let f3 = &(&r.element(3) * &f1) - &(&f1 * &r.element(3)).scale(&RatFunc::q_pow(1));
        assert!(qg3.minus().equal(&r.element(2), &f3).unwrap());
        drop(qg);
    }

    #[test]
    fn expansion_examples() {
        let (_, b) = setup("A2", "1,2,1");
        let x = UMinusElement::word(vec![1, 0]);
        let c = b.expand(&x).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[&vec![0, 1, 0]], RatFunc::one());
        assert_eq!(c[&vec![1, 0, 1]], RatFunc::q_pow(1));
        assert_eq!(b.monomial(&[0, 0, 0]).unwrap(), UMinusElement::one());
        assert_eq!(b.monomial(&[1, 0, 1]).unwrap(), UMinusElement::word(vec![0, 1]));
        for a in [vec![2, 1, 0], vec![0, 2, 1], vec![1, 1, 1]] {
            let m = b.monomial(&a).unwrap();
            let c = b.expand(&m).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c[&a], RatFunc::one());
        }
    }

    #[test]
    fn pl_examples() {
        let d = DynkinDiagram::parse("A2").unwrap();
        let w = d.parse_word("1,2,1").unwrap();
        let m = BraidMove { pos: 0, kind: MoveKind::Three };
        let x = pl_bijection(&d, m, &LusztigData::new(w.clone(), vec![2, 0, 1]).unwrap()).unwrap();
        assert_eq!(x.a, vec![0, 1, 1]);
        for n in 0..5 {
            let x = pl_bijection(&d, m, &LusztigData::new(w.clone(), vec![n, 0, 0]).unwrap()).unwrap();
            assert_eq!(x.a, vec![0, 0, n]);
        }
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let x = LusztigData::new(w.clone(), vec![a, b, c]).unwrap();
                    let y = pl_bijection(&d, m, &x).unwrap();
                    assert_eq!(pl_bijection(&d, m, &y).unwrap(), x);
                }
            }
        }
        assert_eq!(transport(&d, &LusztigData::new(w.clone(), vec![1, 2, 3]).unwrap(), &w).unwrap().a, vec![1, 2, 3]);
    }

    #[test]
    fn lattice_move_a2() {
        let (qg, b1) = setup("A2", "1,2,1");
        let b2 = PbwBasis::new(qg.clone(), qg.diagram().parse_word("2,1,2").unwrap()).unwrap();
        let m = BraidMove { pos: 0, kind: MoveKind::Three };
        for nu in [vec![1, 1], vec![2, 1], vec![2, 2], vec![3, 2]] {
            let r = verify_lattice_move(&b1, &b2, m, &nu).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
