//! The bar involution in PBW coordinates and the canonical basis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::pbw::{transport, LusztigData, PbwBasis};
use crate::qscalar::{split_antisymmetric, LaurentPoly, RatFunc};
use crate::rootsystem::ReducedWord;
use crate::uqminus::{Psi, UMinusElement};
use crate::{Error, Result};

/// How the second (last-to-first) lexicographic order treats a larger entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondOrder {
    /// A larger `a_N` makes the data smaller, as in the first order.
    LargerIsSmaller,
    /// A larger `a_N` makes the data larger.
    LargerIsLarger,
}

fn first_less(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).find(|(x, y)| x != y).is_some_and(|(x, y)| x > y)
}

fn last_less(a: &[u32], b: &[u32], o: SecondOrder) -> bool {
    match a.iter().zip(b).rev().find(|(x, y)| x != y) {
        None => false,
        Some((x, y)) => match o {
            SecondOrder::LargerIsSmaller => x > y,
            SecondOrder::LargerIsLarger => x < y,
        },
    }
}

/// `a` strictly below `b` in both lexicographic orders (same weight assumed).
pub fn precedes(a: &[u32], b: &[u32]) -> bool {
    precedes_with(a, b, SecondOrder::LargerIsSmaller)
}

pub fn precedes_with(a: &[u32], b: &[u32], o: SecondOrder) -> bool {
    first_less(a, b) && last_less(a, b, o)
}

/// The partial order on the data of one weight.
#[derive(Clone, Debug)]
pub struct PrecOrder {
    pub nu: Vec<i32>,
    pub data: Vec<Vec<u32>>,
    pub second: SecondOrder,
}

impl PrecOrder {
    pub fn new(pbw: &PbwBasis, nu: &[i32]) -> Result<Self> {
        let sp = pbw.space(nu)?;
        Ok(Self { nu: nu.to_vec(), data: sp.data().to_vec(), second: SecondOrder::LargerIsSmaller })
    }

    pub fn with_second(mut self, o: SecondOrder) -> Self {
        self.second = o;
        self
    }

    pub fn less(&self, a: &[u32], b: &[u32]) -> bool {
        precedes_with(a, b, self.second)
    }

    pub fn minimal(&self) -> Vec<Vec<u32>> {
        self.data.iter().filter(|b| !self.data.iter().any(|a| self.less(a, b))).cloned().collect()
    }

    pub fn maximal(&self) -> Vec<Vec<u32>> {
        self.data.iter().filter(|a| !self.data.iter().any(|b| self.less(a, b))).cloned().collect()
    }

    /// Kahn's algorithm; among available data the lexicographically smallest
    /// goes first (largest with `reverse_ties`).
    pub fn linear_extension(&self, reverse_ties: bool) -> Vec<usize> {
        let n = self.data.len();
        let mut indeg = vec![0usize; n];
        let mut above: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if self.less(&self.data[i], &self.data[j]) {
                    above[i].push(j);
                    indeg[j] += 1;
                }
            }
        }
        // BTreeSet of (rank in tie order, index).
        let mut sorted: Vec<usize> = (0..n).collect();
        sorted.sort_by(|&x, &y| self.data[x].cmp(&self.data[y]));
        if reverse_ties {
            sorted.reverse();
        }
        let mut rank = vec![0usize; n];
        for (r, &k) in sorted.iter().enumerate() {
            rank[k] = r;
        }
        let mut ready: BTreeSet<(usize, usize)> = (0..n).filter(|&k| indeg[k] == 0).map(|k| (rank[k], k)).collect();
        let mut out = Vec::with_capacity(n);
        while let Some((_, k)) = ready.pop_first() {
            out.push(k);
            for &j in &above[k] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert((rank[j], j));
                }
            }
        }
        out
    }
}

/// A canonical basis element, indexed by Lusztig data of a fixed word.
#[derive(Clone, Debug)]
pub struct CanonicalElement {
    pub word: ReducedWord,
    pub data: LusztigData,
    /// PBW coordinates; the entry at `data` is 1.
    pub coords: BTreeMap<Vec<u32>, LaurentPoly>,
    pub element: UMinusElement,
    pub psi: Psi,
}

impl CanonicalElement {
    /// All coordinates other than the leading one lie in `q Z[q]`.
    pub fn congruent_mod_q(&self) -> bool {
        self.coords.iter().all(|(a, c)| {
            if *a == self.data.a {
                c.is_one()
            } else {
                c.min_exp().is_none_or(|e| e >= 1)
            }
        })
    }
}

impl Serialize for CanonicalElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Coord<'a> {
            a: &'a [u32],
            coeff: String,
        }
        let coords: Vec<Coord> = self.coords.iter().map(|(a, c)| Coord { a, coeff: c.to_string() }).collect();
        let mut st = s.serialize_struct("CanonicalElement", 3)?;
        st.serialize_field("data", &self.data)?;
        st.serialize_field("coords", &coords)?;
        st.serialize_field("element", &self.element)?;
        st.end()
    }
}

fn laurent(c: &RatFunc, what: &str) -> Result<LaurentPoly> {
    c.as_laurent().cloned().ok_or_else(|| Error::Internal(format!("{what}: coefficient {c} is not a Laurent polynomial")))
}

/// Whether `bar(F^a)` is Laurent and unit-triangular under the given
/// orientation of the second order.
pub fn bar_triangular_under(pbw: &PbwBasis, a: &[u32], o: SecondOrder) -> Result<bool> {
    let sp = pbw.space(&crate::rootsystem::data_weight(pbw.betas(), a))?;
    let coords = pbw.bar_coordinates(a)?;
    Ok(sp.data().iter().zip(&coords).all(|(d, c)| {
        if c.is_zero() {
            return true;
        }
        if !c.is_laurent() {
            return false;
        }
        if d.as_slice() == a {
            c.is_one()
        } else {
            precedes_with(d, a, o)
        }
    }))
}

/// `bar(F^a)` in PBW coordinates, checked to be unit-triangular with Laurent entries.
pub fn bar_in_pbw(pbw: &PbwBasis, a: &[u32]) -> Result<BTreeMap<Vec<u32>, LaurentPoly>> {
    let nu = crate::rootsystem::data_weight(pbw.betas(), a);
    let sp = pbw.space(&nu)?;
    let coords = pbw.bar_coordinates(a)?;
    let mut out = BTreeMap::new();
    for (d, c) in sp.data().iter().zip(coords) {
        if c.is_zero() {
            if d.as_slice() == a {
                return Err(Error::Internal(format!("bar of {a:?} has no leading term")));
            }
            continue;
        }
        let p = laurent(&c, "bar involution")?;
        if d.as_slice() == a {
            if !p.is_one() {
                return Err(Error::Internal(format!("bar of {a:?} has leading coefficient {p}")));
            }
        } else if !precedes(d, a) {
            return Err(Error::Internal(format!("bar of {a:?} has a term at {d:?}, which is not below it")));
        }
        out.insert(d.clone(), p);
    }
    Ok(out)
}

/// The canonical basis of weight `nu`, built along the default linear extension.
pub fn canonical_basis(pbw: &PbwBasis, nu: &[i32]) -> Result<Vec<CanonicalElement>> {
    let order = PrecOrder::new(pbw, nu)?;
    let ext = order.linear_extension(false);
    canonical_basis_along(pbw, nu, &ext)
}

/// Builds the canonical basis processing data in the order `ext` (indices
/// into the weight space). Output follows the weight-space order.
pub fn canonical_basis_along(pbw: &PbwBasis, nu: &[i32], ext: &[usize]) -> Result<Vec<CanonicalElement>> {
    let sp = pbw.space(nu)?;
    let n = sp.len();
    let qg = pbw.group();
    let mut built: Vec<Option<Vec<LaurentPoly>>> = vec![None; n];
    let mut done: Vec<usize> = Vec::with_capacity(n);
    for &k in ext {
        let a = &sp.data()[k];
        let bar = bar_in_pbw(pbw, a)?;
        let mut r = vec![LaurentPoly::zero(); n];
        for (d, c) in &bar {
            let j = sp.index_of(d).unwrap();
            if j != k {
                r[j] = c.clone();
            }
        }
        // bar(F^a) - F^a = sum p_{a'} b^{a'}; peel off from the top.
        let mut b = vec![LaurentPoly::zero(); n];
        b[k] = LaurentPoly::one();
        for &j in done.iter().rev() {
            let p = r[j].clone();
            if p.is_zero() {
                continue;
            }
            if !precedes(&sp.data()[j], a) {
                return Err(Error::Internal(format!("{:?} enters bar of {a:?} without preceding it", sp.data()[j])));
            }
            let f = split_antisymmetric(&p).map_err(|_| {
                Error::Internal(format!("correction {p} for {a:?} at {:?} is not bar-antisymmetric", sp.data()[j]))
            })?;
            let qf = f.shift(1);
            let bj = built[j].as_ref().unwrap();
            for t in 0..n {
                if !bj[t].is_zero() {
                    r[t] = &r[t] - &(&p * &bj[t]);
                    b[t] = &b[t] + &(&qf * &bj[t]);
                }
            }
        }
        if let Some(t) = r.iter().position(|x| !x.is_zero()) {
            return Err(Error::Internal(format!("bar of {a:?} leaves residue at {:?}", sp.data()[t])));
        }
        built[k] = Some(b);
        done.push(k);
    }
    if done.len() != n {
        return Err(Error::Internal(format!("linear extension covers {} of {n} data", done.len())));
    }
    let word = pbw.word().clone();
    let mut out = Vec::with_capacity(n);
    for (k, b) in built.into_iter().enumerate() {
        let b = b.unwrap();
        let mut coords = BTreeMap::new();
        let mut element = UMinusElement::zero();
        let mut num = vec![LaurentPoly::zero(); qg.weight_space(nu)?.dim()];
        let den = sp.dens_lcm();
        for (j, c) in b.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            coords.insert(sp.data()[j].clone(), c.clone());
            let (m, dj) = sp.undivided(j);
            element = &element + &m.to_element(dj).scale(&RatFunc::from(c.clone()));
            let factor = den.div_exact(dj).unwrap();
            let col = sp.psi_of(j).num;
            for (o, v) in num.iter_mut().zip(&col) {
                if !v.is_zero() {
                    *o += &(&(c * &factor) * v);
                }
            }
        }
        out.push(CanonicalElement {
            word: word.clone(),
            data: LusztigData::new(word.clone(), sp.data()[k].clone())?,
            coords,
            element,
            psi: Psi { nu: nu.to_vec(), num, den },
        });
    }
    Ok(out)
}

/// Canonical bases of a fixed word, cached per weight.
pub struct CanonicalBasis {
    pbw: Arc<PbwBasis>,
    cache: RwLock<HashMap<Vec<i32>, Arc<Vec<CanonicalElement>>>>,
}

impl CanonicalBasis {
    pub fn new(pbw: Arc<PbwBasis>) -> Self {
        Self { pbw, cache: RwLock::default() }
    }

    pub fn pbw(&self) -> &Arc<PbwBasis> {
        &self.pbw
    }

    pub fn elements(&self, nu: &[i32]) -> Result<Arc<Vec<CanonicalElement>>> {
        if let Some(x) = self.cache.read().unwrap().get(nu) {
            return Ok(x.clone());
        }
        let v = Arc::new(canonical_basis(&self.pbw, nu)?);
        Ok(self.cache.write().unwrap().entry(nu.to_vec()).or_insert(v).clone())
    }

    pub fn element(&self, a: &[u32]) -> Result<CanonicalElement> {
        let nu = crate::rootsystem::data_weight(self.pbw.betas(), a);
        let all = self.elements(&nu)?;
        Ok(all.iter().find(|b| b.data.a == a).cloned().unwrap())
    }

    /// Coordinates of a homogeneous element of weight `nu` in the canonical basis.
    pub fn coordinates(&self, nu: &[i32], x: &UMinusElement) -> Result<BTreeMap<Vec<u32>, RatFunc>> {
        let sp = self.pbw.space(nu)?;
        let basis = self.elements(nu)?;
        let psi = self.pbw.group().psi(nu, x)?;
        let mut c = sp.expand_psi(&psi);
        let order = PrecOrder::new(&self.pbw, nu)?;
        let mut out = BTreeMap::new();
        for &k in order.linear_extension(false).iter().rev() {
            let s = c[k].clone();
            if s.is_zero() {
                continue;
            }
            for (d, v) in &basis[k].coords {
                let j = sp.index_of(d).unwrap();
                c[j] = &c[j] - &(&s * &RatFunc::from(v.clone()));
            }
            out.insert(sp.data()[k].clone(), s);
        }
        Ok(out)
    }
}

/// Equality of two `psi` vectors of the same weight.
pub fn psi_equal(x: &Psi, y: &Psi) -> bool {
    x.nu == y.nu && x.num.iter().zip(&y.num).all(|(a, b)| (a * &y.den) == (b * &x.den))
}

/// Checks an element is bar-invariant with the exact zero test.
pub fn is_bar_invariant(pbw: &PbwBasis, b: &CanonicalElement) -> Result<bool> {
    pbw.group().minus().is_zero(&(&b.element.bar() - &b.element))
}

#[derive(Clone, Debug, Serialize)]
pub struct WordIndependenceReport {
    pub word1: Vec<usize>,
    pub word2: Vec<usize>,
    pub nu: Vec<i32>,
    pub size: usize,
    pub same_set: bool,
    pub matching_is_transport: bool,
}

impl WordIndependenceReport {
    pub fn passed(&self) -> bool {
        self.same_set && self.matching_is_transport
    }
}

/// Compares the canonical bases built from two words at one weight.
pub fn verify_word_independence(c1: &CanonicalBasis, c2: &CanonicalBasis, nu: &[i32]) -> Result<WordIndependenceReport> {
    let d = c1.pbw().group().diagram().clone();
    let b1 = c1.elements(nu)?;
    let b2 = c2.elements(nu)?;
    let mut used = vec![false; b2.len()];
    let mut same = b1.len() == b2.len();
    let mut transport_ok = true;
    for x in b1.iter() {
        match b2.iter().position(|y| psi_equal(&x.psi, &y.psi)) {
            Some(j) if !used[j] => {
                used[j] = true;
                transport_ok &= transport(&d, &x.data, c2.pbw().word())? == b2[j].data;
            }
            _ => same = false,
        }
    }
    Ok(WordIndependenceReport {
        word1: c1.pbw().word().one_based(),
        word2: c2.pbw().word().one_based(),
        nu: nu.to_vec(),
        size: b1.len(),
        same_set: same && used.iter().all(|&u| u),
        matching_is_transport: transport_ok,
    })
}

/// A product coefficient that is not a Laurent polynomial with nonnegative coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct PositivityWarning {
    pub left: LusztigData,
    pub right: LusztigData,
    pub target: Vec<u32>,
    pub coeff: String,
    pub reproducer: String,
}

fn positive(c: &RatFunc) -> bool {
    c.as_laurent().is_some_and(|p| p.terms().iter().all(|(_, x)| x.sign() != num_bigint::Sign::Minus))
}

/// Re-expands `b * b'` in the canonical basis for all pairs of the two weights.
/// Returns the number of structure constants examined and any warnings.
pub fn positivity_check(cb: &CanonicalBasis, nu1: &[i32], nu2: &[i32]) -> Result<(usize, Vec<PositivityWarning>)> {
    let nu: Vec<i32> = nu1.iter().zip(nu2).map(|(x, y)| x + y).collect();
    let left = cb.elements(nu1)?;
    let right = cb.elements(nu2)?;
    let pbw = cb.pbw();
    let mut count = 0;
    let mut warnings = Vec::new();
    for x in left.iter() {
        for y in right.iter() {
            let p = &x.element * &y.element;
            for (target, c) in cb.coordinates(&nu, &p)? {
                count += 1;
                if !positive(&c) {
                    warnings.push(PositivityWarning {
                        left: x.data.clone(),
                        right: y.data.clone(),
                        target: target.clone(),
                        coeff: c.to_string(),
                        reproducer: format!(
                            "type {} word {} : b{} * b{} at b{:?}",
                            pbw.group().diagram(),
                            pbw.word(),
                            x.data,
                            y.data,
                            target
                        ),
                    });
                }
            }
        }
    }
    Ok((count, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::DynkinDiagram;
    use crate::uqfull::QuantumGroup;

    fn basis(t: &str, w: &str, h: u32) -> PbwBasis {
        let qg = Arc::new(QuantumGroup::new(DynkinDiagram::parse(t).unwrap(), h));
        let word = qg.diagram().parse_word(w).unwrap();
        PbwBasis::new(qg, word).unwrap()
    }

    #[test]
    fn order_examples() {
        assert!(precedes(&[1, 0, 1], &[0, 1, 0]));
        assert!(!precedes(&[0, 1, 0], &[1, 0, 1]));
        assert!(!precedes_with(&[1, 0, 1], &[0, 1, 0], SecondOrder::LargerIsLarger));
        assert!(!precedes(&[1, 2], &[1, 2]));
    }

    #[test]
    fn a2_mixed_weight() {
        let b = basis("A2", "1,2,1", 4);
        let cb = canonical_basis(&b, &[1, 1]).unwrap();
        let f12 = UMinusElement::word(vec![0, 1]);
        let f21 = UMinusElement::word(vec![1, 0]);
        let m = b.group().minus();
        assert!(cb.iter().any(|x| m.equal(&x.element, &f12).unwrap()));
        assert!(cb.iter().any(|x| m.equal(&x.element, &f21).unwrap()));
        for x in cb.iter() {
            assert!(is_bar_invariant(&b, x).unwrap());
            assert!(x.congruent_mod_q());
        }
        let bar = bar_in_pbw(&b, &[0, 1, 0]).unwrap();
        assert_eq!(bar[&vec![1, 0, 1]], LaurentPoly::from_i64_terms(&[(1, 1), (-1, -1)]));
    }

    #[test]
    fn a2_divided_power_products() {
        let b = basis("A2", "1,2,1", 4);
        let cb = canonical_basis(&b, &[2, 1]).unwrap();
        let m = b.group().minus();
        let f1_2 = UMinusElement::divided_power(0, 2);
        let f2 = UMinusElement::generator(1);
        for x in [&f1_2 * &f2, &f2 * &f1_2] {
            assert!(cb.iter().any(|y| m.equal(&y.element, &x).unwrap()));
        }
    }

    #[test]
    fn sl2_divided_powers() {
        let b = basis("A1", "1", 6);
        for n in 1..5 {
            let cb = canonical_basis(&b, &[n as i32]).unwrap();
            assert_eq!(cb.len(), 1);
            assert!(b.group().minus().equal(&cb[0].element, &UMinusElement::divided_power(0, n)).unwrap());
        }
    }

    #[test]
    fn uniqueness_under_reordering() {
        let b = basis("A3", "1,2,3,1,2,1", 4);
        for nu in [vec![1, 2, 1], vec![2, 1, 1], vec![1, 1, 1]] {
            let order = PrecOrder::new(&b, &nu).unwrap();
            let x = canonical_basis_along(&b, &nu, &order.linear_extension(false)).unwrap();
            let y = canonical_basis_along(&b, &nu, &order.linear_extension(true)).unwrap();
            for (u, v) in x.iter().zip(&y) {
                assert_eq!(u.coords, v.coords);
            }
        }
    }
}
