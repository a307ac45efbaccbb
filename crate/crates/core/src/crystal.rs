//! Crystal operators on Lusztig data, Kashiwara agreement, crystal graphs and
//! descent of the canonical basis to irreducible modules.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::canonical::{CanonicalBasis, CanonicalElement};
use crate::exactla::QMatrix;
use crate::pbw::{transport, LusztigData, PbwBasis};
use crate::qscalar::RatFunc;
use crate::rootsystem::{parse_int_vec, DynkinDiagram, ReducedWord};
use crate::uqfull::QuantumGroup;
use crate::uqminus::Psi;
use crate::{Error, Result};

/// `f_i` through a word starting with `i`.
pub fn crystal_f(d: &DynkinDiagram, i: usize, data: &LusztigData) -> Result<LusztigData> {
    crystal_f_via(d, i, data, &d.first_letter_word(i))
}

/// `f_i` through a chosen word whose first letter is `i`.
pub fn crystal_f_via(d: &DynkinDiagram, i: usize, data: &LusztigData, start: &ReducedWord) -> Result<LusztigData> {
    if start.letters().first() != Some(&i) {
        return Err(Error::Domain(format!("{start} does not start with {}", i + 1)));
    }
    let mut t = transport(d, data, start)?;
    t.a[0] += 1;
    transport(d, &t, &data.word)
}

/// Partial inverse of `f_i`; `None` when the transported first exponent is 0.
pub fn crystal_e(d: &DynkinDiagram, i: usize, data: &LusztigData) -> Result<Option<LusztigData>> {
    let mut t = transport(d, data, &d.first_letter_word(i))?;
    if t.a[0] == 0 {
        return Ok(None);
    }
    t.a[0] -= 1;
    Ok(Some(transport(d, &t, &data.word)?))
}

/// Depth of data: `sum a_k ht(beta_k)`.
pub fn depth_of(d: &DynkinDiagram, data: &LusztigData) -> Result<u32> {
    Ok(data.weight(d)?.iter().sum::<i32>() as u32)
}

/// `f_i` with the height bound enforced.
pub fn crystal_f_bounded(qg: &QuantumGroup, i: usize, data: &LusztigData) -> Result<LusztigData> {
    let d = qg.diagram();
    let h = depth_of(d, data)? + 1;
    if h > qg.height_bound() {
        return Err(Error::HeightBound { height: h, bound: qg.height_bound() });
    }
    crystal_f(d, i, data)
}

#[derive(Clone, Debug, Serialize)]
pub struct KashiwaraReport {
    pub i: usize,
    pub data: LusztigData,
    pub image: LusztigData,
    /// Nonzero entries of `F~_i(F^a) - F^{f_i a}` that are not in `q Q[q]_0`.
    pub residue: Vec<(Vec<u32>, String)>,
}

impl KashiwaraReport {
    pub fn passed(&self) -> bool {
        self.residue.is_empty()
    }
}

/// Compares Kashiwara's `F~_i` on a PBW monomial with `f_i` on its data, mod `q L(inf)`.
pub fn verify_kashiwara_agreement(pbw: &PbwBasis, i: usize, a: &[u32]) -> Result<KashiwaraReport> {
    let qg = pbw.group();
    let d = qg.diagram();
    let data = pbw.data(a.to_vec())?;
    let image = crystal_f(d, i, &data)?;
    let psi = pbw.monomial_psi(a)?;
    let up = qg.ftilde_psi(i, &psi)?;
    let sp = pbw.space(&up.nu)?;
    let mut coords = sp.expand_psi(&up);
    let k = sp.index_of(&image.a).ok_or_else(|| Error::Internal(format!("{image} has the wrong weight")))?;
    coords[k] = &coords[k] - &RatFunc::one();
    let residue = sp
        .data()
        .iter()
        .zip(&coords)
        .filter(|(_, c)| !c.is_zero() && !(c.regular_at_zero() && c.value_at_zero().unwrap().is_zero()))
        .map(|(a, c)| (a.clone(), c.to_string()))
        .collect();
    Ok(KashiwaraReport { i: i + 1, data, image, residue })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrystalVertex {
    pub data: LusztigData,
    pub depth: u32,
}

/// The crystal `B(inf)` truncated at a given depth, relative to one word.
#[derive(Clone, Debug, Serialize)]
pub struct CrystalGraph {
    pub word: ReducedWord,
    pub vertices: Vec<CrystalVertex>,
    /// `(source, target, i)` with 1-based `i`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl CrystalGraph {
    pub fn depth_counts(&self) -> Vec<usize> {
        let max = self.vertices.iter().map(|v| v.depth).max().unwrap_or(0);
        let mut out = vec![0; max as usize + 1];
        for v in &self.vertices {
            out[v.depth as usize] += 1;
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{k} [label=\"{}\"];", v.data);
        }
        for (x, y, i) in &self.edges {
            let _ = writeln!(s, "  v{x} -> v{y} [label=\"{i}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Breadth-first generation from the empty data.
pub fn crystal_graph(d: &DynkinDiagram, word: &ReducedWord, depth: u32) -> Result<CrystalGraph> {
    let word = d.full_word(word.letters().to_vec())?;
    let root = LusztigData::zero(word.clone());
    let mut index: HashMap<LusztigData, usize> = HashMap::from([(root.clone(), 0)]);
    let mut vertices = vec![CrystalVertex { data: root, depth: 0 }];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if vertices[v].depth >= depth {
            continue;
        }
        for i in 0..d.rank() {
            let t = crystal_f(d, i, &vertices[v].data)?;
            let w = match index.get(&t) {
                Some(&w) => w,
                None => {
                    let w = vertices.len();
                    index.insert(t.clone(), w);
                    vertices.push(CrystalVertex { data: t, depth: vertices[v].depth + 1 });
                    queue.push_back(w);
                    w
                }
            };
            edges.push((v, w, i + 1));
        }
    }
    Ok(CrystalGraph { word, vertices, edges })
}

/// A dominant weight `sum c_i omega_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighestWeight {
    pub c: Vec<u32>,
}

impl HighestWeight {
    pub fn new(d: &DynkinDiagram, c: Vec<u32>) -> Result<Self> {
        if c.len() != d.rank() {
            return Err(Error::Domain(format!("highest weight needs {} entries", d.rank())));
        }
        Ok(Self { c })
    }

    pub fn parse(d: &DynkinDiagram, s: &str) -> Result<Self> {
        let v = parse_int_vec(s)?;
        if v.iter().any(|&x| x < 0) {
            return Err(Error::Domain(format!("highest weight {s} is not dominant")));
        }
        Self::new(d, v.into_iter().map(|x| x as u32).collect())
    }
}

/// The weight space `(I_lambda)_{-nu}` spanned by `x F_i^{c_i+1}`.
pub struct IdealSpan {
    pub nu: Vec<i32>,
    columns: Vec<Vec<RatFunc>>,
    rank: usize,
    rows: usize,
}

impl IdealSpan {
    pub fn new(qg: &QuantumGroup, lam: &HighestWeight, nu: &[i32]) -> Result<Self> {
        Self::for_nodes(qg, lam, nu, &(0..qg.rank()).collect::<Vec<_>>())
    }

    /// Only the summands `U^- F_i^{c_i+1}` for `i` in `nodes`.
    pub fn for_nodes(qg: &QuantumGroup, lam: &HighestWeight, nu: &[i32], nodes: &[usize]) -> Result<Self> {
        let rows = qg.weight_space(nu)?.dim();
        let mut columns = Vec::new();
        for &i in nodes {
            let n = lam.c[i] as i32 + 1;
            if nu[i] < n {
                continue;
            }
            let mut mu = nu.to_vec();
            mu[i] -= n;
            let ws = qg.weight_space(&mu)?;
            for u in ws.basis_words() {
                let mut w = u.clone();
                w.extend(std::iter::repeat_n(i, n as usize));
                columns.push(qg.psi_word(&w)?.into_iter().map(RatFunc::from).collect());
            }
        }
        let rank = if columns.is_empty() { 0 } else { QMatrix::from_columns(rows, &columns)?.rank() };
        Ok(Self { nu: nu.to_vec(), columns, rank, rows })
    }

    pub fn dim(&self) -> usize {
        self.rank
    }

    /// Rank of the span together with extra columns.
    pub fn rank_with(&self, extra: &[Vec<RatFunc>]) -> Result<usize> {
        let mut cols = self.columns.clone();
        cols.extend(extra.iter().cloned());
        if cols.is_empty() {
            return Ok(0);
        }
        Ok(QMatrix::from_columns(self.rows, &cols)?.rank())
    }

    pub fn contains(&self, psi: &Psi) -> Result<bool> {
        if psi.is_zero() {
            return Ok(true);
        }
        let col: Vec<RatFunc> = psi.num.iter().cloned().map(RatFunc::from).collect();
        Ok(self.rank_with(&[col])? == self.rank)
    }
}

pub fn ideal_membership(qg: &QuantumGroup, b: &CanonicalElement, lam: &HighestWeight) -> Result<bool> {
    IdealSpan::new(qg, lam, &b.psi.nu)?.contains(&b.psi)
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentRow {
    pub nu: Vec<i32>,
    pub survivors: usize,
    pub multiplicity: u64,
    pub survivor_data: Vec<LusztigData>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DescentReport {
    pub lambda: Vec<u32>,
    pub rows: Vec<DescentRow>,
    pub total: usize,
    pub weyl_dimension: String,
    pub per_weight_ok: bool,
    pub total_ok: bool,
    /// Spans of `{a_N >= n}` and `U^- F_i^n` agree for words ending in `sigma(i)`.
    pub mechanism_ok: bool,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.per_weight_ok && self.total_ok && self.mechanism_ok
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,survivors,multiplicity\n");
        for r in &self.rows {
            let w: Vec<String> = r.nu.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "\"{}\",{},{}", w.join(","), r.survivors, r.multiplicity);
        }
        s
    }
}

/// Counts canonical elements outside `I_lambda` weight by weight.
pub fn descent_report(cb: &CanonicalBasis, lam: &HighestWeight) -> Result<DescentReport> {
    let pbw = cb.pbw();
    let qg = pbw.group();
    let d = qg.diagram().clone();
    let mult = d.freudenthal(&lam.c);
    let top = mult.keys().map(|nu| nu.iter().sum::<i32>() as u32).max().unwrap_or(0);
    let last = (top + 1).min(qg.height_bound());
    if top > qg.height_bound() {
        return Err(Error::HeightBound { height: top, bound: qg.height_bound() });
    }
    let mut rows = Vec::new();
    for h in 0..=last {
        for nu in d.weights_of_height(h) {
            let span = IdealSpan::new(qg, lam, &nu)?;
            let mut survivors = Vec::new();
            for b in cb.elements(&nu)?.iter() {
                if !span.contains(&b.psi)? {
                    survivors.push(b.data.clone());
                }
            }
            let m = mult.get(&nu).copied().unwrap_or(0);
            if m > 0 || !survivors.is_empty() {
                rows.push(DescentRow { nu, survivors: survivors.len(), multiplicity: m, survivor_data: survivors });
            }
        }
    }
    let total: usize = rows.iter().map(|r| r.survivors).sum();
    let dim = d.weyl_dimension(&lam.c);
    let per_weight_ok = rows.iter().all(|r| r.survivors as u64 == r.multiplicity);
    let total_ok = dim == total.into();
    let mechanism_ok = descent_mechanism(qg, lam, last.min(top + 1))?;
    Ok(DescentReport {
        lambda: lam.c.clone(),
        rows,
        total,
        weyl_dimension: dim.to_string(),
        per_weight_ok,
        total_ok,
        mechanism_ok,
    })
}

/// For each `i` and each weight up to `max_height`: with a word ending in
/// `sigma(i)`, the PBW monomials with `a_N >= c_i + 1` span `U^- F_i^{c_i+1}`.
pub fn descent_mechanism(qg: &Arc<QuantumGroup>, lam: &HighestWeight, max_height: u32) -> Result<bool> {
    let d = qg.diagram().clone();
    for i in 0..d.rank() {
        let pbw = PbwBasis::new(qg.clone(), d.last_letter_word(i))?;
        let n = lam.c[i] + 1;
        for h in n..=max_height {
            for nu in d.weights_of_height(h) {
                if nu[i] < n as i32 {
                    continue;
                }
                let span = IdealSpan::for_nodes(qg, lam, &nu, &[i])?;
                let sp = pbw.space(&nu)?;
                let cols: Vec<Vec<RatFunc>> = sp
                    .data()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| *a.last().unwrap() >= n)
                    .map(|(k, _)| sp.psi_of(k).num.into_iter().map(RatFunc::from).collect())
                    .collect();
                let own = if cols.is_empty() {
                    0
                } else {
                    QMatrix::from_columns(qg.weight_space(&nu)?.dim(), &cols)?.rank()
                };
                if own != cols.len() || own != span.dim() || span.rank_with(&cols)? != own {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `f_i` images computed through every word that starts with `i` (capped);
/// returns the distinct results.
pub fn crystal_f_all_choices(d: &DynkinDiagram, i: usize, data: &LusztigData, cap: usize) -> Result<Vec<LusztigData>> {
    let mut out: BTreeMap<Vec<u32>, LusztigData> = BTreeMap::new();
    for w in d.all_reduced_words(&data.word, cap)? {
        if w.letters().first() == Some(&i) {
            let r = crystal_f_via(d, i, data, &w)?;
            out.insert(r.a.clone(), r);
        }
    }
    Ok(out.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(d: &DynkinDiagram, w: &str, a: &[u32]) -> LusztigData {
        LusztigData::new(d.parse_word(w).unwrap(), a.to_vec()).unwrap()
    }

    #[test]
    fn f2_changes_three_exponents() {
        let d = DynkinDiagram::parse("A3").unwrap();
        let x = data(&d, "1,3,2,1,3,2", &[2, 3, 3, 2, 3, 2]);
        let y = crystal_f(&d, 1, &x).unwrap();
        assert_eq!(y.a, vec![2, 3, 2, 3, 4, 2]);
        assert_eq!(x.a.iter().zip(&y.a).filter(|(u, v)| u != v).count(), 3);
        assert_eq!(crystal_e(&d, 1, &y).unwrap().unwrap(), x);
    }

    #[test]
    fn f_on_leading_letter_is_increment() {
        let d = DynkinDiagram::parse("A3").unwrap();
        let x = data(&d, "1,2,3,1,2,1", &[2, 3, 1, 2, 4, 2]);
        assert_eq!(crystal_f(&d, 0, &x).unwrap().a, vec![3, 3, 1, 2, 4, 2]);
    }

    #[test]
    fn graph_counts() {
        let d = DynkinDiagram::parse("A2").unwrap();
        let g = crystal_graph(&d, &d.parse_word("1,2,1").unwrap(), 3).unwrap();
        let kostant: Vec<usize> =
            (0..=3).map(|h| d.weights_of_height(h).iter().map(|nu| d.kostant_partition(nu) as usize).sum()).collect();
        assert_eq!(g.depth_counts(), kostant);
        assert_eq!(kostant, vec![1, 2, 4, 6]);
        let d1 = DynkinDiagram::parse("A1").unwrap();
        let g = crystal_graph(&d1, &d1.parse_word("1").unwrap(), 4).unwrap();
        assert_eq!(g.edges.len(), 4);
        assert!(g.to_dot().starts_with("digraph"));
    }
}
