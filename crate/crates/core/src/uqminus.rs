//! The negative part `U_q^-` on word coordinates.
//!
//! Elements are finite combinations of words in the generators `F_i`. Words
//! are not a basis, so equality is decided semantically: an element of weight
//! `-nu` is zero exactly when all iterated `e'_i` derivatives of full length
//! vanish. [`Algebra`] caches, per weight, a set of target words whose
//! derivatives already separate the whole weight space.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::exactla::{common_denominator, modp, LaurentSolver, QMatrix};
use crate::qscalar::{quantum_factorial, quantum_integer, LaurentPoly, RatFunc};
use crate::rootsystem::DynkinDiagram;
use crate::{Error, Result};

/// A word in the generators `F_i` (0-based nodes).
pub type FWord = Vec<usize>;

/// Letter counts of a word, i.e. `nu` where the word has weight `-nu`.
pub fn weight_of(rank: usize, w: &[usize]) -> Vec<i32> {
    let mut v = vec![0; rank];
    for &l in w {
        v[l] += 1;
    }
    v
}

/// A combination of words with Laurent coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentElement {
    terms: BTreeMap<FWord, LaurentPoly>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: FWord) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, LaurentPoly::one());
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<FWord, LaurentPoly> {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: FWord, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, &(x * y));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// The element `self / den`.
    pub fn to_element(&self, den: &LaurentPoly) -> UMinusElement {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), RatFunc::new(c.clone(), den.clone()).expect("nonzero denominator")))
            .collect();
        UMinusElement { terms }
    }
}

/// An element of `U_q^-`: a finite map from words to coefficients in `Q(q)`.
///
/// Equality of the term maps is stronger than equality in the algebra; use
/// [`Algebra::is_zero`] on a difference for the latter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UMinusElement {
    terms: BTreeMap<FWord, RatFunc>,
}

impl UMinusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Self::word(vec![i])
    }

    pub fn word(w: FWord) -> Self {
        Self::from_terms([(w, RatFunc::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (FWord, RatFunc)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in it {
            out.add_term(w, &c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<FWord, RatFunc> {
        &self.terms
    }

    /// True when no term is stored (a sufficient, not necessary, test for zero).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: FWord, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, &(x * y));
            }
        }
        out
    }

    /// `F_i^n / [n]!`.
    pub fn divided_power(i: usize, n: u32) -> Self {
        let c = RatFunc::new(LaurentPoly::one(), quantum_factorial(n)).expect("nonzero");
        Self::from_terms([(vec![i; n as usize], c)])
    }

    /// The bar involution fixes every word and inverts `q`.
    pub fn bar(&self) -> Self {
        Self { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.bar())).collect() }
    }

    /// Splits into homogeneous components keyed by `nu` (weight `-nu`).
    pub fn components(&self, rank: usize) -> BTreeMap<Vec<i32>, UMinusElement> {
        let mut out: BTreeMap<Vec<i32>, UMinusElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(weight_of(rank, w)).or_default().add_term(w.clone(), c);
        }
        out
    }

    /// `nu` for a homogeneous nonzero element.
    pub fn weight(&self, rank: usize) -> Option<Vec<i32>> {
        let mut it = self.terms.keys().map(|w| weight_of(rank, w));
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    /// Writes the element as `numerators / den` with a common denominator.
    pub fn to_laurent(&self) -> (LaurentElement, LaurentPoly) {
        let den = common_denominator(self.terms.values());
        let mut out = LaurentElement::zero();
        for (w, c) in &self.terms {
            let k = den.div_exact(c.denominator()).expect("common denominator");
            out.add_term(w.clone(), &(c.numerator() * &k));
        }
        (out, den)
    }

    /// Raw `e'_i`: the `K_i^{-1}` coefficient of `E_i x` after straightening.
    pub fn eprime(&self, d: &DynkinDiagram, i: usize) -> Self {
        let q_minus = LaurentPoly::from_i64_terms(&[(1, 1), (-1, -1)]);
        let c = RatFunc::new(LaurentPoly::constant(-1), q_minus).expect("nonzero");
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            let xc = x * &c;
            for (rest, e) in ehat_word(d, i, w) {
                out.add_term(rest, &xc.mul_laurent(&LaurentPoly::q_pow(e)));
            }
        }
        out
    }
}

impl std::ops::Add for &UMinusElement {
    type Output = UMinusElement;
    fn add(self, rhs: &UMinusElement) -> UMinusElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl std::ops::Sub for &UMinusElement {
    type Output = UMinusElement;
    fn sub(self, rhs: &UMinusElement) -> UMinusElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl std::ops::Mul for &UMinusElement {
    type Output = UMinusElement;
    fn mul(self, rhs: &UMinusElement) -> UMinusElement {
        self.multiply(rhs)
    }
}

impl std::ops::Neg for &UMinusElement {
    type Output = UMinusElement;
    fn neg(self) -> UMinusElement {
        UMinusElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

/// Formats a coefficient so it can be prefixed to a monomial.
pub(crate) fn coeff_prefix(c: &RatFunc) -> (bool, String) {
    if let Some(p) = c.as_laurent() {
        if p.terms().len() == 1 {
            let (e, k) = &p.terms()[0];
            let neg = k < &0.into();
            let k = if neg { -k.clone() } else { k.clone() };
            let body = match (*e, k == 1.into()) {
                (0, true) => String::new(),
                (0, false) => k.to_string(),
                (1, true) => "q".into(),
                (e, true) => format!("q^{e}"),
                (1, false) => format!("{k}q"),
                (e, false) => format!("{k}q^{e}"),
            };
            return (neg, body);
        }
    }
    (false, format!("({c})"))
}

fn word_str(w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|l| format!("F{}", l + 1)).collect()
}

impl fmt::Display for UMinusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = coeff_prefix(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if w.is_empty() && body.is_empty() {
                f.write_str("1")?;
            } else if w.is_empty() {
                f.write_str(&body)?;
            } else {
                write!(f, "{body}{}", word_str(w))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Vec<usize>,
    coeff: RatFunc,
}

impl Serialize for UMinusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(w, c)| TermJson { word: w.iter().map(|l| l + 1).collect(), coeff: c.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UMinusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<TermJson> = Vec::deserialize(d)?;
        let mut out = UMinusElement::zero();
        for t in v {
            if t.word.contains(&0) {
                return Err(serde::de::Error::custom("nodes are numbered from 1"));
            }
            out.add_term(t.word.iter().map(|l| l - 1).collect(), &t.coeff);
        }
        Ok(out)
    }
}

/// Normalized `e'_i` on one word: pairs `(word with one i removed, exponent)`
/// meaning `q^exponent`. The raw operator carries an extra `-1/(q - q^-1)`.
pub fn ehat_word(d: &DynkinDiagram, i: usize, w: &[usize]) -> Vec<(FWord, i32)> {
    let mut out = Vec::new();
    let mut s = 0;
    for p in (0..w.len()).rev() {
        if w[p] == i {
            let mut rest = w[..p].to_vec();
            rest.extend_from_slice(&w[p + 1..]);
            out.push((rest, s));
        }
        s += d.cartan()[i][w[p]];
    }
    out
}

/// Coordinates `psi(x) = num / den` of a homogeneous element against the
/// target words of its weight space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psi {
    pub nu: Vec<i32>,
    pub num: Vec<LaurentPoly>,
    pub den: LaurentPoly,
}

impl Psi {
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }
}

struct WordList {
    words: Vec<FWord>,
    index: HashMap<FWord, usize>,
}

/// One weight space `U_{-nu}` with its separating target words and a word basis.
pub struct WeightSpace {
    nu: Vec<i32>,
    words: Arc<WordList>,
    targets: Vec<FWord>,
    basis: Vec<usize>,
    basis_solver: OnceLock<LaurentSolver>,
}

impl WeightSpace {
    pub fn nu(&self) -> &[i32] {
        &self.nu
    }

    pub fn dim(&self) -> usize {
        self.targets.len()
    }

    pub fn words(&self) -> &[FWord] {
        &self.words.words
    }

    pub fn word_index(&self, w: &[usize]) -> Option<usize> {
        self.words.index.get(w).copied()
    }

    /// Target words `S`; `psi` lists `e-hat` derivatives along these.
    pub fn targets(&self) -> &[FWord] {
        &self.targets
    }

    /// Words forming a basis of the weight space.
    pub fn basis_words(&self) -> Vec<&FWord> {
        self.basis.iter().map(|&k| &self.words.words[k]).collect()
    }
}

/// Kernel of `e'_i` along `F_i`-strings inside one weight space.
struct KashiwaraSystem {
    max_n: u32,
    /// `(n, Y_{n,j})` in the order of the columns of `solver`.
    pieces: Vec<(u32, LaurentElement)>,
    solver: LaurentSolver,
    /// `psi` of `F_i^{n+1} Y_{n,j} * [m+1]! / [n+1]` at weight `nu + alpha_i`.
    up_columns: Option<Vec<Vec<LaurentPoly>>>,
}

const EVAL_POINTS: [u64; 4] = [1_234_567_891_011, 987_654_321_123, 31_415_926_535_897, 271_828_182_845_904];

/// Shared context: the diagram, the height bound and all weight-space caches.
pub struct Algebra {
    diagram: Arc<DynkinDiagram>,
    height_bound: u32,
    word_lists: RwLock<HashMap<Vec<i32>, Arc<WordList>>>,
    spaces: RwLock<HashMap<Vec<i32>, Arc<WeightSpace>>>,
    columns: RwLock<HashMap<FWord, Arc<Vec<LaurentPoly>>>>,
    modp_cache: RwLock<HashMap<(Vec<i32>, u64), Arc<Vec<Vec<u64>>>>>,
    kashiwara: RwLock<HashMap<(usize, Vec<i32>), Arc<KashiwaraSystem>>>,
}

pub const DEFAULT_HEIGHT_BOUND: u32 = 8;

impl Algebra {
    pub fn new(diagram: DynkinDiagram, height_bound: u32) -> Self {
        Self {
            diagram: Arc::new(diagram),
            height_bound,
            word_lists: RwLock::default(),
            spaces: RwLock::default(),
            columns: RwLock::default(),
            modp_cache: RwLock::default(),
            kashiwara: RwLock::default(),
        }
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn height_bound(&self) -> u32 {
        self.height_bound
    }

    pub fn check_weight(&self, nu: &[i32]) -> Result<()> {
        if nu.len() != self.rank() || nu.iter().any(|&x| x < 0) {
            return Err(Error::Domain(format!("{nu:?} is not a nonnegative weight of rank {}", self.rank())));
        }
        let h: i32 = nu.iter().sum();
        if h as u32 > self.height_bound {
            return Err(Error::HeightBound { height: h as u32, bound: self.height_bound });
        }
        Ok(())
    }

    fn word_list(&self, nu: &[i32]) -> Arc<WordList> {
        if let Some(x) = self.word_lists.read().unwrap().get(nu) {
            return x.clone();
        }
        let mut words = Vec::new();
        let mut cur = Vec::new();
        let mut left = nu.to_vec();
        fn rec(left: &mut Vec<i32>, cur: &mut FWord, out: &mut Vec<FWord>) {
            if left.iter().all(|&x| x == 0) {
                out.push(cur.clone());
                return;
            }
            for i in 0..left.len() {
                if left[i] > 0 {
                    left[i] -= 1;
                    cur.push(i);
                    rec(left, cur, out);
                    cur.pop();
                    left[i] += 1;
                }
            }
        }
        rec(&mut left, &mut cur, &mut words);
        let index = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let list = Arc::new(WordList { words, index });
        self.word_lists.write().unwrap().entry(nu.to_vec()).or_insert(list).clone()
    }

    /// Mod-p matrix of normalized derivatives: rows are words `u`, columns
    /// target words `w`, evaluated at `q = t`.
    fn modp_matrix(&self, nu: &[i32], t: u64) -> Arc<Vec<Vec<u64>>> {
        let key = (nu.to_vec(), t);
        if let Some(x) = self.modp_cache.read().unwrap().get(&key) {
            return x.clone();
        }
        let p = modp::P;
        let list = self.word_list(nu);
        let n = list.words.len();
        let h: i32 = nu.iter().sum();
        let mut m = vec![vec![0u64; n]; n];
        if h == 0 {
            m[0][0] = 1;
        } else {
            let t_inv = modp::inv_mod(t, p);
            let pw = |e: i32| if e >= 0 { modp::pow_mod(t, e as u64, p) } else { modp::pow_mod(t_inv, (-e) as u64, p) };
            for i in (0..self.rank()).filter(|&i| nu[i] > 0) {
                let mut sub_nu = nu.to_vec();
                sub_nu[i] -= 1;
                let sub = self.modp_matrix(&sub_nu, t);
                let sub_list = self.word_list(&sub_nu);
                let cols: Vec<(usize, usize)> = list
                    .words
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| *w.last().unwrap() == i)
                    .map(|(k, w)| (k, sub_list.index[&w[..w.len() - 1]]))
                    .collect();
                for (r, u) in list.words.iter().enumerate() {
                    for (rest, e) in ehat_word(&self.diagram, i, u) {
                        let c = pw(e);
                        let row = &sub[sub_list.index[&rest]];
                        for &(k, pk) in &cols {
                            m[r][k] = modp::add_mod(m[r][k], modp::mul_mod(c, row[pk], p), p);
                        }
                    }
                }
            }
        }
        let m = Arc::new(m);
        self.modp_cache.write().unwrap().entry(key).or_insert(m).clone()
    }

    /// The weight space `U_{-nu}`; validates that its separating set has
    /// Kostant-many elements.
    pub fn weight_space(&self, nu: &[i32]) -> Result<Arc<WeightSpace>> {
        self.check_weight(nu)?;
        if let Some(x) = self.spaces.read().unwrap().get(nu) {
            return Ok(x.clone());
        }
        let dim = self.diagram.kostant_partition(nu) as usize;
        let list = self.word_list(nu);
        let mut found = None;
        for &t in &EVAL_POINTS {
            let m = self.modp_matrix(nu, t);
            let piv = modp::pivots((*m).clone(), modp::P);
            if piv.len() == dim {
                found = Some(piv);
                break;
            }
            if piv.len() > dim {
                return Err(Error::Internal(format!("weight space {nu:?} has rank above its Kostant count")));
            }
        }
        let Some(piv) = found else {
            return Err(Error::Internal(format!(
                "iterated derivatives fail to separate weight space {nu:?} (expected dimension {dim})"
            )));
        };
        let targets = piv.iter().map(|&(_, c)| list.words[c].clone()).collect();
        let basis = piv.iter().map(|&(r, _)| r).collect();
        let ws = Arc::new(WeightSpace { nu: nu.to_vec(), words: list, targets, basis, basis_solver: OnceLock::new() });
        Ok(self.spaces.write().unwrap().entry(nu.to_vec()).or_insert(ws).clone())
    }

    /// Normalized derivative `e-hat_w(u)` for every word `u` of the weight of `w`.
    pub fn column(&self, w: &[usize]) -> Arc<Vec<LaurentPoly>> {
        if let Some(x) = self.columns.read().unwrap().get(w) {
            return x.clone();
        }
        let nu = weight_of(self.rank(), w);
        let list = self.word_list(&nu);
        let col = if w.is_empty() {
            vec![LaurentPoly::one()]
        } else {
            let i = *w.last().unwrap();
            let prev = self.column(&w[..w.len() - 1]);
            let mut sub_nu = nu.clone();
            sub_nu[i] -= 1;
            let sub_list = self.word_list(&sub_nu);
            list.words
                .iter()
                .map(|u| {
                    let mut acc = LaurentPoly::zero();
                    for (rest, e) in ehat_word(&self.diagram, i, u) {
                        let v = &prev[sub_list.index[&rest]];
                        if !v.is_zero() {
                            acc += &v.shift(e);
                        }
                    }
                    acc
                })
                .collect()
        };
        let col = Arc::new(col);
        self.columns.write().unwrap().entry(w.to_vec()).or_insert(col).clone()
    }

    /// `psi` of a single word.
    pub fn psi_word(&self, u: &[usize]) -> Result<Vec<LaurentPoly>> {
        let nu = weight_of(self.rank(), u);
        let ws = self.weight_space(&nu)?;
        let k = ws.word_index(u).expect("word of its own weight");
        Ok(ws.targets.iter().map(|s| self.column(s)[k].clone()).collect())
    }

    /// `psi` of a Laurent combination of words of weight `-nu`.
    pub fn psi_laurent(&self, nu: &[i32], x: &LaurentElement) -> Result<Vec<LaurentPoly>> {
        let ws = self.weight_space(nu)?;
        let cols: Vec<Arc<Vec<LaurentPoly>>> = ws.targets.iter().map(|s| self.column(s)).collect();
        let mut out = vec![LaurentPoly::zero(); ws.dim()];
        for (u, c) in &x.terms {
            let k = ws
                .word_index(u)
                .ok_or_else(|| Error::Domain(format!("word {} does not have weight {nu:?}", word_str(u))))?;
            for (o, col) in out.iter_mut().zip(&cols) {
                if !col[k].is_zero() {
                    *o += &(c * &col[k]);
                }
            }
        }
        Ok(out)
    }

    /// `psi` of a homogeneous element (zero is accepted at any weight).
    pub fn psi(&self, nu: &[i32], x: &UMinusElement) -> Result<Psi> {
        let (lx, den) = x.to_laurent();
        Ok(Psi { nu: nu.to_vec(), num: self.psi_laurent(nu, &lx)?, den })
    }

    /// Exact zero test in `U_q^-`.
    pub fn is_zero(&self, x: &UMinusElement) -> Result<bool> {
        for (nu, part) in x.components(self.rank()) {
            if !self.psi(&nu, &part)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, x: &UMinusElement, y: &UMinusElement) -> Result<bool> {
        self.is_zero(&(x - y))
    }

    /// Raw iterated derivatives `e'_{j_1} ... e'_{j_h}(x)` for every word of
    /// the weight of `x`.
    pub fn phi_coordinates(&self, nu: &[i32], x: &UMinusElement) -> Result<BTreeMap<FWord, RatFunc>> {
        self.check_weight(nu)?;
        let list = self.word_list(nu);
        let (lx, den) = x.to_laurent();
        let h: i32 = nu.iter().sum();
        let q_minus = LaurentPoly::from_i64_terms(&[(1, 1), (-1, -1)]);
        let mut scale_den = den;
        let mut sign = 1;
        for _ in 0..h {
            scale_den = &scale_den * &q_minus;
            sign = -sign;
        }
        let mut out = BTreeMap::new();
        for w in &list.words {
            let col = self.column(w);
            let mut acc = LaurentPoly::zero();
            for (u, c) in &lx.terms {
                let k = list.index.get(u).ok_or_else(|| Error::Domain("inhomogeneous element".into()))?;
                acc += &(c * &col[*k]);
            }
            out.insert(w.clone(), RatFunc::new(acc.scale(&sign.into()), scale_den.clone())?);
        }
        Ok(out)
    }

    /// Reconstructs the element with the given `psi` on the word basis.
    pub fn element_from_psi(&self, psi: &Psi) -> Result<UMinusElement> {
        let ws = self.weight_space(&psi.nu)?;
        let solver = ws.basis_solver.get_or_init(|| {
            let cols: Vec<Vec<LaurentPoly>> =
                ws.basis_words().iter().map(|u| self.psi_word(u).expect("basis word")).collect();
            LaurentSolver::new(&transpose(&cols)).expect("basis words are independent")
        });
        let coeffs = solver.solve(&psi.num, &psi.den);
        Ok(UMinusElement::from_terms(ws.basis_words().into_iter().cloned().zip(coeffs)))
    }

    fn kashiwara_system(&self, i: usize, nu: &[i32], with_up: bool) -> Result<Arc<KashiwaraSystem>> {
        self.check_weight(nu)?;
        let key = (i, nu.to_vec());
        if let Some(x) = self.kashiwara.read().unwrap().get(&key) {
            if !with_up || x.up_columns.is_some() {
                return Ok(x.clone());
            }
        }
        let max_n = nu[i].max(0) as u32;
        let mut pieces = Vec::new();
        for n in 0..=max_n {
            let mut mu = nu.to_vec();
            mu[i] -= n as i32;
            for y in self.eprime_kernel(i, &mu)? {
                pieces.push((n, y));
            }
        }
        let dim = self.weight_space(nu)?.dim();
        if pieces.len() != dim {
            return Err(Error::Internal(format!(
                "kernel pieces of e'_{} at {nu:?} have total dimension {} instead of {dim}",
                i + 1,
                pieces.len()
            )));
        }
        let fi = LaurentElement::word(vec![i]);
        let cols: Vec<Vec<LaurentPoly>> = pieces
            .iter()
            .map(|(n, y)| self.psi_laurent(nu, &fi.pow(*n).mul(y)))
            .collect::<Result<_>>()?;
        let solver = LaurentSolver::new(&transpose(&cols))
            .ok_or_else(|| Error::Internal(format!("F_{}-string decomposition singular at {nu:?}", i + 1)))?;
        let up_columns = if with_up {
            let mut up = nu.to_vec();
            up[i] += 1;
            let big = quantum_factorial(max_n + 1);
            Some(
                pieces
                    .iter()
                    .map(|(n, y)| {
                        let k = big.div_exact(&quantum_integer(*n as i64 + 1).unwrap()).unwrap();
                        Ok(self.psi_laurent(&up, &fi.pow(n + 1).mul(y))?.iter().map(|v| v * &k).collect())
                    })
                    .collect::<Result<_>>()?,
            )
        } else {
            None
        };
        let sys = Arc::new(KashiwaraSystem { max_n, pieces, solver, up_columns });
        let mut guard = self.kashiwara.write().unwrap();
        let entry = guard.entry(key).or_insert_with(|| sys.clone());
        if with_up && entry.up_columns.is_none() {
            *entry = sys;
        }
        Ok(entry.clone())
    }

    /// A basis of `ker e'_i` in `U_{-mu}`, as Laurent combinations of basis words.
    pub fn eprime_kernel(&self, i: usize, mu: &[i32]) -> Result<Vec<LaurentElement>> {
        let ws = self.weight_space(mu)?;
        let basis: Vec<FWord> = ws.basis_words().into_iter().cloned().collect();
        if mu[i] == 0 {
            return Ok(basis.into_iter().map(LaurentElement::word).collect());
        }
        let mut lower = mu.to_vec();
        lower[i] -= 1;
        let cols: Vec<Vec<LaurentPoly>> = basis
            .iter()
            .map(|u| {
                let mut e = LaurentElement::zero();
                for (rest, x) in ehat_word(&self.diagram, i, u) {
                    e.add_term(rest, &LaurentPoly::q_pow(x));
                }
                self.psi_laurent(&lower, &e)
            })
            .collect::<Result<_>>()?;
        let rows = self.weight_space(&lower)?.dim();
        let m = QMatrix::from_columns(
            rows,
            &cols.iter().map(|c| c.iter().cloned().map(RatFunc::from).collect()).collect::<Vec<_>>(),
        )?;
        Ok(m.kernel_basis()
            .into_iter()
            .map(|v| {
                let den = common_denominator(v.iter());
                let mut e = LaurentElement::zero();
                for (u, c) in basis.iter().zip(&v) {
                    if c.is_zero() {
                        continue;
                    }
                    let k = den.div_exact(c.denominator()).unwrap();
                    e.add_term(u.clone(), &(c.numerator() * &k));
                }
                e
            })
            .collect())
    }

    /// Components `(n, Y_n)` with `x = sum F_i^{(n)} Y_n` and `e'_i Y_n = 0`.
    pub fn kashiwara_decompose(&self, i: usize, x: &UMinusElement) -> Result<Vec<(u32, UMinusElement)>> {
        let mut out: BTreeMap<u32, UMinusElement> = BTreeMap::new();
        for (nu, part) in x.components(self.rank()) {
            let sys = self.kashiwara_system(i, &nu, false)?;
            let psi = self.psi(&nu, &part)?;
            let c = sys.solver.solve(&psi.num, &psi.den);
            for ((n, y), cj) in sys.pieces.iter().zip(c) {
                if cj.is_zero() {
                    continue;
                }
                let scale = cj.mul_laurent(&quantum_factorial(*n));
                let ny = y.to_element(&LaurentPoly::one()).scale(&scale);
                let slot = out.entry(*n).or_default();
                *slot = &*slot + &ny;
            }
        }
        Ok(out.into_iter().filter(|(_, y)| !y.is_empty()).collect())
    }

    /// Kashiwara's `F~_i`: `F_i^{(n)} Y -> F_i^{(n+1)} Y`.
    pub fn kashiwara_ftilde(&self, i: usize, x: &UMinusElement) -> Result<UMinusElement> {
        let mut out = UMinusElement::zero();
        for (n, y) in self.kashiwara_decompose(i, x)? {
            out = &out + &(&UMinusElement::divided_power(i, n + 1) * &y);
        }
        Ok(out)
    }

    /// `F~_i` on `psi` coordinates: from weight `nu` to `nu + alpha_i`.
    pub fn ftilde_psi(&self, i: usize, psi: &Psi) -> Result<Psi> {
        let mut up = psi.nu.clone();
        up[i] += 1;
        self.check_weight(&up)?;
        let sys = self.kashiwara_system(i, &psi.nu, true)?;
        let c = sys.solver.apply_scaled(&psi.num);
        let cols = sys.up_columns.as_ref().unwrap();
        let mut num = vec![LaurentPoly::zero(); self.weight_space(&up)?.dim()];
        for (cj, col) in c.iter().zip(cols) {
            if cj.is_zero() {
                continue;
            }
            for (o, v) in num.iter_mut().zip(col) {
                if !v.is_zero() {
                    *o += &(cj * v);
                }
            }
        }
        let den = &(&psi.den * sys.solver.det()) * &quantum_factorial(sys.max_n + 1);
        Ok(Psi { nu: up, num, den })
    }
}

/// Rows from columns.
pub fn transpose(cols: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let n = cols.first().map_or(0, |c| c.len());
    (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}
