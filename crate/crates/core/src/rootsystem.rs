//! Simply-laced root systems, Weyl group combinatorics and reduced words.
//!
//! Nodes are 0-based internally. Everything user-facing (parsing, display,
//! JSON) uses 1-based node labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Coordinates of a root (or any element of the root lattice) in the basis of
/// simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_simple(&self) -> Option<usize> {
        if self.height() == 1 && self.is_positive() {
            self.0.iter().position(|&c| c == 1)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c > 0 { "+" } else { "-" })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "a{}", i + 1)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A simply-laced Dynkin diagram together with its positive roots and the
/// action of simple reflections on the full root set.
#[derive(Clone, Debug)]
pub struct DynkinDiagram {
    ty: DynkinType,
    cartan: Vec<Vec<i32>>,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
    /// `reflect[i][r]`: index of `s_i(root r)`; roots `N..2N` are the negatives.
    reflect: Vec<Vec<u32>>,
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ty.fmt(f)
    }
}

impl DynkinDiagram {
    pub fn new(ty: DynkinType) -> Result<Self> {
        let (n, edges): (usize, Vec<(usize, usize)>) = match ty {
            DynkinType::A(n) if n >= 1 => (n, (1..n).map(|i| (i - 1, i)).collect()),
            DynkinType::D(n) if n >= 4 => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                (n, e)
            }
            DynkinType::E(n) if (6..=8).contains(&n) => {
                // Bourbaki labels: 1-3-4-5-6-7-8 with 2 attached to 4.
                let mut e = vec![(0, 2), (1, 3), (2, 3)];
                e.extend((3..n - 1).map(|i| (i, i + 1)));
                (n, e)
            }
            _ => return Err(Error::Domain(format!("unsupported diagram {ty}"))),
        };
        let mut cartan = vec![vec![0; n]; n];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in edges {
            cartan[a][b] = -1;
            cartan[b][a] = -1;
        }
        let mut d = Self { ty, cartan, positive: Vec::new(), index: HashMap::new(), reflect: Vec::new() };
        d.build_roots();
        Ok(d)
    }

    fn build_roots(&mut self) {
        let n = self.rank();
        let mut seen: HashSet<Root> = (0..n).map(|i| Root::simple(n, i)).collect();
        let mut queue: VecDeque<Root> = (0..n).map(|i| Root::simple(n, i)).collect();
        while let Some(r) = queue.pop_front() {
            for i in 0..n {
                let s = self.reflect_vec(i, &r);
                if s.is_positive() && seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        let mut roots: Vec<Root> = seen.into_iter().collect();
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));
        let big_n = roots.len();
        let mut index = HashMap::new();
        for (k, r) in roots.iter().enumerate() {
            index.insert(r.clone(), k);
            index.insert(r.neg(), k + big_n);
        }
        self.positive = roots;
        self.index = index;
        self.reflect = (0..n)
            .map(|i| {
                (0..2 * big_n)
                    .map(|k| {
                        let r = self.root_by_index(k);
                        self.index[&self.reflect_vec(i, &r)] as u32
                    })
                    .collect()
            })
            .collect();
    }

    /// Parses strings such as `A3`, `D4` or `E6` (case-insensitive).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("cannot parse diagram type '{s}'"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let ty = match letter {
            'A' => DynkinType::A(n),
            'D' => DynkinType::D(n),
            'E' => DynkinType::E(n),
            _ => return Err(bad()),
        };
        Self::new(ty)
    }

    pub fn ty(&self) -> DynkinType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.cartan[i][j] == -1
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Number of positive roots, i.e. the length of `w0`.
    pub fn num_positive_roots(&self) -> usize {
        self.positive.len()
    }

    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    fn root_by_index(&self, k: usize) -> Root {
        let n = self.positive.len();
        if k < n {
            self.positive[k].clone()
        } else {
            self.positive[k - n].neg()
        }
    }

    /// Symmetric bilinear form on root-lattice vectors.
    pub fn inner(&self, a: &[i32], b: &[i32]) -> i32 {
        let mut s = 0;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                s += x * self.cartan[i][j] * y;
            }
        }
        s
    }

    /// `(alpha_i, v)`.
    pub fn inner_simple(&self, i: usize, v: &[i32]) -> i32 {
        self.cartan[i].iter().zip(v).map(|(c, x)| c * x).sum()
    }

    pub fn reflect_vec(&self, i: usize, v: &Root) -> Root {
        let c = self.inner_simple(i, &v.0);
        let mut out = v.0.clone();
        out[i] -= c;
        Root(out)
    }

    pub fn identity_element(&self) -> WeylElement {
        WeylElement { perm: (0..2 * self.positive.len() as u32).collect() }
    }

    /// The element `s_{w_1} s_{w_2} ... s_{w_k}`.
    pub fn element_of(&self, word: &[usize]) -> WeylElement {
        let mut w = self.identity_element();
        for &l in word.iter().rev() {
            w = self.left_mul(l, &w);
        }
        w
    }

    /// `s_i * w`.
    pub fn left_mul(&self, i: usize, w: &WeylElement) -> WeylElement {
        WeylElement { perm: w.perm.iter().map(|&r| self.reflect[i][r as usize]).collect() }
    }

    pub fn length(&self, w: &WeylElement) -> usize {
        let n = self.positive.len() as u32;
        w.perm[..n as usize].iter().filter(|&&r| r >= n).count()
    }

    pub fn is_left_descent(&self, i: usize, w: &WeylElement) -> bool {
        self.length(&self.left_mul(i, w)) < self.length(w)
    }

    pub fn longest_element(&self) -> WeylElement {
        // Multiply by any ascent until none is left.
        let mut w = self.identity_element();
        'outer: loop {
            for i in 0..self.rank() {
                let s = self.left_mul(i, &w);
                if self.length(&s) > self.length(&w) {
                    w = s;
                    continue 'outer;
                }
            }
            return w;
        }
    }

    /// Reduced word of `w`, choosing the smallest left descent at each step.
    pub fn greedy_word(&self, w: &WeylElement) -> Vec<usize> {
        let mut w = w.clone();
        let mut out = Vec::new();
        while self.length(&w) > 0 {
            let i = (0..self.rank()).find(|&i| self.is_left_descent(i, &w)).expect("descent exists");
            out.push(i);
            w = self.left_mul(i, &w);
        }
        out
    }

    /// Image of a root-lattice vector under `w`.
    pub fn act(&self, w: &WeylElement, v: &Root) -> Root {
        // Linear extension from the simple roots.
        let n = self.rank();
        let mut out = vec![0; n];
        for (i, &c) in v.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let img = self.root_by_index(w.perm[i] as usize);
            for j in 0..n {
                out[j] += c * img.0[j];
            }
        }
        Root(out)
    }

    /// The involution `sigma` with `alpha_{sigma(i)} = -w0 alpha_i`.
    pub fn sigma(&self) -> Vec<usize> {
        let w0 = self.longest_element();
        (0..self.rank())
            .map(|i| {
                let r = self.act(&w0, &Root::simple(self.rank(), i)).neg();
                r.is_simple().expect("-w0 permutes simple roots")
            })
            .collect()
    }

    /// Validates and wraps a word; it must be reduced.
    pub fn word(&self, letters: Vec<usize>) -> Result<ReducedWord> {
        if let Some(&bad) = letters.iter().find(|&&l| l >= self.rank()) {
            return Err(Error::Domain(format!("node {} outside diagram {}", bad + 1, self.ty)));
        }
        let w = self.element_of(&letters);
        if self.length(&w) != letters.len() {
            return Err(Error::Domain(format!(
                "word {} is not reduced",
                ReducedWord { letters: letters.clone() }
            )));
        }
        Ok(ReducedWord { letters })
    }

    /// Parses a comma-separated list of 1-based nodes.
    pub fn parse_word(&self, s: &str) -> Result<ReducedWord> {
        let letters = parse_nodes(s)?;
        self.word(letters)
    }

    /// Validates a word of `w0`.
    pub fn full_word(&self, letters: Vec<usize>) -> Result<ReducedWord> {
        let w = self.word(letters)?;
        if w.len() != self.num_positive_roots() {
            return Err(Error::Domain(format!("word {w} is not a reduced word of w0")));
        }
        Ok(w)
    }

    /// `(1,2,...,n,1,...,n-1,...,1)` in type A, the greedy word otherwise.
    pub fn default_word(&self) -> ReducedWord {
        let letters = match self.ty {
            DynkinType::A(n) => (0..n).flat_map(|k| 0..n - k).collect(),
            _ => self.greedy_word(&self.longest_element()),
        };
        ReducedWord { letters }
    }

    /// `(beta_1, ..., beta_k)` with `beta_k = s_{i_1} ... s_{i_{k-1}} alpha_{i_k}`.
    pub fn beta_sequence(&self, w: &ReducedWord) -> Result<Vec<Root>> {
        let n = self.rank();
        let mut prefix = self.identity_element();
        let mut out = Vec::with_capacity(w.len());
        for &l in &w.letters {
            if l >= n {
                return Err(Error::Domain(format!("node {} outside diagram", l + 1)));
            }
            let b = self.root_by_index(prefix.perm[l] as usize);
            if !b.is_positive() {
                return Err(Error::Domain(format!("word {w} is not reduced")));
            }
            out.push(b);
            prefix = WeylElement {
                perm: (0..prefix.perm.len()).map(|r| prefix.perm[self.reflect[l][r] as usize]).collect(),
            };
        }
        Ok(out)
    }

    pub fn move_is_legal(&self, w: &ReducedWord, m: BraidMove) -> bool {
        let l = &w.letters;
        match m.kind {
            MoveKind::Two => m.pos + 1 < l.len() && l[m.pos] != l[m.pos + 1] && !self.adjacent(l[m.pos], l[m.pos + 1]),
            MoveKind::Three => {
                m.pos + 2 < l.len() && l[m.pos] == l[m.pos + 2] && self.adjacent(l[m.pos], l[m.pos + 1])
            }
        }
    }

    pub fn apply_braid_move(&self, w: &ReducedWord, m: BraidMove) -> Result<ReducedWord> {
        if !self.move_is_legal(w, m) {
            return Err(Error::Domain(format!("illegal move {m} on {w}")));
        }
        let mut l = w.letters.clone();
        match m.kind {
            MoveKind::Two => l.swap(m.pos, m.pos + 1),
            MoveKind::Three => {
                let (i, j) = (l[m.pos], l[m.pos + 1]);
                l[m.pos] = j;
                l[m.pos + 1] = i;
                l[m.pos + 2] = j;
            }
        }
        Ok(ReducedWord { letters: l })
    }

    pub fn legal_moves(&self, w: &ReducedWord) -> Vec<BraidMove> {
        let mut out = Vec::new();
        for pos in 0..w.len() {
            for kind in [MoveKind::Two, MoveKind::Three] {
                let m = BraidMove { pos, kind };
                if self.move_is_legal(w, m) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// A sequence of braid moves from `w1` to `w2`, built by aligning first
    /// letters and recursing on suffixes. Ties go to the lowest position.
    pub fn matsumoto_path(&self, w1: &ReducedWord, w2: &ReducedWord) -> Result<Vec<BraidMove>> {
        if w1.len() != w2.len() || self.element_of(&w1.letters) != self.element_of(&w2.letters) {
            return Err(Error::Domain(format!("{w1} and {w2} represent different elements")));
        }
        let mut moves = Vec::new();
        self.align(&w1.letters, &w2.letters, 0, &mut moves);
        Ok(moves)
    }

    fn align(&self, u: &[usize], v: &[usize], offset: usize, out: &mut Vec<BraidMove>) {
        if u.is_empty() {
            return;
        }
        if u[0] == v[0] {
            return self.align(&u[1..], &v[1..], offset + 1, out);
        }
        let (i, j) = (u[0], v[0]);
        let m = if self.adjacent(i, j) { 3 } else { 2 };
        let alt = |a: usize, b: usize| -> Vec<usize> { (0..m).map(|k| if k % 2 == 0 { a } else { b }).collect() };
        let w = self.element_of(u);
        let mut rest = w;
        for &l in &alt(i, j) {
            rest = self.left_mul(l, &rest);
        }
        let tail = self.greedy_word(&rest);
        let mut z1 = alt(i, j);
        z1.extend_from_slice(&tail);
        let mut z2 = alt(j, i);
        z2.extend_from_slice(&tail);
        self.align(u, &z1, offset, out);
        out.push(BraidMove { pos: offset, kind: if m == 3 { MoveKind::Three } else { MoveKind::Two } });
        self.align(&z2, v, offset, out);
    }

    /// Replays a path and returns every intermediate word (including both ends).
    pub fn replay(&self, w: &ReducedWord, path: &[BraidMove]) -> Result<Vec<ReducedWord>> {
        let mut words = vec![w.clone()];
        for &m in path {
            let next = self.apply_braid_move(words.last().unwrap(), m)?;
            words.push(next);
        }
        Ok(words)
    }

    /// All reduced words of the element represented by `w`, in BFS order.
    /// Fails once more than `cap` words have been found.
    pub fn all_reduced_words(&self, w: &ReducedWord, cap: usize) -> Result<Vec<ReducedWord>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([w.clone()]);
        seen.insert(w.clone());
        while let Some(x) = queue.pop_front() {
            for m in self.legal_moves(&x) {
                let y = self.apply_braid_move(&x, m)?;
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
            out.push(x);
            if out.len() + queue.len() > cap {
                return Err(Error::Domain(format!("more than {cap} reduced words")));
            }
        }
        Ok(out)
    }

    /// Shortest braid-move path by breadth-first search.
    pub fn bfs_path(&self, w1: &ReducedWord, w2: &ReducedWord, cap: usize) -> Option<Vec<BraidMove>> {
        let mut prev: HashMap<ReducedWord, (ReducedWord, BraidMove)> = HashMap::new();
        let mut queue = VecDeque::from([w1.clone()]);
        let mut seen = HashSet::from([w1.clone()]);
        while let Some(x) = queue.pop_front() {
            if x == *w2 {
                let mut path = Vec::new();
                let mut cur = x;
                while let Some((p, m)) = prev.get(&cur) {
                    path.push(*m);
                    cur = p.clone();
                }
                path.reverse();
                return Some(path);
            }
            if seen.len() > cap {
                return None;
            }
            for m in self.legal_moves(&x) {
                let y = self.apply_braid_move(&x, m).ok()?;
                if seen.insert(y.clone()) {
                    prev.insert(y.clone(), (x.clone(), m));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// A reduced word of `w0` starting with `i`.
    pub fn first_letter_word(&self, i: usize) -> ReducedWord {
        let w0 = self.longest_element();
        let mut letters = vec![i];
        letters.extend(self.greedy_word(&self.left_mul(i, &w0)));
        ReducedWord { letters }
    }

    /// A reduced word of `w0` ending with `sigma(i)`, so that `beta_N = alpha_i`.
    pub fn last_letter_word(&self, i: usize) -> ReducedWord {
        let s = self.sigma()[i];
        // w0 s = s' w0 with s' = s_{sigma(s)}; greedy word of w0 s then append s.
        let w0 = self.longest_element();
        let w = self.left_mul(self.sigma()[s], &w0);
        let mut letters = self.greedy_word(&w);
        letters.push(s);
        ReducedWord { letters }
    }

    /// Number of multisets of positive roots summing to `nu`.
    pub fn kostant_partition(&self, nu: &[i32]) -> u128 {
        let mut memo = HashMap::new();
        count_partitions(&self.positive, 0, nu.to_vec(), &mut memo)
    }

    /// All `a` with `sum a_k roots[k] = nu`, in lexicographically decreasing order.
    pub fn partitions_along(&self, roots: &[Root], nu: &[i32]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; roots.len()];
        enumerate_partitions(roots, 0, nu.to_vec(), &mut cur, &mut out);
        out
    }

    /// All `nu` in the positive cone with height exactly `h`.
    pub fn weights_of_height(&self, h: u32) -> Vec<Vec<i32>> {
        let mut out = Vec::new();
        let mut cur = vec![0i32; self.rank()];
        fn rec(k: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
            if k + 1 == cur.len() {
                cur[k] = left;
                out.push(cur.clone());
                return;
            }
            for x in (0..=left).rev() {
                cur[k] = x;
                rec(k + 1, left - x, cur, out);
            }
        }
        rec(0, h as i32, &mut cur, &mut out);
        out.retain(|nu| self.kostant_partition(nu) > 0);
        out
    }

    /// Weyl's dimension formula for `lambda = sum c_i omega_i`.
    pub fn weyl_dimension(&self, c: &[u32]) -> BigInt {
        let mut acc = BigRational::one();
        for b in &self.positive {
            let num: i64 = b.0.iter().zip(c).map(|(&x, &ci)| x as i64 * (ci as i64 + 1)).sum();
            acc *= BigRational::new(num.into(), (b.height() as i64).into());
        }
        assert!(acc.is_integer());
        acc.to_integer()
    }

    /// Weight multiplicities of `V_lambda` by Freudenthal's recursion, keyed by
    /// `nu` where the weight is `lambda - nu`.
    pub fn freudenthal(&self, c: &[u32]) -> HashMap<Vec<i32>, u64> {
        let mut mult: HashMap<Vec<i32>, u64> = HashMap::new();
        mult.insert(vec![0; self.rank()], 1);
        let lam_pair = |nu: &[i32]| -> i64 { nu.iter().zip(c).map(|(&x, &ci)| x as i64 * ci as i64).sum() };
        for h in 1.. {
            let mut any = false;
            for nu in self.weights_of_height(h) {
                // 2(lambda+rho, nu) - (nu, nu)
                let lhs: i64 = 2 * nu.iter().zip(c).map(|(&x, &ci)| x as i64 * (ci as i64 + 1)).sum::<i64>()
                    - self.inner(&nu, &nu) as i64;
                let mut rhs: i64 = 0;
                for b in &self.positive {
                    for k in 1.. {
                        let nk: Vec<i32> = nu.iter().zip(&b.0).map(|(x, y)| x - k * y).collect();
                        if nk.iter().any(|&x| x < 0) {
                            break;
                        }
                        let m = *mult.get(&nk).unwrap_or(&0) as i64;
                        if m == 0 {
                            continue;
                        }
                        // (lambda - nu + k beta, beta)
                        let pair = lam_pair(&b.0) - self.inner(&nu, &b.0) as i64 + 2 * k as i64;
                        rhs += 2 * pair * m;
                    }
                }
                if rhs != 0 {
                    assert!(lhs > 0 && rhs % lhs == 0, "Freudenthal recursion is integral");
                    let m = (rhs / lhs).to_u64().unwrap();
                    if m > 0 {
                        mult.insert(nu, m);
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        mult
    }

    /// Checks that for every `j < k` and `l` outside the open interval, no
    /// relation `n beta_l = sum_{m=j}^{k} a_m beta_m` with `a_j, a_k > 0`
    /// exists for `n <= nmax`. Returns the violations found.
    pub fn convexity_violations(&self, w: &ReducedWord, nmax: i32) -> Result<Vec<(usize, usize, usize)>> {
        let betas = self.beta_sequence(w)?;
        let mut bad = Vec::new();
        for j in 0..betas.len() {
            for k in j + 1..betas.len() {
                for l in (0..betas.len()).filter(|&l| l <= j || l >= k) {
                    for n in 1..=nmax {
                        let target: Vec<i32> = (0..self.rank())
                            .map(|t| n * betas[l].0[t] - betas[j].0[t] - betas[k].0[t])
                            .collect();
                        if target.iter().any(|&x| x < 0) {
                            continue;
                        }
                        let mut memo = HashMap::new();
                        if count_partitions(&betas[j..=k], 0, target, &mut memo) > 0 {
                            bad.push((j, k, l));
                            break;
                        }
                    }
                }
            }
        }
        Ok(bad)
    }
}

fn count_partitions(roots: &[Root], k: usize, nu: Vec<i32>, memo: &mut HashMap<(usize, Vec<i32>), u128>) -> u128 {
    if nu.iter().all(|&x| x == 0) {
        return 1;
    }
    if k == roots.len() {
        return 0;
    }
    if let Some(&v) = memo.get(&(k, nu.clone())) {
        return v;
    }
    let mut total = 0;
    let mut rest = nu.clone();
    loop {
        total += count_partitions(roots, k + 1, rest.clone(), memo);
        for (x, y) in rest.iter_mut().zip(&roots[k].0) {
            *x -= y;
        }
        if rest.iter().any(|&x| x < 0) {
            break;
        }
    }
    memo.insert((k, nu), total);
    total
}

fn enumerate_partitions(roots: &[Root], k: usize, nu: Vec<i32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if k == roots.len() {
        if nu.iter().all(|&x| x == 0) {
            out.push(cur.clone());
        }
        return;
    }
    let mut max = u32::MAX;
    for (x, y) in nu.iter().zip(&roots[k].0) {
        if *y > 0 {
            max = max.min((*x / *y).max(0) as u32);
        }
    }
    for a in (0..=max).rev() {
        let rest: Vec<i32> = nu.iter().zip(&roots[k].0).map(|(x, y)| x - a as i32 * y).collect();
        cur[k] = a;
        enumerate_partitions(roots, k + 1, rest, cur, out);
    }
    cur[k] = 0;
}

/// Parses `1,2,3` (1-based) into 0-based nodes.
pub fn parse_nodes(s: &str) -> Result<Vec<usize>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let v: usize = t.trim().parse().map_err(|_| Error::Domain(format!("bad node '{t}'")))?;
            if v == 0 {
                return Err(Error::Domain("nodes are numbered from 1".into()));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Parses a comma-separated integer vector such as `1,0,2`.
pub fn parse_int_vec(s: &str) -> Result<Vec<i32>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Domain(format!("bad integer '{t}'"))))
        .collect()
}

/// A Weyl group element, stored as its permutation of all roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    perm: Vec<u32>,
}

/// A word in the simple reflections, reduced for the element it represents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.letters.iter().map(|l| l + 1).collect()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|l| (l + 1).to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Two,
    Three,
}

/// A braid move at 0-based position `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidMove {
    pub pos: usize,
    pub kind: MoveKind,
}

impl fmt::Display for BraidMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MoveKind::Two => 2,
            MoveKind::Three => 3,
        };
        write!(f, "{k}-term@{}", self.pos + 1)
    }
}

/// Weight (in simple-root coordinates, positive convention) of a word.
pub fn word_weight(rank: usize, letters: &[usize]) -> Vec<i32> {
    let mut v = vec![0; rank];
    for &l in letters {
        v[l] += 1;
    }
    v
}

/// `sum a_k beta_k`.
pub fn data_weight(betas: &[Root], a: &[u32]) -> Vec<i32> {
    let n = betas.first().map_or(0, |b| b.0.len());
    let mut v = vec![0; n];
    for (b, &x) in betas.iter().zip(a) {
        if x == 0 {
            continue;
        }
        for (t, y) in v.iter_mut().zip(&b.0) {
            *t += x as i32 * y;
        }
    }
    v
}

pub fn height(nu: &[i32]) -> i32 {
    nu.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> DynkinDiagram {
        DynkinDiagram::parse(s).unwrap()
    }

    fn r(v: &[i32]) -> Root {
        Root(v.to_vec())
    }

    #[test]
    fn root_counts() {
        for (t, n) in [("A1", 1), ("A2", 3), ("A3", 6), ("A4", 10), ("D4", 12), ("D5", 20), ("E6", 36), ("E7", 63), ("E8", 120)] {
            assert_eq!(d(t).num_positive_roots(), n, "{t}");
        }
        for x in d("D4").positive_roots() {
            assert_eq!(d("D4").inner(&x.0, &x.0), 2);
        }
        assert!(DynkinDiagram::parse("D3").is_err());
        assert!(DynkinDiagram::parse("X2").is_err());
    }

    #[test]
    fn beta_sequences() {
        let a2 = d("A2");
        let w = a2.parse_word("1,2,1").unwrap();
        assert_eq!(a2.beta_sequence(&w).unwrap(), vec![r(&[1, 0]), r(&[1, 1]), r(&[0, 1])]);
        let a3 = d("A3");
        let w = a3.parse_word("1,2,3,1,2,1").unwrap();
        assert_eq!(
            a3.beta_sequence(&w).unwrap(),
            vec![r(&[1, 0, 0]), r(&[1, 1, 0]), r(&[1, 1, 1]), r(&[0, 1, 0]), r(&[0, 1, 1]), r(&[0, 0, 1])]
        );
        let w = a3.parse_word("3,1,2,1,3,2").unwrap();
        assert_eq!(
            a3.beta_sequence(&w).unwrap(),
            vec![r(&[0, 0, 1]), r(&[1, 0, 0]), r(&[1, 1, 1]), r(&[0, 1, 1]), r(&[1, 1, 0]), r(&[0, 1, 0])]
        );
        assert!(a3.parse_word("1,1,2").is_err());
        assert!(a3.parse_word("1,5").is_err());
    }

    #[test]
    fn full_words_enumerate_roots() {
        for t in ["A2", "A3", "A4", "D4", "D5", "E6"] {
            let dg = d(t);
            let w = dg.default_word();
            assert_eq!(w.len(), dg.num_positive_roots());
            let mut b = dg.beta_sequence(&w).unwrap();
            b.sort();
            let mut p = dg.positive_roots().to_vec();
            p.sort();
            assert_eq!(b, p, "{t}");
        }
        assert_eq!(d("A3").default_word().one_based(), vec![1, 2, 3, 1, 2, 1]);
    }

    #[test]
    fn braid_moves() {
        let a2 = d("A2");
        let w = a2.parse_word("1,2,1").unwrap();
        let m = BraidMove { pos: 0, kind: MoveKind::Three };
        assert_eq!(a2.apply_braid_move(&w, m).unwrap().one_based(), vec![2, 1, 2]);
        assert!(a2.apply_braid_move(&w, BraidMove { pos: 0, kind: MoveKind::Two }).is_err());
        let a3 = d("A3");
        let w = a3.parse_word("1,3,2,1,3,2").unwrap();
        let w2 = a3.apply_braid_move(&w, BraidMove { pos: 0, kind: MoveKind::Two }).unwrap();
        assert_eq!(w2.one_based(), vec![3, 1, 2, 1, 3, 2]);
    }

    #[test]
    fn three_term_move_fixes_middle_root() {
        let a3 = d("A3");
        for w in a3.all_reduced_words(&a3.default_word(), 100).unwrap() {
            let b = a3.beta_sequence(&w).unwrap();
            for m in a3.legal_moves(&w) {
                let w2 = a3.apply_braid_move(&w, m).unwrap();
                let b2 = a3.beta_sequence(&w2).unwrap();
                let k = m.pos;
                match m.kind {
                    MoveKind::Three => {
                        assert_eq!(b2[k], b[k + 2]);
                        assert_eq!(b2[k + 1], b[k + 1]);
                        assert_eq!(b2[k + 2], b[k]);
                    }
                    MoveKind::Two => {
                        assert_eq!(b2[k], b[k + 1]);
                        assert_eq!(b2[k + 1], b[k]);
                    }
                }
                for t in 0..b.len() {
                    if t < k || t > k + 2 {
                        assert_eq!(b[t], b2[t]);
                    }
                }
                assert_eq!(a3.apply_braid_move(&w2, m).unwrap(), w);
            }
        }
    }

    #[test]
    fn reduced_word_counts() {
        let a3 = d("A3");
        assert_eq!(a3.all_reduced_words(&a3.default_word(), 100).unwrap().len(), 16);
        let a2 = d("A2");
        assert_eq!(a2.all_reduced_words(&a2.default_word(), 100).unwrap().len(), 2);
    }

    #[test]
    fn matsumoto_paths_replay() {
        for t in ["A2", "A3", "D4"] {
            let dg = d(t);
            let words = dg.all_reduced_words(&dg.default_word(), 10_000).unwrap();
            let step = (words.len() / 12).max(1);
            for u in words.iter().step_by(step) {
                for v in words.iter().step_by(step) {
                    let p = dg.matsumoto_path(u, v).unwrap();
                    assert_eq!(dg.replay(u, &p).unwrap().last().unwrap(), v);
                    if u == v {
                        assert!(p.is_empty());
                    }
                }
            }
        }
        let a3 = d("A3");
        let u = a3.parse_word("1,2,3,1,2,1").unwrap();
        let v = a3.parse_word("3,1,2,1,3,2").unwrap();
        let p = a3.matsumoto_path(&u, &v).unwrap();
        assert_eq!(a3.replay(&u, &p).unwrap().last().unwrap(), &v);
        let oracle = a3.bfs_path(&u, &v, 100).unwrap();
        assert!(p.len() >= oracle.len());
        let a2 = d("A2");
        let p = a2.matsumoto_path(&a2.parse_word("1,2,1").unwrap(), &a2.parse_word("2,1,2").unwrap()).unwrap();
        assert_eq!(p, vec![BraidMove { pos: 0, kind: MoveKind::Three }]);
        assert!(a3.matsumoto_path(&u, &a3.parse_word("1,2,3").unwrap()).is_err());
    }

    #[test]
    fn sigma_values() {
        assert_eq!(d("A3").sigma(), vec![2, 1, 0]);
        assert_eq!(d("A2").sigma(), vec![1, 0]);
        assert_eq!(d("D4").sigma(), vec![0, 1, 2, 3]);
        assert_eq!(d("D5").sigma(), vec![0, 1, 2, 4, 3]);
        assert_eq!(d("E6").sigma(), vec![5, 1, 4, 3, 2, 0]);
        assert_eq!(d("A1").sigma(), vec![0]);
    }

    #[test]
    fn first_and_last_letter_words() {
        for t in ["A2", "A3", "D4"] {
            let dg = d(t);
            let sigma = dg.sigma();
            for i in 0..dg.rank() {
                let w = dg.first_letter_word(i);
                assert_eq!(w.letters()[0], i);
                let w = dg.full_word(w.letters().to_vec()).unwrap();
                assert_eq!(dg.beta_sequence(&w).unwrap()[0], Root::simple(dg.rank(), i));
                let w = dg.last_letter_word(i);
                assert_eq!(*w.letters().last().unwrap(), sigma[i]);
                let w = dg.full_word(w.letters().to_vec()).unwrap();
                assert_eq!(*dg.beta_sequence(&w).unwrap().last().unwrap(), Root::simple(dg.rank(), i));
            }
        }
        assert_eq!(d("A2").first_letter_word(0).one_based(), vec![1, 2, 1]);
    }

    /// Brute-force count of multisets of positive roots summing to `nu`.
    fn brute_kostant(dg: &DynkinDiagram, nu: &[i32]) -> u128 {
        fn go(roots: &[Root], nu: &[i32]) -> u128 {
            if nu.iter().all(|&x| x == 0) {
                return 1;
            }
            let Some((first, rest)) = roots.split_first() else { return 0 };
            let mut total = go(rest, nu);
            let mut cur = nu.to_vec();
            loop {
                for (x, y) in cur.iter_mut().zip(&first.0) {
                    *x -= y;
                }
                if cur.iter().any(|&x| x < 0) {
                    break;
                }
                total += go(rest, &cur);
            }
            total
        }
        go(dg.positive_roots(), nu)
    }

    #[test]
    fn kostant_values() {
        assert_eq!(d("A1").kostant_partition(&[1]), 1);
        assert_eq!(d("A2").kostant_partition(&[1, 1]), 2);
        assert_eq!(d("A3").kostant_partition(&[1, 1, 1]), 4);
        for nu in d("A3").weights_of_height(4) {
            assert_eq!(d("A3").kostant_partition(&nu), brute_kostant(&d("A3"), &nu));
        }
        let a3 = d("A3");
        let w = a3.default_word();
        let b = a3.beta_sequence(&w).unwrap();
        for nu in a3.weights_of_height(5) {
            let parts = a3.partitions_along(&b, &nu);
            assert_eq!(parts.len() as u128, a3.kostant_partition(&nu));
            for a in parts {
                assert_eq!(data_weight(&b, &a), nu);
            }
        }
    }

    #[test]
    fn weyl_and_freudenthal() {
        let a2 = d("A2");
        assert_eq!(a2.weyl_dimension(&[1, 0]), 3.into());
        assert_eq!(a2.weyl_dimension(&[1, 1]), 8.into());
        assert_eq!(d("A1").weyl_dimension(&[2]), 3.into());
        assert_eq!(d("A3").weyl_dimension(&[0, 1, 0]), 6.into());
        assert_eq!(d("D4").weyl_dimension(&[0, 1, 0, 0]), 28.into());
        for (t, c) in [("A2", vec![1, 1]), ("A2", vec![2, 1]), ("A3", vec![0, 1, 0]), ("A3", vec![1, 0, 1]), ("D4", vec![0, 1, 0, 0])] {
            let dg = d(t);
            let m = dg.freudenthal(&c);
            let total: u64 = m.values().sum();
            assert_eq!(BigInt::from(total), dg.weyl_dimension(&c), "{t} {c:?}");
        }
        let m = a2.freudenthal(&[1, 1]);
        assert_eq!(m[&vec![1, 1]], 2);
    }

    #[test]
    fn convexity_exhaustive() {
        for t in ["A2", "A3", "D4"] {
            let dg = d(t);
            for w in dg.all_reduced_words(&dg.default_word(), 10_000).unwrap().iter().take(200) {
                assert!(dg.convexity_violations(w, 3).unwrap().is_empty(), "{t} {w}");
            }
        }
    }

    proptest! {
        #[test]
        fn reflections_are_involutions(i in 0usize..4, v in proptest::collection::vec(-3i32..4, 4)) {
            let dg = d("D4");
            let r = Root(v);
            prop_assert_eq!(dg.reflect_vec(i, &dg.reflect_vec(i, &r)), r);
        }

        #[test]
        fn random_walks_stay_reduced(steps in proptest::collection::vec(0usize..16, 0..20)) {
            let dg = d("A3");
            let mut w = dg.default_word();
            for s in steps {
                let moves = dg.legal_moves(&w);
                w = dg.apply_braid_move(&w, moves[s % moves.len()]).unwrap();
            }
            prop_assert!(dg.full_word(w.letters().to_vec()).is_ok());
            let p = dg.matsumoto_path(&w, &dg.default_word()).unwrap();
            let end = dg.replay(&w, &p).unwrap().pop().unwrap();
            prop_assert_eq!(end, dg.default_word());
        }
    }
}
