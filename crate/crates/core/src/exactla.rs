//! Exact dense linear algebra over `Q(q)`.
//!
//! Elimination is fraction-free (Bareiss) over `Z[q, q^-1]` after clearing
//! row denominators; back substitution falls back to field arithmetic.
//! Pivoting always takes the first nonzero entry, so results are reproducible.

use crate::qscalar::{laurent_gcd, LaurentPoly, RatFunc};
use crate::{Error, Result};

/// Dense matrix with `RatFunc` entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RatFunc>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Domain("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<RatFunc>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Domain("column length mismatch".into()));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RatFunc {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFunc) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[RatFunc] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[RatFunc]) -> Result<Vec<RatFunc>> {
        if x.len() != self.cols {
            return Err(Error::Domain(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(RatFunc::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        self.echelon(None).pivots.len()
    }

    /// A basis of the right null space `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<RatFunc>> {
        let ech = self.echelon(None);
        let mut out = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &(_, c) in &ech.pivots {
                v[c] = true;
            }
            v
        };
        for free in (0..self.cols).filter(|&c| !pivot_set[c]) {
            let mut x = vec![RatFunc::zero(); self.cols];
            x[free] = RatFunc::one();
            ech.back_substitute(&mut x, None);
            out.push(x);
        }
        out
    }

    /// Some `x` with `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[RatFunc]) -> Result<Option<Vec<RatFunc>>> {
        if b.len() != self.rows {
            return Err(Error::Domain(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let ech = self.echelon(Some(b));
        let rhs = ech.rhs.as_ref().unwrap();
        if rhs[ech.pivots.len()..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut x = vec![RatFunc::zero(); self.cols];
        ech.back_substitute(&mut x, Some(rhs));
        Ok(Some(x))
    }

    fn echelon(&self, b: Option<&[RatFunc]>) -> Echelon {
        let width = self.cols + usize::from(b.is_some());
        let mut a: Vec<Vec<LaurentPoly>> = (0..self.rows)
            .map(|r| {
                let mut row: Vec<RatFunc> = self.row(r).to_vec();
                if let Some(b) = b {
                    row.push(b[r].clone());
                }
                clear_denominators(&row)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prev = LaurentPoly::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..self.rows {
                for j in 0..width {
                    if j == c {
                        continue;
                    }
                    let t = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                    a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][c] = LaurentPoly::zero();
            }
            prev = a[r][c].clone();
            pivots.push((r, c));
            r += 1;
        }
        let rhs = b.map(|_| a.iter().map(|row| RatFunc::from(row[self.cols].clone())).collect());
        Echelon { rows: a, pivots, rhs }
    }
}

struct Echelon {
    rows: Vec<Vec<LaurentPoly>>,
    pivots: Vec<(usize, usize)>,
    rhs: Option<Vec<RatFunc>>,
}

impl Echelon {
    /// Fills the pivot variables of `x` from its free variables.
    fn back_substitute(&self, x: &mut [RatFunc], rhs: Option<&Vec<RatFunc>>) {
        let ncols = x.len();
        for &(r, c) in self.pivots.iter().rev() {
            let mut acc = rhs.map_or(RatFunc::zero(), |b| b[r].clone());
            for j in c + 1..ncols {
                if !self.rows[r][j].is_zero() && !x[j].is_zero() {
                    acc = &acc - &x[j].mul_laurent(&self.rows[r][j]);
                }
            }
            x[c] = acc.div_laurent(&self.rows[r][c]).expect("nonzero pivot");
        }
    }
}

/// Multiplies a row by a common denominator so every entry is Laurent.
pub fn clear_denominators(row: &[RatFunc]) -> Vec<LaurentPoly> {
    let l = common_denominator(row.iter());
    row.iter()
        .map(|x| {
            let scaled = x.mul_laurent(&l);
            scaled.as_laurent().cloned().expect("common denominator clears")
        })
        .collect()
}

/// Least common multiple (up to units) of the denominators.
pub fn common_denominator<'a, I: Iterator<Item = &'a RatFunc>>(it: I) -> LaurentPoly {
    let mut l = LaurentPoly::one();
    for x in it {
        let d = x.denominator();
        if d.is_one() || *d == l {
            continue;
        }
        let g = laurent_gcd(&l, d);
        l = &l * &d.div_exact(&g).expect("gcd divides");
    }
    l
}

/// Fraction-free inverse of a square Laurent matrix: `N X = d I`.
#[derive(Clone, Debug)]
pub struct LaurentSolver {
    n: usize,
    adj: Vec<Vec<LaurentPoly>>,
    det: LaurentPoly,
}

impl LaurentSolver {
    /// `None` when the matrix is singular.
    pub fn new(m: &[Vec<LaurentPoly>]) -> Option<Self> {
        let n = m.len();
        assert!(m.iter().all(|r| r.len() == n), "square matrix expected");
        let mut a: Vec<Vec<LaurentPoly>> = m
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }));
                row
            })
            .collect();
        let mut prev = LaurentPoly::one();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, p);
            for i in 0..n {
                if i == k {
                    continue;
                }
                if a[i][k].is_zero() {
                    if !prev.is_one() || !a[k][k].is_one() {
                        for j in 0..2 * n {
                            if a[i][j].is_zero() {
                                continue;
                            }
                            let t = &a[k][k] * &a[i][j];
                            a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                        }
                    }
                    continue;
                }
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = LaurentPoly::zero();
            }
            prev = a[k][k].clone();
        }
        let adj = a.into_iter().map(|row| row[n..].to_vec()).collect();
        Some(Self { n, adj, det: prev })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn det(&self) -> &LaurentPoly {
        &self.det
    }

    /// `d * N^-1 b` with Laurent arithmetic only.
    pub fn apply_scaled(&self, b: &[LaurentPoly]) -> Vec<LaurentPoly> {
        self.adj
            .iter()
            .map(|row| {
                let mut acc = LaurentPoly::zero();
                for (x, y) in row.iter().zip(b) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += &(x * y);
                    }
                }
                acc
            })
            .collect()
    }

    /// The exact solution of `N x = b / denom`.
    pub fn solve(&self, b: &[LaurentPoly], denom: &LaurentPoly) -> Vec<RatFunc> {
        let d = &self.det * denom;
        self.apply_scaled(b)
            .into_iter()
            .map(|v| RatFunc::new(v, d.clone()).expect("nonzero determinant"))
            .collect()
    }
}

/// Arithmetic modulo the Mersenne prime `2^61 - 1`, used to pick pivots
/// quickly; exact results never depend on it.
pub mod modp {
    use num_bigint::BigInt;
    use num_traits::{Signed, ToPrimitive};

    pub const P: u64 = (1u64 << 61) - 1;

    pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    }

    pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + p - b
        }
    }

    pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b, p);
            }
            b = mul_mod(b, b, p);
            e >>= 1;
        }
        acc
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn bigint_mod(c: &BigInt, p: u64) -> u64 {
        let r = (c.abs() % p).to_u64().unwrap();
        if c.is_negative() && r != 0 {
            p - r
        } else {
            r
        }
    }

    /// Row-echelon reduction; returns `(pivot_row_original_index, pivot_col)`.
    pub fn pivots(mut m: Vec<Vec<u64>>, p: u64) -> Vec<(usize, usize)> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut order: Vec<usize> = (0..rows).collect();
        let mut out = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(k) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, k);
            order.swap(r, k);
            let inv = inv_mod(m[r][c], p);
            for i in r + 1..rows {
                if m[i][c] == 0 {
                    continue;
                }
                let f = mul_mod(m[i][c], inv, p);
                for j in c..cols {
                    let t = mul_mod(f, m[r][j], p);
                    m[i][j] = sub_mod(m[i][j], t, p);
                }
            }
            out.push((order[r], c));
            r += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_i64_terms(t)
    }

    fn rf(t: &[(i32, i64)]) -> RatFunc {
        RatFunc::from(lp(t))
    }

    #[test]
    fn identity_solve() {
        let m = QMatrix::identity(3);
        let b = vec![rf(&[(1, 1)]), rf(&[(0, 2)]), RatFunc::zero()];
        assert_eq!(m.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn one_by_one_division() {
        let m = QMatrix::from_rows(vec![vec![rf(&[(1, 1), (-1, 1)])]]).unwrap();
        let x = m.solve(&[rf(&[(2, 1), (0, 1)])]).unwrap().unwrap();
        assert_eq!(x, vec![RatFunc::q_pow(1)]);
    }

    #[test]
    fn inconsistent() {
        let m = QMatrix::from_rows(vec![vec![RatFunc::one()], vec![RatFunc::one()]]).unwrap();
        assert!(m.solve(&[RatFunc::one(), RatFunc::zero()]).unwrap().is_none());
        assert!(m.solve(&[RatFunc::one()]).is_err());
    }

    #[test]
    fn ranks() {
        let z = QMatrix::zeros(3, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().len(), 3);
        let m = QMatrix::from_rows(vec![
            vec![RatFunc::one(), RatFunc::q_pow(1)],
            vec![RatFunc::q_pow(-1), RatFunc::one()],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(|x| x.is_zero()));
        let d = QMatrix::from_rows(vec![
            vec![RatFunc::one(), RatFunc::zero()],
            vec![RatFunc::zero(), RatFunc::q_pow(1)],
        ])
        .unwrap();
        assert_eq!(d.rank(), 2);
        assert!(d.kernel_basis().is_empty());
    }

    #[test]
    fn laurent_solver_inverse() {
        let n = vec![
            vec![lp(&[(1, 1), (-1, 1)]), lp(&[(0, 1)]), lp(&[(2, 1)])],
            vec![lp(&[(0, 2)]), lp(&[(1, -1)]), lp(&[(0, 1), (1, 1)])],
            vec![lp(&[(-1, 1)]), lp(&[(0, 3)]), lp(&[(0, 1)])],
        ];
        let s = LaurentSolver::new(&n).unwrap();
        // N * adj = det * I
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = LaurentPoly::zero();
                for k in 0..3 {
                    acc += &(&n[i][k] * &s.adj[k][j]);
                }
                let want = if i == j { s.det().clone() } else { LaurentPoly::zero() };
                assert_eq!(acc, want);
            }
        }
        assert!(LaurentSolver::new(&[vec![lp(&[(0, 1)]), lp(&[(1, 1)])], vec![lp(&[(-1, 1)]), lp(&[(0, 1)])]]).is_none());
    }

    fn arb_entry() -> impl Strategy<Value = RatFunc> {
        (proptest::collection::vec((-2i32..3, -2i64..3), 0..3), 0usize..3).prop_map(|(t, d)| {
            let num = LaurentPoly::from_i64_terms(&t.iter().map(|&(e, c)| (e, c)).collect::<Vec<_>>());
            let den = match d {
                0 => LaurentPoly::one(),
                1 => LaurentPoly::from_i64_terms(&[(1, 1), (-1, 1)]),
                _ => LaurentPoly::from_i64_terms(&[(0, 1), (2, -1)]),
            };
            RatFunc::new(num, den).unwrap()
        })
    }

    fn arb_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(arb_entry(), c), r)
                .prop_map(|rows| QMatrix::from_rows(rows).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn solve_has_zero_residual(m in arb_matrix(), seed in proptest::collection::vec(arb_entry(), 3)) {
            // b in the column space, so a solution must exist.
            let x0: Vec<RatFunc> = seed.into_iter().take(m.cols()).chain(std::iter::repeat(RatFunc::one())).take(m.cols()).collect();
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("consistent");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
        }
    }
}
