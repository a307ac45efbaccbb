//! Exact scalars in the deformation parameter `q`.
//!
//! [`LaurentPoly`] is an integer Laurent polynomial stored sparsely as a
//! sorted list of `(exponent, coefficient)` pairs with no zero coefficient.
//! [`RatFunc`] is an element of `Q(q)` kept in a reduced canonical form, so
//! structural equality is mathematical equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Integer Laurent polynomial in `q`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    /// `q` itself.
    pub fn q() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(BigInt::one(), e)
    }

    pub fn monomial(c: BigInt, e: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0)
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, BigInt)>>(it: I) -> Self {
        let mut v: Vec<(i32, BigInt)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Self { terms: out }
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_i64_terms(it: &[(i32, i64)]) -> Self {
        Self::from_terms(it.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// True for `±q^k`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.magnitude().is_one()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The substitution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Invariant under `q -> q^-1`.
    pub fn is_bar_symmetric(&self) -> bool {
        self.bar() == *self
    }

    /// All exponents are nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.last().map(|t| &t.1)
    }

    fn divide_coeffs(&self, c: &BigInt) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x / c)).collect(),
        }
    }

    /// Dense ascending coefficient vector of `q^-min * self` and the offset `min`.
    fn to_dense(&self) -> (Vec<BigInt>, i32) {
        let (lo, hi) = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return (Vec::new(), 0),
        };
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (v, lo)
    }

    fn from_dense(v: Vec<BigInt>, offset: i32) -> Self {
        Self {
            terms: v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i32 + offset, c))
                .collect(),
        }
    }

    /// Exact quotient `self / d` in `Z[q, q^-1]`, or `None` when `d` does
    /// not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let (de, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                let (quo, rem) = c.div_rem(dc);
                if !rem.is_zero() {
                    return None;
                }
                out.push((e - de, quo));
            }
            return Some(Self { terms: out });
        }
        let (a, ao) = self.to_dense();
        let (b, bo) = d.to_dense();
        let (q, r) = poly_divrem_exact(a, &b)?;
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(q, ao - bo))
    }

    /// Evaluates at `q = t` modulo the prime `p` (with `t` invertible mod `p`).
    pub fn eval_mod(&self, t: u64, t_inv: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let base = if *e >= 0 { t } else { t_inv };
            let pw = crate::exactla::modp::pow_mod(base, e.unsigned_abs() as u64, p);
            let cm = crate::exactla::modp::bigint_mod(c, p);
            acc = crate::exactla::modp::add_mod(acc, crate::exactla::modp::mul_mod(cm, pw, p), p);
        }
        acc
    }
}

fn add_terms(a: &[(i32, BigInt)], b: &[(i32, BigInt)], negate_b: bool) -> Vec<(i32, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: add_terms(&self.terms, &rhs.terms, false) }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: add_terms(&self.terms, &rhs.terms, true) }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return LaurentPoly {
                terms: self.terms.iter().map(|(x, y)| (x + e, y * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut acc = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                acc[(ea + eb - lo) as usize] += ca * cb;
            }
        }
        LaurentPoly::from_dense(acc, lo)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        self.terms = add_terms(&self.terms, &rhs.terms, false);
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(LaurentPoly, Add, add);
forward_owned!(LaurentPoly, Sub, sub);
forward_owned!(LaurentPoly, Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.magnitude();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let unit = mag.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{}q", mag)?,
                (e, true) => write!(f, "q^{}", e)?,
                (e, false) => write!(f, "{}q^{}", mag, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map from decimal exponents to decimal coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, String>()? {
                    let e: i32 = k.parse().map_err(de::Error::custom)?;
                    let c: BigInt = v.parse().map_err(de::Error::custom)?;
                    terms.push((e, c));
                }
                Ok(LaurentPoly::from_terms(terms))
            }
        }
        d.deserialize_map(V)
    }
}

// ---------------------------------------------------------------------------
// Dense polynomial helpers over Z (ascending coefficient vectors).

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Quotient and remainder when the division is expected to be exact over Z;
/// returns `None` as soon as a non-integral quotient coefficient appears.
fn poly_divrem_exact(mut a: Vec<BigInt>, b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    trim(&mut a);
    let db = b.len() - 1;
    let lb = &b[db];
    if a.len() < b.len() {
        return Some((Vec::new(), a));
    }
    let mut q = vec![BigInt::zero(); a.len() - db];
    while a.len() > db && !a.is_empty() {
        let k = a.len() - 1 - db;
        let (quo, rem) = a.last().unwrap().div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (i, bc) in b.iter().enumerate() {
            a[k + i] -= &quo * bc;
        }
        q[k] = quo;
        trim(&mut a);
    }
    Some((q, a))
}

fn poly_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn poly_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let c = poly_content(v);
    if c.is_zero() || c.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b` (`deg a >= deg b`).
fn poly_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

/// Primitive gcd over Z[q] of two nonzero dense polynomials.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = poly_primitive(a);
    let mut y = poly_primitive(b);
    trim(&mut x);
    trim(&mut y);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = poly_prem(&x, &y);
        x = y;
        y = poly_primitive(&r);
        trim(&mut y);
    }
    if x.last().is_some_and(|c| c.is_negative()) {
        x = x.into_iter().map(|c| -c).collect();
    }
    x
}

/// Gcd in `Z[q, q^-1]` normalized to a primitive polynomial with nonzero
/// constant term and positive leading coefficient.
pub fn laurent_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize_poly(b);
    }
    if b.is_zero() {
        return normalize_poly(a);
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        return LaurentPoly::one();
    }
    let (da, _) = a.to_dense();
    let (db, _) = b.to_dense();
    LaurentPoly::from_dense(poly_gcd(&da, &db), 0)
}

fn normalize_poly(a: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return LaurentPoly::zero();
    }
    let (d, _) = a.to_dense();
    let mut p = poly_primitive(&d);
    if p.last().unwrap().is_negative() {
        p = p.into_iter().map(|c| -c).collect();
    }
    LaurentPoly::from_dense(p, 0)
}

// ---------------------------------------------------------------------------

/// An element of `Q(q)` in reduced form.
///
/// The denominator is a polynomial with nonzero constant term and positive
/// leading coefficient, numerator and denominator are coprime in `Q[q]`, and
/// their integer contents are coprime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from(LaurentPoly::one())
    }

    pub fn q_pow(e: i32) -> Self {
        Self::from(LaurentPoly::q_pow(e))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from(LaurentPoly::constant(c))
    }

    /// `num / den`, reduced. Fails on a zero denominator.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = if den.terms.len() == 1 || num.terms.len() == 1 {
            (num, den)
        } else {
            let g = laurent_gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lo = den.min_exp().unwrap();
        if lo != 0 {
            num = num.shift(-lo);
            den = den.shift(-lo);
        }
        let mut c = num.content().gcd(&den.content());
        if den.leading_coeff().unwrap().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.divide_coeffs(&c);
            den = den.divide_coeffs(&c);
        }
        Self { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True exactly when the denominator is a unit `±q^k`, i.e. the value is
    /// an integer Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.is_laurent() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn bar(&self) -> Self {
        if self.is_laurent() {
            return Self::from(self.num.bar());
        }
        Self::reduce(self.num.bar(), self.den.bar())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// No pole at `q = 0`.
    pub fn regular_at_zero(&self) -> bool {
        self.num.min_exp().is_none_or(|e| e >= 0)
    }

    /// The `q -> 0` limit; a domain error when the function has a pole there.
    pub fn value_at_zero(&self) -> Result<BigRational> {
        if !self.regular_at_zero() {
            return Err(Error::Domain(format!("{} has a pole at q = 0", self)));
        }
        Ok(BigRational::new(self.num.coeff(0), self.den.coeff(0)))
    }

    /// Multiplies by a Laurent polynomial.
    pub fn mul_laurent(&self, p: &LaurentPoly) -> Self {
        if self.is_laurent() {
            return Self::from(&self.num * p);
        }
        Self::reduce(&self.num * p, self.den.clone())
    }

    /// Divides by a nonzero Laurent polynomial.
    pub fn div_laurent(&self, p: &LaurentPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Self::reduce(self.num.clone(), &self.den * p))
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from(&self.num + &rhs.num);
            }
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from(&self.num * &rhs.num);
        }
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

forward_owned!(RatFunc, Add, add);
forward_owned!(RatFunc, Sub, sub);
forward_owned!(RatFunc, Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncRepr { num: self.num.clone(), den: self.den.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RatFuncRepr::deserialize(d)?;
        RatFunc::new(r.num, r.den).map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------

/// The balanced quantum integer `[n] = q^(n-1) + q^(n-3) + ... + q^(1-n)`.
pub fn quantum_integer(n: i64) -> Result<LaurentPoly> {
    if n < 1 {
        return Err(Error::Domain(format!("quantum integer [{}] needs n >= 1", n)));
    }
    let n = n as i32;
    Ok(LaurentPoly::from_terms((0..n).map(|k| (n - 1 - 2 * k, BigInt::one()))))
}

/// `[n]! = [n][n-1]...[2]`, with `[0]! = 1`.
pub fn quantum_factorial(n: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for k in 2..=n as i64 {
        acc = &acc * &quantum_integer(k).unwrap();
    }
    acc
}

/// For `p` with `bar(p) = -p`, the polynomial `f` (nonnegative exponents)
/// with `p = q f(q) - q^-1 f(q^-1)`.
pub fn split_antisymmetric(p: &LaurentPoly) -> Result<LaurentPoly> {
    if p.bar() != -p {
        return Err(Error::Domain(format!("{} is not bar-antisymmetric", p)));
    }
    Ok(LaurentPoly::from_terms(
        p.terms().iter().filter(|(e, _)| *e >= 1).map(|(e, c)| (e - 1, c.clone())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_i64_terms(t)
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_integer(1).unwrap(), LaurentPoly::one());
        assert_eq!(quantum_integer(2).unwrap(), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(quantum_integer(3).unwrap(), lp(&[(2, 1), (0, 1), (-2, 1)]));
        assert!(quantum_integer(0).is_err());
        assert!(quantum_integer(-3).is_err());
        for n in 1..8 {
            assert!(quantum_integer(n).unwrap().is_bar_symmetric());
        }
    }

    #[test]
    fn bar_examples() {
        assert_eq!(RatFunc::q_pow(1).bar(), RatFunc::q_pow(-1));
        let three = RatFunc::from(quantum_integer(3).unwrap());
        assert_eq!(three.bar(), three);
        let d = RatFunc::from(lp(&[(1, 1), (-1, -1)]));
        assert_eq!(d.bar(), -&d);
    }

    #[test]
    fn regularity() {
        let f = RatFunc::new(lp(&[(1, 1)]), lp(&[(0, 1), (1, 1)])).unwrap();
        assert!(f.regular_at_zero());
        assert!(f.value_at_zero().unwrap().is_zero());
        // 1/(q + q^-1) = q/(q^2 + 1)
        let g = RatFunc::new(LaurentPoly::one(), lp(&[(1, 1), (-1, 1)])).unwrap();
        assert!(g.regular_at_zero());
        assert!(g.value_at_zero().unwrap().is_zero());
        let h = RatFunc::q_pow(-1);
        assert!(!h.regular_at_zero());
        assert!(h.value_at_zero().is_err());
        let k = RatFunc::new(lp(&[(0, 3), (2, 1)]), lp(&[(0, 2), (1, 5)])).unwrap();
        assert_eq!(k.value_at_zero().unwrap(), BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_antisymmetric(&lp(&[(1, 1), (-1, -1)])).unwrap(), LaurentPoly::one());
        assert_eq!(split_antisymmetric(&LaurentPoly::zero()).unwrap(), LaurentPoly::zero());
        assert_eq!(split_antisymmetric(&lp(&[(3, 1), (-3, -1)])).unwrap(), lp(&[(2, 1)]));
        assert!(split_antisymmetric(&lp(&[(1, 1)])).is_err());
        assert!(split_antisymmetric(&lp(&[(0, 1)])).is_err());
    }

    #[test]
    fn reduction_is_canonical() {
        // (q^2 - 1)/(q - 1) = q + 1
        let f = RatFunc::new(lp(&[(2, 1), (0, -1)]), lp(&[(1, 1), (0, -1)])).unwrap();
        assert_eq!(f, RatFunc::from(lp(&[(1, 1), (0, 1)])));
        // (q - q^-1)/(q^2 - 1) = q^-1
        let g = RatFunc::new(lp(&[(1, 1), (-1, -1)]), lp(&[(2, 1), (0, -1)])).unwrap();
        assert_eq!(g, RatFunc::q_pow(-1));
        let h = RatFunc::new(lp(&[(0, 2)]), lp(&[(0, -4)])).unwrap();
        assert_eq!(h.numerator(), &lp(&[(0, -1)]));
        assert_eq!(h.denominator(), &lp(&[(0, 2)]));
        assert!(RatFunc::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
        assert!(!h.is_laurent());
        assert!(g.is_laurent());
    }

    #[test]
    fn exact_division() {
        let a = lp(&[(3, 1), (-3, -1)]);
        let b = lp(&[(1, 1), (-1, -1)]);
        assert_eq!(a.div_exact(&b).unwrap(), lp(&[(2, 1), (0, 1), (-2, 1)]));
        assert!(b.div_exact(&a).is_none());
        assert!(lp(&[(0, 3)]).div_exact(&lp(&[(0, 2)])).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(1, 1), (-1, -1)]).to_string(), "q - q^-1");
        assert_eq!(lp(&[(2, 3), (0, -2)]).to_string(), "3q^2 - 2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_roundtrip() {
        let p = lp(&[(-2, 5), (3, -7)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"-2":"5","3":"-7"}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let r = RatFunc::new(lp(&[(0, 1)]), lp(&[(0, 1), (2, 1)])).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"num":{"0":"1"},"den":{"0":"1","2":"1"}}"#);
        let back: RatFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i32..6, -5i64..5), 0..5).prop_map(|v| {
            LaurentPoly::from_terms(v.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((0i32..6, -5i64..5), 0..5).prop_map(|v| {
            LaurentPoly::from_terms(v.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn bar_is_multiplicative_involution(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn quantum_products_are_balanced(n in 1i64..7, m in 1i64..7) {
            let p = &quantum_integer(n).unwrap() * &quantum_integer(m).unwrap();
            prop_assert!(p.is_bar_symmetric());
        }

        #[test]
        fn split_roundtrip(f in arb_poly()) {
            let p = &f.shift(1) - &f.bar().shift(-1);
            prop_assert_eq!(split_antisymmetric(&p).unwrap(), f);
        }

        #[test]
        fn ratfunc_agrees_with_laurent(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            let (ra, rb) = (RatFunc::from(a.clone()), RatFunc::from(b.clone()));
            prop_assert_eq!(&ra * &rb, RatFunc::from(&a * &b));
            prop_assert_eq!(&ra + &rb, RatFunc::from(&a + &b));
            if !c.is_zero() {
                // (a c) / c == a, through the general reduction path.
                let x = RatFunc::new(&a * &c, c.clone()).unwrap();
                prop_assert_eq!(x, ra.clone());
                let y = RatFunc::new(a.clone(), c.clone()).unwrap();
                prop_assert_eq!(y.mul_laurent(&c), ra);
            }
        }

        #[test]
        fn field_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent(), d in arb_laurent()) {
            prop_assume!(!b.is_zero() && !d.is_zero());
            let x = RatFunc::new(a, b).unwrap();
            let y = RatFunc::new(c, d).unwrap();
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(&x * &y, &y * &x);
            if !y.is_zero() {
                prop_assert_eq!(x.div(&y).unwrap().mul(y.clone()), x.clone());
            }
            prop_assert_eq!(x.bar().bar(), x);
        }
    }
}
