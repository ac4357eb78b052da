//! Sparse multivariate polynomials with rational coefficients.
//!
//! Variables are identified by their position in a [`VarOrder`]; index 0 is
//! the lowest variable (projected last), the last index is the highest.
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! lexicographic with the highest variable most significant, so the last
//! entry of the map is always the lex-leading term.

mod algebra;
pub(crate) mod parse;

pub use algebra::{gcd, pseudo_remainder, resultant, discriminant, squarefree_basis};
pub use parse::parse_polynomial;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{CadError, Result};

/// Index of a variable inside a [`VarOrder`].
pub type Var = usize;

/// Ordered list of distinct variable names, lowest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarOrder {
    names: Vec<String>,
}

impl VarOrder {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(CadError::OrderingMismatch("variable ordering is empty".into()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            if !is_identifier(n) {
                return Err(CadError::OrderingMismatch(format!("`{n}` is not a valid variable name")));
            }
            if out.iter().any(|m| m == n) {
                return Err(CadError::OrderingMismatch(format!("duplicate variable `{n}`")));
            }
            out.push(n.to_string());
        }
        Ok(VarOrder { names: out })
    }

    /// Parses a comma separated list such as `y,x` (lowest first).
    pub fn parse(list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        VarOrder::new(&names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<Var> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CadError::UnknownVariable(name.to_string()))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Exponent vector. Ordered lexicographically from the highest variable down.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the rationals in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(nvars: usize, v: Var) -> Self {
        Self::monomial(nvars, v, 1, BigRational::one())
    }

    /// `c * v^e`.
    pub fn monomial(nvars: usize, v: Var, e: u32, c: BigRational) -> Self {
        assert!(v < nvars, "variable index out of range");
        let mut m = Monomial::one(nvars);
        m.0[v] = e;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(nvars: usize, it: I) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.0.len(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    /// Value of the constant term.
    pub fn constant_value(&self) -> BigRational {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lex-leading term (highest variable most significant).
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Highest variable with a non-zero exponent.
    pub fn main_var(&self) -> Option<Var> {
        (0..self.nvars).rev().find(|&v| self.involves(v))
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn variables(&self) -> Vec<Var> {
        (0..self.nvars).filter(|&v| self.involves(v)).collect()
    }

    /// Degree in `v`; checked against the arity.
    pub fn degree_in(&self, v: Var) -> Result<u32> {
        if v >= self.nvars {
            return Err(CadError::OrderingMismatch(format!(
                "variable index {v} outside a {}-variable ordering",
                self.nvars
            )));
        }
        Ok(self.deg(v))
    }

    pub(crate) fn deg(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest degree in any single variable.
    pub fn max_var_degree(&self) -> u32 {
        (0..self.nvars).map(|v| self.deg(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, v: Var, k: u32) -> Polynomial {
        if k == 0 {
            return self.clone();
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.0[v] += k;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coeffs_in(&self, v: Var) -> Vec<Polynomial> {
        let d = self.deg(v) as usize;
        let mut out = vec![Polynomial::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut m = m.clone();
            m.0[v] = 0;
            out[e].terms.insert(m, c.clone());
        }
        out
    }

    /// Coefficient of `v^e`.
    pub fn coeff_in(&self, v: Var, e: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == e {
                let mut m = m.clone();
                m.0[v] = 0;
                out.terms.insert(m, c.clone());
            }
        }
        out
    }

    /// Leading coefficient viewed as a univariate polynomial in `v`.
    pub fn leading_coeff_in(&self, v: Var) -> Polynomial {
        self.coeff_in(v, self.deg(v))
    }

    pub fn from_coeffs(nvars: usize, v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.0[v], 0);
                let mut m = m.clone();
                m.0[v] += e as u32;
                out.add_term(m, a.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut m = m.clone();
            m.0[v] = e - 1;
            out.add_term(m, c * rat(e as i64));
        }
        out
    }

    /// Substitutes `v := value`; the result no longer involves `v`.
    pub fn substitute(&self, v: Var, value: &BigRational) -> Polynomial {
        if !self.involves(v) {
            return self.clone();
        }
        let d = self.deg(v) as usize;
        let mut powers = Vec::with_capacity(d + 1);
        powers.push(BigRational::one());
        for i in 1..=d {
            let next = &powers[i - 1] * value;
            powers.push(next);
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut m = m.clone();
            m.0[v] = 0;
            out.add_term(m, c * &powers[e]);
        }
        out
    }

    /// Substitutes several variables at once; each term is reduced once.
    pub fn substitute_many(&self, values: &[(Var, BigRational)]) -> Polynomial {
        let values: Vec<&(Var, BigRational)> = values.iter().filter(|(v, _)| self.involves(*v)).collect();
        if values.is_empty() {
            return self.clone();
        }
        let powers: Vec<Vec<(BigInt, BigInt)>> = values
            .iter()
            .map(|(v, r)| {
                let d = self.deg(*v) as usize;
                let mut ps = vec![(BigInt::one(), BigInt::one())];
                for i in 1..=d {
                    let (n, m) = &ps[i - 1];
                    ps.push((n * r.numer(), m * r.denom()));
                }
                ps
            })
            .collect();
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let (mut num, mut den) = (c.numer().clone(), c.denom().clone());
            for ((v, _), ps) in values.iter().zip(&powers) {
                let e = m.0[*v] as usize;
                if e > 0 {
                    num *= &ps[e].0;
                    den *= &ps[e].1;
                    m.0[*v] = 0;
                }
            }
            out.add_term(m, BigRational::new(num, den));
        }
        out
    }

    /// Evaluates at a full rational point (one value per variable).
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert!(point.len() >= self.nvars || self.variables().iter().all(|&v| v < point.len()));
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Polynomial) -> Option<Polynomial> {
        assert_eq!(self.nvars, other.nvars);
        if other.is_zero() {
            return None;
        }
        if other.is_constant() {
            return Some(self.scale(&other.constant_value().recip()));
        }
        let (lm, lc) = other.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            for (om, oc) in &other.terms {
                rem.add_term(om.mul(&qm), -(oc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Least common multiple of the coefficient denominators and gcd of the
    /// numerators, combined as a single rational factor `c` with
    /// `self = c * primitive_integer_part`.
    fn integer_content(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Canonical representative: integer coefficients with gcd 1 and positive
    /// lex-leading coefficient. Returns `(c, q)` with `self = c * q`.
    pub fn normalize_with_factor(&self) -> (BigRational, Polynomial) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut c = self.integer_content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    pub fn normalized(&self) -> Polynomial {
        self.normalize_with_factor().1
    }

    /// Sign of the lex-leading coefficient.
    pub fn leading_sign(&self) -> i32 {
        let c = self.leading_coefficient();
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Content with respect to `v`: gcd of the coefficients of `self` viewed
    /// as a univariate polynomial in `v`, normalized.
    pub fn content_in(&self, v: Var) -> Polynomial {
        let mut acc: Option<Polynomial> = None;
        for c in self.coeffs_in(v).into_iter().rev() {
            if c.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => c.normalized(),
                Some(a) => gcd(&a, &c),
            });
            if acc.as_ref().is_some_and(Polynomial::is_constant) {
                return Polynomial::one(self.nvars);
            }
        }
        acc.unwrap_or_else(|| Polynomial::one(self.nvars))
    }

    /// Splits `self` into `(content, primitive)` with respect to `v`.
    pub fn content_primitive(&self, v: Var) -> Result<(Polynomial, Polynomial)> {
        if self.is_zero() {
            return Err(CadError::UndefinedInput("content of the zero polynomial"));
        }
        self.degree_in(v)?;
        let content = self.content_in(v);
        let primitive = self
            .div_exact(&content)
            .ok_or_else(|| CadError::Internal("content does not divide polynomial".into()))?;
        Ok((content, primitive))
    }

    pub fn is_primitive(&self, v: Var) -> Result<bool> {
        Ok(self.content_primitive(v)?.0.is_constant())
    }

    /// Normalized primitive part with respect to `v`.
    pub fn primitive_part(&self, v: Var) -> Polynomial {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").normalized()
    }

    /// Squarefree part with respect to `v`, normalized.
    pub fn squarefree_part(&self, v: Var) -> Polynomial {
        if !self.involves(v) {
            return self.normalized();
        }
        let g = gcd(self, &self.derivative(v));
        self.div_exact(&g).expect("gcd divides").normalized()
    }

    /// Squarefree part with respect to every variable: recursive on the
    /// content so factors free of the main variable survive.
    pub fn squarefree_full(&self) -> Polynomial {
        let Some(v) = self.main_var() else {
            return self.normalized();
        };
        let content = self.content_in(v);
        let prim = self.div_exact(&content).expect("content divides");
        let part = prim.squarefree_part(v);
        if content.is_constant() {
            part
        } else {
            (&content.squarefree_full() * &part).normalized()
        }
    }

    /// Re-expresses the polynomial under another ordering containing all of
    /// its variables.
    pub fn remap(&self, from: &VarOrder, to: &VarOrder) -> Result<Polynomial> {
        assert_eq!(from.len(), self.nvars);
        let mut map = vec![usize::MAX; self.nvars];
        for v in self.variables() {
            map[v] = to.index_of(from.name(v))?;
        }
        let mut out = Polynomial::zero(to.len());
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(to.len());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    nm.0[map[v]] = e;
                }
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Embeds into a ring with more variables appended on top.
    pub fn extend_vars(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.0.resize(nvars, 0);
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Deterministic ordering used for sorted output sets: main variable,
    /// degree in it, total degree, then term structure.
    pub fn canonical_cmp(&self, other: &Polynomial) -> Ordering {
        let mv = |p: &Polynomial| p.main_var().map(|v| v as i64).unwrap_or(-1);
        mv(self)
            .cmp(&mv(other))
            .then_with(|| {
                let a = self.main_var().map(|v| self.deg(v)).unwrap_or(0);
                let b = other.main_var().map(|v| other.deg(v)).unwrap_or(0);
                a.cmp(&b)
            })
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| self.num_terms().cmp(&other.num_terms()))
            .then_with(|| {
                for ((ma, ca), (mb, cb)) in self.terms.iter().rev().zip(other.terms.iter().rev()) {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }

    pub fn display<'a>(&'a self, order: &'a VarOrder) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, order }
    }

    pub fn to_text(&self, order: &VarOrder) -> String {
        self.display(order).to_string()
    }
}

/// Sorts and deduplicates a set of polynomials.
pub fn sort_dedup(mut ps: Vec<Polynomial>) -> Vec<Polynomial> {
    ps.sort_by(|a, b| a.canonical_cmp(b));
    ps.dedup();
    ps
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    order: &'a VarOrder,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(fmt_rational(&a));
            }
            for v in (0..m.0.len()).rev() {
                match m.0[v] {
                    0 => {}
                    1 => factors.push(self.order.name(v).to_string()),
                    e => factors.push(format!("{}^{}", self.order.name(v), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(names: &[&str]) -> VarOrder {
        VarOrder::new(names).unwrap()
    }

    fn p(text: &str, o: &VarOrder) -> Polynomial {
        parse_polynomial(text, o).unwrap()
    }

    #[test]
    fn var_order_rejects_duplicates_and_empty() {
        assert!(VarOrder::new(&["x", "x"]).is_err());
        assert!(VarOrder::new::<&str>(&[]).is_err());
        assert!(VarOrder::new(&["X"]).is_err());
        assert_eq!(VarOrder::parse("y, x").unwrap().names(), &["y", "x"]);
    }

    #[test]
    fn degree_examples() {
        let o = order(&["y", "x"]);
        assert_eq!(p("x^2*y + y^3", &o).degree_in(1).unwrap(), 2);
        assert_eq!(p("7", &o).degree_in(1).unwrap(), 0);
        // (x+y)^3 expanded by repeated multiplication
        let s = p("x + y", &o);
        let cube = &(&s * &s) * &s;
        assert_eq!(cube.degree_in(0).unwrap(), 3);
        assert!(matches!(cube.degree_in(5), Err(CadError::OrderingMismatch(_))));
    }

    #[test]
    fn main_var_and_leading_term() {
        let o = order(&["y", "x"]);
        let q = p("y^5 + x*y - 1", &o);
        assert_eq!(q.main_var(), Some(1));
        assert_eq!(q.leading_term().unwrap().0 .0.as_slice(), &[1, 1]);
        assert_eq!(p("3", &o).main_var(), None);
    }

    #[test]
    fn normalization_is_canonical() {
        let o = order(&["y", "x"]);
        let a = p("-2/3*x + 4/3*y", &o);
        let (c, n) = a.normalize_with_factor();
        assert_eq!(n, p("x - 2*y", &o));
        assert_eq!(n.scale(&c), a);
    }

    #[test]
    fn display_round_trips() {
        let o = order(&["y", "x"]);
        for s in ["x^2*y - 3/2*y + 1", "-x", "-1/2", "x^3 - x*y^2 + 7*y - 5"] {
            let q = p(s, &o);
            assert_eq!(q.to_text(&o), s);
            assert_eq!(p(&q.to_text(&o), &o), q);
        }
    }

    #[test]
    fn div_exact_detects_non_divisibility() {
        let o = order(&["y", "x"]);
        let a = p("x^2 - y^2", &o);
        assert_eq!(a.div_exact(&p("x - y", &o)).unwrap(), p("x + y", &o));
        assert!(a.div_exact(&p("x - 2*y", &o)).is_none());
    }

    #[test]
    fn substitute_and_eval_agree() {
        let o = order(&["y", "x"]);
        let q = p("x^2*y - 3*x + y^2", &o);
        let two = rat(2);
        let sub = q.substitute(0, &two);
        assert_eq!(sub, p("2*x^2 - 3*x + 4", &o));
        assert_eq!(q.eval(&[rat(2), rat(3)]), rat(18 - 9 + 4));
    }

    #[test]
    fn remap_between_orders() {
        let a = order(&["y", "x"]);
        let b = order(&["x", "z", "y"]);
        let q = p("x^2*y + y", &a);
        assert_eq!(q.remap(&a, &b).unwrap(), p("x^2*y + y", &b));
        let c = order(&["x"]);
        assert!(q.remap(&a, &c).is_err());
    }
}
