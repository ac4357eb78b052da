//! Independent oracles: dense Sylvester determinants by cofactor expansion,
//! Sturm sequences over the rationals, and a plain division algorithm for
//! S-polynomial checks. None of these reuse the library's algorithms.
#![allow(dead_code)]

use std::collections::HashMap;

use cad_core::groebner::MonomialOrder;
use cad_core::polynomial::Monomial;
use cad_core::{Polynomial, Var};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Determinant by Laplace expansion along the first row, memoised on the
/// set of remaining columns.
pub fn laplace_det(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    fn go(m: &[Vec<Polynomial>], row: usize, cols: u32, nvars: usize, memo: &mut HashMap<u32, Polynomial>) -> Polynomial {
        if row == m.len() {
            return Polynomial::one(nvars);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Polynomial::zero(nvars);
        let mut sign_pos = true;
        for c in 0..m.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = go(m, row + 1, cols & !(1 << c), nvars, memo);
                let term = &m[row][c] * &minor;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let full = if m.is_empty() { 0 } else { (1u32 << m.len()) - 1 };
    go(m, 0, full, nvars, &mut HashMap::new())
}

/// Sylvester matrix of `p` (deg m) and `q` (deg n) in `v`: n shifted rows of
/// `p` then m shifted rows of `q`.
pub fn sylvester_matrix(p: &Polynomial, q: &Polynomial, v: Var) -> Vec<Vec<Polynomial>> {
    let nv = p.nvars();
    let pc = p.coeffs_in(v);
    let qc = q.coeffs_in(v);
    let (m, n) = (pc.len() - 1, qc.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (cs, shifts) in [(&pc, n), (&qc, m)] {
        let d = cs.len() - 1;
        for s in 0..shifts {
            let mut row = vec![Polynomial::zero(nv); size];
            for (e, c) in cs.iter().enumerate() {
                row[s + d - e] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

pub fn sylvester_resultant(p: &Polynomial, q: &Polynomial, v: Var) -> Polynomial {
    laplace_det(&sylvester_matrix(p, q, v), p.nvars())
}

/// `(-1)^(d(d-1)/2) res(p, p') / lc(p)` with the Sylvester resultant.
pub fn sylvester_discriminant(p: &Polynomial, v: Var) -> Polynomial {
    let d = p.coeffs_in(v).len() as u64 - 1;
    let r = sylvester_resultant(p, &p.derivative(v), v);
    let lc = p.coeffs_in(v).last().unwrap().clone();
    let qt = r.div_exact(&lc).expect("lc divides res(p, p')");
    if (d * (d - 1) / 2) % 2 == 1 {
        -&qt
    } else {
        qt
    }
}

/// Random polynomial in `nvars` variables with degree at most `deg` in `main`
/// (exactly `deg` when `exact`), small integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, main: Var, deg: u32, exact: bool) -> Polynomial {
    loop {
        let p = random_poly_once(rng, nvars, main, deg, exact);
        if !p.is_zero() && (!exact || p.degree_in(main).unwrap() == deg) {
            return p;
        }
    }
}

fn random_poly_once<R: Rng>(rng: &mut R, nvars: usize, main: Var, deg: u32, exact: bool) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    let terms = rng.gen_range(1..=5);
    for _ in 0..terms {
        let mut m = Monomial::one(nvars);
        for v in 0..nvars {
            m.0[v] = if v == main { rng.gen_range(0..=deg) } else { rng.gen_range(0..=2) };
        }
        let c = rng.gen_range(-5i64..=5);
        p = &p + &Polynomial::from_terms(nvars, [(m, q(c))]);
    }
    if exact {
        let mut m = Monomial::one(nvars);
        m.0[main] = deg;
        for v in 0..nvars {
            if v != main && rng.gen_bool(0.3) {
                m.0[v] = 1;
            }
        }
        let c = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        p = &p + &Polynomial::from_terms(nvars, [(m, q(c))]);
    }
    p
}

/// Random dense-ish polynomial of total degree at most 2 (never constant).
pub fn random_quadratic<R: Rng>(rng: &mut R, nvars: usize) -> Polynomial {
    loop {
        let mut p = Polynomial::zero(nvars);
        for _ in 0..rng.gen_range(2..=5) {
            let mut m = Monomial::one(nvars);
            for _ in 0..rng.gen_range(0..=2) {
                m.0[rng.gen_range(0..nvars)] += 1;
            }
            p = &p + &Polynomial::from_terms(nvars, [(m, q(rng.gen_range(-5i64..=5)))]);
        }
        if !p.is_constant() {
            return p;
        }
    }
}

// ---- Sturm sequences over Q --------------------------------------------

/// Dense rational univariate polynomial, constant term first.
pub type RPoly = Vec<BigRational>;

fn trim(p: &mut RPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rem(a: &RPoly, b: &RPoly) -> RPoly {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1;
        let f = &r[k] / &lb;
        for i in 0..=db {
            let t = &f * &b[i];
            r[k - db + i] -= t;
        }
        trim(&mut r);
    }
    r
}

/// Quotient of `a` by `b`, remainder discarded.
fn quo(a: &RPoly, b: &RPoly) -> RPoly {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let f = &r[k] / &b[db];
        for i in 0..=db {
            let t = &f * &b[i];
            r[k - db + i] -= t;
        }
        out[k - db] = f;
        r.pop();
        trim(&mut r);
    }
    out
}

/// `p / gcd(p, p')`: same distinct roots, all simple.
pub fn squarefree(p: &RPoly) -> RPoly {
    let g = sturm_sequence(p).pop().unwrap();
    quo(p, &g)
}

pub fn derivative(p: &RPoly) -> RPoly {
    p.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect()
}

pub fn eval(p: &RPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub fn sturm_sequence(p: &RPoly) -> Vec<RPoly> {
    let mut seq = vec![p.clone(), derivative(p)];
    trim(seq.last_mut().unwrap());
    while !seq.last().unwrap().is_empty() {
        let n = seq.len();
        let mut r = rem(&seq[n - 2], &seq[n - 1]);
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq.retain(|s| !s.is_empty());
    seq
}

fn variations(seq: &[RPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|s| {
            let v = eval(s, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(a, b]`.
pub fn sturm_count(p: &RPoly, a: &BigRational, b: &BigRational) -> usize {
    let seq = sturm_sequence(&squarefree(p));
    variations(&seq, a) - variations(&seq, b)
}

/// Cauchy bound: every root lies strictly inside `(-B, B)`.
pub fn cauchy_bound(p: &RPoly) -> BigRational {
    let lc = p.last().unwrap().abs();
    let m = p[..p.len() - 1].iter().map(|c| c.abs()).fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    BigRational::one() + m / lc
}

// ---- Groebner oracle ----------------------------------------------------

fn lead(p: &Polynomial, o: MonomialOrder) -> (Monomial, BigRational) {
    let (m, c) = p.terms().max_by(|a, b| o.cmp(a.0, b.0)).expect("non-zero");
    (m.clone(), c.clone())
}

fn mono(nvars: usize, m: Monomial, c: BigRational) -> Polynomial {
    debug_assert_eq!(m.0.len(), nvars);
    Polynomial::from_terms(nvars, [(m, c)])
}

/// Full reduction of `f` by `gs` (textbook multivariate division).
pub fn reduce(f: &Polynomial, gs: &[Polynomial], o: MonomialOrder) -> Polynomial {
    let n = f.nvars();
    let leads: Vec<(Monomial, BigRational)> = gs.iter().map(|g| lead(g, o)).collect();
    let mut p = f.clone();
    let mut r = Polynomial::zero(n);
    while !p.is_zero() {
        let (lm, lc) = lead(&p, o);
        match leads.iter().position(|(m, _)| m.divides(&lm)) {
            Some(i) => {
                let factor = mono(n, lm.div(&leads[i].0), &lc / &leads[i].1);
                p = &p - &(&factor * &gs[i]);
            }
            None => {
                let t = mono(n, lm, lc);
                r = &r + &t;
                p = &p - &t;
            }
        }
    }
    r
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, o: MonomialOrder) -> Polynomial {
    let n = f.nvars();
    let (mf, cf) = lead(f, o);
    let (mg, cg) = lead(g, o);
    let l = mf.lcm(&mg);
    let a = mono(n, l.div(&mf), BigRational::one() / cf);
    let b = mono(n, l.div(&mg), BigRational::one() / cg);
    &(&a * f) - &(&b * g)
}

/// Every S-polynomial of the basis reduces to zero.
pub fn s_pairs_reduce_to_zero(gs: &[Polynomial], o: MonomialOrder) -> bool {
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            if !reduce(&s_polynomial(&gs[i], &gs[j], o), gs, o).is_zero() {
                return false;
            }
        }
    }
    true
}
