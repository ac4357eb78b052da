//! Real root isolation by Descartes' rule of signs with bisection
//! (Vincent-Collins-Akritas).

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::number::{simplest_between, AlgebraicNumber};
use super::upoly::{taylor_shift_one, UPoly};
use crate::error::{CadError, Result};
use crate::polynomial::Polynomial;

/// Distinct real roots of a univariate polynomial (in whichever single
/// variable it uses), in increasing order.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(CadError::UndefinedInput("root isolation of the zero polynomial"));
    }
    let vars = p.variables();
    if vars.len() > 1 {
        return Err(CadError::DimensionMismatch { needed: vars.len(), given: 1 });
    }
    match vars.first() {
        None => Ok(Vec::new()),
        Some(&v) => Ok(isolate_upoly(&UPoly::from_poly(p, v))),
    }
}

/// Isolation on the integer representation. `p` need not be squarefree.
pub fn isolate_upoly(p: &UPoly) -> Vec<AlgebraicNumber> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let sqf = p.squarefree();
    let mut exact: Vec<BigRational> = Vec::new();
    let mut work = sqf.clone();
    if work.coeffs()[0].is_zero() {
        exact.push(BigRational::zero());
        work = UPoly::primitive(work.coeffs()[1..].to_vec());
    }
    let mut intervals: Vec<(BigRational, BigRational)> = Vec::new();
    let found;
    if work.degree() > 0 {
        let k = cauchy_exponent(&work);
        for (lo, hi) in positive_intervals(&work, k, &mut exact) {
            intervals.push((lo, hi));
        }
        let mut neg_exact = Vec::new();
        for (lo, hi) in positive_intervals(&work.reflect(), k, &mut neg_exact) {
            intervals.push((-hi, -lo));
        }
        exact.extend(neg_exact.into_iter().map(|q| -q));
    }
    found = exact.len();
    // remove rational roots so interval endpoints are never roots of the defining polynomial
    let mut defining = work;
    for q in &exact {
        if !q.is_zero() {
            defining = defining.div_exact(&UPoly::linear_for(q));
        }
    }
    // recognise rational roots hiding inside intervals
    let mut irrational = Vec::with_capacity(intervals.len());
    for (lo, hi) in intervals {
        match rational_root_in(&defining, lo, hi) {
            Ok(q) => exact.push(q),
            Err(iv) => irrational.push(iv),
        }
    }
    let intervals = irrational;
    for q in &exact[found..] {
        defining = defining.div_exact(&UPoly::linear_for(q));
    }
    let defining = Arc::new(defining);
    let mut out: Vec<AlgebraicNumber> = exact.into_iter().map(AlgebraicNumber::Rational).collect();
    out.extend(
        intervals
            .into_iter()
            .map(|(lo, hi)| AlgebraicNumber::from_isolating_interval(defining.clone(), lo, hi)),
    );
    out.sort();
    out
}

/// Largest leading-coefficient size for which rational roots are searched.
const RATIONAL_SEARCH_BITS: u64 = 96;

/// A rational root `a/b` of a primitive integer polynomial has `b | lc`, and
/// two such fractions are at least `1/lc^2` apart. Refines the isolating
/// interval below that width and tests the simplest fraction inside.
/// Returns the refined interval when the root is irrational.
fn rational_root_in(
    p: &UPoly,
    mut lo: BigRational,
    mut hi: BigRational,
) -> std::result::Result<BigRational, (BigRational, BigRational)> {
    let lc = p.leading().abs();
    if lc.bits() > RATIONAL_SEARCH_BITS {
        return Err((lo, hi));
    }
    let target = BigRational::new(BigInt::one(), &lc * &lc * 2);
    let sign_lo = p.sign_at(&lo);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo >= target {
        let mid = (&lo + &hi) / &two;
        match p.sign_at(&mid) {
            0 => return Ok(mid),
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    let q = simplest_between(&lo, &hi);
    if (&lc % q.denom()).is_zero() && p.sign_at(&q) == 0 {
        Ok(q)
    } else {
        Err((lo, hi))
    }
}

/// Smallest `k >= 1` with all roots of modulus below `2^k` (Cauchy bound).
fn cauchy_exponent(p: &UPoly) -> u64 {
    let lead_bits = p.leading().abs().bits() as i64;
    let max_bits = p.coeffs()[..p.degree()].iter().map(|c| c.abs().bits() as i64).max().unwrap_or(0);
    (max_bits - lead_bits + 2).max(1) as u64
}

/// Isolating intervals of the roots in `(0, 2^k)`; exact dyadic roots hit by
/// bisection are appended to `exact`.
fn positive_intervals(p: &UPoly, k: u64, exact: &mut Vec<BigRational>) -> Vec<(BigRational, BigRational)> {
    let d = p.degree();
    // q(x) = p(2^k x), roots of interest in (0, 1)
    let mut q0: Vec<BigInt> = p.coeffs().to_vec();
    for (i, c) in q0.iter_mut().enumerate() {
        *c <<= (k as usize) * i;
    }
    reduce_content(&mut q0);
    let scale = BigRational::from_integer(BigInt::one() << k as usize);
    let mut out = Vec::new();
    // (poly on (0,1), depth, index): interval (c / 2^depth, (c+1) / 2^depth) * 2^k
    let mut stack: Vec<(Vec<BigInt>, u64, BigInt)> = vec![(q0, 0, BigInt::zero())];
    while let Some((q, depth, c)) = stack.pop() {
        let v = descartes_bound(&q);
        if v == 0 {
            continue;
        }
        let denom = BigInt::one() << depth as usize;
        let to_real = |num: BigInt| &scale * BigRational::new(num, denom.clone());
        if v == 1 {
            out.push((to_real(c.clone()), to_real(&c + 1)));
            continue;
        }
        // left half: 2^d q(x/2)
        let mut left: Vec<BigInt> = q.clone();
        for (i, a) in left.iter_mut().enumerate() {
            *a <<= d - i;
        }
        let mid_value: BigInt = left.iter().sum();
        if mid_value.is_zero() {
            let two_denom = BigInt::one() << (depth + 1) as usize;
            exact.push(&scale * BigRational::new(2 * &c + 1, two_denom));
        }
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        reduce_content(&mut left);
        reduce_content(&mut right);
        stack.push((right, depth + 1, 2 * &c + 1));
        stack.push((left, depth + 1, 2 * &c));
    }
    out
}

/// Descartes bound for roots in (0, 1): sign variations of
/// `(x+1)^d q(1/(x+1))`.
fn descartes_bound(q: &[BigInt]) -> usize {
    let mut t: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift_one(&mut t);
    UPoly::sign_variations(&t)
}

fn reduce_content(c: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for a in c.iter() {
        g = g.gcd(a);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for a in c.iter_mut() {
        *a = &*a / &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{parse_polynomial, VarOrder};

    fn roots(s: &str) -> Vec<AlgebraicNumber> {
        let o = VarOrder::new(&["x"]).unwrap();
        isolate_real_roots(&parse_polynomial(s, &o).unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_two() {
        let r = roots("x^2 - 2");
        assert_eq!(r.len(), 2);
        r[1].refine_to_width(&q(1, 100000));
        let b = r[1].enclosure();
        assert!(b.lo() > &q(1414, 1000) && b.hi() < &q(1415, 1000));
        assert!(r[0] < r[1] && r[0].as_rational().is_none());
    }

    #[test]
    fn no_real_roots() {
        assert!(roots("x^2 + 1").is_empty());
        assert!(roots("7").is_empty());
    }

    #[test]
    fn exact_rational_roots() {
        let r = roots("x^3 - x");
        let vals: Vec<_> = r.iter().map(|a| a.as_rational().unwrap()).collect();
        assert_eq!(vals, vec![q(-1, 1), q(0, 1), q(1, 1)]);
        let r = roots("(x - 1)^2*(x + 2)");
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn close_roots_are_separated() {
        let r = roots("(1000*x - 1)*(1001*x - 1)*(x^2 - 3)");
        assert_eq!(r.len(), 4);
        for w in r.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let o = VarOrder::new(&["x"]).unwrap();
        assert!(isolate_real_roots(&Polynomial::zero(o.len())).is_err());
    }
}
