//! Exact sign evaluation at algebraic sample points and root isolation over
//! them.
//!
//! Values are first enclosed by interval arithmetic (an outward-rounded
//! `f64` pass, then an exact rational pass) while the coordinates are
//! refined. When an enclosure keeps straddling zero, the value is tested
//! exactly: iterated resultants against the coordinates' defining
//! polynomials give a univariate polynomial having the value as a root, and
//! a lower bound on its non-zero roots decides whether the value is zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::habicht::{pmv, sturm_habicht_cached};
use super::isolate::isolate_upoly;
use super::number::{AlgebraicNumber, Enclosure};
use super::upoly::UPoly;
use crate::error::{CadError, Result};
use crate::polynomial::{resultant, Monomial, Polynomial, Var};

/// Coordinates of a point, one per variable from the lowest upwards.
pub type SamplePoint = Vec<AlgebraicNumber>;

/// Outcome of specializing a polynomial over a sample and isolating roots in
/// the remaining variable.
#[derive(Debug, Clone)]
pub enum RootsAbove {
    Roots(Vec<AlgebraicNumber>),
    /// The specialized polynomial is identically zero (nullification).
    IdenticallyZero,
}

const QUICK_ROUNDS: usize = 3;
const REFINE_STEP: usize = 6;
const NONZERO_ROUNDS: usize = 40;
const MAX_REFINEMENTS: usize = 20_000;

fn sign_rat(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Substitutes every coordinate that is currently known to be rational.
/// Returns the reduced polynomial and the algebraic variables it still uses.
fn specialize(p: &Polynomial, s: &[AlgebraicNumber], skip: Option<Var>) -> (Polynomial, Vec<Var>) {
    let mut values = Vec::new();
    let mut alg = Vec::new();
    for v in p.variables() {
        if Some(v) == skip || v >= s.len() {
            continue;
        }
        match s[v].as_rational() {
            Some(r) => values.push((v, r)),
            None => alg.push(v),
        }
    }
    (p.substitute_many(&values), alg)
}

fn check_coverage(p: &Polynomial, covered: usize, skip: Option<Var>) -> Result<()> {
    for v in p.variables() {
        if Some(v) != skip && v >= covered {
            return Err(CadError::DimensionMismatch { needed: v + 1, given: covered });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
struct Fi(f64, f64);

impl Fi {
    fn point(x: f64) -> Fi {
        Fi(x, x)
    }

    fn from_rat(q: &BigRational) -> Fi {
        match q.to_f64() {
            Some(x) if x.is_finite() => Fi(x.next_down().next_down(), x.next_up().next_up()),
            _ => Fi(f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn add(self, o: Fi) -> Fi {
        let r = Fi((self.0 + o.0).next_down(), (self.1 + o.1).next_up());
        if r.0.is_nan() || r.1.is_nan() {
            Fi(f64::NEG_INFINITY, f64::INFINITY)
        } else {
            r
        }
    }

    fn mul(self, o: Fi) -> Fi {
        let ps = [self.0 * o.0, self.0 * o.1, self.1 * o.0, self.1 * o.1];
        if ps.iter().any(|x| x.is_nan()) {
            return Fi(f64::NEG_INFINITY, f64::INFINITY);
        }
        let lo = ps.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Fi(lo.next_down(), hi.next_up())
    }

    fn pow(self, e: u32) -> Fi {
        if e == 0 {
            return Fi::point(1.0);
        }
        if e % 2 == 0 && self.0 <= 0.0 && self.1 >= 0.0 {
            let m = self.0.abs().max(self.1.abs());
            let mut acc = Fi::point(m);
            for _ in 1..e {
                acc = acc.mul(Fi::point(m));
            }
            return Fi(0.0, acc.1);
        }
        let mut acc = self;
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn f64_enclosure(p: &Polynomial, boxes: &[Option<Fi>]) -> Fi {
    let mut acc = Fi::point(0.0);
    for (m, c) in p.terms() {
        let mut t = Fi::from_rat(c);
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(boxes[v].expect("coordinate box").pow(e));
            }
        }
        acc = acc.add(t);
    }
    acc
}

#[derive(Clone, Debug)]
struct Qi(BigRational, BigRational);

impl Qi {
    fn mul(&self, o: &Qi) -> Qi {
        let ps = [&self.0 * &o.0, &self.0 * &o.1, &self.1 * &o.0, &self.1 * &o.1];
        let lo = ps.iter().min().unwrap().clone();
        let hi = ps.iter().max().unwrap().clone();
        Qi(lo, hi)
    }

    fn pow(&self, e: u32) -> Qi {
        if e % 2 == 0 && !self.0.is_positive() && !self.1.is_negative() {
            let m = if self.0.abs() > self.1.abs() { self.0.abs() } else { self.1.abs() };
            return Qi(BigRational::zero(), num_traits::pow(m, e as usize));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }
}

fn exact_enclosure(p: &Polynomial, boxes: &[Option<Qi>]) -> Qi {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = Qi(c.clone(), c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&boxes[v].as_ref().expect("coordinate box").pow(e));
            }
        }
        lo += t.0;
        hi += t.1;
    }
    Qi(lo, hi)
}

fn decisive(lo_pos: bool, hi_neg: bool) -> Option<i32> {
    if lo_pos {
        Some(1)
    } else if hi_neg {
        Some(-1)
    } else {
        None
    }
}

/// Sign from enclosures alone, or `None` if they straddle zero.
fn interval_sign(p: &Polynomial, point: &[AlgebraicNumber], vars: &[Var]) -> Option<i32> {
    let n = p.nvars();
    let mut fboxes = vec![None; n];
    for &v in vars {
        let (lo, hi) = point[v].f64_bounds();
        fboxes[v] = Some(Fi(lo, hi));
    }
    let f = f64_enclosure(p, &fboxes);
    if let Some(s) = decisive(f.0 > 0.0, f.1 < 0.0) {
        return Some(s);
    }
    let q = exact_qbox(p, point, vars);
    decisive(q.0.is_positive(), q.1.is_negative())
}

fn exact_qbox(p: &Polynomial, point: &[AlgebraicNumber], vars: &[Var]) -> Qi {
    let mut qboxes = vec![None; p.nvars()];
    for &v in vars {
        let e = point[v].enclosure();
        qboxes[v] = Some(match e {
            Enclosure::Point(x) => Qi(x.clone(), x),
            Enclosure::Open(lo, hi) => Qi(lo, hi),
        });
    }
    exact_enclosure(p, &qboxes)
}

fn refine_all(point: &[AlgebraicNumber], vars: &[Var], steps: usize) {
    for &v in vars {
        point[v].refine_times(steps);
    }
}

/// Univariate polynomial (in a fresh variable) having `q(point)` as a root,
/// obtained by eliminating the algebraic coordinates one at a time.
fn value_polynomial(q: &Polynomial, point: &[AlgebraicNumber], alg: &[Var]) -> Result<UPoly> {
    let n = q.nvars();
    let t = n;
    let mut acc = &Polynomial::var(n + 1, t) - &q.extend_vars(n + 1);
    for &v in alg.iter().rev() {
        if !acc.involves(v) {
            continue;
        }
        let m = point[v].defining_poly().to_poly(n + 1, v);
        acc = resultant(&m, &acc, v)?;
    }
    if acc.is_zero() {
        return Err(CadError::Internal("value polynomial vanished".into()));
    }
    Ok(UPoly::from_poly(&acc, t))
}

/// Exact sign of `p` at the point `s`.
pub fn sign_at(p: &Polynomial, s: &[AlgebraicNumber]) -> Result<i32> {
    check_coverage(p, s.len(), None)?;
    let (q, alg) = specialize(p, s, None);
    if q.is_constant() {
        return Ok(sign_rat(&q.constant_value()));
    }
    for _ in 0..QUICK_ROUNDS {
        if let Some(sg) = interval_sign(&q, s, &alg) {
            return Ok(sg);
        }
        refine_all(s, &alg, REFINE_STEP);
    }
    // coordinates may have collapsed to rationals during refinement
    let (q, alg) = specialize(&q, s, None);
    if q.is_constant() {
        return Ok(sign_rat(&q.constant_value()));
    }
    if alg.len() == 1 {
        return sign_one_algebraic(&q, &s[alg[0]], s, &alg);
    }
    let vp = value_polynomial(&q, s, &alg)?;
    let zero_bound = if vp.coeffs()[0].is_zero() {
        let sq = vp.squarefree();
        let rest = UPoly::from_coeffs(sq.coeffs()[1..].to_vec());
        if rest.degree() == 0 {
            return Ok(0);
        }
        Some(rest.root_modulus_lower_bound())
    } else {
        None
    };
    for _ in 0..MAX_REFINEMENTS {
        let (q, alg) = specialize(&q, s, None);
        if q.is_constant() {
            return Ok(sign_rat(&q.constant_value()));
        }
        let enc = exact_qbox(&q, s, &alg);
        if let Some(sg) = decisive(enc.0.is_positive(), enc.1.is_negative()) {
            return Ok(sg);
        }
        if let Some(delta) = &zero_bound {
            if enc.0 > -delta.clone() && &enc.1 < delta {
                return Ok(0);
            }
        }
        refine_all(s, &alg, 2);
    }
    Err(CadError::Internal("sign determination did not converge".into()))
}

/// `q` involves the single algebraic coordinate `a`: `q(a) = 0` iff `a` is
/// a root of `gcd(m, q)`, `m` the defining polynomial of `a`.
fn sign_one_algebraic(q: &Polynomial, a: &AlgebraicNumber, s: &[AlgebraicNumber], alg: &[Var]) -> Result<i32> {
    let x = alg[0];
    let g = a.defining_poly().gcd(&UPoly::from_poly(q, x));
    if g.degree() > 0 {
        match a.enclosure() {
            Enclosure::Point(r) => return Ok(sign_rat(&q.substitute(x, &r).constant_value())),
            Enclosure::Open(lo, hi) => {
                if g.sign_at(&lo) != g.sign_at(&hi) {
                    return Ok(0);
                }
            }
        }
    }
    for _ in 0..MAX_REFINEMENTS {
        if let Some(r) = a.as_rational() {
            return Ok(sign_rat(&q.substitute(x, &r).constant_value()));
        }
        if let Some(sg) = interval_sign(q, s, alg) {
            return Ok(sg);
        }
        a.refine_times(2);
    }
    Err(CadError::Internal("sign determination did not converge".into()))
}

/// Sign of a value known to be non-zero: interval refinement only, with the
/// exact test as a last resort.
pub fn sign_at_nonzero(p: &Polynomial, s: &[AlgebraicNumber]) -> Result<i32> {
    check_coverage(p, s.len(), None)?;
    let (q, alg) = specialize(p, s, None);
    if q.is_constant() {
        return Ok(sign_rat(&q.constant_value()));
    }
    for _ in 0..NONZERO_ROUNDS {
        if let Some(sg) = interval_sign(&q, s, &alg) {
            return Ok(sg);
        }
        refine_all(s, &alg, REFINE_STEP);
    }
    sign_at(p, s)
}

/// Point `s` extended by `value` as the coordinate of `v` (`v >= s.len()`).
fn extend_point(s: &[AlgebraicNumber], v: Var, value: &AlgebraicNumber) -> Vec<AlgebraicNumber> {
    let mut out: Vec<AlgebraicNumber> = s.to_vec();
    while out.len() < v {
        out.push(AlgebraicNumber::from_int(0));
    }
    out.push(value.clone());
    out
}

/// Distinct real roots in `v` of `p` specialized at `s`, in increasing order.
pub fn roots_above(p: &Polynomial, s: &[AlgebraicNumber], v: Var) -> Result<RootsAbove> {
    if v < s.len() {
        return Err(CadError::DimensionMismatch { needed: v, given: s.len() });
    }
    check_coverage(p, s.len(), Some(v))?;
    let (q, _) = specialize(p, s, Some(v));
    let coeffs = q.coeffs_in(v);
    let mut degree = None;
    for j in (0..coeffs.len()).rev() {
        if sign_at(&coeffs[j], s)? != 0 {
            degree = Some(j);
            break;
        }
    }
    let degree = match degree {
        None => return Ok(RootsAbove::IdenticallyZero),
        Some(0) => return Ok(RootsAbove::Roots(Vec::new())),
        Some(d) => d,
    };
    let n = q.nvars();
    let effective = Polynomial::from_coeffs(n, v, &coeffs[..=degree]);
    let (effective, alg) = specialize(&effective, s, Some(v));
    if alg.is_empty() {
        return Ok(RootsAbove::Roots(isolate_upoly(&UPoly::from_poly(&effective, v))));
    }
    let expected = if degree == 1 {
        1
    } else {
        let truncated = Polynomial::from_coeffs(n, v, &p.coeffs_in(v)[..=degree]);
        let mut signs = Vec::new();
        for c in sturm_habicht_cached(&truncated, v).iter() {
            signs.push(sign_at(c, s)?);
        }
        let k = pmv(&signs);
        if k == 0 {
            return Ok(RootsAbove::Roots(Vec::new()));
        }
        k as usize
    };
    let eliminant = eliminate(&effective, s, &alg, v)?;
    let mut alive = isolate_upoly(&eliminant);
    let mut vars = alg.clone();
    vars.push(v);
    let mut rounds = 0;
    loop {
        alive.retain(|c| {
            let pt = extend_point(s, v, c);
            interval_sign(&effective, &pt, &vars).is_none()
        });
        if alive.len() == expected {
            break;
        }
        if alive.len() < expected {
            return Err(CadError::Internal(format!("expected {expected} roots, found {}", alive.len())));
        }
        refine_all(s, &alg, REFINE_STEP);
        for c in &alive {
            c.refine_times(REFINE_STEP);
        }
        rounds += 1;
        if rounds > MAX_REFINEMENTS {
            return Err(CadError::Internal("root selection did not converge".into()));
        }
    }
    Ok(RootsAbove::Roots(alive))
}

/// Eliminates the algebraic coordinates from `p`, leaving a univariate
/// polynomial in `v` whose roots include those of `p(s, v)`.
fn eliminate(p: &Polynomial, s: &[AlgebraicNumber], alg: &[Var], v: Var) -> Result<UPoly> {
    let n = p.nvars();
    let mut acc = p.clone();
    for &x in alg.iter().rev() {
        if !acc.involves(x) {
            continue;
        }
        let mut m = (*s[x].defining_poly()).clone();
        let mut r = resultant(&m.to_poly(n, x), &acc, x)?;
        if r.is_zero() {
            // some conjugate of s[x] nullifies acc: drop those conjugates
            let g = conjugate_gcd(&acc, &m, x);
            if g.degree() > 0 && g.degree() < m.degree() {
                m = m.div_exact(&g);
                r = resultant(&m.to_poly(n, x), &acc, x)?;
            }
        }
        if r.is_zero() {
            return Err(CadError::Internal("elimination resultant vanished identically".into()));
        }
        acc = r;
    }
    if acc.variables().iter().any(|&x| x != v) {
        return Err(CadError::Internal("elimination left extra variables".into()));
    }
    Ok(UPoly::from_poly(&acc, v))
}

/// gcd of `m(x)` with every coefficient of `p` viewed as a polynomial in all
/// variables except `x`.
fn conjugate_gcd(p: &Polynomial, m: &UPoly, x: Var) -> UPoly {
    let n = p.nvars();
    let mut groups: std::collections::BTreeMap<Monomial, Vec<(u32, BigRational)>> = Default::default();
    for (mono, c) in p.terms() {
        let mut key = mono.clone();
        let e = key.0[x];
        key.0[x] = 0;
        groups.entry(key).or_default().push((e, c.clone()));
    }
    let mut g = m.clone();
    for (_, terms) in groups {
        let mut poly = Polynomial::zero(n);
        for (e, c) in terms {
            poly = &poly + &Polynomial::monomial(n, x, e, c);
        }
        g = g.gcd(&UPoly::from_poly(&poly, x));
        if g.degree() == 0 {
            break;
        }
    }
    g
}

/// Integer just outside every root of the specialized polynomial is not
/// needed by callers; this helper exposes an exact rational evaluation.
pub fn eval_rational(p: &Polynomial, point: &[BigRational]) -> BigRational {
    let mut full = point.to_vec();
    while full.len() < p.nvars() {
        full.push(BigRational::zero());
    }
    p.eval(&full)
}

#[allow(dead_code)]
fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{parse_polynomial, VarOrder};
    use crate::realalg::isolate_real_roots;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn half_sqrt2() -> AlgebraicNumber {
        let o = VarOrder::new(&["y"]).unwrap();
        let roots = isolate_real_roots(&parse_polynomial("2*y^2 - 1", &o).unwrap()).unwrap();
        roots[1].clone()
    }

    #[test]
    fn sign_on_circle_at_algebraic_point() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let circle = parse_polynomial("x^2 + y^2 - 1", &o).unwrap();
        let a = half_sqrt2();
        let pt = vec![a.clone(), a.clone()];
        assert_eq!(sign_at(&circle, &pt).unwrap(), 0);
        let off = parse_polynomial("x^2 + y^2 - 1 - 1/1000000000000", &o).unwrap();
        assert_eq!(sign_at(&off, &pt).unwrap(), -1);
        let x_minus_y = parse_polynomial("x - y", &o).unwrap();
        assert_eq!(sign_at(&x_minus_y, &pt).unwrap(), 0);
    }

    #[test]
    fn sign_at_rational_points() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let p = parse_polynomial("x*y - 1", &o).unwrap();
        let pt = vec![AlgebraicNumber::from_int(2), AlgebraicNumber::from_int(3)];
        assert_eq!(sign_at(&p, &pt).unwrap(), 1);
        let x = parse_polynomial("x", &VarOrder::new(&["x"]).unwrap()).unwrap();
        assert_eq!(sign_at(&x, &[AlgebraicNumber::from_int(0)]).unwrap(), 0);
        assert!(matches!(sign_at(&p, &pt[..1]), Err(CadError::DimensionMismatch { .. })));
    }

    #[test]
    fn roots_above_examples() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let circle = parse_polynomial("x^2 + y^2 - 1", &o).unwrap();
        match roots_above(&circle, &[AlgebraicNumber::from_int(0)], 1).unwrap() {
            RootsAbove::Roots(rs) => {
                let v: Vec<_> = rs.iter().map(|a| a.as_rational().unwrap()).collect();
                assert_eq!(v, vec![r(-1, 1), r(1, 1)]);
            }
            _ => panic!(),
        }
        match roots_above(&circle, &[AlgebraicNumber::from_int(2)], 1).unwrap() {
            RootsAbove::Roots(rs) => assert!(rs.is_empty()),
            _ => panic!(),
        }
        let null = parse_polynomial("y*x - y", &o).unwrap();
        assert!(matches!(
            roots_above(&null, &[AlgebraicNumber::from_int(0)], 1).unwrap(),
            RootsAbove::IdenticallyZero
        ));
    }

    #[test]
    fn roots_above_algebraic_base() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let a = half_sqrt2();
        let circle = parse_polynomial("x^2 + y^2 - 1", &o).unwrap();
        let RootsAbove::Roots(rs) = roots_above(&circle, &[a.clone()], 1).unwrap() else { panic!() };
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[1], a);
        // cubic with a double root over y = 1/sqrt(2): (x - y)^2 (x + 1)
        let cubic = parse_polynomial("(x - y)^2*(x + 1)", &o).unwrap();
        let RootsAbove::Roots(rs) = roots_above(&cubic, &[a.clone()], 1).unwrap() else { panic!() };
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].as_rational(), Some(r(-1, 1)));
        assert_eq!(rs[1], a);
        // tangency: x^2 + y^2 - 1 at y = 1 has the double root 0
        let RootsAbove::Roots(rs) = roots_above(&circle, &[AlgebraicNumber::from_int(1)], 1).unwrap() else { panic!() };
        assert_eq!(rs.len(), 1);
    }
}
