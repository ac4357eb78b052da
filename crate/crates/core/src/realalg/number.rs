use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::upoly::UPoly;
use crate::polynomial::fmt_rational;

/// A real algebraic number: either an explicit rational, or the unique root
/// of a squarefree integer polynomial inside an open rational interval.
///
/// Clones share the interval, so refining one copy refines all of them.
#[derive(Clone)]
pub enum AlgebraicNumber {
    Rational(BigRational),
    Root(Arc<IsolatedRoot>),
}

pub struct IsolatedRoot {
    poly: Arc<UPoly>,
    state: Mutex<RootState>,
}

#[derive(Clone)]
enum RootState {
    /// Open interval `(lo, hi)` with `sign_lo = sign(poly(lo)) != 0`.
    Open { lo: BigRational, hi: BigRational, sign_lo: i32 },
    /// A bisection point hit the root exactly.
    Exact(BigRational),
}

/// Snapshot of the current enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enclosure {
    Point(BigRational),
    Open(BigRational, BigRational),
}

impl Enclosure {
    pub fn lo(&self) -> &BigRational {
        match self {
            Enclosure::Point(q) => q,
            Enclosure::Open(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            Enclosure::Point(q) => q,
            Enclosure::Open(_, hi) => hi,
        }
    }
}

impl AlgebraicNumber {
    pub fn rational(q: BigRational) -> Self {
        AlgebraicNumber::Rational(q)
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Root of `poly` isolated by `(lo, hi)`. The caller guarantees that
    /// `poly` is squarefree, has exactly one root in the open interval and
    /// does not vanish at either endpoint.
    pub fn from_isolating_interval(poly: Arc<UPoly>, lo: BigRational, hi: BigRational) -> Self {
        if poly.degree() == 1 {
            let c = poly.coeffs();
            return AlgebraicNumber::Rational(BigRational::new(-c[0].clone(), c[1].clone()));
        }
        let sign_lo = poly.sign_at(&lo);
        debug_assert!(sign_lo != 0 && poly.sign_at(&hi) == -sign_lo, "interval does not isolate a simple root");
        AlgebraicNumber::Root(Arc::new(IsolatedRoot { poly, state: Mutex::new(RootState::Open { lo, hi, sign_lo }) }))
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            AlgebraicNumber::Rational(q) => Some(q.clone()),
            AlgebraicNumber::Root(r) => match &*r.state.lock().unwrap() {
                RootState::Exact(q) => Some(q.clone()),
                RootState::Open { .. } => None,
            },
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Defining polynomial; `den*x - num` for rationals.
    pub fn defining_poly(&self) -> Arc<UPoly> {
        match self {
            AlgebraicNumber::Rational(q) => Arc::new(UPoly::linear_for(q)),
            AlgebraicNumber::Root(r) => r.poly.clone(),
        }
    }

    pub fn enclosure(&self) -> Enclosure {
        match self {
            AlgebraicNumber::Rational(q) => Enclosure::Point(q.clone()),
            AlgebraicNumber::Root(r) => match &*r.state.lock().unwrap() {
                RootState::Exact(q) => Enclosure::Point(q.clone()),
                RootState::Open { lo, hi, .. } => Enclosure::Open(lo.clone(), hi.clone()),
            },
        }
    }

    /// Width of the current enclosure.
    pub fn width(&self) -> BigRational {
        match self.enclosure() {
            Enclosure::Point(_) => BigRational::zero(),
            Enclosure::Open(lo, hi) => hi - lo,
        }
    }

    /// One bisection step. Monotone: the enclosure only shrinks.
    pub fn refine(&self) {
        if let AlgebraicNumber::Root(r) = self {
            let mut st = r.state.lock().unwrap();
            if let RootState::Open { lo, hi, sign_lo } = &mut *st {
                let mid = (&*lo + &*hi) / BigRational::from_integer(BigInt::from(2));
                let s = r.poly.sign_at(&mid);
                if s == 0 {
                    *st = RootState::Exact(mid);
                } else if s == *sign_lo {
                    *lo = mid;
                } else {
                    *hi = mid;
                }
            }
        }
    }

    pub fn refine_times(&self, n: usize) {
        for _ in 0..n {
            if self.is_rational() {
                return;
            }
            self.refine();
        }
    }

    /// Refines until the enclosure width is at most `w`.
    pub fn refine_to_width(&self, w: &BigRational) {
        while !self.is_rational() && &self.width() > w {
            self.refine();
        }
    }

    /// Outward-rounded `f64` enclosure.
    pub fn f64_bounds(&self) -> (f64, f64) {
        let e = self.enclosure();
        let lo = e.lo().to_f64().unwrap_or(f64::NEG_INFINITY);
        let hi = e.hi().to_f64().unwrap_or(f64::INFINITY);
        (lo.next_down().next_down(), hi.next_up().next_up())
    }

    /// Approximate value, for diagnostics.
    pub fn to_f64(&self) -> f64 {
        let e = self.enclosure();
        ((e.lo() + e.hi()) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }

    /// Attempts to recognise a rational value with small denominator by
    /// refining and testing the simplest rational in the enclosure.
    pub fn try_rationalize(&self, max_bits: usize) -> Option<BigRational> {
        if let Some(q) = self.as_rational() {
            return Some(q);
        }
        let AlgebraicNumber::Root(r) = self else { return None };
        for _ in 0..max_bits / 4 {
            self.refine_times(4);
            if let Some(q) = self.as_rational() {
                return Some(q);
            }
            if let Enclosure::Open(lo, hi) = self.enclosure() {
                let q = simplest_between(&lo, &hi);
                if r.poly.sign_at(&q) == 0 {
                    *r.state.lock().unwrap() = RootState::Exact(q.clone());
                    return Some(q);
                }
            }
        }
        None
    }
}

/// Exact total order on real algebraic numbers.
pub fn compare(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    if let (AlgebraicNumber::Root(x), AlgebraicNumber::Root(y)) = (a, b) {
        if Arc::ptr_eq(x, y) {
            return Ordering::Equal;
        }
    }
    match (a.as_rational(), b.as_rational()) {
        (Some(p), Some(q)) => p.cmp(&q),
        (Some(p), None) => compare_rational_root(&p, b),
        (None, Some(q)) => compare_rational_root(&q, a).reverse(),
        (None, None) => compare_roots(a, b),
    }
}

/// Orders a rational against an irrational-or-exact root without refinement.
fn compare_rational_root(q: &BigRational, r: &AlgebraicNumber) -> Ordering {
    let AlgebraicNumber::Root(root) = r else { unreachable!() };
    let st = root.state.lock().unwrap().clone();
    match st {
        RootState::Exact(x) => q.cmp(&x),
        RootState::Open { lo, hi, sign_lo } => {
            if q <= &lo {
                return Ordering::Less;
            }
            if q >= &hi {
                return Ordering::Greater;
            }
            let s = root.poly.sign_at(q);
            if s == 0 {
                Ordering::Equal
            } else if s == sign_lo {
                // root lies in (q, hi)
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }
}

fn compare_roots(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    let mut common: Option<UPoly> = None;
    loop {
        if let Some(o) = disjoint_order(a, b) {
            return o;
        }
        if a.is_rational() || b.is_rational() {
            return compare(a, b);
        }
        let g = common.get_or_insert_with(|| a.defining_poly().gcd(&b.defining_poly()));
        if g.degree() > 0 {
            let (ea, eb) = (a.enclosure(), b.enclosure());
            let lo = ea.lo().max(eb.lo()).clone();
            let hi = ea.hi().min(eb.hi()).clone();
            if lo < hi {
                let (sl, sh) = (g.sign_at(&lo), g.sign_at(&hi));
                debug_assert!(sl != 0 && sh != 0);
                if sl != sh {
                    return Ordering::Equal;
                }
            }
        }
        a.refine();
        b.refine();
    }
}

fn disjoint_order(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Option<Ordering> {
    let (ea, eb) = (a.enclosure(), b.enclosure());
    let (a_open, b_open) = (matches!(ea, Enclosure::Open(..)), matches!(eb, Enclosure::Open(..)));
    // open endpoints never coincide with the value, so touching counts as disjoint
    if ea.hi() < eb.lo() || (ea.hi() == eb.lo() && (a_open || b_open)) {
        return Some(Ordering::Less);
    }
    if eb.hi() < ea.lo() || (eb.hi() == ea.lo() && (a_open || b_open)) {
        return Some(Ordering::Greater);
    }
    None
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        compare(self, other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(compare(self, other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicNumber::Rational(q) => write!(f, "{}", fmt_rational(q)),
            AlgebraicNumber::Root(r) => match &*r.state.lock().unwrap() {
                RootState::Exact(q) => write!(f, "{}", fmt_rational(q)),
                RootState::Open { lo, hi, .. } => {
                    write!(f, "root({}, {}, {})", r.poly, fmt_rational(lo), fmt_rational(hi))
                }
            },
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{:.6})", self.to_f64())
    }
}

/// The rational with the smallest denominator (then numerator) strictly
/// inside the open interval `(lo, hi)`, `lo < hi`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi, "empty interval");
    let zero = BigRational::zero();
    if lo < &zero && hi > &zero {
        return zero;
    }
    if hi <= &zero {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(lo, Some(hi))
}

/// Simplest rational in `(lo, hi)` with `lo >= 0`; `hi = None` is +infinity.
fn simplest_positive(lo: &BigRational, hi: Option<&BigRational>) -> BigRational {
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    match hi {
        None => next,
        Some(hi) if &next < hi => next,
        Some(hi) => {
            // lo and hi both in [fl, fl + 1]; recurse on reciprocals of the fractional parts
            let frac_lo = lo - &fl;
            let frac_hi = hi - &fl;
            let inv_lo = frac_hi.recip();
            let inv_hi = if frac_lo.is_zero() { None } else { Some(frac_lo.recip()) };
            let inner = simplest_positive(&inv_lo, inv_hi.as_ref());
            fl + inner.recip()
        }
    }
}

/// Smallest integer strictly above `q`, useful for unbounded sectors.
pub fn integer_above(q: &BigRational) -> BigRational {
    q.floor() + BigRational::one()
}

pub fn integer_below(q: &BigRational) -> BigRational {
    q.ceil() - BigRational::one()
}
