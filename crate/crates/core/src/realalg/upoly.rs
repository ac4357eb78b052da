use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::polynomial::{Monomial, Polynomial, Var};

/// Dense univariate polynomial with integer coefficients, lowest degree
/// first. Kept trimmed; constructors return the primitive representative
/// with a positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<BigInt>,
}

impl UPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> UPoly {
        let mut p = UPoly { coeffs };
        p.trim();
        p
    }

    /// Primitive, positive-leading version of an integer coefficient vector.
    pub fn primitive(coeffs: Vec<BigInt>) -> UPoly {
        let mut p = UPoly::from_coeffs(coeffs);
        p.make_primitive();
        p
    }

    /// `den * x - num`, the defining polynomial of a rational.
    pub fn linear_for(q: &BigRational) -> UPoly {
        UPoly::primitive(vec![-q.numer().clone(), q.denom().clone()])
    }

    /// Clears denominators of a polynomial in the single variable `v`.
    pub fn from_poly(p: &Polynomial, v: Var) -> UPoly {
        let d = p.deg(v) as usize;
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (m, c) in p.terms() {
            debug_assert!(m.0.iter().enumerate().all(|(i, &e)| i == v || e == 0), "not univariate");
            let scaled = c * BigRational::from_integer(den.clone());
            coeffs[m.0[v] as usize] = scaled.to_integer();
        }
        UPoly::primitive(coeffs)
    }

    pub fn to_poly(&self, nvars: usize, v: Var) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(e, c)| {
                let mut m = Monomial::one(nvars);
                m.0[v] = e as u32;
                (m, BigRational::from_integer(c.clone()))
            }),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    fn make_primitive(&mut self) {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return;
        }
        if self.coeffs.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        if !g.is_one() {
            for c in &mut self.coeffs {
                *c = &*c / &g;
            }
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("non-zero")
    }

    /// Sign of `p(q)` computed with integers only.
    pub fn sign_at(&self, q: &BigRational) -> i32 {
        if self.is_zero() {
            return 0;
        }
        // b^d p(a/b) = sum c_i a^i b^(d-i) with b > 0, by homogeneous Horner
        let (a, b) = (q.numer(), q.denom());
        let d = self.degree();
        let mut h = self.coeffs[d].clone();
        let mut bpow = BigInt::one();
        for i in (0..d).rev() {
            if !b.is_one() {
                bpow *= b;
            }
            h = h * a + &self.coeffs[i] * &bpow;
        }
        sign_of(&h)
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly { coeffs: vec![] };
        }
        UPoly::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    /// Pseudo-remainder over the integers.
    fn prem(&self, g: &UPoly) -> UPoly {
        let dg = g.degree();
        let lc = g.leading().clone();
        let mut r = self.coeffs.clone();
        while r.len() > dg && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                r[i + dr - dg] -= &lr * gc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        UPoly::from_coeffs(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() {
            return UPoly::primitive(other.coeffs.clone());
        }
        if other.is_zero() {
            return UPoly::primitive(self.coeffs.clone());
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (UPoly::primitive(self.coeffs.clone()), UPoly::primitive(other.coeffs.clone()))
        } else {
            (UPoly::primitive(other.coeffs.clone()), UPoly::primitive(self.coeffs.clone()))
        };
        loop {
            if b.degree() == 0 {
                return UPoly::from_coeffs(vec![BigInt::one()]);
            }
            let mut r = a.prem(&b);
            if r.is_zero() {
                return b;
            }
            r.make_primitive();
            a = b;
            b = r;
        }
    }

    /// Exact division over the rationals; result made primitive.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let n = self.degree();
        let m = d.degree();
        assert!(!d.is_zero() && n >= m, "bad exact division");
        let mut rem: Vec<BigRational> = self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let lc = BigRational::from_integer(d.leading().clone());
        let mut q = vec![BigRational::zero(); n - m + 1];
        for i in (0..=n - m).rev() {
            let c = &rem[i + m] / &lc;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * BigRational::from_integer(dc.clone());
            }
            q[i] = c;
        }
        debug_assert!(rem.iter().all(Zero::is_zero), "division not exact");
        let mut den = BigInt::one();
        for c in &q {
            den = den.lcm(c.denom());
        }
        UPoly::primitive(q.into_iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
    }

    pub fn squarefree(&self) -> UPoly {
        if self.degree() == 0 {
            return UPoly::primitive(self.coeffs.clone());
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            UPoly::primitive(self.coeffs.clone())
        } else {
            self.div_exact(&g)
        }
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> UPoly {
        UPoly::primitive(
            self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect(),
        )
    }

    /// Number of sign variations of the coefficient sequence.
    pub fn sign_variations(coeffs: &[BigInt]) -> usize {
        let mut last = 0;
        let mut count = 0;
        for c in coeffs {
            let s = sign_of(c);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Lower bound `delta > 0` such that every non-zero complex root has
    /// modulus above `delta`. Requires a non-zero constant term.
    pub fn root_modulus_lower_bound(&self) -> BigRational {
        let a0 = self.coeffs[0].abs();
        assert!(!a0.is_zero());
        let m = self.coeffs.iter().skip(1).map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
        BigRational::new(a0.clone(), a0 + m)
    }
}

/// In-place Taylor shift `p(x) -> p(x + 1)`.
pub(crate) fn taylor_shift_one(c: &mut [BigInt]) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
}

pub(crate) fn sign_of(c: &BigInt) -> i32 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = crate::polynomial::VarOrder::new(&["x"]).expect("static");
        write!(f, "{}", self.to_poly(1, 0).display(&o))
    }
}
