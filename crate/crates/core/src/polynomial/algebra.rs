//! GCD, pseudo-remainders, resultants, discriminants and squarefree bases.

use super::{Polynomial, Var};
use crate::error::{CadError, Result};

/// Pseudo-remainder of `f` by `g` with respect to `v`:
/// `lc(g)^(deg f - deg g + 1) * f = q * g + r` with `deg_v r < deg_v g`.
pub fn pseudo_remainder(f: &Polynomial, g: &Polynomial, v: Var) -> Polynomial {
    let df = f.deg(v);
    let dg = g.deg(v);
    if g.is_zero() {
        panic!("pseudo-remainder by zero");
    }
    if df < dg || f.is_zero() {
        return f.clone();
    }
    let lc_g = g.leading_coeff_in(v);
    let mut r = f.clone();
    let mut steps = 0u32;
    while !r.is_zero() && r.deg(v) >= dg {
        let dr = r.deg(v);
        let lc_r = r.leading_coeff_in(v);
        r = &(&lc_g * &r) - &(&lc_r * &g.shift(v, dr - dg));
        steps += 1;
    }
    let missing = df - dg + 1 - steps;
    if missing > 0 {
        r = &r * &lc_g.pow(missing);
    }
    r
}

/// Normalized greatest common divisor over `Q[x_1..x_n]`.
///
/// Recursive: content gcd times the primitive PRS gcd in the main variable.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    assert_eq!(a.nvars, b.nvars);
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let n = a.nvars;
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a == b {
        return a.normalized();
    }
    let v = a.main_var().max(b.main_var()).expect("non-constant");
    if !a.involves(v) {
        return gcd_with_coeffs(a, b, v);
    }
    if !b.involves(v) {
        return gcd_with_coeffs(b, a, v);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let c = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides").normalized();
    let mut g = b.div_exact(&cb).expect("content divides").normalized();
    if f.deg(v) < g.deg(v) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_remainder(&f, &g, v);
        if r.is_zero() {
            break;
        }
        if !r.involves(v) {
            return c;
        }
        f = g;
        g = r.primitive_part(v);
    }
    (&c * &g.primitive_part(v)).normalized()
}

/// gcd of `a` (free of `v`) with every coefficient of `b` in `v`.
fn gcd_with_coeffs(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    let mut acc = a.normalized();
    for c in b.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            break;
        }
    }
    acc
}

/// Resultant of `p` and `q` with respect to `v`, equal to the Sylvester
/// determinant (with `p`'s rows first). Subresultant PRS.
pub fn resultant(p: &Polynomial, q: &Polynomial, v: Var) -> Result<Polynomial> {
    p.degree_in(v)?;
    let dp = p.deg(v);
    let dq = q.deg(v);
    if dp == 0 || dq == 0 {
        return Err(CadError::DegenerateResultant);
    }
    let n = p.nvars;
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut negate = false;
    if dp < dq {
        std::mem::swap(&mut a, &mut b);
        if dp % 2 == 1 && dq % 2 == 1 {
            negate = !negate;
        }
    }
    let mut g = Polynomial::one(n);
    let mut h = Polynomial::one(n);
    loop {
        let da = a.deg(v);
        let db = b.deg(v);
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return Ok(Polynomial::zero(n));
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact(&divisor).ok_or_else(|| CadError::Internal("subresultant division not exact".into()))?;
        g = a.leading_coeff_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .ok_or_else(|| CadError::Internal("subresultant h-update not exact".into()))?,
        };
        if !b.involves(v) {
            let da = a.deg(v);
            let res = if da == 1 {
                b
            } else {
                b.pow(da)
                    .div_exact(&h.pow(da - 1))
                    .ok_or_else(|| CadError::Internal("subresultant final step not exact".into()))?
            };
            return Ok(if negate { -res } else { res });
        }
    }
}

/// `(-1)^(d(d-1)/2) * res(p, dp/dv) / lc(p)`.
pub fn discriminant(p: &Polynomial, v: Var) -> Result<Polynomial> {
    let d = p.degree_in(v)?;
    if d < 2 {
        return Err(CadError::DegenerateDiscriminant);
    }
    let r = resultant(p, &p.derivative(v), v)?;
    let lc = p.leading_coeff_in(v);
    let q = r
        .div_exact(&lc)
        .ok_or_else(|| CadError::Internal("leading coefficient does not divide res(p, p')".into()))?;
    let sign_flip = (d as u64 * (d as u64 - 1) / 2) % 2 == 1;
    Ok(if sign_flip { -q } else { q })
}

/// Pairwise coprime, squarefree, normalized polynomials with the same zero
/// set as the product of the inputs. Not a factorization into irreducibles.
pub fn squarefree_basis(ps: &[Polynomial], v: Var) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for p in ps {
        if p.is_zero() {
            return Err(CadError::UndefinedInput("zero polynomial in squarefree basis"));
        }
        if p.is_constant() {
            continue;
        }
        p.degree_in(v)?;
        let mut q = p.squarefree_full();
        let mut next = Vec::with_capacity(basis.len() + 2);
        for b in basis.drain(..) {
            if q.is_constant() {
                next.push(b);
                continue;
            }
            let g = gcd(&q, &b);
            if g.is_constant() {
                next.push(b);
                continue;
            }
            let rest = b.div_exact(&g).expect("gcd divides").normalized();
            if !rest.is_constant() {
                next.push(rest);
            }
            q = q.div_exact(&g).expect("gcd divides").normalized();
            next.push(g);
        }
        if !q.is_constant() {
            next.push(q);
        }
        basis = next;
    }
    Ok(super::sort_dedup(basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{parse_polynomial, VarOrder};

    fn setup(names: &[&str]) -> (VarOrder, impl Fn(&str) -> Polynomial) {
        let o = VarOrder::new(names).unwrap();
        let o2 = o.clone();
        (o, move |s: &str| parse_polynomial(s, &o2).unwrap())
    }

    #[test]
    fn content_primitive_examples() {
        let (_, p) = setup(&["y", "x"]);
        let (c, q) = p("(y^2-1)*x^2 + (y^2-1)").content_primitive(1).unwrap();
        assert_eq!(c, p("y^2 - 1"));
        assert_eq!(q, p("x^2 + 1"));
        let (c, q) = p("x + y").content_primitive(1).unwrap();
        assert!(c.is_one());
        assert_eq!(q, p("x + y"));
        assert!(p("0").content_primitive(1).is_err());
    }

    #[test]
    fn imprimitive_product_equality() {
        // (y_{k-1} - y_k)(y_k - z_k) with z_k as main variable
        let (_, p) = setup(&["a", "b", "z"]);
        let poly = p("(a - b)*(b - z)");
        let (c, _) = poly.content_primitive(2).unwrap();
        // normalized: positive lex-leading coefficient, so b - a
        assert_eq!(c, p("b - a"));
        assert!(!poly.is_primitive(2).unwrap());
        let (_, p) = setup(&["y", "x"]);
        assert!(p("x^2 + y^2 - 1").is_primitive(1).unwrap());
        assert!(!p("(y-1)*x + (y-1)").is_primitive(1).unwrap());
    }

    #[test]
    fn gcd_basic() {
        let (_, p) = setup(&["y", "x"]);
        assert_eq!(gcd(&p("x^2 - y^2"), &p("x^2 + 2*x*y + y^2")), p("x + y"));
        assert!(gcd(&p("x - 1"), &p("x + 1")).is_one());
        assert_eq!(gcd(&p("2*x*y - 2*y"), &p("3*y^2")), p("y"));
        assert_eq!(gcd(&p("-x + y"), &p("0")), p("x - y"));
    }

    #[test]
    fn resultant_examples() {
        let (_, p) = setup(&["y", "x"]);
        assert_eq!(resultant(&p("x - y"), &p("x - y^2"), 1).unwrap(), p("y - y^2"));
        let f = p("x^3 - y*x + 2");
        assert!(resultant(&f, &f, 1).unwrap().is_zero());
        assert_eq!(resultant(&p("x - y"), &p("y"), 1), Err(CadError::DegenerateResultant));
        let (_, p) = setup(&["y", "x", "z"]);
        assert_eq!(resultant(&p("z^2 - x"), &p("z^2 - y"), 2).unwrap(), p("(x - y)^2"));
    }

    #[test]
    fn discriminant_examples() {
        let (_, p) = setup(&["c", "b", "x"]);
        assert_eq!(discriminant(&p("x^2 + b*x + c"), 2).unwrap(), p("b^2 - 4*c"));
        assert_eq!(discriminant(&p("x^2 - 2"), 2).unwrap(), p("8"));
        assert!(discriminant(&p("(x - 1)^2"), 2).unwrap().is_zero());
        assert_eq!(discriminant(&p("x - b"), 2), Err(CadError::DegenerateDiscriminant));
        // cubic x^3 + b x + c: -4b^3 - 27c^2
        assert_eq!(discriminant(&p("x^3 + b*x + c"), 2).unwrap(), p("-4*b^3 - 27*c^2"));
    }

    #[test]
    fn squarefree_basis_examples() {
        let (_, p) = setup(&["x"]);
        let b = squarefree_basis(&[p("(x-1)^2*(x+2)")], 0).unwrap();
        assert_eq!(b, vec![p("x^2 + x - 2")]);
        assert_eq!(squarefree_basis(&[p("x"), p("x")], 0).unwrap(), vec![p("x")]);
        let b = squarefree_basis(&[p("x^2 - 1"), p("x - 1")], 0).unwrap();
        assert_eq!(b, vec![p("x - 1"), p("x + 1")]);
        assert!(squarefree_basis(&[p("0")], 0).is_err());
        assert!(squarefree_basis(&[p("5")], 0).unwrap().is_empty());
    }
}
