//! Buchberger's algorithm, ideal dimension and elimination ideals.
//!
//! Variables follow the crate convention: index 0 is the lowest variable, so
//! lex is "highest variable first", exactly the [`Monomial`] ordering.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CadError, Result};
use crate::polynomial::{Monomial, Polynomial, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                // smaller exponent in the lowest differing variable wins
                for (x, y) in a.0.iter().zip(b.0.iter()) {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegRevLex => "degrevlex",
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = CadError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
            other => Err(CadError::Parse { pos: 0, msg: format!("unknown monomial order `{other}`") }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealBasis {
    pub nvars: usize,
    pub gens: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub is_groebner: bool,
}

impl IdealBasis {
    /// Plain generating set, not assumed to be a Gröbner basis.
    pub fn new(nvars: usize, gens: Vec<Polynomial>, order: MonomialOrder) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        IdealBasis { nvars, gens, order, is_groebner: false }
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Polynomial::is_constant)
    }
}

/// Terms sorted decreasingly in a monomial order.
#[derive(Clone, Debug)]
struct Sparse {
    terms: Vec<(Monomial, BigRational)>,
}

impl Sparse {
    fn from_poly(p: &Polynomial, ord: MonomialOrder) -> Sparse {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Sparse { terms }
    }

    fn to_poly(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(nvars, self.terms.iter().cloned())
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigRational {
        &self.terms[0].1
    }

    fn make_monic(&mut self) {
        if let Some(lc) = self.terms.first().map(|t| t.1.clone()) {
            if !lc.is_one() {
                for t in &mut self.terms {
                    t.1 = &t.1 / &lc;
                }
            }
        }
    }

    /// `self - c * m * other`, merging in order.
    fn sub_scaled(&self, c: &BigRational, m: &Monomial, other: &Sparse, ord: MonomialOrder) -> Sparse {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Monomial, BigRational)> = other.terms.iter().map(|(om, oc)| (om.mul(m), -(oc * c))).collect();
        while i < self.terms.len() || j < shifted.len() {
            let pick = if i == self.terms.len() {
                Ordering::Less
            } else if j == shifted.len() {
                Ordering::Greater
            } else {
                ord.cmp(&self.terms[i].0, &shifted[j].0)
            };
            match pick {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(shifted[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &self.terms[i].1 + &shifted[j].1;
                    if !s.is_zero() {
                        out.push((self.terms[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Sparse { terms: out }
    }
}

/// Full reduction of `p` modulo `basis`.
fn reduce(p: &Sparse, basis: &[&Sparse], ord: MonomialOrder) -> Sparse {
    let mut rem = p.clone();
    let mut out: Vec<(Monomial, BigRational)> = Vec::new();
    while !rem.terms.is_empty() {
        let (m, c) = rem.terms[0].clone();
        match basis.iter().filter(|g| g.lm().divides(&m)).min_by_key(|g| g.terms.len()) {
            Some(g) => {
                let q = &c / g.lc();
                rem = rem.sub_scaled(&q, &m.div(g.lm()), g, ord);
            }
            None => {
                out.push((m, c));
                rem.terms.remove(0);
            }
        }
    }
    Sparse { terms: out }
}

/// Remainder of multivariate division of `p` by the generators of `b`.
pub fn normal_form(p: &Polynomial, b: &IdealBasis) -> Polynomial {
    let basis: Vec<Sparse> = b.gens.iter().map(|g| Sparse::from_poly(g, b.order)).collect();
    reduce(&Sparse::from_poly(p, b.order), &basis.iter().collect::<Vec<_>>(), b.order).to_poly(p.nvars())
}

fn s_polynomial(f: &Sparse, g: &Sparse, ord: MonomialOrder) -> Sparse {
    let l = f.lm().lcm(g.lm());
    let a = Sparse { terms: f.terms.iter().map(|(m, c)| (m.mul(&l.div(f.lm())), c / f.lc())).collect() };
    a.sub_scaled(&g.lc().recip(), &l.div(g.lm()), g, ord)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, with monic
/// generators sorted increasingly by leading monomial.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Result<IdealBasis> {
    let nvars = gens.first().map(Polynomial::nvars).ok_or(CadError::UndefinedInput("empty generator set"))?;
    if gens.iter().any(Polynomial::is_zero) {
        return Err(CadError::UndefinedInput("zero generator"));
    }
    let mut store: Vec<Sparse> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for p in gens {
        let reducers: Vec<&Sparse> = active.iter().map(|&k| &store[k]).collect();
        let mut h = reduce(&Sparse::from_poly(p, order), &reducers, order);
        if !h.terms.is_empty() {
            h.make_monic();
            store.push(h);
            update(&store, &mut active, &mut pairs);
        }
    }
    // normal strategy: smallest lcm first
    while let Some(at) = (0..pairs.len()).min_by(|&a, &b| {
        let la = store[pairs[a].0].lm().lcm(store[pairs[a].1].lm());
        let lb = store[pairs[b].0].lm().lcm(store[pairs[b].1].lm());
        order.cmp(&la, &lb)
    }) {
        let (i, j) = pairs.swap_remove(at);
        let reducers: Vec<&Sparse> = active.iter().map(|&k| &store[k]).collect();
        let mut h = reduce(&s_polynomial(&store[i], &store[j], order), &reducers, order);
        if h.terms.is_empty() {
            continue;
        }
        h.make_monic();
        store.push(h);
        update(&store, &mut active, &mut pairs);
    }
    let g = active.into_iter().map(|k| store[k].clone()).collect();
    Ok(IdealBasis { nvars, gens: auto_reduce(g, order, nvars), order, is_groebner: true })
}

/// Gebauer–Möller installation of the newest element of `store`: Buchberger's
/// product and chain criteria applied to new and pending pairs, and removal
/// of active elements whose leading monomial the new one divides.
fn update(store: &[Sparse], active: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>) {
    let h = store.len() - 1;
    let lh = store[h].lm();
    let lcm = |a: usize, b: usize| store[a].lm().lcm(store[b].lm());

    let mut candidates: Vec<usize> = active.clone();
    let mut kept: Vec<usize> = Vec::new();
    while let Some(g) = candidates.pop() {
        let l = lcm(h, g);
        let dominated = || candidates.iter().chain(&kept).any(|&g2| lcm(h, g2).divides(&l));
        if store[g].lm().is_coprime(lh) || !dominated() {
            kept.push(g);
        }
    }
    let fresh = kept.into_iter().filter(|&g| !store[g].lm().is_coprime(lh)).map(|g| (g, h));

    pairs.retain(|&(a, b)| {
        let l = lcm(a, b);
        !lh.divides(&l) || lcm(a, h) == l || lcm(b, h) == l
    });
    pairs.extend(fresh);
    active.retain(|&g| !lh.divides(store[g].lm()));
    active.push(h);
}

fn auto_reduce(g: Vec<Sparse>, order: MonomialOrder, nvars: usize) -> Vec<Polynomial> {
    // drop generators whose leading monomial is divisible by another's
    let mut minimal: Vec<Sparse> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && q.lm().divides(p.lm()) && (q.lm() != p.lm() || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Sparse> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s).collect();
        let head = Sparse { terms: vec![minimal[i].terms[0].clone()] };
        let tail = Sparse { terms: minimal[i].terms[1..].to_vec() };
        let mut r = reduce(&tail, &others, order);
        r.terms.insert(0, head.terms[0].clone());
        r.make_monic();
        out.push(r);
    }
    out.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    out.into_iter().map(|s| s.to_poly(nvars)).collect()
}

fn leading_monomial(p: &Polynomial, order: MonomialOrder) -> Monomial {
    p.terms().map(|(m, _)| m.clone()).max_by(|a, b| order.cmp(a, b)).expect("non-zero")
}

/// Krull dimension: size of a largest variable subset no leading monomial
/// lives in. `-1` for the unit ideal.
pub fn dimension(b: &IdealBasis) -> Result<i64> {
    if !b.is_groebner {
        return Err(CadError::NotGroebner);
    }
    if b.is_unit() {
        return Ok(-1);
    }
    let n = b.nvars;
    let supports: Vec<u64> = b
        .gens
        .iter()
        .map(|g| {
            let m = leading_monomial(g, b.order);
            m.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (v, _)| acc | (1 << v))
        })
        .collect();
    let mut best = 0;
    for set in 0u64..(1u64 << n) {
        let size = set.count_ones() as i64;
        if size > best && supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    Ok(best)
}

/// Generators of a lex basis that involve only the `keep` variables, which
/// must be the lowest ones.
pub fn elimination_ideal(b: &IdealBasis, keep: &[Var]) -> Result<Vec<Polynomial>> {
    if b.order != MonomialOrder::Lex {
        return Err(CadError::NotLex);
    }
    if !b.is_groebner {
        return Err(CadError::NotGroebner);
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.iter().enumerate().any(|(i, &v)| i != v) || sorted.len() > b.nvars {
        return Err(CadError::InvalidElimination(format!("{keep:?} is not a prefix of the variable order")));
    }
    let k = sorted.len();
    Ok(b.gens.iter().filter(|g| g.variables().iter().all(|&v| v < k)).cloned().collect())
}

/// Every S-polynomial of the basis reduces to zero.
pub fn is_groebner_basis(gens: &[Polynomial], order: MonomialOrder) -> bool {
    let g: Vec<Sparse> = gens.iter().filter(|p| !p.is_zero()).map(|p| Sparse::from_poly(p, order)).collect();
    let refs: Vec<&Sparse> = g.iter().collect();
    for j in 0..g.len() {
        for i in 0..j {
            if !reduce(&s_polynomial(&g[i], &g[j], order), &refs, order).terms.is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{parse_polynomial, VarOrder};

    fn ps(o: &VarOrder, xs: &[&str]) -> Vec<Polynomial> {
        xs.iter().map(|s| parse_polynomial(s, o).unwrap()).collect()
    }

    #[test]
    fn normal_form_examples() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let b = IdealBasis::new(2, ps(&o, &["x - y^2"]), MonomialOrder::Lex);
        assert_eq!(normal_form(&ps(&o, &["x^2"])[0], &b), ps(&o, &["y^4"])[0]);
        assert!(normal_form(&b.gens[0], &b).is_zero());
        let b = IdealBasis::new(2, ps(&o, &["x", "y"]), MonomialOrder::Lex);
        assert!(normal_form(&Polynomial::one(2), &b).is_one());
    }

    #[test]
    fn buchberger_examples() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let b = buchberger(&ps(&o, &["x^2 - y", "y^2 - x"]), MonomialOrder::Lex).unwrap();
        assert_eq!(b.gens, ps(&o, &["y^4 - y", "x - y^2"]));
        let b = buchberger(&ps(&o, &["x + y", "x - y"]), MonomialOrder::Lex).unwrap();
        assert_eq!(b.gens, ps(&o, &["y", "x"]));
        let b = buchberger(&ps(&o, &["x"]), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(b.gens, ps(&o, &["x"]));
        assert!(buchberger(&[], MonomialOrder::Lex).is_err());
    }

    #[test]
    fn dimension_examples() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let b = buchberger(&ps(&o, &["x^2 - y", "y^2 - x"]), MonomialOrder::Lex).unwrap();
        assert_eq!(dimension(&b).unwrap(), 0);
        let b = buchberger(&ps(&o, &["x"]), MonomialOrder::Lex).unwrap();
        assert_eq!(dimension(&b).unwrap(), 1);
        let zero = IdealBasis { nvars: 3, gens: vec![], order: MonomialOrder::Lex, is_groebner: true };
        assert_eq!(dimension(&zero).unwrap(), 3);
        let unit = buchberger(&ps(&o, &["x", "x - 1"]), MonomialOrder::Lex).unwrap();
        assert_eq!(dimension(&unit).unwrap(), -1);
        assert_eq!(dimension(&IdealBasis::new(2, ps(&o, &["x"]), MonomialOrder::Lex)), Err(CadError::NotGroebner));
    }

    #[test]
    fn elimination_examples() {
        let o = VarOrder::new(&["y", "x", "z"]).unwrap();
        let b = buchberger(&ps(&o, &["z^2 - x", "z^2 - y"]), MonomialOrder::Lex).unwrap();
        assert_eq!(elimination_ideal(&b, &[0, 1]).unwrap(), ps(&o, &["x - y"]));
        let b = buchberger(&ps(&o, &["z - x*y", "z - x - y"]), MonomialOrder::Lex).unwrap();
        assert_eq!(elimination_ideal(&b, &[0, 1]).unwrap(), ps(&o, &["x*y - x - y"]));
        let b = buchberger(&ps(&o, &["x - 1"]), MonomialOrder::Lex).unwrap();
        assert!(elimination_ideal(&b, &[]).unwrap().is_empty());
        assert!(elimination_ideal(&b, &[1]).is_err());
        let d = buchberger(&ps(&o, &["x - 1"]), MonomialOrder::DegRevLex).unwrap();
        assert_eq!(elimination_ideal(&d, &[0]), Err(CadError::NotLex));
    }

    #[test]
    fn degrevlex_order() {
        let o = VarOrder::new(&["z", "y", "x"]).unwrap();
        let m = |s: &str| leading_monomial(&ps(&o, &[s])[0], MonomialOrder::DegRevLex);
        // x > y > z; x*y*z^2 vs x^2*z^2 ... degree ties broken by the lowest variable
        assert_eq!(m("x*z + y^2"), m("y^2"));
        assert_eq!(m("x^2 + y*z"), m("x^2"));
        assert_eq!(m("x + y^2"), m("y^2"));
    }
}
