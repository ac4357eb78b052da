//! The nested `exists z forall x forall y (L => P)` family whose repeated
//! nesting squares the degree of the defined map at every level.

use num_rational::BigRational;

use crate::error::{CadError, Result};
use crate::formula::{Formula, Node, Quantifier, Rel};
use crate::polynomial::{Polynomial, Var, VarOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DhForm {
    /// `Q_1 (L_1 => Q_2 (L_2 => ... => P))`.
    Nested,
    /// `Q_1 ... Q_k (not L_1 or ... or not L_k or P)`.
    Prenex,
    /// `Q'_1 ... Q'_k (L_1 and ... and L_k and not P)`, quantifiers dualized.
    Negated,
    /// Negated form with each `L` written as four disjunctions of equations.
    CnfL,
    /// Negated form with each `L` written as four product equations.
    ProductL,
}

impl std::str::FromStr for DhForm {
    type Err = CadError;

    fn from_str(s: &str) -> Result<DhForm> {
        Ok(match s {
            "nested" => DhForm::Nested,
            "prenex" => DhForm::Prenex,
            "negated" => DhForm::Negated,
            "cnf" | "cnf_L" | "cnf-l" => DhForm::CnfL,
            "product" | "product_L" | "product-l" => DhForm::ProductL,
            other => {
                return Err(CadError::Parse {
                    pos: 0,
                    msg: format!("unknown form `{other}` (nested, prenex, negated, cnf, product)"),
                })
            }
        })
    }
}

/// The three equivalent spellings of one `L` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LForm {
    Disjunctive,
    Cnf,
    Product,
}

#[derive(Debug, Clone)]
pub struct DhInstance {
    pub depth: usize,
    /// Coefficients of `f`, constant term first.
    pub f: Vec<BigRational>,
    pub vars: VarOrder,
}

impl DhInstance {
    /// `f` must be univariate and non-constant (in whatever variable).
    pub fn new(depth: usize, f: &Polynomial) -> Result<DhInstance> {
        if depth == 0 {
            return Err(CadError::UndefinedInput("depth must be at least 1"));
        }
        let vs = f.variables();
        if vs.len() != 1 {
            return Err(CadError::UndefinedInput("f must be univariate and non-constant"));
        }
        let v = vs[0];
        let coeffs = f.coeffs_in(v).iter().map(Polynomial::constant_value).collect();
        let mut names = vec!["x0".to_string(), "y0".to_string()];
        for k in 1..=depth {
            let suffix = if depth == 1 { String::new() } else { k.to_string() };
            for base in ["z", "x", "y"] {
                names.push(format!("{base}{suffix}"));
            }
        }
        Ok(DhInstance { depth, f: coeffs, vars: VarOrder::new(&names)? })
    }

    /// `f(t) = t^2`.
    pub fn square(depth: usize) -> DhInstance {
        let t = Polynomial::var(1, 0);
        DhInstance::new(depth, &t.pow(2)).expect("t^2 is a valid map")
    }

    pub fn n(&self) -> usize {
        2 + 3 * self.depth
    }

    fn nv(&self) -> usize {
        self.vars.len()
    }

    /// `(x_{k}, y_{k})` for `k` in `0..=depth`.
    pub fn xy(&self, k: usize) -> (Var, Var) {
        if k == 0 {
            (0, 1)
        } else {
            (3 * k, 3 * k + 1)
        }
    }

    pub fn z(&self, k: usize) -> Var {
        3 * k - 1
    }

    fn v(&self, i: Var) -> Polynomial {
        Polynomial::var(self.nv(), i)
    }

    fn eq(&self, a: Var, b: Var) -> Node {
        Node::atom(&self.v(a) - &self.v(b), Rel::Eq)
    }

    /// `f(p)` by Horner's rule.
    pub fn apply_f(&self, p: &Polynomial) -> Polynomial {
        let nv = p.nvars();
        let mut acc = Polynomial::zero(nv);
        for c in self.f.iter().rev() {
            acc = &(&acc * p) + &Polynomial::constant(nv, c.clone());
        }
        acc
    }

    /// `P_k(x_k, y_k)`: `x_k = f(y_k)`.
    pub fn p(&self, k: usize) -> Node {
        let (x, y) = self.xy(k);
        Node::atom(&self.v(x) - &self.apply_f(&self.v(y)), Rel::Eq)
    }

    /// The linear factor pairs of the four product equations of block `k`.
    pub fn product_factors(&self, k: usize) -> Vec<(Polynomial, Polynomial)> {
        let (xp, yp) = self.xy(k - 1);
        let (x, y) = self.xy(k);
        let z = self.z(k);
        let d = |a: Var, b: Var| &self.v(a) - &self.v(b);
        vec![(d(yp, y), d(y, z)), (d(yp, y), d(xp, x)), (d(x, z), d(y, z)), (d(x, z), d(xp, x))]
    }

    pub fn product_equalities(&self, k: usize) -> Vec<Polynomial> {
        self.product_factors(k).iter().map(|(a, b)| a * b).collect()
    }

    pub fn l(&self, k: usize, form: LForm) -> Node {
        let (xp, yp) = self.xy(k - 1);
        let (x, y) = self.xy(k);
        let z = self.z(k);
        match form {
            LForm::Disjunctive => Node::or(vec![
                Node::and(vec![self.eq(yp, y), self.eq(x, z)]),
                Node::and(vec![self.eq(y, z), self.eq(xp, x)]),
            ]),
            LForm::Cnf => Node::And(vec![
                Node::Or(vec![self.eq(yp, y), self.eq(y, z)]),
                Node::Or(vec![self.eq(yp, y), self.eq(xp, x)]),
                Node::Or(vec![self.eq(x, z), self.eq(y, z)]),
                Node::Or(vec![self.eq(x, z), self.eq(xp, x)]),
            ]),
            LForm::Product => {
                Node::And(self.product_equalities(k).into_iter().map(|p| Node::atom(p, Rel::Eq)).collect())
            }
        }
    }

    fn quantify(&self, k: usize, dual: bool, body: Node) -> Node {
        let (x, y) = self.xy(k);
        let (e, a) = if dual {
            (Quantifier::Forall, Quantifier::Exists)
        } else {
            (Quantifier::Exists, Quantifier::Forall)
        };
        Node::Quant(e, self.z(k), Box::new(Node::Quant(a, x, Box::new(Node::Quant(a, y, Box::new(body))))))
    }

    /// `P_0(x0, y0)` in the requested form; free variables are `x0, y0`.
    pub fn node(&self, form: DhForm) -> Node {
        let k = self.depth;
        match form {
            DhForm::Nested => {
                let mut body = self.p(k);
                for i in (1..=k).rev() {
                    body = self.quantify(i, false, Node::implies(self.l(i, LForm::Disjunctive), body));
                }
                body
            }
            DhForm::Prenex => {
                let mut parts: Vec<Node> = (1..=k).map(|i| Node::not(self.l(i, LForm::Disjunctive))).collect();
                parts.push(self.p(k));
                let mut body = Node::Or(parts);
                for i in (1..=k).rev() {
                    body = self.quantify(i, false, body);
                }
                body
            }
            DhForm::Negated | DhForm::CnfL | DhForm::ProductL => {
                let lf = match form {
                    DhForm::Negated => LForm::Disjunctive,
                    DhForm::CnfL => LForm::Cnf,
                    _ => LForm::Product,
                };
                let mut parts: Vec<Node> = (1..=k).map(|i| self.l(i, lf)).collect();
                parts.push(Node::not(self.p(k)));
                let mut body = Node::and(parts);
                for i in (1..=k).rev() {
                    body = self.quantify(i, true, body);
                }
                body
            }
        }
    }

    pub fn formula(&self, form: DhForm) -> Formula {
        Formula::new(self.vars.clone(), self.node(form))
    }

    /// `f` composed `2^depth` times applied to `y0`, as a polynomial in `y0`.
    pub fn target(&self) -> Polynomial {
        let mut p = Polynomial::var(self.nv(), 1);
        for _ in 0..(1usize << self.depth) {
            p = self.apply_f(&p);
        }
        p
    }

    /// `forall x0 forall y0. P_0 <=> x0 = f^(2^depth)(y0)`; true by construction.
    pub fn semantics_check(&self, form: DhForm) -> Formula {
        let target = Node::atom(&self.v(0) - &self.target(), Rel::Eq);
        let body = Node::iff(self.node(form), target);
        let root =
            Node::Quant(Quantifier::Forall, 0, Box::new(Node::Quant(Quantifier::Forall, 1, Box::new(body))));
        Formula::new(self.vars.clone(), root)
    }
}

/// `generate_dh(depth, f, form)`.
pub fn generate_dh(depth: usize, f: &Polynomial, form: DhForm) -> Result<Formula> {
    Ok(DhInstance::new(depth, f)?.formula(form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::primitivity_report;

    fn count_quantifiers(n: &Node) -> usize {
        match n {
            Node::Quant(_, _, b) => 1 + count_quantifiers(b),
            Node::Not(a) => count_quantifiers(a),
            Node::And(xs) | Node::Or(xs) => xs.iter().map(count_quantifiers).sum(),
            _ => 0,
        }
    }

    #[test]
    fn depth_one_nested() {
        let d = DhInstance::square(1);
        let f = d.formula(DhForm::Nested);
        assert_eq!(count_quantifiers(&f.root), 3);
        assert_eq!(f.nvars(), 5);
        assert_eq!(f.free_vars(), vec![0, 1]);
        let text = f.to_text();
        assert!(text.starts_with("exists z. forall x. forall y."), "{text}");
        assert!(text.contains("y^2"), "{text}");
    }

    #[test]
    fn census_and_targets() {
        for k in 1..=3 {
            let d = DhInstance::square(k);
            assert_eq!(d.n(), 2 + 3 * k);
            assert_eq!(d.target().degree_in(1).unwrap(), 1 << (1 << k));
            assert_eq!(d.formula(DhForm::Prenex).free_vars(), vec![0, 1]);
            assert!(d.formula(DhForm::Prenex).is_prenex());
            assert!(!d.formula(DhForm::Nested).is_prenex() || k == 1);
        }
    }

    #[test]
    fn product_form_primitivity() {
        let d = DhInstance::square(1);
        let r = primitivity_report(&d.formula(DhForm::ProductL));
        assert_eq!(r.entries.len(), 4);
        // Order x0, y0, z, x, y: (y0-y)(x0-x) and (x-z)(y-z) have content in y.
        assert_eq!(r.imprimitive(), 2);
        for e in &r.entries {
            let v = e.poly.main_var().unwrap();
            let has_free_factor = !e.content.is_constant();
            assert_eq!(!e.primitive, has_free_factor);
            assert!(v >= 2);
        }
        let r2 = primitivity_report(&DhInstance::square(2).formula(DhForm::ProductL));
        assert_eq!(r2.entries.len(), 8);
    }
}
