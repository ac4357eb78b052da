//! Boolean combinations of polynomial sign conditions with quantifiers.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! formula := quant | imp
//! quant   := ("exists" | "forall") var "." formula
//! imp     := disj [("implies" | "iff") imp]
//! disj    := conj {"or" conj}
//! conj    := neg {"and" neg}
//! neg     := "not" neg | "true" | "false" | atom | "(" formula ")"
//! atom    := poly rel poly          rel in = != < <= > >=
//! ```
//!
//! `implies` and `iff` are rewritten with `not`/`and`/`or` while parsing.

mod decide;

pub use decide::{decide, decide_with, DecideOptions};

use std::fmt;

use crate::error::{CadError, Result};
use crate::polynomial::parse::{tokenize, PolyParser, Tok, Token};
use crate::polynomial::{sort_dedup, Polynomial, Var, VarOrder};
use crate::realalg::{sign_at, AlgebraicNumber};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    fn from_token(s: &str) -> Rel {
        match s {
            "=" => Rel::Eq,
            "!=" => Rel::Ne,
            "<" => Rel::Lt,
            "<=" => Rel::Le,
            ">" => Rel::Gt,
            ">=" => Rel::Ge,
            _ => unreachable!("tokenizer emits known relations"),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    /// Relation satisfied by `-p` when `self` is satisfied by `p`.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }

    pub fn holds(self, sign: i32) -> bool {
        match self {
            Rel::Eq => sign == 0,
            Rel::Ne => sign != 0,
            Rel::Lt => sign < 0,
            Rel::Le => sign <= 0,
            Rel::Gt => sign > 0,
            Rel::Ge => sign >= 0,
        }
    }
}

/// `poly rel 0` with `poly` in canonical normalized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub poly: Polynomial,
    pub rel: Rel,
}

impl Atom {
    pub fn new(poly: Polynomial, rel: Rel) -> Atom {
        let (c, q) = poly.normalize_with_factor();
        let rel = if num_traits::Signed::is_negative(&c) { rel.flip() } else { rel };
        Atom { poly: q, rel }
    }

    /// Constant atoms evaluate without a point.
    pub fn constant_truth(&self) -> Option<bool> {
        if self.poly.is_constant() {
            Some(self.rel.holds(self.poly.leading_sign()))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Atom(Atom),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Quant(Quantifier, Var, Box<Node>),
}

impl Node {
    pub fn and(parts: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Node::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Node::And(flat)
        }
    }

    pub fn or(parts: Vec<Node>) -> Node {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Node::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Node::Or(flat)
        }
    }

    pub fn not(inner: Node) -> Node {
        Node::Not(Box::new(inner))
    }

    pub fn atom(poly: Polynomial, rel: Rel) -> Node {
        Node::Atom(Atom::new(poly, rel))
    }

    pub fn implies(a: Node, b: Node) -> Node {
        Node::or(vec![Node::not(a), b])
    }

    pub fn iff(a: Node, b: Node) -> Node {
        Node::or(vec![Node::and(vec![a.clone(), b.clone()]), Node::and(vec![Node::not(a), Node::not(b)])])
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Node::True | Node::False | Node::Atom(_) => true,
            Node::Not(a) => a.is_quantifier_free(),
            Node::And(xs) | Node::Or(xs) => xs.iter().all(Node::is_quantifier_free),
            Node::Quant(..) => false,
        }
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Node::True | Node::False => {}
            Node::Atom(a) => out.push(a),
            Node::Not(a) => a.collect_atoms(out),
            Node::And(xs) | Node::Or(xs) => xs.iter().for_each(|x| x.collect_atoms(out)),
            Node::Quant(_, _, b) => b.collect_atoms(out),
        }
    }

    /// Evaluates a quantifier-free node with a sign oracle for atoms.
    pub fn eval_with<F>(&self, sign: &mut F) -> Result<bool>
    where
        F: FnMut(&Polynomial) -> Result<i32>,
    {
        Ok(match self {
            Node::True => true,
            Node::False => false,
            Node::Atom(a) => match a.constant_truth() {
                Some(t) => t,
                None => a.rel.holds(sign(&a.poly)?),
            },
            Node::Not(a) => !a.eval_with(sign)?,
            Node::And(xs) => {
                for x in xs {
                    if !x.eval_with(sign)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(xs) => {
                for x in xs {
                    if x.eval_with(sign)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Quant(..) => return Err(CadError::Formula("quantifier in quantifier-free evaluation".into())),
        })
    }
}

/// A formula together with its variable ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    pub vars: VarOrder,
    pub root: Node,
}

impl Formula {
    pub fn new(vars: VarOrder, root: Node) -> Formula {
        Formula { vars, root }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.root.is_quantifier_free()
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.root.collect_atoms(&mut out);
        out
    }

    /// Distinct non-constant atom polynomials.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        sort_dedup(self.atoms().into_iter().filter(|a| !a.poly.is_constant()).map(|a| a.poly.clone()).collect())
    }

    /// Leading quantifier block and the remaining matrix.
    pub fn prefix(&self) -> (Vec<(Quantifier, Var)>, &Node) {
        let mut prefix = Vec::new();
        let mut node = &self.root;
        while let Node::Quant(q, v, body) = node {
            prefix.push((*q, *v));
            node = body;
        }
        (prefix, node)
    }

    /// Prenex with a quantifier-free matrix (or quantifier-free).
    pub fn is_prenex(&self) -> bool {
        self.prefix().1.is_quantifier_free()
    }

    /// Variables occurring in atoms but not bound by any quantifier.
    pub fn free_vars(&self) -> Vec<Var> {
        fn walk(n: &Node, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            match n {
                Node::True | Node::False => {}
                Node::Atom(a) => {
                    for v in a.poly.variables() {
                        if !bound.contains(&v) && !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
                Node::Not(a) => walk(a, bound, out),
                Node::And(xs) | Node::Or(xs) => xs.iter().for_each(|x| walk(x, bound, out)),
                Node::Quant(_, v, b) => {
                    bound.push(*v);
                    walk(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out.sort_unstable();
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Re-expresses the formula under another ordering of the same names.
    pub fn with_order(&self, order: &VarOrder) -> Result<Formula> {
        fn map(n: &Node, from: &VarOrder, to: &VarOrder) -> Result<Node> {
            Ok(match n {
                Node::True => Node::True,
                Node::False => Node::False,
                Node::Atom(a) => Node::Atom(Atom::new(a.poly.remap(from, to)?, a.rel)),
                Node::Not(a) => Node::not(map(a, from, to)?),
                Node::And(xs) => Node::And(xs.iter().map(|x| map(x, from, to)).collect::<Result<_>>()?),
                Node::Or(xs) => Node::Or(xs.iter().map(|x| map(x, from, to)).collect::<Result<_>>()?),
                Node::Quant(q, v, b) => Node::Quant(*q, to.index_of(from.name(*v))?, Box::new(map(b, from, to)?)),
            })
        }
        for name in self.vars.names() {
            order.index_of(name)?;
        }
        Ok(Formula { vars: order.clone(), root: map(&self.root, &self.vars, order)? })
    }

    /// `not self`, with the negation kept at the top.
    pub fn negated(&self) -> Formula {
        Formula { vars: self.vars.clone(), root: Node::not(self.root.clone()) }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Top-level equational conjuncts of a quantifier-free or prenex formula.
/// Purely syntactic: equations implied through disjunctions are not found.
pub fn identify_ecs(f: &Formula) -> Vec<Polynomial> {
    let (_, matrix) = f.prefix();
    if !matrix.is_quantifier_free() {
        return Vec::new();
    }
    let conjuncts: Vec<&Node> = match matrix {
        Node::And(xs) => xs.iter().collect(),
        other => vec![other],
    };
    let mut out = Vec::new();
    for c in conjuncts {
        if let Node::Atom(a) = c {
            if a.rel == Rel::Eq && !a.poly.is_constant() && !out.contains(&a.poly) {
                out.push(a.poly.clone());
            }
        }
    }
    out
}

/// Truth of a quantifier-free formula at a point (exact signs).
pub fn evaluate_at_point(f: &Formula, s: &[AlgebraicNumber]) -> Result<bool> {
    if !f.is_quantifier_free() {
        return Err(CadError::Formula("evaluate_at_point needs a quantifier-free formula".into()));
    }
    f.root.eval_with(&mut |p: &Polynomial| sign_at(p, s))
}

const KEYWORDS: &[&str] = &["and", "or", "not", "implies", "iff", "exists", "forall", "true", "false"];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses with the default ordering: free variables in order of first
/// appearance (lowest), then bound variables in binding order (highest).
pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = tokenize(text)?;
    let mut free: Vec<String> = Vec::new();
    let mut bound: Vec<String> = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        if let Tok::Ident(name) = &t.tok {
            if is_keyword(name) {
                continue;
            }
            let binder = i > 0 && matches!(&toks[i - 1].tok, Tok::Ident(k) if k == "exists" || k == "forall");
            if binder {
                if bound.contains(name) {
                    return Err(CadError::Parse { pos: t.pos, msg: format!("variable `{name}` bound twice") });
                }
                bound.push(name.clone());
            } else if !free.contains(name) && !bound.contains(name) {
                free.push(name.clone());
            }
        }
    }
    let mut names: Vec<String> = free.into_iter().filter(|n| !bound.contains(n)).collect();
    names.extend(bound);
    if names.is_empty() {
        names.push("x".to_string());
    }
    let order = VarOrder::new(&names)?;
    parse_tokens(&toks, &order, text.len())
}

/// Parses under an explicit ordering (lowest first).
pub fn parse_formula_with_order(text: &str, order: &VarOrder) -> Result<Formula> {
    let toks = tokenize(text)?;
    parse_tokens(&toks, order, text.len())
}

fn parse_tokens(toks: &[Token], order: &VarOrder, end: usize) -> Result<Formula> {
    let mut p = FormulaParser { toks, pos: 0, order, end, bound: Vec::new() };
    let root = p.formula()?;
    if p.pos != toks.len() {
        return Err(CadError::Parse { pos: p.here(), msg: "unexpected trailing input".into() });
    }
    Ok(Formula { vars: order.clone(), root })
}

struct FormulaParser<'a> {
    toks: &'a [Token],
    pos: usize,
    order: &'a VarOrder,
    end: usize,
    bound: Vec<Var>,
}

impl FormulaParser<'_> {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.pos).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(CadError::Parse { pos: self.here(), msg: msg.into() })
    }

    fn keyword(&self) -> Option<&str> {
        match self.toks.get(self.pos).map(|t| &t.tok) {
            Some(Tok::Ident(s)) if is_keyword(s) => Some(s.as_str()),
            _ => None,
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.keyword() == Some(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Node> {
        let q = match self.keyword() {
            Some("exists") => Quantifier::Exists,
            Some("forall") => Quantifier::Forall,
            _ => return self.implication(),
        };
        self.pos += 1;
        let v = match self.toks.get(self.pos).map(|t| &t.tok) {
            Some(Tok::Ident(name)) if !is_keyword(name) => match self.order.index_of(name) {
                Ok(v) => v,
                Err(_) => return self.err(format!("unknown variable `{name}`")),
            },
            _ => return self.err("expected a variable after the quantifier"),
        };
        if self.bound.contains(&v) {
            return self.err(format!("variable `{}` is already bound", self.order.name(v)));
        }
        self.pos += 1;
        if !matches!(self.toks.get(self.pos).map(|t| &t.tok), Some(Tok::Dot)) {
            return self.err("expected `.` after the quantified variable");
        }
        self.pos += 1;
        self.bound.push(v);
        let body = self.formula()?;
        self.bound.pop();
        Ok(Node::Quant(q, v, Box::new(body)))
    }

    fn implication(&mut self) -> Result<Node> {
        let lhs = self.disjunction()?;
        if self.eat_keyword("implies") {
            let rhs = self.implication_rhs()?;
            return Ok(Node::implies(lhs, rhs));
        }
        if self.eat_keyword("iff") {
            let rhs = self.implication_rhs()?;
            return Ok(Node::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication_rhs(&mut self) -> Result<Node> {
        if matches!(self.keyword(), Some("exists" | "forall")) {
            self.formula()
        } else {
            self.implication()
        }
    }

    fn disjunction(&mut self) -> Result<Node> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_keyword("or") {
            parts.push(self.conjunction()?);
        }
        Ok(Node::or(parts))
    }

    fn conjunction(&mut self) -> Result<Node> {
        let mut parts = vec![self.negation()?];
        while self.eat_keyword("and") {
            parts.push(self.negation()?);
        }
        Ok(Node::and(parts))
    }

    fn negation(&mut self) -> Result<Node> {
        if self.eat_keyword("not") {
            return Ok(Node::not(self.negation()?));
        }
        if self.eat_keyword("true") {
            return Ok(Node::True);
        }
        if self.eat_keyword("false") {
            return Ok(Node::False);
        }
        if let Some(k) = self.keyword() {
            if k == "exists" || k == "forall" {
                return self.err("quantifiers must start a formula or a parenthesized subformula");
            }
            return self.err(format!("unexpected keyword `{k}`"));
        }
        let start = self.pos;
        match self.atom() {
            Ok(a) => Ok(a),
            Err(atom_err) => {
                if !matches!(self.toks.get(start).map(|t| &t.tok), Some(Tok::LParen)) {
                    return Err(atom_err);
                }
                self.pos = start + 1;
                let inner = self.formula()?;
                if !matches!(self.toks.get(self.pos).map(|t| &t.tok), Some(Tok::RParen)) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let stop = self.scan_atom_end();
        let lhs = self.poly(stop)?;
        let rel = match self.toks.get(self.pos).map(|t| &t.tok) {
            Some(Tok::Rel(r)) => Rel::from_token(r),
            _ => return self.err("expected a relation (=, !=, <, <=, >, >=)"),
        };
        self.pos += 1;
        let stop = self.scan_atom_end();
        let rhs = self.poly(stop)?;
        Ok(Node::atom(&lhs - &rhs, rel))
    }

    /// Index of the first keyword token at or after the cursor; polynomial
    /// parsing never crosses it.
    fn scan_atom_end(&self) -> usize {
        let mut i = self.pos;
        while i < self.toks.len() {
            if let Tok::Ident(s) = &self.toks[i].tok {
                if is_keyword(s) {
                    break;
                }
            }
            i += 1;
        }
        i
    }

    fn poly(&mut self, stop: usize) -> Result<Polynomial> {
        let slice = &self.toks[..stop];
        let mut pp = PolyParser::new(slice, self.order, self.end);
        pp.pos = self.pos;
        if pp.peek().is_none() {
            return self.err("expected a polynomial");
        }
        let p = pp.expr()?;
        self.pos = pp.pos;
        Ok(p)
    }
}

struct NodeDisplay<'a> {
    node: &'a Node,
    order: &'a VarOrder,
}

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.order;
        let wrap = |n: &Node| matches!(n, Node::And(_) | Node::Or(_) | Node::Quant(..));
        match self.node {
            Node::True => write!(f, "true"),
            Node::False => write!(f, "false"),
            Node::Atom(a) => write!(f, "{} {} 0", a.poly.display(o), a.rel.symbol()),
            Node::Not(a) => match **a {
                Node::Atom(_) | Node::True | Node::False | Node::Not(_) => write!(f, "not {}", NodeDisplay { node: a, order: o }),
                _ => write!(f, "not ({})", NodeDisplay { node: a, order: o }),
            },
            Node::And(xs) | Node::Or(xs) => {
                let sep = if matches!(self.node, Node::And(_)) { " and " } else { " or " };
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    if wrap(x) {
                        write!(f, "({})", NodeDisplay { node: x, order: o })?;
                    } else {
                        write!(f, "{}", NodeDisplay { node: x, order: o })?;
                    }
                }
                Ok(())
            }
            Node::Quant(q, v, b) => write!(f, "{} {}. {}", q.keyword(), o.name(*v), NodeDisplay { node: b, order: o }),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", NodeDisplay { node: &self.root, order: &self.vars })
    }
}
