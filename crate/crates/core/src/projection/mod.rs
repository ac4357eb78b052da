//! McCallum projection, reduced projection under an equational constraint,
//! EC propagation and the per-level projection plan.
//!
//! Levels are numbered from 1 (lowest variable) to `n`; level `k` holds the
//! polynomials whose main variable has index `k - 1`.

use serde_json::{json, Value};

use crate::error::{CadError, Result};
use crate::groebner::{buchberger, elimination_ideal, MonomialOrder};
use crate::polynomial::{discriminant, resultant, sort_dedup, squarefree_basis, Polynomial, Var, VarOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EcOrigin {
    Input,
    Resultant,
    Groebner,
}

impl EcOrigin {
    pub fn tag(self) -> &'static str {
        match self {
            EcOrigin::Input => "input",
            EcOrigin::Resultant => "resultant-derived",
            EcOrigin::Groebner => "gb-derived",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropagationMode {
    Resultant,
    Groebner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EcPolicy {
    None,
    /// Explicit designations; an imprimitive one is a hard error.
    Designated(Vec<Polynomial>),
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcDesignation {
    pub level: usize,
    pub poly: Polynomial,
    pub origin: EcOrigin,
}

/// A polynomial offered as an EC at some level, with its primitivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EcCandidate {
    /// As produced (input atom, raw resultant, or basis element).
    pub raw: Polynomial,
    /// Squarefree normalized form used for designation.
    pub poly: Polynomial,
    pub origin: EcOrigin,
    pub primitive: bool,
    pub content: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanLevel {
    pub level: usize,
    pub projection_polys: Vec<Polynomial>,
    pub lifting_polys: Vec<Polynomial>,
    pub ec: Option<EcDesignation>,
    pub candidates: Vec<EcCandidate>,
    /// Why candidates existed but none could be designated.
    pub fallback: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPlan {
    pub order: VarOrder,
    /// `levels[k - 1]` is level `k`.
    pub levels: Vec<PlanLevel>,
}

#[derive(Debug, Clone)]
pub struct PlanOptions {
    pub policy: EcPolicy,
    pub mode: PropagationMode,
    /// Maximum number of projection polynomials over all levels.
    pub projection_cap: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions { policy: EcPolicy::None, mode: PropagationMode::Resultant, projection_cap: 10_000 }
    }
}

impl PlanOptions {
    pub fn with_policy(policy: EcPolicy) -> Self {
        PlanOptions { policy, ..Default::default() }
    }
}

impl ProjectionPlan {
    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &PlanLevel {
        &self.levels[k - 1]
    }

    /// Number of levels with a designated EC.
    pub fn ell(&self) -> usize {
        self.levels.iter().filter(|l| l.ec.is_some()).count()
    }

    pub fn has_fallback(&self) -> bool {
        self.levels.iter().any(|l| l.fallback.is_some())
    }

    pub fn total_projection_polys(&self) -> usize {
        self.levels.iter().map(|l| l.projection_polys.len()).sum()
    }

    pub fn total_lifting_polys(&self) -> usize {
        self.levels.iter().map(|l| l.lifting_polys.len()).sum()
    }

    pub fn to_json(&self) -> Value {
        let o = &self.order;
        let text = |ps: &[Polynomial]| ps.iter().map(|p| p.to_text(o)).collect::<Vec<_>>();
        let levels: Vec<Value> = self
            .levels
            .iter()
            .rev()
            .map(|l| {
                json!({
                    "level": l.level,
                    "variable": o.name(l.level - 1),
                    "projection_polys": text(&l.projection_polys),
                    "lifting_polys": text(&l.lifting_polys),
                    "ec": l.ec.as_ref().map(|e| json!({"poly": e.poly.to_text(o), "origin": e.origin.tag()})),
                    "candidates": l.candidates.iter().map(|c| json!({
                        "raw": c.raw.to_text(o),
                        "poly": c.poly.to_text(o),
                        "origin": c.origin.tag(),
                        "primitive": c.primitive,
                        "content": c.content.to_text(o),
                    })).collect::<Vec<_>>(),
                    "fallback": l.fallback,
                })
            })
            .collect();
        json!({
            "order": o.names(),
            "ell": self.ell(),
            "fallback": self.has_fallback(),
            "levels": levels,
        })
    }
}

/// Canonical projection factors: the squarefree primitive part in the main
/// variable, then the content split the same way one level down.
fn push_factor(out: &mut Vec<Polynomial>, p: Polynomial) {
    let Some(v) = p.main_var() else { return };
    let (c, q) = p.content_primitive(v).expect("non-zero");
    out.push(q.squarefree_full());
    push_factor(out, c);
}

fn main_var_is(p: &Polynomial, v: Var) -> bool {
    p.main_var() == Some(v)
}

/// Splits into (main variable `v`, lower) and drops constants.
fn split_level(ps: &[Polynomial], v: Var) -> (Vec<Polynomial>, Vec<Polynomial>) {
    let mut top = Vec::new();
    let mut lower = Vec::new();
    for p in ps {
        if p.is_constant() {
            continue;
        }
        match p.main_var() {
            Some(m) if m == v => top.push(p.clone()),
            Some(m) if m < v => lower.push(p.clone()),
            _ => {}
        }
    }
    (top, lower)
}

/// Contents (non-constant) and the squarefree basis of primitive parts.
fn contents_and_basis(ps: &[Polynomial], v: Var, out: &mut Vec<Polynomial>) -> Result<Vec<Polynomial>> {
    let mut prims = Vec::with_capacity(ps.len());
    for p in ps {
        let (c, q) = p.content_primitive(v)?;
        push_factor(out, c);
        prims.push(q);
    }
    squarefree_basis(&prims, v)
}

fn project_single(b: &Polynomial, v: Var, out: &mut Vec<Polynomial>) -> Result<()> {
    for c in b.coeffs_in(v) {
        push_factor(out, c);
    }
    if b.deg(v) >= 2 {
        push_factor(out, discriminant(b, v)?);
    }
    Ok(())
}

/// McCallum's projection of `ps` with respect to `v`.
pub fn mccallum_project(ps: &[Polynomial], v: Var) -> Result<Vec<Polynomial>> {
    let (top, lower) = split_level(ps, v);
    if ps.iter().any(|p| p.main_var().is_some_and(|m| m > v)) {
        return Err(CadError::OrderingMismatch(format!("polynomial above projection variable {v}")));
    }
    let mut out = Vec::new();
    let basis = contents_and_basis(&top, v, &mut out)?;
    for (i, b) in basis.iter().enumerate() {
        project_single(b, v, &mut out)?;
        for c in &basis[i + 1..] {
            push_factor(&mut out, resultant(b, c, v)?);
        }
    }
    for p in lower {
        push_factor(&mut out, p);
    }
    Ok(sort_dedup(out))
}

/// Reduced projection with respect to the equational constraint `ec`.
pub fn reduced_project(ec: &Polynomial, others: &[Polynomial], v: Var) -> Result<Vec<Polynomial>> {
    reduced_project_with(ec, others, v, false)
}

/// `semi_restricted` additionally keeps the discriminants of the non-EC
/// basis elements, as required for projections after the first.
pub fn reduced_project_with(ec: &Polynomial, others: &[Polynomial], v: Var, semi_restricted: bool) -> Result<Vec<Polynomial>> {
    if !main_var_is(ec, v) {
        return Err(CadError::UndefinedInput("equational constraint must have the projection variable as main variable"));
    }
    let (content, _) = ec.content_primitive(v)?;
    if !content.is_constant() {
        return Err(imprimitive_error(ec, &content, None));
    }
    let ec = ec.squarefree_full();
    let (top, lower) = split_level(others, v);
    let mut out = Vec::new();
    let mut prims = vec![ec.clone()];
    for p in &top {
        let (c, q) = p.content_primitive(v)?;
        push_factor(&mut out, c);
        prims.push(q);
    }
    let basis = squarefree_basis(&prims, v)?;
    let (ec_part, rest): (Vec<_>, Vec<_>) = basis.into_iter().partition(|b| ec.div_exact(b).is_some());
    for (i, e) in ec_part.iter().enumerate() {
        project_single(e, v, &mut out)?;
        for f in &ec_part[i + 1..] {
            push_factor(&mut out, resultant(e, f, v)?);
        }
        for g in &rest {
            push_factor(&mut out, resultant(e, g, v)?);
        }
    }
    if semi_restricted {
        for g in &rest {
            if g.deg(v) >= 2 {
                push_factor(&mut out, discriminant(g, v)?);
            }
        }
    }
    for p in lower {
        push_factor(&mut out, p);
    }
    Ok(sort_dedup(out))
}

fn imprimitive_error(p: &Polynomial, content: &Polynomial, order: Option<&VarOrder>) -> CadError {
    let show = |q: &Polynomial| match order {
        Some(o) => q.to_text(o),
        None => format!("{q:?}"),
    };
    CadError::PrimitivityViolation { poly: show(p), content: show(content) }
}

/// EC candidates implied by a set of ECs sharing main variable `v`.
/// Returns raw polynomials; constants and zero resultants are dropped.
pub fn propagate_ecs(ecs: &[Polynomial], v: Var, mode: PropagationMode) -> Result<Vec<Polynomial>> {
    let ecs: Vec<Polynomial> = sort_dedup(ecs.iter().map(Polynomial::normalized).collect());
    if ecs.len() < 2 {
        return Ok(Vec::new());
    }
    if ecs.iter().any(|e| !main_var_is(e, v)) {
        return Err(CadError::UndefinedInput("propagated ECs must share the main variable"));
    }
    let mut out = Vec::new();
    match mode {
        PropagationMode::Resultant => {
            for i in 0..ecs.len() {
                for j in i + 1..ecs.len() {
                    let r = resultant(&ecs[i], &ecs[j], v)?;
                    if !r.is_zero() && !r.is_constant() {
                        out.push(r);
                    }
                }
            }
        }
        PropagationMode::Groebner => {
            let gb = buchberger(&ecs, MonomialOrder::Lex)?;
            let keep: Vec<Var> = (0..v).collect();
            for g in elimination_ideal(&gb, &keep)? {
                if !g.is_constant() {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

fn candidate(raw: Polynomial, origin: EcOrigin) -> Result<EcCandidate> {
    let poly = raw.squarefree_full();
    let v = poly.main_var().expect("non-constant candidate");
    let (content, _) = poly.content_primitive(v)?;
    Ok(EcCandidate { primitive: content.is_constant(), raw, poly, origin, content })
}

/// Tie-break key: degree in main variable, total degree, printed form.
fn ec_key(p: &Polynomial, order: &VarOrder) -> (u32, u32, String) {
    let v = p.main_var().expect("non-constant");
    (p.deg(v), p.total_degree(), p.to_text(order))
}

/// Builds the projection plan for the input polynomials.
///
/// `input_ecs` are the ECs found in the formula (used by the auto policy);
/// the designated policy supplies its own list.
pub fn plan_projection(
    polys: &[Polynomial],
    input_ecs: &[Polynomial],
    order: &VarOrder,
    options: &PlanOptions,
) -> Result<ProjectionPlan> {
    let n = order.len();
    for p in polys.iter().chain(input_ecs) {
        if p.nvars() != n {
            return Err(CadError::OrderingMismatch("polynomial arity differs from the ordering".into()));
        }
    }
    let mut pending: Vec<Vec<EcCandidate>> = vec![Vec::new(); n + 1];
    let seeds: &[Polynomial] = match &options.policy {
        EcPolicy::None => &[],
        EcPolicy::Designated(list) => list,
        EcPolicy::Auto => input_ecs,
    };
    for e in seeds {
        if e.is_constant() {
            continue;
        }
        let c = candidate(e.clone(), EcOrigin::Input)?;
        if matches!(options.policy, EcPolicy::Designated(_)) && !c.primitive {
            return Err(imprimitive_error(&c.poly, &c.content, Some(order)));
        }
        let level = c.poly.main_var().unwrap() + 1;
        pending[level].push(c);
    }

    let mut current: Vec<Polynomial> = Vec::new();
    for p in polys.iter().chain(pending.iter().flatten().map(|c| &c.poly)) {
        push_factor(&mut current, p.clone());
    }
    let mut current = sort_dedup(current);
    let mut levels: Vec<PlanLevel> = Vec::with_capacity(n);
    let mut total = 0usize;
    for k in (1..=n).rev() {
        let v = k - 1;
        let (top, lower) = split_level(&current, v);
        let mut candidates = std::mem::take(&mut pending[k]);
        candidates.sort_by(|a, b| ec_key(&a.poly, order).cmp(&ec_key(&b.poly, order)));
        candidates.dedup_by(|a, b| a.poly == b.poly);
        let chosen = candidates.iter().find(|c| c.primitive).cloned();
        let fallback = if chosen.is_none() && !candidates.is_empty() {
            Some(format!(
                "no primitive EC candidate among {} (imprimitive: {})",
                candidates.len(),
                candidates.iter().filter(|c| !c.primitive).map(|c| c.poly.to_text(order)).collect::<Vec<_>>().join(", ")
            ))
        } else {
            None
        };

        // level set: squarefree basis of everything with main variable v
        let mut level_input = top.clone();
        if let Some(c) = &chosen {
            level_input.push(c.poly.clone());
        }
        let projection_polys = if level_input.is_empty() { Vec::new() } else { squarefree_basis(&level_input, v)? };

        let (next, lifting_polys, ec) = match &chosen {
            Some(c) => {
                let others: Vec<Polynomial> =
                    top.iter().filter(|p| **p != c.poly).cloned().chain(lower.iter().cloned()).collect();
                let next = reduced_project_with(&c.poly, &others, v, k < n)?;
                (next, vec![c.poly.clone()], Some(EcDesignation { level: k, poly: c.poly.clone(), origin: c.origin }))
            }
            None => {
                let next = if k > 1 { mccallum_project(&current, v)? } else { Vec::new() };
                (next, projection_polys.clone(), None)
            }
        };

        // derive ECs for lower levels from the ECs available here
        if options.policy == EcPolicy::Auto && k > 1 {
            let here: Vec<Polynomial> = candidates.iter().map(|c| c.poly.clone()).collect();
            if here.len() >= 2 {
                let origin = match options.mode {
                    PropagationMode::Resultant => EcOrigin::Resultant,
                    PropagationMode::Groebner => EcOrigin::Groebner,
                };
                for raw in propagate_ecs(&here, v, options.mode)? {
                    let c = candidate(raw, origin)?;
                    let level = c.poly.main_var().unwrap() + 1;
                    pending[level].push(c);
                }
            }
        }

        total += projection_polys.len();
        if total > options.projection_cap {
            return Err(CadError::CapExceeded(format!(
                "projection set exceeds {} polynomials at level {k}",
                options.projection_cap
            )));
        }
        levels.push(PlanLevel { level: k, projection_polys, lifting_polys, ec, candidates, fallback });
        // derived ECs also join the projection set of their level
        let mut merged = next;
        for c in pending.iter().flatten() {
            merged.push(c.poly.clone());
        }
        current = sort_dedup(merged);
    }
    levels.reverse();
    Ok(ProjectionPlan { order: order.clone(), levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    fn setup(names: &[&str]) -> (VarOrder, impl Fn(&str) -> Polynomial) {
        let o = VarOrder::new(names).unwrap();
        let o2 = o.clone();
        (o, move |s: &str| parse_polynomial(s, &o2).unwrap())
    }

    #[test]
    fn mccallum_examples() {
        let (_, p) = setup(&["y", "x"]);
        assert_eq!(mccallum_project(&[p("x^2 + y^2 - 1")], 1).unwrap(), vec![p("y^2 - 1")]);
        assert_eq!(mccallum_project(&[p("x - y")], 1).unwrap(), vec![p("y")]);
        let out = mccallum_project(&[p("x^2 - y"), p("x - y")], 1).unwrap();
        assert!(out.contains(&p("y^2 - y")));
    }

    #[test]
    fn reduced_examples() {
        let (_, p) = setup(&["y", "x"]);
        let circle = p("x^2 + y^2 - 1");
        assert_eq!(reduced_project(&circle, &[p("x - y")], 1).unwrap(), vec![p("y^2 - 1"), p("2*y^2 - 1")]);
        assert_eq!(reduced_project(&circle, &[], 1).unwrap(), mccallum_project(&[circle.clone()], 1).unwrap());
        let bad = reduced_project(&p("(y-1)*x + (y-1)"), &[p("x")], 1);
        assert!(matches!(bad, Err(CadError::PrimitivityViolation { .. })));
    }

    #[test]
    fn propagation_examples() {
        let (_, p) = setup(&["y", "x", "z"]);
        let r = propagate_ecs(&[p("z - x*y"), p("z - x - y")], 2, PropagationMode::Resultant).unwrap();
        assert_eq!(r.iter().map(Polynomial::normalized).collect::<Vec<_>>(), vec![p("x*y - x - y")]);
        assert!(propagate_ecs(&[p("z - x")], 2, PropagationMode::Groebner).unwrap().is_empty());
        let r = propagate_ecs(&[p("z^2 - x"), p("z^2 - y")], 2, PropagationMode::Resultant).unwrap();
        assert_eq!(r, vec![p("(x - y)^2")]);
        assert_eq!(r[0].squarefree_full(), p("x - y"));
        let g = propagate_ecs(&[p("z^2 - x"), p("z^2 - y")], 2, PropagationMode::Groebner).unwrap();
        assert_eq!(g, vec![p("x - y")]);
    }

    #[test]
    fn plan_two_ecs() {
        let (o, p) = setup(&["y", "x"]);
        let circle = p("x^2 + y^2 - 1");
        let line = p("x - y");
        let plan = plan_projection(
            &[circle.clone(), line.clone()],
            &[circle.clone(), line.clone()],
            &o,
            &PlanOptions::with_policy(EcPolicy::Auto),
        )
        .unwrap();
        assert_eq!(plan.ell(), 2);
        assert_eq!(plan.level(2).ec.as_ref().unwrap().poly, line);
        let l1 = plan.level(1).ec.as_ref().unwrap();
        assert_eq!(l1.poly, p("2*y^2 - 1"));
        assert_eq!(l1.origin, EcOrigin::Resultant);
        assert_eq!(plan.level(1).lifting_polys, vec![p("2*y^2 - 1")]);
    }

    #[test]
    fn plan_without_ecs() {
        let (o, p) = setup(&["y", "x"]);
        let plan = plan_projection(&[p("x^2 + y^2 - 1")], &[], &o, &PlanOptions::with_policy(EcPolicy::Auto)).unwrap();
        assert_eq!(plan.ell(), 0);
        for l in &plan.levels {
            assert_eq!(l.lifting_polys, l.projection_polys);
        }
        assert_eq!(plan.level(1).projection_polys, vec![p("y^2 - 1")]);
    }

    #[test]
    fn plan_primitivity_gate() {
        let (o, p) = setup(&["y", "x"]);
        let bad = p("(y - 1)*x + (y - 1)");
        let other = p("x^2 + y^2 - 2");
        let err = plan_projection(
            &[bad.clone(), other.clone()],
            &[],
            &o,
            &PlanOptions::with_policy(EcPolicy::Designated(vec![bad.clone()])),
        );
        assert!(matches!(err, Err(CadError::PrimitivityViolation { .. })));
        let plan =
            plan_projection(&[bad.clone(), other], &[bad], &o, &PlanOptions::with_policy(EcPolicy::Auto)).unwrap();
        assert_eq!(plan.ell(), 0);
        assert!(plan.level(2).fallback.is_some());
    }
}
