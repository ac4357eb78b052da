//! Lifting: the CAD of the real line, stacks over cells, and the CAD tree.
//!
//! Two EC refinements apply. At a level with a designated EC only that EC is
//! isolated (the plan already reduces `lifting_polys` to it). Over a sector
//! of a level with an EC, the EC is non-zero on the whole cylinder above, so
//! the cylinder is kept as a single cell and never split again.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CadError, Result};
use crate::formula::Formula;
use crate::polynomial::{Polynomial, Var, VarOrder};
use crate::projection::ProjectionPlan;
use crate::realalg::{
    compare, integer_above, integer_below, roots_above, sign_at, sign_at_nonzero, simplest_between, AlgebraicNumber,
    Enclosure, RootsAbove, SamplePoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Section,
    Sector,
    /// Whole cylinder over a cell, produced by the EC sector refinement.
    Cylinder,
}

impl CellKind {
    pub fn tag(self) -> &'static str {
        match self {
            CellKind::Section => "section",
            CellKind::Sector => "sector",
            CellKind::Cylinder => "cylinder",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Cell {
    /// One entry per level; odd = sector (or cylinder), even = section.
    pub index: Vec<usize>,
    pub sample: SamplePoint,
    pub kind: CellKind,
    /// Signs of this level's lifting polynomials; empty on cylinders and the root.
    pub signs: Vec<i8>,
    pub truth: Option<bool>,
    pub children: Vec<Cell>,
}

impl Cell {
    fn root() -> Cell {
        Cell { index: Vec::new(), sample: Vec::new(), kind: CellKind::Sector, signs: Vec::new(), truth: None, children: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.index.len()
    }
}

#[derive(Debug, Clone)]
pub struct CadTree {
    pub plan: ProjectionPlan,
    pub root: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCount {
    /// Cells of the full-dimensional decomposition (level n).
    pub total: usize,
    /// `per_level[k - 1]` = number of cells at level k.
    pub per_level: Vec<usize>,
    pub sections: usize,
    pub sectors: usize,
    pub cylinders: usize,
}

#[derive(Debug, Clone)]
pub struct LiftOptions {
    pub cell_cap: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { cell_cap: 1_000_000 }
    }
}

fn extended(sample: &[AlgebraicNumber], value: AlgebraicNumber) -> SamplePoint {
    let mut s = Vec::with_capacity(sample.len() + 1);
    s.extend_from_slice(sample);
    s.push(value);
    s
}

/// Rational strictly between two distinct ordered numbers.
fn rational_between(a: &AlgebraicNumber, b: &AlgebraicNumber) -> BigRational {
    loop {
        let (ea, eb) = (a.enclosure(), b.enclosure());
        let hi_a = ea.hi().clone();
        let lo_b = eb.lo().clone();
        if hi_a < lo_b {
            return simplest_between(&hi_a, &lo_b);
        }
        if let (Enclosure::Point(x), Enclosure::Point(y)) = (&ea, &eb) {
            return simplest_between(x, y);
        }
        a.refine_times(2);
        b.refine_times(2);
    }
}

/// Builds the stack over `base` from the given roots-with-vanishing-sets.
fn stack_from_roots(
    base: &Cell,
    roots: Vec<(AlgebraicNumber, Vec<usize>)>,
    polys: &[Polynomial],
) -> Result<Vec<Cell>> {
    let r = roots.len();
    let mut samples: Vec<(AlgebraicNumber, CellKind, Option<&[usize]>)> = Vec::with_capacity(2 * r + 1);
    if r == 0 {
        samples.push((AlgebraicNumber::rational(BigRational::zero()), CellKind::Sector, None));
    } else {
        samples.push((AlgebraicNumber::rational(integer_below(roots[0].0.enclosure().lo())), CellKind::Sector, None));
        for i in 0..r {
            samples.push((roots[i].0.clone(), CellKind::Section, Some(&roots[i].1)));
            let next = if i + 1 < r {
                rational_between(&roots[i].0, &roots[i + 1].0)
            } else {
                integer_above(roots[i].0.enclosure().hi())
            };
            samples.push((AlgebraicNumber::rational(next), CellKind::Sector, None));
        }
    }
    samples
        .into_iter()
        .enumerate()
        .map(|(i, (value, kind, vanishing))| {
            let sample = extended(&base.sample, value);
            let mut signs = Vec::with_capacity(polys.len());
            for (j, p) in polys.iter().enumerate() {
                let s = match vanishing {
                    Some(vs) if vs.contains(&j) => 0,
                    _ => sign_at_nonzero(p, &sample)?,
                };
                signs.push(s as i8);
            }
            let mut index = base.index.clone();
            index.push(i + 1);
            Ok(Cell { index, sample, kind, signs, truth: None, children: Vec::new() })
        })
        .collect()
}

/// Distinct roots of all `polys` above `sample`, each with the indices of
/// the polynomials vanishing there.
fn merged_roots(
    polys: &[Polynomial],
    sample: &[AlgebraicNumber],
    v: Var,
    order: &VarOrder,
) -> Result<Vec<(AlgebraicNumber, Vec<usize>)>> {
    let mut all: Vec<(AlgebraicNumber, usize)> = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        match roots_above(p, sample, v)? {
            RootsAbove::Roots(rs) => all.extend(rs.into_iter().map(|r| (r, i))),
            RootsAbove::IdenticallyZero => return Err(CadError::Nullification(p.to_text(order))),
        }
    }
    all.sort_by(|a, b| compare(&a.0, &b.0));
    let mut out: Vec<(AlgebraicNumber, Vec<usize>)> = Vec::new();
    for (r, i) in all {
        match out.last_mut() {
            Some((last, idx)) if compare(last, &r) == Ordering::Equal => {
                // prefer the rational representative
                if r.is_rational() && !last.is_rational() {
                    *last = r;
                }
                idx.push(i);
            }
            _ => out.push((r, vec![i])),
        }
    }
    Ok(out)
}

/// The CAD of the real line for univariate polynomials in variable 0.
pub fn base_phase(ps: &[Polynomial], order: &VarOrder) -> Result<Vec<Cell>> {
    if ps.iter().any(|p| p.main_var().is_some_and(|v| v > 0)) {
        return Err(CadError::DimensionMismatch { needed: 2, given: 1 });
    }
    let root = Cell::root();
    let roots = merged_roots(ps, &root.sample, 0, order)?;
    stack_from_roots(&root, roots, ps)
}

/// Stack over `c` for the lifting polynomials of the next level.
pub fn lift_stack(c: &Cell, level_polys: &[Polynomial], ec_at_base_level: bool, v: Var, order: &VarOrder) -> Result<Vec<Cell>> {
    let trivial = c.kind == CellKind::Cylinder || (ec_at_base_level && c.kind == CellKind::Sector);
    if trivial {
        let mut index = c.index.clone();
        index.push(1);
        let sample = extended(&c.sample, AlgebraicNumber::rational(BigRational::zero()));
        return Ok(vec![Cell { index, sample, kind: CellKind::Cylinder, signs: Vec::new(), truth: None, children: Vec::new() }]);
    }
    let roots = merged_roots(level_polys, &c.sample, v, order)?;
    stack_from_roots(c, roots, level_polys)
}

struct Ctx<'a> {
    plan: &'a ProjectionPlan,
    cap: usize,
    count: AtomicUsize,
}

impl Ctx<'_> {
    fn charge(&self, n: usize) -> Result<()> {
        let total = self.count.fetch_add(n, AtomicOrdering::Relaxed) + n;
        if total > self.cap {
            return Err(CadError::CapExceeded(format!("more than {} cells", self.cap)));
        }
        Ok(())
    }
}

fn lift_below(cell: &mut Cell, ctx: &Ctx<'_>) -> Result<()> {
    let k = cell.level();
    let n = ctx.plan.n();
    if k == n {
        return Ok(());
    }
    let level = ctx.plan.level(k + 1);
    let ec_below = k >= 1 && ctx.plan.level(k).ec.is_some();
    let children = lift_stack(cell, &level.lifting_polys, ec_below, k, &ctx.plan.order)?;
    ctx.charge(children.len())?;
    cell.children = children;
    cell.children.par_iter_mut().try_for_each(|c| lift_below(c, ctx))
}

/// Full CAD tree for a plan; signs of lifting polynomials are recorded,
/// truth is left unassigned.
pub fn build_cad(plan: &ProjectionPlan, options: &LiftOptions) -> Result<CadTree> {
    let ctx = Ctx { plan, cap: options.cell_cap, count: AtomicUsize::new(0) };
    let mut root = Cell::root();
    if plan.n() > 0 {
        let base = base_phase(&plan.level(1).lifting_polys, &plan.order)?;
        ctx.charge(base.len())?;
        root.children = base;
        root.children.par_iter_mut().try_for_each(|c| lift_below(c, &ctx))?;
    }
    Ok(CadTree { plan: plan.clone(), root })
}

pub fn cell_count(t: &CadTree) -> CellCount {
    let n = t.plan.n();
    let mut per_level = vec![0; n];
    let (mut sections, mut sectors, mut cylinders) = (0, 0, 0);
    let mut stack: Vec<&Cell> = vec![&t.root];
    while let Some(c) = stack.pop() {
        let k = c.level();
        if k > 0 {
            per_level[k - 1] += 1;
        }
        if k == n {
            match c.kind {
                CellKind::Section => sections += 1,
                CellKind::Sector => sectors += 1,
                CellKind::Cylinder => cylinders += 1,
            }
        }
        stack.extend(c.children.iter());
    }
    let total = if n == 0 { 1 } else { per_level[n - 1] };
    CellCount { total, per_level, sections, sectors, cylinders }
}

/// Sign of `p` over the cell at the end of `path` (`path[k-1]` is the
/// level-k ancestor), using recorded signs when `p` is a lifting polynomial.
pub fn sign_on_path(plan: &ProjectionPlan, path: &[&Cell], p: &Polynomial) -> Result<i32> {
    let Some(v) = p.main_var() else {
        return Ok(p.leading_sign());
    };
    if v >= path.len() {
        return Err(CadError::DimensionMismatch { needed: v + 1, given: path.len() });
    }
    let cell = path[v];
    if !cell.signs.is_empty() {
        if let Some(i) = plan.level(v + 1).lifting_polys.iter().position(|q| q == p) {
            return Ok(cell.signs[i] as i32);
        }
    }
    sign_at(p, &cell.sample)
}

/// Sets the truth of every full-dimensional cell from a quantifier-free
/// formula.
pub fn truth_assign(t: &mut CadTree, f: &Formula) -> Result<()> {
    if !f.is_quantifier_free() {
        return Err(CadError::Formula("truth assignment needs a quantifier-free formula".into()));
    }
    if f.nvars() != t.plan.n() {
        return Err(CadError::OrderingMismatch("formula and plan use different orderings".into()));
    }
    fn collect<'a>(plan: &ProjectionPlan, f: &Formula, cell: &'a Cell, path: &mut Vec<&'a Cell>, out: &mut Vec<bool>) -> Result<()> {
        if cell.level() > 0 {
            path.push(cell);
        }
        if cell.level() == plan.n() {
            out.push(f.root.eval_with(&mut |p: &Polynomial| sign_on_path(plan, path, p))?);
        } else {
            for c in &cell.children {
                collect(plan, f, c, path, out)?;
            }
        }
        if cell.level() > 0 {
            path.pop();
        }
        Ok(())
    }
    fn assign(cell: &mut Cell, n: usize, it: &mut impl Iterator<Item = bool>) {
        if cell.level() == n {
            cell.truth = it.next();
        } else {
            for c in &mut cell.children {
                assign(c, n, it);
            }
        }
    }
    let mut truths = Vec::new();
    collect(&t.plan, f, &t.root, &mut Vec::new(), &mut truths)?;
    let n = t.plan.n();
    assign(&mut t.root, n, &mut truths.into_iter());
    Ok(())
}

/// The full-dimensional cell containing a rational point. Section
/// coordinates are recomputed above the point itself, since inside a
/// sector they differ from those above the sample.
pub fn locate<'a>(t: &'a CadTree, point: &[BigRational]) -> Result<&'a Cell> {
    let n = t.plan.n();
    if point.len() != n {
        return Err(CadError::DimensionMismatch { needed: n, given: point.len() });
    }
    let mut cell = &t.root;
    let mut prefix: Vec<AlgebraicNumber> = Vec::with_capacity(n);
    for (k, q) in point.iter().enumerate() {
        let kids = &cell.children;
        let x = AlgebraicNumber::rational(q.clone());
        if kids.len() == 1 {
            cell = &kids[0];
            prefix.push(x);
            continue;
        }
        let roots = merged_roots(&t.plan.level(k + 1).lifting_polys, &prefix, k, &t.plan.order)?;
        if 2 * roots.len() + 1 != kids.len() {
            return Err(CadError::Internal(format!("stack above the point has {} sections, cell has {}", roots.len(), kids.len() / 2)));
        }
        let mut chosen = 2 * roots.len();
        for (i, (r, _)) in roots.iter().enumerate() {
            match compare(&x, r) {
                Ordering::Equal => {
                    chosen = 2 * i + 1;
                    break;
                }
                Ordering::Less => {
                    chosen = 2 * i;
                    break;
                }
                Ordering::Greater => {}
            }
        }
        cell = &kids[chosen];
        prefix.push(x);
    }
    Ok(cell)
}

fn cell_json(c: &Cell, plan: &ProjectionPlan) -> Value {
    json!({
        "index": c.index,
        "kind": c.kind.tag(),
        "sample": c.sample.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "signs": c.signs,
        "truth": c.truth,
        "children": c.children.iter().map(|k| cell_json(k, plan)).collect::<Vec<_>>(),
    })
}

impl CadTree {
    pub fn to_json(&self) -> Value {
        let provenance: Vec<Value> = self
            .plan
            .levels
            .iter()
            .map(|l| {
                json!({
                    "level": l.level,
                    "variable": self.plan.order.name(l.level - 1),
                    "lifting_polys": l.lifting_polys.iter().map(|p| p.to_text(&self.plan.order)).collect::<Vec<_>>(),
                    "ec": l.ec.is_some(),
                })
            })
            .collect();
        let count = cell_count(self);
        json!({
            "order": self.plan.order.names(),
            "cells": count.total,
            "cells_per_level": count.per_level,
            "levels": provenance,
            "stacks": self.root.children.iter().map(|c| cell_json(c, &self.plan)).collect::<Vec<_>>(),
        })
    }

    /// All full-dimensional cells.
    pub fn leaves(&self) -> Vec<&Cell> {
        let n = self.plan.n();
        let mut out = Vec::new();
        let mut stack: Vec<&Cell> = vec![&self.root];
        while let Some(c) = stack.pop() {
            if c.level() == n {
                out.push(c);
            } else {
                stack.extend(c.children.iter().rev());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula_with_order;
    use crate::polynomial::parse_polynomial;
    use crate::projection::{plan_projection, EcPolicy, PlanOptions};

    fn order() -> VarOrder {
        VarOrder::new(&["y", "x"]).unwrap()
    }

    fn count(polys: &[&str], ecs: &[&str], policy: EcPolicy) -> CellCount {
        let o = order();
        let ps: Vec<_> = polys.iter().map(|s| parse_polynomial(s, &o).unwrap()).collect();
        let es: Vec<_> = ecs.iter().map(|s| parse_polynomial(s, &o).unwrap()).collect();
        let plan = plan_projection(&ps, &es, &o, &PlanOptions::with_policy(policy)).unwrap();
        cell_count(&build_cad(&plan, &LiftOptions::default()).unwrap())
    }

    #[test]
    fn base_phase_examples() {
        let o = VarOrder::new(&["y"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &o).unwrap();
        assert_eq!(base_phase(&[p("y^2 - 1")], &o).unwrap().len(), 5);
        assert_eq!(base_phase(&[], &o).unwrap().len(), 1);
        let cells = base_phase(&[p("y"), p("y - 1")], &o).unwrap();
        assert_eq!(cells.len(), 5);
        assert_eq!(cells[1].sample[0].as_rational(), Some(BigRational::zero()));
    }

    #[test]
    fn lift_stack_examples() {
        let o = order();
        let circle = parse_polynomial("x^2 + y^2 - 1", &o).unwrap();
        let base = |q: i64, kind| Cell {
            index: vec![1],
            sample: vec![AlgebraicNumber::from_int(q)],
            kind,
            signs: vec![],
            truth: None,
            children: vec![],
        };
        assert_eq!(lift_stack(&base(0, CellKind::Sector), &[circle.clone()], false, 1, &o).unwrap().len(), 5);
        let cyl = lift_stack(&base(2, CellKind::Sector), &[circle.clone()], true, 1, &o).unwrap();
        assert_eq!(cyl.len(), 1);
        assert_eq!(cyl[0].kind, CellKind::Cylinder);
        assert_eq!(lift_stack(&base(1, CellKind::Section), &[circle], true, 1, &o).unwrap().len(), 3);
    }

    #[test]
    fn worked_counts() {
        let c = count(&["x^2 + y^2 - 1"], &[], EcPolicy::None);
        assert_eq!(c.total, 13);
        assert_eq!(c.per_level[0], 5);
        assert_eq!(count(&["x^2 + y^2 - 1", "x"], &[], EcPolicy::None).total, 19);
        assert_eq!(count(&["x^2 + y^2 - 1", "x"], &["x^2 + y^2 - 1"], EcPolicy::Auto).total, 13);
        let c = count(&["x^2 + y^2 - 1", "x - y"], &["x^2 + y^2 - 1", "x - y"], EcPolicy::Auto);
        assert_eq!(c.total, 9);
        assert_eq!(c.cylinders, 3);
    }

    #[test]
    fn truth_on_circle() {
        let o = order();
        let f = parse_formula_with_order("x^2 + y^2 - 1 = 0", &o).unwrap();
        let plan = plan_projection(&f.polynomials(), &[], &o, &PlanOptions::default()).unwrap();
        let mut t = build_cad(&plan, &LiftOptions::default()).unwrap();
        truth_assign(&mut t, &f).unwrap();
        assert_eq!(t.leaves().iter().filter(|c| c.truth == Some(true)).count(), 4);
        for (text, expect) in [("1 = 0", false), ("0 = 0", true)] {
            let g = parse_formula_with_order(text, &o).unwrap();
            truth_assign(&mut t, &g).unwrap();
            assert!(t.leaves().iter().all(|c| c.truth == Some(expect)));
        }
    }

    #[test]
    fn locate_finds_cells() {
        let o = order();
        let plan = plan_projection(&[parse_polynomial("x^2 + y^2 - 1", &o).unwrap()], &[], &o, &PlanOptions::default()).unwrap();
        let t = build_cad(&plan, &LiftOptions::default()).unwrap();
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(locate(&t, &[q(0), q(1)]).unwrap().index, vec![3, 4]);
        assert_eq!(locate(&t, &[q(5), q(0)]).unwrap().index, vec![5, 1]);
        assert_eq!(locate(&t, &[q(-1), q(0)]).unwrap().index, vec![2, 2]);
        // inside the middle sector the sections move: x = 1 is outside the circle at y = -1/2
        let half = BigRational::new((-1).into(), 2.into());
        assert_eq!(locate(&t, &[half.clone(), q(1)]).unwrap().index, vec![3, 5]);
        assert_eq!(locate(&t, &[half, BigRational::new(3.into(), 4.into())]).unwrap().index, vec![3, 3]);
    }

    #[test]
    fn cap_is_enforced() {
        let o = order();
        let plan = plan_projection(&[parse_polynomial("x^2 + y^2 - 1", &o).unwrap()], &[], &o, &PlanOptions::default()).unwrap();
        assert!(matches!(build_cad(&plan, &LiftOptions { cell_cap: 5 }), Err(CadError::CapExceeded(_))));
    }
}
