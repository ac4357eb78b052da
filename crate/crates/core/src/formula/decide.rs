//! Deciding closed formulas by folding truth values over a CAD.

use super::{identify_ecs, Formula, Node, Quantifier};
use crate::error::{CadError, Result};
use crate::lifting::{build_cad, sign_on_path, Cell, LiftOptions};
use crate::projection::{plan_projection, EcPolicy, PlanOptions, ProjectionPlan};

#[derive(Debug, Clone)]
pub struct DecideOptions {
    pub plan: PlanOptions,
    pub lift: LiftOptions,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { plan: PlanOptions::with_policy(EcPolicy::Auto), lift: LiftOptions::default() }
    }
}

/// Truth of a closed formula, with EC-aware projection when the formula is
/// prenex.
pub fn decide(f: &Formula) -> Result<bool> {
    decide_with(f, &DecideOptions::default())
}

pub fn decide_with(f: &Formula, options: &DecideOptions) -> Result<bool> {
    if !f.is_closed() {
        let names: Vec<&str> = f.free_vars().iter().map(|&v| f.vars.name(v)).collect();
        return Err(CadError::Formula(format!("decide needs a closed formula; free: {}", names.join(", "))));
    }
    let ecs = if f.is_prenex() { identify_ecs(f) } else { Vec::new() };
    let plan = plan_projection(&f.polynomials(), &ecs, &f.vars, &options.plan)?;
    let tree = build_cad(&plan, &options.lift)?;
    let mut path = Vec::with_capacity(plan.n());
    fold(&f.root, &plan, &tree.root, &mut path)
}

/// Evaluates `node` over the cell at the end of `path` (or the root).
fn fold<'a>(node: &Node, plan: &ProjectionPlan, cell: &'a Cell, path: &mut Vec<&'a Cell>) -> Result<bool> {
    Ok(match node {
        Node::True => true,
        Node::False => false,
        Node::Atom(a) => match a.constant_truth() {
            Some(t) => t,
            None => a.rel.holds(sign_on_path(plan, path, &a.poly).map_err(|e| match e {
                CadError::DimensionMismatch { .. } => CadError::OrderingMismatch(format!(
                    "atom `{}` is evaluated before its variables are bound",
                    a.poly.to_text(&plan.order)
                )),
                other => other,
            })?),
        },
        Node::Not(a) => !fold(a, plan, cell, path)?,
        Node::And(xs) => {
            for x in xs {
                if !fold(x, plan, cell, path)? {
                    return Ok(false);
                }
            }
            true
        }
        Node::Or(xs) => {
            for x in xs {
                if fold(x, plan, cell, path)? {
                    return Ok(true);
                }
            }
            false
        }
        Node::Quant(q, v, body) => {
            if *v != cell.level() {
                return Err(CadError::OrderingMismatch(format!(
                    "quantified variable `{}` must be the next variable in the ordering",
                    plan.order.name(*v)
                )));
            }
            let want = *q == Quantifier::Exists;
            for c in &cell.children {
                path.push(c);
                let t = fold(body, plan, c, path)?;
                path.pop();
                if t == want {
                    return Ok(want);
                }
            }
            !want
        }
    })
}
