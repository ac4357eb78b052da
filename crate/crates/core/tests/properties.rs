//! Property tests for algebraic and structural invariants.

mod common;

use cad_core::bench::{bound_eq1, Mode};
use cad_core::formula::{decide, identify_ecs, parse_formula_with_order, Formula, Node, Quantifier, Rel};
use cad_core::lifting::{build_cad, cell_count, LiftOptions};
use cad_core::polynomial::{resultant, Monomial};
use cad_core::projection::{mccallum_project, plan_projection, reduced_project};
use cad_core::realalg::{isolate_upoly, Enclosure, UPoly};
use cad_core::{Polynomial, VarOrder};
use common::q;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Terms as `(exponents, coefficient)`; at least one term has positive
/// degree in the top variable.
fn poly_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_deg, nvars), -4i64..=4);
    (prop::collection::vec(term, 1..5), 1..=max_deg, prop::sample::select(vec![-2i64, -1, 1, 2])).prop_map(
        move |(terms, top, lead)| {
            let mut p = Polynomial::zero(nvars);
            for (exps, c) in terms {
                let mut m = Monomial::one(nvars);
                for (v, e) in exps.into_iter().enumerate() {
                    m.0[v] = e;
                }
                p = &p + &Polynomial::from_terms(nvars, [(m, q(c))]);
            }
            let mut m = Monomial::one(nvars);
            m.0[nvars - 1] = top;
            let lifted = &p + &Polynomial::from_terms(nvars, [(m, q(lead))]);
            if lifted.main_var() == Some(nvars - 1) {
                lifted
            } else {
                // cancellation removed the top variable; fall back to the bare term
                Polynomial::var(nvars, nvars - 1).pow(top)
            }
        },
    )
}

fn rel_strategy() -> impl Strategy<Value = Rel> {
    prop::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge])
}

fn node_strategy(nvars: usize) -> impl Strategy<Value = Node> {
    let leaf = (poly_strategy(nvars, 2), rel_strategy()).prop_map(|(p, r)| Node::atom(p, r));
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Node::and),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Node::or),
            inner.prop_map(Node::not),
        ]
    })
}

fn sign_factor(m: u32, n: u32) -> bool {
    (m * n) % 2 == 1
}

fn bounds(r: &cad_core::realalg::AlgebraicNumber) -> (BigRational, BigRational) {
    match r.enclosure() {
        Enclosure::Point(x) => (x.clone(), x),
        Enclosure::Open(lo, hi) => (lo, hi),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_antisymmetry(p in poly_strategy(2, 3), r in poly_strategy(2, 3)) {
        let v = 1;
        let (m, n) = (p.degree_in(v).unwrap(), r.degree_in(v).unwrap());
        let a = resultant(&p, &r, v).unwrap();
        let b = resultant(&r, &p, v).unwrap();
        let expected = if sign_factor(m, n) { -&a } else { a };
        prop_assert_eq!(b, expected);
    }

    #[test]
    fn squarefree_is_idempotent(p in poly_strategy(2, 3), k in 1u32..=3) {
        let s = p.pow(k).squarefree_full();
        prop_assert_eq!(s.squarefree_full(), s.clone());
        prop_assert_eq!(s, p.squarefree_full());
    }

    #[test]
    fn isolated_roots_sorted_and_disjoint(cs in prop::collection::vec(-6i64..=6, 2..9)) {
        prop_assume!(*cs.last().unwrap() != 0);
        let u = UPoly::from_coeffs(cs.into_iter().map(BigInt::from).collect());
        let roots = isolate_upoly(&u);
        for w in roots.windows(2) {
            let (_, hi) = bounds(&w[0]);
            let (lo, _) = bounds(&w[1]);
            prop_assert!(hi <= lo, "{} then {}", w[0], w[1]);
            if hi == lo {
                // a shared endpoint is only allowed when it belongs to neither
                prop_assert!(!matches!(w[0].enclosure(), Enclosure::Point(_)) || !matches!(w[1].enclosure(), Enclosure::Point(_)));
            }
        }
    }

    #[test]
    fn bound_is_monotone(n in 1u32..=3, m in 1u32..=4, d in 1u32..=4) {
        let b = bound_eq1(n, m, d);
        prop_assert!(b <= bound_eq1(n, m + 1, d));
        prop_assert!(b <= bound_eq1(n, m, d + 1));
        prop_assert!(b <= bound_eq1(n + 1, m, d));
    }

    #[test]
    fn reduced_projection_within_mccallum(e in poly_strategy(2, 2), o in poly_strategy(2, 2)) {
        let e = e.squarefree_full();
        prop_assume!(e.is_primitive(1).unwrap());
        // shared factors change the squarefree basis; keep the generic case
        prop_assume!(!resultant(&e, &o, 1).unwrap().is_zero());
        let reduced = reduced_project(&e, std::slice::from_ref(&o), 1).unwrap();
        let full = mccallum_project(&[e.clone(), o.clone()], 1).unwrap();
        for p in &reduced {
            prop_assert!(full.contains(p), "{:?} missing from the full projection", p);
        }
    }

    #[test]
    fn formula_text_round_trip(root in node_strategy(2)) {
        let vars = VarOrder::parse("x,y").unwrap();
        let f = Formula::new(vars.clone(), root);
        let text = f.to_text();
        let back = parse_formula_with_order(&text, &vars).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn negation_flips_decision(
        p in poly_strategy(2, 2),
        r in poly_strategy(1, 2),
        rels in (rel_strategy(), rel_strategy()),
        qs in prop::sample::select(vec![
            (Quantifier::Exists, Quantifier::Exists),
            (Quantifier::Forall, Quantifier::Exists),
            (Quantifier::Exists, Quantifier::Forall),
        ]),
    ) {
        let vars = VarOrder::parse("x,y").unwrap();
        let r = Polynomial::from_terms(2, r.terms().map(|(m, c)| {
            let mut m2 = Monomial::one(2);
            m2.0[0] = m.0[0];
            (m2, c.clone())
        }));
        let body = Node::and(vec![Node::atom(p, rels.0), Node::atom(r, rels.1)]);
        let root = Node::Quant(qs.0, 0, Box::new(Node::Quant(qs.1, 1, Box::new(body))));
        let f = Formula::new(vars, root);
        let yes = decide(&f).unwrap();
        prop_assert_eq!(decide(&f.negated()).unwrap(), !yes);
    }

    #[test]
    fn ec_never_adds_cells(e in poly_strategy(2, 2), o in poly_strategy(2, 2), rel in rel_strategy()) {
        prop_assume!(e.squarefree_full().is_primitive(1).unwrap());
        let vars = VarOrder::parse("x,y").unwrap();
        let f = Formula::new(vars, Node::and(vec![Node::atom(e, Rel::Eq), Node::atom(o, rel)]));
        let count = |mode: Mode| {
            let ecs = identify_ecs(&f);
            let plan = plan_projection(&f.polynomials(), &ecs, &f.vars, &mode.plan_options(10_000)).unwrap();
            cell_count(&build_cad(&plan, &LiftOptions::default()).unwrap()).total
        };
        prop_assert!(count(Mode::EcResultant) <= count(Mode::SignInvariant));
    }
}

#[test]
fn round_trip_corpus_of_formulas() {
    use rand::{Rng, SeedableRng};
    let vars = VarOrder::parse("x,y,z").unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let a = common::random_poly(&mut rng, 3, 2, da, true);
        let b = common::random_poly(&mut rng, 3, 1, db, true);
        let body = Node::or(vec![
            Node::atom(a, Rel::Le),
            Node::not(Node::atom(b, Rel::Ne)),
        ]);
        let f = Formula::new(vars.clone(), Node::Quant(Quantifier::Exists, 2, Box::new(body)));
        let text = f.to_text();
        let back = parse_formula_with_order(&text, &vars).unwrap();
        assert_eq!(back.to_text(), text);
    }
}
