//! Worked examples, end to end through the parser.

use epsilon_core::rewrite::{contract, find_redexes, parallel_step, RedexKind, RuleKind};
use epsilon_core::strategy::{all_derivations, normalize, trace_text, Strategy};
use epsilon_core::subst::{apply_subst, FmlAbstraction, Substitution};
use epsilon_core::syntax::{
    alpha_eq, canonicalize, count_epsilons, count_quantifiers, eps_nesting_depth, free_vars, replace_at, subterm_at,
    FmlVar, Formula, IndVar, Position, Subterm, Term,
};
use epsilon_core::textio::{parse_formula, parse_term, print_formula};

fn p(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn pos(v: &[usize]) -> Position {
    Position(v.to_vec())
}

#[test]
fn free_variables() {
    let fv = free_vars(&p("exists x. P(x, y)"));
    assert_eq!(fv.ind, [IndVar::new("y")].into());
    assert!(fv.fml.iter().all(|v| v.name() == "P"));
    let fv = free_vars(&p("Q(eps x. A)"));
    assert!(fv.ind.is_empty());
    assert!(fv.fml.contains(&FmlVar::new("A", 0)));
    assert_eq!(free_vars(&p("P(x)")).ind, [IndVar::new("x")].into());
}

#[test]
fn alpha_equivalence() {
    assert!(alpha_eq(&p("exists x. P(x)"), &p("exists y. P(y)")));
    assert!(!alpha_eq(&p("exists x. P(x)"), &p("exists y. P(z)")));
    assert!(alpha_eq(&p("S(eps x. Q(x, y))"), &p("S(eps z. Q(z, y))")));
    let c = canonicalize(&p("forall a. forall b. R(a, b)"));
    assert_eq!(c, canonicalize(&p("forall u. forall v. R(u, v)")));
    assert_eq!(canonicalize(&p("P(y)")), p("P(y)"));
}

#[test]
fn counting() {
    let f = p("exists x. exists y. R(x, y)");
    assert_eq!((count_quantifiers(&f), count_epsilons(&f), eps_nesting_depth(&f)), (2, 0, 0));
    let f = p("P(eps x. P(x))");
    assert_eq!((count_quantifiers(&f), count_epsilons(&f), eps_nesting_depth(&f)), (0, 1, 1));
    let nf = normalize(&p("exists x. exists y. R(x, y)"), Strategy::LeftmostInnermost)
        .unwrap()
        .final_formula;
    assert_eq!((count_quantifiers(&nf), count_epsilons(&nf), eps_nesting_depth(&nf)), (0, 5, 3));
}

#[test]
fn positions() {
    let f = p("exists x. P(x)");
    assert_eq!(subterm_at(&f, &pos(&[0])).unwrap(), Subterm::Formula(p("P(x)")));
    assert_eq!(
        replace_at(&f, &pos(&[0]), Subterm::Formula(p("Q"))).unwrap(),
        p("exists x. Q")
    );
    assert_eq!(subterm_at(&p("~(A & B)"), &pos(&[0, 1])).unwrap(), Subterm::Formula(p("B")));
}

#[test]
fn substitution() {
    // The free x of the replacement is not captured.
    let s = Substitution::singleton_fml(FmlVar::new("A", 0), FmlAbstraction::nullary(p("P(x)"))).unwrap();
    let g = apply_subst(&p("exists x. A"), &s);
    assert!(alpha_eq(&g, &p("exists z. P(x)")));
    assert!(g.has_free(&IndVar::new("x")));

    let t = parse_term("f(c)").unwrap();
    let s = Substitution::singleton(IndVar::new("x"), t);
    assert_eq!(apply_subst(&p("exists x. A(x)"), &s), p("exists x. A(x)"));

    let body = p("R(u, u)");
    let s = Substitution::singleton_fml(
        FmlVar::new("A", 1),
        FmlAbstraction::new(vec![IndVar::new("u")], body).unwrap(),
    )
    .unwrap();
    assert_eq!(apply_subst(&p("A(y)"), &s), p("R(y, y)"));

    let eps = parse_term("eps x. P(x)").unwrap();
    assert_eq!(apply_subst(&p("P(x)"), &Substitution::singleton(IndVar::new("x"), eps)), p("P(eps x. P(x))"));
    let s = Substitution::singleton(IndVar::new("x"), Term::var(IndVar::new("y")));
    assert_eq!(apply_subst(&p("Q"), &s), p("Q"));
}

#[test]
fn redex_discovery() {
    let rs = find_redexes(&p("exists x. exists y. R(x, y)"));
    assert_eq!(rs.len(), 2);
    assert_eq!((rs[0].kind, rs[0].innermost), (RedexKind::NonVacuous, false));
    assert_eq!((rs[1].kind, rs[1].innermost), (RedexKind::NonVacuous, true));

    let rs = find_redexes(&p("exists x. Q"));
    assert_eq!((rs[0].kind, rs[0].innermost), (RedexKind::Vacuous, true));

    let rs = find_redexes(&p("P(eps x. forall y. S(y))"));
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0].pos, pos(&[0, 0]));
    assert_eq!((rs[0].kind, rs[0].innermost), (RedexKind::NonVacuous, true));
}

#[test]
fn contraction() {
    let one = |s: &str| {
        let f = p(s);
        contract(&f, &find_redexes(&f)[0]).unwrap()
    };
    assert_eq!(one("exists x. P(x)"), p("P(eps x. P(x))"));
    assert_eq!(one("forall x. P(x)"), p("P(eps x. ~P(x))"));
    assert_eq!(one("exists x. Q"), p("Q"));
    assert!(alpha_eq(
        &one("exists x. exists y. R(x, y)"),
        &p("exists y. R(eps x. exists y. R(x, y), y)")
    ));

    let f = p("exists x. P(x) & forall y. Q(y)");
    let g = parallel_step(&f, &find_redexes(&f)).unwrap();
    assert_eq!(g, p("P(eps x. P(x)) & Q(eps y. ~Q(y))"));
    assert_eq!(parallel_step(&f, &[]).unwrap(), f);
}

#[test]
fn normalization() {
    let f = p("exists x. exists y. R(x, y)");
    let inner = normalize(&f, Strategy::LeftmostInnermost).unwrap();
    assert_eq!(inner.step_count(), 2);
    // R(e, εy. R(e, y)) with e = εx. R(x, εy. R(x, y)).
    let e = "eps x. R(x, eps y. R(x, y))";
    assert!(alpha_eq(&inner.final_formula, &p(&format!("R({e}, eps y. R({e}, y))"))));
    let outer = normalize(&f, Strategy::LeftmostOutermost).unwrap();
    assert_eq!(outer.step_count(), 4);
    assert!(alpha_eq(&outer.final_formula, &inner.final_formula));
    assert!(outer.steps.iter().all(|s| s.rule() == RuleKind::Step1));
    let text = trace_text(&inner);
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("step 1: step1 at [0] quantifier exists y → "));

    let t = normalize(&p("P(c)"), Strategy::Random(1)).unwrap();
    assert_eq!(t.step_count(), 0);
    assert_eq!(print_formula(&t.final_formula), "P(c)");
}

#[test]
fn enumerated_derivations() {
    let g = all_derivations(&p("exists x. P(x)"), 10).unwrap();
    assert_eq!(g.derivations(10).len(), 1);

    let g = all_derivations(&p("exists x. Q & exists y. Q"), 10).unwrap();
    let ds = g.derivations(10);
    assert_eq!(ds.len(), 2);
    assert!(ds.iter().all(|d| d.final_formula == p("Q & Q")));

    let g = all_derivations(&p("exists x. exists y. R(x, y)"), 100).unwrap();
    let lengths: Vec<usize> = g.derivations(100).iter().map(|d| d.step_count()).collect();
    assert!(lengths.iter().all(|l| (2..=4).contains(l)));
    assert!(lengths.contains(&2) && lengths.contains(&4));
}
