//! One-step rewriting with the ε-definitions of the quantifiers:
//!
//! ```text
//! Q x. A  →  A{x ↦ εx. ¬^Q A}        (¬^∃ is empty, ¬^∀ is ¬)
//! ```
//!
//! A redex is any quantifier occurrence, including occurrences inside
//! ε-terms. Steps on vacuous quantifiers form the relation →₀, all others →₁.

mod peak;

pub use peak::{nested_peak, NestedPeak, PeakError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subst::Substitution;
use crate::syntax::{
    replace_at, subterm_at, Formula, FormulaKind, IndVar, Position, Quantifier, Subterm, SyntaxError, Term,
    TermKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no quantifier at position {0}")]
    NotARedex(Position),
    #[error("redex at {0} does not match the formula")]
    StaleRedex(Position),
    #[error("positions {0} and {1} overlap")]
    OverlappingPositions(Position, Position),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RedexKind {
    Vacuous,
    NonVacuous,
}

/// Which part of the partition →₀ / →₁ a step belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Step0,
    Step1,
}

impl RuleKind {
    pub fn label(self) -> &'static str {
        match self {
            RuleKind::Step0 => "step0",
            RuleKind::Step1 => "step1",
        }
    }
}

impl From<RedexKind> for RuleKind {
    fn from(k: RedexKind) -> Self {
        match k {
            RedexKind::Vacuous => RuleKind::Step0,
            RedexKind::NonVacuous => RuleKind::Step1,
        }
    }
}

/// A quantifier occurrence `Q x. A` at `pos`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub pos: Position,
    pub q: Quantifier,
    pub binder: IndVar,
    pub body: Formula,
    pub kind: RedexKind,
    pub innermost: bool,
}

impl Redex {
    fn new(pos: Position, q: Quantifier, binder: &IndVar, body: &Formula) -> Self {
        let kind = if body.has_free(binder) {
            RedexKind::NonVacuous
        } else {
            RedexKind::Vacuous
        };
        Redex {
            pos,
            q,
            binder: binder.clone(),
            body: body.clone(),
            kind,
            innermost: body.is_quantifier_free(),
        }
    }

    pub fn rule(&self) -> RuleKind {
        self.kind.into()
    }

    /// The redex as a formula, `Q x. A`.
    pub fn formula(&self) -> Formula {
        Formula::quant(self.q, self.binder.clone(), self.body.clone())
    }

    /// The right-hand side `A{x ↦ εx. ¬^Q A}`.
    pub fn contractum(&self) -> Formula {
        contractum(self.q, &self.binder, &self.body)
    }
}

pub fn contractum(q: Quantifier, x: &IndVar, body: &Formula) -> Formula {
    if !body.has_free(x) {
        return body.clone();
    }
    let witness = Term::eps(x.clone(), q.negate(body));
    Substitution::singleton(x.clone(), witness).apply(body)
}

/// The redex at `pos`, if the node there is a quantifier.
pub fn redex_at(f: &Formula, pos: &Position) -> Result<Redex, RewriteError> {
    match subterm_at(f, pos)? {
        Subterm::Formula(g) => match g.kind() {
            FormulaKind::Quant(q, x, body) => Ok(Redex::new(pos.clone(), *q, x, body)),
            _ => Err(RewriteError::NotARedex(pos.clone())),
        },
        Subterm::Term(_) => Err(RewriteError::NotARedex(pos.clone())),
    }
}

/// All redexes in pre-order (outside-in, left to right).
pub fn find_redexes(f: &Formula) -> Vec<Redex> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk_formula(f, &mut path, &mut |pos, q, x, body| {
        out.push(Redex::new(Position(pos.to_vec()), q, x, body));
        true
    });
    out
}

/// Redexes not below any other redex.
pub fn outermost_redexes(f: &Formula) -> Vec<Redex> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk_formula(f, &mut path, &mut |pos, q, x, body| {
        out.push(Redex::new(Position(pos.to_vec()), q, x, body));
        false
    });
    out
}

/// Number of outermost redexes, counted without materializing them.
pub fn outermost_count(f: &Formula) -> u128 {
    fn formula(f: &Formula) -> u128 {
        if f.is_quantifier_free() {
            return 0;
        }
        match f.kind() {
            FormulaKind::Quant(..) => 1,
            FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => {
                args.iter().fold(0u128, |acc, a| acc.saturating_add(term(a)))
            }
            FormulaKind::Not(g) => formula(g),
            FormulaKind::Bin(_, l, r) => formula(l).saturating_add(formula(r)),
        }
    }
    fn term(t: &Term) -> u128 {
        if t.quantifier_count() == 0 {
            return 0;
        }
        match t.kind() {
            TermKind::Var(_) => 0,
            TermKind::App(_, args) => args.iter().fold(0u128, |acc, a| acc.saturating_add(term(a))),
            TermKind::Eps(_, body) => formula(body),
        }
    }
    formula(f)
}

/// Pre-order walk over quantifier nodes. The visitor returns whether to
/// descend into the quantifier's body. Subtrees without quantifiers are
/// skipped.
fn walk_formula(
    f: &Formula,
    path: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], Quantifier, &IndVar, &Formula) -> bool,
) {
    if f.is_quantifier_free() {
        return;
    }
    match f.kind() {
        FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                walk_term(a, path, visit);
                path.pop();
            }
        }
        FormulaKind::Not(g) => {
            path.push(0);
            walk_formula(g, path, visit);
            path.pop();
        }
        FormulaKind::Bin(_, l, r) => {
            path.push(0);
            walk_formula(l, path, visit);
            path.pop();
            path.push(1);
            walk_formula(r, path, visit);
            path.pop();
        }
        FormulaKind::Quant(q, x, body) => {
            if visit(path, *q, x, body) {
                path.push(0);
                walk_formula(body, path, visit);
                path.pop();
            }
        }
    }
}

fn walk_term(
    t: &Term,
    path: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], Quantifier, &IndVar, &Formula) -> bool,
) {
    if t.quantifier_count() == 0 {
        return;
    }
    match t.kind() {
        TermKind::Var(_) => {}
        TermKind::App(_, args) => {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                walk_term(a, path, visit);
                path.pop();
            }
        }
        TermKind::Eps(_, body) => {
            path.push(0);
            walk_formula(body, path, visit);
            path.pop();
        }
    }
}

/// First redex in pre-order, which is always outermost.
pub fn leftmost_outermost(f: &Formula) -> Option<Redex> {
    nth_redex(f, 0)
}

/// First innermost redex in pre-order.
pub fn leftmost_innermost(f: &Formula) -> Option<Redex> {
    let mut path = Vec::new();
    let mut node = Subterm::Formula(f.clone());
    loop {
        let next = match &node {
            Subterm::Formula(g) => match g.kind() {
                FormulaKind::Quant(q, x, body) => {
                    if body.is_quantifier_free() {
                        return Some(Redex::new(Position(path), *q, x, body));
                    }
                    Some((0, Subterm::Formula(body.clone())))
                }
                FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => args
                    .iter()
                    .position(|a| a.quantifier_count() > 0)
                    .map(|i| (i, Subterm::Term(args[i].clone()))),
                FormulaKind::Not(h) => (!h.is_quantifier_free()).then(|| (0, Subterm::Formula(h.clone()))),
                FormulaKind::Bin(_, l, r) => {
                    if !l.is_quantifier_free() {
                        Some((0, Subterm::Formula(l.clone())))
                    } else if !r.is_quantifier_free() {
                        Some((1, Subterm::Formula(r.clone())))
                    } else {
                        None
                    }
                }
            },
            Subterm::Term(t) => match t.kind() {
                TermKind::Var(_) => None,
                TermKind::App(_, args) => args
                    .iter()
                    .position(|a| a.quantifier_count() > 0)
                    .map(|i| (i, Subterm::Term(args[i].clone()))),
                TermKind::Eps(_, body) => {
                    (!body.is_quantifier_free()).then(|| (0, Subterm::Formula(body.clone())))
                }
            },
        };
        let (i, child) = next?;
        path.push(i);
        node = child;
    }
}

/// The `k`-th redex in pre-order (0-based), located using the cached
/// quantifier counts.
pub fn nth_redex(f: &Formula, k: u128) -> Option<Redex> {
    if k >= f.quantifier_count() {
        return None;
    }
    let mut k = k;
    let mut path = Vec::new();
    let mut node = Subterm::Formula(f.clone());
    loop {
        let (i, child) = match &node {
            Subterm::Formula(g) => match g.kind() {
                FormulaKind::Quant(q, x, body) => {
                    if k == 0 {
                        return Some(Redex::new(Position(path), *q, x, body));
                    }
                    k -= 1;
                    (0, Subterm::Formula(body.clone()))
                }
                FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => {
                    pick_term(args, &mut k)
                }
                FormulaKind::Not(h) => (0, Subterm::Formula(h.clone())),
                FormulaKind::Bin(_, l, r) => {
                    if k < l.quantifier_count() {
                        (0, Subterm::Formula(l.clone()))
                    } else {
                        k -= l.quantifier_count();
                        (1, Subterm::Formula(r.clone()))
                    }
                }
            },
            Subterm::Term(t) => match t.kind() {
                TermKind::Var(_) => unreachable!("index bounded by quantifier count"),
                TermKind::App(_, args) => pick_term(args, &mut k),
                TermKind::Eps(_, body) => (0, Subterm::Formula(body.clone())),
            },
        };
        path.push(i);
        node = child;
    }
}

fn pick_term(args: &[Term], k: &mut u128) -> (usize, Subterm) {
    for (i, a) in args.iter().enumerate() {
        let c = a.quantifier_count();
        if *k < c {
            return (i, Subterm::Term(a.clone()));
        }
        *k -= c;
    }
    unreachable!("index bounded by quantifier count")
}

pub fn is_normal_form(f: &Formula) -> bool {
    f.is_quantifier_free()
}

fn validate(f: &Formula, r: &Redex) -> Result<(), RewriteError> {
    match subterm_at(f, &r.pos) {
        Ok(Subterm::Formula(g)) => match g.kind() {
            FormulaKind::Quant(q, x, body) if *q == r.q && *x == r.binder && *body == r.body => Ok(()),
            _ => Err(RewriteError::StaleRedex(r.pos.clone())),
        },
        _ => Err(RewriteError::StaleRedex(r.pos.clone())),
    }
}

/// Contracts `r` in `f`. The redex is checked against `f` first.
///
/// The contractum has no free variables beyond those of `Q x. A`, so
/// grafting it back under the surrounding binders cannot capture anything.
pub fn contract(f: &Formula, r: &Redex) -> Result<Formula, RewriteError> {
    validate(f, r)?;
    Ok(replace_at(f, &r.pos, Subterm::Formula(r.contractum()))?)
}

/// Contracts the redex at `pos`.
pub fn contract_at(f: &Formula, pos: &Position) -> Result<(Formula, Redex), RewriteError> {
    let r = redex_at(f, pos)?;
    let g = replace_at(f, pos, Subterm::Formula(r.contractum()))?;
    Ok((g, r))
}

/// Contracts pairwise disjoint redexes simultaneously.
pub fn parallel_step(f: &Formula, rs: &[Redex]) -> Result<Formula, RewriteError> {
    let mut order: Vec<&Redex> = rs.iter().collect();
    order.sort_by(|a, b| a.pos.cmp(&b.pos));
    // In lexicographic order a prefix relation always shows up between
    // neighbours.
    for w in order.windows(2) {
        if !w[0].pos.is_disjoint(&w[1].pos) {
            return Err(RewriteError::OverlappingPositions(w[0].pos.clone(), w[1].pos.clone()));
        }
    }
    for r in &order {
        validate(f, r)?;
    }
    let mut g = f.clone();
    for r in order {
        g = replace_at(&g, &r.pos, Subterm::Formula(r.contractum()))?;
    }
    Ok(g)
}

/// Positions of the free occurrences of `x`, relative to `f`.
pub fn free_occurrences(f: &Formula, x: &IndVar) -> Vec<Position> {
    fn formula(f: &Formula, x: &IndVar, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        if !f.has_free(x) {
            return;
        }
        match f.kind() {
            FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    term(a, x, path, out);
                    path.pop();
                }
            }
            FormulaKind::Not(g) => {
                path.push(0);
                formula(g, x, path, out);
                path.pop();
            }
            FormulaKind::Bin(_, l, r) => {
                path.push(0);
                formula(l, x, path, out);
                path.pop();
                path.push(1);
                formula(r, x, path, out);
                path.pop();
            }
            FormulaKind::Quant(_, _, body) => {
                path.push(0);
                formula(body, x, path, out);
                path.pop();
            }
        }
    }
    fn term(t: &Term, x: &IndVar, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        if !t.has_free(x) {
            return;
        }
        match t.kind() {
            TermKind::Var(_) => out.push(Position(path.clone())),
            TermKind::App(_, args) => {
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    term(a, x, path, out);
                    path.pop();
                }
            }
            TermKind::Eps(_, body) => {
                path.push(0);
                formula(body, x, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    formula(f, x, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, count_epsilons};
    use crate::textio::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn find_redex_examples() {
        let rs = find_redexes(&p("exists x. exists y. R(x, y)"));
        assert_eq!(rs.len(), 2);
        assert_eq!((rs[0].pos.clone(), rs[0].kind, rs[0].innermost), (Position::root(), RedexKind::NonVacuous, false));
        assert_eq!((rs[1].pos.clone(), rs[1].kind, rs[1].innermost), (vec![0].into(), RedexKind::NonVacuous, true));

        let rs = find_redexes(&p("exists x. Q"));
        assert_eq!(rs.len(), 1);
        assert_eq!((rs[0].kind, rs[0].innermost), (RedexKind::Vacuous, true));

        let rs = find_redexes(&p("P(eps x. forall y. S(y))"));
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].pos, vec![0, 0].into());
        assert_eq!((rs[0].kind, rs[0].innermost), (RedexKind::NonVacuous, true));
    }

    #[test]
    fn contract_examples() {
        let f = p("exists x. P(x)");
        let r = &find_redexes(&f)[0];
        assert_eq!(contract(&f, r).unwrap(), p("P(eps x. P(x))"));

        let f = p("forall x. P(x)");
        let r = &find_redexes(&f)[0];
        assert_eq!(contract(&f, r).unwrap(), p("P(eps x. ~P(x))"));

        let f = p("exists x. Q");
        let r = &find_redexes(&f)[0];
        assert_eq!(contract(&f, r).unwrap(), p("Q"));

        let f = p("exists x. exists y. R(x, y)");
        let r = &find_redexes(&f)[0];
        let g = contract(&f, r).unwrap();
        assert!(alpha_eq(&g, &p("exists y. R(eps x. exists y. R(x, y), y)")));
    }

    #[test]
    fn stale_redex_rejected() {
        let f = p("exists x. P(x)");
        let r = find_redexes(&f)[0].clone();
        let g = p("exists x. Q(x)");
        assert_eq!(contract(&g, &r), Err(RewriteError::StaleRedex(Position::root())));
        assert!(matches!(redex_at(&f, &vec![0].into()), Err(RewriteError::NotARedex(_))));
    }

    #[test]
    fn parallel_examples() {
        let f = p("exists x. P(x) & forall y. Q(y)");
        let rs = find_redexes(&f);
        let g = parallel_step(&f, &rs).unwrap();
        assert_eq!(g, p("P(eps x. P(x)) & Q(eps y. ~Q(y))"));
        assert!(parallel_step(&f, &[]).unwrap().ptr_eq(&f));

        let h = p("exists x. exists y. R(x, y)");
        let rs = find_redexes(&h);
        assert!(matches!(parallel_step(&h, &rs), Err(RewriteError::OverlappingPositions(..))));
    }

    #[test]
    fn parallel_on_duplicated_redex_matches_sequential() {
        // After the outer step the inner redex occurs twice.
        let f = p("exists x. exists y. R(x, y)");
        let g = contract(&f, &find_redexes(&f)[0]).unwrap();
        let g = contract(&g, &find_redexes(&g)[0]).unwrap();
        let rs = find_redexes(&g);
        assert_eq!(rs.len(), 2);
        assert!(rs[0].pos.is_disjoint(&rs[1].pos));
        let par = parallel_step(&g, &rs).unwrap();
        let seq = contract(&contract(&g, &rs[0]).unwrap(), &rs[1]).unwrap();
        let seq_rev = contract(&contract(&g, &rs[1]).unwrap(), &rs[0]).unwrap();
        assert_eq!(par, seq);
        assert_eq!(par, seq_rev);
        assert!(is_normal_form(&par));
    }

    #[test]
    fn normal_forms() {
        assert!(is_normal_form(&p("P(eps x. P(x))")));
        assert!(!is_normal_form(&p("exists x. P(x)")));
        assert!(!is_normal_form(&p("P(eps x. forall y. S(y))")));
    }

    #[test]
    fn selection_helpers_agree_with_find_redexes() {
        let f = p("(exists x. P(x, eps z. forall w. S(w, z))) & ~forall y. exists u. R(y, u)");
        let all = find_redexes(&f);
        for (k, r) in all.iter().enumerate() {
            assert_eq!(nth_redex(&f, k as u128).as_ref(), Some(r));
        }
        assert_eq!(nth_redex(&f, all.len() as u128), None);
        assert_eq!(leftmost_outermost(&f).as_ref(), all.first());
        assert_eq!(leftmost_innermost(&f).as_ref(), all.iter().find(|r| r.innermost));
        let outer: Vec<_> = outermost_redexes(&f).into_iter().map(|r| r.pos).collect();
        assert_eq!(outer, vec![Position::from(vec![0]), Position::from(vec![1, 0])]);
        assert_eq!(outermost_count(&f), 2);
    }

    #[test]
    fn epsilon_count_grows_only_on_step1() {
        let f = p("exists x. (P(x) & exists y. Q) ");
        for r in find_redexes(&f) {
            let g = contract(&f, &r).unwrap();
            match r.rule() {
                RuleKind::Step0 => assert_eq!(count_epsilons(&g), count_epsilons(&f)),
                RuleKind::Step1 => assert!(count_epsilons(&g) > count_epsilons(&f)),
            }
        }
    }

    #[test]
    fn free_occurrence_positions() {
        let f = p("R(x, f(x)) & exists x. P(x)");
        let occ = free_occurrences(&f, &IndVar::new("x"));
        assert_eq!(occ, vec![Position::from(vec![0, 0]), Position::from(vec![0, 1, 0])]);
    }
}
