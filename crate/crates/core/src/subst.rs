//! Capture-avoiding substitution of individual variables and formula
//! variables, with β-reduction of formula-variable abstractions.
//!
//! A binder is renamed when it occurs free in the range of the part of the
//! substitution that reaches its body. Fresh names keep the binder's base
//! name and take an index above every index present in the input formula
//! and the substitution, handed out by a counter local to one application.
//! Untouched subtrees are returned as-is, so the result shares structure
//! with the input.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::syntax::{FmlVar, Formula, FormulaKind, IndVar, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("formula variable {var:?} has arity {expected} but the abstraction takes {found} parameters")]
    ArityMismatch {
        var: FmlVar,
        expected: usize,
        found: usize,
    },
    #[error("abstraction parameter {0} is repeated")]
    DuplicateParameter(IndVar),
}

/// `λ(x₁,…,xₙ). F` with pairwise distinct parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FmlAbstraction {
    params: Vec<IndVar>,
    body: Formula,
}

impl FmlAbstraction {
    pub fn new(params: Vec<IndVar>, body: Formula) -> Result<Self, SubstError> {
        for (i, x) in params.iter().enumerate() {
            if params[..i].contains(x) {
                return Err(SubstError::DuplicateParameter(x.clone()));
            }
        }
        Ok(Self { params, body })
    }

    pub fn nullary(body: Formula) -> Self {
        Self {
            params: Vec::new(),
            body,
        }
    }

    pub fn params(&self) -> &[IndVar] {
        &self.params
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    fn has_free(&self, x: &IndVar) -> bool {
        !self.params.contains(x) && self.body.has_free(x)
    }

    fn max_index(&self) -> u32 {
        self.params
            .iter()
            .map(IndVar::index)
            .max()
            .unwrap_or(0)
            .max(self.body.max_index())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    ind: BTreeMap<IndVar, Term>,
    fml: BTreeMap<FmlVar, FmlAbstraction>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: IndVar, t: Term) -> Self {
        let mut s = Self::new();
        s.ind.insert(x, t);
        s
    }

    pub fn singleton_fml(var: FmlVar, abs: FmlAbstraction) -> Result<Self, SubstError> {
        let mut s = Self::new();
        s.insert_fml(var, abs)?;
        Ok(s)
    }

    pub fn insert(&mut self, x: IndVar, t: Term) -> &mut Self {
        self.ind.insert(x, t);
        self
    }

    pub fn insert_fml(&mut self, var: FmlVar, abs: FmlAbstraction) -> Result<&mut Self, SubstError> {
        if var.arity() != abs.params.len() {
            return Err(SubstError::ArityMismatch {
                expected: var.arity(),
                found: abs.params.len(),
                var,
            });
        }
        self.fml.insert(var, abs);
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.ind.is_empty() && self.fml.is_empty()
    }

    pub fn ind_domain(&self) -> impl Iterator<Item = &IndVar> {
        self.ind.keys()
    }

    pub fn fml_domain(&self) -> impl Iterator<Item = &FmlVar> {
        self.fml.keys()
    }

    pub fn get(&self, x: &IndVar) -> Option<&Term> {
        self.ind.get(x)
    }

    pub fn get_fml(&self, v: &FmlVar) -> Option<&FmlAbstraction> {
        self.fml.get(v)
    }

    /// Keeps only the entries whose variable occurs free in `f`.
    pub fn restrict_to(&self, f: &Formula) -> Self {
        Self {
            ind: self
                .ind
                .iter()
                .filter(|(x, _)| f.has_free(x))
                .map(|(x, t)| (x.clone(), t.clone()))
                .collect(),
            fml: self
                .fml
                .iter()
                .filter(|(v, _)| f.has_fml_var(v))
                .map(|(v, a)| (v.clone(), a.clone()))
                .collect(),
        }
    }

    /// Applies the substitution to every term and abstraction body of `self`.
    pub fn map_range(&self, outer: &Substitution) -> Self {
        Self {
            ind: self
                .ind
                .iter()
                .map(|(x, t)| (x.clone(), outer.apply_term(t)))
                .collect(),
            fml: self
                .fml
                .iter()
                .map(|(v, a)| {
                    let inner = outer.without(a.params());
                    (
                        v.clone(),
                        FmlAbstraction {
                            params: a.params.clone(),
                            body: inner.apply(&a.body),
                        },
                    )
                })
                .collect(),
        }
    }

    fn without(&self, vars: &[IndVar]) -> Self {
        let mut s = self.clone();
        for x in vars {
            s.ind.remove(x);
        }
        s
    }

    fn max_index(&self) -> u32 {
        let ind = self
            .ind
            .iter()
            .map(|(x, t)| x.index().max(t.max_index()))
            .max()
            .unwrap_or(0);
        let fml = self.fml.values().map(FmlAbstraction::max_index).max().unwrap_or(0);
        ind.max(fml)
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        if self.is_empty() {
            return f.clone();
        }
        let mut app = Applier::new(self, f.max_index());
        app.formula(f, 0)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        let mut app = Applier::new(self, t.max_index());
        app.term(t, 0)
    }
}

pub fn apply_subst(f: &Formula, s: &Substitution) -> Formula {
    s.apply(f)
}

pub fn apply_subst_term(t: &Term, s: &Substitution) -> Term {
    s.apply_term(t)
}

/// One substitution state along a path from the root: the original entries
/// minus those shadowed by binders, plus binder renamings.
#[derive(Clone)]
struct Ctx {
    ind: Vec<(IndVar, Term)>,
    fml: Vec<(FmlVar, FmlAbstraction)>,
}

type CtxKey = (Vec<(IndVar, usize)>, Vec<(FmlVar, usize)>);

impl Ctx {
    fn key(&self) -> CtxKey {
        (
            self.ind.iter().map(|(x, t)| (x.clone(), t.addr())).collect(),
            self.fml.iter().map(|(v, a)| (v.clone(), a.body.addr())).collect(),
        )
    }

    fn touches_formula(&self, f: &Formula) -> bool {
        self.ind.iter().any(|(x, _)| f.has_free(x)) || self.fml.iter().any(|(v, _)| f.has_fml_var(v))
    }

    fn touches_term(&self, t: &Term) -> bool {
        self.ind.iter().any(|(x, _)| t.has_free(x)) || self.fml.iter().any(|(v, _)| t.has_fml_var(v))
    }

    /// Does `y` occur free in the range of an entry that reaches `body`?
    fn captures(&self, y: &IndVar, body: &Formula) -> bool {
        self.ind
            .iter()
            .any(|(x, t)| x != y && body.has_free(x) && t.has_free(y))
            || self
                .fml
                .iter()
                .any(|(v, a)| body.has_fml_var(v) && a.has_free(y))
    }
}

struct Applier {
    ctxs: Vec<Ctx>,
    ctx_ids: HashMap<CtxKey, usize>,
    memo_f: HashMap<(usize, usize), Formula>,
    memo_t: HashMap<(usize, usize), Term>,
    next_index: u32,
}

impl Applier {
    fn new(s: &Substitution, input_max: u32) -> Self {
        let root = Ctx {
            ind: s.ind.iter().map(|(x, t)| (x.clone(), t.clone())).collect(),
            fml: s.fml.iter().map(|(v, a)| (v.clone(), a.clone())).collect(),
        };
        let mut ctx_ids = HashMap::new();
        ctx_ids.insert(root.key(), 0);
        Applier {
            ctxs: vec![root],
            ctx_ids,
            memo_f: HashMap::new(),
            memo_t: HashMap::new(),
            next_index: input_max.max(s.max_index()) + 1,
        }
    }

    fn intern(&mut self, ctx: Ctx) -> usize {
        let key = ctx.key();
        if let Some(&id) = self.ctx_ids.get(&key) {
            return id;
        }
        let id = self.ctxs.len();
        self.ctxs.push(ctx);
        self.ctx_ids.insert(key, id);
        id
    }

    /// Context for the body of a binder on `y`; returns the (possibly
    /// renamed) binder and the context id.
    fn enter_binder(&mut self, c: usize, y: &IndVar, body: &Formula) -> (IndVar, usize) {
        let ctx = &self.ctxs[c];
        let shadowed = ctx.ind.iter().any(|(x, _)| x == y);
        let clash = ctx.captures(y, body);
        if !shadowed && !clash {
            return (y.clone(), c);
        }
        let mut inner = ctx.clone();
        inner.ind.retain(|(x, _)| x != y);
        let binder = if clash {
            let fresh = y.renamed(self.next_index);
            self.next_index += 1;
            inner.ind.push((y.clone(), Term::var(fresh.clone())));
            fresh
        } else {
            y.clone()
        };
        (binder, self.intern(inner))
    }

    fn formula(&mut self, f: &Formula, c: usize) -> Formula {
        if !self.ctxs[c].touches_formula(f) {
            return f.clone();
        }
        if let Some(r) = self.memo_f.get(&(f.addr(), c)) {
            return r.clone();
        }
        let out = match f.kind() {
            FormulaKind::FmlApp(v, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.term(a, c)).collect();
                let abs = self.ctxs[c]
                    .fml
                    .iter()
                    .find(|(w, _)| w == v)
                    .map(|(_, a)| a.clone());
                match abs {
                    Some(abs) => {
                        // β-reduction: F{x₁ ↦ t₁σ, …, xₙ ↦ tₙσ}
                        let beta = Ctx {
                            ind: abs.params.iter().cloned().zip(args).collect(),
                            fml: Vec::new(),
                        };
                        let id = self.intern(beta);
                        self.formula(&abs.body, id)
                    }
                    None => Formula::fml_app(v.clone(), args),
                }
            }
            FormulaKind::Pred(p, args) => {
                let args = args.iter().map(|a| self.term(a, c)).collect();
                Formula::new(FormulaKind::Pred(p.clone(), args))
            }
            FormulaKind::Not(g) => Formula::not(self.formula(g, c)),
            FormulaKind::Bin(k, l, r) => {
                let l = self.formula(l, c);
                let r = self.formula(r, c);
                Formula::bin(*k, l, r)
            }
            FormulaKind::Quant(q, y, body) => {
                let (binder, inner) = self.enter_binder(c, y, body);
                Formula::quant(*q, binder, self.formula(body, inner))
            }
        };
        self.memo_f.insert((f.addr(), c), out.clone());
        out
    }

    fn term(&mut self, t: &Term, c: usize) -> Term {
        if !self.ctxs[c].touches_term(t) {
            return t.clone();
        }
        if let Some(r) = self.memo_t.get(&(t.addr(), c)) {
            return r.clone();
        }
        let out = match t.kind() {
            TermKind::Var(x) => self.ctxs[c]
                .ind
                .iter()
                .find(|(y, _)| y == x)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(|| t.clone()),
            TermKind::App(fun, args) => {
                let args = args.iter().map(|a| self.term(a, c)).collect();
                Term::new(TermKind::App(fun.clone(), args))
            }
            TermKind::Eps(y, body) => {
                let (binder, inner) = self.enter_binder(c, y, body);
                Term::eps(binder, self.formula(body, inner))
            }
        };
        self.memo_t.insert((t.addr(), c), out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, Quantifier};
    use crate::textio::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn x(name: &str) -> IndVar {
        IndVar::new(name)
    }

    #[test]
    fn replacement_is_not_captured() {
        let f = Formula::exists(x("x"), Formula::atom("A"));
        let s = Substitution::singleton_fml(
            FmlVar::new("A", 0),
            FmlAbstraction::nullary(Formula::pred("p", vec![Term::named("x")])),
        )
        .unwrap();
        let g = s.apply(&f);
        match g.kind() {
            FormulaKind::Quant(Quantifier::Exists, binder, body) => {
                assert_ne!(binder, &x("x"));
                assert_eq!(binder.name(), "x");
                assert_eq!(body, &Formula::pred("p", vec![Term::named("x")]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(g.has_free(&x("x")));
    }

    #[test]
    fn bound_variable_untouched() {
        let f = p("forall x. A(x)");
        let g = Substitution::singleton(x("x"), Term::app("t", vec![])).apply(&f);
        assert!(g.ptr_eq(&f));
    }

    #[test]
    fn beta_reduction() {
        let f = p("A(y)");
        let body = Formula::pred("r", vec![Term::named("u"), Term::named("u")]);
        let abs = FmlAbstraction::new(vec![x("u")], body).unwrap();
        let s = Substitution::singleton_fml(FmlVar::new("A", 1), abs).unwrap();
        assert_eq!(s.apply(&f), p("r(y, y)"));
    }

    #[test]
    fn beta_does_not_capture_through_abstraction_body() {
        // (exists y. A(x)){A ↦ λ(u). r(u, y)} keeps y free.
        let f = p("exists y. A(x)");
        let abs = FmlAbstraction::new(
            vec![x("u")],
            Formula::pred("r", vec![Term::named("u"), Term::named("y")]),
        )
        .unwrap();
        let s = Substitution::singleton_fml(FmlVar::new("A", 1), abs).unwrap();
        let g = s.apply(&f);
        assert!(g.has_free(&x("y")));
        assert!(g.has_free(&x("x")));
        assert!(alpha_eq(&g, &p("exists z. r(x, y)")));
    }

    #[test]
    fn singleton_examples() {
        let e = Term::eps(x("x"), p("P(x)"));
        let s = Substitution::singleton(x("x"), e);
        assert_eq!(s.apply(&p("P(x)")), p("P(eps x. P(x))"));

        let q = p("Q");
        assert!(Substitution::singleton(x("x"), Term::named("y")).apply(&q).ptr_eq(&q));

        let g = p("B & ~H");
        let hole = Substitution::singleton_fml(FmlVar::new("H", 0), FmlAbstraction::nullary(p("P(c)"))).unwrap();
        assert_eq!(hole.apply(&g), p("B & ~P(c)"));
    }

    #[test]
    fn arity_mismatch_rejected() {
        let abs = FmlAbstraction::new(vec![x("u")], p("P(u)")).unwrap();
        assert!(matches!(
            Substitution::singleton_fml(FmlVar::new("A", 2), abs),
            Err(SubstError::ArityMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(
            FmlAbstraction::new(vec![x("u"), x("u")], p("P(u)")),
            Err(SubstError::DuplicateParameter(_))
        ));
    }

    #[test]
    fn simultaneous_not_sequential() {
        let mut s = Substitution::new();
        s.insert(x("x"), Term::named("y")).insert(x("y"), Term::named("x"));
        assert_eq!(s.apply(&p("R(x, y)")), p("R(y, x)"));
    }

    #[test]
    fn sharing_is_preserved() {
        let shared = p("exists z. P(z)");
        let f = Formula::and(shared.clone(), p("Q(x)"));
        let g = Substitution::singleton(x("x"), Term::named("w")).apply(&f);
        match g.kind() {
            FormulaKind::Bin(_, l, _) => assert!(l.ptr_eq(&shared)),
            _ => unreachable!(),
        }
    }
}
