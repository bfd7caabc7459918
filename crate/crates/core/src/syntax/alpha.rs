//! Alpha-equivalence by canonical renaming.
//!
//! A binder is renamed to the canonical variable `_k`, where `k` is the
//! smallest index above every canonical binder in its (already canonical)
//! body and above every free canonical variable other than the binder
//! itself. The name of a binder therefore depends only on the subtree below
//! it, never on the surrounding context, so a shared subtree has a single
//! canonical form and the result can be hash-consed.
//!
//! Input binders that already carry canonical names are first moved to a
//! reserved name space, so that a canonical-looking free variable is always
//! genuinely free.

use std::collections::{HashMap, HashSet};

use super::{Formula, FormulaKind, IndVar, Term, TermKind};

/// Canonicalizes formulas into a shared, hash-consed pool. Two formulas
/// canonicalized by the same instance are alpha-equivalent iff the results
/// are pointer-equal.
#[derive(Default)]
pub struct Canonicalizer {
    memo_f: HashMap<usize, (Formula, Formula)>,
    memo_t: HashMap<usize, (Term, Term)>,
    hidden_f: HashMap<usize, (Formula, Formula)>,
    hidden_t: HashMap<usize, (Term, Term)>,
    pool_f: HashSet<Formula>,
    pool_t: HashSet<Term>,
}

impl Canonicalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn formula(&mut self, f: &Formula) -> Formula {
        if f.bound_height() == 0 {
            return self.canon_f(f);
        }
        let g = self.hide_f(f);
        self.canon_f(&g)
    }

    pub fn term(&mut self, t: &Term) -> Term {
        if t.bound_height() == 0 {
            return self.canon_t(t);
        }
        let s = self.hide_t(t);
        self.canon_t(&s)
    }

    fn canon_f(&mut self, f: &Formula) -> Formula {
        if let Some((_, c)) = self.memo_f.get(&f.addr()) {
            return c.clone();
        }
        let out = match f.kind() {
            FormulaKind::FmlApp(v, args) => {
                let args = args.iter().map(|a| self.canon_t(a)).collect();
                Formula::fml_app(v.clone(), args)
            }
            FormulaKind::Pred(p, args) => {
                let args = args.iter().map(|a| self.canon_t(a)).collect();
                Formula::new(FormulaKind::Pred(p.clone(), args))
            }
            FormulaKind::Not(g) => Formula::not(self.canon_f(g)),
            FormulaKind::Bin(c, l, r) => {
                let l = self.canon_f(l);
                let r = self.canon_f(r);
                Formula::bin(*c, l, r)
            }
            FormulaKind::Quant(q, x, body) => {
                let body = self.canon_f(body);
                let v = canonical_binder(x, body.bound_height(), body.free_ind_vars());
                let body = self.rename_in(&body, x, &v);
                Formula::quant(*q, v, body)
            }
        };
        let out = self.intern_f(out);
        self.memo_f.insert(f.addr(), (f.clone(), out.clone()));
        out
    }

    fn canon_t(&mut self, t: &Term) -> Term {
        if let Some((_, c)) = self.memo_t.get(&t.addr()) {
            return c.clone();
        }
        let out = match t.kind() {
            TermKind::Var(_) => t.clone(),
            TermKind::App(fun, args) => {
                let args = args.iter().map(|a| self.canon_t(a)).collect();
                Term::new(TermKind::App(fun.clone(), args))
            }
            TermKind::Eps(x, body) => {
                let body = self.canon_f(body);
                let v = canonical_binder(x, body.bound_height(), body.free_ind_vars());
                let body = self.rename_in(&body, x, &v);
                Term::eps(v, body)
            }
        };
        let out = self.intern_t(out);
        self.memo_t.insert(t.addr(), (t.clone(), out.clone()));
        out
    }

    /// Renames every binder `_k` of the input to the reserved `\0_k`.
    fn hide_f(&mut self, f: &Formula) -> Formula {
        if f.bound_height() == 0 {
            return f.clone();
        }
        if let Some((_, h)) = self.hidden_f.get(&f.addr()) {
            return h.clone();
        }
        let out = match f.kind() {
            FormulaKind::FmlApp(v, args) => {
                let args = args.iter().map(|a| self.hide_t(a)).collect();
                Formula::fml_app(v.clone(), args)
            }
            FormulaKind::Pred(p, args) => {
                let args = args.iter().map(|a| self.hide_t(a)).collect();
                Formula::new(FormulaKind::Pred(p.clone(), args))
            }
            FormulaKind::Not(g) => Formula::not(self.hide_f(g)),
            FormulaKind::Bin(c, l, r) => {
                let l = self.hide_f(l);
                let r = self.hide_f(r);
                Formula::bin(*c, l, r)
            }
            FormulaKind::Quant(q, x, body) => {
                let (v, body) = self.hide_binder(x, body);
                Formula::quant(*q, v, body)
            }
        };
        self.hidden_f.insert(f.addr(), (f.clone(), out.clone()));
        out
    }

    fn hide_t(&mut self, t: &Term) -> Term {
        if t.bound_height() == 0 {
            return t.clone();
        }
        if let Some((_, h)) = self.hidden_t.get(&t.addr()) {
            return h.clone();
        }
        let out = match t.kind() {
            TermKind::Var(_) => t.clone(),
            TermKind::App(fun, args) => {
                let args = args.iter().map(|a| self.hide_t(a)).collect();
                Term::new(TermKind::App(fun.clone(), args))
            }
            TermKind::Eps(x, body) => {
                let (v, body) = self.hide_binder(x, body);
                Term::eps(v, body)
            }
        };
        self.hidden_t.insert(t.addr(), (t.clone(), out.clone()));
        out
    }

    /// Inner binders named `_k` are already hidden, so the free occurrences
    /// renamed here cannot sit below a binder named `\0_k`.
    fn hide_binder(&mut self, x: &IndVar, body: &Formula) -> (IndVar, Formula) {
        let body = self.hide_f(body);
        if !x.is_canonical() {
            return (x.clone(), body);
        }
        let v = IndVar::with_index(HIDDEN, x.index());
        let body = self.rename(&body, x, &v, false);
        (v, body)
    }

    fn intern_f(&mut self, f: Formula) -> Formula {
        if let Some(existing) = self.pool_f.get(&f) {
            return existing.clone();
        }
        self.pool_f.insert(f.clone());
        f
    }

    fn intern_t(&mut self, t: Term) -> Term {
        if let Some(existing) = self.pool_t.get(&t) {
            return existing.clone();
        }
        self.pool_t.insert(t.clone());
        t
    }

    /// Replaces free occurrences of `from` by `to` in a canonical formula.
    /// `to` is chosen so that no binder below can capture it.
    fn rename_in(&mut self, f: &Formula, from: &IndVar, to: &IndVar) -> Formula {
        if from == to || !f.has_free(from) {
            return f.clone();
        }
        self.rename(f, from, to, true)
    }

    fn rename(&mut self, f: &Formula, from: &IndVar, to: &IndVar, intern: bool) -> Formula {
        if !f.has_free(from) {
            return f.clone();
        }
        let mut memo = Rename {
            from,
            to,
            intern,
            formulas: HashMap::new(),
            terms: HashMap::new(),
        };
        memo.formula(self, f)
    }
}

const HIDDEN: &str = "\0";

struct Rename<'a> {
    from: &'a IndVar,
    to: &'a IndVar,
    intern: bool,
    formulas: HashMap<usize, Formula>,
    terms: HashMap<usize, Term>,
}

impl Rename<'_> {
    fn formula(&mut self, c: &mut Canonicalizer, f: &Formula) -> Formula {
        if !f.has_free(self.from) {
            return f.clone();
        }
        if let Some(r) = self.formulas.get(&f.addr()) {
            return r.clone();
        }
        let out = match f.kind() {
            FormulaKind::FmlApp(v, args) => {
                let args = args.iter().map(|a| self.term(c, a)).collect();
                Formula::fml_app(v.clone(), args)
            }
            FormulaKind::Pred(p, args) => {
                let args = args.iter().map(|a| self.term(c, a)).collect();
                Formula::new(FormulaKind::Pred(p.clone(), args))
            }
            FormulaKind::Not(g) => Formula::not(self.formula(c, g)),
            FormulaKind::Bin(k, l, r) => {
                let l = self.formula(c, l);
                let r = self.formula(c, r);
                Formula::bin(*k, l, r)
            }
            FormulaKind::Quant(q, x, body) => Formula::quant(*q, x.clone(), self.formula(c, body)),
        };
        let out = if self.intern { c.intern_f(out) } else { out };
        self.formulas.insert(f.addr(), out.clone());
        out
    }

    fn term(&mut self, c: &mut Canonicalizer, t: &Term) -> Term {
        if !t.has_free(self.from) {
            return t.clone();
        }
        if let Some(r) = self.terms.get(&t.addr()) {
            return r.clone();
        }
        let out = match t.kind() {
            TermKind::Var(_) => Term::var(self.to.clone()),
            TermKind::App(fun, args) => {
                let args = args.iter().map(|a| self.term(c, a)).collect();
                Term::new(TermKind::App(fun.clone(), args))
            }
            TermKind::Eps(x, body) => Term::eps(x.clone(), self.formula(c, body)),
        };
        let out = if self.intern { c.intern_t(out) } else { out };
        self.terms.insert(t.addr(), out.clone());
        out
    }
}

fn canonical_binder(binder: &IndVar, bound_height: u32, free: &[IndVar]) -> IndVar {
    let free_height = free
        .iter()
        .filter(|v| v.is_canonical() && *v != binder)
        .map(|v| v.index() + 1)
        .max()
        .unwrap_or(0);
    IndVar::canonical(bound_height.max(free_height))
}

pub fn canonicalize(f: &Formula) -> Formula {
    Canonicalizer::new().formula(f)
}

pub fn canonicalize_term(t: &Term) -> Term {
    Canonicalizer::new().term(t)
}

pub fn alpha_eq(f: &Formula, g: &Formula) -> bool {
    if f.ptr_eq(g) {
        return true;
    }
    let mut c = Canonicalizer::new();
    c.formula(f).ptr_eq(&c.formula(g))
}

pub fn alpha_eq_term(s: &Term, t: &Term) -> bool {
    if s.ptr_eq(t) {
        return true;
    }
    let mut c = Canonicalizer::new();
    c.term(s).ptr_eq(&c.term(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::free_vars;
    use crate::textio::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn alpha_eq_examples() {
        assert!(alpha_eq(&p("exists x. P(x)"), &p("exists y. P(y)")));
        assert!(!alpha_eq(&p("exists x. P(x)"), &p("exists y. P(z)")));
        assert!(alpha_eq(&p("Q(eps x. S(x, y))"), &p("Q(eps z. S(z, y))")));
        assert!(!alpha_eq(&p("exists x. exists y. R(x, y)"), &p("exists x. exists y. R(y, x)")));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&p("exists x. P(x)")), p("exists _0. P(_0)"));
        assert_eq!(canonicalize(&p("P(y)")), p("P(y)"));
        assert_eq!(
            canonicalize(&p("forall a. forall b. R(a, b)")),
            p("forall _1. forall _0. R(_1, _0)")
        );
    }

    #[test]
    fn canonical_binders_in_input_are_context_free() {
        let a = p("R(eps _5. R(_5, eps _4. R(_5, _4)), eps _6. R(eps _5. R(_5, eps _4. R(_5, _4)), _6))");
        let b = p("R(eps _9. R(_9, eps _8. R(_9, _8)), eps _10. R(eps _9. R(_9, eps _8. R(_9, _8)), _10))");
        let c = p("R(eps x. R(x, eps y. R(x, y)), eps y. R(eps x. R(x, eps y. R(x, y)), y))");
        assert!(alpha_eq(&a, &b));
        assert!(alpha_eq(&a, &c));
        assert_eq!(canonicalize(&a), canonicalize(&c));
        assert_eq!(canonicalize(&canonicalize(&a)), canonicalize(&a));
    }

    #[test]
    fn canonical_names_in_input_do_not_confuse_renaming() {
        let a = p("exists _5. P(_5)");
        let b = p("exists x. P(x)");
        assert!(alpha_eq(&a, &b));
        // A free canonical-looking variable must not be captured.
        let c = p("exists x. R(x, _0)");
        let d = canonicalize(&c);
        assert_eq!(free_vars(&d), free_vars(&c));
        assert!(!alpha_eq(&c, &p("exists x. R(x, x)")));
        assert!(!alpha_eq(&c, &p("exists _0. R(_0, _0)")));
    }

    #[test]
    fn shadowing_is_respected() {
        let f = p("exists x. P(x) & exists x. Q(x)");
        let g = p("exists y. P(y) & exists z. Q(z)");
        assert!(alpha_eq(&f, &g));
        assert!(!alpha_eq(&p("exists x. (P(x) & exists y. Q(x))"), &p("exists x. (P(x) & exists x. Q(x))")));
    }
}
