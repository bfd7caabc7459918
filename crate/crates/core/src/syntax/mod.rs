//! Terms and formulas of first-order logic with Hilbert's ε-binder.
//!
//! Nodes are immutable and reference counted, so substitution can share every
//! subtree it does not touch. Each node caches a small amount of metadata
//! (structural hash, tree size, quantifier and ε counts, free variables) that
//! is computed once at construction. All counts are *tree* counts: a shared
//! subtree contributes once per occurrence, exactly as in the plain tree.

mod alpha;
mod position;

pub use alpha::{alpha_eq, alpha_eq_term, canonicalize, canonicalize_term, Canonicalizer};
pub use position::{replace_at, subterm_at, Position, Subterm};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

thread_local! {
    static ALLOCATED: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

fn count_allocation() {
    ALLOCATED.with(|c| c.set(c.get().wrapping_add(1)));
}

/// Number of formula and term nodes constructed so far on this thread.
/// Differences between two readings measure the work done in between.
pub fn allocated_nodes() -> u64 {
    ALLOCATED.with(|c| c.get())
}

/// Name of a predicate or function symbol.
pub type Symbol = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("invalid position {0}")]
    InvalidPosition(Position),
    #[error("position {position} holds a {expected}, got a {found}")]
    CategoryMismatch {
        position: Position,
        expected: &'static str,
        found: &'static str,
    },
    #[error("symbol `{symbol}` used with arity {first} and {second}")]
    ArityConflict {
        symbol: String,
        first: usize,
        second: usize,
    },
}

/// An individual variable.
///
/// Variables carry a base name and a numeric index; `x` is `(x, 0)` and
/// `x_3` is `(x, 3)`. Fresh variables reuse the base name with a larger
/// index. The empty base name is reserved for canonical bound names, which
/// print as `_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndVar {
    name: Arc<str>,
    index: u32,
}

impl IndVar {
    /// Builds a variable from its printed form, splitting a `_N` suffix
    /// into the index (no leading zeros).
    pub fn new(text: &str) -> Self {
        assert!(!text.is_empty(), "variable names must be nonempty");
        if let Some((base, digits)) = text.rsplit_once('_') {
            if let Some(index) = parse_index(digits) {
                return Self::with_index(base, index);
            }
        }
        Self::with_index(text, 0)
    }

    pub fn with_index(name: &str, index: u32) -> Self {
        Self {
            name: Arc::from(name),
            index,
        }
    }

    pub(crate) fn canonical(index: u32) -> Self {
        Self {
            name: Arc::from(""),
            index,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_canonical(&self) -> bool {
        self.name.is_empty()
    }

    pub(crate) fn renamed(&self, index: u32) -> Self {
        Self {
            name: self.name.clone(),
            index,
        }
    }
}

fn parse_index(digits: &str) -> Option<u32> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

impl fmt::Display for IndVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.is_empty() || self.index != 0 {
            write!(f, "{}_{}", self.name, self.index)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl fmt::Debug for IndVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An n-ary formula variable (Formelvariable). Name and arity together
/// identify the variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FmlVar {
    name: Arc<str>,
    arity: usize,
}

impl FmlVar {
    pub fn new(name: &str, arity: usize) -> Self {
        assert!(!name.is_empty(), "formula variable names must be nonempty");
        Self {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Debug for FmlVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    /// `¬^Q`: the empty prefix for ∃ and negation for ∀.
    pub fn negate(self, body: &Formula) -> Formula {
        match self {
            Quantifier::Exists => body.clone(),
            Quantifier::Forall => Formula::not(body.clone()),
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
    Equiv,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Equiv,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Equiv => "<->",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormulaKind {
    FmlApp(FmlVar, Vec<Term>),
    Pred(Symbol, Vec<Term>),
    Not(Formula),
    Bin(Connective, Formula, Formula),
    Quant(Quantifier, IndVar, Formula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermKind {
    Var(IndVar),
    App(Symbol, Vec<Term>),
    Eps(IndVar, Formula),
}

/// Cached per-node data.
#[derive(Debug, Clone)]
struct Meta {
    hash: u64,
    size: u128,
    quantifiers: u128,
    epsilons: u128,
    eps_depth: u32,
    /// Largest variable index occurring anywhere below (free or bound).
    max_index: u32,
    /// One more than the largest canonical binder index below, 0 if none.
    bound_height: u32,
    free_ind: Arc<[IndVar]>,
    free_fml: Arc<[FmlVar]>,
}

impl Meta {
    fn leaf(hash: u64) -> Self {
        Meta {
            hash,
            size: 1,
            quantifiers: 0,
            epsilons: 0,
            eps_depth: 0,
            max_index: 0,
            bound_height: 0,
            free_ind: empty_slice(),
            free_fml: empty_slice(),
        }
    }

    fn absorb(&mut self, child: &Meta) {
        self.size = self.size.saturating_add(child.size);
        self.quantifiers = self.quantifiers.saturating_add(child.quantifiers);
        self.epsilons = self.epsilons.saturating_add(child.epsilons);
        self.eps_depth = self.eps_depth.max(child.eps_depth);
        self.max_index = self.max_index.max(child.max_index);
        self.bound_height = self.bound_height.max(child.bound_height);
        self.free_ind = merge_sorted(&self.free_ind, &child.free_ind);
        self.free_fml = merge_sorted(&self.free_fml, &child.free_fml);
    }

    fn bind(&mut self, binder: &IndVar) {
        self.max_index = self.max_index.max(binder.index);
        if binder.is_canonical() {
            self.bound_height = self.bound_height.max(binder.index + 1);
        }
        if self.free_ind.binary_search(binder).is_ok() {
            self.free_ind = self.free_ind.iter().filter(|v| *v != binder).cloned().collect();
        }
    }
}

fn empty_slice<T>() -> Arc<[T]> {
    Arc::from(Vec::new())
}

fn merge_sorted<T: Ord + Clone>(a: &Arc<[T]>, b: &Arc<[T]>) -> Arc<[T]> {
    if b.is_empty() || Arc::ptr_eq(a, b) {
        return a.clone();
    }
    if a.is_empty() {
        return b.clone();
    }
    if b.iter().all(|x| a.binary_search(x).is_ok()) {
        return a.clone();
    }
    let set: BTreeSet<&T> = a.iter().chain(b.iter()).collect();
    set.into_iter().cloned().collect()
}

fn hasher() -> std::collections::hash_map::DefaultHasher {
    std::collections::hash_map::DefaultHasher::new()
}

#[derive(Debug)]
struct FormulaNode {
    kind: FormulaKind,
    meta: Meta,
}

#[derive(Debug)]
struct TermNode {
    kind: TermKind,
    meta: Meta,
}

/// A formula. Cloning is O(1).
#[derive(Clone)]
pub struct Formula(Arc<FormulaNode>);

/// A term. Cloning is O(1).
#[derive(Clone)]
pub struct Term(Arc<TermNode>);

impl Formula {
    pub fn new(kind: FormulaKind) -> Self {
        let mut h = hasher();
        let mut meta;
        match &kind {
            FormulaKind::FmlApp(v, args) => {
                assert_eq!(
                    v.arity,
                    args.len(),
                    "formula variable {} applied to {} arguments",
                    v.name,
                    args.len()
                );
                0u8.hash(&mut h);
                v.hash(&mut h);
                args.iter().for_each(|a| a.0.meta.hash.hash(&mut h));
                meta = Meta::leaf(0);
                meta.free_fml = Arc::from(vec![v.clone()]);
                args.iter().for_each(|a| meta.absorb(&a.0.meta));
            }
            FormulaKind::Pred(p, args) => {
                1u8.hash(&mut h);
                p.hash(&mut h);
                args.len().hash(&mut h);
                args.iter().for_each(|a| a.0.meta.hash.hash(&mut h));
                meta = Meta::leaf(0);
                args.iter().for_each(|a| meta.absorb(&a.0.meta));
            }
            FormulaKind::Not(g) => {
                2u8.hash(&mut h);
                g.0.meta.hash.hash(&mut h);
                meta = Meta::leaf(0);
                meta.absorb(&g.0.meta);
            }
            FormulaKind::Bin(c, l, r) => {
                3u8.hash(&mut h);
                c.hash(&mut h);
                l.0.meta.hash.hash(&mut h);
                r.0.meta.hash.hash(&mut h);
                meta = Meta::leaf(0);
                meta.absorb(&l.0.meta);
                meta.absorb(&r.0.meta);
            }
            FormulaKind::Quant(q, x, body) => {
                4u8.hash(&mut h);
                q.hash(&mut h);
                x.hash(&mut h);
                body.0.meta.hash.hash(&mut h);
                meta = Meta::leaf(0);
                meta.absorb(&body.0.meta);
                meta.quantifiers = meta.quantifiers.saturating_add(1);
                meta.bind(x);
            }
        }
        meta.hash = h.finish();
        count_allocation();
        Formula(Arc::new(FormulaNode { kind, meta }))
    }

    pub fn fml_app(var: FmlVar, args: Vec<Term>) -> Self {
        Self::new(FormulaKind::FmlApp(var, args))
    }

    /// Nullary formula variable.
    pub fn atom(name: &str) -> Self {
        Self::fml_app(FmlVar::new(name, 0), Vec::new())
    }

    pub fn pred(symbol: &str, args: Vec<Term>) -> Self {
        Self::new(FormulaKind::Pred(Arc::from(symbol), args))
    }

    pub fn not(f: Formula) -> Self {
        Self::new(FormulaKind::Not(f))
    }

    pub fn bin(c: Connective, l: Formula, r: Formula) -> Self {
        Self::new(FormulaKind::Bin(c, l, r))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Self::bin(Connective::And, l, r)
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Self::bin(Connective::Or, l, r)
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Self::bin(Connective::Implies, l, r)
    }

    pub fn equiv(l: Formula, r: Formula) -> Self {
        Self::bin(Connective::Equiv, l, r)
    }

    pub fn quant(q: Quantifier, x: IndVar, body: Formula) -> Self {
        Self::new(FormulaKind::Quant(q, x, body))
    }

    pub fn exists(x: IndVar, body: Formula) -> Self {
        Self::quant(Quantifier::Exists, x, body)
    }

    pub fn forall(x: IndVar, body: Formula) -> Self {
        Self::quant(Quantifier::Forall, x, body)
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.meta.hash
    }

    /// Number of nodes of the tree (terms included), saturating.
    pub fn size(&self) -> u128 {
        self.0.meta.size
    }

    pub fn quantifier_count(&self) -> u128 {
        self.0.meta.quantifiers
    }

    pub fn epsilon_count(&self) -> u128 {
        self.0.meta.epsilons
    }

    pub fn eps_nesting_depth(&self) -> u32 {
        self.0.meta.eps_depth
    }

    pub(crate) fn max_index(&self) -> u32 {
        self.0.meta.max_index
    }

    pub(crate) fn bound_height(&self) -> u32 {
        self.0.meta.bound_height
    }

    /// Free individual variables, sorted.
    pub fn free_ind_vars(&self) -> &[IndVar] {
        &self.0.meta.free_ind
    }

    /// Formula variables (always free), sorted.
    pub fn free_fml_vars(&self) -> &[FmlVar] {
        &self.0.meta.free_fml
    }

    pub fn has_free(&self, x: &IndVar) -> bool {
        self.0.meta.free_ind.binary_search(x).is_ok()
    }

    pub fn has_fml_var(&self, v: &FmlVar) -> bool {
        self.0.meta.free_fml.binary_search(v).is_ok()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.0.meta.quantifiers == 0
    }

    /// Checks that every symbol is used with one arity throughout.
    pub fn check_arities(&self) -> Result<(), SyntaxError> {
        ArityCheck::default().formula(self)
    }
}

impl Term {
    pub fn new(kind: TermKind) -> Self {
        let mut h = hasher();
        let mut meta;
        match &kind {
            TermKind::Var(x) => {
                5u8.hash(&mut h);
                x.hash(&mut h);
                meta = Meta::leaf(0);
                meta.max_index = x.index;
                meta.free_ind = Arc::from(vec![x.clone()]);
            }
            TermKind::App(fun, args) => {
                6u8.hash(&mut h);
                fun.hash(&mut h);
                args.len().hash(&mut h);
                args.iter().for_each(|a| a.0.meta.hash.hash(&mut h));
                meta = Meta::leaf(0);
                args.iter().for_each(|a| meta.absorb(&a.0.meta));
            }
            TermKind::Eps(x, body) => {
                7u8.hash(&mut h);
                x.hash(&mut h);
                body.0.meta.hash.hash(&mut h);
                meta = Meta::leaf(0);
                meta.absorb(&body.0.meta);
                meta.epsilons = meta.epsilons.saturating_add(1);
                meta.eps_depth = body.0.meta.eps_depth + 1;
                meta.bind(x);
            }
        }
        meta.hash = h.finish();
        count_allocation();
        Term(Arc::new(TermNode { kind, meta }))
    }

    pub fn var(x: IndVar) -> Self {
        Self::new(TermKind::Var(x))
    }

    pub fn named(x: &str) -> Self {
        Self::var(IndVar::new(x))
    }

    pub fn app(symbol: &str, args: Vec<Term>) -> Self {
        Self::new(TermKind::App(Arc::from(symbol), args))
    }

    pub fn eps(x: IndVar, body: Formula) -> Self {
        Self::new(TermKind::Eps(x, body))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.meta.hash
    }

    pub fn size(&self) -> u128 {
        self.0.meta.size
    }

    pub fn quantifier_count(&self) -> u128 {
        self.0.meta.quantifiers
    }

    pub fn epsilon_count(&self) -> u128 {
        self.0.meta.epsilons
    }

    pub fn eps_nesting_depth(&self) -> u32 {
        self.0.meta.eps_depth
    }

    pub(crate) fn max_index(&self) -> u32 {
        self.0.meta.max_index
    }

    pub(crate) fn bound_height(&self) -> u32 {
        self.0.meta.bound_height
    }

    pub fn free_ind_vars(&self) -> &[IndVar] {
        &self.0.meta.free_ind
    }

    pub fn free_fml_vars(&self) -> &[FmlVar] {
        &self.0.meta.free_fml
    }

    pub fn has_free(&self, x: &IndVar) -> bool {
        self.0.meta.free_ind.binary_search(x).is_ok()
    }

    pub fn has_fml_var(&self, v: &FmlVar) -> bool {
        self.0.meta.free_fml.binary_search(v).is_ok()
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.meta.hash == other.0.meta.hash
                && self.0.meta.size == other.0.meta.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.meta.hash);
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.meta.hash == other.0.meta.hash
                && self.0.meta.size == other.0.meta.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.meta.hash);
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free variables of a formula or term, split by sort.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub ind: BTreeSet<IndVar>,
    pub fml: BTreeSet<FmlVar>,
}

pub fn free_vars(f: &Formula) -> FreeVars {
    FreeVars {
        ind: f.free_ind_vars().iter().cloned().collect(),
        fml: f.free_fml_vars().iter().cloned().collect(),
    }
}

pub fn free_vars_term(t: &Term) -> FreeVars {
    FreeVars {
        ind: t.free_ind_vars().iter().cloned().collect(),
        fml: t.free_fml_vars().iter().cloned().collect(),
    }
}

pub fn count_quantifiers(f: &Formula) -> u128 {
    f.quantifier_count()
}

pub fn count_epsilons(f: &Formula) -> u128 {
    f.epsilon_count()
}

pub fn eps_nesting_depth(f: &Formula) -> u32 {
    f.eps_nesting_depth()
}

#[derive(Default)]
struct ArityCheck {
    seen: HashSet<usize>,
    preds: HashMap<Symbol, usize>,
    funs: HashMap<Symbol, usize>,
    fml_vars: HashMap<Arc<str>, usize>,
}

impl ArityCheck {
    fn record(
        table: &mut HashMap<Arc<str>, usize>,
        name: &Arc<str>,
        arity: usize,
    ) -> Result<(), SyntaxError> {
        match table.get(name) {
            Some(&first) if first != arity => Err(SyntaxError::ArityConflict {
                symbol: name.to_string(),
                first,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                table.insert(name.clone(), arity);
                Ok(())
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<(), SyntaxError> {
        if !self.seen.insert(f.addr()) {
            return Ok(());
        }
        match f.kind() {
            FormulaKind::FmlApp(v, args) => {
                Self::record(&mut self.fml_vars, &v.name, v.arity)?;
                args.iter().try_for_each(|a| self.term(a))
            }
            FormulaKind::Pred(p, args) => {
                Self::record(&mut self.preds, p, args.len())?;
                args.iter().try_for_each(|a| self.term(a))
            }
            FormulaKind::Not(g) => self.formula(g),
            FormulaKind::Bin(_, l, r) => {
                self.formula(l)?;
                self.formula(r)
            }
            FormulaKind::Quant(_, _, body) => self.formula(body),
        }
    }

    fn term(&mut self, t: &Term) -> Result<(), SyntaxError> {
        if !self.seen.insert(t.addr()) {
            return Ok(());
        }
        match t.kind() {
            TermKind::Var(_) => Ok(()),
            TermKind::App(fun, args) => {
                Self::record(&mut self.funs, fun, args.len())?;
                args.iter().try_for_each(|a| self.term(a))
            }
            TermKind::Eps(_, body) => self.formula(body),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn vars(names: &[&str]) -> BTreeSet<IndVar> {
        names.iter().map(|n| IndVar::new(n)).collect()
    }

    #[test]
    fn free_vars_examples() {
        let fv = free_vars(&p("exists x. P(x, y)"));
        assert_eq!(fv.ind, vars(&["y"]));
        assert!(fv.fml.iter().all(|v| v.name() == "P"));

        let f = Formula::pred("q", vec![Term::eps(IndVar::new("x"), Formula::atom("A"))]);
        let fv = free_vars(&f);
        assert!(fv.ind.is_empty());
        assert_eq!(fv.fml.into_iter().collect::<Vec<_>>(), vec![FmlVar::new("A", 0)]);

        assert_eq!(free_vars(&p("p(x)")).ind, vars(&["x"]));
    }

    #[test]
    fn counts() {
        let f = p("exists x. exists y. R(x, y)");
        assert_eq!((count_quantifiers(&f), count_epsilons(&f), eps_nesting_depth(&f)), (2, 0, 0));

        let f = p("P(eps x. P(x))");
        assert_eq!((count_quantifiers(&f), count_epsilons(&f), eps_nesting_depth(&f)), (0, 1, 1));

        let f = p("R(eps x. R(x, eps y. R(x, y)), eps y. R(eps x. R(x, eps y. R(x, y)), y))");
        assert_eq!((count_quantifiers(&f), count_epsilons(&f), eps_nesting_depth(&f)), (0, 5, 3));
    }

    #[test]
    fn quantifiers_under_eps_are_counted() {
        let f = p("P(eps x. forall y. S(y))");
        assert_eq!(count_quantifiers(&f), 1);
    }

    #[test]
    fn variable_names_split_index() {
        let v = IndVar::new("x_12");
        assert_eq!((v.name(), v.index()), ("x", 12));
        assert_eq!(v.to_string(), "x_12");
        let w = IndVar::new("x_01");
        assert_eq!((w.name(), w.index()), ("x_01", 0));
        let c = IndVar::new("_4");
        assert!(c.is_canonical());
        assert_eq!(c.to_string(), "_4");
    }

    #[test]
    fn arity_conflicts_detected() {
        let f = Formula::and(
            Formula::pred("p", vec![Term::named("x")]),
            Formula::pred("p", vec![]),
        );
        assert!(matches!(f.check_arities(), Err(SyntaxError::ArityConflict { .. })));
        assert!(p("exists x. p(f(x), f(y))").check_arities().is_ok());
    }

    #[test]
    fn structural_equality_ignores_sharing() {
        let a = p("p(x) & q(y)");
        let b = p("p(x) & q(y)");
        assert!(!a.ptr_eq(&b));
        assert_eq!(a, b);
        assert_ne!(a, p("p(x) & q(z)"));
    }
}
