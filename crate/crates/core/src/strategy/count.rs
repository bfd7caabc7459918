use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::{normalize_with, Fuse, Strategy, StrategyError};
use crate::rewrite::contractum;
use crate::syntax::{Canonicalizer, FmlVar, Formula, FormulaKind, IndVar, Term, TermKind};

/// `∃x1 … ∃xn. R(x1, …, xn)`.
pub fn nested_existentials(n: usize) -> Formula {
    let vars: Vec<IndVar> = (1..=n).map(|i| IndVar::new(&format!("x{i}"))).collect();
    let body = Formula::fml_app(FmlVar::new("R", n), vars.iter().cloned().map(Term::var).collect());
    vars.into_iter().rev().fold(body, |acc, x| Formula::exists(x, acc))
}

/// Computes the length of the leftmost-outermost derivation without
/// performing it.
///
/// Leftmost-outermost normalizes the outermost redexes one after the other,
/// each to completion before the next, so the length is the sum over them,
/// and a redex costs one step plus the cost of its contractum. Costs are
/// memoized on canonical forms.
#[derive(Default)]
pub struct OutermostCounter {
    canon: Canonicalizer,
    memo_f: HashMap<Formula, BigUint>,
    memo_t: HashMap<Term, BigUint>,
}

impl OutermostCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn length(&mut self, f: &Formula) -> BigUint {
        let f = self.canon.formula(f);
        self.formula(&f)
    }

    /// Number of distinct formulas whose cost has been memoized.
    pub fn memo_size(&self) -> usize {
        self.memo_f.len() + self.memo_t.len()
    }

    fn formula(&mut self, f: &Formula) -> BigUint {
        if f.is_quantifier_free() {
            return BigUint::default();
        }
        if let Some(c) = self.memo_f.get(f) {
            return c.clone();
        }
        let cost = match f.kind() {
            FormulaKind::Quant(q, x, body) => {
                let next = self.canon.formula(&contractum(*q, x, body));
                self.formula(&next) + 1u8
            }
            FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => args.iter().map(|a| self.term(a)).sum(),
            FormulaKind::Not(g) => self.formula(g),
            FormulaKind::Bin(_, l, r) => self.formula(l) + self.formula(r),
        };
        self.memo_f.insert(f.clone(), cost.clone());
        cost
    }

    fn term(&mut self, t: &Term) -> BigUint {
        if t.quantifier_count() == 0 {
            return BigUint::default();
        }
        if let Some(c) = self.memo_t.get(t) {
            return c.clone();
        }
        let cost = match t.kind() {
            TermKind::Var(_) => BigUint::default(),
            TermKind::App(_, args) => args.iter().map(|a| self.term(a)).sum(),
            TermKind::Eps(_, body) => self.formula(body),
        };
        self.memo_t.insert(t.clone(), cost.clone());
        cost
    }
}

pub fn outermost_length(f: &Formula) -> BigUint {
    OutermostCounter::new().length(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthRow {
    pub n: usize,
    pub strategy: Strategy,
    pub steps: BigUint,
    /// ε-nesting depth of the normal form.
    pub eps_depth: u32,
}

/// Innermost and outermost derivation lengths on `family(n)` for
/// `n = 0..=max_n`. Innermost is run; outermost is counted.
pub fn derivation_length_stats(
    family: impl Fn(usize) -> Formula,
    max_n: usize,
    fuse: Fuse,
) -> Result<Vec<LengthRow>, StrategyError> {
    let mut rows = Vec::new();
    let mut counter = OutermostCounter::new();
    for n in 0..=max_n {
        let f = family(n);
        let inner = normalize_with(&f, Strategy::LeftmostInnermost, fuse)?;
        let depth = inner.final_formula.eps_nesting_depth();
        rows.push(LengthRow {
            n,
            strategy: Strategy::LeftmostInnermost,
            steps: inner.step_count().into(),
            eps_depth: depth,
        });
        rows.push(LengthRow {
            n,
            strategy: Strategy::LeftmostOutermost,
            steps: counter.length(&f),
            eps_depth: depth,
        });
    }
    Ok(rows)
}
