use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Formula, FormulaKind, SyntaxError, Term, TermKind};

/// Path of child indices from the root.
///
/// Child order: quantifier and ε bodies are child 0, the operand of `¬` is
/// child 0, binary connectives have children 0 and 1, application arguments
/// are numbered from 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut path = self.0.clone();
        path.push(i);
        Position(path)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Neither position is a prefix of the other.
    pub fn is_disjoint(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Position {
    fn from(path: Vec<usize>) -> Self {
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// A node reached by a position: either a formula or a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subterm {
    Formula(Formula),
    Term(Term),
}

impl Subterm {
    fn category(&self) -> &'static str {
        match self {
            Subterm::Formula(_) => "formula",
            Subterm::Term(_) => "term",
        }
    }

    pub fn as_formula(&self) -> Option<&Formula> {
        match self {
            Subterm::Formula(f) => Some(f),
            Subterm::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Subterm::Term(t) => Some(t),
            Subterm::Formula(_) => None,
        }
    }

    fn child(&self, i: usize) -> Option<Subterm> {
        match self {
            Subterm::Formula(f) => match f.kind() {
                FormulaKind::FmlApp(_, args) | FormulaKind::Pred(_, args) => {
                    args.get(i).cloned().map(Subterm::Term)
                }
                FormulaKind::Not(g) if i == 0 => Some(Subterm::Formula(g.clone())),
                FormulaKind::Bin(_, l, _) if i == 0 => Some(Subterm::Formula(l.clone())),
                FormulaKind::Bin(_, _, r) if i == 1 => Some(Subterm::Formula(r.clone())),
                FormulaKind::Quant(_, _, body) if i == 0 => Some(Subterm::Formula(body.clone())),
                _ => None,
            },
            Subterm::Term(t) => match t.kind() {
                TermKind::App(_, args) => args.get(i).cloned().map(Subterm::Term),
                TermKind::Eps(_, body) if i == 0 => Some(Subterm::Formula(body.clone())),
                _ => None,
            },
        }
    }

    /// Rebuilds this node with child `i` replaced. The caller has checked that
    /// `i` is a valid child index and that `new` has the right category.
    fn with_child(&self, i: usize, new: Subterm) -> Subterm {
        match (self, new) {
            (Subterm::Formula(f), Subterm::Term(t)) => match f.kind() {
                FormulaKind::FmlApp(v, args) => {
                    let mut args = args.clone();
                    args[i] = t;
                    Subterm::Formula(Formula::fml_app(v.clone(), args))
                }
                FormulaKind::Pred(p, args) => {
                    let mut args = args.clone();
                    args[i] = t;
                    Subterm::Formula(Formula::new(FormulaKind::Pred(p.clone(), args)))
                }
                _ => unreachable!("category checked by caller"),
            },
            (Subterm::Formula(f), Subterm::Formula(g)) => Subterm::Formula(match f.kind() {
                FormulaKind::Not(_) => Formula::not(g),
                FormulaKind::Bin(c, l, r) => {
                    if i == 0 {
                        Formula::bin(*c, g, r.clone())
                    } else {
                        Formula::bin(*c, l.clone(), g)
                    }
                }
                FormulaKind::Quant(q, x, _) => Formula::quant(*q, x.clone(), g),
                _ => unreachable!("category checked by caller"),
            }),
            (Subterm::Term(t), Subterm::Term(u)) => match t.kind() {
                TermKind::App(fun, args) => {
                    let mut args = args.clone();
                    args[i] = u;
                    Subterm::Term(Term::new(TermKind::App(fun.clone(), args)))
                }
                _ => unreachable!("category checked by caller"),
            },
            (Subterm::Term(t), Subterm::Formula(g)) => match t.kind() {
                TermKind::Eps(x, _) => Subterm::Term(Term::eps(x.clone(), g)),
                _ => unreachable!("category checked by caller"),
            },
        }
    }
}

pub fn subterm_at(f: &Formula, pos: &Position) -> Result<Subterm, SyntaxError> {
    let mut node = Subterm::Formula(f.clone());
    for &i in &pos.0 {
        node = node
            .child(i)
            .ok_or_else(|| SyntaxError::InvalidPosition(pos.clone()))?;
    }
    Ok(node)
}

/// Grafts `replacement` at `pos`. No renaming happens: the caller is
/// responsible for the replacement not being captured by binders above `pos`.
pub fn replace_at(f: &Formula, pos: &Position, replacement: Subterm) -> Result<Formula, SyntaxError> {
    let mut spine = Vec::with_capacity(pos.len());
    let mut node = Subterm::Formula(f.clone());
    for &i in &pos.0 {
        let next = node
            .child(i)
            .ok_or_else(|| SyntaxError::InvalidPosition(pos.clone()))?;
        spine.push((node, i));
        node = next;
    }
    if node.category() != replacement.category() {
        return Err(SyntaxError::CategoryMismatch {
            position: pos.clone(),
            expected: node.category(),
            found: replacement.category(),
        });
    }
    let mut acc = replacement;
    while let Some((parent, i)) = spine.pop() {
        acc = parent.with_child(i, acc);
    }
    match acc {
        Subterm::Formula(g) => Ok(g),
        Subterm::Term(_) => unreachable!("the root is a formula"),
    }
}
