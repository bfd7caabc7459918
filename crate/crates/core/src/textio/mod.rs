//! Concrete syntax for formulas.
//!
//! ```text
//! formula := equiv
//! equiv   := impl ('<->' impl)*            left associative
//! impl    := disj ('->' impl)?             right associative
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '~' unary | 'exists' var '.' unary | 'forall' var '.' unary | atom
//! atom    := ident ['(' term (',' term)* ')'] | '(' formula ')'
//! term    := var | ident '(' [term (',' term)*] ')' | 'eps' var '.' unary
//! ```
//!
//! Uppercase identifiers in formula position are formula variables; lowercase
//! ones are predicate symbols. In term position a bare lowercase identifier is
//! an individual variable and an applied one is a function symbol (`c()` is a
//! constant). The Unicode forms `∃ ∀ ε ¬ ∧ ∨ → ↔` are accepted on input;
//! output is always ASCII.

mod lexer;
mod parser;
mod printer;

pub use lexer::SourceSpan;
pub use parser::{parse_corpus, parse_formula, parse_term, ParseError, ParseErrorKind};
pub use printer::{print_formula, print_term};
