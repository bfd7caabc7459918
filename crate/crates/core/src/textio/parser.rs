use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, SourceSpan, Tok};
use crate::syntax::{Connective, FmlVar, Formula, IndVar, Quantifier, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Arity,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lexical => "lexical error",
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Arity => "arity error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub span: SourceSpan,
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// One formula per nonblank line; `#` starts a comment. Errors carry the
/// 1-based line number.
pub fn parse_corpus(text: &str) -> Result<Vec<Formula>, (usize, ParseError)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        out.push(parse_formula(content).map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum SymbolClass {
    Predicate,
    Function,
    FormulaVar,
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    arities: HashMap<(SymbolClass, String), usize>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let toks = tokenize(text).map_err(|e| ParseError {
            kind: ParseErrorKind::Lexical,
            message: e.message,
            span: e.span,
        })?;
        Ok(Parser {
            toks,
            pos: 0,
            arities: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            kind: ParseErrorKind::Syntax,
            message: message.into(),
            span: self.span(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.syntax(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            Tok::RParen => self.syntax("unbalanced `)`"),
            t => self.syntax(format!("unexpected {t}")),
        }
    }

    fn record_arity(
        &mut self,
        class: SymbolClass,
        name: &str,
        arity: usize,
        span: SourceSpan,
    ) -> Result<(), ParseError> {
        match self.arities.get(&(class, name.to_string())) {
            Some(&first) if first != arity => Err(ParseError {
                kind: ParseErrorKind::Arity,
                message: format!("`{name}` used with {arity} arguments, earlier with {first}"),
                span,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert((class, name.to_string()), arity);
                Ok(())
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Equiv {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::bin(Connective::Equiv, lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::bin(Connective::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::bin(Connective::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::bin(Connective::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let q = if *self.peek() == Tok::Exists {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Dot)?;
                Ok(Formula::quant(q, x, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn binder(&mut self) -> Result<IndVar, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if !starts_upper(&name) => {
                self.bump();
                Ok(IndVar::new(&name))
            }
            Tok::Ident(name) => self.syntax(format!(
                "`{name}` cannot be bound: individual variables start lowercase"
            )),
            t => self.syntax(format!("expected a variable, found {t}")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let span = self.bump().1;
                let args = if *self.peek() == Tok::LParen {
                    self.arguments()?
                } else {
                    Vec::new()
                };
                if starts_upper(&name) {
                    self.record_arity(SymbolClass::FormulaVar, &name, args.len(), span)?;
                    Ok(Formula::fml_app(FmlVar::new(&name, args.len()), args))
                } else {
                    self.record_arity(SymbolClass::Predicate, &name, args.len(), span)?;
                    Ok(Formula::pred(&name, args))
                }
            }
            Tok::End => self.syntax("unexpected end of input"),
            t => self.syntax(format!("expected a formula, found {t}")),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                t => return self.syntax(format!("expected `,` or `)`, found {t}")),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Eps => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Dot)?;
                Ok(Term::eps(x, self.unary()?))
            }
            Tok::Ident(name) if starts_upper(&name) => self.syntax(format!(
                "`{name}` is a formula variable and cannot appear as a term"
            )),
            Tok::Ident(name) => {
                let span = self.bump().1;
                if *self.peek() == Tok::LParen {
                    let args = self.arguments()?;
                    self.record_arity(SymbolClass::Function, &name, args.len(), span)?;
                    Ok(Term::app(&name, args))
                } else {
                    Ok(Term::var(IndVar::new(&name)))
                }
            }
            t => self.syntax(format!("expected a term, found {t}")),
        }
    }
}

fn starts_upper(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{FormulaKind, TermKind};

    #[test]
    fn quantifier_over_formula_variable() {
        let f = parse_formula("exists x. P(x)").unwrap();
        match f.kind() {
            FormulaKind::Quant(Quantifier::Exists, x, body) => {
                assert_eq!(x, &IndVar::new("x"));
                assert_eq!(body, &Formula::fml_app(FmlVar::new("P", 1), vec![Term::named("x")]));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn epsilon_term() {
        let f = parse_formula("P(eps x. P(x))").unwrap();
        let expected = Formula::fml_app(
            FmlVar::new("P", 1),
            vec![Term::eps(
                IndVar::new("x"),
                Formula::fml_app(FmlVar::new("P", 1), vec![Term::named("x")]),
            )],
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn binder_scope_stops_at_binary_operator() {
        let f = parse_formula("forall x. A <-> B").unwrap();
        let expected = Formula::equiv(
            Formula::forall(IndVar::new("x"), Formula::atom("A")),
            Formula::atom("B"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn associativity_and_precedence() {
        let f = parse_formula("A -> B -> C").unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::atom("A"), Formula::implies(Formula::atom("B"), Formula::atom("C")))
        );
        let g = parse_formula("A <-> B <-> C").unwrap();
        assert_eq!(
            g,
            Formula::equiv(Formula::equiv(Formula::atom("A"), Formula::atom("B")), Formula::atom("C"))
        );
        let h = parse_formula("~A & B | C -> D").unwrap();
        let expected = Formula::implies(
            Formula::or(
                Formula::and(Formula::not(Formula::atom("A")), Formula::atom("B")),
                Formula::atom("C"),
            ),
            Formula::atom("D"),
        );
        assert_eq!(h, expected);
    }

    #[test]
    fn terms() {
        let t = parse_term("f(x, c(), eps y. q(y))").unwrap();
        match t.kind() {
            TermKind::App(name, args) => {
                assert_eq!(&**name, "f");
                assert_eq!(args.len(), 3);
                assert!(matches!(args[1].kind(), TermKind::App(_, a) if a.is_empty()));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let e = parse_formula("(A & B").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        let e = parse_formula("A & B)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        let e = parse_formula("A => B").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Lexical);
        let e = parse_formula("P(x) & P(x, y)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Arity);
        assert_eq!(e.span, SourceSpan { start: 7, end: 8 });
        let e = parse_formula("p(f(x)) & q(f)").unwrap();
        let _ = e;
        assert_eq!(parse_formula("p(f(x)) & q(f(x, y))").unwrap_err().kind, ParseErrorKind::Arity);
        assert!(parse_formula("exists X. A").is_err());
        assert!(parse_formula("p(A)").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn corpus_skips_comments() {
        let text = "# header\nexists x. P(x)\n\n  A & B # trailing\n";
        let fs = parse_corpus(text).unwrap();
        assert_eq!(fs.len(), 2);
        let err = parse_corpus("A\n(B\n").unwrap_err();
        assert_eq!(err.0, 2);
    }
}
