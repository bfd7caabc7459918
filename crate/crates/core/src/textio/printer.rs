use std::fmt::{self, Write};

use crate::syntax::{Connective, Formula, FormulaKind, Term, TermKind};

const PREC_EQUIV: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn precedence(c: Connective) -> u8 {
    match c {
        Connective::Equiv => PREC_EQUIV,
        Connective::Implies => PREC_IMPLIES,
        Connective::Or => PREC_OR,
        Connective::And => PREC_AND,
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, min_prec: u8) -> fmt::Result {
    match f.kind() {
        FormulaKind::FmlApp(v, args) => write_app(out, v.name(), args, false),
        FormulaKind::Pred(p, args) => write_app(out, p, args, false),
        FormulaKind::Not(g) => {
            out.write_char('~')?;
            write_formula(out, g, PREC_UNARY)
        }
        FormulaKind::Quant(q, x, body) => {
            write!(out, "{} {}. ", q.keyword(), x)?;
            write_formula(out, body, PREC_UNARY)
        }
        FormulaKind::Bin(c, l, r) => {
            let p = precedence(*c);
            let (lp, rp) = if *c == Connective::Implies {
                (p + 1, p)
            } else {
                (p, p + 1)
            };
            let parens = p < min_prec;
            if parens {
                out.write_char('(')?;
            }
            write_formula(out, l, lp)?;
            write!(out, " {} ", c.symbol())?;
            write_formula(out, r, rp)?;
            if parens {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_app(out: &mut fmt::Formatter<'_>, name: &str, args: &[Term], always_parens: bool) -> fmt::Result {
    out.write_str(name)?;
    if args.is_empty() && !always_parens {
        return Ok(());
    }
    out.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        write_term(out, a)?;
    }
    out.write_char(')')
}

fn write_term(out: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t.kind() {
        TermKind::Var(x) => write!(out, "{x}"),
        TermKind::App(fun, args) => write_app(out, fun, args, true),
        TermKind::Eps(x, body) => {
            write!(out, "eps {x}. ")?;
            write_formula(out, body, PREC_UNARY)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::IndVar;
    use crate::textio::parse_formula;

    #[test]
    fn print_examples() {
        let f = Formula::exists(
            IndVar::new("x"),
            Formula::fml_app(crate::syntax::FmlVar::new("P", 1), vec![Term::named("x")]),
        );
        assert_eq!(print_formula(&f), "exists x. P(x)");
        assert_eq!(print_formula(&Formula::not(Formula::not(Formula::atom("A")))), "~~A");
        let g = parse_formula("P(eps x. (A & P(x)))").unwrap();
        assert_eq!(print_formula(&g), "P(eps x. (A & P(x)))");
    }

    #[test]
    fn minimal_parentheses() {
        for s in [
            "A -> B -> C",
            "(A -> B) -> C",
            "A & B & C",
            "A & (B & C)",
            "A <-> B <-> C",
            "A <-> (B <-> C)",
            "~(A | B) & C",
            "exists x. (P(x) & q) | r",
            "forall x. exists y. R(x, y) -> f",
            "p(c(), x_3, _0)",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(print_formula(&f), s);
        }
    }
}
