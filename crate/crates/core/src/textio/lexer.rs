use std::fmt;

use serde::{Deserialize, Serialize};

/// Byte range `start..end` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Equiv,
    Exists,
    Forall,
    Eps,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Equiv => f.write_str("`<->`"),
            Tok::Exists => f.write_str("`exists`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Eps => f.write_str("`eps`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LexError {
    pub message: String,
    pub span: SourceSpan,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Tok, SourceSpan)>, LexError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = |tok: Tok| (tok, SourceSpan { start, end: start + c.len_utf8() });
        let tok = match c {
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            ',' => single(Tok::Comma),
            '.' => single(Tok::Dot),
            '~' | '¬' => single(Tok::Not),
            '&' | '∧' => single(Tok::And),
            '|' | '∨' => single(Tok::Or),
            '→' => single(Tok::Implies),
            '↔' => single(Tok::Equiv),
            '∃' => single(Tok::Exists),
            '∀' => single(Tok::Forall),
            'ε' => single(Tok::Eps),
            '-' => {
                if text[start..].starts_with("->") {
                    chars.next();
                    (Tok::Implies, SourceSpan { start, end: start + 2 })
                } else {
                    return Err(unknown(text, start));
                }
            }
            '<' => {
                if text[start..].starts_with("<->") {
                    chars.next();
                    chars.next();
                    (Tok::Equiv, SourceSpan { start, end: start + 3 })
                } else {
                    return Err(unknown(text, start));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = start;
                while let Some(&(i, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = i + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let word = &text[start..end];
                let tok = match word {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "eps" => Tok::Eps,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, SourceSpan { start, end }));
                continue;
            }
            _ => return Err(unknown(text, start)),
        };
        chars.next();
        out.push(tok);
    }
    out.push((
        Tok::End,
        SourceSpan {
            start: text.len(),
            end: text.len(),
        },
    ));
    Ok(out)
}

fn unknown(text: &str, start: usize) -> LexError {
    let c = text[start..].chars().next().unwrap_or(' ');
    LexError {
        message: format!("unexpected character `{c}`"),
        span: SourceSpan {
            start,
            end: start + c.len_utf8(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn ascii_and_unicode_agree() {
        assert_eq!(toks("exists x. ~A -> B <-> C"), toks("∃ x. ¬A → B ↔ C"));
        assert_eq!(toks("forall y. A & B | C"), toks("∀y. A ∧ B ∨ C"));
    }

    #[test]
    fn spans_are_byte_offsets() {
        let t = tokenize("∃x").unwrap();
        assert_eq!(t[0].1, SourceSpan { start: 0, end: 3 });
        assert_eq!(t[1].1, SourceSpan { start: 3, end: 4 });
    }

    #[test]
    fn unknown_operator() {
        let e = tokenize("A => B").unwrap_err();
        assert_eq!(e.span.start, 2);
        assert!(tokenize("A - B").is_err());
        assert!(tokenize("A # B").is_err());
    }
}
