//! Recursive-descent parser for the concrete formula syntax.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "[]" unary | "<>" unary | "!" unary | "~" tilde | atom
//! tilde   := VAR | "~" tilde
//! atom    := VAR | "true" | "false" | "(" disj ")"
//! VAR     := [a-zA-Z_][a-zA-Z0-9_]*
//! ```
//!
//! `~` is atomic negation and applies to variables only; `~~p` collapses to
//! `p`. `true` and `false` are reserved and rejected as variable names.

use super::Formula;

/// A syntax error, with the byte offset where parsing failed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    BoxOp,
    DiaOp,
    Bang,
    Tilde,
    Amp,
    Pipe,
    LParen,
    RParen,
    Ident(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::BoxOp => "'[]'".into(),
            Tok::DiaOp => "'<>'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Ident(name) => format!("{name:?}"),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'[' => {
                if bytes.get(i + 1) == Some(&b']') {
                    toks.push((i, Tok::BoxOp));
                    i += 2;
                } else {
                    return err(i, "expected ']' after '['");
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::DiaOp));
                    i += 2;
                } else {
                    return err(i, "expected '>' after '<'");
                }
            }
            b'!' => {
                toks.push((i, Tok::Bang));
                i += 1;
            }
            b'~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            b'&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            b'|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => {
                return err(i, format!("unexpected character {:?}", input[i..].chars().next().unwrap()));
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conj()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.next();
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::or(parts)
        })
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::Amp) {
            self.next();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::and(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.next() {
            Some((_, Tok::BoxOp)) => Ok(Formula::boxed(self.unary()?)),
            Some((_, Tok::DiaOp)) => Ok(Formula::dia(self.unary()?)),
            Some((_, Tok::Bang)) => Ok(Formula::not(self.unary()?)),
            Some((_, Tok::Tilde)) => self.tilde_chain(),
            Some((_, Tok::LParen)) => {
                let inner = self.disj()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((p, t)) => err(p, format!("expected ')', found {}", t.describe())),
                    None => err(self.end, "expected ')', found end of input"),
                }
            }
            Some((p, Tok::Ident(name))) => match name.as_str() {
                "true" => Ok(Formula::ConstTrue),
                "false" => Ok(Formula::ConstFalse),
                _ => {
                    debug_assert!(super::is_valid_var_name(&name), "lexer produced {name:?}");
                    let _ = p;
                    Ok(Formula::Var(name))
                }
            },
            Some((p, t)) => err(p, format!("expected a formula, found {}", t.describe())),
            None => err(at, "expected a formula, found end of input"),
        }
    }

    /// Operand of a just-consumed `~`, which must bottom out at a variable.
    /// Each level negates the result, so `~~p` collapses to `p`.
    fn tilde_chain(&mut self) -> Result<Formula, ParseError> {
        let operand = match self.next() {
            Some((_, Tok::Tilde)) => self.tilde_chain()?,
            Some((p, Tok::Ident(name))) => match name.as_str() {
                "true" | "false" => {
                    return err(p, "'~' applies to propositional variables only; use '!' for general negation")
                }
                _ => Formula::Var(name),
            },
            Some((p, t)) => {
                return err(
                    p,
                    format!(
                        "'~' applies to propositional variables only (found {}); use '!' for general negation",
                        t.describe()
                    ),
                )
            }
            None => return err(self.end, "expected a variable after '~'"),
        };
        Ok(match operand {
            Formula::Var(n) => Formula::NegVar(n),
            Formula::NegVar(n) => Formula::Var(n),
            _ => unreachable!("tilde operand is always a literal"),
        })
    }
}

/// Parse the concrete syntax into a [`Formula`].
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
    };
    let f = p.disj()?;
    match p.next() {
        None => Ok(f),
        Some((pos, t)) => err(pos, format!("unexpected {} after formula", t.describe())),
    }
}

#[cfg(test)]
mod tests {
    use super::super::Formula;
    use super::parse;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn parses_poor_mans_conjunction() {
        let f = parse("[]p & <>~q").unwrap();
        assert_eq!(
            f,
            Formula::and(vec![Formula::boxed(p()), Formula::dia(Formula::neg_var("q"))])
        );
    }

    #[test]
    fn precedence_unary_then_and_then_or() {
        let f = parse("[]p & q | <>r").unwrap();
        assert_eq!(
            f,
            Formula::or(vec![
                Formula::and(vec![Formula::boxed(p()), q()]),
                Formula::dia(Formula::var("r")),
            ])
        );
    }

    #[test]
    fn box_scopes_over_single_operand() {
        assert_eq!(
            parse("[]p & q").unwrap(),
            Formula::and(vec![Formula::boxed(p()), q()])
        );
        assert_eq!(
            parse("[](p & q)").unwrap(),
            Formula::boxed(Formula::and(vec![p(), q()]))
        );
    }

    #[test]
    fn double_tilde_collapses() {
        assert_eq!(parse("~~p").unwrap(), p());
        assert_eq!(parse("~~~p").unwrap(), Formula::neg_var("p"));
    }

    #[test]
    fn tilde_requires_variable() {
        assert!(parse("~(p)").is_err());
        assert!(parse("~[]p").is_err());
        assert!(parse("~true").is_err());
        assert!(parse("~!p").is_err());
    }

    #[test]
    fn bang_takes_any_operand() {
        assert_eq!(parse("!(p | q)").unwrap(), Formula::not(Formula::or(vec![p(), q()])));
        assert_eq!(parse("!!p").unwrap(), Formula::not(Formula::not(p())));
        assert_eq!(parse("!true").unwrap(), Formula::not(Formula::ConstTrue));
    }

    #[test]
    fn constants_are_reserved_words() {
        assert_eq!(parse("true & false").unwrap(), Formula::and(vec![Formula::ConstTrue, Formula::ConstFalse]));
        // As atoms they are constants, never variables.
        assert!(parse("~false").is_err());
    }

    #[test]
    fn identifiers_allow_underscores_and_digits() {
        assert_eq!(parse("p1_x").unwrap(), Formula::var("p1_x"));
        assert_eq!(parse("__aux_q").unwrap(), Formula::var("__aux_q"));
        assert_eq!(parse("truex").unwrap(), Formula::var("truex"));
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse("[p").unwrap_err();
        assert_eq!(e.pos, 0);
        let e = parse("p )").unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse("p & $x").unwrap_err();
        assert_eq!(e.pos, 4);
    }

    #[test]
    fn round_trips_through_render() {
        for text in [
            "[]p & <>~q",
            "[](p & q) | <>false",
            "!(p | ~q) & true",
            "<><>(p & ~p)",
            "p & q & r",
            "p | q | r",
            "(p | q) & r",
            "![]!p",
        ] {
            let f = parse(text).unwrap();
            let again = parse(&f.render()).unwrap();
            assert_eq!(f, again, "round-trip failed for {text:?}");
        }
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" [] p &\n<> ~ q ").unwrap(), parse("[]p&<>~q").unwrap());
    }
}
