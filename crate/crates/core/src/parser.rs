//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! phi   := impl
//! impl  := or ( "->" impl )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := "~" unary | "K" group unary | "Kh" group unary | prim
//! prim  := "top" | "bot" | ident | "(" phi ")"
//! group := "{" ( int ( "," int )* )? "}"
//! ```
//!
//! Templates additionally accept `$name` in formula position and in group
//! position (a formula or group metavariable respectively).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{AgentId, Formula, Group};
use crate::template::{GroupPattern, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Top,
    Bot,
    K,
    Kh,
    Ident(String),
    Int(String),
    Meta(String),
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Minus,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::K => "`K`".into(),
            Tok::Kh => "`Kh`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::Meta(s) => format!("metavariable `${s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Minus => "`-`".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str, allow_meta: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let word = |chars: &mut std::iter::Peekable<std::str::CharIndices>, pred: fn(char) -> bool| {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !pred(c) {
                    break;
                }
                s.push(c);
                chars.next();
            }
            s
        };
        let tok = if is_ident_start(c) {
            let w = word(&mut chars, is_ident_char);
            match w.as_str() {
                "top" => Tok::Top,
                "bot" => Tok::Bot,
                "K" => Tok::K,
                "Kh" => Tok::Kh,
                _ => Tok::Ident(w),
            }
        } else if c.is_ascii_digit() {
            Tok::Int(word(&mut chars, |c| c.is_ascii_alphanumeric()))
        } else if c == '$' {
            chars.next();
            if !allow_meta {
                return Err(ParseError::new(pos, "metavariables are only allowed in templates"));
            }
            let w = word(&mut chars, is_ident_char);
            if w.is_empty() || !w.starts_with(is_ident_start) {
                return Err(ParseError::new(pos, "expected a name after `$`"));
            }
            Tok::Meta(w)
        } else {
            chars.next();
            match c {
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '-' => {
                    if let Some(&(_, '>')) = chars.peek() {
                        chars.next();
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                other => {
                    return Err(ParseError::new(pos, format!("unexpected character `{other}`")));
                }
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
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

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = self.peek().map_or_else(|| "end of input".to_string(), Tok::describe);
        ParseError::new(self.offset(), format!("expected {expected}, found {found}"))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn implication(&mut self) -> Result<Pattern, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(Pattern::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Pattern, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.conjunction()?;
            lhs = Pattern::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Pattern, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            lhs = Pattern::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Pattern, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                Ok(Pattern::Not(Box::new(self.unary()?)))
            }
            Some(Tok::K) => {
                self.bump();
                let g = self.group()?;
                Ok(Pattern::K(g, Box::new(self.unary()?)))
            }
            Some(Tok::Kh) => {
                self.bump();
                let g = self.group()?;
                Ok(Pattern::Kh(g, Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Pattern, ParseError> {
        match self.peek() {
            Some(Tok::Top) => {
                self.bump();
                Ok(Pattern::Top)
            }
            Some(Tok::Bot) => {
                self.bump();
                Ok(Pattern::Not(Box::new(Pattern::Top)))
            }
            Some(Tok::Ident(_)) => match self.bump() {
                Some(Tok::Ident(name)) => Ok(Pattern::Atom(name)),
                _ => unreachable!(),
            },
            Some(Tok::Meta(_)) => match self.bump() {
                Some(Tok::Meta(name)) => Ok(Pattern::Meta(name)),
                _ => unreachable!(),
            },
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn group(&mut self) -> Result<GroupPattern, ParseError> {
        if let Some(Tok::Meta(_)) = self.peek() {
            return match self.bump() {
                Some(Tok::Meta(name)) => Ok(GroupPattern::Var(name)),
                _ => unreachable!(),
            };
        }
        self.expect(Tok::LBrace)?;
        let mut members = BTreeSet::new();
        if self.eat(&Tok::RBrace) {
            return Ok(GroupPattern::Fixed(Group::empty()));
        }
        loop {
            let at = self.offset();
            let idx = match self.bump() {
                Some(Tok::Int(digits)) => digits
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(at, format!("agent index `{digits}` is not a nonnegative integer")))?,
                Some(Tok::Minus) => {
                    return Err(ParseError::new(at, "agent index must be a nonnegative integer"));
                }
                Some(other) => {
                    return Err(ParseError::new(
                        at,
                        format!("agent index must be a nonnegative integer, found {}", other.describe()),
                    ));
                }
                None => return Err(ParseError::new(at, "unterminated group")),
            };
            if !members.insert(AgentId(idx)) {
                return Err(ParseError::new(at, format!("duplicate agent {idx} in group")));
            }
            if self.eat(&Tok::RBrace) {
                break;
            }
            self.expect(Tok::Comma)?;
        }
        Ok(GroupPattern::Fixed(members.into_iter().collect()))
    }
}

fn parse(text: &str, allow_meta: bool) -> Result<Pattern, ParseError> {
    let toks = lex(text, allow_meta)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let pattern = parser.implication()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected("end of input"));
    }
    Ok(pattern)
}

/// Parses a formula, desugaring `bot`, `|` and `->` into core connectives.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let pattern = parse(text, false)?;
    Ok(pattern.to_formula().expect("metavariables are rejected by the lexer"))
}

/// Parses a formula template that may contain `$name` metavariables.
pub fn parse_template(text: &str) -> Result<Pattern, ParseError> {
    parse(text, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> Formula {
        Formula::atom(name)
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(
            parse_formula("Kh{0,1}(~p & ~q)").unwrap(),
            Formula::kh(
                Group::from_indices([0, 1]),
                Formula::and(Formula::not(p("p")), Formula::not(p("q")))
            )
        );
        assert_eq!(
            parse_formula("K{} top").unwrap(),
            Formula::k(Group::empty(), Formula::Top)
        );
        assert_eq!(
            parse_formula("p -> q").unwrap(),
            Formula::not(Formula::and(p("p"), Formula::not(p("q"))))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("~p & q -> r").unwrap(),
            parse_formula("((~p) & q) -> r").unwrap()
        );
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            parse_formula("p -> (q -> r)").unwrap()
        );
        assert_eq!(
            parse_formula("p | q & r").unwrap(),
            parse_formula("p | (q & r)").unwrap()
        );
        assert_eq!(
            parse_formula("K{0} p & q").unwrap(),
            parse_formula("(K{0} p) & q").unwrap()
        );
    }

    #[test]
    fn group_canonicalization() {
        assert_eq!(parse_formula("K{1,0}p").unwrap(), parse_formula("K{0,1}p").unwrap());
    }

    #[test]
    fn sugar() {
        assert_eq!(parse_formula("bot").unwrap(), Formula::bot());
        assert_eq!(parse_formula("p | q").unwrap(), Formula::or(p("p"), p("q")));
    }

    #[test]
    fn errors() {
        let e = parse_formula("K{0,0}p").unwrap_err();
        assert!(e.message.contains("duplicate agent"), "{e}");
        let e = parse_formula("K{-1}p").unwrap_err();
        assert!(e.message.contains("nonnegative"), "{e}");
        let e = parse_formula("K{a}p").unwrap_err();
        assert!(e.message.contains("nonnegative"), "{e}");
        let e = parse_formula("p &").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse_formula("(p").unwrap_err();
        assert!(e.message.contains("`)`"), "{e}");
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("$phi").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn identifiers_are_not_keywords() {
        assert_eq!(parse_formula("Kp").unwrap(), p("Kp"));
        assert_eq!(parse_formula("top_1").unwrap(), p("top_1"));
    }

    #[test]
    fn templates() {
        let t = parse_template("K$G $phi -> $phi").unwrap();
        assert_eq!(
            t,
            Pattern::implies(
                Pattern::K(GroupPattern::Var("G".into()), Box::new(Pattern::Meta("phi".into()))),
                Pattern::Meta("phi".into())
            )
        );
    }
}
