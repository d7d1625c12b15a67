//! Intuitionistic propositional formulas.
//!
//! Negation is not a separate constructor: `~a` is `a -> false`. Nothing in
//! this module simplifies formulas; [`simplify`] is an explicit opt-in.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signature::Signature;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Arc<str>),
    Bot,
    Top,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    pub fn parse(text: &str) -> Result<Formula> {
        Parser::new(text)?.parse_all()
    }

    /// Maximum nesting depth of `->`.
    pub fn impl_degree(&self) -> u32 {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.impl_degree().max(b.impl_degree()),
            Formula::Imp(a, b) => 1 + a.impl_degree().max(b.impl_degree()),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.vars().iter().map(|v| v.as_ref()))
            .expect("formula has too many variables")
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Formula::Var(v) => v.as_ref() == name,
            Formula::Bot | Formula::Top => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.mentions(name) || b.mentions(name)
            }
        }
    }

    /// Replaces every occurrence of `var` by `with`. Formulas have no
    /// binders, so there is nothing to capture.
    pub fn substitute(&self, var: &str, with: &Formula) -> Formula {
        match self {
            Formula::Var(v) if v.as_ref() == var => with.clone(),
            Formula::Var(_) | Formula::Bot | Formula::Top => self.clone(),
            Formula::And(a, b) => Formula::and(a.substitute(var, with), b.substitute(var, with)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, with), b.substitute(var, with)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(var, with), b.substitute(var, with)),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Top => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => vec![a, b],
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(_, b) if **b == Formula::Bot => 4,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min_prec {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(v) => f.write_str(v)?,
            Formula::Bot => f.write_str("false")?,
            Formula::Top => f.write_str("true")?,
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                a.write_at(f, 4)?;
            }
            Formula::Imp(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" | ")?;
                b.write_at(f, 3)?;
            }
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" & ")?;
                b.write_at(f, 4)?;
            }
        }
        if prec < min_prec {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        Formula::parse(s)
    }
}

/// Splits `"a, b |- c"` into the conjunction of the antecedents and the
/// consequent. Without a turnstile the antecedent is `true`.
pub fn parse_sequent(text: &str) -> Result<(Formula, Formula)> {
    let (lhs, rhs, offset) = match text
        .find("|-")
        .map(|i| (i, 2))
        .or_else(|| text.find('⊢').map(|i| (i, '⊢'.len_utf8())))
    {
        Some((i, len)) => (&text[..i], &text[i + len..], i + len),
        None => ("", text, 0),
    };
    let mut antecedents = Vec::new();
    let mut start = 0;
    for part in split_top_level_commas(lhs) {
        let trimmed = part.trim();
        if !trimmed.is_empty() {
            antecedents.push(Formula::parse(part).map_err(|e| shift(e, start))?);
        }
        start += part.len() + 1;
    }
    let consequent = Formula::parse(rhs).map_err(|e| shift(e, offset))?;
    Ok((Formula::conj(antecedents), consequent))
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, message } => Error::Parse {
            pos: pos + by,
            message,
        },
        other => other,
    }
}

fn split_top_level_commas(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    False,
    True,
    Not,
    And,
    Or,
    Imp,
    LParen,
    RParen,
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
                continue;
            }
            let tok = match c {
                '(' => Token::LParen,
                ')' => Token::RParen,
                '~' | '¬' | '!' => Token::Not,
                '&' | '∧' => Token::And,
                '|' | '∨' => Token::Or,
                '→' => Token::Imp,
                '⊥' => Token::False,
                '⊤' => Token::True,
                '-' => {
                    chars.next();
                    match chars.peek() {
                        Some(&(_, '>')) => Token::Imp,
                        _ => {
                            return Err(Error::Parse {
                                pos: i,
                                message: "expected `->`".into(),
                            })
                        }
                    }
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if c.is_alphanumeric() || c == '_' || c == '\'' {
                            ident.push(c);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    let tok = match ident.as_str() {
                        "false" => Token::False,
                        "true" => Token::True,
                        _ => Token::Ident(ident),
                    };
                    tokens.push((i, tok));
                    continue;
                }
                other => {
                    return Err(Error::Parse {
                        pos: i,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            chars.next();
            tokens.push((i, tok));
        }
        Ok(Parser {
            tokens,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or(self.end)
    }

    fn error<T>(&self, message: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            message: message.to_string(),
        })
    }

    fn parse_all(mut self) -> Result<Formula> {
        let f = self.implication()?;
        if self.pos < self.tokens.len() {
            return self.error("unexpected trailing input");
        }
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Imp) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::var(&name))
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Token::True) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected a formula"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Local rewriting with the unit laws of `true`/`false` and idempotence.
/// The result is IPC-equivalent to the input and never has a larger degree.
pub fn simplify(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Var(_) | Bot | Top => f.clone(),
        And(a, b) => match (simplify(a), simplify(b)) {
            (Bot, _) | (_, Bot) => Bot,
            (Top, x) | (x, Top) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::and(x, y),
        },
        Or(a, b) => match (simplify(a), simplify(b)) {
            (Top, _) | (_, Top) => Top,
            (Bot, x) | (x, Bot) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::or(x, y),
        },
        Imp(a, b) => match (simplify(a), simplify(b)) {
            (Bot, _) | (_, Top) => Top,
            (Top, x) => x,
            (x, y) if x == y => Top,
            (x, y) => Formula::imp(x, y),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }
    fn q() -> Formula {
        Formula::var("q")
    }
    fn r() -> Formula {
        Formula::var("r")
    }

    #[test]
    fn implication_binds_loosest() {
        assert_eq!(
            Formula::parse("p -> q | r").unwrap(),
            Formula::imp(p(), Formula::or(q(), r()))
        );
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(
            Formula::parse("p -> q -> r").unwrap(),
            Formula::imp(p(), Formula::imp(q(), r()))
        );
    }

    #[test]
    fn negation_is_sugar() {
        assert_eq!(
            Formula::parse("~p").unwrap(),
            Formula::imp(p(), Formula::Bot)
        );
        assert_eq!(
            Formula::parse("¬p").unwrap(),
            Formula::parse("p -> false").unwrap()
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(
            Formula::parse("p ∧ q → ¬r ∨ ⊥").unwrap(),
            Formula::parse("p & q -> ~r | false").unwrap()
        );
    }

    #[test]
    fn incomplete_input_is_rejected() {
        match Formula::parse("p ->") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
        assert!(Formula::parse("(p & q").is_err());
        assert!(Formula::parse("p q").is_err());
        assert!(Formula::parse("").is_err());
        assert!(Formula::parse("p - q").is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(Formula::parse("p | q").unwrap().impl_degree(), 0);
        assert_eq!(Formula::parse("(p -> q) -> r").unwrap().impl_degree(), 2);
        assert_eq!(Formula::parse("~~p").unwrap().impl_degree(), 2);
        assert_eq!(Formula::parse("true & false").unwrap().impl_degree(), 0);
    }

    #[test]
    fn substitution() {
        let f = Formula::parse("q -> p").unwrap();
        assert_eq!(f.substitute("p", &q()), Formula::parse("q -> q").unwrap());
        assert_eq!(p().substitute("p", &Formula::Top), Formula::Top);
        let g = Formula::parse("p & r").unwrap();
        assert_eq!(
            g.substitute("p", &Formula::Bot),
            Formula::and(Formula::Bot, r())
        );
    }

    #[test]
    fn rendering_parenthesizes_minimally() {
        let cases = [
            "p -> q -> r",
            "(p -> q) -> r",
            "p & q | r",
            "p & (q | r)",
            "~(p -> q)",
            "~~p",
            "p | (q | r)",
            "(p | q) | r",
            "~p & q -> false",
        ];
        for text in cases {
            let f = Formula::parse(text).unwrap();
            assert_eq!(Formula::parse(&f.to_string()).unwrap(), f, "{text}");
        }
        assert_eq!(
            Formula::parse("(p | q) | r").unwrap().to_string(),
            "p | q | r"
        );
        assert_eq!(Formula::parse("p -> false").unwrap().to_string(), "~p");
    }

    #[test]
    fn sequents() {
        let (a, c) = parse_sequent("p & q |- q").unwrap();
        assert_eq!(a, Formula::and(p(), q()));
        assert_eq!(c, q());
        let (a, c) = parse_sequent("p, p -> q ⊢ q").unwrap();
        assert_eq!(a, Formula::and(p(), Formula::imp(p(), q())));
        assert_eq!(c, q());
        let (a, _) = parse_sequent("p | ~p").unwrap();
        assert_eq!(a, Formula::Top);
    }

    #[test]
    fn simplification_units() {
        let f = Formula::parse("(true -> p) & (q | false) & (false -> r)").unwrap();
        assert_eq!(simplify(&f), Formula::and(p(), q()));
    }
}
