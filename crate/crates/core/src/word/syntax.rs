//! Equation text syntax.
//!
//! ```text
//! equation := lhs "=" coeff
//! lhs      := xterm (coeff xterm)*
//! xterm    := "x" | "x^1" | "x^-1"
//! coeff    := label | integer | tuple
//! ```
//!
//! Tokens are separated by whitespace. `=` is always a token of its own.
//! Whitespace inside parentheses, brackets or braces does not split a token,
//! so `(3, 2)` is one coefficient.

use std::fmt;

use super::ElementaryEquation;
use crate::group::ElementSyntax;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnbalancedParen,
    UnknownCoefficient(String),
    BadExponent(String),
    AdjacentXTerms,
    AdjacentCoefficients,
    ExpectedXTerm,
    ExpectedCoefficient,
    MissingEquals,
    TrailingInput,
}

/// A parse failure with the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "empty equation"),
            ParseErrorKind::UnbalancedParen => write!(f, "unbalanced bracket"),
            ParseErrorKind::UnknownCoefficient(s) => write!(f, "unknown coefficient {s:?}"),
            ParseErrorKind::BadExponent(s) => write!(f, "bad x-term {s:?}; use x or x^-1"),
            ParseErrorKind::AdjacentXTerms => write!(f, "two x-terms are adjacent"),
            ParseErrorKind::AdjacentCoefficients => write!(f, "two coefficients are adjacent"),
            ParseErrorKind::ExpectedXTerm => write!(f, "expected an x-term"),
            ParseErrorKind::ExpectedCoefficient => write!(f, "expected a coefficient"),
            ParseErrorKind::MissingEquals => write!(f, "missing '='"),
            ParseErrorKind::TrailingInput => write!(f, "unexpected input after the right-hand side"),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.kind, self.position)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    pos: usize,
}

fn err<T>(kind: ParseErrorKind, position: usize) -> Result<T, ParseError> {
    Err(ParseError { kind, position })
}

fn tokenize(text: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let mut tokens = Vec::new();
    let mut depth = 0i32;
    let mut start: Option<(usize, usize)> = None; // (byte, char)
    let mut open_at = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (ci, &(bi, c)) in chars.iter().enumerate() {
        let split = depth == 0 && (c.is_whitespace() || c == '=');
        if split {
            if let Some((sb, sc)) = start.take() {
                tokens.push(Token { text: &text[sb..bi], pos: sc });
            }
            if c == '=' {
                tokens.push(Token { text: &text[bi..bi + 1], pos: ci });
            }
            continue;
        }
        if start.is_none() {
            start = Some((bi, ci));
        }
        match c {
            '(' | '[' | '{' => {
                if depth == 0 {
                    open_at = ci;
                }
                depth += 1;
            }
            ')' | ']' | '}' => {
                depth -= 1;
                if depth < 0 {
                    return err(ParseErrorKind::UnbalancedParen, ci);
                }
            }
            _ => {}
        }
    }
    if depth != 0 {
        return err(ParseErrorKind::UnbalancedParen, open_at);
    }
    if let Some((sb, sc)) = start {
        tokens.push(Token { text: &text[sb..], pos: sc });
    }
    Ok(tokens)
}

fn xterm(t: &str) -> Option<i8> {
    match t {
        "x" | "x^1" => Some(1),
        "x^-1" => Some(-1),
        _ => None,
    }
}

enum Item<E> {
    X(i8),
    Coeff(E),
    Equals,
}

fn classify<G: ElementSyntax>(g: &G, t: Token<'_>) -> Result<Item<G::Elem>, ParseError> {
    if t.text == "=" {
        return Ok(Item::Equals);
    }
    if let Some(s) = xterm(t.text) {
        return Ok(Item::X(s));
    }
    if let Some(e) = g.parse_element(t.text) {
        return Ok(Item::Coeff(e));
    }
    if t.text.starts_with("x^") {
        return err(ParseErrorKind::BadExponent(t.text.to_string()), t.pos);
    }
    err(ParseErrorKind::UnknownCoefficient(t.text.to_string()), t.pos)
}

/// Parses an equation over `g`.
pub fn parse_equation<G: ElementSyntax>(
    text: &str,
    g: &G,
) -> Result<ElementaryEquation<G::Elem>, ParseError> {
    let tokens = tokenize(text)?;
    let end = text.chars().count();
    if tokens.is_empty() {
        return err(ParseErrorKind::Empty, 0);
    }
    let mut coeffs = Vec::new();
    let mut signs = Vec::new();
    let mut i = 0;
    // lhs: xterm (coeff xterm)*
    loop {
        let Some(&t) = tokens.get(i) else {
            return err(ParseErrorKind::MissingEquals, end);
        };
        match classify(g, t)? {
            Item::X(s) => signs.push(s),
            Item::Coeff(_) if signs.is_empty() => return err(ParseErrorKind::ExpectedXTerm, t.pos),
            Item::Coeff(_) => return err(ParseErrorKind::AdjacentCoefficients, t.pos),
            Item::Equals => return err(ParseErrorKind::ExpectedXTerm, t.pos),
        }
        i += 1;
        let Some(&t) = tokens.get(i) else {
            return err(ParseErrorKind::MissingEquals, end);
        };
        match classify(g, t)? {
            Item::Equals => break,
            Item::X(_) => return err(ParseErrorKind::AdjacentXTerms, t.pos),
            Item::Coeff(c) => coeffs.push(c),
        }
        i += 1;
    }
    i += 1;
    let Some(&t) = tokens.get(i) else {
        return err(ParseErrorKind::ExpectedCoefficient, end);
    };
    match classify(g, t)? {
        Item::Coeff(c) => coeffs.push(c),
        _ => return err(ParseErrorKind::ExpectedCoefficient, t.pos),
    }
    if let Some(&t) = tokens.get(i + 1) {
        return err(ParseErrorKind::TrailingInput, t.pos);
    }
    Ok(ElementaryEquation::new(coeffs, signs).expect("grammar enforces the shape"))
}

/// Canonical text: single spaces, `x` / `x^-1`, coefficients formatted by
/// the group.
pub fn print_equation<G: ElementSyntax>(eq: &ElementaryEquation<G::Elem>, g: &G) -> String {
    let n = eq.n();
    let mut parts = Vec::with_capacity(2 * n + 3);
    for i in 0..=n {
        parts.push(if eq.signs()[i] == 1 { "x".to_string() } else { "x^-1".to_string() });
        if i < n {
            parts.push(g.format_element(&eq.coeffs()[i]));
        }
    }
    parts.push("=".into());
    parts.push(g.format_element(eq.rhs()));
    parts.join(" ")
}
