//! Text syntax for elements and element sets.
//!
//! ```text
//! elem := "1" | "2" | "(" elem "+" elem ")" | nat "_+" | nat "_-" | "2^" nat
//! nat  := nonzero decimal
//! set  := "{" elem ("," elem)* "}" | "{}"
//! ```
//!
//! Whitespace is ignored everywhere. The canonical form uses only `1` and
//! parenthesised sums; the pretty form replaces maximal subtrees by `2^k`,
//! then `n_+`, then `n_-`.

use std::collections::BTreeSet;

use super::{make, Elem, Shorthand};
use crate::error::{MagmaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    /// Fully parenthesised sums of `1`.
    Canonical,
    /// Shorthand tokens where a subtree matches exactly.
    #[default]
    Pretty,
}

#[derive(Debug, Clone, Copy)]
enum Token {
    Open,
    Close,
    Plus,
    Atom(Elem),
}

/// Parses one element.
pub fn parse_element(text: &str) -> Result<Elem> {
    let chars = significant(text, 0);
    parse_chars(&chars, text.len())
}

/// Parses a set literal such as `{1, 3_-, 5_+}`.
pub fn parse_set(text: &str) -> Result<BTreeSet<Elem>> {
    let chars = significant(text, 0);
    let end = text.len();
    match (chars.first(), chars.last()) {
        (Some((_, '{')), Some((_, '}'))) if chars.len() >= 2 => {}
        (Some((pos, _)), _) => return Err(MagmaError::syntax(*pos, "set literal must be enclosed in braces")),
        (None, _) => return Err(MagmaError::syntax(0, "empty input")),
    }
    let body = &chars[1..chars.len() - 1];
    let mut set = BTreeSet::new();
    if body.is_empty() {
        return Ok(set);
    }
    for item in body.split(|&(_, c)| c == ',') {
        let pos = item.first().map_or(end, |&(p, _)| p);
        if item.is_empty() {
            return Err(MagmaError::syntax(pos, "empty set member"));
        }
        set.insert(parse_chars(item, pos)?);
    }
    Ok(set)
}

/// Renders an element in the requested style.
pub fn format_element(e: Elem, style: Style) -> String {
    enum Step {
        Visit(Elem),
        Text(&'static str),
    }
    let mut out = String::new();
    let mut stack = vec![Step::Visit(e)];
    while let Some(step) = stack.pop() {
        let e = match step {
            Step::Text(t) => {
                out.push_str(t);
                continue;
            }
            Step::Visit(e) => e,
        };
        if style == Style::Pretty {
            if let Some(token) = shorthand(e) {
                out.push_str(&token);
                continue;
            }
        }
        match e.split() {
            None => out.push('1'),
            Some((l, r)) => {
                out.push('(');
                stack.push(Step::Text(")"));
                stack.push(Step::Visit(r));
                stack.push(Step::Text("+"));
                stack.push(Step::Visit(l));
            }
        }
    }
    out
}

fn shorthand(e: Elem) -> Option<String> {
    if let Some(k) = e.pow2_exponent() {
        return Some(match k {
            0 => "1".to_string(),
            1 => "2".to_string(),
            k => format!("2^{k}"),
        });
    }
    if let Some(n) = e.plus_index().filter(|&n| n >= 3) {
        return Some(format!("{n}_+"));
    }
    e.minus_index().filter(|&n| n >= 3).map(|n| format!("{n}_-"))
}

fn significant(text: &str, offset: usize) -> Vec<(usize, char)> {
    text.char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + offset, c))
        .collect()
}

fn parse_chars(chars: &[(usize, char)], end: usize) -> Result<Elem> {
    let tokens = lex(chars, end)?;
    if tokens.is_empty() {
        return Err(MagmaError::syntax(end, "expected an element"));
    }

    // Shift-reduce over the fully parenthesised grammar; no recursion.
    struct Pending {
        left: Option<Elem>,
    }
    let mut stack: Vec<Pending> = Vec::new();
    let mut i = 0;
    let at = |i: usize| tokens.get(i).map_or(end, |(p, _)| *p);
    loop {
        let mut current = match tokens.get(i) {
            Some((_, Token::Open)) => {
                stack.push(Pending { left: None });
                i += 1;
                continue;
            }
            Some((_, Token::Atom(e))) => {
                i += 1;
                *e
            }
            Some((pos, _)) => return Err(MagmaError::syntax(*pos, "expected an element")),
            None => return Err(MagmaError::syntax(end, "unexpected end of input")),
        };
        loop {
            match stack.last_mut() {
                None => {
                    if i < tokens.len() {
                        return Err(MagmaError::syntax(at(i), "trailing input"));
                    }
                    return Ok(current);
                }
                Some(p) if p.left.is_none() => {
                    match tokens.get(i) {
                        Some((_, Token::Plus)) => {}
                        _ => return Err(MagmaError::syntax(at(i), "expected '+'")),
                    }
                    p.left = Some(current);
                    i += 1;
                    break;
                }
                Some(p) => {
                    match tokens.get(i) {
                        Some((_, Token::Close)) => {}
                        _ => return Err(MagmaError::syntax(at(i), "expected ')'")),
                    }
                    let left = p.left.expect("left operand");
                    stack.pop();
                    current = left + current;
                    i += 1;
                }
            }
        }
    }
}

fn lex(chars: &[(usize, char)], end: usize) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut i = 0;
    let pos_at = |i: usize| chars.get(i).map_or(end, |&(p, _)| p);
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            '(' => {
                tokens.push((pos, Token::Open));
                i += 1;
            }
            ')' => {
                tokens.push((pos, Token::Close));
                i += 1;
            }
            '+' => {
                tokens.push((pos, Token::Plus));
                i += 1;
            }
            '0'..='9' => {
                let (n, next) = number(chars, i, end)?;
                i = next;
                let suffix: String = chars[i..].iter().take(2).map(|&(_, c)| c).collect();
                let atom = if suffix == "_+" || suffix == "_-" {
                    i += 2;
                    if n == 0 {
                        return Err(MagmaError::syntax(pos, "shorthand index must be at least 1"));
                    }
                    let kind = if suffix == "_+" { Shorthand::Plus } else { Shorthand::Minus };
                    make(kind, n).map_err(|e| relocate(e, pos))?
                } else if suffix.starts_with('^') {
                    if n != 2 {
                        return Err(MagmaError::syntax(pos, "only powers of 2 are supported"));
                    }
                    i += 1;
                    if !matches!(chars.get(i), Some((_, '0'..='9'))) {
                        return Err(MagmaError::syntax(pos_at(i), "expected an exponent"));
                    }
                    let epos = pos_at(i);
                    let (k, next) = number(chars, i, end)?;
                    i = next;
                    if k == 0 {
                        return Err(MagmaError::syntax(epos, "exponent must be at least 1"));
                    }
                    make(Shorthand::Pow2, k).map_err(|e| relocate(e, epos))?
                } else {
                    match n {
                        1 => Elem::ONE,
                        2 => Elem::ONE + Elem::ONE,
                        _ => {
                            return Err(MagmaError::syntax(
                                pos,
                                format!("bare numeral {n} is not an element; write {n}_+ or {n}_-"),
                            ))
                        }
                    }
                };
                tokens.push((pos, Token::Atom(atom)));
            }
            other => return Err(MagmaError::syntax(pos, format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

fn number(chars: &[(usize, char)], start: usize, end: usize) -> Result<(u64, usize)> {
    let mut i = start;
    let mut value: u64 = 0;
    let pos = chars.get(start).map_or(end, |&(p, _)| p);
    while let Some(&(p, c)) = chars.get(i) {
        // Digits separated by whitespace are separate tokens.
        if i > start && p != chars[i - 1].0 + 1 {
            break;
        }
        let Some(d) = c.to_digit(10) else { break };
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(u64::from(d)))
            .ok_or_else(|| MagmaError::syntax(pos, "number too large"))?;
        i += 1;
    }
    Ok((value, i))
}

fn relocate(err: MagmaError, pos: usize) -> MagmaError {
    match err {
        MagmaError::Domain(msg) => MagmaError::syntax(pos, msg),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{minus, plus, pow2};

    fn two() -> Elem {
        Elem::ONE + Elem::ONE
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_element("1").unwrap(), Elem::ONE);
        assert_eq!(parse_element("(1+(1+1))").unwrap(), plus(3));
        let p = parse_element("2^3").unwrap();
        assert_eq!(p, pow2(2) + pow2(2));
        assert_eq!(p.len(), 8);
        assert_eq!(parse_element(" ( 2 + 3_+ ) ").unwrap(), two() + plus(3));
        assert_eq!(parse_element("4_-").unwrap(), minus(4));
        assert_eq!(parse_element("1_+").unwrap(), Elem::ONE);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_element("0_+").unwrap_err();
        assert!(matches!(err, MagmaError::Syntax { pos: 0, .. }), "{err}");
        let err = parse_element("(1+1").unwrap_err();
        assert!(matches!(err, MagmaError::Syntax { pos: 4, .. }), "{err}");
        let err = parse_element("(1 1)").unwrap_err();
        assert!(matches!(err, MagmaError::Syntax { pos: 3, .. }), "{err}");
        assert!(parse_element("").is_err());
        assert!(parse_element("3").is_err());
        assert!(parse_element("3^2").is_err());
        assert!(parse_element("2^0").is_err());
        assert!(parse_element("1+1").is_err());
        assert!(parse_element("(1+1))").is_err());
        assert!(parse_element("x").is_err());
        assert!(matches!(parse_element("99999999_+"), Err(MagmaError::Resource { .. })));
    }

    #[test]
    fn format_examples() {
        assert_eq!(format_element(Elem::ONE, Style::Canonical), "1");
        assert_eq!(format_element(minus(3), Style::Pretty), "3_-");
        assert_eq!(format_element(two() + plus(3), Style::Canonical), "((1+1)+(1+(1+1)))");
        assert_eq!(format_element(two() + plus(3), Style::Pretty), "(2+3_+)");
        assert_eq!(format_element(pow2(5), Style::Pretty), "2^5");
        assert_eq!(format_element(two(), Style::Pretty), "2");
        assert_eq!(format_element(Elem::ONE + minus(3), Style::Pretty), "(1+3_-)");
        assert_eq!(format!("{:#}", plus(3)), "(1+(1+1))");
    }

    #[test]
    fn sets() {
        let s = parse_set("{1, 3_-, 5_+}").unwrap();
        assert_eq!(s, BTreeSet::from([Elem::ONE, minus(3), plus(5)]));
        assert!(parse_set("{}").unwrap().is_empty());
        assert!(parse_set("{ }").unwrap().is_empty());
        assert!(parse_set("{1,}").is_err());
        assert!(parse_set("1,2").is_err());
        let err = parse_set("{1, 7}").unwrap_err();
        assert!(matches!(err, MagmaError::Syntax { pos: 4, .. }), "{err}");
    }
}
