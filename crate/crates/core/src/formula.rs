//! Modal formula DSL.
//!
//! ```text
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | '[' id ']' unary | '<' id '>' unary | '~[' id ']' unary | atom
//! atom  := 'A' '(' or ')' | id | '(' or ')'
//! ```
//!
//! Binary operators associate to the left.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraPackage, Proposition};
use crate::error::Result;
use crate::frame::Frame;
use crate::governance::{AuditRegister, Diagnostic};
use crate::modal;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(String, Box<Formula>),
    Dia(String, Box<Formula>),
    Dual(String, Box<Formula>),
    Audit(Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn nec(std: impl Into<String>, f: Formula) -> Self {
        Formula::Box(std.into(), Box::new(f))
    }

    pub fn dia(std: impl Into<String>, f: Formula) -> Self {
        Formula::Dia(std.into(), Box::new(f))
    }

    pub fn dual(std: impl Into<String>, f: Formula) -> Self {
        Formula::Dual(std.into(), Box::new(f))
    }

    pub fn audit(f: Formula) -> Self {
        Formula::Audit(Box::new(f))
    }

    /// `p & ![M]p`
    pub fn moore(p: &str, std: &str) -> Self {
        Formula::and(Formula::atom(p), Formula::not(Formula::nec(std, Formula::atom(p))))
    }

    /// `p & [M]!p`
    pub fn anti(p: &str, std: &str) -> Self {
        Formula::and(Formula::atom(p), Formula::nec(std, Formula::not(Formula::atom(p))))
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Box(_, a) | Formula::Dia(_, a) | Formula::Dual(_, a) | Formula::Audit(a) => {
                1 + a.depth()
            }
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Does `needle` occur as a subformula?
    pub fn contains(&self, needle: &Formula) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Formula::Atom(_) => false,
            Formula::Not(a) | Formula::Box(_, a) | Formula::Dia(_, a) | Formula::Dual(_, a) | Formula::Audit(a) => {
                a.contains(needle)
            }
            Formula::And(a, b) | Formula::Or(a, b) => a.contains(needle) || b.contains(needle),
        }
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_UNARY: u8 = 3;

fn write_prec(f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Atom(name) => out.write_str(name),
        Formula::Not(a) => {
            out.write_str("!")?;
            write_prec(a, PREC_UNARY, out)
        }
        Formula::Box(s, a) => {
            write!(out, "[{s}]")?;
            write_prec(a, PREC_UNARY, out)
        }
        Formula::Dia(s, a) => {
            write!(out, "<{s}>")?;
            write_prec(a, PREC_UNARY, out)
        }
        Formula::Dual(s, a) => {
            write!(out, "~[{s}]")?;
            write_prec(a, PREC_UNARY, out)
        }
        Formula::Audit(a) => {
            out.write_str("A(")?;
            write_prec(a, PREC_OR, out)?;
            out.write_str(")")
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (prec, sym) = if matches!(f, Formula::And(..)) {
                (PREC_AND, " & ")
            } else {
                (PREC_OR, " | ")
            };
            if ctx > prec {
                out.write_str("(")?;
            }
            write_prec(a, prec, out)?;
            out.write_str(sym)?;
            write_prec(b, prec + 1, out)?;
            if ctx > prec {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, PREC_OR, out)
    }
}

/// Canonical text with minimal parentheses.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            expected: expected.to_string(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return self.fail("identifier");
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn standard(&mut self, close: char) -> Result<String, ParseError> {
        let s = self.ident().or_else(|_| self.fail("standard identifier"))?;
        self.expect(close)?;
        Ok(s)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some('[') => {
                self.pos += 1;
                let s = self.standard(']')?;
                Ok(Formula::nec(s, self.unary()?))
            }
            Some('<') => {
                self.pos += 1;
                let s = self.standard('>')?;
                Ok(Formula::dia(s, self.unary()?))
            }
            Some('~') => {
                self.pos += 1;
                self.expect('[')?;
                let s = self.standard(']')?;
                Ok(Formula::dual(s, self.unary()?))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.or()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c == '_' || c.is_ascii_alphabetic() => {
                let name = self.ident()?;
                if name == "A" && self.peek() == Some('(') {
                    self.pos += 1;
                    let inner = self.or()?;
                    self.expect(')')?;
                    Ok(Formula::audit(inner))
                } else {
                    Ok(Formula::Atom(name))
                }
            }
            _ => self.fail("operand"),
        }
    }
}

pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let f = p.or()?;
    if p.peek().is_some() {
        return p.fail("end of input or binary operator");
    }
    Ok(f)
}

/// Evaluate at every world. `Audit` subformulas read 0 everywhere.
pub fn evaluate(f: &Formula, frame: &Frame, pkg: AlgebraPackage) -> Result<Proposition> {
    evaluate_with(f, frame, pkg, None)
}

/// Evaluate at every world, reading `Audit` subformulas from a register.
pub fn evaluate_with(
    f: &Formula,
    frame: &Frame,
    pkg: AlgebraPackage,
    audit: Option<&AuditRegister>,
) -> Result<Proposition> {
    let ev = |g: &Formula| evaluate_with(g, frame, pkg, audit);
    match f {
        Formula::Atom(name) => Ok(frame.proposition(name)?.clone()),
        Formula::Not(a) => Ok(ev(a)?.negate()),
        Formula::And(a, b) => ev(a)?.meet(&ev(b)?),
        Formula::Or(a, b) => ev(a)?.join(&ev(b)?),
        Formula::Box(s, a) => modal::box_op(frame, s, &ev(a)?, pkg),
        Formula::Dia(s, a) => modal::diamond(frame, s, &ev(a)?, pkg),
        Formula::Dual(s, a) => modal::dual(frame, s, &ev(a)?, pkg),
        Formula::Audit(a) => {
            let key = Diagnostic::for_formula(a);
            Ok(match audit {
                Some(reg) => reg.audit_proposition(frame, &key),
                None => Proposition::zero(frame.len()),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{frame_from_json, Relation};

    #[test]
    fn parses_moore_pattern() {
        let f = parse("p & ![K]p").unwrap();
        assert_eq!(f, Formula::moore("p", "K"));
        assert_eq!(print(&f), "p & ![K]p");
    }

    #[test]
    fn parses_prefixes() {
        assert_eq!(parse("<B>q").unwrap(), Formula::dia("B", Formula::atom("q")));
        assert_eq!(print(&Formula::dual("B", Formula::atom("q"))), "~[B]q");
        assert_eq!(
            parse("A(p & ![K]p)").unwrap(),
            Formula::audit(Formula::moore("p", "K"))
        );
        assert_eq!(parse("A").unwrap(), Formula::atom("A"));
    }

    #[test]
    fn reports_position() {
        let e = parse("p & & q").unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(e.expected, "operand");
        assert_eq!(parse("").unwrap_err().position, 0);
        assert_eq!(parse("(p").unwrap_err().position, 2);
        assert_eq!(parse("[K p").unwrap_err().position, 3);
        assert_eq!(parse("p q").unwrap_err().position, 2);
    }

    #[test]
    fn precedence_and_minimal_parens() {
        let f = parse("p | q & r").unwrap();
        assert_eq!(f, Formula::or(Formula::atom("p"), Formula::and(Formula::atom("q"), Formula::atom("r"))));
        assert_eq!(print(&f), "p | q & r");
        let g = parse("(p | q) & r").unwrap();
        assert_eq!(print(&g), "(p | q) & r");
        let h = parse("p & (q & r)").unwrap();
        assert_eq!(print(&h), "p & (q & r)");
        assert_eq!(print(&parse("((p & q) & r)").unwrap()), "p & q & r");
        assert_eq!(print(&parse("![K](p | q)").unwrap()), "![K](p | q)");
    }

    #[test]
    fn evaluates_examples() {
        let mut crisp = Frame::with_world_count(2).unwrap();
        crisp.add_relation("K", Relation::universal(2)).unwrap();
        crisp
            .add_proposition("p", Proposition::new(vec![1.0, 0.0]).unwrap())
            .unwrap();
        let g = AlgebraPackage::GODEL;
        let v = evaluate(&parse("p & ![K]p").unwrap(), &crisp, g).unwrap();
        assert_eq!(v.values(), &[1.0, 0.0]);
        let t = evaluate(&parse("p | !p").unwrap(), &crisp, g).unwrap();
        assert_eq!(t.values(), &[1.0, 1.0]);

        let liq = frame_from_json(
            r#"{"worlds": ["w0", "w1"], "relations": {"K": [[1, 0.6], [0, 1]]},
                "propositions": {"r": [0, 0.9]}}"#,
        )
        .unwrap();
        let d = evaluate(&parse("~[K]r").unwrap(), &liq, g).unwrap();
        assert!((d.values()[0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn unresolved_names_are_errors() {
        let mut f = Frame::with_world_count(1).unwrap();
        f.add_relation("K", Relation::identity(1)).unwrap();
        let g = AlgebraPackage::GODEL;
        assert!(evaluate(&parse("q").unwrap(), &f, g).is_err());
        f.add_proposition("q", Proposition::zero(1)).unwrap();
        assert!(evaluate(&parse("[Z]q").unwrap(), &f, g).is_err());
        assert_eq!(evaluate(&parse("A(q)").unwrap(), &f, g).unwrap().values(), &[0.0]);
    }
}
