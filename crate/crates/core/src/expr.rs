//! Recursive-descent parser for algebra expressions.
//!
//! Grammar:
//!
//! ```text
//! sum     := ['+' | '-'] product (('+' | '-') product)*
//! product := power (['*' | '/'] power)*      juxtaposition multiplies
//! power   := atom ['^' ['-'] integer]
//! atom    := integer | 'q' | '(' sum ')'
//!          | 'e' '[' node ',' level ']' | 'f' '[' node ',' level ']'
//!          | 'K' '[' node ']' | 'q' '[' integer (',' integer)* ']'
//! ```
//!
//! Nodes are referenced by name, or by 1-based index when no name matches.

use num_bigint::BigInt;
use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::qfield::{QError, RationalFunction};
use crate::ubase::{Algebra, AlgebraError, Element, TermKey, Torus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("{0} is not allowed in a scalar expression")]
    NotScalar(String),
    #[error("cannot divide by or invert a non-scalar, non-torus element")]
    NotInvertible,
    #[error("torus vector has {got} entries, expected {rank} or {}", 2 * rank)]
    TorusLength { rank: usize, got: usize },
    #[error(transparent)]
    Field(#[from] QError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Parsed expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Q,
    E(String, u32),
    F(String, u32),
    K(String),
    Torus(Vec<i64>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                s.push(chars[k].1);
                k += 1;
            }
            out.push((pos, Tok::Num(s)));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                s.push(chars[k].1);
                k += 1;
            }
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()[],".contains(c) {
            out.push((pos, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(ExprError::Parse { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                let v: i64 = s.parse().or_else(|_| self.err("integer out of range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn node(&mut self) -> Result<String, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) | Some(Tok::Ident(s)) => {
                self.at += 1;
                Ok(s)
            }
            _ => self.err("expected a node reference"),
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut acc = if self.eat('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')))
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
            } else if self.eat('/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.power()?));
            } else if self.starts_atom() {
                acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            let p = self.integer()?;
            return Ok(Expr::Pow(Box::new(base), p));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.at += 1;
                Ok(Expr::Int(s.parse().expect("digits")))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                let bracket = self.peek() == Some(&Tok::Sym('['));
                match (name.as_str(), bracket) {
                    ("q", false) => Ok(Expr::Q),
                    ("q", true) => {
                        self.at += 1;
                        let mut v = vec![self.integer()?];
                        while self.eat(',') {
                            v.push(self.integer()?);
                        }
                        self.expect(']')?;
                        Ok(Expr::Torus(v))
                    }
                    ("e" | "f", true) => {
                        self.at += 1;
                        let node = self.node()?;
                        self.expect(',')?;
                        let level = self.integer()?;
                        self.expect(']')?;
                        if level < 1 || level > u32::MAX as i64 {
                            return self.err("level must be positive");
                        }
                        Ok(if name == "e" { Expr::E(node, level as u32) } else { Expr::F(node, level as u32) })
                    }
                    ("K", true) => {
                        self.at += 1;
                        let node = self.node()?;
                        self.expect(']')?;
                        Ok(Expr::K(node))
                    }
                    _ => {
                        self.at -= 1;
                        self.err(format!("unknown symbol `{name}`"))
                    }
                }
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(src)?, at: 0, end: src.len() };
    let e = p.sum()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Resolves a node reference: exact name first, then 1-based index.
pub fn resolve_node(datum: &CartanDatum, r: &str) -> Result<usize, ExprError> {
    if let Some(i) = datum.names().iter().position(|n| n == r) {
        return Ok(i);
    }
    match r.parse::<usize>() {
        Ok(k) if (1..=datum.rank()).contains(&k) => Ok(k - 1),
        _ => Err(ExprError::UnknownNode(r.to_string())),
    }
}

impl Expr {
    /// Evaluates an expression in `q` and integers only.
    pub fn scalar(&self) -> Result<RationalFunction, ExprError> {
        Ok(match self {
            Expr::Int(n) => RationalFunction::from_bigint(n.clone()),
            Expr::Q => RationalFunction::q(),
            Expr::E(..) | Expr::F(..) => return Err(ExprError::NotScalar("a generator".into())),
            Expr::K(_) | Expr::Torus(_) => return Err(ExprError::NotScalar("a torus element".into())),
            Expr::Neg(a) => -a.scalar()?,
            Expr::Add(a, b) => a.scalar()? + b.scalar()?,
            Expr::Sub(a, b) => a.scalar()? - b.scalar()?,
            Expr::Mul(a, b) => a.scalar()? * b.scalar()?,
            Expr::Div(a, b) => a.scalar()?.checked_div(&b.scalar()?)?,
            Expr::Pow(a, p) => a.scalar()?.pow(*p)?,
        })
    }

    /// Evaluates to a normal form in `u`.
    pub fn eval(&self, u: &Algebra) -> Result<Element, ExprError> {
        let d = u.datum();
        Ok(match self {
            Expr::Int(_) | Expr::Q => u.scalar(self.scalar()?),
            Expr::E(r, l) => u.e(resolve_node(d, r)?, *l)?,
            Expr::F(r, l) => u.f(resolve_node(d, r)?, *l)?,
            Expr::K(r) => u.k(resolve_node(d, r)?, 1),
            Expr::Torus(v) => u.torus(torus_from(d, v)?),
            Expr::Neg(a) => a.eval(u)?.scale(&-RationalFunction::one()),
            Expr::Add(a, b) => a.eval(u)?.add(&b.eval(u)?),
            Expr::Sub(a, b) => a.eval(u)?.sub(&b.eval(u)?),
            Expr::Mul(a, b) => u.multiply(&a.eval(u)?, &b.eval(u)?)?,
            Expr::Div(a, b) => u.multiply(&a.eval(u)?, &invert(&b.eval(u)?)?)?,
            Expr::Pow(a, p) => {
                let base = a.eval(u)?;
                let base = if *p < 0 { invert(&base)? } else { base };
                let mut acc = u.one();
                for _ in 0..p.unsigned_abs() {
                    acc = u.multiply(&acc, &base)?;
                }
                acc
            }
        })
    }
}

fn torus_from(d: &CartanDatum, v: &[i64]) -> Result<Torus, ExprError> {
    let n = d.rank();
    if v.len() == n {
        Ok(Torus::from_parts(v, &vec![0; n]))
    } else if v.len() == 2 * n {
        Ok(Torus(v.to_vec()))
    } else {
        Err(ExprError::TorusLength { rank: n, got: v.len() })
    }
}

/// Inverse of `c q^h`; anything else is rejected.
fn invert(x: &Element) -> Result<Element, ExprError> {
    let mut terms = x.terms().iter();
    match (terms.next(), terms.next()) {
        (Some((k, c)), None) if k.f.is_empty() && k.e.is_empty() => {
            let key = TermKey::new(k.f.clone(), -&k.h, k.e.clone());
            Ok(Element::term(key, c.inv()?))
        }
        _ => Err(ExprError::NotInvertible),
    }
}

/// Parses a scalar such as `1/(1-q^2)`.
pub fn parse_scalar(src: &str) -> Result<RationalFunction, ExprError> {
    parse(src)?.scalar()
}

/// Parses and normalizes an algebra expression.
pub fn normal_form(u: &Algebra, src: &str) -> Result<Element, ExprError> {
    parse(src)?.eval(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Tau;

    fn sl2() -> Algebra {
        let d = CartanDatum::from_matrix(vec![vec![2]], vec![1]).unwrap();
        let t = Tau::real_defaults(&d);
        Algebra::new(d, t, 4).unwrap()
    }

    #[test]
    fn scalars() {
        let t = parse_scalar("1/(1-q^2)").unwrap();
        assert_eq!(t, Tau::real_default(1));
        assert_eq!(parse_scalar("-q^-2 + 3").unwrap(), &RationalFunction::from_int(3) - &RationalFunction::q_pow(-2));
        assert_eq!(parse_scalar("2 q * q").unwrap(), RationalFunction::monomial(2, 2));
        assert!(matches!(parse_scalar("f[1,1]"), Err(ExprError::NotScalar(_))));
        assert!(matches!(parse_scalar("1/(q-q)"), Err(ExprError::Field(_))));
    }

    #[test]
    fn parse_errors_report_offsets() {
        assert_eq!(parse("e[1,1"), Err(ExprError::Parse { pos: 5, msg: "expected `]`".into() }));
        assert!(matches!(parse("x"), Err(ExprError::Parse { pos: 0, .. })));
        assert!(matches!(parse("1 +"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("e[1,0]"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("q $"), Err(ExprError::Parse { pos: 2, .. })));
    }

    #[test]
    fn nodes_by_name_then_index() {
        let d = CartanDatum::new(vec!["b".into(), "a".into()], vec![vec![2, -1], vec![-1, 2]], vec![1, 1]).unwrap();
        assert_eq!(resolve_node(&d, "a").unwrap(), 1);
        assert_eq!(resolve_node(&d, "1").unwrap(), 0);
        assert!(resolve_node(&d, "3").is_err());
        let n = CartanDatum::new(vec!["2".into(), "1".into()], vec![vec![2, -1], vec![-1, 2]], vec![1, 1]).unwrap();
        assert_eq!(resolve_node(&n, "1").unwrap(), 1);
    }

    #[test]
    fn torus_expressions() {
        let u = sl2();
        let k = normal_form(&u, "K[1]").unwrap();
        assert_eq!(k, u.k(0, 1));
        assert_eq!(normal_form(&u, "K[1]^-1 K[1]").unwrap(), u.one());
        assert_eq!(normal_form(&u, "q[1]").unwrap(), k);
        assert_eq!(normal_form(&u, "q[1,0]").unwrap(), k);
        assert!(matches!(normal_form(&u, "q[1,0,0]"), Err(ExprError::TorusLength { .. })));
        assert!(matches!(normal_form(&u, "1/f[1,1]"), Err(ExprError::NotInvertible)));
    }

    #[test]
    fn rendered_normal_forms_parse_back() {
        let u = sl2();
        for src in ["e[1,1] f[1,1]", "e[1,1]^2 f[1,1]^2", "(q + 1) K[1] f[1,1] - e[1,1]/(1 - q)", "q[2,1] f[1,1]"] {
            let x = normal_form(&u, src).unwrap();
            let back = normal_form(&u, &x.render(u.datum())).unwrap();
            assert_eq!(x, back, "{src}");
        }
    }
}
