//! Expression text: parsing into polynomials and module elements, and the
//! canonical printer.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := rational | 'd' | 'l'digit | IDENT | '(' expr ')' | '-' atom
//! ```

use std::collections::BTreeMap;

use lca_core::symalg::{ModElem, Poly, Var};
use lca_core::{Rational, Scalar, MAX_LAMBDA};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown basis symbol '{0}'")]
    UnknownSymbol(String),
    #[error("exponent must be a nonnegative integer (byte {0})")]
    Exponent(usize),
    #[error("{0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    D,
    Lambda(usize),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { offset: self.pos, msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(ExprError::Exponent(start));
        }
        let e: u32 = digits.parse().map_err(|_| ExprError::Exponent(start))?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.digits();
                    if den.is_empty() {
                        return self.err("expected denominator");
                    }
                    let den: BigInt = den.parse().expect("digits");
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    return Ok(Expr::Num(Rational::new(num, den)));
                }
                Ok(Expr::Num(Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || matches!(self.src[self.pos], b'_' | b'\''))
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                if word == "d" {
                    return Ok(Expr::D);
                }
                if let Some(k) = word.strip_prefix('l').and_then(|r| r.parse::<usize>().ok()) {
                    if word.len() == 2 && (1..=MAX_LAMBDA).contains(&k) {
                        return Ok(Expr::Lambda(k));
                    }
                }
                if c.is_ascii_uppercase() {
                    return Ok(Expr::Sym(word.to_string()));
                }
                self.pos = start;
                self.err(format!("unknown variable '{word}'"))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Scalar part plus the coefficients of basis symbols.
#[derive(Clone, Debug, Default)]
struct Value {
    scalar: Poly<Rational>,
    vector: BTreeMap<usize, Poly<Rational>>,
}

impl Value {
    fn scalar(p: Poly<Rational>) -> Self {
        Value { scalar: p, vector: BTreeMap::new() }
    }

    fn combine(mut self, other: Value, sign: bool) -> Value {
        let add = |a: &Poly<Rational>, b: &Poly<Rational>| if sign { a + b } else { a - b };
        self.scalar = add(&self.scalar, &other.scalar);
        for (k, p) in other.vector {
            let cur = self.vector.remove(&k).unwrap_or_else(Poly::zero);
            let v = add(&cur, &p);
            if !v.is_zero() {
                self.vector.insert(k, v);
            }
        }
        self
    }

    fn scale(self, p: &Poly<Rational>) -> Value {
        Value {
            scalar: &self.scalar * p,
            vector: self.vector.into_iter().map(|(k, v)| (k, &v * p)).filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    fn is_scalar(&self) -> bool {
        self.vector.is_empty()
    }
}

fn eval(e: &Expr, basis: &[String]) -> Result<Value, ExprError> {
    Ok(match e {
        Expr::Num(q) => Value::scalar(Poly::constant(q.clone())),
        Expr::D => Value::scalar(Poly::d()),
        Expr::Lambda(k) => Value::scalar(Poly::lambda(*k)),
        Expr::Sym(s) => {
            let i = basis.iter().position(|b| b == s).ok_or_else(|| ExprError::UnknownSymbol(s.clone()))?;
            Value { scalar: Poly::zero(), vector: BTreeMap::from([(i, Poly::one())]) }
        }
        Expr::Neg(a) => eval(a, basis)?.scale(&Poly::int(-1)),
        Expr::Add(a, b) => eval(a, basis)?.combine(eval(b, basis)?, true),
        Expr::Sub(a, b) => eval(a, basis)?.combine(eval(b, basis)?, false),
        Expr::Mul(a, b) => {
            let (x, y) = (eval(a, basis)?, eval(b, basis)?);
            match (x.is_scalar(), y.is_scalar()) {
                (true, _) => y.scale(&x.scalar),
                (false, true) => x.scale(&y.scalar),
                (false, false) => return Err(ExprError::Shape("product of two basis symbols".into())),
            }
        }
        Expr::Pow(a, k) => {
            let x = eval(a, basis)?;
            if x.is_scalar() {
                Value::scalar(x.scalar.pow(*k))
            } else if *k == 1 {
                x
            } else {
                return Err(ExprError::Shape("power of a basis symbol".into()));
            }
        }
    })
}

/// A polynomial in `d, l1..l9` without basis symbols.
pub fn parse_poly(text: &str) -> Result<Poly<Rational>, ExprError> {
    let v = eval(&parse_expr(text)?, &[])?;
    Ok(v.scalar)
}

/// A module element over `basis`: every monomial carries exactly one basis
/// symbol, except that a bare `0` is allowed.
pub fn parse_elem(text: &str, basis: &[String]) -> Result<ModElem<Rational>, ExprError> {
    let v = eval(&parse_expr(text)?, basis)?;
    if !v.scalar.is_zero() {
        return Err(ExprError::Shape(format!("term without a basis symbol in '{text}'")));
    }
    let mut coords = vec![Poly::zero(); basis.len()];
    for (k, p) in v.vector {
        coords[k] = p;
    }
    Ok(ModElem::from_coords(coords))
}

/// Canonical text of a polynomial: graded-lex descending, explicit rational
/// coefficients, `*` between factors.
pub fn poly_to_string(p: &Poly<Rational>) -> String {
    p.to_string()
}

/// `coeff*S` for one coordinate.
pub fn term_to_string(p: &Poly<Rational>, sym: &str) -> String {
    if *p == Poly::one() {
        sym.to_string()
    } else if *p == -Poly::<Rational>::one() {
        format!("-{sym}")
    } else if p.num_terms() == 1 {
        format!("{p}*{sym}")
    } else {
        format!("({p})*{sym}")
    }
}

/// One string per nonzero coordinate, in basis order.
pub fn elem_to_strings(v: &ModElem<Rational>, basis: &[String]) -> Vec<String> {
    v.nonzero().map(|(k, p)| term_to_string(p, &basis[k])).collect()
}

/// Whole element as a single expression.
pub fn elem_to_string(v: &ModElem<Rational>, basis: &[String]) -> String {
    let parts = elem_to_strings(v, basis);
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for s in &parts[1..] {
        match s.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(s);
            }
        }
    }
    out
}

/// Largest `k` with `l_k` occurring, for variable-bound checks.
pub fn max_lambda(p: &Poly<Rational>) -> usize {
    p.vars().into_iter().filter(|v| !v.is_d()).map(Var::index).max().unwrap_or(0)
}

pub fn rational_to_string(q: &Rational) -> String {
    let (n, d) = q.to_ratio();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn virasoro_value() {
        let v = parse_elem("(d + 2*l1)*L", &basis(&["L"])).unwrap();
        let want = &Poly::d() + &Poly::lambda(1).scale(&Rational::from_integer(2.into()));
        assert_eq!(v.coord(0), &want);
        assert_eq!(elem_to_string(&v, &basis(&["L"])), "(d + 2*l1)*L");
    }

    #[test]
    fn scalars() {
        assert!(parse_poly("0").unwrap().is_zero());
        let p = parse_poly("d^2 - l1*l2").unwrap();
        assert_eq!(p, &Poly::d().pow(2) - &(Poly::lambda(1) * Poly::lambda(2)));
        assert_eq!(poly_to_string(&p), "d^2 - l1*l2");
        assert_eq!(parse_poly("1/2*d - 3/4").unwrap().to_string(), "1/2*d - 3/4");
        assert_eq!(parse_poly("  ( d+l1 ) ^ 2 ").unwrap().to_string(), "d^2 + 2*d*l1 + l1^2");
    }

    #[test]
    fn leading_minus_binds_to_atom() {
        assert_eq!(parse_poly("-d^2").unwrap(), Poly::d().pow(2));
        let p = -Poly::<Rational>::d().pow(2);
        let s = poly_to_string(&p);
        assert_eq!(s, "-1*d^2");
        assert_eq!(parse_poly(&s).unwrap(), p);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_poly("d +"), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_poly("d^-1"), Err(ExprError::Exponent(2))));
        assert!(matches!(parse_poly("d^1/2"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_poly("x"), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_elem("Q", &basis(&["L"])), Err(ExprError::UnknownSymbol(_))));
        assert!(matches!(parse_elem("L*L", &basis(&["L"])), Err(ExprError::Shape(_))));
        assert!(matches!(parse_elem("L + 1", &basis(&["L"])), Err(ExprError::Shape(_))));
        assert!(matches!(parse_poly("1/0"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_poly("l0"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn element_strings() {
        let b = basis(&["E", "F", "H"]);
        let v = parse_elem("-2*F + H - d*E", &b).unwrap();
        assert_eq!(elem_to_strings(&v, &b), vec!["-d*E", "-2*F", "H"]);
        assert_eq!(elem_to_string(&v, &b), "-d*E - 2*F + H");
        assert_eq!(parse_elem(&elem_to_string(&v, &b), &b).unwrap(), v);
        assert_eq!(elem_to_string(&ModElem::zero(3), &b), "0");
    }
}
