//! A small expression language for potentials `V(x)` and vector potentials
//! `A(x)`: real literals, the variable `x`, the binary operators
//! `+ - * / ^`, unary minus, and the functions `exp`, `sin`, `cos`, `sqrt`,
//! `abs`.
//!
//! Grammar (precedence increasing downward, `^` right-associative, unary
//! minus binding tighter than `^`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-'? atom
//! atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}{}", render_idents(.unknown))]
    Parse { pos: usize, msg: String, unknown: Vec<String> },
    #[error("division by near-zero value at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("evaluation produced a non-finite value")]
    NonFinite,
}

fn render_idents(unknown: &[String]) -> String {
    if unknown.is_empty() {
        String::new()
    } else {
        format!(" (unknown identifiers: {})", unknown.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

/// Expression tree over the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Num(f64),
    Var,
    Neg(Box<ExprAst>),
    Bin(BinOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

impl ExprAst {
    /// Evaluate at a point. Total on finite inputs except division by values
    /// with magnitude below 1e-300.
    pub fn eval(&self, x: f64) -> Result<f64, ExprError> {
        let v = match self {
            ExprAst::Num(c) => *c,
            ExprAst::Var => x,
            ExprAst::Neg(e) => -e.eval(x)?,
            ExprAst::Bin(op, a, b) => {
                let a = a.eval(x)?;
                let b = b.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.abs() < 1e-300 {
                            return Err(ExprError::DivisionByZero { x });
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            ExprAst::Call(f, e) => {
                let v = e.eval(x)?;
                match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFinite)
        }
    }

    /// Render to source text; `parse(render(ast)) == ast`.
    pub fn render(&self) -> String {
        match self {
            ExprAst::Num(c) => {
                if *c < 0.0 {
                    // keep negative literals reparseable as Neg(Num)
                    format!("-{}", format_number(-c))
                } else {
                    format_number(*c)
                }
            }
            ExprAst::Var => "x".to_string(),
            ExprAst::Neg(e) => format!("-{}", e.render_atomic()),
            ExprAst::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                format!("({}{}{})", a.render(), sym, b.render())
            }
            ExprAst::Call(f, e) => format!("{}({})", f.name(), e.render()),
        }
    }

    fn render_atomic(&self) -> String {
        match self {
            ExprAst::Num(_) | ExprAst::Var | ExprAst::Call(..) => self.render(),
            _ => format!("({})", self.render()),
        }
    }
}

fn format_number(v: f64) -> String {
    debug_assert!(v >= 0.0);
    let s = format!("{v}");
    // make sure a bare integer literal stays a float-parseable token
    s
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for ExprAst {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for ExprAst {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_expr(&text).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    unknown: Vec<String>,
}

/// Parse source text into an [`ExprAst`]. Errors carry the byte position and
/// list any unknown identifiers encountered.
pub fn parse_expr(text: &str) -> Result<ExprAst, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, unknown: Vec::new() };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
            unknown: self.unknown.clone(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }


    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = ExprAst::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = ExprAst::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = ExprAst::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    lhs = ExprAst::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ExprError> {
        let base = self.unary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.factor()?; // right-associative
            Ok(ExprAst::Bin(BinOp::Pow, Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ExprError> {
        if self.eat(b'-') {
            Ok(ExprAst::Neg(Box::new(self.atom()?)))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<ExprAst, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let ident = self.ident();
                match ident.as_str() {
                    "x" => Ok(ExprAst::Var),
                    "exp" | "sin" | "cos" | "sqrt" | "abs" => {
                        let f = match ident.as_str() {
                            "exp" => Func::Exp,
                            "sin" => Func::Sin,
                            "cos" => Func::Cos,
                            "sqrt" => Func::Sqrt,
                            _ => Func::Abs,
                        };
                        if !self.eat(b'(') {
                            return Err(self.error(&format!("expected '(' after {ident}")));
                        }
                        let arg = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.error("expected ')'"));
                        }
                        Ok(ExprAst::Call(f, Box::new(arg)))
                    }
                    _ => {
                        self.unknown.push(ident.clone());
                        Err(self.error(&format!("unknown identifier '{ident}'")))
                    }
                }
            }
            Some(_) => Err(self.error("expected a number, 'x', a function call or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<ExprAst, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit()
                || self.src[self.pos] == b'.'
                || self.src[self.pos] == b'e'
                || self.src[self.pos] == b'E'
                || ((self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
                    && self.pos > start
                    && (self.src[self.pos - 1] == b'e' || self.src[self.pos - 1] == b'E')))
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map(ExprAst::Num)
            .map_err(|_| self.error(&format!("invalid number literal '{text}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_quadratic_potential() {
        let e = parse_expr("x^2/2").unwrap();
        assert_eq!(
            e,
            ExprAst::Bin(
                BinOp::Div,
                Box::new(ExprAst::Bin(
                    BinOp::Pow,
                    Box::new(ExprAst::Var),
                    Box::new(ExprAst::Num(2.0))
                )),
                Box::new(ExprAst::Num(2.0))
            )
        );
        assert_eq!(e.eval(2.0).unwrap(), 2.0);
    }

    #[test]
    fn gaussian_potential_evaluates() {
        let e = parse_expr("exp(-x^2)").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn lorentzian_matches_independent_evaluator() {
        // second, hand-written evaluator for 1/(1+x^2)
        fn reference(x: f64) -> f64 {
            1.0 / (1.0 + x * x)
        }
        let e = parse_expr("1/(1+x^2)").unwrap();
        let g = crate::grid::GridSpec::default_desk();
        for i in 0..g.n() {
            let x = g.x(i);
            assert!((e.eval(x).unwrap() - reference(x)).abs() <= 1e-15);
        }
    }

    #[test]
    fn precedence_is_as_specified() {
        // '-' binds tighter than '^' per the grammar: -x^2 = (-x)^2
        let e = parse_expr("-x^2").unwrap();
        assert_eq!(e.eval(3.0).unwrap(), 9.0);
        // '^' right-associative: 2^3^2 = 2^9
        let e = parse_expr("2^3^2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 512.0);
        // * binds tighter than +
        let e = parse_expr("1+2*3").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 7.0);
    }

    #[test]
    fn errors_carry_position_and_idents() {
        match parse_expr("x + foo(3)") {
            Err(ExprError::Parse { pos, unknown, .. }) => {
                assert!(pos >= 4);
                assert_eq!(unknown, vec!["foo".to_string()]);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_expr("1 +").is_err());
        assert!(parse_expr("(1").is_err());
    }

    #[test]
    fn division_guard() {
        let e = parse_expr("1/x").unwrap();
        assert!(matches!(e.eval(0.0), Err(ExprError::DivisionByZero { .. })));
        assert!(e.eval(2.0).is_ok());
    }

    fn arb_expr() -> impl Strategy<Value = ExprAst> {
        let leaf = prop_oneof![
            (0.0f64..100.0).prop_map(ExprAst::Num),
            Just(ExprAst::Var),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::Bin(
                    BinOp::Add,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::Bin(
                    BinOp::Mul,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ExprAst::Bin(
                    BinOp::Div,
                    Box::new(a),
                    Box::new(b)
                )),
                inner.clone().prop_map(|a| ExprAst::Neg(Box::new(a))),
                inner.clone().prop_map(|a| ExprAst::Call(Func::Exp, Box::new(a))),
                inner.prop_map(|a| ExprAst::Call(Func::Cos, Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_render_roundtrip(ast in arb_expr()) {
            let text = ast.render();
            let back = parse_expr(&text).unwrap();
            prop_assert_eq!(back, ast);
        }
    }
}
