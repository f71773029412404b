//! Single-variable function expressions: parsing, printing and total evaluation.
//!
//! Grammar: numbers (decimal, optional exponent), the variable `x`, operators
//! `+ - * / ^` with standard precedence (`^` right-associative and binding
//! tighter than unary minus), parentheses, and the functions `ln`, `exp`,
//! `sqrt`, `abs`, `sin`, `cos`. Whitespace is insignificant. There is no
//! implicit multiplication: `2x` is rejected.

use std::fmt;

use thiserror::Error;

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
    Ln,
    Exp,
    Sqrt,
    Abs,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Num(f64),
    Var,
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Call(Func, Box<Ast>),
}

/// A parsed, immutable expression in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Ast,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { offset: usize, name: String },
}

/// Evaluation failure at a specific point.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("domain error at x = {point}: {reason}")]
    Domain { point: f64, reason: String },
    #[error("non-finite result at x = {point}")]
    NonFinite { point: f64 },
}

pub type EvalResult = Result<f64, EvalError>;

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => { out.push((i, Tok::Plus)); i += 1; }
            b'-' => { out.push((i, Tok::Minus)); i += 1; }
            b'*' => { out.push((i, Tok::Star)); i += 1; }
            b'/' => { out.push((i, Tok::Slash)); i += 1; }
            b'^' => { out.push((i, Tok::Caret)); i += 1; }
            b'(' => { out.push((i, Tok::LParen)); i += 1; }
            b')' => { out.push((i, Tok::RParen)); i += 1; }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent part
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: vec!["number".into()],
                })?;
                out.push((start, Tok::Num(value)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: i,
                    expected: vec![
                        "number".into(),
                        "`x`".into(),
                        "function name".into(),
                        "operator".into(),
                        "`(`".into(),
                    ],
                })
            }
        }
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

// --------------------------------------------------------------- parsing

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // unary := '-' unary | power
    // `^` binds tighter than unary minus, so -x^2 parses as -(x^2).
    fn unary(&mut self) -> Result<Ast, ParseError> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            let inner = self.unary()?;
            return Ok(Ast::Neg(Box::new(inner)));
        }
        self.power()
    }

    // power := atom ('^' unary)?   (right-associative via unary recursion)
    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Tok::Caret) {
            self.bump();
            let exp = self.unary()?;
            return Ok(Ast::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Ast::Num(v))
            }
            Tok::Ident(name) => {
                let off = self.offset();
                self.bump();
                if name == "x" {
                    return Ok(Ast::Var);
                }
                if matches!(self.peek(), Tok::LParen) {
                    let func = Func::from_name(&name)
                        .ok_or(ParseError::UnknownFunction { offset: off, name })?;
                    self.bump(); // '('
                    let arg = self.expr()?;
                    if !matches!(self.peek(), Tok::RParen) {
                        return Err(self.err(&["`)`"]));
                    }
                    self.bump();
                    Ok(Ast::Call(func, Box::new(arg)))
                } else {
                    Err(ParseError::UnknownFunction { offset: off, name })
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Tok::RParen) {
                    return Err(self.err(&["`)`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(ParseError::Syntax {
                offset: self.offset(),
                expected: vec![
                    "number".into(),
                    "`x`".into(),
                    "function name".into(),
                    "`-`".into(),
                    "`(`".into(),
                ],
            }),
        }
    }
}

pub fn parse(source: &str) -> Result<Expression, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0 };
    let root = p.expr()?;
    if !matches!(p.peek(), Tok::Eof) {
        return Err(ParseError::Syntax {
            offset: p.offset(),
            expected: vec!["operator".into(), "end of input".into()],
        });
    }
    Ok(Expression { root })
}

// -------------------------------------------------------------- printing

// Precedence levels for minimal-parenthesis printing.
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

fn prec(ast: &Ast) -> u8 {
    match ast {
        Ast::Num(v) if *v < 0.0 => P_NEG,
        Ast::Num(_) | Ast::Var | Ast::Call(_, _) => P_ATOM,
        Ast::Neg(_) => P_NEG,
        Ast::Bin(BinOp::Add | BinOp::Sub, _, _) => P_ADD,
        Ast::Bin(BinOp::Mul | BinOp::Div, _, _) => P_MUL,
        Ast::Bin(BinOp::Pow, _, _) => P_POW,
    }
}

fn write_ast(ast: &Ast, out: &mut String, min: u8) {
    let p = prec(ast);
    let parens = p < min;
    if parens {
        out.push('(');
    }
    match ast {
        Ast::Num(v) => {
            // `{}` is shortest round-trip for f64, so reparse is exact.
            out.push_str(&format!("{v}"));
        }
        Ast::Var => out.push('x'),
        Ast::Neg(inner) => {
            out.push('-');
            write_ast(inner, out, P_NEG);
        }
        Ast::Bin(op, l, r) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => ("+", P_ADD, P_ADD + 1),
                // right operand of - and / needs the next level up
                BinOp::Sub => ("-", P_ADD, P_ADD + 1),
                BinOp::Mul => ("*", P_MUL, P_MUL + 1),
                BinOp::Div => ("/", P_MUL, P_MUL + 1),
                // Pow: base must be an atom, exponent may be unary (right assoc)
                BinOp::Pow => ("^", P_ATOM, P_NEG),
            };
            // `+` is associative but we keep the conservative split for Sub/Div
            let lp = if *op == BinOp::Add { P_ADD } else { lp };
            write_ast(l, out, lp);
            out.push_str(sym);
            write_ast(r, out, rp);
        }
        Ast::Call(func, arg) => {
            out.push_str(func.name());
            out.push('(');
            write_ast(arg, out, 0);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_ast(&self.root, &mut s, 0);
        f.write_str(&s)
    }
}

// ------------------------------------------------------------ evaluation

/// Exponents within this distance of an integer are treated as integral,
/// which makes negative bases legal for them.
const INT_EXP_TOL: f64 = 1e-12;

fn eval_ast(ast: &Ast, x: f64) -> EvalResult {
    let v = match ast {
        Ast::Num(v) => *v,
        Ast::Var => x,
        Ast::Neg(inner) => -eval_ast(inner, x)?,
        Ast::Bin(op, l, r) => {
            let a = eval_ast(l, x)?;
            let b = eval_ast(r, x)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::Domain {
                            point: x,
                            reason: "division by zero".into(),
                        });
                    }
                    a / b
                }
                BinOp::Pow => {
                    let rounded = b.round();
                    let integral = (b - rounded).abs() <= INT_EXP_TOL;
                    if a < 0.0 && !integral {
                        return Err(EvalError::Domain {
                            point: x,
                            reason: "negative base with non-integer exponent".into(),
                        });
                    }
                    if integral {
                        a.powf(rounded)
                    } else {
                        a.powf(b)
                    }
                }
            }
        }
        Ast::Call(func, arg) => {
            let a = eval_ast(arg, x)?;
            match func {
                Func::Ln => {
                    if a <= 0.0 {
                        return Err(EvalError::Domain {
                            point: x,
                            reason: "ln of non-positive".into(),
                        });
                    }
                    a.ln()
                }
                Func::Exp => a.exp(),
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(EvalError::Domain {
                            point: x,
                            reason: "sqrt of negative".into(),
                        });
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
            }
        }
    };
    if !v.is_finite() {
        return Err(EvalError::NonFinite { point: x });
    }
    Ok(v)
}

impl Expression {
    pub fn new(root: Ast) -> Expression {
        Expression { root }
    }

    pub fn root(&self) -> &Ast {
        &self.root
    }

    /// Evaluate at `x`. A success value is always finite.
    pub fn evaluate(&self, x: f64) -> EvalResult {
        eval_ast(&self.root, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: f64) -> EvalResult {
        parse(src).unwrap().evaluate(x)
    }

    #[test]
    fn grammar_identity_cases() {
        let e = parse("x^3").unwrap();
        assert_eq!(
            e.root,
            Ast::Bin(BinOp::Pow, Box::new(Ast::Var), Box::new(Ast::Num(3.0)))
        );
        let e = parse("ln(x-1)").unwrap();
        assert_eq!(
            e.root,
            Ast::Call(
                Func::Ln,
                Box::new(Ast::Bin(BinOp::Sub, Box::new(Ast::Var), Box::new(Ast::Num(1.0))))
            )
        );
    }

    #[test]
    fn malformed_input_offsets() {
        match parse("x^^2") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse("").is_err());
        assert!(parse("(x").is_err());
        // no implicit multiplication
        assert!(parse("2x").is_err());
    }

    #[test]
    fn unknown_function() {
        match parse("foo(x)") {
            Err(ParseError::UnknownFunction { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("y"), Err(ParseError::UnknownFunction { .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("2+3*4", 0.0).unwrap(), 14.0);
        assert_eq!(eval("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(eval("-x^2", 3.0).unwrap(), -9.0);
        assert_eq!(eval("2^-1", 0.0).unwrap(), 0.5);
        assert_eq!(eval("(-x)^2", 3.0).unwrap(), 9.0);
    }

    #[test]
    fn evaluation_basics() {
        assert_eq!(eval("x^3", 2.0).unwrap(), 8.0);
        match eval("ln(x-1)", 0.5) {
            Err(EvalError::Domain { point, reason }) => {
                assert_eq!(point, 0.5);
                assert!(reason.contains("ln of non-positive"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match eval("1/x", 0.0) {
            Err(EvalError::Domain { point, reason }) => {
                assert_eq!(point, 0.0);
                assert!(reason.contains("division by zero"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_base_rules() {
        // integer exponent on negative base is fine
        assert_eq!(eval("(0-2)^3", 0.0).unwrap(), -8.0);
        assert!(matches!(
            eval("(0-2)^0.5", 0.0),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn overflow_is_nonfinite() {
        assert!(matches!(
            eval("exp(x)", 1e6),
            Err(EvalError::NonFinite { .. })
        ));
    }

    #[test]
    fn print_reparse_spot_checks() {
        for src in [
            "x^3",
            "-x^2",
            "(x+1)*(x-2)",
            "2^3^2",
            "x-(1-2)",
            "ln(exp(x))",
            "x/(2*x)",
            "(x^2)^3",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(e, reparsed, "round trip failed via {printed:?}");
        }
    }
}
