//! A small arithmetic expression language for problem files: variables
//! `x`, `y`, `t`, the constants `pi` and `e`, the operators `+ - * / ^` and
//! comparisons (which evaluate to 1 or 0), and the functions `exp`, `ln`,
//! `sqrt`, `pow`, `gamma`, `sin`, `cos`, `tan`, `abs`, `min`, `max`, and
//! `piecewise(cond1, val1, ..., default)`.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident(usize), // index into the parser's identifier table
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Exp,
    Ln,
    Sqrt,
    Pow,
    Gamma,
    Sin,
    Cos,
    Tan,
    Abs,
    Min,
    Max,
    Piecewise,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "pow" => Func::Pow,
            "gamma" => Func::Gamma,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "piecewise" | "if" => Func::Piecewise,
            _ => return None,
        })
    }

    fn arity_ok(&self, n: usize) -> bool {
        match self {
            Func::Pow | Func::Min | Func::Max => n == 2,
            Func::Piecewise => n >= 3 && n % 2 == 1,
            _ => n == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Num(f64),
    Var(u8), // 0 = x, 1 = y, 2 = t
    Neg(Box<Expr>),
    Bin(BinOpNode),
    Call(CallNode),
}

#[derive(Debug, Clone)]
pub struct BinOpNode {
    op: BinOp,
    lhs: Box<Expr>,
    rhs: Box<Expr>,
}

#[derive(Debug, Clone)]
pub struct CallNode {
    func: Func,
    args: Vec<Expr>,
}

#[derive(Debug)]
pub struct ExprError(pub String);

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expression error: {}", self.0)
    }
}

impl std::error::Error for ExprError {}

struct Lexer<'a> {
    src: &'a str,
    idents: Vec<&'a str>,
    toks: Vec<Tok>,
}

fn lex(src: &str) -> Result<Lexer<'_>, ExprError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut idents: Vec<&str> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '<' | '>' | '=' => {
                let two = i + 1 < bytes.len() && bytes[i + 1] == b'=';
                toks.push(match (c, two) {
                    ('<', true) => Tok::Le,
                    ('<', false) => Tok::Lt,
                    ('>', true) => Tok::Ge,
                    ('>', false) => Tok::Gt,
                    ('=', true) => Tok::Eq,
                    _ => return Err(ExprError(format!("stray '{c}'"))),
                });
                i += if two { 2 } else { 1 };
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit() || bytes[i] == b'.')
                {
                    i += 1;
                }
                // Scientific notation.
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
                let v: f64 = text
                    .parse()
                    .map_err(|_| ExprError(format!("bad number '{text}'")))?;
                toks.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &src[start..i];
                let found = idents.iter().position(|n| *n == name);
                let id = match found {
                    Some(i) => i,
                    None => {
                        idents.push(name);
                        idents.len() - 1
                    }
                };
                toks.push(Tok::Ident(id));
            }
            other => return Err(ExprError(format!("unexpected character '{other}'"))),
        }
    }
    Ok(Lexer { src, idents, toks })
}

struct Parser<'a> {
    lex: Lexer<'a>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.lex.toks.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ExprError> {
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            other => Err(ExprError(format!(
                "expected {tok:?}, found {other:?} in '{}'",
                self.lex.src
            ))),
        }
    }

    // comparison := additive (cmp additive)?
    fn comparison(&mut self) -> Result<Expr, ExprError> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Some(Tok::Lt) => BinOp::Lt,
            Some(Tok::Gt) => BinOp::Gt,
            Some(Tok::Le) => BinOp::Le,
            Some(Tok::Ge) => BinOp::Ge,
            Some(Tok::Eq) => BinOp::Eq,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.additive()?;
        Ok(Expr::Bin(BinOpNode {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }))
    }

    fn additive(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.multiplicative()?;
            lhs = Expr::Bin(BinOpNode {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            });
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(BinOpNode {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            });
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek() == Some(Tok::Plus) {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    // power := atom ('^' unary)?   (right-associative)
    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some(Tok::Caret) {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOpNode {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.comparison()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                let name = self.lex.idents[id];
                if self.peek() == Some(Tok::LParen) {
                    self.bump();
                    let mut args = Vec::new();
                    if self.peek() != Some(Tok::RParen) {
                        loop {
                            args.push(self.comparison()?);
                            match self.peek() {
                                Some(Tok::Comma) => {
                                    self.bump();
                                }
                                _ => break,
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                    let func = Func::from_name(name)
                        .ok_or_else(|| ExprError(format!("unknown function '{name}'")))?;
                    if !func.arity_ok(args.len()) {
                        return Err(ExprError(format!(
                            "wrong number of arguments ({}) for '{name}'",
                            args.len()
                        )));
                    }
                    return Ok(Expr::Call(CallNode { func, args }));
                }
                match name {
                    "x" => Ok(Expr::Var(0)),
                    "y" => Ok(Expr::Var(1)),
                    "t" => Ok(Expr::Var(2)),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    other => Err(ExprError(format!("unknown identifier '{other}'"))),
                }
            }
            other => Err(ExprError(format!(
                "expected a value, found {other:?} in '{}'",
                self.lex.src
            ))),
        }
    }
}

/// Parses an expression over the variables `x`, `y`, `t`.
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let lex = lex(src)?;
    let mut p = Parser { lex, pos: 0 };
    let e = p.comparison()?;
    if p.pos != p.lex.toks.len() {
        return Err(ExprError(format!(
            "trailing tokens after position {} in '{src}'",
            p.pos
        )));
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(0) => x,
            Expr::Var(1) => y,
            Expr::Var(_) => t,
            Expr::Neg(e) => -e.eval(x, y, t),
            Expr::Bin(node) => {
                let a = node.lhs.eval(x, y, t);
                let b = node.rhs.eval(x, y, t);
                match node.op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                    BinOp::Lt => f64::from(a < b),
                    BinOp::Gt => f64::from(a > b),
                    BinOp::Le => f64::from(a <= b),
                    BinOp::Ge => f64::from(a >= b),
                    BinOp::Eq => f64::from(a == b),
                }
            }
            Expr::Call(node) => {
                let arg = |i: usize| node.args[i].eval(x, y, t);
                match node.func {
                    Func::Exp => arg(0).exp(),
                    Func::Ln => arg(0).ln(),
                    Func::Sqrt => arg(0).sqrt(),
                    Func::Pow => arg(0).powf(arg(1)),
                    Func::Gamma => fracdq_core::special::gamma(arg(0)),
                    Func::Sin => arg(0).sin(),
                    Func::Cos => arg(0).cos(),
                    Func::Tan => arg(0).tan(),
                    Func::Abs => arg(0).abs(),
                    Func::Min => arg(0).min(arg(1)),
                    Func::Max => arg(0).max(arg(1)),
                    Func::Piecewise => {
                        let n = node.args.len();
                        let mut i = 0;
                        while i + 1 < n {
                            if arg(i) != 0.0 {
                                return arg(i + 1);
                            }
                            i += 2;
                        }
                        arg(n - 1)
                    }
                }
            }
        }
    }
}
