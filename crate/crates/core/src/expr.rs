//! A small arithmetic expression language over the variables `x1..xp`.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary minus, `^`
//! (right-associative), function application. Supported functions are
//! `abs`, `sqrt`, `sin`, `cos` and `exp`.

use std::fmt;
use std::ops;

use crate::error::{EvalError, ParseError, Position};

/// Integer exponents up to this magnitude are evaluated by repeated
/// multiplication, so negative bases behave exactly.
const MAX_INT_EXPONENT: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Equals,
    LessEq,
    GreaterEq,
}

impl Operator {
    fn symbol(self) -> &'static str {
        match self {
            Operator::Plus => "+",
            Operator::Minus => "-",
            Operator::Star => "*",
            Operator::Slash => "/",
            Operator::Caret => "^",
            Operator::Equals => "=",
            Operator::LessEq => "<=",
            Operator::GreaterEq => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Var,
    In,
    Minimize,
    Eq,
    Le,
    Map,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Self> {
        Some(match word {
            "var" => Keyword::Var,
            "in" => Keyword::In,
            "minimize" => Keyword::Minimize,
            "eq" => Keyword::Eq,
            "le" => Keyword::Le,
            "map" => Keyword::Map,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Identifier,
    Operator(Operator),
    LeftParen,
    RightParen,
    LeftBracket,
    RightBracket,
    Comma,
    Keyword(Keyword),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: Position,
}

/// Splits `source` into tokens. Whitespace (including newlines) and `#`
/// comments are skipped; each token keeps its line and column.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;

    while i < chars.len() {
        let c = chars[i];
        let position = Position {
            line,
            column: i - line_start + 1,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let kind = if c.is_ascii_digit() || (c == '.' && next_is_digit(&chars, i + 1)) {
            i = scan_number(&chars, i);
            let text: String = chars[start..i].iter().collect();
            // scan_number only accepts valid float syntax
            TokenKind::Number(text.parse().expect("scanned number literal"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match Keyword::from_word(&word) {
                Some(keyword) => TokenKind::Keyword(keyword),
                None => TokenKind::Identifier,
            }
        } else {
            let (kind, width) = match (c, chars.get(i + 1)) {
                ('<', Some('=')) => (TokenKind::Operator(Operator::LessEq), 2),
                ('>', Some('=')) => (TokenKind::Operator(Operator::GreaterEq), 2),
                ('+', _) => (TokenKind::Operator(Operator::Plus), 1),
                ('-', _) => (TokenKind::Operator(Operator::Minus), 1),
                ('*', _) => (TokenKind::Operator(Operator::Star), 1),
                ('/', _) => (TokenKind::Operator(Operator::Slash), 1),
                ('^', _) => (TokenKind::Operator(Operator::Caret), 1),
                ('=', _) => (TokenKind::Operator(Operator::Equals), 1),
                ('(', _) => (TokenKind::LeftParen, 1),
                (')', _) => (TokenKind::RightParen, 1),
                ('[', _) => (TokenKind::LeftBracket, 1),
                (']', _) => (TokenKind::RightBracket, 1),
                (',', _) => (TokenKind::Comma, 1),
                _ => return Err(ParseError::Lex { position, found: c }),
            };
            i += width;
            kind
        };
        tokens.push(Token {
            kind,
            lexeme: chars[start..i].iter().collect(),
            position,
        });
    }
    Ok(tokens)
}

fn next_is_digit(chars: &[char], i: usize) -> bool {
    chars.get(i).is_some_and(|c| c.is_ascii_digit())
}

fn scan_number(chars: &[char], mut i: usize) -> usize {
    while next_is_digit(chars, i) {
        i += 1;
    }
    if chars.get(i) == Some(&'.') {
        i += 1;
        while next_is_digit(chars, i) {
            i += 1;
        }
    }
    if matches!(chars.get(i), Some('e' | 'E')) {
        let mut j = i + 1;
        if matches!(chars.get(j), Some('+' | '-')) {
            j += 1;
        }
        if next_is_digit(chars, j) {
            i = j;
            while next_is_digit(chars, i) {
                i += 1;
            }
        }
    }
    i
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
    Sin,
    Cos,
    Exp,
}

impl UnaryOp {
    fn function(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => UnaryOp::Abs,
            "sqrt" => UnaryOp::Sqrt,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            UnaryOp::Neg => -v,
            UnaryOp::Abs => v.abs(),
            UnaryOp::Sqrt => v.sqrt(),
            UnaryOp::Sin => v.sin(),
            UnaryOp::Cos => v.cos(),
            UnaryOp::Exp => v.exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            BinaryOp::Mul => a * b,
            BinaryOp::Div => a / b,
            BinaryOp::Pow => power(a, b),
        }
    }
}

fn power(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= MAX_INT_EXPONENT {
        let n = exponent.abs() as u32;
        let mut acc = 1.0;
        for _ in 0..n {
            acc *= base;
        }
        if exponent < 0.0 {
            1.0 / acc
        } else {
            acc
        }
    } else {
        base.powf(exponent)
    }
}

/// Expression tree. Variables are stored 0-based: `Var(0)` is `x1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(value: f64) -> Self {
        Expr::Const(value)
    }

    /// Variable `x{index}` with a 1-based index.
    pub fn var(index: usize) -> Self {
        assert!(index >= 1, "variables are numbered from x1");
        Expr::Var(index - 1)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Self {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(self, exponent: Expr) -> Self {
        Expr::binary(BinaryOp::Pow, self, exponent)
    }

    /// Parses a standalone expression over `x1..x{arity}`.
    pub fn parse(source: &str, arity: usize) -> Result<Self, ParseError> {
        let tokens = tokenize(source)?;
        parse_expression(&tokens, arity)
    }

    /// Evaluates at `point`; any non-finite result is reported as an error.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, EvalError> {
        let value = self.eval_raw(point);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError { value })
        }
    }

    /// IEEE evaluation without the finiteness check. Out-of-range variables
    /// read as NaN.
    pub fn eval_raw(&self, point: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => point.get(*i).copied().unwrap_or(f64::NAN),
            Expr::Unary(op, child) => op.apply(child.eval_raw(point)),
            Expr::Binary(op, lhs, rhs) => op.apply(lhs.eval_raw(point), rhs.eval_raw(point)),
        }
    }

    /// Highest 1-based variable index referenced, 0 for closed expressions.
    pub fn max_variable(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Unary(_, child) => child.max_variable(),
            Expr::Binary(_, lhs, rhs) => lhs.max_variable().max(rhs.max_variable()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(c) if c.is_sign_negative() => PREC_UNARY,
            Expr::Const(_) | Expr::Var(_) => PREC_ATOM,
            Expr::Unary(UnaryOp::Neg, _) => PREC_UNARY,
            Expr::Unary(..) => PREC_ATOM,
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => PREC_SUM,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => PREC_PRODUCT,
            Expr::Binary(BinaryOp::Pow, ..) => PREC_POWER,
        }
    }
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POWER: u8 = 4;
const PREC_ATOM: u8 = 5;

struct Wrapped<'a>(&'a Expr, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Negative literals print bracketed so `(-2)^2` stays 4.
            Expr::Const(c) if c.is_sign_negative() => write!(f, "({c})"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Unary(UnaryOp::Neg, child) => {
                write!(f, "-{}", Wrapped(child, child.precedence() < PREC_UNARY))
            }
            Expr::Unary(op, child) => write!(f, "{}({child})", op.name()),
            Expr::Binary(BinaryOp::Pow, lhs, rhs) => write!(
                f,
                "{}^{}",
                Wrapped(lhs, lhs.precedence() <= PREC_POWER),
                Wrapped(rhs, rhs.precedence() < PREC_UNARY)
            ),
            Expr::Binary(op, lhs, rhs) => {
                let own = self.precedence();
                write!(
                    f,
                    "{} {} {}",
                    Wrapped(lhs, lhs.precedence() < own),
                    op.symbol(),
                    Wrapped(rhs, rhs.precedence() <= own)
                )
            }
        }
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Add, self, rhs)
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Sub, self, rhs)
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Mul, self, rhs)
    }
}

impl ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::binary(BinaryOp::Div, self, rhs)
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::unary(UnaryOp::Neg, self)
    }
}

/// Parses a whole token slice as one expression over `x1..x{arity}`.
pub fn parse_expression(tokens: &[Token], arity: usize) -> Result<Expr, ParseError> {
    let end = tokens
        .last()
        .map(|t| Position {
            line: t.position.line,
            column: t.position.column + t.lexeme.chars().count(),
        })
        .unwrap_or_default();
    let mut parser = ExprParser {
        tokens,
        pos: 0,
        end,
        arity,
    };
    let expr = parser.sum()?;
    match parser.peek() {
        None => Ok(expr),
        Some(t) => Err(ParseError::syntax(
            t.position,
            format!("unexpected {:?} after expression", t.lexeme),
        )),
    }
}

pub(crate) struct ExprParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: Position,
    arity: usize,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_operator(&self) -> Option<Operator> {
        match self.peek()?.kind {
            TokenKind::Operator(op) => Some(op),
            _ => None,
        }
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos)?;
        self.pos += 1;
        Some(t)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Some(op @ (Operator::Plus | Operator::Minus)) = self.peek_operator() {
            self.pos += 1;
            let rhs = self.product()?;
            let op = if op == Operator::Plus {
                BinaryOp::Add
            } else {
                BinaryOp::Sub
            };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op @ (Operator::Star | Operator::Slash)) = self.peek_operator() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == Operator::Star {
                BinaryOp::Mul
            } else {
                BinaryOp::Div
            };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek_operator() {
            Some(Operator::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Operator::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek_operator() == Some(Operator::Caret) {
            self.pos += 1;
            // exponent re-enters at the unary level: right-associative, and
            // `x^-2` is accepted
            let exponent = self.unary()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(token) = self.bump() else {
            return Err(ParseError::syntax(self.end, "unexpected end of expression"));
        };
        match token.kind {
            TokenKind::Number(v) => Ok(Expr::Const(v)),
            TokenKind::LeftParen => {
                let inner = self.sum()?;
                self.expect_close(token)?;
                Ok(inner)
            }
            TokenKind::Identifier => self.identifier(token),
            _ => Err(ParseError::syntax(
                token.position,
                format!("unexpected {:?}", token.lexeme),
            )),
        }
    }

    fn expect_close(&mut self, open: &Token) -> Result<(), ParseError> {
        match self.bump() {
            Some(t) if t.kind == TokenKind::RightParen => Ok(()),
            Some(t) => Err(ParseError::syntax(
                t.position,
                format!(
                    "expected ')' to close '(' at {}, found {:?}",
                    open.position, t.lexeme
                ),
            )),
            None => Err(ParseError::syntax(
                self.end,
                format!("unbalanced '(' at {}", open.position),
            )),
        }
    }

    fn identifier(&mut self, token: &Token) -> Result<Expr, ParseError> {
        let name = token.lexeme.as_str();
        if let Some(op) = UnaryOp::function(name) {
            match self.bump() {
                Some(open) if open.kind == TokenKind::LeftParen => {
                    let arg = self.sum()?;
                    self.expect_close(open)?;
                    return Ok(Expr::unary(op, arg));
                }
                _ => {
                    return Err(ParseError::syntax(
                        token.position,
                        format!("function {name} must be followed by '('"),
                    ))
                }
            }
        }
        match variable_index(name) {
            Some(k) if k <= self.arity => Ok(Expr::Var(k - 1)),
            Some(_) => Err(ParseError::syntax(
                token.position,
                format!(
                    "undeclared variable {name} (only x1..x{} exist)",
                    self.arity
                ),
            )),
            None => Err(ParseError::syntax(
                token.position,
                format!("unknown identifier {name}"),
            )),
        }
    }
}

/// `x7` -> `Some(7)`; anything else (including `x0`, `x07`) -> `None`.
pub(crate) fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
