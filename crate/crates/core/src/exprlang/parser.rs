use super::{ExprError, Func, Node};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

pub(super) struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    variable: &'a str,
    text: &'a str,
}

fn syntax(position: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number '{lit}'")))?;
                if !value.is_finite() {
                    return Err(syntax(start, format!("number '{lit}' is out of range")));
                }
                out.push((Token::Number(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character '{ch}'")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

/// Folds a variable-free subtree to its value.
fn constant_value(node: &Node) -> Option<f64> {
    Some(match node {
        Node::Const(c) => *c,
        Node::Var => return None,
        Node::Neg(a) => -constant_value(a)?,
        Node::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Node::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Node::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Node::Div(a, b) => constant_value(a)? / constant_value(b)?,
        Node::Pow(a, p) => constant_value(a)?.powf(*p),
        Node::Call(f, a) => {
            let x = constant_value(a)?;
            match f {
                Func::Exp => x.exp(),
                Func::Ln => x.ln(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tanh => x.tanh(),
                Func::Sqrt => x.sqrt(),
            }
        }
    })
}

impl<'a> Parser<'a> {
    pub(super) fn new(text: &'a str, variable: &'a str) -> Self {
        Parser {
            tokens: Vec::new(),
            pos: 0,
            variable,
            text,
        }
    }

    pub(super) fn parse(mut self) -> Result<Node, ExprError> {
        if self.text.trim().is_empty() {
            return Err(syntax(0, "empty expression"));
        }
        self.tokens = tokenize(self.text)?;
        let node = self.expr()?;
        match self.peek() {
            Token::End => Ok(node),
            Token::RParen => Err(syntax(self.offset(), "unmatched ')'")),
            _ => Err(syntax(self.offset(), "expected an operator")),
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            Token::RParen => {
                self.bump();
                Ok(())
            }
            Token::End => Err(syntax(self.offset(), "missing ')'")),
            _ => Err(syntax(self.offset(), "expected ')'")),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Token::Slash => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.unary()?;
        match constant_value(&exponent) {
            Some(p) if p.is_finite() => Ok(Node::Pow(Box::new(base), p)),
            Some(_) => Err(syntax(at, "exponent is not a finite number")),
            None => Err(syntax(at, "exponent must be constant")),
        }
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Token::Number(v) => Ok(Node::Const(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if name == self.variable {
                    return Ok(Node::Var);
                }
                if name == "pi" {
                    return Ok(Node::Const(std::f64::consts::PI));
                }
                match Func::from_name(&name) {
                    Some(func) => {
                        if *self.peek() != Token::LParen {
                            return Err(syntax(self.offset(), format!("expected '(' after {name}")));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        self.expect_rparen()?;
                        Ok(Node::Call(func, Box::new(arg)))
                    }
                    None => Err(ExprError::UnknownIdentifier { name, position: at }),
                }
            }
            Token::End => Err(syntax(at, "unexpected end of input")),
            Token::RParen => Err(syntax(at, "unexpected ')'")),
            _ => Err(syntax(at, "expected a number, variable, function or '('")),
        }
    }
}
