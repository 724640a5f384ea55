//! One-variable expressions for `V(v)` and `ρ(x)`.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right associative, exponent must be constant
//! primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
//! func    := exp | ln | sin | cos | tanh | sqrt
//! ```
//!
//! Evaluation propagates a [`Jet3`] through the tree, so derivatives up to
//! third order are exact up to rounding.

mod jet;
mod parser;

use std::fmt;

use thiserror::Error;

pub use jet::Jet3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier '{name}' at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("domain error in '{node}' at {variable} = {at}: {message}")]
    Domain {
        node: String,
        variable: String,
        at: f64,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tanh,
    Sqrt,
}

impl Func {
    pub(crate) fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tanh" => Func::Tanh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, f64),
    Call(Func, Box<Node>),
}

/// A parsed expression in a single named variable. Immutable after parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
    variable: String,
}

impl Expression {
    pub fn parse(text: &str, variable: &str) -> Result<Expression, ExprError> {
        parse(text, variable)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn eval(&self, at: f64) -> Result<f64, ExprError> {
        Ok(self.eval_jet3(at)?.f)
    }

    pub fn eval_jet3(&self, at: f64) -> Result<Jet3, ExprError> {
        eval_jet3(self, at)
    }

    fn domain_error(&self, node: &Node, at: f64, message: &str) -> ExprError {
        ExprError::Domain {
            node: Printer { node, var: &self.variable }.to_string(),
            variable: self.variable.clone(),
            at,
            message: message.to_string(),
        }
    }

    fn eval_node(&self, node: &Node, at: f64) -> Result<Jet3, ExprError> {
        let j = match node {
            Node::Const(c) => Jet3::constant(*c),
            Node::Var => Jet3::variable(at),
            Node::Neg(a) => -self.eval_node(a, at)?,
            Node::Add(a, b) => self.eval_node(a, at)? + self.eval_node(b, at)?,
            Node::Sub(a, b) => self.eval_node(a, at)? - self.eval_node(b, at)?,
            Node::Mul(a, b) => self.eval_node(a, at)? * self.eval_node(b, at)?,
            Node::Div(a, b) => {
                let num = self.eval_node(a, at)?;
                let den = self.eval_node(b, at)?;
                if den.f == 0.0 {
                    return Err(self.domain_error(node, at, "division by zero"));
                }
                num / den
            }
            Node::Pow(base, p) => {
                let b = self.eval_node(base, at)?;
                let integer = p.fract() == 0.0;
                if !integer && b.f <= 0.0 {
                    return Err(self.domain_error(node, at, "non-integer power of a non-positive base"));
                }
                if integer && *p < 0.0 && b.f == 0.0 {
                    return Err(self.domain_error(node, at, "negative power of zero"));
                }
                b.powf(*p)
            }
            Node::Call(func, arg) => {
                let a = self.eval_node(arg, at)?;
                match func {
                    Func::Exp => a.exp(),
                    Func::Ln => {
                        if a.f <= 0.0 {
                            return Err(self.domain_error(node, at, "logarithm of a non-positive value"));
                        }
                        a.ln()
                    }
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tanh => a.tanh(),
                    Func::Sqrt => {
                        if a.f <= 0.0 {
                            return Err(self.domain_error(
                                node,
                                at,
                                "square root needs a positive argument for its derivatives",
                            ));
                        }
                        a.powf(0.5)
                    }
                }
            }
        };
        if !(j.f.is_finite() && j.d1.is_finite() && j.d2.is_finite() && j.d3.is_finite()) {
            return Err(self.domain_error(node, at, "non-finite result"));
        }
        Ok(j)
    }
}

/// Parses `text` as an expression in `variable`.
pub fn parse(text: &str, variable: &str) -> Result<Expression, ExprError> {
    let root = parser::Parser::new(text, variable).parse()?;
    Ok(Expression {
        root,
        variable: variable.to_string(),
    })
}

/// Value and first three derivatives of `e` at `at`.
pub fn eval_jet3(e: &Expression, at: f64) -> Result<Jet3, ExprError> {
    e.eval_node(&e.root, at)
}

/// Fully parenthesised text for `node`; parsing it gives back the same tree.
pub fn print_node(node: &Node, variable: &str) -> String {
    Printer { node, var: variable }.to_string()
}

struct Printer<'a> {
    node: &'a Node,
    var: &'a str,
}

impl Printer<'_> {
    fn child<'b>(&'b self, node: &'b Node) -> Printer<'b> {
        Printer { node, var: self.var }
    }
}

impl fmt::Display for Printer<'_> {
    // Fully parenthesised, so printing then parsing gives back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(f, "(-{:?})", -c)
                } else {
                    write!(f, "{c:?}")
                }
            }
            Node::Var => f.write_str(self.var),
            Node::Neg(a) => write!(f, "(-{})", self.child(a)),
            Node::Add(a, b) => write!(f, "({} + {})", self.child(a), self.child(b)),
            Node::Sub(a, b) => write!(f, "({} - {})", self.child(a), self.child(b)),
            Node::Mul(a, b) => write!(f, "({} * {})", self.child(a), self.child(b)),
            Node::Div(a, b) => write!(f, "({} / {})", self.child(a), self.child(b)),
            Node::Pow(a, p) => {
                if *p < 0.0 {
                    write!(f, "({}^(-{:?}))", self.child(a), -p)
                } else {
                    write!(f, "({}^{:?})", self.child(a), p)
                }
            }
            Node::Call(func, a) => write!(f, "{}({})", func.name(), self.child(a)),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            node: &self.root,
            var: &self.variable,
        }
        .fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(text: &str, at: f64) -> Jet3 {
        parse(text, "v").unwrap().eval_jet3(at).unwrap()
    }

    #[test]
    fn identity_jet() {
        assert_eq!(parse("v", "v").unwrap().root(), &Node::Var);
        assert_eq!(jet("v", 3.7), Jet3::new(3.7, 1.0, 0.0, 0.0));
    }

    #[test]
    fn exp_two_v() {
        let e = parse("exp(2*v)", "v").unwrap();
        assert_eq!(
            e.root(),
            &Node::Call(
                Func::Exp,
                Box::new(Node::Mul(Box::new(Node::Const(2.0)), Box::new(Node::Var)))
            )
        );
        assert_eq!(e.eval_jet3(0.0).unwrap(), Jet3::new(1.0, 2.0, 4.0, 8.0));
    }

    #[test]
    fn sine_maclaurin() {
        assert_eq!(jet("sin(v)", 0.0), Jet3::new(0.0, 1.0, -0.0, -1.0));
    }

    #[test]
    fn unbalanced_parenthesis() {
        match parse("sin(", "v").unwrap_err() {
            ExprError::Syntax { position, .. } => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(
            parse("2*x + v", "v").unwrap_err(),
            ExprError::UnknownIdentifier {
                name: "x".into(),
                position: 2
            }
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // -v^2 is -(v^2); 2^3^2 is 2^(3^2); 1-2-3 is (1-2)-3
        assert_eq!(jet("-v^2", 3.0).f, -9.0);
        assert_eq!(jet("2^3^2", 0.0).f, 512.0);
        assert_eq!(jet("1 - 2 - 3", 0.0).f, -4.0);
        assert_eq!(jet("8 / 4 / 2", 0.0).f, 1.0);
        assert_eq!(jet("2 * pi", 0.0).f, 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn variable_exponent_is_rejected() {
        assert!(matches!(parse("2^v", "v"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn domain_errors_name_the_node() {
        let e = parse("1 + ln(v - 1)", "v").unwrap();
        match e.eval_jet3(0.5).unwrap_err() {
            ExprError::Domain { node, .. } => assert_eq!(node, "ln((v - 1.0))"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("1/v", "v").unwrap().eval_jet3(0.0),
            Err(ExprError::Domain { .. })
        ));
        assert!(matches!(
            parse("sqrt(v)", "v").unwrap().eval_jet3(-1.0),
            Err(ExprError::Domain { .. })
        ));
    }

    #[test]
    fn print_then_parse_round_trips() {
        for text in [
            "v",
            "exp(-(v/2)^2)/(2*sqrt(pi))",
            "v + 0.1*sin(v)",
            "-v^-1.5 + tanh(3*v) - cos(v)/ln(v+2)",
            "1e-3*v^3 - 2.5e10",
        ] {
            let e = parse(text, "v").unwrap();
            let again = parse(&e.to_string(), "v").unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }
}
