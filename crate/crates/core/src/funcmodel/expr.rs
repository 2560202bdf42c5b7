use std::fmt;

use crate::error::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Abs,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
            BinaryOp::Min => "min",
            BinaryOp::Max => "max",
        }
    }
}

/// Syntax tree of a univariate real expression in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Variable,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn constant(value: f64) -> Self {
        Expr::Constant(value)
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Self {
        Expr::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Self {
        Expr::Binary(op, Box::new(left), Box::new(right))
    }

    /// Replaces every occurrence of the variable with `inner`, producing
    /// the tree of `self ∘ inner`.
    pub fn compose(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Constant(c) => Expr::Constant(*c),
            Expr::Variable => inner.clone(),
            Expr::Unary(op, child) => Expr::unary(*op, child.compose(inner)),
            Expr::Binary(op, l, r) => Expr::binary(*op, l.compose(inner), r.compose(inner)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Variable => 1,
            Expr::Unary(_, c) => 1 + c.node_count(),
            Expr::Binary(_, l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    /// Evaluates at `x`. Every intermediate value must be finite; domain
    /// violations are reported against the offending node rather than
    /// turning into NaN.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        let value = match self {
            Expr::Constant(c) => *c,
            Expr::Variable => x,
            Expr::Unary(op, child) => {
                let v = child.eval(x)?;
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Abs => v.abs(),
                    UnaryOp::Log => {
                        if v <= 0.0 {
                            return Err(self.domain_error("log of nonpositive value", x));
                        }
                        v.ln()
                    }
                    UnaryOp::Sqrt => {
                        if v < 0.0 {
                            return Err(self.domain_error("sqrt of negative value", x));
                        }
                        v.sqrt()
                    }
                }
            }
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(self.domain_error("division by zero", x));
                        }
                        a / b
                    }
                    BinaryOp::Pow => {
                        if a == 0.0 && b < 0.0 {
                            return Err(self.domain_error("zero raised to a negative power", x));
                        }
                        if a < 0.0 && b.fract() != 0.0 {
                            return Err(self.domain_error(
                                "negative base with non-integer exponent",
                                x,
                            ));
                        }
                        a.powf(b)
                    }
                    BinaryOp::Min => a.min(b),
                    BinaryOp::Max => a.max(b),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite {
                node: self.to_string(),
                x,
            })
        }
    }

    fn domain_error(&self, reason: &'static str, x: f64) -> EvalError {
        EvalError::Domain {
            node: self.to_string(),
            reason,
            x,
        }
    }
}

/// Fully parenthesized rendering that the parser reads back into the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) => {
                if *c < 0.0 {
                    write!(f, "(-{:?})", -c)
                } else {
                    write!(f, "{c:?}")
                }
            }
            Expr::Variable => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, c) => write!(f, "(-{c})"),
            Expr::Unary(op, c) => write!(f, "{}({c})", op.name()),
            Expr::Binary(op @ (BinaryOp::Min | BinaryOp::Max), l, r) => {
                write!(f, "{}({l}, {r})", op.symbol())
            }
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::Variable
    }

    #[test]
    fn arithmetic() {
        let sq = Expr::binary(BinaryOp::Pow, x(), Expr::constant(2.0));
        assert_eq!(sq.eval(3.0).unwrap(), 9.0);
        assert_eq!(Expr::unary(UnaryOp::Exp, x()).eval(0.0).unwrap(), 1.0);
        let m = Expr::binary(BinaryOp::Max, x(), Expr::constant(0.5));
        assert_eq!(m.eval(0.2).unwrap(), 0.5);
    }

    #[test]
    fn domain_errors_name_the_node() {
        let log = Expr::unary(UnaryOp::Log, x());
        match log.eval(0.0) {
            Err(EvalError::Domain { node, .. }) => assert_eq!(node, "log(x)"),
            other => panic!("expected domain error, got {other:?}"),
        }
        let inv = Expr::binary(BinaryOp::Div, Expr::constant(1.0), x());
        assert!(matches!(inv.eval(0.0), Err(EvalError::Domain { .. })));
        let root = Expr::unary(UnaryOp::Sqrt, x());
        assert!(root.eval(-1e-300).is_err());
        let neg_pow = Expr::binary(BinaryOp::Pow, x(), Expr::constant(-1.0));
        assert!(neg_pow.eval(0.0).is_err());
    }

    #[test]
    fn pow_with_negative_base() {
        let cube = Expr::binary(BinaryOp::Pow, x(), Expr::constant(3.0));
        assert_eq!(cube.eval(-2.0).unwrap(), -8.0);
        let half = Expr::binary(BinaryOp::Pow, x(), Expr::constant(0.5));
        assert!(half.eval(-2.0).is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let e = Expr::unary(UnaryOp::Exp, x());
        assert!(matches!(e.eval(1000.0), Err(EvalError::NonFinite { .. })));
    }

    #[test]
    fn compose_substitutes_variable() {
        let f = Expr::binary(BinaryOp::Pow, x(), Expr::constant(2.0));
        let phi = Expr::binary(BinaryOp::Add, x(), Expr::constant(1.0));
        let g = f.compose(&phi);
        assert_eq!(g.eval(2.0).unwrap(), 9.0);
        assert_eq!(g.to_string(), "((x + 1.0) ^ 2.0)");
    }
}
