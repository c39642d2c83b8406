//! Holomorphic expression language with nested forward-mode differentiation.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" [ "-" ] integer ] ;
//! primary = number [ "i" ] | "i" | variable | func "(" expr ")" | "(" expr ")" ;
//! func    = "exp" | "log" | "sin" | "cos" | "sqrt" ;
//! ```
//!
//! Variables default to `z1..zn`; callers may supply other names. `log` and
//! `sqrt` use the principal branch and refuse to evaluate at zero.

mod ast;
mod dual;
mod jet;
mod parse;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use ast::{Func, Node};
pub use dual::{Dual, Dual2, Dual3, Scalar};
pub use jet::{Jet3, JetOrder};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable {name} at byte {offset} is out of range (index {index}, dimension {dim})")]
    VariableOutOfRange {
        offset: usize,
        name: String,
        index: usize,
        dim: usize,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} evaluated at a branch point")]
    BranchPoint(&'static str),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
    #[error("point has {got} coordinates, expression expects {want}")]
    Arity { got: usize, want: usize },
    #[error("finite-difference step {0} outside [1e-6, 1e-2]")]
    InvalidStep(f64),
}

/// A parsed holomorphic scalar expression in a fixed number of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloExpr {
    node: Node,
    vars: Vec<String>,
}

pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("z{k}")).collect()
}

/// Parse `src` over the variables `z1..zn`.
pub fn parse(src: &str, n: usize) -> Result<HoloExpr, ExprError> {
    parse_with_vars(src, &default_vars(n))
}

/// Parse `src` with explicit variable names (e.g. `s1, s2` for a surface chart).
pub fn parse_with_vars(src: &str, vars: &[String]) -> Result<HoloExpr, ExprError> {
    let node = parse::Parser::run(src, vars)?;
    Ok(HoloExpr {
        node,
        vars: vars.to_vec(),
    })
}

impl HoloExpr {
    pub fn from_node(node: Node, vars: &[String]) -> HoloExpr {
        debug_assert!(node.max_var().map_or(true, |m| m < vars.len()));
        HoloExpr {
            node,
            vars: vars.to_vec(),
        }
    }

    pub fn constant(c: Complex64, vars: &[String]) -> HoloExpr {
        HoloExpr::from_node(Node::Const(c), vars)
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    fn check_point(&self, p: &[Complex64]) -> Result<(), ExprError> {
        if p.len() != self.vars.len() {
            return Err(ExprError::Arity {
                got: p.len(),
                want: self.vars.len(),
            });
        }
        Ok(())
    }

    /// Plain complex evaluation.
    pub fn eval(&self, p: &[Complex64]) -> Result<Complex64, ExprError> {
        self.check_point(p)?;
        let v = self.eval_generic(p)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFinite("evaluation"))
        }
    }

    /// Evaluate over any [`Scalar`], e.g. nested dual numbers.
    pub fn eval_generic<T: Scalar>(&self, vars: &[T]) -> Result<T, ExprError> {
        eval_node(&self.node, vars)
    }

    /// Value and derivatives up to order three by nested dual numbers.
    pub fn eval_jet3(&self, p: &[Complex64]) -> Result<Jet3, ExprError> {
        jet::eval_jet(self, p, JetOrder::Three)
    }

    /// Same as [`eval_jet3`](Self::eval_jet3) but only up to `order`; higher entries are zero.
    pub fn eval_jet(&self, p: &[Complex64], order: JetOrder) -> Result<Jet3, ExprError> {
        jet::eval_jet(self, p, order)
    }

    /// Finite-difference approximation of the same jet.
    pub fn fd_oracle_jet(&self, p: &[Complex64], step: f64) -> Result<Jet3, ExprError> {
        jet::fd_jet(self, p, step)
    }

    /// Symbolic partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> HoloExpr {
        HoloExpr::from_node(self.node.derivative(var), &self.vars)
    }

    /// Pull back through `subs`: every variable `k` of `self` becomes `subs[k]`.
    pub fn substitute(&self, subs: &[HoloExpr]) -> HoloExpr {
        assert_eq!(subs.len(), self.vars.len(), "substitution arity");
        let vars = subs.first().map(|s| s.vars.clone()).unwrap_or_default();
        let nodes: Vec<Node> = subs.iter().map(|s| s.node.clone()).collect();
        HoloExpr {
            node: self.node.substitute(&nodes),
            vars,
        }
    }

    pub fn add(&self, other: &HoloExpr) -> HoloExpr {
        HoloExpr::from_node(Node::add(self.node.clone(), other.node.clone()), &self.vars)
    }

    pub fn sub(&self, other: &HoloExpr) -> HoloExpr {
        HoloExpr::from_node(Node::sub(self.node.clone(), other.node.clone()), &self.vars)
    }

    pub fn mul(&self, other: &HoloExpr) -> HoloExpr {
        HoloExpr::from_node(Node::mul(self.node.clone(), other.node.clone()), &self.vars)
    }

    pub fn scale(&self, c: Complex64) -> HoloExpr {
        HoloExpr::from_node(Node::mul(Node::Const(c), self.node.clone()), &self.vars)
    }

    pub fn exp(&self) -> HoloExpr {
        HoloExpr::from_node(Node::Call(Func::Exp, Box::new(self.node.clone())), &self.vars)
    }
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.node.write(f, &self.vars)
    }
}

fn eval_node<T: Scalar>(node: &Node, vars: &[T]) -> Result<T, ExprError> {
    Ok(match node {
        Node::Const(c) => T::lift(*c),
        Node::Var(i) => vars[*i],
        Node::Neg(a) => -eval_node(a, vars)?,
        Node::Add(a, b) => eval_node(a, vars)? + eval_node(b, vars)?,
        Node::Sub(a, b) => eval_node(a, vars)? - eval_node(b, vars)?,
        Node::Mul(a, b) => eval_node(a, vars)? * eval_node(b, vars)?,
        Node::Div(a, b) => {
            let num = eval_node(a, vars)?;
            let den = eval_node(b, vars)?;
            if den.base() == Complex64::new(0.0, 0.0) {
                return Err(ExprError::DivisionByZero);
            }
            num / den
        }
        Node::Pow(a, k) => {
            let base = eval_node(a, vars)?;
            if *k >= 0 {
                base.powi(*k as u32)
            } else {
                if base.base() == Complex64::new(0.0, 0.0) {
                    return Err(ExprError::DivisionByZero);
                }
                T::lift(Complex64::new(1.0, 0.0)) / base.powi(k.unsigned_abs())
            }
        }
        Node::Call(f, a) => {
            let x = eval_node(a, vars)?;
            match f {
                Func::Exp => x.exp(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Log => {
                    if x.base() == Complex64::new(0.0, 0.0) {
                        return Err(ExprError::BranchPoint("log"));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x.base() == Complex64::new(0.0, 0.0) {
                        return Err(ExprError::BranchPoint("sqrt"));
                    }
                    x.sqrt()
                }
            }
        }
    })
}
