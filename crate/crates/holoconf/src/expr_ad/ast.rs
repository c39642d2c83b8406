use std::fmt;

use num_complex::Complex64;

/// Elementary holomorphic functions recognised by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Expression tree. Variables are zero-based indices into the chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Complex64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn constant(c: impl Into<Complex64>) -> Node {
        Node::Const(c.into())
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_var(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    fn as_const(&self) -> Option<Complex64> {
        match self {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    pub(crate) fn add(a: Node, b: Node) -> Node {
        if a.is_zero() {
            b
        } else if b.is_zero() {
            a
        } else {
            Node::Add(Box::new(a), Box::new(b))
        }
    }

    pub(crate) fn sub(a: Node, b: Node) -> Node {
        if b.is_zero() {
            a
        } else if a.is_zero() {
            Node::neg(b)
        } else {
            Node::Sub(Box::new(a), Box::new(b))
        }
    }

    pub(crate) fn mul(a: Node, b: Node) -> Node {
        if a.is_zero() || b.is_zero() {
            Node::Const(Complex64::new(0.0, 0.0))
        } else if a.is_one() {
            b
        } else if b.is_one() {
            a
        } else {
            Node::Mul(Box::new(a), Box::new(b))
        }
    }

    pub(crate) fn div(a: Node, b: Node) -> Node {
        if a.is_zero() {
            Node::Const(Complex64::new(0.0, 0.0))
        } else if b.is_one() {
            a
        } else {
            Node::Div(Box::new(a), Box::new(b))
        }
    }

    pub(crate) fn neg(a: Node) -> Node {
        match a {
            Node::Const(c) => Node::Const(-c),
            Node::Neg(inner) => *inner,
            other => Node::Neg(Box::new(other)),
        }
    }

    /// Symbolic holomorphic partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Node {
        let zero = || Node::Const(Complex64::new(0.0, 0.0));
        match self {
            Node::Const(_) => zero(),
            Node::Var(i) => {
                if *i == var {
                    Node::Const(Complex64::new(1.0, 0.0))
                } else {
                    zero()
                }
            }
            Node::Neg(a) => Node::neg(a.derivative(var)),
            Node::Add(a, b) => Node::add(a.derivative(var), b.derivative(var)),
            Node::Sub(a, b) => Node::sub(a.derivative(var), b.derivative(var)),
            Node::Mul(a, b) => Node::add(
                Node::mul(a.derivative(var), (**b).clone()),
                Node::mul((**a).clone(), b.derivative(var)),
            ),
            Node::Div(a, b) => {
                // (a'b - ab') / b^2
                let num = Node::sub(
                    Node::mul(a.derivative(var), (**b).clone()),
                    Node::mul((**a).clone(), b.derivative(var)),
                );
                Node::div(num, Node::Pow(b.clone(), 2))
            }
            Node::Pow(a, k) => {
                let da = a.derivative(var);
                if da.is_zero() || *k == 0 {
                    return zero();
                }
                let lower = if *k == 2 {
                    (**a).clone()
                } else {
                    Node::Pow(a.clone(), k - 1)
                };
                Node::mul(
                    Node::mul(Node::Const(Complex64::new(*k as f64, 0.0)), lower),
                    da,
                )
            }
            Node::Call(f, a) => {
                let da = a.derivative(var);
                if da.is_zero() {
                    return zero();
                }
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Log => Node::div(Node::Const(Complex64::new(1.0, 0.0)), (**a).clone()),
                    Func::Sin => Node::Call(Func::Cos, a.clone()),
                    Func::Cos => Node::neg(Node::Call(Func::Sin, a.clone())),
                    Func::Sqrt => Node::div(
                        Node::Const(Complex64::new(0.5, 0.0)),
                        self.clone(),
                    ),
                };
                Node::mul(outer, da)
            }
        }
    }

    /// Replace every variable `z_k` by `subs[k]`.
    pub fn substitute(&self, subs: &[Node]) -> Node {
        match self {
            Node::Const(c) => Node::Const(*c),
            Node::Var(i) => subs[*i].clone(),
            Node::Neg(a) => Node::Neg(Box::new(a.substitute(subs))),
            Node::Add(a, b) => Node::Add(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Node::Sub(a, b) => Node::Sub(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Node::Mul(a, b) => Node::Mul(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Node::Div(a, b) => Node::Div(Box::new(a.substitute(subs)), Box::new(b.substitute(subs))),
            Node::Pow(a, k) => Node::Pow(Box::new(a.substitute(subs)), *k),
            Node::Call(f, a) => Node::Call(*f, Box::new(a.substitute(subs))),
        }
    }

    pub(crate) fn write(&self, out: &mut dyn fmt::Write, names: &[String]) -> fmt::Result {
        match self {
            Node::Const(c) => write_const(out, *c),
            Node::Var(i) => match names.get(*i) {
                Some(name) => out.write_str(name),
                None => write!(out, "z{}", i + 1),
            },
            Node::Neg(a) => {
                out.write_str("(-")?;
                a.write(out, names)?;
                out.write_str(")")
            }
            Node::Add(a, b) => binary(out, names, a, " + ", b),
            Node::Sub(a, b) => binary(out, names, a, " - ", b),
            Node::Mul(a, b) => binary(out, names, a, " * ", b),
            Node::Div(a, b) => binary(out, names, a, " / ", b),
            Node::Pow(a, k) => {
                out.write_str("(")?;
                a.write(out, names)?;
                write!(out, "^{})", k)
            }
            Node::Call(f, a) => {
                write!(out, "{}(", f.name())?;
                a.write(out, names)?;
                out.write_str(")")
            }
        }
    }
}

fn binary(out: &mut dyn fmt::Write, names: &[String], a: &Node, op: &str, b: &Node) -> fmt::Result {
    out.write_str("(")?;
    a.write(out, names)?;
    out.write_str(op)?;
    b.write(out, names)?;
    out.write_str(")")
}

fn write_const(out: &mut dyn fmt::Write, c: Complex64) -> fmt::Result {
    let real = |out: &mut dyn fmt::Write, x: f64, suffix: &str| -> fmt::Result {
        if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
            write!(out, "(-{:?}{})", -x, suffix)
        } else {
            write!(out, "{:?}{}", x, suffix)
        }
    };
    if c.im == 0.0 {
        real(out, c.re, "")
    } else if c.re == 0.0 {
        real(out, c.im, "i")
    } else {
        out.write_str("(")?;
        real(out, c.re, "")?;
        out.write_str(" + ")?;
        real(out, c.im, "i")?;
        out.write_str(")")
    }
}
