use num_complex::Complex64;

use super::ast::{Func, Node};
use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
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

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ExprError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ExprError::Syntax {
            offset: start,
            message: format!("unexpected character '{ch}'"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ExprError> {
        let digits = |lx: &mut Lexer| {
            let s = lx.pos;
            while matches!(lx.peek(), Some(b) if b.is_ascii_digit()) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut count = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(ExprError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("malformed number '{text}'"),
        })?;
        let imaginary = if self.peek() == Some(b'i')
            && !matches!(self.src.as_bytes().get(self.pos + 1), Some(b) if b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
            true
        } else {
            false
        };
        Ok((Tok::Num(value, imaginary), start))
    }
}

pub(super) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    pub(super) fn run(src: &str, vars: &'a [String]) -> Result<Node, ExprError> {
        if src.trim().is_empty() {
            return Err(ExprError::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let mut p = Parser {
            toks: Lexer::tokens(src)?,
            at: 0,
            vars,
        };
        let node = p.expr()?;
        match p.peek() {
            Tok::End => Ok(node),
            _ => Err(p.error("unexpected token")),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
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
                Tok::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        match self.bump() {
            Tok::Num(v, false) if v.fract() == 0.0 && v <= i32::MAX as f64 => {
                let k = v as i32;
                Ok(Node::Pow(Box::new(base), if negative { -k } else { k }))
            }
            _ => Err(ExprError::Syntax {
                offset: at,
                message: "exponent must be an integer literal".into(),
            }),
        }
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v, false) => Ok(Node::Const(Complex64::new(v, 0.0))),
            Tok::Num(v, true) => Ok(Node::Const(Complex64::new(0.0, v))),
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    return Err(ExprError::Syntax {
                        offset: self.toks[self.at.saturating_sub(1)].1,
                        message: "expected ')'".into(),
                    });
                }
                Ok(inner)
            }
            Tok::Ident(name) => {
                if name == "i" {
                    return Ok(Node::Const(Complex64::new(0.0, 1.0)));
                }
                if let Some(f) = Func::from_name(&name) {
                    if self.bump() != Tok::LParen {
                        return Err(ExprError::Syntax {
                            offset: at + name.len(),
                            message: format!("expected '(' after {name}"),
                        });
                    }
                    let arg = self.expr()?;
                    if self.bump() != Tok::RParen {
                        return Err(ExprError::Syntax {
                            offset: self.toks[self.at.saturating_sub(1)].1,
                            message: "expected ')'".into(),
                        });
                    }
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Node::Var(k));
                }
                if let Some(k) = indexed_name(&name) {
                    if self.vars.iter().any(|v| indexed_name(v).is_some() && v.starts_with(&name[..1])) {
                        return Err(ExprError::VariableOutOfRange {
                            offset: at,
                            name,
                            index: k,
                            dim: self.vars.len(),
                        });
                    }
                }
                Err(ExprError::Syntax {
                    offset: at,
                    message: format!("unknown identifier '{name}'"),
                })
            }
            Tok::End => Err(ExprError::Syntax {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            _ => Err(ExprError::Syntax {
                offset: at,
                message: "expected a number, variable, function or '('".into(),
            }),
        }
    }
}

fn indexed_name(name: &str) -> Option<usize> {
    let split = name.find(|c: char| c.is_ascii_digit())?;
    if split == 0 {
        return None;
    }
    name[split..].parse().ok()
}
