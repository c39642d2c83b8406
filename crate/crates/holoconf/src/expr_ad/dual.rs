use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Number system the expression evaluator runs over.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(c: Complex64) -> Self;
    /// The plain complex value with every infinitesimal dropped.
    fn base(&self) -> Complex64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;

    fn powi(self, k: u32) -> Self {
        let mut acc = Self::lift(Complex64::new(1.0, 0.0));
        let mut sq = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * sq;
            }
            k >>= 1;
            if k > 0 {
                sq = sq * sq;
            }
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn lift(c: Complex64) -> Self {
        c
    }
    fn base(&self) -> Complex64 {
        *self
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
}

/// First-order dual number `re + eps·ε` with ε² = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    fn chain(self, value: T, slope: T) -> Self {
        Dual {
            re: value,
            eps: slope * self.eps,
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.re / o.re;
        Dual::new(q, (self.eps - q * o.eps) / o.re)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn lift(c: Complex64) -> Self {
        Dual::new(T::lift(c), T::lift(Complex64::new(0.0, 0.0)))
    }
    fn base(&self) -> Complex64 {
        self.re.base()
    }
    fn exp(self) -> Self {
        let e = self.re.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        let one = T::lift(Complex64::new(1.0, 0.0));
        self.chain(self.re.ln(), one / self.re)
    }
    fn sin(self) -> Self {
        self.chain(self.re.sin(), self.re.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.re.cos(), -self.re.sin())
    }
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        let half = T::lift(Complex64::new(0.5, 0.0));
        self.chain(s, half / s)
    }
}

pub type Dual2 = Dual<Dual<Complex64>>;
pub type Dual3 = Dual<Dual<Dual<Complex64>>>;
