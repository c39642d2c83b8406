//! Truncated multivariate Taylor jets (value plus partials up to order three).
//!
//! Entries are partial derivatives, not Taylor coefficients, so products follow
//! the Leibniz rule without factorials.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::expr_ad::Jet3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Taylor {
    pub n: usize,
    pub order: usize,
    pub v: Complex64,
    pub d1: Vec<Complex64>,
    pub d2: Vec<Complex64>,
    pub d3: Vec<Complex64>,
}

impl Taylor {
    pub fn constant(n: usize, order: usize, v: Complex64) -> Taylor {
        Taylor {
            n,
            order,
            v,
            d1: vec![ZERO; if order >= 1 { n } else { 0 }],
            d2: vec![ZERO; if order >= 2 { n * n } else { 0 }],
            d3: vec![ZERO; if order >= 3 { n * n * n } else { 0 }],
        }
    }

    pub fn zero(n: usize, order: usize) -> Taylor {
        Taylor::constant(n, order, ZERO)
    }

    pub fn from_jet(j: &Jet3, order: usize) -> Taylor {
        let mut t = Taylor::zero(j.n, order);
        t.v = j.value;
        if order >= 1 {
            t.d1.copy_from_slice(&j.first);
        }
        if order >= 2 {
            t.d2.copy_from_slice(&j.second);
        }
        if order >= 3 {
            t.d3.copy_from_slice(&j.third);
        }
        t
    }

    pub fn truncate(&self, order: usize) -> Taylor {
        let order = order.min(self.order);
        let mut t = Taylor::zero(self.n, order);
        t.v = self.v;
        if order >= 1 {
            t.d1.copy_from_slice(&self.d1);
        }
        if order >= 2 {
            t.d2.copy_from_slice(&self.d2);
        }
        if order >= 3 {
            t.d3.copy_from_slice(&self.d3);
        }
        t
    }

    pub fn i2(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    pub fn i3(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Partial derivative along coordinate `m`; the order drops by one.
    pub fn partial(&self, m: usize) -> Taylor {
        assert!(self.order >= 1, "partial of an order-0 jet");
        let n = self.n;
        let mut t = Taylor::zero(n, self.order - 1);
        t.v = self.d1[m];
        if self.order >= 2 {
            for i in 0..n {
                t.d1[i] = self.d2[self.i2(m, i)];
            }
        }
        if self.order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    t.d2[i * n + j] = self.d3[self.i3(m, i, j)];
                }
            }
        }
        t
    }

    pub fn scale(&self, c: Complex64) -> Taylor {
        let mut t = self.clone();
        t.v *= c;
        t.d1.iter_mut().for_each(|x| *x *= c);
        t.d2.iter_mut().for_each(|x| *x *= c);
        t.d3.iter_mut().for_each(|x| *x *= c);
        t
    }

    fn zip(&self, o: &Taylor, f: impl Fn(Complex64, Complex64) -> Complex64) -> Taylor {
        let order = self.order.min(o.order);
        let mut t = Taylor::zero(self.n, order);
        t.v = f(self.v, o.v);
        for (k, x) in t.d1.iter_mut().enumerate() {
            *x = f(self.d1[k], o.d1[k]);
        }
        for (k, x) in t.d2.iter_mut().enumerate() {
            *x = f(self.d2[k], o.d2[k]);
        }
        for (k, x) in t.d3.iter_mut().enumerate() {
            *x = f(self.d3[k], o.d3[k]);
        }
        t
    }

    /// Leibniz product truncated to `min(order, self.order, o.order)`.
    pub fn mul_to(&self, o: &Taylor, order: usize) -> Taylor {
        let order = order.min(self.order).min(o.order);
        let n = self.n;
        let mut t = Taylor::zero(n, order);
        t.v = self.v * o.v;
        if order >= 1 {
            for i in 0..n {
                t.d1[i] = self.d1[i] * o.v + self.v * o.d1[i];
            }
        }
        if order >= 2 {
            for i in 0..n {
                for j in 0..n {
                    let ij = i * n + j;
                    t.d2[ij] = self.d2[ij] * o.v
                        + self.d1[i] * o.d1[j]
                        + self.d1[j] * o.d1[i]
                        + self.v * o.d2[ij];
                }
            }
        }
        if order >= 3 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let ijk = (i * n + j) * n + k;
                        t.d3[ijk] = self.d3[ijk] * o.v
                            + self.d2[i * n + j] * o.d1[k]
                            + self.d2[i * n + k] * o.d1[j]
                            + self.d2[j * n + k] * o.d1[i]
                            + self.d1[i] * o.d2[j * n + k]
                            + self.d1[j] * o.d2[i * n + k]
                            + self.d1[k] * o.d2[i * n + j]
                            + self.v * o.d3[ijk];
                    }
                }
            }
        }
        t
    }

    pub fn add_assign_mul(&mut self, a: &Taylor, b: &Taylor) {
        let prod = a.mul_to(b, self.order);
        *self = &*self + &prod;
    }
}

impl Add for &Taylor {
    type Output = Taylor;
    fn add(self, o: &Taylor) -> Taylor {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &Taylor {
    type Output = Taylor;
    fn sub(self, o: &Taylor) -> Taylor {
        self.zip(o, |a, b| a - b)
    }
}

impl Mul for &Taylor {
    type Output = Taylor;
    fn mul(self, o: &Taylor) -> Taylor {
        self.mul_to(o, usize::MAX)
    }
}

impl Neg for &Taylor {
    type Output = Taylor;
    fn neg(self) -> Taylor {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Square matrix of jets, row-major.
#[derive(Debug, Clone)]
pub(crate) struct TaylorMat {
    pub dim: usize,
    pub e: Vec<Taylor>,
}

impl TaylorMat {
    pub fn get(&self, i: usize, j: usize) -> &Taylor {
        &self.e[i * self.dim + j]
    }

    pub fn values(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).v)
    }

    pub fn mul(&self, o: &TaylorMat, order: usize) -> TaylorMat {
        let d = self.dim;
        let n = self.e[0].n;
        let mut e = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Taylor::zero(n, order);
                for k in 0..d {
                    acc.add_assign_mul(self.get(i, k), o.get(k, j));
                }
                e.push(acc);
            }
        }
        TaylorMat { dim: d, e }
    }

    /// Inverse by a Neumann series around the value; `None` if the value is singular.
    pub fn inverse(&self, order: usize) -> Option<TaylorMat> {
        let d = self.dim;
        let n = self.e[0].n;
        let x0 = self.values().try_inverse()?;
        let constant = TaylorMat {
            dim: d,
            e: (0..d * d)
                .map(|k| Taylor::constant(n, order, x0[(k / d, k % d)]))
                .collect(),
        };
        let delta = TaylorMat {
            dim: d,
            e: self
                .e
                .iter()
                .map(|t| {
                    let mut t = t.truncate(order);
                    t.v = ZERO;
                    t
                })
                .collect(),
        };
        let mut sum = constant.clone();
        let mut term = constant.clone();
        for _ in 0..order {
            term = term.mul(&delta, order).mul(&constant, order);
            for t in term.e.iter_mut() {
                *t = -&*t;
            }
            for (s, t) in sum.e.iter_mut().zip(&term.e) {
                *s = &*s + t;
            }
        }
        Some(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr_ad::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_matches_jet_of_product() {
        let p = [c(0.3, -0.2), c(0.1, 0.5)];
        let a = parse("exp(z1)*z2 + z1^3", 2).unwrap();
        let b = parse("sin(z1*z2) + 2", 2).unwrap();
        let ab = parse("(exp(z1)*z2 + z1^3)*(sin(z1*z2) + 2)", 2).unwrap();
        let ta = Taylor::from_jet(&a.eval_jet3(&p).unwrap(), 3);
        let tb = Taylor::from_jet(&b.eval_jet3(&p).unwrap(), 3);
        let tab = Taylor::from_jet(&ab.eval_jet3(&p).unwrap(), 3);
        let prod = &ta * &tb;
        let diff = &prod - &tab;
        let scale = tab.d3.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for x in std::iter::once(&diff.v).chain(&diff.d1).chain(&diff.d2).chain(&diff.d3) {
            assert!(x.norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn partial_lowers_order() {
        let p = [c(0.3, -0.2), c(0.1, 0.5)];
        let f = parse("exp(z1*z2)", 2).unwrap();
        let t = Taylor::from_jet(&f.eval_jet3(&p).unwrap(), 3);
        let d = t.partial(1);
        let g = Taylor::from_jet(&f.derivative(1).eval_jet3(&p).unwrap(), 2);
        assert_eq!(d.order, 2);
        assert!((d.v - g.v).norm() < 1e-14);
        for (x, y) in d.d2.iter().zip(&g.d2) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn neumann_inverse() {
        let p = [c(0.2, 0.1), c(-0.1, 0.3)];
        let src = ["1 + z1^2", "z1*z2", "z1*z2", "2 + sin(z2)"];
        let m = TaylorMat {
            dim: 2,
            e: src
                .iter()
                .map(|s| Taylor::from_jet(&parse(s, 2).unwrap().eval_jet3(&p).unwrap(), 3))
                .collect(),
        };
        let inv = m.inverse(3).unwrap();
        let id = m.mul(&inv, 3);
        for i in 0..2 {
            for j in 0..2 {
                let t = id.get(i, j);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((t.v - want).norm() < 1e-13);
                assert!(t.d1.iter().chain(&t.d2).chain(&t.d3).all(|x| x.norm() < 1e-12));
            }
        }
    }
}
