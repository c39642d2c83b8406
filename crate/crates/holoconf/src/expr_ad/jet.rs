use num_complex::Complex64;

use super::dual::{Dual, Dual2, Dual3};
use super::{ExprError, HoloExpr};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Value and holomorphic partial derivatives up to order three at a point.
///
/// `second` and `third` are stored densely; every permutation of an index
/// tuple holds the same entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet3 {
    pub n: usize,
    pub value: Complex64,
    pub first: Vec<Complex64>,
    pub second: Vec<Complex64>,
    pub third: Vec<Complex64>,
}

impl Jet3 {
    pub fn zero(n: usize) -> Self {
        Jet3 {
            n,
            value: ZERO,
            first: vec![ZERO; n],
            second: vec![ZERO; n * n],
            third: vec![ZERO; n * n * n],
        }
    }

    pub fn d1(&self, i: usize) -> Complex64 {
        self.first[i]
    }

    pub fn d2(&self, i: usize, j: usize) -> Complex64 {
        self.second[i * self.n + j]
    }

    pub fn d3(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.third[(i * self.n + j) * self.n + k]
    }

    fn set2(&mut self, i: usize, j: usize, v: Complex64) {
        let n = self.n;
        self.second[i * n + j] = v;
        self.second[j * n + i] = v;
    }

    fn set3(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        let n = self.n;
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            self.third[(a * n + b) * n + c] = v;
        }
    }

    /// Largest modulus over all stored entries.
    pub fn max_abs(&self) -> f64 {
        std::iter::once(&self.value)
            .chain(&self.first)
            .chain(&self.second)
            .chain(&self.third)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another jet.
    pub fn max_diff(&self, other: &Jet3) -> f64 {
        let pairs = std::iter::once((&self.value, &other.value))
            .chain(self.first.iter().zip(&other.first))
            .chain(self.second.iter().zip(&other.second))
            .chain(self.third.iter().zip(&other.third));
        pairs.map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// How many derivative orders to propagate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum JetOrder {
    One = 1,
    Two = 2,
    Three = 3,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn seed(on: bool) -> Complex64 {
    if on {
        one()
    } else {
        ZERO
    }
}

pub(super) fn eval_jet(e: &HoloExpr, p: &[Complex64], order: JetOrder) -> Result<Jet3, ExprError> {
    e.check_point(p)?;
    let n = p.len();
    let mut jet = Jet3::zero(n);
    jet.value = e.eval(p)?;
    match order {
        JetOrder::One => {
            for i in 0..n {
                let vars: Vec<Dual<Complex64>> = (0..n)
                    .map(|m| Dual::new(p[m], seed(m == i)))
                    .collect();
                let f = e.eval_generic(&vars)?;
                jet.first[i] = f.eps;
            }
        }
        JetOrder::Two => {
            for i in 0..n {
                for j in i..n {
                    let vars: Vec<Dual2> = (0..n)
                        .map(|m| Dual::new(Dual::new(p[m], seed(m == i)), Dual::new(seed(m == j), ZERO)))
                        .collect();
                    let f = e.eval_generic(&vars)?;
                    jet.first[i] = f.re.eps;
                    jet.first[j] = f.eps.re;
                    jet.set2(i, j, f.eps.eps);
                }
            }
        }
        JetOrder::Three => {
            for i in 0..n {
                for j in i..n {
                    for k in j..n {
                        let vars: Vec<Dual3> = (0..n)
                            .map(|m| {
                                let inner = Dual::new(Dual::new(p[m], seed(m == i)), Dual::new(seed(m == j), ZERO));
                                let outer = Dual::new(Dual::new(seed(m == k), ZERO), Dual::new(ZERO, ZERO));
                                Dual::new(inner, outer)
                            })
                            .collect();
                        let f = e.eval_generic(&vars)?;
                        jet.first[i] = f.re.re.eps;
                        jet.first[j] = f.re.eps.re;
                        jet.first[k] = f.eps.re.re;
                        jet.set2(i, j, f.re.eps.eps);
                        jet.set2(i, k, f.eps.re.eps);
                        jet.set2(j, k, f.eps.eps.re);
                        jet.set3(i, j, k, f.eps.eps.eps);
                    }
                }
            }
        }
    }
    Ok(jet)
}

/// Central-difference jet with one Richardson extrapolation step (h, h/2).
pub(super) fn fd_jet(e: &HoloExpr, p: &[Complex64], step: f64) -> Result<Jet3, ExprError> {
    if !(1e-6..=1e-2).contains(&step) {
        return Err(ExprError::InvalidStep(step));
    }
    e.check_point(p)?;
    let coarse = fd_raw(e, p, step)?;
    let fine = fd_raw(e, p, step / 2.0)?;
    let rich = |c: Complex64, f: Complex64| (4.0 * f - c) / 3.0;
    let mut jet = Jet3::zero(p.len());
    jet.value = coarse.value;
    for (out, (c, f)) in jet.first.iter_mut().zip(coarse.first.iter().zip(&fine.first)) {
        *out = rich(*c, *f);
    }
    for (out, (c, f)) in jet.second.iter_mut().zip(coarse.second.iter().zip(&fine.second)) {
        *out = rich(*c, *f);
    }
    for (out, (c, f)) in jet.third.iter_mut().zip(coarse.third.iter().zip(&fine.third)) {
        *out = rich(*c, *f);
    }
    Ok(jet)
}

fn fd_raw(e: &HoloExpr, p: &[Complex64], h: f64) -> Result<Jet3, ExprError> {
    let n = p.len();
    let mut jet = Jet3::zero(n);
    jet.value = e.eval(p)?;
    let at = |offsets: &[(usize, f64)]| -> Result<Complex64, ExprError> {
        let mut q = p.to_vec();
        for &(idx, s) in offsets {
            q[idx] += Complex64::new(s * h, 0.0);
        }
        e.eval(&q)
    };
    for i in 0..n {
        jet.first[i] = (at(&[(i, 1.0)])? - at(&[(i, -1.0)])?) / (2.0 * h);
    }
    let signs = [1.0, -1.0];
    for i in 0..n {
        for j in i..n {
            let mut acc = ZERO;
            for s1 in signs {
                for s2 in signs {
                    acc += s1 * s2 * at(&[(i, s1), (j, s2)])?;
                }
            }
            jet.set2(i, j, acc / (4.0 * h * h));
        }
    }
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let mut acc = ZERO;
                for s1 in signs {
                    for s2 in signs {
                        for s3 in signs {
                            acc += s1 * s2 * s3 * at(&[(i, s1), (j, s2), (k, s3)])?;
                        }
                    }
                }
                jet.set3(i, j, k, acc / (8.0 * h * h * h));
            }
        }
    }
    Ok(jet)
}
