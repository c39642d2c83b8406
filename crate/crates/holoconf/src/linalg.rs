//! Small dense complex helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Complex-bilinear form `u^T g w` (no conjugation).
pub fn bilinear(g: &CMat, u: &[Complex64], w: &[Complex64]) -> Complex64 {
    let n = u.len();
    let mut acc = ZERO;
    for i in 0..n {
        if u[i] == ZERO {
            continue;
        }
        for j in 0..n {
            acc += u[i] * g[(i, j)] * w[j];
        }
    }
    acc
}

/// Hermitian (reference) norm of a slice.
pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `num / scale`, or `num` itself when the scale is negligible.
pub fn relative(num: f64, scale: f64) -> f64 {
    if scale > 1e-12 {
        num / scale
    } else {
        num
    }
}

/// Sign of `+1` for `1`, `-1` for `-1`; `None` if `z` is far from both.
pub fn unit_sign(z: Complex64, tol: f64) -> Option<f64> {
    if (z - ONE).norm() < tol {
        Some(1.0)
    } else if (z + ONE).norm() < tol {
        Some(-1.0)
    } else {
        None
    }
}

/// Sign of the permutation taking `idx` to sorted order (0 on repeats).
pub fn perm_sign(idx: &[usize]) -> f64 {
    let mut s = 1.0;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] == idx[b] {
                return 0.0;
            }
            if idx[a] > idx[b] {
                s = -s;
            }
        }
    }
    s
}
