use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{bilinear, norm, CMat, ZERO};

const PIVOT_FLOOR: f64 = 1e-10;
const MAX_SHEARS: usize = 8;
const SHEAR_SEED: u64 = 0x5eed_f4a3;

/// Vectors `e_i` (columns of `matrix`) with g(e_i, e_j) = δ_ij.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub matrix: CMat,
}

impl Frame {
    /// Orthonormal frame of the whole tangent space, seeded by the coordinate basis.
    pub fn orthonormal(g: &CMat) -> Result<Frame> {
        let n = g.nrows();
        let basis: Vec<Vec<Complex64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { ZERO }).collect())
            .collect();
        Frame::from_vectors(g, &basis)
    }

    /// Orthonormalise `vectors` (which must span the whole space) in order of pivot quality.
    pub fn from_vectors(g: &CMat, vectors: &[Vec<Complex64>]) -> Result<Frame> {
        let cols = orthonormal_span(g, vectors)?;
        if cols.len() != g.nrows() {
            return Err(Error::FramePivot { attempts: MAX_SHEARS });
        }
        Ok(Frame {
            matrix: CMat::from_fn(g.nrows(), cols.len(), |i, j| cols[j][i]),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.matrix.column(i).iter().copied().collect()
    }

    /// Frame components of a coordinate vector.
    pub fn components(&self, v: &[Complex64]) -> Vec<Complex64> {
        let inv = self.matrix.clone().try_inverse().expect("frame matrix is invertible");
        let n = v.len();
        (0..n).map(|i| (0..n).map(|j| inv[(i, j)] * v[j]).sum()).collect()
    }

    /// max |g(e_i, e_j) − δ_ij|.
    pub fn orthonormality_residual(&self, g: &CMat) -> f64 {
        let gram = self.matrix.transpose() * g * &self.matrix;
        let n = gram.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }
}

/// Gram–Schmidt over the complex-bilinear g with column pivoting.
///
/// Returns as many orthonormal vectors as `vectors` has elements, spanning the
/// same subspace. Isotropic pivots trigger a seeded random shear of the input.
pub fn orthonormal_span(g: &CMat, vectors: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SHEAR_SEED);
    let mut pool: Vec<Vec<Complex64>> = vectors.to_vec();
    for _ in 0..=MAX_SHEARS {
        if let Some(out) = try_gram_schmidt(g, &pool) {
            return Ok(out);
        }
        let k = pool.len();
        let old = pool.clone();
        for (i, v) in pool.iter_mut().enumerate() {
            for (j, w) in old.iter().enumerate() {
                if i == j {
                    continue;
                }
                let r = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / k as f64;
                for (a, b) in v.iter_mut().zip(w) {
                    *a += r * b;
                }
            }
        }
    }
    Err(Error::FramePivot { attempts: MAX_SHEARS })
}

fn try_gram_schmidt(g: &CMat, pool: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut remaining: Vec<Vec<Complex64>> = pool.to_vec();
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(usize, f64, Vec<Complex64>)> = None;
        for (idx, c) in remaining.iter().enumerate() {
            let mut w = c.clone();
            for b in &out {
                let proj = bilinear(g, c, b);
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
            let size = norm(&w);
            if size == 0.0 {
                continue;
            }
            let score = bilinear(g, &w, &w).norm() / (size * size);
            if best.as_ref().map_or(true, |(_, s, _)| score > *s) {
                best = Some((idx, score, w));
            }
        }
        let (idx, score, w) = best?;
        if score < PIVOT_FLOOR {
            return None;
        }
        let len = bilinear(g, &w, &w).sqrt();
        out.push(w.iter().map(|x| x / len).collect());
        remaining.remove(idx);
    }
    Some(out)
}
