use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, ZERO};

/// Dense tensor with every index ranging over `0..n`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub n: usize,
    pub rank: usize,
    pub data: Vec<Complex64>,
}

impl Tensor {
    pub fn zeros(n: usize, rank: usize) -> Tensor {
        Tensor {
            n,
            rank,
            data: vec![ZERO; n.pow(rank as u32)],
        }
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn at(&self, idx: &[usize]) -> Complex64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Complex64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Multi-index of a flat offset.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    /// Frobenius norm of the components.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn diff_norm(&self, other: &Tensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Tensor {
        Tensor {
            n: self.n,
            rank: self.rank,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Covariant change of basis: `T'_{i..} = Σ T_{a..} M_{a i} ...` on every slot.
    pub fn transform(&self, m: &CMat) -> Tensor {
        let n = self.n;
        let mut cur = self.data.clone();
        for slot in 0..self.rank {
            let stride = n.pow((self.rank - 1 - slot) as u32);
            let mut next = vec![ZERO; cur.len()];
            for (flat, out) in next.iter_mut().enumerate() {
                let i = (flat / stride) % n;
                let base = flat - i * stride;
                let mut acc = ZERO;
                for a in 0..n {
                    let v = cur[base + a * stride];
                    if v != ZERO {
                        acc += v * m[(a, i)];
                    }
                }
                *out = acc;
            }
            cur = next;
        }
        Tensor {
            n,
            rank: self.rank,
            data: cur,
        }
    }
}
