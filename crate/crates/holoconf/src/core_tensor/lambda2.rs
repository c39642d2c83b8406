//! Two-forms of a 4-manifold in an orthonormal frame.
//!
//! Basis order: e12, e13, e14, e23, e24, e34. With an orthonormal frame the
//! induced pairing ⟨a∧b, c∧d⟩ = g(a,c)g(b,d) − g(a,d)g(b,c) is the identity.
//! A symmetric endomorphism `M` of Λ² is stored as `M[J][I] = ⟨M e_I, e_J⟩`,
//! and the curvature operator satisfies ⟨ℛ(X∧Y), Z∧W⟩ = R(X,Y,W,Z).

use num_complex::Complex64;

use super::frame::Frame;
use super::geometry::Geometry;
use super::metric::MetricField;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::linalg::{perm_sign, unit_sign, CMat};

pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Basis index and sign of e_i ∧ e_j, or `None` when i = j.
pub fn pair_index(i: usize, j: usize) -> Option<(usize, f64)> {
    if i == j {
        return None;
    }
    let (a, b, s) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
    PAIRS.iter().position(|&p| p == (a, b)).map(|k| (k, s))
}

/// Hodge star of an oriented orthonormal frame: *(e_i∧e_j) = ε_ijkl e_k∧e_l (k<l).
pub fn standard_star() -> CMat {
    let mut s = CMat::zeros(6, 6);
    for (col, &(i, j)) in PAIRS.iter().enumerate() {
        for (row, &(k, l)) in PAIRS.iter().enumerate() {
            let e = perm_sign(&[i, j, k, l]);
            if e != 0.0 {
                s[(row, col)] = Complex64::new(e, 0.0);
            }
        }
    }
    s
}

/// Frame, orientation and Hodge star on Λ² at a point.
#[derive(Debug, Clone)]
pub struct Lambda2 {
    pub frame: Frame,
    /// +1 when the frame is positively oriented for the requested orientation.
    pub frame_sign: f64,
    pub star: CMat,
    /// Pairing on Λ² in the frame basis (the identity).
    pub gram: CMat,
}

impl Lambda2 {
    pub fn at(m: &MetricField, g: &CMat, p: &[Complex64], orientation: f64) -> Result<Lambda2> {
        if m.dim() != 4 {
            return Err(Error::Dimension { want: 4, got: m.dim() });
        }
        let frame = Frame::orthonormal(g)?;
        Lambda2::with_frame(m, p, frame, orientation)
    }

    pub fn with_frame(m: &MetricField, p: &[Complex64], frame: Frame, orientation: f64) -> Result<Lambda2> {
        let vol = m.volume_root(p)?;
        let det = frame.matrix.determinant();
        let frame_sign = orientation * unit_sign(vol * det, 1e-6).ok_or(Error::VolumeBranch)?;
        Ok(Lambda2 {
            frame,
            frame_sign,
            star: standard_star() * Complex64::new(frame_sign, 0.0),
            gram: CMat::identity(6, 6),
        })
    }

    pub fn projector(&self, sign: f64) -> CMat {
        (CMat::identity(6, 6) + &self.star * Complex64::new(sign, 0.0)) * Complex64::new(0.5, 0.0)
    }

    /// Frame components of the bivector u∧w given coordinate vectors.
    pub fn wedge(&self, u: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
        let a = self.frame.components(u);
        let b = self.frame.components(w);
        PAIRS.iter().map(|&(i, j)| a[i] * b[j] - a[j] * b[i]).collect()
    }

    /// Coordinate components B^{ab} of each frame basis bivector.
    pub fn coordinate_basis(&self) -> Vec<Tensor> {
        PAIRS
            .iter()
            .map(|&(i, j)| {
                let mut t = Tensor::zeros(4, 2);
                for a in 0..4 {
                    for b in 0..4 {
                        let f = &self.frame.matrix;
                        t.set(&[a, b], f[(a, i)] * f[(b, j)] - f[(a, j)] * f[(b, i)]);
                    }
                }
                t
            })
            .collect()
    }

    /// Coordinate (0,4) tensor → frame components.
    pub fn to_frame(&self, t: &Tensor) -> Tensor {
        t.transform(&self.frame.matrix)
    }

    /// Frame tensor → coordinate components.
    pub fn to_coords(&self, t: &Tensor) -> Tensor {
        let inv = self.frame.matrix.clone().try_inverse().expect("frame matrix is invertible");
        t.transform(&inv)
    }
}

/// Endomorphism of Λ² from a frame (0,4) tensor with the curvature slot convention.
pub fn operator_from_tensor(t: &Tensor) -> CMat {
    let mut m = CMat::zeros(6, 6);
    for (col, &(i, j)) in PAIRS.iter().enumerate() {
        for (row, &(k, l)) in PAIRS.iter().enumerate() {
            m[(row, col)] = t.at(&[i, j, l, k]);
        }
    }
    m
}

/// Inverse of [`operator_from_tensor`].
pub fn tensor_from_operator(m: &CMat) -> Tensor {
    let mut t = Tensor::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let Some((col, s1)) = pair_index(i, j) else { continue };
            for k in 0..4 {
                for l in 0..4 {
                    let Some((row, s2)) = pair_index(l, k) else { continue };
                    t.set(&[i, j, k, l], m[(row, col)] * (s1 * s2));
                }
            }
        }
    }
    t
}

/// Frame components of h∧I for a symmetric 2-tensor `h` in the same frame.
pub fn h_wedge_identity(h: &Tensor) -> CMat {
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut m = CMat::zeros(6, 6);
    for (col, &(i, j)) in PAIRS.iter().enumerate() {
        for (row, &(k, l)) in PAIRS.iter().enumerate() {
            m[(row, col)] = h.at(&[i, k]) * d(j, l) - h.at(&[i, l]) * d(j, k) + h.at(&[j, l]) * d(i, k)
                - h.at(&[j, k]) * d(i, l);
        }
    }
    m
}

/// Coordinate (0,4) form of h∧I with the same slot convention as the Riemann tensor.
pub fn h_wedge_tensor(h: &Tensor, g: &CMat) -> Tensor {
    let n = h.n;
    let mut t = Tensor::zeros(n, 4);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = h.at(&[i, l]) * g[(j, k)] - h.at(&[i, k]) * g[(j, l)] + g[(i, l)] * h.at(&[j, k])
                        - g[(i, k)] * h.at(&[j, l]);
                    t.set(&[i, j, k, l], v);
                }
            }
        }
    }
    t
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// W = ℛ − h∧I split into its Λ± blocks.
#[derive(Debug, Clone)]
pub struct WeylSplit {
    pub lambda: Lambda2,
    pub curvature: CMat,
    pub h_wedge: CMat,
    pub weyl: CMat,
    pub wplus: CMat,
    pub wminus: CMat,
    /// ‖ℛ − (h∧I + W⁺ + W⁻)‖ / ‖ℛ‖.
    pub residual: f64,
}

impl WeylSplit {
    pub fn new(geo: &Geometry, lambda: Lambda2) -> WeylSplit {
        let rf = lambda.to_frame(&geo.riemann);
        let hf = geo.schouten.transform(&lambda.frame.matrix);
        let curvature = operator_from_tensor(&rf);
        let h_wedge = h_wedge_identity(&hf);
        let weyl = &curvature - &h_wedge;
        let pp = lambda.projector(1.0);
        let pm = lambda.projector(-1.0);
        let wplus = &pp * &weyl * &pp;
        let wminus = &pm * &weyl * &pm;
        let rebuilt = &h_wedge + &wplus + &wminus;
        let residual = crate::linalg::relative(frob(&(&curvature - &rebuilt)), frob(&curvature));
        WeylSplit {
            lambda,
            curvature,
            h_wedge,
            weyl,
            wplus,
            wminus,
            residual,
        }
    }

    /// W± as coordinate (0,4) tensors.
    pub fn coordinate_tensors(&self) -> (Tensor, Tensor) {
        (
            self.lambda.to_coords(&tensor_from_operator(&self.wplus)),
            self.lambda.to_coords(&tensor_from_operator(&self.wminus)),
        )
    }
}

/// Cotton–York tensor and Weyl divergence, both as 2-form-valued 1-forms in the frame.
///
/// Matrices are 6×4 with entry `[I][k]` = T(e_i, e_j)(e_k) for I = (i<j).
#[derive(Debug, Clone)]
pub struct CottonSplit {
    pub cotton: CMat,
    pub cplus: CMat,
    pub cminus: CMat,
    pub div_weyl: CMat,
    pub div_wplus: CMat,
    pub div_wminus: CMat,
}

/// ∇W as coordinate (0,5) tensor: index order (m; i, j, k, l).
pub fn nabla_weyl(geo: &Geometry) -> Tensor {
    let n = geo.n;
    let mut out = geo.nabla_riemann.clone();
    for m in 0..n {
        let slice = Tensor {
            n,
            rank: 2,
            data: (0..n * n).map(|k| geo.nabla_schouten.data[m * n * n + k]).collect(),
        };
        let hw = h_wedge_tensor(&slice, &geo.g);
        for (k, v) in hw.data.iter().enumerate() {
            out.data[m * n.pow(4) + k] -= v;
        }
    }
    out
}

impl CottonSplit {
    /// δW(X,Y)(Z) = g^{ab}(∇_a W)(X, Y, Z, ∂_b), split by the Λ± projectors.
    pub fn new(geo: &Geometry, lambda: &Lambda2) -> CottonSplit {
        let f = &lambda.frame.matrix;
        let nw = nabla_weyl(geo).transform(f);
        let cf = geo.cotton.transform(f);
        let mut cotton = CMat::zeros(6, 4);
        for (row, &(i, j)) in PAIRS.iter().enumerate() {
            for k in 0..4 {
                cotton[(row, k)] = cf.at(&[i, j, k]);
            }
        }
        let pp = lambda.projector(1.0);
        let pm = lambda.projector(-1.0);
        let mut div = [CMat::zeros(6, 4), CMat::zeros(6, 4), CMat::zeros(6, 4)];
        for a in 0..4 {
            let slice = Tensor {
                n: 4,
                rank: 4,
                data: nw.data[a * 256..(a + 1) * 256].to_vec(),
            };
            let op = operator_from_tensor(&slice);
            let parts = [op.clone(), &pp * &op * &pp, &pm * &op * &pm];
            for (which, part) in parts.iter().enumerate() {
                let t = tensor_from_operator(part);
                for (row, &(i, j)) in PAIRS.iter().enumerate() {
                    for k in 0..4 {
                        div[which][(row, k)] += t.at(&[i, j, k, a]);
                    }
                }
            }
        }
        let [div_weyl, div_wplus, div_wminus] = div;
        CottonSplit {
            cplus: &pp * &cotton,
            cminus: &pm * &cotton,
            cotton,
            div_weyl,
            div_wplus,
            div_wminus,
        }
    }
}
