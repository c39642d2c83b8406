//! Curvature pipeline of a holomorphic metric at a point.
//!
//! Metric jets come from nested dual numbers; the inverse metric, Christoffel
//! symbols and curvature are then propagated as truncated Taylor jets so that
//! one evaluation yields Γ, ∂Γ, R, ∇R, h, ∇h and the Cotton–York tensor.

mod frame;
mod geometry;
mod lambda2;
mod metric;
mod tensor;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use frame::{orthonormal_span, Frame};
pub use geometry::{contract4, Geometry, Level};
pub use lambda2::{
    frob, h_wedge_identity, h_wedge_tensor, nabla_weyl, operator_from_tensor, pair_index, standard_star,
    tensor_from_operator, CottonSplit, Lambda2, WeylSplit, PAIRS,
};
pub use metric::{JetMethod, MetricField};
pub use tensor::Tensor;

use crate::error::{Error, Result};
use crate::linalg::CMat;

/// Γ^k_ij at `p`.
pub fn christoffel(m: &MetricField, p: &[Complex64]) -> Result<Tensor> {
    Ok(Geometry::compute(m, p, Level::Connection)?.christoffel)
}

/// Riemann (0,4), Ricci, scalar curvature and h at `p`.
pub fn riemann(m: &MetricField, p: &[Complex64]) -> Result<(Tensor, Tensor, Complex64, Tensor)> {
    let geo = Geometry::compute(m, p, Level::Curvature)?;
    Ok((geo.riemann, geo.ricci, geo.scalar, geo.schouten))
}

/// Orthonormal frame, Λ² pairing and Hodge star at `p` (n = 4).
pub fn lambda2_basis_and_star(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<Lambda2> {
    let g = m.metric_at(p)?;
    Lambda2::at(m, &g, p, orientation)
}

/// W⁺, W⁻ and the reassembly residual at `p`.
pub fn weyl_split(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<WeylSplit> {
    let geo = Geometry::compute(m, p, Level::Curvature)?;
    let lam = Lambda2::at(m, &geo.g, p, orientation)?;
    Ok(WeylSplit::new(&geo, lam))
}

/// Cotton–York tensor and, for n = 4, its Λ± parts together with δW, δW±.
pub fn cotton_york(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<(Tensor, Option<CottonSplit>)> {
    let geo = Geometry::compute(m, p, Level::Derivatives)?;
    if m.dim() != 4 {
        return Ok((geo.cotton, None));
    }
    let lam = Lambda2::at(m, &geo.g, p, orientation)?;
    let split = CottonSplit::new(&geo, &lam);
    Ok((geo.cotton, Some(split)))
}

/// δW, δW⁺, δW⁻ (frame components, 6×4).
pub fn divergence_weyl(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<(CMat, CMat, CMat)> {
    match cotton_york(m, p, orientation)? {
        (_, Some(s)) => Ok((s.div_weyl, s.div_wplus, s.div_wminus)),
        _ => Err(Error::Dimension { want: 4, got: m.dim() }),
    }
}

/// The rescaled metric e^{2f} g.
pub fn conformal_rescale(m: &MetricField, f: &crate::expr_ad::HoloExpr) -> Result<MetricField> {
    m.conformal_rescale(f)
}

/// Γ' − Γ predicted for g' = e^{2f} g with θ = df: δ^k_i θ_j + δ^k_j θ_i − g_ij θ^k.
pub fn connection_delta(g: &CMat, theta: &[Complex64]) -> Tensor {
    let n = g.nrows();
    let ginv = g.clone().try_inverse().expect("nondegenerate metric");
    let sharp: Vec<Complex64> = (0..n).map(|k| (0..n).map(|l| ginv[(k, l)] * theta[l]).sum()).collect();
    let mut t = Tensor::zeros(n, 3);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut v = -g[(i, j)] * sharp[k];
                if k == i {
                    v += theta[j];
                }
                if k == j {
                    v += theta[i];
                }
                t.set(&[k, i, j], v);
            }
        }
    }
    t
}

/// Full curvature report at a point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub n: usize,
    pub point: Vec<Complex64>,
    pub orientation: f64,
    pub metric: Tensor,
    pub christoffel: Tensor,
    pub riemann_13: Tensor,
    pub riemann_04: Tensor,
    pub ricci: Tensor,
    pub scalar: Complex64,
    pub schouten: Tensor,
    pub cotton: Tensor,
    pub frame: Option<Tensor>,
    pub wplus: Option<Vec<Vec<Complex64>>>,
    pub wminus: Option<Vec<Vec<Complex64>>>,
    pub cplus: Option<Vec<Vec<Complex64>>>,
    pub cminus: Option<Vec<Vec<Complex64>>>,
    pub norms: ReportNorms,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportNorms {
    pub riemann: f64,
    pub ricci: f64,
    pub cotton: f64,
    pub wplus: Option<f64>,
    pub wminus: Option<f64>,
    pub cplus: Option<f64>,
    pub cminus: Option<f64>,
    pub reassembly_residual: Option<f64>,
}

fn rows(m: &CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl CurvatureReport {
    pub fn compute(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<CurvatureReport> {
        let geo = Geometry::compute(m, p, Level::Derivatives)?;
        let n = m.dim();
        let mut metric = Tensor::zeros(n, 2);
        for i in 0..n {
            for j in 0..n {
                metric.set(&[i, j], geo.g[(i, j)]);
            }
        }
        let mut report = CurvatureReport {
            n,
            point: p.to_vec(),
            orientation,
            metric,
            christoffel: geo.christoffel.clone(),
            riemann_13: geo.riemann_up.clone(),
            riemann_04: geo.riemann.clone(),
            ricci: geo.ricci.clone(),
            scalar: geo.scalar,
            schouten: geo.schouten.clone(),
            cotton: geo.cotton.clone(),
            frame: None,
            wplus: None,
            wminus: None,
            cplus: None,
            cminus: None,
            norms: ReportNorms {
                riemann: geo.riemann.norm(),
                ricci: geo.ricci.norm(),
                cotton: geo.cotton.norm(),
                wplus: None,
                wminus: None,
                cplus: None,
                cminus: None,
                reassembly_residual: None,
            },
        };
        if n == 4 {
            let lam = Lambda2::at(m, &geo.g, p, orientation)?;
            let cs = CottonSplit::new(&geo, &lam);
            let ws = WeylSplit::new(&geo, lam);
            let mut frame = Tensor::zeros(4, 2);
            for i in 0..4 {
                for j in 0..4 {
                    frame.set(&[i, j], ws.lambda.frame.matrix[(i, j)]);
                }
            }
            report.frame = Some(frame);
            report.norms.wplus = Some(frob(&ws.wplus));
            report.norms.wminus = Some(frob(&ws.wminus));
            report.norms.cplus = Some(frob(&cs.cplus));
            report.norms.cminus = Some(frob(&cs.cminus));
            report.norms.reassembly_residual = Some(ws.residual);
            report.wplus = Some(rows(&ws.wplus));
            report.wminus = Some(rows(&ws.wminus));
            report.cplus = Some(rows(&cs.cplus));
            report.cminus = Some(rows(&cs.cminus));
        }
        Ok(report)
    }
}

/// Largest first-Bianchi and pair-symmetry defect of a (0,4) Riemann tensor, relative to its norm.
pub fn riemann_symmetry_residual(r: &Tensor) -> f64 {
    let n = r.n;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = r.at(&[i, j, k, l]);
                    worst = worst
                        .max((v + r.at(&[j, i, k, l])).norm())
                        .max((v + r.at(&[i, j, l, k])).norm())
                        .max((v - r.at(&[k, l, i, j])).norm())
                        .max((v + r.at(&[j, k, i, l]) + r.at(&[k, i, j, l])).norm());
                }
            }
        }
    }
    crate::linalg::relative(worst, r.norm())
}

#[cfg(test)]
mod tests;
