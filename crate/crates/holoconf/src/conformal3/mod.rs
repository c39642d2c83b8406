//! Dimension-3 conformal geometry and hypersurfaces of conformal 4-manifolds.
//!
//! Index conventions follow [`Geometry`]: `cotton[x,y,z]` = C(X,Y)(Z) =
//! (∇_X h)(Y,Z) − (∇_Y h)(X,Z), with h = Scal/12·g + Ric₀ when n = 3.

mod perturb;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use perturb::{perturbed_flat, PerturbationFixture, PERTURBATION_SEED_K0};

use crate::catalog::sample_box;
use crate::core_tensor::{contract4, nabla_weyl, orthonormal_span, Geometry, Lambda2, Level, MetricField, Tensor, WeylSplit};
use crate::error::{Error, Result};
use crate::expr_ad::HoloExpr;
use crate::linalg::{bilinear, norm, perm_sign, unit_sign, CMat, ZERO};

/// Relative threshold on ‖II‖ and ‖II − λg‖ for the totally geodesic / umbilic flags.
pub const UMBILIC_TOL: f64 = 1e-8;
/// Threshold on ‖W⁻‖ (relative to max(1, ‖R‖)) for the self-duality precondition.
pub const SELF_DUAL_TOL: f64 = 1e-7;
/// Threshold on ‖II‖/‖g_Q‖ for the totally geodesic precondition.
pub const GEODESIC_TOL: f64 = 1e-6;

type CV = Vec<Complex64>;

#[derive(Debug, Clone)]
pub struct Hypersurface {
    pub name: String,
    pub map: Vec<HoloExpr>,
    pub level_set: Option<HoloExpr>,
    pub basepoint: Vec<Complex64>,
    pub sample_radius: f64,
    first: Vec<HoloExpr>,
    second: Vec<HoloExpr>,
}

impl Hypersurface {
    pub fn new(name: &str, map: Vec<HoloExpr>, level_set: Option<HoloExpr>, basepoint: Vec<Complex64>, sample_radius: f64) -> Self {
        // first[k*3+a] = ∂a ι^k, second[(k*3+a)*3+b] = ∂a∂b ι^k
        let first: Vec<HoloExpr> = map.iter().flat_map(|e| (0..3).map(move |a| e.derivative(a))).collect();
        let second = first.iter().flat_map(|e| (0..3).map(move |b| e.derivative(b))).collect();
        Hypersurface {
            name: name.into(),
            map,
            level_set,
            basepoint,
            sample_radius,
            first,
            second,
        }
    }

    pub fn point(&self, q: &[Complex64]) -> Result<CV> {
        Ok(self.map.iter().map(|e| e.eval(q)).collect::<std::result::Result<_, _>>()?)
    }

    /// Coordinate tangent vectors ∂a ι.
    pub fn tangents(&self, q: &[Complex64]) -> Result<[CV; 3]> {
        let n = self.map.len();
        let vals = self.first.iter().map(|e| e.eval(q)).collect::<std::result::Result<Vec<_>, _>>()?;
        let col = |a: usize| (0..n).map(|k| vals[k * 3 + a]).collect();
        Ok([col(0), col(1), col(2)])
    }

    pub fn sample_parameters(&self, seed: u64, count: usize) -> Vec<CV> {
        sample_box(seed, count, &self.basepoint, self.sample_radius, |_| true)
    }

    /// The pulled-back metric ι*g as a field in (q1, q2, q3).
    pub fn induced_metric(&self, m: &MetricField) -> Result<MetricField> {
        let n = m.dim();
        if self.map.len() != n {
            return Err(Error::Dimension { want: n, got: self.map.len() });
        }
        let pulled: Vec<HoloExpr> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m.component(i, j).substitute(&self.map))
            .collect();
        let mut entries = Vec::with_capacity(6);
        for a in 0..3 {
            for b in a..3 {
                let mut acc: Option<HoloExpr> = None;
                for i in 0..n {
                    for j in 0..n {
                        let term = self.first[i * 3 + a].mul(&self.first[j * 3 + b]).mul(&pulled[i * n + j]);
                        acc = Some(match acc {
                            None => term,
                            Some(s) => s.add(&term),
                        });
                    }
                }
                entries.push(acc.expect("nonempty sum"));
            }
        }
        MetricField::new(3, entries, None)
    }

    /// Unit normal ν with g(ν, ν) = 1 (principal square root) and g(ν, ∂a ι) = 0.
    pub fn unit_normal(&self, m: &MetricField, q: &[Complex64]) -> Result<CV> {
        let x = self.point(q)?;
        let g = m.metric_at(&x)?;
        let ginv = g.clone().try_inverse().ok_or(Error::SingularMetric { det: 0.0, scale: 1.0 })?;
        let t = self.tangents(q)?;
        let covector: CV = match &self.level_set {
            Some(f) => f.eval_jet(&x, crate::expr_ad::JetOrder::One)?.first,
            None => (0..4)
                .map(|l| {
                    let mut v = ZERO;
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                let s = perm_sign(&[i, j, k, l]);
                                if s != 0.0 {
                                    v += s * t[0][i] * t[1][j] * t[2][k];
                                }
                            }
                        }
                    }
                    v
                })
                .collect(),
        };
        let grad: CV = (0..4).map(|a| (0..4).map(|b| ginv[(a, b)] * covector[b]).sum()).collect();
        let len2 = bilinear(&g, &grad, &grad);
        if len2.norm() < 1e-10 * norm(&grad).powi(2).max(1e-300) {
            return Err(Error::DegenerateInducedMetric);
        }
        let nu: CV = grad.iter().map(|v| v / len2.sqrt()).collect();
        let tangency = t.iter().map(|ta| bilinear(&g, &nu, ta).norm() / norm(ta)).fold(0.0, f64::max);
        if tangency > 1e-8 {
            return Err(Error::Precondition {
                what: "level set normal is not orthogonal to the parameterization".into(),
                residual: tangency,
            });
        }
        Ok(nu)
    }
}

/// II(∂a, ∂b) = g(∇_{∂a} ∂b, ν) together with the induced metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondFundamentalForm {
    pub parameters: Vec<Complex64>,
    pub normal: Vec<Complex64>,
    pub induced: Vec<Vec<Complex64>>,
    pub ii: Vec<Vec<Complex64>>,
    /// λ = tr(g_Q⁻¹ II)/3.
    pub mean: Complex64,
    /// ‖II‖ / ‖g_Q‖.
    pub geodesic_residual: f64,
    /// ‖II − λ g_Q‖ / ‖g_Q‖.
    pub umbilic_residual: f64,
    pub umbilic: bool,
    pub totally_geodesic: bool,
}

fn rows(m: &CMat) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn umbilic_check(m: &MetricField, hs: &Hypersurface, q: &[Complex64]) -> Result<SecondFundamentalForm> {
    let x = hs.point(q)?;
    let geo = Geometry::compute(m, &x, Level::Connection)?;
    let t = hs.tangents(q)?;
    let gq = CMat::from_fn(3, 3, |a, b| geo.inner(&t[a], &t[b]));
    let scale = gq.norm();
    if gq.determinant().norm() < 1e-10 * scale.powi(3) {
        return Err(Error::DegenerateInducedMetric);
    }
    let nu = hs.unit_normal(m, q)?;
    let second = hs.second.iter().map(|e| e.eval(q)).collect::<std::result::Result<Vec<_>, _>>()?;
    let ii = CMat::from_fn(3, 3, |a, b| {
        let mut v: CV = (0..4).map(|k| second[(k * 3 + a) * 3 + b]).collect();
        for (k, g) in geo.gamma_apply(&t[a], &t[b]).into_iter().enumerate() {
            v[k] += g;
        }
        geo.inner(&v, &nu)
    });
    let ginv = gq.clone().try_inverse().ok_or(Error::DegenerateInducedMetric)?;
    let mean = (&ginv * &ii).trace() / 3.0;
    let geodesic_residual = ii.norm() / scale;
    let umbilic_residual = (&ii - &gq * mean).norm() / scale;
    Ok(SecondFundamentalForm {
        parameters: q.to_vec(),
        normal: nu,
        induced: rows(&gq),
        ii: rows(&ii),
        mean,
        geodesic_residual,
        umbilic_residual,
        umbilic: umbilic_residual < UMBILIC_TOL,
        totally_geodesic: geodesic_residual < UMBILIC_TOL,
    })
}

fn require_dim(m: &MetricField, n: usize) -> Result<()> {
    if m.dim() != n {
        return Err(Error::Dimension { want: n, got: m.dim() });
    }
    Ok(())
}

/// Cotton–York tensor of a 3-metric, index [x, y, z] = C(X,Y)(Z).
pub fn cotton3(m3: &MetricField, p: &[Complex64]) -> Result<Tensor> {
    require_dim(m3, 3)?;
    Ok(Geometry::compute(m3, p, Level::Derivatives)?.cotton)
}

/// max_X |Σ_i C(X, e_i)(e_i)| for the trace identity of a 3-metric.
pub fn cotton3_trace_residual(m3: &MetricField, p: &[Complex64]) -> Result<f64> {
    require_dim(m3, 3)?;
    let geo = Geometry::compute(m3, p, Level::Derivatives)?;
    let mut worst: f64 = 0.0;
    for x in 0..3 {
        let mut acc = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                acc += geo.ginv[(i, j)] * geo.cotton.at(&[x, i, j]);
            }
        }
        worst = worst.max(acc.norm());
    }
    Ok(worst)
}

/// Both sides of *R = −h + (tr h)I in an orthonormal frame of a 3-metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StarIdentity {
    pub star_r: Vec<Vec<Complex64>>,
    pub rhs: Vec<Vec<Complex64>>,
    pub residual: f64,
}

pub fn star_r_identity(m3: &MetricField, p: &[Complex64]) -> Result<StarIdentity> {
    require_dim(m3, 3)?;
    let geo = Geometry::compute(m3, p, Level::Curvature)?;
    let frame = crate::core_tensor::Frame::orthonormal(&geo.g)?;
    let e: Vec<CV> = (0..3).map(|i| frame.vector(i)).collect();
    // *e_k = e_i ∧ e_j for (i, j, k) cyclic; ⟨R(A), B⟩ = R(a1, a2, b2, b1).
    let cyc = |k: usize| ((k + 1) % 3, (k + 2) % 3);
    let star_r = CMat::from_fn(3, 3, |k, l| {
        let (i, j) = cyc(k);
        let (a, b) = cyc(l);
        geo.riemann_apply(&e[i], &e[j], &e[b], &e[a])
    });
    let h = CMat::from_fn(3, 3, |k, l| {
        let mut v = ZERO;
        for a in 0..3 {
            for b in 0..3 {
                v += geo.schouten.at(&[a, b]) * e[k][a] * e[l][b];
            }
        }
        v
    });
    let rhs = CMat::identity(3, 3) * h.trace() - &h;
    let residual = crate::linalg::relative((&star_r - &rhs).norm(), h.norm().max(star_r.norm()));
    Ok(StarIdentity {
        star_r: rows(&star_r),
        rhs: rows(&rhs),
        residual,
    })
}

/// Sign of the frame (e1..e4) relative to the orientation flag.
pub fn frame_orientation(m: &MetricField, p: &[Complex64], frame: &[CV; 4], orientation: f64) -> Result<f64> {
    let f = CMat::from_fn(4, 4, |i, j| frame[j][i]);
    let vr = m.volume_root(p)?;
    unit_sign(vr * f.determinant(), 1e-6)
        .map(|s| s * orientation)
        .ok_or(Error::FrameNotOrthonormal { residual: (vr * f.determinant()).norm() })
}

fn check_frame(m: &MetricField, p: &[Complex64], frame: &[CV; 4], orientation: f64) -> Result<CMat> {
    let g = m.metric_at(p)?;
    let f = crate::core_tensor::Frame {
        matrix: CMat::from_fn(4, 4, |i, j| frame[j][i]),
    };
    let residual = f.orthonormality_residual(&g);
    if residual > 1e-8 {
        return Err(Error::FrameNotOrthonormal { residual });
    }
    let sign = frame_orientation(m, p, frame, orientation)?;
    if sign < 0.0 {
        return Err(Error::Precondition {
            what: "frame (X, Y, Z, ν) is negatively oriented".into(),
            residual: 2.0,
        });
    }
    Ok(g)
}

/// ⟨W±(X,Y)Z, X⟩ from the Weyl split and from the ¼-combinations of R.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WComponents {
    pub lhs_plus: Complex64,
    pub rhs_plus: Complex64,
    pub lhs_minus: Complex64,
    pub rhs_minus: Complex64,
    /// ½(⟨R(X,Y)Y,ν⟩ + ⟨R(Z,X)Z,ν⟩), equal to lhs_plus wherever W⁻ = 0.
    pub w1_rhs: Complex64,
    /// ⟨R(X,Y)Z,X⟩ + ⟨R(Z,ν)Y,ν⟩.
    pub rq: Complex64,
}

impl WComponents {
    pub fn residual(&self) -> f64 {
        let scale = self.lhs_plus.norm().max(self.lhs_minus.norm()).max(1e-300);
        ((self.lhs_plus - self.rhs_plus).norm()).max((self.lhs_minus - self.rhs_minus).norm()) / scale.max(1.0)
    }
}

pub fn w_component_formulas(m4: &MetricField, p: &[Complex64], frame: &[CV; 4], orientation: f64) -> Result<WComponents> {
    require_dim(m4, 4)?;
    let g = check_frame(m4, p, frame, orientation)?;
    let geo = Geometry::compute(m4, p, Level::Curvature)?;
    let split = WeylSplit::new(&geo, Lambda2::at(m4, &g, p, orientation)?);
    let (wp, wm) = split.coordinate_tensors();
    let [x, y, z, nu] = frame;
    let r = |a: &CV, b: &CV, c: &CV, d: &CV| geo.riemann_apply(a, b, c, d);
    let sym = r(x, y, z, x) + r(z, nu, y, nu);
    let anti = r(x, y, y, nu) + r(z, nu, z, x);
    Ok(WComponents {
        lhs_plus: contract4(&wp, [x, y, z, x]),
        rhs_plus: 0.25 * (sym + anti),
        lhs_minus: contract4(&wm, [x, y, z, x]),
        rhs_minus: 0.25 * (sym - anti),
        w1_rhs: 0.5 * anti,
        rq: sym,
    })
}

/// Orthonormal (X, Y, Z) spanning TQ and the unit normal ν, positively oriented.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptedFrame {
    pub point: Vec<Complex64>,
    pub vectors: [CV; 4],
    /// Components of X, Y, Z in the hypersurface coordinates.
    pub tangent_coordinates: [CV; 3],
}

pub fn adapted_frame(m: &MetricField, hs: &Hypersurface, q: &[Complex64], orientation: f64) -> Result<AdaptedFrame> {
    let x = hs.point(q)?;
    let g = m.metric_at(&x)?;
    let t = hs.tangents(q)?;
    let mut e = orthonormal_span(&g, &t)?;
    let nu = hs.unit_normal(m, q)?;
    let mut vectors = [e[0].clone(), e[1].clone(), e[2].clone(), nu];
    if frame_orientation(m, &x, &vectors, orientation)? < 0.0 {
        e.swap(0, 1);
        vectors = [e[0].clone(), e[1].clone(), e[2].clone(), vectors[3].clone()];
    }
    let d = CMat::from_fn(4, 3, |k, a| t[a][k]);
    let left = d.pseudo_inverse(1e-14).map_err(|_| Error::DegenerateInducedMetric)?;
    let coords = |v: &CV| -> CV { (0..3).map(|a| (0..4).map(|k| left[(a, k)] * v[k]).sum()).collect() };
    Ok(AdaptedFrame {
        point: x,
        tangent_coordinates: [coords(&vectors[0]), coords(&vectors[1]), coords(&vectors[2])],
        vectors,
    })
}

impl AdaptedFrame {
    /// (X, Y, Z) replaced by their images under a complex orthogonal matrix with det 1.
    pub fn rotated(&self, rot: &CMat) -> Result<AdaptedFrame> {
        let residual = (rot.transpose() * rot - CMat::identity(3, 3)).norm() + (rot.determinant() - 1.0).norm();
        if residual > 1e-10 {
            return Err(Error::Precondition {
                what: "frame rotation is not in SO(3, C)".into(),
                residual,
            });
        }
        let mix = |vs: &[CV], a: usize| -> CV { (0..vs[0].len()).map(|k| (0..3).map(|b| rot[(b, a)] * vs[b][k]).sum()).collect() };
        let t = &self.tangent_coordinates;
        let v = &self.vectors;
        Ok(AdaptedFrame {
            point: self.point.clone(),
            vectors: [mix(v, 0), mix(v, 1), mix(v, 2), v[3].clone()],
            tangent_coordinates: [mix(t, 0), mix(t, 1), mix(t, 2)],
        })
    }
}

/// Terms of the normal-derivative identity and the intermediate identities of its proof.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Theorem8Report {
    pub frame: AdaptedFrame,
    /// ⟨(∇_ν W⁺)(X,Y)Z, X⟩ with the curvature sign R(X,Y) = ∇_[X,Y] − [∇_X, ∇_Y]
    /// used by the displayed identity, i.e. minus the value in this crate's convention.
    pub lhs: Complex64,
    /// −C^Q(X,Y)(Y).
    pub rhs: Complex64,
    pub residual: f64,
    /// ⟨W⁺(X,Y)Z, X⟩ and ½(⟨R(X,Y)Y,ν⟩ + ⟨R(Z,X)Z,ν⟩).
    pub w1_lhs: Complex64,
    pub w1_rhs: Complex64,
    /// ⟨R(X,Y)Z,X⟩ + ⟨R(Z,ν)Y,ν⟩.
    pub rq: Complex64,
    /// Same lhs computed as ¼-combination of ∇_ν R.
    pub lhs_from_riemann: Complex64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub geodesic_residual: f64,
}

fn w_minus_norm(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<(f64, f64)> {
    let geo = Geometry::compute(m, p, Level::Curvature)?;
    let split = WeylSplit::new(&geo, Lambda2::at(m, &geo.g, p, orientation)?);
    Ok((split.wminus.norm(), split.curvature.norm()))
}

/// Checks W⁻ = 0 at q and at nearby samples of Q, and that Q is totally geodesic at q.
fn theorem8_preconditions(m: &MetricField, hs: &Hypersurface, q: &[Complex64], orientation: f64) -> Result<(f64, f64)> {
    let mut points = vec![q.to_vec()];
    points.extend(sample_box(0x7e08, 4, q, hs.sample_radius.min(0.05), |_| true));
    let mut worst: f64 = 0.0;
    for pq in &points {
        let (wm, r) = w_minus_norm(m, &hs.point(pq)?, orientation)?;
        worst = worst.max(wm / r.max(1.0));
    }
    if worst > SELF_DUAL_TOL {
        return Err(Error::Precondition {
            what: "W⁻ does not vanish near Q".into(),
            residual: worst,
        });
    }
    let sff = umbilic_check(m, hs, q)?;
    if sff.geodesic_residual > GEODESIC_TOL {
        return Err(Error::Precondition {
            what: "Q is not totally geodesic for this metric".into(),
            residual: sff.geodesic_residual,
        });
    }
    Ok((worst, sff.geodesic_residual))
}

/// The normal-derivative identity without precondition checks.
pub fn theorem8_terms(m: &MetricField, hs: &Hypersurface, q: &[Complex64], orientation: f64) -> Result<Theorem8Report> {
    require_dim(m, 4)?;
    theorem8_in_frame(m, hs, q, adapted_frame(m, hs, q, orientation)?, orientation)
}

/// The normal-derivative identity in a given adapted frame at ι(q).
pub fn theorem8_in_frame(m: &MetricField, hs: &Hypersurface, q: &[Complex64], frame: AdaptedFrame, orientation: f64) -> Result<Theorem8Report> {
    require_dim(m, 4)?;
    check_frame(m, &frame.point, &frame.vectors, orientation)?;
    let p = &frame.point;
    let geo = Geometry::compute(m, p, Level::Derivatives)?;
    let split = WeylSplit::new(&geo, Lambda2::at(m, &geo.g, p, orientation)?);
    let (wp, wm) = split.coordinate_tensors();
    let [x, y, z, nu] = &frame.vectors;

    // ∇_ν W⁺ = P⁺ (∇_ν W) P⁺, evaluated on (X∧Y, Z∧X) through the ¼-combination.
    let nw = nabla_weyl(&geo);
    let n4 = 256;
    let mut slice = Tensor::zeros(4, 4);
    for (a, na) in nu.iter().enumerate() {
        for k in 0..n4 {
            slice.data[k] += na * nw.data[a * n4 + k];
        }
    }
    let mut nr = Tensor::zeros(4, 4);
    for (a, na) in nu.iter().enumerate() {
        for k in 0..n4 {
            nr.data[k] += na * geo.nabla_riemann.data[a * n4 + k];
        }
    }
    let quarter = |t: &Tensor| 0.25 * (contract4(t, [x, y, z, x]) + contract4(t, [z, nu, y, nu]) + contract4(t, [x, y, y, nu]) + contract4(t, [z, nu, z, x]));
    let lhs = -quarter(&slice);
    let lhs_from_riemann = -quarter(&nr);

    let mq = hs.induced_metric(m)?;
    let cq = cotton3(&mq, q)?;
    let [xq, yq, _] = &frame.tangent_coordinates;
    let mut rhs = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                rhs -= cq.at(&[i, j, k]) * xq[i] * yq[j] * yq[k];
            }
        }
    }
    let r = |a: &CV, b: &CV, c: &CV, d: &CV| geo.riemann_apply(a, b, c, d);
    let scale = lhs.norm().max(rhs.norm()).max(1.0);
    let sff = umbilic_check(m, hs, q)?;
    Ok(Theorem8Report {
        lhs,
        rhs,
        residual: (lhs - rhs).norm() / scale,
        w1_lhs: contract4(&wp, [x, y, z, x]),
        w1_rhs: 0.5 * (r(x, y, y, nu) + r(z, x, z, nu)),
        rq: r(x, y, z, x) + r(z, nu, y, nu),
        lhs_from_riemann,
        w_plus: wp.norm(),
        w_minus: wm.norm(),
        geodesic_residual: sff.geodesic_residual,
        frame,
    })
}

/// The normal-derivative identity on a self-dual ambient with totally geodesic Q.
pub fn theorem8_identity(m: &MetricField, hs: &Hypersurface, q: &[Complex64], orientation: f64) -> Result<Theorem8Report> {
    theorem8_preconditions(m, hs, q, orientation)?;
    theorem8_terms(m, hs, q, orientation)
}

/// C⁺(X,Y)(Z) of the ambient against C^Q(X,Y)(Z) on an adapted frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorollaryReport {
    /// Entries [a][b][c] for a, b, c over X, Y, Z.
    pub ambient_plus: Vec<Vec<Vec<Complex64>>>,
    pub intrinsic: Vec<Vec<Vec<Complex64>>>,
    pub residual: f64,
    pub scale: f64,
}

pub fn corollary_terms(m: &MetricField, hs: &Hypersurface, q: &[Complex64], orientation: f64) -> Result<CorollaryReport> {
    require_dim(m, 4)?;
    let frame = adapted_frame(m, hs, q, orientation)?;
    let geo = Geometry::compute(m, &frame.point, Level::Derivatives)?;
    let e = &frame.vectors;
    let c = |i: usize, j: usize, k: usize| {
        let mut v = ZERO;
        for a in 0..4 {
            for b in 0..4 {
                for d in 0..4 {
                    v += geo.cotton.at(&[a, b, d]) * e[i][a] * e[j][b] * e[k][d];
                }
            }
        }
        v
    };
    let mut cf = [[[ZERO; 4]; 4]; 4];
    for (i, ci) in cf.iter_mut().enumerate() {
        for (j, cij) in ci.iter_mut().enumerate() {
            for (k, v) in cij.iter_mut().enumerate() {
                *v = c(i, j, k);
            }
        }
    }
    let plus = |i: usize, j: usize, k: usize| {
        let mut star = ZERO;
        for a in 0..4 {
            for b in a + 1..4 {
                let s = perm_sign(&[i, j, a, b]);
                if s != 0.0 {
                    star += s * cf[a][b][k];
                }
            }
        }
        0.5 * (cf[i][j][k] + star)
    };
    let cq = cotton3(&hs.induced_metric(m)?, q)?;
    let t = &frame.tangent_coordinates;
    let intrinsic = |i: usize, j: usize, k: usize| {
        let mut v = ZERO;
        for a in 0..3 {
            for b in 0..3 {
                for d in 0..3 {
                    v += cq.at(&[a, b, d]) * t[i][a] * t[j][b] * t[k][d];
                }
            }
        }
        v
    };
    let mut amb = vec![vec![vec![ZERO; 3]; 3]; 3];
    let mut intr = vec![vec![vec![ZERO; 3]; 3]; 3];
    let (mut residual, mut scale) = (0.0f64, 0.0f64);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                amb[i][j][k] = plus(i, j, k);
                intr[i][j][k] = intrinsic(i, j, k);
                residual = residual.max((amb[i][j][k] - intr[i][j][k]).norm());
                scale = scale.max(intr[i][j][k].norm()).max(amb[i][j][k].norm());
            }
        }
    }
    Ok(CorollaryReport {
        ambient_plus: amb,
        intrinsic: intr,
        residual,
        scale,
    })
}

pub fn corollary_cumb_check(m: &MetricField, hs: &Hypersurface, q: &[Complex64], orientation: f64) -> Result<CorollaryReport> {
    theorem8_preconditions(m, hs, q, orientation)?;
    corollary_terms(m, hs, q, orientation)
}
