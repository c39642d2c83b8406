//! Totally geodesic surfaces, their induced projective structure and the
//! Thomas tensor.
//!
//! Conventions on a surface with coordinates (s1, s2):
//! * `gamma[c,a,b]` = Γ^c_ab with ∇_{∂a}∂b = Γ^c_ab ∂c.
//! * `K[y,x]` = K(Y)X = tr(Z ↦ R(Z,Y)X).
//! * `T[x,y,z]` = −2(∇_Z K)(Y)X + 2(∇_Y K)(Z)X − (∇_Z K)(X)Y + (∇_Y K)(X)Z.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::sample_box;
use crate::core_tensor::{Geometry, Level, MetricField, Tensor};
use crate::error::{Error, Result};
use crate::expr_ad::HoloExpr;
use crate::geodesic_jacobi::integrate_geodesic;
use crate::linalg::{norm, CMat, ZERO};
use crate::taylor::{Taylor, TaylorMat};

/// Normal part of ∇_X Y allowed for a totally geodesic surface, relative to ‖dσ‖².
pub const TOTALLY_GEODESIC_TOL: f64 = 1e-6;
/// Smallest admissible ratio of singular values of dσ.
pub const RANK_TOL: f64 = 1e-8;

type CV = Vec<Complex64>;

#[derive(Debug, Clone)]
pub struct EmbeddedSurface {
    pub name: String,
    pub map: Vec<HoloExpr>,
    pub basepoint: Vec<Complex64>,
    pub sample_radius: f64,
    first: Vec<HoloExpr>,
    second: Vec<HoloExpr>,
}

impl EmbeddedSurface {
    pub fn new(name: &str, map: Vec<HoloExpr>, basepoint: Vec<Complex64>, sample_radius: f64) -> Self {
        // first[k*2+a] = ∂a σ^k, second[(k*2+a)*2+b] = ∂a∂b σ^k
        let first: Vec<HoloExpr> = map.iter().flat_map(|e| (0..2).map(move |a| e.derivative(a))).collect();
        let second = first.iter().flat_map(|e| (0..2).map(move |b| e.derivative(b))).collect();
        EmbeddedSurface {
            name: name.into(),
            map,
            basepoint,
            sample_radius,
            first,
            second,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.len()
    }

    pub fn point(&self, s: &[Complex64]) -> Result<CV> {
        Ok(self.map.iter().map(|e| e.eval(s)).collect::<std::result::Result<_, _>>()?)
    }

    /// dσ as an n×2 matrix.
    pub fn differential(&self, s: &[Complex64]) -> Result<CMat> {
        let n = self.ambient_dim();
        let vals = self.first.iter().map(|e| e.eval(s)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CMat::from_fn(n, 2, |k, a| vals[k * 2 + a]))
    }

    /// Coordinate tangent vectors, after checking that dσ has rank 2.
    pub fn tangent_plane(&self, s: &[Complex64]) -> Result<(CV, CV)> {
        let d = self.differential(s)?;
        let sv = d.clone().svd(false, false).singular_values;
        if sv[0] == 0.0 || sv[1] / sv[0] < RANK_TOL {
            return Err(Error::RankDeficient);
        }
        Ok((d.column(0).iter().copied().collect(), d.column(1).iter().copied().collect()))
    }

    pub fn sample_parameters(&self, seed: u64, count: usize) -> Vec<CV> {
        sample_box(seed, count, &self.basepoint, self.sample_radius, |_| true)
    }

    /// Surface parameters of an ambient point near the surface, by Gauss–Newton from `guess`.
    pub fn locate(&self, x: &[Complex64], guess: &[Complex64]) -> Result<CV> {
        let mut s = guess.to_vec();
        for _ in 0..50 {
            let r: CV = self.point(&s)?.iter().zip(x).map(|(a, b)| b - a).collect();
            let d = self.differential(&s)?;
            let rhs = CMat::from_fn(r.len(), 1, |i, _| r[i]);
            let step = d.svd(true, true).solve(&rhs, 1e-14).map_err(|_| Error::RankDeficient)?;
            s[0] += step[0];
            s[1] += step[1];
            if step.norm() < 1e-15 * (1.0 + norm(&s)) {
                break;
            }
        }
        Ok(s)
    }

    fn jets(&self, exprs: &[HoloExpr], s: &[Complex64], order: usize) -> Result<Vec<Taylor>> {
        exprs
            .iter()
            .map(|e| Ok(Taylor::from_jet(&e.eval_jet3(s)?, order)))
            .collect()
    }
}

/// Induced connection at one surface point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InducedConnection {
    pub parameters: Vec<Complex64>,
    /// Γ^c_ab, index [c, a, b].
    pub gamma: Tensor,
    /// ‖(∇_{∂a}∂b)^⊥‖ / ‖dσ‖², maximised over a, b.
    pub residual: f64,
}

/// Γ^S as order-2 jets in (s1, s2), with the normal residual at `s`.
fn connection_jets(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<(Vec<Taylor>, f64)> {
    let n = m.dim();
    if surf.ambient_dim() != n {
        return Err(Error::Dimension { want: n, got: surf.ambient_dim() });
    }
    let x0 = surf.point(s)?;
    let geo = Geometry::compute(m, &x0, Level::Derivatives)?;
    let sigma = surf.jets(&surf.map, s, 2)?;
    let d1 = surf.jets(&surf.first, s, 2)?;
    let d2 = surf.jets(&surf.second, s, 2)?;
    let dx: Vec<Taylor> = sigma
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.v = ZERO;
            t
        })
        .collect();
    // Ambient Γ^k_ij along σ to second order.
    let mut gam: Vec<Taylor> = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut t = Taylor::constant(2, 2, geo.christoffel.at(&[k, i, j]));
                for a in 0..n {
                    t = &t + &dx[a].scale(geo.dchristoffel.at(&[a, k, i, j]));
                    for b in 0..n {
                        let c = 0.5 * geo.ddchristoffel.at(&[a, b, k, i, j]);
                        if c != ZERO {
                            t = &t + &dx[a].mul_to(&dx[b], 2).scale(c);
                        }
                    }
                }
                gam.push(t);
            }
        }
    }
    let tangent = |k: usize, a: usize| &d1[k * 2 + a];
    // V_ab = σ_ab + Γ(σ_a, σ_b)
    let mut v: Vec<Taylor> = Vec::with_capacity(n * 4);
    for k in 0..n {
        for a in 0..2 {
            for b in 0..2 {
                let mut t = d2[(k * 2 + a) * 2 + b].clone();
                for i in 0..n {
                    for j in 0..n {
                        let prod = tangent(i, a).mul_to(tangent(j, b), 2);
                        t.add_assign_mul(&gam[(k * n + i) * n + j], &prod);
                    }
                }
                v.push(t);
            }
        }
    }
    // Left inverse L = (Bᵀ dσ)⁻¹ Bᵀ with B = conj dσ(s) frozen.
    let bmat: Vec<Complex64> = (0..n * 2).map(|k| d1[k].v.conj()).collect();
    let mut mt = Vec::with_capacity(4);
    for c in 0..2 {
        for d in 0..2 {
            let mut t = Taylor::zero(2, 2);
            for k in 0..n {
                t = &t + &tangent(k, d).scale(bmat[k * 2 + c]);
            }
            mt.push(t);
        }
    }
    let minv = TaylorMat { dim: 2, e: mt }.inverse(2).ok_or(Error::RankDeficient)?;
    let mut gamma_s = Vec::with_capacity(8);
    for c in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let mut t = Taylor::zero(2, 2);
                for d in 0..2 {
                    for k in 0..n {
                        let w = bmat[k * 2 + d];
                        if w != ZERO {
                            t.add_assign_mul(minv.get(c, d), &v[(k * 2 + a) * 2 + b].scale(w));
                        }
                    }
                }
                gamma_s.push(t);
            }
        }
    }
    let scale = (0..n * 2).map(|k| d1[k].v.norm_sqr()).sum::<f64>();
    let mut residual: f64 = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let r: f64 = (0..n)
                .map(|k| {
                    let tang: Complex64 = (0..2).map(|c| gamma_s[(c * 2 + a) * 2 + b].v * d1[k * 2 + c].v).sum();
                    (v[(k * 2 + a) * 2 + b].v - tang).norm_sqr()
                })
                .sum::<f64>()
                .sqrt();
            residual = residual.max(crate::linalg::relative(r, scale));
        }
    }
    Ok((gamma_s, residual))
}

fn checked_jets(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<Vec<Taylor>> {
    surf.tangent_plane(s)?;
    let (g, residual) = connection_jets(m, surf, s)?;
    if residual > TOTALLY_GEODESIC_TOL {
        return Err(Error::NotTotallyGeodesic { residual });
    }
    Ok(g)
}

/// Normal part of ∇_{∂a}∂b relative to ‖dσ‖², without thresholding.
pub fn totally_geodesic_residual(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<f64> {
    surf.tangent_plane(s)?;
    Ok(connection_jets(m, surf, s)?.1)
}

pub fn induced_connection(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<InducedConnection> {
    surf.tangent_plane(s)?;
    let (g, residual) = connection_jets(m, surf, s)?;
    if residual > TOTALLY_GEODESIC_TOL {
        return Err(Error::NotTotallyGeodesic { residual });
    }
    Ok(InducedConnection {
        parameters: s.to_vec(),
        gamma: values(&g, 3),
        residual,
    })
}

fn values(t: &[Taylor], rank: usize) -> Tensor {
    Tensor {
        n: 2,
        rank,
        data: t.iter().map(|x| x.v).collect(),
    }
}

/// K and ∇K of a 2D connection given by order-2 jets.
fn k_chain(gamma: &[Taylor]) -> (Tensor, Tensor) {
    let gi = |k: usize, i: usize, j: usize| &gamma[(k * 2 + i) * 2 + j];
    // R^a_bcd = ∂cΓ^a_db − ∂dΓ^a_cb + Γ^a_ceΓ^e_db − Γ^a_deΓ^e_cb
    let r = |a: usize, b: usize, c: usize, d: usize| {
        let mut t = (&gi(a, d, b).partial(c) - &gi(a, c, b).partial(d)).truncate(1);
        for e in 0..2 {
            t.add_assign_mul(gi(a, c, e), gi(e, d, b));
            t = &t - &gi(a, d, e).mul_to(gi(e, c, b), 1);
        }
        t
    };
    let mut k = Vec::with_capacity(4);
    for y in 0..2 {
        for x in 0..2 {
            let mut t = Taylor::zero(2, 1);
            for c in 0..2 {
                t = &t + &r(c, x, c, y);
            }
            k.push(t);
        }
    }
    let kv = values(&k, 2);
    let mut nk = Tensor::zeros(2, 3);
    for m in 0..2 {
        for y in 0..2 {
            for x in 0..2 {
                let mut v = k[y * 2 + x].d1[m];
                for a in 0..2 {
                    v -= gi(a, m, y).v * kv.at(&[a, x]) + gi(a, m, x).v * kv.at(&[y, a]);
                }
                nk.set(&[m, y, x], v);
            }
        }
    }
    (kv, nk)
}

/// Thomas tensor components, index [x, y, z].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThomasTensor {
    pub components: Tensor,
}

impl ThomasTensor {
    /// Assemble T from ∇K, index [m, y, x] = (∇_m K)(Y)X.
    pub fn from_nabla_k(nk: &Tensor) -> ThomasTensor {
        let d = |m: usize, y: usize, x: usize| nk.at(&[m, y, x]);
        let mut t = Tensor::zeros(2, 3);
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let v = -2.0 * d(z, y, x) + 2.0 * d(y, z, x) - d(z, x, y) + d(y, x, z);
                    t.set(&[x, y, z], v);
                }
            }
        }
        ThomasTensor { components: t }
    }

    pub fn apply(&self, x: &[Complex64], y: &[Complex64], z: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    acc += self.components.at(&[a, b, c]) * x[a] * y[b] * z[c];
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.components.norm()
    }

    /// max |T(X,Y,Z) + T(X,Z,Y)| over coordinate slots.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let s = self.components.at(&[x, y, z]) + self.components.at(&[x, z, y]);
                    worst = worst.max(s.norm());
                }
            }
        }
        worst
    }
}

/// K(Y)X of the induced connection, index [y, x].
pub fn k_tensor(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<Tensor> {
    Ok(k_chain(&checked_jets(m, surf, s)?).0)
}

/// Thomas tensor from the induced connection's jets.
pub fn thomas_tensor(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<ThomasTensor> {
    Ok(ThomasTensor::from_nabla_k(&k_chain(&checked_jets(m, surf, s)?).1))
}

/// Thomas tensor of a connection on a 2D chart given by Γ^c_ab expressions, index [c, a, b].
pub fn thomas_from_connection(gamma: &[HoloExpr], s: &[Complex64]) -> Result<ThomasTensor> {
    if gamma.len() != 8 {
        return Err(Error::Dimension { want: 8, got: gamma.len() });
    }
    let jets = gamma
        .iter()
        .map(|e| Ok(Taylor::from_jet(&e.eval_jet3(s)?, 2)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThomasTensor::from_nabla_k(&k_chain(&jets).1))
}

/// Ambient tensors restricted to a totally geodesic surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmbientRestriction {
    /// tr over TS of Z ↦ R(Z,Y)X, index [y, x].
    pub k: Tensor,
    /// tr over TS of Z ↦ (∇_W R)(Z,Y)X, index [w, y, x].
    pub nabla_k: Tensor,
    /// h(X, Y), index [x, y].
    pub schouten: Tensor,
    /// C(Y,Z)(X), index [x, y, z].
    pub cotton: Tensor,
}

pub fn ambient_restriction(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<AmbientRestriction> {
    let (u, w) = surf.tangent_plane(s)?;
    let residual = totally_geodesic_residual(m, surf, s)?;
    if residual > TOTALLY_GEODESIC_TOL {
        return Err(Error::NotTotallyGeodesic { residual });
    }
    let x = surf.point(s)?;
    let geo = Geometry::compute(m, &x, Level::Derivatives)?;
    let n = m.dim();
    let basis = [u, w];
    let d = CMat::from_fn(n, 2, |k, a| basis[a][k]);
    let left = d.clone().pseudo_inverse(1e-14).map_err(|_| Error::RankDeficient)?;
    let coords = |v: &[Complex64]| -> [Complex64; 2] {
        let mut out = [ZERO; 2];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (0..n).map(|k| left[(c, k)] * v[k]).sum();
        }
        out
    };
    let mut k = Tensor::zeros(2, 2);
    let mut nk = Tensor::zeros(2, 3);
    for y in 0..2 {
        for xx in 0..2 {
            let mut acc = ZERO;
            for c in 0..2 {
                acc += coords(&geo.curvature_apply(&basis[c], &basis[y], &basis[xx]))[c];
            }
            k.set(&[y, xx], acc);
            for wi in 0..2 {
                let mut acc = ZERO;
                for c in 0..2 {
                    let lowered: CV = (0..n)
                        .map(|l| {
                            let mut v = ZERO;
                            for (i, zi) in basis[c].iter().enumerate() {
                                for (j, yj) in basis[y].iter().enumerate() {
                                    for (kk, xk) in basis[xx].iter().enumerate() {
                                        for (mm, wm) in basis[wi].iter().enumerate() {
                                            v += geo.nabla_riemann.at(&[mm, i, j, kk, l]) * wm * zi * yj * xk;
                                        }
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    acc += coords(&geo.raise(&lowered))[c];
                }
                nk.set(&[wi, y, xx], acc);
            }
        }
    }
    let mut h = Tensor::zeros(2, 2);
    let mut cy = Tensor::zeros(2, 3);
    for a in 0..2 {
        for b in 0..2 {
            let mut v = ZERO;
            for i in 0..n {
                for j in 0..n {
                    v += geo.schouten.at(&[i, j]) * basis[a][i] * basis[b][j];
                }
            }
            h.set(&[a, b], v);
            for c in 0..2 {
                // C(Y,Z)(X) = cotton[Y, Z, X]
                let mut v = ZERO;
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            v += geo.cotton.at(&[i, j, l]) * basis[b][i] * basis[c][j] * basis[a][l];
                        }
                    }
                }
                cy.set(&[a, b, c], v);
            }
        }
    }
    Ok(AmbientRestriction {
        k,
        nabla_k: nk,
        schouten: h,
        cotton: cy,
    })
}

/// Thomas tensor assembled from ambient ∇R traced over TS.
pub fn thomas_tensor_ambient(m: &MetricField, surf: &EmbeddedSurface, s: &[Complex64]) -> Result<ThomasTensor> {
    Ok(ThomasTensor::from_nabla_k(&ambient_restriction(m, surf, s)?.nabla_k))
}

fn det2(p: &[Complex64], q: &[Complex64]) -> Complex64 {
    p[0] * q[1] - p[1] * q[0]
}

fn det3(p: &[Complex64], q: &[Complex64], r: &[Complex64]) -> Complex64 {
    p[0] * (q[1] * r[2] - q[2] * r[1]) - p[1] * (q[0] * r[2] - q[2] * r[0]) + p[2] * (q[0] * r[1] - q[1] * r[0])
}

fn cross(p: &[Complex64], q: &[Complex64]) -> CV {
    vec![p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
}

/// Cross-ratio (p1, p2; p3, p4) = [p3,p1][p2,p4] / ([p3,p4][p2,p1]) of four points on a
/// projective line, given homogeneously in P¹ or as collinear points of P².
pub fn cross_ratio(p: [&[Complex64]; 4]) -> Result<Complex64> {
    let dim = p[0].len();
    if p.iter().any(|x| x.len() != dim) || !(2..=3).contains(&dim) {
        return Err(Error::Dimension { want: 2, got: dim });
    }
    let bracket: Box<dyn Fn(&[Complex64], &[Complex64]) -> Complex64> = if dim == 2 {
        Box::new(det2)
    } else {
        let o: CV = cross(p[0], p[1]).iter().map(|z| z.conj()).collect();
        if norm(&o) < 1e-12 * norm(p[0]) * norm(p[1]) {
            return Err(Error::CoincidentPoints);
        }
        for q in &p[2..] {
            let off = det3(p[0], p[1], q).norm() / (norm(&o) * norm(q));
            if off > 1e-8 {
                return Err(Error::Precondition {
                    what: "points are not collinear".into(),
                    residual: off,
                });
            }
        }
        Box::new(move |a, b| det3(a, b, &o))
    };
    for i in 0..4 {
        for j in i + 1..4 {
            let scale = norm(p[i]) * norm(p[j]) * if dim == 3 { norm(&cross(p[0], p[1])) } else { 1.0 };
            if bracket(p[i], p[j]).norm() <= 1e-12 * scale {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    Ok(bracket(p[2], p[0]) * bracket(p[1], p[3]) / (bracket(p[2], p[3]) * bracket(p[1], p[0])))
}

/// The point A = [1 : x1 : x2] of a chart point (x, y) of the ℂP² complexification.
pub fn cp2_point(z: &[Complex64]) -> CV {
    vec![Complex64::new(1.0, 0.0), z[0], z[1]]
}

/// The line a = ker(1, y1, y2) of a chart point (x, y).
pub fn cp2_line(z: &[Complex64]) -> CV {
    vec![Complex64::new(1.0, 0.0), z[2], z[3]]
}

/// Both sides of (A,B; C,L) = (a,b; c,l) along one null geodesic in a β-surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossRatioCheck {
    pub points: Complex64,
    pub lines: Complex64,
    pub residual: f64,
}

/// Integrates the geodesic σ(s0) + t dσ(ṡ) + …, samples it at the three given
/// step indices and compares the point and line cross-ratios against the flag (L, l).
pub fn cp2_geodesic_cross_ratio(
    m: &MetricField,
    surf: &EmbeddedSurface,
    flag: (&[Complex64], &[Complex64]),
    s0: &[Complex64],
    sdot: &[Complex64],
    t_end: f64,
    steps: usize,
    picks: [usize; 3],
) -> Result<CrossRatioCheck> {
    let x0 = surf.point(s0)?;
    let (u, w) = surf.tangent_plane(s0)?;
    let v0: CV = u.iter().zip(&w).map(|(a, b)| a * sdot[0] + b * sdot[1]).collect();
    let path = integrate_geodesic(m, &x0, &v0, t_end, steps)?;
    let at = |k: usize| path.states.get(k).map(|s| s.x.clone()).ok_or(Error::InsufficientSamples { got: path.len(), need: k + 1 });
    let xs = [at(picks[0])?, at(picks[1])?, at(picks[2])?];
    let (pa, pb, pc) = (cp2_point(&xs[0]), cp2_point(&xs[1]), cp2_point(&xs[2]));
    let (la, lb, lc) = (cp2_line(&xs[0]), cp2_line(&xs[1]), cp2_line(&xs[2]));
    let points = cross_ratio([&pa, &pb, &pc, flag.0])?;
    let lines = cross_ratio([&la, &lb, &lc, flag.1])?;
    Ok(CrossRatioCheck {
        points,
        lines,
        residual: crate::linalg::relative((points - lines).norm(), points.norm().max(1.0)),
    })
}

#[cfg(test)]
mod tests;
