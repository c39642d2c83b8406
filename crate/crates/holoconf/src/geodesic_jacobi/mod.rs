//! Null geodesics, Jacobi fields and the conformally invariant operator P.
//!
//! Paths are traced over a real parameter with fixed-step RK4. Jacobi fields
//! are integrated together with the geodesic as the first-order system
//! J' = DJ − Γ(v, J), (DJ)' = R(v, J)v − Γ(v, DJ).

mod spline;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use spline::CubicSpline;

use crate::core_tensor::{Geometry, Lambda2, Level, MetricField};
use crate::error::{Error, Result};
use crate::isotropic::{classify_with, PlaneLabel};
use crate::linalg::{bilinear, norm, CMat, ZERO};

pub const DRIFT_LIMIT: f64 = 1e-5;
pub const MIN_STEPS: usize = 16;
pub const MIN_SPLINE_SAMPLES: usize = 9;

type CV = Vec<Complex64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub t: f64,
    pub x: CV,
    pub v: CV,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiState {
    pub t: f64,
    pub j: CV,
    pub dj: CV,
}

/// Sampled geodesic with the isotropy residual |g(v,v)|/‖v‖² at each sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub states: Vec<GeodesicState>,
    pub isotropy: Vec<f64>,
    pub dt: f64,
}

impl GeodesicPath {
    pub fn t_end(&self) -> f64 {
        self.states.last().map_or(0.0, |s| s.t)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn max_isotropy(&self) -> f64 {
        self.isotropy.iter().copied().fold(0.0, f64::max)
    }
}

fn axpy(a: Complex64, x: &[Complex64], y: &[Complex64]) -> CV {
    x.iter().zip(y).map(|(p, q)| a * p + q).collect()
}

fn add(x: &[Complex64], y: &[Complex64]) -> CV {
    x.iter().zip(y).map(|(p, q)| p + q).collect()
}

fn sub(x: &[Complex64], y: &[Complex64]) -> CV {
    x.iter().zip(y).map(|(p, q)| p - q).collect()
}

fn scale(a: Complex64, x: &[Complex64]) -> CV {
    x.iter().map(|p| a * p).collect()
}

/// Generic RK4 step for a state split into equal-length blocks.
fn rk4_step(state: &[CV], h: f64, f: &mut dyn FnMut(&[CV]) -> Result<Vec<CV>>) -> Result<Vec<CV>> {
    let hc = Complex64::new(h, 0.0);
    let half = Complex64::new(h / 2.0, 0.0);
    let shift = |s: &[CV], k: &[CV], a: Complex64| -> Vec<CV> { s.iter().zip(k).map(|(x, d)| axpy(a, d, x)).collect() };
    let k1 = f(state)?;
    let k2 = f(&shift(state, &k1, half))?;
    let k3 = f(&shift(state, &k2, half))?;
    let k4 = f(&shift(state, &k3, hc))?;
    let sixth = Complex64::new(h / 6.0, 0.0);
    Ok((0..state.len())
        .map(|b| {
            let mut out = state[b].clone();
            for i in 0..out.len() {
                out[i] += sixth * (k1[b][i] + 2.0 * k2[b][i] + 2.0 * k3[b][i] + k4[b][i]);
            }
            out
        })
        .collect())
}

fn isotropy(g: &CMat, v: &[Complex64]) -> f64 {
    crate::linalg::relative(bilinear(g, v, v).norm(), norm(v).powi(2))
}

/// RK4 integration of ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0 for t ∈ [0, t_end].
pub fn integrate_geodesic(m: &MetricField, x0: &[Complex64], v0: &[Complex64], t_end: f64, steps: usize) -> Result<GeodesicPath> {
    if steps < MIN_STEPS {
        return Err(Error::InsufficientSamples { got: steps, need: MIN_STEPS });
    }
    let g0 = m.metric_at(x0)?;
    let res = bilinear(&g0, v0, v0).norm();
    if res > 1e-10 * norm(v0).powi(2).max(1.0) {
        return Err(Error::NotIsotropic { residual: res });
    }
    let h = t_end / steps as f64;
    let mut rhs = |s: &[CV]| -> Result<Vec<CV>> {
        let geo = Geometry::compute(m, &s[0], Level::Connection)?;
        Ok(vec![s[1].clone(), scale(-Complex64::new(1.0, 0.0), &geo.gamma_apply(&s[1], &s[1]))])
    };
    let mut state = vec![x0.to_vec(), v0.to_vec()];
    let mut states = vec![GeodesicState {
        t: 0.0,
        x: x0.to_vec(),
        v: v0.to_vec(),
    }];
    let mut iso = vec![isotropy(&g0, v0)];
    for k in 1..=steps {
        state = rk4_step(&state, h, &mut rhs)?;
        let t = k as f64 * h;
        let g = m.metric_at(&state[0])?;
        let r = isotropy(&g, &state[1]);
        if r > DRIFT_LIMIT {
            return Err(Error::IsotropyDrift { t, residual: r });
        }
        iso.push(r);
        states.push(GeodesicState {
            t,
            x: state[0].clone(),
            v: state[1].clone(),
        });
    }
    Ok(GeodesicPath {
        states,
        isotropy: iso,
        dt: h,
    })
}

/// Jacobi field along `path` with J(0) = j0, ∇J(0) = dj0.
pub fn integrate_jacobi(m: &MetricField, path: &GeodesicPath, j0: &[Complex64], dj0: &[Complex64]) -> Result<Vec<JacobiState>> {
    let first = path.states.first().ok_or(Error::InsufficientSamples { got: 0, need: 2 })?;
    let mut rhs = |s: &[CV]| -> Result<Vec<CV>> {
        let geo = Geometry::compute(m, &s[0], Level::Curvature)?;
        let (v, j, p) = (&s[1], &s[2], &s[3]);
        let acc = scale(-Complex64::new(1.0, 0.0), &geo.gamma_apply(v, v));
        let jdot = sub(p, &geo.gamma_apply(v, j));
        let pdot = sub(&geo.curvature_apply(v, j, v), &geo.gamma_apply(v, p));
        Ok(vec![v.clone(), acc, jdot, pdot])
    };
    let mut state = vec![first.x.clone(), first.v.clone(), j0.to_vec(), dj0.to_vec()];
    let mut out = vec![JacobiState {
        t: 0.0,
        j: j0.to_vec(),
        dj: dj0.to_vec(),
    }];
    for k in 1..path.states.len() {
        state = rk4_step(&state, path.dt, &mut rhs)?;
        out.push(JacobiState {
            t: k as f64 * path.dt,
            j: state[2].clone(),
            dj: state[3].clone(),
        });
    }
    Ok(out)
}

/// Parallel transport of w0 along `path`: ẇ = −Γ(v, w).
pub fn parallel_transport(m: &MetricField, path: &GeodesicPath, w0: &[Complex64]) -> Result<Vec<CV>> {
    let first = path.states.first().ok_or(Error::InsufficientSamples { got: 0, need: 2 })?;
    let mut rhs = |s: &[CV]| -> Result<Vec<CV>> {
        let geo = Geometry::compute(m, &s[0], Level::Connection)?;
        let acc = scale(-Complex64::new(1.0, 0.0), &geo.gamma_apply(&s[1], &s[1]));
        Ok(vec![s[1].clone(), acc, scale(-Complex64::new(1.0, 0.0), &geo.gamma_apply(&s[1], &s[2]))])
    };
    let mut state = vec![first.x.clone(), first.v.clone(), w0.to_vec()];
    let mut out = vec![w0.to_vec()];
    for _ in 1..path.states.len() {
        state = rk4_step(&state, path.dt, &mut rhs)?;
        out.push(state[2].clone());
    }
    Ok(out)
}

/// Projection TM|γ → complement of γ̇ along γ, the complement being the
/// g-orthogonal of a parallel field N with g(γ̇, N) ≠ 0 chosen at t = 0.
#[derive(Debug, Clone)]
pub struct NormalProjector {
    transversal: Vec<CV>,
    metrics: Vec<CMat>,
    velocities: Vec<CV>,
}

impl NormalProjector {
    pub fn new(m: &MetricField, path: &GeodesicPath) -> Result<NormalProjector> {
        let s0 = &path.states[0];
        let g0 = m.metric_at(&s0.x)?;
        // Conjugate of g·v pairs with v to ‖g v‖²; it is transverse to γ̇.
        let gv: CV = (0..s0.v.len())
            .map(|i| (0..s0.v.len()).map(|j| g0[(i, j)] * s0.v[j]).sum::<Complex64>())
            .collect();
        let n0: CV = gv.iter().map(|x| x.conj()).collect();
        let transversal = parallel_transport(m, path, &n0)?;
        let metrics = path.states.iter().map(|s| m.metric_at(&s.x)).collect::<Result<Vec<_>>>()?;
        Ok(NormalProjector {
            transversal,
            metrics,
            velocities: path.states.iter().map(|s| s.v.clone()).collect(),
        })
    }

    /// Component of `w` in the transported complement at sample `k`.
    pub fn project(&self, k: usize, w: &[Complex64]) -> CV {
        let g = &self.metrics[k];
        let n = &self.transversal[k];
        let v = &self.velocities[k];
        let c = bilinear(g, w, n) / bilinear(g, v, n);
        axpy(-c, v, w)
    }

    /// Component of `w` in γ̇⊥, removed along the transversal at sample `k`.
    pub fn orthogonal(&self, k: usize, w: &[Complex64]) -> CV {
        let g = &self.metrics[k];
        let n = &self.transversal[k];
        let v = &self.velocities[k];
        let c = bilinear(g, w, v) / bilinear(g, n, v);
        axpy(-c, n, w)
    }
}

/// A vector field along the path, given by samples on a uniform grid of [0, T].
#[derive(Debug, Clone)]
pub struct AlongField {
    spline: CubicSpline,
}

impl AlongField {
    pub fn from_samples(t_end: f64, samples: &[CV]) -> Result<AlongField> {
        if samples.len() < MIN_SPLINE_SAMPLES {
            return Err(Error::InsufficientSamples {
                got: samples.len(),
                need: MIN_SPLINE_SAMPLES,
            });
        }
        Ok(AlongField {
            spline: CubicSpline::uniform(0.0, t_end, samples),
        })
    }

    /// Value and first two t-derivatives.
    pub fn eval(&self, t: f64) -> (CV, CV, CV) {
        self.spline.eval(t)
    }
}

/// P(Y, γ̇, γ̇) = ∇γ̇∇γ̇Y − ∇_{∇γ̇γ̇}Y − R(γ̇, Y)γ̇ at every path sample, for the
/// Levi-Civita connection of `m`. The path may be a geodesic of another
/// metric in the conformal class; ∇γ̇γ̇ must then be proportional to γ̇.
pub fn jacobi_operator_p(m: &MetricField, path: &GeodesicPath, geodesic_of: &MetricField, y: &AlongField) -> Result<Vec<CV>> {
    let mut out = Vec::with_capacity(path.states.len());
    for s in &path.states {
        let geo = Geometry::compute(m, &s.x, Level::Curvature)?;
        let acc = {
            let gp = Geometry::compute(geodesic_of, &s.x, Level::Connection)?;
            scale(-Complex64::new(1.0, 0.0), &gp.gamma_apply(&s.v, &s.v))
        };
        let (yv, yd, ydd) = y.eval(s.t);
        let v = &s.v;
        let nabla_y = add(&yd, &geo.gamma_apply(v, &yv));
        let d_nabla_y = add(
            &add(&ydd, &geo.dgamma_apply(v, v, &yv)),
            &add(&geo.gamma_apply(&acc, &yv), &geo.gamma_apply(v, &yd)),
        );
        let nn_y = add(&d_nabla_y, &geo.gamma_apply(v, &nabla_y));
        let nabla_vv = add(&acc, &geo.gamma_apply(v, v));
        let vv: f64 = norm(v).powi(2);
        let mu: Complex64 = nabla_vv.iter().zip(v).map(|(a, b)| a * b.conj()).sum::<Complex64>() / vv;
        let r = geo.curvature_apply(v, &yv, v);
        out.push(sub(&sub(&nn_y, &scale(mu, &nabla_y)), &r));
    }
    Ok(out)
}

/// Curvature of the α-cone at a point: ⟨W⁺(v, X)v, X⟩ for X spanning F mod v.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaConeCurvature {
    pub point: CV,
    pub v: CV,
    pub x: CV,
    pub value: Complex64,
    /// Generator Z of γ̇⊥/F with g(Z, X) = 1; K'(v,v)(X) ≡ value·Z mod F.
    pub quotient_generator: CV,
    pub matrix: [[Complex64; 1]; 1],
}

/// Checks that F = span(u, w) is an α-plane containing v and returns X ∈ F transverse to v.
fn alpha_setup(lam: &Lambda2, v: &[Complex64], u: &[Complex64], w: &[Complex64]) -> Result<CV> {
    let class = classify_with(lam, u, w)?;
    if class.label != PlaneLabel::Alpha {
        return Err(Error::NotAlphaPlane {
            label: class.label.to_string(),
        });
    }
    let a = CMat::from_fn(v.len(), 2, |i, k| if k == 0 { u[i] } else { w[i] });
    let rhs = CMat::from_fn(v.len(), 1, |i, _| v[i]);
    let coef = a.clone().svd(true, true).solve(&rhs, 1e-14).map_err(|_| Error::DegenerateSpan)?;
    let fit = &a * &coef - &rhs;
    let residual = crate::linalg::relative(fit.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(), norm(v));
    if residual > 1e-8 {
        return Err(Error::NotInPlane { residual });
    }
    // The basis vector least parallel to v, with its v-component removed.
    let vv = norm(v).powi(2);
    let strip = |b: &[Complex64]| {
        let c: Complex64 = b.iter().zip(v).map(|(x, y)| x * y.conj()).sum::<Complex64>() / vv;
        axpy(-c, v, b)
    };
    let (su, sw) = (strip(u), strip(w));
    Ok(if norm(&su) / norm(u) >= norm(&sw) / norm(w) { su } else { sw })
}

/// K'(v,v)(X) = W⁺(v,X)v from the Weyl eigenprojection.
pub fn alpha_cone_curvature_formula(
    m: &MetricField,
    p: &[Complex64],
    v: &[Complex64],
    plane: (&[Complex64], &[Complex64]),
    orientation: f64,
) -> Result<AlphaConeCurvature> {
    let geo = Geometry::compute(m, p, Level::Curvature)?;
    let lam = Lambda2::at(m, &geo.g, p, orientation)?;
    let x = alpha_setup(&lam, v, plane.0, plane.1)?;
    let ws = crate::core_tensor::WeylSplit::new(&geo, lam);
    let (wplus, _) = ws.coordinate_tensors();
    let value = crate::core_tensor::contract4(&wplus, [v, &x, v, &x]);
    // Z = conj(g X)/‖g X‖² projected into γ̇⊥ along a second conj vector.
    let gx: CV = (0..x.len()).map(|i| (0..x.len()).map(|j| geo.g[(i, j)] * x[j]).sum()).collect();
    let gv: CV = (0..v.len()).map(|i| (0..v.len()).map(|j| geo.g[(i, j)] * v[j]).sum()).collect();
    let mut z: CV = gx.iter().map(|c| c.conj()).collect();
    let zv = bilinear(&geo.g, &z, v);
    let yv: CV = gv.iter().map(|c| c.conj()).collect();
    let yvv = bilinear(&geo.g, &yv, v);
    z = axpy(-zv / yvv, &yv, &z);
    let zx = bilinear(&geo.g, &z, &x);
    z = scale(Complex64::new(1.0, 0.0) / zx, &z);
    Ok(AlphaConeCurvature {
        point: p.to_vec(),
        v: v.to_vec(),
        x,
        value,
        quotient_generator: z,
        matrix: [[value]],
    })
}

/// ⟨R(v, X)v, X⟩ straight from the Riemann tensor.
pub fn alpha_cone_curvature_oracle(
    m: &MetricField,
    p: &[Complex64],
    v: &[Complex64],
    plane: (&[Complex64], &[Complex64]),
    orientation: f64,
) -> Result<Complex64> {
    let geo = Geometry::compute(m, p, Level::Curvature)?;
    let lam = Lambda2::at(m, &geo.g, p, orientation)?;
    let x = alpha_setup(&lam, v, plane.0, plane.1)?;
    Ok(geo.riemann_apply(v, &x, v, &x))
}

/// max_t of the distance from J(t) to span(γ̇, W(t)) relative to ‖J‖, where
/// J(0) = 0, ∇J(0) = w and W is the parallel transport of w.
pub fn beta_cone_residual(m: &MetricField, path: &GeodesicPath, w: &[Complex64]) -> Result<f64> {
    let n = w.len();
    let jac = integrate_jacobi(m, path, &vec![ZERO; n], w)?;
    let par = parallel_transport(m, path, w)?;
    let mut worst: f64 = 0.0;
    for (k, js) in jac.iter().enumerate().skip(1) {
        let v = &path.states[k].v;
        let a = CMat::from_fn(n, 2, |i, c| if c == 0 { v[i] } else { par[k][i] });
        let rhs = CMat::from_fn(n, 1, |i, _| js.j[i]);
        let coef = a.clone().svd(true, true).solve(&rhs, 1e-14).map_err(|_| Error::DegenerateSpan)?;
        let fit = (&a * &coef - &rhs).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        worst = worst.max(crate::linalg::relative(fit, norm(&js.j)));
    }
    Ok(worst)
}
