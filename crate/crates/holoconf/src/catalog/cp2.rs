//! The complexified ℂP² example in the affine chart (x1, x2, y1, y2).
//!
//! A chart point is the pair (A, a) with A = [s], s = (1, x1, x2), and
//! a = ker n, n = (1, y1, y2); it is off the incidence divisor when
//! D = n·s = 1 + x1 y1 + x2 y2 ≠ 0, so that E = A ⊕ a.
//!
//! A tangent vector (ẋ, ẏ) moves s by ṡ = (0, ẋ) and n by ṅ = (0, ẏ). Under
//! E/A ≅ a and E/a ≅ A it becomes the pair
//!
//! * V : A → a,  V(s) = ṡ − (n·ṡ / D) s,
//! * v : a → A,  v(u) = −(ṅ·u / D) s,
//!
//! and the metric is g((V,v),(W,w)) = tr(v∘W + w∘V). Since v∘V is the scalar
//! −ṅ·V(s)/D on the line A,
//!
//! ```text
//! g_{x_i y_j} = −(D δ_ij − y_i x_j) / D²,   g_{x x} = g_{y y} = 0.
//! ```
//!
//! The functions below rebuild the same quantities from explicit 3×3 matrices
//! and serve as the oracle for the committed expressions.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use super::{
    cz, strs, ExpectedProperties, IndexFlag, MetricManifest, SurfaceKind, SurfaceManifest, SCHEMA_VERSION,
};
use crate::error::{Error, Result};
use crate::linalg::{CMat, ONE, ZERO};

type M3 = Matrix3<Complex64>;
type V3 = nalgebra::Vector3<Complex64>;

pub const COORDINATES: [&str; 4] = ["x1", "x2", "y1", "y2"];
pub const INCIDENCE: &str = "1 + x1*y1 + x2*y2";

fn entry(num: &str) -> String {
    format!("{num}/({INCIDENCE})^2")
}

pub fn build_cp2_complexification() -> MetricManifest {
    let zero = "0".to_string();
    let g13 = entry("-(1 + x2*y2)");
    let g14 = entry("x2*y1");
    let g23 = entry("x1*y2");
    let g24 = entry("-(1 + x1*y1)");
    let metric = vec![
        vec![zero.clone(), zero.clone(), g13.clone(), g14.clone()],
        vec![zero.clone(), zero.clone(), g23.clone(), g24.clone()],
        vec![g13, g23, zero.clone(), zero.clone()],
        vec![g14, g24, zero.clone(), zero],
    ];
    let flag = |x0: (f64, f64)| IndexFlag {
        point: cz(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]),
        line: cz(&[(2.0 * x0.0 - x0.1, 0.0), (-2.0, 0.0), (1.0, 0.0)]),
    };
    MetricManifest {
        schema_version: SCHEMA_VERSION,
        name: "cp2_complexification".into(),
        n: 4,
        coordinates: strs(&COORDINATES),
        metric,
        conformal_factor: None,
        orientation: ORIENTATION,
        basepoint: cz(&[(0.1, 0.05), (-0.2, 0.1), (0.15, -0.1), (0.05, 0.2)]),
        sample_radius: 0.3,
        domain_guard: Some(INCIDENCE.into()),
        expected: ExpectedProperties {
            flat: false,
            conformally_flat: false,
            self_dual: true,
            generic: false,
        },
        surfaces: vec![
            SurfaceManifest {
                name: "beta_origin".into(),
                kind: SurfaceKind::Beta,
                parameters: strs(&["s1", "s2"]),
                map: strs(&["s1", "2*s1", "2*s2", "-s2"]),
                basepoint: cz(&[(0.1, 0.05), (-0.1, 0.1)]),
                sample_radius: 0.2,
                flag: Some(flag((0.0, 0.0))),
            },
            SurfaceManifest {
                name: "beta_generic".into(),
                kind: SurfaceKind::Beta,
                parameters: strs(&["s1", "s2"]),
                map: strs(&["0.3 + s1", "-0.2 + 2*s1", "0.4 + 2*s2", "-0.2 - s2"]),
                basepoint: cz(&[(0.05, 0.05), (0.1, -0.05)]),
                sample_radius: 0.15,
                flag: Some(flag((0.3, -0.2))),
            },
            SurfaceManifest {
                name: "alpha_slice".into(),
                kind: SurfaceKind::Alpha,
                parameters: strs(&["s1", "s2"]),
                map: strs(&["s1", "s2", "0.15 - 0.1*i", "0.05 + 0.2*i"]),
                basepoint: cz(&[(0.1, 0.05), (-0.2, 0.1)]),
                sample_radius: 0.2,
                flag: None,
            },
        ],
        hypersurfaces: Vec::new(),
        notes: "Complexified Fubini-Study metric tr(v.W + w.V) in the chart A = [1:x1:x2], a = ker(1, y1, y2).".into(),
    }
}

/// Orientation flag under which the slice planes are α-planes.
pub const ORIENTATION: i32 = 1;

fn split(z: &[Complex64]) -> (V3, V3) {
    (V3::new(ONE, z[0], z[1]), V3::new(ONE, z[2], z[3]))
}

fn dot(a: &V3, b: &V3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// D = n·s; errors on the incidence divisor.
pub fn incidence(z: &[Complex64]) -> Result<Complex64> {
    let (s, n) = split(z);
    let d = dot(&n, &s);
    if d.norm() < 1e-8 {
        return Err(Error::IncidenceDivisor);
    }
    Ok(d)
}

/// |det [s, a1, a2]| for the basis a1 = (−y1, 1, 0), a2 = (−y2, 0, 1) of a.
pub fn splitting_determinant(z: &[Complex64]) -> Complex64 {
    let (s, _) = split(z);
    let a1 = V3::new(-z[2], ONE, ZERO);
    let a2 = V3::new(-z[3], ZERO, ONE);
    M3::from_columns(&[s, a1, a2]).determinant()
}

/// The endomorphisms of E representing V (A → a, zero on a) and v (a → A, zero on A).
pub fn identification(z: &[Complex64], t: &[Complex64]) -> Result<(M3, M3)> {
    let d = incidence(z)?;
    let (s, n) = split(z);
    let sdot = V3::new(ZERO, t[0], t[1]);
    let ndot = V3::new(ZERO, t[2], t[3]);
    let proj_a = M3::identity() - s * n.transpose() / d;
    let big_v = (proj_a * sdot) * n.transpose() / d;
    let small_v = -(s * ndot.transpose()) * proj_a / d;
    Ok((big_v, small_v))
}

/// tr(v1∘V2 + v2∘V1).
pub fn trace_metric(z: &[Complex64], t1: &[Complex64], t2: &[Complex64]) -> Result<Complex64> {
    let (big1, small1) = identification(z, t1)?;
    let (big2, small2) = identification(z, t2)?;
    Ok((small1 * big2 + small2 * big1).trace())
}

/// tr(v∘V); the tangent vector is isotropic iff this vanishes.
pub fn trace_isotropy(z: &[Complex64], t: &[Complex64]) -> Result<Complex64> {
    let (big, small) = identification(z, t)?;
    Ok((small * big).trace())
}

/// The 4×4 metric matrix assembled from [`trace_metric`] by polarization.
pub fn metric_from_identifications(z: &[Complex64]) -> Result<CMat> {
    let e = |i: usize| (0..4).map(|k| if k == i { ONE } else { ZERO }).collect::<Vec<_>>();
    let mut g = CMat::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            g[(i, j)] = trace_metric(z, &e(i), &e(j))?;
        }
    }
    Ok(g)
}

fn herm(a: &V3, b: &V3) -> Complex64 {
    a[0] * b[0].conj() + a[1] * b[1].conj() + a[2] * b[2].conj()
}

/// Real tangent basis of the slice at x: ẋ ∈ {e1, i e1, e2, i e2}, ẏ = conj(ẋ).
fn real_basis() -> [[Complex64; 2]; 4] {
    let i = Complex64::i();
    [[ONE, ZERO], [i, ZERO], [ZERO, ONE], [ZERO, i]]
}

/// Fubini–Study form Re h(π⊥ṡ, π⊥ṡ')/h(s, s) on the real tangent basis.
pub fn fubini_study(x: &[Complex64; 2]) -> DMatrix<f64> {
    let s = V3::new(ONE, x[0], x[1]);
    let ss = herm(&s, &s);
    let perp = |u: &[Complex64; 2]| {
        let w = V3::new(ZERO, u[0], u[1]);
        w - s * (herm(&w, &s) / ss)
    };
    let basis = real_basis();
    DMatrix::from_fn(4, 4, |a, b| (herm(&perp(&basis[a]), &perp(&basis[b])) / ss).re)
}

/// Slice point (x, x̄) and the real tangent vector (u, ū).
pub fn slice_point(x: &[Complex64; 2]) -> Vec<Complex64> {
    vec![x[0], x[1], x[0].conj(), x[1].conj()]
}

/// Pullback of the holomorphic metric to the real slice: (real part, largest imaginary part).
pub fn real_slice_pullback(metric: &CMat) -> (DMatrix<f64>, f64) {
    let basis = real_basis();
    let lift = |u: &[Complex64; 2]| [u[0], u[1], u[0].conj(), u[1].conj()];
    let mut worst_im: f64 = 0.0;
    let m = DMatrix::from_fn(4, 4, |a, b| {
        let ua = lift(&basis[a]);
        let ub = lift(&basis[b]);
        let mut v = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                v += ua[i] * metric[(i, j)] * ub[j];
            }
        }
        worst_im = worst_im.max(v.im.abs());
        v.re
    });
    (m, worst_im)
}

/// max |g|_slice + 2 FS| over the real tangent basis at A = [1 : x].
pub fn real_fs_slice_check(manifest: &MetricManifest, x: &[Complex64; 2]) -> Result<f64> {
    let field = manifest.metric_field()?;
    let g = field.metric_at(&slice_point(x))?;
    let (pull, im) = real_slice_pullback(&g);
    let fs = fubini_study(x);
    let diff = (pull + fs * 2.0).abs().max();
    Ok(diff.max(im))
}

/// max over x ∈ A, y ∈ a of |h(x, v(y)) + h(V(x), y)| at the slice point over `x`.
pub fn tangency_defect(x: &[Complex64; 2], xdot: &[Complex64; 2], ydot: &[Complex64; 2]) -> Result<f64> {
    let z = slice_point(x);
    let (big, small) = identification(&z, &[xdot[0], xdot[1], ydot[0], ydot[1]])?;
    let (s, _) = split(&z);
    let a_basis = [V3::new(-z[2], ONE, ZERO), V3::new(-z[3], ZERO, ONE)];
    let mut worst: f64 = 0.0;
    for y in &a_basis {
        let val = herm(&s, &(small * y)) + herm(&(big * s), y);
        worst = worst.max(val.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::sample_box;
    use crate::linalg::c;

    #[test]
    fn expressions_match_trace_oracle() {
        let m = build_cp2_complexification();
        let field = m.metric_field().unwrap();
        let pts = sample_box(11, 32, &m.basepoint, 0.4, |p| incidence(p).map_or(false, |d| d.norm() > 0.2));
        assert_eq!(pts.len(), 32);
        for p in &pts {
            let g = field.metric_at(p).unwrap();
            let oracle = metric_from_identifications(p).unwrap();
            assert!((&g - &oracle).iter().all(|x| x.norm() < 1e-13));
            assert!((&g - g.transpose()).iter().all(|x| x.norm() == 0.0));
            assert!((splitting_determinant(p) - incidence(p).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn isotropy_from_trace_condition() {
        let z = [c(0.2, 0.1), c(-0.3, 0.2), c(0.1, -0.4), c(0.25, 0.05)];
        let field = build_cp2_complexification().metric_field().unwrap();
        let g = field.metric_at(&z).unwrap();
        // ẏ annihilating ẋ − x (y·ẋ)/D makes v∘V = 0
        let d = incidence(&z).unwrap();
        let xdot = [c(0.7, -0.2), c(0.3, 0.4)];
        let ydx = z[2] * xdot[0] + z[3] * xdot[1];
        let w = [xdot[0] - z[0] * ydx / d, xdot[1] - z[1] * ydx / d];
        let t = [xdot[0], xdot[1], w[1], -w[0]];
        assert!(trace_isotropy(&z, &t).unwrap().norm() < 1e-15);
        assert!(crate::linalg::bilinear(&g, &t, &t).norm() < 1e-14);
    }

    #[test]
    fn real_slice_is_minus_twice_fubini_study() {
        let m = build_cp2_complexification();
        let r = 1.0 / 2f64.sqrt();
        for x in [[ZERO, ZERO], [c(1.0, 0.0), ZERO], [c(r, 0.3), c(-0.2, 0.5)]] {
            assert!(real_fs_slice_check(&m, &x).unwrap() < 1e-12);
        }
        let fs0 = fubini_study(&[ZERO, ZERO]);
        assert!((fs0 - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-15);
    }

    #[test]
    fn tangency_identity_selects_real_slice() {
        let x = [c(0.3, -0.2), c(0.1, 0.4)];
        let u = [c(0.5, 0.2), c(-0.1, 0.7)];
        let ubar = [u[0].conj(), u[1].conj()];
        assert!(tangency_defect(&x, &u, &ubar).unwrap() < 1e-14);
        assert!(tangency_defect(&x, &u, &u).unwrap() > 1e-2);
    }

    #[test]
    fn divisor_is_rejected() {
        let z = [c(1.0, 0.0), ZERO, c(-1.0, 0.0), ZERO];
        assert!(matches!(incidence(&z), Err(Error::IncidenceDivisor)));
    }
}
