use num_complex::Complex64;

use super::*;
use crate::catalog::builtin;
use crate::core_tensor::Lambda2;
use crate::expr_ad::parse_with_vars;
use crate::isotropic::{classify_with, PlaneLabel};
use crate::linalg::c;

fn setup(metric: &str, surface: &str) -> (MetricField, EmbeddedSurface, f64) {
    let man = builtin(metric).unwrap();
    (man.metric_field().unwrap(), man.surface(surface).unwrap(), man.orientation())
}

fn rel(a: &Tensor, b: &Tensor) -> f64 {
    a.diff_norm(b) / b.norm().max(1e-300)
}

#[test]
fn flat_beta_plane_is_flat() {
    let (m, s, _) = setup("flat4", "beta_plane");
    for p in s.sample_parameters(1, 4) {
        let ic = induced_connection(&m, &s, &p).unwrap();
        assert_eq!(ic.gamma.norm(), 0.0);
        assert_eq!(k_tensor(&m, &s, &p).unwrap().norm(), 0.0);
        assert_eq!(thomas_tensor(&m, &s, &p).unwrap().norm(), 0.0);
    }
}

#[test]
fn bent_surface_is_rejected() {
    let (m, s, _) = setup("flat4", "bent");
    let p = s.basepoint.clone();
    assert!(totally_geodesic_residual(&m, &s, &p).unwrap() > 1e-2);
    assert!(matches!(induced_connection(&m, &s, &p), Err(Error::NotTotallyGeodesic { .. })));
    assert!(matches!(thomas_tensor(&m, &s, &p), Err(Error::NotTotallyGeodesic { .. })));
}

#[test]
fn rank_deficient_map() {
    let vars = ["s1".to_string(), "s2".to_string()];
    let map = ["s1", "s1", "2*s1", "s1^2"].iter().map(|e| parse_with_vars(e, &vars).unwrap()).collect();
    let s = EmbeddedSurface::new("line", map, vec![c(0.1, 0.0), c(0.0, 0.0)], 0.1);
    assert!(matches!(s.tangent_plane(&[c(0.1, 0.0), c(0.0, 0.0)]), Err(Error::RankDeficient)));
}

/// ℂP² with a non-Einstein representative of its conformal class.
fn rescaled_cp2() -> MetricField {
    let m = builtin("cp2_complexification").unwrap().metric_field().unwrap();
    let f = parse_with_vars("0.3*x1*y2 - 0.2*x2 + 0.1*y1^2", m.entries()[0].vars()).unwrap();
    m.conformal_rescale(&f).unwrap()
}

#[test]
fn cp2_beta_surfaces_are_projectively_flat() {
    let rescaled = rescaled_cp2();
    for name in ["beta_origin", "beta_generic"] {
        let (fs, s, o) = setup("cp2_complexification", name);
        for (label, m) in [("fs", &fs), ("rescaled", &rescaled)] {
            for p in s.sample_parameters(7, 8) {
                let (u, w) = s.tangent_plane(&p).unwrap();
                let x = s.point(&p).unwrap();
                let g = m.metric_at(&x).unwrap();
                let lam = Lambda2::at(m, &g, &x, o).unwrap();
                assert_eq!(classify_with(&lam, &u, &w).unwrap().label, PlaneLabel::Beta);
                assert!(totally_geodesic_residual(m, &s, &p).unwrap() < 1e-12);

                let k = k_tensor(m, &s, &p).unwrap();
                let amb = ambient_restriction(m, &s, &p).unwrap();
                let scale = amb.schouten.norm().max(1.0);
                if label == "rescaled" {
                    // Einstein representatives have h ∝ g, which vanishes on isotropic planes.
                    assert!(k.norm() > 1e-2 && amb.nabla_k.norm() > 1e-2);
                }
                assert!(k.diff_norm(&amb.schouten) < 1e-7 * scale, "{name}/{label}: K vs h");
                assert!(amb.k.diff_norm(&amb.schouten) < 1e-10 * scale);

                let t = thomas_tensor(m, &s, &p).unwrap();
                let ta = thomas_tensor_ambient(m, &s, &p).unwrap();
                let scale = amb.nabla_k.norm().max(1.0);
                assert!(t.norm() <= 1e-6 * scale, "{name}/{label}: |T| = {}", t.norm());
                assert!(ta.norm() <= 1e-10 * scale);
                assert!(amb.cotton.norm() <= 1e-10 * scale);
            }
        }
    }
}

#[test]
fn ambient_and_intrinsic_thomas_agree() {
    let (m, s, _) = setup("conf_flat4", "beta_plane");
    for p in s.sample_parameters(2, 3) {
        let amb = ambient_restriction(&m, &s, &p).unwrap();
        let t = thomas_tensor(&m, &s, &p).unwrap();
        let ta = thomas_tensor_ambient(&m, &s, &p).unwrap();
        assert!(t.components.diff_norm(&ta.components) < 1e-8);
        assert!(ta.components.diff_norm(&amb.cotton.scaled(c(3.0, 0.0))) < 1e-8);
    }
}

#[test]
fn cp2_origin_chart_geodesics_are_affine() {
    // In the chart through the origin the induced connection vanishes identically.
    let (m, s, _) = setup("cp2_complexification", "beta_origin");
    for p in s.sample_parameters(3, 4) {
        assert!(induced_connection(&m, &s, &p).unwrap().gamma.norm() < 1e-14);
    }
}

#[test]
fn conformally_flat_isotropic_plane() {
    let (m, s, o) = setup("conf_flat4", "beta_plane");
    for p in s.sample_parameters(11, 4) {
        let (u, w) = s.tangent_plane(&p).unwrap();
        let x = s.point(&p).unwrap();
        let lam = Lambda2::at(&m, &m.metric_at(&x).unwrap(), &x, o).unwrap();
        assert_eq!(classify_with(&lam, &u, &w).unwrap().label, PlaneLabel::Beta);
        let k = k_tensor(&m, &s, &p).unwrap();
        let amb = ambient_restriction(&m, &s, &p).unwrap();
        assert!(k.norm() > 1e-3);
        assert!(rel(&k, &amb.schouten) < 1e-7);
        assert!(thomas_tensor(&m, &s, &p).unwrap().norm() < 1e-8);
    }
}

#[test]
fn thomas_is_independent_of_conformal_representative() {
    let (m, s, _) = setup("cp2_complexification", "beta_generic");
    let f = parse_with_vars("0.3*x1*y2 - 0.2*x2 + 0.1*y1^2", m.entries()[0].vars()).unwrap();
    let mp = m.conformal_rescale(&f).unwrap();
    for p in s.sample_parameters(5, 4) {
        let a = thomas_tensor(&m, &s, &p).unwrap();
        let b = thomas_tensor(&mp, &s, &p).unwrap();
        assert!(a.components.diff_norm(&b.components) < 1e-6);
        // The connections themselves differ.
        let ga = induced_connection(&m, &s, &p).unwrap().gamma;
        let gb = induced_connection(&mp, &s, &p).unwrap().gamma;
        assert!(ga.diff_norm(&gb) > 1e-3);
    }
}

fn vars2() -> Vec<String> {
    vec!["s1".into(), "s2".into()]
}

fn connection(entries: [&str; 8]) -> Vec<HoloExpr> {
    entries.iter().map(|e| parse_with_vars(e, &vars2()).unwrap()).collect()
}

/// Γ + δθ + θδ for θ given by two expressions.
fn projective_change(base: [&str; 8], theta: [&str; 2]) -> Vec<HoloExpr> {
    let g = connection(base);
    let th: Vec<HoloExpr> = theta.iter().map(|e| parse_with_vars(e, &vars2()).unwrap()).collect();
    let mut out = Vec::new();
    for cc in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let mut e = g[(cc * 2 + a) * 2 + b].clone();
                if cc == a {
                    e = e.add(&th[b]);
                }
                if cc == b {
                    e = e.add(&th[a]);
                }
                out.push(e);
            }
        }
    }
    out
}

const CURVED: [&str; 8] = ["s2^2", "0.5*s1*s2", "0.5*s1*s2", "s1^3", "0.2*s2", "s1^2*s2", "s1^2*s2", "0.3*s1*s2^2"];

#[test]
fn thomas_of_a_curved_projective_structure() {
    let p = [c(0.3, 0.1), c(-0.2, 0.25)];
    let t = thomas_from_connection(&connection(CURVED), &p).unwrap();
    assert!(t.norm() > 1e-2);
    assert!(t.antisymmetry_residual() < 1e-14 * t.norm());
    for theta in [["2*s1*s2", "s1^2"], ["s2^2", "0.5*s1"], ["sin(s1)", "exp(s2)*s1"]] {
        let tp = thomas_from_connection(&projective_change(CURVED, theta), &p).unwrap();
        assert!(t.components.diff_norm(&tp.components) < 1e-10 * t.norm(), "{theta:?}");
    }
    // Flat structure plus any projective change has T = 0.
    let zero = ["0"; 8];
    let tz = thomas_from_connection(&projective_change(zero, ["s1*s2", "s1 - s2^2"]), &p).unwrap();
    assert!(tz.norm() < 1e-13);
}

#[test]
fn cross_ratio_basics() {
    let one = c(1.0, 0.0);
    let lam = c(0.3, -1.2);
    let pts = [[ZERO, one], [one, one], [lam, one], [one, ZERO]];
    let cr = cross_ratio([&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap();
    assert!((cr - lam).norm() < 1e-15);
    // Möbius map [[a, b], [c, d]] acting on homogeneous coordinates.
    let (a, b, cc, d) = (c(1.0, 2.0), c(-0.5, 0.1), c(0.3, 0.0), c(2.0, -1.0));
    let mob: Vec<Vec<Complex64>> = pts.iter().map(|p| vec![a * p[0] + b * p[1], cc * p[0] + d * p[1]]).collect();
    let cr2 = cross_ratio([&mob[0], &mob[1], &mob[2], &mob[3]]).unwrap();
    assert!((cr2 - cr).norm() < 1e-12);
    assert!(matches!(cross_ratio([&pts[0], &pts[0], &pts[2], &pts[3]]), Err(Error::CoincidentPoints)));
    // Same quadruple embedded on a line of P².
    let (o, dir) = ([c(1.0, 0.0), c(0.2, 0.1), c(-0.3, 0.0)], [c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.5)]);
    let emb: Vec<Vec<Complex64>> = pts.iter().map(|p| (0..3).map(|k| o[k] * p[1] + dir[k] * p[0]).collect()).collect();
    let cr3 = cross_ratio([&emb[0], &emb[1], &emb[2], &emb[3]]).unwrap();
    assert!((cr3 - cr).norm() < 1e-12);
    let off = vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    assert!(matches!(cross_ratio([&emb[0], &emb[1], &emb[2], &off]), Err(Error::Precondition { .. })));
}

#[test]
fn cp2_cross_ratio_law() {
    let man = builtin("cp2_complexification").unwrap();
    let m = man.metric_field().unwrap();
    for sm in man.surfaces.iter().filter(|s| s.flag.is_some()) {
        let s = sm.build().unwrap();
        let flag = sm.flag.as_ref().unwrap();
        for (k, sdot) in [[c(0.3, 0.1), c(0.2, -0.2)], [c(-0.1, 0.4), c(0.5, 0.0)]].iter().enumerate() {
            let chk = cp2_geodesic_cross_ratio(&m, &s, (&flag.point, &flag.line), &s.basepoint, sdot, 1.0, 192, [0, 64 + 32 * k, 192])
                .unwrap();
            assert!(chk.residual < 1e-6, "{}: {:?}", sm.name, chk);
        }
    }
}

#[test]
fn cp2_beta_geodesics_are_chart_lines() {
    let (m, s, _) = setup("cp2_complexification", "beta_origin");
    let s0 = s.basepoint.clone();
    let (u, w) = s.tangent_plane(&s0).unwrap();
    let sdot = [c(0.4, -0.1), c(0.3, 0.2)];
    let v0: Vec<Complex64> = u.iter().zip(&w).map(|(a, b)| a * sdot[0] + b * sdot[1]).collect();
    let path = integrate_geodesic(&m, &s.point(&s0).unwrap(), &v0, 1.0, 128).unwrap();
    let params: Vec<Vec<Complex64>> = path.states.iter().map(|st| s.locate(&st.x, &s0).unwrap()).collect();
    let end = params.last().unwrap();
    let chord = [end[0] - s0[0], end[1] - s0[1]];
    for (st, q) in path.states.iter().zip(&params) {
        assert!(crate::linalg::diff_norm(&s.point(q).unwrap(), &st.x) < 1e-12);
        let d = [q[0] - s0[0], q[1] - s0[1]];
        assert!((d[0] * chord[1] - d[1] * chord[0]).norm() < 1e-6);
    }
}

