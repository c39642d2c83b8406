use num_complex::Complex64;

use super::*;
use crate::expr_ad::parse;
use crate::linalg::c;

fn flat(n: usize) -> MetricField {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            entries.push(if i == j { "1" } else { "0" });
        }
    }
    MetricField::parse(n, &entries, None).unwrap()
}

fn sphere4() -> MetricField {
    let w = "(1 + 0.25*(z1^2 + z2^2 + z3^2 + z4^2))^-2";
    let mut entries = Vec::new();
    for i in 0..4 {
        for j in i..4 {
            entries.push(if i == j { w } else { "0" });
        }
    }
    MetricField::parse(4, &entries, None).unwrap()
}

fn wobbly4() -> MetricField {
    MetricField::parse(
        4,
        &[
            "1 + 0.3*z2^2 + 0.1*z1*z3^2",
            "0.2*z3*z4",
            "0.1*z1^2",
            "0.05*z2*z3",
            "1 + 0.2*z1*z4 + 0.1*z3^3",
            "0.15*z1*z2",
            "0.1*z4^2",
            "1 - 0.25*z1*z2 + 0.1*z4^3",
            "0.2*z1*z3",
            "1 + 0.3*z3^2 - 0.1*z2^2*z1",
        ],
        None,
    )
    .unwrap()
}

fn pt(v: &[(f64, f64)]) -> Vec<Complex64> {
    v.iter().map(|&(a, b)| c(a, b)).collect()
}

#[test]
fn flat_has_no_curvature() {
    let m = flat(4);
    let p = pt(&[(0.3, 0.1), (-0.2, 0.4), (0.1, 0.0), (0.5, -0.3)]);
    let rep = CurvatureReport::compute(&m, &p, 1.0).unwrap();
    assert_eq!(rep.christoffel.norm(), 0.0);
    assert_eq!(rep.riemann_04.norm(), 0.0);
    assert_eq!(rep.cotton.norm(), 0.0);
    assert_eq!(rep.norms.wplus, Some(0.0));
}

#[test]
fn conformal_christoffel_formula() {
    let base = flat(4);
    let f = parse("z1*z2", 4).unwrap();
    let m = base.conformal_rescale(&f).unwrap();
    let p = pt(&[(0.3, 0.1), (-0.2, 0.4), (0.1, 0.0), (0.5, -0.3)]);
    let gamma = christoffel(&m, &p).unwrap();
    // Γ^k_ij = δ^k_i ∂_j f + δ^k_j ∂_i f − δ_ij ∂_k f for g = e^{2f}·flat
    let df = [p[1], p[0], c(0.0, 0.0), c(0.0, 0.0)];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut want = c(0.0, 0.0);
                if k == i {
                    want += df[j];
                }
                if k == j {
                    want += df[i];
                }
                if i == j {
                    want -= df[k];
                }
                assert!((gamma.at(&[k, i, j]) - want).norm() < 1e-13);
            }
        }
    }
}

#[test]
fn connection_delta_reproduces_rescaling() {
    let base = wobbly4();
    let p = pt(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]);
    let f = parse("0.3*z1 - z2*z4 + 0.2*z3^2", 4).unwrap();
    let rescaled = base.conformal_rescale(&f).unwrap();
    let g0 = Geometry::compute(&base, &p, Level::Connection).unwrap();
    let g1 = Geometry::compute(&rescaled, &p, Level::Connection).unwrap();
    let theta = f.eval_jet3(&p).unwrap().first;
    let delta = connection_delta(&g0.g, &theta);
    let actual = Tensor {
        n: 4,
        rank: 3,
        data: g1.christoffel.data.iter().zip(&g0.christoffel.data).map(|(a, b)| a - b).collect(),
    };
    assert!(actual.diff_norm(&delta) < 1e-12);
}

#[test]
fn round_sphere_is_constant_curvature() {
    let m = sphere4();
    let p = pt(&[(0.3, 0.1), (-0.2, 0.4), (0.1, 0.0), (0.5, -0.3)]);
    let geo = Geometry::compute(&m, &p, Level::Derivatives).unwrap();
    // R_ijkl = K(g_il g_jk − g_ik g_jl) with K = 1
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let want = geo.g[(i, l)] * geo.g[(j, k)] - geo.g[(i, k)] * geo.g[(j, l)];
                    assert!((geo.riemann.at(&[i, j, k, l]) - want).norm() < 1e-12);
                }
            }
        }
    }
    assert!((geo.scalar - c(12.0, 0.0)).norm() < 1e-12);
    let ws = weyl_split(&m, &p, 1.0).unwrap();
    assert!((&ws.curvature - CMat::identity(6, 6)).iter().all(|x| x.norm() < 1e-12));
    assert!(frob(&ws.wplus) < 1e-12 && frob(&ws.wminus) < 1e-12);
    assert!(geo.cotton.norm() < 1e-12);
}

#[test]
fn riemann_symmetries_on_generic_metric() {
    let m = wobbly4();
    let p = pt(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]);
    let (r, ric, _, h) = riemann(&m, &p).unwrap();
    assert!(riemann_symmetry_residual(&r) < 1e-12);
    for i in 0..4 {
        for j in 0..4 {
            assert!((ric.at(&[i, j]) - ric.at(&[j, i])).norm() < 1e-12);
            assert!((h.at(&[i, j]) - h.at(&[j, i])).norm() < 1e-12);
        }
    }
}

#[test]
fn star_is_an_involution_and_symmetric() {
    let s = standard_star();
    assert!((&s * &s - CMat::identity(6, 6)).iter().all(|x| x.norm() == 0.0));
    assert_eq!(s, s.transpose());
    // *(e1∧e2) = e3∧e4, *(e1∧e3) = −e2∧e4
    assert_eq!(s[(5, 0)], c(1.0, 0.0));
    assert_eq!(s[(4, 1)], c(-1.0, 0.0));
}

#[test]
fn null_wedge_is_self_dual() {
    let m = flat(4);
    let p = vec![c(0.0, 0.0); 4];
    let lam = lambda2_basis_and_star(&m, &p, 1.0).unwrap();
    let u = pt(&[(1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (0.0, 0.0)]);
    let w = pt(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
    let om = lam.wedge(&u, &w);
    let pairing: Complex64 = om.iter().map(|x| x * x).sum();
    assert!(pairing.norm() < 1e-15);
    let star_om: Vec<Complex64> = (0..6).map(|r| (0..6).map(|k| lam.star[(r, k)] * om[k]).sum()).collect();
    assert!(crate::linalg::diff_norm(&star_om, &om) < 1e-15);
}

#[test]
fn weyl_blocks_are_trace_free_and_commute_with_star() {
    let m = wobbly4();
    let p = pt(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]);
    let ws = weyl_split(&m, &p, 1.0).unwrap();
    assert!(ws.residual < 1e-12);
    let s = &ws.lambda.star;
    for (w, sign) in [(&ws.wplus, 1.0), (&ws.wminus, -1.0)] {
        assert!(w.trace().norm() < 1e-12 * frob(w));
        let sw = s * w;
        let ws_ = w * s;
        assert!(frob(&(&sw - w * c(sign, 0.0))) < 1e-12 * frob(w));
        assert!(frob(&(&ws_ - w * c(sign, 0.0))) < 1e-12 * frob(w));
    }
    assert!(frob(&ws.wplus) > 1e-3 && frob(&ws.wminus) > 1e-3);
}

#[test]
fn orientation_flip_swaps_blocks() {
    let m = wobbly4();
    let p = pt(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]);
    let a = weyl_split(&m, &p, 1.0).unwrap();
    let b = weyl_split(&m, &p, -1.0).unwrap();
    assert!(frob(&(&a.wplus - &b.wminus)) < 1e-12);
    assert!(frob(&(&a.wminus - &b.wplus)) < 1e-12);
}

#[test]
fn weyl_divergence_equals_cotton() {
    let m = wobbly4();
    let p = pt(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]);
    let (cot, split) = cotton_york(&m, &p, 1.0).unwrap();
    let s = split.unwrap();
    assert!(cot.norm() > 1e-2);
    let scale = frob(&s.cotton);
    assert!(frob(&(&s.div_weyl - &s.cotton)) < 1e-10 * scale);
    assert!(frob(&(&s.div_wplus - &s.cplus)) < 1e-10 * scale);
    assert!(frob(&(&s.div_wminus - &s.cminus)) < 1e-10 * scale);
}

#[test]
fn weyl_tensor_scales_under_rescaling() {
    let base = wobbly4();
    let p = pt(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]);
    let f = parse("0.3*z1 - z2*z4", 4).unwrap();
    let scaled = base.conformal_rescale(&f).unwrap();
    let (wp0, wm0) = weyl_split(&base, &p, 1.0).unwrap().coordinate_tensors();
    let (wp1, wm1) = weyl_split(&scaled, &p, 1.0).unwrap().coordinate_tensors();
    let factor = (2.0 * f.eval(&p).unwrap()).exp();
    assert!(wp1.diff_norm(&wp0.scaled(factor)) < 1e-10 * wp1.norm());
    assert!(wm1.diff_norm(&wm0.scaled(factor)) < 1e-10 * wm1.norm());
}

#[test]
fn isotropic_coordinate_basis_needs_shear() {
    // g = dz1 dz3 + dz2 dz4 (all coordinate vectors null)
    let m = MetricField::parse(4, &["0", "0", "0.5", "0", "0", "0", "0.5", "0", "0", "0"], None).unwrap();
    let g = m.metric_at(&[c(0.0, 0.0); 4]).unwrap();
    let f = Frame::orthonormal(&g).unwrap();
    assert!(f.orthonormality_residual(&g) < 1e-12);
}

#[test]
fn singular_metric_is_reported() {
    let m = MetricField::parse(3, &["z1", "0", "0", "1", "0", "1"], None).unwrap();
    assert!(matches!(
        christoffel(&m, &[c(0.0, 0.0); 3]),
        Err(crate::Error::SingularMetric { .. })
    ));
}
