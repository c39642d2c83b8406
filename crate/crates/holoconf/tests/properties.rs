use num_complex::Complex64;
use proptest::prelude::*;

use holoconf::catalog::{builtin, catalog, MetricManifest};
use holoconf::core_tensor::{riemann_symmetry_residual, Geometry, Lambda2, Level};
use holoconf::expr_ad::{parse, parse_with_vars};
use holoconf::isotropic::{classify_with, isotropic_plane_through, PlaneLabel};
use holoconf::linalg::bilinear;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn small_complex() -> impl Strategy<Value = Complex64> {
    (-0.4f64..0.4, -0.4f64..0.4).prop_map(|(a, b)| c(a, b))
}

fn point(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(small_complex(), n)
}

/// Random expressions in z1, z2, z3 built from entire functions, so every point is regular.
fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (1usize..=3).prop_map(|i| format!("z{i}")),
        (-2.0f64..2.0).prop_map(|x| format!("{x:.3}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            inner.clone().prop_map(|a| format!("({a})^2")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.prop_map(|a| format!("exp(0.5*({a}))")),
        ]
    })
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_numbers_match_finite_differences(src in expr(), p in point(3)) {
        let e = parse(&src, 3).unwrap();
        let ad = e.eval_jet3(&p).unwrap();
        let fd = e.fd_oracle_jet(&p, 5e-3).unwrap();
        prop_assert!(close(ad.value, fd.value, 1e-14));
        for (a, b) in ad.first.iter().zip(&fd.first) {
            prop_assert!(close(*a, *b, 1e-6), "{src}: {a} vs {b}");
        }
        for (a, b) in ad.second.iter().zip(&fd.second) {
            prop_assert!(close(*a, *b, 1e-5), "{src}: {a} vs {b}");
        }
    }

    #[test]
    fn derivative_obeys_leibniz(f in expr(), g in expr(), p in point(3), var in 0usize..3) {
        let (f, g) = (parse(&f, 3).unwrap(), parse(&g, 3).unwrap());
        let lhs = f.mul(&g).derivative(var).eval(&p).unwrap();
        let rhs = f.derivative(var).eval(&p).unwrap() * g.eval(&p).unwrap() + f.eval(&p).unwrap() * g.derivative(var).eval(&p).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
        let jet = f.mul(&g).eval_jet3(&p).unwrap();
        prop_assert!(close(jet.first[var], lhs, 1e-12));
    }

    #[test]
    fn printed_expressions_parse_back(src in expr(), p in point(3)) {
        let e = parse(&src, 3).unwrap();
        let back = parse(&e.to_string(), 3).unwrap();
        prop_assert!(close(e.eval(&p).unwrap(), back.eval(&p).unwrap(), 1e-13));
        prop_assert_eq!(back.to_string(), e.to_string());
    }

    #[test]
    fn riemann_symmetries_on_generic_metric(p in point(4)) {
        let man = builtin("generic4").unwrap();
        let m = man.metric_field().unwrap();
        let x: Vec<Complex64> = man.basepoint.iter().zip(&p).map(|(b, d)| b + d * 0.5).collect();
        let geo = Geometry::compute(&m, &x, Level::Curvature).unwrap();
        prop_assert!(riemann_symmetry_residual(&geo.riemann) < 1e-12 * geo.riemann.norm().max(1.0));
    }
}

/// A null vector v and the α- and β-companions spanning isotropic planes with it.
fn planes_at(m: &holoconf::core_tensor::MetricField, p: &[Complex64], a: Complex64, o: f64) -> (Lambda2, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
    let g = m.metric_at(p).unwrap();
    let lam = Lambda2::at(m, &g, p, o).unwrap();
    // v = e + a f + λ k with λ chosen to make v null; e, f, k are fixed generic directions.
    let e = vec![c(1.0, 0.0), c(0.2, 0.1), c(0.0, 0.3), c(-0.1, 0.0)];
    let f = vec![c(0.0, 0.1), c(1.0, 0.0), c(0.3, 0.0), c(0.0, -0.2)];
    let k = vec![c(0.1, 0.0), c(0.0, 0.2), c(1.0, 0.0), c(0.4, 0.1)];
    let base: Vec<Complex64> = e.iter().zip(&f).map(|(x, y)| x + a * y).collect();
    let (qa, qb, qc) = (bilinear(&g, &k, &k), 2.0 * bilinear(&g, &base, &k), bilinear(&g, &base, &base));
    let lam_root = (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
    let v: Vec<Complex64> = base.iter().zip(&k).map(|(x, y)| x + lam_root * y).collect();
    let wa = isotropic_plane_through(&lam, &g, &v, 1.0).unwrap();
    let wb = isotropic_plane_through(&lam, &g, &v, -1.0).unwrap();
    (lam, v, wa, wb)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plane_label_ignores_basis_choice(a in small_complex(), m2 in prop::array::uniform4(small_complex())) {
        let man = builtin("cp2_complexification").unwrap();
        let m = man.metric_field().unwrap();
        let (lam, v, wa, _) = planes_at(&m, &man.basepoint, a, man.orientation());
        // (u', w') = M (v, w) with M = I + small perturbation, invertible.
        let mm = [c(1.0, 0.0) + m2[0], m2[1], m2[2], c(1.0, 0.0) + m2[3]];
        prop_assume!((mm[0] * mm[3] - mm[1] * mm[2]).norm() > 0.2);
        let u2: Vec<Complex64> = v.iter().zip(&wa).map(|(x, y)| mm[0] * x + mm[1] * y).collect();
        let w2: Vec<Complex64> = v.iter().zip(&wa).map(|(x, y)| mm[2] * x + mm[3] * y).collect();
        prop_assert_eq!(classify_with(&lam, &v, &wa).unwrap().label, PlaneLabel::Alpha);
        prop_assert_eq!(classify_with(&lam, &u2, &w2).unwrap().label, PlaneLabel::Alpha);
    }

    #[test]
    fn orientation_swap_exchanges_alpha_and_beta(a in small_complex()) {
        let man = builtin("generic4").unwrap();
        let m = man.metric_field().unwrap();
        let (_, v, wa, wb) = planes_at(&m, &man.basepoint, a, 1.0);
        let g = m.metric_at(&man.basepoint).unwrap();
        let flipped = Lambda2::at(&m, &g, &man.basepoint, -1.0).unwrap();
        prop_assert_eq!(classify_with(&flipped, &v, &wa).unwrap().label, PlaneLabel::Beta);
        prop_assert_eq!(classify_with(&flipped, &v, &wb).unwrap().label, PlaneLabel::Alpha);
    }

    #[test]
    fn plane_label_is_conformally_invariant(a in small_complex(), k in -1.0f64..1.0) {
        let man = builtin("cp2_complexification").unwrap();
        let m = man.metric_field().unwrap();
        let f = parse_with_vars(&format!("{k:.4}*x1*y2 + 0.3*x2"), m.entries()[0].vars()).unwrap();
        let mp = m.conformal_rescale(&f).unwrap();
        let p = &man.basepoint;
        let (_, v, wa, wb) = planes_at(&m, p, a, 1.0);
        let gp = mp.metric_at(p).unwrap();
        let lam = Lambda2::at(&mp, &gp, p, 1.0).unwrap();
        prop_assert_eq!(classify_with(&lam, &v, &wa).unwrap().label, PlaneLabel::Alpha);
        prop_assert_eq!(classify_with(&lam, &v, &wb).unwrap().label, PlaneLabel::Beta);
    }
}

#[test]
fn manifests_round_trip_exactly() {
    for man in catalog() {
        let text = man.to_json();
        let back = MetricManifest::from_json(&text).unwrap();
        assert_eq!(back, man, "{}", man.name);
        assert_eq!(back.to_json(), text);
    }
}
