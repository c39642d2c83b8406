//! Isotropy cone and α/β classification of tangent 2-planes.
//!
//! A plane span(u, w) is tagged by its bivector ω = u∧w in an orthonormal
//! frame: isotropic when ⟨ω,ω⟩ = 0, and then α (β) when *ω = ω (*ω = −ω).

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::cp2;
use crate::core_tensor::{Lambda2, MetricField};
use crate::error::{Error, Result};
use crate::linalg::{bilinear, norm, CMat, ZERO};

pub const THRESHOLD: f64 = 1e-8;
pub const BORDERLINE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneLabel {
    Alpha,
    Beta,
    IsotropicDegenerate,
    NonIsotropic,
}

impl std::fmt::Display for PlaneLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PlaneLabel::Alpha => "alpha",
            PlaneLabel::Beta => "beta",
            PlaneLabel::IsotropicDegenerate => "isotropic_degenerate",
            PlaneLabel::NonIsotropic => "non_isotropic",
        };
        f.write_str(s)
    }
}

/// Normalized diagnostics of ω = u∧w.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneDiagnostics {
    /// |⟨ω,ω⟩| / ‖ω‖².
    pub pairing: f64,
    /// ‖*ω − ω‖ / ‖ω‖.
    pub anti_self_dual_part: f64,
    /// ‖*ω + ω‖ / ‖ω‖.
    pub self_dual_part: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneClass {
    pub u: Vec<Complex64>,
    pub w: Vec<Complex64>,
    pub label: PlaneLabel,
    pub lambda2_rep: Vec<Complex64>,
    pub diagnostics: PlaneDiagnostics,
}

/// g_p(v, v).
pub fn isotropy_residual(m: &MetricField, p: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    let g = m.metric_at(p)?;
    Ok(bilinear(&g, v, v))
}

fn coordinate_wedge_norm(u: &[Complex64], w: &[Complex64]) -> f64 {
    let n = u.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += (u[i] * w[j] - u[j] * w[i]).norm_sqr();
        }
    }
    acc.sqrt()
}

fn check_band(diagnostic: &'static str, value: f64) -> Result<bool> {
    if value < THRESHOLD {
        Ok(true)
    } else if value <= BORDERLINE {
        Err(Error::BorderlinePlane { diagnostic, value })
    } else {
        Ok(false)
    }
}

/// Classify span(u, w) with the Hodge star of the given orientation.
pub fn classify_plane(
    m: &MetricField,
    p: &[Complex64],
    u: &[Complex64],
    w: &[Complex64],
    orientation: f64,
) -> Result<PlaneClass> {
    let g = m.metric_at(p)?;
    let lam = Lambda2::at(m, &g, p, orientation)?;
    classify_with(&lam, u, w)
}

/// Classification against a precomputed Λ² structure.
pub fn classify_with(lam: &Lambda2, u: &[Complex64], w: &[Complex64]) -> Result<PlaneClass> {
    if coordinate_wedge_norm(u, w) <= 1e-10 * norm(u) * norm(w) {
        return Err(Error::DegenerateSpan);
    }
    let om = lam.wedge(u, w);
    let size = norm(&om);
    let pairing: Complex64 = om.iter().map(|x| x * x).sum();
    let star_om: Vec<Complex64> = (0..6).map(|r| (0..6).map(|k| lam.star[(r, k)] * om[k]).sum()).collect();
    let minus: Vec<Complex64> = star_om.iter().zip(&om).map(|(a, b)| a - b).collect();
    let plus: Vec<Complex64> = star_om.iter().zip(&om).map(|(a, b)| a + b).collect();
    let diagnostics = PlaneDiagnostics {
        pairing: pairing.norm() / (size * size),
        anti_self_dual_part: norm(&minus) / size,
        self_dual_part: norm(&plus) / size,
    };
    let label = if !check_band("pairing", diagnostics.pairing)? {
        PlaneLabel::NonIsotropic
    } else if check_band("anti_self_dual_part", diagnostics.anti_self_dual_part)? {
        PlaneLabel::Alpha
    } else if check_band("self_dual_part", diagnostics.self_dual_part)? {
        PlaneLabel::Beta
    } else {
        PlaneLabel::IsotropicDegenerate
    };
    Ok(PlaneClass {
        u: u.to_vec(),
        w: w.to_vec(),
        label,
        lambda2_rep: om,
        diagnostics,
    })
}

/// A second vector w with span(v, w) the α-plane (`sign` = +1) or β-plane
/// (`sign` = −1) through the null vector v.
///
/// The plane is the kernel of w ↦ P∓(v∧w), found as the two smallest right
/// singular vectors; v is then projected out.
pub fn isotropic_plane_through(lam: &Lambda2, g: &CMat, v: &[Complex64], sign: f64) -> Result<Vec<Complex64>> {
    let resid = bilinear(g, v, v).norm();
    if resid > 1e-10 * norm(v).powi(2) {
        return Err(Error::NotIsotropic { residual: resid });
    }
    let other = lam.projector(-sign);
    let a = lam.frame.components(v);
    let mut map = CMat::zeros(6, 4);
    for k in 0..4 {
        let mut e = vec![ZERO; 4];
        e[k] = Complex64::new(1.0, 0.0);
        let om: Vec<Complex64> = crate::core_tensor::PAIRS.iter().map(|&(i, j)| a[i] * e[j] - a[j] * e[i]).collect();
        for r in 0..6 {
            map[(r, k)] = (0..6).map(|c| other[(r, c)] * om[c]).sum();
        }
    }
    let svd = map.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors");
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].partial_cmp(&svd.singular_values[y]).unwrap());
    let kernel: Vec<Vec<Complex64>> = order[..2]
        .iter()
        .map(|&r| (0..4).map(|c| vt[(r, c)].conj()).collect())
        .collect();
    let av = norm(&a);
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for kvec in &kernel {
        let proj: Complex64 = kvec.iter().zip(&a).map(|(x, y)| x * y.conj()).sum::<Complex64>() / (av * av);
        let rest: Vec<Complex64> = kvec.iter().zip(&a).map(|(x, y)| x - proj * y).collect();
        let size = norm(&rest);
        if best.as_ref().map_or(true, |(s, _)| size > *s) {
            best = Some((size, rest));
        }
    }
    let (_, frame_w) = best.expect("two kernel vectors");
    let f = &lam.frame.matrix;
    Ok((0..4).map(|i| (0..4).map(|k| f[(i, k)] * frame_w[k]).sum()).collect())
}

/// A null vector a + λb for random a, b (seeded by `rng`).
pub fn random_null_vector<R: Rng>(g: &CMat, rng: &mut R) -> Vec<Complex64> {
    let n = g.nrows();
    let mut draw = || -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    };
    let a = draw();
    let b = draw();
    let (qa, qab, qb) = (bilinear(g, &a, &a), bilinear(g, &a, &b), bilinear(g, &b, &b));
    let disc = (qab * qab - qa * qb).sqrt();
    let lam = (-qab + disc) / qb;
    let v: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + lam * y).collect();
    let s = norm(&v);
    v.iter().map(|x| x / s).collect()
}

/// The two slice planes {(V,0)} and {(0,v)} of the ℂP² chart, classified.
pub fn cp2_slice_planes(m: &MetricField, z: &[Complex64], orientation: f64) -> Result<(PlaneClass, PlaneClass)> {
    cp2::incidence(z)?;
    let e = |i: usize| -> Vec<Complex64> { (0..4).map(|k| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0)).collect() };
    let vx = classify_plane(m, z, &e(0), &e(1), orientation)?;
    let vy = classify_plane(m, z, &e(2), &e(3), orientation)?;
    Ok((vx, vy))
}

/// β-plane span((ẋ, 0), (0, ẏ)) with ẏ chosen so that the two are orthogonal.
pub fn cp2_beta_plane(z: &[Complex64], xdot: [Complex64; 2]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let d = cp2::incidence(z)?;
    let ydx = z[2] * xdot[0] + z[3] * xdot[1];
    let w = [xdot[0] - z[0] * ydx / d, xdot[1] - z[1] * ydx / d];
    Ok((vec![xdot[0], xdot[1], ZERO, ZERO], vec![ZERO, ZERO, w[1], -w[0]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::linalg::c;

    fn flat() -> MetricField {
        builtin("flat4").unwrap().metric_field().unwrap()
    }

    fn v(x: &[(f64, f64)]) -> Vec<Complex64> {
        x.iter().map(|&(a, b)| c(a, b)).collect()
    }

    #[test]
    fn flat_fixtures() {
        let m = flat();
        let p = vec![ZERO; 4];
        let u = v(&[(1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (0.0, 0.0)]);
        let wa = v(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let wb = v(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, -1.0)]);
        assert_eq!(classify_plane(&m, &p, &u, &wa, 1.0).unwrap().label, PlaneLabel::Alpha);
        assert_eq!(classify_plane(&m, &p, &u, &wb, 1.0).unwrap().label, PlaneLabel::Beta);
        assert_eq!(classify_plane(&m, &p, &u, &wa, -1.0).unwrap().label, PlaneLabel::Beta);
        let e1 = v(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let e2 = v(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        assert_eq!(classify_plane(&m, &p, &e1, &e2, 1.0).unwrap().label, PlaneLabel::NonIsotropic);
        assert_eq!(isotropy_residual(&m, &p, &u).unwrap(), ZERO);
        assert_eq!(isotropy_residual(&m, &p, &e1).unwrap(), c(1.0, 0.0));
        assert!(matches!(classify_plane(&m, &p, &e1, &e1, 1.0), Err(Error::DegenerateSpan)));
        // null line plus a non-null vector: degenerate induced metric, neither α nor β
        let d = classify_plane(&m, &p, &u, &wa.iter().zip(&e1).map(|(a, b)| a + b).collect::<Vec<_>>(), 1.0);
        assert!(matches!(d, Ok(PlaneClass { .. }) | Err(Error::BorderlinePlane { .. })));
    }

    #[test]
    fn plane_through_null_vector() {
        let man = builtin("generic4").unwrap();
        let m = man.metric_field().unwrap();
        let p = man.basepoint.clone();
        let g = m.metric_at(&p).unwrap();
        let lam = Lambda2::at(&m, &g, &p, 1.0).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..5 {
            let nv = random_null_vector(&g, &mut rng);
            for (sign, want) in [(1.0, PlaneLabel::Alpha), (-1.0, PlaneLabel::Beta)] {
                let w = isotropic_plane_through(&lam, &g, &nv, sign).unwrap();
                assert_eq!(classify_with(&lam, &nv, &w).unwrap().label, want);
            }
        }
    }

    #[test]
    fn cp2_planes() {
        let man = builtin("cp2_complexification").unwrap();
        let m = man.metric_field().unwrap();
        let o = man.orientation();
        for z in std::iter::once(man.basepoint.clone()).chain(man.sample_points(5, 6)) {
            let (a, b) = cp2_slice_planes(&m, &z, o).unwrap();
            assert_eq!(a.label, PlaneLabel::Alpha);
            assert_eq!(b.label, PlaneLabel::Alpha);
            let (u, w) = cp2_beta_plane(&z, [c(0.4, 0.1), c(-0.3, 0.6)]).unwrap();
            assert_eq!(classify_plane(&m, &z, &u, &w, o).unwrap().label, PlaneLabel::Beta);
            let r1 = v(&[(0.3, 0.1), (0.2, -0.5), (0.7, 0.2), (-0.1, 0.4)]);
            let r2 = v(&[(-0.2, 0.6), (0.5, 0.1), (0.1, 0.3), (0.8, -0.2)]);
            assert_eq!(classify_plane(&m, &z, &r1, &r2, o).unwrap().label, PlaneLabel::NonIsotropic);
        }
        let bad = v(&[(1.0, 0.0), (0.0, 0.0), (-1.0, 0.0), (0.0, 0.0)]);
        assert!(matches!(cp2_slice_planes(&m, &bad, o), Err(Error::IncidenceDivisor)));
    }
}
