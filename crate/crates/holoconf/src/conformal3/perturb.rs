//! Near-flat 4-metrics with a totally geodesic hyperplane and W⁻ = O(ε²) along it.
//!
//! g = dz4² + (δ_ij + ε k_ij) dz^i dz^j with k = k0 + z4²·μ + z4³·ν, where
//! μ = a·tf Ric_lin[k0] and ν = b·tf(B + Bᵀ), B_ij = ε_ikl ∂_k μ_lj. The
//! hyperplane z4 = 0 has II = ½∂4 g = 0, and the coefficients a, b are chosen
//! so that W⁻ and ∇_ν W⁻ vanish on it at first order in ε.

use num_complex::Complex64;

use super::Hypersurface;
use crate::core_tensor::MetricField;
use crate::error::Result;
use crate::expr_ad::{default_vars, parse, parse_with_vars, HoloExpr};
use crate::linalg::perm_sign;

/// Upper triangle of k0 (k11, k12, k13, k22, k23, k33), written over z1..z4.
pub const PERTURBATION_SEED_K0: [&str; 6] = [
    "z1*z2*z3 + 0.5*z2^2",
    "0.3*z3^3 - z1*z3",
    "0.2*z1^2*z2",
    "z1^3 - 0.4*z2*z3",
    "0.6*z1*z2^2 + z3^2",
    "0.5*z2^3 + z1*z2",
];

const COEFF_A: f64 = -1.0;
const COEFF_B: f64 = -1.0 / 3.0;

fn sym(k: &[HoloExpr], i: usize, j: usize) -> &HoloExpr {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    &k[i * 3 - i * (i + 1) / 2 + j]
}

fn sum(terms: Vec<HoloExpr>, zero: &HoloExpr) -> HoloExpr {
    terms.into_iter().fold(zero.clone(), |acc, t| acc.add(&t))
}

/// Trace-free part of a symmetric 3×3 (upper-triangle) matrix of expressions.
fn trace_free(s: &[HoloExpr]) -> Vec<HoloExpr> {
    let tr = sym(s, 0, 0).add(sym(s, 1, 1)).add(sym(s, 2, 2)).scale(Complex64::new(1.0 / 3.0, 0.0));
    let mut out = Vec::with_capacity(6);
    for i in 0..3 {
        for j in i..3 {
            out.push(if i == j { sym(s, i, j).sub(&tr) } else { sym(s, i, j).clone() });
        }
    }
    out
}

/// Linearised Ricci tensor of δ + k on ℂ³ (upper triangle).
fn ricci_lin(k: &[HoloExpr], zero: &HoloExpr) -> Vec<HoloExpr> {
    let tr = sym(k, 0, 0).add(sym(k, 1, 1)).add(sym(k, 2, 2));
    let mut out = Vec::with_capacity(6);
    for i in 0..3 {
        for j in i..3 {
            let mut terms = Vec::new();
            for l in 0..3 {
                terms.push(sym(k, j, l).derivative(l).derivative(i));
                terms.push(sym(k, i, l).derivative(l).derivative(j));
                terms.push(sym(k, i, j).derivative(l).derivative(l).scale(Complex64::new(-1.0, 0.0)));
            }
            terms.push(tr.derivative(i).derivative(j).scale(Complex64::new(-1.0, 0.0)));
            out.push(sum(terms, zero).scale(Complex64::new(0.5, 0.0)));
        }
    }
    out
}

/// Symmetrised curl (B + Bᵀ) with B_ij = ε_ikl ∂_k μ_lj (upper triangle).
fn sym_curl(mu: &[HoloExpr], zero: &HoloExpr) -> Vec<HoloExpr> {
    let b = |i: usize, j: usize| {
        let mut terms = Vec::new();
        for k in 0..3 {
            for l in 0..3 {
                let s = perm_sign(&[i, k, l]);
                if s != 0.0 {
                    terms.push(sym(mu, l, j).derivative(k).scale(Complex64::new(s, 0.0)));
                }
            }
        }
        sum(terms, zero)
    };
    let mut out = Vec::with_capacity(6);
    for i in 0..3 {
        for j in i..3 {
            out.push(b(i, j).add(&b(j, i)));
        }
    }
    out
}

pub(crate) fn perturbed_flat_with(eps: f64, a: f64, b: f64) -> Result<MetricField> {
    let vars = default_vars(4);
    let zero = HoloExpr::constant(Complex64::new(0.0, 0.0), &vars);
    let one = HoloExpr::constant(Complex64::new(1.0, 0.0), &vars);
    let k0 = PERTURBATION_SEED_K0
        .iter()
        .map(|s| parse(s, 4))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mu: Vec<HoloExpr> = trace_free(&ricci_lin(&k0, &zero)).iter().map(|e| e.scale(Complex64::new(a, 0.0))).collect();
    let nu: Vec<HoloExpr> = trace_free(&sym_curl(&mu, &zero)).iter().map(|e| e.scale(Complex64::new(b, 0.0))).collect();
    let t2 = parse_with_vars("z4^2", &vars)?;
    let t3 = parse_with_vars("z4^3", &vars)?;
    let mut entries = Vec::with_capacity(10);
    let mut idx = 0;
    for i in 0..4 {
        for j in i..4 {
            let e = if j == 3 {
                if i == 3 {
                    one.clone()
                } else {
                    zero.clone()
                }
            } else {
                let k = k0[idx].add(&t2.mul(&mu[idx])).add(&t3.mul(&nu[idx]));
                idx += 1;
                let base = if i == j { one.clone() } else { zero.clone() };
                base.add(&k.scale(Complex64::new(eps, 0.0)))
            };
            entries.push(e);
        }
    }
    MetricField::new(4, entries, None)
}

/// δ + ε·k with the frozen coefficients.
pub fn perturbed_flat(eps: f64) -> Result<MetricField> {
    perturbed_flat_with(eps, COEFF_A, COEFF_B)
}

/// A perturbed metric together with its hyperplane Q = {z4 = 0}.
#[derive(Debug, Clone)]
pub struct PerturbationFixture {
    pub eps: f64,
    pub metric: MetricField,
    pub hypersurface: Hypersurface,
}

impl PerturbationFixture {
    pub fn new(eps: f64) -> Result<PerturbationFixture> {
        let qv = ["q1".to_string(), "q2".to_string(), "q3".to_string()];
        let map = ["q1", "q2", "q3", "0"]
            .iter()
            .map(|s| parse_with_vars(s, &qv))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let level = parse("z4", 4)?;
        let base = vec![Complex64::new(0.2, 0.1), Complex64::new(-0.1, 0.15), Complex64::new(0.15, -0.05)];
        Ok(PerturbationFixture {
            eps,
            metric: perturbed_flat(eps)?,
            hypersurface: Hypersurface::new("hyperplane", map, Some(level), base, 0.2),
        })
    }
}
