use num_complex::Complex64;

use super::metric::{check_nondegenerate, packed, JetMethod, MetricField};
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::expr_ad::JetOrder;
use crate::linalg::{CMat, ZERO};
use crate::taylor::{Taylor, TaylorMat};

/// How much of the curvature pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    /// Metric and Christoffel symbols.
    Connection,
    /// Adds dΓ, Riemann, Ricci, scalar curvature and h.
    Curvature,
    /// Adds ∇R, ∇h and the Cotton–York tensor.
    Derivatives,
}

/// Pointwise geometric data of a metric.
///
/// Index conventions:
/// * `christoffel[k,i,j]` = Γ^k_ij.
/// * `dchristoffel[m,k,i,j]` = ∂_m Γ^k_ij.
/// * `ddchristoffel[a,b,k,i,j]` = ∂_a ∂_b Γ^k_ij.
/// * `riemann_up[a,b,c,d]` = R^a_bcd with R(∂c,∂d)∂b = R^a_bcd ∂a.
/// * `riemann[i,j,k,l]` = g(R(∂i,∂j)∂k, ∂l), R(X,Y) = ∇X∇Y − ∇Y∇X − ∇[X,Y].
/// * `ricci[x,y]` = tr(Z ↦ R(Z,X)Y).
/// * `schouten` = Scal/(2n(n−1))·g + Ric₀/(n−2).
/// * `nabla_riemann[m,i,j,k,l]` = (∇_m R)_ijkl, `nabla_schouten[m,i,j]` = (∇_m h)_ij.
/// * `cotton[x,y,z]` = (∇_x h)(y,z) − (∇_y h)(x,z).
#[derive(Debug, Clone)]
pub struct Geometry {
    pub n: usize,
    pub level: Level,
    pub point: Vec<Complex64>,
    pub g: CMat,
    pub ginv: CMat,
    pub christoffel: Tensor,
    pub dchristoffel: Tensor,
    pub ddchristoffel: Tensor,
    pub riemann_up: Tensor,
    pub riemann: Tensor,
    pub ricci: Tensor,
    pub scalar: Complex64,
    pub schouten: Tensor,
    pub nabla_riemann: Tensor,
    pub nabla_schouten: Tensor,
    pub cotton: Tensor,
}

impl Geometry {
    pub fn compute(m: &MetricField, p: &[Complex64], level: Level) -> Result<Geometry> {
        Geometry::compute_with(m, p, level, JetMethod::Analytic)
    }

    pub fn compute_with(m: &MetricField, p: &[Complex64], level: Level, method: JetMethod) -> Result<Geometry> {
        let n = m.dim();
        if p.len() != n {
            return Err(Error::Dimension { want: n, got: p.len() });
        }
        let order = match level {
            Level::Connection => 1,
            Level::Curvature => 2,
            Level::Derivatives => 3,
        };
        let jet_order = match order {
            1 => JetOrder::One,
            2 => JetOrder::Two,
            _ => JetOrder::Three,
        };
        let jets = m.jets(p, jet_order, method)?;
        let gmat = TaylorMat {
            dim: n,
            e: (0..n * n)
                .map(|k| Taylor::from_jet(&jets[packed(n, k / n, k % n)], order))
                .collect(),
        };
        let g = gmat.values();
        check_nondegenerate(&g)?;
        let ginv_t = gmat.inverse(order - 1).ok_or(Error::SingularMetric {
            det: 0.0,
            scale: 1.0,
        })?;
        let ginv = ginv_t.values();
        let gamma = christoffel_jets(&gmat, &ginv_t, order - 1);
        let mut geo = Geometry {
            n,
            level,
            point: p.to_vec(),
            g,
            ginv,
            christoffel: values3(&gamma, n),
            dchristoffel: Tensor::zeros(n, 0),
            ddchristoffel: Tensor::zeros(n, 0),
            riemann_up: Tensor::zeros(n, 0),
            riemann: Tensor::zeros(n, 0),
            ricci: Tensor::zeros(n, 0),
            scalar: ZERO,
            schouten: Tensor::zeros(n, 0),
            nabla_riemann: Tensor::zeros(n, 0),
            nabla_schouten: Tensor::zeros(n, 0),
            cotton: Tensor::zeros(n, 0),
        };
        if level == Level::Connection {
            return Ok(geo);
        }
        let curv_order = order - 2;
        let mut dgamma = Tensor::zeros(n, 4);
        for mm in 0..n {
            for (kij, t) in gamma.iter().enumerate() {
                dgamma.data[mm * n * n * n + kij] = t.d1[mm];
            }
        }
        geo.dchristoffel = dgamma;
        if order >= 3 {
            let mut dd = Tensor::zeros(n, 5);
            for ab in 0..n * n {
                for (kij, t) in gamma.iter().enumerate() {
                    dd.data[ab * n * n * n + kij] = t.d2[ab];
                }
            }
            geo.ddchristoffel = dd;
        }

        // R^a_bcd = ∂c Γ^a_db − ∂d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
        let gi = |k: usize, i: usize, j: usize| &gamma[(k * n + i) * n + j];
        let mut rup: Vec<Taylor> = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut t = &gi(a, d, b).partial(c) - &gi(a, c, b).partial(d);
                        t = t.truncate(curv_order);
                        for e in 0..n {
                            t.add_assign_mul(gi(a, c, e), gi(e, d, b));
                            let prod = gi(a, d, e).mul_to(gi(e, c, b), curv_order);
                            t = &t - &prod;
                        }
                        rup.push(t);
                    }
                }
            }
        }
        let r4 = |a: usize, b: usize, c: usize, d: usize| &rup[((a * n + b) * n + c) * n + d];
        // R_ijkl = g_la R^a_kij
        let mut rdown: Vec<Taylor> = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut t = Taylor::zero(n, curv_order);
                        for a in 0..n {
                            t.add_assign_mul(gmat.get(l, a), r4(a, k, i, j));
                        }
                        rdown.push(t);
                    }
                }
            }
        }
        // Ric_bc = R^a_cab
        let mut ric: Vec<Taylor> = Vec::with_capacity(n * n);
        for b in 0..n {
            for c in 0..n {
                let mut t = Taylor::zero(n, curv_order);
                for a in 0..n {
                    t = &t + r4(a, c, a, b);
                }
                ric.push(t);
            }
        }
        let mut scal = Taylor::zero(n, curv_order);
        for b in 0..n {
            for c in 0..n {
                scal.add_assign_mul(ginv_t.get(b, c), &ric[b * n + c]);
            }
        }
        let nf = n as f64;
        let ka = Complex64::new(1.0 / (2.0 * nf * (nf - 1.0)) - 1.0 / (nf * (nf - 2.0)), 0.0);
        let kb = Complex64::new(1.0 / (nf - 2.0), 0.0);
        let mut h: Vec<Taylor> = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let sg = scal.mul_to(gmat.get(i, j), curv_order).scale(ka);
                h.push(&sg + &ric[i * n + j].scale(kb));
            }
        }
        geo.riemann_up = values_n(&rup, n, 4);
        geo.riemann = values_n(&rdown, n, 4);
        geo.ricci = values_n(&ric, n, 2);
        geo.scalar = scal.v;
        geo.schouten = values_n(&h, n, 2);
        if level == Level::Curvature {
            return Ok(geo);
        }

        let gam = &geo.christoffel;
        let mut nr = Tensor::zeros(n, 5);
        for mm in 0..n {
            for (flat, t) in rdown.iter().enumerate() {
                let idx = geo.riemann.unravel(flat);
                let mut v = t.d1[mm];
                for a in 0..n {
                    let gm = |s: usize| gam.at(&[a, mm, idx[s]]);
                    v -= gm(0) * geo.riemann.at(&[a, idx[1], idx[2], idx[3]]);
                    v -= gm(1) * geo.riemann.at(&[idx[0], a, idx[2], idx[3]]);
                    v -= gm(2) * geo.riemann.at(&[idx[0], idx[1], a, idx[3]]);
                    v -= gm(3) * geo.riemann.at(&[idx[0], idx[1], idx[2], a]);
                }
                nr.data[mm * n.pow(4) + flat] = v;
            }
        }
        let mut nh = Tensor::zeros(n, 3);
        for mm in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = h[i * n + j].d1[mm];
                    for a in 0..n {
                        v -= gam.at(&[a, mm, i]) * geo.schouten.at(&[a, j]);
                        v -= gam.at(&[a, mm, j]) * geo.schouten.at(&[i, a]);
                    }
                    nh.set(&[mm, i, j], v);
                }
            }
        }
        let mut cotton = Tensor::zeros(n, 3);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    cotton.set(&[x, y, z], nh.at(&[x, y, z]) - nh.at(&[y, x, z]));
                }
            }
        }
        geo.nabla_riemann = nr;
        geo.nabla_schouten = nh;
        geo.cotton = cotton;
        Ok(geo)
    }

    fn require(&self, level: Level) {
        assert!(self.level >= level, "geometry computed at {:?}, {:?} required", self.level, level);
    }

    /// Γ(u, w)^k = Γ^k_ij u^i w^j.
    pub fn gamma_apply(&self, u: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![ZERO; n];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..n {
                if u[i] == ZERO {
                    continue;
                }
                for j in 0..n {
                    *o += self.christoffel.data[(k * n + i) * n + j] * u[i] * w[j];
                }
            }
        }
        out
    }

    /// (∂_a Γ^k_ij) d^a u^i w^j.
    pub fn dgamma_apply(&self, d: &[Complex64], u: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
        self.require(Level::Curvature);
        let n = self.n;
        let mut out = vec![ZERO; n];
        for a in 0..n {
            if d[a] == ZERO {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                for i in 0..n {
                    for j in 0..n {
                        *o += d[a] * self.dchristoffel.at(&[a, k, i, j]) * u[i] * w[j];
                    }
                }
            }
        }
        out
    }

    /// The vector R(x, y)z.
    pub fn curvature_apply(&self, x: &[Complex64], y: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
        self.require(Level::Curvature);
        let n = self.n;
        let mut out = vec![ZERO; n];
        for (a, o) in out.iter_mut().enumerate() {
            for b in 0..n {
                if z[b] == ZERO {
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        *o += self.riemann_up.at(&[a, b, c, d]) * z[b] * x[c] * y[d];
                    }
                }
            }
        }
        out
    }

    /// R(x, y, z, w) = g(R(x,y)z, w).
    pub fn riemann_apply(&self, x: &[Complex64], y: &[Complex64], z: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.require(Level::Curvature);
        contract4(&self.riemann, [x, y, z, w])
    }

    pub fn inner(&self, u: &[Complex64], w: &[Complex64]) -> Complex64 {
        crate::linalg::bilinear(&self.g, u, w)
    }

    /// Raise a covector with g^{-1}.
    pub fn raise(&self, w: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        (0..n)
            .map(|a| (0..n).map(|b| self.ginv[(a, b)] * w[b]).sum())
            .collect()
    }
}

pub fn contract4(t: &Tensor, v: [&[Complex64]; 4]) -> Complex64 {
    let n = t.n;
    let mut acc = ZERO;
    for i in 0..n {
        if v[0][i] == ZERO {
            continue;
        }
        for j in 0..n {
            if v[1][j] == ZERO {
                continue;
            }
            let ij = v[0][i] * v[1][j];
            for k in 0..n {
                if v[2][k] == ZERO {
                    continue;
                }
                for l in 0..n {
                    acc += t.data[((i * n + j) * n + k) * n + l] * ij * v[2][k] * v[3][l];
                }
            }
        }
    }
    acc
}

/// Γ^k_ij jets to order `order` from metric jets of order `order + 1`.
pub(crate) fn christoffel_jets(gmat: &TaylorMat, ginv: &TaylorMat, order: usize) -> Vec<Taylor> {
    let n = gmat.dim;
    let half = Complex64::new(0.5, 0.0);
    let mut dg: Vec<Taylor> = Vec::with_capacity(n * n * n);
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                dg.push(gmat.get(i, j).partial(m));
            }
        }
    }
    let d = |m: usize, i: usize, j: usize| &dg[(m * n + i) * n + j];
    let mut first: Vec<Taylor> = Vec::with_capacity(n * n * n);
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let t = &(d(i, j, l) + d(j, i, l)) - d(l, i, j);
                first.push(t.scale(half));
            }
        }
    }
    let mut gamma = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut t = Taylor::zero(gmat.e[0].n, order);
                for l in 0..n {
                    t.add_assign_mul(ginv.get(k, l), &first[(l * n + i) * n + j]);
                }
                gamma.push(t);
            }
        }
    }
    gamma
}

fn values3(t: &[Taylor], n: usize) -> Tensor {
    values_n(t, n, 3)
}

fn values_n(t: &[Taylor], n: usize, rank: usize) -> Tensor {
    Tensor {
        n,
        rank,
        data: t.iter().map(|x| x.v).collect(),
    }
}
