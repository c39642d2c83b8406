use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr_ad::{self, HoloExpr, Jet3, JetOrder};
use crate::linalg::{CMat, ZERO};

/// How metric jets are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JetMethod {
    /// Nested dual numbers (exact to roundoff).
    Analytic,
    /// Central differences with the given step; used as an independent oracle.
    FiniteDifference(f64),
}

/// Holomorphic metric `e^{2f} g_ij` on a chart of dimension 3 or 4.
#[derive(Debug, Clone)]
pub struct MetricField {
    n: usize,
    entries: Vec<HoloExpr>,
    conformal_factor: Option<HoloExpr>,
    effective: Vec<HoloExpr>,
    anchor: Vec<Complex64>,
}

pub(crate) fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl MetricField {
    /// `entries` holds the upper triangle row by row: g11, g12, .., g1n, g22, ...
    pub fn new(n: usize, entries: Vec<HoloExpr>, conformal_factor: Option<HoloExpr>) -> Result<Self> {
        if entries.len() != n * (n + 1) / 2 {
            return Err(Error::Manifest(format!(
                "expected {} metric entries for n = {n}, got {}",
                n * (n + 1) / 2,
                entries.len()
            )));
        }
        for e in entries.iter().chain(conformal_factor.iter()) {
            if e.dim() != n {
                return Err(Error::Dimension { want: n, got: e.dim() });
            }
        }
        let effective = match &conformal_factor {
            None => entries.clone(),
            Some(f) => {
                let weight = f.scale(Complex64::new(2.0, 0.0)).exp();
                entries.iter().map(|e| weight.mul(e)).collect()
            }
        };
        Ok(MetricField {
            n,
            entries,
            conformal_factor,
            effective,
            anchor: vec![ZERO; n],
        })
    }

    /// Parse entries written over `z1..zn`.
    pub fn parse(n: usize, entries: &[&str], conformal_factor: Option<&str>) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|s| expr_ad::parse(s, n))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let f = conformal_factor.map(|s| expr_ad::parse(s, n)).transpose()?;
        MetricField::new(n, parsed, f)
    }

    /// Build from a full symmetric matrix of expressions (upper triangle is read).
    pub fn from_matrix(rows: &[Vec<HoloExpr>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                entries.push(rows[i][j].clone());
            }
        }
        MetricField::new(n, entries, None)
    }

    /// Point at which the volume-form square root takes its principal value.
    pub fn with_anchor(mut self, anchor: Vec<Complex64>) -> Self {
        assert_eq!(anchor.len(), self.n);
        self.anchor = anchor;
        self
    }

    pub fn anchor(&self) -> &[Complex64] {
        &self.anchor
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[HoloExpr] {
        &self.entries
    }

    pub fn conformal_factor(&self) -> Option<&HoloExpr> {
        self.conformal_factor.as_ref()
    }

    /// Expression of the (rescaled) component g_ij.
    pub fn component(&self, i: usize, j: usize) -> &HoloExpr {
        &self.effective[packed(self.n, i, j)]
    }

    /// The metric `e^{2f} g` as a new field (factors compose additively).
    pub fn conformal_rescale(&self, f: &HoloExpr) -> Result<MetricField> {
        let total = match &self.conformal_factor {
            None => f.clone(),
            Some(old) => old.add(f),
        };
        Ok(MetricField::new(self.n, self.entries.clone(), Some(total))?.with_anchor(self.anchor.clone()))
    }

    pub fn metric_at(&self, p: &[Complex64]) -> Result<CMat> {
        let n = self.n;
        let mut g = CMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.component(i, j).eval(p)?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        check_nondegenerate(&g)?;
        Ok(g)
    }

    /// Jets of every component, upper triangle packed.
    pub(crate) fn jets(&self, p: &[Complex64], order: JetOrder, method: JetMethod) -> Result<Vec<Jet3>> {
        self.effective
            .iter()
            .map(|e| match method {
                JetMethod::Analytic => e.eval_jet(p, order),
                JetMethod::FiniteDifference(h) => e.fd_oracle_jet(p, h),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(Error::from)
    }

    /// sqrt(det g) continued along the straight segment from the anchor.
    pub fn volume_root(&self, p: &[Complex64]) -> Result<Complex64> {
        const STEPS: usize = 32;
        let mut prev: Option<Complex64> = None;
        for s in 0..=STEPS {
            let t = s as f64 / STEPS as f64;
            let q: Vec<Complex64> = self
                .anchor
                .iter()
                .zip(p)
                .map(|(a, b)| a + (b - a) * t)
                .collect();
            let det = self.metric_at(&q).map_err(|_| Error::VolumeBranch)?.determinant();
            let root = det.sqrt();
            let chosen = match prev {
                None => root,
                Some(r) => {
                    if (root - r).norm() <= (root + r).norm() {
                        root
                    } else {
                        -root
                    }
                }
            };
            if let Some(r) = prev {
                if (chosen - r).norm() > 0.5 * (chosen.norm() + r.norm()) {
                    return Err(Error::VolumeBranch);
                }
            }
            prev = Some(chosen);
        }
        Ok(prev.unwrap_or(Complex64::new(1.0, 0.0)))
    }
}

pub(crate) fn check_nondegenerate(g: &CMat) -> Result<()> {
    let n = g.nrows();
    let scale = g.iter().map(|x| x.norm()).fold(0.0, f64::max).powi(n as i32);
    let det = g.determinant().norm();
    if !(det > 1e-12 * scale) || !det.is_finite() {
        return Err(Error::SingularMetric { det, scale });
    }
    Ok(())
}
