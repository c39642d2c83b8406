//! Identity suites over sampled points and the machine-readable summary.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use holoconf::catalog::{HypersurfaceExpect, MetricManifest, SurfaceKind};
use holoconf::conformal3::{
    cotton3, cotton3_trace_residual, frame_orientation, star_r_identity, theorem8_identity, corollary_cumb_check, umbilic_check,
    w_component_formulas,
};
use holoconf::core_tensor::{frob, riemann_symmetry_residual, CottonSplit, Frame, Geometry, JetMethod, Lambda2, Level, MetricField, Tensor, WeylSplit};
use holoconf::error::{Error, Result};
use holoconf::expr_ad::parse_with_vars;
use holoconf::geodesic_jacobi::{
    alpha_cone_curvature_formula, alpha_cone_curvature_oracle, beta_cone_residual, integrate_geodesic, jacobi_operator_p, AlongField,
    NormalProjector,
};
use holoconf::isotropic::{isotropic_plane_through, random_null_vector};
use holoconf::linalg::norm;
use holoconf::surfaces_projective::{
    ambient_restriction, cp2_geodesic_cross_ratio, k_tensor, thomas_tensor, thomas_tensor_ambient, totally_geodesic_residual, EmbeddedSurface,
};

type CV = Vec<Complex64>;

/// Default finite-difference step of the oracle (Richardson pair h, h/2).
pub const DEFAULT_FD_STEP: f64 = 5e-3;

/// Status string for claims with no checkable witness.
pub const UNVERIFIED_WITNESS: &str = "unverified — no desk-scale witness metric";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Selfdual,
    Beta,
    Cone,
    Dim3,
    Umbilic,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "core" => Suite::Core,
            "selfdual" => Suite::Selfdual,
            "beta" => Suite::Beta,
            "cone" => Suite::Cone,
            "dim3" => Suite::Dim3,
            "umbilic" => Suite::Umbilic,
            "all" => Suite::All,
            _ => return Err(Error::Manifest(format!("unknown suite '{s}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Core => "core",
            Suite::Selfdual => "selfdual",
            Suite::Beta => "beta",
            Suite::Cone => "cone",
            Suite::Dim3 => "dim3",
            Suite::Umbilic => "umbilic",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

/// Whether the recorded value is an upper bound on a residual or a lower bound on a magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub points: usize,
    /// Largest residual (bound = max) or smallest magnitude (bound = min) over the sampled points.
    pub max_residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnverifiedClaim {
    pub id: String,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub metric: String,
    pub suite: Suite,
    pub seed: u64,
    pub points: usize,
    pub tool_version: String,
    pub checks: Vec<CheckRecord>,
    pub unverified: Vec<UnverifiedClaim>,
    pub pass: bool,
}

impl VerificationSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    /// Plain residual table, one check per line.
    pub fn table(&self) -> String {
        let mut out = format!("metric {} suite {} seed {}\n", self.metric, self.suite, self.seed);
        for c in &self.checks {
            let op = if c.bound == Bound::Max { "<=" } else { ">=" };
            out.push_str(&format!(
                "{:<4} {:<40} n={:<3} {:.3e} {op} {:.1e}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.id,
                c.points,
                c.max_residual,
                c.tolerance
            ));
        }
        for u in &self.unverified {
            out.push_str(&format!("--   {:<40} {}\n", u.id, u.status));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub points: usize,
    pub seed: u64,
    /// Replaces every upper-bound tolerance when set.
    pub tol: Option<f64>,
    pub fd_step: f64,
    /// Overrides the manifest orientation when set.
    pub orientation: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            suite: Suite::All,
            points: 16,
            seed: 0,
            tol: None,
            fd_step: DEFAULT_FD_STEP,
            orientation: None,
        }
    }
}

struct Ctx<'a> {
    man: &'a MetricManifest,
    m: MetricField,
    orientation: f64,
    points: Vec<CV>,
    opts: &'a VerifyOptions,
}

struct Recorder {
    tol: Option<f64>,
    checks: Vec<CheckRecord>,
    unverified: Vec<UnverifiedClaim>,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / b.max(1e-300)
    }
}

impl Recorder {
    fn record(&mut self, id: &str, tolerance: f64, bound: Bound, values: Vec<f64>) {
        let (value, tolerance, pass) = match bound {
            Bound::Max => {
                let tol = self.tol.unwrap_or(tolerance);
                let v = values.iter().cloned().fold(0.0, f64::max);
                (v, tol, values.iter().all(|&x| x <= tol))
            }
            Bound::Min => {
                let v = values.iter().cloned().fold(f64::INFINITY, f64::min);
                (v, tolerance, values.iter().all(|&x| x >= tolerance))
            }
        };
        self.checks.push(CheckRecord {
            id: id.into(),
            points: values.len(),
            max_residual: value,
            tolerance,
            bound,
            pass,
        });
    }
}

impl Ctx<'_> {
    /// Evaluates `f` at every sampled point (in parallel, ordered by point index).
    fn per_point<F>(&self, count: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(usize, &CV) -> Result<f64> + Sync,
    {
        let n = count.min(self.points.len());
        self.points[..n].par_iter().enumerate().map(|(k, p)| f(k, p)).collect()
    }

    fn rng(&self, salt: u64, k: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.opts.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (k as u64).wrapping_mul(0x2545_f491_4f6c_dd1d))
    }
}

fn random_frame(m: &MetricField, p: &[Complex64], orientation: f64, rng: &mut ChaCha8Rng) -> Result<[CV; 4]> {
    let g = m.metric_at(p)?;
    let vecs: Vec<CV> = (0..4)
        .map(|_| (0..4).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    let f = Frame::from_vectors(&g, &vecs)?;
    let mut e = [f.vector(0), f.vector(1), f.vector(2), f.vector(3)];
    if frame_orientation(m, p, &e, orientation)? < 0.0 {
        e.swap(0, 1);
    }
    Ok(e)
}

fn weyl_at(m: &MetricField, p: &[Complex64], orientation: f64) -> Result<(Geometry, WeylSplit, CottonSplit)> {
    let geo = Geometry::compute(m, p, Level::Derivatives)?;
    let lam = Lambda2::at(m, &geo.g, p, orientation)?;
    let cs = CottonSplit::new(&geo, &lam);
    let ws = WeylSplit::new(&geo, lam);
    Ok((geo, ws, cs))
}

fn max_diff(a: &Tensor, b: &Tensor) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn core_suite(cx: &Ctx, out: &mut Recorder) -> Result<()> {
    let (m, o, n) = (&cx.m, cx.orientation, cx.man.n);
    let all = cx.points.len();
    let sym = cx.per_point(all, |_, p| {
        let geo = Geometry::compute(m, p, Level::Curvature)?;
        Ok(rel(riemann_symmetry_residual(&geo.riemann), geo.riemann.norm().max(1.0)))
    })?;
    out.record("core.riemann_symmetry", 1e-10, Bound::Max, sym);

    let h = cx.opts.fd_step;
    let fd = cx.per_point(all.min(4), |_, p| {
        let ad = Geometry::compute(m, p, Level::Derivatives)?;
        let fd = Geometry::compute_with(m, p, Level::Derivatives, JetMethod::FiniteDifference(h))?;
        let scale = ad.riemann.norm().max(ad.cotton.norm()).max(1.0);
        let worst = max_diff(&ad.christoffel, &fd.christoffel)
            .max(max_diff(&ad.riemann, &fd.riemann))
            .max(max_diff(&ad.cotton, &fd.cotton));
        Ok(worst / scale)
    })?;
    out.record("core.ad_vs_fd", 1e-6, Bound::Max, fd);

    if cx.man.expected.flat {
        let flat = cx.per_point(all, |_, p| {
            let geo = Geometry::compute(m, p, Level::Derivatives)?;
            Ok(geo.christoffel.norm().max(geo.riemann.norm()).max(geo.cotton.norm()))
        })?;
        out.record("core.flat", 1e-10, Bound::Max, flat);
    }
    if n == 4 {
        let re = cx.per_point(all, |_, p| Ok(weyl_at(m, p, o)?.1.residual))?;
        out.record("core.reassembly", 1e-8, Bound::Max, re);
        let div = cx.per_point(all, |_, p| {
            let (_, _, cs) = weyl_at(m, p, o)?;
            let scale = frob(&cs.cotton).max(1.0);
            Ok(frob(&(&cs.div_wplus - &cs.cplus)).max(frob(&(&cs.div_wminus - &cs.cminus))) / scale)
        })?;
        out.record("core.div_weyl_cotton", 1e-7, Bound::Max, div);
        let seed_rng = |k| cx.rng(1, k);
        let arw = cx.per_point(all, |k, p| {
            let e = random_frame(m, p, o, &mut seed_rng(k))?;
            let w = w_component_formulas(m, p, &e, o)?;
            let scale = w.lhs_plus.norm().max(w.lhs_minus.norm()).max(1.0);
            Ok((w.lhs_plus - w.rhs_plus).norm().max((w.lhs_minus - w.rhs_minus).norm()) / scale)
        })?;
        out.record("core.w_frame_formulas", 1e-8, Bound::Max, arw);
        if cx.man.expected.conformally_flat {
            let w = cx.per_point(all, |_, p| {
                let (geo, ws, _) = weyl_at(m, p, o)?;
                Ok(frob(&ws.weyl) / geo.riemann.norm().max(1.0))
            })?;
            out.record("core.weyl_vanishes", 1e-8, Bound::Max, w);
        }
    } else if n == 3 && cx.man.expected.conformally_flat {
        let c = cx.per_point(all, |_, p| Ok(cotton3(m, p)?.norm()))?;
        out.record("core.cotton_vanishes", 1e-8, Bound::Max, c);
    }
    Ok(())
}

fn selfdual_suite(cx: &Ctx, out: &mut Recorder) -> Result<()> {
    let (m, o) = (&cx.m, cx.orientation);
    let vals = cx.per_point(cx.points.len(), |_, p| {
        let (_, ws, _) = weyl_at(m, p, o)?;
        let (wp, wm) = (frob(&ws.wplus), frob(&ws.wminus));
        Ok(if wp > 1e-12 { wm / wp } else { wm })
    })?;
    out.record("selfdual.wminus_over_wplus", 1e-7, Bound::Max, vals);
    if !cx.man.expected.conformally_flat {
        let wp = cx.per_point(cx.points.len(), |_, p| Ok(frob(&weyl_at(m, p, o)?.1.wplus)))?;
        out.record("selfdual.wplus_nonzero", 1e-3, Bound::Min, wp);
    }
    Ok(())
}

/// A null vector of moderate size and a second vector spanning the α- (sign +1) or β-plane with it.
fn null_plane(m: &MetricField, p: &[Complex64], orientation: f64, sign: f64, rng: &mut ChaCha8Rng) -> Result<(CV, CV)> {
    let g = m.metric_at(p)?;
    let lam = Lambda2::at(m, &g, p, orientation)?;
    let v = random_null_vector(&g, rng);
    let s = 0.3 / norm(&v);
    let v: CV = v.iter().map(|x| x * s).collect();
    let w = isotropic_plane_through(&lam, &g, &v, sign)?;
    Ok((v, w))
}

const CONFORMAL_FACTORS: [&str; 3] = ["0.3*{0}*{3}", "0.3*{0} - 0.2*{2}^2", "exp(0.5*{1}) - 1"];

fn cone_suite(cx: &Ctx, out: &mut Recorder) -> Result<()> {
    let (m, o) = (&cx.m, cx.orientation);
    let all = cx.points.len();
    let rng = |k| cx.rng(2, k);
    let pairs = cx.per_point(all.min(8), |k, p| {
        let (v, w) = null_plane(m, p, o, 1.0, &mut rng(k))?;
        let f = alpha_cone_curvature_formula(m, p, &v, (&v, &w), o)?;
        let oracle = alpha_cone_curvature_oracle(m, p, &v, (&v, &w), o)?;
        // Both sides vanish identically when W⁺ = 0; compare against the curvature scale then.
        let riemann = Geometry::compute(m, p, Level::Curvature)?.riemann.norm();
        let scale = oracle.norm().max(1e-6 * riemann * norm(&v).powi(2) * norm(&f.x).powi(2));
        Ok(rel((f.value - oracle).norm(), scale))
    })?;
    out.record("cone.alpha_two_path", 1e-8, Bound::Max, pairs);
    if !cx.man.expected.conformally_flat {
        let mags = cx.per_point(all.min(8), |k, p| {
            let (v, w) = null_plane(m, p, o, 1.0, &mut rng(k))?;
            Ok(alpha_cone_curvature_oracle(m, p, &v, (&v, &w), o)?.norm())
        })?;
        out.record("cone.alpha_nonflat", 1e-6, Bound::Min, mags);
    }
    if cx.man.expected.self_dual {
        let brng = |k| cx.rng(3, k);
        let beta = cx.per_point(all.min(2), |k, p| {
            let (v, w) = null_plane(m, p, o, -1.0, &mut brng(k))?;
            let path = integrate_geodesic(m, p, &v, 1.0, 128)?;
            beta_cone_residual(m, &path, &w)
        })?;
        out.record("cone.beta_flat", 1e-6, Bound::Max, beta);
    }

    let coords = &cx.man.coordinates;
    let factors = CONFORMAL_FACTORS
        .iter()
        .map(|f| {
            let s = (0..4).fold(f.to_string(), |acc, i| acc.replace(&format!("{{{i}}}"), &coords[i]));
            Ok(m.conformal_rescale(&parse_with_vars(&s, coords)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let prng = |k| cx.rng(4, k);
    let jac = cx.per_point(all.min(2), |k, p| {
        let (v, _) = null_plane(m, p, o, 1.0, &mut prng(k))?;
        let path = integrate_geodesic(m, p, &v, 1.0, 64)?;
        let proj = NormalProjector::new(m, &path)?;
        let raw = |t: f64| -> CV {
            vec![
                Complex64::new(0.1 + t, 0.0),
                Complex64::new(0.2 * t * t, 0.1),
                Complex64::new(0.3, -t),
                Complex64::new((1.3 * t).sin(), 0.2),
            ]
        };
        let samples: Vec<CV> = path.states.iter().enumerate().map(|(k, s)| proj.orthogonal(k, &raw(s.t))).collect();
        let y = AlongField::from_samples(path.t_end(), &samples)?;
        let base = jacobi_operator_p(m, &path, m, &y)?;
        let mut worst: f64 = 0.0;
        for mp in &factors {
            let other = jacobi_operator_p(mp, &path, m, &y)?;
            for k in 0..base.len() {
                let d: CV = other[k].iter().zip(&base[k]).map(|(a, b)| a - b).collect();
                worst = worst.max(norm(&proj.project(k, &d)) / norm(&base[k]).max(1.0));
            }
        }
        Ok(worst)
    })?;
    out.record("cone.jacobi_conformal", 1e-6, Bound::Max, jac);
    Ok(())
}

/// Initial parameter velocities of the geodesics used in the cross-ratio check.
const CROSS_RATIO_VELOCITIES: [[(f64, f64); 2]; 5] = [
    [(0.3, 0.1), (0.2, -0.2)],
    [(-0.1, 0.4), (0.5, 0.0)],
    [(0.4, 0.0), (0.0, 0.3)],
    [(0.2, -0.3), (-0.3, 0.1)],
    [(0.0, 0.2), (0.35, 0.25)],
];

fn beta_suite(cx: &Ctx, out: &mut Recorder) -> Result<()> {
    let m = &cx.m;
    let surfaces: Vec<_> = cx.man.surfaces.iter().filter(|s| s.kind == SurfaceKind::Beta).cloned().collect();
    for sm in surfaces {
        let s: EmbeddedSurface = sm.build()?;
        let params = s.sample_parameters(cx.opts.seed, cx.opts.points.min(8));
        let eval = |f: &(dyn Fn(&CV) -> Result<f64> + Sync)| -> Result<Vec<f64>> { params.par_iter().map(f).collect() };
        let id = |what: &str| format!("beta.{}.{what}", sm.name);
        out.record(&id("totally_geodesic"), 1e-6, Bound::Max, eval(&|q| totally_geodesic_residual(m, &s, q))?);
        out.record(
            &id("k_equals_h"),
            1e-7,
            Bound::Max,
            eval(&|q| {
                let amb = ambient_restriction(m, &s, q)?;
                Ok(k_tensor(m, &s, q)?.diff_norm(&amb.schouten) / amb.schouten.norm().max(1.0))
            })?,
        );
        out.record(
            &id("thomas"),
            1e-6,
            Bound::Max,
            eval(&|q| {
                let amb = ambient_restriction(m, &s, q)?;
                Ok(thomas_tensor(m, &s, q)?.norm() / amb.nabla_k.norm().max(1.0))
            })?,
        );
        out.record(
            &id("thomas_cotton"),
            1e-7,
            Bound::Max,
            eval(&|q| {
                let amb = ambient_restriction(m, &s, q)?;
                let ta = thomas_tensor_ambient(m, &s, q)?;
                let three_c = amb.cotton.scaled(Complex64::new(3.0, 0.0));
                Ok(ta.components.diff_norm(&three_c) / amb.nabla_k.norm().max(1.0))
            })?,
        );
        if let Some(flag) = &sm.flag {
            let vals = CROSS_RATIO_VELOCITIES
                .par_iter()
                .enumerate()
                .map(|(k, sd)| {
                    let sdot = [Complex64::new(sd[0].0, sd[0].1), Complex64::new(sd[1].0, sd[1].1)];
                    let picks = [0, 48 + 24 * (k % 4), 192];
                    Ok(cp2_geodesic_cross_ratio(m, &s, (&flag.point, &flag.line), &s.basepoint, &sdot, 1.0, 192, picks)?.residual)
                })
                .collect::<Result<Vec<_>>>()?;
            out.record(&id("cross_ratio"), 1e-6, Bound::Max, vals);
        }
    }
    Ok(())
}

fn dim3_suite(cx: &Ctx, out: &mut Recorder) -> Result<()> {
    let m = &cx.m;
    let all = cx.points.len();
    let star = cx.per_point(all, |_, p| Ok(star_r_identity(m, p)?.residual))?;
    out.record("dim3.star_identity", 1e-8, Bound::Max, star);
    let tr = cx.per_point(all, |_, p| cotton3_trace_residual(m, p))?;
    out.record("dim3.cotton_trace", 1e-9, Bound::Max, tr);
    let h = cx.opts.fd_step;
    let fd = cx.per_point(all.min(4), |_, p| {
        let ad = cotton3(m, p)?;
        let fd = Geometry::compute_with(m, p, Level::Derivatives, JetMethod::FiniteDifference(h))?.cotton;
        Ok(max_diff(&ad, &fd) / ad.norm().max(1.0))
    })?;
    out.record("dim3.cotton_fd", 1e-5, Bound::Max, fd);
    Ok(())
}

fn umbilic_suite(cx: &Ctx, out: &mut Recorder) -> Result<()> {
    let (m, o) = (&cx.m, cx.orientation);
    let hypers: Vec<_> = cx.man.hypersurfaces.clone();
    for hm in hypers {
        let hs = hm.build(&cx.man.coordinates)?;
        let params = hs.sample_parameters(cx.opts.seed, cx.opts.points.min(4));
        let id = |what: &str| format!("umbilic.{}.{what}", hm.name);
        let sffs = params.par_iter().map(|q| umbilic_check(m, &hs, q)).collect::<Result<Vec<_>>>()?;
        match hm.expect {
            HypersurfaceExpect::TotallyGeodesic => {
                out.record(&id("totally_geodesic"), 1e-8, Bound::Max, sffs.iter().map(|s| s.geodesic_residual).collect());
            }
            HypersurfaceExpect::Umbilic => {
                out.record(&id("umbilic"), 1e-8, Bound::Max, sffs.iter().map(|s| s.umbilic_residual).collect());
            }
            HypersurfaceExpect::None => {
                out.record(&id("not_umbilic"), 1e-6, Bound::Min, sffs.iter().map(|s| s.umbilic_residual).collect());
            }
        }
        // With W ≡ 0 and Q totally geodesic every hypothesis holds, and both sides are forced to vanish.
        if hm.expect == HypersurfaceExpect::TotallyGeodesic && cx.man.expected.conformally_flat {
            let reports = params.par_iter().map(|q| theorem8_identity(m, &hs, q, o)).collect::<Result<Vec<_>>>()?;
            out.record(&id("normal_derivative"), 1e-10, Bound::Max, reports.iter().map(|r| (r.lhs - r.rhs).norm()).collect());
            out.record(&id("w1"), 1e-7, Bound::Max, reports.iter().map(|r| (r.w1_lhs - r.w1_rhs).norm()).collect());
            out.record(&id("rq"), 1e-7, Bound::Max, reports.iter().map(|r| r.rq.norm()).collect());
            let cor = params.par_iter().map(|q| corollary_cumb_check(m, &hs, q, o)).collect::<Result<Vec<_>>>()?;
            out.record(&id("cotton_plus"), 1e-10, Bound::Max, cor.iter().map(|r| r.residual).collect());
        }
    }
    if cx.man.expected.self_dual {
        // The W⁺ frame formula needs only W⁻ = 0 at the point.
        let rng = |k| cx.rng(5, k);
        let w1 = cx.per_point(cx.points.len(), |k, p| {
            let e = random_frame(m, p, o, &mut rng(k))?;
            let w = w_component_formulas(m, p, &e, o)?;
            Ok((w.lhs_plus - w.w1_rhs).norm() / w.lhs_plus.norm().max(1.0))
        })?;
        out.record("umbilic.w1_frames", 1e-7, Bound::Max, w1);
    }
    out.unverified.push(UnverifiedClaim {
        id: "umbilic.weyl_vanishes_on_q_nonflat".into(),
        status: UNVERIFIED_WITNESS.into(),
    });
    Ok(())
}

fn needs(n: usize, want: usize) -> Result<()> {
    if n != want {
        return Err(Error::Dimension { want, got: n });
    }
    Ok(())
}

pub fn run_verify(man: &MetricManifest, opts: &VerifyOptions) -> Result<VerificationSummary> {
    let m = man.metric_field()?;
    let orientation = opts.orientation.unwrap_or_else(|| man.orientation());
    let points = man.sample_points(opts.seed, opts.points);
    let cx = Ctx {
        man,
        m,
        orientation,
        points,
        opts,
    };
    let mut out = Recorder {
        tol: opts.tol,
        checks: Vec::new(),
        unverified: Vec::new(),
    };
    let cx = &cx;
    let n = man.n;
    match opts.suite {
        Suite::Core => core_suite(cx, &mut out)?,
        Suite::Selfdual => {
            needs(n, 4)?;
            selfdual_suite(cx, &mut out)?
        }
        Suite::Beta => {
            needs(n, 4)?;
            beta_suite(cx, &mut out)?
        }
        Suite::Cone => {
            needs(n, 4)?;
            cone_suite(cx, &mut out)?
        }
        Suite::Dim3 => {
            needs(n, 3)?;
            dim3_suite(cx, &mut out)?
        }
        Suite::Umbilic => {
            needs(n, 4)?;
            umbilic_suite(cx, &mut out)?
        }
        Suite::All => {
            core_suite(cx, &mut out)?;
            if n == 4 {
                if man.expected.self_dual {
                    selfdual_suite(cx, &mut out)?;
                }
                cone_suite(cx, &mut out)?;
                beta_suite(cx, &mut out)?;
                umbilic_suite(cx, &mut out)?;
            } else if n == 3 {
                dim3_suite(cx, &mut out)?;
            }
        }
    }
    let mut checks = out.checks;
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let mut unverified = out.unverified;
    unverified.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerificationSummary {
        metric: man.name.clone(),
        suite: opts.suite,
        seed: opts.seed,
        points: opts.points,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        pass: checks.iter().all(|c| c.pass),
        checks,
        unverified,
    })
}
