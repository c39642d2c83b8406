//! Command bodies, kept free of argument parsing so tests can call them directly.

use num_complex::Complex64;
use serde::Serialize;

use holoconf::catalog::{MetricManifest, SurfaceKind};
use holoconf::conformal3::{corollary_cumb_check, theorem8_identity, umbilic_check, CorollaryReport, SecondFundamentalForm, Theorem8Report};
use holoconf::core_tensor::CurvatureReport;
use holoconf::error::{Error, Result};
use holoconf::expr_ad::parse_with_vars;
use holoconf::geodesic_jacobi::integrate_geodesic;
use holoconf::isotropic::{classify_plane, PlaneClass};

use crate::verify::{run_verify, Suite, VerificationSummary, VerifyOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// 3 for numerical aborts, 2 for everything the caller can fix by changing the input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SingularMetric { .. } | Error::FramePivot { .. } | Error::VolumeBranch | Error::IsotropyDrift { .. } => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

/// A complex constant such as `0.1`, `-2i` or `0.3-0.1*i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let expr = parse_with_vars(s.trim(), &[])?;
    Ok(expr.eval(&[])?)
}

/// Comma-separated complex components; `n` is the expected length.
pub fn parse_vector(s: &str, n: usize) -> Result<Vec<Complex64>> {
    let v = s.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::Dimension { want: n, got: v.len() });
    }
    Ok(v)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

pub fn report(man: &MetricManifest, point: Option<&[Complex64]>, orientation: Option<f64>) -> Result<String> {
    let m = man.metric_field()?;
    let p = point.map(|p| p.to_vec()).unwrap_or_else(|| man.basepoint.clone());
    man.check_guard(&p)?;
    let r = CurvatureReport::compute(&m, &p, orientation.unwrap_or_else(|| man.orientation()))?;
    Ok(json(&r))
}

pub fn verify(man: &MetricManifest, opts: &VerifyOptions) -> Result<VerificationSummary> {
    run_verify(man, opts)
}

/// CSV rows t, Re/Im x_i, Re/Im v_i, |g(v, v)|.
pub fn trace_geodesic(man: &MetricManifest, x0: &[Complex64], v0: &[Complex64], t_end: f64, steps: usize) -> Result<String> {
    let m = man.metric_field()?;
    let path = integrate_geodesic(&m, x0, v0, t_end, steps)?;
    let n = man.n;
    let mut out = String::from("t");
    for (prefix, k) in [("x", n), ("v", n)] {
        for i in 1..=k {
            out.push_str(&format!(",re_{prefix}{i},im_{prefix}{i}"));
        }
    }
    out.push_str(",isotropy\n");
    for s in &path.states {
        let g = m.metric_at(&s.x)?;
        let iso = holoconf::linalg::bilinear(&g, &s.v, &s.v).norm();
        out.push_str(&format!("{}", s.t));
        for z in s.x.iter().chain(&s.v) {
            out.push_str(&format!(",{},{}", z.re, z.im));
        }
        out.push_str(&format!(",{iso:e}\n"));
    }
    Ok(out)
}

pub fn classify(man: &MetricManifest, p: &[Complex64], u: &[Complex64], w: &[Complex64], orientation: Option<f64>) -> Result<PlaneClass> {
    let m = man.metric_field()?;
    classify_plane(&m, p, u, w, orientation.unwrap_or_else(|| man.orientation()))
}

/// Runs the β-surface checks on one named surface of the manifest.
pub fn check_beta_surface(man: &MetricManifest, surface: &str, opts: &VerifyOptions) -> Result<VerificationSummary> {
    let mut one = man.clone();
    one.surfaces.retain(|s| s.name == surface);
    match one.surfaces.first() {
        None => return Err(Error::Manifest(format!("no surface named '{surface}'"))),
        Some(s) if s.kind != SurfaceKind::Beta => {
            return Err(Error::Manifest(format!("surface '{surface}' is not declared as a beta-surface")));
        }
        _ => {}
    }
    let opts = VerifyOptions {
        suite: Suite::Beta,
        ..opts.clone()
    };
    run_verify(&one, &opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct UmbilicReport {
    pub hypersurface: String,
    pub samples: Vec<SecondFundamentalForm>,
    pub umbilic: bool,
    pub totally_geodesic: bool,
}

pub fn check_umbilic(man: &MetricManifest, name: &str, points: usize, seed: u64) -> Result<UmbilicReport> {
    let hs = man
        .hypersurface(name)
        .ok_or_else(|| Error::Manifest(format!("no hypersurface named '{name}'")))?;
    let m = man.metric_field()?;
    let mut params = vec![hs.basepoint.clone()];
    params.extend(hs.sample_parameters(seed, points.saturating_sub(1)));
    let samples = params.iter().map(|q| umbilic_check(&m, &hs, q)).collect::<Result<Vec<_>>>()?;
    Ok(UmbilicReport {
        hypersurface: name.into(),
        umbilic: samples.iter().all(|s| s.umbilic),
        totally_geodesic: samples.iter().all(|s| s.totally_geodesic),
        samples,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalDerivativeReport {
    pub identity: Theorem8Report,
    pub cotton_plus: CorollaryReport,
}

pub fn check_theorem8(man: &MetricManifest, name: &str, q: Option<&[Complex64]>, orientation: Option<f64>) -> Result<NormalDerivativeReport> {
    let hs = man
        .hypersurface(name)
        .ok_or_else(|| Error::Manifest(format!("no hypersurface named '{name}'")))?;
    let m = man.metric_field()?;
    let q = q.map(|q| q.to_vec()).unwrap_or_else(|| hs.basepoint.clone());
    let o = orientation.unwrap_or_else(|| man.orientation());
    Ok(NormalDerivativeReport {
        identity: theorem8_identity(&m, &hs, &q, o)?,
        cotton_plus: corollary_cumb_check(&m, &hs, &q, o)?,
    })
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    json(v)
}
