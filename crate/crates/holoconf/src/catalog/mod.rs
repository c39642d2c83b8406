//! Metric manifests: the JSON file format and the built-in catalog.
//!
//! A manifest names its chart coordinates and writes every component of the
//! metric as an expression over them. Surfaces and hypersurfaces used by the
//! verification suites travel with the metric that contains them.

pub mod cp2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal3::Hypersurface;
use crate::core_tensor::MetricField;
use crate::error::{Error, Result};
use crate::expr_ad::{parse_with_vars, HoloExpr};
use crate::surfaces_projective::EmbeddedSurface;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedProperties {
    pub flat: bool,
    pub conformally_flat: bool,
    pub self_dual: bool,
    pub generic: bool,
}

/// Point and line of P² fixing a β-surface of the ℂP² example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexFlag {
    pub point: Vec<Complex64>,
    pub line: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Alpha,
    Beta,
    /// Not expected to be totally geodesic; used as a negative fixture.
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceManifest {
    pub name: String,
    pub kind: SurfaceKind,
    pub parameters: Vec<String>,
    pub map: Vec<String>,
    pub basepoint: Vec<Complex64>,
    pub sample_radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<IndexFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypersurfaceExpect {
    TotallyGeodesic,
    Umbilic,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceManifest {
    pub name: String,
    pub parameters: Vec<String>,
    pub map: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_set: Option<String>,
    pub basepoint: Vec<Complex64>,
    pub sample_radius: f64,
    pub expect: HypersurfaceExpect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricManifest {
    pub schema_version: u32,
    pub name: String,
    pub n: usize,
    pub coordinates: Vec<String>,
    /// Full symmetric matrix of component expressions.
    pub metric: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal_factor: Option<String>,
    pub orientation: i32,
    pub basepoint: Vec<Complex64>,
    pub sample_radius: f64,
    /// Expression that must stay away from zero on sampled points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_guard: Option<String>,
    pub expected: ExpectedProperties,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surfaces: Vec<SurfaceManifest>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypersurfaces: Vec<HypersurfaceManifest>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

fn manifest_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Manifest(e.to_string())
}

impl MetricManifest {
    pub fn from_json(src: &str) -> Result<MetricManifest> {
        let m: MetricManifest = serde_json::from_str(src).map_err(manifest_err)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// `builtin:<name>` or a path to a JSON manifest.
    pub fn resolve(spec: &str) -> Result<MetricManifest> {
        if let Some(name) = spec.strip_prefix("builtin:") {
            return builtin(name).ok_or_else(|| Error::Manifest(format!("unknown builtin metric '{name}'")));
        }
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Manifest(format!("{spec}: {e}")))?;
        MetricManifest::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Manifest(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let n = self.n;
        if self.coordinates.len() != n || self.basepoint.len() != n {
            return Err(Error::Manifest("coordinates and basepoint must have n entries".into()));
        }
        if self.metric.len() != n || self.metric.iter().any(|r| r.len() != n) {
            return Err(Error::Manifest(format!("metric must be a {n}x{n} matrix")));
        }
        if self.orientation != 1 && self.orientation != -1 {
            return Err(Error::Manifest("orientation must be +1 or -1".into()));
        }
        let parsed = self.parse_matrix()?;
        for i in 0..n {
            for j in 0..i {
                if parsed[i][j].to_string() != parsed[j][i].to_string() {
                    return Err(Error::Manifest(format!("metric entry ({},{}) differs from ({},{})", i + 1, j + 1, j + 1, i + 1)));
                }
            }
        }
        let field = self.metric_field()?;
        self.check_guard(&self.basepoint)?;
        field.metric_at(&self.basepoint)?;
        for s in &self.surfaces {
            if s.map.len() != n || s.parameters.len() != 2 || s.basepoint.len() != 2 {
                return Err(Error::Manifest(format!("surface '{}' needs 2 parameters and {n} map entries", s.name)));
            }
        }
        for h in &self.hypersurfaces {
            if h.map.len() != n || h.parameters.len() != n - 1 || h.basepoint.len() != n - 1 {
                return Err(Error::Manifest(format!("hypersurface '{}' has the wrong shape", h.name)));
            }
        }
        Ok(())
    }

    fn parse_matrix(&self) -> Result<Vec<Vec<HoloExpr>>> {
        self.metric
            .iter()
            .map(|row| row.iter().map(|s| Ok(parse_with_vars(s, &self.coordinates)?)).collect())
            .collect()
    }

    pub fn metric_field(&self) -> Result<MetricField> {
        let rows = self.parse_matrix()?;
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            entries.extend(row[i..].iter().cloned());
        }
        let f = self
            .conformal_factor
            .as_ref()
            .map(|s| parse_with_vars(s, &self.coordinates))
            .transpose()?;
        Ok(MetricField::new(self.n, entries, f)?.with_anchor(self.basepoint.clone()))
    }

    pub fn orientation(&self) -> f64 {
        self.orientation as f64
    }

    /// Fails with [`Error::IncidenceDivisor`] near the zero set of the domain guard.
    pub fn check_guard(&self, p: &[Complex64]) -> Result<()> {
        if let Some(g) = &self.domain_guard {
            let v = parse_with_vars(g, &self.coordinates)?.eval(p)?;
            if v.norm() < 1e-8 {
                return Err(Error::IncidenceDivisor);
            }
        }
        Ok(())
    }

    /// `count` deterministic points in the box of half-width `sample_radius`
    /// around the basepoint, avoiding the guard and singular metrics.
    pub fn sample_points(&self, seed: u64, count: usize) -> Vec<Vec<Complex64>> {
        let field = self.metric_field().expect("validated manifest");
        let guard = self
            .domain_guard
            .as_ref()
            .map(|g| parse_with_vars(g, &self.coordinates).expect("validated guard"));
        sample_box(seed, count, &self.basepoint, self.sample_radius, |p| {
            if let Some(g) = &guard {
                if g.eval(p).map_or(true, |v| v.norm() < 0.2) {
                    return false;
                }
            }
            field.metric_at(p).is_ok() && field.volume_root(p).is_ok()
        })
    }

    pub fn surface(&self, name: &str) -> Option<EmbeddedSurface> {
        self.surfaces.iter().find(|s| s.name == name).map(|s| s.build().expect("validated surface"))
    }

    pub fn hypersurface(&self, name: &str) -> Option<Hypersurface> {
        self.hypersurfaces
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.build(&self.coordinates).expect("validated hypersurface"))
    }
}

impl SurfaceManifest {
    pub fn build(&self) -> Result<EmbeddedSurface> {
        let map = self
            .map
            .iter()
            .map(|s| parse_with_vars(s, &self.parameters))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(EmbeddedSurface::new(&self.name, map, self.basepoint.clone(), self.sample_radius))
    }
}

impl HypersurfaceManifest {
    pub fn build(&self, coordinates: &[String]) -> Result<Hypersurface> {
        let map = self
            .map
            .iter()
            .map(|s| parse_with_vars(s, &self.parameters))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let level = self.level_set.as_ref().map(|s| parse_with_vars(s, coordinates)).transpose()?;
        Ok(Hypersurface::new(&self.name, map, level, self.basepoint.clone(), self.sample_radius))
    }
}

/// Rejection sampling in a complex box.
pub fn sample_box(
    seed: u64,
    count: usize,
    center: &[Complex64],
    radius: f64,
    accept: impl Fn(&[Complex64]) -> bool,
) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 1000 * count.max(1) {
        tries += 1;
        let p: Vec<Complex64> = center
            .iter()
            .map(|z| z + Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
            .collect();
        if accept(&p) {
            out.push(p);
        }
    }
    out
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn diagonal(n: usize, w: &str) -> Vec<Vec<String>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { w.to_string() } else { "0".to_string() }).collect())
        .collect()
}

fn from_upper(n: usize, upper: &[&str]) -> Vec<Vec<String>> {
    let mut m = vec![vec![String::new(); n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[i][j] = upper[k].to_string();
            m[j][i] = upper[k].to_string();
            k += 1;
        }
    }
    m
}

fn z(n: usize) -> Vec<String> {
    crate::expr_ad::default_vars(n)
}

fn cz(v: &[(f64, f64)]) -> Vec<Complex64> {
    v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()
}

fn hyper(name: &str, map: &[&str], level_set: Option<&str>, expect: HypersurfaceExpect) -> HypersurfaceManifest {
    HypersurfaceManifest {
        name: name.into(),
        parameters: strs(&["q1", "q2", "q3"]),
        map: strs(map),
        level_set: level_set.map(String::from),
        basepoint: cz(&[(0.1, 0.05), (-0.1, 0.1), (0.05, -0.05)]),
        sample_radius: 0.2,
        expect,
    }
}

fn flat(n: usize) -> MetricManifest {
    MetricManifest {
        schema_version: SCHEMA_VERSION,
        name: format!("flat{n}"),
        n,
        coordinates: z(n),
        metric: diagonal(n, "1"),
        conformal_factor: None,
        orientation: 1,
        basepoint: vec![Complex64::new(0.0, 0.0); n],
        sample_radius: 0.5,
        domain_guard: None,
        expected: ExpectedProperties {
            flat: true,
            conformally_flat: true,
            self_dual: n == 4,
            generic: false,
        },
        surfaces: Vec::new(),
        hypersurfaces: Vec::new(),
        notes: String::new(),
    }
}

fn flat4() -> MetricManifest {
    let mut m = flat(4);
    m.surfaces = vec![
        SurfaceManifest {
            name: "beta_plane".into(),
            kind: SurfaceKind::Beta,
            parameters: strs(&["s1", "s2"]),
            map: strs(&["s1", "i*s1", "s2", "-i*s2"]),
            basepoint: cz(&[(0.0, 0.0), (0.0, 0.0)]),
            sample_radius: 0.3,
            flag: None,
        },
        SurfaceManifest {
            name: "bent".into(),
            kind: SurfaceKind::Test,
            parameters: strs(&["s1", "s2"]),
            map: strs(&["s1", "s2", "s1^2 + s2^2", "s1*s2"]),
            basepoint: cz(&[(0.1, 0.0), (0.2, 0.1)]),
            sample_radius: 0.2,
            flag: None,
        },
    ];
    m.hypersurfaces = vec![
        hyper("hyperplane", &["q1", "q2", "q3", "0"], Some("z4"), HypersurfaceExpect::TotallyGeodesic),
        hyper(
            "sphere",
            &["q1", "q2", "q3", "sqrt(1 - q1^2 - q2^2 - q3^2)"],
            Some("z1^2 + z2^2 + z3^2 + z4^2 - 1"),
            HypersurfaceExpect::Umbilic,
        ),
        hyper("graph", &["q1", "q2", "q3", "q1^2 + 2*q2^2"], Some("z4 - z1^2 - 2*z2^2"), HypersurfaceExpect::None),
    ];
    m
}

fn conf_flat4() -> MetricManifest {
    let mut m = flat(4);
    m.name = "conf_flat4".into();
    m.conformal_factor = Some("z1*z2".into());
    m.expected.flat = false;
    m.basepoint = cz(&[(0.1, 0.1), (-0.2, 0.05), (0.15, -0.1), (0.05, 0.2)]);
    m.sample_radius = 0.4;
    m.surfaces = vec![SurfaceManifest {
        name: "beta_plane".into(),
        kind: SurfaceKind::Beta,
        parameters: strs(&["s1", "s2"]),
        map: strs(&["0.1 + s1", "0.2 + i*s1", "-0.1 + s2", "0.3 - i*s2"]),
        basepoint: cz(&[(0.05, 0.0), (0.1, 0.05)]),
        sample_radius: 0.2,
        flag: None,
    }];
    m.hypersurfaces = vec![hyper("hyperplane", &["q1", "q2", "q3", "0"], Some("z4"), HypersurfaceExpect::TotallyGeodesic)];
    m
}

fn round3() -> MetricManifest {
    MetricManifest {
        name: "round3".into(),
        metric: diagonal(3, "(1 + 0.25*(z1^2 + z2^2 + z3^2))^-2"),
        basepoint: cz(&[(0.1, 0.0), (0.0, 0.1), (-0.1, 0.05)]),
        sample_radius: 0.5,
        expected: ExpectedProperties {
            flat: false,
            conformally_flat: true,
            self_dual: false,
            generic: false,
        },
        ..flat(3)
    }
}

/// Coefficients of the generic 3-metric (frozen).
pub const GENERIC3: [&str; 6] = [
    "1 + 0.3*z2^2 + 0.1*z3^3",
    "0.2*z1*z3",
    "0.1*z2^2 - 0.05*z1*z3",
    "1 + 0.2*z1*z3 + 0.15*z1^3",
    "0.25*z1*z2",
    "1 - 0.2*z1^2 + 0.1*z2^3",
];

/// Coefficients of the generic 4-metric (frozen).
pub const GENERIC4: [&str; 10] = [
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
];

fn generic3() -> MetricManifest {
    MetricManifest {
        name: "generic3".into(),
        metric: from_upper(3, &GENERIC3),
        basepoint: cz(&[(0.2, 0.1), (-0.1, 0.3), (0.3, -0.2)]),
        sample_radius: 0.3,
        expected: ExpectedProperties {
            generic: true,
            ..Default::default()
        },
        ..flat(3)
    }
}

fn generic4() -> MetricManifest {
    MetricManifest {
        name: "generic4".into(),
        metric: from_upper(4, &GENERIC4),
        basepoint: cz(&[(0.2, 0.1), (-0.1, 0.3), (0.4, -0.2), (0.1, 0.1)]),
        sample_radius: 0.3,
        expected: ExpectedProperties {
            generic: true,
            ..Default::default()
        },
        ..flat(4)
    }
}

pub const BUILTIN_NAMES: [&str; 7] = [
    "flat3",
    "flat4",
    "conf_flat4",
    "round3",
    "generic3",
    "generic4",
    "cp2_complexification",
];

pub fn builtin(name: &str) -> Option<MetricManifest> {
    Some(match name {
        "flat3" => flat(3),
        "flat4" => flat4(),
        "conf_flat4" => conf_flat4(),
        "round3" => round3(),
        "generic3" => generic3(),
        "generic4" => generic4(),
        "cp2_complexification" => cp2::build_cp2_complexification(),
        _ => return None,
    })
}

pub fn catalog() -> Vec<MetricManifest> {
    BUILTIN_NAMES.iter().map(|n| builtin(n).expect("builtin")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate_and_round_trip() {
        for m in catalog() {
            m.validate().unwrap();
            let text = m.to_json();
            let back = MetricManifest::from_json(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn schema_version_is_enforced() {
        let mut m = flat(3);
        m.schema_version = 99;
        assert!(matches!(MetricManifest::from_json(&m.to_json()), Err(Error::Manifest(_))));
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let mut m = flat(3);
        m.metric[0][1] = "z1".into();
        assert!(m.validate().is_err());
    }

    #[test]
    fn expected_flags_hold() {
        use crate::core_tensor::{frob, weyl_split, Geometry, Level};
        for m in catalog() {
            let field = m.metric_field().unwrap();
            for p in m.sample_points(1, 6) {
                let geo = Geometry::compute(&field, &p, Level::Curvature).unwrap();
                let r = geo.riemann.norm();
                assert_eq!(r < 1e-10, m.expected.flat, "{}", m.name);
                if m.n != 4 {
                    continue;
                }
                let ws = weyl_split(&field, &p, m.orientation()).unwrap();
                let (wp, wm) = (frob(&ws.wplus), frob(&ws.wminus));
                assert_eq!(wp + wm < 1e-10, m.expected.conformally_flat, "{}", m.name);
                assert_eq!(wm < 1e-10, m.expected.self_dual, "{} {wp} {wm}", m.name);
                if m.expected.generic {
                    assert!(wp > 1e-3 && wm > 1e-3);
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = builtin("cp2_complexification").unwrap();
        let a = m.sample_points(7, 5);
        assert_eq!(a, m.sample_points(7, 5));
        assert_eq!(a.len(), 5);
        assert_ne!(a, m.sample_points(8, 5));
    }
}
