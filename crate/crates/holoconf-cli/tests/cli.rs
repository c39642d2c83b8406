use std::process::{Command, Output};

fn holoconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holoconf")).args(args).output().expect("holoconf runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn flat_report_has_vanishing_curvature() {
    let o = holoconf(&["report", "--metric", "builtin:flat4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let obj = v.as_object().unwrap();
    assert!(obj.contains_key("riemann_04"));
    fn max_abs(v: &serde_json::Value) -> f64 {
        match v {
            serde_json::Value::Number(n) => n.as_f64().unwrap().abs(),
            serde_json::Value::Array(a) => a.iter().map(max_abs).fold(0.0, f64::max),
            serde_json::Value::Object(o) => o.get("data").map_or(0.0, max_abs),
            _ => 0.0,
        }
    }
    for key in ["christoffel", "riemann_04", "cotton", "wplus", "wminus"] {
        assert!(max_abs(&obj[key]) < 1e-12, "{key}");
    }
}

#[test]
fn verify_json_round_trips_and_passes() {
    let o = holoconf(&["verify", "--metric", "builtin:flat3", "--seed", "3", "--points", "4", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s: holoconf_cli::VerificationSummary = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(s.pass);
    assert_eq!(s.seed, 3);
    assert!(s.checks.iter().any(|c| c.id == "dim3.star_identity"));
    assert!(s.checks.windows(2).all(|w| w[0].id < w[1].id));
}

#[test]
fn failing_suite_exits_one() {
    let o = holoconf(&["verify", "--metric", "builtin:generic4", "--suite", "selfdual", "--points", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn suite_of_wrong_dimension_is_an_input_error() {
    let o = holoconf(&["verify", "--metric", "builtin:flat3", "--suite", "cone"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = std::env::temp_dir().join(format!("holoconf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ \"name\": 3 }").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["report", "--metric", bad.to_str().unwrap()],
        vec!["report", "--metric", "builtin:nonexistent"],
        vec!["trace-geodesic", "--metric", "builtin:flat4", "--velocity", "1,0,0,0"],
        vec!["classify-plane", "--metric", "builtin:flat4", "--u", "1,i,0", "--w", "0,0,1,i"],
        vec!["check-theorem8", "--metric", "builtin:flat4", "--hypersurface", "sphere"],
        vec!["report", "--metric", "builtin:flat4", "--orientation", "2"],
    ];
    for args in cases {
        let o = holoconf(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn flat_null_geodesic_is_a_straight_line() {
    let o = holoconf(&[
        "trace-geodesic",
        "--metric",
        "builtin:flat4",
        "--point",
        "0,0,0,0",
        "--velocity",
        "1,i,0,0",
        "--t-end",
        "2",
        "--steps",
        "16",
        "--csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("t,re_x1,im_x1"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 17);
    for r in &rows {
        let t = r[0];
        assert!((r[1] - t).abs() < 1e-12 && (r[4] - t).abs() < 1e-12);
        assert!(r[17] < 1e-12);
    }
}

#[test]
fn classify_plane_reports_alpha_and_beta() {
    let label = |w: &str| {
        let o = holoconf(&["classify-plane", "--metric", "builtin:flat4", "--u", "1,i,0,0", "--w", w]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["label"].as_str().unwrap().to_string()
    };
    let (a, b) = (label("0,0,1,i"), label("0,0,1,-i"));
    assert_ne!(a, b);
    assert!([a.as_str(), b.as_str()].iter().all(|l| l.eq_ignore_ascii_case("alpha") || l.eq_ignore_ascii_case("beta")));
}

#[test]
fn hypersurface_commands_report() {
    let o = holoconf(&["check-umbilic", "--metric", "builtin:flat4", "--hypersurface", "sphere"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["umbilic"], true);
    assert_eq!(v["totally_geodesic"], false);

    let o = holoconf(&["check-theorem8", "--metric", "builtin:conf_flat4", "--hypersurface", "hyperplane"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["identity"].is_object() && v["cotton_plus"].is_object());
}

#[test]
fn beta_surface_command_filters_to_one_surface() {
    let o = holoconf(&["check-beta-surface", "--metric", "builtin:cp2_complexification", "--surface", "beta_origin", "--points", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s: holoconf_cli::VerificationSummary = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(s.checks.iter().all(|c| c.id.starts_with("beta.beta_origin.")));
    let o = holoconf(&["check-beta-surface", "--metric", "builtin:cp2_complexification", "--surface", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_holoconf"))
            .args(["verify", "--metric", "builtin:generic3", "--seed", "11", "--points", "6", "--json"])
            .env("HOLOCONF_THREADS", threads)
            .output()
            .unwrap();
        o.stdout
    };
    assert_eq!(run("1"), run("4"));
}
