use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use ghdyn_core::systems::{circle_step, shifted_torus_automorphism, torus_automorphism};
use ghdyn_core::PseudoOrbit;
use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    report: Value,
}

fn ghdyn(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ghdyn"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap(),
        stdout,
        report,
    }
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.display().to_string()
}

fn demo(dir: &TempDir, args: &[&str]) -> Value {
    let out = dir.path().display().to_string();
    let mut all = vec!["demo"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out-dir", &out]);
    let r = ghdyn(&all);
    assert_eq!(r.code, 0, "{}", r.stdout);
    r.report
}

fn path(dir: &TempDir, name: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    assert!(Path::new(&p).exists(), "{} missing", p.display());
    p.display().to_string()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = write(
        &dir,
        "ok.json",
        &json!({"labels": ["a", "b"], "dist": [[0, 1], [1, 0]]}),
    );
    let r = ghdyn(&["validate", &ok]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["schema_version"], "1");
    assert_eq!(r.report["result"]["points"], 2);

    let bad = write(
        &dir,
        "bad.json",
        &json!({"dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}),
    );
    let r = ghdyn(&["validate", &bad]);
    assert_eq!(r.code, 2);
    let t: Vec<u64> =
        serde_json::from_value(r.report["error"]["details"]["triangle"].clone()).unwrap();
    assert_eq!(t.len(), 3);
    let (i, j, k) = (t[0] as usize, t[1] as usize, t[2] as usize);
    let d = [[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]];
    assert!(d[i][j] > d[i][k] + d[k][j]);

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"dist\": [[0, 1]").unwrap();
    assert_eq!(ghdyn(&["validate", broken.to_str().unwrap()]).code, 1);
    assert_eq!(ghdyn(&["validate", "/nonexistent/space.json"]).code, 1);
}

#[test]
fn csv_spaces_load() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("s.csv");
    fs::write(&p, ",a,b,c\na,0,1,2\nb,1,0,1\nc,2,1,0\n").unwrap();
    let r = ghdyn(&["validate", p.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.report["result"]["diameter"], 2.0);
}

#[test]
fn pointed_distance_of_two_point_space() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["two-point", "--n", "5"]);
    demo(&dir, &["singleton"]);
    let r = ghdyn(&[
        "distance",
        "pgh",
        &path(&dir, "two-point-5.space.json"),
        &path(&dir, "singleton.space.json"),
    ]);
    assert_eq!(r.code, 0);
    assert!((r.report["result"]["upper"].as_f64().unwrap() - 0.2).abs() < 1e-9);
    assert!(r.report["result"]["lower"].as_f64().unwrap() < 0.2);
    assert!(r.report["result"]["grid"].is_array());
    assert_eq!(r.report["certificates"].as_array().unwrap().len(), 2);
}

#[test]
fn gh_to_a_point_is_the_diameter() {
    let dir = TempDir::new().unwrap();
    let x = write(
        &dir,
        "x.json",
        &json!({"dist": [[0, 3, 4], [3, 0, 5], [4, 5, 0]]}),
    );
    demo(&dir, &["singleton"]);
    let r = ghdyn(&["distance", "gh", &x, &path(&dir, "singleton.space.json")]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["value"], 5.0);
    let r = ghdyn(&["distance", "gh-hat", &x, &x]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["params"]["kind"], "gh-hat");
}

#[test]
fn budget_exceeded_exits_3_with_heuristic() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["circle", "--n", "8"]);
    let c = path(&dir, "circle-8.space.json");
    let r = ghdyn(&["distance", "gh", &c, &c, "--max-enum", "10"]);
    assert_eq!(r.code, 3);
    assert!(r.report["error"]["details"]["heuristic_upper"]
        .as_f64()
        .is_some());
}

#[test]
fn c0_of_identical_maps_is_zero() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["torus", "--n", "5"]);
    let f = path(&dir, "torus-5.system.json");
    let r = ghdyn(&["distance", "c0", &f, &f]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["value"], 0.0);
}

#[test]
fn gh0_and_pgh0_run_on_small_systems() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        &json!({"space": {"dist": [[0, 1], [1, 0]]}, "map": [1, 0], "basepoint": 0}),
    );
    let g = write(
        &dir,
        "g.json",
        &json!({"space": {"dist": [[0, 1], [1, 0]]}, "map": [0, 1], "basepoint": 0}),
    );
    let r = ghdyn(&["distance", "gh0", &f, &g]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.report["result"]["upper"].as_f64().unwrap() > 0.0);
    let r = ghdyn(&["distance", "pgh0", &f, &g, "--eps-grid", "0.5,0.75"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let grid: Vec<f64> = serde_json::from_value(r.report["result"]["grid"].clone()).unwrap();
    assert!(grid.contains(&0.5) && grid.contains(&0.75));
    assert_eq!(r.report["params"]["eps_grid"], "0.5,0.75");
}

#[test]
fn arity_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["singleton"]);
    let s = path(&dir, "singleton.space.json");
    assert_eq!(ghdyn(&["distance", "gh", &s]).code, 2);
    assert_eq!(
        ghdyn(&["distance", "hausdorff", &s, "--set-a", "0"]).code,
        2
    );
    let r = ghdyn(&["distance", "hausdorff", &s, "--set-a", "0", "--set-b", "0"]);
    assert_eq!(r.report["result"]["value"], 0.0);
}

fn orbit_file(dir: &TempDir, name: &str, o: &PseudoOrbit) -> String {
    write(
        dir,
        name,
        &json!({"offsets": [o.n_min(), o.n_max()], "points": o.points()}),
    )
}

#[test]
fn shadow_true_and_perturbed_orbits() {
    let dir = TempDir::new().unwrap();
    let n = 16;
    demo(&dir, &["torus", "--n", "16"]);
    let sys = path(&dir, "torus-16.system.json");
    let f = torus_automorphism(n).unwrap();
    let eps = format!("{}", 2.5 * circle_step(n));

    let x0 = 37;
    let o = orbit_file(
        &dir,
        "true.json",
        &PseudoOrbit::true_orbit(&f, x0, -6, 6).unwrap(),
    );
    let r = ghdyn(&["shadow", &sys, &o, &eps]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let tracers: Vec<usize> =
        serde_json::from_value(r.report["result"]["tracers"].clone()).unwrap();
    assert!(tracers.contains(&x0));

    let g = shifted_torus_automorphism(n, (1, 0)).unwrap();
    let o = orbit_file(
        &dir,
        "perturbed.json",
        &PseudoOrbit::true_orbit(&g, 5, -8, 8).unwrap(),
    );
    let r = ghdyn(&["shadow", &sys, &o, &eps]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["unique"], true);

    let r = ghdyn(&["shadow", &sys, &o, &eps, "--window", "4"]);
    assert_eq!(r.report["result"]["offsets"], json!([-4, 4]));
    assert_eq!(r.report["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn shadow_under_identity_is_not_unique() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["rotation", "--n", "12", "--shift", "0"]);
    let sys = path(&dir, "rotation-12-0.system.json");
    let o = write(
        &dir,
        "o.json",
        &json!({"offsets": [-3, 3], "points": [0, 0, 0, 0, 0, 0, 0]}),
    );
    let eps = format!("{}", 2.5 * circle_step(12));
    let r = ghdyn(&["shadow", &sys, &o, &eps]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["unique"], false);
    assert!(r.report["result"]["tracers"].as_array().unwrap().len() > 1);
}

fn identity_map(dir: &TempDir, n: usize) -> String {
    write(dir, "id.json", &json!({"map": (0..n).collect::<Vec<_>>()}))
}

#[test]
fn conjugacy_of_torus_with_itself_is_identity() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["torus", "--n", "16"]);
    let f = path(&dir, "torus-16.system.json");
    let id = identity_map(&dir, 256);
    let step = circle_step(16);
    let h_out = dir.path().join("h.json");
    let r = ghdyn(&[
        "conjugacy",
        &f,
        &f,
        &id,
        "--delta",
        &format!("{}", 2.0 * step),
        "--eps",
        &format!("{}", 12.0 * step),
        "--window",
        "12",
        "--out-h",
        h_out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let c = &r.report["result"]["conjugacy"];
    assert_eq!(c["defect"], 0.0);
    assert_eq!(c["max_dist_to_j"], 0.0);
    let h: Value = serde_json::from_str(&fs::read_to_string(&h_out).unwrap()).unwrap();
    assert_eq!(h["map"], json!((0..256).collect::<Vec<_>>()));
}

#[test]
fn conjugacy_of_shifted_torus() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["torus", "--n", "16"]);
    demo(&dir, &["shifted-torus", "--n", "16", "--shift", "0,1"]);
    let f = path(&dir, "torus-16.system.json");
    let g = path(&dir, "shifted-torus-16-0-1.system.json");
    let id = identity_map(&dir, 256);
    let step = circle_step(16);
    let r = ghdyn(&[
        "conjugacy",
        &f,
        &g,
        &id,
        "--delta",
        &format!("{}", 2.0 * step),
        "--eps",
        &format!("{}", 12.0 * step),
        "--window",
        "12",
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let c = &r.report["result"]["conjugacy"];
    assert_eq!(c["defect"], 0.0);
    assert!(c["max_dist_to_j"].as_f64().unwrap() <= c["eps_bar"].as_f64().unwrap());
    assert_eq!(
        r.report["result"]["stability"]["verdict"]["verdict"],
        "stable"
    );
}

#[test]
fn conjugacy_without_expansivity_exits_4() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["rotation", "--n", "16", "--shift", "0"]);
    let f = path(&dir, "rotation-16-0.system.json");
    let id = identity_map(&dir, 16);
    let step = circle_step(16);
    let r = ghdyn(&[
        "conjugacy",
        &f,
        &f,
        &id,
        "--delta",
        &format!("{}", 2.0 * step),
        "--eps",
        &format!("{}", 5.0 * step),
    ]);
    assert_eq!(r.code, 4, "{}", r.stdout);
    assert!(!r.report["error"]["details"]["points"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn demo_outputs_validate() {
    let dir = TempDir::new().unwrap();
    let rep = demo(&dir, &["torus", "--n", "16"]);
    assert_eq!(rep["result"]["files"].as_array().unwrap().len(), 2);
    let r = ghdyn(&["validate", &path(&dir, "torus-16.space.json")]);
    assert_eq!(r.report["result"]["points"], 256);

    demo(&dir, &["two-point", "--n", "7"]);
    let s: Value =
        serde_json::from_str(&fs::read_to_string(path(&dir, "two-point-7.space.json")).unwrap())
            .unwrap();
    assert_eq!(s["dist"][0][1], 7.0);
    assert_eq!(s["basepoints"], json!([0]));

    demo(&dir, &["truncated-line", "--radius", "2", "--step", "0.5"]);
    assert_eq!(
        ghdyn(&["validate", &path(&dir, "truncated-line-2-0.5.space.json")]).code,
        0
    );
}

#[test]
fn doubling_demo_flags_one_sided_mode() {
    let dir = TempDir::new().unwrap();
    let warned = |rep: &Value| {
        rep["warnings"]
            .as_array()
            .unwrap()
            .iter()
            .any(|w| w.as_str().unwrap().contains("one-sided"))
    };
    let rep = demo(&dir, &["circle-doubling", "--n", "6"]);
    assert_eq!(rep["result"]["bijective"], false);
    assert!(warned(&rep));
    // 2 is invertible mod 5, so the five-point doubling map is a bijection.
    let rep = demo(&dir, &["circle-doubling", "--n", "5"]);
    assert_eq!(rep["result"]["bijective"], true);
    assert!(!warned(&rep));
}

#[test]
fn unknown_demo_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().display().to_string();
    assert_eq!(ghdyn(&["demo", "cherry-flow", "--out-dir", &out]).code, 2);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    demo(&dir, &["circle", "--n", "6"]);
    let c = path(&dir, "circle-6.space.json");
    let args = ["distance", "pgh", &c, &c, "--seed", "3"];
    let a = ghdyn(&args);
    let b = ghdyn(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.report["params"]["seed"], 3);
    assert_eq!(a.report["params"]["max_enum"], 10_000_000);
    assert_eq!(a.report["params"]["restarts"], 32);
    assert_eq!(a.report["params"]["window"], 20);
    assert_eq!(a.report["params"]["tol"], 1e-9);
    assert_eq!(a.report["inputs"].as_array().unwrap().len(), 2);
}
