use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bubble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bubble")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> Output {
    let o = bubble(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    o
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

const UNIT: [&str; 12] = ["--n", "3", "--v1", "1", "--v2", "1", "--w0", "1", "--w1", "1", "--w2", "1"];

#[test]
fn standard_unit_weights_has_a_flat_interface() {
    let d = TempDir::new().unwrap();
    let g = p(&d, "g.json");
    let o = ok(&[&["standard"][..], &UNIT, &["--geometry", &g]].concat());
    let v = read_json(Path::new(&g));
    assert!(v["curvatures"][0].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["degenerate_kind"], "NONE");
    let table = stdout(&o);
    assert!(table.starts_with("# command=standard\n"));
    assert!(table.contains("Q                "));
}

#[test]
fn standard_disjoint_when_interface_weight_dominates() {
    let d = TempDir::new().unwrap();
    let g = p(&d, "g.json");
    ok(&["standard", "--n", "3", "--v1", "1", "--v2", "1", "--w0", "3", "--w1", "1", "--w2", "1", "--geometry", &g]);
    let v = read_json(Path::new(&g));
    assert_eq!(v["degenerate_kind"], "DISJOINT");
    // two unit-volume spheres
    let r = (3.0 / (4.0 * PI)).powf(1.0 / 3.0);
    let q = v["measured"]["q"].as_f64().unwrap();
    assert!((q - 8.0 * PI * r * r).abs() < 1e-10);
}

#[test]
fn relarea_of_own_export_is_one() {
    let d = TempDir::new().unwrap();
    let net = p(&d, "m.json");
    let inst = ["--n", "4", "--v1", "2", "--v2", "1", "--w0", "1", "--w1", "0.8", "--w2", "0.9"];
    ok(&[&["standard"][..], &inst, &["--network", &net]].concat());
    let o = ok(&["relarea", &net, "--v1", "2", "--v2", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["report"]["mu"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let mu = v["mu"].as_str().unwrap();
    assert_eq!(mu.chars().filter(|c| c.is_ascii_digit()).count(), 12, "{mu}");
    assert!(stderr(&o).contains(&format!("mu = {mu}")));
    assert_eq!(v["config"]["command"], "relarea");
    assert_eq!(v["config"]["seed"], "0");
}

fn semicircle(c: f64, r: f64, inside: &str) -> Vec<Value> {
    vec![
        json!({"kind": "ARC", "p": [c + r, 0.0], "q": [c, r], "curvature": 1.0 / r, "left": inside, "right": "EXT"}),
        json!({"kind": "ARC", "p": [c, r], "q": [c - r, 0.0], "curvature": 1.0 / r, "left": inside, "right": "EXT"}),
    ]
}

#[test]
fn hand_built_disjoint_spheres_lose_under_strict_weights() {
    let d = TempDir::new().unwrap();
    let r = (3.0 / (4.0 * PI)).powf(1.0 / 3.0);
    let mut edges = semicircle(-2.0, r, "B1");
    edges.extend(semicircle(2.0, r, "B2"));
    let f = p(&d, "disjoint.json");
    std::fs::write(&f, json!({"dimension": 3, "edges": edges}).to_string()).unwrap();
    let o = ok(&[&["relarea", &f][..], &UNIT[2..]].concat());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rep = &v["report"];
    assert!((rep["q_s"].as_f64().unwrap() - 8.0 * PI * r * r).abs() < 1e-9);
    assert!(rep["mu"].as_f64().unwrap() > 1.0);
}

#[test]
fn input_errors_exit_2() {
    let d = TempDir::new().unwrap();
    let bad = p(&d, "bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(bubble(&[&["relarea", &bad][..], &UNIT[2..]].concat()).status.code(), Some(2));
    assert_eq!(bubble(&["relarea", &p(&d, "missing.json"), "--v1", "1", "--v2", "1"]).status.code(), Some(2));
    assert_eq!(bubble(&["standard", "--n", "3"]).status.code(), Some(2));
    assert_eq!(bubble(&["standard", "--n", "2", "--v1", "1", "--v2", "1", "--w0", "1", "--w1", "1", "--w2", "1"]).status.code(), Some(2));
    assert_eq!(bubble(&["standard", "--bogus"]).status.code(), Some(2));
    let cfg = p(&d, "c.cfg");
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    assert_eq!(bubble(&["sweep", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn class_mismatch_exits_3_with_measured_volumes() {
    let d = TempDir::new().unwrap();
    let net = p(&d, "m.json");
    ok(&[&["standard"][..], &UNIT, &["--network", &net]].concat());
    let o = bubble(&["relarea", &net, "--v1", "1", "--v2", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.contains("CLASS_MISMATCH") && e.contains("V1 = 1.0000"), "{e}");
}

fn small_sweep(d: &TempDir, body: &str) -> String {
    let cfg = p(d, "sweep.cfg");
    std::fs::write(&cfg, body).unwrap();
    stdout(&ok(&["sweep", "--config", &cfg]))
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sweep_writes_header_rows_and_summary() {
    let d = TempDir::new().unwrap();
    let csv = small_sweep(&d, "seed = 42\nn = 3\nratios = 0.5,1\nw0 = 0.6,1\nw1 = 1\nepsilons = 0.01,0.03\n");
    assert!(csv.contains("# seed=42\n"));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "n,V1,V2,w0,w1,w2,family,epsilon,mu_min,status");
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 4 * (1 + 3 * 2));
    for r in &rows {
        assert_eq!(r[9], "OK", "{r:?}");
        let mu: f64 = r[8].parse().unwrap();
        if r[6] == "NONE" {
            assert_eq!(r[7], "0.0");
            assert!((mu - 1.0).abs() < 1e-9);
        } else {
            assert!(mu >= 1.0 - 1e-9);
        }
    }
    let last = csv.lines().last().unwrap();
    assert!(last.starts_with("# summary cells=28 failures=0 mu_min=") && last.ends_with("below_one=false"), "{last}");
    // deterministic
    assert_eq!(csv, small_sweep(&d, "seed = 42\nn = 3\nratios = 0.5,1\nw0 = 0.6,1\nw1 = 1\nepsilons = 0.01,0.03\n"));
}

#[test]
fn sweep_boundary_weights_score_one() {
    let d = TempDir::new().unwrap();
    // w0 = w1 + w2 and w1 = w0 + w2
    let csv = small_sweep(&d, "n = 3\nratios = 0.5\nw0 = 2,0.5\nw1 = 1,1.5\nw2 = 1\nepsilons = 0.03\n");
    let rows = data_rows(&csv);
    let boundary: Vec<_> = rows.iter().filter(|r| (r[3] == "2.0" && r[4] == "1.0") || (r[3] == "0.5" && r[4] == "1.5")).collect();
    assert_eq!(boundary.len(), 2 * 4);
    for r in boundary {
        if r[6] == "NONE" {
            assert!((r[8].parse::<f64>().unwrap() - 1.0).abs() < 1e-9, "{r:?}");
        } else {
            assert!(r[9] == "OK" || r[9] == "SKIPPED", "{r:?}");
        }
    }
}

#[test]
fn gauss_standard_is_consistent_and_grids_pass() {
    let d = TempDir::new().unwrap();
    for n in 3..=8 {
        let net = p(&d, &format!("m{n}.json"));
        let ns = n.to_string();
        ok(&["standard", "--n", &ns, "--v1", "1", "--v2", "0.6", "--w0", "0.9", "--w1", "1", "--w2", "0.8", "--network", &net]);
        let out = d.path().join(format!("g{n}"));
        ok(&["gauss", &net, "--v1", "1", "--v2", "0.6", "--out-dir", out.to_str().unwrap()]);
        let v = read_json(&out.join("audit.json"));
        assert_eq!(v["audit"]["verdict"], "CONSISTENT");
        let c = &v["coverage"];
        let total = c["sleeve_area"].as_f64().unwrap() - c["cuff_area"].as_f64().unwrap();
        assert!((total / v["audit"]["sphere_area"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(v["monotonicity"]["all_pass"], true);
        for f in v["monotonicity"]["files"].as_array().unwrap() {
            let csv = std::fs::read_to_string(out.join(f.as_str().unwrap())).unwrap();
            assert!(csv.contains("# command=gauss\n"));
            let rows = data_rows(&csv);
            assert_eq!(rows.len(), 1000);
            assert!(rows.iter().all(|r| r[7] == "true"));
        }
    }
}

#[test]
fn gauss_extra_sleeve_has_overlap_excess() {
    let d = TempDir::new().unwrap();
    let net = p(&d, "es.json");
    ok(&[&["perturb"][..], &UNIT, &["--family", "EXTRA_SLEEVE", "--epsilon", "0.05", "--out", &net]].concat());
    let out = p(&d, "g");
    ok(&["gauss", &net, "--own-class", "--out-dir", &out]);
    let v = read_json(&Path::new(&out).join("audit.json"));
    assert_eq!(v["overlap_excess"]["status"], "APPLICABLE");
    assert!(v["overlap_excess"]["excess"].as_f64().unwrap() > 0.0);
    // a competitor below the standard bubble would contradict the coverage count
    ok(&["gauss", &net, "--own-class", "--assume", "0.999", "--out-dir", &out]);
    assert_eq!(read_json(&Path::new(&out).join("audit.json"))["audit"]["verdict"], "CONTRADICTION");
}

#[test]
fn perturb_index_out_of_range_is_an_input_error() {
    let o = bubble(&[&["perturb"][..], &UNIT, &["--family", "JUNCTION_SLIDE", "--epsilon", "0.01", "--index", "99"]].concat());
    assert_eq!(o.status.code(), Some(2));
}

fn region_file(d: &TempDir, name: &str, pts: &[[f64; 2]]) -> String {
    let loop_: Vec<Value> = (0..pts.len())
        .map(|i| json!({"p": pts[i], "q": pts[(i + 1) % pts.len()], "kappa": 0.0}))
        .collect();
    let f = p(d, name);
    std::fs::write(&f, json!({ "loops": [loop_] }).to_string()).unwrap();
    f
}

fn certificate(f: &str) -> Value {
    serde_json::from_str(&stdout(&ok(&["symmetrize", f]))).unwrap()
}

#[test]
fn symmetrize_disk_square_ellipse() {
    let d = TempDir::new().unwrap();
    let disk = p(&d, "disk.json");
    let arcs: Vec<Value> = (0..4)
        .map(|i| {
            let a = PI / 2.0 * i as f64;
            let b = a + PI / 2.0;
            json!({"p": [a.cos(), a.sin()], "q": [b.cos(), b.sin()], "kappa": 1.0})
        })
        .collect();
    std::fs::write(&disk, json!({ "loops": [arcs] }).to_string()).unwrap();
    let c = certificate(&disk);
    assert_eq!(c["strict"], false);
    let (pb, pa) = (c["perimeter_before"].as_f64().unwrap(), c["perimeter_after"].as_f64().unwrap());
    assert!((pb - 2.0 * PI).abs() < 1e-9 && (pa - pb).abs() < 1e-9);

    let sq = region_file(&d, "square.json", &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
    let c = certificate(&sq);
    assert_eq!(c["strict"], true);
    assert!((c["area_after"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let ell: Vec<[f64; 2]> = (0..360).map(|i| {
        let t = 2.0 * PI * i as f64 / 360.0;
        [2.0 * t.cos(), t.sin()]
    }).collect();
    let c = certificate(&region_file(&d, "ellipse.json", &ell));
    assert_eq!(c["strict"], true);
    assert!(c["config"]["region"].as_str().unwrap().ends_with("ellipse.json"));
}
