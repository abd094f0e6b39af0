use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qchan(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qchan")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(run: &Run) -> Value {
    assert_eq!(run.code, 0, "stderr: {}", run.stderr);
    serde_json::from_str(&run.stdout).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn real_matrix(v: &Value) -> Vec<Vec<(f64, f64)>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| row.as_array().unwrap().iter().map(complex).collect())
        .collect()
}

fn max_diff(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x.0 - y.0).abs().max((x.1 - y.1).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn classify_examples() {
    let dir = TempDir::new().unwrap();
    let dep = write(&dir, "dep.json", r#"{"kind":"named","name":"depolarizing","p":0.5}"#);
    let r = json(&qchan(&["classify", s(&dep)]));
    assert_eq!(r["antidegradable"]["state"], "yes");
    assert_eq!(r["entanglement_breaking"]["state"], "no");

    let not_cp = write(&dir, "ncp.json", r#"{"kind":"bloch","t":[0,0,0],"lambda":[1,1,-1]}"#);
    let run = qchan(&["classify", s(&not_cp)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("not a channel"));

    let id = write(&dir, "id.json", r#"{"kind":"named","name":"identity"}"#);
    let r = json(&qchan(&["classify", s(&id)]));
    assert_eq!(r["degradable"]["state"], "yes");
    assert_eq!(r["antidegradable"]["state"], "no");
}

#[test]
fn classify_csv_has_header_and_one_row() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", r#"{"kind":"named","name":"identity"}"#);
    let run = qchan(&["classify", s(&id), "--format", "csv"]);
    assert_eq!(run.code, 0);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("anti_state,anti_margin"));
    assert!(lines[1].starts_with("no,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "bad.json", "{not json");
    assert_eq!(qchan(&["classify", s(&garbage)]).code, 1);
    assert_eq!(qchan(&["classify", s(&dir.path().join("missing.json"))]).code, 1);
    let no_p = write(&dir, "nop.json", r#"{"kind":"named","name":"depolarizing"}"#);
    assert_eq!(qchan(&["classify", s(&no_p)]).code, 1);
    let bad_p = write(&dir, "badp.json", r#"{"kind":"named","name":"depolarizing","p":1.5}"#);
    assert_eq!(qchan(&["classify", s(&bad_p)]).code, 1);
    let not_tp = write(
        &dir,
        "ntp.json",
        r#"{"kind":"kraus","operators":[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]}"#,
    );
    assert_eq!(qchan(&["classify", s(&not_tp)]).code, 2);
    let not_tp_choi = write(
        &dir,
        "ntpc.json",
        r#"{"kind":"choi","matrix":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#,
    );
    assert_eq!(qchan(&["convert", s(&not_tp_choi), "--to", "kraus"]).code, 2);
    assert_eq!(qchan(&["classify"]).code, 1);
    assert_eq!(qchan(&["--help"]).code, 0);
    let id = write(&dir, "id.json", r#"{"kind":"named","name":"identity"}"#);
    assert_eq!(qchan(&["classify", s(&id), "--tol", "-1"]).code, 1);
    assert_eq!(qchan(&["convert", s(&id), "--to", "choi", "--format", "csv"]).code, 1);
}

#[test]
fn convert_examples() {
    let dir = TempDir::new().unwrap();
    let dep1 = write(&dir, "dep1.json", r#"{"kind":"named","name":"depolarizing","p":1}"#);
    let r = json(&qchan(&["convert", s(&dep1), "--to", "choi"]));
    assert_eq!(r["kind"], "choi");
    let m = real_matrix(&r["matrix"]);
    let half: Vec<Vec<(f64, f64)>> =
        (0..4).map(|i| (0..4).map(|j| (if i == j { 0.5 } else { 0.0 }, 0.0)).collect()).collect();
    assert!(max_diff(&m, &half) <= 1e-12);

    let id = write(&dir, "id.json", r#"{"kind":"kraus","operators":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#);
    let r = json(&qchan(&["convert", s(&id), "--to", "bloch"]));
    assert_eq!(r["t"], serde_json::json!([0.0, 0.0, 0.0]));
    assert_eq!(r["lambda"], serde_json::json!([1.0, 1.0, 1.0]));

    // depolarizing p = 0.4 written out by hand: (1 - p/2) on |00>,|11> diagonal,
    // p/2 on |01>,|10>, coherence 1 - p between |00> and |11>
    let choi = write(
        &dir,
        "c.json",
        r#"{"kind":"choi","matrix":[[[0.8,0],[0,0],[0,0],[0.6,0]],[[0,0],[0.2,0],[0,0],[0,0]],[[0,0],[0,0],[0.2,0],[0,0]],[[0.6,0],[0,0],[0,0],[0.8,0]]]}"#,
    );
    let r = json(&qchan(&["convert", s(&choi), "--to", "bloch"]));
    for l in r["lambda"].as_array().unwrap() {
        assert!((l.as_f64().unwrap() - 0.6).abs() <= 1e-9);
    }
}

#[test]
fn convert_round_trips() {
    let dir = TempDir::new().unwrap();
    let start = write(&dir, "r2.json", r#"{"kind":"named","name":"rank2","alpha":0.4,"beta":1.2}"#);
    let c0 = json(&qchan(&["convert", s(&start), "--to", "choi"]));
    let k = json(&qchan(&["convert", s(&start), "--to", "kraus"]));
    let k_file = write(&dir, "k.json", &k.to_string());
    let b = json(&qchan(&["convert", s(&k_file), "--to", "bloch"]));
    let b_file = write(&dir, "b.json", &b.to_string());
    let c1 = json(&qchan(&["convert", s(&b_file), "--to", "choi"]));
    let c1_file = write(&dir, "c1.json", &c1.to_string());
    let k2 = json(&qchan(&["convert", s(&c1_file), "--to", "kraus"]));
    let k2_file = write(&dir, "k2.json", &k2.to_string());
    let c2 = json(&qchan(&["convert", s(&k2_file), "--to", "choi"]));
    let (m0, m1, m2) = (real_matrix(&c0["matrix"]), real_matrix(&c1["matrix"]), real_matrix(&c2["matrix"]));
    assert!(max_diff(&m0, &m1) <= 1e-9);
    assert!(max_diff(&m0, &m2) <= 1e-9);

    // a non-diagonal transfer block comes back as T
    let rot = write(&dir, "rot.json", r#"{"kind":"bloch","t":[0,0,0.1],"T":[[0,0.9,0],[-0.9,0,0],[0,0,0.9]]}"#);
    let b = json(&qchan(&["convert", s(&rot), "--to", "bloch"]));
    assert!(b.get("lambda").is_none());
    assert!((b["T"][0][1].as_f64().unwrap() - 0.9).abs() <= 1e-9);
}

#[test]
fn complement_examples() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = write(
        &dir,
        "h.json",
        &format!(r#"{{"kind":"kraus","operators":[[[[{h},0],[{h},0]],[[{h},0],[{},0]]]]}}"#, -h),
    );
    let r = json(&qchan(&["complement", s(&hadamard)]));
    assert_eq!(r["output_dim"], 1);
    let ops = r["operators"].as_array().unwrap();
    assert_eq!(ops.len(), 2);
    for op in ops {
        assert_eq!(op.as_array().unwrap().len(), 1);
        assert_eq!(op[0].as_array().unwrap().len(), 2);
    }

    let sc = write(&dir, "sc.json", r#"{"kind":"named","name":"rank2","alpha":0.7853981633974483,"beta":0.7853981633974483}"#);
    let comp = json(&qchan(&["complement", s(&sc)]));
    let comp_file = write(&dir, "comp.json", &comp.to_string());
    let c_comp = json(&qchan(&["convert", s(&comp_file), "--to", "choi"]));
    let c_orig = json(&qchan(&["convert", s(&sc), "--to", "choi"]));
    assert!(max_diff(&real_matrix(&c_comp["matrix"]), &real_matrix(&c_orig["matrix"])) <= 1e-10);

    let generic = write(&dir, "g.json", r#"{"kind":"named","name":"rank2","alpha":0.3,"beta":2.2}"#);
    let comp = json(&qchan(&["complement", s(&generic)]));
    let ops: Vec<Vec<Vec<(f64, f64)>>> = comp["operators"].as_array().unwrap().iter().map(real_matrix).collect();
    // Σ K*K = I
    for a in 0..2 {
        for b in 0..2 {
            let mut re = 0.0;
            let mut im = 0.0;
            for k in &ops {
                for row in k {
                    let (x, y) = (row[a], row[b]);
                    re += x.0 * y.0 + x.1 * y.1;
                    im += x.0 * y.1 - x.1 * y.0;
                }
            }
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((re - expected).abs() <= 1e-10 && im.abs() <= 1e-10);
        }
    }
}

#[test]
fn oracle_examples() {
    let dir = TempDir::new().unwrap();
    let dep = write(&dir, "dep.json", r#"{"kind":"named","name":"depolarizing","p":0.5}"#);
    let witness = dir.path().join("w.json");
    let r = json(&qchan(&["oracle", s(&dep), "--witness", s(&witness)]));
    assert_eq!(r["oracle"]["status"], "feasible");
    assert_eq!(r["antidegradable"]["state"], "yes");
    assert_eq!(r["consistent"], true);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    let w = real_matrix(&w);
    assert_eq!((w.len(), w[0].len()), (8, 8));

    let id = write(&dir, "id.json", r#"{"kind":"named","name":"identity"}"#);
    let r = json(&qchan(&["oracle", s(&id)]));
    assert_eq!(r["oracle"]["status"], "infeasible");
    assert_eq!(r["antidegradable"]["state"], "no");

    let third = write(&dir, "third.json", &format!(r#"{{"kind":"named","name":"depolarizing","p":{}}}"#, 1.0 / 3.0));
    let r = json(&qchan(&["oracle", s(&third), "--max-iter", "2000"]));
    assert_eq!(r["antidegradable"]["state"], "boundary");
    assert_eq!(r["consistent"], true);

    let run = qchan(&["oracle", s(&dep), "--format", "csv"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("status,residual,iterations,anti_state,anti_margin,consistent\nfeasible,"));
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn rank2_sweep_matches_cosine_product_sign() {
    let run = qchan(&["sweep", "rank2", "--alpha", "0,pi,100", "--beta", "0,pi,100"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(!run.stdout.contains('\r'));
    let (header, rows) = csv_rows(&run.stdout);
    assert_eq!(header, ["alpha", "beta", "anti_margin", "deg_margin", "eb_margin", "anti_state", "deg_state", "eb_state"]);
    assert_eq!(rows.len(), 100 * 100);
    let mut checked = 0;
    for (i, row) in rows.iter().enumerate() {
        let a: f64 = row[0].parse().unwrap();
        let b: f64 = row[1].parse().unwrap();
        assert!((a - (i / 100) as f64 * PI / 99.0).abs() <= 1e-12);
        assert!((b - (i % 100) as f64 * PI / 99.0).abs() <= 1e-12);
        let expected = -(2.0 * a).cos() * (2.0 * b).cos();
        let margin: f64 = row[2].parse().unwrap();
        if expected.abs() > 1e-9 {
            assert_eq!(margin > 0.0, expected > 0.0, "alpha {a} beta {b}");
            checked += 1;
        }
    }
    assert!(checked > 9000);
}

#[test]
fn depolarizing_sweep_flips_at_thresholds() {
    let run = qchan(&["sweep", "depolarizing", "--p", "0,1,1001", "--columns", "anti_state,eb_state"]);
    assert_eq!(run.code, 0);
    let (header, rows) = csv_rows(&run.stdout);
    assert_eq!(header, ["p", "anti_state", "eb_state"]);
    assert_eq!(rows.len(), 1001);
    let first = |col: usize| rows.iter().position(|r| r[col] == "yes").unwrap();
    let p = |i: usize| rows[i][0].parse::<f64>().unwrap();
    assert!((p(first(1)) - 1.0 / 3.0).abs() <= 1e-3 + 1e-12);
    assert!((p(first(2)) - 2.0 / 3.0).abs() <= 1e-3 + 1e-12);
    assert!(rows[..first(1)].iter().all(|r| r[1] != "yes"));
    assert!(rows[first(1)..].iter().all(|r| r[1] != "no"));
}

#[test]
fn two_point_grid_and_unital_ray() {
    let run = qchan(&["sweep", "depolarizing", "--p", "0,1,2"]);
    assert_eq!(run.stdout.lines().count(), 3);
    let run = qchan(&["sweep", "unital", "--direction", "1,-1,-1", "--s", "0,1,3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let (header, rows) = csv_rows(&run.stdout);
    assert_eq!(&header[..4], ["s", "lambda1", "lambda2", "lambda3"]);
    assert_eq!(rows[2][..4], ["1", "1", "-1", "-1"]);
    assert_eq!(qchan(&["sweep", "unital", "--direction", "1,1,1", "--s", "0,1.5,3"]).code, 2);
}

#[test]
fn sweep_rejects_bad_grids_and_paths() {
    assert_eq!(qchan(&["sweep", "depolarizing", "--p", "0,1,1"]).code, 1);
    assert_eq!(qchan(&["sweep", "depolarizing", "--p", "1,0,5"]).code, 1);
    assert_eq!(qchan(&["sweep", "depolarizing", "--p", "0,1,5", "--columns", "capacity"]).code, 1);
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("no/such/dir/out.csv");
    assert_eq!(qchan(&["sweep", "depolarizing", "--p", "0,1,5", "--out", s(&bad)]).code, 1);
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let run = qchan(&["sweep", "rank2", "--alpha", "0,pi,40", "--beta", "-pi/2,pi/2,40", "--out", s(p)]);
        assert_eq!(run.code, 0);
        assert!(run.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let json_a = qchan(&["sweep", "depolarizing", "--p", "0,1,50", "--format", "json"]).stdout;
    let json_b = qchan(&["sweep", "depolarizing", "--p", "0,1,50", "--format", "json"]).stdout;
    assert_eq!(json_a, json_b);
    let v: Value = serde_json::from_str(&json_a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 50);
}

#[test]
fn sweep_states_match_classify() {
    let dir = TempDir::new().unwrap();
    let run = qchan(&["sweep", "rank2", "--alpha", "0,pi/2,6", "--beta", "0,pi,5"]);
    let (_, rows) = csv_rows(&run.stdout);
    for row in rows {
        let spec = format!(r#"{{"kind":"named","name":"rank2","alpha":{},"beta":{}}}"#, row[0], row[1]);
        let f = write(&dir, "p.json", &spec);
        let r = json(&qchan(&["classify", s(&f)]));
        assert_eq!(r["antidegradable"]["state"], row[5].as_str());
        assert_eq!(r["degradable"]["state"], row[6].as_str());
        assert_eq!(r["entanglement_breaking"]["state"], row[7].as_str());
        assert_eq!(r["antidegradable"]["margin"].as_f64().unwrap().to_string(), row[2]);
    }
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qchan"))
        .args(["classify", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"kind":"named","name":"completely_depolarizing"}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["entanglement_breaking"]["state"], "yes");
}
