use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const CONE: &str = r#"
field = "3"
n = 3
r = 2
s = 0
generators = ["1*X1^2 - 1*X0^1*X2^1"]
projection = [[1, 0, 0, 0], [0, 1, 0, 0]]
"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqpoints")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// `(name, measured, verdict)` for every CSV row.
fn measured(csv_text: &str) -> Vec<(String, String, String)> {
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let h = rd.headers().unwrap().clone();
    let col = |n: &str| h.iter().position(|x| x == n).unwrap();
    let (name, m, verdict) = (col("name"), col("measured"), col("verdict"));
    rd.records()
        .map(|r| {
            let r = r.unwrap();
            (r[name].to_string(), r[m].to_string(), r[verdict].to_string())
        })
        .collect()
}

fn value(rows: &[(String, String, String)], name: &str) -> String {
    rows.iter().find(|r| r.0 == name).unwrap_or_else(|| panic!("no row {name}")).1.clone()
}

#[test]
fn count_cone() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "cone.toml", CONE);
    let o = run(&["count", "--spec", &spec]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = measured(&stdout(&o));
    assert_eq!(value(&rows, "total"), "13");
    assert_eq!(value(&rows, "smooth"), "12");
    assert_eq!(value(&rows, "singular"), "1");
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "bad.toml", &CONE.replace("1*X1^2", "1*X1"));
    let o = run(&["count", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = run(&["count", "--catalog", "conic", "--field", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["count", "--catalog", "no-such-thing", "--field", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exits_3() {
    let o = run(&["count", "--catalog", "quadric-surface", "--field", "5", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_catalog_holds() {
    let o = run(&["verify", "--field", "3,2^2,5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = measured(&stdout(&o));
    assert!(rows.iter().any(|r| r.2 == "holds"));
    assert!(!rows.iter().any(|r| r.2 == "violated" && r.0 == "truth-total"));
}

#[test]
fn injected_fault_exits_1() {
    let o = run(&["verify", "--catalog", "quadric-surface", "--field", "3", "--inject-fault", "deligne"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("violated"));
}

#[test]
fn valueset_small_case() {
    let o = run(&["valueset", "--field", "5", "--d", "3", "--s", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("17/5"), "{text}");
    let rows = measured(&text);
    assert!(rows.iter().any(|r| r.0 == "e-bound" && r.2 == "holds"));
}

#[test]
fn bertini_audit_on_cone() {
    let o = run(&["bertini-audit", "--catalog", "quadric-cone-p3", "--field", "5", "--projections", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = measured(&stdout(&o));
    assert_eq!(rows.iter().filter(|r| r.0 == "bertini-audit").count(), 4);
}

#[test]
fn out_dir_and_worker_independence() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--field", "3,5", "--format", "json"];
    let mut reports = Vec::new();
    for w in ["1", "8"] {
        let out = dir.path().join(format!("w{w}"));
        let mut a: Vec<&str> = args.to_vec();
        let out_s = out.to_string_lossy().into_owned();
        a.extend(["--workers", w, "--out", &out_s]);
        let o = run(&a);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("run.json")).unwrap()).unwrap();
        assert_eq!(meta["workers"].to_string(), w);
        reports.push(fs::read(out.join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn catalog_list() {
    let o = run(&["catalog", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["conic", "quadric-cone-p3", "fermat-surface-d3", "two-quadrics-p4"] {
        assert!(text.contains(name), "{name}");
    }
}
