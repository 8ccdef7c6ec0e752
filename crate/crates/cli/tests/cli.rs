use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    report: Value,
    stdout: String,
    stderr: String,
}

fn qsum(args: &[&str]) -> Run {
    qsum_env(args, &[])
}

fn qsum_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qsum"));
    cmd.args(args).env_remove("QSUM_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap(),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stdout,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// The report without its timing field.
fn stable(report: &Value) -> Value {
    let mut r = report.clone();
    r.as_object_mut().unwrap().remove("wall_secs");
    r
}

fn golden(name: &str, args: &[&str]) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    let got = serde_json::to_string_pretty(&stable(&qsum(args).report)).unwrap() + "\n";
    if std::env::var_os("QSUM_BLESS").is_some() {
        fs::write(&path, &got).unwrap();
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(got, want, "golden {name} differs");
}

#[test]
fn certify_nonuniform_is_verified() {
    let r = qsum(&["certify", "nonuniform", "--q", "2", "--n", "2", "--s", "3"]);
    assert_eq!(r.code, 0);
    let res = &r.report["results"];
    assert_eq!(res["formula"], "5");
    assert_eq!(res["construction"], 5);
    assert_eq!(res["search"], 5);
    assert_eq!(r.report["status"], "verified");
}

#[test]
fn enumerate_lists_colex_slice() {
    let r = qsum(&["enumerate", "--n", "2", "--q", "2", "--rank", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["count"], 3);
    assert_eq!(
        r.report["results"]["family"]["members"],
        serde_json::json!([[2, 0], [1, 1], [0, 2]])
    );
}

#[test]
fn lym_on_abc_system() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let r = qsum(&[
        "ivp",
        "abc",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "0",
        "--s",
        "3",
        "--q",
        "2",
        "--out",
        sys.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let r = qsum(&["ivp", "lym", "--in", sys.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["sum"], "1/1");
    assert_eq!(r.report["results"]["bound"], 1);
    assert_eq!(r.report["results"]["holds"], true);
}

#[test]
fn schema_errors_name_the_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"q":2,"n":3,"members":[[2,3,0]]}"#).unwrap();
    let r = qsum(&["verify", "--in", bad.to_str().unwrap(), "--s", "3"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["status"], "error");
    assert_eq!(r.report["results"]["pointer"], "/members/0/1");
    assert!(r.stderr.contains("/members/0/1"));
}

#[test]
fn roundtrip_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    fs::write(&input, r#"{"members":[[0,2],[1,2],[2,1]],"n":2,"q":2}"#).unwrap();
    let r = qsum(&[
        "verify",
        "--in",
        input.to_str().unwrap(),
        "--s",
        "3",
        "--out",
        once.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    qsum(&[
        "verify",
        "--in",
        once.to_str().unwrap(),
        "--s",
        "3",
        "--out",
        twice.to_str().unwrap(),
    ]);
    let a = fs::read(&once).unwrap();
    assert_eq!(a, fs::read(&twice).unwrap());
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["members"], serde_json::json!([[2, 1], [0, 2], [1, 2]]));
}

#[test]
fn violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(&f, r#"{"q":2,"n":2,"members":[[1,0],[0,1]]}"#).unwrap();
    let r = qsum(&["verify", "--in", f.to_str().unwrap(), "--s", "3"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["status"], "violated");
    let sys = dir.path().join("sys.json");
    fs::write(
        &sys,
        r#"{"q":2,"s":5,"kind":"strong","pairs":[{"x":[2,0],"y":[0,2]},{"x":[0,2],"y":[2,0]}]}"#,
    )
    .unwrap();
    let r = qsum(&["ivp", "check", "--in", sys.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["results"]["witness"], serde_json::json!([1, 2]));
}

#[test]
fn usage_errors_exit_two() {
    let r = qsum(&["search", "--n", "2", "--q", "2", "--s", "3", "--bogus"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("Usage"));
    let r = qsum(&["frobnicate"]);
    assert_eq!(r.code, 2);
    let r = qsum(&["certify", "nonuniform", "--q", "2", "--n", "2", "--s", "4"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["status"], "error");
}

#[test]
fn budget_exhaustion_exits_three() {
    let r = qsum(&["search", "--n", "3", "--q", "2", "--s", "3", "--budget-nodes", "1"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.report["status"], "inconclusive");
    assert_eq!(r.report["results"]["search_status"], "budget_exceeded");
}

#[test]
fn below_threshold_is_inconclusive() {
    let r = qsum(&[
        "certify",
        "support_uniform_t",
        "--q",
        "2",
        "--n",
        "4",
        "--s",
        "4",
        "--r",
        "2",
        "--t",
        "2",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["status"], "inconclusive");
    assert_eq!(r.report["results"]["threshold_ok"], false);
}

#[test]
fn reports_repeat_across_runs_and_threads() {
    let cases: [&[&str]; 3] = [
        &[
            "certify",
            "support_uniform",
            "--q",
            "2",
            "--n",
            "8",
            "--s",
            "3",
            "--r",
            "2",
        ],
        &[
            "search", "--n", "2", "--q", "2", "--s", "3", "--t", "2", "--mode", "multisum",
        ],
        &["ivp", "max", "--q", "2", "--k", "1", "--n-cap", "3"],
    ];
    for args in cases {
        let a = stable(&qsum_env(args, &[("QSUM_THREADS", "1")]).report);
        let b = stable(&qsum_env(args, &[("QSUM_THREADS", "1")]).report);
        let c = stable(&qsum_env(args, &[("QSUM_THREADS", "4")]).report);
        assert_eq!(a, b);
        let strip = |mut v: Value| {
            v["command"] = Value::Null;
            if let Some(p) = v["parameters"].as_object_mut() {
                p.remove("threads");
            }
            v
        };
        assert_eq!(strip(a), strip(c), "{args:?}");
    }
}

#[test]
fn trace_emits_json_lines() {
    let r = qsum(&["search", "--n", "2", "--q", "2", "--s", "3", "--trace"]);
    assert_eq!(r.code, 0);
    let events: Vec<Value> = r.stderr.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!events.is_empty());
    for key in ["node", "depth", "bound", "best"] {
        assert!(events[0].get(key).is_some());
    }
}

#[test]
fn unseeded_audits_print_their_seed() {
    let r = qsum(&["ivp", "audit", "--samples", "20", "--n", "3"]);
    assert_eq!(r.code, 0);
    let line = r
        .stderr
        .lines()
        .find(|l| l.starts_with("seed: "))
        .expect("seed printed");
    let seed = line.trim_start_matches("seed: ");
    assert_eq!(r.report["parameters"]["seed"].as_u64().unwrap().to_string(), seed);
    let again = qsum(&["ivp", "audit", "--samples", "20", "--n", "3", "--seed", seed]);
    assert_eq!(stable(&again.report)["results"], stable(&r.report)["results"]);
}

#[test]
fn weighted_exact_and_float() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let sat = dir.path().join("sat.json");
    qsum(&[
        "ivp",
        "abc",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "0",
        "--s",
        "3",
        "--q",
        "2",
        "--out",
        sys.to_str().unwrap(),
    ]);
    qsum(&[
        "ivp",
        "saturate",
        "--in",
        sys.to_str().unwrap(),
        "--out",
        sat.to_str().unwrap(),
    ]);
    let r = qsum(&[
        "ivp",
        "weighted",
        "--in",
        sat.to_str().unwrap(),
        "--p",
        "1/3,1/3,1/3",
        "--exact",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["sum"], "2/9");
    let r = qsum(&["ivp", "weighted", "--in", sat.to_str().unwrap(), "--p", "0.25,0.5,0.25"]);
    assert_eq!(r.report["results"]["sum"], 0.125);
    let r = qsum(&[
        "ivp",
        "disjoint",
        "--in",
        sat.to_str().unwrap(),
        "--p",
        "0.3,0.4,0.3",
        "--trials",
        "1000",
        "--seed",
        "1",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["co_occurrences"], 0);
}

#[test]
fn shadow_and_shift_commands() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(&f, r#"{"q":3,"n":2,"members":[[3,2],[1,3]]}"#).unwrap();
    let r = qsum(&["shift", "--in", f.to_str().unwrap(), "--i", "1", "--j", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.report["results"]["family"]["members"],
        serde_json::json!([[3, 1], [3, 2]])
    );
    fs::write(&f, r#"{"q":2,"n":2,"members":[[2,0],[1,1]]}"#).unwrap();
    let r = qsum(&["shadow", "--in", f.to_str().unwrap()]);
    assert_eq!(
        r.report["results"]["family"]["members"],
        serde_json::json!([[1, 0], [0, 1]])
    );
}

#[test]
fn construct_and_trend() {
    let r = qsum(&[
        "construct",
        "support_uniform",
        "--q",
        "2",
        "--n",
        "2",
        "--s",
        "3",
        "--r",
        "2",
        "--anchor",
        "1,2",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["results"]["size"], 4);
    let r = qsum(&["ivp", "trend", "--q", "1"]);
    assert_eq!(r.report["results"]["monotone"], true);
    assert_eq!(r.report["results"]["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn golden_reports() {
    golden(
        "certify_nonuniform_q2_n2.json",
        &["certify", "nonuniform", "--q", "2", "--n", "2", "--s", "3"],
    );
    golden(
        "enumerate_n2_q2_rank2.json",
        &["enumerate", "--n", "2", "--q", "2", "--rank", "2"],
    );
    golden("fk_3.json", &["ivp", "fk", "--k", "3"]);
}
