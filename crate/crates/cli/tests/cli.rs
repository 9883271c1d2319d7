use std::path::Path;
use std::process::{Command, Output};

fn iomodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iomodel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bench_csv_has_the_documented_header() {
    let o = iomodel(&["bench", "scan", "--n", "100,200", "--M-grid", "256", "--B-grid", "8", "--seeds", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("algo,n,M,B,seed,misses,writebacks,logical_accesses,answer_digest"));
    assert_eq!(lines.count(), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("slope vs n"));
}

#[test]
fn bench_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = iomodel(&[
            "--out", path(p), "bench", "ov_recursive", "--n", "32,64", "--M-grid", "128,256", "--B-grid", "4,8", "--seeds", "3",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
}

#[test]
fn bench_plan_file_runs() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    std::fs::write(&plan, r#"{"algo":"scan","n":[64,128],"M":[256],"B":[8],"seeds":1}"#).unwrap();
    let o = iomodel(&["bench", "--plan", path(&plan)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn generated_instances_solve_with_both_engines() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("v.json");
    assert!(iomodel(&["--out", path(&inst), "gen", "random-vectors", "--n", "16", "--seed", "4"]).status.success());
    let io = iomodel(&["solve", "ov_recursive", "--in", path(&inst)]);
    let oracle = iomodel(&["solve", "ov_recursive", "--in", path(&inst), "--engine", "oracle"]);
    assert!(io.status.success() && oracle.status.success());
    let first = |o: &Output| stdout(o).lines().take(2).collect::<Vec<_>>().join("\n");
    assert_eq!(first(&io), first(&oracle));
    assert!(stdout(&io).contains("misses"));

    let j = iomodel(&["solve", "ov_recursive", "--in", path(&inst), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert!(v["stats"]["misses"].as_u64().unwrap() > 0);
}

#[test]
fn edge_list_graphs_solve() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let o = iomodel(&["--out", path(&g), "gen", "planted-diameter-2", "--n", "40", "--edge-list"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = iomodel(&["--M", "512", "--B", "8", "solve", "diameter_2v3_cache_aware", "--in", path(&g)]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    assert!(stdout(&s).starts_with("answer 2\n"));
}

#[test]
fn verify_passes_a_correct_reduction() {
    let o = iomodel(&["verify", "conv3sum_to_3sum", "--sizes", "6", "--trials", "20"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn verify_control_fails_with_a_counterexample_file() {
    let dir = tempfile::tempdir().unwrap();
    let cex = dir.path().join("cex.json");
    let o = iomodel(&["--out", path(&cex), "verify", "broken_girth_edge_via_stsp", "--sizes", "6", "--trials", "30"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cex).unwrap()).unwrap();
    assert_ne!(v["expected"], v["got"]);
    assert_eq!(v["case"]["instance"]["kind"], "graph");
}

#[test]
fn reduce_reports_calls() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    assert!(iomodel(&["--out", path(&g), "gen", "planted-diameter-2", "--n", "12"]).status.success());
    let o = iomodel(&["reduce", "wiener_subset_sum", "--in", path(&g), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["solver_calls"], 4);
}

#[test]
fn analyze_checks_slopes() {
    let o = iomodel(&["analyze", "T(n)=7T(n/2)+n^2/B; base(sqrtM)=M/B", "--check"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.matches("agree").count(), 3, "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(iomodel(&["bogus"]).status.code(), Some(2));
    assert_eq!(iomodel(&["--help"]).status.code(), Some(0));
    assert_eq!(iomodel(&["solve", "nosuch", "--in", "/nonexistent"]).status.code(), Some(2));
    assert_eq!(iomodel(&["analyze", "T(n)=garbage"]).status.code(), Some(2));
    let o = iomodel(&["bench", "diameter_2v3_cache_aware", "--n", "64", "--M-grid", "32", "--B-grid", "16", "--seeds", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rejected"));
}

#[test]
fn list_covers_everything() {
    let out = stdout(&iomodel(&["list"]));
    for name in iomodel::harness::ALGORITHMS.iter().map(|a| a.name).chain(iomodel::verify::REDUCTIONS.iter().map(|r| r.name)) {
        assert!(out.contains(name), "{name} missing from list");
    }
}
