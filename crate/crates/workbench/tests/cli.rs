use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gdrst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdrst")).args(args).output().expect("spawn gdrst")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn data_args(dir: &Path) -> Vec<String> {
    ["nodes", "edges", "pois"]
        .iter()
        .flat_map(|f| [format!("--{f}-file"), dir.join(format!("{f}.csv")).display().to_string()])
        .collect()
}

fn run(sub: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args: Vec<String> = vec![sub.into()];
    args.extend(data_args(dir));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    gdrst(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const Q1: &str = "origin_lat=34.006, origin_lon=-118.0005, bearing=90, half_angle=90, primary=apartment, secondary=hospital;restaurant";

#[test]
fn help_and_usage_exit_codes() {
    assert_eq!(gdrst(&["--help"]).status.code(), Some(0));
    assert_eq!(gdrst(&[]).status.code(), Some(1));
    assert_eq!(gdrst(&["query", "--bogus"]).status.code(), Some(1));
    assert_eq!(gdrst(&["bench", "--nodes-file", "x"]).status.code(), Some(1));
}

#[test]
fn missing_or_malformed_data_exits_2() {
    let tmp = TempDir::new().unwrap();
    let out = run("query", tmp.path(), &["--query", Q1]);
    assert_eq!(out.status.code(), Some(2));

    let narrative = fixture("narrative");
    let out = run("query", &narrative, &["--query", "origin_lat=95, origin_lon=0, primary=apartment"]);
    assert_eq!(out.status.code(), Some(2));

    fs::write(tmp.path().join("nodes.csv"), "0,34.0,-118.0\n1,not-a-number,-118.0\n").unwrap();
    fs::write(tmp.path().join("edges.csv"), "0,1,5\n").unwrap();
    fs::write(tmp.path().join("pois.csv"), "").unwrap();
    let out = run("query", tmp.path(), &["--query", Q1]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn query_prints_the_skyline() {
    let out = run("query", &fixture("narrative"), &["--query", Q1]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("poi_id\ttime:origin(min)\ttime:hospital(min)\ttime:restaurant(min)"));
    assert_eq!(lines.next(), Some("A3\t60\t60\t60"));
    assert_eq!(lines.next(), None);
}

#[test]
fn generator_is_deterministic_per_seed() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let c = TempDir::new().unwrap();
    for (dir, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let out = gdrst(&[
            "gen",
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--nodes",
            "400",
            "--seed",
            seed,
            "--queries",
            "5",
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["nodes.csv", "edges.csv", "pois.csv", "queries.txt"] {
        let fa = fs::read(a.path().join(f)).unwrap();
        assert_eq!(fa, fs::read(b.path().join(f)).unwrap(), "{f}");
        assert_ne!(fa, fs::read(c.path().join(f)).unwrap(), "{f}");
    }
    let edges = fs::read_to_string(a.path().join("edges.csv")).unwrap();
    assert_eq!(edges.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 520);
}

#[test]
fn generator_rejects_bad_flags() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    assert_eq!(gdrst(&["gen", "--out-dir", dir, "--preset", "huge"]).status.code(), Some(1));
    assert_eq!(gdrst(&["gen", "--out-dir", dir, "--bbox", "1,2,3"]).status.code(), Some(1));
    assert_eq!(gdrst(&["gen", "--out-dir", dir, "--edge-factor", "0.5"]).status.code(), Some(1));
}

#[test]
fn bench_emits_one_row_per_run() {
    let tmp = TempDir::new().unwrap();
    let queries = tmp.path().join("q.txt");
    fs::write(&queries, format!("{Q1}\n")).unwrap();
    let csv = tmp.path().join("out.csv");
    let out = run(
        "bench",
        &fixture("narrative"),
        &[
            "--queries-file",
            queries.to_str().unwrap(),
            "--algorithms",
            "gdrst,oracle",
            "--reps",
            "1",
            "--csv",
            csv.to_str().unwrap(),
            "--compare",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("query_id,algorithm,repetition,expansions,cpu_nanos,result_size,cache_hit,revision")
    );
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], "gdrst");
    assert_eq!(rows[1][1], "oracle");
    assert_eq!(rows[0][5], rows[1][5]);
}

#[test]
fn bench_with_cache_serves_repeats() {
    let tmp = TempDir::new().unwrap();
    let queries = tmp.path().join("q.txt");
    fs::write(&queries, format!("{Q1}\n")).unwrap();
    let out = run(
        "bench",
        &fixture("narrative"),
        &["--queries-file", queries.to_str().unwrap(), "--algorithms", "gdrst", "--reps", "2", "--cache-capacity", "8"],
    );
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0][6], "false");
    assert_eq!(rows[1][6], "true");
    assert_eq!(rows[1][3], "0");
}

#[test]
fn cache_bench_purges_on_schedule() {
    let tmp = TempDir::new().unwrap();
    let queries = tmp.path().join("q.txt");
    fs::write(&queries, format!("{Q1}\n{Q1}\n{Q1}\n")).unwrap();
    let schedule = tmp.path().join("s.txt");
    fs::write(&schedule, "# slow down the A3 block\n1 5,6,600 6,7,600\n").unwrap();
    let csv = tmp.path().join("c.csv");
    let out = run(
        "cache-bench",
        &fixture("narrative"),
        &[
            "--queries-file",
            queries.to_str().unwrap(),
            "--schedule",
            schedule.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
            "--verify",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&fs::read_to_string(&csv).unwrap());
    let hits: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(hits, ["false", "true", "false"]);
    assert_eq!(rows[1][7], "1");
    assert_eq!(rows[2][6], "1");
}

#[test]
fn agreeing_compare_writes_no_dump() {
    let tmp = TempDir::new().unwrap();
    let queries = tmp.path().join("q.txt");
    fs::write(&queries, fs::read_to_string(fixture("narrative").join("queries.txt")).unwrap()).unwrap();
    let dump = tmp.path().join("cx");
    let out = run(
        "bench",
        &fixture("narrative"),
        &[
            "--queries-file",
            queries.to_str().unwrap(),
            "--reps",
            "1",
            "--compare",
            "--dump-dir",
            dump.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    assert!(!dump.exists());
}

#[test]
fn parallel_replay_matches_sequential() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let out = gdrst(&["gen", "--out-dir", dir.to_str().unwrap(), "--nodes", "600", "--seed", "9", "--queries", "12"]);
    assert!(out.status.success());
    let out = run(
        "bench",
        dir,
        &["--queries-file", dir.join("queries.txt").to_str().unwrap(), "--reps", "1", "--compare", "--parallel"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_rows(&stdout(&out)).len(), 36);
}
