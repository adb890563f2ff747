use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ustcon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ustcon"))
        .args(args)
        .env_remove("USTCON_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn logspace_solve_on_glitter_star_is_connected() {
    let out = ustcon(&[
        "solve",
        "--gen",
        "glitter:3",
        "--s",
        "0",
        "--t",
        "6",
        "--solver",
        "logspace",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["answer"], "connected");
    assert_eq!(v["manifest"]["seed"], 1);
    assert!(v["manifest"].get("timestamp").is_none());
}

#[test]
fn landmark_solve_on_disconnected_pair_exits_one() {
    let out = ustcon(&[
        "solve",
        "--gen",
        "disconnected-pair:cycle:5",
        "--solver",
        "landmark",
        "--p",
        "4",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["result"]["answer"], "probably_not_connected");
    assert_eq!(v["result"]["steps_executed"], v["result"]["step_budget"]);
}

#[test]
fn solve_defaults_endpoints_from_generator_query() {
    let out = ustcon(&[
        "solve",
        "--gen",
        "disconnected-pair:path:3",
        "--c-scale",
        "0.01",
        "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["manifest"]["graph"], "disconnected-pair:path:3");
}

#[test]
fn identical_runs_print_identical_bytes() {
    let args = [
        "solve",
        "--gen",
        "random:60:150:seed3",
        "--p",
        "8",
        "--c-scale",
        "0.05",
        "--seed",
        "9",
    ];
    let a = ustcon(&args);
    let b = ustcon(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));
}

#[test]
fn seed_comes_from_environment_unless_flagged() {
    let run = |flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ustcon"));
        cmd.args(["solve", "--gen", "cycle:8", "--solver", "logspace"])
            .env("USTCON_SEED", "42");
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        json(&cmd.output().unwrap())["manifest"]["seed"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(run(None), 42);
    assert_eq!(run(Some("7")), 7);
}

#[test]
fn missing_seed_is_generated_and_reported() {
    let out = ustcon(&["solve", "--gen", "cycle:8", "--solver", "logspace"]);
    assert_eq!(code(&out), 0);
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    let seed = json(&out)["manifest"]["seed"].as_u64().unwrap();
    assert!(stderr.contains(&format!("seed: {seed}")), "{stderr}");
}

#[test]
fn solve_reads_edge_list_files_and_writes_manifest() {
    let graph = scratch("path5.txt");
    fs::write(&graph, "5 4\n0 1\n1 2\n2 3\n3 4\n").unwrap();
    let manifest = scratch("path5.manifest.json");
    let out = ustcon(&[
        "solve",
        "--graph",
        graph.to_str().unwrap(),
        "--solver",
        "logspace",
        "--seed",
        "4",
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "solve");
    assert!(m["timestamp"].as_u64().unwrap() > 0);
    assert_eq!(m["flags"], json(&out)["manifest"]["flags"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&ustcon(&["solve", "--seed", "1"])), 2);
    assert_eq!(
        code(&ustcon(&[
            "solve", "--gen", "cycle:5", "--graph", "x", "--seed", "1"
        ])),
        2
    );
    assert_eq!(
        code(&ustcon(&["solve", "--gen", "nonsense:5", "--seed", "1"])),
        2
    );
    assert_eq!(
        code(&ustcon(&[
            "solve", "--gen", "cycle:5", "--t", "9", "--seed", "1"
        ])),
        2
    );
    assert_eq!(
        code(&ustcon(&[
            "solve", "--gen", "cycle:5", "--p", "0", "--seed", "1"
        ])),
        2
    );
    assert_eq!(
        code(&ustcon(&[
            "solve",
            "--graph",
            "/nonexistent/graph.txt",
            "--seed",
            "1"
        ])),
        2
    );
    assert_eq!(code(&ustcon(&["frobnicate"])), 2);
}

#[test]
fn generate_writes_edge_lists() {
    let glitter = stdout(&ustcon(&["generate", "--gen", "glitter:50"]));
    assert_eq!(glitter.lines().next(), Some("101 100"));
    assert_eq!(glitter.lines().count(), 101);

    let complete = stdout(&ustcon(&["generate", "--gen", "complete:5"]));
    assert_eq!(complete.lines().next(), Some("5 10"));

    let a = ustcon(&["generate", "--gen", "random:100:300:seed7"]);
    let b = ustcon(&["generate", "--gen", "random:100:300:seed7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let file = scratch("glitter4.txt");
    let out = ustcon(&[
        "generate",
        "--gen",
        "glitter:4",
        "-o",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(file).unwrap().starts_with("9 8\n"));
}

#[test]
fn infeasible_generators_exit_two() {
    assert_eq!(
        code(&ustcon(&["generate", "--gen", "random:4:10:seed1"])),
        2
    );
    assert_eq!(code(&ustcon(&["generate", "--gen", "cycle:2"])), 2);
}

#[test]
fn bench_emits_cells_and_exponents() {
    let out = ustcon(&[
        "bench",
        "--sizes",
        "5,10,20,40",
        "--trials",
        "20",
        "--seed",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(&headers[0], "row");
    let records: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(records.iter().filter(|r| &r[0] == "cell").count(), 12);
    let exponents: Vec<_> = records.iter().filter(|r| &r[0] == "exponent").collect();
    assert_eq!(exponents.len(), 3);
    for r in exponents {
        let e: f64 = r[8].parse().unwrap();
        assert!(e > 0.5 && e < 3.0, "{r:?}");
    }
    let again = ustcon(&[
        "bench",
        "--sizes",
        "5,10,20,40",
        "--trials",
        "20",
        "--seed",
        "5",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn bench_with_one_trial_omits_standard_error() {
    let out = ustcon(&[
        "bench",
        "--sizes",
        "5,10,20",
        "--kernels",
        "unit",
        "--trials",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    for r in rows
        .records()
        .map(Result::unwrap)
        .filter(|r| &r[0] == "cell")
    {
        assert_eq!(&r[6], "");
    }
}

#[test]
fn bench_accepts_size_templates_and_rejects_bad_specs() {
    let out = ustcon(&[
        "bench",
        "--family",
        "lollipop:{}:{}",
        "--sizes",
        "4,8,16",
        "--kernels",
        "unbiased",
        "--trials",
        "5",
        "--seed",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("lollipop:8:8"));
    assert_eq!(
        code(&ustcon(&["bench", "--family", "nope", "--seed", "1"])),
        2
    );
    assert_eq!(
        code(&ustcon(&["bench", "--kernels", "lazy", "--seed", "1"])),
        2
    );
}

#[test]
fn validate_split_suite_passes() {
    let out = ustcon(&["validate", "--suite", "split", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn validate_all_small_passes() {
    let out = ustcon(&[
        "validate", "--suite", "all", "--budget", "small", "--seed", "11",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn validate_rejects_unknown_suite() {
    assert_eq!(
        code(&ustcon(&[
            "validate",
            "--suite",
            "everything",
            "--seed",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&ustcon(&["validate", "--budget", "huge", "--seed", "1"])),
        2
    );
}

#[test]
fn walk_dumps_visit_and_hit_counters() {
    let visits = scratch("walk_visits.csv");
    let hits = scratch("walk_hits.csv");
    let out = ustcon(&[
        "walk",
        "--gen",
        "path:2",
        "--steps",
        "10",
        "--track",
        "1",
        "--seed",
        "1",
        "--dump-visits",
        visits.to_str().unwrap(),
        "--dump-hits",
        hits.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    // On P_2 the unit walk alternates deterministically.
    assert_eq!(
        fs::read_to_string(visits).unwrap(),
        "node,visits\n0,5\n1,5\n"
    );
    assert_eq!(fs::read_to_string(hits).unwrap(), "node,first_hit\n1,1\n");
    assert_eq!(json(&out)["trace"]["final_node"], 0);
}

#[test]
fn hybrid_walk_needs_two_steps() {
    assert_eq!(
        code(&ustcon(&[
            "walk", "--gen", "cycle:5", "--steps", "1", "--kernel", "hybrid", "--seed", "1"
        ])),
        2
    );
    assert_eq!(
        code(&ustcon(&[
            "walk", "--gen", "cycle:5", "--steps", "8", "--kernel", "hybrid", "--seed", "1"
        ])),
        0
    );
}
