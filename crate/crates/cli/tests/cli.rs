use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn maxwit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxwit"))
        .args(args)
        .output()
        .expect("spawn maxwit")
}

fn maxwit_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxwit"))
        .args(args)
        .env("MAXWIT_THREADS", threads)
        .output()
        .expect("spawn maxwit")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen_pair(dir: &Path, n: &str) -> (String, String) {
    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    assert_eq!(
        code(&maxwit(&["gen", "--n", n, "--seed", "7", "--out", p(&a)])),
        0
    );
    assert_eq!(
        code(&maxwit(&["gen", "--n", n, "--seed", "8", "--out", p(&b)])),
        0
    );
    (p(&a).to_owned(), p(&b).to_owned())
}

#[test]
fn gen_full_density_writes_all_ones() {
    let o = maxwit(&["gen", "--n", "4", "--density", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "4 4\n1111\n1111\n1111\n1111\n"
    );
}

#[test]
fn gen_binary_roundtrips_through_maxwit() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.bin");
    let b = dir.path().join("b.bin");
    assert_eq!(
        code(&maxwit(&[
            "gen",
            "--n",
            "70",
            "--format",
            "binary",
            "--out",
            p(&a)
        ])),
        0
    );
    assert_eq!(
        code(&maxwit(&[
            "gen",
            "--n",
            "70",
            "--seed",
            "1",
            "--format",
            "binary",
            "--out",
            p(&b)
        ])),
        0
    );
    assert_eq!(&fs::read(&a).unwrap()[..4], b"BMAT");
    // the generated pair for seed 0 should be the same instance
    let from_files = maxwit(&[
        "maxwit",
        "--a",
        p(&a),
        "--b",
        p(&b),
        "--algo",
        "oracle",
        "--format",
        "csv",
    ]);
    let generated = maxwit(&["maxwit", "--n", "70", "--algo", "oracle", "--format", "csv"]);
    assert_eq!(code(&from_files), 0);
    assert_eq!(from_files.stdout, generated.stdout);
}

#[test]
fn oracle_csv_has_header_and_all_entries() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen_pair(dir.path(), "12");
    let out = dir.path().join("w.csv");
    assert_eq!(
        code(&maxwit(&[
            "maxwit",
            "--a",
            &a,
            "--b",
            &b,
            "--algo",
            "oracle",
            "--out",
            p(&out)
        ])),
        0
    );
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("i,j,witness"));
    // entries without a witness are omitted; compare with the JSON form
    let json = maxwit(&["maxwit", "--a", &a, "--b", &b, "--algo", "oracle"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    let present = v["entries"].as_array().unwrap().len();
    assert!(present > 100);
    assert_eq!(lines.count(), present);
    let meta: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("w.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["command"], "maxwit");
}

#[test]
fn strips_with_verify_succeeds() {
    let o = maxwit(&[
        "maxwit", "--n", "48", "--algo", "strips", "--ell", "8", "--verify",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["verification"]["disagreements"], 0);
}

#[test]
fn json_result_carries_schema_and_stats() {
    let o = maxwit(&[
        "maxwit", "--n", "16", "--algo", "alg3", "--beta", "2", "--timing",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["n"], 16);
    assert!(v["entries"].as_array().unwrap().len() <= 256);
    let stats = &v["meta"]["stats"];
    for key in [
        "n",
        "algo",
        "beta",
        "entries",
        "total_queries",
        "mean_queries_per_entry",
        "error_rate_vs_oracle",
        "seed",
    ] {
        assert!(!stats[key].is_null(), "missing stats.{key}");
    }
    assert!(v["meta"]["timing"]["solve"].is_number());
}

#[test]
fn verify_flags_corrupted_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = gen_pair(dir.path(), "10");
    let out = dir.path().join("w.json");
    assert_eq!(
        code(&maxwit(&[
            "maxwit",
            "--a",
            &a,
            "--b",
            &b,
            "--algo",
            "oracle",
            "--out",
            p(&out)
        ])),
        0
    );
    assert_eq!(
        code(&maxwit(&[
            "verify",
            "--a",
            &a,
            "--b",
            &b,
            "--result",
            p(&out)
        ])),
        0
    );

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let entries = v["entries"].as_array_mut().unwrap();
    let w = entries[0]["witness"].as_u64().unwrap();
    // a column index that cannot be a witness: either absent, or an
    // index off the end of the matrix
    entries[0]["witness"] = Value::from((w + 1) % 10 + 100);
    fs::write(&out, serde_json::to_string(&v).unwrap()).unwrap();
    let o = maxwit(&["verify", "--a", &a, "--b", &b, "--result", p(&out)]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bad_flags_are_config_errors() {
    assert_eq!(code(&maxwit(&["maxwit", "--density", "1.5"])), 1);
    assert_eq!(code(&maxwit(&["maxwit", "--algo", "quantum"])), 1);
    assert_eq!(code(&maxwit(&["lca", "--k", "3"])), 1);
    assert_eq!(code(&maxwit(&["nonsense"])), 1);
    assert_eq!(code(&maxwit(&["--help"])), 0);
}

#[test]
fn missing_input_is_io_error() {
    let o = maxwit(&[
        "maxwit",
        "--a",
        "/definitely/not/here",
        "--b",
        "/definitely/not/here",
    ]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn graph_commands_verify_against_brute_force() {
    for cmd in ["lca", "triangle", "two-edge"] {
        for algo in ["oracle", "strips", "alg4"] {
            let o = maxwit(&[cmd, "--n", "24", "--algo", algo, "--verify"]);
            assert_eq!(
                code(&o),
                0,
                "{cmd} {algo}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
    }
    assert_eq!(
        code(&maxwit(&[
            "triangle",
            "--n",
            "24",
            "--lightest",
            "--verify"
        ])),
        0
    );
}

#[test]
fn lca_reads_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    fs::write(&g, "3 2\n0 1\n0 2\n").unwrap();
    let o = maxwit(&["lca", "--graph", p(&g), "--algo", "oracle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let e = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["i"] == 1 && e["j"] == 2)
        .unwrap();
    assert_eq!(e["witness"], 0);

    fs::write(&g, "2 2\n0 1\n1 0\n").unwrap();
    // a cyclic input is rejected as unreadable input
    let o = maxwit(&["lca", "--graph", p(&g)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("->"));
}

#[test]
fn kwitness_lists_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    assert_eq!(
        code(&maxwit(&[
            "kwitness",
            "--n",
            "20",
            "--k",
            "3",
            "--verify",
            "--out",
            p(&out)
        ])),
        0
    );
    assert_eq!(
        code(&maxwit(&["verify", "--n", "20", "--result", p(&out)])),
        0
    );
}

#[test]
fn campaign_output_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    let four = dir.path().join("four.json");
    let args = |out: &Path| {
        vec![
            "campaign".to_owned(),
            "--algo".into(),
            "maxwit".into(),
            "--n".into(),
            "12".into(),
            "--trials".into(),
            "6".into(),
            "--seed".into(),
            "3".into(),
            "--out".into(),
            p(out).to_owned(),
        ]
    };
    let a1 = args(&one);
    let a4 = args(&four);
    assert_eq!(
        code(&maxwit_env(
            &a1.iter().map(String::as_str).collect::<Vec<_>>(),
            "1"
        )),
        0
    );
    assert_eq!(
        code(&maxwit_env(
            &a4.iter().map(String::as_str).collect::<Vec<_>>(),
            "4"
        )),
        0
    );
    assert_eq!(fs::read(&one).unwrap(), fs::read(&four).unwrap());
}

#[test]
fn campaign_reads_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"campaign":"durr-hoyer","qs":[16,64],"shapes":["sorted"],"trials":5,"seed":1}"#,
    )
    .unwrap();
    let o = maxwit(&["campaign", "--config", p(&cfg)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["campaign"], "durr-hoyer");
    assert_eq!(
        code(&maxwit(&["campaign", "--config", p(&cfg), "--trials", "3"])),
        1
    );
}
