use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn chazy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chazy"))
        .args(args)
        .env_remove("CHAZY_LOG")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn catalog_lists_every_entry() {
    let out = chazy(&["catalog"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 19);
    assert!(text.lines().next().unwrap().starts_with("T1 "));
    assert!(text.contains("statement,proof"));

    let json = chazy(&["catalog", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 19);
    assert_eq!(rows[13]["id"], "T14");
    assert_eq!(rows[13]["source"], "3/2");
    assert_eq!(rows[13]["target"], "3");
    assert!(rows.iter().all(|r| r["variants"]
        .as_array()
        .unwrap()
        .contains(&"statement".into())));
}

#[test]
fn integrate_then_verify_rational_solution() {
    let d = Dir::new();
    let t = d.arg("t.csv");
    let out = chazy(&[
        "integrate",
        "--k",
        "2",
        "--ic",
        "-2+0i,-8+0i,-8+0i",
        "--x0",
        "0",
        "--x1",
        "0.5",
        "--out",
        &t,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = read(&d.path("t.csv"));
    assert!(text.starts_with("x,P_re,P_im,Q_re,Q_im,R_re,R_im\n"));
    // the closed form is P = -2/(x+1)
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 0.5);
    assert!((last[1] + 2.0 / 1.5).abs() < 1e-9);

    assert_eq!(code(&chazy(&["verify", "--k", "2", "--in", &t])), 0);
    let wrong = chazy(&["verify", "--k", "3", "--in", &t]);
    assert_eq!(code(&wrong), 1);
    assert!(stdout(&wrong).contains("fail"));
}

#[test]
fn verify_writes_json_report() {
    let d = Dir::new();
    let t = d.arg("t.csv");
    chazy(&[
        "integrate",
        "--k",
        "inf",
        "--ic",
        "-6,0,0",
        "--x1",
        "1",
        "--out",
        &t,
    ]);
    let out = chazy(&[
        "verify",
        "--k",
        "inf",
        "--in",
        &t,
        "--out",
        &d.arg("r.json"),
    ]);
    assert_eq!(code(&out), 0);
    let r: serde_json::Value = serde_json::from_str(&read(&d.path("r.json"))).unwrap();
    assert_eq!(r["status"], "pass");
    assert_eq!(r["samples_checked"], 200);
    assert!(r["max_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn audit_t3_has_one_passing_variant() {
    let d = Dir::new();
    let out = chazy(&[
        "audit",
        "--id",
        "T3",
        "--trials",
        "100",
        "--seed",
        "42",
        "--out",
        &d.arg("t3.json"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r: serde_json::Value = serde_json::from_str(&read(&d.path("t3.json"))).unwrap();
    let passing: Vec<&str> = r["variants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["verdict"] == "pass")
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert_eq!(passing, ["proof"]);
    assert_eq!(r["seed"], 42);
    assert_eq!(r["variants"][0]["branches"][0]["trials"], 100);
}

#[test]
fn singular_integration_exits_three() {
    let d = Dir::new();
    let out = chazy(&[
        "integrate",
        "--k",
        "inf",
        "--ic",
        "60,0,0",
        "--x1",
        "0.2",
        "--out",
        &d.arg("s.csv"),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("singular"));
    // the partial trajectory is still written
    let text = read(&d.path("s.csv"));
    let last_x: f64 = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(last_x < 0.1 + 1e-3 && last_x > 0.09);
}

#[test]
fn invalid_input_exits_two_with_one_line() {
    let d = Dir::new();
    let o = d.arg("o.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["integrate", "--k", "6", "--x1", "1", "--out", &o],
        vec![
            "integrate",
            "--k",
            "2",
            "--ic",
            "1+2j,0,0",
            "--x1",
            "1",
            "--out",
            &o,
        ],
        vec!["integrate", "--k", "2", "--x1", "-1", "--out", &o],
        vec![
            "integrate",
            "--k",
            "2",
            "--x1",
            "1",
            "--tol",
            "1",
            "--out",
            &o,
        ],
        vec!["verify", "--k", "2", "--in", "/nonexistent/file.csv"],
        vec!["transform", "--id", "T20", "--out", &o],
        vec!["transform", "--id", "T3", "--variant", "nope", "--out", &o],
        vec!["transform", "--id", "T1", "--branch", "3", "--out", &o],
        vec!["compose", "--ids", "T14,T6", "--out", &o],
        vec![
            "halphen",
            "--angles",
            "1/2,1/3,1/5",
            "--weights",
            "2,2,2",
            "--k",
            "3",
            "--x1",
            "1",
            "--out",
            &o,
        ],
        vec!["audit", "--id", "T3", "--trials", "0"],
        vec!["frobnicate"],
        vec!["catalog", "--n-check", "1"],
    ];
    for args in cases {
        let out = chazy(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        let err = stderr(&out);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn wrong_header_is_rejected() {
    let d = Dir::new();
    std::fs::write(d.path("bad.csv"), "x,P,Q,R\n0,1,2,3\n").unwrap();
    let out = chazy(&["verify", "--k", "2", "--in", &d.arg("bad.csv")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("header"));
}

#[test]
fn seeded_runs_are_reproducible() {
    let d = Dir::new();
    let runs: Vec<Vec<&str>> = vec![
        vec!["integrate", "--k", "9", "--x1", "0.2"],
        vec![
            "transform",
            "--id",
            "T17",
            "--variant",
            "derived",
            "--branch",
            "2",
        ],
        vec!["compose", "--ids", "T14,T11,T6", "--branches", "0,1,0"],
        vec![
            "halphen",
            "--angles",
            "1/3,1/3,2/3",
            "--weights",
            "2,2,2",
            "--k",
            "3",
            "--x1",
            "0.2",
        ],
    ];
    for (i, args) in runs.iter().enumerate() {
        let files: Vec<String> = ["a", "b", "c"]
            .iter()
            .map(|s| d.arg(&format!("{i}{s}.csv")))
            .collect();
        for (f, seed) in files.iter().zip(["11", "11", "12"]) {
            let mut full = args.clone();
            full.extend(["--seed", seed, "--out", f]);
            let out = chazy(&full);
            assert_eq!(code(&out), 0, "{full:?}: {}", stderr(&out));
        }
        let [a, b, c] = [0, 1, 2].map(|j| read(Path::new(&files[j])));
        assert_eq!(a, b, "{args:?}");
        assert_ne!(a, c, "{args:?}");
    }
    let audit = |f: &str| {
        chazy(&[
            "audit", "--id", "T10", "--trials", "20", "--seed", "3", "--out", f,
        ]);
        read(Path::new(f))
    };
    assert_eq!(audit(&d.arg("x.json")), audit(&d.arg("y.json")));
}

#[test]
fn transform_variants_and_file_input() {
    let d = Dir::new();
    let src = d.arg("src.csv");
    let out = chazy(&[
        "integrate",
        "--k",
        "2",
        "--x0",
        "-0.125",
        "--x1",
        "0.125",
        "--seed",
        "5",
        "--samples",
        "301",
        "--out",
        &src,
    ]);
    assert_eq!(code(&out), 0);
    let img = d.arg("img.csv");
    let bad = chazy(&["transform", "--id", "T3", "--in", &src, "--out", &img]);
    assert_eq!(code(&bad), 1, "{}", stdout(&bad));
    let good = chazy(&[
        "transform",
        "--id",
        "T3",
        "--variant",
        "proof",
        "--in",
        &src,
        "--out",
        &img,
    ]);
    assert_eq!(code(&good), 0, "{}", stdout(&good));
    // image is written at the source nodes and solves the target system
    assert_eq!(read(&d.path("img.csv")).lines().count(), 302);
    assert_eq!(code(&chazy(&["verify", "--k", "2", "--in", &img])), 0);
}

#[test]
fn compose_chain_solves_target() {
    let d = Dir::new();
    let c = d.arg("c.csv");
    let out = chazy(&[
        "compose",
        "--ids",
        "T14,T11,T6",
        "--branches",
        "0,1,0",
        "--out",
        &c,
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "pass");
    let table: serde_json::Value = serde_json::from_str(&read(&d.path("c.csv"))).unwrap();
    assert_eq!(table["columns"][1], "P_re");
    assert_eq!(table["rows"].as_array().unwrap().len(), 201);
    // the image is a k = 2/3 trajectory
    assert_eq!(code(&chazy(&["verify", "--k", "2/3", "--in", &c])), 0);
    assert_eq!(code(&chazy(&["verify", "--k", "3/2", "--in", &c])), 1);
}

#[test]
fn halphen_combination_output() {
    let d = Dir::new();
    let w = d.arg("w.csv");
    let t = d.arg("t.csv");
    let out = chazy(&[
        "halphen",
        "--angles",
        "1/3,1/3,2/3",
        "--weights",
        "2,2,2",
        "--k",
        "3",
        "--ic",
        "0.4+0.1i,-0.3i,0.2",
        "--x1",
        "0.25",
        "--out",
        &w,
        "--triple-out",
        &t,
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(read(&d.path("w.csv")).starts_with("x,w1_re,w1_im,w2_re,w2_im,w3_re,w3_im\n"));
    assert!(read(&d.path("t.csv")).starts_with("x,P_re,P_im,Q_re,Q_im,R_re,R_im\n"));
    assert_eq!(code(&chazy(&["verify", "--k", "3", "--in", &t])), 0);
    assert_eq!(code(&chazy(&["verify", "--k", "2", "--in", &t])), 1);

    // equal w's with zero angles follow w' = -w^2
    let plain = chazy(&[
        "halphen",
        "--angles",
        "0,0,0",
        "--ic",
        "1,1,1",
        "--x1",
        "1",
        "--samples",
        "3",
        "--out",
        &w,
    ]);
    assert_eq!(code(&plain), 0);
    let last: Vec<f64> = read(&d.path("w.csv"))
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((last[1] - 0.5).abs() < 1e-9 && (last[5] - 0.5).abs() < 1e-9);
}

#[test]
fn config_file_and_flag_precedence() {
    let d = Dir::new();
    std::fs::write(
        d.path("cfg.toml"),
        "seed = 21\nformat = \"json\"\ntol = 1e-9\n",
    )
    .unwrap();
    let cfg = d.arg("cfg.toml");
    let a = d.arg("a.out");
    let b = d.arg("b.out");
    let c = d.arg("c.out");
    chazy(&[
        "integrate",
        "--k",
        "3",
        "--x1",
        "0.1",
        "--config",
        &cfg,
        "--out",
        &a,
    ]);
    chazy(&[
        "integrate",
        "--k",
        "3",
        "--x1",
        "0.1",
        "--seed",
        "21",
        "--tol",
        "1e-9",
        "--format",
        "json",
        "--out",
        &b,
    ]);
    chazy(&[
        "integrate",
        "--k",
        "3",
        "--x1",
        "0.1",
        "--config",
        &cfg,
        "--format",
        "csv",
        "--out",
        &c,
    ]);
    assert_eq!(read(&d.path("a.out")), read(&d.path("b.out")));
    assert!(read(&d.path("a.out")).trim_start().starts_with('{'));
    assert!(read(&d.path("c.out")).starts_with("x,P_re"));

    std::fs::write(d.path("bad.toml"), "colour = 1\n").unwrap();
    let out = chazy(&["catalog", "--config", &d.arg("bad.toml")]);
    assert_eq!(code(&out), 2);
}

#[test]
fn log_level_from_environment() {
    let d = Dir::new();
    let out = Command::new(env!("CARGO_BIN_EXE_chazy"))
        .args([
            "integrate",
            "--k",
            "2",
            "--x1",
            "0.1",
            "--out",
            &d.arg("t.csv"),
        ])
        .env("CHAZY_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("DEBUG"));
    assert!(stderr(&out).contains("INFO"));
    let quiet = chazy(&[
        "integrate",
        "--k",
        "2",
        "--x1",
        "0.1",
        "--out",
        &d.arg("t.csv"),
    ]);
    assert!(stderr(&quiet).is_empty());
}
