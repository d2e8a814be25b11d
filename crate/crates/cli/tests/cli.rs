use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balanced-powersums"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn decide_json_certificate() {
    let out = run(&["decide", "--ell", "8", "--json"]);
    assert_eq!(code(&out), 0);
    let cert: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(cert["schema"], "1");
    assert_eq!(cert["ell"], 8);
    assert_eq!(cert["verdict"], "NO_SOLUTION");
    assert_eq!(cert["mode"], "fast");
    assert!(cert["elapsed_ms"].is_u64());
}

#[test]
fn decide_summary_and_validation() {
    let out = run(&["decide", "--ell", "2", "--summary"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "FAMILY w=2k(k+1)");
    let out = run(&["decide", "--ell", "1", "--summary"]);
    assert_eq!(stdout(&out).trim(), "FAMILY w=k(k+1)");
    assert_eq!(code(&run(&["decide", "--ell", "0"])), 2);
    assert_eq!(code(&run(&["decide", "--ell", "3", "--mode", "slow"])), 2);
    assert_eq!(
        code(&run(&["decide", "--ell", "3", "--json", "--summary"])),
        2
    );
}

#[test]
fn decide_paranoid_records_overshoot() {
    let out = run(&["decide", "--ell", "12", "--mode", "paranoid"]);
    assert_eq!(code(&out), 0);
    let cert: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(cert["mode"], "paranoid");
    assert_eq!(cert["beyond_bound"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_families_csv() {
    let out = run(&["sweep", "--ell-min", "1", "--ell-max", "2", "--no-timing"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "ell,verdict,num_candidate_k,num_integer_candidates,elapsed_ms\n1,FAMILY,0,0,\n2,FAMILY,0,0,\n"
    );
}

#[test]
fn sweep_rejects_reversed_range() {
    assert_eq!(
        code(&run(&["sweep", "--ell-min", "5", "--ell-max", "3"])),
        2
    );
    assert_eq!(
        code(&run(&["sweep", "--ell-min", "0", "--ell-max", "3"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "sweep",
            "--ell-min",
            "3",
            "--ell-max",
            "4",
            "--full"
        ])),
        2
    );
}

#[test]
fn sweep_jsonl_rows_and_file_output() {
    let path = std::env::temp_dir().join(format!("bps-sweep-{}.jsonl", std::process::id()));
    let out = run(&[
        "sweep",
        "--ell-min",
        "3",
        "--ell-max",
        "40",
        "--workers",
        "3",
        "--format",
        "jsonl",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let rows: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 38);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["ell"], 3 + i as u64);
        assert_eq!(row["verdict"], "NO_SOLUTION");
        assert_eq!(row["schema"], "1");
        assert!(row["elapsed_ms"].is_u64());
        assert!(row["num_candidate_k"].is_u64());
    }
    let ell8 = &rows[5];
    assert_eq!(ell8["num_candidate_k"], 1);
}

#[test]
fn sweep_csv_matches_certificates() {
    let csv = stdout(&run(&[
        "sweep",
        "--ell-min",
        "30",
        "--ell-max",
        "60",
        "--no-timing",
    ]));
    let full = stdout(&run(&[
        "sweep",
        "--ell-min",
        "30",
        "--ell-max",
        "60",
        "--format",
        "jsonl",
        "--full",
        "--no-timing",
    ]));
    for (row, cert) in csv.lines().skip(1).zip(full.lines()) {
        let cert: Value = serde_json::from_str(cert).unwrap();
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], cert["ell"].to_string());
        assert_eq!(cols[1], cert["verdict"].as_str().unwrap());
        let cands = cert["candidates"].as_array().unwrap();
        assert_eq!(cols[2], cands.len().to_string());
        let ints: usize = cands
            .iter()
            .map(|c| c["ws"].as_array().unwrap().len())
            .sum();
        assert_eq!(cols[3], ints.to_string());
        assert_eq!(cols[4], "");
    }
}

#[test]
fn verify_examples() {
    let out = run(&["verify", "--n", "21", "--k", "3", "--ell", "2"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "TRUE"));
    let out = run(&["verify", "--n", "1", "--k", "1", "--ell", "3"]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "FALSE"));
    let out = run(&["verify", "--n", "1", "--k", "1", "--ell", "1"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "TRUE"));
    let out = run(&["verify", "--n", "4000000", "--k", "2000", "--ell", "1"]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "TRUE"));
}

#[test]
fn verify_rejects_nonpositive() {
    assert_eq!(
        code(&run(&["verify", "--n", "0", "--k", "1", "--ell", "1"])),
        2
    );
    assert_eq!(
        code(&run(&["verify", "--n", "4", "--k", "-2", "--ell", "1"])),
        2
    );
    assert_eq!(
        code(&run(&["verify", "--n", "4", "--k", "2", "--ell", "0"])),
        2
    );
    assert_eq!(
        code(&run(&["verify", "--n", "x", "--k", "2", "--ell", "1"])),
        2
    );
}

#[test]
fn lemmas_examples() {
    let out = run(&[
        "lemmas",
        "--lemma",
        "macmillan-sondow",
        "--k-max",
        "500",
        "--m-max",
        "39",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("macmillan-sondow PASS checked=9500"));
    let out = run(&["lemmas", "--lemma", "appendix", "--samples", "500"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out).trim(),
        "appendix PASS checked=502 counterexamples=0"
    );
    assert_eq!(code(&run(&["lemmas", "--lemma", "nosuch"])), 2);
}

#[test]
fn lemmas_all_lists_every_check() {
    let out = run(&[
        "lemmas",
        "--k-max",
        "40",
        "--m-max",
        "11",
        "--ell-max",
        "30",
        "--samples",
        "10",
    ]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> = stdout(&out)
        .lines()
        .map(|l| l.split_whitespace().take(2).collect::<Vec<_>>().join(" "))
        .collect();
    assert_eq!(
        names,
        [
            "carlitz-von-staudt PASS",
            "macmillan-sondow PASS",
            "sandwich PASS",
            "appendix PASS",
            "modular-collapse PASS"
        ]
    );
}

#[test]
fn oracle_lists_solutions() {
    let out = run(&[
        "oracle",
        "--ell",
        "1",
        "--n-max",
        "50",
        "--k-max",
        "50",
        "--workers",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1\n4 2\n9 3\n16 4\n25 5\n36 6\n49 7\n");
    let out = run(&["oracle", "--ell", "3", "--n-max", "60", "--k-max", "60"]);
    assert_eq!((code(&out), stdout(&out).as_str()), (0, ""));
    assert_eq!(
        code(&run(&[
            "oracle", "--ell", "0", "--n-max", "5", "--k-max", "5"
        ])),
        2
    );
}

#[test]
fn help_documents_formats() {
    let out = run(&["sweep", "--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("ell,verdict,num_candidate_k,num_integer_candidates,elapsed_ms"));
    assert!(stdout(&run(&["--help"])).contains("schema \"1\""));
}
